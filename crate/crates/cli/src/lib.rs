//! Scenario runner behind the `pps` binary.
//!
//! [`execute`] turns a validated [`Scenario`] into report text plus a pass
//! flag. The binary maps the flag and any [`CliError`] onto exit codes.

pub mod error;
pub mod eval;
pub mod figures;
pub mod obs2;
pub mod output;
pub mod purity_demo;
pub mod scenario;
pub mod search;
pub mod verify;

use std::path::PathBuf;

pub use error::{CliError, EXIT_INVALID, EXIT_PROPERTY_FAILURE};
pub use scenario::{Kind, Scenario};

/// Tolerance for the figure property checks.
pub const FIGURE_TOLERANCE: f64 = 1e-9;
/// Margin by which a post-selected OTOC bound must beat the baseline somewhere.
pub const FIG2_IMPROVEMENT_MARGIN: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
    /// Human-readable reasons for `success == false`.
    pub failures: Vec<String>,
}

impl Outcome {
    fn json<T: serde::Serialize>(value: &T, success: bool, failure: &str) -> Outcome {
        Outcome {
            text: output::json_string(value),
            success,
            failures: if success {
                Vec::new()
            } else {
                vec![failure.to_string()]
            },
        }
    }
}

pub fn execute(scenario: &Scenario) -> Result<Outcome, CliError> {
    scenario.validate()?;
    Ok(match scenario {
        Scenario::Fig1(p) => {
            let rows = figures::run_fig1(p)?;
            let failures = figures::fig1_failures(&rows, FIGURE_TOLERANCE);
            Outcome {
                text: figures::fig1_csv(&rows),
                success: failures.is_empty(),
                failures,
            }
        }
        Scenario::Fig2(p) => {
            let rows = figures::run_fig2(p)?;
            let mut failures = figures::fig2_failures(&rows, FIGURE_TOLERANCE);
            if !p.identity_scrambler {
                let beats = rows
                    .iter()
                    .filter(|r| r.combined_bound < r.bong_bound - FIG2_IMPROVEMENT_MARGIN)
                    .count();
                if beats == 0 {
                    failures.push("combined bound never improves on the baseline".into());
                }
            }
            Outcome {
                text: figures::fig2_csv(&rows),
                success: failures.is_empty(),
                failures,
            }
        }
        Scenario::Obs2(p) => {
            let r = obs2::run_obs2(p)?;
            Outcome::json(
                &r,
                r.passed,
                "common post-selection does not zero both deviations",
            )
        }
        Scenario::PurityDemo(p) => {
            let r = purity_demo::run_purity_demo(p);
            Outcome::json(&r, r.all_passed, "purity detection properties failed")
        }
        Scenario::Verify(p) => {
            let r = verify::run_verify(p);
            let failures: Vec<String> = r
                .properties
                .iter()
                .filter(|x| !x.passed)
                .map(|x| {
                    format!(
                        "property {} failed ({} of {})",
                        x.name, x.failures, x.checked
                    )
                })
                .collect();
            Outcome {
                text: output::json_string(&r),
                success: r.all_passed,
                failures,
            }
        }
        Scenario::Search(p) => {
            let r = search::run_search(p)?;
            Outcome::json(
                &r,
                r.passed,
                "objective does not re-evaluate at the returned state",
            )
        }
        Scenario::Eval(p) => {
            let r = eval::run_eval(p)?;
            Outcome::json(&r, r.sound, "relation violated beyond tolerance")
        }
    })
}

/// Command-line values that take precedence over the scenario file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tolerance: Option<f64>,
    pub objective: Option<String>,
    pub inject_fault: bool,
}

impl Overrides {
    /// Apply to `scenario`, rejecting options the kind does not take.
    pub fn apply(&self, scenario: &mut Scenario) -> Result<(), CliError> {
        let kind = scenario.kind();
        let unsupported =
            |flag: &str| CliError::scenario(format!("{flag} does not apply to `{kind}`"));
        match scenario {
            Scenario::Fig1(p) => p.out = self.out.clone().or(p.out.take()),
            Scenario::Fig2(p) => p.out = self.out.clone().or(p.out.take()),
            Scenario::Obs2(p) => p.out = self.out.clone().or(p.out.take()),
            Scenario::PurityDemo(p) => {
                p.out = self.out.clone().or(p.out.take());
                p.seed = self.seed.unwrap_or(p.seed);
                p.samples = self.samples.unwrap_or(p.samples);
            }
            Scenario::Verify(p) => {
                p.out = self.out.clone().or(p.out.take());
                p.seed = self.seed.unwrap_or(p.seed);
                p.samples = self.samples.unwrap_or(p.samples);
                p.tolerance = self.tolerance.unwrap_or(p.tolerance);
                p.inject_fault |= self.inject_fault;
            }
            Scenario::Search(p) => {
                p.out = self.out.clone().or(p.out.take());
                p.seed = self.seed.unwrap_or(p.seed);
                if let Some(o) = &self.objective {
                    p.objective = o.clone();
                }
            }
            Scenario::Eval(p) => {
                p.out = self.out.clone().or(p.out.take());
                p.seed = self.seed.unwrap_or(p.seed);
                p.tolerance = self.tolerance.unwrap_or(p.tolerance);
            }
        }
        let takes = |k: &[Kind]| k.contains(&kind);
        if self.seed.is_some()
            && !takes(&[Kind::PurityDemo, Kind::Verify, Kind::Search, Kind::Eval])
        {
            return Err(unsupported("--seed"));
        }
        if self.samples.is_some() && !takes(&[Kind::PurityDemo, Kind::Verify]) {
            return Err(unsupported("--samples"));
        }
        if self.tolerance.is_some() && !takes(&[Kind::Verify, Kind::Eval]) {
            return Err(unsupported("--tolerance"));
        }
        if self.objective.is_some() && kind != Kind::Search {
            return Err(unsupported("--objective"));
        }
        if self.inject_fault && kind != Kind::Verify {
            return Err(unsupported("--inject-fault"));
        }
        scenario.validate()
    }
}
