//! Versioned scenario files.
//!
//! A scenario is a JSON object `{"version": 1, "kind": ..., "parameters": {...}}`.
//! Unknown fields are rejected at every level and every parameter has a
//! default, so `{"version": 1, "kind": "fig1"}` is a complete scenario.
//! Complex numbers are `[re, im]` pairs, vectors are lists of pairs and
//! matrices are row-major lists of rows.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use pps_core::search::ObjectiveKind;
use pps_core::{c64, CMatrix, CVector, DensityMatrix, Observable, PureState, UnitaryOp};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCENARIO_VERSION: u32 = 1;

pub type ComplexLit = [f64; 2];
pub type VectorLit = Vec<ComplexLit>;
pub type MatrixLit = Vec<Vec<ComplexLit>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Fig1,
    Fig2,
    Obs2,
    PurityDemo,
    Verify,
    Search,
    Eval,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Fig1 => "fig1",
            Kind::Fig2 => "fig2",
            Kind::Obs2 => "obs2",
            Kind::PurityDemo => "purity-demo",
            Kind::Verify => "verify",
            Kind::Search => "search",
            Kind::Eval => "eval",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Uniform grid `start, ..., stop` with `points` entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            start: -PI,
            stop: PI,
            points: 721,
        }
    }
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| self.start + step * k as f64)
            .collect()
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.points == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::scenario(
                "grid needs finite bounds and at least one point",
            ));
        }
        Ok(())
    }
}

fn third_pi() -> f64 {
    PI / 3.0
}

fn fifth_pi() -> f64 {
    PI / 5.0
}

fn eleventh_pi() -> f64 {
    PI / 11.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig1Params {
    #[serde(default)]
    pub grid: Grid,
    /// Polar angle of the post-selection.
    #[serde(default = "third_pi")]
    pub omega: f64,
    /// Relative phase of the post-selection.
    #[serde(default = "fifth_pi")]
    pub eta: f64,
    /// Relative phase of the pre-selection.
    #[serde(default)]
    pub xi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig2Params {
    #[serde(default)]
    pub grid: Grid,
    #[serde(default = "eleventh_pi")]
    pub pre_phase: f64,
    /// Replace the scrambling unitary by the identity.
    #[serde(default)]
    pub identity_scrambler: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obs2Params {
    /// Pre-selection; `|0>` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pre: Option<VectorLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_purity_samples() -> usize {
    500
}

fn certify_threshold() -> f64 {
    pps_core::purity::CERTIFY_PURE
}

fn flag_threshold() -> f64 {
    pps_core::purity::FLAG_MIXED
}

fn default_max_purity() -> f64 {
    0.95
}

fn default_min_detection() -> f64 {
    0.99
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PurityDemoParams {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_purity_samples")]
    pub samples: usize,
    #[serde(default = "certify_threshold")]
    pub certify_threshold: f64,
    #[serde(default = "flag_threshold")]
    pub flag_threshold: f64,
    /// Upper bound on `Tr(rho^2)` for the mixed test states.
    #[serde(default = "default_max_purity")]
    pub max_purity: f64,
    #[serde(default = "default_min_detection")]
    pub min_detection_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_verify_samples() -> usize {
    1000
}

fn default_dims() -> Vec<usize> {
    vec![2, 3, 4]
}

fn default_tolerance() -> f64 {
    1e-9
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyParams {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_verify_samples")]
    pub samples: usize,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    /// Slack allowed on inequality gaps.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    /// Swap in a deliberately wrong product relation.
    #[serde(default)]
    pub inject_fault: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_objective() -> String {
    ObjectiveKind::IntelligentResidualMin.name().to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchParams {
    #[serde(default = "default_objective")]
    pub objective: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<VectorLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<MatrixLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<MatrixLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<MatrixLit>,
    #[serde(default)]
    pub restarts: Option<usize>,
    #[serde(default)]
    pub max_iters: Option<usize>,
    #[serde(default)]
    pub step_init: Option<f64>,
    #[serde(default)]
    pub step_min: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_relation() -> String {
    "pps-ur".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalParams {
    #[serde(default = "default_relation")]
    pub relation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<MatrixLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<MatrixLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<VectorLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<VectorLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_perp: Option<VectorLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<MatrixLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<MatrixLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<MatrixLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<MatrixLit>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phis: Vec<VectorLit>,
    /// `+1` or `-1` where a relation has two branches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i64>,
    #[serde(default)]
    pub include_schrodinger: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// Every parameter struct deserializes from `{}`.
fn defaults<T: DeserializeOwned>() -> T {
    serde_json::from_value(serde_json::json!({})).expect("all parameters have defaults")
}

impl Default for Fig1Params {
    fn default() -> Self {
        defaults()
    }
}

impl Default for Fig2Params {
    fn default() -> Self {
        defaults()
    }
}

impl Default for PurityDemoParams {
    fn default() -> Self {
        defaults()
    }
}

impl Default for VerifyParams {
    fn default() -> Self {
        defaults()
    }
}

impl Default for SearchParams {
    fn default() -> Self {
        defaults()
    }
}

impl Default for EvalParams {
    fn default() -> Self {
        defaults()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    Fig1(Fig1Params),
    Fig2(Fig2Params),
    Obs2(Obs2Params),
    PurityDemo(PurityDemoParams),
    Verify(VerifyParams),
    Search(SearchParams),
    Eval(EvalParams),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    version: u32,
    kind: Kind,
    #[serde(default)]
    parameters: serde_json::Value,
}

fn parse_params<T: DeserializeOwned>(kind: Kind, value: serde_json::Value) -> Result<T, CliError> {
    let value = if value.is_null() {
        serde_json::json!({})
    } else {
        value
    };
    serde_json::from_value(value).map_err(|e| CliError::scenario(format!("{kind} parameters: {e}")))
}

impl Scenario {
    pub fn default_for(kind: Kind) -> Scenario {
        match kind {
            Kind::Fig1 => Scenario::Fig1(Fig1Params::default()),
            Kind::Fig2 => Scenario::Fig2(Fig2Params::default()),
            Kind::Obs2 => Scenario::Obs2(Obs2Params::default()),
            Kind::PurityDemo => Scenario::PurityDemo(PurityDemoParams::default()),
            Kind::Verify => Scenario::Verify(VerifyParams::default()),
            Kind::Search => Scenario::Search(SearchParams::default()),
            Kind::Eval => Scenario::Eval(EvalParams::default()),
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Scenario::Fig1(_) => Kind::Fig1,
            Scenario::Fig2(_) => Kind::Fig2,
            Scenario::Obs2(_) => Kind::Obs2,
            Scenario::PurityDemo(_) => Kind::PurityDemo,
            Scenario::Verify(_) => Kind::Verify,
            Scenario::Search(_) => Kind::Search,
            Scenario::Eval(_) => Kind::Eval,
        }
    }

    /// Parse and validate.
    pub fn from_json(text: &str) -> Result<Scenario, CliError> {
        let env: Envelope =
            serde_json::from_str(text).map_err(|e| CliError::scenario(e.to_string()))?;
        if env.version != SCENARIO_VERSION {
            return Err(CliError::scenario(format!(
                "unsupported scenario version {} (expected {SCENARIO_VERSION})",
                env.version
            )));
        }
        let p = env.parameters;
        let scenario = match env.kind {
            Kind::Fig1 => Scenario::Fig1(parse_params(env.kind, p)?),
            Kind::Fig2 => Scenario::Fig2(parse_params(env.kind, p)?),
            Kind::Obs2 => Scenario::Obs2(parse_params(env.kind, p)?),
            Kind::PurityDemo => Scenario::PurityDemo(parse_params(env.kind, p)?),
            Kind::Verify => Scenario::Verify(parse_params(env.kind, p)?),
            Kind::Search => Scenario::Search(parse_params(env.kind, p)?),
            Kind::Eval => Scenario::Eval(parse_params(env.kind, p)?),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_json(&self) -> String {
        let parameters = match self {
            Scenario::Fig1(p) => serde_json::to_value(p),
            Scenario::Fig2(p) => serde_json::to_value(p),
            Scenario::Obs2(p) => serde_json::to_value(p),
            Scenario::PurityDemo(p) => serde_json::to_value(p),
            Scenario::Verify(p) => serde_json::to_value(p),
            Scenario::Search(p) => serde_json::to_value(p),
            Scenario::Eval(p) => serde_json::to_value(p),
        }
        .expect("parameters serialize");
        let env = Envelope {
            version: SCENARIO_VERSION,
            kind: self.kind(),
            parameters,
        };
        serde_json::to_string_pretty(&env).expect("envelope serializes")
    }

    /// Check everything that can be checked without running the scenario.
    pub fn validate(&self) -> Result<(), CliError> {
        match self {
            Scenario::Fig1(p) => p.grid.validate(),
            Scenario::Fig2(p) => p.grid.validate(),
            Scenario::Obs2(p) => p
                .pre
                .as_ref()
                .map_or(Ok(()), |v| state(v, "pre").map(|_| ())),
            Scenario::PurityDemo(p) => {
                if p.samples == 0 {
                    return Err(CliError::scenario("samples must be at least 1"));
                }
                if !(p.certify_threshold > 0.0 && p.flag_threshold > 0.0) {
                    return Err(CliError::scenario("thresholds must be positive"));
                }
                if !(p.max_purity > 0.5 && p.max_purity < 1.0) {
                    return Err(CliError::scenario("max_purity must lie in (0.5, 1)"));
                }
                Ok(())
            }
            Scenario::Verify(p) => {
                if p.samples == 0 {
                    return Err(CliError::scenario("samples must be at least 1"));
                }
                if p.dims.is_empty() || p.dims.iter().any(|&d| !(2..=8).contains(&d)) {
                    return Err(CliError::scenario(
                        "dims must be a nonempty list of values in 2..=8",
                    ));
                }
                if !(p.tolerance >= 0.0) {
                    return Err(CliError::scenario("tolerance must be nonnegative"));
                }
                Ok(())
            }
            Scenario::Search(p) => {
                ObjectiveKind::from_str(&p.objective)?;
                p.config().validate()?;
                Ok(())
            }
            Scenario::Eval(p) => {
                crate::eval::Relation::from_str(&p.relation)?;
                if let Some(s) = p.sign {
                    pps_core::relations::Sign::try_from(s)?;
                }
                Ok(())
            }
        }
    }

    pub fn out(&self) -> Option<&PathBuf> {
        match self {
            Scenario::Fig1(p) => p.out.as_ref(),
            Scenario::Fig2(p) => p.out.as_ref(),
            Scenario::Obs2(p) => p.out.as_ref(),
            Scenario::PurityDemo(p) => p.out.as_ref(),
            Scenario::Verify(p) => p.out.as_ref(),
            Scenario::Search(p) => p.out.as_ref(),
            Scenario::Eval(p) => p.out.as_ref(),
        }
    }
}

impl SearchParams {
    pub fn config(&self) -> pps_core::SearchConfig {
        let d = pps_core::SearchConfig::default();
        pps_core::SearchConfig {
            restarts: self.restarts.unwrap_or(d.restarts),
            max_iters: self.max_iters.unwrap_or(d.max_iters),
            step_init: self.step_init.unwrap_or(d.step_init),
            step_min: self.step_min.unwrap_or(d.step_min),
            rng_seed: self.seed,
        }
    }
}

// Literal conversions. `what` names the field in error messages.

pub fn vector(lit: &VectorLit, what: &str) -> Result<CVector, CliError> {
    CVector::new(lit.iter().map(|&[re, im]| c64(re, im)).collect())
        .map_err(|e| CliError::scenario(format!("{what}: {e}")))
}

pub fn matrix(lit: &MatrixLit, what: &str) -> Result<CMatrix, CliError> {
    let rows = lit
        .iter()
        .map(|row| row.iter().map(|&[re, im]| c64(re, im)).collect())
        .collect();
    CMatrix::from_rows(rows).map_err(|e| CliError::scenario(format!("{what}: {e}")))
}

pub fn state(lit: &VectorLit, what: &str) -> Result<PureState, CliError> {
    PureState::new(vector(lit, what)?).map_err(|e| CliError::scenario(format!("{what}: {e}")))
}

pub fn observable(lit: &MatrixLit, what: &str) -> Result<Observable, CliError> {
    Observable::new(matrix(lit, what)?).map_err(|e| CliError::scenario(format!("{what}: {e}")))
}

pub fn unitary(lit: &MatrixLit, what: &str) -> Result<UnitaryOp, CliError> {
    UnitaryOp::new(matrix(lit, what)?).map_err(|e| CliError::scenario(format!("{what}: {e}")))
}

pub fn density(lit: &MatrixLit, what: &str) -> Result<DensityMatrix, CliError> {
    DensityMatrix::new(matrix(lit, what)?).map_err(|e| CliError::scenario(format!("{what}: {e}")))
}

pub fn matrix_literal(m: &CMatrix) -> MatrixLit {
    m.rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn vector_literal(v: &CVector) -> VectorLit {
    v.entries().iter().map(|z| [z.re, z.im]).collect()
}

pub fn required<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    field
        .as_ref()
        .ok_or_else(|| CliError::scenario(format!("missing parameter `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenarios_parse_with_defaults() {
        let s = Scenario::from_json(r#"{"version": 1, "kind": "fig1"}"#).unwrap();
        let Scenario::Fig1(p) = s else { panic!() };
        assert_eq!(p.grid.points, 721);
        assert_eq!(p.omega, PI / 3.0);
        assert_eq!(p.eta, PI / 5.0);
        assert_eq!(p.xi, 0.0);
    }

    #[test]
    fn every_default_round_trips() {
        for kind in [
            Kind::Fig1,
            Kind::Fig2,
            Kind::Obs2,
            Kind::PurityDemo,
            Kind::Verify,
            Kind::Search,
            Kind::Eval,
        ] {
            let s = Scenario::default_for(kind);
            let again = Scenario::from_json(&s.to_json()).unwrap();
            assert_eq!(s, again);
        }
    }

    #[test]
    fn rejects_bad_envelopes() {
        for text in [
            r#"{"version": 2, "kind": "fig1"}"#,
            r#"{"kind": "fig1"}"#,
            r#"{"version": 1, "kind": "fig3"}"#,
            r#"{"version": 1, "kind": "fig1", "extra": 1}"#,
            r#"{"version": 1, "kind": "fig1", "parameters": {"omga": 1.0}}"#,
            r#"{"version": 1, "kind": "fig1", "parameters": {"grid": {"start": 0, "stop": 1, "points": 0}}}"#,
            r#"{"version": 1, "kind": "search", "parameters": {"objective": "fastest"}}"#,
            r#"{"version": 1, "kind": "eval", "parameters": {"relation": "nope"}}"#,
            r#"{"version": 1, "kind": "eval", "parameters": {"sign": 0}}"#,
            r#"{"version": 1, "kind": "verify", "parameters": {"dims": []}}"#,
            r#"{"version": 1, "kind": "obs2", "parameters": {"pre": [[1, 0], [1, 0]]}}"#,
            "not json",
        ] {
            let err = Scenario::from_json(text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}");
        }
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let g = Grid::default().values();
        assert_eq!(g.len(), 721);
        assert_eq!(g[0], -PI);
        assert!((g[720] - PI).abs() < 1e-15);
        assert_eq!(
            Grid {
                start: 0.3,
                stop: 9.0,
                points: 1
            }
            .values(),
            vec![0.3]
        );
    }

    #[test]
    fn literals_convert() {
        let x = observable(
            &vec![vec![[0.0, 0.0], [1.0, 0.0]], vec![[1.0, 0.0], [0.0, 0.0]]],
            "a",
        )
        .unwrap();
        assert_eq!(x, Observable::pauli_x());
        assert!(observable(
            &vec![vec![[0.0, 0.0], [1.0, 0.0]], vec![[0.0, 0.0], [0.0, 0.0]]],
            "a"
        )
        .is_err());
        assert!(state(&vec![[1.0, 0.0], [1.0, 0.0]], "psi").is_err());
        let m = matrix_literal(Observable::pauli_y().matrix());
        assert_eq!(m[0][1], [0.0, -1.0]);
    }
}
