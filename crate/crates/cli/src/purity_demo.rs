//! Detection rates of the purity detectors on random pure and mixed states.

use pps_core::purity::{detect_qubit, detect_qubit_qubit, detect_qubit_qutrit, detect_qutrit};
use pps_core::random::{
    random_hermitian, random_mixed_density, random_qutrit_detection_basis, random_state, rng,
    SeededRng,
};
use pps_core::states::{ensemble_to_density, purity};
use pps_core::{DensityMatrix, Kron, PureState, PurityVerdict, Result as CoreResult, Verdict};
use serde::Serialize;

use crate::scenario::PurityDemoParams;

/// A mixed verdict on a state this close to pure is inconsistent.
const PURITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    Qubit,
    Qutrit,
    QubitQubit,
    QubitQutrit,
}

impl Setting {
    pub const ALL: [Setting; 4] = [
        Setting::Qubit,
        Setting::Qutrit,
        Setting::QubitQubit,
        Setting::QubitQutrit,
    ];

    fn dim(self) -> usize {
        match self {
            Setting::Qubit => 2,
            Setting::Qutrit => 3,
            Setting::QubitQubit => 4,
            Setting::QubitQutrit => 6,
        }
    }

    /// Run the matching detector with freshly drawn observable and post-selections.
    fn detect(
        self,
        rho: &DensityMatrix,
        threshold: f64,
        g: &mut SeededRng,
    ) -> CoreResult<PurityVerdict> {
        match self {
            Setting::Qubit => {
                detect_qubit(rho, &random_hermitian(2, g), &random_state(2, g), threshold)
            }
            Setting::Qutrit => {
                let a = random_hermitian(3, g);
                let basis = random_qutrit_detection_basis(&a, g);
                detect_qutrit(rho, &a, &basis, threshold)
            }
            Setting::QubitQubit => {
                let a = random_hermitian(2, g);
                let (pa, pb, pb2) = (random_state(2, g), random_state(2, g), random_state(2, g));
                detect_qubit_qubit(rho, &a, &pa, &pb, &pb2, threshold)
            }
            Setting::QubitQutrit => {
                let a = random_hermitian(3, g);
                let basis = random_qutrit_detection_basis(&a, g);
                let (pb, pb2) = (random_state(2, g), random_state(2, g));
                detect_qubit_qutrit(rho, &a, &basis, &pb, &pb2, threshold)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerdictCounts {
    pub pure: usize,
    pub mixed: usize,
    pub indeterminate: usize,
    pub errors: usize,
}

impl VerdictCounts {
    fn add(&mut self, v: &CoreResult<PurityVerdict>) {
        match v.as_ref().map(|v| v.verdict) {
            Ok(Verdict::Pure) => self.pure += 1,
            Ok(Verdict::Mixed) => self.mixed += 1,
            Ok(Verdict::Indeterminate) => self.indeterminate += 1,
            Err(_) => self.errors += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SettingReport {
    pub setting: Setting,
    /// Verdicts on random pure states at the certification threshold.
    pub pure_states: VerdictCounts,
    /// Verdicts on random mixed states at the flagging threshold.
    pub mixed_states: VerdictCounts,
    pub detection_rate: f64,
    pub max_mixed_purity: f64,
    /// Mixed verdicts on states with `Tr(rho^2) >= 1 - 1e-9`.
    pub inconsistent: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub instances: usize,
    /// Instances whose first collapse looks pure while the second exposes mixing.
    pub flagged_only_by_second: usize,
    pub max_first_gap: f64,
    pub min_second_gap: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityDemoReport {
    pub seed: u64,
    pub samples: usize,
    pub settings: Vec<SettingReport>,
    pub counterexample: CounterexampleReport,
    pub all_passed: bool,
}

fn run_setting(setting: Setting, p: &PurityDemoParams, seed: u64) -> SettingReport {
    let mut g = rng(seed);
    let dim = setting.dim();
    let mut pure_states = VerdictCounts::default();
    let mut mixed_states = VerdictCounts::default();
    let mut inconsistent = 0;
    let mut max_mixed_purity = 0.0f64;
    for _ in 0..p.samples {
        let rho = random_state(dim, &mut g).projector();
        let v = setting.detect(&rho, p.certify_threshold, &mut g);
        if matches!(&v, Ok(v) if v.verdict == Verdict::Mixed) && purity(&rho) >= 1.0 - PURITY_SLACK
        {
            inconsistent += 1;
        }
        pure_states.add(&v);

        let rho = random_mixed_density(dim, p.max_purity, &mut g);
        let pr = purity(&rho);
        max_mixed_purity = max_mixed_purity.max(pr);
        let v = setting.detect(&rho, p.flag_threshold, &mut g);
        if matches!(&v, Ok(v) if v.verdict == Verdict::Mixed) && pr >= 1.0 - PURITY_SLACK {
            inconsistent += 1;
        }
        mixed_states.add(&v);
    }
    let detection_rate = mixed_states.mixed as f64 / p.samples as f64;
    let passed = pure_states.mixed == 0
        && pure_states.errors == 0
        && mixed_states.errors == 0
        && inconsistent == 0
        && detection_rate >= p.min_detection_rate;
    SettingReport {
        setting,
        pure_states,
        mixed_states,
        detection_rate,
        max_mixed_purity,
        inconsistent,
        passed,
    }
}

/// `rho = (|0><0| ⊗ |b><b| + |1><1| ⊗ |b_perp><b_perp|) / 2` collapses to a
/// pure state on `b`, so only the second post-selection can reveal the mixing.
fn run_counterexample(p: &PurityDemoParams, seed: u64) -> CounterexampleReport {
    let mut g = rng(seed);
    let instances = p.samples.min(100);
    let mut flagged = 0;
    let mut max_first = 0.0f64;
    let mut min_second = f64::INFINITY;
    for _ in 0..instances {
        let b = random_state(2, &mut g);
        let v = b.vector();
        let perp = PureState::from_amplitudes(vec![-v[1].conj(), v[0].conj()]).expect("unit");
        let rho = ensemble_to_density(
            &[0.5, 0.5],
            &[
                PureState::basis(2, 0).kron(&b),
                PureState::basis(2, 1).kron(&perp),
            ],
        )
        .expect("valid ensemble");
        let a = random_hermitian(2, &mut g);
        let phi_a = random_state(2, &mut g);
        let b2 = random_state(2, &mut g);
        let Ok(verdict) = detect_qubit_qubit(&rho, &a, &phi_a, &b, &b2, p.flag_threshold) else {
            continue;
        };
        if verdict.gap_values.len() != 2 {
            continue;
        }
        let (first, second) = (verdict.gap_values[0], verdict.gap_values[1]);
        max_first = max_first.max(first);
        min_second = min_second.min(second);
        if verdict.verdict == Verdict::Mixed
            && first <= p.certify_threshold
            && second > p.flag_threshold
        {
            flagged += 1;
        }
    }
    CounterexampleReport {
        instances,
        flagged_only_by_second: flagged,
        max_first_gap: max_first,
        min_second_gap: min_second,
        passed: flagged == instances,
    }
}

pub fn run_purity_demo(p: &PurityDemoParams) -> PurityDemoReport {
    let settings: Vec<SettingReport> = Setting::ALL
        .iter()
        .enumerate()
        .map(|(k, &s)| run_setting(s, p, p.seed.wrapping_add(k as u64)))
        .collect();
    let counterexample = run_counterexample(p, p.seed.wrapping_add(Setting::ALL.len() as u64));
    let all_passed = settings.iter().all(|s| s.passed) && counterexample.passed;
    PurityDemoReport {
        seed: p.seed,
        samples: p.samples,
        settings,
        counterexample,
        all_passed,
    }
}
