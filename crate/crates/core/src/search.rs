//! Derivative-free search over post-selected states.
//!
//! A post-selection of dimension `d` is parameterized by `d - 1` hyperspherical
//! angles for the moduli and `d - 1` relative phases; the first amplitude is
//! real, which fixes the global phase. Each restart runs a coordinate pattern
//! search: try `±h` on every coordinate, accept the first strict improvement,
//! and halve `h` after a sweep without one.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c64, CVector};
use crate::random::rng;
use crate::relations::{intelligent_residual, pps_ur, PpsOtocKernel, Sign};
use crate::states::{check_same_dim, DensityMatrix, Observable, PureState, UnitaryOp};
use crate::stats::std_pps;

/// Post-selections with `|<phi|psi>|` at or below this are rejected by the
/// objectives that involve a weak value.
pub const ADMISSIBILITY_BARRIER: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub step_min: f64,
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 16,
            max_iters: 400,
            step_init: 0.5,
            step_min: 1e-6,
            rng_seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidArgument(
                "restarts and max_iters must be positive".into(),
            ));
        }
        if !(self.step_min > 0.0 && self.step_min < self.step_init) {
            return Err(Error::InvalidArgument(format!(
                "need 0 < step_min < step_init, got {} and {}",
                self.step_min, self.step_init
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub best_phi: PureState,
    pub best_objective: f64,
    /// Best value reached by each restart.
    pub trace: Vec<f64>,
    /// Best value after every sweep, per restart.
    #[serde(skip)]
    pub histories: Vec<Vec<f64>>,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveKind {
    StrongerUrRhsMax,
    OtocPpsBoundMin,
    IntelligentResidualMin,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 3] = [
        ObjectiveKind::StrongerUrRhsMax,
        ObjectiveKind::OtocPpsBoundMin,
        ObjectiveKind::IntelligentResidualMin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectiveKind::StrongerUrRhsMax => "stronger-ur-rhs-max",
            ObjectiveKind::OtocPpsBoundMin => "otoc-pps-bound-min",
            ObjectiveKind::IntelligentResidualMin => "intelligent-residual-min",
        }
    }

    pub fn maximize(self) -> bool {
        matches!(self, ObjectiveKind::StrongerUrRhsMax)
    }

    fn worst(self) -> f64 {
        if self.maximize() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    }

    fn better(self, candidate: f64, incumbent: f64) -> bool {
        if self.maximize() {
            candidate > incumbent
        } else {
            candidate < incumbent
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ObjectiveKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownObjective(s.to_string()))
    }
}

/// A concrete objective over post-selections.
#[derive(Debug, Clone)]
pub enum Objective {
    /// Maximize the right side of the PPS product relation, `N^2`.
    StrongerUrRhsMax {
        a: Observable,
        b: Observable,
        psi: PureState,
    },
    /// Minimize the post-selected upper bound on `|F|`.
    OtocPpsBoundMin(OtocObjective),
    /// Minimize the intelligent-state residual over both signs, divided by the
    /// PPS deviation of `A` so that shrinking deviations do not count as progress.
    IntelligentResidualMin {
        a: Observable,
        b: Observable,
        psi: PureState,
    },
}

/// OTOC objective with its square-root factors precomputed.
#[derive(Debug, Clone)]
pub struct OtocObjective {
    kernel: PpsOtocKernel,
}

impl Objective {
    pub fn stronger_ur_rhs_max(a: Observable, b: Observable, psi: PureState) -> Result<Self> {
        check_same_dim(a.dim(), b.dim())?;
        check_same_dim(a.dim(), psi.dim())?;
        Ok(Objective::StrongerUrRhsMax { a, b, psi })
    }

    pub fn intelligent_residual_min(a: Observable, b: Observable, psi: PureState) -> Result<Self> {
        check_same_dim(a.dim(), b.dim())?;
        check_same_dim(a.dim(), psi.dim())?;
        Ok(Objective::IntelligentResidualMin { a, b, psi })
    }

    pub fn otoc_pps_bound_min(v: &UnitaryOp, w: &UnitaryOp, rho: &DensityMatrix) -> Result<Self> {
        Ok(Objective::OtocPpsBoundMin(OtocObjective {
            kernel: PpsOtocKernel::new(v, w, rho)?,
        }))
    }

    pub fn kind(&self) -> ObjectiveKind {
        match self {
            Objective::StrongerUrRhsMax { .. } => ObjectiveKind::StrongerUrRhsMax,
            Objective::OtocPpsBoundMin(_) => ObjectiveKind::OtocPpsBoundMin,
            Objective::IntelligentResidualMin { .. } => ObjectiveKind::IntelligentResidualMin,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Objective::StrongerUrRhsMax { psi, .. }
            | Objective::IntelligentResidualMin { psi, .. } => psi.dim(),
            Objective::OtocPpsBoundMin(o) => o.kernel.dim(),
        }
    }

    /// Objective value at `phi`; inadmissible points get the worst value.
    pub fn evaluate(&self, phi: &PureState) -> f64 {
        let worst = self.kind().worst();
        match self {
            Objective::StrongerUrRhsMax { a, b, psi } => {
                if phi.overlap(psi).norm() <= ADMISSIBILITY_BARRIER {
                    return worst;
                }
                pps_ur(a, b, psi, phi, false).map_or(worst, |r| r.rhs_total)
            }
            Objective::OtocPpsBoundMin(o) => o.kernel.bound(phi).unwrap_or(worst),
            Objective::IntelligentResidualMin { a, b, psi } => {
                if phi.overlap(psi).norm() <= ADMISSIBILITY_BARRIER {
                    return worst;
                }
                let Ok(da) = std_pps(a, psi, phi) else {
                    return worst;
                };
                Sign::BOTH
                    .iter()
                    .filter_map(|&s| intelligent_residual(a, b, psi, phi, s).ok())
                    .fold(worst, f64::min)
                    / da
            }
        }
    }
}

/// Map `2(d-1)` coordinates (angles, then phases) to a unit vector.
pub fn state_from_coordinates(coords: &[f64]) -> PureState {
    let n = coords.len() / 2;
    let (angles, phases) = coords.split_at(n);
    let mut amps = Vec::with_capacity(n + 1);
    let mut carry = 1.0;
    for (k, theta) in angles.iter().enumerate() {
        let modulus = carry * theta.cos();
        let phase = if k == 0 { 0.0 } else { phases[k - 1] };
        amps.push(c64(modulus * phase.cos(), modulus * phase.sin()));
        carry *= theta.sin();
    }
    let last = phases.last().copied().unwrap_or(0.0);
    amps.push(c64(carry * last.cos(), carry * last.sin()));
    PureState::normalize(&CVector::new(amps).expect("dim >= 1")).expect("unit by construction")
}

struct Restart {
    best: f64,
    coords: Vec<f64>,
    history: Vec<f64>,
    converged: bool,
}

fn pattern_search(objective: &Objective, start: Vec<f64>, config: &SearchConfig) -> Restart {
    let kind = objective.kind();
    let mut x = start;
    let mut fx = objective.evaluate(&state_from_coordinates(&x));
    let mut h = config.step_init;
    let mut history = Vec::new();
    for _ in 0..config.max_iters {
        if h < config.step_min {
            break;
        }
        let mut improved = false;
        for i in 0..x.len() {
            for delta in [h, -h] {
                let mut y = x.clone();
                y[i] += delta;
                let fy = objective.evaluate(&state_from_coordinates(&y));
                if kind.better(fy, fx) {
                    x = y;
                    fx = fy;
                    improved = true;
                    break;
                }
            }
        }
        history.push(fx);
        if !improved {
            h *= 0.5;
        }
    }
    Restart {
        best: fx,
        coords: x,
        history,
        converged: h < config.step_min,
    }
}

/// Seeded multi-restart pattern search; ties between restarts go to the lower
/// restart index.
pub fn optimize_postselection(
    objective: &Objective,
    dim: usize,
    config: &SearchConfig,
) -> Result<SearchResult> {
    config.validate()?;
    if dim < 2 {
        return Err(Error::DimensionTooSmall { min: 2, found: dim });
    }
    check_same_dim(objective.dim(), dim)?;
    let kind = objective.kind();
    let mut r = rng(config.rng_seed);
    let starts: Vec<Vec<f64>> = (0..config.restarts)
        .map(|_| {
            let mut x: Vec<f64> = (0..dim - 1)
                .map(|_| r.random_range(0.0..std::f64::consts::PI))
                .collect();
            x.extend((0..dim - 1).map(|_| r.random_range(0.0..std::f64::consts::TAU)));
            x
        })
        .collect();

    let runs: Vec<Restart> = starts
        .into_iter()
        .map(|s| pattern_search(objective, s, config))
        .collect();
    let mut best = 0;
    for (k, run) in runs.iter().enumerate().skip(1) {
        if kind.better(run.best, runs[best].best) {
            best = k;
        }
    }
    let best_phi = state_from_coordinates(&runs[best].coords);
    Ok(SearchResult {
        best_objective: objective.evaluate(&best_phi),
        best_phi,
        trace: runs.iter().map(|r| r.best).collect(),
        converged: runs[best].converged,
        histories: runs.into_iter().map(|r| r.history).collect(),
    })
}
