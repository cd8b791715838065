//! The two-observable instance where a single post-selection removes both
//! PPS uncertainties.

use pps_core::relations::{common_zero_postselection, pps_ur, BoundReport};
use pps_core::stats::std_pps;
use pps_core::{Observable, PureState};
use serde::Serialize;

use crate::error::CliError;
use crate::scenario::{matrix_literal, state, MatrixLit, Obs2Params};

/// Deviations at or below this count as zero.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct Obs2Report {
    pub a: MatrixLit,
    pub b: MatrixLit,
    pub pre: PureState,
    /// `None` when `A|psi>` and `B|psi>` are not parallel.
    pub common_post_selection: Option<PureState>,
    #[serde(rename = "std_pps_A")]
    pub std_pps_a: Option<f64>,
    #[serde(rename = "std_pps_B")]
    pub std_pps_b: Option<f64>,
    pub pps_ur: Option<BoundReport>,
    pub passed: bool,
}

/// `A = (I + sigma_x)/sqrt 2`, `B = (sigma_z + sigma_x)/sqrt 2`.
pub fn observables() -> (Observable, Observable) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = Observable::pauli_x();
    let a = Observable::identity(2)
        .combine(s, &x, s)
        .expect("same dimension");
    let b = Observable::pauli_z()
        .combine(s, &x, s)
        .expect("same dimension");
    (a, b)
}

pub fn run_obs2(p: &Obs2Params) -> Result<Obs2Report, CliError> {
    let (a, b) = observables();
    let pre = match &p.pre {
        Some(lit) => state(lit, "pre")?,
        None => PureState::basis(2, 0),
    };
    if pre.dim() != 2 {
        return Err(CliError::scenario("pre must be a qubit state"));
    }
    let common = common_zero_postselection(&a, &b, &pre)?;
    let (std_a, std_b, rel) = match &common {
        Some(phi) => (
            Some(std_pps(&a, &pre, phi)?),
            Some(std_pps(&b, &pre, phi)?),
            Some(pps_ur(&a, &b, &pre, phi, false)?),
        ),
        None => (None, None, None),
    };
    // with no common post-selection there is nothing to check
    let passed = match (&std_a, &std_b, &rel) {
        (Some(x), Some(y), Some(r)) => {
            *x <= ZERO_TOL
                && *y <= ZERO_TOL
                && r.lhs.abs() <= ZERO_TOL
                && r.rhs_total.abs() <= ZERO_TOL
        }
        _ => true,
    };
    Ok(Obs2Report {
        a: matrix_literal(a.matrix()),
        b: matrix_literal(b.matrix()),
        pre,
        common_post_selection: common,
        std_pps_a: std_a,
        std_pps_b: std_b,
        pps_ur: rel,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn default_instance_is_saturated() {
        let r = run_obs2(&Obs2Params::default()).unwrap();
        assert!(r.passed);
        let phi = r.common_post_selection.unwrap();
        assert!((phi.vector()[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((phi.vector()[1].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(r.std_pps_a.unwrap() <= 1e-12 && r.std_pps_b.unwrap() <= 1e-12);
    }

    #[test]
    fn excited_pre_selection_has_no_common_postselection() {
        // oracle: A|1> = (|0> + |1>)/sqrt2 and B|1> = (|0> - |1>)/sqrt2 are orthogonal
        let p = Obs2Params {
            pre: Some(vec![[0.0, 0.0], [1.0, 0.0]]),
            out: None,
        };
        let r = run_obs2(&p).unwrap();
        assert!(r.common_post_selection.is_none());
        assert!(r.passed);
    }

    #[test]
    fn report_uses_pair_encoding() {
        let r = run_obs2(&Obs2Params::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["common_post_selection"][0][1], 0.0);
        assert!(v["std_pps_A"].as_f64().unwrap() <= 1e-12);
    }
}
