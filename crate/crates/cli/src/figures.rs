//! Curve data for the two figure reproductions.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use pps_core::relations::{otoc_bounds, pps_bounds, rhur, stronger_ur};
use pps_core::{c64, make_qubit_state, pauli, CMatrix, Observable, PureState, UnitaryOp};
use serde::Serialize;

use crate::error::CliError;
use crate::output::csv_string;
use crate::scenario::{Fig1Params, Fig2Params};

pub const FIG1_HEADER: [&str; 6] = [
    "theta",
    "rhur_lhs",
    "rhur_rhs",
    "strong1_rhs",
    "strong3_lhs",
    "strong3_rhs",
];
pub const FIG2_HEADER: [&str; 6] = [
    "theta",
    "abs_F",
    "bong_bound",
    "pps_bound_phi1",
    "pps_bound_phi2",
    "combined_bound",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig1Row {
    pub theta: f64,
    pub rhur_lhs: f64,
    pub rhur_rhs: f64,
    pub strong1_rhs: f64,
    pub strong3_lhs: f64,
    pub strong3_rhs: f64,
}

/// One row of the `sigma_x`, `sigma_y` comparison at pre-selection angle `theta`.
pub fn fig1_row(theta: f64, p: &Fig1Params) -> Result<Fig1Row, CliError> {
    let (a, b) = (Observable::pauli_x(), Observable::pauli_y());
    let psi = make_qubit_state(theta, p.xi);
    let phi = make_qubit_state(p.omega, p.eta);
    let standard = rhur(&a, &b, &psi, false)?;
    let strong1 = stronger_ur(&a, &b, &psi, &phi, false)?;
    let strong3 = stronger_ur(&a, &b, &psi, &phi, true)?;
    Ok(Fig1Row {
        theta,
        rhur_lhs: standard.lhs,
        rhur_rhs: standard.rhs_total,
        strong1_rhs: strong1.rhs_total,
        strong3_lhs: strong3.lhs,
        strong3_rhs: strong3.rhs_total,
    })
}

pub fn run_fig1(p: &Fig1Params) -> Result<Vec<Fig1Row>, CliError> {
    p.grid
        .values()
        .into_iter()
        .map(|t| fig1_row(t, p))
        .collect()
}

pub fn fig1_csv(rows: &[Fig1Row]) -> String {
    let data: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            vec![
                r.theta,
                r.rhur_lhs,
                r.rhur_rhs,
                r.strong1_rhs,
                r.strong3_lhs,
                r.strong3_rhs,
            ]
        })
        .collect();
    csv_string(&FIG1_HEADER, &data)
}

/// Rows at `theta = ±pi/2` must show a trivial standard bound next to a
/// nontrivial post-selected one, and the Schrodinger-strengthened relation
/// must hold everywhere.
pub fn fig1_failures(rows: &[Fig1Row], tolerance: f64) -> Vec<String> {
    let mut out = Vec::new();
    for r in rows {
        if r.strong3_lhs - r.strong3_rhs < -tolerance {
            out.push(format!("strong3 violated at theta={}", r.theta));
        }
        if (r.theta.abs() - FRAC_PI_2).abs() <= 1e-9
            && !(r.rhur_rhs <= 1e-12 && r.strong1_rhs > 1e-6)
        {
            out.push(format!(
                "theta={}: rhur_rhs={} strong1_rhs={}",
                r.theta, r.rhur_rhs, r.strong1_rhs
            ));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig2Row {
    pub theta: f64,
    pub abs_f: f64,
    pub bong_bound: f64,
    pub pps_bound_phi1: f64,
    pub pps_bound_phi2: f64,
    pub combined_bound: f64,
}

/// `V = sigma_z`.
pub fn fig2_probe() -> UnitaryOp {
    UnitaryOp::new(pauli::z()).expect("Pauli matrices are unitary")
}

/// The scrambled operator `(1/sqrt 2) [[1, 1], [-i, i]]`.
pub fn fig2_scrambler() -> UnitaryOp {
    let s = FRAC_1_SQRT_2;
    let m = CMatrix::from_rows(vec![
        vec![c64(s, 0.0), c64(s, 0.0)],
        vec![c64(0.0, -s), c64(0.0, s)],
    ])
    .expect("2x2 literal");
    UnitaryOp::new(m).expect("unitary literal")
}

/// The two fixed post-selections of the OTOC comparison.
pub fn fig2_postselections() -> [PureState; 2] {
    [
        make_qubit_state(PI, FRAC_PI_2),
        make_qubit_state(FRAC_PI_2, FRAC_PI_2),
    ]
}

pub fn run_fig2(p: &Fig2Params) -> Result<Vec<Fig2Row>, CliError> {
    let v = fig2_probe();
    let w = if p.identity_scrambler {
        UnitaryOp::identity(2)
    } else {
        fig2_scrambler()
    };
    let phis = fig2_postselections();
    p.grid
        .values()
        .into_iter()
        .map(|theta| {
            let rho = make_qubit_state(theta, p.pre_phase).projector();
            let rep = otoc_bounds(&v, &w, &rho, &phis)?;
            let pps = pps_bounds(&rep);
            Ok(Fig2Row {
                theta,
                abs_f: rep.rhs_total,
                bong_bound: rep.meta("bong").expect("reported"),
                pps_bound_phi1: pps[0],
                pps_bound_phi2: pps[1],
                combined_bound: rep.lhs,
            })
        })
        .collect()
}

pub fn fig2_csv(rows: &[Fig2Row]) -> String {
    let data: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            vec![
                r.theta,
                r.abs_f,
                r.bong_bound,
                r.pps_bound_phi1,
                r.pps_bound_phi2,
                r.combined_bound,
            ]
        })
        .collect();
    csv_string(&FIG2_HEADER, &data)
}

/// Every bound must dominate `|F|` and the combined bound never exceeds the
/// baseline. The strict improvement is a property of the figure, not of every
/// grid, so it is reported separately by [`fig2_improvements`].
pub fn fig2_failures(rows: &[Fig2Row], tolerance: f64) -> Vec<String> {
    let mut out = Vec::new();
    for r in rows {
        let bounds = [
            r.bong_bound,
            r.pps_bound_phi1,
            r.pps_bound_phi2,
            r.combined_bound,
        ];
        if bounds.iter().any(|&b| r.abs_f > b + tolerance) {
            out.push(format!("|F| above a bound at theta={}", r.theta));
        }
        if r.combined_bound > r.bong_bound + tolerance {
            out.push(format!(
                "combined bound above baseline at theta={}",
                r.theta
            ));
        }
    }
    out
}

/// Number of rows where each post-selected bound beats the baseline by more
/// than `margin`.
pub fn fig2_improvements(rows: &[Fig2Row], margin: f64) -> [usize; 2] {
    let count =
        |f: fn(&Fig2Row) -> f64| rows.iter().filter(|r| f(r) < r.bong_bound - margin).count();
    [count(|r| r.pps_bound_phi1), count(|r| r.pps_bound_phi2)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::Grid;

    #[test]
    fn fig1_reference_rows() {
        let p = Fig1Params::default();
        // psi = |0>: Var X = Var Y = 1 and <Z> = 1, so the standard relation is tight
        let r = fig1_row(0.0, &p).unwrap();
        assert!((r.rhur_lhs - 1.0).abs() < 1e-15);
        assert!((r.rhur_rhs - 1.0).abs() < 1e-15);
        for theta in [-FRAC_PI_2, FRAC_PI_2] {
            let r = fig1_row(theta, &p).unwrap();
            assert!(r.rhur_rhs <= 1e-12);
            assert!(r.strong1_rhs > 1e-6);
        }
    }

    #[test]
    fn fig1_grid_has_no_failures() {
        let rows = run_fig1(&Fig1Params::default()).unwrap();
        assert_eq!(rows.len(), 721);
        assert!(fig1_failures(&rows, 1e-9).is_empty());
        let quarter: Vec<_> = rows
            .iter()
            .filter(|r| (r.theta.abs() - FRAC_PI_2).abs() <= 1e-9)
            .collect();
        assert_eq!(quarter.len(), 2);
    }

    #[test]
    fn fig2_grid_is_sound_and_improves() {
        let rows = run_fig2(&Fig2Params::default()).unwrap();
        assert!(fig2_failures(&rows, 1e-9).is_empty());
        let [a, b] = fig2_improvements(&rows, 1e-3);
        assert!(a > 0 && b > 0);
    }

    #[test]
    fn identity_scrambler_gives_unit_bounds() {
        let p = Fig2Params {
            identity_scrambler: true,
            grid: Grid {
                start: -3.0,
                stop: 3.0,
                points: 13,
            },
            ..Fig2Params::default()
        };
        for r in run_fig2(&p).unwrap() {
            for x in [
                r.abs_f,
                r.bong_bound,
                r.pps_bound_phi1,
                r.pps_bound_phi2,
                r.combined_bound,
            ] {
                assert!((x - 1.0).abs() < 1e-12, "{r:?}");
            }
        }
    }

    #[test]
    fn scrambler_oracle() {
        // W^dagger W = I by hand: columns (1, -i)/sqrt2 and (1, i)/sqrt2 are orthonormal
        let w = fig2_scrambler();
        assert!((&w.matrix().adjoint() * w.matrix()).max_abs_diff(&CMatrix::identity(2)) < 1e-15);
    }
}
