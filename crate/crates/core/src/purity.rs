//! Purity detection of an unknown pre-selection from the classical-uncertainty
//! gap `C(rho, A, phi)`, which vanishes for every pure state.
//!
//! Each detector first checks the conditions under which a vanishing gap
//! certifies purity. If one fails the verdict is [`Verdict::Indeterminate`]
//! and the failed check is listed in the report.
//!
//! Known blind spot of the bipartite detectors: a product `|a><a| ⊗ sigma_B`
//! with mixed `sigma_B` collapses to the pure `|a><a|` for every post-selection
//! on B and is reported pure.

use serde::Serialize;

use crate::error::Result;
use crate::linalg::CMatrix;
use crate::states::{check_same_dim, collapse_subsystem, DensityMatrix, Observable, PureState};
use crate::stats::classical_uncertainty;
use crate::tol;

/// Threshold under which a gap certifies purity.
pub const CERTIFY_PURE: f64 = 1e-8;
/// Threshold above which a gap flags a mixed state.
pub const FLAG_MIXED: f64 = 1e-6;

/// Minimum `||(A - <A>_phi) phi||` for `phi` not to count as an eigenvector.
const EIGENVECTOR_TOL: f64 = 1e-6;
/// Orthonormality and matrix-element tolerance for the qutrit basis.
const BASIS_TOL: f64 = 1e-9;
/// Bounds on `|<phi_B|phi_B'>|`, which must be neither 0 nor 1.
const DISTINCT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pure,
    Mixed,
    Indeterminate,
}

/// One checked condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Precondition {
    pub name: String,
    pub passed: bool,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PurityVerdict {
    pub verdict: Verdict,
    pub gap_values: Vec<f64>,
    pub threshold: f64,
    pub precondition_report: Vec<Precondition>,
    /// Post-selection (or collapse) probabilities, one per evaluated gap.
    pub success_probabilities: Vec<f64>,
}

impl PurityVerdict {
    fn new(threshold: f64) -> Self {
        PurityVerdict {
            verdict: Verdict::Indeterminate,
            gap_values: Vec::new(),
            threshold,
            precondition_report: Vec::new(),
            success_probabilities: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, value: f64) -> bool {
        self.precondition_report.push(Precondition {
            name: name.into(),
            passed,
            value,
        });
        passed
    }

    fn preconditions_hold(&self) -> bool {
        self.precondition_report.iter().all(|p| p.passed)
    }

    fn decide(mut self) -> Self {
        self.verdict = if !self.preconditions_hold() || self.gap_values.is_empty() {
            Verdict::Indeterminate
        } else if self.gap_values.iter().all(|g| *g <= self.threshold) {
            Verdict::Pure
        } else {
            Verdict::Mixed
        };
        self
    }

    /// Merge the outcome of a sub-detector, tagging its checks with `label`.
    fn absorb(&mut self, label: &str, sub: PurityVerdict) {
        for p in sub.precondition_report {
            self.precondition_report.push(Precondition {
                name: format!("{label}: {}", p.name),
                ..p
            });
        }
        self.gap_values.extend(sub.gap_values);
        self.success_probabilities.extend(sub.success_probabilities);
    }
}

/// `||(A - <phi|A|phi>) phi||`.
fn eigen_residual(a: &Observable, phi: &PureState) -> f64 {
    let a_phi = a.act(phi);
    let mean = phi.vector().inner(&a_phi);
    (&a_phi - &phi.vector().scale(mean)).norm()
}

fn probability(rho: &DensityMatrix, phi: &PureState) -> f64 {
    rho.matrix().expectation(phi.vector()).re
}

/// Qubit criterion: `rho` is pure iff `C(rho, A, phi) = 0`, provided `phi` is
/// not an eigenvector of `A`.
pub fn detect_qubit(
    rho: &DensityMatrix,
    a: &Observable,
    phi: &PureState,
    threshold: f64,
) -> Result<PurityVerdict> {
    check_same_dim(2, rho.dim())?;
    check_same_dim(2, a.dim())?;
    check_same_dim(2, phi.dim())?;
    let mut out = PurityVerdict::new(threshold);
    let ev = eigen_residual(a, phi);
    let p = probability(rho, phi);
    let ok = out.check(
        "post-selection is not an eigenvector of A",
        ev > EIGENVECTOR_TOL,
        ev,
    ) & out.check(
        "post-selection probability is nonzero",
        p > tol::WEAK_VALUE_OVERLAP,
        p,
    );
    if ok {
        out.gap_values.push(classical_uncertainty(rho, a, phi)?);
        out.success_probabilities.push(p);
    }
    Ok(out.decide())
}

/// Qutrit criterion over a basis with `<phi_1|A|phi_2> = 0` and no basis
/// vector an eigenvector of `A`. Gaps are evaluated where the post-selection
/// probability is nonzero.
pub fn detect_qutrit(
    rho: &DensityMatrix,
    a: &Observable,
    basis: &[PureState; 3],
    threshold: f64,
) -> Result<PurityVerdict> {
    check_same_dim(3, rho.dim())?;
    check_same_dim(3, a.dim())?;
    for b in basis {
        check_same_dim(3, b.dim())?;
    }
    let mut out = PurityVerdict::new(threshold);

    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((basis[i].overlap(&basis[j]) - target).norm());
        }
    }
    out.check("basis is orthonormal", worst <= BASIS_TOL, worst);
    let elem = a
        .matrix()
        .sandwich(basis[0].vector(), basis[1].vector())
        .norm();
    out.check("<phi_1|A|phi_2> vanishes", elem <= BASIS_TOL, elem);
    for (k, b) in basis.iter().enumerate() {
        let ev = eigen_residual(a, b);
        out.check(
            format!("phi_{} is not an eigenvector of A", k + 1),
            ev > EIGENVECTOR_TOL,
            ev,
        );
    }
    if !out.preconditions_hold() {
        return Ok(out.decide());
    }

    for b in basis {
        let p = probability(rho, b);
        if p > tol::WEAK_VALUE_OVERLAP {
            out.gap_values.push(classical_uncertainty(rho, a, b)?);
            out.success_probabilities.push(p);
        }
    }
    Ok(out.decide())
}

/// Normalized collapse of `rho` onto `phi_b`, with its probability.
fn collapse(rho: &DensityMatrix, phi_b: &PureState) -> Result<(Option<DensityMatrix>, f64)> {
    let m: CMatrix = collapse_subsystem(rho, phi_b)?;
    let p = m.trace().re;
    if p <= tol::WEAK_VALUE_OVERLAP {
        return Ok((None, p));
    }
    Ok((Some(DensityMatrix::new(m.scale_real(1.0 / p))?), p))
}

/// Shared driver for the bipartite detectors: collapse on two non-orthogonal,
/// distinct post-selections of B and run `sub` on each normalized result.
fn detect_bipartite(
    rho: &DensityMatrix,
    dim_a: usize,
    phi_b: &PureState,
    phi_b_prime: &PureState,
    threshold: f64,
    sub: impl Fn(&DensityMatrix) -> Result<PurityVerdict>,
) -> Result<PurityVerdict> {
    check_same_dim(phi_b.dim(), phi_b_prime.dim())?;
    check_same_dim(dim_a * phi_b.dim(), rho.dim())?;
    let mut out = PurityVerdict::new(threshold);
    let overlap = phi_b.overlap(phi_b_prime).norm();
    out.check(
        "phi_B and phi_B' are not orthogonal",
        overlap > DISTINCT_TOL,
        overlap,
    );
    out.check(
        "phi_B and phi_B' are distinct",
        overlap < 1.0 - DISTINCT_TOL,
        overlap,
    );

    for (label, post) in [("phi_B", phi_b), ("phi_B'", phi_b_prime)] {
        let (collapsed, p) = collapse(rho, post)?;
        if !out.check(
            format!("{label} collapse probability is nonzero"),
            collapsed.is_some(),
            p,
        ) {
            continue;
        }
        let mut v = sub(&collapsed.expect("checked above"))?;
        // report the probability of the collapse itself rather than of the sub-post-selection
        for q in v.success_probabilities.iter_mut() {
            *q *= p;
        }
        out.absorb(label, v);
    }
    Ok(out.decide())
}

/// 2⊗2 criterion: qubit detection with observable `A` and post-selection
/// `phi_a` on the state of A collapsed by `phi_b` and by `phi_b_prime`.
pub fn detect_qubit_qubit(
    rho: &DensityMatrix,
    a: &Observable,
    phi_a: &PureState,
    phi_b: &PureState,
    phi_b_prime: &PureState,
    threshold: f64,
) -> Result<PurityVerdict> {
    check_same_dim(2, phi_b.dim())?;
    detect_bipartite(rho, 2, phi_b, phi_b_prime, threshold, |r| {
        detect_qubit(r, a, phi_a, threshold)
    })
}

/// 3⊗2 criterion: qutrit detection on both collapsed states of the qutrit.
pub fn detect_qubit_qutrit(
    rho: &DensityMatrix,
    a: &Observable,
    basis_a: &[PureState; 3],
    phi_b: &PureState,
    phi_b_prime: &PureState,
    threshold: f64,
) -> Result<PurityVerdict> {
    check_same_dim(2, phi_b.dim())?;
    detect_bipartite(rho, 3, phi_b, phi_b_prime, threshold, |r| {
        detect_qutrit(r, a, basis_a, threshold)
    })
}
