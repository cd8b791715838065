//! Weak values and standard deviations in standard and pre/post-selected
//! systems.
//!
//! Variances are defined through radicands such as `<A^2> - |<phi|A|psi>|^2`.
//! The radicand is evaluated to enforce the clamp contract (values below
//! `-RADICAND_CLAMP` scaled by `max(1, <A^2>)` are an error), but the returned
//! deviation is the norm of the residual vector, e.g. `||A psi - <phi|A|psi> phi||`.
//! Both are equal in exact arithmetic; the residual form stays accurate near
//! saturation where the difference of squares loses all significant digits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{gram_schmidt_complete, sqrt_psd, CMatrix, CVector, C64};
use crate::states::{check_same_dim, DensityMatrix, Observable, PureState};
use crate::tol;

/// `A|psi> = mean |ref> + deviation |residual>` with `residual` orthogonal to `ref`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AVDecomposition {
    pub mean: C64,
    pub deviation: f64,
    pub residual_state: PureState,
}

/// Fisher information of a weak-measurement pointer and the zero-uncertainty
/// post-selection statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetrologyReport {
    pub fisher_phi: f64,
    pub fisher_max: f64,
    /// `|<phi_z|psi>|^2`, absent when `A|psi>` vanishes.
    pub p_z: Option<f64>,
    /// Weak value at `phi_z`, absent when `A|psi>` vanishes or `phi_z` is
    /// orthogonal to `psi`.
    pub weak_value_at_phi_z: Option<C64>,
    /// `fisher_phi - 4 sigma^2 (<A^2> - std_pps^2)`.
    pub fisher_identity_residual: f64,
    /// `<dA>^2 - (1 - p_z) p_z |A_w(phi_z)|^2`, when both sides are defined.
    pub p_z_identity_residual: Option<f64>,
}

fn check_pair(a: &Observable, psi: &PureState) -> Result<()> {
    check_same_dim(a.dim(), psi.dim())
}

/// Apply the clamp contract to `radicand`, then return `value`.
fn guarded(radicand: f64, scale: f64, value: f64) -> Result<f64> {
    if radicand < -tol::RADICAND_CLAMP * scale.max(1.0) {
        return Err(Error::NumericalInconsistency { radicand });
    }
    Ok(value)
}

/// `<phi|A|psi> / <phi|psi>`.
pub fn weak_value(a: &Observable, pre: &PureState, post: &PureState) -> Result<C64> {
    check_pair(a, pre)?;
    check_pair(a, post)?;
    let overlap = post.overlap(pre);
    if overlap.norm() <= tol::WEAK_VALUE_OVERLAP {
        return Err(Error::WeakValueUndefined {
            overlap: overlap.norm(),
        });
    }
    Ok(post.vector().inner(&a.act(pre)) / overlap)
}

fn postselection_probability(rho: &DensityMatrix, phi: &PureState) -> Result<f64> {
    check_same_dim(rho.dim(), phi.dim())?;
    let p = rho.matrix().expectation(phi.vector()).re;
    if p <= tol::WEAK_VALUE_OVERLAP {
        return Err(Error::VanishingProbability { probability: p });
    }
    Ok(p)
}

/// `<phi|A rho|phi> / <phi|rho|phi>`.
pub fn weak_value_mixed(a: &Observable, rho: &DensityMatrix, post: &PureState) -> Result<C64> {
    check_same_dim(a.dim(), rho.dim())?;
    let p = postselection_probability(rho, post)?;
    let a_rho = a.matrix() * rho.matrix();
    Ok(a_rho.expectation(post.vector()) / p)
}

/// `sqrt(<A^2> - <A>^2)`.
pub fn std_standard(a: &Observable, psi: &PureState) -> Result<f64> {
    Ok(av_parts(a, psi)?.1)
}

fn av_parts(a: &Observable, psi: &PureState) -> Result<(C64, f64, CVector)> {
    check_pair(a, psi)?;
    let a_psi = a.act(psi);
    let mean = psi.vector().inner(&a_psi);
    let second = a_psi.norm_sqr();
    let residual = &a_psi - &psi.vector().scale(mean);
    let deviation = guarded(second - mean.norm_sqr(), second, residual.norm())?;
    Ok((mean, deviation, residual))
}

fn pps_parts(a: &Observable, pre: &PureState, post: &PureState) -> Result<(C64, f64, CVector)> {
    check_pair(a, pre)?;
    check_pair(a, post)?;
    let a_psi = a.act(pre);
    let mean = post.vector().inner(&a_psi);
    let second = a_psi.norm_sqr();
    let residual = &a_psi - &post.vector().scale(mean);
    let deviation = guarded(second - mean.norm_sqr(), second, residual.norm())?;
    Ok((mean, deviation, residual))
}

fn decomposition(mean: C64, deviation: f64, residual: CVector) -> Result<AVDecomposition> {
    if deviation <= tol::ZERO_VECTOR {
        return Err(Error::ResidualUndefined { deviation });
    }
    Ok(AVDecomposition {
        mean,
        deviation,
        residual_state: PureState::normalize(&residual)?,
    })
}

/// Split `A|psi>` along `psi` and its orthogonal complement.
pub fn av_decompose(a: &Observable, psi: &PureState) -> Result<AVDecomposition> {
    let (mean, deviation, residual) = av_parts(a, psi)?;
    decomposition(mean, deviation, residual)
}

/// `sqrt(<psi|A^2|psi> - |<phi|A|psi>|^2)`. Defined for any pair, including
/// orthogonal ones.
pub fn std_pps(a: &Observable, pre: &PureState, post: &PureState) -> Result<f64> {
    Ok(pps_parts(a, pre, post)?.1)
}

/// Split `A|psi>` along the post-selection `phi` and its complement.
pub fn pps_decompose(a: &Observable, pre: &PureState, post: &PureState) -> Result<AVDecomposition> {
    let (mean, deviation, residual) = pps_parts(a, pre, post)?;
    decomposition(mean, deviation, residual)
}

/// PPS deviation as the norm of the amplitudes of `A|psi>` on a basis of the
/// complement of `phi`, completed from `rng_seed`.
pub fn std_pps_infotheoretic(
    a: &Observable,
    pre: &PureState,
    post: &PureState,
    rng_seed: u64,
) -> Result<f64> {
    check_pair(a, pre)?;
    check_pair(a, post)?;
    let basis = gram_schmidt_complete(&[post.vector().clone()], post.dim(), rng_seed)?;
    let a_psi = a.act(pre);
    let total: f64 = basis[1..].iter().map(|b| b.inner(&a_psi).norm_sqr()).sum();
    Ok(total.sqrt())
}

/// `A|psi> / ||A|psi>||`, the post-selection with zero PPS deviation.
pub fn zero_uncertainty_postselection(a: &Observable, psi: &PureState) -> Result<PureState> {
    check_pair(a, psi)?;
    let a_psi = a.act(psi);
    if a_psi.norm() <= tol::ZERO_VECTOR {
        return Err(Error::NoZeroUncertaintyPostselection);
    }
    Ok(PureState::normalize(&a_psi)?.with_phase_convention())
}

/// A post-selection orthogonal to `A|psi>` and the maximal PPS deviation
/// `sqrt(<psi|A^2|psi>)` it attains.
pub fn max_uncertainty_postselection(
    a: &Observable,
    psi: &PureState,
    rng_seed: u64,
) -> Result<(PureState, f64)> {
    check_pair(a, psi)?;
    if psi.dim() < 2 {
        return Err(Error::DimensionTooSmall {
            min: 2,
            found: psi.dim(),
        });
    }
    let a_psi = a.act(psi);
    let norm = a_psi.norm();
    let phi = if norm <= tol::ZERO_VECTOR {
        gram_schmidt_complete(&[], psi.dim(), rng_seed)?.swap_remove(0)
    } else {
        gram_schmidt_complete(&[a_psi], psi.dim(), rng_seed)?.swap_remove(1)
    };
    Ok((PureState::new(phi)?.with_phase_convention(), norm))
}

/// Fisher information at `phi` and at the optimal `phi_z`.
pub fn metrology_report(
    a: &Observable,
    psi: &PureState,
    phi: &PureState,
    sigma_pointer: f64,
) -> Result<MetrologyReport> {
    if !(sigma_pointer > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "pointer width must be positive, got {sigma_pointer}"
        )));
    }
    check_pair(a, psi)?;
    check_pair(a, phi)?;
    let scale = 4.0 * sigma_pointer * sigma_pointer;
    let a_psi = a.act(psi);
    let second = a_psi.norm_sqr();
    let amplitude = phi.vector().inner(&a_psi);
    let fisher_phi = scale * amplitude.norm_sqr();
    let fisher_max = scale * second;
    let dev = std_pps(a, psi, phi)?;
    let fisher_identity_residual = fisher_phi - scale * (second - dev * dev);

    let (p_z, weak_value_at_phi_z, p_z_identity_residual) =
        match zero_uncertainty_postselection(a, psi) {
            Ok(phi_z) => {
                let p_z = phi_z.overlap(psi).norm_sqr();
                let wv = weak_value(a, psi, &phi_z).ok();
                let residual = wv.map(|w| {
                    let var = std_standard(a, psi).map(|s| s * s).unwrap_or(f64::NAN);
                    var - (1.0 - p_z) * p_z * w.norm_sqr()
                });
                (Some(p_z), wv, residual)
            }
            Err(Error::NoZeroUncertaintyPostselection) => (None, None, None),
            Err(e) => return Err(e),
        };

    Ok(MetrologyReport {
        fisher_phi,
        fisher_max,
        p_z,
        weak_value_at_phi_z,
        fisher_identity_residual,
        p_z_identity_residual,
    })
}

/// `(I - |phi><phi|) A sqrt(rho)`; its squared Frobenius norm is the mixed
/// PPS variance.
fn projected_root(a: &Observable, rho: &DensityMatrix, phi: &PureState) -> Result<CMatrix> {
    let root = sqrt_psd(rho.matrix())?;
    let proj = &CMatrix::identity(phi.dim()) - &phi.vector().outer(phi.vector());
    Ok(&(&proj * a.matrix()) * &root)
}

/// `Tr(A^2 rho) - <phi|A rho A|phi>` as `(radicand, variance)`.
fn mixed_variance(a: &Observable, rho: &DensityMatrix, phi: &PureState) -> Result<(f64, f64)> {
    check_same_dim(a.dim(), rho.dim())?;
    check_same_dim(a.dim(), phi.dim())?;
    let a2 = a.matrix() * a.matrix();
    let second = rho.expect(&a2).re;
    let ara = &(a.matrix() * rho.matrix()) * a.matrix();
    let radicand = second - ara.expectation(phi.vector()).re;
    let variance = projected_root(a, rho, phi)?.frobenius_norm().powi(2);
    guarded(radicand, second, variance).map(|v| (radicand, v))
}

/// `sqrt(Tr(A^2 rho) - <phi|A rho A|phi>)`.
pub fn std_pps_mixed(a: &Observable, rho: &DensityMatrix, phi: &PureState) -> Result<f64> {
    Ok(mixed_variance(a, rho, phi)?.1.sqrt())
}

/// `<phi|A rho A|phi> - |<phi|A rho|phi>|^2 / <phi|rho|phi>`, the gap between the
/// weak-value based and the quantum mixed variances.
pub fn classical_uncertainty(rho: &DensityMatrix, a: &Observable, phi: &PureState) -> Result<f64> {
    check_same_dim(a.dim(), rho.dim())?;
    let p = postselection_probability(rho, phi)?;
    let ara = &(a.matrix() * rho.matrix()) * a.matrix();
    let cross = (a.matrix() * rho.matrix()).expectation(phi.vector());
    let gap = ara.expectation(phi.vector()).re - cross.norm_sqr() / p;
    let scale = ara.expectation(phi.vector()).re;
    guarded(gap, scale, gap.max(0.0))
}

/// `sqrt(Tr(A^2 rho) - |A_w|^2 <phi|rho|phi>)`, computed as
/// `sqrt(std_pps_mixed^2 + classical_uncertainty)`.
pub fn std_pps_mixed_weak(a: &Observable, rho: &DensityMatrix, phi: &PureState) -> Result<f64> {
    let c = classical_uncertainty(rho, a, phi)?;
    let (_, var) = mixed_variance(a, rho, phi)?;
    Ok((var + c).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{ensemble_to_density, make_qubit_state, Kron};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

    fn zero() -> PureState {
        PureState::basis(2, 0)
    }

    fn one() -> PureState {
        PureState::basis(2, 1)
    }

    fn plus() -> PureState {
        make_qubit_state(FRAC_PI_2, 0.0)
    }

    fn minus() -> PureState {
        PureState::new(CVector::from_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).unwrap()).unwrap()
    }

    fn obs2_a() -> Observable {
        Observable::identity(2)
            .combine(FRAC_1_SQRT_2, &Observable::pauli_x(), FRAC_1_SQRT_2)
            .unwrap()
    }

    #[test]
    fn weak_value_examples() {
        let w = weak_value(&Observable::pauli_z(), &zero(), &zero()).unwrap();
        assert_abs_diff_eq!(w.re, 1.0, epsilon = 1e-15);
        let w = weak_value(&Observable::pauli_x(), &zero(), &plus()).unwrap();
        assert_abs_diff_eq!(w.re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(w.im, 0.0, epsilon = 1e-14);

        let alpha = FRAC_PI_4 - 0.05;
        let post =
            PureState::new(CVector::from_real(&[alpha.cos(), -alpha.sin()]).unwrap()).unwrap();
        let w = weak_value(&Observable::pauli_z(), &plus(), &post).unwrap();
        // oracle: (cos a + sin a) / (cos a - sin a) = tan(pi/4 + a)
        let oracle = (FRAC_PI_4 + alpha).tan();
        assert_abs_diff_eq!(w.re, oracle, epsilon = 1e-10);
        assert_abs_diff_eq!(w.re, 19.98, epsilon = 5e-3);
    }

    #[test]
    fn weak_value_undefined_for_orthogonal_pair() {
        let e = weak_value(&Observable::pauli_x(), &zero(), &one()).unwrap_err();
        assert!(matches!(e, Error::WeakValueUndefined { .. }));
    }

    #[test]
    fn mixed_weak_value_examples() {
        let rho = DensityMatrix::maximally_mixed(2);
        let w = weak_value_mixed(&Observable::pauli_x(), &rho, &zero()).unwrap();
        assert_abs_diff_eq!(w.norm(), 0.0, epsilon = 1e-15);
        let w = weak_value_mixed(&Observable::pauli_z(), &rho, &zero()).unwrap();
        assert_abs_diff_eq!(w.re, 1.0, epsilon = 1e-15);

        let psi = make_qubit_state(1.1, 0.4);
        let phi = make_qubit_state(0.3, -1.2);
        let a = Observable::pauli_x();
        let pure = weak_value(&a, &psi, &phi).unwrap();
        let mixed = weak_value_mixed(&a, &psi.projector(), &phi).unwrap();
        assert!((pure - mixed).norm() < 1e-12);

        let e = weak_value_mixed(&a, &zero().projector(), &one()).unwrap_err();
        assert!(matches!(e, Error::VanishingProbability { .. }));
    }

    #[test]
    fn std_standard_examples() {
        assert_eq!(std_standard(&Observable::pauli_z(), &zero()).unwrap(), 0.0);
        assert_abs_diff_eq!(
            std_standard(&Observable::pauli_x(), &zero()).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            std_standard(&Observable::pauli_z(), &plus()).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn av_decompose_examples() {
        let d = av_decompose(&Observable::pauli_x(), &zero()).unwrap();
        assert_abs_diff_eq!(d.mean.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.deviation, 1.0, epsilon = 1e-15);
        assert!(d.residual_state.vector().max_abs_diff(one().vector()) < 1e-15);

        assert!(matches!(
            av_decompose(&Observable::pauli_z(), &zero()),
            Err(Error::ResidualUndefined { .. })
        ));

        let d = av_decompose(&Observable::pauli_z(), &plus()).unwrap();
        assert_abs_diff_eq!(d.deviation, 1.0, epsilon = 1e-15);
        assert!(d.residual_state.vector().max_abs_diff(minus().vector()) < 1e-15);
    }

    #[test]
    fn std_pps_examples() {
        let s = std_pps(&obs2_a(), &zero(), &plus()).unwrap();
        assert!(s <= 1e-15, "{s}");
        let psi = make_qubit_state(0.7, 2.0);
        let a = Observable::pauli_y();
        assert_abs_diff_eq!(
            std_pps(&a, &psi, &psi).unwrap(),
            std_standard(&a, &psi).unwrap(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            std_pps(&Observable::pauli_z(), &zero(), &plus()).unwrap(),
            FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        // orthogonal pair still has a PPS deviation
        assert_abs_diff_eq!(
            std_pps(&Observable::pauli_z(), &zero(), &one()).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn std_pps_rejects_dimension_mismatch() {
        let e = std_pps(&Observable::pauli_z(), &zero(), &PureState::basis(3, 0)).unwrap_err();
        assert!(matches!(e, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn pps_decompose_examples() {
        let d = pps_decompose(&Observable::pauli_z(), &zero(), &plus()).unwrap();
        assert_abs_diff_eq!(d.mean.re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(d.deviation, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert!(d.residual_state.vector().max_abs_diff(minus().vector()) < 1e-15);

        let a = Observable::pauli_x();
        let psi = make_qubit_state(0.9, 0.3);
        let phi_z = zero_uncertainty_postselection(&a, &psi).unwrap();
        assert!(matches!(
            pps_decompose(&a, &psi, &phi_z),
            Err(Error::ResidualUndefined { .. })
        ));

        let d = pps_decompose(&a, &zero(), &zero()).unwrap();
        assert_eq!(d, av_decompose(&a, &zero()).unwrap());
    }

    #[test]
    fn infotheoretic_examples() {
        let v = std_pps_infotheoretic(&Observable::pauli_z(), &zero(), &plus(), 3).unwrap();
        assert_abs_diff_eq!(v, FRAC_1_SQRT_2, epsilon = 1e-15);
        let a = obs2_a();
        let v = std_pps_infotheoretic(&a, &zero(), &plus(), 11).unwrap();
        assert!(v < 1e-15);
    }

    #[test]
    fn zero_uncertainty_examples() {
        let z = zero_uncertainty_postselection(&Observable::pauli_x(), &zero()).unwrap();
        assert!(z.vector().max_abs_diff(one().vector()) < 1e-15);
        let z = zero_uncertainty_postselection(&Observable::pauli_z(), &zero()).unwrap();
        assert!(z.vector().max_abs_diff(zero().vector()) < 1e-15);
        let z = zero_uncertainty_postselection(&obs2_a(), &zero()).unwrap();
        assert!(z.vector().max_abs_diff(plus().vector()) < 1e-15);

        let proj = Observable::diag(&[0.0, 1.0]);
        assert!(matches!(
            zero_uncertainty_postselection(&proj, &zero()),
            Err(Error::NoZeroUncertaintyPostselection)
        ));
    }

    #[test]
    fn max_uncertainty_examples() {
        let (phi, v) = max_uncertainty_postselection(&Observable::pauli_z(), &zero(), 5).unwrap();
        assert!(phi.vector().max_abs_diff(one().vector()) < 1e-12);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
        let (phi, v) = max_uncertainty_postselection(&Observable::pauli_x(), &zero(), 5).unwrap();
        assert!(phi.vector().max_abs_diff(zero().vector()) < 1e-12);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            std_pps(&Observable::pauli_x(), &zero(), &phi).unwrap(),
            v,
            epsilon = 1e-12
        );

        let (phi, v) =
            max_uncertainty_postselection(&Observable::diag(&[0.0, 1.0]), &zero(), 2).unwrap();
        assert_eq!(phi.dim(), 2);
        assert_eq!(v, 0.0);

        assert!(matches!(
            max_uncertainty_postselection(&Observable::identity(1), &PureState::basis(1, 0), 0),
            Err(Error::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn metrology_examples() {
        let a = Observable::pauli_x();
        let r = metrology_report(&a, &zero(), &zero(), 1.0).unwrap();
        assert_eq!(r.fisher_phi, 0.0);
        assert_abs_diff_eq!(r.fisher_max, 4.0, epsilon = 1e-15);
        // phi_z = |1> is orthogonal to |0>: the weak value there is undefined
        assert_eq!(r.p_z, Some(0.0));
        assert_eq!(r.weak_value_at_phi_z, None);

        let psi = make_qubit_state(1.3, 0.2);
        let b = obs2_a();
        let phi_z = zero_uncertainty_postselection(&b, &psi).unwrap();
        let r = metrology_report(&b, &psi, &phi_z, 0.7).unwrap();
        assert_abs_diff_eq!(r.fisher_phi, r.fisher_max, epsilon = 1e-12);
        assert!(r.p_z_identity_residual.unwrap().abs() < 1e-12);
        assert!(r.fisher_identity_residual.abs() < 1e-12);

        assert!(matches!(
            metrology_report(&a, &zero(), &zero(), 0.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn mixed_examples() {
        let a = Observable::pauli_x();
        let rho = DensityMatrix::maximally_mixed(2);
        assert_abs_diff_eq!(
            std_pps_mixed(&a, &rho, &zero()).unwrap(),
            FRAC_1_SQRT_2,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            std_pps_mixed_weak(&a, &rho, &zero()).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            classical_uncertainty(&rho, &a, &zero()).unwrap(),
            0.5,
            epsilon = 1e-14
        );

        let psi = make_qubit_state(0.8, 1.9);
        let phi = make_qubit_state(2.1, -0.4);
        let pure = std_pps(&a, &psi, &phi).unwrap();
        assert_abs_diff_eq!(
            std_pps_mixed(&a, &psi.projector(), &phi).unwrap(),
            pure,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            std_pps_mixed_weak(&a, &psi.projector(), &phi).unwrap(),
            pure,
            epsilon = 1e-12
        );
        assert!(classical_uncertainty(&psi.projector(), &a, &phi).unwrap() < 1e-12);
    }

    #[test]
    fn mixing_is_linear_in_variance() {
        let states = [
            make_qubit_state(0.3, 0.1),
            make_qubit_state(2.2, -1.0),
            make_qubit_state(1.0, 2.5),
        ];
        let w = [0.2, 0.5, 0.3];
        let rho = ensemble_to_density(&w, &states).unwrap();
        let a = Observable::pauli_y();
        let phi = make_qubit_state(1.4, 0.6);
        let oracle: f64 = w
            .iter()
            .zip(&states)
            .map(|(p, s)| p * std_pps(&a, s, &phi).unwrap().powi(2))
            .sum();
        assert_abs_diff_eq!(
            std_pps_mixed(&a, &rho, &phi).unwrap().powi(2),
            oracle,
            epsilon = 1e-12
        );
    }

    #[test]
    fn classical_uncertainty_is_additive() {
        let r1 = ensemble_to_density(&[0.6, 0.4], &[zero(), plus()]).unwrap();
        let r2 = ensemble_to_density(&[0.3, 0.7], &[one(), make_qubit_state(1.0, 0.5)]).unwrap();
        let a1 = Observable::pauli_x();
        let a2 = Observable::pauli_z()
            .combine(1.0, &Observable::pauli_y(), 0.5)
            .unwrap();
        let p1 = make_qubit_state(0.7, 0.2);
        let p2 = make_qubit_state(1.9, -0.8);
        let i2 = Observable::identity(2);
        let total = a1.kron(&i2).combine(1.0, &i2.kron(&a2), 1.0).unwrap();
        let joint = classical_uncertainty(&r1.kron(&r2), &total, &p1.kron(&p2)).unwrap();
        let (c1, c2) = (
            classical_uncertainty(&r1, &a1, &p1).unwrap(),
            classical_uncertainty(&r2, &a2, &p2).unwrap(),
        );
        let q1 = r1.matrix().expectation(p1.vector()).re;
        let q2 = r2.matrix().expectation(p2.vector()).re;
        // the unnormalized measure adds with the other side's success probability as weight
        assert_abs_diff_eq!(joint, q2 * c1 + q1 * c2, epsilon = 1e-12);
        // so the measure per unit success probability is exactly additive
        assert_abs_diff_eq!(joint / (q1 * q2), c1 / q1 + c2 / q2, epsilon = 1e-12);
        assert!((joint - (c1 + c2)).abs() > 1e-2);
    }

    #[test]
    fn clamp_window() {
        assert_eq!(guarded(-5e-13, 1.0, 0.0).unwrap(), 0.0);
        assert!(matches!(
            guarded(-1e-9, 1.0, 0.0),
            Err(Error::NumericalInconsistency { .. })
        ));
        // the window scales with the second moment
        assert!(guarded(-1e-9, 1e4, 0.0).is_ok());
    }
}
