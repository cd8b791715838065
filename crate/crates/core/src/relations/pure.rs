use crate::error::{Error, Result};
use crate::linalg::{c64, gram_schmidt_complete, CVector, C64};
use crate::states::{check_same_dim, Observable, PureState};
use crate::stats::{std_pps, std_standard};
use crate::tol;

use super::{term, BoundReport, EqualityReport, Sign};

fn check3(a: &Observable, b: &Observable, psi: &PureState) -> Result<()> {
    check_same_dim(a.dim(), b.dim())?;
    check_same_dim(a.dim(), psi.dim())
}

/// `<psi|AB|psi>` as the inner product of `A psi` and `B psi`.
fn product_mean(a_psi: &CVector, b_psi: &CVector) -> C64 {
    a_psi.inner(b_psi)
}

/// Robertson relation, optionally with the Schrodinger term.
pub fn rhur(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    include_schrodinger: bool,
) -> Result<BoundReport> {
    check3(a, b, psi)?;
    let (a_psi, b_psi) = (a.act(psi), b.act(psi));
    let ab = product_mean(&a_psi, &b_psi);
    let mean_a = psi.vector().inner(&a_psi).re;
    let mean_b = psi.vector().inner(&b_psi).re;
    let lhs = std_standard(a, psi)?.powi(2) * std_standard(b, psi)?.powi(2);
    let mut terms = vec![term("commutator", ab.im.powi(2))];
    if include_schrodinger {
        terms.push(term("schrodinger", (ab.re - mean_a * mean_b).powi(2)));
    }
    Ok(BoundReport::summed("rhur", lhs, terms))
}

/// `W_AB = <psi|A|phi><phi|B|psi>` and the commutator mean `Im<psi|AB|psi>`.
struct PpsCross {
    w: C64,
    ab: C64,
}

fn pps_cross(a: &Observable, b: &Observable, pre: &PureState, post: &PureState) -> PpsCross {
    let (a_psi, b_psi) = (a.act(pre), b.act(pre));
    let w = post.vector().inner(&a_psi).conj() * post.vector().inner(&b_psi);
    PpsCross {
        w,
        ab: product_mean(&a_psi, &b_psi),
    }
}

fn pps_ur_impl(
    a: &Observable,
    b: &Observable,
    pre: &PureState,
    post: &PureState,
    include_schrodinger: bool,
    negate_im_w: bool,
) -> Result<BoundReport> {
    check3(a, b, pre)?;
    check_same_dim(a.dim(), post.dim())?;
    let PpsCross { w, ab } = pps_cross(a, b, pre, post);
    let im_w = if negate_im_w { -w.im } else { w.im };
    let lhs = std_pps(a, pre, post)?.powi(2) * std_pps(b, pre, post)?.powi(2);
    let mut terms = vec![term("commutator", (ab.im - im_w).powi(2))];
    if include_schrodinger {
        terms.push(term("schrodinger", (ab.re - w.re).powi(2)));
    }
    Ok(BoundReport::summed("pps_ur", lhs, terms).with_w(w))
}

/// Product relation for a pre/post-selected pair:
/// `(dA)^2 (dB)^2 >= (<[A,B]>/2i - Im W)^2 [+ (<{A,B}>/2 - Re W)^2]`.
pub fn pps_ur(
    a: &Observable,
    b: &Observable,
    pre: &PureState,
    post: &PureState,
    include_schrodinger: bool,
) -> Result<BoundReport> {
    pps_ur_impl(a, b, pre, post, include_schrodinger, false)
}

/// [`pps_ur`] with the sign of `Im W` flipped. Exists only so the verification
/// sweep can demonstrate that it detects a wrong relation.
pub fn pps_ur_negated_im_w(
    a: &Observable,
    b: &Observable,
    pre: &PureState,
    post: &PureState,
    include_schrodinger: bool,
) -> Result<BoundReport> {
    pps_ur_impl(a, b, pre, post, include_schrodinger, true)
}

/// The post-selection that makes both PPS deviations vanish, if `A psi` and
/// `B psi` are parallel.
pub fn common_zero_postselection(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
) -> Result<Option<PureState>> {
    check3(a, b, psi)?;
    let (a_psi, b_psi) = (a.act(psi), b.act(psi));
    if a_psi.norm() <= tol::ZERO_VECTOR || b_psi.norm() <= tol::ZERO_VECTOR {
        return Err(Error::NoZeroUncertaintyPostselection);
    }
    let ua = PureState::normalize(&a_psi)?;
    let ub = PureState::normalize(&b_psi)?;
    if ua.overlap(&ub).norm() > 1.0 - 1e-9 {
        Ok(Some(ua.with_phase_convention()))
    } else {
        Ok(None)
    }
}

/// Distance from the equality condition of [`pps_ur`]:
/// `|| dA_vec - sign i (dA/dB) dB_vec ||`.
pub fn intelligent_residual(
    a: &Observable,
    b: &Observable,
    pre: &PureState,
    post: &PureState,
    sign: Sign,
) -> Result<f64> {
    check3(a, b, pre)?;
    check_same_dim(a.dim(), post.dim())?;
    let da = std_pps(a, pre, post)?;
    let db = std_pps(b, pre, post)?;
    let deviation = da.min(db);
    if deviation <= tol::ZERO_VECTOR {
        return Err(Error::ResidualUndefined { deviation });
    }
    let phi = post.vector();
    let (a_psi, b_psi) = (a.act(pre), b.act(pre));
    let ra = &a_psi - &phi.scale(phi.inner(&a_psi));
    let rb = &b_psi - &phi.scale(phi.inner(&b_psi));
    let r = &ra - &rb.scale(c64(0.0, sign.factor() * da / db));
    Ok(r.norm())
}

/// Amplitudes `<phi_k|A|psi>` and `<phi_k|B|psi>` over a completion of `post`.
fn complement_amplitudes(
    a: &Observable,
    b: &Observable,
    pre: &PureState,
    post: &PureState,
    rng_seed: u64,
) -> Result<Vec<(C64, C64)>> {
    let basis = gram_schmidt_complete(&[post.vector().clone()], post.dim(), rng_seed)?;
    let (a_psi, b_psi) = (a.act(pre), b.act(pre));
    Ok(basis[1..]
        .iter()
        .map(|k| (k.inner(&a_psi), k.inner(&b_psi)))
        .collect())
}

/// `N = <[A,B]>/2i - Im W`, the signed quantity whose square bounds the product.
fn signed_bound(a: &Observable, b: &Observable, pre: &PureState, post: &PureState) -> f64 {
    let PpsCross { w, ab } = pps_cross(a, b, pre, post);
    ab.im - w.im
}

/// Product identity: `dA dB = ∓N / (1 - ½ Σ_k |<psi|(A/dA ± iB/dB)|phi_k>|^2)`
/// with the branch chosen so the numerator is nonnegative.
pub fn equality_product(
    a: &Observable,
    b: &Observable,
    pre: &PureState,
    post: &PureState,
    rng_seed: u64,
) -> Result<EqualityReport> {
    check3(a, b, pre)?;
    check_same_dim(a.dim(), post.dim())?;
    let da = std_pps(a, pre, post)?;
    let db = std_pps(b, pre, post)?;
    let deviation = da.min(db);
    if deviation <= 1e-8 {
        return Err(Error::ResidualUndefined { deviation });
    }
    let n = signed_bound(a, b, pre, post);
    let sign = if n <= 0.0 { Sign::Plus } else { Sign::Minus };
    let s = sign.factor();
    // <psi|(A/dA + s iB/dB)|phi_k> = conj(<phi_k|A psi>/dA - s i <phi_k|B psi>/dB)
    let sum: f64 = complement_amplitudes(a, b, pre, post, rng_seed)?
        .into_iter()
        .map(|(ak, bk)| (ak / da - c64(0.0, s) * bk / db).norm_sqr())
        .sum();
    let denominator = 1.0 - 0.5 * sum;
    if denominator.abs() <= 1e-10 {
        return Err(Error::EqualityIndeterminate { denominator });
    }
    Ok(EqualityReport::new(da * db, -s * n / denominator, sign))
}

/// Sum identity: `dA^2 + dB^2 = ∓2N + Σ_k |<phi_k|(A ∓ iB)|psi>|^2`, branch
/// chosen so the first term is nonnegative. `Sign::Minus` is the `A - iB` form.
pub fn equality_sum(
    a: &Observable,
    b: &Observable,
    pre: &PureState,
    post: &PureState,
    rng_seed: u64,
) -> Result<EqualityReport> {
    check3(a, b, pre)?;
    check_same_dim(a.dim(), post.dim())?;
    let lhs = std_pps(a, pre, post)?.powi(2) + std_pps(b, pre, post)?.powi(2);
    let n = signed_bound(a, b, pre, post);
    let sign = if n <= 0.0 { Sign::Minus } else { Sign::Plus };
    let s = sign.factor();
    let sum: f64 = complement_amplitudes(a, b, pre, post, rng_seed)?
        .into_iter()
        .map(|(ak, bk)| (ak + c64(0.0, s) * bk).norm_sqr())
        .sum();
    Ok(EqualityReport::new(lhs, 2.0 * s * n + sum, sign))
}

/// Product relation with the left side written as
/// `(<dA>^2 + eps_A)(<dB>^2 + eps_B)`, `eps_X = <X>^2 - |<phi|X|psi>|^2`.
pub fn stronger_ur(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    phi: &PureState,
    include_schrodinger: bool,
) -> Result<BoundReport> {
    check3(a, b, psi)?;
    check_same_dim(a.dim(), phi.dim())?;
    let eps = |x: &Observable| {
        let x_psi = x.act(psi);
        psi.vector().inner(&x_psi).re.powi(2) - phi.vector().inner(&x_psi).norm_sqr()
    };
    let (eps_a, eps_b) = (eps(a), eps(b));
    let lhs = (std_standard(a, psi)?.powi(2) + eps_a) * (std_standard(b, psi)?.powi(2) + eps_b);
    let base = pps_ur(a, b, psi, phi, include_schrodinger)?;
    let mut report = BoundReport::summed("stronger_ur", lhs, base.rhs_terms);
    report.w_ab = base.w_ab;
    Ok(report.with_meta("eps_a", eps_a).with_meta("eps_b", eps_b))
}

/// `max{L_RH, L_PPS} >= max{R_RH, R_PPS}`.
pub fn combined_stronger(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    phi: &PureState,
) -> Result<BoundReport> {
    let rh = rhur(a, b, psi, false)?;
    let pps = stronger_ur(a, b, psi, phi, false)?;
    let lhs = rh.lhs.max(pps.lhs);
    let terms = vec![term("rhur", rh.rhs_total), term("stronger", pps.rhs_total)];
    let total = rh.rhs_total.max(pps.rhs_total);
    let mut report = BoundReport::with_total("combined_stronger", lhs, terms, total);
    report.w_ab = pps.w_ab;
    Ok(report
        .with_meta("rhur_lhs", rh.lhs)
        .with_meta("stronger_lhs", pps.lhs))
}

/// The two baseline lower bounds on `<dA>^2 + <dB>^2` built from an orthogonal
/// state `psi_perp` and from the deviation of `A + B`.
pub fn mpur_bounds(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    psi_perp: &PureState,
) -> Result<BoundReport> {
    check3(a, b, psi)?;
    check_same_dim(a.dim(), psi_perp.dim())?;
    let overlap = psi_perp.overlap(psi).norm();
    if overlap > 1e-9 {
        return Err(Error::NotOrthogonal { overlap });
    }
    let sum = a.combine(1.0, b, 1.0)?;
    let d_sum = std_standard(&sum, psi)?;
    if d_sum <= tol::ZERO_VECTOR {
        return Err(Error::ResidualUndefined { deviation: d_sum });
    }
    let (a_psi, b_psi) = (a.act(psi), b.act(psi));
    let c = product_mean(&a_psi, &b_psi).im;
    // ±i<[A,B]> = ∓2c; <psi|(A ± iB)|perp> = conj(<perp|(A ∓ iB)|psi>)
    let pa = psi_perp.vector().inner(&a_psi);
    let pb = psi_perp.vector().inner(&b_psi);
    let (first, sign) = Sign::BOTH
        .iter()
        .map(|&s| {
            let f = s.factor();
            (-2.0 * f * c + (pa - c64(0.0, f) * pb).norm_sqr(), s)
        })
        .fold((f64::NEG_INFINITY, Sign::Plus), |best, x| {
            if x.0 > best.0 {
                x
            } else {
                best
            }
        });
    let second = 0.5 * d_sum * d_sum;
    let lhs = std_standard(a, psi)?.powi(2) + std_standard(b, psi)?.powi(2);
    let terms = vec![term("first", first), term("second", second)];
    Ok(
        BoundReport::with_total("mpur", lhs, terms, first.max(second))
            .with_meta("first_sign", f64::from(i8::from(sign))),
    )
}

/// Commuting observables `diag(1,2)`, `diag(3,1)` with common eigenstate `|0>`
/// and post-selection `|+>`: a concrete instance where the PPS relation with
/// the Schrodinger term has a strictly positive right side although the
/// standard relation is trivial.
pub fn commuting_witness() -> (Observable, Observable, PureState, PureState) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = PureState::new(CVector::from_real(&[s, s]).expect("dim 2")).expect("unit");
    (
        Observable::diag(&[1.0, 2.0]),
        Observable::diag(&[3.0, 1.0]),
        PureState::basis(2, 0),
        plus,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, CMatrix};
    use crate::random::{random_hermitian, random_state, random_state_overlapping, rng};
    use crate::states::make_qubit_state;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, PI};

    fn zero() -> PureState {
        PureState::basis(2, 0)
    }

    fn plus() -> PureState {
        make_qubit_state(FRAC_PI_2, 0.0)
    }

    fn obs2() -> (Observable, Observable) {
        let s = FRAC_1_SQRT_2;
        let a = Observable::identity(2)
            .combine(s, &Observable::pauli_x(), s)
            .unwrap();
        let b = Observable::pauli_z()
            .combine(s, &Observable::pauli_x(), s)
            .unwrap();
        (a, b)
    }

    /// Right side of the PPS relation from explicit matrix products.
    fn pps_rhs_oracle(a: &Observable, b: &Observable, psi: &PureState, phi: &PureState) -> f64 {
        let comm = commutator(a.matrix(), b.matrix()).unwrap();
        let c = comm.expectation(psi.vector()) / c64(0.0, 2.0);
        let proj: CMatrix = phi.vector().outer(phi.vector());
        let w = (&(a.matrix() * &proj) * b.matrix()).expectation(psi.vector());
        (c.re - w.im).powi(2)
    }

    #[test]
    fn rhur_pauli_saturates() {
        let r = rhur(
            &Observable::pauli_x(),
            &Observable::pauli_y(),
            &zero(),
            false,
        )
        .unwrap();
        assert_abs_diff_eq!(r.lhs, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs_total, 1.0, epsilon = 1e-15);
        assert!(r.saturated);
    }

    #[test]
    fn rhur_trivial_on_eigenstate() {
        let r = rhur(
            &Observable::pauli_z(),
            &Observable::pauli_x(),
            &zero(),
            true,
        )
        .unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_abs_diff_eq!(r.rhs_total, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn rhur_rejects_mismatched_dims() {
        let e = rhur(
            &Observable::pauli_z(),
            &Observable::identity(3),
            &zero(),
            false,
        )
        .unwrap_err();
        assert!(matches!(e, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn rhur_random_qutrits_are_sound() {
        let mut r = rng(100);
        for _ in 0..200 {
            let a = random_hermitian(3, &mut r);
            let b = random_hermitian(3, &mut r);
            let psi = random_state(3, &mut r);
            assert!(rhur(&a, &b, &psi, true).unwrap().gap >= -1e-9);
        }
    }

    #[test]
    fn pps_ur_reduces_to_rhur() {
        let mut r = rng(7);
        let a = random_hermitian(3, &mut r);
        let b = random_hermitian(3, &mut r);
        let psi = random_state(3, &mut r);
        for schr in [false, true] {
            let p = pps_ur(&a, &b, &psi, &psi, schr).unwrap();
            let h = rhur(&a, &b, &psi, schr).unwrap();
            assert_abs_diff_eq!(p.lhs, h.lhs, epsilon = 1e-10);
            for (x, y) in p.rhs_terms.iter().zip(&h.rhs_terms) {
                assert_eq!(x.name, y.name);
                assert_abs_diff_eq!(x.value, y.value, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn pps_ur_matches_matrix_oracle() {
        let mut r = rng(8);
        for _ in 0..50 {
            let a = random_hermitian(4, &mut r);
            let b = random_hermitian(4, &mut r);
            let psi = random_state(4, &mut r);
            let phi = random_state(4, &mut r);
            let rep = pps_ur(&a, &b, &psi, &phi, false).unwrap();
            assert_abs_diff_eq!(
                rep.rhs_total,
                pps_rhs_oracle(&a, &b, &psi, &phi),
                epsilon = 1e-10
            );
            assert!(rep.gap >= -1e-9);
        }
    }

    #[test]
    fn observation_two_saturation() {
        let (a, b) = obs2();
        let r = pps_ur(&a, &b, &zero(), &plus(), false).unwrap();
        assert!(r.lhs <= 1e-24);
        assert!(r.rhs_total <= 1e-24);
        let phi = common_zero_postselection(&a, &b, &zero()).unwrap().unwrap();
        assert!(phi.vector().max_abs_diff(plus().vector()) < 1e-15);
    }

    #[test]
    fn commuting_witness_has_positive_bound() {
        let (a, b, psi, phi) = commuting_witness();
        let standard = rhur(&a, &b, &psi, true).unwrap();
        assert_abs_diff_eq!(standard.rhs_total, 0.0, epsilon = 1e-15);
        let r = pps_ur(&a, &b, &psi, &phi, true).unwrap();
        // W = <0|A|+><+|B|0> = 1.5, <AB> = 3: (3 - 1.5)^2
        assert_abs_diff_eq!(r.rhs_total, 2.25, epsilon = 1e-12);
        assert!(r.gap >= -1e-9);
    }

    #[test]
    fn common_zero_examples() {
        let none =
            common_zero_postselection(&Observable::pauli_x(), &Observable::pauli_z(), &zero())
                .unwrap();
        assert!(none.is_none());
        let a = random_hermitian(3, &mut rng(3));
        let psi = random_state(3, &mut rng(4));
        let phi = common_zero_postselection(&a, &a, &psi).unwrap().unwrap();
        let z = crate::stats::zero_uncertainty_postselection(&a, &psi).unwrap();
        assert!(phi.vector().max_abs_diff(z.vector()) < 1e-12);
        let proj = Observable::diag(&[0.0, 1.0]);
        assert!(common_zero_postselection(&proj, &Observable::pauli_x(), &zero()).is_err());
    }

    #[test]
    fn intelligent_pauli_pair() {
        let (x, y) = (Observable::pauli_x(), Observable::pauli_y());
        let minus = intelligent_residual(&x, &y, &zero(), &zero(), Sign::Minus).unwrap();
        let plus_ = intelligent_residual(&x, &y, &zero(), &zero(), Sign::Plus).unwrap();
        assert!(minus < 1e-15);
        assert_abs_diff_eq!(plus_, 2.0, epsilon = 1e-15);
        assert!(pps_ur(&x, &y, &zero(), &zero(), false).unwrap().gap.abs() <= 1e-8);
    }

    #[test]
    fn intelligent_generic_instance_is_not_saturated() {
        let mut r = rng(21);
        let a = random_hermitian(3, &mut r);
        let b = random_hermitian(3, &mut r);
        let psi = random_state(3, &mut r);
        let phi = random_state(3, &mut r);
        for s in Sign::BOTH {
            assert!(intelligent_residual(&a, &b, &psi, &phi, s).unwrap() > 1e-3);
        }
        assert!(pps_ur(&a, &b, &psi, &phi, false).unwrap().gap > 1e-6);
    }

    #[test]
    fn intelligent_requires_nonzero_deviation() {
        let (a, b) = obs2();
        assert!(matches!(
            intelligent_residual(&a, &b, &zero(), &plus(), Sign::Plus),
            Err(Error::ResidualUndefined { .. })
        ));
    }

    #[test]
    fn equalities_hold_on_random_instances() {
        let mut r = rng(31);
        for dim in [2, 3, 4] {
            for _ in 0..40 {
                let a = random_hermitian(dim, &mut r);
                let b = random_hermitian(dim, &mut r);
                let psi = random_state(dim, &mut r);
                let phi = random_state_overlapping(&psi, 1e-6, &mut r);
                let s = equality_sum(&a, &b, &psi, &phi, 0).unwrap();
                assert!(s.residual.abs() <= 1e-8, "sum {s:?}");
                match equality_product(&a, &b, &psi, &phi, 0) {
                    Ok(p) => assert!(p.residual.abs() <= 1e-8, "product {p:?}"),
                    Err(Error::EqualityIndeterminate { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
                for seed in 1..5 {
                    let again = equality_sum(&a, &b, &psi, &phi, seed).unwrap();
                    assert_abs_diff_eq!(again.rhs, s.rhs, epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn equality_sum_with_equal_observables() {
        let mut r = rng(41);
        let a = random_hermitian(3, &mut r);
        let psi = random_state(3, &mut r);
        let phi = random_state(3, &mut r);
        let e = equality_sum(&a, &a, &psi, &phi, 2).unwrap();
        assert_abs_diff_eq!(
            e.lhs,
            2.0 * std_pps(&a, &psi, &phi).unwrap().powi(2),
            epsilon = 1e-12
        );
        assert!(e.residual.abs() <= 1e-8);
    }

    #[test]
    fn equality_product_needs_deviation() {
        let (a, b) = obs2();
        assert!(matches!(
            equality_product(&a, &b, &zero(), &plus(), 0),
            Err(Error::ResidualUndefined { .. })
        ));
    }

    #[test]
    fn equality_sum_pauli_example() {
        let e = equality_sum(
            &Observable::pauli_x(),
            &Observable::pauli_y(),
            &zero(),
            &zero(),
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(e.lhs, 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(e.rhs, 2.0, epsilon = 1e-15);
        assert_eq!(e.sign_chosen, Sign::Plus);
        let p = equality_product(
            &Observable::pauli_x(),
            &Observable::pauli_y(),
            &zero(),
            &zero(),
            0,
        )
        .unwrap();
        assert_abs_diff_eq!(p.rhs, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn stronger_on_eigenstate() {
        let a = Observable::pauli_z();
        let b = Observable::pauli_x();
        let phi = make_qubit_state(FRAC_PI_3, PI / 5.0);
        let r = stronger_ur(&a, &b, &zero(), &phi, false).unwrap();
        let eps_a = r.meta("eps_a").unwrap();
        // <A>^2 - |<phi|A|0>|^2 = 1 - cos^2(pi/6)
        assert_abs_diff_eq!(eps_a, 0.25, epsilon = 1e-12);
        let w = r.w_ab.unwrap();
        assert_abs_diff_eq!(r.rhs_total, w.im.powi(2), epsilon = 1e-12);
        assert!(r.rhs_total > 1e-3);
        let pps = pps_ur(&a, &b, &zero(), &phi, false).unwrap();
        assert_abs_diff_eq!(r.lhs, pps.lhs, epsilon = 1e-12);
    }

    #[test]
    fn stronger_beats_rhur_in_figure_setting() {
        let (x, y) = (Observable::pauli_x(), Observable::pauli_y());
        let phi = make_qubit_state(FRAC_PI_3, PI / 5.0);
        for theta in [FRAC_PI_2, -FRAC_PI_2] {
            let psi = make_qubit_state(theta, 0.0);
            assert!(rhur(&x, &y, &psi, false).unwrap().rhs_total <= 1e-12);
            assert!(stronger_ur(&x, &y, &psi, &phi, false).unwrap().rhs_total > 1e-6);
            let c = combined_stronger(&x, &y, &psi, &phi).unwrap();
            assert!(c.rhs_total > 1e-6);
            assert!(c.gap >= -1e-9);
        }
        let psi = make_qubit_state(0.4, 0.0);
        let same = stronger_ur(&x, &y, &psi, &psi, true).unwrap();
        let h = rhur(&x, &y, &psi, true).unwrap();
        assert_abs_diff_eq!(same.lhs, h.lhs, epsilon = 1e-12);
        assert_abs_diff_eq!(same.rhs_total, h.rhs_total, epsilon = 1e-12);
        let c = combined_stronger(&x, &y, &psi, &psi).unwrap();
        assert_abs_diff_eq!(c.lhs, h.lhs, epsilon = 1e-12);
    }

    #[test]
    fn mpur_on_eigenstate() {
        let (a, b) = (Observable::pauli_z(), Observable::pauli_x());
        let r = mpur_bounds(&a, &b, &zero(), &PureState::basis(2, 1)).unwrap();
        let var_b = 1.0;
        assert_abs_diff_eq!(r.rhs_term("first").unwrap(), var_b, epsilon = 1e-12);
        assert_abs_diff_eq!(r.rhs_term("second").unwrap(), 0.5 * var_b, epsilon = 1e-12);
        assert!(r.gap >= -1e-9);

        let mut rg = rng(51);
        let a3 = Observable::diag(&[1.0, 2.0, 5.0]);
        let b3 = random_hermitian(3, &mut rg);
        let psi = PureState::basis(3, 1);
        let perp = PureState::basis(3, 2);
        let r = mpur_bounds(&a3, &b3, &psi, &perp).unwrap();
        let var_b = std_standard(&b3, &psi).unwrap().powi(2);
        assert_abs_diff_eq!(r.rhs_term("second").unwrap(), 0.5 * var_b, epsilon = 1e-12);
    }

    #[test]
    fn mpur_rejects_non_orthogonal() {
        let e = mpur_bounds(
            &Observable::pauli_z(),
            &Observable::pauli_x(),
            &zero(),
            &plus(),
        )
        .unwrap_err();
        assert!(matches!(e, Error::NotOrthogonal { .. }));
    }

    #[test]
    fn fault_mode_breaks_soundness() {
        let mut r = rng(61);
        let mut violated = false;
        for _ in 0..200 {
            let a = random_hermitian(2, &mut r);
            let b = random_hermitian(2, &mut r);
            let psi = random_state(2, &mut r);
            let phi = random_state(2, &mut r);
            violated |= pps_ur_negated_im_w(&a, &b, &psi, &phi, false).unwrap().gap < -1e-9;
        }
        assert!(violated);
    }
}
