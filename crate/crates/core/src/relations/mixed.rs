use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix};
use crate::states::{check_same_dim, DensityMatrix, Observable, PureState};
use crate::stats::{std_pps_mixed, std_pps_mixed_weak};
use crate::tol;

use super::{term, BoundReport, Sign};

fn check_mixed(a: &Observable, b: &Observable, rho: &DensityMatrix, phi: &PureState) -> Result<()> {
    check_same_dim(a.dim(), b.dim())?;
    check_same_dim(a.dim(), rho.dim())?;
    check_same_dim(a.dim(), phi.dim())
}

/// Mixed pre-selection version of the PPS product relation with
/// `W_AB = <phi|B rho A|phi>`. The metadata also carries the left side built
/// from the weak-value deviations, which obeys the same bound.
pub fn pps_ur_mixed(
    a: &Observable,
    b: &Observable,
    rho: &DensityMatrix,
    phi: &PureState,
    include_schrodinger: bool,
) -> Result<BoundReport> {
    check_mixed(a, b, rho, phi)?;
    let (am, bm, r) = (a.matrix(), b.matrix(), rho.matrix());
    let ab = rho.expect(&(am * bm));
    let w = (&(bm * r) * am).expectation(phi.vector());
    let lhs = std_pps_mixed(a, rho, phi)?.powi(2) * std_pps_mixed(b, rho, phi)?.powi(2);
    let mut terms = vec![term("commutator", (ab.im - w.im).powi(2))];
    if include_schrodinger {
        terms.push(term("schrodinger", (ab.re - w.re).powi(2)));
    }
    let mut report = BoundReport::summed("pps_ur_mixed", lhs, terms).with_w(w);
    if let (Ok(wa), Ok(wb)) = (
        std_pps_mixed_weak(a, rho, phi),
        std_pps_mixed_weak(b, rho, phi),
    ) {
        report = report.with_meta("lhs_weak", wa.powi(2) * wb.powi(2));
    }
    Ok(report)
}

/// `C_s = A + s iB - <A + s iB>_rho I`.
fn shifted(a: &Observable, b: &Observable, rho: &DensityMatrix, sign: Sign) -> CMatrix {
    let m = a.matrix() + &b.matrix().scale(c64(0.0, sign.factor()));
    let mean = rho.expect(&m);
    &m - &CMatrix::identity(a.dim()).scale(mean)
}

/// Sum relation in the standard system, tightened by a post-selection:
/// `Var A + Var B >= s i Tr([A,B] rho) + <phi|C_s^dagger rho C_s|phi>`.
///
/// With `sign = None` the branch making the commutator term nonnegative is
/// used. Either branch is a valid bound.
pub fn tighter_sum_ur(
    a: &Observable,
    b: &Observable,
    rho: &DensityMatrix,
    phi: &PureState,
    sign: Option<Sign>,
) -> Result<BoundReport> {
    check_mixed(a, b, rho, phi)?;
    let (am, bm) = (a.matrix(), b.matrix());
    let var = |m: &CMatrix| rho.expect(&(m * m)).re - rho.expect(m).re.powi(2);
    let lhs = var(am) + var(bm);
    // i Tr([A,B] rho) = -2 Im Tr(rho AB)
    let c = rho.expect(&(am * bm)).im;
    let sign = sign.unwrap_or(if c <= 0.0 { Sign::Plus } else { Sign::Minus });
    let first = -2.0 * sign.factor() * c;
    let cs = shifted(a, b, rho, sign);
    let second = (&(&cs.adjoint() * rho.matrix()) * &cs)
        .expectation(phi.vector())
        .re;
    let terms = vec![term("commutator", first), term("postselected", second)];
    Ok(BoundReport::summed("tighter_sum_ur", lhs, terms).with_meta("sign", sign.factor()))
}

/// Normalized `C_sign |psi>` (means taken in `psi`).
///
/// Because `C_s^dagger = C_{-s}` for Hermitian `A`, `B`, this state saturates
/// [`tighter_sum_ur`] on the branch `-sign`.
pub fn tight_saturating_postselection(
    a: &Observable,
    b: &Observable,
    psi: &PureState,
    sign: Sign,
) -> Result<PureState> {
    check_same_dim(a.dim(), b.dim())?;
    check_same_dim(a.dim(), psi.dim())?;
    let cs = shifted(a, b, &psi.projector(), sign);
    let v = &cs * psi.vector();
    if v.norm() <= tol::ZERO_VECTOR {
        return Err(Error::NoSaturatingPostselection);
    }
    Ok(PureState::normalize(&v)?.with_phase_convention())
}
