use crate::error::{Error, Result};
use crate::linalg::{sqrt_psd, CMatrix, C64};
use crate::states::{check_same_dim, DensityMatrix, PureState, UnitaryOp};

use super::{term, BoundReport};

/// Largest vector norm accepted before clamping to 1 for `arccos`.
const NORM_SLACK: f64 = 1e-9;

/// `sqrt(1 - <phi|U^dagger rho U|phi>)`.
fn unitary_deviation(u: &CMatrix, rho: &DensityMatrix, phi: &PureState) -> f64 {
    let p = (&(&u.adjoint() * rho.matrix()) * u)
        .expectation(phi.vector())
        .re;
    (1.0 - p).max(0.0).sqrt()
}

/// PPS uncertainty relation for two unitaries:
/// `dU dV >= |Tr(V U^dagger rho) - <phi|U^dagger rho V|phi>|`.
pub fn unitary_pps_ur(
    u: &UnitaryOp,
    v: &UnitaryOp,
    rho: &DensityMatrix,
    phi: &PureState,
) -> Result<BoundReport> {
    check_same_dim(u.dim(), v.dim())?;
    check_same_dim(u.dim(), rho.dim())?;
    check_same_dim(u.dim(), phi.dim())?;
    let (um, vm) = (u.matrix(), v.matrix());
    let lhs = unitary_deviation(um, rho, phi) * unitary_deviation(vm, rho, phi);
    let global = rho.expect(&(vm * &um.adjoint()));
    let local = (&(&um.adjoint() * rho.matrix()) * vm).expectation(phi.vector());
    let rhs = (global - local).norm();
    Ok(BoundReport::summed(
        "unitary_pps_ur",
        lhs,
        vec![term("overlap", rhs)],
    ))
}

/// `F = Tr(W^dagger V^dagger W V rho)`.
pub fn otoc_value(v: &UnitaryOp, w: &UnitaryOp, rho: &DensityMatrix) -> Result<C64> {
    check_same_dim(v.dim(), w.dim())?;
    check_same_dim(v.dim(), rho.dim())?;
    let (vm, wm) = (v.matrix(), w.matrix());
    let prod = &(&(&wm.adjoint() * &vm.adjoint()) * wm) * vm;
    Ok(rho.expect(&prod))
}

fn clamp_unit(x: f64) -> Result<f64> {
    if !(x <= 1.0 + NORM_SLACK) {
        return Err(Error::InvalidArgument(format!(
            "overlap modulus {x} exceeds 1"
        )));
    }
    Ok(x.clamp(0.0, 1.0))
}

fn angle_bound(x: f64, y: f64) -> Result<f64> {
    Ok((clamp_unit(x)?.acos() - clamp_unit(y)?.acos()).cos())
}

/// Precomputed `sqrt(rho) (VW)^dagger` and `sqrt(rho) (WV)^dagger` for
/// evaluating the post-selected OTOC bound at many post-selections.
#[derive(Debug, Clone)]
pub(crate) struct PpsOtocKernel {
    vw: CMatrix,
    wv: CMatrix,
}

impl PpsOtocKernel {
    pub(crate) fn new(v: &UnitaryOp, w: &UnitaryOp, rho: &DensityMatrix) -> Result<Self> {
        check_same_dim(v.dim(), w.dim())?;
        check_same_dim(v.dim(), rho.dim())?;
        let root = sqrt_psd(rho.matrix())?;
        let (vm, wm) = (v.matrix(), w.matrix());
        Ok(PpsOtocKernel {
            vw: &root * &(vm * wm).adjoint(),
            wv: &root * &(wm * vm).adjoint(),
        })
    }

    pub(crate) fn dim(&self) -> usize {
        self.vw.dim()
    }

    /// `cos(arccos||sqrt(rho)(VW)^dagger phi|| - arccos||sqrt(rho)(WV)^dagger phi||)`.
    pub(crate) fn bound(&self, phi: &PureState) -> Result<f64> {
        check_same_dim(self.dim(), phi.dim())?;
        angle_bound(
            (&self.vw * phi.vector()).norm(),
            (&self.wv * phi.vector()).norm(),
        )
    }
}

/// Upper bounds on `|F|`: the overlap-angle baseline, one post-selected bound
/// per entry of `phis`, and their minimum.
///
/// The report reads `combined >= |F|`: `lhs` is the combined bound and the
/// single right-hand term is `|F|`. Individual bounds are in the metadata as
/// `bong` and `pps_0`, `pps_1`, ... An empty `phis` yields the baseline alone.
pub fn otoc_bounds(
    v: &UnitaryOp,
    w: &UnitaryOp,
    rho: &DensityMatrix,
    phis: &[PureState],
) -> Result<BoundReport> {
    let f = otoc_value(v, w, rho)?;
    let (vm, wm) = (v.matrix(), w.matrix());
    let vw = vm * wm;
    let wv = wm * vm;
    let bong = angle_bound(rho.expect(&vw).norm(), rho.expect(&wv).norm())?;

    let kernel = PpsOtocKernel::new(v, w, rho)?;
    let pps = phis
        .iter()
        .map(|phi| kernel.bound(phi))
        .collect::<Result<Vec<_>>>()?;
    let combined = pps.iter().copied().fold(bong, f64::min);

    let mut report = BoundReport::summed("otoc_bounds", combined, vec![term("abs_f", f.norm())])
        .with_meta("bong", bong);
    for (k, b) in pps.into_iter().enumerate() {
        report = report.with_meta(format!("pps_{k}"), b);
    }
    Ok(report)
}

/// Post-selected bounds in order, read back from an [`otoc_bounds`] report.
pub fn pps_bounds(report: &BoundReport) -> Vec<f64> {
    report
        .metadata
        .iter()
        .filter(|t| t.name.starts_with("pps_"))
        .map(|t| t.value)
        .collect()
}
