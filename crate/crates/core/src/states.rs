//! Validated quantum objects: pure states, density matrices, observables,
//! unitaries and pre/post-selection pairs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c64, eig_hermitian, CMatrix, CVector, HermitianEigen, C64};
use crate::tol;

/// Unit-norm state vector. Inputs within tolerance of unit norm are
/// renormalized on construction so downstream formulas see exact unit norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PureState {
    vec: CVector,
}

impl PureState {
    pub fn new(vec: CVector) -> Result<Self> {
        Self::with_tol(vec, tol::NORM)
    }

    pub fn with_tol(vec: CVector, norm_tol: f64) -> Result<Self> {
        let norm = vec.norm();
        if (norm * norm - 1.0).abs() > norm_tol {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            vec: vec.scale_real(1.0 / norm),
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        Self::new(CVector::new(amplitudes)?)
    }

    /// Normalizes `vec` first; fails only on a (near) zero vector.
    pub fn normalize(vec: &CVector) -> Result<Self> {
        Ok(Self {
            vec: vec.normalized()?,
        })
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        Self {
            vec: CVector::basis(dim, k),
        }
    }

    pub fn dim(&self) -> usize {
        self.vec.dim()
    }

    pub fn vector(&self) -> &CVector {
        &self.vec
    }

    /// `<self|other>`.
    pub fn overlap(&self, other: &PureState) -> C64 {
        self.vec.inner(&other.vec)
    }

    pub fn with_phase_convention(&self) -> Self {
        Self {
            vec: self.vec.with_phase_convention(),
        }
    }

    /// `e^{i alpha} |self>`.
    pub fn rephase(&self, alpha: f64) -> Self {
        Self {
            vec: self.vec.scale(C64::from_polar(1.0, alpha)),
        }
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            mat: self.vec.outer(&self.vec),
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix. Accepted inputs are
/// symmetrized and rescaled to exact unit trace.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        Self::with_tol(mat, tol::PSD)
    }

    pub fn with_tol(mat: CMatrix, psd_tol: f64) -> Result<Self> {
        let deviation = mat.hermitian_deviation();
        if deviation > tol::HERMITIAN {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidTrace { trace });
        }
        let min_eigenvalue = eig_hermitian(&mat)?.eigenvalues[0];
        if min_eigenvalue < -psd_tol {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        let sym = (&mat + &mat.adjoint()).scale_real(0.5 / trace);
        Ok(Self { mat: sym })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// `Tr(X rho)`.
    pub fn expect(&self, x: &CMatrix) -> C64 {
        (x * &self.mat).trace()
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(psi: &PureState) -> Self {
        psi.projector()
    }
}

/// Hermitian operator with its spectral decomposition computed up front.
#[derive(Debug, Clone)]
pub struct Observable {
    mat: CMatrix,
    spectrum: HermitianEigen,
}

impl PartialEq for Observable {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl Observable {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let spectrum = eig_hermitian(&mat)?;
        Ok(Self { mat, spectrum })
    }

    pub fn pauli_x() -> Self {
        Self::new(crate::pauli::x()).expect("Hermitian")
    }

    pub fn pauli_y() -> Self {
        Self::new(crate::pauli::y()).expect("Hermitian")
    }

    pub fn pauli_z() -> Self {
        Self::new(crate::pauli::z()).expect("Hermitian")
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(CMatrix::identity(dim)).expect("Hermitian")
    }

    pub fn diag(values: &[f64]) -> Self {
        Self::new(CMatrix::diag_real(values)).expect("Hermitian")
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn spectrum(&self) -> &HermitianEigen {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    /// `A|psi>`, unchecked: callers validate dimensions.
    pub fn act(&self, psi: &PureState) -> CVector {
        &self.mat * psi.vector()
    }

    /// Real linear combination `a*self + b*other`.
    pub fn combine(&self, a: f64, other: &Observable, b: f64) -> Result<Observable> {
        check_same_dim(self.dim(), other.dim())?;
        Observable::new(&self.mat.scale_real(a) + &other.mat.scale_real(b))
    }
}

/// Unitary operator, `||U^dagger U - I||_F <= 1e-9`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    mat: CMatrix,
}

impl UnitaryOp {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let deviation = (&(&mat.adjoint() * &mat) - &CMatrix::identity(mat.dim())).frobenius_norm();
        if deviation > tol::UNITARY {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { mat })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// Pre-selection of a PPS experiment. A pure state is never silently promoted
/// to a rank-one density matrix so the two code paths stay distinct.
#[derive(Debug, Clone, PartialEq)]
pub enum PreSelection {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl PreSelection {
    pub fn dim(&self) -> usize {
        match self {
            Self::Pure(p) => p.dim(),
            Self::Mixed(r) => r.dim(),
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            Self::Pure(p) => p.projector(),
            Self::Mixed(r) => r.clone(),
        }
    }
}

/// Overlap between pre- and post-selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Overlap {
    /// `<phi|psi>`.
    Amplitude(C64),
    /// `<phi|rho|phi>`.
    Probability(f64),
}

/// A (pre-selection, post-selection) pair with its overlap cached.
#[derive(Debug, Clone, PartialEq)]
pub struct PpsContext {
    pub pre: PreSelection,
    pub post: PureState,
    pub overlap: Overlap,
    pub weak_value_admissible: bool,
}

impl PpsContext {
    pub fn new(pre: PreSelection, post: PureState) -> Result<Self> {
        check_same_dim(pre.dim(), post.dim())?;
        let overlap = match &pre {
            PreSelection::Pure(psi) => Overlap::Amplitude(post.overlap(psi)),
            PreSelection::Mixed(rho) => {
                Overlap::Probability(rho.matrix().expectation(post.vector()).re)
            }
        };
        let weak_value_admissible = match overlap {
            Overlap::Amplitude(z) => z.norm() > tol::WEAK_VALUE_OVERLAP,
            Overlap::Probability(p) => p > tol::WEAK_VALUE_OVERLAP,
        };
        Ok(Self {
            pre,
            post,
            overlap,
            weak_value_admissible,
        })
    }

    pub fn pure(pre: PureState, post: PureState) -> Result<Self> {
        Self::new(PreSelection::Pure(pre), post)
    }

    pub fn mixed(pre: DensityMatrix, post: PureState) -> Result<Self> {
        Self::new(PreSelection::Mixed(pre), post)
    }
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `cos(theta/2)|0> + e^{i phase} sin(theta/2)|1>`.
pub fn make_qubit_state(theta: f64, phase: f64) -> PureState {
    let (s, c) = (theta / 2.0).sin_cos();
    PureState {
        vec: CVector::new(vec![c64(c, 0.0), C64::from_polar(s, phase)]).expect("dim 2"),
    }
}

/// `sum_i p_i |psi_i><psi_i|`.
pub fn ensemble_to_density(weights: &[f64], states: &[PureState]) -> Result<DensityMatrix> {
    if weights.len() != states.len() {
        return Err(Error::InvalidWeights(format!(
            "{} weights for {} states",
            weights.len(),
            states.len()
        )));
    }
    let Some(first) = states.first() else {
        return Err(Error::InvalidWeights("empty ensemble".into()));
    };
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
        return Err(Error::InvalidWeights(format!("negative weight {w}")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol::TRACE {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    let dim = first.dim();
    let mut acc = CMatrix::zeros(dim);
    for (w, s) in weights.iter().zip(states) {
        check_same_dim(dim, s.dim())?;
        acc = &acc + &s.vector().outer(s.vector()).scale_real(*w);
    }
    DensityMatrix::new(acc)
}

/// `Tr(rho^2)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    (m * m).trace().re
}

/// Partial inner product `<phi_B|rho|phi_B>` on the second factor, leaving an
/// unnormalized operator on the first. Its trace is the probability of the
/// post-selection `phi_B` on subsystem B.
pub fn collapse_subsystem(rho_ab: &DensityMatrix, phi_b: &PureState) -> Result<CMatrix> {
    let dim_b = phi_b.dim();
    let total = rho_ab.dim();
    if !total.is_multiple_of(dim_b) || total / dim_b == 0 {
        return Err(Error::DimensionMismatch {
            expected: dim_b * (total / dim_b).max(1),
            found: total,
        });
    }
    let dim_a = total / dim_b;
    let m = rho_ab.matrix();
    let b = phi_b.vector();
    Ok(CMatrix::from_fn(dim_a, |ia, ja| {
        let mut acc = c64(0.0, 0.0);
        for ib in 0..dim_b {
            for jb in 0..dim_b {
                acc += b[ib].conj() * m.get(ia * dim_b + ib, ja * dim_b + jb) * b[jb];
            }
        }
        acc
    }))
}

/// Kronecker product between objects of the same kind, index
/// `(i_a, i_b) -> i_a * dim_b + i_b`. Mixing kinds does not type-check.
pub trait Kron<Rhs = Self> {
    type Output;

    fn kron(&self, rhs: &Rhs) -> Self::Output;
}

impl Kron for PureState {
    type Output = PureState;

    fn kron(&self, rhs: &PureState) -> PureState {
        PureState {
            vec: self.vec.kron(&rhs.vec),
        }
    }
}

impl Kron for DensityMatrix {
    type Output = DensityMatrix;

    fn kron(&self, rhs: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            mat: self.mat.kron(&rhs.mat),
        }
    }
}

impl Kron for Observable {
    type Output = Observable;

    fn kron(&self, rhs: &Observable) -> Observable {
        Observable::new(self.mat.kron(&rhs.mat)).expect("product of Hermitian matrices")
    }
}

impl Kron for UnitaryOp {
    type Output = UnitaryOp;

    fn kron(&self, rhs: &UnitaryOp) -> UnitaryOp {
        UnitaryOp {
            mat: self.mat.kron(&rhs.mat),
        }
    }
}

impl Kron for CMatrix {
    type Output = CMatrix;

    fn kron(&self, rhs: &CMatrix) -> CMatrix {
        CMatrix::kron(self, rhs)
    }
}

impl Kron for CVector {
    type Output = CVector;

    fn kron(&self, rhs: &CVector) -> CVector {
        CVector::kron(self, rhs)
    }
}
