//! Dense complex vectors and matrices for small Hilbert spaces.
//!
//! [`CVector`] and [`CMatrix`] are thin newtypes over nalgebra's dynamic
//! storage. Dimensions are checked at the public boundary (`matmul`, `apply`,
//! `add`, ...) and return [`Error::DimensionMismatch`]; the `Mul`/`Add`
//! operator impls are for internal code that has already validated shapes and
//! panic on mismatch like nalgebra does.
//!
//! Whenever an operation returns a vector defined only up to a global phase it
//! applies [`CVector::with_phase_convention`]: the first entry with modulus
//! above [`tol::PHASE_PIVOT`] is made real and positive.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A column vector of complex amplitudes.
#[derive(Clone, PartialEq)]
pub struct CVector(DVector<C64>);

/// A square complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix(DMatrix<C64>);

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl CVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        Ok(Self(DVector::from_vec(entries)))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| c64(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DVector::zeros(dim))
    }

    /// The computational basis vector `|k>` of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[k] = c64(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn as_nalgebra(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn from_nalgebra(v: DVector<C64>) -> Self {
        Self(v)
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &CVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn try_inner(&self, other: &CVector) -> Result<C64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.inner(other))
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.norm_squared()
    }

    pub fn scale(&self, c: C64) -> CVector {
        Self(&self.0 * c)
    }

    pub fn scale_real(&self, x: f64) -> CVector {
        self.scale(c64(x, 0.0))
    }

    /// Unit vector along `self`; fails when the norm is below [`tol::ZERO_VECTOR`].
    pub fn normalized(&self) -> Result<CVector> {
        let n = self.norm();
        if n <= tol::ZERO_VECTOR {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(self.scale_real(1.0 / n))
    }

    /// `|self><other|`.
    pub fn outer(&self, other: &CVector) -> CMatrix {
        CMatrix(&self.0 * other.0.adjoint())
    }

    pub fn kron(&self, other: &CVector) -> CVector {
        Self(self.0.kronecker(&other.0))
    }

    /// Rotate the global phase so the first entry with modulus above
    /// [`tol::PHASE_PIVOT`] is real and positive.
    pub fn with_phase_convention(&self) -> CVector {
        match self.0.iter().find(|z| z.norm() > tol::PHASE_PIVOT) {
            Some(z) => self.scale(z.conj() / z.norm()),
            None => self.clone(),
        }
    }

    pub fn max_abs_diff(&self, other: &CVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Serialized as a list of `[re, im]` pairs.
impl Serialize for CVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim()))?;
        for z in self.0.iter() {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

impl Index<usize> for CVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl Add for &CVector {
    type Output = CVector;

    fn add(self, rhs: &CVector) -> CVector {
        CVector(&self.0 + &rhs.0)
    }
}

impl Sub for &CVector {
    type Output = CVector;

    fn sub(self, rhs: &CVector) -> CVector {
        CVector(&self.0 - &rhs.0)
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl CMatrix {
    /// Build from row-major rows; every row must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        for row in &rows {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
        }
        Ok(Self(DMatrix::from_fn(n, n, |i, j| rows[i][j])))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| c64(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn diag_real(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                c64(diag[i], 0.0)
            } else {
                c64(0.0, 0.0)
            }
        })
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() == 0 {
            return Err(Error::DimensionTooSmall { min: 1, found: 0 });
        }
        Ok(Self(m))
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.0[(i, j)]).collect())
            .collect()
    }

    pub fn matmul(&self, other: &CMatrix) -> Result<CMatrix> {
        check_dims(self.dim(), other.dim())?;
        Ok(self * other)
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        check_dims(self.dim(), v.dim())?;
        Ok(self * v)
    }

    pub fn try_add(&self, other: &CMatrix) -> Result<CMatrix> {
        check_dims(self.dim(), other.dim())?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &CMatrix) -> Result<CMatrix> {
        check_dims(self.dim(), other.dim())?;
        Ok(self - other)
    }

    pub fn adjoint(&self) -> CMatrix {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, c: C64) -> CMatrix {
        Self(&self.0 * c)
    }

    pub fn scale_real(&self, x: f64) -> CMatrix {
        self.scale(c64(x, 0.0))
    }

    /// `<a|self|b>`.
    pub fn sandwich(&self, a: &CVector, b: &CVector) -> C64 {
        a.inner(&(self * b))
    }

    /// `<v|self|v>`.
    pub fn expectation(&self, v: &CVector) -> C64 {
        self.sandwich(v, v)
    }

    /// Kronecker product with index `(i_a, i_b) -> i_a * dim_b + i_b`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        Self(self.0.kronecker(&other.0))
    }

    /// Largest entry of `|M - M^dagger|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector(self.0.column(j).into_owned())
    }
}

/// Serialized row-major as nested `[re, im]` pairs.
impl Serialize for CMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 * &rhs.0)
    }
}

impl Mul<&CVector> for &CMatrix {
    type Output = CVector;

    fn mul(self, rhs: &CVector) -> CVector {
        CVector(&self.0 * &rhs.0)
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;

    fn add(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;

    fn sub(self, rhs: &CMatrix) -> CMatrix {
        CMatrix(&self.0 - &rhs.0)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// `AB - BA`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_dims(a.dim(), b.dim())?;
    Ok(&(a * b) - &(b * a))
}

/// `AB + BA`.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    check_dims(a.dim(), b.dim())?;
    Ok(&(a * b) + &(b * a))
}

pub fn frobenius_norm(m: &CMatrix) -> f64 {
    m.frobenius_norm()
}

/// Complete `seeds` to an orthonormal basis of dimension `dim`.
///
/// The first `seeds.len()` output vectors span the seed span and the first
/// one is exactly `seeds[0] / ||seeds[0]||` (its phase is kept). Completion
/// vectors are Gaussian draws from a ChaCha stream keyed by `rng_seed`,
/// orthogonalized twice and phase-fixed.
pub fn gram_schmidt_complete(seeds: &[CVector], dim: usize, rng_seed: u64) -> Result<Vec<CVector>> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    if seeds.len() > dim {
        return Err(Error::InvalidArgument(format!(
            "{} seed vectors exceed dimension {dim}",
            seeds.len()
        )));
    }
    let mut basis: Vec<CVector> = Vec::with_capacity(dim);
    for seed in seeds {
        check_dims(dim, seed.dim())?;
        let scale = seed.norm();
        if scale <= tol::ZERO_VECTOR {
            return Err(Error::DegenerateInput { residual: scale });
        }
        let r = orthogonalize(seed, &basis);
        let residual = r.norm() / scale;
        if residual <= tol::GRAM_SCHMIDT_DEGENERACY {
            return Err(Error::DegenerateInput { residual });
        }
        basis.push(r.scale_real(1.0 / r.norm()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    while basis.len() < dim {
        let candidate = gaussian_vector(dim, &mut rng);
        let r = orthogonalize(&candidate, &basis);
        // a draw almost inside the current span is thrown away
        if r.norm() < 1e-6 * candidate.norm() {
            continue;
        }
        basis.push(r.scale_real(1.0 / r.norm()).with_phase_convention());
    }
    Ok(basis)
}

/// Two passes of modified Gram-Schmidt against an orthonormal set.
fn orthogonalize(v: &CVector, basis: &[CVector]) -> CVector {
    let mut r = v.clone();
    for _ in 0..2 {
        for b in basis {
            let c = b.inner(&r);
            r = &r - &b.scale(c);
        }
    }
    r
}

pub(crate) fn gaussian_vector(dim: usize, rng: &mut impl rand::Rng) -> CVector {
    CVector(DVector::from_fn(dim, |_, _| {
        c64(StandardNormal.sample(rng), StandardNormal.sample(rng))
    }))
}

/// Spectral decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<CVector>,
}

impl HermitianEigen {
    /// `sum_k f(lambda_k) |v_k><v_k|`.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> CMatrix {
        let dim = self.eigenvectors[0].dim();
        let mut acc = CMatrix::zeros(dim);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            acc = &acc + &v.outer(v).scale_real(f(*lambda));
        }
        acc
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|x| x)
    }
}

pub fn eig_hermitian(m: &CMatrix) -> Result<HermitianEigen> {
    eig_hermitian_with_tol(m, tol::HERMITIAN)
}

pub fn eig_hermitian_with_tol(m: &CMatrix, hermitian_tol: f64) -> Result<HermitianEigen> {
    let deviation = m.hermitian_deviation();
    if deviation > hermitian_tol {
        return Err(Error::NotHermitian { deviation });
    }
    // symmetrize so the solver sees an exactly Hermitian input
    let h = (&m.0 + m.0.adjoint()) * c64(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..m.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = order
        .iter()
        .map(|&k| CVector(eig.eigenvectors.column(k).into_owned()).with_phase_convention())
        .collect();
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    sqrt_psd_with_tol(m, tol::PSD)
}

pub fn sqrt_psd_with_tol(m: &CMatrix, psd_tol: f64) -> Result<CMatrix> {
    let eig = eig_hermitian(m)?;
    let min_eigenvalue = eig.eigenvalues[0];
    if min_eigenvalue < -psd_tol {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// Pauli matrices and other fixed operators used throughout.
pub mod pauli {
    use super::{c64, CMatrix};

    pub fn identity() -> CMatrix {
        CMatrix::identity(2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2")
    }

    pub fn y() -> CMatrix {
        CMatrix::from_rows(vec![
            vec![c64(0.0, 0.0), c64(0.0, -1.0)],
            vec![c64(0.0, 1.0), c64(0.0, 0.0)],
        ])
        .expect("2x2")
    }

    pub fn z() -> CMatrix {
        CMatrix::diag_real(&[1.0, -1.0])
    }
}
