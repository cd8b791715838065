//! Seeded random instances for sweeps and property tests.
//!
//! Every generator takes an explicit RNG so callers control the stream; use
//! [`rng`] to obtain a ChaCha8 generator from an integer seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{c64, eig_hermitian, gaussian_vector, gram_schmidt_complete, CMatrix, CVector};
use crate::states::{purity, DensityMatrix, Observable, PureState, UnitaryOp};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian-direction unit vector (uniform on the sphere).
pub fn random_state(dim: usize, rng: &mut impl Rng) -> PureState {
    loop {
        let v = gaussian_vector(dim, rng);
        if let Ok(s) = PureState::normalize(&v) {
            return s;
        }
    }
}

/// A random state with `|<reference|phi>| > min_overlap`.
pub fn random_state_overlapping(
    reference: &PureState,
    min_overlap: f64,
    rng: &mut impl Rng,
) -> PureState {
    loop {
        let phi = random_state(reference.dim(), rng);
        if phi.overlap(reference).norm() > min_overlap {
            return phi;
        }
    }
}

fn gaussian_matrix(dim: usize, cols: usize, rng: &mut impl Rng) -> nalgebra::DMatrix<crate::C64> {
    nalgebra::DMatrix::from_fn(dim, cols, |_, _| {
        c64(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

/// `(G + G^dagger) / 2` with standard complex Gaussian `G`.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> Observable {
    let g = gaussian_matrix(dim, dim, rng);
    let h = (&g + g.adjoint()) * c64(0.5, 0.0);
    Observable::new(CMatrix::from_nalgebra(h).expect("square")).expect("Hermitian by construction")
}

/// Unitary from the Gram-Schmidt orthonormalization of Gaussian columns.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> UnitaryOp {
    let seed: u64 = rng.random();
    let columns = gram_schmidt_complete(&[], dim, seed).expect("dim >= 1");
    let m = CMatrix::from_fn(dim, |i, j| columns[j][i]);
    UnitaryOp::new(m).expect("orthonormal columns")
}

/// Ginibre ensemble `G G^dagger / Tr` with `G` of shape `dim x rank`.
pub fn random_density(dim: usize, rank: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = gaussian_matrix(dim, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = CMatrix::from_nalgebra(m * c64(1.0 / tr, 0.0)).expect("square");
    DensityMatrix::new(m).expect("Ginibre matrices are valid densities")
}

/// Full-rank Ginibre state, mixed with `I/dim` just enough that
/// `Tr(rho^2) <= max_purity`.
pub fn random_mixed_density(dim: usize, max_purity: f64, rng: &mut impl Rng) -> DensityMatrix {
    let rho = random_density(dim, dim, rng);
    let p = purity(&rho);
    let floor = 1.0 / dim as f64;
    if p <= max_purity || max_purity <= floor {
        return rho;
    }
    // purity of (1-t) rho + t I/d is (1-t)^2 (p - 1/d) + 1/d
    let t = 1.0 - ((max_purity - floor) / (p - floor)).sqrt();
    let mixed = &rho.matrix().scale_real(1.0 - t) + &CMatrix::identity(dim).scale_real(t * floor);
    DensityMatrix::new(mixed).expect("convex combination of densities")
}

/// Orthonormal qutrit basis with `<phi_1|A|phi_2> = 0`: a random basis whose
/// first two vectors are rotated to diagonalize `A` compressed to their span.
pub fn random_qutrit_detection_basis(a: &Observable, rng: &mut impl Rng) -> [PureState; 3] {
    let u = random_unitary(a.dim(), rng);
    let cols: Vec<CVector> = (0..3).map(|j| u.matrix().column(j)).collect();
    let m = a.matrix();
    let block = CMatrix::from_fn(2, |i, j| m.sandwich(&cols[i], &cols[j]));
    let eig = eig_hermitian(&block).expect("compression of a Hermitian matrix");
    let rotate = |c: &CVector| {
        let v = &cols[0].scale(c[0]) + &cols[1].scale(c[1]);
        PureState::normalize(&v).expect("unit combination")
    };
    [
        rotate(&eig.eigenvectors[0]),
        rotate(&eig.eigenvectors[1]),
        PureState::normalize(&cols[2]).expect("unit column"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let a = random_state(3, &mut rng(4));
        let b = random_state(3, &mut rng(4));
        assert_eq!(a, b);
        assert_ne!(a, random_state(3, &mut rng(5)));
    }

    #[test]
    fn unitaries_are_unitary() {
        let mut r = rng(1);
        for dim in 1..6 {
            let u = random_unitary(dim, &mut r);
            let d =
                (&(&u.matrix().adjoint() * u.matrix()) - &CMatrix::identity(dim)).frobenius_norm();
            assert!(d < 1e-12);
        }
    }

    #[test]
    fn mixed_densities_respect_purity_cap() {
        let mut r = rng(2);
        for dim in [2, 3, 4, 6] {
            for _ in 0..50 {
                let rho = random_mixed_density(dim, 0.95, &mut r);
                assert!(purity(&rho) <= 0.95 + 1e-12);
            }
        }
    }

    #[test]
    fn qutrit_basis_condition() {
        let mut r = rng(3);
        for _ in 0..20 {
            let a = random_hermitian(3, &mut r);
            let basis = random_qutrit_detection_basis(&a, &mut r);
            for i in 0..3 {
                for j in 0..3 {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((basis[i].overlap(&basis[j]).norm() - expected).abs() < 1e-12);
                }
            }
            let elem = a.matrix().sandwich(basis[0].vector(), basis[1].vector());
            assert!(elem.norm() < 1e-12);
        }
    }
}
