//! Fixed inputs shared by the benchmarks.

use pps_core::random::{random_hermitian, random_state, random_state_overlapping, rng};
use pps_core::{Observable, PureState};

/// Two observables, a pre-selection and an overlapping post-selection in `dim`.
pub fn fixture(dim: usize, seed: u64) -> (Observable, Observable, PureState, PureState) {
    let mut g = rng(seed);
    let a = random_hermitian(dim, &mut g);
    let b = random_hermitian(dim, &mut g);
    let psi = random_state(dim, &mut g);
    let phi = random_state_overlapping(&psi, 0.1, &mut g);
    (a, b, psi, phi)
}
