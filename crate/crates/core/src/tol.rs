//! Numerical tolerances shared across the crate.
//!
//! Every check that stands in for an exact algebraic condition uses one of
//! these constants. Functions that accept a tolerance argument default to the
//! value here.

/// Max `|M - M^dagger|` entry accepted as Hermitian.
pub const HERMITIAN: f64 = 1e-10;

/// Most negative eigenvalue accepted as positive semidefinite.
pub const PSD: f64 = 1e-10;

/// Allowed `|<psi|psi> - 1|` for a pure state.
pub const NORM: f64 = 1e-10;

/// Allowed `|Tr(rho) - 1|` for a density matrix.
pub const TRACE: f64 = 1e-10;

/// Allowed `||U^dagger U - I||_F` for a unitary.
pub const UNITARY: f64 = 1e-9;

/// Entries below this modulus are skipped when fixing the global phase.
pub const PHASE_PIVOT: f64 = 1e-10;

/// Negative variance radicands in `[-RADICAND_CLAMP, 0)` are clamped to zero.
pub const RADICAND_CLAMP: f64 = 1e-12;

/// Minimum `|<phi|psi>|` (or `<phi|rho|phi>`) for a weak value to be defined.
pub const WEAK_VALUE_OVERLAP: f64 = 1e-8;

/// Default absolute gap under which a relation counts as saturated.
pub const SATURATION: f64 = 1e-8;

/// Relative residual under which Gram-Schmidt seeds count as dependent.
pub const GRAM_SCHMIDT_DEGENERACY: f64 = 1e-10;

/// Norm under which a vector such as `A|psi>` is treated as zero.
pub const ZERO_VECTOR: f64 = 1e-10;
