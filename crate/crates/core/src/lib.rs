//! Uncertainty relations for pre- and post-selected quantum systems.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`] dense complex kernel (products, eigendecomposition, Gram-Schmidt)
//! * [`states`] validated states, observables, unitaries and PPS contexts
//! * [`stats`] weak values and standard deviations, pure and mixed
//! * [`relations`] uncertainty relations, equalities and OTOC bounds
//! * [`purity`] purity detection through the classical-uncertainty gap
//! * [`search`] derivative-free optimisation over post-selections
//! * [`random`] seeded generators used by tests, sweeps and the CLI

pub mod error;
pub mod linalg;
pub mod purity;
pub mod random;
pub mod relations;
pub mod search;
pub mod states;
pub mod stats;
pub mod tol;

pub use error::{Error, Result};
pub use linalg::{c64, pauli, CMatrix, CVector, HermitianEigen, C64};
pub use purity::{PurityVerdict, Verdict};
pub use relations::{BoundReport, EqualityReport};
pub use search::{ObjectiveKind, SearchConfig, SearchResult};
pub use states::{
    make_qubit_state, DensityMatrix, Kron, Observable, PpsContext, PreSelection, PureState,
    UnitaryOp,
};
pub use stats::{AVDecomposition, MetrologyReport};
