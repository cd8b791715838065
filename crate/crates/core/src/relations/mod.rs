//! Uncertainty relations, equalities and OTOC bounds.
//!
//! Every inequality is reported as a [`BoundReport`] whose `gap = lhs - rhs_total`
//! is nonnegative for a sound relation. Upper bounds (the OTOC family) follow
//! the same convention with the bound on the left. Equalities produce an
//! [`EqualityReport`].

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::tol;

mod mixed;
mod otoc;
mod pure;

pub use mixed::{pps_ur_mixed, tight_saturating_postselection, tighter_sum_ur};
pub(crate) use otoc::PpsOtocKernel;
pub use otoc::{otoc_bounds, otoc_value, pps_bounds, unitary_pps_ur};
pub use pure::{
    combined_stronger, common_zero_postselection, equality_product, equality_sum,
    intelligent_residual, mpur_bounds, commuting_witness, pps_ur, rhur, stronger_ur,
};

/// Deliberately broken variants used to show that the verification sweep can
/// fail. Not part of the supported API.
#[doc(hidden)]
pub mod fault {
    pub use super::pure::pps_ur_negated_im_w;
}

/// Branch selector `±1` for relations written with `A ± iB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(into = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i64> for Sign {
    type Error = Error;

    fn try_from(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::InvalidArgument(format!(
                "sign must be +1 or -1, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// A named real quantity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Term {
    pub name: String,
    pub value: f64,
}

fn term(name: impl Into<String>, value: f64) -> Term {
    Term {
        name: name.into(),
        value,
    }
}

/// Evaluated sides of an inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub relation: &'static str,
    pub lhs: f64,
    pub rhs_terms: Vec<Term>,
    pub rhs_total: f64,
    pub gap: f64,
    pub saturated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_ab: Option<C64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub metadata: Vec<Term>,
}

impl BoundReport {
    fn summed(relation: &'static str, lhs: f64, rhs_terms: Vec<Term>) -> Self {
        let total = rhs_terms.iter().map(|t| t.value).sum();
        Self::with_total(relation, lhs, rhs_terms, total)
    }

    fn with_total(relation: &'static str, lhs: f64, rhs_terms: Vec<Term>, rhs_total: f64) -> Self {
        let gap = lhs - rhs_total;
        BoundReport {
            relation,
            lhs,
            rhs_terms,
            rhs_total,
            gap,
            saturated: gap.abs() <= tol::SATURATION,
            w_ab: None,
            metadata: Vec::new(),
        }
    }

    fn with_w(mut self, w: C64) -> Self {
        self.w_ab = Some(w);
        self
    }

    fn with_meta(mut self, name: impl Into<String>, value: f64) -> Self {
        self.metadata.push(term(name, value));
        self
    }

    /// Saturation against a caller-chosen tolerance.
    pub fn saturated_within(&self, tol: f64) -> bool {
        self.gap.abs() <= tol
    }

    pub fn rhs_term(&self, name: &str) -> Option<f64> {
        self.rhs_terms
            .iter()
            .find(|t| t.name == name)
            .map(|t| t.value)
    }

    pub fn meta(&self, name: &str) -> Option<f64> {
        self.metadata
            .iter()
            .find(|t| t.name == name)
            .map(|t| t.value)
    }
}

/// Both sides of an identity and the branch that was used.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub sign_chosen: Sign,
}

impl EqualityReport {
    fn new(lhs: f64, rhs: f64, sign_chosen: Sign) -> Self {
        EqualityReport {
            lhs,
            rhs,
            residual: lhs - rhs,
            sign_chosen,
        }
    }
}
