//! Single evaluation of a named relation on literal inputs.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use pps_core::relations::{
    combined_stronger, equality_product, equality_sum, intelligent_residual, mpur_bounds,
    otoc_bounds, pps_ur, pps_ur_mixed, rhur, stronger_ur, tighter_sum_ur, unitary_pps_ur,
    BoundReport, EqualityReport, Sign,
};
use pps_core::stats::{std_pps, std_standard};
use pps_core::{DensityMatrix, Observable, PureState, UnitaryOp};
use serde::Serialize;

use crate::error::CliError;
use crate::scenario::{density, observable, required, state, unitary, EvalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Rhur,
    PpsUr,
    PpsUrMixed,
    StrongerUr,
    CombinedStronger,
    MpurBounds,
    TighterSumUr,
    UnitaryPpsUr,
    OtocBounds,
    EqualityProduct,
    EqualitySum,
    IntelligentResidual,
    StdPps,
}

impl Relation {
    pub const ALL: [Relation; 13] = [
        Relation::Rhur,
        Relation::PpsUr,
        Relation::PpsUrMixed,
        Relation::StrongerUr,
        Relation::CombinedStronger,
        Relation::MpurBounds,
        Relation::TighterSumUr,
        Relation::UnitaryPpsUr,
        Relation::OtocBounds,
        Relation::EqualityProduct,
        Relation::EqualitySum,
        Relation::IntelligentResidual,
        Relation::StdPps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Rhur => "rhur",
            Relation::PpsUr => "pps-ur",
            Relation::PpsUrMixed => "pps-ur-mixed",
            Relation::StrongerUr => "stronger-ur",
            Relation::CombinedStronger => "combined-stronger",
            Relation::MpurBounds => "mpur-bounds",
            Relation::TighterSumUr => "tighter-sum-ur",
            Relation::UnitaryPpsUr => "unitary-pps-ur",
            Relation::OtocBounds => "otoc-bounds",
            Relation::EqualityProduct => "equality-product",
            Relation::EqualitySum => "equality-sum",
            Relation::IntelligentResidual => "intelligent-residual",
            Relation::StdPps => "std-pps",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Relation {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| CliError::scenario(format!("unknown relation `{s}`")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    pub relation: Relation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equality: Option<EqualityReport>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, f64>,
    pub tolerance: f64,
    /// Inequalities hold, identities close and deviations are in range.
    pub sound: bool,
}

struct Inputs<'a>(&'a EvalParams);

impl Inputs<'_> {
    fn a(&self) -> Result<Observable, CliError> {
        observable(required(&self.0.a, "a")?, "a")
    }
    fn b(&self) -> Result<Observable, CliError> {
        observable(required(&self.0.b, "b")?, "b")
    }
    fn psi(&self) -> Result<PureState, CliError> {
        state(required(&self.0.psi, "psi")?, "psi")
    }
    fn phi(&self) -> Result<PureState, CliError> {
        state(required(&self.0.phi, "phi")?, "phi")
    }
    fn psi_perp(&self) -> Result<PureState, CliError> {
        state(required(&self.0.psi_perp, "psi_perp")?, "psi_perp")
    }
    fn rho(&self) -> Result<DensityMatrix, CliError> {
        density(required(&self.0.rho, "rho")?, "rho")
    }
    fn u(&self) -> Result<UnitaryOp, CliError> {
        unitary(required(&self.0.u, "u")?, "u")
    }
    fn v(&self) -> Result<UnitaryOp, CliError> {
        unitary(required(&self.0.v, "v")?, "v")
    }
    fn w(&self) -> Result<UnitaryOp, CliError> {
        unitary(required(&self.0.w, "w")?, "w")
    }
    fn phis(&self) -> Result<Vec<PureState>, CliError> {
        if self.0.phis.is_empty() {
            return Err(CliError::scenario("missing parameter `phis`"));
        }
        self.0.phis.iter().map(|lit| state(lit, "phis")).collect()
    }
    fn sign(&self) -> Result<Option<Sign>, CliError> {
        self.0
            .sign
            .map(Sign::try_from)
            .transpose()
            .map_err(CliError::from)
    }
}

pub fn run_eval(p: &EvalParams) -> Result<EvalReport, CliError> {
    let relation = Relation::from_str(&p.relation)?;
    let x = Inputs(p);
    let tol = p.tolerance;
    let schrodinger = p.include_schrodinger;
    let mut bound = None;
    let mut equality = None;
    let mut values = BTreeMap::new();
    match relation {
        Relation::Rhur => bound = Some(rhur(&x.a()?, &x.b()?, &x.psi()?, schrodinger)?),
        Relation::PpsUr => {
            bound = Some(pps_ur(&x.a()?, &x.b()?, &x.psi()?, &x.phi()?, schrodinger)?)
        }
        Relation::PpsUrMixed => {
            bound = Some(pps_ur_mixed(
                &x.a()?,
                &x.b()?,
                &x.rho()?,
                &x.phi()?,
                schrodinger,
            )?)
        }
        Relation::StrongerUr => {
            bound = Some(stronger_ur(
                &x.a()?,
                &x.b()?,
                &x.psi()?,
                &x.phi()?,
                schrodinger,
            )?)
        }
        Relation::CombinedStronger => {
            bound = Some(combined_stronger(&x.a()?, &x.b()?, &x.psi()?, &x.phi()?)?)
        }
        Relation::MpurBounds => {
            bound = Some(mpur_bounds(&x.a()?, &x.b()?, &x.psi()?, &x.psi_perp()?)?)
        }
        Relation::TighterSumUr => {
            bound = Some(tighter_sum_ur(
                &x.a()?,
                &x.b()?,
                &x.rho()?,
                &x.phi()?,
                x.sign()?,
            )?)
        }
        Relation::UnitaryPpsUr => {
            bound = Some(unitary_pps_ur(&x.u()?, &x.v()?, &x.rho()?, &x.phi()?)?)
        }
        Relation::OtocBounds => bound = Some(otoc_bounds(&x.v()?, &x.w()?, &x.rho()?, &x.phis()?)?),
        Relation::EqualityProduct => {
            equality = Some(equality_product(
                &x.a()?,
                &x.b()?,
                &x.psi()?,
                &x.phi()?,
                p.seed,
            )?)
        }
        Relation::EqualitySum => {
            equality = Some(equality_sum(
                &x.a()?,
                &x.b()?,
                &x.psi()?,
                &x.phi()?,
                p.seed,
            )?)
        }
        Relation::IntelligentResidual => {
            let (a, b, psi, phi) = (x.a()?, x.b()?, x.psi()?, x.phi()?);
            let signs = match x.sign()? {
                Some(s) => vec![s],
                None => Sign::BOTH.to_vec(),
            };
            for s in signs {
                values.insert(
                    format!("residual_{s}"),
                    intelligent_residual(&a, &b, &psi, &phi, s)?,
                );
            }
        }
        Relation::StdPps => {
            let (a, psi, phi) = (x.a()?, x.psi()?, x.phi()?);
            values.insert("std_pps".into(), std_pps(&a, &psi, &phi)?);
            values.insert("std_standard".into(), std_standard(&a, &psi)?);
        }
    }
    let sound = match (&bound, &equality) {
        (Some(b), _) => b.gap >= -tol,
        (_, Some(e)) => e.residual.abs() <= tol * e.lhs.abs().max(1.0),
        _ => match relation {
            Relation::StdPps => values["std_pps"] >= 0.0 && values.values().all(|v| v.is_finite()),
            _ => values.values().all(|v| v.is_finite() && *v >= 0.0),
        },
    };
    Ok(EvalReport {
        relation,
        bound,
        equality,
        values,
        tolerance: tol,
        sound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{MatrixLit, VectorLit};

    fn sx() -> MatrixLit {
        vec![vec![[0.0, 0.0], [1.0, 0.0]], vec![[1.0, 0.0], [0.0, 0.0]]]
    }
    fn sy() -> MatrixLit {
        vec![vec![[0.0, 0.0], [0.0, -1.0]], vec![[0.0, 1.0], [0.0, 0.0]]]
    }
    fn ket0() -> VectorLit {
        vec![[1.0, 0.0], [0.0, 0.0]]
    }
    fn plus() -> VectorLit {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![[s, 0.0], [s, 0.0]]
    }

    fn params(relation: &str) -> EvalParams {
        EvalParams {
            relation: relation.into(),
            a: Some(sx()),
            b: Some(sy()),
            psi: Some(ket0()),
            phi: Some(plus()),
            ..EvalParams::default()
        }
    }

    #[test]
    fn names_round_trip() {
        for r in Relation::ALL {
            assert_eq!(Relation::from_str(r.name()).unwrap(), r);
        }
        assert_eq!(Relation::from_str("bogus").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn rhur_on_ground_state() {
        // oracle: Var X = Var Y = 1 and |<[X, Y]>|^2 / 4 = |<2iZ>|^2 / 4 = 1
        let r = run_eval(&params("rhur")).unwrap();
        let b = r.bound.unwrap();
        assert!((b.lhs - 1.0).abs() < 1e-12 && (b.rhs_total - 1.0).abs() < 1e-12);
        assert!(r.sound);
    }

    #[test]
    fn std_pps_at_plus() {
        // oracle: X|0> = |1>, <X^2> = 1 and |<+|1>|^2 = 1/2, so sqrt(1 - 1/2)
        let r = run_eval(&params("std-pps")).unwrap();
        assert!((r.values["std_pps"] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((r.values["std_standard"] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equalities_close() {
        for name in ["equality-product", "equality-sum"] {
            let r = run_eval(&params(name)).unwrap();
            assert!(r.sound, "{name}: {:?}", r.equality);
        }
    }

    #[test]
    fn missing_input_is_a_scenario_error() {
        let mut p = params("pps-ur");
        p.phi = None;
        let err = run_eval(&p).unwrap_err();
        assert!(err.to_string().contains("phi"));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn both_residual_branches_reported() {
        let r = run_eval(&params("intelligent-residual")).unwrap();
        assert_eq!(r.values.len(), 2);
        let mut p = params("intelligent-residual");
        p.sign = Some(-1);
        assert_eq!(run_eval(&p).unwrap().values.len(), 1);
        p.sign = Some(3);
        assert!(run_eval(&p).is_err());
    }
}
