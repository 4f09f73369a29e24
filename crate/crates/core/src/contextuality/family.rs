//! The general n = 2 parameterization and its saturating subfamily.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{half, one, rat, serde_rational, zero, Rational};

use super::{build_scenario, OnticModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violated", rename_all = "kebab-case")]
pub enum FamilyViolation {
    /// Entry `entry` of μ_`mu` (both 1-based) lies outside `[0, 1]`.
    EntryOutOfRange {
        mu: usize,
        entry: usize,
        #[serde(with = "serde_rational")]
        value: Rational,
    },
    Normalization {
        #[serde(with = "serde_rational")]
        sum: Rational,
    },
    /// `a + d = 1/2 + (ε + γ + δ)/2` fails.
    PncIdentity {
        #[serde(with = "serde_rational")]
        a_plus_d: Rational,
        #[serde(with = "serde_rational")]
        required: Rational,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum FamilyOutcome {
    Valid { model: OnticModel },
    Invalid { violations: Vec<FamilyViolation> },
}

impl FamilyOutcome {
    pub fn model(&self) -> Option<&OnticModel> {
        match self {
            FamilyOutcome::Valid { model } => Some(model),
            FamilyOutcome::Invalid { .. } => None,
        }
    }
}

/// `μ₁ = (a,b,c,d)`, `μ₂ = (b+ε, a−ε, d−ε, c+ε)`, `μ₃ = (d−γ, c+γ, b+γ, a−γ)`,
/// `μ₄ = (c+δ, d−δ, a−δ, b+δ)`.
pub fn analytic_mu_family(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    d: &Rational,
    eps: &Rational,
    gamma: &Rational,
    delta: &Rational,
) -> FamilyOutcome {
    let mus = vec![
        vec![a.clone(), b.clone(), c.clone(), d.clone()],
        vec![b + eps, a - eps, d - eps, c + eps],
        vec![d - gamma, c + gamma, b + gamma, a - gamma],
        vec![c + delta, d - delta, a - delta, b + delta],
    ];
    let mut violations = Vec::new();
    for (i, mu) in mus.iter().enumerate() {
        for (j, v) in mu.iter().enumerate() {
            if *v < zero() || *v > one() {
                violations.push(FamilyViolation::EntryOutOfRange { mu: i + 1, entry: j + 1, value: v.clone() });
            }
        }
    }
    let sum = a + b + c + d;
    if sum != one() {
        violations.push(FamilyViolation::Normalization { sum });
    }
    let required = half() + (eps + gamma + delta) / Rational::from_integer(2.into());
    let a_plus_d = a + d;
    if a_plus_d != required {
        violations.push(FamilyViolation::PncIdentity { a_plus_d, required });
    }
    if violations.is_empty() {
        let scenario = build_scenario(2).expect("n = 2 is supported");
        FamilyOutcome::Valid { model: OnticModel::from_scenario(&scenario, mus) }
    } else {
        FamilyOutcome::Invalid { violations }
    }
}

/// The one-parameter family with `ε = γ = δ = 0`, `b = 1/2`, `c = 0`,
/// giving `⟨X⟩ = 1/2 − 2u`, `⟨Z⟩ = 1/2 + 2u`.
pub fn saturating_model(u: &Rational) -> Result<OnticModel> {
    let q = rat(1, 4);
    if *u < -q.clone() || *u > q {
        return Err(Error::InvalidParameter(format!("u = {u} outside [-1/4, 1/4]")));
    }
    let z = zero();
    match analytic_mu_family(&(&q + u), &half(), &z, &(&q - u), &z, &z, &z) {
        FamilyOutcome::Valid { model } => Ok(model),
        FamilyOutcome::Invalid { violations } => {
            Err(crate::error::contract(format!("saturating model invalid: {violations:?}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use num_traits::Zero;

    fn r(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    #[test]
    fn uniform_is_valid() {
        let q = r(1, 4);
        let z = zero();
        let out = analytic_mu_family(&q, &q, &q, &q, &z, &z, &z);
        let m = out.model().unwrap();
        assert!(m.mus.iter().all(|mu| mu.iter().all(|x| *x == q)));
    }

    #[test]
    fn expectations_of_mu1() {
        let z = zero();
        let out = analytic_mu_family(&r(1, 4), &r(1, 2), &z, &r(1, 4), &z, &z, &z);
        let m = out.model().unwrap();
        assert_eq!(m.expectations(0), vec![r(1, 2), r(1, 2)]);
    }

    #[test]
    fn identity_violation_listed() {
        let z = zero();
        match analytic_mu_family(&r(3, 4), &r(1, 4), &z, &z, &z, &z, &z) {
            FamilyOutcome::Invalid { violations } => {
                assert_eq!(
                    violations,
                    vec![FamilyViolation::PncIdentity { a_plus_d: r(3, 4), required: r(1, 2) }]
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn saturating_endpoints() {
        let m = saturating_model(&zero()).unwrap();
        assert_eq!(m.expectations(0), vec![r(1, 2), r(1, 2)]);
        let m = saturating_model(&r(1, 4)).unwrap();
        assert_eq!(m.expectations(0), vec![zero(), one()]);
        let m = saturating_model(&r(-1, 4)).unwrap();
        assert_eq!(m.expectations(0), vec![one(), zero()]);
        assert!(saturating_model(&r(1, 3)).is_err());
        assert!(saturating_model(&int(-1)).is_err());
    }

    #[test]
    fn family_members_satisfy_nc_system() {
        let s = build_scenario(2).unwrap();
        let out = analytic_mu_family(&r(1, 4), &r(1, 4), &r(1, 4), &r(3, 8), &r(1, 8), &r(1, 8), &r(-1, 8));
        assert!(out.model().is_none());
        let out = analytic_mu_family(&r(3, 8), &r(1, 4), &r(1, 4), &r(1, 8), &r(1, 8), &r(-1, 8), &zero());
        let m = out.model().unwrap();
        assert!(m.satisfies(&s).unwrap());
        assert!(m.mus.iter().all(|mu| !mu.iter().all(Zero::is_zero)));
    }
}
