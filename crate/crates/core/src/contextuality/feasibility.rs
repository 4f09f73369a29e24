//! Noncontextual-model search for arbitrary finite prepare-measure data.

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linsys::{LinearSystem, Relation, Row};
use crate::lp::{farkas_certificate, feasible_point, FarkasCertificate};
use crate::rational::{int, one, serde_rational, zero, Rational};
use crate::theories::{probability, Measurement, RepVector};

use super::{is_zero_vec, OnticModel};

/// `Σ lhs wᵢ·P_i  ≃  Σ rhs wⱼ·P_j`, preparations 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equivalence {
    pub lhs: Vec<(usize, Rational)>,
    pub rhs: Vec<(usize, Rational)>,
}

mod weighted {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Term(usize, #[serde(with = "serde_rational")] Rational);

    pub fn serialize<S: Serializer>(v: &[(usize, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|(i, w)| Term(*i, w.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(usize, Rational)>, D::Error> {
        Ok(Vec::<Term>::deserialize(d)?.into_iter().map(|Term(i, w)| (i, w)).collect())
    }
}

impl Serialize for Equivalence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            #[serde(with = "weighted")]
            lhs: &'a [(usize, Rational)],
            #[serde(with = "weighted")]
            rhs: &'a [(usize, Rational)],
        }
        Repr { lhs: &self.lhs, rhs: &self.rhs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Equivalence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            #[serde(with = "weighted")]
            lhs: Vec<(usize, Rational)>,
            #[serde(with = "weighted")]
            rhs: Vec<(usize, Rational)>,
        }
        let r = Repr::deserialize(d)?;
        Ok(Equivalence { lhs: r.lhs, rhs: r.rhs })
    }
}

impl Equivalence {
    pub fn new(lhs: Vec<(usize, Rational)>, rhs: Vec<(usize, Rational)>) -> Self {
        Equivalence { lhs, rhs }
    }

    /// Both sides are probability distributions over `0..n_preps`.
    pub fn validate(&self, n_preps: usize) -> Result<()> {
        for (side, terms) in [("lhs", &self.lhs), ("rhs", &self.rhs)] {
            if terms.is_empty() {
                return Err(Error::MalformedEquivalence(format!("{side} is empty")));
            }
            if let Some((i, _)) = terms.iter().find(|(i, _)| *i >= n_preps) {
                return Err(Error::MalformedEquivalence(format!("{side} names preparation {i} of {n_preps}")));
            }
            if let Some((_, w)) = terms.iter().find(|(_, w)| w.is_negative()) {
                return Err(Error::MalformedEquivalence(format!("{side} has negative weight {w}")));
            }
            let total: Rational = terms.iter().map(|(_, w)| w.clone()).sum();
            if !total.is_one() {
                return Err(Error::MalformedEquivalence(format!("{side} weights sum to {total}")));
            }
        }
        Ok(())
    }

    fn mixture(terms: &[(usize, Rational)], preps: &[RepVector]) -> RepVector {
        terms
            .iter()
            .fold(RepVector::new(zero(), zero(), zero(), zero()), |acc, (i, w)| acc.add(&preps[*i].scale(w)))
    }

    /// The two mixtures coincide as state vectors.
    pub fn holds_for(&self, preps: &[RepVector]) -> bool {
        Self::mixture(&self.lhs, preps) == Self::mixture(&self.rhs, preps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum FeasibilityOutcome {
    Feasible { model: OnticModel },
    Infeasible { system: LinearSystem, certificate: FarkasCertificate },
}

impl FeasibilityOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityOutcome::Feasible { .. })
    }
}

/// Searches for a preparation-noncontextual, outcome-deterministic model
/// of the data `ℙ(+1 | M, P)` over the ontic space of all outcome
/// assignments.
pub fn nc_feasibility(
    preps: &[RepVector],
    equivalences: &[Equivalence],
    measurements: &[Measurement],
) -> Result<FeasibilityOutcome> {
    for eq in equivalences {
        eq.validate(preps.len())?;
        if !eq.holds_for(preps) {
            return Err(Error::MalformedEquivalence("mixtures differ as state vectors".into()));
        }
    }
    let k = measurements.len();
    if k > 16 {
        return Err(Error::InvalidParameter(format!("{k} measurements (at most 16)")));
    }
    let n_ontic = 1usize << k;
    // λ in lexicographic order over outcome tuples, `+` first
    let responses: Vec<Vec<u8>> =
        (0..k).map(|w| (0..n_ontic).map(|l| u8::from((l >> (k - 1 - w)) & 1 == 0)).collect()).collect();
    let n_preps = preps.len();
    let names: Vec<String> =
        (1..=n_preps).flat_map(|i| (1..=n_ontic).map(move |l| format!("mu{i}_{l}"))).collect();
    let col = |i: usize, l: usize| i * n_ontic + l;
    let mut sys = LinearSystem::new(names);
    for j in 0..n_preps * n_ontic {
        sys.push_sparse(&[(j, int(-1))], Relation::Le, zero());
    }
    for (i, s) in preps.iter().enumerate() {
        let terms: Vec<(usize, Rational)> = (0..n_ontic).map(|l| (col(i, l), one())).collect();
        sys.push_sparse(&terms, Relation::Eq, one());
        for (w, m) in measurements.iter().enumerate() {
            let p = probability(&m.plus, s)?;
            let terms: Vec<(usize, Rational)> =
                (0..n_ontic).filter(|&l| responses[w][l] == 1).map(|l| (col(i, l), one())).collect();
            sys.push_sparse(&terms, Relation::Eq, p);
        }
    }
    for eq in equivalences {
        for l in 0..n_ontic {
            let mut a = vec![zero(); sys.dim()];
            for (i, w) in &eq.lhs {
                a[col(*i, l)] += w;
            }
            for (i, w) in &eq.rhs {
                a[col(*i, l)] -= w;
            }
            if !is_zero_vec(&a) {
                sys.push(Row::eq(a, zero()))?;
            }
        }
    }
    match feasible_point(&sys)? {
        Some(point) => {
            let mus = point.chunks(n_ontic).map(<[Rational]>::to_vec).collect();
            let axes = measurements.iter().map(|m| m.label).collect();
            Ok(FeasibilityOutcome::Feasible { model: OnticModel { axes, responses, mus } })
        }
        None => {
            let certificate = farkas_certificate(&sys)?
                .ok_or_else(|| crate::error::contract("infeasible system without a certificate"))?;
            Ok(FeasibilityOutcome::Infeasible { system: sys, certificate })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::theories::Axis;

    fn quad(x: Rational, z: Rational) -> Vec<RepVector> {
        vec![
            RepVector::state(x.clone(), zero(), z.clone()),
            RepVector::state(-x.clone(), zero(), z.clone()),
            RepVector::state(-x.clone(), zero(), -z.clone()),
            RepVector::state(x, zero(), -z),
        ]
    }

    fn rectangle() -> Equivalence {
        Equivalence::new(vec![(0, rat(1, 2)), (2, rat(1, 2))], vec![(1, rat(1, 2)), (3, rat(1, 2))])
    }

    fn xz() -> Vec<Measurement> {
        vec![Measurement::along(Axis::X), Measurement::along(Axis::Z)]
    }

    #[test]
    fn pythagorean_quadruple_is_infeasible() {
        let out = nc_feasibility(&quad(rat(3, 5), rat(4, 5)), &[rectangle()], &xz()).unwrap();
        match out {
            FeasibilityOutcome::Infeasible { system, certificate } => assert!(certificate.verify(&system)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn octahedron_quadruple_is_feasible() {
        let preps = vec![
            RepVector::state(one(), zero(), zero()),
            RepVector::state(zero(), zero(), one()),
            RepVector::state(-one(), zero(), zero()),
            RepVector::state(zero(), zero(), -one()),
        ];
        let eq = Equivalence::new(vec![(0, rat(1, 2)), (2, rat(1, 2))], vec![(1, rat(1, 2)), (3, rat(1, 2))]);
        let out = nc_feasibility(&preps, &[eq], &xz()).unwrap();
        let FeasibilityOutcome::Feasible { model } = out else { panic!() };
        for (i, s) in preps.iter().enumerate() {
            assert_eq!(model.expectations(i), vec![s.sx.clone(), s.sz.clone()]);
        }
    }

    #[test]
    fn single_preparation_is_feasible() {
        let out = nc_feasibility(&[RepVector::state(rat(1, 3), zero(), rat(-1, 2))], &[], &xz()).unwrap();
        assert!(out.is_feasible());
    }

    #[test]
    fn malformed_equivalences() {
        let preps = quad(rat(1, 2), zero());
        let bad = Equivalence::new(vec![(0, rat(1, 2))], vec![(1, one())]);
        assert!(matches!(nc_feasibility(&preps, &[bad], &xz()), Err(Error::MalformedEquivalence(_))));
        let bad = Equivalence::new(vec![(0, one())], vec![(9, one())]);
        assert!(matches!(nc_feasibility(&preps, &[bad], &xz()), Err(Error::MalformedEquivalence(_))));
        let not_equal = Equivalence::new(vec![(0, one())], vec![(1, one())]);
        assert!(matches!(nc_feasibility(&preps, &[not_equal], &xz()), Err(Error::MalformedEquivalence(_))));
    }
}
