use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::orbit::{realizable_region, Group};
use crate::polytope::{Body, Point};
use crate::rational::{int, one, serde_rational, serde_rational_mat, Rational};
use crate::surd::Surd;
use crate::theories::TheorySpec;
use crate::uncertainty::{form_extreme, UrForm, UrKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Contextual,
    Saturates,
    NoncontextualCompatible,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Contextual => "contextual",
            Verdict::Saturates => "saturates",
            Verdict::NoncontextualCompatible => "noncontextual-compatible",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RegionSummary {
    Ball {
        #[serde(with = "serde_rational")]
        radius: Rational,
    },
    Polytope {
        #[serde(with = "serde_rational_mat")]
        vertices: Vec<Point>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub theory: String,
    pub group: Group,
    /// Set when the group needs a measurement outside the theory's subset
    /// and the region is a geometric comparison only.
    pub geometric_only: bool,
    pub region: RegionSummary,
    pub max_value: Surd,
    pub witness_state: Vec<Surd>,
    pub verdict: Verdict,
}

/// Max of `Σ|⟨W⟩|` over the theory's orbit-realizable states.
pub fn violation_report(theory: &TheorySpec, group: Group) -> Result<ViolationReport> {
    let axes = group.axes();
    let region = realizable_region(theory, group)?;
    let form = UrForm::new(UrKind::AbsSum, &axes, one());
    let (max_value, witness_state) = form_extreme(&region, &form)?;
    let verdict = match max_value.cmp_rational(&one()) {
        std::cmp::Ordering::Greater => Verdict::Contextual,
        std::cmp::Ordering::Equal => Verdict::Saturates,
        std::cmp::Ordering::Less => Verdict::NoncontextualCompatible,
    };
    let region = match region {
        Body::Ball { radius, .. } => RegionSummary::Ball { radius },
        Body::Polytope(p) => RegionSummary::Polytope { vertices: p.vertices()? },
    };
    Ok(ViolationReport {
        theory: theory.name.clone(),
        group,
        geometric_only: axes.iter().any(|a| !theory.has_measurement(*a)),
        region,
        max_value,
        witness_state,
        verdict,
    })
}

/// Smallest `η` with `(1 − η)√m <= 1`: `1 − √m/m`.
pub fn depolarization_threshold(group: Group) -> Surd {
    let m = group.axes().len() as i64;
    let root = Surd::sqrt(&int(m)).expect("positive");
    Surd::rational(one()).checked_sub(&root.scale(&Rational::new(1.into(), m.into()))).expect("single radical")
}
