//! The all-theories summary document.

use serde::Serialize;

use crate::contextuality::{depolarization_threshold, violation_report, RegionSummary, Verdict};
use crate::error::Result;
use crate::orbit::{has_symmetry, Group};
use crate::rational::{fmt_rational, rat, Rational};
use crate::surd::Surd;
use crate::theories::{TheoryKind, TheorySpec};

/// A surd as `{"a", "b", "k"}` plus float and text renderings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurdView {
    pub a: String,
    pub b: String,
    pub k: u64,
    pub float: f64,
    pub text: String,
}

impl From<&Surd> for SurdView {
    fn from(s: &Surd) -> Self {
        SurdView { a: fmt_rational(&s.a), b: fmt_rational(&s.b), k: s.k, float: s.to_f64(), text: s.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub theory: String,
    pub group: Group,
    pub symmetry: bool,
    pub geometric_only: bool,
    pub region: RegionSummary,
    pub max_predictability_sum: SurdView,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub a12: SurdView,
    pub a13: SurdView,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub depolarization_thresholds: Thresholds,
}

pub fn default_eta() -> Rational {
    rat(3, 10)
}

/// Symmetry class, maximal predictability sum and verdict for the five
/// theories (depolarized at `eta`) under both groups.
pub fn build_report(eta: &Rational) -> Result<Report> {
    let mut rows = Vec::new();
    for kind in TheoryKind::all_with_eta(eta.clone()) {
        let theory = TheorySpec::new(kind)?;
        for group in [Group::A12, Group::A13] {
            let v = violation_report(&theory, group)?;
            rows.push(ReportRow {
                theory: theory.name.clone(),
                group,
                symmetry: has_symmetry(&theory, group)?,
                geometric_only: v.geometric_only,
                region: v.region,
                max_predictability_sum: SurdView::from(&v.max_value),
                verdict: v.verdict,
            });
        }
    }
    Ok(Report {
        rows,
        depolarization_thresholds: Thresholds {
            a12: SurdView::from(&depolarization_threshold(Group::A12)),
            a13: SurdView::from(&depolarization_threshold(Group::A13)),
        },
    })
}

pub fn report_json(eta: &Rational) -> Result<String> {
    let report = build_report(eta)?;
    Ok(serde_json::to_string_pretty(&report).expect("serializable") + "\n")
}
