//! Ontological models for the A₁² and A₁³ scenarios and the noncontextual
//! bounds they imply.

mod appendix_b;
mod family;
mod feasibility;
mod report;

pub use appendix_b::{appendix_b_inequalities, appendix_b_reduce, AppendixBReduction, ProbTerm};
pub use family::{analytic_mu_family, saturating_model, FamilyOutcome, FamilyViolation};
pub use feasibility::{nc_feasibility, Equivalence, FeasibilityOutcome};
pub use report::{
    depolarization_threshold, violation_report, RegionSummary, Verdict, ViolationReport,
};

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::fm::fm_project;
use crate::linalg::affine_rank;
use crate::linsys::{LinearSystem, Row};
use crate::lp::{LpOutcome, LpSolver, OptimalFace, Sense};
use crate::orbit::{sign_pattern, Group, EQUIV_CENTER_3D, EQUIV_PAIRS_3D};
use crate::polytope::{combinations, polytope_vertices, Point};
use crate::rational::{dot, int, one, rat, serde_rational, serde_rational_mat, zero, Rational};
use crate::theories::Axis;

/// Ontic states, deterministic responses and the preparations of an
/// orbit scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnticScenario {
    pub n_measurements: usize,
    pub n_ontic: usize,
    pub axes: Vec<Axis>,
    /// `plus[w][λ]` is `ξ(+1 | W, λ)`.
    pub plus: Vec<Vec<u8>>,
    /// Sign of `⟨W⟩` for each preparation, relative to the first.
    pub prep_signs: Vec<Vec<i8>>,
    pub equivalences: Vec<Equivalence>,
}

pub fn build_scenario(n: usize) -> Result<OnticScenario> {
    match n {
        2 => Ok(OnticScenario {
            n_measurements: 2,
            n_ontic: 4,
            axes: vec![Axis::X, Axis::Z],
            plus: vec![vec![0, 1, 0, 1], vec![1, 1, 0, 0]],
            prep_signs: sign_pattern(Group::A12),
            equivalences: vec![Equivalence::new(
                vec![(0, rat(1, 2)), (2, rat(1, 2))],
                vec![(1, rat(1, 2)), (3, rat(1, 2))],
            )],
        }),
        3 => {
            // λ ranges over outcome triples (x, y, z), `+` first
            let plus = (0..3)
                .map(|w| (0..8u8).map(|l| u8::from((l >> (2 - w)) & 1 == 0)).collect())
                .collect();
            let center: Vec<(usize, Rational)> = EQUIV_CENTER_3D.iter().map(|&i| (i - 1, rat(1, 4))).collect();
            let equivalences = EQUIV_PAIRS_3D
                .iter()
                .map(|&(i, j)| Equivalence::new(vec![(i - 1, rat(1, 2)), (j - 1, rat(1, 2))], center.clone()))
                .collect();
            Ok(OnticScenario {
                n_measurements: 3,
                n_ontic: 8,
                axes: Axis::ALL.to_vec(),
                plus,
                prep_signs: sign_pattern(Group::A13),
                equivalences,
            })
        }
        _ => Err(Error::InvalidParameter(format!("n = {n} (expected 2 or 3)"))),
    }
}

impl OnticScenario {
    pub fn n_preps(&self) -> usize {
        self.prep_signs.len()
    }

    pub fn n_vars(&self) -> usize {
        self.n_preps() * self.n_ontic
    }

    pub fn unit(&self) -> Vec<u8> {
        vec![1; self.n_ontic]
    }

    /// `ξ(outcome | W, ·)` for outcome `±1`.
    pub fn response(&self, w: usize, outcome: i8) -> Vec<u8> {
        if outcome > 0 {
            self.plus[w].clone()
        } else {
            self.plus[w].iter().map(|x| 1 - x).collect()
        }
    }

    /// `ξ₊ - ξ₋` for measurement `w`.
    pub fn expectation_response(&self, w: usize) -> Vec<Rational> {
        self.plus[w].iter().map(|&x| int(2 * x as i64 - 1)).collect()
    }

    pub fn var_names(&self) -> Vec<String> {
        (1..=self.n_preps())
            .flat_map(|i| (1..=self.n_ontic).map(move |l| format!("mu{i}_{l}")))
            .collect()
    }

    fn col(&self, prep: usize, lambda: usize) -> usize {
        prep * self.n_ontic + lambda
    }

    /// `⟨W⟩` of preparation `prep` as a row over all μ variables.
    pub fn expectation_row(&self, prep: usize, w: usize) -> Vec<Rational> {
        let mut a = vec![zero(); self.n_vars()];
        for (l, c) in self.expectation_response(w).into_iter().enumerate() {
            a[self.col(prep, l)] = c;
        }
        a
    }

    pub fn axis_names(&self) -> Vec<&'static str> {
        self.axes
            .iter()
            .map(|a| match a {
                Axis::X => "X",
                Axis::Y => "Y",
                Axis::Z => "Z",
            })
            .collect()
    }
}

/// Deterministic responses plus one distribution per preparation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnticModel {
    pub axes: Vec<Axis>,
    pub responses: Vec<Vec<u8>>,
    #[serde(with = "serde_rational_mat")]
    pub mus: Vec<Vec<Rational>>,
}

impl OnticModel {
    pub fn from_scenario(scenario: &OnticScenario, mus: Vec<Vec<Rational>>) -> Self {
        OnticModel { axes: scenario.axes.clone(), responses: scenario.plus.clone(), mus }
    }

    fn from_point(scenario: &OnticScenario, point: &[Rational]) -> Self {
        let mus = point.chunks(scenario.n_ontic).map(<[Rational]>::to_vec).collect();
        Self::from_scenario(scenario, mus)
    }

    pub fn probability_plus(&self, prep: usize, w: usize) -> Rational {
        self.responses[w].iter().zip(&self.mus[prep]).filter(|(&x, _)| x == 1).map(|(_, m)| m.clone()).sum()
    }

    pub fn expectation(&self, prep: usize, w: usize) -> Rational {
        int(2) * self.probability_plus(prep, w) - one()
    }

    /// `⟨W⟩` of every measurement for preparation `prep`.
    pub fn expectations(&self, prep: usize) -> Vec<Rational> {
        (0..self.responses.len()).map(|w| self.expectation(prep, w)).collect()
    }

    /// Every μ is a probability distribution.
    pub fn is_normalized(&self) -> bool {
        self.mus.iter().all(|mu| {
            mu.iter().all(|m| *m >= zero() && *m <= one()) && mu.iter().sum::<Rational>().is_one()
        })
    }

    /// The model satisfies every row of the scenario's NC system.
    pub fn satisfies(&self, scenario: &OnticScenario) -> Result<bool> {
        let nc = build_nc_system(scenario)?;
        let point: Vec<Rational> = self.mus.iter().flatten().cloned().collect();
        if point.len() != nc.system.dim() {
            return Err(Error::DimensionMismatch { expected: nc.system.dim(), got: point.len() });
        }
        Ok(nc.system.contains(&point))
    }
}

/// The NC constraint system with its `⟨W⟩` expressions for preparation 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcSystem {
    pub system: LinearSystem,
    pub expectations: Vec<(Axis, Vec<Rational>)>,
}

/// Nonnegativity, normalization, equal predictability and preparation
/// noncontextuality rows over all μ entries.
pub fn build_nc_system(scenario: &OnticScenario) -> Result<NcSystem> {
    let mut sys = LinearSystem::new(scenario.var_names());
    let n = scenario.n_vars();
    for j in 0..n {
        sys.push_sparse(&[(j, int(-1))], crate::linsys::Relation::Le, zero());
    }
    for i in 0..scenario.n_preps() {
        let terms: Vec<(usize, Rational)> = (0..scenario.n_ontic).map(|l| (scenario.col(i, l), one())).collect();
        sys.push_sparse(&terms, crate::linsys::Relation::Eq, one());
    }
    for i in 1..scenario.n_preps() {
        for w in 0..scenario.n_measurements {
            let sigma = int((scenario.prep_signs[i][w] * scenario.prep_signs[0][w]) as i64);
            let own = scenario.expectation_row(i, w);
            let first = scenario.expectation_row(0, w);
            let a = own.iter().zip(&first).map(|(x, y)| x - &sigma * y).collect();
            sys.push(Row::eq(a, zero()))?;
        }
    }
    for eq in &scenario.equivalences {
        for l in 0..scenario.n_ontic {
            let mut a = vec![zero(); n];
            for (p, wt) in &eq.lhs {
                a[scenario.col(*p, l)] += wt;
            }
            for (p, wt) in &eq.rhs {
                a[scenario.col(*p, l)] -= wt;
            }
            sys.push(Row::eq(a, zero()))?;
        }
    }
    let expectations = scenario.axes.iter().enumerate().map(|(w, a)| (*a, scenario.expectation_row(0, w))).collect();
    Ok(NcSystem { system: sys, expectations })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    #[serde(rename = "lp")]
    AnalyticLp,
    #[serde(rename = "fm")]
    Fm,
    #[serde(rename = "appendixb")]
    AppendixB,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::AnalyticLp => "lp",
            Route::Fm => "fm",
            Route::AppendixB => "appendixb",
        })
    }
}

impl FromStr for Route {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lp" => Ok(Route::AnalyticLp),
            "fm" => Ok(Route::Fm),
            "appendixb" => Ok(Route::AppendixB),
            other => Err(Error::InvalidParameter(format!("route `{other}` (expected lp, fm or appendixb)"))),
        }
    }
}

/// A facet `row` with affinely independent tight points reached by LPs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetCertificate {
    pub row: Row,
    #[serde(with = "serde_rational_mat")]
    pub tight_points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub route: Route,
    pub n: usize,
    /// Largest `Σ signᵢ⟨Wᵢ⟩` over the examined sign patterns.
    #[serde(with = "serde_rational")]
    pub optimum: Rational,
    pub model: Option<OnticModel>,
    pub facets: LinearSystem,
    #[serde(with = "serde_rational_mat")]
    pub vertices: Vec<Point>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub certificates: Vec<FacetCertificate>,
}

fn sign_objective(nc: &NcSystem, signs: &[i8]) -> Result<Vec<Rational>> {
    if signs.len() != nc.expectations.len() || signs.iter().any(|s| s.abs() != 1) {
        return Err(contract(format!("need {} signs of ±1", nc.expectations.len())));
    }
    let mut obj = vec![zero(); nc.system.dim()];
    for ((_, row), &s) in nc.expectations.iter().zip(signs) {
        for (o, c) in obj.iter_mut().zip(row) {
            *o += c * int(s as i64);
        }
    }
    Ok(obj)
}

fn signed_row(signs: &[i8], b: Rational) -> Row {
    Row::le(signs.iter().map(|&s| int(s as i64)).collect(), b)
}

/// LP maximum of `Σ signᵢ⟨Wᵢ⟩` over the NC system.
pub fn nc_max(scenario: &OnticScenario, signs: &[i8]) -> Result<BoundReport> {
    let nc = build_nc_system(scenario)?;
    let solver = LpSolver::new(&nc.system)?;
    let face = signed_face(&solver, &nc, signs)?;
    let facets = LinearSystem::new(scenario.axis_names()).with_rows([signed_row(signs, face.value.clone())])?;
    Ok(BoundReport {
        route: Route::AnalyticLp,
        n: scenario.n_measurements,
        optimum: face.value.clone(),
        model: Some(OnticModel::from_point(scenario, &face.point)),
        facets,
        vertices: Vec::new(),
        certificates: Vec::new(),
    })
}

fn signed_face<'a>(solver: &'a LpSolver, nc: &NcSystem, signs: &[i8]) -> Result<OptimalFace<'a>> {
    let obj = sign_objective(nc, signs)?;
    if !solver.is_feasible() {
        return Err(contract("noncontextuality system is infeasible"));
    }
    solver.optimal_face(&obj, Sense::Max)?.ok_or_else(|| contract("noncontextuality system is unbounded"))
}

/// All `2^n` sign patterns, `+` first.
pub fn sign_patterns(n: usize) -> Vec<Vec<i8>> {
    (0..1u32 << n)
        .map(|m| (0..n).map(|b| if (m >> (n - 1 - b)) & 1 == 0 { 1 } else { -1 }).collect())
        .collect()
}

/// The projection of the NC system onto `(⟨W₁⟩, …)` as facets and vertices.
pub fn nc_polytope(scenario: &OnticScenario, route: Route) -> Result<BoundReport> {
    let n = scenario.n_measurements;
    match route {
        Route::Fm => {
            if n != 2 {
                return Err(Error::Unsupported("Fourier–Motzkin route is only provided for n = 2".into()));
            }
            let nc = build_nc_system(scenario)?;
            let names = scenario.axis_names();
            let mut vars = nc.system.vars.clone();
            vars.extend(names.iter().map(|s| s.to_string()));
            let mut sys = LinearSystem::new(vars);
            let d = nc.system.dim();
            for r in &nc.system.rows {
                let mut a = r.a.clone();
                a.extend(std::iter::repeat_with(zero).take(n));
                sys.push(Row::new(a, r.rel, r.b.clone()))?;
            }
            for (w, (_, e)) in nc.expectations.iter().enumerate() {
                let mut a = e.clone();
                a.extend(std::iter::repeat_with(zero).take(n));
                a[d + w] = int(-1);
                sys.push(Row::eq(a, zero()))?;
            }
            let facets = fm_project(&sys, &names)?;
            let vertices = polytope_vertices(&facets)?;
            let optimum = max_signed_over(&vertices);
            Ok(BoundReport { route, n, optimum, model: None, facets, vertices, certificates: Vec::new() })
        }
        Route::AnalyticLp => {
            let nc = build_nc_system(scenario)?;
            let solver = LpSolver::new(&nc.system)?;
            let mut rows = Vec::new();
            let mut certificates = Vec::new();
            let mut optimum: Option<Rational> = None;
            let mut model = None;
            for signs in sign_patterns(n) {
                let face = signed_face(&solver, &nc, &signs)?;
                if model.is_none() {
                    model = Some(OnticModel::from_point(scenario, &face.point));
                }
                if optimum.as_ref().is_none_or(|o| face.value > *o) {
                    optimum = Some(face.value.clone());
                }
                let row = signed_row(&signs, face.value.clone());
                if let Some(points) = certify_facet(&nc, &face)? {
                    rows.push(row.clone());
                    certificates.push(FacetCertificate { row, tight_points: points });
                }
            }
            let facets = LinearSystem::new(scenario.axis_names()).with_rows(rows)?.canonicalize();
            let vertices = polytope_vertices(&facets)?;
            Ok(BoundReport {
                route,
                n,
                optimum: optimum.ok_or_else(|| contract("no sign patterns"))?,
                model,
                facets,
                vertices,
                certificates,
            })
        }
        Route::AppendixB => {
            if n != 2 {
                return Err(Error::Unsupported("the Appendix-B inequalities cover n = 2 only".into()));
            }
            let facets = appendix_b_reduce()?.reduced;
            let vertices = polytope_vertices(&facets)?;
            let optimum = max_signed_over(&vertices);
            Ok(BoundReport { route, n, optimum, model: None, facets, vertices, certificates: Vec::new() })
        }
    }
}

fn max_signed_over(vertices: &[Point]) -> Rational {
    vertices
        .iter()
        .map(|v| v.iter().map(crate::rational::abs).sum::<Rational>())
        .max()
        .unwrap_or_else(zero)
}

/// `n` affinely independent points of the face `signs·t = value`, found by
/// optimizing each `±⟨W⟩` over the face; `None` if the face is lower
/// dimensional.
fn certify_facet(nc: &NcSystem, face: &OptimalFace<'_>) -> Result<Option<Vec<Point>>> {
    let mut found: Vec<Point> = Vec::new();
    for (_, e) in &nc.expectations {
        for sense in [Sense::Max, Sense::Min] {
            if let LpOutcome::Optimal { point, .. } = face.refine(e, sense)? {
                let t: Point = nc.expectations.iter().map(|(_, r)| dot(r, &point)).collect();
                if !found.contains(&t) {
                    found.push(t);
                }
            }
        }
    }
    let dim = nc.expectations.len();
    for subset in combinations(found.len(), dim) {
        let pts: Vec<Point> = subset.iter().map(|&i| found[i].clone()).collect();
        if affine_rank(&pts) == dim - 1 {
            return Ok(Some(pts));
        }
    }
    Ok(None)
}

/// `⟨W⟩` for every preparation of a flat μ point.
pub fn model_expectations(model: &OnticModel) -> Vec<Vec<Rational>> {
    (0..model.mus.len()).map(|i| model.expectations(i)).collect()
}

pub(crate) fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn scenario_conventions() {
        let s = build_scenario(2).unwrap();
        assert_eq!(s.response(0, 1), vec![0, 1, 0, 1]);
        assert_eq!(s.response(1, -1), vec![0, 0, 1, 1]);
        let s3 = build_scenario(3).unwrap();
        for w in 0..3 {
            assert_eq!(s3.plus[w].iter().filter(|&&x| x == 1).count(), 4);
            let sum: Vec<u8> = s3.response(w, 1).iter().zip(s3.response(w, -1)).map(|(a, b)| a + b).collect();
            assert_eq!(sum, s3.unit());
        }
        assert!(build_scenario(4).is_err());
    }

    #[test]
    fn uniform_model_is_feasible() {
        for n in [2, 3] {
            let s = build_scenario(n).unwrap();
            let q = rat(1, s.n_ontic as i64);
            let model = OnticModel::from_scenario(&s, vec![vec![q; s.n_ontic]; s.n_preps()]);
            assert!(model.satisfies(&s).unwrap());
        }
    }

    #[test]
    fn n2_bound_is_one_for_every_pattern() {
        let s = build_scenario(2).unwrap();
        for signs in sign_patterns(2) {
            let r = nc_max(&s, &signs).unwrap();
            assert_eq!(r.optimum, one(), "{signs:?}");
            let m = r.model.unwrap();
            assert!(m.satisfies(&s).unwrap());
        }
    }

    #[test]
    fn diamond_by_fm_and_lp() {
        let s = build_scenario(2).unwrap();
        let fm = nc_polytope(&s, Route::Fm).unwrap();
        let lp = nc_polytope(&s, Route::AnalyticLp).unwrap();
        assert!(fm.facets.same_rows(&lp.facets));
        assert_eq!(fm.facets.rows.len(), 4);
        let v: BTreeSet<Point> = lp.vertices.into_iter().collect();
        let expect: BTreeSet<Point> =
            [[1, 0], [-1, 0], [0, 1], [0, -1]].iter().map(|p| vec![int(p[0]), int(p[1])]).collect();
        assert_eq!(v, expect);
        assert_eq!(lp.certificates.len(), 4);
    }

    #[test]
    fn fm_route_rejects_n3() {
        let s = build_scenario(3).unwrap();
        assert!(matches!(nc_polytope(&s, Route::Fm), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bad_sign_vector() {
        let s = build_scenario(2).unwrap();
        assert!(matches!(nc_max(&s, &[1]), Err(Error::Contract(_))));
        assert!(matches!(nc_max(&s, &[1, 0]), Err(Error::Contract(_))));
    }
}
