//! Exact rational linear programming.
//!
//! Dense two-phase tableau simplex with Bland's rule. Variables of a
//! [`LinearSystem`] are free unless the system contains a plain sign row
//! `-x <= 0`, in which case the variable gets a single nonnegative column
//! and the row is dropped; every other free variable is split as `x+ - x-`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linsys::{LinearSystem, Relation, Row};
use crate::rational::{dot, one, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// Optimizes `objective · x` over `system`.
pub fn lp_solve(system: &LinearSystem, objective: &[Rational], sense: Sense) -> Result<LpOutcome> {
    LpSolver::new(system)?.solve(objective, sense)
}

/// A system with phase one already done, for repeated objectives.
pub struct LpSolver {
    std: StandardForm,
    dim: usize,
    start: Option<Tableau>,
}

/// An optimal basis. [`OptimalFace::refine`] optimizes a second objective
/// over the face of optimal points.
pub struct OptimalFace<'a> {
    solver: &'a LpSolver,
    tab: Tableau,
    mask: Vec<bool>,
    pub value: Rational,
    pub point: Vec<Rational>,
}

impl LpSolver {
    pub fn new(system: &LinearSystem) -> Result<Self> {
        system.check_shape()?;
        let std = StandardForm::build(system);
        let start = Tableau::phase_one(&std);
        Ok(LpSolver { std, dim: system.dim(), start })
    }

    pub fn is_feasible(&self) -> bool {
        self.start.is_some()
    }

    pub fn solve(&self, objective: &[Rational], sense: Sense) -> Result<LpOutcome> {
        let cost = self.cost(objective, sense)?;
        let Some(mut tab) = self.start.clone() else { return Ok(LpOutcome::Infeasible) };
        if !tab.optimize(&cost, None) {
            return Ok(LpOutcome::Unbounded);
        }
        Ok(self.outcome(objective, &tab))
    }

    /// The optimal face for `objective`, or `None` when the system is
    /// infeasible or the objective unbounded.
    pub fn optimal_face(&self, objective: &[Rational], sense: Sense) -> Result<Option<OptimalFace<'_>>> {
        let cost = self.cost(objective, sense)?;
        let Some(mut tab) = self.start.clone() else { return Ok(None) };
        if !tab.optimize(&cost, None) {
            return Ok(None);
        }
        let mask = (0..tab.n_enterable).map(|j| tab.reduced_cost(&cost, j).is_zero()).collect();
        let LpOutcome::Optimal { value, point } = self.outcome(objective, &tab) else { unreachable!() };
        Ok(Some(OptimalFace { solver: self, tab, mask, value, point }))
    }

    fn cost(&self, objective: &[Rational], sense: Sense) -> Result<Vec<Rational>> {
        if objective.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: objective.len() });
        }
        let mut cost: Vec<Rational> = vec![Rational::zero(); self.std.n_cols];
        for (j, c) in objective.iter().enumerate() {
            let c = match sense {
                Sense::Max => -c.clone(),
                Sense::Min => c.clone(),
            };
            let (pos, neg) = self.std.columns[j];
            if let Some(n) = neg {
                cost[n] = -c.clone();
            }
            cost[pos] = c;
        }
        Ok(cost)
    }

    fn outcome(&self, objective: &[Rational], tab: &Tableau) -> LpOutcome {
        let point = self.std.recover(&tab.primal());
        let value = dot(objective, &point);
        LpOutcome::Optimal { value, point }
    }
}

impl OptimalFace<'_> {
    pub fn refine(&self, objective: &[Rational], sense: Sense) -> Result<LpOutcome> {
        let cost = self.solver.cost(objective, sense)?;
        let mut tab = self.tab.clone();
        if !tab.optimize(&cost, Some(&self.mask)) {
            return Ok(LpOutcome::Unbounded);
        }
        Ok(self.solver.outcome(objective, &tab))
    }
}

/// Some point of the system, or `None` when it is empty.
pub fn feasible_point(system: &LinearSystem) -> Result<Option<Vec<Rational>>> {
    let zero = vec![Rational::zero(); system.dim()];
    Ok(lp_solve(system, &zero, Sense::Max)?.point().map(<[_]>::to_vec))
}

pub fn is_feasible(system: &LinearSystem) -> Result<bool> {
    Ok(feasible_point(system)?.is_some())
}

/// Row multipliers proving that a system has no solution: nonnegative on
/// `<=` rows, free on `=` rows, combining to `0·x <= -1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    #[serde(with = "crate::rational::serde_rational_vec")]
    pub multipliers: Vec<Rational>,
}

impl FarkasCertificate {
    /// Exact check of the certificate against `system`.
    pub fn verify(&self, system: &LinearSystem) -> bool {
        if self.multipliers.len() != system.rows.len() {
            return false;
        }
        let mut combo = vec![Rational::zero(); system.dim()];
        let mut rhs = Rational::zero();
        for (y, row) in self.multipliers.iter().zip(&system.rows) {
            if row.rel == Relation::Le && y.is_negative() {
                return false;
            }
            for (c, a) in combo.iter_mut().zip(&row.a) {
                *c += y * a;
            }
            rhs += y * &row.b;
        }
        combo.iter().all(Zero::is_zero) && rhs.is_negative()
    }
}

/// A Farkas certificate when `system` is infeasible, `None` otherwise.
pub fn farkas_certificate(system: &LinearSystem) -> Result<Option<FarkasCertificate>> {
    system.check_shape()?;
    let m = system.rows.len();
    let names: Vec<String> = (0..m).map(|i| format!("y{i}")).collect();
    let mut dual = LinearSystem::new(names);
    for j in 0..system.dim() {
        let terms: Vec<(usize, Rational)> = system
            .rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.a[j].is_zero())
            .map(|(i, r)| (i, r.a[j].clone()))
            .collect();
        dual.push_sparse(&terms, Relation::Eq, Rational::zero());
    }
    let terms: Vec<(usize, Rational)> = system
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| (i, r.b.clone()))
        .collect();
    dual.push_sparse(&terms, Relation::Eq, -one());
    for (i, r) in system.rows.iter().enumerate() {
        if r.rel == Relation::Le {
            dual.push_sparse(&[(i, -one())], Relation::Le, Rational::zero());
        }
    }
    Ok(feasible_point(&dual)?.map(|multipliers| FarkasCertificate { multipliers }))
}

/// `A x = b, x >= 0` with `b >= 0` after sign fixes.
struct StandardForm {
    /// Per original variable: positive column and optional negative column.
    columns: Vec<(usize, Option<usize>)>,
    n_cols: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Row whose slack column can start in the basis.
    slack_basis: Vec<Option<usize>>,
}

impl StandardForm {
    fn build(system: &LinearSystem) -> Self {
        let n = system.dim();
        let mut nonneg = vec![false; n];
        let mut keep: Vec<&Row> = Vec::with_capacity(system.rows.len());
        for row in &system.rows {
            if let Some(j) = sign_row_var(row) {
                nonneg[j] = true;
            } else {
                keep.push(row);
            }
        }
        let mut columns = Vec::with_capacity(n);
        let mut n_cols = 0;
        for &nn in &nonneg {
            if nn {
                columns.push((n_cols, None));
                n_cols += 1;
            } else {
                columns.push((n_cols, Some(n_cols + 1)));
                n_cols += 2;
            }
        }
        let n_slack = keep.iter().filter(|r| r.rel == Relation::Le).count();
        let total = n_cols + n_slack;
        let mut rows = Vec::with_capacity(keep.len());
        let mut rhs = Vec::with_capacity(keep.len());
        let mut slack_basis = Vec::with_capacity(keep.len());
        let mut next_slack = n_cols;
        for row in keep {
            let mut coeffs = vec![Rational::zero(); total];
            for (j, a) in row.a.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                let (p, q) = columns[j];
                coeffs[p] = a.clone();
                if let Some(q) = q {
                    coeffs[q] = -a.clone();
                }
            }
            let mut slack = None;
            if row.rel == Relation::Le {
                coeffs[next_slack] = one();
                slack = Some(next_slack);
                next_slack += 1;
            }
            let mut b = row.b.clone();
            if b.is_negative() {
                coeffs.iter_mut().for_each(|c| *c = -c.clone());
                b = -b;
                slack = None;
            }
            rows.push(coeffs);
            rhs.push(b);
            slack_basis.push(slack);
        }
        StandardForm { columns, n_cols: total, rows, rhs, slack_basis }
    }

    fn recover(&self, primal: &[Rational]) -> Vec<Rational> {
        self.columns
            .iter()
            .map(|&(p, q)| match q {
                Some(q) => &primal[p] - &primal[q],
                None => primal[p].clone(),
            })
            .collect()
    }
}

/// `-c·x <= 0` with `c > 0` and a single nonzero coefficient.
fn sign_row_var(row: &Row) -> Option<usize> {
    if row.rel != Relation::Le || !row.b.is_zero() {
        return None;
    }
    let mut found = None;
    for (j, a) in row.a.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if found.is_some() || !a.is_negative() {
            return None;
        }
        found = Some(j);
    }
    found
}

#[derive(Clone)]
struct Tableau {
    /// Constraint rows; last entry of each is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Column count including the right-hand side.
    width: usize,
    /// Columns allowed to enter (artificials are barred after phase one).
    n_enterable: usize,
}

impl Tableau {
    /// Runs phase one. `None` when the system is infeasible.
    fn phase_one(std: &StandardForm) -> Option<Tableau> {
        let m = std.rows.len();
        let n = std.n_cols;
        let n_art = std.slack_basis.iter().filter(|s| s.is_none()).count();
        let width = n + n_art + 1;
        let mut t = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_art = n;
        for i in 0..m {
            let mut row = vec![Rational::zero(); width];
            row[..n].clone_from_slice(&std.rows[i]);
            row[width - 1] = std.rhs[i].clone();
            match std.slack_basis[i] {
                Some(s) => basis.push(s),
                None => {
                    row[next_art] = one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            t.push(row);
        }
        let mut tab = Tableau { t, basis, width, n_enterable: n + n_art };
        if n_art > 0 {
            let mut cost = vec![Rational::zero(); n + n_art];
            cost[n..].iter_mut().for_each(|c| *c = one());
            let bounded = tab.optimize(&cost, None);
            debug_assert!(bounded, "phase one is bounded below by zero");
            let residual: Rational = tab
                .basis
                .iter()
                .zip(&tab.t)
                .filter(|(&b, _)| b >= n)
                .map(|(_, row)| row[width - 1].clone())
                .sum();
            if residual.is_positive() {
                return None;
            }
            tab.evict_artificials(n);
            for row in tab.t.iter_mut() {
                row.drain(n..width - 1);
            }
            tab.width = n + 1;
        }
        tab.n_enterable = n;
        Some(tab)
    }

    /// Pivots zero-level artificials out of the basis; rows where that is
    /// impossible are linearly dependent and get dropped.
    fn evict_artificials(&mut self, n: usize) {
        let mut i = 0;
        while i < self.t.len() {
            if self.basis[i] < n {
                i += 1;
                continue;
            }
            match (0..n).find(|&j| !self.t[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.t.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        if !p.is_zero() && p != one() {
            for v in self.t[r].iter_mut() {
                if !v.is_zero() {
                    *v = &*v / &p;
                }
            }
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost.get(j).cloned().unwrap_or_else(Rational::zero);
        for (row, &b) in self.t.iter().zip(&self.basis) {
            if let Some(cb) = cost.get(b) {
                if !cb.is_zero() && !row[j].is_zero() {
                    d -= cb * &row[j];
                }
            }
        }
        d
    }

    /// Minimizes `cost · x` from the current feasible basis, entering only
    /// columns allowed by `mask`. Returns false when unbounded.
    fn optimize(&mut self, cost: &[Rational], mask: Option<&[bool]>) -> bool {
        let rhs = self.width - 1;
        loop {
            // Bland: lowest-index column with negative reduced cost.
            let entering = (0..self.n_enterable).find(|&j| {
                mask.is_none_or(|m| m[j]) && !self.basis.contains(&j) && self.reduced_cost(cost, j).is_negative()
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.t.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((i, _)) => self.pivot(i, j),
                None => return false,
            }
        }
    }

    fn primal(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.width - 1];
        for (row, &b) in self.t.iter().zip(&self.basis) {
            x[b] = row[self.width - 1].clone();
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn sys(vars: &[&str], rows: Vec<Row>) -> LinearSystem {
        LinearSystem::new(vars.iter().copied()).with_rows(rows).unwrap()
    }

    #[test]
    fn single_variable_box() {
        let s = sys(&["x"], vec![Row::le(vec![int(1)], int(1)), Row::le(vec![int(-1)], int(1))]);
        let out = lp_solve(&s, &[int(1)], Sense::Max).unwrap();
        assert_eq!(out, LpOutcome::Optimal { value: int(1), point: vec![int(1)] });
        let out = lp_solve(&s, &[int(1)], Sense::Min).unwrap();
        assert_eq!(out.value(), Some(&int(-1)));
    }

    #[test]
    fn simplex_face() {
        let s = sys(
            &["x", "y"],
            vec![
                Row::le(vec![int(1), int(0)], int(1)),
                Row::le(vec![int(0), int(1)], int(1)),
                Row::le(vec![int(1), int(1)], int(1)),
            ],
        );
        let out = lp_solve(&s, &[int(1), int(1)], Sense::Max).unwrap();
        assert_eq!(out.value(), Some(&int(1)));
        assert!(s.contains(out.point().unwrap()));
    }

    #[test]
    fn detects_unbounded_and_infeasible() {
        let s = sys(&["x"], vec![Row::le(vec![int(1)], int(1))]);
        assert_eq!(lp_solve(&s, &[int(1)], Sense::Min).unwrap(), LpOutcome::Unbounded);
        let s = sys(&["x"], vec![Row::le(vec![int(1)], int(0)), Row::ge(vec![int(1)], int(1))]);
        assert_eq!(lp_solve(&s, &[int(1)], Sense::Max).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn equalities_and_sign_rows() {
        // x + y = 1, x,y >= 0, max 3x + 2y
        let s = sys(
            &["x", "y"],
            vec![
                Row::eq(vec![int(1), int(1)], int(1)),
                Row::le(vec![int(-1), int(0)], int(0)),
                Row::le(vec![int(0), int(-1)], int(0)),
            ],
        );
        let out = lp_solve(&s, &[int(3), int(2)], Sense::Max).unwrap();
        assert_eq!(out, LpOutcome::Optimal { value: int(3), point: vec![int(1), int(0)] });
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let s = sys(
            &["x", "y"],
            vec![
                Row::eq(vec![int(1), int(1)], int(1)),
                Row::eq(vec![int(2), int(2)], int(2)),
                Row::le(vec![int(1), int(0)], rat(1, 3)),
                Row::le(vec![int(-1), int(0)], int(0)),
            ],
        );
        let out = lp_solve(&s, &[int(0), int(1)], Sense::Min).unwrap();
        assert_eq!(out.value(), Some(&rat(2, 3)));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the textbook largest-coefficient rule.
        let s = sys(
            &["x1", "x2", "x3", "x4"],
            vec![
                Row::le(vec![rat(1, 4), int(-60), rat(-1, 25), int(9)], int(0)),
                Row::le(vec![rat(1, 2), int(-90), rat(-1, 50), int(3)], int(0)),
                Row::le(vec![int(0), int(0), int(1), int(0)], int(1)),
                Row::le(vec![int(-1), int(0), int(0), int(0)], int(0)),
                Row::le(vec![int(0), int(-1), int(0), int(0)], int(0)),
                Row::le(vec![int(0), int(0), int(-1), int(0)], int(0)),
                Row::le(vec![int(0), int(0), int(0), int(-1)], int(0)),
            ],
        );
        let out = lp_solve(&s, &[rat(3, 4), int(-150), rat(1, 50), int(-6)], Sense::Max).unwrap();
        assert_eq!(out.value(), Some(&rat(1, 20)));
    }

    #[test]
    fn objective_length_checked() {
        let s = sys(&["x"], vec![]);
        assert!(matches!(lp_solve(&s, &[int(1), int(2)], Sense::Max), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn farkas_certificate_for_empty_interval() {
        let s = sys(&["x"], vec![Row::le(vec![int(1)], int(0)), Row::ge(vec![int(1)], int(1))]);
        let cert = farkas_certificate(&s).unwrap().expect("infeasible");
        assert!(cert.verify(&s));
        let ok = sys(&["x"], vec![Row::le(vec![int(1)], int(0))]);
        assert!(farkas_certificate(&ok).unwrap().is_none());
        assert!(!cert.verify(&ok) || ok.rows.len() != s.rows.len());
    }
}
