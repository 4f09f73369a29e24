//! Convex bodies: H/V-polytopes and balls.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::linalg::{affine_rank, nullspace, solve_square};
use crate::linsys::{LinearSystem, Relation, Row};
use crate::lp::{is_feasible, lp_solve, LpOutcome, Sense};
use crate::rational::{dot, one, serde_rational, serde_rational_mat, serde_rational_vec, Rational};
use crate::surd::Surd;

pub type Point = Vec<Rational>;

/// A polytope with either or both representations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polytope {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hrep: Option<LinearSystem>,
    #[serde(with = "opt_points", skip_serializing_if = "Option::is_none", default)]
    pub vrep: Option<Vec<Point>>,
}

mod opt_points {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Point>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(points) => serde_rational_mat::serialize(points, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Point>>, D::Error> {
        serde_rational_mat::deserialize(d).map(Some)
    }
}

impl Polytope {
    /// V-polytope with its facets computed eagerly. The points must span a
    /// full-dimensional body.
    pub fn from_vertices(points: Vec<Point>, var_names: &[&str]) -> Result<Self> {
        let hrep = hull_facets(&points, var_names)?;
        let vrep = extreme_points(&points, &hrep);
        Ok(Self { hrep: Some(hrep), vrep: Some(vrep) })
    }

    /// H-polytope with its vertices computed eagerly. Must be bounded.
    pub fn from_hrep(hrep: LinearSystem) -> Result<Self> {
        let vrep = polytope_vertices(&hrep)?;
        Ok(Self { hrep: Some(hrep), vrep: Some(vrep) })
    }

    pub fn dim(&self) -> Option<usize> {
        self.hrep
            .as_ref()
            .map(LinearSystem::dim)
            .or_else(|| self.vrep.as_ref().and_then(|v| v.first().map(Vec::len)))
    }

    pub fn vertices(&self) -> Result<Vec<Point>> {
        match (&self.vrep, &self.hrep) {
            (Some(v), _) => Ok(v.clone()),
            (None, Some(h)) => polytope_vertices(h),
            (None, None) => Err(contract("polytope has neither representation")),
        }
    }

    pub fn contains(&self, p: &[Rational]) -> Result<bool> {
        if let Some(h) = &self.hrep {
            if p.len() != h.dim() {
                return Err(Error::DimensionMismatch { expected: h.dim(), got: p.len() });
            }
            return Ok(h.contains(p));
        }
        match &self.vrep {
            Some(v) => in_convex_hull(v, p),
            None => Err(contract("polytope has neither representation")),
        }
    }

    /// Both representations present and mutually consistent: every vertex
    /// satisfies every row and every `<=` row is tight at some vertex.
    pub fn is_consistent(&self) -> bool {
        let (Some(h), Some(v)) = (&self.hrep, &self.vrep) else { return true };
        v.iter().all(|p| h.contains(p))
            && h.rows
                .iter()
                .filter(|r| r.rel == Relation::Le)
                .all(|r| v.iter().any(|p| dot(&r.a, p) == r.b))
    }
}

/// A convex body: polytope or Euclidean ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Body {
    Polytope(Polytope),
    Ball {
        #[serde(with = "serde_rational_vec")]
        center: Point,
        #[serde(with = "serde_rational")]
        radius: Rational,
    },
}

/// `max { d·x : x ∈ body }`, exact. Balls give `d·c + r·√(‖d‖²)`.
pub fn support_function(body: &Body, direction: &[Rational]) -> Result<Surd> {
    if direction.iter().all(Zero::is_zero) {
        return Err(contract("support direction must be nonzero"));
    }
    match body {
        Body::Ball { center, radius } => {
            if center.len() != direction.len() {
                return Err(Error::DimensionMismatch { expected: center.len(), got: direction.len() });
            }
            let norm2 = dot(direction, direction);
            let root = Surd::sqrt(&norm2)?.scale(radius);
            Ok(root.checked_add(&Surd::rational(dot(direction, center)))?)
        }
        Body::Polytope(p) => polytope_support(p, direction).map(Surd::rational),
    }
}

pub fn polytope_support(p: &Polytope, direction: &[Rational]) -> Result<Rational> {
    if let Some(v) = &p.vrep {
        return v
            .iter()
            .map(|x| {
                if x.len() != direction.len() {
                    Err(Error::DimensionMismatch { expected: x.len(), got: direction.len() })
                } else {
                    Ok(dot(direction, x))
                }
            })
            .try_fold(None::<Rational>, |best, val| {
                let val = val?;
                Ok(Some(match best {
                    Some(b) if b >= val => b,
                    _ => val,
                }))
            })?
            .ok_or(Error::Infeasible);
    }
    match &p.hrep {
        Some(h) => match lp_solve(h, direction, Sense::Max)? {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Unbounded => Err(Error::Unbounded),
            LpOutcome::Infeasible => Err(Error::Infeasible),
        },
        None => Err(contract("polytope has neither representation")),
    }
}

/// Every extreme point of a bounded H-polytope, sorted and deduplicated.
///
/// Brute force over `dim`-subsets of rows; meant for dimension at most 4.
pub fn polytope_vertices(hrep: &LinearSystem) -> Result<Vec<Point>> {
    hrep.check_shape()?;
    let d = hrep.dim();
    if d == 0 {
        return Err(contract("zero-dimensional system"));
    }
    if !is_feasible(hrep)? {
        return Err(Error::Infeasible);
    }
    for j in 0..d {
        let mut e = vec![Rational::zero(); d];
        e[j] = one();
        for sense in [Sense::Max, Sense::Min] {
            if lp_solve(hrep, &e, sense)? == LpOutcome::Unbounded {
                return Err(Error::Unbounded);
            }
        }
    }
    let rows: Vec<Row> = hrep.canonicalize().rows.iter().flat_map(Row::as_inequalities).collect();
    let mut found = BTreeSet::new();
    for subset in combinations(rows.len(), d) {
        let a: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].a.clone()).collect();
        let b: Vec<Rational> = subset.iter().map(|&i| rows[i].b.clone()).collect();
        if let Some(x) = solve_square(&a, &b) {
            if hrep.contains(&x) {
                found.insert(x);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Facet inequalities of the convex hull of full-dimensional `points`.
pub fn hull_facets(points: &[Point], var_names: &[&str]) -> Result<LinearSystem> {
    let pts: Vec<Point> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let d = var_names.len();
    if pts.iter().any(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: pts.iter().map(Vec::len).find(|&l| l != d).unwrap_or(0) });
    }
    if pts.len() <= d || affine_rank(&pts) < d {
        return Err(contract("point set is not full-dimensional"));
    }
    let mut facets = BTreeSet::new();
    for subset in combinations(pts.len(), d) {
        let base = &pts[subset[0]];
        let diffs: Vec<Vec<Rational>> = subset[1..]
            .iter()
            .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let ns = nullspace(&diffs, d);
        if ns.len() != 1 {
            continue;
        }
        let mut normal = ns.into_iter().next().expect("one vector");
        let mut offset = dot(&normal, base);
        let mut above = false;
        let mut below = false;
        for p in &pts {
            let v = dot(&normal, p);
            above |= v > offset;
            below |= v < offset;
        }
        if above && below {
            continue;
        }
        if above {
            normal.iter_mut().for_each(|c| *c = -c.clone());
            offset = -offset;
        }
        facets.insert(Row::le(normal, offset).canonical());
    }
    let mut sys = LinearSystem::new(var_names.iter().copied());
    sys.rows = facets.into_iter().collect();
    Ok(sys)
}

/// The members of `points` that are vertices of their hull (given its facets).
fn extreme_points(points: &[Point], hrep: &LinearSystem) -> Vec<Point> {
    let d = hrep.dim();
    let unique: BTreeSet<Point> = points.iter().cloned().collect();
    unique
        .into_iter()
        .filter(|p| {
            let tight: Vec<Vec<Rational>> =
                hrep.rows.iter().filter(|r| dot(&r.a, p) == r.b).map(|r| r.a.clone()).collect();
            crate::linalg::rank(&tight, d) == d
        })
        .collect()
}

/// LP membership in the convex hull of `vertices`.
pub fn in_convex_hull(vertices: &[Point], p: &[Rational]) -> Result<bool> {
    let n = vertices.len();
    let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let mut sys = LinearSystem::new(names);
    for i in 0..n {
        sys.push_sparse(&[(i, -one())], Relation::Le, Rational::zero());
    }
    let all: Vec<(usize, Rational)> = (0..n).map(|i| (i, one())).collect();
    sys.push_sparse(&all, Relation::Eq, one());
    for (k, pk) in p.iter().enumerate() {
        let terms: Vec<(usize, Rational)> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.get(k)
                    .cloned()
                    .map(|c| (i, c))
                    .ok_or(Error::DimensionMismatch { expected: p.len(), got: v.len() })
            })
            .collect::<Result<_>>()?;
        sys.push_sparse(&terms, Relation::Eq, pk.clone());
    }
    is_feasible(&sys)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return out };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Coordinate projection of a point list, deduplicated.
pub fn project_points(points: &[Point], coords: &[usize]) -> Vec<Point> {
    points
        .iter()
        .map(|p| coords.iter().map(|&c| p[c].clone()).collect::<Point>())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Largest `Σ|x_i|` over `points`, with the first point attaining it.
pub fn max_abs_sum(points: &[Point]) -> Option<(Rational, Point)> {
    points
        .iter()
        .map(|p| (p.iter().map(Signed::abs).sum::<Rational>(), p.clone()))
        .fold(None, |best, (v, p)| match best {
            Some((bv, bp)) if bv >= v => Some((bv, bp)),
            _ => Some((v, p)),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pt(c: &[i64]) -> Point {
        c.iter().map(|&x| int(x)).collect()
    }

    fn signed_units(d: usize) -> Vec<Point> {
        let mut v = Vec::new();
        for i in 0..d {
            for s in [1, -1] {
                let mut p = vec![int(0); d];
                p[i] = int(s);
                v.push(p);
            }
        }
        v
    }

    #[test]
    fn cube_support() {
        let cube: Vec<Point> = (0..8)
            .map(|m| (0..3).map(|b| int(if m >> b & 1 == 1 { 1 } else { 0 })).collect())
            .collect();
        let body = Body::Polytope(Polytope { hrep: None, vrep: Some(cube) });
        assert_eq!(support_function(&body, &pt(&[1, 1, 1])).unwrap(), Surd::rational(int(3)));
    }

    #[test]
    fn octahedron_support() {
        let body = Body::Polytope(Polytope { hrep: None, vrep: Some(signed_units(3)) });
        assert_eq!(support_function(&body, &pt(&[1, 1, 0])).unwrap(), Surd::rational(int(1)));
    }

    #[test]
    fn ball_support_is_surd() {
        let body = Body::Ball { center: pt(&[0, 0, 0]), radius: int(1) };
        assert_eq!(support_function(&body, &pt(&[1, 0, 1])).unwrap(), Surd::radical(int(1), 2));
    }

    #[test]
    fn support_rejects_zero_direction_and_empty_body() {
        let body = Body::Ball { center: pt(&[0, 0]), radius: int(1) };
        assert!(support_function(&body, &pt(&[0, 0])).is_err());
        let empty = Body::Polytope(Polytope { hrep: None, vrep: None });
        assert!(matches!(support_function(&empty, &pt(&[1, 0])), Err(Error::Contract(_))));
    }

    #[test]
    fn square_vertices() {
        let sq = LinearSystem::new(["x", "y"])
            .with_rows([
                Row::le(pt(&[1, 0]), int(1)),
                Row::le(pt(&[-1, 0]), int(1)),
                Row::le(pt(&[0, 1]), int(1)),
                Row::le(pt(&[0, -1]), int(1)),
            ])
            .unwrap();
        let v = polytope_vertices(&sq).unwrap();
        assert_eq!(v, vec![pt(&[-1, -1]), pt(&[-1, 1]), pt(&[1, -1]), pt(&[1, 1])]);
    }

    #[test]
    fn unbounded_vertex_enumeration_errors() {
        let half = LinearSystem::new(["x", "y"]).with_rows([Row::le(pt(&[1, 0]), int(1))]).unwrap();
        assert_eq!(polytope_vertices(&half), Err(Error::Unbounded));
    }

    #[test]
    fn octahedron_round_trip() {
        let p = Polytope::from_vertices(signed_units(3), &["x", "y", "z"]).unwrap();
        let h = p.hrep.as_ref().unwrap();
        assert_eq!(h.rows.len(), 8);
        assert!(h.rows.iter().all(|r| r.b == int(1) && r.a.iter().all(|c| c.abs() == int(1))));
        assert_eq!(polytope_vertices(h).unwrap().len(), 6);
        assert!(p.is_consistent());
    }

    #[test]
    fn interior_points_are_not_vertices() {
        let mut pts = signed_units(2);
        pts.push(pt(&[0, 0]));
        let p = Polytope::from_vertices(pts, &["x", "z"]).unwrap();
        assert_eq!(p.vrep.unwrap().len(), 4);
    }

    #[test]
    fn hull_membership_by_lp() {
        let v = signed_units(2);
        assert!(in_convex_hull(&v, &[crate::rational::rat(1, 2), crate::rational::rat(1, 2)]).unwrap());
        assert!(!in_convex_hull(&v, &[crate::rational::rat(3, 4), crate::rational::rat(1, 2)]).unwrap());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
    }
}
