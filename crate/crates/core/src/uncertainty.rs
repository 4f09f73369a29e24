//! Predictabilities, uncertainty relations and boundary curves.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{support_function, Body, Point};
use crate::rational::{abs, half, int, one, rat, serde_rational, serde_rational_vec, zero, Rational};
use crate::surd::Surd;
use crate::theories::{expectation, Axis, Measurement, RepVector, TheorySpec};

pub fn predictability(s: &RepVector, m: &Measurement) -> Rational {
    abs(&expectation(s, m))
}

/// `|coords[axis]|` for a state with surd coordinates.
pub fn predictability_surd(coords: &[Surd], axis: Axis) -> Surd {
    coords[axis.coord()].abs()
}

/// Parses `xz` / `xyz`.
pub fn parse_axes(text: &str) -> Result<Vec<Axis>> {
    match text.to_ascii_lowercase().as_str() {
        "xz" => Ok(vec![Axis::X, Axis::Z]),
        "xyz" => Ok(vec![Axis::X, Axis::Y, Axis::Z]),
        other => Err(Error::InvalidParameter(format!("axes `{other}` (expected xz or xyz)"))),
    }
}

fn lift(axes: &[Axis], d: &[Rational]) -> Result<Point> {
    if axes.len() != d.len() {
        return Err(Error::DimensionMismatch { expected: axes.len(), got: d.len() });
    }
    let mut full = vec![zero(), zero(), zero()];
    for (a, v) in axes.iter().zip(d) {
        full[a.coord()] = v.clone();
    }
    Ok(full)
}

/// Support of the theory's body projected onto `axes`, in direction `d`.
pub fn ur_support(theory: &TheorySpec, axes: &[Axis], d: &[Rational]) -> Result<Surd> {
    support_function(&theory.body, &lift(axes, d)?)
}

/// `n` rational unit vectors on the circle, in counterclockwise order
/// starting at `(1, 0)`.
pub fn circle_directions(n: usize) -> Result<Vec<Point>> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("n = {n} (need at least 4 directions)")));
    }
    let n_r = int(n as i64);
    Ok((0..n)
        .map(|k| {
            let u = int(4 * k as i64) / &n_r;
            let q = u.floor();
            let t = &u - &q;
            let t2 = &t * &t;
            let den = one() + &t2;
            let (x, y) = ((one() - &t2) / &den, (int(2) * &t) / &den);
            match q.to_integer().try_into().unwrap_or(0i64) {
                0 => vec![x, y],
                1 => vec![-y, x],
                2 => vec![-x, -y],
                _ => vec![y, -x],
            }
        })
        .collect())
}

/// `n` distinct rational unit vectors on the sphere: the six axis
/// directions, then inverse stereographic images of a widening grid.
pub fn sphere_directions(n: usize) -> Result<Vec<Point>> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("n = {n} (need at least 4 directions)")));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    let mut push = |p: Point, out: &mut Vec<Point>| {
        if out.len() < n && seen.insert(p.clone()) {
            out.push(p);
        }
    };
    for i in 0..3 {
        for s in [1, -1] {
            let mut p = vec![zero(), zero(), zero()];
            p[i] = int(s);
            push(p, &mut out);
        }
    }
    let mut q = 1i64;
    while out.len() < n {
        for a in -2 * q..=2 * q {
            for b in -2 * q..=2 * q {
                let (u, v) = (rat(a, q), rat(b, q));
                let r2 = &u * &u + &v * &v;
                let den = &r2 + one();
                let p = vec![int(2) * &u / &den, int(2) * &v / &den, (&r2 - one()) / &den];
                push(p, &mut out);
            }
        }
        q += 1;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    #[serde(with = "serde_rational_vec")]
    pub direction: Point,
    pub support: Surd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub theory: String,
    pub axes: Vec<Axis>,
    /// Set when an axis lies outside the theory's measurement subset and
    /// the curve is a purely geometric comparison.
    pub geometric_only: bool,
    pub points: Vec<BoundaryPoint>,
}

/// Supports of the projected body along `n` rational directions.
pub fn ur_boundary(theory: &TheorySpec, axes: &[Axis], n: usize) -> Result<BoundaryCurve> {
    let dirs = match axes.len() {
        2 => circle_directions(n)?,
        3 => sphere_directions(n)?,
        k => return Err(Error::DimensionMismatch { expected: 3, got: k }),
    };
    let points = dirs
        .into_iter()
        .map(|d| Ok(BoundaryPoint { support: ur_support(theory, axes, &d)?, direction: d }))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryCurve {
        theory: theory.name.clone(),
        axes: axes.to_vec(),
        geometric_only: axes.iter().any(|a| !theory.has_measurement(*a)),
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UrKind {
    /// `Σ|t_w| <= B`
    AbsSum,
    /// `Σ t_w² <= B`
    Expectation,
    /// `Σ Δw² >= B`
    Variance,
    /// `Σ C_w² <= B`
    Certainty,
    /// `Σ (p_w - 1/2)² <= B`
    ProbabilityShift,
}

impl UrKind {
    pub fn is_lower_bound(self) -> bool {
        self == UrKind::Variance
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrForm {
    pub kind: UrKind,
    pub axes: Vec<Axis>,
    #[serde(with = "serde_rational")]
    pub bound: Rational,
}

impl UrForm {
    pub fn new(kind: UrKind, axes: &[Axis], bound: Rational) -> Self {
        UrForm { kind, axes: axes.to_vec(), bound }
    }

    /// Left-hand side at expectation values `t` (indexed like `axes`).
    pub fn lhs(&self, t: &[Rational]) -> Rational {
        let sq: Rational = t.iter().map(|x| x * x).sum();
        let m = int(t.len() as i64);
        match self.kind {
            UrKind::AbsSum => t.iter().map(abs).sum(),
            UrKind::Expectation => sq,
            UrKind::Variance => m - sq,
            UrKind::Certainty => (m + sq) / int(2),
            UrKind::ProbabilityShift => sq / int(4),
        }
    }

    pub fn holds_at(&self, t: &[Rational]) -> bool {
        let v = self.lhs(t);
        if self.kind.is_lower_bound() {
            v >= self.bound
        } else {
            v <= self.bound
        }
    }
}

impl fmt::Display for UrForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .axes
            .iter()
            .map(|a| match self.kind {
                UrKind::AbsSum => format!("|<{a}>|"),
                UrKind::Expectation => format!("<{a}>^2"),
                UrKind::Variance => format!("D{a}^2"),
                UrKind::Certainty => format!("C{a}^2"),
                UrKind::ProbabilityShift => format!("(p{a}-1/2)^2"),
            })
            .collect();
        let op = if self.kind.is_lower_bound() { ">=" } else { "<=" };
        write!(f, "{} {op} {}", terms.join(" + "), self.bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UrSatisfaction {
    pub satisfied: bool,
    /// Extreme value of the left-hand side over the theory's states.
    pub worst: Surd,
    /// A state attaining `worst`, as `(sx, sy, sz)`.
    pub witness: Vec<Surd>,
}

/// Whether every state of the theory obeys `relation`.
pub fn ur_satisfied(theory: &TheorySpec, relation: &UrForm) -> Result<UrSatisfaction> {
    if let Some(a) = relation.axes.iter().find(|a| !theory.has_measurement(**a)) {
        return Err(Error::YUnavailable(format!("{} ({a})", theory.name)));
    }
    let (worst, witness) = form_extreme(&theory.body, relation)?;
    let satisfied = if relation.kind.is_lower_bound() {
        worst.cmp_rational(&relation.bound).is_ge()
    } else {
        worst.cmp_rational(&relation.bound).is_le()
    };
    Ok(UrSatisfaction { satisfied, worst, witness })
}

/// Extreme value of the relation's left-hand side over a body (maximum,
/// or minimum for lower-bound forms) and a state attaining it.
pub fn form_extreme(body: &Body, relation: &UrForm) -> Result<(Surd, Vec<Surd>)> {
    let idx: Vec<usize> = relation.axes.iter().map(|a| a.coord()).collect();
    match body {
        Body::Polytope(p) => {
            // every form is convex in t (concave for Variance), so a vertex is extreme
            let mut best: Option<(Rational, Point)> = None;
            for v in p.vertices()? {
                let t: Vec<Rational> = idx.iter().map(|&i| v[i].clone()).collect();
                let val = relation.lhs(&t);
                let better = match &best {
                    None => true,
                    Some((b, _)) if relation.kind.is_lower_bound() => val < *b,
                    Some((b, _)) => val > *b,
                };
                if better {
                    best = Some((val, v));
                }
            }
            let (val, v) = best.ok_or(Error::Infeasible)?;
            Ok((Surd::rational(val), v.into_iter().map(Surd::rational).collect()))
        }
        Body::Ball { center, radius } => {
            if center.iter().any(|c| !c.is_zero()) {
                return Err(Error::Unsupported("off-center ball".into()));
            }
            let m = relation.axes.len();
            let mut witness = vec![Surd::rational(zero()); 3];
            let worst = if relation.kind == UrKind::AbsSum {
                // r·√m at r/√m on every axis
                let root = Surd::sqrt(&int(m as i64))?;
                let coord = root.scale(&(radius / int(m as i64)));
                for &i in &idx {
                    witness[i] = coord.clone();
                }
                root.scale(radius)
            } else {
                witness[idx[0]] = Surd::rational(radius.clone());
                let mut t = vec![zero(); m];
                t[0] = radius.clone();
                Surd::rational(relation.lhs(&t))
            };
            Ok((worst, witness))
        }
    }
}

/// All derived views of a set of expectation values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormRecord {
    #[serde(with = "serde_rational_vec")]
    pub t: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub p: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub delta2: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub c2: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub sum_t2: Rational,
    #[serde(with = "serde_rational")]
    pub sum_delta2: Rational,
    #[serde(with = "serde_rational")]
    pub sum_c2: Rational,
    #[serde(with = "serde_rational")]
    pub sum_shift2: Rational,
    /// Expectation, variance, certainty and probability-shift forms.
    pub holds: [bool; 4],
}

/// Converts expectation values into probabilities, variances and
/// certainties, and evaluates the four equivalent relation forms.
pub fn convert_form(t: &[Rational]) -> Result<FormRecord> {
    if let Some(x) = t.iter().find(|x| abs(x) > one()) {
        return Err(Error::InvalidParameter(format!("|t| = |{x}| > 1")));
    }
    let p: Vec<Rational> = t.iter().map(|x| (one() + x) / int(2)).collect();
    let delta2: Vec<Rational> = t.iter().map(|x| one() - x * x).collect();
    let c2: Vec<Rational> = p.iter().map(|q| q * q + (one() - q) * (one() - q)).collect();
    let sum_t2: Rational = t.iter().map(|x| x * x).sum();
    let sum_delta2: Rational = delta2.iter().sum();
    let sum_c2: Rational = c2.iter().sum();
    let sum_shift2: Rational = p.iter().map(|q| (q - half()) * (q - half())).sum();
    let holds = four_form_bounds(t.len()).map(|f| f.holds_at(t));
    Ok(FormRecord { t: t.to_vec(), p, delta2, c2, sum_t2, sum_delta2, sum_c2, sum_shift2, holds })
}

/// The state-independent relation over `m` axes in each of its four forms.
pub fn four_form_bounds(m: usize) -> [UrForm; 4] {
    let axes = match m {
        1 => vec![Axis::X],
        2 => vec![Axis::X, Axis::Z],
        _ => Axis::ALL.to_vec(),
    };
    let mr = int(m as i64);
    [
        UrForm::new(UrKind::Expectation, &axes, one()),
        UrForm::new(UrKind::Variance, &axes, &mr - one()),
        UrForm::new(UrKind::Certainty, &axes, (mr + one()) / int(2)),
        UrForm::new(UrKind::ProbabilityShift, &axes, rat(1, 4)),
    ]
}

/// `ΔX² + ΔZ² >= 1 + ⟨Y⟩²`.
pub fn state_dependent_zx_bound(ty: &Rational) -> Result<Rational> {
    if abs(ty) > one() {
        return Err(Error::InvalidParameter(format!("|t_y| = |{ty}| > 1")));
    }
    Ok(int(2) - (one() - ty * ty))
}

/// `p = (1 + t)/2`.
pub fn to_probability(t: &Rational) -> Rational {
    (one() + t) / int(2)
}

/// `t = 2p - 1`.
pub fn to_expectation(p: &Rational) -> Rational {
    int(2) * p - one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theories::make_theory;

    fn xz() -> Vec<Axis> {
        vec![Axis::X, Axis::Z]
    }

    #[test]
    fn predictability_examples() {
        let s = RepVector::state(rat(-3, 5), zero(), rat(4, 5));
        assert_eq!(predictability(&s, &Measurement::along(Axis::X)), rat(3, 5));
        assert_eq!(predictability(&RepVector::maximally_mixed(), &Measurement::along(Axis::Z)), zero());
        let h = Surd::radical(half(), 2);
        let coords = vec![-h.clone(), Surd::rational(zero()), h.clone()];
        assert_eq!(predictability_surd(&coords, Axis::X), h);
        assert_eq!(h.checked_mul(&h).unwrap(), Surd::rational(half()));
    }

    #[test]
    fn support_examples() {
        let qubit = make_theory("qubit", None).unwrap();
        assert_eq!(ur_support(&qubit, &xz(), &[one(), zero()]).unwrap(), Surd::rational(one()));
        let stab = make_theory("stabilizer", None).unwrap();
        assert_eq!(ur_support(&stab, &xz(), &[one(), one()]).unwrap(), Surd::rational(one()));
        let gbit = make_theory("gbit", None).unwrap();
        assert_eq!(ur_support(&gbit, &xz(), &[one(), one()]).unwrap(), Surd::rational(int(2)));
    }

    #[test]
    fn circle_directions_are_unit_and_distinct() {
        let d = circle_directions(360).unwrap();
        assert_eq!(d.len(), 360);
        assert_eq!(d.iter().collect::<BTreeSet<_>>().len(), 360);
        for p in &d {
            assert_eq!(&p[0] * &p[0] + &p[1] * &p[1], one());
        }
        assert_eq!(circle_directions(4).unwrap()[1], vec![zero(), one()]);
        assert!(circle_directions(3).is_err());
    }

    #[test]
    fn sphere_directions_are_unit_and_distinct() {
        let d = sphere_directions(100).unwrap();
        assert_eq!(d.iter().collect::<BTreeSet<_>>().len(), 100);
        for p in &d {
            assert_eq!(p.iter().map(|x| x * x).sum::<Rational>(), one());
        }
    }

    #[test]
    fn depolarized_boundary_radius() {
        let t = make_theory("depolarized", Some(rat(29, 100))).unwrap();
        let curve = ur_boundary(&t, &xz(), 16).unwrap();
        assert!(curve.points.iter().all(|p| p.support == Surd::rational(rat(71, 100))));
    }

    #[test]
    fn satisfaction_examples() {
        let dep = make_theory("depolarized", Some(half())).unwrap();
        let r = ur_satisfied(&dep, &UrForm::new(UrKind::Expectation, &xz(), rat(1, 4))).unwrap();
        assert!(r.satisfied);
        let qubit = make_theory("qubit", None).unwrap();
        let r = ur_satisfied(&qubit, &UrForm::new(UrKind::AbsSum, &xz(), one())).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.worst, Surd::radical(one(), 2));
        let on_circle = r.witness[0].checked_mul(&r.witness[0]).unwrap().checked_add(
            &r.witness[2].checked_mul(&r.witness[2]).unwrap(),
        );
        assert_eq!(on_circle.unwrap(), Surd::rational(one()));
        let simp = make_theory("simplicial", None).unwrap();
        let r = ur_satisfied(&simp, &UrForm::new(UrKind::AbsSum, &[Axis::X], one())).unwrap();
        assert!(r.satisfied);
        let y = ur_satisfied(&simp, &UrForm::new(UrKind::AbsSum, &[Axis::Y], one()));
        assert!(matches!(y, Err(Error::YUnavailable(_))));
    }

    #[test]
    fn form_examples() {
        let r = convert_form(&[one(), zero(), zero()]).unwrap();
        assert_eq!(r.delta2, vec![zero(), one(), one()]);
        assert_eq!(r.c2, vec![one(), half(), half()]);
        let r = convert_form(&[zero(), zero(), zero()]).unwrap();
        assert_eq!(r.sum_delta2, int(3));
        assert_eq!(r.sum_c2, rat(3, 2));
        let r = convert_form(&[rat(3, 5), rat(4, 5)]).unwrap();
        assert_eq!(r.sum_delta2, one());
        assert_eq!(r.sum_c2, rat(3, 2));
        assert_eq!(r.holds, [true; 4]);
        assert!(convert_form(&[rat(6, 5)]).is_err());
    }

    #[test]
    fn state_dependent_examples() {
        assert_eq!(state_dependent_zx_bound(&zero()).unwrap(), one());
        assert_eq!(state_dependent_zx_bound(&one()).unwrap(), int(2));
        assert_eq!(state_dependent_zx_bound(&int(-1)).unwrap(), int(2));
        assert_eq!(state_dependent_zx_bound(&half()).unwrap(), rat(5, 4));
    }
}
