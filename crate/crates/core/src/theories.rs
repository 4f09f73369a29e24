//! The five prepare-measure theories in a shared 4-component representation.
//!
//! States are `(1, sx, sy, sz)`; the unit effect is `(1, 0, 0, 0)` and the
//! outcome-`±1` effects of measurement `W` are `(1/2, ±w/2)` with `w` the
//! unit vector along `W`, so `⟨W⟩` is the coordinate readout.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::polytope::{support_function, Body, Point, Polytope};
use crate::rational::{dot, half, int, one, parse_rational, serde_rational, zero, Rational};
use crate::surd::Surd;

pub const COORD_NAMES: [&str; 3] = ["sx", "sy", "sz"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Index into `(sx, sy, sz)`.
    pub fn coord(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        })
    }
}

/// A state or effect vector `(s0, sx, sy, sz)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RepVector {
    #[serde(with = "serde_rational")]
    pub s0: Rational,
    #[serde(with = "serde_rational")]
    pub sx: Rational,
    #[serde(with = "serde_rational")]
    pub sy: Rational,
    #[serde(with = "serde_rational")]
    pub sz: Rational,
}

impl RepVector {
    pub fn new(s0: Rational, sx: Rational, sy: Rational, sz: Rational) -> Self {
        Self { s0, sx, sy, sz }
    }

    /// The normalized state with Bloch-type coordinates `(sx, sy, sz)`.
    pub fn state(sx: Rational, sy: Rational, sz: Rational) -> Self {
        Self::new(one(), sx, sy, sz)
    }

    pub fn from_coords(c: &[Rational]) -> Result<Self> {
        match c {
            [x, y, z] => Ok(Self::state(x.clone(), y.clone(), z.clone())),
            _ => Err(Error::DimensionMismatch { expected: 3, got: c.len() }),
        }
    }

    /// Parses `"sx,sy,sz"` rationals into a state.
    pub fn parse_state(text: &str) -> Result<Self> {
        Self::from_coords(&crate::rational::parse_rational_list(text)?)
    }

    pub fn maximally_mixed() -> Self {
        Self::state(zero(), zero(), zero())
    }

    pub fn coords(&self) -> Point {
        vec![self.sx.clone(), self.sy.clone(), self.sz.clone()]
    }

    pub fn coord(&self, axis: Axis) -> &Rational {
        match axis {
            Axis::X => &self.sx,
            Axis::Y => &self.sy,
            Axis::Z => &self.sz,
        }
    }

    pub fn to_array(&self) -> [Rational; 4] {
        [self.s0.clone(), self.sx.clone(), self.sy.clone(), self.sz.clone()]
    }

    pub fn dot(&self, other: &RepVector) -> Rational {
        dot(&self.to_array(), &other.to_array())
    }

    pub fn add(&self, other: &RepVector) -> RepVector {
        RepVector::new(&self.s0 + &other.s0, &self.sx + &other.sx, &self.sy + &other.sy, &self.sz + &other.sz)
    }

    pub fn sub(&self, other: &RepVector) -> RepVector {
        RepVector::new(&self.s0 - &other.s0, &self.sx - &other.sx, &self.sy - &other.sy, &self.sz - &other.sz)
    }

    pub fn scale(&self, r: &Rational) -> RepVector {
        RepVector::new(&self.s0 * r, &self.sx * r, &self.sy * r, &self.sz * r)
    }

    pub fn is_zero(&self) -> bool {
        self.to_array().iter().all(Zero::is_zero)
    }
}

impl fmt::Display for RepVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.s0, self.sx, self.sy, self.sz)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Effect {
    pub e: RepVector,
}

impl Effect {
    pub fn unit() -> Self {
        Effect { e: RepVector::new(one(), zero(), zero(), zero()) }
    }

    /// Exact `[min, max]` of `e·s` over a body of states.
    pub fn range_on(&self, body: &Body) -> Result<(Surd, Surd)> {
        let v = vec![self.e.sx.clone(), self.e.sy.clone(), self.e.sz.clone()];
        let offset = Surd::rational(self.e.s0.clone());
        if v.iter().all(Zero::is_zero) {
            return Ok((offset.clone(), offset));
        }
        let neg: Vec<Rational> = v.iter().map(|c| -c.clone()).collect();
        let hi = support_function(body, &v)?;
        let lo = -support_function(body, &neg)?;
        Ok((offset.checked_add(&lo)?, offset.checked_add(&hi)?))
    }

    /// `0 <= e·s <= 1` for every state of the body.
    pub fn is_valid_on(&self, body: &Body) -> Result<bool> {
        let (lo, hi) = self.range_on(body)?;
        Ok(lo.cmp_rational(&zero()).is_ge() && hi.cmp_rational(&one()).is_le())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measurement {
    pub label: Axis,
    pub plus: Effect,
    pub minus: Effect,
}

impl Measurement {
    /// The canonical `±1` measurement along `axis`.
    pub fn along(axis: Axis) -> Self {
        let mut w = [zero(), zero(), zero()];
        w[axis.coord()] = half();
        let [x, y, z] = w;
        let plus = RepVector::new(half(), x.clone(), y.clone(), z.clone());
        let minus = RepVector::new(half(), -x, -y, -z);
        Measurement { label: axis, plus: Effect { e: plus }, minus: Effect { e: minus } }
    }

    /// `plus + minus` equals the unit effect.
    pub fn is_complete(&self) -> bool {
        self.plus.e.add(&self.minus.e) == Effect::unit().e
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "theory", rename_all = "lowercase")]
pub enum TheoryKind {
    Qubit,
    Stabilizer,
    Depolarized {
        #[serde(with = "serde_rational")]
        eta: Rational,
    },
    Gbit,
    Simplicial,
}

impl TheoryKind {
    pub fn all_with_eta(eta: Rational) -> Vec<TheoryKind> {
        vec![
            TheoryKind::Qubit,
            TheoryKind::Stabilizer,
            TheoryKind::Depolarized { eta },
            TheoryKind::Gbit,
            TheoryKind::Simplicial,
        ]
    }

    pub fn name(&self) -> String {
        match self {
            TheoryKind::Qubit => "qubit".into(),
            TheoryKind::Stabilizer => "stabilizer".into(),
            TheoryKind::Depolarized { eta } => format!("depolarized:{eta}"),
            TheoryKind::Gbit => "gbit".into(),
            TheoryKind::Simplicial => "simplicial".into(),
        }
    }
}

impl FromStr for TheoryKind {
    type Err = Error;

    /// `qubit | stabilizer | depolarized:<p/q> | gbit | simplicial`
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "qubit" => Ok(TheoryKind::Qubit),
            "stabilizer" => Ok(TheoryKind::Stabilizer),
            "gbit" => Ok(TheoryKind::Gbit),
            "simplicial" => Ok(TheoryKind::Simplicial),
            _ => match s.strip_prefix("depolarized:") {
                Some(eta) => Ok(TheoryKind::Depolarized { eta: parse_rational(eta)? }),
                None if s == "depolarized" => {
                    Err(Error::InvalidParameter("depolarized theory needs `depolarized:<eta>`".into()))
                }
                None => Err(Error::UnknownTheory(s.to_string())),
            },
        }
    }
}

/// A convex state space with its fixed `X, Y, Z` measurement triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheorySpec {
    pub name: String,
    pub kind: TheoryKind,
    /// Body in `(sx, sy, sz)` coordinates.
    pub body: Body,
    pub measurements: Vec<Measurement>,
    /// Measurements whose uncertainty relations are meaningful.
    pub measurement_subset: Vec<Axis>,
}

pub fn octahedron_vertices() -> Vec<Point> {
    let mut v = Vec::new();
    for i in 0..3 {
        for s in [1, -1] {
            let mut p = vec![zero(), zero(), zero()];
            p[i] = int(s);
            v.push(p);
        }
    }
    v
}

pub fn cube_vertices() -> Vec<Point> {
    (0..8)
        .map(|m: u32| (0..3).map(|b| int(if (m >> (2 - b)) & 1 == 0 { 1 } else { -1 })).collect())
        .collect()
}

pub fn tetrahedron_vertices() -> Vec<Point> {
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
        .iter()
        .map(|v| v.iter().map(|&c| int(c)).collect())
        .collect()
}

/// Builds a theory by name (`depolarized` takes `eta`).
pub fn make_theory(name: &str, eta: Option<Rational>) -> Result<TheorySpec> {
    let kind = match (name, eta) {
        ("depolarized", Some(eta)) => TheoryKind::Depolarized { eta },
        (n, None) => n.parse()?,
        (n, Some(_)) if n.parse::<TheoryKind>().is_ok() && n != "depolarized" => {
            return Err(Error::InvalidParameter(format!("theory `{n}` takes no eta")))
        }
        (n, Some(_)) => return Err(Error::UnknownTheory(n.to_string())),
    };
    TheorySpec::new(kind)
}

impl TheorySpec {
    pub fn new(kind: TheoryKind) -> Result<Self> {
        let origin = vec![zero(), zero(), zero()];
        let body = match &kind {
            TheoryKind::Qubit => Body::Ball { center: origin, radius: one() },
            TheoryKind::Depolarized { eta } => {
                if eta.is_negative() || *eta > one() {
                    return Err(Error::InvalidParameter(format!("eta = {eta} outside [0, 1]")));
                }
                Body::Ball { center: origin, radius: one() - eta }
            }
            TheoryKind::Stabilizer => Body::Polytope(Polytope::from_vertices(octahedron_vertices(), &COORD_NAMES)?),
            TheoryKind::Gbit => Body::Polytope(Polytope::from_vertices(cube_vertices(), &COORD_NAMES)?),
            TheoryKind::Simplicial => {
                Body::Polytope(Polytope::from_vertices(tetrahedron_vertices(), &COORD_NAMES)?)
            }
        };
        let measurement_subset = match kind {
            TheoryKind::Simplicial => vec![Axis::X, Axis::Z],
            _ => Axis::ALL.to_vec(),
        };
        Ok(TheorySpec {
            name: kind.name(),
            kind,
            body,
            measurements: Axis::ALL.iter().map(|&a| Measurement::along(a)).collect(),
            measurement_subset,
        })
    }

    /// A polytope theory with a custom vertex list (fixtures, experiments).
    pub fn with_vertices(name: &str, kind: TheoryKind, vertices: Vec<Point>) -> Result<Self> {
        let mut t = TheorySpec::new(kind)?;
        t.name = name.to_string();
        t.body = Body::Polytope(Polytope::from_vertices(vertices, &COORD_NAMES)?);
        Ok(t)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut t: TheorySpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if let Body::Polytope(p) = &t.body {
            let vertices = p.vertices()?;
            t.body = Body::Polytope(Polytope::from_vertices(vertices, &COORD_NAMES)?);
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn measurement(&self, axis: Axis) -> &Measurement {
        self.measurements.iter().find(|m| m.label == axis).expect("X, Y, Z present")
    }

    pub fn has_measurement(&self, axis: Axis) -> bool {
        self.measurement_subset.contains(&axis)
    }

    pub fn polytope(&self) -> Option<&Polytope> {
        match &self.body {
            Body::Polytope(p) => Some(p),
            Body::Ball { .. } => None,
        }
    }

    pub fn ball_radius(&self) -> Option<&Rational> {
        match &self.body {
            Body::Ball { radius, .. } => Some(radius),
            Body::Polytope(_) => None,
        }
    }

    /// Vertex list for polytope bodies.
    pub fn vertices(&self) -> Option<Vec<Point>> {
        self.polytope().and_then(|p| p.vertices().ok())
    }
}

/// Whether the state lies in the theory's body.
pub fn contains_state(theory: &TheorySpec, s: &RepVector) -> Result<bool> {
    if !s.s0.is_one() {
        return Err(contract(format!("state normalization s0 = {} (expected 1)", s.s0)));
    }
    contains_coords(theory, &s.coords())
}

pub(crate) fn contains_coords(theory: &TheorySpec, c: &[Rational]) -> Result<bool> {
    match &theory.body {
        Body::Ball { center, radius } => {
            let d: Vec<Rational> = c.iter().zip(center).map(|(a, b)| a - b).collect();
            Ok(dot(&d, &d) <= radius * radius)
        }
        Body::Polytope(p) => p.contains(c),
    }
}

/// `(plus - minus)·s`.
pub fn expectation(s: &RepVector, m: &Measurement) -> Rational {
    m.plus.e.sub(&m.minus.e).dot(s)
}

/// `e·s`, which must be a probability.
pub fn probability(e: &Effect, s: &RepVector) -> Result<Rational> {
    let p = e.e.dot(s);
    if p.is_negative() || p > one() {
        return Err(Error::InvalidParameter(format!(
            "effect {} on state {} gives {p}, outside [0, 1]",
            e.e, s
        )));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn stabilizer_is_octahedron() {
        let t = make_theory("stabilizer", None).unwrap();
        assert_eq!(t.vertices().unwrap().len(), 6);
    }

    #[test]
    fn depolarized_radius() {
        let t = make_theory("depolarized", Some(rat(1, 2))).unwrap();
        assert_eq!(t.ball_radius(), Some(&rat(1, 2)));
        let t: TheoryKind = "depolarized:29/100".parse().unwrap();
        assert_eq!(TheorySpec::new(t).unwrap().ball_radius(), Some(&rat(71, 100)));
    }

    #[test]
    fn bad_names_and_eta() {
        assert!(matches!(make_theory("trit", None), Err(Error::UnknownTheory(_))));
        assert!(matches!(make_theory("depolarized", Some(rat(3, 2))), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_theory("depolarized", Some(rat(-1, 2))), Err(Error::InvalidParameter(_))));
        assert!(make_theory("depolarized", None).is_err());
        assert!(make_theory("gbit", Some(rat(1, 2))).is_err());
    }

    #[test]
    fn membership_examples() {
        let qubit = make_theory("qubit", None).unwrap();
        assert!(contains_state(&qubit, &RepVector::state(int(1), zero(), zero())).unwrap());
        let stab = make_theory("stabilizer", None).unwrap();
        assert!(!contains_state(&stab, &RepVector::state(rat(3, 4), zero(), rat(3, 4))).unwrap());
        let simp = make_theory("simplicial", None).unwrap();
        assert!(contains_state(&simp, &RepVector::state(int(1), zero(), zero())).unwrap());
        assert!(!contains_state(&simp, &RepVector::state(int(-1), int(-1), int(-1))).unwrap());
    }

    #[test]
    fn unnormalized_state_is_contract_violation() {
        let qubit = make_theory("qubit", None).unwrap();
        let s = RepVector::new(rat(1, 2), zero(), zero(), zero());
        assert!(matches!(contains_state(&qubit, &s), Err(Error::Contract(_))));
    }

    #[test]
    fn expectation_is_coordinate_readout() {
        let s = RepVector::state(rat(1, 2), zero(), rat(-1, 3));
        assert_eq!(expectation(&s, &Measurement::along(Axis::X)), rat(1, 2));
        assert_eq!(expectation(&s, &Measurement::along(Axis::Z)), rat(-1, 3));
        let mixed = RepVector::maximally_mixed();
        for a in Axis::ALL {
            assert_eq!(expectation(&mixed, &Measurement::along(a)), zero());
        }
        let s = RepVector::state(rat(3, 5), zero(), rat(4, 5));
        assert_eq!(expectation(&s, &Measurement::along(Axis::Z)), rat(4, 5));
    }

    #[test]
    fn probability_examples() {
        let s = RepVector::state(rat(3, 5), zero(), rat(4, 5));
        assert_eq!(probability(&Effect::unit(), &s).unwrap(), one());
        assert_eq!(probability(&Measurement::along(Axis::Z).plus, &s).unwrap(), rat(9, 10));
        let eig = RepVector::state(int(1), zero(), zero());
        assert_eq!(probability(&Measurement::along(Axis::X).plus, &eig).unwrap(), one());
    }

    #[test]
    fn probability_out_of_range_signals_bad_pairing() {
        let s = RepVector::state(int(2), zero(), zero());
        assert!(probability(&Measurement::along(Axis::X).plus, &s).is_err());
    }

    #[test]
    fn effects_valid_on_every_theory() {
        for kind in TheoryKind::all_with_eta(rat(1, 3)) {
            let t = TheorySpec::new(kind).unwrap();
            for m in &t.measurements {
                assert!(m.is_complete());
                assert!(m.plus.is_valid_on(&t.body).unwrap(), "{} {}", t.name, m.label);
                assert!(m.minus.is_valid_on(&t.body).unwrap());
            }
        }
    }

    #[test]
    fn theory_json_round_trip() {
        let t = make_theory("simplicial", None).unwrap();
        let back = TheorySpec::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}
