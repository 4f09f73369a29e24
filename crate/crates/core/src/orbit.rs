//! A₁²/A₁³ orbit realizability and symmetry classification.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fm::{fm_project, remove_redundant};
use crate::linsys::{LinearSystem, Row};
use crate::lp::{lp_solve, LpOutcome, Sense};
use crate::polytope::{Body, Point, Polytope};
use crate::rational::{int, one, rat, serde_rational_vec, zero, Rational};
use crate::theories::{contains_coords, contains_state, Axis, RepVector, TheorySpec, COORD_NAMES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    A12,
    A13,
}

impl Group {
    pub fn axes(self) -> Vec<Axis> {
        match self {
            Group::A12 => vec![Axis::X, Axis::Z],
            Group::A13 => Axis::ALL.to_vec(),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::A12 => "a12",
            Group::A13 => "a13",
        })
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a12" => Ok(Group::A12),
            "a13" => Ok(Group::A13),
            other => Err(Error::InvalidParameter(format!("group `{other}` (expected a12 or a13)"))),
        }
    }
}

/// Whether A₁³ questions are posed operationally (Y must be measurable)
/// or as a purely geometric comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Operational,
    Geometric,
}

/// Sign of each coordinate relative to `s₁`, per orbit member.
/// A12 members are `s1..s4` over `(X, Z)`; A13 members `s1..s8` over `(X, Y, Z)`.
pub fn sign_pattern(group: Group) -> Vec<Vec<i8>> {
    match group {
        Group::A12 => vec![vec![1, 1], vec![-1, 1], vec![-1, -1], vec![1, -1]],
        Group::A13 => (0..8u8)
            .map(|i| (0..3).map(|b| if (i >> (2 - b)) & 1 == 0 { 1 } else { -1 }).collect())
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitWitness {
    pub group: Group,
    pub states: Vec<RepVector>,
    /// `sign_pattern_check[i][w]`: member `i` has the required sign
    /// relation to `s₁` on the group's axis `w`.
    pub sign_pattern_check: Vec<Vec<bool>>,
    /// Operational-equivalence residuals, 4 entries per equivalence.
    #[serde(with = "serde_rational_vec")]
    pub op_equiv_residual: Vec<Rational>,
}

impl OrbitWitness {
    fn build(group: Group, states: Vec<RepVector>) -> Result<Self> {
        let axes = group.axes();
        let pattern = sign_pattern(group);
        let s1 = states[0].clone();
        let sign_pattern_check = states
            .iter()
            .zip(&pattern)
            .map(|(s, signs)| {
                axes.iter()
                    .zip(signs)
                    .map(|(a, &g)| *s.coord(*a) == s1.coord(*a) * int(g as i64))
                    .collect()
            })
            .collect();
        let op_equiv_residual = match group {
            Group::A12 => rectangle_residual(&states).to_array().to_vec(),
            Group::A13 => op_equiv_residuals_3d(&states)?.iter().flat_map(|r| r.to_array()).collect(),
        };
        Ok(OrbitWitness { group, states, sign_pattern_check, op_equiv_residual })
    }

    /// Every sign relation holds and every residual vanishes.
    pub fn is_valid(&self) -> bool {
        self.sign_pattern_check.iter().flatten().all(|&b| b) && self.op_equiv_residual.iter().all(Zero::is_zero)
    }
}

/// `(s₁ + s₃)/2 - (s₂ + s₄)/2`.
pub fn rectangle_residual(states: &[RepVector]) -> RepVector {
    let h = rat(1, 2);
    states[0].add(&states[2]).scale(&h).sub(&states[1].add(&states[3]).scale(&h))
}

/// Left-minus-right residuals of the four A₁³ equivalences
/// `(s_i + s_j)/2 = (s₁ + s₄ + s₆ + s₇)/4`.
pub fn op_equiv_residuals_3d(states: &[RepVector]) -> Result<Vec<RepVector>> {
    if states.len() != 8 {
        return Err(Error::DimensionMismatch { expected: 8, got: states.len() });
    }
    let s = |i: usize| &states[i - 1];
    let center = s(1).add(s(4)).add(s(6)).add(s(7)).scale(&rat(1, 4));
    Ok(EQUIV_PAIRS_3D
        .iter()
        .map(|&(i, j)| s(i).add(s(j)).scale(&rat(1, 2)).sub(&center))
        .collect())
}

/// Pairs `(i, j)` of the A₁³ equivalences, 1-based.
pub const EQUIV_PAIRS_3D: [(usize, usize); 4] = [(8, 1), (5, 4), (3, 6), (2, 7)];
/// The tetrahedral quadruple on the right of every A₁³ equivalence.
pub const EQUIV_CENTER_3D: [usize; 4] = [1, 4, 6, 7];

pub fn verify_op_equiv_3d(states: &[RepVector]) -> Result<bool> {
    Ok(op_equiv_residuals_3d(states)?.iter().all(RepVector::is_zero))
}

/// Why a state's orbit is not realizable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "failed", rename_all = "kebab-case")]
pub enum Refutation {
    /// No state of the theory has the forced coordinates of member `member`
    /// (1-based), for any free coordinate.
    Membership { member: usize, forced: Vec<Option<String>> },
    /// Each counterpart exists, but no choice satisfies `(s₁+s₃)/2 = (s₂+s₄)/2`.
    /// `states` is the choice with the smallest residual.
    RectangleEquality {
        states: Vec<RepVector>,
        #[serde(with = "serde_rational_vec")]
        residual: Vec<Rational>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum OrbitOutcome {
    Realizable { witness: OrbitWitness },
    Refuted { refutation: Refutation },
}

impl OrbitOutcome {
    pub fn witness(&self) -> Option<&OrbitWitness> {
        match self {
            OrbitOutcome::Realizable { witness } => Some(witness),
            OrbitOutcome::Refuted { .. } => None,
        }
    }

    pub fn into_witness(self) -> Option<OrbitWitness> {
        match self {
            OrbitOutcome::Realizable { witness } => Some(witness),
            OrbitOutcome::Refuted { .. } => None,
        }
    }
}

fn require_state(theory: &TheorySpec, s: &RepVector) -> Result<()> {
    if contains_state(theory, s)? {
        Ok(())
    } else {
        Err(Error::StateOutsideTheory)
    }
}

/// Rows over the free y-coordinates of a counterpart with fixed `(x, z)`.
fn y_rows(hrep: &LinearSystem, x: &Rational, z: &Rational, slot: usize) -> Vec<Row> {
    hrep.rows
        .iter()
        .map(|r| {
            let mut a = vec![zero(), zero(), zero()];
            a[slot] = r.a[1].clone();
            Row::new(a, r.rel, &r.b - &r.a[0] * x - &r.a[2] * z)
        })
        .collect()
}

fn y_extreme(sys: &LinearSystem, slot: usize, sense: Sense) -> Result<Option<Rational>> {
    let mut obj = vec![zero(), zero(), zero()];
    obj[slot] = one();
    match lp_solve(sys, &obj, sense)? {
        LpOutcome::Optimal { value, .. } => Ok(Some(value)),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Unbounded),
    }
}

/// A₁² realizability with a witness or a refutation.
pub fn a12_check(theory: &TheorySpec, s: &RepVector) -> Result<OrbitOutcome> {
    require_state(theory, s)?;
    let (sx, sy, sz) = (&s.sx, &s.sy, &s.sz);
    let member = |y2: &Rational, y3: &Rational, y4: &Rational| {
        vec![
            s.clone(),
            RepVector::state(-sx.clone(), y2.clone(), sz.clone()),
            RepVector::state(-sx.clone(), y3.clone(), -sz.clone()),
            RepVector::state(sx.clone(), y4.clone(), -sz.clone()),
        ]
    };
    let hrep = match &theory.body {
        Body::Ball { center, .. } if center.iter().all(Zero::is_zero) => {
            // reflections of (sx, sz) keep the norm, so y = sy works for all three
            let w = OrbitWitness::build(Group::A12, member(sy, sy, sy))?;
            return Ok(OrbitOutcome::Realizable { witness: w });
        }
        Body::Ball { .. } => return Err(Error::Unsupported("off-center ball".into())),
        Body::Polytope(p) => p.hrep.clone().ok_or_else(|| crate::error::contract("polytope without hrep"))?,
    };
    let forced = [(-sx.clone(), sz.clone()), (-sx.clone(), -sz.clone()), (sx.clone(), -sz.clone())];
    let mut sys = LinearSystem::new(["y2", "y3", "y4"]);
    for (slot, (x, z)) in forced.iter().enumerate() {
        sys.rows.extend(y_rows(&hrep, x, z, slot));
    }
    let mut joint = sys.clone();
    joint.push(Row::eq(vec![int(-1), one(), int(-1)], -sy.clone()))?;
    if let LpOutcome::Optimal { point, .. } = lp_solve(&joint, &[zero(), zero(), zero()], Sense::Max)? {
        let w = OrbitWitness::build(Group::A12, member(&point[0], &point[1], &point[2]))?;
        return Ok(OrbitOutcome::Realizable { witness: w });
    }
    // locate the failure: an empty counterpart interval, or a residual that
    // cannot reach zero
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for slot in 0..3 {
        let single = LinearSystem { vars: sys.vars.clone(), rows: y_rows(&hrep, &forced[slot].0, &forced[slot].1, slot) };
        match (y_extreme(&single, slot, Sense::Min)?, y_extreme(&single, slot, Sense::Max)?) {
            (Some(a), Some(b)) => {
                lo.push(a);
                hi.push(b);
            }
            _ => {
                let (x, z) = &forced[slot];
                let forced = vec![Some(x.to_string()), None, Some(z.to_string())];
                return Ok(OrbitOutcome::Refuted { refutation: Refutation::Membership { member: slot + 2, forced } });
            }
        }
    }
    // residual y-part: sy + y3 - y2 - y4, all other parts vanish
    let r_min = sy + &lo[1] - &hi[0] - &hi[2];
    let (y2, y3, y4) = if r_min.is_positive() {
        (hi[0].clone(), lo[1].clone(), hi[2].clone())
    } else {
        (lo[0].clone(), hi[1].clone(), lo[2].clone())
    };
    let states = member(&y2, &y3, &y4);
    let residual = rectangle_residual(&states).coords();
    Ok(OrbitOutcome::Refuted { refutation: Refutation::RectangleEquality { states, residual } })
}

pub fn a12_realizable(theory: &TheorySpec, s: &RepVector) -> Result<Option<OrbitWitness>> {
    Ok(a12_check(theory, s)?.into_witness())
}

/// The eight sign-flipped images of `s` in A₁³ labeling.
pub fn sign_orbit_3d(s: &RepVector) -> Vec<RepVector> {
    sign_pattern(Group::A13)
        .iter()
        .map(|g| {
            RepVector::state(&s.sx * int(g[0] as i64), &s.sy * int(g[1] as i64), &s.sz * int(g[2] as i64))
        })
        .collect()
}

/// A₁³ realizability with a witness or a refutation.
pub fn a13_check(theory: &TheorySpec, s: &RepVector, mode: Mode) -> Result<OrbitOutcome> {
    if mode == Mode::Operational && !theory.has_measurement(Axis::Y) {
        return Err(Error::YUnavailable(theory.name.clone()));
    }
    require_state(theory, s)?;
    let states = sign_orbit_3d(s);
    for (i, m) in states.iter().enumerate() {
        if !contains_coords(theory, &m.coords())? {
            let forced = m.coords().iter().map(|c| Some(c.to_string())).collect();
            return Ok(OrbitOutcome::Refuted { refutation: Refutation::Membership { member: i + 1, forced } });
        }
    }
    Ok(OrbitOutcome::Realizable { witness: OrbitWitness::build(Group::A13, states)? })
}

pub fn a13_realizable(theory: &TheorySpec, s: &RepVector, mode: Mode) -> Result<Option<OrbitWitness>> {
    Ok(a13_check(theory, s, mode)?.into_witness())
}

pub fn check(theory: &TheorySpec, s: &RepVector, group: Group, mode: Mode) -> Result<OrbitOutcome> {
    match group {
        Group::A12 => a12_check(theory, s),
        Group::A13 => a13_check(theory, s, mode),
    }
}

/// Every state of the theory is orbit-realizable. Theories without `Y`
/// are judged geometrically for A₁³.
pub fn has_symmetry(theory: &TheorySpec, group: Group) -> Result<bool> {
    let Some(vertices) = theory.vertices() else {
        return Ok(true);
    };
    for v in vertices {
        let s = RepVector::from_coords(&v)?;
        if check(theory, &s, group, Mode::Geometric)?.witness().is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The set of realizable states as a convex body.
pub fn realizable_region(theory: &TheorySpec, group: Group) -> Result<Body> {
    let p = match &theory.body {
        b @ Body::Ball { .. } => return Ok(b.clone()),
        Body::Polytope(p) => p,
    };
    let hrep = p.hrep.clone().ok_or_else(|| crate::error::contract("polytope without hrep"))?;
    let region = match group {
        Group::A12 => {
            // joint system over (sx, sy, sz, y2, y3, y4)
            let mut sys = LinearSystem::new(["sx", "sy", "sz", "y2", "y3", "y4"]);
            let images: [(usize, i64, i64); 4] = [(1, 1, 1), (3, -1, 1), (4, -1, -1), (5, 1, -1)];
            for (ycol, gx, gz) in images {
                for r in &hrep.rows {
                    let mut a = vec![zero(); 6];
                    a[0] = &r.a[0] * int(gx);
                    a[2] = &r.a[2] * int(gz);
                    a[ycol] = r.a[1].clone();
                    sys.push(Row::new(a, r.rel, r.b.clone()))?;
                }
            }
            let eq = vec![zero(), one(), zero(), int(-1), one(), int(-1)];
            sys.push(Row::eq(eq, zero()))?;
            fm_project(&sys, &COORD_NAMES)?
        }
        Group::A13 => reflection_hrep(&hrep, Group::A13)?,
    };
    Ok(Body::Polytope(Polytope::from_hrep(region)?))
}

/// Intersection of the body with its images under the group's coordinate
/// reflections. For A₁² the `y` coordinate is left unchanged, which is
/// stricter than A₁² realizability, where counterpart `y`s are free.
pub fn reflection_closed_region(theory: &TheorySpec, group: Group) -> Result<Body> {
    match &theory.body {
        b @ Body::Ball { .. } => Ok(b.clone()),
        Body::Polytope(p) => {
            let hrep = p.hrep.as_ref().ok_or_else(|| crate::error::contract("polytope without hrep"))?;
            Ok(Body::Polytope(Polytope::from_hrep(reflection_hrep(hrep, group)?)?))
        }
    }
}

fn reflection_hrep(hrep: &LinearSystem, group: Group) -> Result<LinearSystem> {
    let flips: Vec<[i64; 3]> = match group {
        Group::A12 => vec![[1, 1, 1], [-1, 1, 1], [-1, 1, -1], [1, 1, -1]],
        Group::A13 => sign_pattern(Group::A13)
            .iter()
            .map(|g| [g[0] as i64, g[1] as i64, g[2] as i64])
            .collect(),
    };
    let mut sys = LinearSystem::new(COORD_NAMES);
    for g in flips {
        for r in &hrep.rows {
            let a = r.a.iter().zip(g).map(|(c, s)| c * int(s)).collect();
            sys.push(Row::new(a, r.rel, r.b.clone()))?;
        }
    }
    remove_redundant(&sys)
}

/// Vertex list of a region, or `None` for balls.
pub fn region_vertices(region: &Body) -> Result<Option<Vec<Point>>> {
    match region {
        Body::Polytope(p) => p.vertices().map(Some),
        Body::Ball { .. } => Ok(None),
    }
}
