use std::cmp::Ordering;
use std::collections::BTreeSet;

use ncur_core::polytope::{hull_facets, Point};
use ncur_core::rational::{dot, int, one, rat, zero, Rational};
use ncur_core::surd::Surd;
use ncur_core::theories::{
    contains_state, expectation, make_theory, octahedron_vertices, probability, tetrahedron_vertices, Axis,
    RepVector, TheorySpec,
};
use ncur_core::uncertainty::{
    convert_form, four_form_bounds, to_expectation, to_probability, ur_boundary, ur_support, UrForm, UrKind,
};
use proptest::prelude::*;

fn all_theories() -> Vec<TheorySpec> {
    vec![
        make_theory("qubit", None).unwrap(),
        make_theory("stabilizer", None).unwrap(),
        make_theory("depolarized", Some(rat(3, 10))).unwrap(),
        make_theory("gbit", None).unwrap(),
        make_theory("simplicial", None).unwrap(),
    ]
}

fn unit_interval_rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000).prop_map(|n| rat(n, 1000))
}

#[test]
fn effects_are_valid_at_every_vertex() {
    for t in all_theories() {
        for m in &t.measurements {
            assert!(m.is_complete());
            assert!(m.plus.is_valid_on(&t.body).unwrap(), "{} {:?}", t.name, m.label);
            assert!(m.minus.is_valid_on(&t.body).unwrap());
        }
        for v in t.vertices().unwrap_or_default() {
            let s = RepVector::from_coords(&v).unwrap();
            for m in &t.measurements {
                let p = probability(&m.plus, &s).unwrap();
                assert!(p >= zero() && p <= one());
            }
        }
    }
}

#[test]
fn stabilizer_octahedron_is_hull_of_tetrahedron_edge_midpoints() {
    let tet = tetrahedron_vertices();
    let mut mids = BTreeSet::new();
    for (i, a) in tet.iter().enumerate() {
        for b in &tet[i + 1..] {
            mids.insert(a.iter().zip(b).map(|(x, y)| (x + y) / int(2)).collect::<Point>());
        }
    }
    let mids: Vec<Point> = mids.into_iter().collect();
    let octa: BTreeSet<Point> = octahedron_vertices().into_iter().collect();
    assert_eq!(mids.iter().cloned().collect::<BTreeSet<_>>(), octa);
    let names = ["sx", "sy", "sz"];
    let stab = make_theory("stabilizer", None).unwrap();
    assert!(hull_facets(&mids, &names).unwrap().same_rows(&stab.polytope().unwrap().hrep.clone().unwrap()));
}

#[test]
fn gbit_and_stabilizer_share_effects() {
    let g = make_theory("gbit", None).unwrap();
    let s = make_theory("stabilizer", None).unwrap();
    assert_eq!(g.measurements, s.measurements);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn expectation_is_twice_probability_minus_one(
        x in unit_interval_rational(), y in unit_interval_rational(), z in unit_interval_rational()
    ) {
        let s = RepVector::state(x, y, z);
        for axis in Axis::ALL {
            let m = make_theory("qubit", None).unwrap().measurement(axis).clone();
            let e = expectation(&s, &m);
            let p = dot(&m.plus.e.to_array(), &s.to_array());
            prop_assert_eq!(e, int(2) * p - one());
        }
    }

    #[test]
    fn expectation_probability_round_trip(t in unit_interval_rational()) {
        prop_assert_eq!(to_expectation(&to_probability(&t)), t);
    }

    /// Points of the cube `[-1, 1]^3`, both inside and outside the unit ball.
    #[test]
    fn four_forms_agree(t in prop::collection::vec(unit_interval_rational(), 1..=3)) {
        let verdicts: Vec<bool> = four_form_bounds(t.len()).iter().map(|f| f.holds_at(&t)).collect();
        prop_assert!(verdicts.iter().all(|&v| v == verdicts[0]), "{:?} at {:?}", verdicts, t);
        let rec = convert_form(&t).unwrap();
        prop_assert_eq!(rec.holds.to_vec(), verdicts);
        for (i, x) in t.iter().enumerate() {
            prop_assert_eq!(&rec.delta2[i], &(one() - x * x));
            prop_assert_eq!(&rec.c2[i], &((one() + x * x) / int(2)));
        }
    }
}

/// Max of `d·x` over convex combinations of vertex pairs on a 1/8 grid.
fn grid_support(vertices: &[Point], coords: &[usize], d: &[Rational]) -> Rational {
    let proj: Vec<Vec<Rational>> = vertices.iter().map(|v| coords.iter().map(|&c| v[c].clone()).collect()).collect();
    let mut best: Option<Rational> = None;
    for a in &proj {
        for b in &proj {
            for k in 0..=8 {
                let t = rat(k, 8);
                let p: Vec<Rational> = a.iter().zip(b).map(|(x, y)| (one() - &t) * x + &t * y).collect();
                let v = dot(d, &p);
                if best.as_ref().is_none_or(|m| v > *m) {
                    best = Some(v);
                }
            }
        }
    }
    best.unwrap()
}

#[test]
fn boundary_matches_brute_force() {
    let xz = [Axis::X, Axis::Z];
    for t in all_theories() {
        for (axes, coords, n) in [(&xz[..], &[0usize, 2][..], 48), (&Axis::ALL[..], &[0usize, 1, 2][..], 40)] {
            let curve = ur_boundary(&t, axes, n).unwrap();
            assert_eq!(curve.points.len(), n);
            for p in &curve.points {
                let expected = match t.vertices() {
                    Some(v) => Surd::rational(grid_support(&v, coords, &p.direction)),
                    None => {
                        let r = t.ball_radius().unwrap();
                        Surd::sqrt(&dot(&p.direction, &p.direction)).unwrap().scale(r)
                    }
                };
                assert_eq!(p.support, expected, "{} at {:?}", t.name, p.direction);
            }
        }
    }
}

#[test]
fn qubit_boundary_lies_between_stabilizer_and_gbit() {
    let axes = [Axis::X, Axis::Z];
    let (q, s, g) = (
        make_theory("qubit", None).unwrap(),
        make_theory("stabilizer", None).unwrap(),
        make_theory("gbit", None).unwrap(),
    );
    let qc = ur_boundary(&q, &axes, 360).unwrap();
    for p in &qc.points {
        let sv = ur_support(&s, &axes, &p.direction).unwrap();
        let gv = ur_support(&g, &axes, &p.direction).unwrap();
        assert_ne!(sv.checked_cmp(&p.support).unwrap(), Ordering::Greater);
        assert_ne!(p.support.checked_cmp(&gv).unwrap(), Ordering::Greater);
    }
}

#[test]
fn depolarized_boundary_radius() {
    let t = make_theory("depolarized:29/100", None).unwrap();
    let curve = ur_boundary(&t, &[Axis::X, Axis::Z], 360).unwrap();
    assert!(curve.points.iter().all(|p| p.support == Surd::rational(rat(71, 100))));
}

#[test]
fn theory_json_round_trip() {
    for t in all_theories() {
        let back = TheorySpec::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}

#[test]
fn membership_of_named_states() {
    let q = make_theory("qubit", None).unwrap();
    assert!(contains_state(&q, &RepVector::state(rat(3, 5), zero(), rat(4, 5))).unwrap());
    assert!(!contains_state(&q, &RepVector::state(rat(3, 5), rat(1, 10), rat(4, 5))).unwrap());
    let rel = UrForm::new(UrKind::AbsSum, &[Axis::X, Axis::Z], one());
    assert!(!rel.holds_at(&[rat(3, 5), rat(4, 5)]));
}
