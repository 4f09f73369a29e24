use ncur_core::contextuality::{
    analytic_mu_family, appendix_b_reduce, build_scenario, nc_feasibility, nc_max, nc_polytope, saturating_model,
    sign_patterns, violation_report, BoundReport, Equivalence, FamilyOutcome, FeasibilityOutcome, Route, Verdict,
};
use ncur_core::linsys::{LinearSystem, Row};
use ncur_core::orbit::Group;
use ncur_core::rational::{abs, int, one, rat, zero, Rational};
use ncur_core::surd::Surd;
use ncur_core::theories::{make_theory, Axis, Measurement, RepVector};
use proptest::prelude::*;

fn diamond() -> LinearSystem {
    let rows = [(1, 1), (1, -1), (-1, 1), (-1, -1)].map(|(x, z)| Row::le(vec![int(x), int(z)], one()));
    LinearSystem::new(["X", "Z"]).with_rows(rows).unwrap()
}

#[test]
fn routes_agree_on_the_diamond() {
    let s = build_scenario(2).unwrap();
    let fm = nc_polytope(&s, Route::Fm).unwrap();
    let lp = nc_polytope(&s, Route::AnalyticLp).unwrap();
    let b = nc_polytope(&s, Route::AppendixB).unwrap();
    assert!(fm.facets.same_rows(&lp.facets));
    assert!(lp.facets.same_rows(&b.facets));
    assert!(b.facets.same_rows(&diamond()));
    assert_eq!(appendix_b_reduce().unwrap().substituted.len(), 8);
}

#[test]
fn nc_max_is_exactly_one_for_every_pattern() {
    for n in [2, 3] {
        let s = build_scenario(n).unwrap();
        for signs in sign_patterns(n) {
            let r = nc_max(&s, &signs).unwrap();
            assert_eq!(r.optimum, one(), "n = {n}, signs {signs:?}");
            let model = r.model.unwrap();
            assert!(model.is_normalized() && model.satisfies(&s).unwrap());
        }
    }
}

#[test]
fn unsupported_routes_for_three_measurements() {
    let s = build_scenario(3).unwrap();
    assert!(nc_polytope(&s, Route::Fm).is_err());
    assert!(nc_polytope(&s, Route::AppendixB).is_err());
    assert!(build_scenario(4).is_err());
}

#[test]
fn saturating_family_on_101_points() {
    let s = build_scenario(2).unwrap();
    for k in 0..=100 {
        let u = rat(-1, 4) + rat(k, 200);
        let m = saturating_model(&u).unwrap();
        assert!(m.is_normalized() && m.satisfies(&s).unwrap());
        let t = m.expectations(0);
        assert_eq!(&t[0] + &t[1], one());
        assert_eq!(t[0], rat(1, 2) - int(2) * &u);
    }
    assert!(saturating_model(&rat(26, 100)).is_err());
}

proptest! {
    /// Every valid member of the general family satisfies the NC system and
    /// stays inside the diamond.
    #[test]
    fn family_members_are_noncontextual(
        a in 0i64..=8, b in 0i64..=8, c in 0i64..=8, e in -4i64..=4, g in -4i64..=4,
    ) {
        let d = 8 - a - b - c;
        prop_assume!(d >= 0);
        let q = |x: i64| rat(x, 8);
        let delta = int(2) * (q(a) + q(d)) - one() - q(e) - q(g);
        if let FamilyOutcome::Valid { model } = analytic_mu_family(&q(a), &q(b), &q(c), &q(d), &q(e), &q(g), &delta) {
            prop_assert!(model.satisfies(&build_scenario(2).unwrap()).unwrap());
            let t = model.expectations(0);
            prop_assert!(abs(&t[0]) + abs(&t[1]) <= one());
        }
    }
}

/// Rational points `(x, z)` on circles of radius `r` from Pythagorean triples.
fn pythagorean_points() -> Vec<(Rational, Rational)> {
    let triples = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)];
    let radii = [one(), rat(4, 5), rat(3, 4), rat(1, 2)];
    let mut out = Vec::new();
    for (a, b, c) in triples {
        for r in &radii {
            out.push((r * rat(a, c), r * rat(b, c)));
        }
    }
    out
}

#[test]
fn pythagorean_quadruples_infeasible_iff_sum_exceeds_one() {
    let eq = Equivalence::new(vec![(0, rat(1, 2)), (2, rat(1, 2))], vec![(1, rat(1, 2)), (3, rat(1, 2))]);
    let ms = [Measurement::along(Axis::X), Measurement::along(Axis::Z)];
    let points = pythagorean_points();
    assert_eq!(points.len(), 20);
    let mut infeasible = 0;
    for (x, z) in points {
        let preps = vec![
            RepVector::state(x.clone(), zero(), z.clone()),
            RepVector::state(-x.clone(), zero(), z.clone()),
            RepVector::state(-x.clone(), zero(), -z.clone()),
            RepVector::state(x.clone(), zero(), -z.clone()),
        ];
        let out = nc_feasibility(&preps, std::slice::from_ref(&eq), &ms).unwrap();
        let exceeds = &x + &z > one();
        assert_eq!(!out.is_feasible(), exceeds, "({x}, {z})");
        match out {
            FeasibilityOutcome::Infeasible { system, certificate } => {
                infeasible += 1;
                assert!(certificate.verify(&system));
            }
            FeasibilityOutcome::Feasible { model } => {
                for (i, s) in preps.iter().enumerate() {
                    assert_eq!(model.expectations(i), vec![s.sx.clone(), s.sz.clone()]);
                }
            }
        }
    }
    assert!(infeasible > 0 && infeasible < 20);
}

#[test]
fn simplicial_saturates_without_violation() {
    let t = make_theory("simplicial", None).unwrap();
    let r = violation_report(&t, Group::A12).unwrap();
    assert_eq!(r.max_value, Surd::rational(one()));
    assert_eq!(r.verdict, Verdict::Saturates);
}

#[test]
fn bound_report_json_round_trip() {
    let s = build_scenario(3).unwrap();
    let r = nc_polytope(&s, Route::AnalyticLp).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    let back: BoundReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
}
