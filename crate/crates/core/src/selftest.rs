//! Built-in acceptance checks behind `ncur selftest`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::contextuality::{
    build_scenario, depolarization_threshold, nc_feasibility, nc_max, nc_polytope, saturating_model,
    sign_patterns, violation_report, Equivalence, FeasibilityOutcome, Route, Verdict,
};
use crate::error::Result;
use crate::linsys::{LinearSystem, Row};
use crate::orbit::{a12_check, has_symmetry, realizable_region, region_vertices, Group, OrbitOutcome, Refutation};
use crate::polytope::Point;
use crate::rational::{int, one, rat, zero, Rational};
use crate::report::{default_eta, report_json};
use crate::surd::Surd;
use crate::theories::{make_theory, octahedron_vertices, Axis, Measurement, RepVector, TheorySpec};
use crate::uncertainty::{convert_form, four_form_bounds};

#[derive(Clone, Debug, Default)]
pub struct SelftestOptions {
    pub skip_fm: bool,
    /// Replaces the built-in stabilizer theory.
    pub stabilizer: Option<TheorySpec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub skipped: Vec<String>,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        let mut line = format!("{tag} {:>2} {}: {} ({:.2?})", self.id, self.name, self.detail, self.elapsed);
        for s in &self.skipped {
            line.push_str(&format!(" [skipped: {s}]"));
        }
        line
    }
}

struct Check {
    failures: Vec<String>,
    notes: Vec<String>,
    skipped: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { failures: Vec::new(), notes: Vec::new(), skipped: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn budget(&mut self, start: Instant, limit: Duration) {
        let e = start.elapsed();
        self.expect(e < limit, format!("runtime {e:.2?} < {limit:?}"));
    }
}

type CheckFn = fn(&SelftestOptions, &mut Check) -> Result<()>;

const CRITERIA: [(u8, &str, CheckFn); 12] = [
    (1, "n=2 noncontextual bound", c1),
    (2, "diamond facets", c2),
    (3, "n=3 noncontextual bound", c3),
    (4, "quantum violations", c4),
    (5, "foil maxima", c5),
    (6, "depolarization thresholds", c6),
    (7, "saturation family", c7),
    (8, "orbit classification", c8),
    (9, "grid oracle dominance", c9),
    (10, "form equivalence", c10),
    (11, "feasibility checker", c11),
    (12, "report determinism", c12),
];

pub fn run_selftest(opts: &SelftestOptions) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|&(id, name, f)| {
            let start = Instant::now();
            let mut check = Check::new();
            if let Err(e) = f(opts, &mut check) {
                check.failures.push(format!("error: {e}"));
            }
            let (status, detail) = if check.failures.is_empty() {
                (Status::Pass, check.notes.join("; "))
            } else {
                (Status::Fail, format!("failed: {}", check.failures.join("; ")))
            };
            CriterionResult { id, name, status, detail, skipped: check.skipped, elapsed: start.elapsed() }
        })
        .collect()
}

fn c1(_: &SelftestOptions, c: &mut Check) -> Result<()> {
    let start = Instant::now();
    let s = build_scenario(2)?;
    for signs in sign_patterns(2) {
        let v = nc_max(&s, &signs)?.optimum;
        c.expect(v == one(), format!("max {signs:?} = {v}"));
    }
    c.budget(start, Duration::from_secs(1));
    Ok(())
}

fn diamond() -> LinearSystem {
    let rows = [(1, 1), (1, -1), (-1, 1), (-1, -1)].map(|(x, z)| Row::le(vec![int(x), int(z)], one()));
    LinearSystem::new(["X", "Z"]).with_rows(rows).expect("shape")
}

fn point_set(v: &[Point]) -> BTreeSet<Point> {
    v.iter().cloned().collect()
}

fn c2(opts: &SelftestOptions, c: &mut Check) -> Result<()> {
    let s = build_scenario(2)?;
    let target = diamond();
    let mut routes = vec![Route::AnalyticLp, Route::AppendixB];
    if opts.skip_fm {
        c.skipped.push("fm route".into());
    } else {
        routes.push(Route::Fm);
    }
    let vertex_set: BTreeSet<Point> =
        [(1, 0), (-1, 0), (0, 1), (0, -1)].iter().map(|&(x, z)| vec![int(x), int(z)]).collect();
    for route in routes {
        let r = nc_polytope(&s, route)?;
        c.expect(r.facets.rows.len() == 4 && r.facets.same_rows(&target), format!("{route} facets = diamond"));
        c.expect(point_set(&r.vertices) == vertex_set, format!("{route} vertices"));
    }
    Ok(())
}

fn c3(_: &SelftestOptions, c: &mut Check) -> Result<()> {
    let start = Instant::now();
    let s = build_scenario(3)?;
    let r = nc_polytope(&s, Route::AnalyticLp)?;
    c.expect(r.optimum == one(), format!("max over 8 patterns = {}", r.optimum));
    c.expect(r.certificates.len() == 8, format!("{} patterns certified", r.certificates.len()));
    c.expect(r.facets.rows.len() == 8, format!("{} facets", r.facets.rows.len()));
    c.expect(point_set(&r.vertices) == point_set(&octahedron_vertices()), format!("{} vertices", r.vertices.len()));
    c.budget(start, Duration::from_secs(30));
    Ok(())
}

fn c4(_: &SelftestOptions, c: &mut Check) -> Result<()> {
    let q = make_theory("qubit", None)?;
    for (group, k, text) in [(Group::A12, 2, "1.414"), (Group::A13, 3, "1.732")] {
        let v = violation_report(&q, group)?.max_value;
        c.expect(v == Surd::radical(one(), k), format!("qubit {group} = {v}"));
        c.expect(format!("{:.3}", v.to_f64()) == text, format!("float {:.3}", v.to_f64()));
    }
    Ok(())
}

fn stabilizer(opts: &SelftestOptions) -> Result<TheorySpec> {
    match &opts.stabilizer {
        Some(t) => Ok(t.clone()),
        None => make_theory("stabilizer", None),
    }
}

fn c5(opts: &SelftestOptions, c: &mut Check) -> Result<()> {
    let g = make_theory("gbit", None)?;
    for (group, want) in [(Group::A12, 2), (Group::A13, 3)] {
        let v = violation_report(&g, group)?.max_value;
        c.expect(v == Surd::rational(int(want)), format!("gbit {group} = {v}"));
    }
    let s = stabilizer(opts)?;
    let vertices = s.vertices().unwrap_or_default();
    c.expect(point_set(&vertices) == point_set(&octahedron_vertices()), "stabilizer vrep is the octahedron");
    for group in [Group::A12, Group::A13] {
        let v = violation_report(&s, group)?.max_value;
        c.expect(v == Surd::rational(one()), format!("stabilizer {group} = {v}"));
    }
    Ok(())
}

fn c6(_: &SelftestOptions, c: &mut Check) -> Result<()> {
    let t2 = depolarization_threshold(Group::A12);
    let t3 = depolarization_threshold(Group::A13);
    c.expect(t2 == Surd::new(one(), rat(-1, 2), 2)?, format!("eta*(a12) = {t2}"));
    c.expect(t3 == Surd::new(one(), rat(-1, 3), 3)?, format!("eta*(a13) = {t3}"));
    let pass = violation_report(&make_theory("depolarized", Some(rat(3, 10)))?, Group::A12)?;
    c.expect(pass.verdict == Verdict::NoncontextualCompatible, format!("eta=3/10: {}", pass.max_value));
    let fail = violation_report(&make_theory("depolarized", Some(rat(1, 4)))?, Group::A12)?;
    c.expect(fail.verdict == Verdict::Contextual, format!("eta=1/4: {}", fail.max_value));
    Ok(())
}

fn c7(_: &SelftestOptions, c: &mut Check) -> Result<()> {
    let s = build_scenario(2)?;
    let mut bad = 0;
    for k in 0..=100 {
        let u = rat(-1, 4) + rat(k, 200);
        let m = saturating_model(&u)?;
        let t = m.expectations(0);
        if !(m.is_normalized() && m.satisfies(&s)? && &t[0] + &t[1] == one()) {
            bad += 1;
        }
    }
    c.expect(bad == 0, format!("{} of 101 models saturate", 101 - bad));
    let t = saturating_model(&zero())?.expectations(0);
    c.expect(t == vec![rat(1, 2), rat(1, 2)], "u=0 gives (1/2, 1/2)");
    Ok(())
}

fn c8(opts: &SelftestOptions, c: &mut Check) -> Result<()> {
    let theories = [
        make_theory("qubit", None)?,
        stabilizer(opts)?,
        make_theory("depolarized", Some(default_eta()))?,
        make_theory("gbit", None)?,
    ];
    for t in &theories {
        for g in [Group::A12, Group::A13] {
            c.expect(has_symmetry(t, g)?, format!("{} {g} symmetric", t.name));
        }
    }
    let simp = make_theory("simplicial", None)?;
    c.expect(!has_symmetry(&simp, Group::A12)?, "simplicial a12 not symmetric");
    let region = region_vertices(&realizable_region(&simp, Group::A12)?)?.unwrap_or_default();
    c.expect(
        point_set(&region) == point_set(&octahedron_vertices()),
        format!("simplicial a12 region is the octahedron ({} vertices)", region.len()),
    );
    let refuted = match a12_check(&simp, &RepVector::state(one(), one(), one()))? {
        OrbitOutcome::Refuted { refutation: Refutation::RectangleEquality { residual, .. } } => {
            residual == vec![zero(), int(2), zero()]
        }
        _ => false,
    };
    c.expect(refuted, "(1,1,1) refuted, residual (0,2,0)");
    Ok(())
}

/// Exhaustive grid in units of `1/den` over `(a,b,c,d)` on the simplex
/// and `ε, γ` on their common box, `δ` fixed by the identity
/// `a + d = 1/2 + (ε+γ+δ)/2`. Returns the best `⟨X⟩ + ⟨Z⟩ = 2(b − c)`
/// and the number of admissible points.
pub fn grid_oracle(den: i64) -> (Rational, u64) {
    let mut best = i64::MIN;
    let mut count = 0u64;
    for a in 0..=den {
        for b in 0..=den - a {
            for cc in 0..=den - a - b {
                let d = den - a - b - cc;
                // μ entries stay in [0, 1] iff ε, γ, δ ∈ [-min(b,c), min(a,d)]
                let (lo, hi) = (-b.min(cc), a.min(d));
                let s = 2 * (a + d) - den;
                for e in lo..=hi {
                    for g in lo..=hi {
                        let delta = s - e - g;
                        if delta < lo || delta > hi {
                            continue;
                        }
                        count += 1;
                        best = best.max(2 * (b - cc));
                    }
                }
            }
        }
    }
    (rat(best, den), count)
}

fn c9(_: &SelftestOptions, c: &mut Check) -> Result<()> {
    let start = Instant::now();
    let (best, count) = grid_oracle(40);
    let lp = nc_max(&build_scenario(2)?, &[1, 1])?.optimum;
    c.expect(best >= rat(9, 10), format!("grid max {best} over {count} points >= 9/10"));
    c.expect(best <= lp, format!("grid max <= LP {lp}"));
    c.budget(start, Duration::from_secs(120));
    Ok(())
}

fn c10(_: &SelftestOptions, c: &mut Check) -> Result<()> {
    let mut rng = StdRng::seed_from_u64(10);
    let forms = four_form_bounds(3);
    let mut disagreements = 0;
    let mut identity_failures = 0;
    for _ in 0..1000 {
        let t: Vec<Rational> = (0..3).map(|_| rat(rng.gen_range(-1000..=1000), 1000)).collect();
        let rec = convert_form(&t)?;
        let verdicts: Vec<bool> = forms.iter().map(|f| f.holds_at(&t)).collect();
        if verdicts.iter().any(|&v| v != verdicts[0]) || rec.holds.to_vec() != verdicts {
            disagreements += 1;
        }
        for (i, x) in t.iter().enumerate() {
            let sq = x * x;
            if rec.delta2[i] != one() - &sq || rec.c2[i] != (one() + &sq) / int(2) {
                identity_failures += 1;
            }
        }
    }
    c.expect(disagreements == 0, format!("{disagreements} disagreements in 1000 triples"));
    c.expect(identity_failures == 0, format!("{identity_failures} identity failures"));
    Ok(())
}

fn c11(_: &SelftestOptions, c: &mut Check) -> Result<()> {
    let quad = |x: Rational, z: Rational| {
        vec![
            RepVector::state(x.clone(), zero(), z.clone()),
            RepVector::state(-x.clone(), zero(), z.clone()),
            RepVector::state(-x.clone(), zero(), -z.clone()),
            RepVector::state(x, zero(), -z),
        ]
    };
    let eq = Equivalence::new(vec![(0, rat(1, 2)), (2, rat(1, 2))], vec![(1, rat(1, 2)), (3, rat(1, 2))]);
    let ms = [Measurement::along(Axis::X), Measurement::along(Axis::Z)];
    match nc_feasibility(&quad(rat(3, 5), rat(4, 5)), std::slice::from_ref(&eq), &ms)? {
        FeasibilityOutcome::Infeasible { system, certificate } => {
            c.expect(certificate.verify(&system), "(±3/5, ±4/5) infeasible, Farkas certificate verified")
        }
        FeasibilityOutcome::Feasible { .. } => c.expect(false, "(±3/5, ±4/5) infeasible"),
    }
    let octa = vec![
        RepVector::state(one(), zero(), zero()),
        RepVector::state(zero(), zero(), one()),
        RepVector::state(-one(), zero(), zero()),
        RepVector::state(zero(), zero(), -one()),
    ];
    let out = nc_feasibility(&octa, &[eq], &ms)?;
    c.expect(out.is_feasible(), "octahedron quadruple feasible");
    Ok(())
}

fn c12(_: &SelftestOptions, c: &mut Check) -> Result<()> {
    let a = report_json(&default_eta())?;
    let b = report_json(&default_eta())?;
    c.expect(a == b, format!("two reports byte-identical ({} bytes)", a.len()));
    Ok(())
}
