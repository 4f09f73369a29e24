//! Fourier–Motzkin projection and LP-certified redundancy removal.

use num_traits::{Signed, Zero};

use crate::error::{contract, Error, Result};
use crate::linsys::{LinearSystem, Relation, Row};
use crate::lp::{is_feasible, lp_solve, LpOutcome, Sense};
use crate::rational::Rational;

/// Drops every row whose removal leaves the solution set unchanged.
///
/// Rows are tested one at a time against the rows still kept; a `<=` row
/// is redundant when the maximum of its left-hand side over the others
/// does not exceed its bound, an `=` row when both extremes equal it.
/// The result is canonical (see [`Row::canonical`]).
pub fn remove_redundant(system: &LinearSystem) -> Result<LinearSystem> {
    system.check_shape()?;
    if !is_feasible(system)? {
        return Err(Error::Infeasible);
    }
    let mut rows: Vec<Row> = system
        .canonicalize()
        .rows
        .into_iter()
        .filter(|r| !r.is_trivial())
        .collect();
    let mut i = 0;
    while i < rows.len() {
        let candidate = rows.remove(i);
        let others = LinearSystem { vars: system.vars.clone(), rows: rows.clone() };
        let redundant = match candidate.rel {
            Relation::Le => bounded_by(&others, &candidate.a, Sense::Max, &candidate.b)?,
            Relation::Eq => {
                bounded_by(&others, &candidate.a, Sense::Max, &candidate.b)?
                    && bounded_by(&others, &candidate.a, Sense::Min, &candidate.b)?
            }
        };
        if !redundant {
            rows.insert(i, candidate);
            i += 1;
        }
    }
    Ok(LinearSystem { vars: system.vars.clone(), rows })
}

/// Whether the optimum of `obj` over `sys` is on the right side of `b`
/// (at most `b` for Max, at least `b` for Min).
fn bounded_by(sys: &LinearSystem, obj: &[Rational], sense: Sense, b: &Rational) -> Result<bool> {
    Ok(match lp_solve(sys, obj, sense)? {
        LpOutcome::Optimal { value, .. } => match sense {
            Sense::Max => value <= *b,
            Sense::Min => value >= *b,
        },
        LpOutcome::Unbounded => false,
        LpOutcome::Infeasible => return Err(Error::Infeasible),
    })
}

/// Projects `system` onto the variables in `keep` (in that order).
///
/// Equalities are used first to substitute eliminable variables away;
/// the rest are removed by pairwise Fourier–Motzkin combination, with
/// [`remove_redundant`] applied after each eliminated variable.
pub fn fm_project(system: &LinearSystem, keep: &[&str]) -> Result<LinearSystem> {
    system.check_shape()?;
    if keep.is_empty() {
        return Err(contract("projection onto an empty variable set"));
    }
    for k in keep {
        if system.var_index(k).is_none() {
            return Err(contract(format!("variable `{k}` not in system")));
        }
    }
    let is_kept = |name: &str| keep.contains(&name);
    let mut sys = system.canonicalize();

    // Equality substitution.
    loop {
        let hit = sys.rows.iter().enumerate().find_map(|(i, r)| {
            if r.rel != Relation::Eq {
                return None;
            }
            r.a.iter()
                .enumerate()
                .find(|(j, c)| !c.is_zero() && !is_kept(&sys.vars[*j]))
                .map(|(j, _)| (i, j))
        });
        let Some((i, j)) = hit else { break };
        let pivot = sys.rows.remove(i);
        for row in sys.rows.iter_mut() {
            if row.a[j].is_zero() {
                continue;
            }
            let f = &row.a[j] / &pivot.a[j];
            for (v, p) in row.a.iter_mut().zip(&pivot.a) {
                *v -= &f * p;
            }
            row.b -= &f * &pivot.b;
        }
        sys = drop_var(&sys, j);
        sys = sys.canonicalize();
    }
    check_trivial_rows(&sys)?;
    sys.rows.retain(|r| !r.is_trivial());

    // Fourier–Motzkin on what is left.
    loop {
        let candidates: Vec<usize> = (0..sys.dim()).filter(|&j| !is_kept(&sys.vars[j])).collect();
        if candidates.is_empty() {
            break;
        }
        let j = *candidates
            .iter()
            .min_by_key(|&&j| {
                let pos = sys.rows.iter().filter(|r| r.a[j].is_positive()).count();
                let neg = sys.rows.iter().filter(|r| r.a[j].is_negative()).count();
                (pos * neg) as isize - (pos + neg) as isize
            })
            .expect("nonempty");
        let mut next = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for r in &sys.rows {
            debug_assert!(r.rel == Relation::Le || r.a[j].is_zero());
            if r.a[j].is_positive() {
                pos.push(r);
            } else if r.a[j].is_negative() {
                neg.push(r);
            } else {
                next.push(r.clone());
            }
        }
        for p in &pos {
            for n in &neg {
                let cp = p.a[j].clone();
                let cn = -n.a[j].clone();
                let a: Vec<Rational> = p.a.iter().zip(&n.a).map(|(x, y)| x / &cp + y / &cn).collect();
                let b = &p.b / &cp + &n.b / &cn;
                next.push(Row::le(a, b));
            }
        }
        sys = drop_var(&LinearSystem { vars: sys.vars.clone(), rows: next }, j);
        check_trivial_rows(&sys)?;
        sys.rows.retain(|r| !r.is_trivial());
        sys = remove_redundant(&sys)?;
    }

    let order: Vec<String> = keep.iter().map(|s| s.to_string()).collect();
    let projected = sys.reindex(&order)?;
    remove_redundant(&projected)
}

fn drop_var(sys: &LinearSystem, j: usize) -> LinearSystem {
    let mut vars = sys.vars.clone();
    vars.remove(j);
    let rows = sys
        .rows
        .iter()
        .map(|r| {
            let mut a = r.a.clone();
            a.remove(j);
            Row::new(a, r.rel, r.b.clone())
        })
        .collect();
    LinearSystem { vars, rows }
}

fn check_trivial_rows(sys: &LinearSystem) -> Result<()> {
    for r in sys.rows.iter().filter(|r| r.is_trivial()) {
        let ok = match r.rel {
            Relation::Le => !r.b.is_negative(),
            Relation::Eq => r.b.is_zero(),
        };
        if !ok {
            return Err(Error::Infeasible);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sys(vars: &[&str], rows: Vec<Row>) -> LinearSystem {
        LinearSystem::new(vars.iter().copied()).with_rows(rows).unwrap()
    }

    #[test]
    fn one_elimination_step() {
        let s = sys(&["x", "y"], vec![Row::le(vec![int(1), int(1)], int(1)), Row::le(vec![int(0), int(-1)], int(0))]);
        let p = fm_project(&s, &["x"]).unwrap();
        assert_eq!(p, sys(&["x"], vec![Row::le(vec![int(1)], int(1))]));
    }

    #[test]
    fn equality_substitution() {
        let s = sys(&["x", "y"], vec![Row::eq(vec![int(1), int(-1)], int(0)), Row::le(vec![int(0), int(1)], int(2))]);
        let p = fm_project(&s, &["x"]).unwrap();
        assert_eq!(p, sys(&["x"], vec![Row::le(vec![int(1)], int(2))]));
    }

    #[test]
    fn empty_keep_is_contract_violation() {
        let s = sys(&["x"], vec![]);
        assert!(matches!(fm_project(&s, &[]), Err(Error::Contract(_))));
        assert!(matches!(fm_project(&s, &["nope"]), Err(Error::Contract(_))));
    }

    #[test]
    fn redundant_bound_dropped() {
        let s = sys(&["x"], vec![Row::le(vec![int(1)], int(1)), Row::le(vec![int(1)], int(2))]);
        assert_eq!(remove_redundant(&s).unwrap(), sys(&["x"], vec![Row::le(vec![int(1)], int(1))]));
    }

    #[test]
    fn duplicate_rows_collapse() {
        let s = sys(
            &["x"],
            vec![Row::le(vec![int(1)], int(1)), Row::le(vec![int(-1)], int(0)), Row::le(vec![int(1)], int(1))],
        );
        assert_eq!(remove_redundant(&s).unwrap().rows.len(), 2);
    }

    #[test]
    fn infeasible_system_is_an_error() {
        let s = sys(&["x"], vec![Row::le(vec![int(1)], int(0)), Row::ge(vec![int(1)], int(1))]);
        assert_eq!(remove_redundant(&s), Err(Error::Infeasible));
    }

    #[test]
    fn implied_equality_removed() {
        // x, y >= 0 and x + y <= 0 already force x = 0.
        let s = sys(
            &["x", "y"],
            vec![
                Row::le(vec![int(1), int(1)], int(0)),
                Row::le(vec![int(-1), int(0)], int(0)),
                Row::le(vec![int(0), int(-1)], int(0)),
                Row::eq(vec![int(1), int(0)], int(0)),
            ],
        );
        let r = remove_redundant(&s).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert!(r.contains(&[int(0), int(0)]));
        assert!(!r.contains(&[int(1), int(-1)]));
    }
}
