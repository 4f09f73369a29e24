//! The eight four-preparation noncontextuality inequalities, reduced to
//! `(⟨X⟩, ⟨Z⟩)` of the first preparation.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fm::remove_redundant;
use crate::linsys::{LinearSystem, Row};
use crate::orbit::{sign_pattern, Group};
use crate::rational::{int, one, rat, zero, Rational};

/// `coeff · ℙ(+1 | t, s)`, with setting `t = 1` for `Z`, `t = 2` for `X`
/// and preparation `s` in `1..=4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbTerm {
    pub coeff: i64,
    pub t: usize,
    pub s: usize,
}

const fn p(coeff: i64, t: usize, s: usize) -> ProbTerm {
    ProbTerm { coeff, t, s }
}

/// Inequalities (a)–(h), each `Σ terms <= 1`.
pub fn appendix_b_inequalities() -> Vec<(char, [ProbTerm; 4])> {
    vec![
        ('a', [p(1, 1, 2), p(1, 2, 2), p(-1, 2, 3), p(-1, 1, 4)]),
        ('b', [p(1, 1, 2), p(1, 2, 2), p(-1, 1, 3), p(-1, 2, 4)]),
        ('c', [p(1, 2, 2), p(1, 1, 3), p(-1, 1, 2), p(-1, 2, 4)]),
        ('d', [p(1, 1, 2), p(1, 2, 3), p(-1, 2, 2), p(-1, 1, 4)]),
        ('e', [p(1, 2, 2), p(1, 1, 4), p(-1, 1, 2), p(-1, 2, 3)]),
        ('f', [p(1, 2, 3), p(1, 1, 4), p(-1, 1, 2), p(-1, 2, 2)]),
        ('g', [p(1, 1, 2), p(1, 2, 4), p(-1, 2, 2), p(-1, 1, 3)]),
        ('h', [p(1, 1, 3), p(1, 2, 4), p(-1, 1, 2), p(-1, 2, 2)]),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixBReduction {
    /// Each inequality after substitution, over `(X, Z)`, canonical.
    pub substituted: Vec<(char, Row)>,
    pub reduced: LinearSystem,
}

/// Substitutes `ℙ_{ts} = (⟨W_t⟩_s + 1)/2` and the A₁² sign relations
/// `⟨W⟩_s = σ_s(W)⟨W⟩` into (a)–(h) and the bounds `0 <= ℙ_{ts} <= 1`,
/// then drops redundant rows.
pub fn appendix_b_reduce() -> Result<AppendixBReduction> {
    // sign_pattern columns are (X, Z); setting 1 is Z, setting 2 is X
    let signs = sign_pattern(Group::A12);
    let substitute = |terms: &[ProbTerm], bound: Rational| {
        let mut a = vec![zero(), zero()];
        let mut b = bound;
        for term in terms {
            let (col, sign_col) = if term.t == 1 { (1, 1) } else { (0, 0) };
            let sigma = int(signs[term.s - 1][sign_col] as i64);
            let c = int(term.coeff);
            a[col] += &c * &sigma * rat(1, 2);
            b -= c * rat(1, 2);
        }
        Row::le(a, b).canonical()
    };
    let substituted: Vec<(char, Row)> =
        appendix_b_inequalities().iter().map(|(label, terms)| (*label, substitute(terms, one()))).collect();
    let mut sys = LinearSystem::new(["X", "Z"]);
    sys.rows.extend(substituted.iter().map(|(_, r)| r.clone()));
    for t in 1..=2 {
        for s in 1..=4 {
            sys.rows.push(substitute(&[p(1, t, s)], one()));
            sys.rows.push(substitute(&[p(-1, t, s)], zero()));
        }
    }
    Ok(AppendixBReduction { substituted, reduced: remove_redundant(&sys)? })
}
