//! The head-step relation and its pattern-relative companion.
//!
//! The head step of a term is its unique preferred step. For an application
//! `(\p.B) N` whose argument does not match `p`, the head step lies inside
//! `N` (or deeper), selected relative to `p`: the pattern-relative relation
//! picks the step needed to bring `N` closer to matching `p`. Which redex is
//! preferred therefore depends on both the argument and the pattern.
//!
//! Rules for `M ->h M'`:
//!
//! ```text
//! HApp1:  M ->h M'          ==>  M N ->h M' N
//! HBeta:  p matches N by t  ==>  (\p.B) N ->h t B
//! HPat:   N ->[p] N'        ==>  (\p.B) N ->h (\p.B) N'
//! ```
//!
//! and for the pattern-relative step `M ->[p] M'` (data patterns only; no
//! rule derives a step relative to a variable pattern):
//!
//! ```text
//! PatHead:  M ->h M'                          ==>  M ->[d] M'
//! Pat1:     D ->[d] D', D a data term         ==>  D M ->[d p] D' M
//! Pat2:     M ->[p] M', d matches D           ==>  D M ->[d p] D M'
//! ```
//!
//! The premises are mutually exclusive (a pattern-relative step exists only
//! when the pattern does not match, and abstractions and data terms have no
//! head step), so every term has at most one head redex. The functions below
//! assert that exclusivity in debug builds instead of relying on it silently.

use crate::matching::{match_renamed, matches_renamed, MatchOutcome};
use crate::reduction::{Dir, Position, StepRecord};
use crate::subst::{rename_binder_apart, Subst};
use crate::syntax::{DataPattern, Pattern, Term};

/// Why a head step fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeadJust {
    /// Step in the function position of an application.
    HApp1(Box<HeadJust>),
    /// Beta at the root; carries the match witness.
    HBeta(Subst),
    /// Step inside the argument, relative to the binder pattern.
    HPat(Box<PatJust>),
}

/// Why a pattern-relative step fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatJust {
    /// The term's own head step is the preferred step.
    PatHead(Box<HeadJust>),
    /// Step in the data spine, the argument pattern still pending.
    Pat1(Box<PatJust>),
    /// The spine already matches (witness recorded); step in the argument.
    Pat2(Box<PatJust>, Subst),
}

impl HeadJust {
    pub fn rule_name(&self) -> &'static str {
        match self {
            HeadJust::HApp1(_) => "HApp1",
            HeadJust::HBeta(_) => "HBeta",
            HeadJust::HPat(_) => "HPat",
        }
    }

    /// Position of the contracted redex.
    pub fn redex_position(&self) -> Position {
        let mut path = Vec::new();
        self.push_position(&mut path);
        Position(path)
    }

    fn push_position(&self, path: &mut Vec<Dir>) {
        match self {
            HeadJust::HApp1(inner) => {
                path.push(Dir::FunSide);
                inner.push_position(path);
            }
            HeadJust::HBeta(_) => {}
            HeadJust::HPat(inner) => {
                path.push(Dir::ArgSide);
                inner.push_position(path);
            }
        }
    }
}

impl PatJust {
    pub fn rule_name(&self) -> &'static str {
        match self {
            PatJust::PatHead(_) => "PatHead",
            PatJust::Pat1(_) => "Pat1",
            PatJust::Pat2(..) => "Pat2",
        }
    }

    pub fn redex_position(&self) -> Position {
        let mut path = Vec::new();
        self.push_position(&mut path);
        Position(path)
    }

    fn push_position(&self, path: &mut Vec<Dir>) {
        match self {
            PatJust::PatHead(inner) => inner.push_position(path),
            PatJust::Pat1(inner) => {
                path.push(Dir::FunSide);
                inner.push_position(path);
            }
            PatJust::Pat2(inner, _) => {
                path.push(Dir::ArgSide);
                inner.push_position(path);
            }
        }
    }
}

/// The unique head reduct of a term, if any.
pub fn head_step(term: &Term) -> Option<(Term, HeadJust)> {
    let Term::App(fun, arg) = term else { return None };
    match fun.as_ref() {
        Term::Abs(p, body) => {
            let (p, body, _) = rename_binder_apart(p, body, &arg.all_idents());
            match match_renamed(&p, arg) {
                MatchOutcome::Matched(theta) => {
                    debug_assert!(
                        pattern_head_step(&p, arg).is_none(),
                        "HBeta and HPat overlap on {term}"
                    );
                    Some((theta.apply(&body), HeadJust::HBeta(theta)))
                }
                MatchOutcome::NoMatch => {
                    let (next, just) = pattern_head_step(&p, arg)?;
                    Some((
                        Term::App(fun.clone(), Box::new(next)),
                        HeadJust::HPat(Box::new(just)),
                    ))
                }
            }
        }
        _ => {
            let (next, just) = head_step(fun)?;
            Some((
                Term::App(Box::new(next), arg.clone()),
                HeadJust::HApp1(Box::new(just)),
            ))
        }
    }
}

/// The unique step of `term` relative to pattern `p`, if any. Variable
/// patterns admit no step; a step exists only when `p` does not match.
pub fn pattern_head_step(p: &Pattern, term: &Term) -> Option<(Term, PatJust)> {
    match p {
        Pattern::Var(_) => None,
        Pattern::Data(d) => {
            let result = pattern_head_step_data(d, term);
            debug_assert!(
                result.is_none() || !matches_renamed(p, term),
                "pattern-relative step exists although {p} matches {term}"
            );
            result
        }
    }
}

fn pattern_head_step_data(d: &DataPattern, term: &Term) -> Option<(Term, PatJust)> {
    if let Some((next, just)) = head_step(term) {
        debug_assert!(
            !term.is_data_term(),
            "data term {term} cannot have a head step"
        );
        return Some((next, PatJust::PatHead(Box::new(just))));
    }
    let DataPattern::App(dh, dp) = d else { return None };
    let Term::App(fun, arg) = term else { return None };
    if !fun.is_data_term() {
        return None;
    }
    if let Some((next, just)) = pattern_head_step_data(dh, fun) {
        debug_assert!(
            !matches_renamed(&Pattern::Data((**dh).clone()), fun),
            "Pat1 and Pat2 overlap on {term}"
        );
        return Some((
            Term::App(Box::new(next), arg.clone()),
            PatJust::Pat1(Box::new(just)),
        ));
    }
    if let MatchOutcome::Matched(left) = match_renamed(&Pattern::Data((**dh).clone()), fun) {
        if let Some((next, just)) = pattern_head_step(dp, arg) {
            return Some((
                Term::App(fun.clone(), Box::new(next)),
                PatJust::Pat2(Box::new(just), left),
            ));
        }
    }
    None
}

/// Iterate head steps until none applies or the fuel runs out.
pub fn head_reduce_star(term: &Term, fuel: usize) -> (Vec<StepRecord>, Term, bool) {
    let mut cur = term.clone();
    let mut steps = Vec::new();
    for _ in 0..fuel {
        let Some((next, just)) = head_step(&cur) else {
            return (steps, cur, false);
        };
        steps.push(StepRecord {
            source: cur.clone(),
            position: just.redex_position(),
            result: next.clone(),
        });
        cur = next;
    }
    let exhausted = head_step(&cur).is_some();
    (steps, cur, exhausted)
}

/// Iterate pattern-relative steps until none applies or the fuel runs out.
pub fn pattern_head_reduce_star(p: &Pattern, term: &Term, fuel: usize) -> (Vec<StepRecord>, Term, bool) {
    let mut cur = term.clone();
    let mut steps = Vec::new();
    for _ in 0..fuel {
        let Some((next, just)) = pattern_head_step(p, &cur) else {
            return (steps, cur, false);
        };
        steps.push(StepRecord {
            source: cur.clone(),
            position: just.redex_position(),
            result: next.clone(),
        });
        cur = next;
    }
    let exhausted = pattern_head_step(p, &cur).is_some();
    (steps, cur, exhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_pattern, parse_term};
    use crate::reduction::{step_at, validate_step};
    use crate::syntax::{alpha_eq, app};

    fn term(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    fn pat(src: &str) -> Pattern {
        parse_pattern(src).unwrap()
    }

    #[test]
    fn beta_at_the_root() {
        let (t, j) = head_step(&term("(\\x.x) A")).unwrap();
        assert_eq!(t, term("A"));
        assert_eq!(j.rule_name(), "HBeta");
    }

    #[test]
    fn head_step_descends_the_spine() {
        let (t, j) = head_step(&term("((\\x.x) A) B")).unwrap();
        assert_eq!(t, term("A B"));
        assert!(matches!(j, HeadJust::HApp1(inner) if inner.rule_name() == "HBeta"));
    }

    #[test]
    fn no_head_step_for_stuck_terms() {
        for src in ["x A", "A B", "\\x.(\\y.y) x", "x", "A"] {
            assert!(head_step(&term(src)).is_none(), "{src} should have no head step");
        }
    }

    /// The selected redex inside the argument depends on the binder pattern.
    /// With R1 = (\z.z) B and R2 = (\z.z) (B C) and N = (A R1) R2:
    /// pattern (A x) (B y) needs R2, pattern (A (B x)) y needs R1,
    /// pattern (A (B x)) (C y) needs both and takes the leftmost (R1),
    /// and pattern (A x) y matches N outright, so the whole term is the redex.
    #[test]
    fn head_selection_depends_on_the_pattern() {
        let n = term("(A ((\\z.z) B)) ((\\z.z) (B C))");

        let q1 = app(term("\\((A x) (B y)).x"), n.clone());
        let (t1, j1) = head_step(&q1).unwrap();
        assert_eq!(t1, app(term("\\((A x) (B y)).x"), term("(A ((\\z.z) B)) (B C)")));
        assert_eq!(j1.rule_name(), "HPat");
        assert_eq!(j1.redex_position(), "arg.arg".parse().unwrap());

        let q2 = app(term("\\((A (B x)) y).x"), n.clone());
        let (t2, j2) = head_step(&q2).unwrap();
        assert_eq!(t2, app(term("\\((A (B x)) y).x"), term("(A B) ((\\z.z) (B C))")));
        assert_eq!(j2.redex_position(), "arg.fun.arg".parse().unwrap());

        let q3 = app(term("\\((A (B x)) (C y)).x"), n.clone());
        let (t3, _) = head_step(&q3).unwrap();
        assert_eq!(t3, app(term("\\((A (B x)) (C y)).x"), term("(A B) ((\\z.z) (B C))")));

        let q4 = app(term("\\((A x) y).x"), n.clone());
        let (t4, j4) = head_step(&q4).unwrap();
        assert_eq!(j4.rule_name(), "HBeta");
        assert!(alpha_eq(&t4, &term("(\\z.z) B")));
    }

    #[test]
    fn pattern_relative_steps() {
        // (A x, (\z.z) C) steps by PatHead
        let (t, j) = pattern_head_step(&pat("A x"), &term("(\\z.z) C")).unwrap();
        assert_eq!(t, term("C"));
        assert_eq!(j.rule_name(), "PatHead");

        // variable patterns admit no step
        assert!(pattern_head_step(&pat("x"), &term("(\\z.z) C")).is_none());

        // (A x)(B y) against (A R1) R2 steps inside R2 by Pat2
        let n = term("(A ((\\z.z) B)) ((\\z.z) (B C))");
        let (t, j) = pattern_head_step(&pat("(A x) (B y)"), &n).unwrap();
        assert_eq!(t, term("(A ((\\z.z) B)) (B C)"));
        assert_eq!(j.rule_name(), "Pat2");
    }

    #[test]
    fn no_pattern_step_when_the_pattern_matches() {
        let n = term("(A ((\\z.z) B)) ((\\z.z) (B C))");
        assert!(pattern_head_step(&pat("(A x) y"), &n).is_none());
        assert!(pattern_head_step(&pat("A"), &term("A")).is_none());
    }

    #[test]
    fn head_steps_are_reduction_steps() {
        for src in [
            "(\\x.x) A",
            "((\\x.x) A) B",
            "(\\(A x).x) ((\\y.y) (A B))",
            "(\\((A x) (B y)).x) ((A ((\\z.z) B)) ((\\z.z) (B C)))",
        ] {
            let t = term(src);
            let (next, just) = head_step(&t).unwrap();
            let via_position = step_at(&t, &just.redex_position()).unwrap();
            assert!(alpha_eq(&via_position, &next), "position mismatch for {src}");
        }
    }

    #[test]
    fn star_closures() {
        let (steps, t, exhausted) = head_reduce_star(&term("(\\x.x) ((\\y.y) A)"), 10);
        assert_eq!(steps.len(), 2);
        assert_eq!(t, term("A"));
        assert!(!exhausted);
        assert!(steps.iter().all(validate_step));

        let (steps, _, _) = head_reduce_star(&term("A"), 10);
        assert!(steps.is_empty());

        let omega = term("(\\x.x x) (\\x.x x)");
        let (steps, _, exhausted) = head_reduce_star(&omega, 3);
        assert_eq!(steps.len(), 3);
        assert!(exhausted);
    }
}
