//! One-step reduction, redex positions, and fueled multi-step reduction.
//!
//! A redex is an application `(\p.B) N` whose argument matches the binder;
//! contracting it applies the match witness to the body. Reduction is closed
//! under all term constructors, so redexes are identified by the path from
//! the root.

use std::fmt;

use crate::error::{Error, Result};
use crate::head::head_step;
use crate::matching::{match_pattern, MatchOutcome};
use crate::subst::rename_binder_apart;
use crate::syntax::{alpha_eq, Term};

/// One step into a term: function side or argument side of an application,
/// or the body of an abstraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    FunSide,
    ArgSide,
    Body,
}

/// A path from the root of a term to a subterm.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Position(pub Vec<Dir>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    fn child(&self, d: Dir) -> Self {
        let mut path = self.0.clone();
        path.push(d);
        Position(path)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            match d {
                Dir::FunSide => write!(f, "fun")?,
                Dir::ArgSide => write!(f, "arg")?,
                Dir::Body => write!(f, "body")?,
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "root" {
            return Ok(Position::root());
        }
        let mut path = Vec::new();
        for (i, part) in s.split('.').enumerate() {
            match part.trim() {
                "fun" => path.push(Dir::FunSide),
                "arg" => path.push(Dir::ArgSide),
                "body" => path.push(Dir::Body),
                other => {
                    return Err(Error::Parse {
                        offset: i,
                        message: format!("invalid position token {other:?}"),
                    })
                }
            }
        }
        Ok(Position(path))
    }
}

/// A single recorded reduction step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub source: Term,
    pub position: Position,
    pub result: Term,
}

/// True iff the term is `(\p.B) N` with `N` matching `p`.
pub fn is_redex(term: &Term) -> bool {
    contract_redex(term).is_some()
}

/// Contract a root redex, renaming the binder apart from the argument first.
pub fn contract_redex(term: &Term) -> Option<Term> {
    let Term::App(fun, arg) = term else { return None };
    let Term::Abs(p, body) = fun.as_ref() else { return None };
    let (p, body, _) = rename_binder_apart(p, body, &arg.all_idents());
    match match_pattern(&p, arg).expect("binder was renamed apart") {
        MatchOutcome::Matched(theta) => Some(theta.apply(&body)),
        MatchOutcome::NoMatch => None,
    }
}

/// All redex positions in leftmost-outermost (preorder) document order.
pub fn redex_positions(term: &Term) -> Vec<Position> {
    let mut out = Vec::new();
    collect_redexes(term, Position::root(), &mut out);
    out
}

fn collect_redexes(term: &Term, here: Position, out: &mut Vec<Position>) {
    if is_redex(term) {
        out.push(here.clone());
    }
    match term {
        Term::App(fun, arg) => {
            collect_redexes(fun, here.child(Dir::FunSide), out);
            collect_redexes(arg, here.child(Dir::ArgSide), out);
        }
        Term::Abs(_, body) => collect_redexes(body, here.child(Dir::Body), out),
        _ => {}
    }
}

/// The subterm at a position.
pub fn subterm_at<'a>(term: &'a Term, pos: &Position) -> Option<&'a Term> {
    let mut cur = term;
    for d in &pos.0 {
        cur = match (d, cur) {
            (Dir::FunSide, Term::App(fun, _)) => fun,
            (Dir::ArgSide, Term::App(_, arg)) => arg,
            (Dir::Body, Term::Abs(_, body)) => body,
            _ => return None,
        };
    }
    Some(cur)
}

/// Contract the redex at `pos`, leaving the rest of the term unchanged.
pub fn step_at(term: &Term, pos: &Position) -> Result<Term> {
    fn go(term: &Term, path: &[Dir], pos: &Position) -> Result<Term> {
        match path.split_first() {
            None => contract_redex(term).ok_or_else(|| Error::NotARedex {
                position: pos.to_string(),
                term: term.to_string(),
            }),
            Some((d, rest)) => match (d, term) {
                (Dir::FunSide, Term::App(fun, arg)) => {
                    Ok(Term::App(Box::new(go(fun, rest, pos)?), arg.clone()))
                }
                (Dir::ArgSide, Term::App(fun, arg)) => {
                    Ok(Term::App(fun.clone(), Box::new(go(arg, rest, pos)?)))
                }
                (Dir::Body, Term::Abs(p, body)) => {
                    Ok(Term::Abs(p.clone(), Box::new(go(body, rest, pos)?)))
                }
                _ => Err(Error::InvalidPosition {
                    position: pos.to_string(),
                    term: term.to_string(),
                }),
            },
        }
    }
    go(term, &pos.0, pos)
}

/// Reduction strategies available to [`reduce_fuelled`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Contract the leftmost-outermost redex.
    Leftmost,
    /// Follow the head-step relation.
    Head,
}

/// Apply at most `fuel` steps of a strategy. `exhausted` is true iff the
/// fuel ran out while a further step was still available.
pub fn reduce_fuelled(term: &Term, strategy: Strategy, fuel: usize) -> (Term, Vec<StepRecord>, bool) {
    let mut cur = term.clone();
    let mut steps = Vec::new();
    for _ in 0..fuel {
        let record = match strategy {
            Strategy::Leftmost => {
                let Some(pos) = redex_positions(&cur).into_iter().next() else {
                    return (cur, steps, false);
                };
                let next = step_at(&cur, &pos).expect("redex position is valid");
                StepRecord { source: cur.clone(), position: pos, result: next }
            }
            Strategy::Head => {
                let Some((next, just)) = head_step(&cur) else {
                    return (cur, steps, false);
                };
                StepRecord { source: cur.clone(), position: just.redex_position(), result: next }
            }
        };
        cur = record.result.clone();
        steps.push(record);
    }
    let more = match strategy {
        Strategy::Leftmost => !redex_positions(&cur).is_empty(),
        Strategy::Head => head_step(&cur).is_some(),
    };
    (cur, steps, more)
}

/// Check a recorded step: the position must be a redex of the source and
/// contracting it must give the recorded result up to alpha.
pub fn validate_step(record: &StepRecord) -> bool {
    match step_at(&record.source, &record.position) {
        Ok(t) => alpha_eq(&t, &record.result),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_term;

    fn term(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    #[test]
    fn redex_positions_in_document_order() {
        assert_eq!(redex_positions(&term("(\\x.x) A")), vec![Position::root()]);
        // B does not match (A x), so there is no redex at all
        assert!(redex_positions(&term("(\\(A x).x) B")).is_empty());
        assert_eq!(
            redex_positions(&term("A ((\\x.x) B)")),
            vec![Position(vec![Dir::ArgSide])]
        );
        let t = term("((\\x.x) A) ((\\y.y) B)");
        let ps = redex_positions(&t);
        assert_eq!(ps, vec![Position(vec![Dir::FunSide]), Position(vec![Dir::ArgSide])]);
        let mut sorted = ps.clone();
        sorted.sort();
        assert_eq!(ps, sorted);
    }

    #[test]
    fn step_at_contracts() {
        assert_eq!(step_at(&term("(\\x.x) A"), &Position::root()).unwrap(), term("A"));
        assert_eq!(
            step_at(&term("(\\(A x).x) (A B)"), &Position::root()).unwrap(),
            term("B")
        );
        assert_eq!(
            step_at(&term("\\y.((\\x.x) y)"), &Position(vec![Dir::Body])).unwrap(),
            term("\\y.y")
        );
        assert!(step_at(&term("x"), &Position::root()).is_err());
        assert!(step_at(&term("(\\(A x).x) B"), &Position::root()).is_err());
    }

    #[test]
    fn capture_is_avoided_when_contracting() {
        // (\x.\y.x) y: the free y of the argument must not be captured.
        let t = term("(\\x.\\y.x) y");
        let r = step_at(&t, &Position::root()).unwrap();
        assert_eq!(r.free_vars(), std::collections::BTreeSet::from(["y".to_string()]));
        assert!(alpha_eq(&r, &term("\\z.y")));
    }

    #[test]
    fn fuelled_reduction() {
        let (t, steps, exhausted) = reduce_fuelled(&term("(\\x.x) A"), Strategy::Leftmost, 10);
        assert_eq!(t, term("A"));
        assert_eq!(steps.len(), 1);
        assert!(!exhausted);
        assert!(steps.iter().all(validate_step));

        let omega = term("(\\x.x x) (\\x.x x)");
        let (t, steps, exhausted) = reduce_fuelled(&omega, Strategy::Leftmost, 5);
        assert!(alpha_eq(&t, &omega));
        assert_eq!(steps.len(), 5);
        assert!(exhausted);

        let (t, steps, exhausted) = reduce_fuelled(&term("A"), Strategy::Leftmost, 0);
        assert_eq!(t, term("A"));
        assert!(steps.is_empty());
        assert!(!exhausted);
    }
}
