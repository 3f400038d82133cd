//! Matching of patterns against terms.
//!
//! Matching is a partial function from a pattern and a term (which must not
//! share variables) to a substitution. A variable pattern matches anything,
//! a constant matches itself, and a compound data pattern `d p` matches an
//! application `D N` when both components match and the two substitutions
//! have disjoint domains. Non-linear patterns therefore never match: the
//! disjoint union of their component matches is undefined.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::subst::{rename_pattern_apart, Subst};
use crate::syntax::{DataPattern, Ident, Pattern, Term};

/// The outcome of a matching problem. `NoMatch` covers both structural rule
/// failure and a non-linear domain clash; neither is an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchOutcome {
    Matched(Subst),
    NoMatch,
}

impl MatchOutcome {
    pub fn is_match(&self) -> bool {
        matches!(self, MatchOutcome::Matched(_))
    }

    pub fn into_subst(self) -> Option<Subst> {
        match self {
            MatchOutcome::Matched(s) => Some(s),
            MatchOutcome::NoMatch => None,
        }
    }
}

fn check_disjoint(p: &Pattern, term: &Term) -> Result<()> {
    let pv = p.var_set();
    let tv = term.free_vars();
    let shared: Vec<Ident> = pv.intersection(&tv).cloned().collect();
    if shared.is_empty() {
        Ok(())
    } else {
        Err(Error::SharedVariables { shared })
    }
}

/// Match `p` against `term`. The caller must alpha-rename so that the
/// pattern and the term share no variables; a violation is an error, not a
/// `NoMatch`.
pub fn match_pattern(p: &Pattern, term: &Term) -> Result<MatchOutcome> {
    check_disjoint(p, term)?;
    Ok(match_unchecked(p, term))
}

/// True iff `match_pattern` yields a substitution. Same precondition.
pub fn matches(p: &Pattern, term: &Term) -> Result<bool> {
    Ok(match_pattern(p, term)?.is_match())
}

/// Matchability check that renames the pattern apart from the term first.
/// Used internally for rule side conditions, where only the verdict matters
/// and matchability is invariant under renaming of pattern variables.
pub fn matches_renamed(p: &Pattern, term: &Term) -> bool {
    match_renamed(p, term).is_match()
}

/// Match after renaming the pattern apart from the term. The witness is
/// reported over the original pattern variables.
pub fn match_renamed(p: &Pattern, term: &Term) -> MatchOutcome {
    let fv = term.free_vars();
    if p.var_set().is_disjoint(&fv) {
        return match_unchecked(p, term);
    }
    let renamed = rename_pattern_apart(p, &fv);
    match match_unchecked(&renamed, term) {
        MatchOutcome::NoMatch => MatchOutcome::NoMatch,
        MatchOutcome::Matched(s) => {
            // Transport the witness back through the renaming.
            let mut out = Subst::empty();
            for (orig, new) in p.vars().into_iter().zip(renamed.vars()) {
                if let Some(t) = s.get(&new) {
                    out.bind(orig, t.clone());
                }
            }
            MatchOutcome::Matched(out)
        }
    }
}

fn match_unchecked(p: &Pattern, term: &Term) -> MatchOutcome {
    match p {
        Pattern::Var(x) => MatchOutcome::Matched(Subst::singleton(x.clone(), term.clone())),
        Pattern::Data(d) => match_data(d, term),
    }
}

fn match_data(d: &DataPattern, term: &Term) -> MatchOutcome {
    match (d, term) {
        (DataPattern::Const(c), Term::Const(name)) if c == name => {
            MatchOutcome::Matched(Subst::empty())
        }
        (DataPattern::App(dh, dp), Term::App(fun, arg)) => {
            let MatchOutcome::Matched(th1) = match_data(dh, fun) else {
                return MatchOutcome::NoMatch;
            };
            let MatchOutcome::Matched(th2) = match_unchecked(dp, arg) else {
                return MatchOutcome::NoMatch;
            };
            match th1.disjoint_union(&th2) {
                Some(s) => MatchOutcome::Matched(s),
                None => MatchOutcome::NoMatch,
            }
        }
        _ => MatchOutcome::NoMatch,
    }
}

/// Transport a match through a substitution: given `p` matching `m` with
/// witness `theta`, the term `nu m` is matched by `p` with witness
/// `(nu . theta)` restricted to the pattern variables. Requires the pattern
/// variables to be disjoint from `var(nu)` as well as from `m`.
pub fn match_under_subst(p: &Pattern, m: &Term, theta: &Subst, nu: &Subst) -> Result<Subst> {
    let pv = p.var_set();
    let clash: Vec<Ident> = pv.intersection(&nu.var_set()).cloned().collect();
    if !clash.is_empty() {
        return Err(Error::Precondition(format!(
            "pattern variables {clash:?} occur in the substitution"
        )));
    }
    match match_pattern(p, m)? {
        MatchOutcome::Matched(found) if found == *theta => {}
        _ => {
            return Err(Error::Precondition(format!(
                "{theta} is not the match of {p} against {m}"
            )));
        }
    }
    let gamma = nu.compose(theta).restrict(&pv);
    debug_assert_eq!(
        match_pattern(p, &nu.apply(m))?,
        MatchOutcome::Matched(gamma.clone()),
        "match is not compatible with substitution for {p} and {m}"
    );
    Ok(gamma)
}

/// Variables a term or pattern pair must avoid so a fresh binder stays fresh.
pub fn avoid_set(term: &Term) -> BTreeSet<Ident> {
    term.all_idents()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{abs, app, apps, cst, dapp, dapps, dcst, pvar, var};

    fn pat(src: &str) -> Pattern {
        crate::parser::parse_pattern(src).unwrap()
    }

    fn term(src: &str) -> Term {
        crate::parser::parse_term(src).unwrap()
    }

    #[test]
    fn variable_matches_anything() {
        let out = match_pattern(&pvar("x"), &term("(\\y.y) A")).unwrap();
        assert_eq!(
            out,
            MatchOutcome::Matched(Subst::singleton("x", term("(\\y.y) A")))
        );
    }

    #[test]
    fn constants_match_themselves() {
        assert_eq!(
            match_pattern(&pat("C"), &cst("C")).unwrap(),
            MatchOutcome::Matched(Subst::empty())
        );
        assert_eq!(match_pattern(&pat("A"), &cst("B")).unwrap(), MatchOutcome::NoMatch);
    }

    #[test]
    fn compound_patterns_decompose() {
        let out = match_pattern(&pat("(A x) y"), &term("(A B) C")).unwrap();
        let expected = Subst::from_bindings([
            ("x".to_string(), cst("B")),
            ("y".to_string(), cst("C")),
        ]);
        assert_eq!(out, MatchOutcome::Matched(expected));
    }

    #[test]
    fn non_linear_patterns_never_match() {
        // (A x) x against (A B) C: the component matches clash on x.
        let p = Pattern::Data(dapps(dcst("A"), [pvar("x"), pvar("x")]));
        assert_eq!(match_pattern(&p, &term("(A B) C")).unwrap(), MatchOutcome::NoMatch);
        // ... even when both components would bind x to the same term
        assert_eq!(match_pattern(&p, &term("(A B) B")).unwrap(), MatchOutcome::NoMatch);
    }

    #[test]
    fn shared_variables_are_an_error_not_a_no_match() {
        let err = match_pattern(&pvar("x"), &var("x")).unwrap_err();
        assert!(matches!(err, Error::SharedVariables { .. }));
        assert!(matches_renamed(&pvar("x"), &var("x")));
    }

    #[test]
    fn data_patterns_only_match_data_terms() {
        let p = pat("A x");
        assert_eq!(
            match_pattern(&p, &app(abs(pvar("z"), var("z")), cst("B"))).unwrap(),
            MatchOutcome::NoMatch
        );
        assert!(match_pattern(&p, &apps(cst("A"), [cst("B")])).unwrap().is_match());
    }

    #[test]
    fn matched_domain_is_the_pattern_variables() {
        let p = pat("(A x) (B y)");
        let m = term("(A (C C)) (B C)");
        let MatchOutcome::Matched(s) = match_pattern(&p, &m).unwrap() else {
            panic!("expected a match")
        };
        assert_eq!(s.domain(), p.var_set());
    }

    #[test]
    fn match_under_subst_composes() {
        // p = x, m = y, theta = {x:=y}, nu = {y:=A} -> {x:=A}
        let theta = Subst::singleton("x", var("y"));
        let nu = Subst::singleton("y", cst("A"));
        let gamma = match_under_subst(&pvar("x"), &var("y"), &theta, &nu).unwrap();
        assert_eq!(gamma, Subst::singleton("x", cst("A")));

        // nu = {} leaves the witness unchanged
        let id = match_under_subst(&pvar("x"), &var("y"), &theta, &Subst::empty()).unwrap();
        assert_eq!(id, theta);

        // p = (A x), m = (A y), nu = {y:=B C} -> {x:=B C}
        let p = Pattern::Data(dapp(dcst("A"), pvar("x")));
        let m = app(cst("A"), var("y"));
        let theta = Subst::singleton("x", var("y"));
        let nu = Subst::singleton("y", app(cst("B"), cst("C")));
        let gamma = match_under_subst(&p, &m, &theta, &nu).unwrap();
        assert_eq!(gamma, Subst::singleton("x", app(cst("B"), cst("C"))));
    }
}
