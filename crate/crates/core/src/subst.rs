//! Substitutions: finite maps from variables to terms, with the algebra used
//! by matching and beta reduction (composition, restriction, disjoint union).
//!
//! A binding `x := x` is the identity and is never stored, so the domain of a
//! substitution is exactly the set of variables it moves.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{fresh_name, Ident, Pattern, Term};

/// A finite map from variables to terms. Lookup outside the domain is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Subst {
    bindings: BTreeMap<Ident, Term>,
}

impl Subst {
    pub fn empty() -> Self {
        Subst::default()
    }

    pub fn singleton(x: impl Into<Ident>, t: Term) -> Self {
        let mut s = Subst::empty();
        s.bind(x.into(), t);
        s
    }

    pub fn from_bindings(bindings: impl IntoIterator<Item = (Ident, Term)>) -> Self {
        let mut s = Subst::empty();
        for (x, t) in bindings {
            s.bind(x, t);
        }
        s
    }

    /// Add a binding, dropping it when it is the identity.
    pub fn bind(&mut self, x: Ident, t: Term) {
        if matches!(&t, Term::Var(y) if *y == x) {
            self.bindings.remove(&x);
        } else {
            self.bindings.insert(x, t);
        }
    }

    pub fn get(&self, x: &str) -> Option<&Term> {
        self.bindings.get(x)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<Ident> {
        self.bindings.keys().cloned().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, &Term)> {
        self.bindings.iter()
    }

    /// `var(s)`: the domain together with the free variables of all images.
    pub fn var_set(&self) -> BTreeSet<Ident> {
        let mut out = self.domain();
        for t in self.bindings.values() {
            out.extend(t.free_vars());
        }
        out
    }

    /// Capture-avoiding application to a term. Binder variables that would
    /// capture free variables of an image are renamed with [`fresh_name`].
    pub fn apply(&self, term: &Term) -> Term {
        if self.is_empty() {
            return term.clone();
        }
        match term {
            Term::Var(x) => self.get(x).cloned().unwrap_or_else(|| term.clone()),
            Term::Const(_) => term.clone(),
            Term::App(fun, arg) => Term::App(Box::new(self.apply(fun)), Box::new(self.apply(arg))),
            Term::Abs(p, body) => {
                let bound = p.var_set();
                let body_fv = body.free_vars();
                let relevant = Subst {
                    bindings: self
                        .bindings
                        .iter()
                        .filter(|(x, _)| !bound.contains(*x) && body_fv.contains(*x))
                        .map(|(x, t)| (x.clone(), t.clone()))
                        .collect(),
                };
                if relevant.is_empty() {
                    return term.clone();
                }
                let danger = relevant.var_set();
                let clashing: Vec<Ident> =
                    p.vars().into_iter().filter(|v| danger.contains(v)).collect();
                let (p, body) = if clashing.is_empty() {
                    (p.clone(), body.as_ref().clone())
                } else {
                    let mut avoid: BTreeSet<Ident> = danger;
                    avoid.extend(body_fv.iter().cloned());
                    avoid.extend(bound.iter().cloned());
                    let mut renaming = BTreeMap::new();
                    for v in clashing {
                        let fresh = fresh_name(&v, &avoid);
                        avoid.insert(fresh.clone());
                        renaming.insert(v, fresh);
                    }
                    let rename = Subst::from_bindings(
                        renaming.iter().map(|(x, y)| (x.clone(), Term::Var(y.clone()))),
                    );
                    (p.rename(&renaming), rename.apply(body))
                };
                Term::Abs(p, Box::new(relevant.apply(&body)))
            }
        }
    }

    /// Composition `self . other`: apply `other` first, then `self`.
    /// `(self . other)(x) = self(other(x))` for `x` in `dom(other)`, and
    /// `self(x)` elsewhere.
    pub fn compose(&self, other: &Subst) -> Subst {
        let mut out = Subst::empty();
        for (x, t) in other.iter() {
            out.bind(x.clone(), self.apply(t));
        }
        for (x, t) in self.iter() {
            if other.get(x).is_none() {
                out.bind(x.clone(), t.clone());
            }
        }
        out
    }

    /// Restriction to a variable set.
    pub fn restrict(&self, keep: &BTreeSet<Ident>) -> Subst {
        Subst {
            bindings: self
                .bindings
                .iter()
                .filter(|(x, _)| keep.contains(*x))
                .map(|(x, t)| (x.clone(), t.clone()))
                .collect(),
        }
    }

    /// Equal domains with pointwise alpha-equal images.
    pub fn alpha_eq(&self, other: &Subst) -> bool {
        self.bindings.len() == other.bindings.len()
            && self.bindings.iter().all(|(x, t)| {
                other.get(x).map(|u| crate::syntax::alpha_eq(t, u)).unwrap_or(false)
            })
    }

    /// Union of two substitutions with disjoint domains; `None` when the
    /// domains overlap (even if the overlapping bindings agree).
    pub fn disjoint_union(&self, other: &Subst) -> Option<Subst> {
        let mut out = self.clone();
        for (x, t) in other.iter() {
            if out.bindings.contains_key(x) {
                return None;
            }
            out.bindings.insert(x.clone(), t.clone());
        }
        Some(out)
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}:={t}")?;
        }
        write!(f, "}}")
    }
}

/// Rename the binder variables of `p` (and the matching occurrences in
/// `body`) away from `avoid`. Only clashing variables are renamed; the
/// result binds exactly the same positions.
pub fn rename_binder_apart(
    p: &Pattern,
    body: &Term,
    avoid: &BTreeSet<Ident>,
) -> (Pattern, Term, BTreeMap<Ident, Ident>) {
    let clashing: Vec<Ident> = {
        let mut seen = BTreeSet::new();
        p.vars()
            .into_iter()
            .filter(|v| avoid.contains(v) && seen.insert(v.clone()))
            .collect()
    };
    if clashing.is_empty() {
        return (p.clone(), body.clone(), BTreeMap::new());
    }
    let mut full_avoid = avoid.clone();
    full_avoid.extend(body.all_idents());
    full_avoid.extend(p.var_set());
    let mut renaming = BTreeMap::new();
    for v in clashing {
        let fresh = fresh_name(&v, &full_avoid);
        full_avoid.insert(fresh.clone());
        renaming.insert(v, fresh);
    }
    let rename = Subst::from_bindings(
        renaming.iter().map(|(x, y)| (x.clone(), Term::Var(y.clone()))),
    );
    (p.rename(&renaming), rename.apply(body), renaming)
}

/// Rename the variables of a standalone pattern away from `avoid`.
/// Matchability is invariant under injective renaming of pattern variables.
pub fn rename_pattern_apart(p: &Pattern, avoid: &BTreeSet<Ident>) -> Pattern {
    let clashing: Vec<Ident> = {
        let mut seen = BTreeSet::new();
        p.vars()
            .into_iter()
            .filter(|v| avoid.contains(v) && seen.insert(v.clone()))
            .collect()
    };
    if clashing.is_empty() {
        return p.clone();
    }
    let mut full_avoid = avoid.clone();
    full_avoid.extend(p.var_set());
    let mut renaming = BTreeMap::new();
    for v in clashing {
        let fresh = fresh_name(&v, &full_avoid);
        full_avoid.insert(fresh.clone());
        renaming.insert(v, fresh);
    }
    p.rename(&renaming)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{abs, alpha_eq, app, cst, pvar, var};

    #[test]
    fn identity_bindings_are_dropped() {
        let s = Subst::singleton("x", var("x"));
        assert!(s.is_empty());
    }

    #[test]
    fn apply_basics() {
        let s = Subst::singleton("x", cst("A"));
        assert_eq!(s.apply(&app(var("x"), var("x"))), app(cst("A"), cst("A")));
        let id = Subst::empty();
        let t = abs(pvar("x"), app(var("x"), var("y")));
        assert!(alpha_eq(&id.apply(&t), &t));
    }

    #[test]
    fn apply_avoids_capture() {
        // {x:=y} on \y.(x y) must not capture: result is alpha-equal to \y'.(y y')
        let s = Subst::singleton("x", var("y"));
        let t = abs(pvar("y"), app(var("x"), var("y")));
        let r = s.apply(&t);
        assert_eq!(r.free_vars(), BTreeSet::from(["y".to_string()]));
        let expected = abs(pvar("z"), app(var("y"), var("z")));
        assert!(alpha_eq(&r, &expected));
    }

    #[test]
    fn compose_pointwise() {
        let nu = Subst::singleton("x", cst("A"));
        let theta = Subst::singleton("y", var("x"));
        let c = nu.compose(&theta);
        assert_eq!(c.get("y"), Some(&cst("A")));
        assert_eq!(c.get("x"), Some(&cst("A")));
        assert!(Subst::empty().compose(&theta) == theta);
        assert!(nu.compose(&Subst::empty()) == nu);
    }

    #[test]
    fn restrict_and_union() {
        let s = Subst::from_bindings([("x".to_string(), cst("A")), ("y".to_string(), cst("B"))]);
        let r = s.restrict(&BTreeSet::from(["x".to_string()]));
        assert_eq!(r, Subst::singleton("x", cst("A")));
        assert_eq!(s.restrict(&BTreeSet::new()), Subst::empty());
        assert_eq!(s.restrict(&s.domain()), s);

        let a = Subst::singleton("x", cst("A"));
        let b = Subst::singleton("y", cst("B"));
        assert_eq!(a.disjoint_union(&b), Some(s));
        // overlapping domains are undefined even when bindings agree
        assert_eq!(a.disjoint_union(&a), None);
        assert_eq!(Subst::empty().disjoint_union(&b), Some(b));
    }
}
