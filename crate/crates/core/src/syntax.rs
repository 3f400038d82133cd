//! Terms and patterns of the calculus.
//!
//! Terms are variables, constants, abstractions over a pattern, or
//! applications. Patterns are variables or data patterns, where a data
//! pattern is a constant applied to further patterns (the left spine of a
//! data pattern always ends in a constant). Constants are written with an
//! uppercase initial, variables with a lowercase one.

use std::collections::BTreeSet;
use std::fmt;

/// Variable and constant names.
pub type Ident = String;

/// A term of the calculus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Ident),
    Const(Ident),
    /// Abstraction over a pattern. Binder variables are bound in the body.
    Abs(Pattern, Box<Term>),
    App(Box<Term>, Box<Term>),
}

/// A pattern: a variable or a data pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pattern {
    Var(Ident),
    Data(DataPattern),
}

/// A data pattern: a constant, or a data pattern applied to a pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DataPattern {
    Const(Ident),
    App(Box<DataPattern>, Box<Pattern>),
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

pub fn cst(name: &str) -> Term {
    Term::Const(name.to_string())
}

pub fn abs(binder: Pattern, body: Term) -> Term {
    Term::Abs(binder, Box::new(body))
}

pub fn app(fun: Term, arg: Term) -> Term {
    Term::App(Box::new(fun), Box::new(arg))
}

/// Left-associated application spine `f a1 a2 ...`.
pub fn apps(fun: Term, args: impl IntoIterator<Item = Term>) -> Term {
    args.into_iter().fold(fun, app)
}

pub fn pvar(name: &str) -> Pattern {
    Pattern::Var(name.to_string())
}

pub fn pcst(name: &str) -> Pattern {
    Pattern::Data(DataPattern::Const(name.to_string()))
}

pub fn dcst(name: &str) -> DataPattern {
    DataPattern::Const(name.to_string())
}

pub fn dapp(head: DataPattern, arg: Pattern) -> DataPattern {
    DataPattern::App(Box::new(head), Box::new(arg))
}

/// Data pattern spine `c p1 p2 ...`.
pub fn dapps(head: DataPattern, args: impl IntoIterator<Item = Pattern>) -> DataPattern {
    args.into_iter().fold(head, dapp)
}

impl Term {
    /// Number of atoms plus abstractions; applications do not count.
    /// This is the size metric used by the enumeration universe.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Abs(_, body) => 1 + body.size(),
            Term::App(fun, arg) => fun.size() + arg.size(),
        }
    }

    /// Free variables. Binder variables of an abstraction are bound in its body.
    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Ident>, out: &mut BTreeSet<Ident>) {
        match self {
            Term::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::Abs(p, body) => {
                let vars = p.vars();
                let n = vars.len();
                bound.extend(vars);
                body.collect_free(bound, out);
                bound.truncate(bound.len() - n);
            }
            Term::App(fun, arg) => {
                fun.collect_free(bound, out);
                arg.collect_free(bound, out);
            }
        }
    }

    /// True iff the term is `c M1 ... Mn` for some constant `c` and `n >= 0`.
    pub fn is_data_term(&self) -> bool {
        match self {
            Term::Const(_) => true,
            Term::App(fun, _) => fun.is_data_term(),
            _ => false,
        }
    }

    /// All identifiers occurring anywhere in the term, free, bound or binding.
    pub fn all_idents(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents(&self, out: &mut BTreeSet<Ident>) {
        match self {
            Term::Var(x) | Term::Const(x) => {
                out.insert(x.clone());
            }
            Term::Abs(p, body) => {
                out.extend(p.vars());
                body.collect_idents(out);
            }
            Term::App(fun, arg) => {
                fun.collect_idents(out);
                arg.collect_idents(out);
            }
        }
    }
}

impl Pattern {
    /// Number of atoms in the pattern.
    pub fn size(&self) -> usize {
        match self {
            Pattern::Var(_) => 1,
            Pattern::Data(d) => d.size(),
        }
    }

    /// Pattern variables in left-to-right traversal order, with repetitions.
    pub fn vars(&self) -> Vec<Ident> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<Ident>) {
        match self {
            Pattern::Var(x) => out.push(x.clone()),
            Pattern::Data(d) => d.collect_vars(out),
        }
    }

    /// The set of pattern variables (the free variables of the pattern).
    pub fn var_set(&self) -> BTreeSet<Ident> {
        self.vars().into_iter().collect()
    }

    /// True iff no variable occurs twice.
    pub fn is_linear(&self) -> bool {
        let vars = self.vars();
        let set: BTreeSet<_> = vars.iter().collect();
        set.len() == vars.len()
    }

    /// Rename pattern variables through a map; unmapped variables are kept.
    pub fn rename(&self, map: &std::collections::BTreeMap<Ident, Ident>) -> Pattern {
        match self {
            Pattern::Var(x) => Pattern::Var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
            Pattern::Data(d) => Pattern::Data(d.rename(map)),
        }
    }

    /// Read the pattern back as a term (variables as variables, constants as
    /// constants, pattern application as term application).
    pub fn as_term(&self) -> Term {
        match self {
            Pattern::Var(x) => Term::Var(x.clone()),
            Pattern::Data(d) => d.as_term(),
        }
    }
}

impl DataPattern {
    pub fn size(&self) -> usize {
        match self {
            DataPattern::Const(_) => 1,
            DataPattern::App(head, arg) => head.size() + arg.size(),
        }
    }

    fn collect_vars(&self, out: &mut Vec<Ident>) {
        match self {
            DataPattern::Const(_) => {}
            DataPattern::App(head, arg) => {
                head.collect_vars(out);
                arg.collect_vars(out);
            }
        }
    }

    pub fn rename(&self, map: &std::collections::BTreeMap<Ident, Ident>) -> DataPattern {
        match self {
            DataPattern::Const(c) => DataPattern::Const(c.clone()),
            DataPattern::App(head, arg) => {
                DataPattern::App(Box::new(head.rename(map)), Box::new(arg.rename(map)))
            }
        }
    }

    pub fn as_term(&self) -> Term {
        match self {
            DataPattern::Const(c) => Term::Const(c.clone()),
            DataPattern::App(head, arg) => app(head.as_term(), arg.as_term()),
        }
    }
}

/// Pick a name based on `base` that does not occur in `avoid`: the stem of
/// `base` (trailing digits stripped) with the smallest numeric suffix that is
/// still free. Deterministic, so renamed traces are reproducible.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Ident>) -> Ident {
    let stem: &str = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    for n in 1.. {
        let candidate = format!("{stem}{n}");
        if !avoid.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

/// Structural renaming of all binders to `#0`, `#1`, ... in traversal order.
/// Two terms are alpha-equivalent iff their canonical forms are equal. The
/// `#` prefix cannot be produced by the parser or by fresh renaming, so
/// canonical names never collide with user names.
pub fn canonical(term: &Term) -> Term {
    fn go(t: &Term, next: &mut usize, env: &mut Vec<(Ident, Ident)>) -> Term {
        match t {
            Term::Var(x) => {
                // Innermost binding wins.
                for (from, to) in env.iter().rev() {
                    if from == x {
                        return Term::Var(to.clone());
                    }
                }
                Term::Var(x.clone())
            }
            Term::Const(c) => Term::Const(c.clone()),
            Term::Abs(p, body) => {
                let vars = p.vars();
                let mut map = std::collections::BTreeMap::new();
                let depth = env.len();
                for v in &vars {
                    let fresh = map.entry(v.clone()).or_insert_with(|| {
                        let name = format!("#{next}");
                        *next += 1;
                        name
                    });
                    env.push((v.clone(), fresh.clone()));
                }
                let body = go(body, next, env);
                env.truncate(depth);
                Term::Abs(p.rename(&map), Box::new(body))
            }
            Term::App(fun, arg) => Term::App(
                Box::new(go(fun, next, env)),
                Box::new(go(arg, next, env)),
            ),
        }
    }
    go(term, &mut 0, &mut Vec::new())
}

/// Alpha-equivalence: equality up to consistent renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    a == b || canonical(a) == canonical(b)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Const(x) => write!(f, "{x}"),
            Term::Abs(p, body) => write!(f, "\\{}.{}", BinderDisplay(p), body),
            Term::App(fun, arg) => {
                match fun.as_ref() {
                    Term::Abs(..) => write!(f, "({fun})")?,
                    _ => write!(f, "{fun}")?,
                }
                match arg.as_ref() {
                    Term::App(..) | Term::Abs(..) => write!(f, " ({arg})"),
                    _ => write!(f, " {arg}"),
                }
            }
        }
    }
}

/// A binder position needs parentheses around compound data patterns so the
/// printed term parses back to itself.
struct BinderDisplay<'a>(&'a Pattern);

impl fmt::Display for BinderDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Pattern::Data(DataPattern::App(..)) => write!(f, "({})", self.0),
            _ => write!(f, "{}", self.0),
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Var(x) => write!(f, "{x}"),
            Pattern::Data(d) => write!(f, "{d}"),
        }
    }
}

impl fmt::Display for DataPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataPattern::Const(c) => write!(f, "{c}"),
            DataPattern::App(head, arg) => {
                write!(f, "{head} ")?;
                match arg.as_ref() {
                    Pattern::Data(DataPattern::App(..)) => write!(f, "({arg})"),
                    _ => write!(f, "{arg}"),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_basics() {
        assert_eq!(var("x").free_vars(), BTreeSet::from(["x".to_string()]));
        assert!(abs(pvar("x"), var("x")).free_vars().is_empty());
        // \(A x).(x y) binds x, leaves y free
        let t = abs(
            Pattern::Data(dapp(dcst("A"), pvar("x"))),
            app(var("x"), var("y")),
        );
        assert_eq!(t.free_vars(), BTreeSet::from(["y".to_string()]));
    }

    #[test]
    fn alpha_eq_basics() {
        assert!(alpha_eq(&abs(pvar("x"), var("x")), &abs(pvar("y"), var("y"))));
        let a = abs(Pattern::Data(dapp(dcst("A"), pvar("x"))), var("x"));
        let b = abs(Pattern::Data(dapp(dcst("A"), pvar("y"))), var("y"));
        assert!(alpha_eq(&a, &b));
        // free y vs bound y
        assert!(!alpha_eq(&abs(pvar("x"), var("y")), &abs(pvar("y"), var("y"))));
    }

    #[test]
    fn alpha_eq_shadowing() {
        // \x.\x.x == \y.\z.z but != \y.\z.y
        let a = abs(pvar("x"), abs(pvar("x"), var("x")));
        let b = abs(pvar("y"), abs(pvar("z"), var("z")));
        let c = abs(pvar("y"), abs(pvar("z"), var("y")));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &c));
    }

    #[test]
    fn data_terms_and_linearity() {
        assert!(apps(cst("A"), [cst("B"), cst("C")]).is_data_term());
        assert!(!app(abs(pvar("x"), var("x")), cst("A")).is_data_term());
        assert!(cst("A").is_data_term());

        let lin = Pattern::Data(dapp(dapp(dcst("A"), pvar("x")), pvar("y")));
        assert!(lin.is_linear());
        let nonlin = Pattern::Data(dapp(dapp(dcst("A"), pvar("x")), pvar("x")));
        assert!(!nonlin.is_linear());
    }

    #[test]
    fn size_metric() {
        assert_eq!(var("x").size(), 1);
        assert_eq!(abs(pvar("x"), var("x")).size(), 2);
        assert_eq!(app(var("x"), var("x")).size(), 2);
        // omega = (\x.x x)(\x.x x)
        let half = abs(pvar("x"), app(var("x"), var("x")));
        assert_eq!(app(half.clone(), half).size(), 6);
    }

    #[test]
    fn fresh_names_are_deterministic() {
        let avoid: BTreeSet<Ident> = ["y".to_string(), "y1".to_string()].into();
        assert_eq!(fresh_name("y", &avoid), "y2");
        assert_eq!(fresh_name("y1", &avoid), "y2");
    }
}
