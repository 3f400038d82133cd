//! Splitting a development into head steps followed by an internal
//! development, constructively.
//!
//! Every development factors as a chain of head steps and an internal
//! remainder; the same holds per pattern with pattern-relative steps and a
//! pattern-indexed internal remainder. The construction here is not a
//! search: it transports the development through an environment of
//! already-split substitution entries, with dedicated cases for abstraction
//! and application. The brute-force cross-check lives in [`crate::oracle`].

use std::collections::{BTreeMap, BTreeSet};

use crate::dev::{rename_dev, subst_apply_dev, DevProof, IntDevProof, PatIntDevProof, SubstDevProof};
use crate::error::{Error, Result};
use crate::matching::{match_renamed, MatchOutcome};
use crate::reduction::{Dir, Position, StepRecord};
use crate::subst::Subst;
use crate::syntax::{Ident, Pattern, Term};

/// A development split into a head-step chain and an internal remainder.
#[derive(Debug, Clone)]
pub struct HSplit {
    pub head_steps: Vec<StepRecord>,
    pub mid: Term,
    pub internal: IntDevProof,
}

/// The pattern-relative form: pattern steps and an indexed remainder.
#[derive(Debug, Clone)]
pub struct PatHSplit {
    pub steps: Vec<StepRecord>,
    pub mid: Term,
    pub internal: PatIntDevProof,
}

/// Split a development `M > N` into `M ->h* mid >int N`.
pub fn h_split(dev: &DevProof) -> Result<HSplit> {
    Ok(generalized(dev, &Env::default())?.split)
}

/// Split a development `M > N` into `M ->[p]* mid >int[p] N`. The pattern
/// must not share variables with anything occurring in the proof.
pub fn h_split_pattern(dev: &DevProof, p: &Pattern) -> Result<PatHSplit> {
    let used = dev.all_idents();
    let shared: Vec<Ident> = p.var_set().intersection(&used).cloned().collect();
    if !shared.is_empty() {
        return Err(Error::SharedVariables { shared });
    }
    generalized(dev, &Env::default())?.pat_split(p)
}

/// A split witness for one development, with enough provenance to answer
/// the pattern-relative question for any pattern on demand.
pub struct HDev {
    /// The development it witnesses.
    dev: DevProof,
    /// Head chain plus internal remainder.
    split: HSplit,
    kind: HDevKind,
}

enum HDevKind {
    /// A variable or constant: nothing to do.
    Atom(Term),
    /// Built by the abstraction compatibility case.
    Abs { binder: Pattern, body: DevProof },
    /// Built by the application compatibility case.
    App { fun: Box<HDev>, arg: Box<HDev> },
    /// Beta at the root: the recorded head step followed by the rest.
    HeadPrefix { steps: Vec<StepRecord>, rest: Box<HDev> },
}

/// Environment of split substitution entries (the pointwise form of the
/// split property), keyed by variable.
#[derive(Default)]
struct Env {
    entries: BTreeMap<Ident, HDev>,
}

impl Env {
    fn source(&self) -> Subst {
        Subst::from_bindings(self.entries.iter().map(|(x, h)| (x.clone(), h.dev.source())))
    }

    fn target(&self) -> Subst {
        Subst::from_bindings(self.entries.iter().map(|(x, h)| (x.clone(), h.dev.target())))
    }

    fn subst_dev(&self) -> SubstDevProof {
        SubstDevProof {
            per_var: self
                .entries
                .iter()
                .map(|(x, h)| (x.clone(), h.dev.clone()))
                .collect(),
        }
    }

    fn footprint(&self) -> BTreeSet<Ident> {
        let mut out = self.source().var_set();
        out.extend(self.target().var_set());
        out
    }
}

fn atom(t: Term) -> HDev {
    HDev {
        dev: DevProof::DRefl(t.clone()),
        split: HSplit {
            head_steps: Vec::new(),
            mid: t.clone(),
            internal: IntDevProof::IRefl(t.clone()),
        },
        kind: HDevKind::Atom(t),
    }
}

/// Compatibility with abstraction: the body development is carried whole,
/// because abstractions have no head step and any development under the
/// binder is internal.
fn abs_compat(binder: Pattern, body: DevProof) -> HDev {
    let source = Term::Abs(binder.clone(), Box::new(body.source()));
    HDev {
        dev: DevProof::DAbs { binder: binder.clone(), body: Box::new(body.clone()) },
        split: HSplit {
            head_steps: Vec::new(),
            mid: source,
            internal: IntDevProof::IAbs { binder: binder.clone(), body: body.clone() },
        },
        kind: HDevKind::Abs { binder, body },
    }
}

/// Compatibility with application: lift the function-side chain, then decide
/// by the shape of its endpoint whether the argument must keep stepping
/// relative to a binder.
fn app_compat(fun: HDev, arg: HDev) -> Result<HDev> {
    let m2 = arg.dev.source();
    let mut head_steps = lift_fun_side(&fun.split.head_steps, &m2);
    let q1 = fun.split.mid.clone();
    let split = match &q1 {
        Term::Abs(..) => {
            let (binder, body_dev, q1r) = decompose_abs_internal(&fun.split.internal, &arg)?;
            let ps = arg.pat_split(&binder)?;
            head_steps.extend(lift_arg_side(&ps.steps, &q1r));
            let mid = Term::App(Box::new(q1r), Box::new(ps.mid.clone()));
            let internal =
                IntDevProof::IApp2 { binder, body: body_dev, arg: Box::new(ps.internal) };
            HSplit { head_steps, mid, internal }
        }
        _ => {
            let mid = Term::App(Box::new(q1), Box::new(m2.clone()));
            let internal = IntDevProof::IApp1 {
                fun: Box::new(fun.split.internal.clone()),
                arg: arg.dev.clone(),
            };
            HSplit { head_steps, mid, internal }
        }
    };
    Ok(HDev {
        dev: DevProof::DApp { fun: Box::new(fun.dev.clone()), arg: Box::new(arg.dev.clone()) },
        split,
        kind: HDevKind::App { fun: Box::new(fun), arg: Box::new(arg) },
    })
}

/// Expose binder and body development of an abstraction-shaped remainder,
/// renaming the binder apart from everything the argument side mentions.
fn decompose_abs_internal(internal: &IntDevProof, arg: &HDev) -> Result<(Pattern, DevProof, Term)> {
    let (binder, body_dev) = match internal {
        IntDevProof::IRefl(Term::Abs(p, b)) => (p.clone(), DevProof::DRefl(b.as_ref().clone())),
        IntDevProof::IAbs { binder, body } => (binder.clone(), body.clone()),
        other => {
            return Err(Error::Precondition(format!(
                "abstraction remainder cannot be justified by {}",
                other.rule_name()
            )))
        }
    };
    let mut avoid = arg.dev.all_idents();
    avoid.extend(arg.split_idents());
    let (binder, body_dev) = if binder.var_set().iter().any(|v| avoid.contains(v)) {
        let wrapped = DevProof::DAbs { binder, body: Box::new(body_dev) };
        match rename_dev(&wrapped, &BTreeMap::new(), &avoid) {
            DevProof::DAbs { binder, body } => (binder, *body),
            _ => unreachable!("renaming preserves the rule"),
        }
    } else {
        (binder, body_dev)
    };
    let mid = Term::Abs(binder.clone(), Box::new(body_dev.source()));
    Ok((binder, body_dev, mid))
}

fn lift_fun_side(steps: &[StepRecord], arg: &Term) -> Vec<StepRecord> {
    steps
        .iter()
        .map(|r| StepRecord {
            source: Term::App(Box::new(r.source.clone()), Box::new(arg.clone())),
            position: prefix(Dir::FunSide, &r.position),
            result: Term::App(Box::new(r.result.clone()), Box::new(arg.clone())),
        })
        .collect()
}

fn lift_arg_side(steps: &[StepRecord], fun: &Term) -> Vec<StepRecord> {
    steps
        .iter()
        .map(|r| StepRecord {
            source: Term::App(Box::new(fun.clone()), Box::new(r.source.clone())),
            position: prefix(Dir::ArgSide, &r.position),
            result: Term::App(Box::new(fun.clone()), Box::new(r.result.clone())),
        })
        .collect()
}

fn prefix(d: Dir, pos: &Position) -> Position {
    let mut path = Vec::with_capacity(pos.0.len() + 1);
    path.push(d);
    path.extend(pos.0.iter().copied());
    Position(path)
}

impl HDev {
    /// Identifiers mentioned by the stored split (mid and chain terms).
    fn split_idents(&self) -> BTreeSet<Ident> {
        let mut out = self.split.mid.all_idents();
        for r in &self.split.head_steps {
            out.extend(r.source.all_idents());
            out.extend(r.result.all_idents());
        }
        out
    }

    fn shallow_clone(&self) -> HDev {
        HDev { dev: self.dev.clone(), split: self.split.clone(), kind: self.kind.deep_clone() }
    }

    /// Answer the pattern-relative split for `p`. The pattern variables must
    /// be disjoint from everything the witness mentions.
    fn pat_split(&self, p: &Pattern) -> Result<PatHSplit> {
        match p {
            Pattern::Var(x) => {
                let source = self.dev.source();
                let witness = Subst::singleton(x.clone(), source.clone());
                Ok(PatHSplit {
                    steps: Vec::new(),
                    mid: source,
                    internal: PatIntDevProof::PMatch { dev: self.dev.clone(), witness },
                })
            }
            Pattern::Data(crate::syntax::DataPattern::Const(_)) => Ok(PatHSplit {
                steps: self.split.head_steps.clone(),
                mid: self.split.mid.clone(),
                internal: PatIntDevProof::PConst(Box::new(self.split.internal.clone())),
            }),
            Pattern::Data(crate::syntax::DataPattern::App(dh, dp)) => {
                self.pat_split_compound(p, dh, dp)
            }
        }
    }

    fn pat_split_compound(
        &self,
        p: &Pattern,
        dh: &crate::syntax::DataPattern,
        dp: &Pattern,
    ) -> Result<PatHSplit> {
        match &self.kind {
            HDevKind::Atom(Term::Const(c)) => Ok(PatHSplit {
                steps: Vec::new(),
                mid: Term::Const(c.clone()),
                internal: PatIntDevProof::PAtomData(c.clone()),
            }),
            HDevKind::Atom(t) => Ok(PatHSplit {
                steps: Vec::new(),
                mid: t.clone(),
                internal: PatIntDevProof::PNoCData(Box::new(IntDevProof::IRefl(t.clone()))),
            }),
            HDevKind::Abs { binder, body } => Ok(PatHSplit {
                steps: Vec::new(),
                mid: self.dev.source(),
                internal: PatIntDevProof::PNoCData(Box::new(IntDevProof::IAbs {
                    binder: binder.clone(),
                    body: body.clone(),
                })),
            }),
            HDevKind::HeadPrefix { steps, rest } => {
                // A head step is a pattern step for any data pattern.
                let inner = rest.pat_split(p)?;
                let mut all = steps.clone();
                all.extend(inner.steps);
                Ok(PatHSplit { steps: all, mid: inner.mid, internal: inner.internal })
            }
            HDevKind::App { fun, arg } => self.pat_split_app(p, dh, dp, fun, arg),
        }
    }

    fn pat_split_app(
        &self,
        p: &Pattern,
        dh: &crate::syntax::DataPattern,
        dp: &Pattern,
        fun: &HDev,
        arg: &HDev,
    ) -> Result<PatHSplit> {
        let head_pattern = Pattern::Data(dh.clone());
        let m2 = arg.dev.source();
        let ps1 = fun.pat_split(&head_pattern)?;
        // Function-side pattern steps lift to the application: as head steps
        // while the spine is not yet a data term, as spine steps afterwards.
        // The records are the same either way.
        let mut steps = lift_fun_side(&ps1.steps, &m2);
        let q1 = ps1.mid.clone();

        if matches!(q1, Term::Abs(..)) {
            let plain = extract_plain_internal(&ps1.internal)?;
            let (binder, body_dev, q1r) = decompose_abs_internal(&plain, arg)?;
            let ps2 = arg.pat_split(&binder)?;
            steps.extend(lift_arg_side(&ps2.steps, &q1r));
            let mid = Term::App(Box::new(q1r), Box::new(ps2.mid.clone()));
            let internal = PatIntDevProof::PNoCData(Box::new(IntDevProof::IApp2 {
                binder,
                body: body_dev,
                arg: Box::new(ps2.internal),
            }));
            return Ok(PatHSplit { steps, mid, internal });
        }

        if !q1.is_data_term() {
            let inner = extract_plain_internal(&ps1.internal)?;
            let mid = Term::App(Box::new(q1), Box::new(m2.clone()));
            let internal = PatIntDevProof::PNoCData(Box::new(IntDevProof::IApp1 {
                fun: Box::new(inner),
                arg: arg.dev.clone(),
            }));
            return Ok(PatHSplit { steps, mid, internal });
        }

        // The spine endpoint is a data term.
        let fun_match = match match_renamed(&head_pattern, &q1) {
            MatchOutcome::NoMatch => {
                let mid = Term::App(Box::new(q1), Box::new(m2.clone()));
                let internal =
                    PatIntDevProof::PCDataNo1 { fun: Box::new(ps1.internal), arg: arg.dev.clone() };
                return Ok(PatHSplit { steps, mid, internal });
            }
            MatchOutcome::Matched(s) => s,
        };

        let fun_dev = ps1.internal.erase();
        if let MatchOutcome::Matched(arg_match) = match_renamed(dp, &m2) {
            // The argument already matches; nothing left to step.
            let mid = Term::App(Box::new(q1), Box::new(m2.clone()));
            let internal = match match_renamed(p, &mid) {
                MatchOutcome::Matched(witness) => PatIntDevProof::PMatch {
                    dev: DevProof::DApp {
                        fun: Box::new(fun_dev),
                        arg: Box::new(arg.dev.clone()),
                    },
                    witness,
                },
                MatchOutcome::NoMatch => PatIntDevProof::PCDataNo3 {
                    fun: fun_dev,
                    arg: arg.dev.clone(),
                    fun_match,
                    arg_match,
                },
            };
            return Ok(PatHSplit { steps, mid, internal });
        }

        // The argument must keep stepping relative to the argument pattern.
        let ps2 = arg.pat_split(dp)?;
        steps.extend(lift_arg_side(&ps2.steps, &q1));
        let q2 = ps2.mid.clone();
        let mid = Term::App(Box::new(q1), Box::new(q2.clone()));
        let internal = match match_renamed(dp, &q2) {
            MatchOutcome::NoMatch => PatIntDevProof::PCDataNo2 {
                fun: fun_dev,
                arg: Box::new(ps2.internal),
                fun_match,
            },
            MatchOutcome::Matched(arg_match) => match match_renamed(p, &mid) {
                MatchOutcome::Matched(witness) => PatIntDevProof::PMatch {
                    dev: DevProof::DApp {
                        fun: Box::new(fun_dev),
                        arg: Box::new(ps2.internal.erase()),
                    },
                    witness,
                },
                MatchOutcome::NoMatch => PatIntDevProof::PCDataNo3 {
                    fun: fun_dev,
                    arg: ps2.internal.erase(),
                    fun_match,
                    arg_match,
                },
            },
        };
        Ok(PatHSplit { steps, mid, internal })
    }
}

impl HDevKind {
    fn deep_clone(&self) -> HDevKind {
        match self {
            HDevKind::Atom(t) => HDevKind::Atom(t.clone()),
            HDevKind::Abs { binder, body } => {
                HDevKind::Abs { binder: binder.clone(), body: body.clone() }
            }
            HDevKind::App { fun, arg } => HDevKind::App {
                fun: Box::new(fun.shallow_clone()),
                arg: Box::new(arg.shallow_clone()),
            },
            HDevKind::HeadPrefix { steps, rest } => HDevKind::HeadPrefix {
                steps: steps.clone(),
                rest: Box::new(rest.shallow_clone()),
            },
        }
    }
}

/// A remainder indexed by a constant or compound pattern over a non-data
/// source carries a plain internal development inside.
fn extract_plain_internal(p: &PatIntDevProof) -> Result<IntDevProof> {
    match p {
        PatIntDevProof::PConst(inner) | PatIntDevProof::PNoCData(inner) => Ok((**inner).clone()),
        other => Err(Error::Precondition(format!(
            "expected a plain internal remainder, found {}",
            other.rule_name()
        ))),
    }
}

/// The generalized split: transport `dev` through an environment of split
/// entries. With an empty environment this is the split property itself.
fn generalized(dev: &DevProof, env: &Env) -> Result<HDev> {
    match dev {
        DevProof::DRefl(t) => refl_hdev(t, env),
        DevProof::DAbs { binder, body } => {
            let avoid = env.footprint();
            let (binder, body) = if binder.var_set().iter().any(|v| avoid.contains(v)) {
                let wrapped = DevProof::DAbs {
                    binder: binder.clone(),
                    body: Box::new(body.as_ref().clone()),
                };
                match rename_dev(&wrapped, &BTreeMap::new(), &avoid) {
                    DevProof::DAbs { binder, body } => (binder, *body),
                    _ => unreachable!("renaming preserves the rule"),
                }
            } else {
                (binder.clone(), body.as_ref().clone())
            };
            let body_dev = subst_apply_dev(&env.subst_dev(), &body)?;
            Ok(abs_compat(binder, body_dev))
        }
        DevProof::DApp { fun, arg } => {
            let f = generalized(fun, env)?;
            let a = generalized(arg, env)?;
            app_compat(f, a)
        }
        DevProof::DBeta { binder, .. } => {
            let avoid = env.footprint();
            let renamed;
            let dev = if binder.var_set().iter().any(|v| avoid.contains(v)) {
                renamed = rename_dev(dev, &BTreeMap::new(), &avoid);
                &renamed
            } else {
                dev
            };
            let DevProof::DBeta { body, subst: tau_dev, .. } = dev else {
                unreachable!("renaming preserves the rule")
            };
            // Extend the environment with the beta bindings, each split
            // under the outer environment.
            let mut entries = BTreeMap::new();
            for (x, d) in &tau_dev.per_var {
                entries.insert(x.clone(), generalized(d, env)?);
            }
            for (x, h) in &env.entries {
                entries.entry(x.clone()).or_insert_with(|| h.shallow_clone());
            }
            let extended = Env { entries };
            let inner = generalized(body, &extended)?;

            // The head step contracting the transported beta redex.
            let nu = env.source();
            let source_term = nu.apply(&dev.source());
            let step = StepRecord {
                source: source_term.clone(),
                position: Position::root(),
                result: inner.dev.source(),
            };
            debug_assert!(
                crate::syntax::alpha_eq(
                    &crate::reduction::step_at(&source_term, &Position::root())
                        .expect("transported beta must contract"),
                    &inner.dev.source()
                ),
                "transported beta step must replay"
            );

            let dev_i = subst_apply_dev(&env.subst_dev(), dev)?;
            let mut head_steps = vec![step.clone()];
            head_steps.extend(inner.split.head_steps.clone());
            Ok(HDev {
                dev: dev_i,
                split: HSplit {
                    head_steps,
                    mid: inner.split.mid.clone(),
                    internal: inner.split.internal.clone(),
                },
                kind: HDevKind::HeadPrefix { steps: vec![step], rest: Box::new(inner) },
            })
        }
    }
}

/// Split a reflexive development under the environment, structurally.
fn refl_hdev(t: &Term, env: &Env) -> Result<HDev> {
    match t {
        Term::Var(x) => Ok(env
            .entries
            .get(x)
            .map(HDev::shallow_clone)
            .unwrap_or_else(|| atom(t.clone()))),
        Term::Const(_) => Ok(atom(t.clone())),
        Term::App(fun, arg) => {
            let f = refl_hdev(fun, env)?;
            let a = refl_hdev(arg, env)?;
            app_compat(f, a)
        }
        Term::Abs(p, body) => {
            let avoid = env.footprint();
            let (p, body, _) = crate::subst::rename_binder_apart(p, body, &avoid);
            let body_dev = subst_apply_dev(&env.subst_dev(), &DevProof::DRefl(body))?;
            Ok(abs_compat(p, body_dev))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dev::DevSearch;
    use crate::head::{head_step, pattern_head_step};
    use crate::parser::{parse_pattern, parse_term};
    use crate::syntax::alpha_eq;

    fn term(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    fn dev_of(m: &str, n: &str) -> DevProof {
        DevSearch::new()
            .is_development(&term(m), &term(n))
            .expect("development exists")
    }

    /// Replay the head chain and validate the remainder.
    fn check_split(dev: &DevProof, split: &HSplit) {
        let mut cur = dev.source();
        for r in &split.head_steps {
            assert!(alpha_eq(&cur, &r.source), "chain source mismatch");
            let (next, _) = head_step(&cur).expect("recorded head step must exist");
            assert!(alpha_eq(&next, &r.result), "chain result mismatch");
            cur = next;
        }
        assert!(alpha_eq(&cur, &split.mid), "mid must end the chain");
        split.internal.validate().unwrap();
        assert!(alpha_eq(&split.internal.source(), &split.mid));
        assert!(alpha_eq(&split.internal.target(), &dev.target()));
    }

    fn check_pat_split(dev: &DevProof, p: &Pattern, split: &PatHSplit) {
        let mut cur = dev.source();
        for r in &split.steps {
            assert!(alpha_eq(&cur, &r.source), "chain source mismatch");
            let (next, _) = pattern_head_step(p, &cur).expect("recorded pattern step must exist");
            assert!(alpha_eq(&next, &r.result), "chain result mismatch");
            cur = next;
        }
        assert!(alpha_eq(&cur, &split.mid), "mid must end the chain");
        split.internal.validate(p).unwrap();
        assert!(alpha_eq(&split.internal.source(), &split.mid));
        assert!(alpha_eq(&split.internal.target(), &dev.target()));
    }

    #[test]
    fn reflexive_split_is_empty() {
        let dev = DevProof::DRefl(term("x"));
        let split = h_split(&dev).unwrap();
        assert!(split.head_steps.is_empty());
        assert!(alpha_eq(&split.mid, &term("x")));
        check_split(&dev, &split);
    }

    #[test]
    fn root_beta_becomes_one_head_step() {
        let dev = dev_of("(\\x.x) A", "A");
        let split = h_split(&dev).unwrap();
        assert_eq!(split.head_steps.len(), 1);
        assert!(alpha_eq(&split.mid, &term("A")));
        assert_eq!(split.internal.rule_name(), "IRefl");
        check_split(&dev, &split);
    }

    #[test]
    fn argument_development_under_unmatched_binder_is_a_head_step() {
        // The argument step is needed to approach a match of (A x), so the
        // split turns it into a head step and the remainder is reflexive.
        let dev = dev_of("(\\(A x).x) ((\\z.z) (A B))", "(\\(A x).x) (A B)");
        let split = h_split(&dev).unwrap();
        assert_eq!(split.head_steps.len(), 1);
        assert!(alpha_eq(&split.mid, &term("(\\(A x).x) (A B)")));
        check_split(&dev, &split);
    }

    #[test]
    fn argument_development_under_variable_binder_is_internal() {
        // x matches anything, so reducing the argument is never needed:
        // the whole development is internal.
        let dev = dev_of("(\\x.C) ((\\y.y) A)", "(\\x.C) A");
        let split = h_split(&dev).unwrap();
        assert!(split.head_steps.is_empty());
        check_split(&dev, &split);
    }

    #[test]
    fn nested_beta_collapses_to_head_chain() {
        let dev = dev_of("(\\x.x) ((\\y.y) C)", "C");
        let split = h_split(&dev).unwrap();
        check_split(&dev, &split);
        assert!(alpha_eq(&split.mid, &term("C")));
    }

    #[test]
    fn pattern_split_examples() {
        let p = parse_pattern("A w").unwrap();
        // development inside a potential match argument
        let dev = dev_of("(\\z.z) (A B)", "A B");
        let split = h_split_pattern(&dev, &p).unwrap();
        assert_eq!(split.steps.len(), 1);
        check_pat_split(&dev, &p, &split);

        // a variable pattern needs nothing
        let split = h_split_pattern(&dev, &parse_pattern("w").unwrap()).unwrap();
        assert!(split.steps.is_empty());
        check_pat_split(&dev, &parse_pattern("w").unwrap(), &split);

        // constants under compound patterns sit still
        let dev = DevProof::DRefl(term("A"));
        let split = h_split_pattern(&dev, &p).unwrap();
        assert!(split.steps.is_empty());
        assert_eq!(split.internal.rule_name(), "PAtomData");
        check_pat_split(&dev, &p, &split);
    }

    #[test]
    fn pattern_variables_must_be_fresh() {
        let dev = DevProof::DRefl(term("x"));
        let p = parse_pattern("x").unwrap();
        assert!(matches!(
            h_split_pattern(&dev, &p),
            Err(Error::SharedVariables { .. })
        ));
    }

    #[test]
    fn split_agrees_on_a_spread_of_developments() {
        let cases = [
            ("((\\x.x) A) ((\\y.y) B)", "A B"),
            ("((\\x.x) (\\y.y)) B", "(\\y.y) B"),
            ("((\\x.x) (\\y.y)) ((\\z.z) B)", "(\\y.y) B"),
            ("(\\(A x).x) ((\\z.z) (A B))", "(\\(A x).x) (A B)"),
            ("\\y.((\\x.x) y)", "\\y.y"),
            ("(\\x.x x) ((\\y.y) A)", "A A"),
        ];
        for (m, n) in cases {
            let dev = dev_of(m, n);
            let split = h_split(&dev).unwrap();
            check_split(&dev, &split);
            for pat in ["w", "A", "A w", "(A w) v"] {
                let p = parse_pattern(pat).unwrap();
                let split = h_split_pattern(&dev, &p).unwrap();
                check_pat_split(&dev, &p, &split);
            }
        }
    }
}
