//! Standardisation: rewriting any chain of developments into a standard
//! reduction sequence, plus a checker for the standard-sequence grammar.
//!
//! Standard sequences are generated by
//!
//! ```text
//! StdHead:   M2;...;Mk standard, M1 ->h M2   ==>  M1;M2;...;Mk
//! StdAbs:    M1;...;Mk standard              ==>  \p.M1;...;\p.Mk
//! StdApp:    M1;...;Mj and N1;...;Nk         ==>  (M1 N1);...;(Mj N1);(Mj N2);...;(Mj Nk)
//! StdVar:    x
//! StdConst:  c
//! ```
//!
//! `StdConst` mirrors `StdVar`: constants are normal forms exactly like
//! variables, and without the axiom no sequence ending in a constant would
//! be derivable.
//!
//! The engine follows the constructive route: postpone internal developments
//! past head steps, bifurcate a development chain into head steps followed by
//! internal developments, then recurse over the target's structure.

use std::collections::HashMap;

use crate::dev::{match_after_dev, subst_apply_dev, DevProof, IntDevProof, PatIntDevProof};
use crate::error::{Error, Result};
use crate::head::{head_step, pattern_head_step};
use crate::hsplit::h_split;
use crate::matching::{match_renamed, matches_renamed, MatchOutcome};
use crate::reduction::{step_at, Dir, Position, StepRecord};
use crate::syntax::{alpha_eq, DataPattern, Ident, Pattern, Term};

/// Derivation tree for the standard-sequence grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StdProof {
    StdHead { step: StepRecord, rest: Box<StdProof> },
    StdAbs { binder: Pattern, body: Box<StdProof> },
    StdApp { fun: Box<StdProof>, arg: Box<StdProof> },
    StdVar(Ident),
    StdConst(Ident),
}

/// A standard reduction sequence together with its grammar derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StdSequence {
    pub terms: Vec<Term>,
    pub proof: StdProof,
}

impl StdProof {
    pub fn rule_name(&self) -> &'static str {
        match self {
            StdProof::StdHead { .. } => "StdHead",
            StdProof::StdAbs { .. } => "StdAbs",
            StdProof::StdApp { .. } => "StdApp",
            StdProof::StdVar(_) => "StdVar",
            StdProof::StdConst(_) => "StdConst",
        }
    }

    /// Regenerate the term list the derivation stands for.
    pub fn replay(&self) -> Vec<Term> {
        match self {
            StdProof::StdVar(x) => vec![Term::Var(x.clone())],
            StdProof::StdConst(c) => vec![Term::Const(c.clone())],
            StdProof::StdHead { step, rest } => {
                let mut out = vec![step.source.clone()];
                out.extend(rest.replay());
                out
            }
            StdProof::StdAbs { binder, body } => body
                .replay()
                .into_iter()
                .map(|t| Term::Abs(binder.clone(), Box::new(t)))
                .collect(),
            StdProof::StdApp { fun, arg } => {
                let funs = fun.replay();
                let args = arg.replay();
                let last_fun = funs.last().expect("nonempty").clone();
                let first_arg = args.first().expect("nonempty").clone();
                let mut out: Vec<Term> = funs
                    .into_iter()
                    .map(|f| Term::App(Box::new(f), Box::new(first_arg.clone())))
                    .collect();
                out.extend(
                    args.into_iter()
                        .skip(1)
                        .map(|a| Term::App(Box::new(last_fun.clone()), Box::new(a))),
                );
                out
            }
        }
    }

    /// Check every step premise in the derivation.
    pub fn validate(&self) -> Result<()> {
        match self {
            StdProof::StdVar(_) | StdProof::StdConst(_) => Ok(()),
            StdProof::StdAbs { body, .. } => body.validate(),
            StdProof::StdApp { fun, arg } => {
                fun.validate()?;
                arg.validate()
            }
            StdProof::StdHead { step, rest } => {
                let Some((next, _)) = head_step(&step.source) else {
                    return Err(Error::Precondition(format!(
                        "{} has no head step",
                        step.source
                    )));
                };
                if !alpha_eq(&next, &step.result) {
                    return Err(Error::Precondition("recorded head step is wrong".into()));
                }
                let replayed = rest.replay();
                if !alpha_eq(&step.result, &replayed[0]) {
                    return Err(Error::Precondition("head step does not reach the tail".into()));
                }
                rest.validate()
            }
        }
    }
}

/// Postpone an internal development past a following head step: from
/// `M >int N ->h R` produce `M ->h N' > R`.
pub fn postpone(intdev: &IntDevProof, hstep: &StepRecord) -> Result<(StepRecord, DevProof)> {
    let n = intdev.target();
    if !alpha_eq(&hstep.source, &n) {
        return Err(Error::NotComposable(format!(
            "head step starts at {} but the development ends at {n}",
            hstep.source
        )));
    }
    match head_step(&n) {
        Some((r, _)) if alpha_eq(&r, &hstep.result) => {}
        Some((r, _)) => {
            return Err(Error::NotComposable(format!(
                "the head step from {n} reaches {r}, not {}",
                hstep.result
            )))
        }
        None => {
            return Err(Error::NotComposable(format!("{n} has no head step")));
        }
    }
    let (mid, dev) = postpone_rec(intdev)?;
    let source = intdev.source();
    let position = match head_step(&source) {
        Some((next, just)) => {
            debug_assert!(alpha_eq(&next, &mid), "postponed step must be the head step");
            just.redex_position()
        }
        None => {
            return Err(Error::NotComposable(format!(
                "{source} has no head step to postpone into"
            )))
        }
    };
    Ok((StepRecord { source, position, result: mid }, dev))
}

/// The pattern-relative form of [`postpone`]: from `M >int[p] N ->[p] R`
/// produce `M ->[p] N' > R`.
pub fn postpone_pattern(
    p: &Pattern,
    intdev: &PatIntDevProof,
    pstep: &StepRecord,
) -> Result<(StepRecord, DevProof)> {
    let n = intdev.target();
    if !alpha_eq(&pstep.source, &n) {
        return Err(Error::NotComposable(format!(
            "pattern step starts at {} but the development ends at {n}",
            pstep.source
        )));
    }
    match pattern_head_step(p, &n) {
        Some((r, _)) if alpha_eq(&r, &pstep.result) => {}
        _ => {
            return Err(Error::NotComposable(format!(
                "no pattern-relative step from {n} reaching {}",
                pstep.result
            )))
        }
    }
    let (mid, dev) = postpone_pattern_rec(p, intdev)?;
    let source = intdev.source();
    let position = match pattern_head_step(p, &source) {
        Some((next, just)) => {
            debug_assert!(alpha_eq(&next, &mid), "postponed step must be the pattern step");
            just.redex_position()
        }
        None => {
            return Err(Error::NotComposable(format!(
                "{source} has no step relative to {p}"
            )))
        }
    };
    Ok((StepRecord { source, position, result: mid }, dev))
}

fn postpone_rec(intdev: &IntDevProof) -> Result<(Term, DevProof)> {
    match intdev {
        IntDevProof::IRefl(t) => {
            let (r, _) = head_step(t).ok_or_else(|| {
                Error::NotComposable(format!("{t} has no head step"))
            })?;
            Ok((r.clone(), DevProof::DRefl(r)))
        }
        IntDevProof::IAbs { .. } => Err(Error::NotComposable(
            "an abstraction has no head step to postpone into".into(),
        )),
        IntDevProof::IApp1 { fun, arg } => {
            let (mid, fun_dev) = postpone_rec(fun)?;
            let m2 = arg.source();
            Ok((
                Term::App(Box::new(mid.clone()), Box::new(m2)),
                DevProof::DApp { fun: Box::new(fun_dev), arg: Box::new(arg.clone()) },
            ))
        }
        IntDevProof::IApp2 { binder, body, arg } => {
            let m2 = arg.source();
            let shared: Vec<Ident> = binder
                .var_set()
                .intersection(&m2.free_vars())
                .cloned()
                .collect();
            if !shared.is_empty() {
                return Err(Error::SharedVariables { shared });
            }
            match match_renamed(binder, &m2) {
                MatchOutcome::Matched(nu) => {
                    // The head step of the whole term is the beta; transport
                    // the body development through the matched bindings.
                    let erased = arg.erase();
                    let (_, sd) = match_after_dev(&erased, binder, &nu)?;
                    let mid = nu.apply(&body.source());
                    let dev = subst_apply_dev(&sd, body)?;
                    Ok((mid, dev))
                }
                MatchOutcome::NoMatch => {
                    let (mid2, arg_dev) = postpone_pattern_rec(binder, arg)?;
                    let fun_term = Term::Abs(binder.clone(), Box::new(body.source()));
                    Ok((
                        Term::App(Box::new(fun_term), Box::new(mid2)),
                        DevProof::DApp {
                            fun: Box::new(DevProof::DAbs {
                                binder: binder.clone(),
                                body: Box::new(body.clone()),
                            }),
                            arg: Box::new(arg_dev),
                        },
                    ))
                }
            }
        }
    }
}

fn postpone_pattern_rec(p: &Pattern, intdev: &PatIntDevProof) -> Result<(Term, DevProof)> {
    let source = intdev.source();
    if matches_renamed(p, &source) {
        // A match is never lost by a development, so the target matches too
        // and admits no pattern-relative step.
        return Err(Error::NotComposable(format!(
            "{p} matches {source}; no pattern-relative step exists"
        )));
    }
    match (p, intdev) {
        (Pattern::Var(_), _) => Err(Error::NotComposable(
            "no step is ever relative to a variable pattern".into(),
        )),
        (_, PatIntDevProof::PMatch { .. }) => Err(Error::NotComposable(
            "a matched source admits no pattern-relative step".into(),
        )),
        (_, PatIntDevProof::PConst(inner)) | (_, PatIntDevProof::PNoCData(inner)) => {
            // The pattern step must be the term's own head step.
            postpone_rec(inner)
        }
        (_, PatIntDevProof::PAtomData(c)) => Err(Error::NotComposable(format!(
            "the constant {c} admits no step at all"
        ))),
        (Pattern::Data(DataPattern::App(dh, _)), PatIntDevProof::PCDataNo1 { fun, arg }) => {
            let (mid, fun_dev) = postpone_pattern_rec(&Pattern::Data((**dh).clone()), fun)?;
            Ok((
                Term::App(Box::new(mid), Box::new(arg.source())),
                DevProof::DApp { fun: Box::new(fun_dev), arg: Box::new(arg.clone()) },
            ))
        }
        (Pattern::Data(DataPattern::App(_, dp)), PatIntDevProof::PCDataNo2 { fun, arg, .. }) => {
            let (mid, arg_dev) = postpone_pattern_rec(dp, arg)?;
            Ok((
                Term::App(Box::new(fun.source()), Box::new(mid)),
                DevProof::DApp { fun: Box::new(fun.clone()), arg: Box::new(arg_dev) },
            ))
        }
        (_, PatIntDevProof::PCDataNo3 { .. }) => Err(Error::NotComposable(
            "both components already match; no pattern-relative step exists".into(),
        )),
        _ => Err(Error::NotComposable(
            "pattern and derivation shapes do not fit together".into(),
        )),
    }
}

/// Commute an internal development past a head step and re-split: from
/// `M >int N ->h R` produce `M ->h* N'' >int R`.
pub fn commute_head(
    intdev: &IntDevProof,
    hstep: &StepRecord,
) -> Result<(Vec<StepRecord>, IntDevProof)> {
    let (step, dev) = postpone(intdev, hstep)?;
    let split = h_split(&dev)?;
    let mut steps = vec![step];
    steps.extend(split.head_steps);
    Ok((steps, split.internal))
}

/// Split a composable chain of developments into leading head steps and a
/// trailing chain of internal developments.
pub fn bifurcate(chain: &[DevProof]) -> Result<(Vec<StepRecord>, Vec<IntDevProof>)> {
    for pair in chain.windows(2) {
        if !alpha_eq(&pair[0].target(), &pair[1].source()) {
            return Err(Error::NotComposable(format!(
                "chain breaks between {} and {}",
                pair[0].target(),
                pair[1].source()
            )));
        }
    }
    bifurcate_rec(chain)
}

fn bifurcate_rec(chain: &[DevProof]) -> Result<(Vec<StepRecord>, Vec<IntDevProof>)> {
    let Some((first, rest)) = chain.split_first() else {
        return Ok((Vec::new(), Vec::new()));
    };
    let split = h_split(first)?;
    let (rest_heads, rest_ints) = bifurcate_rec(rest)?;
    let mut heads = split.head_steps;
    let mut current = split.internal;
    for step in &rest_heads {
        let (steps, next) = commute_head(&current, step)?;
        heads.extend(steps);
        current = next;
    }
    let mut ints = vec![current];
    ints.extend(rest_ints);
    Ok((heads, ints))
}

/// Standardise a composable chain of developments from `m`: produce a
/// standard reduction sequence with the same endpoints.
pub fn standardise(m: &Term, chain: &[DevProof]) -> Result<StdSequence> {
    if let Some(first) = chain.first() {
        if !alpha_eq(m, &first.source()) {
            return Err(Error::NotComposable(format!(
                "chain starts at {}, not {m}",
                first.source()
            )));
        }
    }
    let (heads, ints) = bifurcate(chain)?;
    let mid = heads.last().map(|s| s.result.clone()).unwrap_or_else(|| m.clone());
    let tail = standard_from_internal(&mid, &ints)?;
    let mut proof = tail;
    for step in heads.iter().rev() {
        proof = StdProof::StdHead { step: step.clone(), rest: Box::new(proof) };
    }
    Ok(StdSequence { terms: proof.replay(), proof })
}

/// Build a standard sequence for `r >int* n` by recursion on the target.
fn standard_from_internal(r: &Term, ints: &[IntDevProof]) -> Result<StdProof> {
    let target = ints.last().map(|i| i.target()).unwrap_or_else(|| r.clone());
    match &target {
        Term::Var(x) => Ok(StdProof::StdVar(x.clone())),
        Term::Const(c) => Ok(StdProof::StdConst(c.clone())),
        Term::Abs(..) => {
            let Term::Abs(binder, body0) = r else {
                return Err(Error::NotComposable(format!(
                    "internal chain ends at an abstraction but starts at {r}"
                )));
            };
            let mut chain = Vec::new();
            for int in ints {
                let (_, dev) = abs_component(int, binder)?;
                chain.push(dev);
            }
            let body_seq = standardise(body0, &chain)?;
            Ok(StdProof::StdAbs { binder: binder.clone(), body: Box::new(body_seq.proof) })
        }
        Term::App(..) => {
            let Term::App(fun0, arg0) = r else {
                return Err(Error::NotComposable(format!(
                    "internal chain ends at an application but starts at {r}"
                )));
            };
            let mut fun_chain = Vec::new();
            let mut arg_chain = Vec::new();
            for int in ints {
                let (f, a) = app_components(int)?;
                fun_chain.push(f);
                arg_chain.push(a);
            }
            let fun_seq = standardise(fun0, &fun_chain)?;
            let arg_seq = standardise(arg0, &arg_chain)?;
            Ok(StdProof::StdApp {
                fun: Box::new(fun_seq.proof),
                arg: Box::new(arg_seq.proof),
            })
        }
    }
}

/// Body development of an internal step between abstractions, renamed to the
/// reference binder.
fn abs_component(int: &IntDevProof, binder: &Pattern) -> Result<(Pattern, DevProof)> {
    let (own, dev) = match int {
        IntDevProof::IRefl(Term::Abs(p, b)) => (p.clone(), DevProof::DRefl(b.as_ref().clone())),
        IntDevProof::IAbs { binder, body } => (binder.clone(), body.clone()),
        other => {
            return Err(Error::NotComposable(format!(
                "{} is not an internal step between abstractions",
                other.rule_name()
            )))
        }
    };
    if own == *binder {
        return Ok((own, dev));
    }
    let renaming = pattern_correspondence(&own, binder).ok_or_else(|| {
        Error::NotComposable("binders along the chain are incompatible".into())
    })?;
    let dev = crate::dev::rename_dev(&dev, &renaming, &Default::default());
    Ok((binder.clone(), dev))
}

fn pattern_correspondence(
    from: &Pattern,
    to: &Pattern,
) -> Option<std::collections::BTreeMap<Ident, Ident>> {
    let fv = from.vars();
    let tv = to.vars();
    if fv.len() != tv.len() {
        return None;
    }
    let mut out = std::collections::BTreeMap::new();
    for (a, b) in fv.into_iter().zip(tv) {
        match out.get(&a) {
            Some(prev) if *prev != b => return None,
            _ => {
                out.insert(a, b);
            }
        }
    }
    Some(out)
}

/// Component developments of an internal step between applications.
fn app_components(int: &IntDevProof) -> Result<(DevProof, DevProof)> {
    match int {
        IntDevProof::IRefl(Term::App(f, a)) => Ok((
            DevProof::DRefl(f.as_ref().clone()),
            DevProof::DRefl(a.as_ref().clone()),
        )),
        IntDevProof::IApp1 { fun, arg } => Ok((fun.erase(), arg.clone())),
        IntDevProof::IApp2 { binder, body, arg } => Ok((
            DevProof::DAbs { binder: binder.clone(), body: Box::new(body.clone()) },
            arg.erase(),
        )),
        other => Err(Error::NotComposable(format!(
            "{} is not an internal step between applications",
            other.rule_name()
        ))),
    }
}

/// Wrap the contraction at `pos` as a development: beta at the position,
/// reflexivity everywhere else.
pub fn step_to_development(term: &Term, pos: &Position) -> Result<DevProof> {
    fn go(term: &Term, path: &[Dir], pos: &Position) -> Result<DevProof> {
        match path.split_first() {
            None => {
                let Term::App(fun, arg) = term else {
                    return Err(Error::NotARedex {
                        position: pos.to_string(),
                        term: term.to_string(),
                    });
                };
                let Term::Abs(p, body) = fun.as_ref() else {
                    return Err(Error::NotARedex {
                        position: pos.to_string(),
                        term: term.to_string(),
                    });
                };
                let (p, body, _) =
                    crate::subst::rename_binder_apart(p, body, &arg.all_idents());
                let MatchOutcome::Matched(witness) =
                    crate::matching::match_pattern(&p, arg).expect("binder renamed apart")
                else {
                    return Err(Error::NotARedex {
                        position: pos.to_string(),
                        term: term.to_string(),
                    });
                };
                let per_var = witness
                    .iter()
                    .map(|(x, t)| (x.clone(), DevProof::DRefl(t.clone())))
                    .collect();
                Ok(DevProof::DBeta {
                    binder: p,
                    body: Box::new(DevProof::DRefl(body)),
                    subst: crate::dev::SubstDevProof { per_var },
                    witness,
                })
            }
            Some((d, rest)) => match (d, term) {
                (Dir::FunSide, Term::App(fun, arg)) => Ok(DevProof::DApp {
                    fun: Box::new(go(fun, rest, pos)?),
                    arg: Box::new(DevProof::DRefl(arg.as_ref().clone())),
                }),
                (Dir::ArgSide, Term::App(fun, arg)) => Ok(DevProof::DApp {
                    fun: Box::new(DevProof::DRefl(fun.as_ref().clone())),
                    arg: Box::new(go(arg, rest, pos)?),
                }),
                (Dir::Body, Term::Abs(p, body)) => Ok(DevProof::DAbs {
                    binder: p.clone(),
                    body: Box::new(go(body, rest, pos)?),
                }),
                _ => Err(Error::InvalidPosition {
                    position: pos.to_string(),
                    term: term.to_string(),
                }),
            },
        }
    }
    go(term, &pos.0, pos)
}

/// Standardise a concrete reduction: contract the listed positions in order
/// and rewrite the resulting sequence into a standard one.
pub fn standardise_reduction(term: &Term, positions: &[Position]) -> Result<StdSequence> {
    let mut chain = Vec::new();
    let mut cur = term.clone();
    for pos in positions {
        let dev = step_to_development(&cur, pos)?;
        let next = step_at(&cur, pos)?;
        debug_assert!(alpha_eq(&dev.target(), &next));
        chain.push(dev);
        cur = next;
    }
    standardise(term, &chain)
}

/// Decide the standard-sequence grammar: try the head rule, then decompose
/// by the outermost constructor, backtracking over application split points.
pub fn check_standard(terms: &[Term]) -> Option<StdProof> {
    if terms.is_empty() {
        return None;
    }
    let mut memo = HashMap::new();
    check_rec(terms, &mut memo)
}

fn check_rec(terms: &[Term], memo: &mut HashMap<Vec<Term>, Option<StdProof>>) -> Option<StdProof> {
    if let Some(hit) = memo.get(terms) {
        return hit.clone();
    }
    let result = check_slow(terms, memo);
    memo.insert(terms.to_vec(), result.clone());
    result
}

fn check_slow(terms: &[Term], memo: &mut HashMap<Vec<Term>, Option<StdProof>>) -> Option<StdProof> {
    // StdHead: the first pair is a head step.
    if terms.len() >= 2 {
        if let Some((next, just)) = head_step(&terms[0]) {
            if alpha_eq(&next, &terms[1]) {
                if let Some(rest) = check_rec(&terms[1..], memo) {
                    return Some(StdProof::StdHead {
                        step: StepRecord {
                            source: terms[0].clone(),
                            position: just.redex_position(),
                            result: terms[1].clone(),
                        },
                        rest: Box::new(rest),
                    });
                }
            }
        }
    }
    match &terms[0] {
        Term::Var(x) if terms.len() == 1 => return Some(StdProof::StdVar(x.clone())),
        Term::Const(c) if terms.len() == 1 => return Some(StdProof::StdConst(c.clone())),
        Term::Abs(binder, _) => {
            // StdAbs: all terms are abstractions over one binder.
            let bodies: Option<Vec<Term>> =
                terms.iter().map(|t| crate::dev::align_abs(binder, t)).collect();
            if let Some(bodies) = bodies {
                if let Some(body) = check_rec(&bodies, memo) {
                    return Some(StdProof::StdAbs {
                        binder: binder.clone(),
                        body: Box::new(body),
                    });
                }
            }
        }
        Term::App(..) => {
            // StdApp: a function phase with fixed argument, then an argument
            // phase with fixed function. Try every split point.
            let parts: Option<Vec<(&Term, &Term)>> = terms
                .iter()
                .map(|t| match t {
                    Term::App(f, a) => Some((f.as_ref(), a.as_ref())),
                    _ => None,
                })
                .collect();
            if let Some(parts) = parts {
                for j in 1..=parts.len() {
                    let (fun_phase, arg_phase) = parts.split_at(j);
                    let first_arg = fun_phase[0].1;
                    if !fun_phase.iter().all(|(_, a)| alpha_eq(a, first_arg)) {
                        continue;
                    }
                    let junction_fun = fun_phase[j - 1].0;
                    if !arg_phase.iter().all(|(f, _)| alpha_eq(f, junction_fun)) {
                        continue;
                    }
                    let fun_seq: Vec<Term> = fun_phase.iter().map(|(f, _)| (*f).clone()).collect();
                    let mut arg_seq: Vec<Term> = vec![fun_phase[j - 1].1.clone()];
                    arg_seq.extend(arg_phase.iter().map(|(_, a)| (*a).clone()));
                    if let Some(fun_proof) = check_rec(&fun_seq, memo) {
                        if let Some(arg_proof) = check_rec(&arg_seq, memo) {
                            return Some(StdProof::StdApp {
                                fun: Box::new(fun_proof),
                                arg: Box::new(arg_proof),
                            });
                        }
                    }
                }
            }
        }
        _ => {}
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dev::DevSearch;
    use crate::parser::parse_term;
    use crate::reduction::redex_positions;

    fn term(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    fn terms(srcs: &[&str]) -> Vec<Term> {
        srcs.iter().map(|s| term(s)).collect()
    }

    #[test]
    fn singletons_are_standard() {
        for src in ["x", "A", "\\x.x", "x y", "(\\x.x) A", "\\(A x).x y"] {
            let proof = check_standard(&[term(src)]).expect(src);
            assert_eq!(proof.replay(), vec![term(src)]);
            proof.validate().unwrap();
        }
        assert!(check_standard(&[]).is_none());
    }

    #[test]
    fn head_first_sequences_are_standard() {
        let seq = terms(&["(\\x.x) A", "A"]);
        let proof = check_standard(&seq).unwrap();
        assert_eq!(proof.rule_name(), "StdHead");
        proof.validate().unwrap();
    }

    #[test]
    fn postposed_head_steps_are_rejected() {
        // The head beta must come first; reducing the argument beforehand is
        // not standard, and no other decomposition fits.
        let seq = terms(&["(\\x.C) ((\\y.y) A)", "(\\x.C) A", "C"]);
        assert!(check_standard(&seq).is_none());
        // The endpoints do admit a standard sequence: the direct beta.
        let good = terms(&["(\\x.C) ((\\y.y) A)", "C"]);
        assert!(check_standard(&good).is_some());
    }

    #[test]
    fn app_sequences_split() {
        // fun runs first, then arg
        let seq = terms(&["((\\x.x) A) ((\\y.y) B)", "A ((\\y.y) B)", "A B"]);
        let proof = check_standard(&seq).unwrap();
        proof.validate().unwrap();
        // arg before fun is not standard
        let bad = terms(&["((\\x.x) A) ((\\y.y) B)", "((\\x.x) A) B", "A B"]);
        assert!(check_standard(&bad).is_none());
    }

    #[test]
    fn abs_sequences_wrap_bodies() {
        let seq = terms(&["\\y.((\\x.x) y)", "\\y.y"]);
        let proof = check_standard(&seq).unwrap();
        assert_eq!(proof.rule_name(), "StdAbs");
        proof.validate().unwrap();
    }

    #[test]
    fn postpone_base_cases() {
        // IRefl input returns the head step and a reflexive development.
        let t = term("(\\x.x) A");
        let int = IntDevProof::IRefl(t.clone());
        let hstep = StepRecord {
            source: t.clone(),
            position: Position::root(),
            result: term("A"),
        };
        let (step, dev) = postpone(&int, &hstep).unwrap();
        assert!(alpha_eq(&step.source, &t));
        assert!(alpha_eq(&step.result, &term("A")));
        assert!(matches!(dev, DevProof::DRefl(_)));
    }

    #[test]
    fn postpone_commutes_internal_argument_developments() {
        // M = (\x.x)((\y.y) A) >int (\x.x) A ->h A
        // becomes M ->h (\y.y) A > A.
        let mut search = DevSearch::new();
        let m = term("(\\x.x) ((\\y.y) A)");
        let n = term("(\\x.x) A");
        let int = search.is_internal_development(&m, &n).unwrap();
        let hstep = StepRecord {
            source: n.clone(),
            position: Position::root(),
            result: term("A"),
        };
        let (step, dev) = postpone(&int, &hstep).unwrap();
        assert!(alpha_eq(&step.result, &term("(\\y.y) A")));
        dev.validate().unwrap();
        assert!(alpha_eq(&dev.source(), &term("(\\y.y) A")));
        assert!(alpha_eq(&dev.target(), &term("A")));

        // The commuted form re-splits into a pure head chain.
        let (steps, int2) = commute_head(&int, &hstep).unwrap();
        assert_eq!(steps.len(), 2);
        assert!(alpha_eq(&int2.source(), &term("A")));
        assert!(alpha_eq(&int2.target(), &term("A")));
    }

    #[test]
    fn bifurcation_splits_chains() {
        let mut search = DevSearch::new();
        let a = term("(\\x.x) ((\\y.y) A)");
        let b = term("(\\x.x) A");
        let c = term("A");
        let chain = vec![
            search.is_development(&a, &b).unwrap(),
            search.is_development(&b, &c).unwrap(),
        ];
        let (heads, ints) = bifurcate(&chain).unwrap();
        assert_eq!(heads.len(), 2);
        assert!(alpha_eq(&heads.last().unwrap().result, &c));
        for int in ints {
            assert!(alpha_eq(&int.source(), &int.target()));
        }

        assert!(bifurcate(&[]).unwrap().0.is_empty());
    }

    #[test]
    fn standardise_basic() {
        // empty chain
        let seq = standardise(&term("x"), &[]).unwrap();
        assert_eq!(seq.terms, vec![term("x")]);
        seq.proof.validate().unwrap();

        // one beta
        let mut search = DevSearch::new();
        let dev = search.is_development(&term("(\\x.x) A"), &term("A")).unwrap();
        let seq = standardise(&term("(\\x.x) A"), &[dev]).unwrap();
        assert_eq!(seq.terms, terms(&["(\\x.x) A", "A"]));
        assert!(check_standard(&seq.terms).is_some());
    }

    #[test]
    fn standardise_reorders_inside_out_reductions() {
        // Reduce the argument first, then the outer beta that discards it:
        // the standard sequence is the single outer step.
        let m = term("(\\x.C) ((\\y.y) A)");
        let positions: Vec<Position> = vec!["arg".parse().unwrap(), "root".parse().unwrap()];
        let seq = standardise_reduction(&m, &positions).unwrap();
        assert_eq!(seq.terms, terms(&["(\\x.C) ((\\y.y) A)", "C"]));
        seq.proof.validate().unwrap();
        assert!(check_standard(&seq.terms).is_some());
    }

    #[test]
    fn standardise_output_passes_check_standard() {
        let cases: Vec<(&str, Vec<&str>)> = vec![
            ("((\\x.x) A) ((\\y.y) B)", vec!["arg", "fun"]),
            ("(\\x.x x) ((\\y.y) A)", vec!["arg", "root"]),
            ("\\y.((\\x.x) ((\\z.z) y))", vec!["body.arg", "body"]),
            ("(\\(A x).x) ((\\z.z) (A B))", vec!["arg", "root"]),
        ];
        for (src, poss) in cases {
            let m = term(src);
            let positions: Vec<Position> = poss.iter().map(|p| p.parse().unwrap()).collect();
            let seq = standardise_reduction(&m, &positions).unwrap();
            assert!(alpha_eq(&seq.terms[0], &m), "must start at the source");
            seq.proof.validate().unwrap();
            assert!(
                check_standard(&seq.terms).is_some(),
                "output of standardise must be standard: {:?}",
                seq.terms.iter().map(|t| t.to_string()).collect::<Vec<_>>()
            );
            // endpoints agree with the original reduction
            let mut cur = m.clone();
            for pos in &positions {
                cur = step_at(&cur, pos).unwrap();
            }
            assert!(alpha_eq(seq.terms.last().unwrap(), &cur));
            // adjacent terms are one-step reducts
            for pair in seq.terms.windows(2) {
                assert!(redex_positions(&pair[0])
                    .iter()
                    .any(|p| alpha_eq(&step_at(&pair[0], p).unwrap(), &pair[1])));
            }
        }
    }
}
