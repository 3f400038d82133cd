//! Developments: simultaneous contraction of existing redexes, given by
//! inference rules rather than residuals.
//!
//! A development proof witnesses `M > N` ("M develops to N"):
//!
//! ```text
//! DRefl:  M > M
//! DAbs:   M > M'                                      ==> \p.M > \p.M'
//! DApp:   M > M', N > N'                              ==> M N > M' N'
//! DBeta:  M > M', t >> t', p matches N with witness t ==> (\p.M) N > t' M'
//! ```
//!
//! where `t >> t'` is the pointwise lifting to substitutions with equal
//! domains. Internal developments are developments that perform no head
//! steps; the pattern-indexed form is internality relative to matching a
//! pattern. Proof trees replay: every node knows its source and target, and
//! `validate` re-checks each rule's side conditions.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::matching::{match_pattern, match_renamed, matches_renamed, MatchOutcome};
use crate::subst::{rename_binder_apart, Subst};
use crate::syntax::{alpha_eq, fresh_name, DataPattern, Ident, Pattern, Term};

/// Derivation tree for a development `M > N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DevProof {
    DRefl(Term),
    DAbs {
        binder: Pattern,
        body: Box<DevProof>,
    },
    DApp {
        fun: Box<DevProof>,
        arg: Box<DevProof>,
    },
    DBeta {
        binder: Pattern,
        body: Box<DevProof>,
        subst: SubstDevProof,
        /// The match of the binder against the argument; equal to the source
        /// of `subst`.
        witness: Subst,
    },
}

/// Pointwise development of substitutions with equal domains.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubstDevProof {
    pub per_var: BTreeMap<Ident, DevProof>,
}

impl SubstDevProof {
    pub fn source(&self) -> Subst {
        Subst::from_bindings(self.per_var.iter().map(|(x, d)| (x.clone(), d.source())))
    }

    pub fn target(&self) -> Subst {
        Subst::from_bindings(self.per_var.iter().map(|(x, d)| (x.clone(), d.target())))
    }

    pub fn validate(&self) -> Result<()> {
        for (x, dev) in &self.per_var {
            dev.validate()?;
            if dev.source() == Term::Var(x.clone()) || dev.target() == Term::Var(x.clone()) {
                return Err(Error::Precondition(format!(
                    "substitution development binds {x} to itself"
                )));
            }
        }
        Ok(())
    }

    /// Combined identifier footprint of sources and targets.
    fn var_footprint(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        for (x, d) in &self.per_var {
            out.insert(x.clone());
            out.extend(d.source().all_idents());
            out.extend(d.target().all_idents());
        }
        out
    }
}

impl DevProof {
    pub fn rule_name(&self) -> &'static str {
        match self {
            DevProof::DRefl(_) => "DRefl",
            DevProof::DAbs { .. } => "DAbs",
            DevProof::DApp { .. } => "DApp",
            DevProof::DBeta { .. } => "DBeta",
        }
    }

    pub fn source(&self) -> Term {
        match self {
            DevProof::DRefl(t) => t.clone(),
            DevProof::DAbs { binder, body } => Term::Abs(binder.clone(), Box::new(body.source())),
            DevProof::DApp { fun, arg } => Term::App(Box::new(fun.source()), Box::new(arg.source())),
            DevProof::DBeta { binder, body, witness, .. } => Term::App(
                Box::new(Term::Abs(binder.clone(), Box::new(body.source()))),
                Box::new(witness.apply(&binder.as_term())),
            ),
        }
    }

    pub fn target(&self) -> Term {
        match self {
            DevProof::DRefl(t) => t.clone(),
            DevProof::DAbs { binder, body } => Term::Abs(binder.clone(), Box::new(body.target())),
            DevProof::DApp { fun, arg } => Term::App(Box::new(fun.target()), Box::new(arg.target())),
            DevProof::DBeta { body, subst, .. } => subst.target().apply(&body.target()),
        }
    }

    /// Re-check every rule application in the tree.
    pub fn validate(&self) -> Result<()> {
        match self {
            DevProof::DRefl(_) => Ok(()),
            DevProof::DAbs { body, .. } => body.validate(),
            DevProof::DApp { fun, arg } => {
                fun.validate()?;
                arg.validate()
            }
            DevProof::DBeta { binder, body, subst, witness } => {
                body.validate()?;
                subst.validate()?;
                if subst.source() != *witness {
                    return Err(Error::Precondition(
                        "beta witness differs from the substitution development source".into(),
                    ));
                }
                let arg = witness.apply(&binder.as_term());
                match match_pattern(binder, &arg)? {
                    MatchOutcome::Matched(found) if found == *witness => Ok(()),
                    _ => Err(Error::Precondition(format!(
                        "binder {binder} does not match {arg} with the recorded witness"
                    ))),
                }
            }
        }
    }

    /// All identifiers occurring anywhere in the proof.
    pub fn all_idents(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents(&self, out: &mut BTreeSet<Ident>) {
        match self {
            DevProof::DRefl(t) => out.extend(t.all_idents()),
            DevProof::DAbs { binder, body } => {
                out.extend(binder.var_set());
                body.collect_idents(out);
            }
            DevProof::DApp { fun, arg } => {
                fun.collect_idents(out);
                arg.collect_idents(out);
            }
            DevProof::DBeta { binder, body, subst, witness } => {
                out.extend(binder.var_set());
                body.collect_idents(out);
                out.extend(subst.var_footprint());
                for (x, t) in witness.iter() {
                    out.insert(x.clone());
                    out.extend(t.all_idents());
                }
            }
        }
    }
}

/// Derivation tree for an internal development `M >int N`.
///
/// ```text
/// IRefl:  M >int M
/// IAbs:   M > M'                               ==> \p.M >int \p.M'
/// IApp1:  M not an abstraction, M >int M', N > N'  ==> M N >int M' N'
/// IApp2:  M > M', N >int[p] N'                 ==> (\p.M) N >int (\p.M') N'
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntDevProof {
    IRefl(Term),
    IAbs {
        binder: Pattern,
        body: DevProof,
    },
    IApp1 {
        fun: Box<IntDevProof>,
        arg: DevProof,
    },
    IApp2 {
        binder: Pattern,
        body: DevProof,
        arg: Box<PatIntDevProof>,
    },
}

/// Derivation tree for a pattern-indexed internal development `M >int[p] N`.
/// The pattern is supplied alongside the proof when validating.
///
/// ```text
/// PMatch:     N > N', p matches N                     ==> N >int[p] N'
/// PConst:     N >int N'                               ==> N >int[c] N'
/// PNoCData:   N not a data term, N >int N'            ==> N >int[d p] N'
/// PAtomData:  (a lone constant under a compound data pattern)
///                                                        c >int[d p] c
/// PCDataNo1:  D >int[d] D', M > M', d does not match D ==> D M >int[d p] D' M'
/// PCDataNo2:  D > D', M >int[p] M', d matches D,
///             p does not match M                       ==> D M >int[d p] D' M'
/// PCDataNo3:  D > D', M > M', d matches D, p matches M,
///             d p does not match D M                   ==> D M >int[d p] D' M'
/// ```
///
/// `PAtomData` closes the one corner the other rules leave open: a lone
/// constant is a data term, is not an application, and never matches a
/// compound pattern, so no other rule can relate it to itself under a
/// compound index even though it admits no step at all.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatIntDevProof {
    PMatch {
        dev: DevProof,
        witness: Subst,
    },
    PConst(Box<IntDevProof>),
    PNoCData(Box<IntDevProof>),
    PAtomData(Ident),
    PCDataNo1 {
        fun: Box<PatIntDevProof>,
        arg: DevProof,
    },
    PCDataNo2 {
        fun: DevProof,
        arg: Box<PatIntDevProof>,
        fun_match: Subst,
    },
    PCDataNo3 {
        fun: DevProof,
        arg: DevProof,
        fun_match: Subst,
        arg_match: Subst,
    },
}

impl IntDevProof {
    pub fn rule_name(&self) -> &'static str {
        match self {
            IntDevProof::IRefl(_) => "IRefl",
            IntDevProof::IAbs { .. } => "IAbs",
            IntDevProof::IApp1 { .. } => "IApp1",
            IntDevProof::IApp2 { .. } => "IApp2",
        }
    }

    pub fn source(&self) -> Term {
        match self {
            IntDevProof::IRefl(t) => t.clone(),
            IntDevProof::IAbs { binder, body } => {
                Term::Abs(binder.clone(), Box::new(body.source()))
            }
            IntDevProof::IApp1 { fun, arg } => {
                Term::App(Box::new(fun.source()), Box::new(arg.source()))
            }
            IntDevProof::IApp2 { binder, body, arg } => Term::App(
                Box::new(Term::Abs(binder.clone(), Box::new(body.source()))),
                Box::new(arg.source()),
            ),
        }
    }

    pub fn target(&self) -> Term {
        match self {
            IntDevProof::IRefl(t) => t.clone(),
            IntDevProof::IAbs { binder, body } => {
                Term::Abs(binder.clone(), Box::new(body.target()))
            }
            IntDevProof::IApp1 { fun, arg } => {
                Term::App(Box::new(fun.target()), Box::new(arg.target()))
            }
            IntDevProof::IApp2 { binder, body, arg } => Term::App(
                Box::new(Term::Abs(binder.clone(), Box::new(body.target()))),
                Box::new(arg.target()),
            ),
        }
    }

    /// Every internal development is a development.
    pub fn erase(&self) -> DevProof {
        match self {
            IntDevProof::IRefl(t) => DevProof::DRefl(t.clone()),
            IntDevProof::IAbs { binder, body } => DevProof::DAbs {
                binder: binder.clone(),
                body: Box::new(body.clone()),
            },
            IntDevProof::IApp1 { fun, arg } => DevProof::DApp {
                fun: Box::new(fun.erase()),
                arg: Box::new(arg.clone()),
            },
            IntDevProof::IApp2 { binder, body, arg } => DevProof::DApp {
                fun: Box::new(DevProof::DAbs {
                    binder: binder.clone(),
                    body: Box::new(body.clone()),
                }),
                arg: Box::new(arg.erase()),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            IntDevProof::IRefl(_) => Ok(()),
            IntDevProof::IAbs { body, .. } => body.validate(),
            IntDevProof::IApp1 { fun, arg } => {
                if matches!(fun.source(), Term::Abs(..)) {
                    return Err(Error::Precondition(
                        "IApp1 requires a non-abstraction function side".into(),
                    ));
                }
                fun.validate()?;
                arg.validate()
            }
            IntDevProof::IApp2 { binder, body, arg } => {
                body.validate()?;
                arg.validate(binder)
            }
        }
    }
}

impl PatIntDevProof {
    pub fn rule_name(&self) -> &'static str {
        match self {
            PatIntDevProof::PMatch { .. } => "PMatch",
            PatIntDevProof::PConst(_) => "PConst",
            PatIntDevProof::PNoCData(_) => "PNoCData",
            PatIntDevProof::PAtomData(_) => "PAtomData",
            PatIntDevProof::PCDataNo1 { .. } => "PCDataNo1",
            PatIntDevProof::PCDataNo2 { .. } => "PCDataNo2",
            PatIntDevProof::PCDataNo3 { .. } => "PCDataNo3",
        }
    }

    pub fn source(&self) -> Term {
        match self {
            PatIntDevProof::PMatch { dev, .. } => dev.source(),
            PatIntDevProof::PConst(inner) | PatIntDevProof::PNoCData(inner) => inner.source(),
            PatIntDevProof::PAtomData(c) => Term::Const(c.clone()),
            PatIntDevProof::PCDataNo1 { fun, arg } => {
                Term::App(Box::new(fun.source()), Box::new(arg.source()))
            }
            PatIntDevProof::PCDataNo2 { fun, arg, .. } => {
                Term::App(Box::new(fun.source()), Box::new(arg.source()))
            }
            PatIntDevProof::PCDataNo3 { fun, arg, .. } => {
                Term::App(Box::new(fun.source()), Box::new(arg.source()))
            }
        }
    }

    pub fn target(&self) -> Term {
        match self {
            PatIntDevProof::PMatch { dev, .. } => dev.target(),
            PatIntDevProof::PConst(inner) | PatIntDevProof::PNoCData(inner) => inner.target(),
            PatIntDevProof::PAtomData(c) => Term::Const(c.clone()),
            PatIntDevProof::PCDataNo1 { fun, arg } => {
                Term::App(Box::new(fun.target()), Box::new(arg.target()))
            }
            PatIntDevProof::PCDataNo2 { fun, arg, .. } => {
                Term::App(Box::new(fun.target()), Box::new(arg.target()))
            }
            PatIntDevProof::PCDataNo3 { fun, arg, .. } => {
                Term::App(Box::new(fun.target()), Box::new(arg.target()))
            }
        }
    }

    /// Forget the pattern index.
    pub fn erase(&self) -> DevProof {
        match self {
            PatIntDevProof::PMatch { dev, .. } => dev.clone(),
            PatIntDevProof::PConst(inner) | PatIntDevProof::PNoCData(inner) => inner.erase(),
            PatIntDevProof::PAtomData(c) => DevProof::DRefl(Term::Const(c.clone())),
            PatIntDevProof::PCDataNo1 { fun, arg } => DevProof::DApp {
                fun: Box::new(fun.erase()),
                arg: Box::new(arg.clone()),
            },
            PatIntDevProof::PCDataNo2 { fun, arg, .. } => DevProof::DApp {
                fun: Box::new(fun.clone()),
                arg: Box::new(arg.erase()),
            },
            PatIntDevProof::PCDataNo3 { fun, arg, .. } => DevProof::DApp {
                fun: Box::new(fun.clone()),
                arg: Box::new(arg.clone()),
            },
        }
    }

    /// Re-check the tree against the pattern it is indexed by.
    pub fn validate(&self, p: &Pattern) -> Result<()> {
        match self {
            PatIntDevProof::PMatch { dev, witness } => {
                dev.validate()?;
                match match_renamed_consistent(p, &dev.source()) {
                    MatchOutcome::Matched(found) if found == *witness => Ok(()),
                    _ => Err(Error::Precondition(format!(
                        "PMatch witness does not match {p} against {}",
                        dev.source()
                    ))),
                }
            }
            PatIntDevProof::PConst(inner) => {
                if !matches!(p, Pattern::Data(DataPattern::Const(_))) {
                    return Err(Error::Precondition("PConst needs a constant pattern".into()));
                }
                inner.validate()
            }
            PatIntDevProof::PNoCData(inner) => {
                if !matches!(p, Pattern::Data(DataPattern::App(..))) {
                    return Err(Error::Precondition(
                        "PNoCData needs a compound data pattern".into(),
                    ));
                }
                if inner.source().is_data_term() {
                    return Err(Error::Precondition(
                        "PNoCData applies to non-data sources only".into(),
                    ));
                }
                inner.validate()
            }
            PatIntDevProof::PAtomData(_) => {
                if !matches!(p, Pattern::Data(DataPattern::App(..))) {
                    return Err(Error::Precondition(
                        "PAtomData needs a compound data pattern".into(),
                    ));
                }
                Ok(())
            }
            PatIntDevProof::PCDataNo1 { fun, arg } => {
                let Pattern::Data(DataPattern::App(dh, _)) = p else {
                    return Err(Error::Precondition("PCDataNo1 needs a compound pattern".into()));
                };
                let head_pattern = Pattern::Data((**dh).clone());
                if matches_renamed(&head_pattern, &fun.source()) {
                    return Err(Error::Precondition(
                        "PCDataNo1 requires the spine pattern not to match".into(),
                    ));
                }
                if !fun.source().is_data_term() {
                    return Err(Error::Precondition(
                        "PCDataNo1 requires a data-term spine".into(),
                    ));
                }
                fun.validate(&head_pattern)?;
                arg.validate()
            }
            PatIntDevProof::PCDataNo2 { fun, arg, fun_match } => {
                let Pattern::Data(DataPattern::App(dh, dp)) = p else {
                    return Err(Error::Precondition("PCDataNo2 needs a compound pattern".into()));
                };
                let head_pattern = Pattern::Data((**dh).clone());
                match match_renamed_consistent(&head_pattern, &fun.source()) {
                    MatchOutcome::Matched(found) if found == *fun_match => {}
                    _ => {
                        return Err(Error::Precondition(
                            "PCDataNo2 spine match witness is wrong".into(),
                        ))
                    }
                }
                if matches_renamed(dp, &arg.source()) {
                    return Err(Error::Precondition(
                        "PCDataNo2 requires the argument pattern not to match".into(),
                    ));
                }
                fun.validate()?;
                arg.validate(dp)
            }
            PatIntDevProof::PCDataNo3 { fun, arg, fun_match, arg_match } => {
                let Pattern::Data(DataPattern::App(dh, dp)) = p else {
                    return Err(Error::Precondition("PCDataNo3 needs a compound pattern".into()));
                };
                let head_pattern = Pattern::Data((**dh).clone());
                match match_renamed_consistent(&head_pattern, &fun.source()) {
                    MatchOutcome::Matched(found) if found == *fun_match => {}
                    _ => {
                        return Err(Error::Precondition(
                            "PCDataNo3 spine match witness is wrong".into(),
                        ))
                    }
                }
                match match_renamed_consistent(dp, &arg.source()) {
                    MatchOutcome::Matched(found) if found == *arg_match => {}
                    _ => {
                        return Err(Error::Precondition(
                            "PCDataNo3 argument match witness is wrong".into(),
                        ))
                    }
                }
                if matches_renamed(p, &self.source()) {
                    return Err(Error::Precondition(
                        "PCDataNo3 requires the whole pattern not to match".into(),
                    ));
                }
                fun.validate()?;
                arg.validate()
            }
        }
    }
}

/// Match with the same renaming discipline used at construction time so that
/// witnesses compare equal when re-derived.
fn match_renamed_consistent(p: &Pattern, term: &Term) -> MatchOutcome {
    match_renamed(p, term)
}

/// Search state for the development decision procedures. Memo tables are per
/// instance; a fresh instance is cheap.
#[derive(Default)]
pub struct DevSearch {
    targets: HashMap<Term, Vec<Term>>,
    decide: HashMap<(Term, Term), Option<DevProof>>,
}

impl DevSearch {
    pub fn new() -> Self {
        DevSearch::default()
    }

    /// All terms reachable from `term` by one development, the reflexive one
    /// included, deduplicated up to alpha.
    pub fn developments(&mut self, term: &Term) -> Vec<Term> {
        if let Some(v) = self.targets.get(term) {
            return v.clone();
        }
        let mut out: Vec<Term> = vec![term.clone()];
        let mut seen: BTreeSet<Term> = BTreeSet::from([crate::syntax::canonical(term)]);
        let push = |out: &mut Vec<Term>, seen: &mut BTreeSet<Term>, t: Term| {
            if seen.insert(crate::syntax::canonical(&t)) {
                out.push(t);
            }
        };
        match term {
            Term::Abs(p, body) => {
                for b in self.developments(body) {
                    push(&mut out, &mut seen, Term::Abs(p.clone(), Box::new(b)));
                }
            }
            Term::App(fun, arg) => {
                for f in self.developments(fun) {
                    for a in self.developments(arg) {
                        push(&mut out, &mut seen, Term::App(Box::new(f.clone()), Box::new(a)));
                    }
                }
                if let Term::Abs(p, body) = fun.as_ref() {
                    let (p, body, _) = rename_binder_apart(p, body, &arg.all_idents());
                    if let MatchOutcome::Matched(theta) =
                        match_pattern(&p, arg).expect("binder renamed apart")
                    {
                        let body_targets = self.developments(&body);
                        for combo in self.subst_developments(&theta) {
                            for b in &body_targets {
                                push(&mut out, &mut seen, combo.apply(b));
                            }
                        }
                    }
                }
            }
            _ => {}
        }
        self.targets.insert(term.clone(), out.clone());
        out
    }

    /// All pointwise developments of a substitution.
    fn subst_developments(&mut self, theta: &Subst) -> Vec<Subst> {
        let dom: Vec<Ident> = theta.domain().into_iter().collect();
        let mut out = vec![Vec::new()];
        for x in &dom {
            let cands = self.developments(theta.get(x).expect("domain"));
            let mut next = Vec::with_capacity(out.len() * cands.len());
            for prefix in &out {
                for c in &cands {
                    let mut row = prefix.clone();
                    row.push(c.clone());
                    next.push(row);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|row| Subst::from_bindings(dom.iter().cloned().zip(row)))
            .collect()
    }

    /// Decide `M > N`, returning a derivation when one exists. Beta is
    /// explored before the plain application rule; the search backtracks.
    pub fn is_development(&mut self, m: &Term, n: &Term) -> Option<DevProof> {
        if alpha_eq(m, n) {
            return Some(DevProof::DRefl(m.clone()));
        }
        let key = (m.clone(), n.clone());
        if let Some(hit) = self.decide.get(&key) {
            return hit.clone();
        }
        let result = self.decide_slow(m, n);
        self.decide.insert(key, result.clone());
        result
    }

    fn decide_slow(&mut self, m: &Term, n: &Term) -> Option<DevProof> {
        match m {
            Term::Var(_) | Term::Const(_) => None,
            Term::Abs(p, body) => {
                let aligned = align_abs(p, n)?;
                let proof = self.is_development(body, &aligned)?;
                Some(DevProof::DAbs { binder: p.clone(), body: Box::new(proof) })
            }
            Term::App(fun, arg) => {
                if let Some(beta) = self.try_beta(fun, arg, n) {
                    return Some(beta);
                }
                let Term::App(nf, na) = n else { return None };
                let f = self.is_development(fun, nf)?;
                let a = self.is_development(arg, na)?;
                Some(DevProof::DApp { fun: Box::new(f), arg: Box::new(a) })
            }
        }
    }

    fn try_beta(&mut self, fun: &Term, arg: &Term, n: &Term) -> Option<DevProof> {
        let Term::Abs(p, body) = fun else { return None };
        let mut avoid = arg.all_idents();
        avoid.extend(n.all_idents());
        let (p, body, _) = rename_binder_apart(p, body, &avoid);
        let MatchOutcome::Matched(theta) = match_pattern(&p, arg).expect("binder renamed apart")
        else {
            return None;
        };
        let body_targets = self.developments(&body);
        let subst_targets = self.subst_developments(&theta);
        for theta2 in &subst_targets {
            for b2 in &body_targets {
                if alpha_eq(&theta2.apply(b2), n) {
                    let body_proof = self
                        .is_development(&body, b2)
                        .expect("enumerated development must be derivable");
                    let mut per_var = BTreeMap::new();
                    for x in theta.domain() {
                        let from = theta.get(&x).expect("domain");
                        let to = theta2.get(&x).expect("same domain");
                        let proof = self
                            .is_development(from, to)
                            .expect("enumerated development must be derivable");
                        per_var.insert(x, proof);
                    }
                    return Some(DevProof::DBeta {
                        binder: p,
                        body: Box::new(body_proof),
                        subst: SubstDevProof { per_var },
                        witness: theta,
                    });
                }
            }
        }
        None
    }

    /// Decide the pointwise development of substitutions.
    pub fn is_subst_development(&mut self, from: &Subst, to: &Subst) -> Option<SubstDevProof> {
        if from.domain() != to.domain() {
            return None;
        }
        let mut per_var = BTreeMap::new();
        for (x, t) in from.iter() {
            let proof = self.is_development(t, to.get(x).expect("equal domains"))?;
            per_var.insert(x.clone(), proof);
        }
        Some(SubstDevProof { per_var })
    }

    /// Decide `M >int N`.
    pub fn is_internal_development(&mut self, m: &Term, n: &Term) -> Option<IntDevProof> {
        if alpha_eq(m, n) {
            return Some(IntDevProof::IRefl(m.clone()));
        }
        match m {
            Term::Var(_) | Term::Const(_) => None,
            Term::Abs(p, body) => {
                let aligned = align_abs(p, n)?;
                let proof = self.is_development(body, &aligned)?;
                Some(IntDevProof::IAbs { binder: p.clone(), body: proof })
            }
            Term::App(fun, arg) => match fun.as_ref() {
                Term::Abs(p, body) => {
                    let Term::App(nf, na) = n else { return None };
                    let aligned = align_abs(p, nf)?;
                    let body_proof = self.is_development(body, &aligned)?;
                    // The indexed judgment needs the binder apart from the
                    // argument's variables.
                    let mut avoid = arg.all_idents();
                    avoid.extend(na.all_idents());
                    let (p2, _, renaming) = rename_binder_apart(p, body, &avoid);
                    let arg_proof = self.is_internal_development_p(&p2, arg, na)?;
                    let body_proof = if renaming.is_empty() {
                        body_proof
                    } else {
                        rename_dev(&body_proof, &renaming, &BTreeSet::new())
                    };
                    Some(IntDevProof::IApp2 {
                        binder: p2,
                        body: body_proof,
                        arg: Box::new(arg_proof),
                    })
                }
                _ => {
                    let Term::App(nf, na) = n else { return None };
                    let f = self.is_internal_development(fun, nf)?;
                    let a = self.is_development(arg, na)?;
                    Some(IntDevProof::IApp1 { fun: Box::new(f), arg: a })
                }
            },
        }
    }

    /// Decide `M >int[p] N`. The pattern must not share variables with `M`.
    pub fn is_internal_development_p(
        &mut self,
        p: &Pattern,
        m: &Term,
        n: &Term,
    ) -> Option<PatIntDevProof> {
        if let MatchOutcome::Matched(witness) = match_renamed(p, m) {
            if let Some(dev) = self.is_development(m, n) {
                return Some(PatIntDevProof::PMatch { dev, witness });
            }
        }
        match p {
            Pattern::Var(_) => None,
            Pattern::Data(DataPattern::Const(_)) => {
                let inner = self.is_internal_development(m, n)?;
                Some(PatIntDevProof::PConst(Box::new(inner)))
            }
            Pattern::Data(DataPattern::App(dh, dp)) => {
                if !m.is_data_term() {
                    let inner = self.is_internal_development(m, n)?;
                    return Some(PatIntDevProof::PNoCData(Box::new(inner)));
                }
                match m {
                    Term::Const(c) => {
                        if alpha_eq(m, n) {
                            Some(PatIntDevProof::PAtomData(c.clone()))
                        } else {
                            None
                        }
                    }
                    Term::App(fun, arg) => {
                        let Term::App(nf, na) = n else { return None };
                        let head_pattern = Pattern::Data((**dh).clone());
                        match match_renamed(&head_pattern, fun) {
                            MatchOutcome::NoMatch => {
                                let f = self.is_internal_development_p(&head_pattern, fun, nf)?;
                                let a = self.is_development(arg, na)?;
                                Some(PatIntDevProof::PCDataNo1 { fun: Box::new(f), arg: a })
                            }
                            MatchOutcome::Matched(fun_match) => {
                                match match_renamed(dp, arg) {
                                    MatchOutcome::NoMatch => {
                                        let f = self.is_development(fun, nf)?;
                                        let a = self.is_internal_development_p(dp, arg, na)?;
                                        Some(PatIntDevProof::PCDataNo2 {
                                            fun: f,
                                            arg: Box::new(a),
                                            fun_match,
                                        })
                                    }
                                    MatchOutcome::Matched(arg_match) => {
                                        // Both components match but the whole
                                        // pattern does not (otherwise PMatch
                                        // above would have applied or failed
                                        // on the development side).
                                        if matches_renamed(p, m) {
                                            return None;
                                        }
                                        let f = self.is_development(fun, nf)?;
                                        let a = self.is_development(arg, na)?;
                                        Some(PatIntDevProof::PCDataNo3 {
                                            fun: f,
                                            arg: a,
                                            fun_match,
                                            arg_match,
                                        })
                                    }
                                }
                            }
                        }
                    }
                    _ => None,
                }
            }
        }
    }
}

/// Rename the body of an abstraction-shaped term so its binder becomes
/// `target`; `None` when the binders are not alpha-compatible.
pub fn align_abs(target: &Pattern, term: &Term) -> Option<Term> {
    let Term::Abs(q, body) = term else { return None };
    let renaming = binder_renaming(q, target)?;
    let rename = Subst::from_bindings(
        renaming.iter().map(|(x, y)| (x.clone(), Term::Var(y.clone()))),
    );
    let candidate_body = rename.apply(body);
    let candidate = Term::Abs(target.clone(), Box::new(candidate_body.clone()));
    if alpha_eq(&candidate, term) {
        Some(candidate_body)
    } else {
        None
    }
}

/// Positional variable correspondence between two patterns of equal shape.
fn binder_renaming(from: &Pattern, to: &Pattern) -> Option<BTreeMap<Ident, Ident>> {
    fn go(from: &Pattern, to: &Pattern, out: &mut BTreeMap<Ident, Ident>) -> Option<()> {
        match (from, to) {
            (Pattern::Var(a), Pattern::Var(b)) => match out.get(a) {
                Some(prev) if prev != b => None,
                _ => {
                    out.insert(a.clone(), b.clone());
                    Some(())
                }
            },
            (Pattern::Data(a), Pattern::Data(b)) => go_data(a, b, out),
            _ => None,
        }
    }
    fn go_data(from: &DataPattern, to: &DataPattern, out: &mut BTreeMap<Ident, Ident>) -> Option<()> {
        match (from, to) {
            (DataPattern::Const(a), DataPattern::Const(b)) if a == b => Some(()),
            (DataPattern::App(f1, a1), DataPattern::App(f2, a2)) => {
                go_data(f1, f2, out)?;
                go(a1, a2, out)
            }
            _ => None,
        }
    }
    let mut out = BTreeMap::new();
    go(from, to, &mut out)?;
    Some(out)
}

/// Apply a variable renaming to a whole development proof, renaming bound
/// binders on the way when they would collide with the renaming's range or
/// with `avoid`.
pub fn rename_dev(dev: &DevProof, renaming: &BTreeMap<Ident, Ident>, avoid: &BTreeSet<Ident>) -> DevProof {
    if renaming.is_empty() && avoid.is_empty() {
        return dev.clone();
    }
    match dev {
        DevProof::DRefl(t) => DevProof::DRefl(apply_renaming(t, renaming)),
        DevProof::DApp { fun, arg } => DevProof::DApp {
            fun: Box::new(rename_dev(fun, renaming, avoid)),
            arg: Box::new(rename_dev(arg, renaming, avoid)),
        },
        DevProof::DAbs { binder, body } => {
            let (binder, inner) = push_renaming(binder, renaming, avoid, body);
            DevProof::DAbs { binder, body: Box::new(inner) }
        }
        DevProof::DBeta { binder, body, subst, witness } => {
            let (binder2, inner) = push_renaming(binder, renaming, avoid, body);
            let slot_map: BTreeMap<Ident, Ident> =
                binder.vars().into_iter().zip(binder2.vars()).collect();
            let mut per_var = BTreeMap::new();
            for (x, d) in &subst.per_var {
                let key = slot_map.get(x).cloned().unwrap_or_else(|| x.clone());
                per_var.insert(key, rename_dev(d, renaming, avoid));
            }
            let witness = Subst::from_bindings(witness.iter().map(|(x, t)| {
                (
                    slot_map.get(x).cloned().unwrap_or_else(|| x.clone()),
                    apply_renaming(t, renaming),
                )
            }));
            DevProof::DBeta {
                binder: binder2,
                body: Box::new(inner),
                subst: SubstDevProof { per_var },
                witness,
            }
        }
    }
}

fn push_renaming(
    binder: &Pattern,
    renaming: &BTreeMap<Ident, Ident>,
    avoid: &BTreeSet<Ident>,
    body: &DevProof,
) -> (Pattern, DevProof) {
    let bound = binder.var_set();
    // Bound occurrences shadow the outer renaming.
    let shadowed: BTreeMap<Ident, Ident> = renaming
        .iter()
        .filter(|(x, _)| !bound.contains(*x))
        .map(|(x, y)| (x.clone(), y.clone()))
        .collect();
    let range: BTreeSet<Ident> = shadowed.values().cloned().collect();
    let clashing: Vec<Ident> = bound
        .iter()
        .filter(|v| range.contains(*v) || avoid.contains(*v))
        .cloned()
        .collect();
    let mut combined = shadowed;
    let mut binder2 = binder.clone();
    if !clashing.is_empty() {
        let mut no_go: BTreeSet<Ident> = avoid.clone();
        no_go.extend(range.iter().cloned());
        no_go.extend(bound.iter().cloned());
        no_go.extend(body.all_idents());
        no_go.extend(renaming.keys().cloned());
        let mut fresh_map = BTreeMap::new();
        for v in clashing {
            let fresh = fresh_name(&v, &no_go);
            no_go.insert(fresh.clone());
            fresh_map.insert(v, fresh);
        }
        binder2 = binder.rename(&fresh_map);
        combined.extend(fresh_map);
    }
    let inner = rename_dev(body, &combined, avoid);
    (binder2, inner)
}

fn apply_renaming(t: &Term, renaming: &BTreeMap<Ident, Ident>) -> Term {
    if renaming.is_empty() {
        return t.clone();
    }
    Subst::from_bindings(
        renaming.iter().map(|(x, y)| (x.clone(), Term::Var(y.clone()))),
    )
    .apply(t)
}

/// Transport a match through a development: if `p` matches the source of
/// `dev` with witness `nu`, then `p` matches the target with a witness that
/// `nu` develops to pointwise. Returns that witness with its proof.
pub fn match_after_dev(
    dev: &DevProof,
    p: &Pattern,
    nu: &Subst,
) -> Result<(Subst, SubstDevProof)> {
    match match_pattern(p, &dev.source())? {
        MatchOutcome::Matched(found) if found.alpha_eq(nu) => {}
        _ => {
            return Err(Error::Precondition(format!(
                "{nu} is not the match of {p} against {}",
                dev.source()
            )))
        }
    }
    let (theta, per_var) = match_after_dev_rec(dev, p)?;
    debug_assert_eq!(
        match_pattern(p, &dev.target())?,
        MatchOutcome::Matched(theta.clone()),
        "transported witness must match the target"
    );
    Ok((theta, SubstDevProof { per_var }))
}

fn match_after_dev_rec(dev: &DevProof, p: &Pattern) -> Result<(Subst, BTreeMap<Ident, DevProof>)> {
    match p {
        Pattern::Var(x) => Ok((
            Subst::singleton(x.clone(), dev.target()),
            BTreeMap::from([(x.clone(), dev.clone())]),
        )),
        Pattern::Data(DataPattern::Const(_)) => Ok((Subst::empty(), BTreeMap::new())),
        Pattern::Data(DataPattern::App(dh, dp)) => match dev {
            DevProof::DRefl(t) => {
                let Term::App(fun, arg) = t else {
                    return Err(Error::Precondition("matched source must be an application".into()));
                };
                let (t1, m1) = match_after_dev_rec(
                    &DevProof::DRefl(fun.as_ref().clone()),
                    &Pattern::Data((**dh).clone()),
                )?;
                let (t2, m2) = match_after_dev_rec(&DevProof::DRefl(arg.as_ref().clone()), dp)?;
                join_matches(t1, m1, t2, m2)
            }
            DevProof::DApp { fun, arg } => {
                let (t1, m1) = match_after_dev_rec(fun, &Pattern::Data((**dh).clone()))?;
                let (t2, m2) = match_after_dev_rec(arg, dp)?;
                join_matches(t1, m1, t2, m2)
            }
            _ => Err(Error::Precondition(format!(
                "a matched source cannot develop by {}",
                dev.rule_name()
            ))),
        },
    }
}

fn join_matches(
    t1: Subst,
    m1: BTreeMap<Ident, DevProof>,
    t2: Subst,
    m2: BTreeMap<Ident, DevProof>,
) -> Result<(Subst, BTreeMap<Ident, DevProof>)> {
    let joined = t1.disjoint_union(&t2).ok_or_else(|| {
        Error::Precondition("matched pattern must be linear".into())
    })?;
    let mut per_var = m1;
    per_var.extend(m2);
    Ok((joined, per_var))
}

/// Transport a development through developing substitutions: from `M > N`
/// and `nu >> theta` build a proof of `nu M > theta N`. Binders in the proof
/// are renamed apart from the substitutions on the way.
pub fn subst_apply_dev(sd: &SubstDevProof, dev: &DevProof) -> Result<DevProof> {
    let nu = sd.source();
    let theta = sd.target();
    let mut avoid = nu.var_set();
    avoid.extend(theta.var_set());
    go_subst_apply(sd, &nu, &theta, &avoid, dev)
}

fn go_subst_apply(
    sd: &SubstDevProof,
    nu: &Subst,
    theta: &Subst,
    avoid: &BTreeSet<Ident>,
    dev: &DevProof,
) -> Result<DevProof> {
    match dev {
        DevProof::DRefl(t) => refl_under(sd, nu, theta, avoid, t),
        DevProof::DApp { fun, arg } => Ok(DevProof::DApp {
            fun: Box::new(go_subst_apply(sd, nu, theta, avoid, fun)?),
            arg: Box::new(go_subst_apply(sd, nu, theta, avoid, arg)?),
        }),
        DevProof::DAbs { binder, body } => {
            let clash = binder.var_set().iter().any(|v| avoid.contains(v));
            let (binder, body) = if clash {
                rename_dev_binder(binder, body, avoid)
            } else {
                (binder.clone(), body.as_ref().clone())
            };
            Ok(DevProof::DAbs {
                binder,
                body: Box::new(go_subst_apply(sd, nu, theta, avoid, &body)?),
            })
        }
        DevProof::DBeta { binder, .. } => {
            let renamed;
            let dev = if binder.var_set().iter().any(|v| avoid.contains(v)) {
                renamed = rename_dev(dev, &BTreeMap::new(), avoid);
                &renamed
            } else {
                dev
            };
            let DevProof::DBeta { binder, body, subst: tau_dev, witness: tau } = dev else {
                unreachable!("renaming preserves the rule")
            };
            let body_under = go_subst_apply(sd, nu, theta, avoid, body)?;
            let mut per_var = BTreeMap::new();
            for (x, d) in &tau_dev.per_var {
                per_var.insert(x.clone(), go_subst_apply(sd, nu, theta, avoid, d)?);
            }
            let new_witness = nu.compose(tau).restrict(&binder.var_set());
            debug_assert_eq!(
                Subst::from_bindings(per_var.iter().map(|(x, d)| (x.clone(), d.source()))),
                new_witness,
                "transported witness must agree with the transported bindings"
            );
            Ok(DevProof::DBeta {
                binder: binder.clone(),
                body: Box::new(body_under),
                subst: SubstDevProof { per_var },
                witness: new_witness,
            })
        }
    }
}

/// `nu M > theta M` for a reflexive development, built structurally.
fn refl_under(
    sd: &SubstDevProof,
    nu: &Subst,
    theta: &Subst,
    avoid: &BTreeSet<Ident>,
    t: &Term,
) -> Result<DevProof> {
    match t {
        Term::Var(x) => Ok(sd
            .per_var
            .get(x)
            .cloned()
            .unwrap_or_else(|| DevProof::DRefl(t.clone()))),
        Term::Const(_) => Ok(DevProof::DRefl(t.clone())),
        Term::App(fun, arg) => Ok(DevProof::DApp {
            fun: Box::new(refl_under(sd, nu, theta, avoid, fun)?),
            arg: Box::new(refl_under(sd, nu, theta, avoid, arg)?),
        }),
        Term::Abs(p, body) => {
            let (p, body, _) = rename_binder_apart(p, body, avoid);
            Ok(DevProof::DAbs {
                binder: p,
                body: Box::new(refl_under(sd, nu, theta, avoid, &body)?),
            })
        }
    }
}

fn rename_dev_binder(
    binder: &Pattern,
    body: &DevProof,
    avoid: &BTreeSet<Ident>,
) -> (Pattern, DevProof) {
    let wrapped = DevProof::DAbs { binder: binder.clone(), body: Box::new(body.clone()) };
    match rename_dev(&wrapped, &BTreeMap::new(), avoid) {
        DevProof::DAbs { binder, body } => (binder, *body),
        _ => unreachable!("renaming preserves the rule"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_pattern, parse_term};
    use crate::syntax::alpha_eq;

    fn term(src: &str) -> Term {
        parse_term(src).unwrap()
    }

    fn pat(src: &str) -> Pattern {
        parse_pattern(src).unwrap()
    }

    fn dev(m: &str, n: &str) -> Option<DevProof> {
        DevSearch::new().is_development(&term(m), &term(n))
    }

    #[test]
    fn reflexivity_and_leaves() {
        let p = dev("x", "x").unwrap();
        assert_eq!(p.rule_name(), "DRefl");
        assert!(dev("(\\x.x) A", "B").is_none());
    }

    #[test]
    fn parallel_contraction() {
        // both redexes at once
        let p = dev("((\\x.x) A) ((\\y.y) B)", "A B").unwrap();
        p.validate().unwrap();
        assert!(alpha_eq(&p.source(), &term("((\\x.x) A) ((\\y.y) B)")));
        assert!(alpha_eq(&p.target(), &term("A B")));
    }

    #[test]
    fn beta_with_inner_development() {
        // (\x.x) ((\y.y) C) > C: the bound occurrence develops too
        let p = dev("(\\x.x) ((\\y.y) C)", "C").unwrap();
        p.validate().unwrap();
        assert_eq!(p.rule_name(), "DBeta");
        assert!(alpha_eq(&p.target(), &term("C")));
    }

    #[test]
    fn development_is_one_parallel_pass() {
        // ((\x.x x) A) develops to A A in one pass, but Omega-style
        // re-contraction of created redexes is not a development.
        assert!(dev("(\\x.x x) ((\\y.y) A)", "A A").is_some());
        assert!(dev("(\\x.x x) (\\y.(\\z.z) y)", "\\y.y").is_none());
    }

    #[test]
    fn developments_enumeration_is_deduped() {
        let mut search = DevSearch::new();
        let ts = search.developments(&term("((\\x.x) A) ((\\y.y) B)"));
        // M itself, contract left, contract right, contract both
        assert_eq!(ts.len(), 4);
    }

    #[test]
    fn subst_developments() {
        let mut search = DevSearch::new();
        let from = Subst::singleton("x", term("(\\y.y) A"));
        let to = Subst::singleton("x", term("A"));
        let proof = search.is_subst_development(&from, &to).unwrap();
        assert_eq!(proof.source(), from);
        assert_eq!(proof.target(), to);
        // domain mismatch
        let other = Subst::from_bindings([
            ("x".to_string(), term("A")),
            ("y".to_string(), term("B")),
        ]);
        assert!(search.is_subst_development(&to, &other).is_none());
        assert!(search
            .is_subst_development(&Subst::empty(), &Subst::empty())
            .is_some());
    }

    #[test]
    fn internal_development_examples() {
        let mut search = DevSearch::new();
        // A B ((\y.y) C) is internal relative to (A x) x: everything happens
        // away from a (never reachable) match of the non-linear pattern.
        let p = pat("(A x) x");
        let m = term("(A B) ((\\y.y) C)");
        let n = term("(A B) C");
        let proof = search.is_internal_development_p(&p, &m, &n).unwrap();
        assert_eq!(proof.rule_name(), "PCDataNo3");
        proof.validate(&p).unwrap();
        assert!(alpha_eq(&proof.erase().target(), &n));

        // plain internal development: reflexive
        assert!(search.is_internal_development(&term("x"), &term("x")).is_some());
        // contracting the root is a head step, never internal
        assert!(search
            .is_internal_development(&term("(\\x.x) A"), &term("A"))
            .is_none());
    }

    #[test]
    fn internal_development_erases_to_development() {
        let mut search = DevSearch::new();
        // Under a variable binder the argument development is internal: the
        // match already holds, so no argument step is ever needed.
        let m = term("(\\x.x) ((\\y.y) A)");
        let n = term("(\\x.x) A");
        let proof = search.is_internal_development(&m, &n).unwrap();
        proof.validate().unwrap();
        let erased = proof.erase();
        erased.validate().unwrap();
        assert!(alpha_eq(&erased.source(), &m));
        assert!(alpha_eq(&erased.target(), &n));

        // Under an unmatched data binder the same argument step is exactly
        // the preferred head step, hence not internal.
        let m = term("(\\(A x).x) ((\\y.y) (A B))");
        let n = term("(\\(A x).x) (A B)");
        assert!(search.is_internal_development(&m, &n).is_none());
    }

    #[test]
    fn atomic_constants_are_internal_under_compound_patterns() {
        let mut search = DevSearch::new();
        let proof = search
            .is_internal_development_p(&pat("A x"), &term("B"), &term("B"))
            .unwrap();
        assert_eq!(proof.rule_name(), "PAtomData");
        proof.validate(&pat("A x")).unwrap();
    }

    #[test]
    fn match_transport() {
        // p = (A x), M = A ((\y.y) B) > A B gives theta = {x:=B}
        let mut search = DevSearch::new();
        let m = term("A ((\\y.y) B)");
        let n = term("A B");
        let d = search.is_development(&m, &n).unwrap();
        let nu = match_pattern(&pat("A x"), &m).unwrap().into_subst().unwrap();
        let (theta, sd) = match_after_dev(&d, &pat("A x"), &nu).unwrap();
        assert_eq!(theta, Subst::singleton("x", term("B")));
        assert_eq!(sd.source(), nu);
        assert_eq!(sd.target(), theta);
        sd.validate().unwrap();
    }

    #[test]
    fn substitution_compatibility() {
        // nu = {x := (\y.y) A} >> {x := A}, dev = DRefl(x): proof of (\y.y) A > A
        let mut search = DevSearch::new();
        let nu = Subst::singleton("x", term("(\\y.y) A"));
        let th = Subst::singleton("x", term("A"));
        let sd = search.is_subst_development(&nu, &th).unwrap();
        let out = subst_apply_dev(&sd, &DevProof::DRefl(term("x"))).unwrap();
        out.validate().unwrap();
        assert!(alpha_eq(&out.source(), &term("(\\y.y) A")));
        assert!(alpha_eq(&out.target(), &term("A")));

        // dev = (\y.y) x > x under the same environment
        let inner = search.is_development(&term("(\\y.y) x"), &term("x")).unwrap();
        let out = subst_apply_dev(&sd, &inner).unwrap();
        out.validate().unwrap();
        assert!(alpha_eq(&out.source(), &term("(\\y.y) ((\\y.y) A)")));
        assert!(alpha_eq(&out.target(), &term("A")));

        // empty environment leaves the proof endpoints unchanged
        let id = SubstDevProof::default();
        let out = subst_apply_dev(&id, &inner).unwrap();
        assert!(alpha_eq(&out.source(), &inner.source()));
        assert!(alpha_eq(&out.target(), &inner.target()));
    }

    #[test]
    fn binders_are_renamed_apart_from_the_environment() {
        // dev = \y.x > \y.x under {x := y}: the free y must not be captured.
        let mut search = DevSearch::new();
        let nu = Subst::singleton("x", term("y"));
        let sd = search.is_subst_development(&nu, &nu).unwrap();
        let out = subst_apply_dev(&sd, &DevProof::DRefl(term("\\y.x"))).unwrap();
        out.validate().unwrap();
        assert!(alpha_eq(&out.source(), &term("\\z.y")));
        assert!(alpha_eq(&out.target(), &term("\\z.y")));
    }
}
