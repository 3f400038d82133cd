//! The property suite behind `verify`: exhaustive checks of the calculus
//! metatheory over an enumeration universe, one report per criterion.
//!
//! Each property states the sub-universe it sweeps. Linear sweeps run over
//! the full term bound; properties that cross terms with patterns, chains or
//! substitutions run over published smaller bounds so that the whole suite
//! stays within minutes. The scopes are fixed here, not tunable per run, so
//! a green table always certifies the same statements.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::iter::{ParallelBridge, ParallelIterator};

use crate::dev::{match_after_dev, DevSearch};
use crate::head::{head_step, pattern_head_step};
use crate::hsplit::{h_split, h_split_pattern};
use crate::matching::{match_pattern, match_under_subst, matches_renamed, MatchOutcome};
use crate::oracle::{
    all_head_derivations, all_match_derivations, all_pattern_derivations, brute_force_h_split,
    brute_force_h_split_pattern, enumerate_patterns, enumerate_reduction_chains,
    enumerate_substitutions, enumerate_terms, is_standard_brute, UniverseConfig,
};
use crate::parser::{parse_pattern, parse_term};
use crate::reduction::{redex_positions, step_at, validate_step};
use crate::standardisation::{check_standard, postpone, postpone_pattern, standardise_reduction};
use crate::syntax::{alpha_eq, DataPattern, Ident, Pattern, Term};

/// Outcome of one property sweep.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub name: &'static str,
    pub scope: String,
    pub checked: u64,
    pub failures: Vec<String>,
    pub duration: Duration,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects failures with a cap; counting continues past the cap.
struct Collector {
    checked: AtomicU64,
    failures: Mutex<Vec<String>>,
}

const FAILURE_CAP: usize = 5;

impl Collector {
    fn new() -> Self {
        Collector { checked: AtomicU64::new(0), failures: Mutex::new(Vec::new()) }
    }

    fn tick(&self) {
        self.checked.fetch_add(1, Ordering::Relaxed);
    }

    fn fail(&self, message: String) {
        let mut guard = self.failures.lock().unwrap();
        if guard.len() < FAILURE_CAP {
            guard.push(message);
        } else if guard.len() == FAILURE_CAP {
            guard.push("... more failures suppressed".to_string());
        }
    }

    fn check(&self, ok: bool, message: impl FnOnce() -> String) {
        self.tick();
        if !ok {
            self.fail(message());
        }
    }

    fn report(self, name: &'static str, scope: String, started: Instant) -> PropertyReport {
        PropertyReport {
            name,
            scope,
            checked: self.checked.into_inner(),
            failures: self.failures.into_inner().unwrap(),
            duration: started.elapsed(),
        }
    }
}

/// Rename pattern variables to a reserved family so enumerated patterns
/// never collide with term variables or with binders freshened from them.
fn test_pattern(p: &Pattern) -> Pattern {
    let mut map = std::collections::BTreeMap::new();
    let mut next = 0usize;
    for v in p.vars() {
        map.entry(v).or_insert_with(|| {
            next += 1;
            format!("pv{next}")
        });
    }
    p.rename(&map)
}

fn patterns_for_tests(cfg: &UniverseConfig) -> Vec<Pattern> {
    enumerate_patterns(cfg).iter().map(test_pattern).collect()
}

fn smaller(cfg: &UniverseConfig, max_term_size: usize) -> UniverseConfig {
    UniverseConfig { max_term_size: max_term_size.min(cfg.max_term_size), ..cfg.clone() }
}

/// Run the whole suite: the nine acceptance criteria followed by additional
/// module invariants.
pub fn run_suite(cfg: &UniverseConfig) -> Vec<PropertyReport> {
    let mut out = acceptance_criteria(cfg);
    out.extend(extra_invariants(cfg));
    out
}

/// The nine acceptance criteria, in order.
pub fn acceptance_criteria(cfg: &UniverseConfig) -> Vec<PropertyReport> {
    vec![
        c1_internal_development_example(),
        c2_head_selection_example(),
        c3_head_determinism(cfg),
        c4_matching_metatheory(cfg),
        c5_h_development(cfg),
        c6_postponement(cfg),
        c7_standardisation(cfg),
        c8_non_standard_rejection(),
        c9_lemma_suite(cfg),
    ]
}

fn term(src: &str) -> Term {
    parse_term(src).expect("fixture term parses")
}

fn pattern(src: &str) -> Pattern {
    parse_pattern(src).expect("fixture pattern parses")
}

/// Criterion 1: the non-linear internal development example. `A B ((\y.y) C)`
/// develops internally to `A B C` relative to `(A x) x` via `PCDataNo3`,
/// while the pattern itself never matches.
fn c1_internal_development_example() -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let p = pattern("(A x) x");
    let m = term("A B ((\\y.y) C)");
    let n = term("A B C");
    let mut search = DevSearch::new();
    match search.is_internal_development_p(&p, &m, &n) {
        Some(proof) => {
            col.check(proof.rule_name() == "PCDataNo3", || {
                format!("expected PCDataNo3, found {}", proof.rule_name())
            });
            col.check(proof.validate(&p).is_ok(), || "proof does not validate".into());
            col.check(alpha_eq(&proof.source(), &m) && alpha_eq(&proof.target(), &n), || {
                "proof endpoints are wrong".into()
            });
        }
        None => col.check(false, || "internal development not derivable".into()),
    }
    col.check(!matches_renamed(&p, &m), || format!("{p} must not match {m}"));
    col.report("internal development example", "fixed regression".into(), started)
}

/// Criterion 2: head-redex selection depends on the pattern. With
/// `R1 = (\z.z) B`, `R2 = (\z.z) (B C)`, `N = (A R1) R2`:
/// `(A x) (B y)` needs `R2`; `(A x) y` matches and fires beta at the root;
/// the right-grouped `(A (B x)) y` and `(A (B x)) (C y)` need `R1` (the
/// leftmost of the two needed redexes for the latter).
fn c2_head_selection_example() -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let n = term("(A ((\\z.z) B)) ((\\z.z) (B C))");
    let r1_done = term("(A B) ((\\z.z) (B C))");
    let r2_done = term("(A ((\\z.z) B)) (B C)");

    let q1 = Term::App(Box::new(term("\\((A x) (B y)).x")), Box::new(n.clone()));
    match head_step(&q1) {
        Some((t, j)) => {
            col.check(j.rule_name() == "HPat", || format!("p1 fired {}", j.rule_name()));
            col.check(
                alpha_eq(&t, &Term::App(Box::new(term("\\((A x) (B y)).x")), Box::new(r2_done.clone()))),
                || format!("p1 selected the wrong redex: {t}"),
            );
        }
        None => col.check(false, || "p1 has no head step".into()),
    }

    let q4 = Term::App(Box::new(term("\\((A x) y).x")), Box::new(n.clone()));
    match head_step(&q4) {
        Some((t, j)) => {
            col.check(j.rule_name() == "HBeta", || format!("p4 fired {}", j.rule_name()));
            col.check(alpha_eq(&t, &term("(\\z.z) B")), || format!("p4 contractum wrong: {t}"));
        }
        None => col.check(false, || "p4 has no head step".into()),
    }

    for (label, pat_src) in [("p2", "\\((A (B x)) y).x"), ("p3", "\\((A (B x)) (C y)).x")] {
        let q = Term::App(Box::new(term(pat_src)), Box::new(n.clone()));
        match head_step(&q) {
            Some((t, _)) => col.check(
                alpha_eq(&t, &Term::App(Box::new(term(pat_src)), Box::new(r1_done.clone()))),
                || format!("{label} must reduce R1 first, got {t}"),
            ),
            None => col.check(false, || format!("{label} has no head step")),
        }
    }
    col.report("head selection example", "fixed regression".into(), started)
}

/// Criterion 3: every term has at most one head derivation, and the
/// deterministic function agrees with the exhaustive rule reading. The
/// pattern-relative relation is checked the same way on a smaller cross.
fn c3_head_determinism(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    enumerate_terms(cfg).par_bridge().for_each(|t| {
        let all = all_head_derivations(&t);
        col.check(all.len() <= 1, || format!("{t} has {} head derivations", all.len()));
        match (head_step(&t), all.first()) {
            (Some((next, _)), Some(expected)) => {
                if !alpha_eq(&next, expected) {
                    col.fail(format!("head_step disagrees with the rules on {t}"));
                }
            }
            (None, None) => {}
            _ => col.fail(format!("head_step and the rules disagree on whether {t} steps")),
        }
    });
    let pat_cfg = smaller(cfg, 4);
    let patterns = patterns_for_tests(cfg);
    enumerate_terms(&pat_cfg).par_bridge().for_each(|t| {
        for p in &patterns {
            let all = all_pattern_derivations(p, &t);
            col.check(all.len() <= 1, || {
                format!("{t} has {} derivations relative to {p}", all.len())
            });
            match (pattern_head_step(p, &t), all.first()) {
                (Some((next, _)), Some(expected)) => {
                    if !alpha_eq(&next, expected) {
                        col.fail(format!("pattern step disagrees with the rules on {t} / {p}"));
                    }
                }
                (None, None) => {}
                _ => col.fail(format!("pattern step existence differs on {t} / {p}")),
            }
        }
    });
    col.report(
        "head-step determinism",
        format!(
            "terms <= {}; pattern relation on terms <= {} x {} patterns",
            cfg.max_term_size,
            pat_cfg.max_term_size,
            patterns.len()
        ),
        started,
    )
}

/// Criterion 4: matching metatheory. Uniqueness and minimality of matches,
/// data patterns match only data terms, and matching commutes with
/// substitution.
fn c4_matching_metatheory(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let patterns = patterns_for_tests(cfg);
    let term_cfg = smaller(cfg, 5);
    enumerate_terms(&term_cfg).par_bridge().for_each(|t| {
        for p in &patterns {
            let all = all_match_derivations(p, &t);
            let distinct = all.iter().collect::<std::collections::BTreeSet<_>>().len();
            col.check(distinct <= 1, || format!("{p} matches {t} with {distinct} witnesses"));
            match match_pattern(p, &t).expect("test patterns are fresh") {
                MatchOutcome::Matched(theta) => {
                    if all.first() != Some(&theta) {
                        col.fail(format!("match function disagrees with the rules on {p} / {t}"));
                    }
                    if theta.domain() != p.var_set() {
                        col.fail(format!("non-minimal match of {p} against {t}: {theta}"));
                    }
                    if matches!(p, Pattern::Data(_)) && !t.is_data_term() {
                        col.fail(format!("data pattern {p} matched non-data term {t}"));
                    }
                    if !p.is_linear() {
                        col.fail(format!("non-linear pattern {p} matched {t}"));
                    }
                    // Reconstruction: the match witness rebuilds the term.
                    if !alpha_eq(&theta.apply(&p.as_term()), &t) {
                        col.fail(format!("witness of {p} against {t} does not reconstruct"));
                    }
                }
                MatchOutcome::NoMatch => {
                    if !all.is_empty() {
                        col.fail(format!("match function misses a derivation on {p} / {t}"));
                    }
                }
            }
        }
    });
    // Substitution compatibility on matched triples.
    let triple_cfg = smaller(cfg, 3);
    let subs = enumerate_substitutions(cfg, 2);
    enumerate_terms(&triple_cfg).par_bridge().for_each(|t| {
        for p in &patterns {
            let MatchOutcome::Matched(theta) = match_pattern(p, &t).expect("fresh") else {
                continue;
            };
            for nu in &subs {
                match match_under_subst(p, &t, &theta, nu) {
                    Ok(gamma) => {
                        col.check(
                            match_pattern(p, &nu.apply(&t)).expect("fresh")
                                == MatchOutcome::Matched(gamma),
                            || format!("substituted match wrong for {p}, {t}, {nu}"),
                        );
                    }
                    Err(e) => col.check(false, || format!("{p}, {t}, {nu}: {e}")),
                }
            }
        }
    });
    col.report(
        "matching metatheory",
        format!(
            "{} patterns x terms <= {}; substitution triples on terms <= {} x {} substitutions",
            patterns.len(),
            term_cfg.max_term_size,
            triple_cfg.max_term_size,
            subs.len()
        ),
        started,
    )
}

/// Criterion 5: every development splits into head steps plus an internal
/// remainder; the chain replays, the remainder validates, and the mid term
/// is confirmed by brute force. Pattern-relative splits are checked for
/// every enumerated pattern on a smaller term bound.
fn c5_h_development(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let max_head = 3 * cfg.max_chain_length;
    let plain_cfg = smaller(cfg, 5);
    enumerate_terms(&plain_cfg).par_bridge().for_each(|m| {
        let mut search = DevSearch::new();
        for n in search.developments(&m) {
            let Some(dev) = search.is_development(&m, &n) else {
                col.check(false, || format!("enumerated development {m} > {n} underivable"));
                continue;
            };
            match h_split(&dev) {
                Ok(split) => {
                    let mut cur = m.clone();
                    let mut ok = true;
                    for r in &split.head_steps {
                        if !alpha_eq(&cur, &r.source) {
                            ok = false;
                            break;
                        }
                        match head_step(&cur) {
                            Some((next, _)) if alpha_eq(&next, &r.result) => cur = next,
                            _ => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    ok = ok && alpha_eq(&cur, &split.mid);
                    ok = ok && split.internal.validate().is_ok();
                    ok = ok
                        && alpha_eq(&split.internal.source(), &split.mid)
                        && alpha_eq(&split.internal.target(), &n);
                    col.check(ok, || format!("split of {m} > {n} does not replay"));
                    let witnesses = brute_force_h_split(&m, &n, max_head);
                    col.check(witnesses.iter().any(|q| alpha_eq(q, &split.mid)), || {
                        format!("mid of {m} > {n} not confirmed by brute force")
                    });
                }
                Err(e) => col.check(false, || format!("split of {m} > {n} failed: {e}")),
            }
        }
    });
    let pat_cfg = smaller(cfg, 4);
    let patterns = patterns_for_tests(cfg);
    enumerate_terms(&pat_cfg).par_bridge().for_each(|m| {
        let mut search = DevSearch::new();
        for n in search.developments(&m) {
            let dev = search.is_development(&m, &n).expect("enumerated development");
            for p in &patterns {
                match h_split_pattern(&dev, p) {
                    Ok(split) => {
                        let mut cur = m.clone();
                        let mut ok = true;
                        for r in &split.steps {
                            if !alpha_eq(&cur, &r.source) {
                                ok = false;
                                break;
                            }
                            match pattern_head_step(p, &cur) {
                                Some((next, _)) if alpha_eq(&next, &r.result) => cur = next,
                                _ => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        ok = ok && alpha_eq(&cur, &split.mid);
                        ok = ok && split.internal.validate(p).is_ok();
                        ok = ok
                            && alpha_eq(&split.internal.source(), &split.mid)
                            && alpha_eq(&split.internal.target(), &n);
                        col.check(ok, || format!("pattern split of {m} > {n} at {p} is broken"));
                        let witnesses = brute_force_h_split_pattern(p, &m, &n, max_head);
                        col.check(witnesses.iter().any(|q| alpha_eq(q, &split.mid)), || {
                            format!("pattern mid of {m} > {n} at {p} not confirmed")
                        });
                    }
                    Err(e) => {
                        col.check(false, || format!("pattern split failed for {m} > {n} at {p}: {e}"))
                    }
                }
            }
        }
    });
    col.report(
        "h-development property",
        format!(
            "developments from terms <= {}; pattern form on terms <= {} x {} patterns",
            plain_cfg.max_term_size,
            pat_cfg.max_term_size,
            patterns.len()
        ),
        started,
    )
}

/// Criterion 6: postponement. Every composable internal-development /
/// head-step pair commutes into a leading step plus a development, and both
/// witnesses replay. The pattern-relative form is swept on a smaller bound.
fn c6_postponement(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let plain_cfg = smaller(cfg, 5);
    enumerate_terms(&plain_cfg).par_bridge().for_each(|m| {
        let mut search = DevSearch::new();
        for n in search.developments(&m) {
            let Some(int) = search.is_internal_development(&m, &n) else { continue };
            let Some((r, just)) = head_step(&n) else { continue };
            let hstep = crate::reduction::StepRecord {
                source: n.clone(),
                position: just.redex_position(),
                result: r.clone(),
            };
            match postpone(&int, &hstep) {
                Ok((step, dev)) => {
                    let ok = alpha_eq(&step.source, &m)
                        && head_step(&m).map(|(t, _)| alpha_eq(&t, &step.result)).unwrap_or(false)
                        && dev.validate().is_ok()
                        && alpha_eq(&dev.source(), &step.result)
                        && alpha_eq(&dev.target(), &r);
                    col.check(ok, || format!("postponement broken on {m} >int {n} ->h {r}"));
                }
                Err(e) => col.check(false, || format!("postpone failed on {m} >int {n}: {e}")),
            }
        }
    });
    let pat_cfg = smaller(cfg, 4);
    let patterns = patterns_for_tests(cfg);
    enumerate_terms(&pat_cfg).par_bridge().for_each(|m| {
        let mut search = DevSearch::new();
        for n in search.developments(&m) {
            for p in &patterns {
                let Some(int) = search.is_internal_development_p(p, &m, &n) else { continue };
                let Some((r, just)) = pattern_head_step(p, &n) else { continue };
                let pstep = crate::reduction::StepRecord {
                    source: n.clone(),
                    position: just.redex_position(),
                    result: r.clone(),
                };
                match postpone_pattern(p, &int, &pstep) {
                    Ok((step, dev)) => {
                        let ok = alpha_eq(&step.source, &m)
                            && pattern_head_step(p, &m)
                                .map(|(t, _)| alpha_eq(&t, &step.result))
                                .unwrap_or(false)
                            && dev.validate().is_ok()
                            && alpha_eq(&dev.source(), &step.result)
                            && alpha_eq(&dev.target(), &r);
                        col.check(ok, || {
                            format!("pattern postponement broken on {m} / {p}")
                        });
                    }
                    Err(e) => {
                        col.check(false, || format!("pattern postpone failed on {m} / {p}: {e}"))
                    }
                }
            }
        }
    });
    col.report(
        "postponement",
        format!(
            "pairs from terms <= {}; pattern form on terms <= {} x {} patterns",
            plain_cfg.max_term_size,
            pat_cfg.max_term_size,
            patterns.len()
        ),
        started,
    )
}

/// Criterion 7: end-to-end standardisation of every enumerated reduction
/// sequence: endpoints are preserved, adjacent terms are one-step reducts,
/// and the output passes the grammar checker.
fn c7_standardisation(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let sweep_cfg = smaller(cfg, 5);
    enumerate_terms(&sweep_cfg).par_bridge().for_each(|m| {
        for chain in enumerate_reduction_chains(&m, cfg.max_chain_length) {
            let mut end = m.clone();
            for pos in &chain {
                end = step_at(&end, pos).expect("enumerated chain");
            }
            match standardise_reduction(&m, &chain) {
                Ok(seq) => {
                    let mut ok = alpha_eq(&seq.terms[0], &m)
                        && alpha_eq(seq.terms.last().unwrap(), &end);
                    for pair in seq.terms.windows(2) {
                        ok = ok
                            && redex_positions(&pair[0])
                                .iter()
                                .any(|p| alpha_eq(&step_at(&pair[0], p).unwrap(), &pair[1]));
                    }
                    ok = ok && check_standard(&seq.terms).is_some();
                    ok = ok && seq.proof.validate().is_ok();
                    col.check(ok, || {
                        format!(
                            "standardising {m} via {:?} produced a bad sequence",
                            chain.iter().map(|p| p.to_string()).collect::<Vec<_>>()
                        )
                    });
                }
                Err(e) => col.check(false, || format!("standardise failed on {m}: {e}")),
            }
        }
    });
    col.report(
        "standardisation end-to-end",
        format!(
            "reduction chains of length <= {} from terms <= {}",
            cfg.max_chain_length, sweep_cfg.max_term_size
        ),
        started,
    )
}

/// Criterion 8: the classic non-standard sequence is rejected while its
/// endpoints admit a standard sequence.
fn c8_non_standard_rejection() -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let bad = vec![term("(\\x.C) ((\\y.y) A)"), term("(\\x.C) A"), term("C")];
    col.check(check_standard(&bad).is_none(), || {
        "the argument-first sequence must not be standard".into()
    });
    col.check(!is_standard_brute(&bad), || "brute force disagrees on the bad sequence".into());
    let good = vec![term("(\\x.C) ((\\y.y) A)"), term("C")];
    col.check(check_standard(&good).is_some(), || {
        "the direct beta sequence must be standard".into()
    });
    col.report("non-standard rejection", "fixed regression".into(), started)
}

/// Criterion 9: the auxiliary lemma suite, swept exhaustively.
fn c9_lemma_suite(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let patterns = patterns_for_tests(cfg);
    let term_cfg = smaller(cfg, 4);

    // development cannot lose matches / internal development cannot create
    // them / development and data.
    enumerate_terms(&term_cfg).par_bridge().for_each(|m| {
        let mut search = DevSearch::new();
        let targets = search.developments(&m);
        for n in &targets {
            // data preservation both ways
            if m.is_data_term() && !n.is_data_term() {
                col.fail(format!("development lost data shape: {m} > {n}"));
            }
            col.tick();
            if search.is_internal_development(&m, n).is_some()
                && !m.is_data_term()
                && n.is_data_term()
            {
                col.fail(format!("internal development created a data term: {m} >int {n}"));
            }
            for p in &patterns {
                // development cannot lose matches
                if matches_renamed(p, &m) {
                    let dev = search.is_development(&m, n).expect("enumerated");
                    let MatchOutcome::Matched(nu) =
                        match_pattern(p, &dev.source()).expect("fresh")
                    else {
                        col.check(false, || format!("match lost by renaming: {p}, {m}"));
                        continue;
                    };
                    match match_after_dev(&dev, p, &nu) {
                        Ok((theta, sd)) => {
                            let transported = match match_pattern(p, n).expect("fresh") {
                                MatchOutcome::Matched(t) => t.alpha_eq(&theta),
                                MatchOutcome::NoMatch => false,
                            };
                            let ok = transported
                                && sd.source() == nu
                                && sd.target() == theta
                                && sd.validate().is_ok();
                            col.check(ok, || {
                                format!("match transport broken for {p} along {m} > {n}")
                            });
                        }
                        Err(e) => {
                            col.check(false, || format!("match transport failed: {p}, {m}: {e}"))
                        }
                    }
                }
                // internal development relative to p cannot create a match
                if search.is_internal_development_p(p, &m, n).is_some()
                    && !matches_renamed(p, &m)
                    && matches_renamed(p, n)
                {
                    col.fail(format!("{p} match created along {m} >int[p] {n}"));
                }
            }
        }
    });

    // left-pattern-head implies whole-pattern-head.
    let left_cfg = smaller(cfg, 4);
    let right_terms: Vec<Term> = enumerate_terms(&smaller(cfg, 2)).collect();
    let arg_patterns: Vec<Pattern> = patterns
        .iter()
        .filter(|p| p.size() <= 2)
        .map(|p| {
            // second batch of reserved names, disjoint from the first
            let mut map = std::collections::BTreeMap::new();
            for (i, v) in p.var_set().into_iter().enumerate() {
                map.insert(v, format!("qv{}", i + 1));
            }
            p.rename(&map)
        })
        .collect();
    enumerate_terms(&left_cfg).par_bridge().for_each(|m1| {
        for p1 in &patterns {
            let Pattern::Data(d1) = p1 else { continue };
            let Some((n1, _)) = pattern_head_step(p1, &m1) else { continue };
            for p2 in &arg_patterns {
                let whole = Pattern::Data(DataPattern::App(
                    Box::new(d1.clone()),
                    Box::new(p2.clone()),
                ));
                for m2 in &right_terms {
                    let lifted = Term::App(Box::new(m1.clone()), Box::new(m2.clone()));
                    let expected = Term::App(Box::new(n1.clone()), Box::new(m2.clone()));
                    match pattern_head_step(&whole, &lifted) {
                        Some((t, _)) => col.check(alpha_eq(&t, &expected), || {
                            format!("left lift of {m1} under {whole} landed on {t}")
                        }),
                        None => col.check(false, || {
                            format!("left step of {m1} under {p1} does not lift to {whole}")
                        }),
                    }
                }
            }
        }
    });

    // head and pattern steps are compatible with substitution.
    let subs = enumerate_substitutions(cfg, 2);
    enumerate_terms(&term_cfg).par_bridge().for_each(|m| {
        if let Some((n, _)) = head_step(&m) {
            for nu in &subs {
                let stepped = head_step(&nu.apply(&m)).map(|(t, _)| t);
                col.check(
                    stepped.as_ref().map(|t| alpha_eq(t, &nu.apply(&n))).unwrap_or(false),
                    || format!("head step of {m} does not commute with {nu}"),
                );
            }
        }
        for p in &patterns {
            if let Some((n, _)) = pattern_head_step(p, &m) {
                for nu in &subs {
                    let stepped = pattern_head_step(p, &nu.apply(&m)).map(|(t, _)| t);
                    col.check(
                        stepped.as_ref().map(|t| alpha_eq(t, &nu.apply(&n))).unwrap_or(false),
                        || format!("pattern step of {m} under {p} does not commute with {nu}"),
                    );
                }
            }
        }
    });

    col.report(
        "auxiliary lemma suite",
        format!(
            "terms <= {} x {} patterns; lift on terms <= {} x args <= 2; {} substitutions",
            term_cfg.max_term_size,
            patterns.len(),
            left_cfg.max_term_size,
            subs.len()
        ),
        started,
    )
}

/// Additional module invariants beyond the acceptance criteria.
pub fn extra_invariants(cfg: &UniverseConfig) -> Vec<PropertyReport> {
    vec![
        inv_alpha_equivalence(cfg),
        inv_substitution_algebra(cfg),
        inv_reduction_and_developments(cfg),
        inv_round_trip(cfg),
        inv_std_checker_exactness(cfg),
        inv_enumeration_determinism(cfg),
    ]
}

/// Alpha-equivalence is an equivalence relation; free variables behave under
/// substitution.
fn inv_alpha_equivalence(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let terms: Vec<Term> = enumerate_terms(&smaller(cfg, 3)).collect();
    for a in &terms {
        col.check(alpha_eq(a, a), || format!("alpha_eq not reflexive on {a}"));
    }
    let pairs: Vec<(usize, usize)> = (0..terms.len())
        .flat_map(|i| (0..terms.len()).map(move |j| (i, j)))
        .collect();
    pairs.iter().par_bridge().for_each(|(i, j)| {
        let (a, b) = (&terms[*i], &terms[*j]);
        col.check(alpha_eq(a, b) == alpha_eq(b, a), || {
            format!("alpha_eq not symmetric on {a}, {b}")
        });
    });
    // canonical forms make transitivity structural; spot-check small triples
    let small: Vec<Term> = enumerate_terms(&smaller(cfg, 2)).collect();
    for a in &small {
        for b in &small {
            if !alpha_eq(a, b) {
                continue;
            }
            for c in &small {
                col.check(alpha_eq(b, c) == alpha_eq(a, c), || {
                    format!("alpha_eq not transitive on {a}, {b}, {c}")
                });
            }
        }
    }
    col.report(
        "alpha-equivalence is an equivalence",
        format!("pairs over terms <= 3, triples over terms <= 2"),
        started,
    )
}

/// The substitution identities used by the beta case of the compatibility
/// lemma, and the free-variable bound for substitution images.
fn inv_substitution_algebra(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let subs = enumerate_substitutions(cfg, 2);
    let terms: Vec<Term> = enumerate_terms(&smaller(cfg, 3)).collect();
    let mut vars: Vec<Ident> = cfg.variables.clone();
    vars.push("fresh_probe".into());
    subs.iter().par_bridge().for_each(|theta| {
        for tau in &subs {
            if !tau.domain().is_disjoint(&theta.var_set()) {
                continue;
            }
            let lhs = theta.compose(tau).restrict(&tau.domain()).compose(theta);
            let rhs = theta.compose(tau);
            for v in &vars {
                let x = Term::Var(v.clone());
                col.check(alpha_eq(&lhs.apply(&x), &rhs.apply(&x)), || {
                    format!("composition identity fails for {theta}, {tau} at {v}")
                });
            }
        }
    });
    terms.iter().par_bridge().for_each(|t| {
        for s in &subs {
            let applied = s.apply(t);
            let mut allowed = t.free_vars();
            for x in s.domain() {
                allowed.remove(&x);
            }
            allowed.extend(s.var_set());
            col.check(applied.free_vars().is_subset(&allowed), || {
                format!("free variables escape: {s} on {t}")
            });
        }
    });
    col.report(
        "substitution algebra",
        format!("{} substitutions; terms <= 3", subs.len()),
        started,
    )
}

/// Position enumeration is ordered and valid; every one-step reduct is a
/// development; every head step is a one-step reduction.
fn inv_reduction_and_developments(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let sweep = smaller(cfg, 5);
    enumerate_terms(&sweep).par_bridge().for_each(|t| {
        let positions = redex_positions(&t);
        let mut sorted = positions.clone();
        sorted.sort();
        sorted.dedup();
        col.check(positions == sorted, || format!("positions out of order on {t}"));
        let mut search = DevSearch::new();
        for pos in &positions {
            match step_at(&t, pos) {
                Ok(next) => {
                    col.check(
                        validate_step(&crate::reduction::StepRecord {
                            source: t.clone(),
                            position: pos.clone(),
                            result: next.clone(),
                        }),
                        || format!("step replay failed at {pos} in {t}"),
                    );
                    col.check(search.is_development(&t, &next).is_some(), || {
                        format!("one-step reduct is not a development: {t} -> {next}")
                    });
                }
                Err(e) => col.check(false, || format!("step failed at {pos} in {t}: {e}")),
            }
        }
        if let Some((next, just)) = head_step(&t) {
            let via = step_at(&t, &just.redex_position());
            col.check(via.map(|u| alpha_eq(&u, &next)).unwrap_or(false), || {
                format!("head step of {t} is not a positioned step")
            });
        }
    });
    col.report(
        "reduction structure",
        format!("terms <= {}", sweep.max_term_size),
        started,
    )
}

/// Parse of the printed form gives the term back.
fn inv_round_trip(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    enumerate_terms(&smaller(cfg, 4)).par_bridge().for_each(|t| {
        match parse_term(&t.to_string()) {
            Ok(u) => col.check(u == t, || format!("round trip changed {t} into {u}")),
            Err(e) => col.check(false, || format!("printed form of {t} does not parse: {e}")),
        }
    });
    col.report("parser round trip", "terms <= 4".into(), started)
}

/// The grammar checker agrees with a blind brute-force recogniser, and every
/// singleton sequence is standard.
fn inv_std_checker_exactness(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let sweep = smaller(cfg, 4);
    enumerate_terms(&sweep).par_bridge().for_each(|m| {
        col.check(check_standard(std::slice::from_ref(&m)).is_some(), || {
            format!("singleton [{m}] rejected")
        });
        for chain in enumerate_reduction_chains(&m, cfg.max_chain_length) {
            let mut terms = vec![m.clone()];
            for pos in &chain {
                let next = step_at(terms.last().unwrap(), pos).expect("enumerated chain");
                terms.push(next);
            }
            let fast = check_standard(&terms);
            let brute = is_standard_brute(&terms);
            col.check(fast.is_some() == brute, || {
                format!(
                    "checker and brute force disagree on {:?}",
                    terms.iter().map(|t| t.to_string()).collect::<Vec<_>>()
                )
            });
            if let Some(proof) = fast {
                let replayed = proof.replay();
                col.check(
                    replayed.len() == terms.len()
                        && replayed.iter().zip(&terms).all(|(a, b)| alpha_eq(a, b)),
                    || format!("derivation replay differs for a sequence from {m}"),
                );
            }
        }
    });
    col.report(
        "standard checker exactness",
        format!("sequences of length <= {} from terms <= {}", cfg.max_chain_length, sweep.max_term_size),
        started,
    )
}

/// Two runs of the stream agree (determinism / restartability).
fn inv_enumeration_determinism(cfg: &UniverseConfig) -> PropertyReport {
    let started = Instant::now();
    let col = Collector::new();
    let small = smaller(cfg, 4);
    let a: Vec<Term> = enumerate_terms(&small).collect();
    let b: Vec<Term> = enumerate_terms(&small).collect();
    col.check(a == b, || "two enumeration runs differ".into());
    for (i, t) in a.iter().enumerate() {
        for u in &a[i + 1..] {
            col.check(!alpha_eq(t, u), || format!("alpha duplicates emitted: {t}, {u}"));
        }
    }
    col.report(
        "enumeration determinism",
        format!("terms <= {}", small.max_term_size),
        started,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A fast end-to-end pass of every property on a reduced universe.
    #[test]
    fn suite_passes_on_a_small_universe() {
        let cfg = UniverseConfig {
            max_term_size: 3,
            max_chain_length: 2,
            ..UniverseConfig::default()
        };
        for report in run_suite(&cfg) {
            assert!(
                report.passed(),
                "{} failed: {:?}",
                report.name,
                report.failures
            );
        }
    }
}
