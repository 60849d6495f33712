//! Seeded random rules and examples for the integration suites.
#![allow(dead_code)]

use std::collections::BTreeSet;

use fixit::dsl::{eval_rule, ConcreteRule, FixExpr, MatchExpr, PosExpr, SubLr, TokenSeq};
use fixit::synthesis::{fit_affixes, Example};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const ALPHABET: &[char] = &['a', 'b', '.', '-', '/', 'x'];

pub fn word(rng: &mut TestRng, min: usize, max: usize) -> String {
    let n = rng.gen_range(min..=max);
    (0..n).map(|_| *ALPHABET.choose(rng).unwrap()).collect()
}

fn pos_expr(rng: &mut TestRng) -> PosExpr {
    match rng.gen_range(0..4) {
        0 => PosExpr::Ipos(0),
        1 => PosExpr::Ipos(rng.gen_range(1..=3)),
        2 => PosExpr::Ipos(-rng.gen_range(1..=3)),
        _ => {
            let k = rng.gen_range(1..=2) * if rng.gen_bool(0.5) { 1 } else { -1 };
            PosExpr::Cpos {
                c: *ALPHABET.choose(rng).unwrap(),
                k,
                delta: rng.gen_range(-1..=1),
            }
        }
    }
}

/// A well-formed rule with at most 4 match tokens per list, at most 3 fix
/// tokens and offsets within 1. At least one match token is a variable.
pub fn concrete_rule(rng: &mut TestRng) -> ConcreteRule {
    let n_cmd = rng.gen_range(1..=4);
    let n_err = rng.gen_range(0..=4);
    let forced = rng.gen_range(0..n_cmd + n_err);
    let mut matches: Vec<MatchExpr> = (0..n_cmd + n_err)
        .map(|index| {
            if index == forced || rng.gen_bool(0.4) {
                MatchExpr::VarMatch {
                    index,
                    prefix: word(rng, 0, 2),
                    suffix: word(rng, 0, 2),
                }
            } else {
                MatchExpr::Str(word(rng, 1, 4))
            }
        })
        .collect();
    let vars: Vec<usize> = matches
        .iter()
        .filter_map(|m| match m {
            MatchExpr::VarMatch { index, .. } => Some(*index),
            MatchExpr::Str(_) => None,
        })
        .collect();
    let fix = (0..rng.gen_range(1..=3))
        .map(|_| {
            if rng.gen_bool(0.3) {
                FixExpr::Str(word(rng, 1, 4))
            } else {
                FixExpr::SubLr(SubLr {
                    left: pos_expr(rng),
                    right: pos_expr(rng),
                    prefix: word(rng, 0, 2),
                    suffix: word(rng, 0, 2),
                    var: *vars.choose(rng).unwrap(),
                })
            }
        })
        .collect();
    let err = matches.split_off(n_cmd);
    ConcreteRule {
        cmd: matches,
        err,
        fix,
    }
}

/// An input the rule accepts and produces a fix for, if one is found.
pub fn sample_example(rng: &mut TestRng, rule: &ConcreteRule) -> Option<Example> {
    for _ in 0..50 {
        let mut token = |m: &MatchExpr| match m {
            MatchExpr::Str(s) => s.clone(),
            MatchExpr::VarMatch { prefix, suffix, .. } => {
                format!("{prefix}{}{suffix}", word(rng, 1, 4))
            }
        };
        let cmd: Vec<String> = rule.cmd.iter().map(&mut token).collect();
        let err: Vec<String> = rule.err.iter().map(&mut token).collect();
        if let Some(fix) = eval_rule(rule, &cmd, &err) {
            let cmd = TokenSeq::from_strs(&cmd).unwrap();
            let err = TokenSeq::from_strs(&err).unwrap();
            return Example::new(cmd, err, fix).ok();
        }
    }
    None
}

fn distinct<'a>(values: impl Iterator<Item = &'a str>) -> usize {
    values.collect::<BTreeSet<_>>().len()
}

/// Whether `es` pins down every non-constant part of `rule`: each variable
/// takes at least two values whose common prefix and suffix are exactly the
/// rule's, and each substring output takes at least two values.
pub fn witnesses_variability(rule: &ConcreteRule, es: &[Example]) -> bool {
    if es.len() < 2 {
        return false;
    }
    let vars_ok = rule.cmd.iter().chain(&rule.err).all(|m| match m {
        MatchExpr::Str(_) => true,
        MatchExpr::VarMatch {
            index,
            prefix,
            suffix,
        } => {
            let bindings: Vec<&str> = es.iter().map(|e| e.input(*index).unwrap()).collect();
            distinct(bindings.iter().copied()) >= 2
                && fit_affixes(&bindings) == (prefix.clone(), suffix.clone())
        }
    });
    let fix_ok = rule.fix.iter().enumerate().all(|(i, f)| match f {
        FixExpr::Str(_) => true,
        FixExpr::SubLr(_) => distinct(es.iter().map(|e| e.fix[i].as_str())) >= 2,
    });
    vars_ok && fix_ok
}

/// A random rule with examples that witness its variability, or `None` when
/// `max_examples` draws were not enough.
pub fn recoverable_rule(
    rng: &mut TestRng,
    max_examples: usize,
) -> Option<(ConcreteRule, Vec<Example>)> {
    let rule = concrete_rule(rng);
    let mut es: Vec<Example> = Vec::new();
    while es.len() < max_examples {
        let e = sample_example(rng, &rule)?;
        if !es.contains(&e) {
            es.push(e);
        }
        if witnesses_variability(&rule, &es) {
            return Some((rule, es));
        }
    }
    None
}

/// `n` examples of one random rule, or unrelated examples of a shared shape
/// one time in four. Token lengths stay within 8.
pub fn example_set(rng: &mut TestRng, n: usize) -> Vec<Example> {
    if rng.gen_bool(0.75) {
        for _ in 0..20 {
            let rule = concrete_rule(rng);
            let es: Option<Vec<Example>> = (0..n).map(|_| sample_example(rng, &rule)).collect();
            if let Some(es) = es.filter(|es| es.iter().all(short_tokens)) {
                return es;
            }
        }
    }
    let (c, e, f) = (
        rng.gen_range(1..=3),
        rng.gen_range(0..=3),
        rng.gen_range(1..=3),
    );
    (0..n)
        .map(|_| {
            let mut line = |k: usize| {
                (0..k)
                    .map(|_| word(rng, 1, 4))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let (cmd, err, fix) = (line(c), line(e), line(f));
            Example::parse(&cmd, &err, &fix).unwrap()
        })
        .collect()
}

fn short_tokens(e: &Example) -> bool {
    e.cmd
        .iter()
        .chain(e.err.iter())
        .chain(e.fix.iter())
        .all(|t| t.as_str().chars().count() <= 8)
}
