//! Reference implementations for differential testing and benchmarking.
//!
//! [`brute_substrings`] enumerates a bounded universe of position expressions
//! and checks each candidate with the interpreter in [`crate::dsl`]; it shares
//! no code with the synthesizer's enumerator. [`nonlazy_synth`] is the eager
//! baseline that treats every component as a variable from the start.

use std::collections::{BTreeSet, HashMap};

use crate::dsl::{eval_fix_expr, eval_pos, substr, Dir, FixExpr, PosExpr, SubLr, Substitution};
use crate::synthesis::{
    fit_affixes, synth_substrings, CandidateSet, Example, SymFix, SymMatch, SymbolicRule,
    SynthConfig,
};

/// Limits that make the brute-force universe finite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBounds {
    pub max_abs_k: u32,
    pub max_abs_delta: u32,
}

impl OracleBounds {
    /// `max_abs_k` = longest token in `es`, offsets bounded by `cfg`.
    pub fn for_examples(es: &[Example], cfg: &SynthConfig) -> Self {
        let longest = es
            .iter()
            .flat_map(|e| e.cmd.iter().chain(e.err.iter()).chain(e.fix.iter()))
            .map(|t| t.as_str().chars().count())
            .max()
            .unwrap_or(1);
        OracleBounds {
            max_abs_k: longest.max(1) as u32,
            max_abs_delta: cfg.max_offset,
        }
    }
}

fn universe(bound: &str, b: &OracleBounds) -> Vec<PosExpr> {
    let k_max = i64::from(b.max_abs_k);
    let d_max = i64::from(b.max_abs_delta);
    let chars: BTreeSet<char> = bound.chars().collect();
    let mut out: Vec<PosExpr> = (-k_max..=k_max).map(PosExpr::Ipos).collect();
    for &c in &chars {
        for k in (-k_max..=k_max).filter(|&k| k != 0) {
            for delta in -d_max..=d_max {
                out.push(PosExpr::Cpos { c, k, delta });
            }
        }
    }
    out
}

/// Every substring expression over `vars` within `bounds` that reproduces
/// `fix[i]` on every example.
pub fn brute_substrings(
    es: &[Example],
    vars: &BTreeSet<usize>,
    i: usize,
    bounds: &OracleBounds,
) -> BTreeSet<SubLr> {
    let mut found = BTreeSet::new();
    let Some(first) = es.first() else {
        return found;
    };
    let target: Vec<char> = first.fix[i].as_str().chars().collect();
    for &var in vars {
        let Some(bound) = first.input(var) else {
            continue;
        };
        let positions = universe(bound, bounds);
        let lefts: Vec<(PosExpr, usize)> = positions
            .iter()
            .filter_map(|p| eval_pos(p, bound, Dir::L).map(|v| (*p, v)))
            .collect();
        let rights: Vec<(PosExpr, usize)> = positions
            .iter()
            .filter_map(|p| eval_pos(p, bound, Dir::R).map(|v| (*p, v)))
            .collect();
        let mut middles: HashMap<(usize, usize), Option<Vec<char>>> = HashMap::new();
        for &(pl, from) in &lefts {
            for &(pr, to) in &rights {
                let middle = middles
                    .entry((from, to))
                    .or_insert_with(|| substr(bound, from, to).map(|m| m.chars().collect()));
                let Some(middle) = middle else { continue };
                if middle.len() > target.len() {
                    continue;
                }
                // every split of the target around this middle
                for a in 0..=target.len() - middle.len() {
                    if target[a..a + middle.len()] != middle[..] {
                        continue;
                    }
                    let candidate = SubLr {
                        left: pl,
                        right: pr,
                        prefix: target[..a].iter().collect(),
                        suffix: target[a + middle.len()..].iter().collect(),
                        var,
                    };
                    let expr = FixExpr::SubLr(candidate.clone());
                    let consistent = es.iter().all(|e| {
                        let Some(value) = e.input(var) else {
                            return false;
                        };
                        let sigma: Substitution = [(var, value.to_owned())].into();
                        eval_fix_expr(&expr, &sigma).as_deref() == Some(e.fix[i].as_str())
                    });
                    if consistent {
                        found.insert(candidate);
                    }
                }
            }
        }
    }
    found
}

/// Eager synthesis: every input position is a variable and every output
/// position a candidate set, computed once over all examples.
///
/// Output positions with no substring explanation fall back to a constant
/// when every example agrees on them.
pub fn nonlazy_synth(es: &[Example], cfg: &SynthConfig) -> Option<SymbolicRule> {
    let first = es.first()?;
    if es.iter().any(|e| e.shape() != first.shape()) {
        return None;
    }
    let mut distinct: Vec<Example> = Vec::with_capacity(es.len());
    for e in es {
        if !distinct.contains(e) {
            distinct.push(e.clone());
        }
    }
    let n_cmd = first.cmd.len();
    let n_in = n_cmd + first.err.len();
    let as_var = |j: usize| {
        let bindings: Vec<String> = distinct
            .iter()
            .map(|e| e.input(j).unwrap().to_owned())
            .collect();
        let (prefix, suffix) = fit_affixes(&bindings);
        SymMatch::Var {
            index: j,
            prefix,
            suffix,
            bindings,
        }
    };
    let cmd: Vec<SymMatch> = (0..n_cmd).map(as_var).collect();
    let err: Vec<SymMatch> = (n_cmd..n_in).map(as_var).collect();
    let vars: BTreeSet<usize> = (0..n_in).collect();
    let positions: Vec<usize> = (0..first.fix.len()).collect();
    let fix: Option<Vec<SymFix>> = cfg
        .exec
        .map(&positions, |&i| {
            let cs: CandidateSet = synth_substrings(&distinct, &vars, i, cfg);
            if !cs.is_empty() {
                return Some(SymFix::Candidates(cs));
            }
            let out = distinct[0].fix[i].as_str();
            distinct
                .iter()
                .all(|e| e.fix[i].as_str() == out)
                .then(|| SymFix::Fixed(out.to_owned()))
        })
        .into_iter()
        .collect();
    Some(SymbolicRule::from_parts(cmd, err, fix?, distinct.len()))
}
