//! Lazy version-space synthesis of rules from examples.
//!
//! A [`SymbolicRule`] keeps every component constant until an example
//! disagrees with it. Disagreeing match components become variables whose
//! prefix and suffix are the longest ones shared by all bindings; disagreeing
//! fix components become [`CandidateSet`]s holding every substring expression
//! over the current variables that reproduces all examples.

mod candidates;
mod enumerate;
mod rank;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dsl::{tokenize, ConcreteRule, Token, TokenSeq};
use crate::error::Error;
use crate::exec::Exec;

pub use candidates::{CandKey, CandidateSet, PosPair};
pub use enumerate::{all_substrings, synth_substrings};
pub use rank::{rank_key, Concretize, RankKey};

/// One demonstration: a failing command, its error output, and the fix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Example {
    pub cmd: TokenSeq,
    pub err: TokenSeq,
    pub fix: TokenSeq,
}

impl Example {
    pub fn new(cmd: TokenSeq, err: TokenSeq, fix: TokenSeq) -> Result<Self, Error> {
        if cmd.is_empty() {
            return Err(Error::InvalidExample("command has no tokens"));
        }
        if fix.is_empty() {
            return Err(Error::InvalidExample("fix has no tokens"));
        }
        Ok(Example { cmd, err, fix })
    }

    /// Tokenizes raw lines.
    pub fn parse(cmd: &str, err: &str, fix: &str) -> Result<Self, Error> {
        Example::new(tokenize(cmd), tokenize(err), tokenize(fix))
    }

    /// Token at position `j` of `cmd @ err`.
    pub fn input(&self, j: usize) -> Option<&str> {
        let n = self.cmd.len();
        if j < n {
            Some(self.cmd[j].as_str())
        } else {
            self.err.get(j - n).map(Token::as_str)
        }
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.cmd.len(), self.err.len(), self.fix.len())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthConfig {
    /// Bound on `|delta|` for enumerated `Cpos` expressions.
    pub max_offset: u32,
    pub exec: Exec,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            max_offset: 1,
            exec: Exec::default(),
        }
    }
}

impl SynthConfig {
    pub fn sequential() -> Self {
        SynthConfig {
            exec: Exec::Sequential,
            ..Default::default()
        }
    }
}

/// Symbolic input component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymMatch {
    Fixed(String),
    Var {
        index: usize,
        prefix: String,
        suffix: String,
        bindings: Vec<String>,
    },
}

/// Symbolic output component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymFix {
    Fixed(String),
    Candidates(CandidateSet),
}

/// A set of concrete rules consistent with the examples seen so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicRule {
    pub(crate) cmd: Vec<SymMatch>,
    pub(crate) err: Vec<SymMatch>,
    pub(crate) fix: Vec<SymFix>,
    pub(crate) example_count: usize,
}

impl SymbolicRule {
    pub fn cmd(&self) -> &[SymMatch] {
        &self.cmd
    }

    pub fn err(&self) -> &[SymMatch] {
        &self.err
    }

    pub fn fix(&self) -> &[SymFix] {
        &self.fix
    }

    /// Number of distinct examples the rule was synthesized from.
    pub fn example_count(&self) -> usize {
        self.example_count
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.cmd.len(), self.err.len(), self.fix.len())
    }

    /// Variable indices bound by the match lists.
    pub fn vars(&self) -> BTreeSet<usize> {
        self.cmd
            .iter()
            .chain(&self.err)
            .filter_map(|m| match m {
                SymMatch::Var { index, .. } => Some(*index),
                SymMatch::Fixed(_) => None,
            })
            .collect()
    }

    /// Count of constant match components.
    pub fn specificity(&self) -> usize {
        self.cmd
            .iter()
            .chain(&self.err)
            .filter(|m| matches!(m, SymMatch::Fixed(_)))
            .count()
    }

    /// The examples this rule was built from, recovered from stored bindings.
    pub fn examples(&self) -> Vec<Example> {
        (0..self.example_count)
            .map(|n| Example {
                cmd: column(&self.cmd, n),
                err: column(&self.err, n),
                fix: self
                    .fix
                    .iter()
                    .map(|f| match f {
                        SymFix::Fixed(s) => Token::new(s.as_str()),
                        SymFix::Candidates(cs) => Token::new(cs.bindings[n].as_str()),
                    })
                    .collect::<Result<TokenSeq, _>>()
                    .expect("stored fix tokens are valid"),
            })
            .collect()
    }

    /// The same rule with example columns in sorted order, so that rules
    /// built from the same example set compare equal.
    pub fn canonical(&self) -> SymbolicRule {
        let examples = self.examples();
        let mut order: Vec<usize> = (0..examples.len()).collect();
        order.sort_by(|&a, &b| examples[a].cmp(&examples[b]));
        let permute = |b: &[String]| order.iter().map(|&n| b[n].clone()).collect::<Vec<_>>();
        let remap = |ms: &[SymMatch]| {
            ms.iter()
                .map(|m| match m {
                    SymMatch::Var {
                        index,
                        prefix,
                        suffix,
                        bindings,
                    } => SymMatch::Var {
                        index: *index,
                        prefix: prefix.clone(),
                        suffix: suffix.clone(),
                        bindings: permute(bindings),
                    },
                    fixed => fixed.clone(),
                })
                .collect()
        };
        SymbolicRule {
            cmd: remap(&self.cmd),
            err: remap(&self.err),
            fix: self
                .fix
                .iter()
                .map(|f| match f {
                    SymFix::Candidates(cs) => SymFix::Candidates(CandidateSet {
                        entries: cs.entries.clone(),
                        bindings: permute(&cs.bindings),
                    }),
                    fixed => fixed.clone(),
                })
                .collect(),
            example_count: self.example_count,
        }
    }

    /// Whether `rule` is one of the concrete rules represented.
    pub fn contains(&self, rule: &ConcreteRule) -> bool {
        let (cmd, err) = self.match_exprs();
        if cmd != rule.cmd || err != rule.err || self.fix.len() != rule.fix.len() {
            return false;
        }
        self.fix.iter().zip(&rule.fix).all(|(f, g)| match (f, g) {
            (SymFix::Fixed(s), crate::dsl::FixExpr::Str(t)) => s == t,
            (SymFix::Candidates(cs), crate::dsl::FixExpr::SubLr(sub)) => cs.contains(sub),
            _ => false,
        })
    }

    pub(crate) fn from_parts(
        cmd: Vec<SymMatch>,
        err: Vec<SymMatch>,
        fix: Vec<SymFix>,
        example_count: usize,
    ) -> SymbolicRule {
        SymbolicRule {
            cmd,
            err,
            fix,
            example_count,
        }
    }
}

fn column(ms: &[SymMatch], n: usize) -> TokenSeq {
    ms.iter()
        .map(|m| match m {
            SymMatch::Fixed(s) => Token::new(s.as_str()),
            SymMatch::Var { bindings, .. } => Token::new(bindings[n].as_str()),
        })
        .collect::<Result<TokenSeq, _>>()
        .expect("stored match tokens are valid")
}

/// Longest prefix and suffix shared by all `bindings`, with the suffix (then
/// the prefix) shortened until both fit inside the shortest binding.
pub fn fit_affixes<S: AsRef<str>>(bindings: &[S]) -> (String, String) {
    let Some((first, rest)) = bindings.split_first() else {
        return (String::new(), String::new());
    };
    let first: Vec<char> = first.as_ref().chars().collect();
    let mut pre = first.len();
    let mut suf = first.len();
    let mut min_len = first.len();
    for b in rest {
        let b: Vec<char> = b.as_ref().chars().collect();
        min_len = min_len.min(b.len());
        pre = pre.min(first.iter().zip(&b).take_while(|(x, y)| x == y).count());
        suf = suf.min(
            first
                .iter()
                .rev()
                .zip(b.iter().rev())
                .take_while(|(x, y)| x == y)
                .count(),
        );
    }
    if pre + suf > min_len {
        suf = min_len.saturating_sub(pre);
        pre = pre.min(min_len);
    }
    (
        first[..pre].iter().collect(),
        first[first.len() - suf..].iter().collect(),
    )
}

/// The rule that reproduces exactly one example, every component constant.
pub fn const_rule(e: &Example) -> SymbolicRule {
    let fixed = |ts: &TokenSeq| {
        ts.iter()
            .map(|t| SymMatch::Fixed(t.as_str().to_owned()))
            .collect()
    };
    SymbolicRule {
        cmd: fixed(&e.cmd),
        err: fixed(&e.err),
        fix: e
            .fix
            .iter()
            .map(|t| SymFix::Fixed(t.as_str().to_owned()))
            .collect(),
        example_count: 1,
    }
}

/// Unifies `tokens` with the symbolic match list `ms`, promoting constants
/// that disagree to variables numbered `offset + position`.
///
/// `prior` is the number of examples `ms` was built from; constants stand for
/// that many identical bindings. Returns the refined list and all variables it
/// binds.
pub fn find_variables(
    tokens: &[Token],
    ms: &[SymMatch],
    offset: usize,
    prior: usize,
) -> Option<(Vec<SymMatch>, BTreeSet<usize>)> {
    if tokens.len() != ms.len() {
        return None;
    }
    let mut out = Vec::with_capacity(ms.len());
    let mut vars = BTreeSet::new();
    for (pos, (t, m)) in tokens.iter().zip(ms).enumerate() {
        let t = t.as_str();
        let (index, bindings) = match m {
            SymMatch::Fixed(s) if s == t => {
                out.push(m.clone());
                continue;
            }
            SymMatch::Fixed(s) => {
                let mut bindings = vec![s.clone(); prior];
                bindings.push(t.to_owned());
                (offset + pos, bindings)
            }
            SymMatch::Var {
                index, bindings, ..
            } => {
                let mut bindings = bindings.clone();
                bindings.push(t.to_owned());
                (*index, bindings)
            }
        };
        let (prefix, suffix) = fit_affixes(&bindings);
        vars.insert(index);
        out.push(SymMatch::Var {
            index,
            prefix,
            suffix,
            bindings,
        });
    }
    Some((out, vars))
}

/// Fix components consistent with every example in `es` (newest last).
///
/// Components of `fix` that are constant and agree with the newest example
/// stay constant; everything else becomes the full candidate set over `vars`.
pub fn synth_fix(
    fix: &[SymFix],
    es: &[Example],
    vars: &BTreeSet<usize>,
    cfg: &SynthConfig,
) -> Option<Vec<SymFix>> {
    let newest = es.last()?;
    if newest.fix.len() != fix.len() {
        return None;
    }
    let positions: Vec<usize> = (0..fix.len()).collect();
    cfg.exec
        .map(&positions, |&i| match &fix[i] {
            SymFix::Fixed(s) if s == newest.fix[i].as_str() => Some(SymFix::Fixed(s.clone())),
            _ => {
                let cs = synth_substrings(es, vars, i, cfg);
                (!cs.is_empty()).then_some(SymFix::Candidates(cs))
            }
        })
        .into_iter()
        .collect()
}

/// Refines `rule` so that it is also consistent with `e`.
///
/// Existing candidate sets are filtered against `e`; only variables promoted
/// by `e` are enumerated from scratch.
pub fn refine_rule(rule: &SymbolicRule, e: &Example, cfg: &SynthConfig) -> Option<SymbolicRule> {
    if rule.shape() != e.shape() {
        return None;
    }
    let prior = rule.examples();
    if prior.contains(e) {
        return Some(rule.clone());
    }
    let n = rule.example_count;
    let (cmd, cmd_vars) = find_variables(&e.cmd, &rule.cmd, 0, n)?;
    let (err, err_vars) = find_variables(&e.err, &rule.err, e.cmd.len(), n)?;
    let vars: BTreeSet<usize> = cmd_vars.union(&err_vars).copied().collect();
    let new_vars: BTreeSet<usize> = vars.difference(&rule.vars()).copied().collect();

    let mut all = prior.clone();
    all.push(e.clone());
    let positions: Vec<usize> = (0..rule.fix.len()).collect();
    let fix: Option<Vec<SymFix>> = cfg
        .exec
        .map(&positions, |&i| {
            let out = e.fix[i].as_str();
            match &rule.fix[i] {
                SymFix::Fixed(s) if s == out => Some(SymFix::Fixed(s.clone())),
                SymFix::Fixed(_) => {
                    let cs = synth_substrings(&all, &vars, i, cfg);
                    (!cs.is_empty()).then_some(SymFix::Candidates(cs))
                }
                SymFix::Candidates(cs) => {
                    let mut cs = cs.clone();
                    cs.retain_consistent(|j| e.input(j).unwrap_or(""), out);
                    if !new_vars.is_empty() {
                        let (max_prefix, max_suffix) = enumerate::common_affix_lens(
                            cs.bindings.iter().map(String::as_str).chain([out]),
                        );
                        let mut fresh = CandidateSet::new(
                            enumerate::enumerate(e, &new_vars, i, cfg, max_prefix, max_suffix),
                            Vec::new(),
                        );
                        for p in &prior {
                            if fresh.is_empty() {
                                break;
                            }
                            fresh
                                .retain_consistent(|j| p.input(j).unwrap_or(""), p.fix[i].as_str());
                        }
                        cs.merge(fresh);
                    }
                    cs.bindings.push(out.to_owned());
                    (!cs.is_empty()).then_some(SymFix::Candidates(cs))
                }
            }
        })
        .into_iter()
        .collect();

    Some(SymbolicRule {
        cmd,
        err,
        fix: fix?,
        example_count: n + 1,
    })
}

/// Synthesizes the symbolic rule for `es`, or `None` when no single rule
/// covers them.
pub fn synth_rules(es: &[Example], cfg: &SynthConfig) -> Option<SymbolicRule> {
    let (first, rest) = es.split_first()?;
    rest.iter()
        .try_fold(const_rule(first), |rule, e| refine_rule(&rule, e, cfg))
}

/// The top-ranked concrete rule.
pub fn rank_select(rule: &SymbolicRule) -> ConcreteRule {
    rank::select(rule)
}

/// Every concrete rule represented, in ranking order per position.
pub fn concretize(rule: &SymbolicRule) -> Concretize {
    Concretize::new(rule)
}

/// Exact size of `concretize(rule)`.
pub fn count_concrete(rule: &SymbolicRule) -> num_bigint::BigUint {
    rule.fix
        .iter()
        .map(|f| match f {
            SymFix::Fixed(_) => num_bigint::BigUint::from(1u32),
            SymFix::Candidates(cs) => num_bigint::BigUint::from(cs.len()),
        })
        .product()
}

/// Applies the top-ranked concrete rule.
pub fn apply_symbolic<S: AsRef<str>, T: AsRef<str>>(
    rule: &SymbolicRule,
    cmd: &[S],
    err: &[T],
) -> Option<TokenSeq> {
    crate::dsl::eval_rule(&rank_select(rule), cmd, err)
}
