//! Human-readable rendering of rules.
//!
//! Variables are stored under their token position in `cmd @ err`; for
//! display they are renumbered 1, 2, ... in order of appearance.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::dsl::{ConcreteRule, FixExpr, MatchExpr, PosExpr, SubLr};
use crate::synthesis::{SymFix, SymMatch, SymbolicRule};

struct Names(BTreeMap<usize, usize>);

impl Names {
    fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut sorted: Vec<usize> = indices.into_iter().collect();
        sorted.sort_unstable();
        sorted.dedup();
        Names(
            sorted
                .into_iter()
                .enumerate()
                .map(|(n, i)| (i, n + 1))
                .collect(),
        )
    }

    fn get(&self, index: usize) -> usize {
        self.0.get(&index).copied().unwrap_or(index)
    }
}

fn quote(s: &str) -> &str {
    if s.is_empty() {
        "ε"
    } else {
        s
    }
}

fn pos(p: &PosExpr) -> String {
    p.to_string()
}

fn var_match(names: &Names, index: usize, prefix: &str, suffix: &str) -> String {
    format!(
        "Var-Match({}, {}, {})",
        names.get(index),
        quote(prefix),
        quote(suffix)
    )
}

fn sub_lr(names: &Names, s: &SubLr) -> String {
    format!(
        "Sub-lr({},{},{},{},Var({}))",
        pos(&s.left),
        pos(&s.right),
        quote(&s.prefix),
        quote(&s.suffix),
        names.get(s.var)
    )
}

fn list(items: impl IntoIterator<Item = String>) -> String {
    format!("[{}]", items.into_iter().collect::<Vec<_>>().join(", "))
}

pub fn concrete_rule(rule: &ConcreteRule) -> String {
    let names = Names::new(rule.cmd.iter().chain(&rule.err).filter_map(|m| match m {
        MatchExpr::VarMatch { index, .. } => Some(*index),
        MatchExpr::Str(_) => None,
    }));
    let m = |ms: &[MatchExpr]| {
        list(ms.iter().map(|m| match m {
            MatchExpr::Str(s) => format!("Str({s})"),
            MatchExpr::VarMatch {
                index,
                prefix,
                suffix,
            } => var_match(&names, *index, prefix, suffix),
        }))
    };
    let fix = list(rule.fix.iter().map(|f| match f {
        FixExpr::Str(s) => format!("Fstr({s})"),
        FixExpr::SubLr(s) => sub_lr(&names, s),
    }));
    format!("match {}\nand {}\n-> {}", m(&rule.cmd), m(&rule.err), fix)
}

/// Renders a symbolic rule; candidate sets longer than `max_candidates` are
/// elided after that many (best-ranked) entries.
pub fn symbolic_rule(rule: &SymbolicRule, max_candidates: usize) -> String {
    let names = Names::new(rule.vars());
    let m = |ms: &[SymMatch]| {
        list(ms.iter().map(|m| match m {
            SymMatch::Fixed(s) => format!("Str({s})"),
            SymMatch::Var {
                index,
                prefix,
                suffix,
                ..
            } => var_match(&names, *index, prefix, suffix),
        }))
    };
    let mut fix = Vec::new();
    for (i, f) in rule.fix().iter().enumerate() {
        match f {
            SymFix::Fixed(s) => fix.push(format!("Fstr({s})")),
            SymFix::Candidates(cs) => {
                let options = rule.ranked_options(i);
                let mut out = String::from("{");
                for (n, o) in options.iter().take(max_candidates).enumerate() {
                    if n > 0 {
                        out.push_str(", ");
                    }
                    if let FixExpr::SubLr(s) = o {
                        out.push_str(&sub_lr(&names, s));
                    }
                }
                if cs.len() > max_candidates {
                    let _ = write!(out, ", ... {} more", cs.len() - max_candidates);
                }
                out.push('}');
                fix.push(out);
            }
        }
    }
    format!(
        "match {}\nand {}\n-> {}",
        m(rule.cmd()),
        m(rule.err()),
        list(fix)
    )
}
