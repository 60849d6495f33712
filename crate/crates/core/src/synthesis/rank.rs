use crate::dsl::{ConcreteRule, FixExpr, MatchExpr, PosExpr, SubLr};

use super::{SymFix, SymMatch, SymbolicRule};

/// Sort key of a position expression: `Ipos` before `Cpos`, then smaller
/// `|k|`, positive `k` first, smaller `|delta|`, non-negative `delta` first,
/// then the character.
type PosKey = (u8, u64, bool, u64, bool, char);

/// Total order used to pick one candidate; smaller is better.
pub type RankKey = (usize, PosKey, PosKey, String, String);

fn pos_key(p: &PosExpr) -> PosKey {
    match *p {
        PosExpr::Ipos(k) => (0, k.unsigned_abs(), k < 0, 0, false, '\0'),
        PosExpr::Cpos { c, k, delta } => (
            1,
            k.unsigned_abs(),
            k < 0,
            delta.unsigned_abs(),
            delta < 0,
            c,
        ),
    }
}

/// Lowest variable index first; the remaining fields only break ties.
pub fn rank_key(sub: &SubLr) -> RankKey {
    (
        sub.var,
        pos_key(&sub.left),
        pos_key(&sub.right),
        sub.prefix.clone(),
        sub.suffix.clone(),
    )
}

impl SymbolicRule {
    pub fn match_exprs(&self) -> (Vec<MatchExpr>, Vec<MatchExpr>) {
        let conv = |ms: &[SymMatch]| {
            ms.iter()
                .map(|m| match m {
                    SymMatch::Fixed(s) => MatchExpr::Str(s.clone()),
                    SymMatch::Var {
                        index,
                        prefix,
                        suffix,
                        ..
                    } => MatchExpr::VarMatch {
                        index: *index,
                        prefix: prefix.clone(),
                        suffix: suffix.clone(),
                    },
                })
                .collect()
        };
        (conv(&self.cmd), conv(&self.err))
    }

    /// Concrete choices for fix position `i`, best first.
    pub fn ranked_options(&self, i: usize) -> Vec<FixExpr> {
        match &self.fix[i] {
            SymFix::Fixed(s) => vec![FixExpr::Str(s.clone())],
            SymFix::Candidates(cs) => {
                let mut subs: Vec<(RankKey, SubLr)> =
                    cs.iter().map(|s| (rank_key(&s), s)).collect();
                subs.sort();
                subs.into_iter().map(|(_, s)| FixExpr::SubLr(s)).collect()
            }
        }
    }
}

pub(super) fn select(rule: &SymbolicRule) -> ConcreteRule {
    let (cmd, err) = rule.match_exprs();
    let fix = rule
        .fix
        .iter()
        .map(|f| match f {
            SymFix::Fixed(s) => FixExpr::Str(s.clone()),
            SymFix::Candidates(cs) => FixExpr::SubLr(
                cs.iter()
                    .min_by_key(rank_key)
                    .expect("candidate sets are never empty"),
            ),
        })
        .collect();
    ConcreteRule { cmd, err, fix }
}

/// Iterator over the concrete rules of a symbolic rule.
///
/// The last fix position varies fastest; the first rule yielded is the
/// top-ranked one.
pub struct Concretize {
    cmd: Vec<MatchExpr>,
    err: Vec<MatchExpr>,
    options: Vec<Vec<FixExpr>>,
    cursor: Vec<usize>,
    done: bool,
}

impl Concretize {
    pub(super) fn new(rule: &SymbolicRule) -> Self {
        let (cmd, err) = rule.match_exprs();
        let options: Vec<Vec<FixExpr>> = (0..rule.fix.len())
            .map(|i| rule.ranked_options(i))
            .collect();
        let done = options.iter().any(Vec::is_empty);
        Concretize {
            cmd,
            err,
            cursor: vec![0; options.len()],
            options,
            done,
        }
    }
}

impl Iterator for Concretize {
    type Item = ConcreteRule;

    fn next(&mut self) -> Option<ConcreteRule> {
        if self.done {
            return None;
        }
        let rule = ConcreteRule {
            cmd: self.cmd.clone(),
            err: self.err.clone(),
            fix: self
                .cursor
                .iter()
                .zip(&self.options)
                .map(|(&c, opts)| opts[c].clone())
                .collect(),
        };
        self.done = true;
        for pos in (0..self.cursor.len()).rev() {
            self.cursor[pos] += 1;
            if self.cursor[pos] < self.options[pos].len() {
                self.done = false;
                break;
            }
            self.cursor[pos] = 0;
        }
        Some(rule)
    }
}
