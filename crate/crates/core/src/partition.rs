//! Learning several rules from one undifferentiated example corpus.
//!
//! Examples are grouped by shape, the token counts of command, error and
//! fix, since a rule only ever matches one shape. Each group is then split
//! into the fewest blocks that each admit a single rule, by trying set
//! partitions in ascending number of blocks.

use std::collections::{BTreeMap, HashMap};

use crate::synthesis::{const_rule, refine_rule, synth_rules, Example, SymbolicRule, SynthConfig};

/// Token counts of command, error message and fix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Shape {
    pub cmd: usize,
    pub err: usize,
    pub fix: usize,
}

impl Shape {
    pub fn of(e: &Example) -> Shape {
        let (cmd, err, fix) = e.shape();
        Shape { cmd, err, fix }
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.cmd, self.err, self.fix)
    }
}

/// Groups examples by shape; each group is sorted.
pub fn group_by_shape(es: &[Example]) -> BTreeMap<Shape, Vec<Example>> {
    let mut groups: BTreeMap<Shape, Vec<Example>> = BTreeMap::new();
    for e in es {
        groups.entry(Shape::of(e)).or_default().push(e.clone());
    }
    for g in groups.values_mut() {
        g.sort();
    }
    groups
}

/// Set partitions of `{0..n}` as lists of blocks, fewest blocks first.
///
/// Within one block count, partitions follow the lexicographic order of their
/// restricted growth strings (element `i` is labelled with its block number,
/// blocks numbered in order of first appearance).
pub struct Partitions {
    n: usize,
    blocks: usize,
    rgs: Vec<usize>,
    fresh: bool,
}

pub fn enumerate_partitions(n: usize) -> Partitions {
    Partitions {
        n,
        blocks: 1,
        rgs: Vec::new(),
        fresh: true,
    }
}

impl Partitions {
    /// Smallest string with exactly `self.blocks` blocks.
    fn first_of_size(&mut self) {
        let m = self.blocks;
        self.rgs = vec![0; self.n];
        for b in 1..m {
            self.rgs[self.n - m + b] = b;
        }
    }

    /// Advances to the next string with the same block count.
    fn advance(&mut self) -> bool {
        let (n, m) = (self.n, self.blocks);
        let mut prefix_max = vec![0; n];
        for i in 1..n {
            prefix_max[i] = prefix_max[i - 1].max(self.rgs[i - 1]);
        }
        for i in (1..n).rev() {
            let v = self.rgs[i] + 1;
            if v > (prefix_max[i] + 1).min(m - 1) {
                continue;
            }
            let top = prefix_max[i].max(v);
            let remaining = n - 1 - i;
            if remaining < m - 1 - top {
                continue;
            }
            self.rgs[i] = v;
            // lexicographically smallest completion reaching m blocks
            for slot in self.rgs[i + 1..].iter_mut() {
                *slot = 0;
            }
            let missing = m - 1 - top;
            for b in 0..missing {
                self.rgs[n - missing + b] = top + 1 + b;
            }
            return true;
        }
        false
    }

    fn current(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.blocks];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b].push(i);
        }
        out
    }
}

impl Iterator for Partitions {
    type Item = Vec<Vec<usize>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.n == 0 || self.blocks > self.n {
            return None;
        }
        if self.fresh {
            self.fresh = false;
            self.first_of_size();
            return Some(self.current());
        }
        if self.advance() {
            return Some(self.current());
        }
        self.blocks += 1;
        if self.blocks > self.n {
            return None;
        }
        self.first_of_size();
        Some(self.current())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LearnConfig {
    pub synth: SynthConfig,
    /// Largest group searched exhaustively; larger groups are split greedily.
    pub max_group: usize,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            synth: SynthConfig::default(),
            max_group: 10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LearnedRule {
    pub shape: Shape,
    pub rule: SymbolicRule,
    pub examples: Vec<Example>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LearnResult {
    pub rules: Vec<LearnedRule>,
    /// Index into `rules` for every distinct input example.
    pub assignment: BTreeMap<Example, usize>,
    pub unexplained: Vec<Example>,
    /// Groups that exceeded `max_group` and were split greedily.
    pub greedy_groups: Vec<Shape>,
}

type Block = (SymbolicRule, Vec<usize>);

fn exact_blocks(group: &[Example], cfg: &SynthConfig) -> Option<Vec<Block>> {
    let mut cache: HashMap<u64, Option<SymbolicRule>> = HashMap::new();
    let mask = |block: &[usize]| block.iter().fold(0u64, |m, &i| m | (1 << i));
    for partition in enumerate_partitions(group.len()) {
        let masks: Vec<u64> = partition.iter().map(|b| mask(b)).collect();
        if masks.iter().any(|m| matches!(cache.get(m), Some(None))) {
            continue;
        }
        let missing: Vec<usize> = (0..partition.len())
            .filter(|&b| !cache.contains_key(&masks[b]))
            .collect();
        let built = cfg.exec.map(&missing, |&b| {
            let examples: Vec<Example> = partition[b].iter().map(|&i| group[i].clone()).collect();
            synth_rules(&examples, cfg)
        });
        for (&b, rule) in missing.iter().zip(built) {
            cache.insert(masks[b], rule);
        }
        let rules: Option<Vec<Block>> = partition
            .iter()
            .zip(&masks)
            .map(|(block, m)| cache[m].clone().map(|r| (r, block.clone())))
            .collect();
        if rules.is_some() {
            return rules;
        }
    }
    None
}

fn greedy_blocks(group: &[Example], cfg: &SynthConfig) -> Vec<Block> {
    let mut blocks: Vec<Block> = Vec::new();
    for (i, e) in group.iter().enumerate() {
        let joined = blocks.iter_mut().find_map(|(rule, members)| {
            let refined = refine_rule(rule, e, cfg)?;
            *rule = refined;
            members.push(i);
            Some(())
        });
        if joined.is_none() {
            blocks.push((const_rule(e), vec![i]));
        }
    }
    blocks
}

/// Learns the fewest rules (per shape group) that together explain `es`.
pub fn learn_rules(es: &[Example], cfg: &LearnConfig) -> LearnResult {
    let mut groups: Vec<(Shape, Vec<Example>)> = group_by_shape(es).into_iter().collect();
    for (_, g) in groups.iter_mut() {
        g.dedup();
    }
    let solved = cfg.synth.exec.map(&groups, |(_, group)| {
        if group.len() <= cfg.max_group.min(64) {
            if let Some(blocks) = exact_blocks(group, &cfg.synth) {
                return (blocks, false);
            }
        }
        (greedy_blocks(group, &cfg.synth), true)
    });

    let mut result = LearnResult::default();
    for ((shape, group), (blocks, greedy)) in groups.into_iter().zip(solved) {
        if greedy {
            result.greedy_groups.push(shape);
        }
        let mut covered = vec![false; group.len()];
        for (rule, members) in blocks {
            let id = result.rules.len();
            let examples: Vec<Example> = members.iter().map(|&i| group[i].clone()).collect();
            for &i in &members {
                covered[i] = true;
                result.assignment.insert(group[i].clone(), id);
            }
            result.rules.push(LearnedRule {
                shape,
                rule,
                examples,
            });
        }
        result.unexplained.extend(
            group
                .into_iter()
                .zip(covered)
                .filter(|(_, c)| !c)
                .map(|(e, _)| e),
        );
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    /// Restricted growth strings by brute force: all label vectors, kept when
    /// labels appear in order of first use.
    fn brute_partitions(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let total = n.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let labels: Vec<usize> = (0..n)
                .map(|_| {
                    let d = c % n;
                    c /= n;
                    d
                })
                .collect();
            let mut next = 0;
            let ok = labels.iter().all(|&l| {
                if l == next {
                    next += 1;
                    true
                } else {
                    l < next
                }
            });
            if ok {
                out.push(labels);
            }
        }
        out
    }

    fn labels(partition: &[Vec<usize>], n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for (b, block) in partition.iter().enumerate() {
            for &i in block {
                out[i] = b;
            }
        }
        out
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate().skip(1) {
            assert_eq!(enumerate_partitions(n).count(), b, "n = {n}");
        }
        assert_eq!(enumerate_partitions(0).count(), 0);
    }

    #[test]
    fn order_matches_brute_force() {
        for n in 1..=6 {
            let mut expected = brute_partitions(n);
            let blocks = |l: &Vec<usize>| l.iter().max().unwrap() + 1;
            expected.sort_by(|a, b| blocks(a).cmp(&blocks(b)).then(a.cmp(b)));
            let got: Vec<Vec<usize>> = enumerate_partitions(n).map(|p| labels(&p, n)).collect();
            assert_eq!(got, expected, "n = {n}");
        }
    }

    #[test]
    fn three_elements() {
        let all: Vec<_> = enumerate_partitions(3).collect();
        assert_eq!(all.len(), 5);
        assert_eq!(all[0], vec![vec![0, 1, 2]]);
        assert_eq!(all[4], vec![vec![0], vec![1], vec![2]]);
        assert_eq!(
            enumerate_partitions(1).collect::<Vec<_>>(),
            vec![vec![vec![0]]]
        );
    }

    #[test]
    fn shape_groups_of_mixed_corpus() {
        let es = samples::mixed_corpus();
        let groups = group_by_shape(&es);
        assert_eq!(groups.len(), 2);
        let small = &groups[&Shape {
            cmd: 2,
            err: 8,
            fix: 2,
        }];
        let large = &groups[&Shape {
            cmd: 3,
            err: 8,
            fix: 6,
        }];
        assert_eq!(small.len(), 4);
        assert_eq!(large.len(), 2);
        assert!(group_by_shape(&[]).is_empty());
        assert_eq!(group_by_shape(&es[..1]).len(), 1);
    }

    #[test]
    fn identical_examples_share_one_rule() {
        let e = samples::run_meta().remove(0);
        let result = learn_rules(&[e.clone(), e.clone()], &LearnConfig::default());
        assert_eq!(result.rules.len(), 1);
        assert_eq!(result.assignment.len(), 1);
        assert!(result.unexplained.is_empty());
    }

    #[test]
    fn greedy_fallback_is_flagged() {
        let es = samples::mixed_corpus();
        let cfg = LearnConfig {
            max_group: 1,
            ..Default::default()
        };
        let result = learn_rules(&es, &cfg);
        assert_eq!(result.greedy_groups.len(), 2);
        assert_eq!(result.assignment.len(), 6);
        for (e, &id) in &result.assignment {
            let rule = &result.rules[id].rule;
            assert_eq!(
                crate::synthesis::apply_symbolic(rule, &e.cmd, &e.err).as_ref(),
                Some(&e.fix)
            );
        }
    }
}
