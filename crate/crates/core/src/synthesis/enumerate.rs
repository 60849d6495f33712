//! Enumeration of every substring expression consistent with one example.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::dsl::{Dir, PosExpr};

use super::candidates::{CandKey, CandidateSet, PosPair};
use super::{Example, SynthConfig};

/// A string split into characters with per-character occurrence tables.
pub(crate) struct IndexedStr {
    chars: Vec<char>,
    occurrences: HashMap<char, Vec<usize>>,
    /// For each position `p`: rank of `chars[p]` among its occurrences.
    rank: Vec<usize>,
}

impl IndexedStr {
    pub(crate) fn new(s: &str) -> Self {
        let chars: Vec<char> = s.chars().collect();
        let mut occurrences: HashMap<char, Vec<usize>> = HashMap::new();
        let mut rank = Vec::with_capacity(chars.len());
        for (p, &c) in chars.iter().enumerate() {
            let occ = occurrences.entry(c).or_default();
            rank.push(occ.len());
            occ.push(p);
        }
        IndexedStr {
            chars,
            occurrences,
            rank,
        }
    }

    pub(crate) fn eval(&self, p: &PosExpr, dir: Dir) -> Option<usize> {
        let len = self.chars.len() as i64;
        let idx = match *p {
            PosExpr::Ipos(k) if k > 0 => k,
            PosExpr::Ipos(k) if k < 0 => len + k,
            PosExpr::Ipos(_) => match dir {
                Dir::L => 0,
                Dir::R => len,
            },
            PosExpr::Cpos { c, k, delta } => {
                let occ = self.occurrences.get(&c)?;
                let n = occ.len() as i64;
                let at = if k > 0 && n >= k {
                    occ[(k - 1) as usize]
                } else if k < 0 && n + k >= 0 {
                    occ[(n + k) as usize]
                } else {
                    return None;
                };
                at as i64 + delta
            }
        };
        usize::try_from(idx).ok()
    }

    pub(crate) fn extract(&self, left: &PosExpr, right: &PosExpr) -> Option<&[char]> {
        let from = self.eval(left, Dir::L)?;
        let to = self.eval(right, Dir::R)?;
        (from <= to && to <= self.chars.len()).then(|| &self.chars[from..to])
    }

    /// Every position expression that evaluates to `k` on this string.
    pub(crate) fn encodings(&self, k: usize, dir: Dir, max_offset: u32) -> Vec<PosExpr> {
        let n = self.chars.len();
        let mut out = Vec::new();
        if (dir == Dir::L && k == 0) || (dir == Dir::R && k == n) {
            out.push(PosExpr::Ipos(0));
        }
        if k > 0 {
            out.push(PosExpr::Ipos(k as i64));
        }
        if k < n {
            out.push(PosExpr::Ipos(k as i64 - n as i64));
        }
        let max_offset = i64::from(max_offset);
        for delta in -max_offset..=max_offset {
            let p = k as i64 - delta;
            if p < 0 || p >= n as i64 {
                continue;
            }
            let p = p as usize;
            let c = self.chars[p];
            let total = self.occurrences[&c].len() as i64;
            let rank = self.rank[p] as i64;
            out.push(PosExpr::Cpos {
                c,
                k: rank + 1,
                delta,
            });
            out.push(PosExpr::Cpos {
                c,
                k: rank - total,
                delta,
            });
        }
        out
    }

    /// Start positions of every occurrence of `needle`.
    fn find_all(&self, needle: &[char]) -> Vec<usize> {
        if needle.len() > self.chars.len() {
            return Vec::new();
        }
        (0..=self.chars.len() - needle.len())
            .filter(|&k| &self.chars[k..k + needle.len()] == needle)
            .collect()
    }
}

/// Lengths of the longest prefix and suffix shared by all `outputs`.
pub(crate) fn common_affix_lens<'a>(mut outputs: impl Iterator<Item = &'a str>) -> (usize, usize) {
    let Some(first) = outputs.next() else {
        return (0, 0);
    };
    let first: Vec<char> = first.chars().collect();
    let (mut pre, mut suf) = (first.len(), first.len());
    for o in outputs {
        let o: Vec<char> = o.chars().collect();
        pre = pre.min(first.iter().zip(&o).take_while(|(a, b)| a == b).count());
        suf = suf.min(
            first
                .iter()
                .rev()
                .zip(o.iter().rev())
                .take_while(|(a, b)| a == b)
                .count(),
        );
    }
    (pre, suf)
}

/// Substring expressions over `vars` producing `e.fix[i]` on `e`, with
/// constant prefix of at most `max_prefix` and suffix of at most
/// `max_suffix` characters.
pub(crate) fn enumerate(
    e: &Example,
    vars: &BTreeSet<usize>,
    i: usize,
    cfg: &SynthConfig,
    max_prefix: usize,
    max_suffix: usize,
) -> BTreeMap<CandKey, BTreeSet<PosPair>> {
    let target: Vec<char> = e.fix[i].as_str().chars().collect();
    let t = target.len();
    let mut entries: BTreeMap<CandKey, BTreeSet<PosPair>> = BTreeMap::new();
    for &var in vars {
        let Some(bound) = e.input(var) else { continue };
        let bound = IndexedStr::new(bound);
        let mut left_cache: HashMap<usize, Vec<PosExpr>> = HashMap::new();
        let mut right_cache: HashMap<usize, Vec<PosExpr>> = HashMap::new();
        for a in 0..=max_prefix.min(t) {
            for b in a.max(t.saturating_sub(max_suffix))..=t {
                let middle = &target[a..b];
                let starts = bound.find_all(middle);
                if starts.is_empty() {
                    continue;
                }
                let key = CandKey {
                    var,
                    prefix: target[..a].iter().collect(),
                    suffix: target[b..].iter().collect(),
                };
                let pairs = entries.entry(key).or_default();
                for k1 in starts {
                    let k2 = k1 + middle.len();
                    let lefts = left_cache
                        .entry(k1)
                        .or_insert_with(|| bound.encodings(k1, Dir::L, cfg.max_offset));
                    let rights = right_cache
                        .entry(k2)
                        .or_insert_with(|| bound.encodings(k2, Dir::R, cfg.max_offset));
                    for &l in lefts.iter() {
                        for &r in rights.iter() {
                            pairs.insert((l, r));
                        }
                    }
                }
            }
        }
    }
    entries
}

/// All substring expressions over `vars` that reproduce `e.fix[i]` on `e`.
pub fn all_substrings(
    e: &Example,
    vars: &BTreeSet<usize>,
    i: usize,
    cfg: &SynthConfig,
) -> CandidateSet {
    let t = e.fix[i].as_str().chars().count();
    let entries = enumerate(e, vars, i, cfg, t, t);
    CandidateSet::new(entries, vec![e.fix[i].as_str().to_owned()])
}

/// All substring expressions over `vars` consistent with every example at
/// fix position `i`.
///
/// Candidates are enumerated on the first example and filtered on the rest.
/// Constant prefixes and suffixes are limited to the ones shared by every
/// output token, which loses nothing: a constant that is not a prefix of some
/// output can never reproduce it.
pub fn synth_substrings(
    es: &[Example],
    vars: &BTreeSet<usize>,
    i: usize,
    cfg: &SynthConfig,
) -> CandidateSet {
    let Some((first, rest)) = es.split_first() else {
        return CandidateSet::default();
    };
    let (max_prefix, max_suffix) = common_affix_lens(es.iter().map(|e| e.fix[i].as_str()));
    let entries = enumerate(first, vars, i, cfg, max_prefix, max_suffix);
    let bindings = es.iter().map(|e| e.fix[i].as_str().to_owned()).collect();
    let mut set = CandidateSet::new(entries, bindings);
    for e in rest {
        if set.is_empty() {
            break;
        }
        set.retain_consistent(|j| e.input(j).unwrap_or(""), e.fix[i].as_str());
    }
    set
}
