use std::collections::{BTreeMap, BTreeSet};

use crate::dsl::{PosExpr, SubLr};

use super::enumerate::IndexedStr;

/// Left and right position expressions of one substring extraction.
pub type PosPair = (PosExpr, PosExpr);

/// Variable and constant wrapping shared by a group of substring expressions.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandKey {
    pub var: usize,
    pub prefix: String,
    pub suffix: String,
}

/// Succinct set of substring expressions for one fix position.
///
/// `entries[(j, l, r)]` holds every position pair `(pL, pR)` such that
/// `SubLr(pL, pR, l, r, var j)` reproduces the output token of every
/// processed example. `bindings[n]` is the output token of example `n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateSet {
    pub(crate) entries: BTreeMap<CandKey, BTreeSet<PosPair>>,
    pub(crate) bindings: Vec<String>,
}

impl CandidateSet {
    pub fn new(entries: BTreeMap<CandKey, BTreeSet<PosPair>>, bindings: Vec<String>) -> Self {
        let mut set = CandidateSet { entries, bindings };
        set.entries.retain(|_, pairs| !pairs.is_empty());
        set
    }

    /// Number of substring expressions represented.
    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<CandKey, BTreeSet<PosPair>> {
        &self.entries
    }

    pub fn bindings(&self) -> &[String] {
        &self.bindings
    }

    pub fn get(&self, key: &CandKey) -> Option<&BTreeSet<PosPair>> {
        self.entries.get(key)
    }

    /// Variables used by at least one candidate.
    pub fn vars(&self) -> BTreeSet<usize> {
        self.entries.keys().map(|k| k.var).collect()
    }

    /// Flattened expressions, in key order.
    pub fn iter(&self) -> impl Iterator<Item = SubLr> + '_ {
        self.entries.iter().flat_map(|(key, pairs)| {
            pairs.iter().map(move |&(left, right)| SubLr {
                left,
                right,
                prefix: key.prefix.clone(),
                suffix: key.suffix.clone(),
                var: key.var,
            })
        })
    }

    pub fn contains(&self, sub: &SubLr) -> bool {
        let key = CandKey {
            var: sub.var,
            prefix: sub.prefix.clone(),
            suffix: sub.suffix.clone(),
        };
        self.entries
            .get(&key)
            .is_some_and(|pairs| pairs.contains(&(sub.left, sub.right)))
    }

    /// Adds every candidate of `other`; bindings are left untouched.
    pub(crate) fn merge(&mut self, other: CandidateSet) {
        for (key, pairs) in other.entries {
            self.entries.entry(key).or_default().extend(pairs);
        }
    }

    /// Keeps only candidates that map `input(var)` to `output`.
    pub(crate) fn retain_consistent<'a>(&mut self, input: impl Fn(usize) -> &'a str, output: &str) {
        let out: Vec<char> = output.chars().collect();
        self.entries.retain(|key, pairs| {
            let Some(middle) = strip_affixes(&out, &key.prefix, &key.suffix) else {
                return false;
            };
            let bound = IndexedStr::new(input(key.var));
            pairs.retain(|(l, r)| bound.extract(l, r) == Some(middle));
            !pairs.is_empty()
        });
    }
}

/// `out` with `prefix` and `suffix` removed, if it has both and they do not
/// overlap.
pub(crate) fn strip_affixes<'a>(out: &'a [char], prefix: &str, suffix: &str) -> Option<&'a [char]> {
    let p: Vec<char> = prefix.chars().collect();
    let s: Vec<char> = suffix.chars().collect();
    if p.len() + s.len() > out.len() || !out.starts_with(&p) || !out.ends_with(&s) {
        return None;
    }
    Some(&out[p.len()..out.len() - s.len()])
}
