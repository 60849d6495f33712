//! On-disk rule store and the suggestion engine.
//!
//! The store is a schema-versioned JSON document:
//!
//! ```json
//! {"version": 1, "rules": [{"cmd": [...], "created_at": "...", "err": [...],
//!   "examples": 2, "fix": [...], "id": "...", "provenance": [...]}]}
//! ```
//!
//! Match components are `{"t":"str","s":..}` or
//! `{"t":"var","i":..,"l":..,"r":..,"bindings":[..]}`; fix components are
//! `{"t":"fstr","s":..}` or `{"t":"cands","bindings":[..],"entries":[..]}`
//! with entries `{"var":j,"l":..,"r":..,"pairs":[[pos,pos],..]}`; positions are
//! `{"t":"ipos","k":..}` or `{"t":"cpos","c":..,"k":..,"d":..}`. Object keys,
//! entries and pairs are written in sorted order.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, SubsecRound, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dsl::{PosExpr, Token, TokenSeq};
use crate::error::{Error, Result};
use crate::partition::LearnResult;
use crate::synthesis::{
    apply_symbolic, CandKey, CandidateSet, Example, SymFix, SymMatch, SymbolicRule,
};

pub const STORE_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(tag = "t")]
enum PosJson {
    #[serde(rename = "cpos")]
    Cpos { c: char, d: i64, k: i64 },
    #[serde(rename = "ipos")]
    Ipos { k: i64 },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "t")]
enum MatchJson {
    #[serde(rename = "str")]
    Str { s: String },
    #[serde(rename = "var")]
    Var {
        bindings: Vec<String>,
        i: usize,
        l: String,
        r: String,
    },
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    l: String,
    pairs: Vec<(PosJson, PosJson)>,
    r: String,
    var: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "t")]
enum FixJson {
    #[serde(rename = "cands")]
    Cands {
        bindings: Vec<String>,
        entries: Vec<EntryJson>,
    },
    #[serde(rename = "fstr")]
    Fstr { s: String },
}

/// Rule content; what the id is computed from.
#[derive(Serialize, Deserialize)]
struct RuleBody {
    cmd: Vec<MatchJson>,
    err: Vec<MatchJson>,
    examples: usize,
    fix: Vec<FixJson>,
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    cmd: Vec<MatchJson>,
    created_at: DateTime<Utc>,
    err: Vec<MatchJson>,
    examples: usize,
    fix: Vec<FixJson>,
    id: String,
    provenance: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct StoreJson {
    rules: Vec<RuleJson>,
    version: u64,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: u64,
}

fn pos_to_json(p: &PosExpr) -> PosJson {
    match *p {
        PosExpr::Ipos(k) => PosJson::Ipos { k },
        PosExpr::Cpos { c, k, delta } => PosJson::Cpos { c, d: delta, k },
    }
}

fn pos_from_json(p: &PosJson) -> Result<PosExpr> {
    match *p {
        PosJson::Ipos { k } => Ok(PosExpr::Ipos(k)),
        PosJson::Cpos { k: 0, .. } => Err(Error::InvalidRule("Cpos occurrence index 0".into())),
        PosJson::Cpos { c, d, k } => Ok(PosExpr::Cpos { c, k, delta: d }),
    }
}

fn matches_to_json(ms: &[SymMatch]) -> Vec<MatchJson> {
    ms.iter()
        .map(|m| match m {
            SymMatch::Fixed(s) => MatchJson::Str { s: s.clone() },
            SymMatch::Var {
                index,
                prefix,
                suffix,
                bindings,
            } => MatchJson::Var {
                bindings: bindings.clone(),
                i: *index,
                l: prefix.clone(),
                r: suffix.clone(),
            },
        })
        .collect()
}

fn body(rule: &SymbolicRule) -> RuleBody {
    let fix = rule
        .fix()
        .iter()
        .map(|f| match f {
            SymFix::Fixed(s) => FixJson::Fstr { s: s.clone() },
            SymFix::Candidates(cs) => FixJson::Cands {
                bindings: cs.bindings().to_vec(),
                entries: cs
                    .entries()
                    .iter()
                    .map(|(key, pairs)| EntryJson {
                        l: key.prefix.clone(),
                        pairs: pairs
                            .iter()
                            .map(|(a, b)| (pos_to_json(a), pos_to_json(b)))
                            .collect(),
                        r: key.suffix.clone(),
                        var: key.var,
                    })
                    .collect(),
            },
        })
        .collect();
    RuleBody {
        cmd: matches_to_json(rule.cmd()),
        err: matches_to_json(rule.err()),
        examples: rule.example_count(),
        fix,
    }
}

fn check_token(s: &str) -> Result<()> {
    Token::new(s).map(|_| ())
}

fn matches_from_json(ms: Vec<MatchJson>, offset: usize, count: usize) -> Result<Vec<SymMatch>> {
    ms.into_iter()
        .enumerate()
        .map(|(pos, m)| match m {
            MatchJson::Str { s } => {
                check_token(&s)?;
                Ok(SymMatch::Fixed(s))
            }
            MatchJson::Var { bindings, i, l, r } => {
                if i != offset + pos {
                    return Err(Error::InvalidRule(format!(
                        "variable {i} stored at position {}",
                        offset + pos
                    )));
                }
                if bindings.len() != count {
                    return Err(Error::InvalidRule(format!(
                        "variable {i} has {} bindings",
                        bindings.len()
                    )));
                }
                bindings.iter().try_for_each(|b| check_token(b))?;
                Ok(SymMatch::Var {
                    index: i,
                    prefix: l,
                    suffix: r,
                    bindings,
                })
            }
        })
        .collect()
}

fn rule_from_body(body: RuleBody) -> Result<SymbolicRule> {
    let count = body.examples;
    if count == 0 {
        return Err(Error::InvalidRule("rule built from zero examples".into()));
    }
    let offset = body.cmd.len();
    let cmd = matches_from_json(body.cmd, 0, count)?;
    let err = matches_from_json(body.err, offset, count)?;
    if cmd.is_empty() || body.fix.is_empty() {
        return Err(Error::InvalidRule("empty command or fix".into()));
    }
    let n_in = cmd.len() + err.len();
    let fix = body
        .fix
        .into_iter()
        .map(|f| match f {
            FixJson::Fstr { s } => {
                check_token(&s)?;
                Ok(SymFix::Fixed(s))
            }
            FixJson::Cands { bindings, entries } => {
                if bindings.len() != count {
                    return Err(Error::InvalidRule(format!(
                        "candidate set has {} bindings",
                        bindings.len()
                    )));
                }
                bindings.iter().try_for_each(|b| check_token(b))?;
                let mut map: BTreeMap<CandKey, BTreeSet<(PosExpr, PosExpr)>> = BTreeMap::new();
                for entry in entries {
                    if entry.var >= n_in {
                        return Err(Error::InvalidRule(format!(
                            "candidate uses unknown variable {}",
                            entry.var
                        )));
                    }
                    let pairs = entry
                        .pairs
                        .iter()
                        .map(|(a, b)| Ok((pos_from_json(a)?, pos_from_json(b)?)))
                        .collect::<Result<BTreeSet<_>>>()?;
                    map.entry(CandKey {
                        var: entry.var,
                        prefix: entry.l,
                        suffix: entry.r,
                    })
                    .or_default()
                    .extend(pairs);
                }
                let cs = CandidateSet::new(map, bindings);
                if cs.is_empty() {
                    return Err(Error::InvalidRule("empty candidate set".into()));
                }
                Ok(SymFix::Candidates(cs))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SymbolicRule::from_parts(cmd, err, fix, count))
}

fn short_hash(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    hex::encode(&digest[..8])
}

/// Serialization of the rule's canonical form, independent of the order its
/// examples were seen in.
pub fn canonical_json(rule: &SymbolicRule) -> String {
    serde_json::to_string(&body(&rule.canonical())).expect("rule bodies serialize")
}

/// Content hash of the rule's canonical form.
pub fn rule_id(rule: &SymbolicRule) -> String {
    short_hash(canonical_json(rule).as_bytes())
}

/// Content hash of one example.
pub fn example_fingerprint(e: &Example) -> String {
    let text = format!(
        "{}\u{1f}{}\u{1f}{}",
        e.cmd.join(),
        e.err.join(),
        e.fix.join()
    );
    short_hash(text.as_bytes())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoredRule {
    pub id: String,
    pub rule: SymbolicRule,
    pub provenance: Vec<String>,
    pub created_at: DateTime<Utc>,
}

/// One proposed fix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Suggestion {
    pub rule_id: String,
    pub fixed_command: TokenSeq,
    /// Number of constant match components of the rule.
    pub specificity: usize,
}

/// Learned rules, kept sorted by id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleStore {
    rules: Vec<StoredRule>,
}

impl RuleStore {
    pub fn new() -> Self {
        RuleStore::default()
    }

    pub fn rules(&self) -> &[StoredRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&StoredRule> {
        self.rules
            .binary_search_by(|r| r.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.rules[i])
    }

    /// Inserts `rule` unless a rule with the same content is present.
    /// Returns the rule id.
    pub fn insert(&mut self, rule: SymbolicRule, created_at: DateTime<Utc>) -> String {
        let id = rule_id(&rule);
        if let Err(at) = self.rules.binary_search_by(|r| r.id.cmp(&id)) {
            let mut provenance: Vec<String> =
                rule.examples().iter().map(example_fingerprint).collect();
            provenance.sort();
            self.rules.insert(
                at,
                StoredRule {
                    id: id.clone(),
                    rule,
                    provenance,
                    created_at: created_at.trunc_subsecs(0),
                },
            );
        }
        id
    }

    /// Adds every learned rule; returns how many were new.
    pub fn add_rules(&mut self, result: &LearnResult) -> usize {
        self.add_rules_at(result, Utc::now())
    }

    pub fn add_rules_at(&mut self, result: &LearnResult, created_at: DateTime<Utc>) -> usize {
        let before = self.rules.len();
        for learned in &result.rules {
            self.insert(learned.rule.clone(), created_at);
        }
        self.rules.len() - before
    }

    /// Every rule's fix for this input, without deduplication.
    pub fn matches<S: AsRef<str>, T: AsRef<str>>(&self, cmd: &[S], err: &[T]) -> Vec<Suggestion> {
        let shape = (cmd.len(), err.len());
        self.rules
            .iter()
            .filter(|r| {
                let (c, e, _) = r.rule.shape();
                (c, e) == shape
            })
            .filter_map(|r| {
                apply_symbolic(&r.rule, cmd, err).map(|fixed_command| Suggestion {
                    rule_id: r.id.clone(),
                    fixed_command,
                    specificity: r.rule.specificity(),
                })
            })
            .collect()
    }

    /// Distinct fixes, most specific rule first, ties by rule id.
    pub fn suggest<S: AsRef<str>, T: AsRef<str>>(&self, cmd: &[S], err: &[T]) -> Vec<Suggestion> {
        let mut all = self.matches(cmd, err);
        all.sort_by(|a, b| {
            b.specificity
                .cmp(&a.specificity)
                .then_with(|| a.rule_id.cmp(&b.rule_id))
        });
        let mut seen = BTreeSet::new();
        all.retain(|s| seen.insert(s.fixed_command.clone()));
        all
    }

    pub fn to_json(&self) -> String {
        let doc = StoreJson {
            rules: self
                .rules
                .iter()
                .map(|r| {
                    let b = body(&r.rule);
                    RuleJson {
                        cmd: b.cmd,
                        created_at: r.created_at,
                        err: b.err,
                        examples: b.examples,
                        fix: b.fix,
                        id: r.id.clone(),
                        provenance: r.provenance.clone(),
                    }
                })
                .collect(),
            version: STORE_VERSION,
        };
        serde_json::to_string_pretty(&doc).expect("store serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parse_err = |e: serde_json::Error| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        };
        let probe: VersionProbe = serde_json::from_str(text).map_err(parse_err)?;
        if probe.version != STORE_VERSION {
            return Err(Error::Version {
                found: probe.version,
                expected: STORE_VERSION,
            });
        }
        let doc: StoreJson = serde_json::from_str(text).map_err(parse_err)?;
        let mut rules = Vec::with_capacity(doc.rules.len());
        for r in doc.rules {
            let rule = rule_from_body(RuleBody {
                cmd: r.cmd,
                err: r.err,
                examples: r.examples,
                fix: r.fix,
            })?;
            rules.push(StoredRule {
                id: r.id,
                rule,
                provenance: r.provenance,
                created_at: r.created_at,
            });
        }
        rules.sort_by(|a, b| a.id.cmp(&b.id));
        if rules.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::InvalidRule("duplicate rule id".into()));
        }
        Ok(RuleStore { rules })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        RuleStore::from_json(&text)
    }

    /// Loads `path`, or returns an empty store if it does not exist.
    pub fn load_or_default(path: &Path) -> Result<Self> {
        if path.exists() {
            RuleStore::load(path)
        } else {
            Ok(RuleStore::new())
        }
    }

    /// Writes the store atomically: a temporary file in the same directory is
    /// renamed over `path`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let io_err = |source: std::io::Error| Error::Io {
            path: path.to_owned(),
            source,
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
        tmp.write_all(self.to_json().as_bytes()).map_err(io_err)?;
        tmp.write_all(b"\n").map_err(io_err)?;
        tmp.as_file().sync_all().map_err(io_err)?;
        tmp.persist(path).map_err(|e| io_err(e.error))?;
        Ok(())
    }
}
