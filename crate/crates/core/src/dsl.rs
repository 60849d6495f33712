//! Abstract syntax and evaluation semantics of the rule language.
//!
//! A rule matches a tokenized command and error message against two lists of
//! match expressions, binding variables to whole tokens, and then builds the
//! fixed command one token at a time from fix expressions. Every evaluation
//! function returns `None` for "undefined": a rule that does not apply is not
//! an error.
//!
//! All string positions are character positions, not byte offsets.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A non-empty string without whitespace.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Token(String);

impl Token {
    pub fn new(text: impl Into<String>) -> Result<Self, Error> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::InvalidToken(text));
        }
        if text.chars().any(char::is_whitespace) {
            return Err(Error::InvalidToken(text));
        }
        Ok(Token(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Token {
    type Error = Error;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Token::new(value)
    }
}

impl From<Token> for String {
    fn from(t: Token) -> String {
        t.0
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// An ordered list of tokens: a command, an error message or a fix.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TokenSeq(Vec<Token>);

impl TokenSeq {
    pub fn new(tokens: Vec<Token>) -> Self {
        TokenSeq(tokens)
    }

    /// Builds a sequence from string slices, rejecting empty or
    /// whitespace-containing items.
    pub fn from_strs<S: AsRef<str>>(items: &[S]) -> Result<Self, Error> {
        items
            .iter()
            .map(|s| Token::new(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(TokenSeq)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Token> {
        self.0
    }

    /// Tokens joined by single spaces.
    pub fn join(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(t.as_str());
        }
        out
    }
}

impl Deref for TokenSeq {
    type Target = [Token];

    fn deref(&self) -> &[Token] {
        &self.0
    }
}

impl FromIterator<Token> for TokenSeq {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        TokenSeq(iter.into_iter().collect())
    }
}

impl fmt::Display for TokenSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.join())
    }
}

/// Splits a raw line on maximal runs of whitespace.
pub fn tokenize(line: &str) -> TokenSeq {
    line.split_whitespace()
        .map(|s| Token(s.to_owned()))
        .collect()
}

/// Side of a substring a position expression is evaluated for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    L,
    R,
}

/// Index into the string bound to a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PosExpr {
    /// Absolute index; negative values count back from the end.
    Ipos(i64),
    /// Index of the `k`-th occurrence of `c` (from the end when `k < 0`),
    /// shifted by `delta`.
    Cpos { c: char, k: i64, delta: i64 },
}

impl fmt::Display for PosExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosExpr::Ipos(k) => write!(f, "Ipos({k})"),
            PosExpr::Cpos { c, k, delta } => write!(f, "Cpos({c},{k},{delta})"),
        }
    }
}

/// Per-token constraint on an input token.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchExpr {
    Str(String),
    VarMatch {
        index: usize,
        prefix: String,
        suffix: String,
    },
}

/// `prefix · substr(var, left, right) · suffix`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubLr {
    pub left: PosExpr,
    pub right: PosExpr,
    pub prefix: String,
    pub suffix: String,
    pub var: usize,
}

/// Generator of one output token.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FixExpr {
    Str(String),
    SubLr(SubLr),
}

/// `match cmd and err -> fix`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConcreteRule {
    pub cmd: Vec<MatchExpr>,
    pub err: Vec<MatchExpr>,
    pub fix: Vec<FixExpr>,
}

/// Partial map from variable index to the token it matched.
pub type Substitution = BTreeMap<usize, String>;

/// Every position `p` with `s[p] == c`, in increasing order.
pub fn indices(s: &str, c: char) -> Vec<usize> {
    s.chars()
        .enumerate()
        .filter_map(|(i, ch)| (ch == c).then_some(i))
        .collect()
}

pub fn eval_pos(p: &PosExpr, s: &str, dir: Dir) -> Option<usize> {
    let len = s.chars().count() as i64;
    let idx = match *p {
        PosExpr::Ipos(k) if k > 0 => k,
        PosExpr::Ipos(k) if k < 0 => len + k,
        PosExpr::Ipos(_) => match dir {
            Dir::L => 0,
            Dir::R => len,
        },
        PosExpr::Cpos { c, k, delta } => {
            let occ = indices(s, c);
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

/// Characters `[from, to)` of `s`.
pub fn substr(s: &str, from: usize, to: usize) -> Option<String> {
    if from > to || to > s.chars().count() {
        return None;
    }
    Some(s.chars().skip(from).take(to - from).collect())
}

/// True when `t = prefix · x · suffix` for some (possibly empty) `x`.
pub fn affixes_match(prefix: &str, suffix: &str, t: &str) -> bool {
    t.starts_with(prefix)
        && t.ends_with(suffix)
        && prefix.chars().count() + suffix.chars().count() <= t.chars().count()
}

pub fn match_expr(m: &MatchExpr, t: &str) -> Option<Substitution> {
    match m {
        MatchExpr::Str(s) => (s == t).then(Substitution::new),
        MatchExpr::VarMatch {
            index,
            prefix,
            suffix,
        } => affixes_match(prefix, suffix, t).then(|| {
            let mut sigma = Substitution::new();
            sigma.insert(*index, t.to_owned());
            sigma
        }),
    }
}

pub fn unify<S: AsRef<str>>(ms: &[MatchExpr], ts: &[S]) -> Option<Substitution> {
    if ms.len() != ts.len() {
        return None;
    }
    let mut sigma = Substitution::new();
    for (m, t) in ms.iter().zip(ts) {
        sigma.extend(match_expr(m, t.as_ref())?);
    }
    Some(sigma)
}

/// Evaluates a substring expression directly against the bound string.
pub fn eval_sub_lr(f: &SubLr, bound: &str) -> Option<String> {
    let from = eval_pos(&f.left, bound, Dir::L)?;
    let to = eval_pos(&f.right, bound, Dir::R)?;
    let mid = substr(bound, from, to)?;
    let out = format!("{}{}{}", f.prefix, mid, f.suffix);
    (!out.is_empty()).then_some(out)
}

pub fn eval_fix_expr(f: &FixExpr, sigma: &Substitution) -> Option<String> {
    match f {
        FixExpr::Str(s) => (!s.is_empty()).then(|| s.clone()),
        FixExpr::SubLr(sub) => eval_sub_lr(sub, sigma.get(&sub.var)?),
    }
}

pub fn eval_rule<S: AsRef<str>, T: AsRef<str>>(
    rule: &ConcreteRule,
    cmd: &[S],
    err: &[T],
) -> Option<TokenSeq> {
    let mut sigma = unify(&rule.cmd, cmd)?;
    sigma.extend(unify(&rule.err, err)?);
    rule.fix
        .iter()
        .map(|f| eval_fix_expr(f, &sigma).map(Token))
        .collect::<Option<Vec<_>>>()
        .map(TokenSeq)
}

impl ConcreteRule {
    /// Checks the index discipline: variable indices are concatenated token
    /// positions, unique, and every fix variable is bound by a match.
    pub fn is_well_formed(&self) -> bool {
        let offset = self.cmd.len();
        let mut bound = std::collections::BTreeSet::new();
        for (pos, m) in self.cmd.iter().chain(&self.err).enumerate() {
            if let MatchExpr::VarMatch { index, .. } = m {
                if *index != pos || !bound.insert(*index) {
                    return false;
                }
            }
        }
        debug_assert!(bound.iter().all(|&i| i < offset + self.err.len()));
        self.fix.iter().all(|f| match f {
            FixExpr::Str(s) => !s.is_empty(),
            FixExpr::SubLr(sub) => {
                bound.contains(&sub.var)
                    && !matches!(sub.left, PosExpr::Cpos { k: 0, .. })
                    && !matches!(sub.right, PosExpr::Cpos { k: 0, .. })
            }
        })
    }
}
