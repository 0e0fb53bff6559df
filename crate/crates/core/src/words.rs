//! Reduced words in a finitely generated free group.
//!
//! A word is stored as a sequence of syllables (generator index, nonzero
//! exponent) with adjacent syllables on distinct generators; the empty
//! sequence is the identity. Generator indices start at 1 and may be sparse,
//! so the same type serves F_k for any k as well as countable rank.

use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Default cap on enumeration and scan sizes.
pub const DEFAULT_CAP: u64 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("word is not reduced at column {col}: adjacent syllables share generator x{gen}")]
    NotReduced { col: usize, gen: u32 },
    #[error("generator index {gen} outside the rank {rank} alphabet")]
    GeneratorOutOfRange { gen: u32, rank: u32 },
    #[error("requested size {size} exceeds the cap {cap}")]
    Resource { size: u64, cap: u64 },
    #[error("count overflow: 2k(2k-1)^(n-1) does not fit in u128 for k={k}, n={n}")]
    CountOverflow { k: u32, n: u64 },
    #[error("{0}")]
    Invalid(String),
}

/// One maximal run of a single generator: x_gen^exp with exp != 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub gen: u32,
    pub exp: i64,
}

/// A reduced word; `Default` is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ReducedWord {
    syllables: Vec<Syllable>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord::default()
    }

    /// Single generator x_k.
    pub fn generator(gen: u32) -> Self {
        ReducedWord { syllables: vec![Syllable { gen, exp: 1 }] }
    }

    /// Builds from syllables, validating reducedness (nonzero exponents,
    /// adjacent generators distinct, indices >= 1).
    pub fn from_syllables(syllables: Vec<Syllable>) -> Result<Self, WordError> {
        for (i, s) in syllables.iter().enumerate() {
            if s.gen == 0 {
                return Err(WordError::Invalid("generator indices start at 1".into()));
            }
            if s.exp == 0 {
                return Err(WordError::Invalid(format!("syllable {i} has zero exponent")));
            }
            if i > 0 && syllables[i - 1].gen == s.gen {
                return Err(WordError::Invalid(format!(
                    "syllables {} and {} share generator x{}",
                    i - 1,
                    i,
                    s.gen
                )));
            }
        }
        Ok(ReducedWord { syllables })
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Word length |w|: total number of letters.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|s| s.exp.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    /// Largest generator index used; 0 for the identity.
    pub fn max_generator(&self) -> u32 {
        self.syllables.iter().map(|s| s.gen).max().unwrap_or(0)
    }

    fn push_syllable(&mut self, gen: u32, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.gen == gen {
                last.exp += exp;
                if last.exp == 0 {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable { gen, exp });
    }

    /// Concatenation followed by free reduction at the seam.
    pub fn concat(&self, other: &ReducedWord) -> ReducedWord {
        let mut out = self.clone();
        for s in &other.syllables {
            out.push_syllable(s.gen, s.exp);
        }
        out
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable { gen: s.gen, exp: -s.exp })
                .collect(),
        }
    }

    /// Letters of the word in order: (gen, +1) or (gen, -1).
    pub fn letters(&self) -> Vec<(u32, i8)> {
        let mut out = Vec::with_capacity(self.len() as usize);
        for s in &self.syllables {
            let sign: i8 = if s.exp > 0 { 1 } else { -1 };
            for _ in 0..s.exp.unsigned_abs() {
                out.push((s.gen, sign));
            }
        }
        out
    }

    /// Parses the text form: `e`, or syllables `x<k>` / `x<k>^<m>` joined by `.`,
    /// for example `x1.x2^-1.x1^3`. Unreduced input (adjacent syllables on the
    /// same generator) is rejected unless `auto_reduce` is set.
    pub fn parse(text: &str, auto_reduce: bool) -> Result<Self, WordError> {
        let t = text.trim();
        if t.is_empty() {
            return Err(WordError::Parse { col: 1, msg: "empty word text (identity is `e`)".into() });
        }
        if t == "e" {
            return Ok(ReducedWord::identity());
        }
        let base = text.len() - text.trim_start().len(); // offset of t within text
        let mut raw: Vec<(Syllable, usize)> = Vec::new(); // syllable, 1-based column
        for piece in SplitWithPos::new(t, '.') {
            let (chunk, off) = piece;
            let col = base + off + 1;
            if chunk.is_empty() {
                return Err(WordError::Parse { col, msg: "empty syllable".into() });
            }
            if !chunk.starts_with('x') {
                return Err(WordError::Parse {
                    col,
                    msg: format!("expected `x<k>` or `x<k>^<m>`, found `{chunk}`"),
                });
            }
            let body = &chunk[1..];
            let (gen_str, exp_str) = match body.find('^') {
                Some(i) => (&body[..i], Some(&body[i + 1..])),
                None => (body, None),
            };
            let gen: u32 = gen_str.parse().map_err(|_| WordError::Parse {
                col: col + 1,
                msg: format!("invalid generator index `{gen_str}`"),
            })?;
            if gen == 0 {
                return Err(WordError::Parse { col: col + 1, msg: "generator indices start at 1".into() });
            }
            let exp: i64 = match exp_str {
                None => 1,
                Some(es) => es.parse().map_err(|_| WordError::Parse {
                    col: col + 1 + gen_str.len() + 1,
                    msg: format!("invalid exponent `{es}`"),
                })?,
            };
            if exp == 0 {
                return Err(WordError::Parse {
                    col: col + 1 + gen_str.len() + 1,
                    msg: "zero exponent".into(),
                });
            }
            raw.push((Syllable { gen, exp }, col));
        }
        // seam check
        for i in 1..raw.len() {
            if raw[i].0.gen == raw[i - 1].0.gen && !auto_reduce {
                return Err(WordError::NotReduced { col: raw[i].1, gen: raw[i].0.gen });
            }
        }
        let mut w = ReducedWord::identity();
        for (s, _) in raw {
            w.push_syllable(s.gen, s.exp);
        }
        Ok(w)
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        let mut first = true;
        for s in &self.syllables {
            if !first {
                write!(f, ".")?;
            }
            first = false;
            if s.exp == 1 {
                write!(f, "x{}", s.gen)?;
            } else {
                write!(f, "x{}^{}", s.gen, s.exp)?;
            }
        }
        Ok(())
    }
}

/// Splits on a separator, yielding (piece, byte offset of piece start).
struct SplitWithPos<'a> {
    rest: Option<&'a str>,
    sep: char,
    pos: usize,
}

impl<'a> SplitWithPos<'a> {
    fn new(s: &'a str, sep: char) -> Self {
        SplitWithPos { rest: Some(s), sep, pos: 0 }
    }
}

impl<'a> Iterator for SplitWithPos<'a> {
    type Item = (&'a str, usize);
    fn next(&mut self) -> Option<Self::Item> {
        let rest = self.rest?;
        match rest.find(self.sep) {
            Some(i) => {
                let piece = &rest[..i];
                let at = self.pos;
                self.pos += i + self.sep.len_utf8();
                self.rest = Some(&rest[i + self.sep.len_utf8()..]);
                Some((piece, at))
            }
            None => {
                self.rest = None;
                Some((rest, self.pos))
            }
        }
    }
}

/// A set of generators {x_k : k in indices}; when `symmetric` is set the set
/// is understood to contain the inverse letters as well.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    indices: BTreeSet<u32>,
    pub symmetric: bool,
}

impl GeneratorSet {
    pub fn new(indices: impl IntoIterator<Item = u32>, symmetric: bool) -> Result<Self, WordError> {
        let indices: BTreeSet<u32> = indices.into_iter().collect();
        if indices.contains(&0) {
            return Err(WordError::Invalid("generator indices start at 1".into()));
        }
        if indices.is_empty() {
            return Err(WordError::Invalid("empty generator set".into()));
        }
        Ok(GeneratorSet { indices, symmetric })
    }

    pub fn indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.indices.iter().copied()
    }

    pub fn max_index(&self) -> u32 {
        *self.indices.iter().next_back().unwrap()
    }

    /// Membership of a word in S union S^{-1} (single letters on the listed
    /// generators, either sign).
    pub fn contains_symmetrized(&self, w: &ReducedWord) -> bool {
        match w.syllables() {
            [s] => s.exp.abs() == 1 && self.indices.contains(&s.gen),
            _ => false,
        }
    }
}

/// Number of reduced words of length exactly n in F_k: 2k(2k-1)^(n-1), and 1
/// for n = 0. Errors on u128 overflow.
pub fn count_words(k: u32, n: u64) -> Result<u128, WordError> {
    if k == 0 {
        return Err(WordError::Invalid("rank k must be at least 1".into()));
    }
    if n == 0 {
        return Ok(1);
    }
    let base = 2u128 * k as u128 - 1;
    let mut acc: u128 = 2 * k as u128;
    for _ in 1..n {
        acc = acc.checked_mul(base).ok_or(WordError::CountOverflow { k, n })?;
    }
    Ok(acc)
}

/// All reduced words of length exactly n over x_1..x_k, in lexicographic
/// order on letter sequences with letter order x1, x1^-1, x2, x2^-1, ...
pub fn enumerate_words(k: u32, n: u64, cap: u64) -> Result<Vec<ReducedWord>, WordError> {
    if k == 0 {
        return Err(WordError::Invalid("rank k must be at least 1".into()));
    }
    let total = count_words(k, n)?;
    if total > cap as u128 {
        return Err(WordError::Resource { size: total.min(u64::MAX as u128) as u64, cap });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut current = ReducedWord::identity();
    // letters in order: (1,+1),(1,-1),(2,+1),(2,-1),...
    fn extend(k: u32, remaining: u64, current: &mut ReducedWord, out: &mut Vec<ReducedWord>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        let last = current.syllables().last().copied();
        for gen in 1..=k {
            for sign in [1i64, -1] {
                if let Some(s) = last {
                    // appending the inverse letter of the trailing one would cancel
                    let trailing_sign = if s.exp > 0 { 1 } else { -1 };
                    if s.gen == gen && trailing_sign != sign {
                        continue;
                    }
                }
                let before = current.clone();
                current.push_syllable(gen, sign);
                extend(k, remaining - 1, current, out);
                *current = before;
            }
        }
    }
    extend(k, n, &mut current, &mut out);
    debug_assert_eq!(out.len() as u128, total);
    Ok(out)
}

/// All reduced words of length at most n, by length then lexicographic.
pub fn enumerate_words_up_to(k: u32, n: u64, cap: u64) -> Result<Vec<ReducedWord>, WordError> {
    let mut total: u128 = 0;
    for m in 0..=n {
        total += count_words(k, m)?;
    }
    if total > cap as u128 {
        return Err(WordError::Resource { size: total.min(u64::MAX as u128) as u64, cap });
    }
    let mut out = Vec::with_capacity(total as usize);
    for m in 0..=n {
        out.extend(enumerate_words(k, m, cap)?);
    }
    Ok(out)
}

/// Outcome of the cyclic coset scan: the largest number of powers of a single
/// cyclic subgroup coset that land in S union S^{-1}, with a witness.
#[derive(Debug, Clone, PartialEq)]
pub struct CosetScanReport {
    pub max_hits: u64,
    pub witness_g: ReducedWord,
    pub witness_w: ReducedWord,
    pub witness_powers: Vec<u64>,
    pub pairs_scanned: u64,
}

/// For every pair (g, w) of reduced words over x_1..x_max(S) with |g| <= max_len,
/// 1 <= |w| <= max_len, counts |{ n in [1, powers] : g w^n in S union S^{-1} }|
/// and reports the maximum with a maximizing pair.
pub fn cyclic_coset_scan(
    s: &GeneratorSet,
    max_len: u64,
    powers: u64,
    cap: u64,
) -> Result<CosetScanReport, WordError> {
    if powers == 0 {
        return Err(WordError::Invalid("power range must be nonempty".into()));
    }
    let k = s.max_index();
    let gs = enumerate_words_up_to(k, max_len, cap)?;
    let mut ws = gs.clone();
    ws.retain(|w| !w.is_identity());
    let size = (gs.len() as u64)
        .checked_mul(ws.len() as u64)
        .and_then(|x| x.checked_mul(powers))
        .ok_or(WordError::Resource { size: u64::MAX, cap })?;
    if size > cap {
        return Err(WordError::Resource { size, cap });
    }

    let mut best: Option<CosetScanReport> = None;
    for g in &gs {
        for w in &ws {
            let mut hits: Vec<u64> = Vec::new();
            let mut cur = g.clone();
            for n in 1..=powers {
                cur = cur.concat(w);
                if s.contains_symmetrized(&cur) {
                    hits.push(n);
                }
            }
            let count = hits.len() as u64;
            if best.as_ref().map_or(true, |b| count > b.max_hits) {
                best = Some(CosetScanReport {
                    max_hits: count,
                    witness_g: g.clone(),
                    witness_w: w.clone(),
                    witness_powers: hits,
                    pairs_scanned: 0,
                });
            }
        }
    }
    let mut report = best.expect("scan ranges are nonempty");
    report.pairs_scanned = gs.len() as u64 * ws.len() as u64;
    Ok(report)
}
