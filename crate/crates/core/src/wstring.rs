//! Strings over bytes plus a wildcard, and their wildcard-group structure.
//!
//! Solid characters are the byte values `0..=255`. The wildcard and the
//! substitution symbol `#` are out-of-band codes above that range, so `#`
//! can never collide with a text character.

use std::fmt;

use crate::error::{Error, Result};

/// A symbol: a byte value, [`WILDCARD`] or [`HASH`].
pub type Sym = u32;

/// The wildcard sentinel. Matches every symbol.
pub const WILDCARD: Sym = 256;
/// Replacement for wildcards in the solid view of a pattern. Matches nothing
/// in the text alphabet.
pub const HASH: Sym = 257;

pub const DEFAULT_WILDCARD_CHAR: u8 = b'?';

/// A closed interval `[start..=end]` of 1-based positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end + 1);
        Interval { start, end }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }

    #[inline]
    pub fn contains(&self, pos: usize) -> bool {
        self.start <= pos && pos <= self.end
    }
}

/// Handle of a string registered in a [`crate::pillar::PillarIndex`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrId(pub u32);

/// `parent[start..=end]`, 1-based and inclusive. Empty when `start == end + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fragment {
    pub src: StrId,
    pub start: usize,
    pub end: usize,
}

impl Fragment {
    pub fn new(src: StrId, start: usize, end: usize) -> Self {
        assert!(
            start >= 1 && start <= end + 1,
            "bad fragment bounds {start}..={end}"
        );
        Fragment { src, start, end }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }

    /// Sub-fragment `self[i..=j]` in positions relative to `self`.
    #[inline]
    pub fn sub(&self, i: usize, j: usize) -> Fragment {
        debug_assert!(
            i >= 1 && i <= j + 1 && j <= self.len(),
            "sub {i}..={j} of len {}",
            self.len()
        );
        Fragment {
            src: self.src,
            start: self.start + i - 1,
            end: self.start + j - 1,
        }
    }

    /// Suffix starting at relative position `i` (may be empty).
    #[inline]
    pub fn suffix(&self, i: usize) -> Fragment {
        self.sub(i, self.len())
    }

    /// Prefix of length `len`.
    #[inline]
    pub fn prefix(&self, len: usize) -> Fragment {
        self.sub(1, len)
    }
}

/// A solid string: bytes only, stored as symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SolidString {
    chars: Vec<Sym>,
}

impl SolidString {
    pub fn from_bytes(bytes: &[u8]) -> Self {
        SolidString {
            chars: bytes.iter().map(|&b| b as Sym).collect(),
        }
    }

    /// Wraps symbols that must all be solid (no [`WILDCARD`]).
    pub fn from_symbols(chars: Vec<Sym>) -> Self {
        assert!(
            chars.iter().all(|&c| c != WILDCARD),
            "solid string contains a wildcard"
        );
        SolidString { chars }
    }

    /// Parses a text file body, stripping one trailing newline.
    pub fn parse(bytes: &[u8]) -> Self {
        Self::from_bytes(strip_newline(bytes))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    #[inline]
    pub fn symbols(&self) -> &[Sym] {
        &self.chars
    }

    /// `self[pos]`, 1-based.
    #[inline]
    pub fn at(&self, pos: usize) -> Sym {
        self.chars[pos - 1]
    }

    /// 1-based inclusive slice; empty when `end < start`.
    #[inline]
    pub fn slice(&self, start: usize, end: usize) -> &[Sym] {
        if end < start {
            &[]
        } else {
            &self.chars[start - 1..end]
        }
    }

    /// Lossy byte view; `#` becomes `b'#'`.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.chars
            .iter()
            .map(|&c| if c == HASH { b'#' } else { c as u8 })
            .collect()
    }
}

/// A pattern over bytes and the wildcard.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WString {
    chars: Vec<Sym>,
    groups: Vec<Interval>,
    d_count: usize,
}

impl WString {
    /// Builds a pattern from symbols and derives its maximal wildcard runs.
    pub fn from_symbols(chars: Vec<Sym>) -> Self {
        assert!(
            chars.iter().all(|&c| c <= WILDCARD),
            "pattern contains reserved symbol"
        );
        let mut groups = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            if chars[i] == WILDCARD {
                let start = i;
                while i < chars.len() && chars[i] == WILDCARD {
                    i += 1;
                }
                groups.push(Interval::new(start + 1, i));
            } else {
                i += 1;
            }
        }
        let d_count = groups.iter().map(Interval::len).sum();
        WString {
            chars,
            groups,
            d_count,
        }
    }

    /// Parses raw bytes, treating `wildcard_char` as the wildcard. One
    /// trailing newline is stripped.
    pub fn parse(bytes: &[u8], wildcard_char: u8) -> Result<Self> {
        let body = strip_newline(bytes);
        if body.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let chars = body
            .iter()
            .map(|&b| {
                if b == wildcard_char {
                    WILDCARD
                } else {
                    b as Sym
                }
            })
            .collect();
        Ok(Self::from_symbols(chars))
    }

    /// Shorthand for tests and examples: `'?'` is the wildcard.
    pub fn from_str_wild(s: &str) -> Self {
        Self::parse(s.as_bytes(), DEFAULT_WILDCARD_CHAR).expect("non-empty pattern")
    }

    /// Inverse of [`WString::parse`] (without the stripped newline).
    pub fn to_bytes(&self, wildcard_char: u8) -> Vec<u8> {
        self.chars
            .iter()
            .map(|&c| {
                if c == WILDCARD {
                    wildcard_char
                } else {
                    c as u8
                }
            })
            .collect()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    #[inline]
    pub fn symbols(&self) -> &[Sym] {
        &self.chars
    }

    /// `self[pos]`, 1-based.
    #[inline]
    pub fn at(&self, pos: usize) -> Sym {
        self.chars[pos - 1]
    }

    #[inline]
    pub fn is_wildcard(&self, pos: usize) -> bool {
        self.chars[pos - 1] == WILDCARD
    }

    /// Maximal wildcard runs, sorted, 1-based.
    #[inline]
    pub fn groups(&self) -> &[Interval] {
        &self.groups
    }

    /// Number of wildcards (D).
    #[inline]
    pub fn d_count(&self) -> usize {
        self.d_count
    }

    /// Number of wildcard groups (G).
    #[inline]
    pub fn g_count(&self) -> usize {
        self.groups.len()
    }

    /// `P_#`: every wildcard replaced by [`HASH`].
    pub fn substitute_hash(&self) -> SolidString {
        SolidString {
            chars: self
                .chars
                .iter()
                .map(|&c| if c == WILDCARD { HASH } else { c })
                .collect(),
        }
    }

    /// Groups intersected with `[start..=end]`, shifted to be relative to `start`.
    pub fn groups_within(&self, start: usize, end: usize) -> Vec<Interval> {
        clip_groups(&self.groups, start, end)
    }
}

impl fmt::Display for WString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(
            &self.to_bytes(DEFAULT_WILDCARD_CHAR),
        ))
    }
}

/// Intersects sorted `groups` with `[start..=end]` and rebases them to start at 1.
pub fn clip_groups(groups: &[Interval], start: usize, end: usize) -> Vec<Interval> {
    let first = groups.partition_point(|g| g.end < start);
    groups[first..]
        .iter()
        .take_while(|g| g.start <= end)
        .map(|g| Interval::new(g.start.max(start) - start + 1, g.end.min(end) - start + 1))
        .collect()
}

/// Number of positions where solid `p[i]` differs from `t[i]`.
pub fn hamming_with_wildcards(p: &WString, t: &[Sym]) -> Result<usize> {
    if p.len() != t.len() {
        return Err(Error::LengthMismatch {
            pattern: p.len(),
            text: t.len(),
        });
    }
    Ok(p.symbols()
        .iter()
        .zip(t)
        .filter(|&(&a, &b)| a != WILDCARD && a != b)
        .count())
}

fn strip_newline(bytes: &[u8]) -> &[u8] {
    match bytes.last() {
        Some(b'\n') => &bytes[..bytes.len() - 1],
        _ => bytes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iv(a: usize, b: usize) -> Interval {
        Interval::new(a, b)
    }

    #[test]
    fn parse_single_wildcard() {
        let p = WString::parse(b"a?b", b'?').unwrap();
        assert_eq!(p.symbols(), &[b'a' as Sym, WILDCARD, b'b' as Sym]);
        assert_eq!(p.groups(), &[iv(2, 2)]);
        assert_eq!((p.d_count(), p.g_count()), (1, 1));
    }

    #[test]
    fn parse_two_runs() {
        let p = WString::parse(b"??a??", b'?').unwrap();
        assert_eq!(p.groups(), &[iv(1, 2), iv(4, 5)]);
        assert_eq!((p.d_count(), p.g_count()), (4, 2));
    }

    #[test]
    fn parse_solid_and_newline() {
        let p = WString::parse(b"abc\n", b'?').unwrap();
        assert!(p.groups().is_empty());
        assert_eq!((p.d_count(), p.g_count()), (0, 0));
        assert_eq!(p.len(), 3);
        // only one newline is stripped
        assert_eq!(WString::parse(b"ab\n\n", b'?').unwrap().len(), 3);
    }

    #[test]
    fn parse_empty_is_error() {
        assert_eq!(WString::parse(b"", b'?'), Err(Error::EmptyPattern));
        assert_eq!(WString::parse(b"\n", b'?'), Err(Error::EmptyPattern));
    }

    #[test]
    fn custom_wildcard_char() {
        let p = WString::parse(b"a*b?", b'*').unwrap();
        assert_eq!(p.groups(), &[iv(2, 2)]);
        assert_eq!(p.at(4), b'?' as Sym);
    }

    #[test]
    fn substitute_hash_cases() {
        let p = WString::from_str_wild("a?b");
        assert_eq!(
            p.substitute_hash().symbols(),
            &[b'a' as Sym, HASH, b'b' as Sym]
        );
        assert_eq!(
            WString::from_str_wild("???").substitute_hash().symbols(),
            &[HASH; 3]
        );
        assert_eq!(
            WString::from_str_wild("abc").substitute_hash(),
            SolidString::from_bytes(b"abc")
        );
    }

    #[test]
    fn hamming_examples() {
        let p = WString::from_str_wild("a?b");
        let t = |s: &str| SolidString::from_bytes(s.as_bytes());
        assert_eq!(hamming_with_wildcards(&p, t("aab").symbols()), Ok(0));
        assert_eq!(hamming_with_wildcards(&p, t("cab").symbols()), Ok(1));
        let q = WString::from_str_wild("abc");
        assert_eq!(hamming_with_wildcards(&q, t("abc").symbols()), Ok(0));
        assert_eq!(
            hamming_with_wildcards(&q, t("ab").symbols()),
            Err(Error::LengthMismatch {
                pattern: 3,
                text: 2
            })
        );
    }

    #[test]
    fn clip_groups_rebases() {
        let p = WString::from_str_wild("a??bc?d???e");
        assert_eq!(p.groups(), &[iv(2, 3), iv(6, 6), iv(8, 10)]);
        assert_eq!(p.groups_within(3, 9), vec![iv(1, 1), iv(4, 4), iv(6, 7)]);
        assert_eq!(p.groups_within(4, 5), vec![]);
    }

    fn arb_pattern() -> impl Strategy<Value = Vec<u8>> {
        proptest::collection::vec(
            prop_oneof![Just(b'?'), Just(b'a'), Just(b'b'), Just(b'\n')],
            1..40,
        )
        .prop_filter("trailing newline is stripped", |v| v.last() != Some(&b'\n'))
    }

    proptest! {
        #[test]
        fn round_trip(bytes in arb_pattern()) {
            let p = WString::parse(&bytes, b'?').unwrap();
            prop_assert_eq!(p.to_bytes(b'?'), bytes);
        }

        #[test]
        fn groups_are_exactly_the_wildcards(bytes in arb_pattern()) {
            let p = WString::parse(&bytes, b'?').unwrap();
            let mut covered = vec![false; p.len() + 1];
            for w in p.groups().windows(2) {
                prop_assert!(w[0].end + 1 < w[1].start);
            }
            for g in p.groups() {
                covered[g.start..=g.end].fill(true);
            }
            for (i, &c) in covered.iter().enumerate().skip(1) {
                prop_assert_eq!(c, p.is_wildcard(i));
            }
            prop_assert_eq!(p.d_count(), covered.iter().filter(|&&c| c).count());
        }

        #[test]
        fn hamming_matches_reference_and_is_monotone(
            pat in proptest::collection::vec(0u8..4, 1..30),
            txt_seed in proptest::collection::vec(0u8..3, 30),
            flip in 0usize..30,
        ) {
            let syms: Vec<Sym> = pat.iter().map(|&c| if c == 3 { WILDCARD } else { c as Sym }).collect();
            let t: Vec<Sym> = txt_seed[..syms.len()].iter().map(|&c| c as Sym).collect();
            let p = WString::from_symbols(syms.clone());
            let mut reference = 0;
            for i in 0..syms.len() {
                if syms[i] != WILDCARD && syms[i] != t[i] {
                    reference += 1;
                }
            }
            let dist = hamming_with_wildcards(&p, &t).unwrap();
            prop_assert_eq!(dist, reference);
            let mut more = syms;
            let at = flip % more.len();
            more[at] = WILDCARD;
            let widened = WString::from_symbols(more);
            prop_assert!(hamming_with_wildcards(&widened, &t).unwrap() <= dist);
        }
    }
}
