//! PILLAR operations over a family of solid strings: access, longest common
//! extension in both directions, internal pattern matching, periodic-extension
//! LCP and smallest period.
//!
//! The registered strings are concatenated with distinct separators into one
//! corpus. LCE queries go through a suffix array, its LCP array and a
//! range-minimum structure, built once for the corpus and once for its
//! reverse.

mod rmq;
mod sais;

pub use sais::{lcp_array, rank_array, suffix_array};

use crate::error::{Error, Result};
use crate::occset::ArithProgression;
use crate::wstring::{Fragment, StrId, Sym, HASH, WILDCARD};

use rmq::BlockRmq;

const HASH_CODE: u32 = 257;
const FIRST_SEPARATOR: u32 = 258;
// symbols compared directly before falling back to the RMQ
const SHORT_SCAN: usize = 8;

#[derive(Debug, Clone)]
struct Side {
    text: Vec<u32>,
    rank: Vec<u32>,
    rmq: BlockRmq,
}

impl Side {
    fn build(text: Vec<u32>, alphabet: usize) -> Self {
        let sa = suffix_array(&text, alphabet);
        let rank = rank_array(&sa);
        let lcp = lcp_array(&text, &sa, &rank);
        Side {
            text,
            rank,
            rmq: BlockRmq::new(lcp),
        }
    }

    #[inline]
    fn lce(&self, a: usize, b: usize, cap: usize) -> usize {
        if a == b || cap == 0 {
            return cap;
        }
        let short = cap.min(SHORT_SCAN);
        for d in 0..short {
            if self.text[a + d] != self.text[b + d] {
                return d;
            }
        }
        if short == cap {
            return cap;
        }
        let (ra, rb) = (self.rank[a] as usize, self.rank[b] as usize);
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        (self.rmq.min(lo + 1, hi) as usize).min(cap)
    }
}

/// Immutable index over registered solid strings.
#[derive(Debug, Clone)]
pub struct PillarIndex {
    offsets: Vec<usize>,
    lens: Vec<usize>,
    corpus_len: usize,
    fwd: Side,
    rev: Side,
}

#[inline]
fn encode(c: Sym) -> u32 {
    match c {
        HASH => HASH_CODE,
        WILDCARD => panic!("wildcards must be substituted before indexing"),
        b => {
            debug_assert!(b < 256);
            b + 1
        }
    }
}

#[inline]
fn decode(c: u32) -> Sym {
    if c == HASH_CODE {
        HASH
    } else {
        c - 1
    }
}

impl PillarIndex {
    /// Registers `strings` in order; the i-th string gets handle `StrId(i)`.
    pub fn build(strings: &[&[Sym]]) -> Self {
        let total: usize = strings.iter().map(|s| s.len()).sum();
        assert!(total >= 1, "index needs at least one symbol");
        let mut corpus = Vec::with_capacity(total + strings.len() + 1);
        let mut offsets = Vec::with_capacity(strings.len());
        let mut lens = Vec::with_capacity(strings.len());
        for (i, s) in strings.iter().enumerate() {
            offsets.push(corpus.len());
            lens.push(s.len());
            corpus.extend(s.iter().map(|&c| encode(c)));
            corpus.push(FIRST_SEPARATOR + i as u32);
        }
        let corpus_len = corpus.len();
        let alphabet = (FIRST_SEPARATOR as usize) + strings.len();
        let mut reversed: Vec<u32> = corpus.iter().rev().copied().collect();
        corpus.push(0);
        reversed.push(0);
        PillarIndex {
            offsets,
            lens,
            corpus_len,
            fwd: Side::build(corpus, alphabet),
            rev: Side::build(reversed, alphabet),
        }
    }

    pub fn num_strings(&self) -> usize {
        self.lens.len()
    }

    /// Handle to the whole registered string.
    pub fn whole(&self, id: StrId) -> Fragment {
        Fragment::new(id, 1, self.lens[id.0 as usize])
    }

    pub fn len_of(&self, id: StrId) -> usize {
        self.lens[id.0 as usize]
    }

    #[inline]
    fn pos(&self, f: &Fragment, i: usize) -> usize {
        self.offsets[f.src.0 as usize] + f.start - 1 + (i - 1)
    }

    /// `f[i]`, 1-based.
    #[inline]
    pub fn access(&self, f: &Fragment, i: usize) -> Sym {
        debug_assert!(i >= 1 && i <= f.len());
        decode(self.fwd.text[self.pos(f, i)])
    }

    pub fn extract(&self, f: &Fragment) -> Vec<Sym> {
        if f.is_empty() {
            return Vec::new();
        }
        let a = self.pos(f, 1);
        self.fwd.text[a..a + f.len()]
            .iter()
            .map(|&c| decode(c))
            .collect()
    }

    /// Length of the longest common prefix of `a` and `b`.
    #[inline]
    pub fn lce(&self, a: &Fragment, b: &Fragment) -> usize {
        let cap = a.len().min(b.len());
        if cap == 0 {
            return 0;
        }
        self.fwd.lce(self.pos(a, 1), self.pos(b, 1), cap)
    }

    /// Length of the longest common suffix of `a` and `b`.
    #[inline]
    pub fn lce_rev(&self, a: &Fragment, b: &Fragment) -> usize {
        let cap = a.len().min(b.len());
        if cap == 0 {
            return 0;
        }
        let ra = self.corpus_len - 1 - self.pos(a, a.len());
        let rb = self.corpus_len - 1 - self.pos(b, b.len());
        self.rev.lce(ra, rb, cap)
    }

    /// Occurrences of `needle` in `haystack` (relative, 1-based) as one
    /// progression. Requires `|haystack| < 2|needle|`.
    ///
    /// Every start is tested with one LCE query, so a call costs
    /// `O(|haystack| - |needle|)`.
    pub fn ipm(&self, needle: &Fragment, haystack: &Fragment) -> Result<Option<ArithProgression>> {
        if haystack.len() >= 2 * needle.len() {
            return Err(Error::IpmWindowTooLarge {
                needle: needle.len(),
                haystack: haystack.len(),
            });
        }
        if needle.len() > haystack.len() {
            return Ok(None);
        }
        let first = self.fwd.text[self.pos(needle, 1)];
        let base = self.pos(haystack, 1);
        let mut found: Option<ArithProgression> = None;
        for s in 1..=haystack.len() - needle.len() + 1 {
            if self.fwd.text[base + s - 1] != first {
                continue;
            }
            if self.lce(needle, &haystack.suffix(s)) == needle.len() {
                match found.as_mut() {
                    None => {
                        found = Some(ArithProgression {
                            start: s,
                            diff: 1,
                            count: 1,
                        })
                    }
                    Some(ap) => {
                        if ap.count == 1 {
                            ap.diff = s - ap.start;
                        }
                        debug_assert_eq!(s, ap.start + ap.diff * ap.count, "occurrences not an AP");
                        ap.count += 1;
                    }
                }
            }
        }
        debug_assert!(
            found.is_none_or(|ap| ap.count < 3 || ap.diff == self.smallest_period(needle))
        );
        Ok(found)
    }

    /// `lcp(x^∞, z)`.
    pub fn lcp_periodic(&self, x: &Fragment, z: &Fragment) -> usize {
        assert!(!x.is_empty());
        let l = self.lce(x, z);
        if l < x.len() || z.len() <= x.len() {
            return l;
        }
        x.len() + self.lce(z, &z.suffix(x.len() + 1))
    }

    /// Longest suffix of `z` that is a suffix of `…xxx`.
    pub fn lcs_periodic(&self, x: &Fragment, z: &Fragment) -> usize {
        assert!(!x.is_empty());
        let l = self.lce_rev(x, z);
        if l < x.len() || z.len() <= x.len() {
            return l;
        }
        x.len() + self.lce_rev(&z.prefix(z.len() - x.len()), z)
    }

    /// Longest prefix of `z` matching the reference `r`, where `z[1]` sits at
    /// host position `host_pos`.
    pub fn lcp_ref(&self, r: &PeriodRef, host_pos: isize, z: &Fragment) -> usize {
        let phase = r.phase(host_pos);
        let head = r.base.suffix(phase + 1);
        let l = self.lce(&head, z);
        if l < head.len() || z.len() <= head.len() {
            return l;
        }
        head.len() + self.lcp_periodic(&r.base, &z.suffix(head.len() + 1))
    }

    /// Longest suffix of `z` matching the reference `r`, where the last symbol
    /// of `z` sits at host position `host_pos`.
    pub fn lcs_ref(&self, r: &PeriodRef, host_pos: isize, z: &Fragment) -> usize {
        let phase = r.phase(host_pos);
        let tail = r.base.prefix(phase + 1);
        let l = self.lce_rev(&tail, z);
        if l < tail.len() || z.len() <= tail.len() {
            return l;
        }
        tail.len() + self.lcs_periodic(&r.base, &z.prefix(z.len() - tail.len()))
    }

    /// `per(f)` from the border array of the extracted fragment.
    pub fn smallest_period(&self, f: &Fragment) -> usize {
        assert!(!f.is_empty());
        smallest_period_of(&self.extract(f))
    }
}

/// `per(s)` via the failure function.
pub fn smallest_period_of(s: &[Sym]) -> usize {
    let n = s.len();
    let mut border = vec![0usize; n + 1];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = border[k];
        }
        if s[i] == s[k] {
            k += 1;
        }
        border[i + 1] = k;
    }
    n - border[n]
}

/// An infinite periodic reference string laid over a host: host position `y`
/// is expected to hold `base[1 + ((y - origin) mod |base|)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodRef {
    pub base: Fragment,
    pub origin: isize,
}

impl PeriodRef {
    pub fn new(base: Fragment, origin: isize) -> Self {
        assert!(!base.is_empty());
        PeriodRef { base, origin }
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.base.len()
    }

    /// 0-based index into `base` of the reference symbol at host position `y`.
    #[inline]
    pub fn phase(&self, y: isize) -> usize {
        (y - self.origin).rem_euclid(self.q() as isize) as usize
    }

    /// The same reference, re-anchored so that host position `y` reads `base[1 + phase]`
    /// when the host is shifted by `shift` (host position `y` becomes `y + shift`).
    #[inline]
    pub fn shifted(&self, shift: isize) -> PeriodRef {
        PeriodRef {
            base: self.base,
            origin: self.origin + shift,
        }
    }

    /// Reference symbol at host position `y`.
    pub fn symbol(&self, index: &PillarIndex, y: isize) -> Sym {
        index.access(&self.base, self.phase(y) + 1)
    }
}
