//! Structural primitives: the sparsifier marking, misperiod iteration,
//! S-runs and kangaroo verification.

use crate::error::{Error, Result};
use crate::occset::{Context, OccurrenceSet};
use crate::pillar::{PeriodRef, PillarIndex};
use crate::stats::Stats;
use crate::wstring::{Fragment, Interval, WString};

/// The unmarked zeros of a binary vector, as disjoint sorted intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedIntervals {
    pub intervals: Vec<Interval>,
    pub universe_len: usize,
    pub ones: usize,
    pub runs: usize,
}

impl MarkedIntervals {
    pub fn total(&self) -> usize {
        self.intervals.iter().map(Interval::len).sum()
    }

    pub fn contains(&self, pos: usize) -> bool {
        let i = self.intervals.partition_point(|iv| iv.end < pos);
        i < self.intervals.len() && self.intervals[i].contains(pos)
    }
}

/// Marks zeros after each one (left to right) and before each one (right to
/// left) at a cumulative rate of `N/(4M)` per one, and returns what is left.
///
/// Every returned position `i` satisfies, for all radii `r`,
/// `ones(B(i, r)) * N <= 8 * r * M`.
pub fn unmarked_zeros(runs_of_ones: &[Interval], n: usize) -> MarkedIntervals {
    let ones: usize = runs_of_ones.iter().map(Interval::len).sum();
    let r = runs_of_ones.len();
    debug_assert!(runs_of_ones.windows(2).all(|w| w[0].end < w[1].start));
    debug_assert!(runs_of_ones.last().is_none_or(|g| g.end <= n));
    // gaps[g] is the run of zeros before ones-run g (gaps[r] is the tail)
    let mut gaps = Vec::with_capacity(r + 1);
    let mut prev_end = 0;
    for g in runs_of_ones {
        gaps.push(Interval::new(prev_end + 1, g.start - 1));
        prev_end = g.end;
    }
    gaps.push(Interval::new(prev_end + 1, n));
    if ones == 0 {
        let intervals = gaps.into_iter().filter(|g| !g.is_empty()).collect();
        return MarkedIntervals {
            intervals,
            universe_len: n,
            ones,
            runs: r,
        };
    }

    let lens: Vec<usize> = gaps
        .iter()
        .map(|g| if g.is_empty() { 0 } else { g.len() })
        .collect();
    let prefix_marked = mark_pass(runs_of_ones.iter().map(Interval::len), &lens, 1, n, ones);
    let rev_lens: Vec<usize> = lens.iter().rev().copied().collect();
    let mut suffix_marked = mark_pass(
        runs_of_ones.iter().rev().map(Interval::len),
        &rev_lens,
        1,
        n,
        ones,
    );
    suffix_marked.reverse();

    let intervals = gaps
        .iter()
        .zip(prefix_marked.iter().zip(&suffix_marked))
        .filter_map(|(g, (&pre, &suf))| {
            if g.is_empty() || pre + suf >= g.len() {
                None
            } else {
                Some(Interval::new(g.start + pre, g.end - suf))
            }
        })
        .collect();
    MarkedIntervals {
        intervals,
        universe_len: n,
        ones,
        runs: r,
    }
}

// One directional pass. `gap_lens[g]` is the zero run preceding ones-run `g`
// in scan order; zeros after ones-run `g` start in gap `g + first_after`.
// Returns how many zeros of each gap were marked (always a prefix in scan order).
fn mark_pass(
    run_lens: impl Iterator<Item = usize>,
    gap_lens: &[usize],
    first_after: usize,
    n: usize,
    ones: usize,
) -> Vec<usize> {
    let mut marked = vec![0usize; gap_lens.len()];
    let (mut gap, mut total, mut seen) = (0usize, 0usize, 0usize);
    for (idx, len) in run_lens.enumerate() {
        seen += len;
        let allowed = seen * n / (4 * ones);
        if gap < idx + first_after {
            gap = idx + first_after;
        }
        while total < allowed && gap < gap_lens.len() {
            let room = gap_lens[gap] - marked[gap];
            let take = room.min(allowed - total);
            marked[gap] += take;
            total += take;
            if marked[gap] == gap_lens[gap] {
                gap += 1;
            }
        }
        if gap >= gap_lens.len() {
            break;
        }
    }
    marked
}

/// A solid stretch of the pattern whose every position is a sparsifier:
/// length `max(1, m/(8G))`, or the whole pattern when it is solid.
pub fn sparsifier_fragment(p: &WString) -> Result<Interval> {
    let (m, d, g) = (p.len(), p.d_count(), p.g_count());
    if 4 * d >= m && d > 0 {
        return Err(Error::SparsifierPreconditionViolated {
            wildcards: d,
            len: m,
        });
    }
    if g == 0 {
        return Ok(Interval::new(1, m));
    }
    let len = (m / (8 * g)).max(1);
    let u = unmarked_zeros(p.groups(), m);
    u.intervals
        .iter()
        .find(|iv| iv.len() >= len)
        .map(|iv| Interval::new(iv.start, iv.start + len - 1))
        .ok_or(Error::SparsifierPreconditionViolated {
            wildcards: d,
            len: m,
        })
}

/// A string viewed through the index: its solid fragment (with `#` at
/// wildcards) and its wildcard groups relative to the fragment.
#[derive(Debug, Clone, Copy)]
pub struct Host<'a> {
    pub frag: Fragment,
    pub groups: &'a [Interval],
}

impl<'a> Host<'a> {
    pub fn solid(frag: Fragment) -> Self {
        Host { frag, groups: &[] }
    }

    pub fn len(&self) -> usize {
        self.frag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frag.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

/// Iterates the misperiods of a host against a periodic reference, moving
/// away from a starting position. Wildcards are never misperiods. The
/// sentinel (`0` or `|host| + 1`) is yielded once, after which the iterator
/// is exhausted.
#[derive(Debug, Clone)]
pub struct MisperiodCursor<'a> {
    index: &'a PillarIndex,
    host: Host<'a>,
    pref: PeriodRef,
    dir: Direction,
    pos: isize,
    group: usize,
    done: bool,
    lce_calls: usize,
}

impl<'a> MisperiodCursor<'a> {
    /// `from` is the first host position examined (it may already be a sentinel).
    pub fn new(
        index: &'a PillarIndex,
        host: Host<'a>,
        pref: PeriodRef,
        dir: Direction,
        from: isize,
    ) -> Self {
        let group = match dir {
            Direction::Right => host.groups.partition_point(|g| (g.end as isize) < from),
            Direction::Left => host.groups.partition_point(|g| (g.start as isize) <= from),
        };
        MisperiodCursor {
            index,
            host,
            pref,
            dir,
            pos: from,
            group,
            done: false,
            lce_calls: 0,
        }
    }

    /// Cursor starting just outside the anchor `[i..j]` of the host, whose
    /// reference is the anchor's own period `q` (`host[i..i+q)` repeated).
    pub fn from_anchor(
        index: &'a PillarIndex,
        host: Host<'a>,
        i: usize,
        q: usize,
        dir: Direction,
        j: usize,
    ) -> Self {
        let base = host.frag.sub(i, i + q - 1);
        let pref = PeriodRef::new(base, i as isize);
        let from = match dir {
            Direction::Left => i as isize - 1,
            Direction::Right => j as isize + 1,
        };
        Self::new(index, host, pref, dir, from)
    }

    pub fn lce_calls(&self) -> usize {
        self.lce_calls
    }

    fn next_right(&mut self) -> Option<usize> {
        let len = self.host.len() as isize;
        loop {
            if self.pos > len {
                if self.done {
                    return None;
                }
                self.done = true;
                return Some(len as usize + 1);
            }
            let pos = self.pos as usize;
            let groups = self.host.groups;
            if self.group < groups.len() && groups[self.group].start <= pos {
                self.pos = groups[self.group].end as isize + 1;
                self.group += 1;
                continue;
            }
            let stretch_end = if self.group < groups.len() {
                groups[self.group].start - 1
            } else {
                len as usize
            };
            let z = self.host.frag.sub(pos, stretch_end);
            self.lce_calls += 3;
            let l = self.index.lcp_ref(&self.pref, self.pos, &z);
            if l < z.len() {
                self.pos += l as isize + 1;
                return Some(pos + l);
            }
            self.pos = stretch_end as isize + 1;
        }
    }

    fn next_left(&mut self) -> Option<usize> {
        loop {
            if self.pos < 1 {
                if self.done {
                    return None;
                }
                self.done = true;
                return Some(0);
            }
            let pos = self.pos as usize;
            let groups = self.host.groups;
            if self.group > 0 && groups[self.group - 1].end >= pos {
                self.pos = groups[self.group - 1].start as isize - 1;
                self.group -= 1;
                continue;
            }
            let stretch_start = if self.group > 0 {
                groups[self.group - 1].end + 1
            } else {
                1
            };
            let z = self.host.frag.sub(stretch_start, pos);
            self.lce_calls += 3;
            let l = self.index.lcs_ref(&self.pref, self.pos, &z);
            if l < z.len() {
                self.pos -= l as isize + 1;
                return Some(pos - l);
            }
            self.pos = stretch_start as isize - 1;
        }
    }
}

impl Iterator for MisperiodCursor<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self.dir {
            Direction::Right => self.next_right(),
            Direction::Left => self.next_left(),
        }
    }
}

/// A maximal run of occurrences of a solid fragment `S` spaced `per(S)` apart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SRun {
    /// First occurrence.
    pub start: usize,
    /// Last position covered by the last occurrence.
    pub end: usize,
    /// `start mod per(S)`.
    pub phase: usize,
    pub occ_count: usize,
}

impl SRun {
    pub fn last_occ(&self, q: usize) -> usize {
        self.start + (self.occ_count - 1) * q
    }
}

/// Exact occurrences of `s` in `t`, relative to `t`, found with one IPM
/// query per window of length `2|s| - 1`.
pub fn solid_occurrences(index: &PillarIndex, s: &Fragment, t: &Fragment) -> Vec<usize> {
    let l = s.len();
    let mut occ = Vec::new();
    if l == 0 || l > t.len() {
        return occ;
    }
    let mut w = 1;
    while w + l - 1 <= t.len() {
        let hi = (w + 2 * l - 2).min(t.len());
        if let Some(ap) = index
            .ipm(s, &t.sub(w, hi))
            .expect("window shorter than 2|s|")
        {
            occ.extend(ap.iter().map(|o| o + w - 1));
        }
        w += l;
    }
    occ
}

/// All S-runs of `s` in `t`, with `q = per(s)`.
pub fn compute_s_runs(index: &PillarIndex, s: &Fragment, t: &Fragment, q: usize) -> Vec<SRun> {
    let occ = solid_occurrences(index, s, t);
    group_runs(&occ, s.len(), q)
}

/// Groups sorted occurrence starts into maximal `q`-spaced runs.
pub fn group_runs(occ: &[usize], len: usize, q: usize) -> Vec<SRun> {
    let mut runs: Vec<SRun> = Vec::new();
    for &o in occ {
        match runs.last_mut() {
            Some(r) if r.last_occ(q) + q == o => {
                r.occ_count += 1;
                r.end = o + len - 1;
            }
            _ => runs.push(SRun {
                start: o,
                end: o + len - 1,
                phase: o % q,
                occ_count: 1,
            }),
        }
    }
    runs
}

/// Verifies occurrences of a pattern (`#` at wildcards) against a text by
/// kangaroo jumps: one LCE per solid segment or mismatch.
#[derive(Debug, Clone, Copy)]
pub struct Verifier<'a> {
    pub index: &'a PillarIndex,
    pub pattern: Fragment,
    pub groups: &'a [Interval],
    pub text: Fragment,
}

impl Verifier<'_> {
    /// Number of valid starting positions.
    pub fn positions(&self) -> usize {
        (self.text.len() + 1).saturating_sub(self.pattern.len())
    }

    /// Whether the pattern has at most `k` mismatches at `pos`, plus the
    /// number of LCE calls spent.
    pub fn check(&self, pos: usize, k: usize) -> Result<(bool, usize)> {
        let m = self.pattern.len();
        if pos == 0 || pos > self.positions() {
            return Err(Error::PositionOutOfRange {
                pos,
                max: self.positions(),
            });
        }
        let (mut i, mut budget, mut calls, mut g) = (1usize, k, 0usize, 0usize);
        let groups = self.groups;
        while i <= m {
            if g < groups.len() && groups[g].start <= i {
                i = groups[g].end + 1;
                g += 1;
                continue;
            }
            let seg_end = if g < groups.len() {
                groups[g].start - 1
            } else {
                m
            };
            let l = self.index.lce(
                &self.pattern.sub(i, seg_end),
                &self.text.sub(pos + i - 1, pos + seg_end - 1),
            );
            calls += 1;
            if i + l > seg_end {
                i = seg_end + 1;
            } else {
                if budget == 0 {
                    return Ok((false, calls));
                }
                budget -= 1;
                i += l + 1;
            }
        }
        Ok((true, calls))
    }
}

/// A pattern and one text chunk registered in a shared index.
#[derive(Debug, Clone, Copy)]
pub struct Instance<'a> {
    pub index: &'a PillarIndex,
    pub p: &'a WString,
    /// `P_#` in the index.
    pub pattern: Fragment,
    pub text: Fragment,
}

impl<'a> Instance<'a> {
    pub fn m(&self) -> usize {
        self.pattern.len()
    }

    pub fn n(&self) -> usize {
        self.text.len()
    }

    /// Largest valid starting position (0 when the text is too short).
    pub fn max_start(&self) -> usize {
        (self.n() + 1).saturating_sub(self.m())
    }

    pub fn pattern_host(&self) -> Host<'a> {
        Host {
            frag: self.pattern,
            groups: self.p.groups(),
        }
    }

    pub fn text_host(&self) -> Host<'a> {
        Host::solid(self.text)
    }

    pub fn verifier(&self) -> Verifier<'a> {
        Verifier {
            index: self.index,
            pattern: self.pattern,
            groups: self.p.groups(),
            text: self.text,
        }
    }

    pub fn context(&self, k: usize) -> Context {
        Context {
            text_len: self.n(),
            pattern_len: self.m(),
            k,
        }
    }

    /// Kangaroo check of one in-range position, counted in `stats`.
    pub fn verify(&self, pos: usize, k: usize, stats: &mut Stats) -> bool {
        let (ok, calls) = self.verifier().check(pos, k).expect("position in range");
        stats.kangaroo += 1;
        stats.lce_calls += calls as u64;
        ok
    }

    /// Sorts, deduplicates and range-clips candidate starts (given as signed
    /// values so callers can pass unclipped arithmetic), then verifies them.
    pub fn verify_candidates(
        &self,
        mut cands: Vec<isize>,
        k: usize,
        stats: &mut Stats,
    ) -> Vec<usize> {
        let max = self.max_start() as isize;
        cands.retain(|&c| c >= 1 && c <= max);
        cands.sort_unstable();
        cands.dedup();
        stats.candidates += cands.len() as u64;
        cands
            .into_iter()
            .map(|c| c as usize)
            .filter(|&c| self.verify(c, k, stats))
            .collect()
    }

    /// Every position checked directly.
    pub fn verify_all(&self, k: usize, stats: &mut Stats) -> OccurrenceSet {
        let hits = (1..=self.max_start())
            .filter(|&c| self.verify(c, k, stats))
            .collect();
        OccurrenceSet::from_positions(self.context(k), hits)
    }
}

/// One-shot kangaroo check of `p` against `t` at `pos`.
pub fn kangaroo_verify(
    p: &WString,
    t: &crate::wstring::SolidString,
    pos: usize,
    k: usize,
) -> Result<bool> {
    let m = p.len();
    if t.len() < m || pos == 0 || pos > t.len() - m + 1 {
        return Err(Error::PositionOutOfRange {
            pos,
            max: (t.len() + 1).saturating_sub(m),
        });
    }
    let ph = p.substitute_hash();
    let index = PillarIndex::build(&[t.symbols(), ph.symbols()]);
    let v = Verifier {
        index: &index,
        pattern: index.whole(crate::wstring::StrId(1)),
        groups: p.groups(),
        text: index.whole(crate::wstring::StrId(0)),
    };
    v.check(pos, k).map(|(ok, _)| ok)
}
