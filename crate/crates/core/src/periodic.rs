//! Matching an almost-periodic pattern against a text chunk.
//!
//! The pattern `s` is compared with a periodic reference `Q^∞`. Text regions
//! that can host an occurrence are located from exact occurrences of a clean
//! `QQ` block, then each region is swept once over the aligned starting
//! positions while mismatch counts are maintained from sparse events.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::occset::{Context, OccurrenceSet, Progression};
use crate::pillar::{PeriodRef, PillarIndex};
use crate::stats::Stats;
use crate::structure::{group_runs, solid_occurrences, Direction, Host, MisperiodCursor, SRun};
use crate::wstring::{Fragment, Interval, HASH};

/// One almost-periodic matching problem.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicInput<'a> {
    pub index: &'a PillarIndex,
    /// The pattern (or pattern region), with `#` at wildcards.
    pub s: Host<'a>,
    pub t: Fragment,
    pub k: usize,
    /// Mismatch budget of `s` against the reference.
    pub d: usize,
    /// Reference in `s` coordinates.
    pub pref: PeriodRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Pair corrections folded into the sweep; progressions only.
    Exact,
    /// Progressions from the pair-free count, pair-rescued positions as extras.
    FineGrained,
}

/// Sorted positions where a string differs from its periodic reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MismatchList {
    pub positions: Vec<usize>,
    pub q: usize,
    prefix_counts: Vec<u32>,
}

impl MismatchList {
    pub fn new(positions: Vec<usize>, q: usize, len: usize) -> Self {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        let mut prefix_counts = vec![0u32; len + 1];
        for &x in &positions {
            prefix_counts[x] += 1;
        }
        for i in 1..=len {
            prefix_counts[i] += prefix_counts[i - 1];
        }
        MismatchList {
            positions,
            q,
            prefix_counts,
        }
    }

    /// Mismatches inside `[a..=b]`.
    pub fn count_in(&self, a: usize, b: usize) -> usize {
        if a > b {
            return 0;
        }
        (self.prefix_counts[b] - self.prefix_counts[a - 1]) as usize
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// A text region that may contain occurrences, with the residue (mod `q`)
/// of the starting positions that align with the reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevantFragment {
    pub span: Interval,
    pub residue: usize,
    /// Reference in text coordinates.
    pub text_ref: PeriodRef,
    /// Text positions in `span` that differ from `text_ref`.
    pub mismatches: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relevant {
    NoOccurrencePossible,
    Fragments(Vec<RelevantFragment>),
}

/// Mismatches of `host` against `pref`, or `None` once more than `limit` are seen.
pub fn reference_mismatches(
    index: &PillarIndex,
    host: Host<'_>,
    pref: PeriodRef,
    limit: usize,
) -> Option<Vec<usize>> {
    let end = host.len() + 1;
    let mut out = Vec::new();
    for x in MisperiodCursor::new(index, host, pref, Direction::Right, 1) {
        if x == end {
            break;
        }
        if out.len() == limit {
            return None;
        }
        out.push(x);
    }
    Some(out)
}

#[derive(Debug, Clone)]
struct Prepared {
    mi_s: Vec<usize>,
    needle: Fragment,
}

fn violated(what: &'static str) -> Error {
    Error::PeriodicPreconditionViolated(what)
}

fn prepare(inp: &PeriodicInput<'_>) -> Result<Prepared> {
    let (ms, q) = (inp.s.len(), inp.pref.q());
    let d_s: usize = inp.s.groups.iter().map(Interval::len).sum();
    if 2 * inp.t.len() > 3 * ms {
        return Err(violated("text longer than 3|s|/2"));
    }
    if inp.d < 2 * (d_s + inp.k) || inp.d == 0 {
        return Err(violated("budget below 2(D+k)"));
    }
    if 8 * inp.d * q > ms {
        return Err(violated("period above |s|/(8d)"));
    }
    let base = inp.index.extract(&inp.pref.base);
    if base.contains(&HASH) {
        return Err(violated("reference is not solid"));
    }
    let per = crate::pillar::smallest_period_of(&base);
    if per < q && q % per == 0 {
        return Err(violated("reference is not primitive"));
    }
    let mi_s = reference_mismatches(inp.index, inp.s, inp.pref, inp.d)
        .ok_or(violated("too many mismatches"))?;

    let mut needle = None;
    let mut clean = 0usize;
    let mut j = 1 + (inp.pref.origin - 1).rem_euclid(q as isize) as usize;
    let mut gi = 0;
    while j + 2 * q - 1 <= ms {
        let e = j + 2 * q - 1;
        let mi_hit = {
            let p = mi_s.partition_point(|&x| x < j);
            p < mi_s.len() && mi_s[p] <= e
        };
        while gi < inp.s.groups.len() && inp.s.groups[gi].end < j {
            gi += 1;
        }
        let wild_hit = gi < inp.s.groups.len() && inp.s.groups[gi].start <= e;
        if !mi_hit && !wild_hit {
            clean += 1;
            needle.get_or_insert(j);
        }
        j += 2 * q;
    }
    if clean < inp.k + 1 {
        return Err(violated("too few clean blocks"));
    }
    let nj = needle.expect("at least one clean block");
    Ok(Prepared {
        mi_s,
        needle: inp.s.frag.sub(nj, nj + 2 * q - 1),
    })
}

struct Group<'a> {
    l: usize,
    r: usize,
    mi: Vec<usize>,
    right: MisperiodCursor<'a>,
    right_done: bool,
}

impl Group<'_> {
    fn extend_right(&mut self, e: usize, budget: usize, tlen: usize) {
        loop {
            let after = self.mi.len() - self.mi.partition_point(|&x| x <= e);
            if after > budget {
                let p = self.mi.partition_point(|&x| x <= e);
                self.r = self.mi[p + budget] - 1;
                return;
            }
            if self.right_done {
                self.r = tlen;
                return;
            }
            match self.right.next() {
                Some(x) if x <= tlen => self.mi.push(x),
                _ => self.right_done = true,
            }
        }
    }

    fn finish(mut self, residue: usize, text_ref: PeriodRef) -> RelevantFragment {
        let (l, r) = (self.l, self.r);
        self.mi.retain(|&x| x >= l && x <= r);
        RelevantFragment {
            span: Interval::new(l, r),
            residue,
            text_ref,
            mismatches: self.mi,
        }
    }
}

/// Text regions that contain every occurrence of `s` in `t`, one per
/// group of overlapping extensions of the same residue.
pub fn relevant_fragment(inp: &PeriodicInput<'_>) -> Result<Relevant> {
    let prep = prepare(inp)?;
    relevant_from(inp, &prep)
}

fn relevant_from(inp: &PeriodicInput<'_>, prep: &Prepared) -> Result<Relevant> {
    let q = inp.pref.q();
    let occ = solid_occurrences(inp.index, &prep.needle, &inp.t);
    if occ.is_empty() {
        return Ok(Relevant::NoOccurrencePossible);
    }
    let runs = group_runs(&occ, 2 * q, q);
    let mut by_residue: BTreeMap<usize, Vec<SRun>> = BTreeMap::new();
    for r in runs {
        let rho = (r.start as isize - inp.pref.origin + 1).rem_euclid(q as isize) as usize;
        by_residue.entry(rho).or_default().push(r);
    }
    let budget = 3 * inp.d;
    let tlen = inp.t.len();
    let thost = Host::solid(inp.t);
    let mut out = Vec::new();
    for (rho, runs) in by_residue {
        let text_ref = PeriodRef::new(inp.pref.base, runs[0].start as isize);
        let mut cur: Option<Group<'_>> = None;
        for run in runs {
            if let Some(g) = cur.as_mut() {
                if run.start <= g.r {
                    g.extend_right(run.end, budget, tlen);
                    continue;
                }
            }
            let stop = cur.as_ref().map_or(0, |g| g.r);
            let mut left = Vec::new();
            let mut merged = false;
            for x in MisperiodCursor::new(
                inp.index,
                thost,
                text_ref,
                Direction::Left,
                run.start as isize - 1,
            ) {
                if x <= stop && cur.is_some() {
                    merged = true;
                    break;
                }
                if x == 0 || left.len() == budget {
                    left.push(x);
                    break;
                }
                left.push(x);
            }
            if merged {
                cur.as_mut().unwrap().extend_right(run.end, budget, tlen);
                continue;
            }
            if let Some(g) = cur.take() {
                out.push(g.finish(rho, text_ref));
            }
            let bound = left.pop().unwrap_or(0);
            left.reverse();
            let mut g = Group {
                l: bound + 1,
                r: run.end,
                mi: left,
                right: MisperiodCursor::new(
                    inp.index,
                    thost,
                    text_ref,
                    Direction::Right,
                    run.end as isize + 1,
                ),
                right_done: false,
            };
            g.extend_right(run.end, budget, tlen);
            cur = Some(g);
        }
        if let Some(g) = cur.take() {
            out.push(g.finish(rho, text_ref));
        }
    }
    Ok(Relevant::Fragments(out))
}

/// Per-fragment sweep: the mismatch count of every aligned window, with
/// pair corrections either folded in or returned separately.
struct Sweep {
    i0: usize,
    /// `d'` (pair-free) or `d` (pairs folded) per aligned start.
    values: Vec<i64>,
    /// Pair corrections by aligned index, when not folded.
    pairs: HashMap<usize, i64>,
}

fn sweep(
    inp: &PeriodicInput<'_>,
    mi_s: &[usize],
    f: &RelevantFragment,
    fold_pairs: bool,
    stats: &mut Stats,
) -> Option<Sweep> {
    let (ms, q) = (inp.s.len(), inp.pref.q());
    let (l, r) = (f.span.start, f.span.end);
    if r + 1 < l + ms {
        return None;
    }
    let hi = r + 1 - ms;
    let i0 = l + (f.residue + q - l % q) % q;
    if i0 > hi {
        return None;
    }
    let tmax = (hi - i0) / q;
    let mut diff = vec![0i64; tmax + 2];
    let mut events = 0u64;
    let (i0s, his, qs) = (i0 as isize, hi as isize, q as isize);
    let add = |a: isize, b: isize, v: i64, diff: &mut Vec<i64>| {
        let (a, b) = (a.max(i0s), b.min(his));
        if a > b {
            return;
        }
        let ta = (a - i0s + qs - 1) / qs;
        let tb = (b - i0s) / qs;
        if ta > tb {
            return;
        }
        diff[ta as usize] += v;
        diff[tb as usize + 1] -= v;
    };
    for &x in &f.mismatches {
        let x = x as isize;
        add(x - ms as isize + 1, x, 1, &mut diff);
        events += 1;
        for g in inp.s.groups {
            add(
                x - g.end as isize + 1,
                x - g.start as isize + 1,
                -1,
                &mut diff,
            );
            events += 1;
        }
    }
    let mut pairs: HashMap<usize, i64> = HashMap::new();
    if !mi_s.is_empty() && !f.mismatches.is_empty() {
        let mut by_res: HashMap<usize, Vec<usize>> = HashMap::new();
        for &y in mi_s {
            by_res.entry(y % q).or_default().push(y);
        }
        for &x in &f.mismatches {
            let want = (x + 1 + q - f.residue % q) % q;
            let Some(ys) = by_res.get(&want) else {
                continue;
            };
            for &y in ys {
                let i = x as isize - y as isize + 1;
                if i < i0s || i > his {
                    continue;
                }
                debug_assert_eq!((i - i0s) % qs, 0);
                let tau = ((i - i0s) / qs) as usize;
                let same = inp.index.access(&inp.s.frag, y) == inp.index.access(&inp.t, x);
                let corr = if same { 2 } else { 1 };
                events += 1;
                if fold_pairs {
                    diff[tau] -= corr;
                    diff[tau + 1] += corr;
                } else {
                    *pairs.entry(tau).or_default() += corr;
                }
            }
        }
    }
    stats.events += events;
    let mut values = Vec::with_capacity(tmax + 1);
    let mut acc = mi_s.len() as i64;
    for d in diff.iter().take(tmax + 1) {
        acc += d;
        values.push(acc);
    }
    Some(Sweep { i0, values, pairs })
}

/// All `k`-mismatch occurrences of `s` in `t` (positions relative to `t`),
/// as progressions with difference `|Q|` plus, in fine-grained mode, extras.
pub fn occs_periodic(
    inp: &PeriodicInput<'_>,
    mode: Mode,
    stats: &mut Stats,
) -> Result<OccurrenceSet> {
    let prep = prepare(inp)?;
    let q = inp.pref.q();
    let ctx = Context {
        text_len: inp.t.len(),
        pattern_len: inp.s.len(),
        k: inp.k,
    };
    let frags = match relevant_from(inp, &prep)? {
        Relevant::NoOccurrencePossible => return Ok(OccurrenceSet::empty(ctx)),
        Relevant::Fragments(f) => f,
    };
    let k = inp.k as i64;
    let mut progressions = Vec::new();
    let mut extras = Vec::new();
    for f in &frags {
        let Some(sw) = sweep(inp, &prep.mi_s, f, mode == Mode::Exact, stats) else {
            continue;
        };
        let mut tau = 0;
        while tau < sw.values.len() {
            if sw.values[tau] <= k {
                let a = tau;
                while tau < sw.values.len() && sw.values[tau] <= k {
                    tau += 1;
                }
                progressions.push(Progression {
                    start: sw.i0 + a * q,
                    count: tau - a,
                });
            } else {
                tau += 1;
            }
        }
        for (&tau, &corr) in &sw.pairs {
            if sw.values[tau] > k && sw.values[tau] - corr <= k {
                extras.push(sw.i0 + tau * q);
            }
        }
    }
    Ok(OccurrenceSet::new(ctx, q, progressions, extras))
}

/// Per aligned start `i` of every relevant fragment, the swept mismatch
/// count `d_i`. Exposed for replay checks.
pub fn swept_distances(inp: &PeriodicInput<'_>) -> Result<Vec<(usize, usize)>> {
    let prep = prepare(inp)?;
    let q = inp.pref.q();
    let frags = match relevant_from(inp, &prep)? {
        Relevant::NoOccurrencePossible => return Ok(Vec::new()),
        Relevant::Fragments(f) => f,
    };
    let mut out = Vec::new();
    let mut scratch = Stats::default();
    for f in &frags {
        if let Some(sw) = sweep(inp, &prep.mi_s, f, true, &mut scratch) {
            out.extend(
                sw.values
                    .iter()
                    .enumerate()
                    .map(|(t, &v)| (sw.i0 + t * q, v as usize)),
            );
        }
    }
    Ok(out)
}
