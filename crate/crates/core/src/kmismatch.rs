//! k-mismatch matching of a pattern with wildcards in one text chunk.
//!
//! The pattern is split into aperiodic breaks, repetitive regions, or is
//! found to be close to periodic. Breaks and regions vote for candidate
//! starts that are then verified; the periodic case is swept directly.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::exact::{exact_occurrences_chunk, ExactOptions};
use crate::occset::{OccurrenceSet, Progression};
use crate::periodic::{occs_periodic, MismatchList, Mode, PeriodicInput};
use crate::pillar::{PeriodRef, PillarIndex};
use crate::stats::Stats;
use crate::structure::{
    solid_occurrences, unmarked_zeros, Direction, Host, Instance, MisperiodCursor, Verifier,
};
use crate::wstring::{clip_groups, Fragment, Interval, WString};

/// Size parameters of the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompParams {
    pub m: usize,
    pub k: usize,
    pub gamma: usize,
    pub tau: usize,
    pub break_len: usize,
}

impl DecompParams {
    pub fn new(p: &WString, k: usize) -> Self {
        let (m, gamma, tau) = (p.len(), p.g_count() + k, p.d_count() + k);
        let break_len = if gamma == 0 { m } else { m / (16 * gamma) };
        DecompParams {
            m,
            k,
            gamma,
            tau,
            break_len,
        }
    }

    /// `per > m / (512 τ)`.
    pub fn above_period_floor(&self, per: usize) -> bool {
        per * 512 * self.tau > self.m
    }

    /// `count >= ⌈32k · len / m⌉`.
    pub fn quota_reached(&self, count: usize, len: usize) -> bool {
        count * self.m >= 32 * self.k * len
    }

    pub fn region_quota(&self, len: usize) -> usize {
        (32 * self.k * len).div_ceil(self.m)
    }
}

/// A repetitive region of the pattern with its periodic reference (pattern
/// coordinates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub span: Interval,
    pub period: PeriodRef,
    pub mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionOutcome {
    Breaks(Vec<Interval>),
    Regions(Vec<Region>),
    Periodic {
        period: PeriodRef,
        mismatches: MismatchList,
    },
}

/// Splits the pattern (`pattern` is `P_#` in `index`). Requires `k >= 1`
/// and `16 D <= m`.
pub fn decompose(
    index: &PillarIndex,
    pattern: Fragment,
    p: &WString,
    k: usize,
) -> Result<DecompositionOutcome> {
    assert!(k >= 1, "decomposition needs k >= 1");
    let prm = DecompParams::new(p, k);
    let m = prm.m;
    if 16 * p.d_count() > m {
        return Err(Error::DecompositionUnavailable("more than m/16 wildcards"));
    }
    let len = prm.break_len;
    if len == 0 {
        return Err(Error::DecompositionUnavailable("fragments would be empty"));
    }
    let host = Host {
        frag: pattern,
        groups: p.groups(),
    };
    let sparsifiers = unmarked_zeros(p.groups(), m).intervals;
    let mut breaks = Vec::new();
    let mut regions = Vec::new();
    let mut covered = 0usize;
    let mut j = 0usize;
    let mut iv = 0usize;
    loop {
        let mut found = None;
        while iv < sparsifiers.len() {
            let cur = sparsifiers[iv];
            let fs = cur.start.max(j + 1);
            if fs + len - 1 <= cur.end {
                found = Some(fs);
                break;
            }
            iv += 1;
        }
        let fs = found.ok_or(Error::DecompositionUnavailable(
            "no sparsifier fragment left",
        ))?;
        let fe = fs + len - 1;
        let per = index.smallest_period(&pattern.sub(fs, fe));
        if prm.above_period_floor(per) {
            breaks.push(Interval::new(fs, fe));
            j = fe;
            if breaks.len() == 2 * prm.gamma {
                return Ok(DecompositionOutcome::Breaks(breaks));
            }
            continue;
        }

        let period = PeriodRef::new(pattern.sub(fs, fs + per - 1), fs as isize);
        let mut mis = Vec::new();
        let mut region_end = None;
        for x in MisperiodCursor::new(index, host, period, Direction::Right, fe as isize + 1) {
            if x == m + 1 {
                break;
            }
            mis.push(x);
            if prm.quota_reached(mis.len(), x - fs + 1) {
                region_end = Some(x);
                break;
            }
        }
        if let Some(x) = region_end {
            regions.push(Region {
                span: Interval::new(fs, x),
                period,
                mismatches: mis.len(),
            });
            covered += x - fs + 1;
            j = x;
            if 8 * covered >= m {
                return Ok(DecompositionOutcome::Regions(regions));
            }
            continue;
        }

        let mut left = Vec::new();
        for x in MisperiodCursor::new(index, host, period, Direction::Left, fs as isize - 1) {
            if x == 0 {
                break;
            }
            left.push(x);
            let count = left.len() + mis.len();
            if prm.quota_reached(count, m - x + 1) {
                let region = Region {
                    span: Interval::new(x, m),
                    period,
                    mismatches: count,
                };
                return Ok(DecompositionOutcome::Regions(vec![region]));
            }
        }
        left.reverse();
        left.extend(mis);
        let q = period.q();
        return Ok(DecompositionOutcome::Periodic {
            period,
            mismatches: MismatchList::new(left, q, m),
        });
    }
}

/// Checks an outcome of [`decompose`] by direct scans of `p`: sizes,
/// disjointness, period floors and mismatch quotas. `index` must be the one
/// the outcome was computed with.
pub fn check_decomposition(
    index: &PillarIndex,
    p: &WString,
    k: usize,
    outcome: &DecompositionOutcome,
) -> std::result::Result<(), String> {
    let prm = DecompParams::new(p, k);
    let m = p.len();
    let sparse = unmarked_zeros(p.groups(), m).intervals;
    let mismatches = |r: &PeriodRef, a: usize, b: usize| -> Vec<usize> {
        (a..=b)
            .filter(|&y| !p.is_wildcard(y) && p.at(y) != r.symbol(index, y as isize))
            .collect()
    };
    let disjoint = |spans: &[Interval]| spans.windows(2).all(|w| w[0].end < w[1].start);
    match outcome {
        DecompositionOutcome::Breaks(b) => {
            if b.len() != 2 * prm.gamma || !disjoint(b) {
                return Err(format!(
                    "expected {} disjoint breaks, got {b:?}",
                    2 * prm.gamma
                ));
            }
            for iv in b {
                if iv.len() != prm.break_len {
                    return Err(format!("break {iv:?} has the wrong length"));
                }
                if !sparse
                    .iter()
                    .any(|s| s.start <= iv.start && iv.end <= s.end)
                {
                    return Err(format!("break {iv:?} is not made of sparsifiers"));
                }
                let syms: Vec<_> = (iv.start..=iv.end).map(|i| p.at(i)).collect();
                if !prm.above_period_floor(crate::pillar::smallest_period_of(&syms)) {
                    return Err(format!("break {iv:?} has a short period"));
                }
            }
        }
        DecompositionOutcome::Regions(rs) => {
            let spans: Vec<Interval> = rs.iter().map(|r| r.span).collect();
            let total: usize = spans.iter().map(|s| s.len()).sum();
            if 8 * total < m || !disjoint(&spans) {
                return Err(format!("regions cover {total} of {m} or overlap"));
            }
            for r in rs {
                if r.span.len() < prm.break_len || prm.above_period_floor(r.period.q()) {
                    return Err(format!("region {:?} too short or period too long", r.span));
                }
                let mis = mismatches(&r.period, r.span.start, r.span.end).len();
                if mis != prm.region_quota(r.span.len()) || mis != r.mismatches {
                    return Err(format!("region {:?} has {mis} mismatches", r.span));
                }
                let (a, b) = (r.span.start, r.span.end);
                if !sparse
                    .iter()
                    .any(|s| s.start.max(a) + prm.break_len <= s.end.min(b) + 1)
                {
                    return Err(format!("region {:?} holds no sparsifier fragment", r.span));
                }
            }
        }
        DecompositionOutcome::Periodic {
            period,
            mismatches: mi,
        } => {
            if prm.above_period_floor(period.q()) {
                return Err("periodic case with a long period".into());
            }
            let mis = mismatches(period, 1, m);
            if mis != mi.positions || mis.len() >= 32 * k {
                return Err(format!("{} mismatches against the period", mis.len()));
            }
        }
    }
    Ok(())
}

/// Starts receiving at least `2γ - k` votes from exact break occurrences.
pub fn case_breaks_candidates(inst: &Instance<'_>, k: usize, breaks: &[Interval]) -> Vec<isize> {
    let gamma = inst.p.g_count() + k;
    assert!(2 * gamma > k);
    let need = 2 * gamma - k;
    let max = inst.max_start();
    let mut marks: HashMap<usize, usize> = HashMap::new();
    for b in breaks {
        let bf = inst.pattern.sub(b.start, b.end);
        for j in solid_occurrences(inst.index, &bf, &inst.text) {
            if j >= b.start && j + 1 - b.start <= max {
                *marks.entry(j + 1 - b.start).or_default() += 1;
            }
        }
    }
    let mut out: Vec<isize> = marks
        .into_iter()
        .filter(|&(_, c)| c >= need)
        .map(|(p, _)| p as isize)
        .collect();
    out.sort_unstable();
    out
}

/// Starts whose weighted votes from approximate region occurrences reach
/// `m_R - m/16`.
pub fn case_regions_candidates(
    inst: &Instance<'_>,
    k: usize,
    regions: &[Region],
    stats: &mut Stats,
) -> Vec<isize> {
    let (m, d) = (inst.m(), inst.p.d_count());
    let max = inst.max_start();
    if max == 0 {
        return Vec::new();
    }
    let m_r: usize = regions.iter().map(|r| r.span.len()).sum();
    let mut weight: HashMap<usize, usize> = HashMap::new();
    for r in regions {
        let (a, b) = (r.span.start, r.span.end);
        let rl = r.span.len();
        let k_i = 16 * k * rl / m;
        let d_i = (32 * (k + d) * rl).div_ceil(m);
        let groups = clip_groups(inst.p.groups(), a, b);
        let host = Host {
            frag: inst.pattern.sub(a, b),
            groups: &groups,
        };
        let pref = PeriodRef::new(r.period.base, r.period.origin - a as isize + 1);
        let region_text = inst.text.sub(a, max + b - 1);
        let starts = region_occurrences(inst.index, host, pref, region_text, k_i, d_i, stats);
        for s in starts {
            *weight.entry(s).or_default() += rl;
        }
    }
    let mut out: Vec<isize> = weight
        .into_iter()
        .filter(|&(_, w)| 16 * w + m >= 16 * m_r)
        .map(|(p, _)| p as isize)
        .collect();
    out.sort_unstable();
    out
}

// k_i-mismatch occurrences of a region in `text`, chunked so every call sees
// at most 3|R|/2 text symbols.
fn region_occurrences(
    index: &PillarIndex,
    host: Host<'_>,
    pref: PeriodRef,
    text: Fragment,
    k_i: usize,
    d_i: usize,
    stats: &mut Stats,
) -> HashSet<usize> {
    let rl = host.len();
    let chunk = rl + rl / 2;
    let step = rl / 2 + 1;
    let mut out = HashSet::new();
    let mut st = 1;
    while st + rl - 1 <= text.len() {
        let t = text.sub(st, (st + chunk - 1).min(text.len()));
        let input = PeriodicInput {
            index,
            s: host,
            t,
            k: k_i,
            d: d_i,
            pref,
        };
        match occs_periodic(&input, Mode::Exact, stats) {
            Ok(set) => out.extend(set.materialize().into_iter().map(|o| st + o - 1)),
            Err(Error::PeriodicPreconditionViolated(_)) => {
                stats.fallbacks += 1;
                let v = Verifier {
                    index,
                    pattern: host.frag,
                    groups: host.groups,
                    text: t,
                };
                for o in 1..=v.positions() {
                    let (ok, calls) = v.check(o, k_i).expect("in range");
                    stats.kangaroo += 1;
                    stats.lce_calls += calls as u64;
                    if ok {
                        out.insert(st + o - 1);
                    }
                }
            }
            Err(e) => panic!("unexpected error in region matching: {e}"),
        }
        st += step;
    }
    out
}

/// k-mismatch occurrences of the pattern in the chunk (relative positions).
pub fn kmismatch_occurrences_chunk(
    inst: &Instance<'_>,
    k: usize,
    opts: ExactOptions,
    stats: &mut Stats,
) -> Result<OccurrenceSet> {
    let (m, n) = (inst.m(), inst.n());
    if 2 * n > 3 * m {
        return Err(Error::ChunkTooLong {
            text: n,
            pattern: m,
        });
    }
    let ctx = inst.context(k);
    if n < m {
        return Ok(OccurrenceSet::empty(ctx));
    }
    if k == 0 {
        return exact_occurrences_chunk(inst, opts, stats);
    }
    let d = inst.p.d_count();
    if k + d >= m {
        let all = Progression {
            start: 1,
            count: inst.max_start(),
        };
        return Ok(OccurrenceSet::new(ctx, 1, vec![all], vec![]));
    }
    if 16 * d > m {
        stats.verify_all_chunks += 1;
        return Ok(inst.verify_all(k, stats));
    }
    let outcome = match decompose(inst.index, inst.pattern, inst.p, k) {
        Ok(o) => o,
        Err(Error::DecompositionUnavailable(_)) => {
            stats.fallbacks += 1;
            stats.verify_all_chunks += 1;
            return Ok(inst.verify_all(k, stats));
        }
        Err(e) => return Err(e),
    };
    let cands = match outcome {
        DecompositionOutcome::Breaks(b) => {
            stats.breaks_chunks += 1;
            case_breaks_candidates(inst, k, &b)
        }
        DecompositionOutcome::Regions(r) => {
            stats.regions_chunks += 1;
            case_regions_candidates(inst, k, &r, stats)
        }
        DecompositionOutcome::Periodic { period, .. } => {
            let input = PeriodicInput {
                index: inst.index,
                s: inst.pattern_host(),
                t: inst.text,
                k,
                d: 64 * (d + k),
                pref: period,
            };
            match occs_periodic(&input, Mode::FineGrained, stats) {
                Ok(set) => {
                    stats.periodic_chunks += 1;
                    return Ok(set);
                }
                Err(Error::PeriodicPreconditionViolated(_)) => {
                    stats.fallbacks += 1;
                    stats.verify_all_chunks += 1;
                    return Ok(inst.verify_all(k, stats));
                }
                Err(e) => return Err(e),
            }
        }
    };
    let hits = inst.verify_candidates(cands, k, stats);
    Ok(OccurrenceSet::from_positions(ctx, hits))
}
