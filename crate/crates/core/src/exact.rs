//! Exact matching of a pattern with wildcards in one text chunk.
//!
//! A sparsifier fragment `S` of the pattern is located in the text. Few
//! occurrences are verified one by one. Otherwise `S` has a short period
//! `q`: either the whole pattern follows that period (swept by the
//! periodic engine), or the first misperiod of the pattern must land on a
//! text misperiod next to some `S`-run, which yields few candidates.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::occset::{OccurrenceSet, Progression};
use crate::periodic::{occs_periodic, Mode, PeriodicInput};
use crate::pillar::PeriodRef;
use crate::stats::Stats;
use crate::structure::{
    compute_s_runs, group_runs, solid_occurrences, sparsifier_fragment, Direction, Instance,
    MisperiodCursor, SRun,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Budget,
    TextEnd,
}

/// The extension `E_R` of an S-run and the text misperiods met on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunExtension {
    pub run: SRun,
    /// Leftmost (or, extending right, rightmost) position of `E_R`.
    pub extended_to: usize,
    pub misperiods: Vec<usize>,
    pub stopped_by: StopReason,
}

impl RunExtension {
    pub fn len(&self, dir: Direction) -> usize {
        match dir {
            Direction::Left => self.run.end + 1 - self.extended_to,
            Direction::Right => self.extended_to + 1 - self.run.start,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Skip runs whose extension is covered by a synchronised run.
    pub prune_synchronised: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            prune_synchronised: true,
        }
    }
}

fn extend_run(inst: &Instance<'_>, run: SRun, q: usize, d: usize, dir: Direction) -> RunExtension {
    let m = inst.m();
    let base = inst.text.sub(run.start, run.start + q - 1);
    let pref = PeriodRef::new(base, run.start as isize);
    let from = match dir {
        Direction::Left => run.start as isize - 1,
        Direction::Right => run.end as isize + 1,
    };
    let sentinel = match dir {
        Direction::Left => 0,
        Direction::Right => inst.n() + 1,
    };
    let mut misperiods = Vec::new();
    let mut extended_to = match dir {
        Direction::Left => 1,
        Direction::Right => inst.n(),
    };
    let mut stopped_by = StopReason::TextEnd;
    for z in MisperiodCursor::new(inst.index, inst.text_host(), pref, dir, from) {
        if z == sentinel {
            break;
        }
        misperiods.push(z);
        let len = match dir {
            Direction::Left => run.end + 1 - z,
            Direction::Right => z + 1 - run.start,
        };
        if misperiods.len() * m > 20 * d * len {
            extended_to = z;
            stopped_by = StopReason::Budget;
            break;
        }
    }
    RunExtension {
        run,
        extended_to,
        misperiods,
        stopped_by,
    }
}

/// Candidate starts `ν - μ + 1` (left) or `ν - μ_r + 1` (right) over the
/// misperiods `ν` of all run extensions, before clipping.
pub fn run_extension_candidates(
    inst: &Instance<'_>,
    runs: &[SRun],
    q: usize,
    mu: usize,
    dir: Direction,
    opts: ExactOptions,
    stats: &mut Stats,
) -> (Vec<isize>, Vec<RunExtension>) {
    let d = inst.p.d_count();
    let mut reach: HashMap<usize, usize> = HashMap::new();
    let mut exts = Vec::new();
    let order: Box<dyn Iterator<Item = &SRun>> = match dir {
        Direction::Left => Box::new(runs.iter().rev()),
        Direction::Right => Box::new(runs.iter()),
    };
    for &run in order {
        if opts.prune_synchronised {
            if let Some(&r) = reach.get(&run.phase) {
                let covered = match dir {
                    Direction::Left => r <= run.start,
                    Direction::Right => r >= run.end,
                };
                if covered {
                    continue;
                }
            }
        }
        let ext = extend_run(inst, run, q, d, dir);
        stats.extension_len += ext.len(dir) as u64;
        let e = reach.entry(run.phase).or_insert(ext.extended_to);
        *e = match dir {
            Direction::Left => (*e).min(ext.extended_to),
            Direction::Right => (*e).max(ext.extended_to),
        };
        exts.push(ext);
    }
    let cands = exts
        .iter()
        .flat_map(|e| e.misperiods.iter())
        .map(|&nu| nu as isize - mu as isize + 1)
        .collect();
    (cands, exts)
}

/// Exact occurrences of the pattern in the chunk (positions relative to the chunk).
pub fn exact_occurrences_chunk(
    inst: &Instance<'_>,
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
    let ctx = inst.context(0);
    if n < m {
        return Ok(OccurrenceSet::empty(ctx));
    }
    let d = inst.p.d_count();
    if d == 0 {
        stats.solid_chunks += 1;
        let q = inst.index.smallest_period(&inst.pattern);
        let occ = solid_occurrences(inst.index, &inst.pattern, &inst.text);
        let progs = group_runs(&occ, m, q)
            .into_iter()
            .map(|r| Progression {
                start: r.start,
                count: r.occ_count,
            })
            .collect();
        return Ok(OccurrenceSet::new(ctx, q, progs, vec![]));
    }
    if 4 * d >= m {
        stats.verify_all_chunks += 1;
        return Ok(inst.verify_all(0, stats));
    }
    let s = sparsifier_fragment(inst.p)?;
    let sf = inst.pattern.sub(s.start, s.end);
    let q = inst.index.smallest_period(&sf);
    let runs = compute_s_runs(inst.index, &sf, &inst.text, q);
    let occ_count: usize = runs.iter().map(|r| r.occ_count).sum();

    let few = occ_count < 384 * d;
    let short_period = q * 256 * d <= m;
    if !few && !short_period {
        stats.fallbacks += 1;
    }
    if few || !short_period {
        return Ok(case_one(inst, &runs, q, s.start, stats));
    }

    let host = inst.pattern_host();
    let mu = MisperiodCursor::from_anchor(inst.index, host, s.start, q, Direction::Left, s.end)
        .next()
        .unwrap();
    let mu_r = MisperiodCursor::from_anchor(inst.index, host, s.start, q, Direction::Right, s.end)
        .next()
        .unwrap();
    if mu == 0 && mu_r == m + 1 {
        let input = PeriodicInput {
            index: inst.index,
            s: host,
            t: inst.text,
            k: 0,
            d: 2 * d,
            pref: PeriodRef::new(inst.pattern.sub(s.start, s.start + q - 1), s.start as isize),
        };
        match occs_periodic(&input, Mode::Exact, stats) {
            Ok(set) => {
                stats.case2a_chunks += 1;
                return Ok(set);
            }
            Err(Error::PeriodicPreconditionViolated(_)) => {
                stats.fallbacks += 1;
                return Ok(case_one(inst, &runs, q, s.start, stats));
            }
            Err(e) => return Err(e),
        }
    }

    stats.case2b_chunks += 1;
    let mut cands = Vec::new();
    if mu != 0 {
        cands.extend(run_extension_candidates(inst, &runs, q, mu, Direction::Left, opts, stats).0);
    }
    if mu_r != m + 1 {
        cands.extend(
            run_extension_candidates(inst, &runs, q, mu_r, Direction::Right, opts, stats).0,
        );
    }
    let hits = inst.verify_candidates(cands, 0, stats);
    Ok(OccurrenceSet::from_positions(ctx, hits))
}

// Verify the start implied by every occurrence of S.
fn case_one(
    inst: &Instance<'_>,
    runs: &[SRun],
    q: usize,
    x: usize,
    stats: &mut Stats,
) -> OccurrenceSet {
    stats.case1_chunks += 1;
    let cands: Vec<isize> = runs
        .iter()
        .flat_map(|r| (0..r.occ_count).map(move |i| (r.start + i * q) as isize - x as isize + 1))
        .collect();
    let before = stats.kangaroo;
    let hits = inst.verify_candidates(cands, 0, stats);
    stats.case1_verifications += stats.kangaroo - before;
    OccurrenceSet::from_positions(inst.context(0), hits)
}
