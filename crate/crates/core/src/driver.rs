//! Whole-text matching: the text is cut into overlapping chunks of length
//! at most `3m/2`, each chunk is matched on its own, and the results are
//! shifted back and merged.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_occurrences_chunk, ExactOptions};
use crate::kmismatch::kmismatch_occurrences_chunk;
use crate::occset::{Context, OccurrenceSet};
use crate::pillar::PillarIndex;
use crate::stats::Stats;
use crate::structure::Instance;
use crate::wstring::{Interval, SolidString, StrId, WString};

/// Chunk layout for a text of length `n` and a pattern of length `m`.
///
/// Consecutive chunks overlap in `m - 1` positions, so every window of
/// length `m` lies in some chunk and every start position belongs to exactly
/// one chunk's start range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkPlan {
    pub n: usize,
    pub m: usize,
    pub chunk_starts: Vec<usize>,
    pub chunk_len: usize,
    pub step: usize,
}

impl ChunkPlan {
    pub fn new(n: usize, m: usize) -> Self {
        assert!(m >= 1);
        let step = m / 2 + 1;
        let chunk_len = m + m / 2;
        let chunk_starts = if n < m {
            vec![]
        } else {
            (1..=n + 1 - m).step_by(step).collect()
        };
        ChunkPlan {
            n,
            m,
            chunk_starts,
            chunk_len,
            step,
        }
    }

    pub fn len(&self) -> usize {
        self.chunk_starts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chunk_starts.is_empty()
    }

    pub fn overlap(&self) -> usize {
        self.m - 1
    }

    pub fn chunk(&self, i: usize) -> Interval {
        let s = self.chunk_starts[i];
        Interval::new(s, (s + self.chunk_len - 1).min(self.n))
    }

    /// Index of the chunk whose start range contains `pos`.
    pub fn owner(&self, pos: usize) -> Option<usize> {
        if pos == 0 || pos + self.m > self.n + 1 {
            return None;
        }
        Some((pos - 1) / self.step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchConfig {
    pub k: usize,
    /// Worker threads; 0 uses the global rayon pool, 1 runs sequentially.
    pub threads: usize,
    pub exact: ExactOptions,
}

impl MatchConfig {
    pub fn new(k: usize) -> Self {
        MatchConfig {
            k,
            threads: 1,
            exact: ExactOptions::default(),
        }
    }

    pub fn threads(self, threads: usize) -> Self {
        MatchConfig { threads, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchOutcome {
    pub occurrences: OccurrenceSet,
    pub stats: Stats,
}

/// All k-mismatch occurrences of `p` in `t`.
pub fn match_full(p: &WString, t: &SolidString, k: usize) -> Result<OccurrenceSet> {
    Ok(match_with(p, t, &MatchConfig::new(k))?.occurrences)
}

pub fn match_with(p: &WString, t: &SolidString, cfg: &MatchConfig) -> Result<MatchOutcome> {
    let (m, n) = (p.len(), t.len());
    if m == 0 {
        return Err(Error::EmptyPattern);
    }
    let ctx = Context {
        text_len: n,
        pattern_len: m,
        k: cfg.k,
    };
    let plan = ChunkPlan::new(n, m);
    if plan.is_empty() {
        return Ok(MatchOutcome {
            occurrences: OccurrenceSet::empty(ctx),
            stats: Stats::default(),
        });
    }
    let ph = p.substitute_hash();
    let index = PillarIndex::build(&[t.symbols(), ph.symbols()]);
    let pattern = index.whole(StrId(1));
    let text = index.whole(StrId(0));
    let run_chunk = |i: usize| -> Result<(OccurrenceSet, Stats)> {
        let c = plan.chunk(i);
        let inst = Instance {
            index: &index,
            p,
            pattern,
            text: text.sub(c.start, c.end),
        };
        let mut st = Stats {
            chunks: 1,
            ..Stats::default()
        };
        let set = if cfg.k == 0 {
            exact_occurrences_chunk(&inst, cfg.exact, &mut st)?
        } else {
            kmismatch_occurrences_chunk(&inst, cfg.k, cfg.exact, &mut st)?
        };
        Ok((set, st))
    };
    let results = run_chunks(plan.len(), cfg.threads, run_chunk)?;

    let mut stats = Stats::default();
    let mut sets = Vec::with_capacity(results.len());
    for (set, st) in results {
        stats.absorb_chunk(&st);
        sets.push(set);
    }
    let offsets: Vec<usize> = plan.chunk_starts.iter().map(|s| s - 1).collect();
    let occurrences = OccurrenceSet::union_shift(ctx, &sets, &offsets)?;
    Ok(MatchOutcome { occurrences, stats })
}

#[cfg(feature = "parallel")]
fn run_chunks<T, F>(count: usize, threads: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync,
{
    use rayon::prelude::*;
    match threads {
        1 => (0..count).map(f).collect(),
        0 => (0..count).into_par_iter().map(&f).collect(),
        t => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .expect("thread pool");
            pool.install(|| (0..count).into_par_iter().map(&f).collect())
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn run_chunks<T, F>(count: usize, _threads: usize, f: F) -> Result<Vec<T>>
where
    F: Fn(usize) -> Result<T>,
{
    (0..count).map(f).collect()
}

/// One timed run with its work counters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub family: String,
    pub n: usize,
    pub m: usize,
    pub d: usize,
    pub g: usize,
    pub k: usize,
    pub threads: usize,
    pub wall_time: f64,
    pub occurrences: usize,
    pub kangaroo_count: u64,
    pub event_count: u64,
    pub candidate_count: u64,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str =
        "family,n,m,d,g,k,threads,wall_time,occurrences,kangaroo_count,event_count,candidate_count";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{:.6},{},{},{},{}",
            self.family,
            self.n,
            self.m,
            self.d,
            self.g,
            self.k,
            self.threads,
            self.wall_time,
            self.occurrences,
            self.kangaroo_count,
            self.event_count,
            self.candidate_count
        )
    }
}

/// Runs the matcher once and records time and counters.
pub fn bench_once(
    family: &str,
    p: &WString,
    t: &SolidString,
    cfg: &MatchConfig,
) -> Result<BenchRecord> {
    let start = Instant::now();
    let out = match_with(p, t, cfg)?;
    let wall_time = start.elapsed().as_secs_f64();
    Ok(BenchRecord {
        family: family.to_string(),
        n: t.len(),
        m: p.len(),
        d: p.d_count(),
        g: p.g_count(),
        k: cfg.k,
        threads: cfg.threads,
        wall_time,
        occurrences: out.occurrences.count(),
        kangaroo_count: out.stats.kangaroo,
        event_count: out.stats.events,
        candidate_count: out.stats.candidates,
    })
}
