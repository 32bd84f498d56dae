//! Work counters collected while matching.

use serde::Serialize;

/// Totals over a run, plus per-chunk maxima for the bounded quantities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub chunks: u64,
    /// Kangaroo verifications (candidate checks).
    pub kangaroo: u64,
    pub lce_calls: u64,
    /// Sweep events in the periodic engine.
    pub events: u64,
    /// Candidate positions handed to verification.
    pub candidates: u64,
    /// Verifications spent in the few-occurrences case of exact matching.
    pub case1_verifications: u64,
    /// Total length of run extensions.
    pub extension_len: u64,

    pub solid_chunks: u64,
    pub verify_all_chunks: u64,
    pub case1_chunks: u64,
    pub case2a_chunks: u64,
    pub case2b_chunks: u64,
    pub breaks_chunks: u64,
    pub regions_chunks: u64,
    pub periodic_chunks: u64,
    /// Fast paths abandoned because a size precondition failed.
    pub fallbacks: u64,

    pub max_chunk_kangaroo: u64,
    pub max_chunk_candidates: u64,
    pub max_chunk_case1: u64,
    pub max_chunk_extension: u64,
    pub max_chunk_events: u64,
}

impl Stats {
    /// Adds the counters of one chunk and updates the per-chunk maxima.
    pub fn absorb_chunk(&mut self, c: &Stats) {
        self.chunks += c.chunks.max(1);
        self.kangaroo += c.kangaroo;
        self.lce_calls += c.lce_calls;
        self.events += c.events;
        self.candidates += c.candidates;
        self.case1_verifications += c.case1_verifications;
        self.extension_len += c.extension_len;
        self.solid_chunks += c.solid_chunks;
        self.verify_all_chunks += c.verify_all_chunks;
        self.case1_chunks += c.case1_chunks;
        self.case2a_chunks += c.case2a_chunks;
        self.case2b_chunks += c.case2b_chunks;
        self.breaks_chunks += c.breaks_chunks;
        self.regions_chunks += c.regions_chunks;
        self.periodic_chunks += c.periodic_chunks;
        self.fallbacks += c.fallbacks;
        self.max_chunk_kangaroo = self
            .max_chunk_kangaroo
            .max(c.kangaroo)
            .max(c.max_chunk_kangaroo);
        self.max_chunk_candidates = self
            .max_chunk_candidates
            .max(c.candidates)
            .max(c.max_chunk_candidates);
        self.max_chunk_case1 = self
            .max_chunk_case1
            .max(c.case1_verifications)
            .max(c.max_chunk_case1);
        self.max_chunk_extension = self
            .max_chunk_extension
            .max(c.extension_len)
            .max(c.max_chunk_extension);
        self.max_chunk_events = self.max_chunk_events.max(c.events).max(c.max_chunk_events);
    }
}
