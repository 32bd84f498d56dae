//! Exact and k-mismatch matching of a pattern with wildcards in a solid
//! text, with occurrences reported as arithmetic progressions plus extras.
//!
//! ```
//! use sparsimatch::{match_full, SolidString, WString};
//!
//! let p = WString::from_str_wild("a?a");
//! let t = SolidString::from_bytes(b"abaaba");
//! assert_eq!(match_full(&p, &t, 0).unwrap().materialize(), vec![1, 4]);
//! ```

pub mod driver;
pub mod error;
pub mod exact;
pub mod gen;
pub mod kmismatch;
pub mod lowerbound;
pub mod occset;
pub mod oracle;
pub mod periodic;
pub mod pillar;
pub mod stats;
pub mod structure;
pub mod wstring;

pub use driver::{match_full, match_with, BenchRecord, ChunkPlan, MatchConfig, MatchOutcome};
pub use error::{Error, Result};
pub use occset::{Context, OccurrenceReport, OccurrenceSet, Progression};
pub use stats::Stats;
pub use wstring::{SolidString, WString};
