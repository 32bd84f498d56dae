//! Brute-force references: position-by-position matching, the `#`
//! reduction, misperiods by definition, and the 3-term progression check.

use std::collections::HashSet;

use crate::structure::Direction;
use crate::wstring::{SolidString, Sym, WString, HASH, WILDCARD};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub occurrences: Vec<usize>,
    pub per_position_distance: Option<Vec<usize>>,
}

/// Mismatches of `p` against `window`, stopping once `limit` is exceeded.
fn capped_distance(p: &[Sym], window: &[Sym], limit: usize) -> usize {
    let mut d = 0;
    for (&a, &b) in p.iter().zip(window) {
        if a != WILDCARD && a != b {
            d += 1;
            if d > limit {
                break;
            }
        }
    }
    d
}

/// All `pos` with at most `k` mismatches, by direct scan.
pub fn naive_occurrences(p: &WString, t: &SolidString, k: usize) -> OracleReport {
    let (m, n) = (p.len(), t.len());
    if m > n {
        return OracleReport {
            occurrences: vec![],
            per_position_distance: None,
        };
    }
    let occurrences = (1..=n - m + 1)
        .filter(|&i| capped_distance(p.symbols(), &t.symbols()[i - 1..i - 1 + m], k) <= k)
        .collect();
    OracleReport {
        occurrences,
        per_position_distance: None,
    }
}

/// Like [`naive_occurrences`] but also records every exact distance.
pub fn naive_distances(p: &WString, t: &SolidString, k: usize) -> OracleReport {
    let (m, n) = (p.len(), t.len());
    if m > n {
        return OracleReport {
            occurrences: vec![],
            per_position_distance: Some(vec![]),
        };
    }
    let dist: Vec<usize> = (1..=n - m + 1)
        .map(|i| capped_distance(p.symbols(), &t.symbols()[i - 1..i - 1 + m], usize::MAX))
        .collect();
    let occurrences = (1..=dist.len()).filter(|&i| dist[i - 1] <= k).collect();
    OracleReport {
        occurrences,
        per_position_distance: Some(dist),
    }
}

/// Second reference: solid `(D + k)`-mismatch matching of `P_#` in `t`.
/// Agrees with [`naive_occurrences`] because `#` matches no text symbol.
pub fn reduction_occurrences(p: &WString, t: &SolidString, k: usize) -> Vec<usize> {
    let ph = p.substitute_hash();
    let (m, n) = (ph.len(), t.len());
    if m > n {
        return vec![];
    }
    let limit = p.d_count() + k;
    (1..=n - m + 1)
        .filter(|&i| {
            let w = &t.symbols()[i - 1..i - 1 + m];
            let mut d = 0;
            for (&a, &b) in ph.symbols().iter().zip(w) {
                debug_assert!(b != HASH);
                if a != b {
                    d += 1;
                    if d > limit {
                        return false;
                    }
                }
            }
            true
        })
        .collect()
}

fn naive_period(s: &[Sym]) -> usize {
    (1..=s.len())
        .find(|&p| (p..s.len()).all(|i| s[i] == s[i - p]))
        .unwrap_or(0)
}

/// Misperiods of `host` relative to the solid anchor `host[i..=j]` (its
/// smallest period extended in both directions), in distance order from
/// the anchor, ending with the sentinel.
pub fn naive_misperiods(host: &[Sym], i: usize, j: usize, dir: Direction) -> Vec<usize> {
    let anchor = &host[i - 1..j];
    debug_assert!(anchor.iter().all(|&c| c != WILDCARD));
    let q = naive_period(anchor) as isize;
    let reference = |y: usize| host[i - 1 + (y as isize - i as isize).rem_euclid(q) as usize];
    let bad = |y: usize| host[y - 1] != WILDCARD && host[y - 1] != reference(y);
    match dir {
        Direction::Left => {
            let mut out: Vec<usize> = (1..i).rev().filter(|&y| bad(y)).collect();
            out.push(0);
            out
        }
        Direction::Right => {
            let mut out: Vec<usize> = (j + 1..=host.len()).filter(|&y| bad(y)).collect();
            out.push(host.len() + 1);
            out
        }
    }
}

/// True iff no three distinct elements satisfy `a + b = 2c`.
pub fn ap_free_check(s: &[usize]) -> bool {
    let set: HashSet<usize> = s.iter().copied().collect();
    let v: Vec<usize> = set.iter().copied().collect();
    for (x, &a) in v.iter().enumerate() {
        for &b in &v[x + 1..] {
            if (a + b) % 2 == 0 && set.contains(&((a + b) / 2)) {
                return false;
            }
        }
    }
    true
}
