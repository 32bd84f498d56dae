//! Occurrence sets as arithmetic progressions with one shared difference,
//! plus explicit extra positions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArithProgression {
    pub start: usize,
    pub diff: usize,
    pub count: usize,
}

impl ArithProgression {
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        let (start, diff) = (self.start, self.diff);
        (0..self.count).map(move |i| start + i * diff)
    }

    pub fn last(&self) -> usize {
        self.start + (self.count - 1) * self.diff
    }
}

/// A progression inside an [`OccurrenceSet`]; its difference is the set's `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Progression {
    pub start: usize,
    pub count: usize,
}

/// Context shared by every occurrence set of one matching problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context {
    pub text_len: usize,
    pub pattern_len: usize,
    pub k: usize,
}

impl Context {
    pub fn max_start(&self) -> usize {
        (self.text_len + 1).saturating_sub(self.pattern_len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OccurrenceSet {
    q: usize,
    progressions: Vec<Progression>,
    extras: Vec<usize>,
    ctx: Context,
}

/// Serialized form of an [`OccurrenceSet`].
#[derive(Debug, Clone, Serialize)]
pub struct OccurrenceReport {
    pub q: usize,
    pub progressions: Vec<Progression>,
    pub extras: Vec<usize>,
    pub count: usize,
}

impl OccurrenceSet {
    pub fn empty(ctx: Context) -> Self {
        OccurrenceSet {
            q: 1,
            progressions: Vec::new(),
            extras: Vec::new(),
            ctx,
        }
    }

    /// Explicit positions only.
    pub fn from_positions(ctx: Context, mut positions: Vec<usize>) -> Self {
        positions.sort_unstable();
        positions.dedup();
        debug_assert!(positions.iter().all(|&p| p >= 1 && p <= ctx.max_start()));
        OccurrenceSet {
            q: 1,
            progressions: Vec::new(),
            extras: positions,
            ctx,
        }
    }

    /// Builds and normalizes a set. Progressions with `count == 0` are dropped.
    pub fn new(ctx: Context, q: usize, progressions: Vec<Progression>, extras: Vec<usize>) -> Self {
        assert!(q >= 1);
        let mut s = OccurrenceSet {
            q,
            progressions,
            extras,
            ctx,
        };
        s.normalize();
        s
    }

    pub fn context(&self) -> Context {
        self.ctx
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn progressions(&self) -> &[Progression] {
        &self.progressions
    }

    pub fn extras(&self) -> &[usize] {
        &self.extras
    }

    /// Number of stored items (progressions + extras).
    pub fn representation_size(&self) -> usize {
        self.progressions.len() + self.extras.len()
    }

    /// Sorted, deduplicated positions.
    pub fn materialize(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.extras.clone();
        for pr in &self.progressions {
            out.extend((0..pr.count).map(|i| pr.start + i * self.q));
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Number of distinct positions. Exact for normalized sets.
    pub fn count(&self) -> usize {
        self.progressions.iter().map(|p| p.count).sum::<usize>() + self.extras.len()
    }

    pub fn is_empty(&self) -> bool {
        self.count() == 0
    }

    pub fn contains(&self, pos: usize) -> bool {
        self.extras.binary_search(&pos).is_ok()
            || self.progressions.iter().any(|p| {
                pos >= p.start
                    && (pos - p.start).is_multiple_of(self.q)
                    && (pos - p.start) / self.q < p.count
            })
    }

    /// Merges overlapping or adjacent progressions of the same residue and
    /// drops extras already covered by a progression.
    pub fn normalize(&mut self) {
        let q = self.q;
        let mut by_residue: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for p in self.progressions.drain(..).filter(|p| p.count > 0) {
            by_residue
                .entry(p.start % q)
                .or_default()
                .push((p.start, p.start + (p.count - 1) * q));
        }
        let mut merged: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (res, mut spans) in by_residue {
            spans.sort_unstable();
            let mut out: Vec<(usize, usize)> = Vec::with_capacity(spans.len());
            for (a, b) in spans {
                match out.last_mut() {
                    Some(last) if a <= last.1 + q => last.1 = last.1.max(b),
                    _ => out.push((a, b)),
                }
            }
            merged.insert(res, out);
        }
        self.extras.sort_unstable();
        self.extras.dedup();
        self.extras.retain(|&x| {
            let Some(spans) = merged.get(&(x % q)) else {
                return true;
            };
            let i = spans.partition_point(|s| s.1 < x);
            !(i < spans.len() && spans[i].0 <= x)
        });
        self.progressions = merged
            .into_values()
            .flatten()
            .map(|(a, b)| Progression {
                start: a,
                count: (b - a) / q + 1,
            })
            .collect();
        self.progressions.sort_unstable();
    }

    /// Union of `sets[i]` shifted right by `offsets[i]`, in the context `ctx`.
    /// Sets whose `q` differs from the dominant one are folded into extras.
    pub fn union_shift(
        ctx: Context,
        sets: &[OccurrenceSet],
        offsets: &[usize],
    ) -> Result<OccurrenceSet> {
        assert_eq!(sets.len(), offsets.len());
        if sets
            .iter()
            .any(|s| s.ctx.pattern_len != ctx.pattern_len || s.ctx.k != ctx.k)
        {
            return Err(Error::ContextMismatch);
        }
        let mut weight: BTreeMap<usize, usize> = BTreeMap::new();
        for s in sets.iter().filter(|s| !s.progressions.is_empty()) {
            *weight.entry(s.q).or_default() += s.progressions.len();
        }
        let q = weight
            .iter()
            .max_by_key(|&(q, w)| (*w, std::cmp::Reverse(*q)))
            .map_or(1, |(q, _)| *q);
        let mut progressions = Vec::new();
        let mut extras = Vec::new();
        for (s, &off) in sets.iter().zip(offsets) {
            extras.extend(s.extras.iter().map(|&x| x + off));
            if s.q == q {
                progressions.extend(s.progressions.iter().map(|p| Progression {
                    start: p.start + off,
                    count: p.count,
                }));
            } else {
                for p in &s.progressions {
                    extras.extend((0..p.count).map(|i| p.start + i * s.q + off));
                }
            }
        }
        Ok(OccurrenceSet::new(ctx, q, progressions, extras))
    }

    /// Same positions, all as extras.
    pub fn into_explicit(self) -> OccurrenceSet {
        let ctx = self.ctx;
        OccurrenceSet::from_positions(ctx, self.materialize())
    }

    pub fn report(&self) -> OccurrenceReport {
        OccurrenceReport {
            q: self.q,
            progressions: self.progressions.clone(),
            extras: self.extras.clone(),
            count: self.count(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn ctx() -> Context {
        Context {
            text_len: 1000,
            pattern_len: 1,
            k: 0,
        }
    }

    fn pr(start: usize, count: usize) -> Progression {
        Progression { start, count }
    }

    #[test]
    fn materialize_examples() {
        let s = OccurrenceSet::new(ctx(), 3, vec![pr(1, 3)], vec![5]);
        assert_eq!(s.materialize(), vec![1, 4, 5, 7]);
        assert!(OccurrenceSet::empty(ctx()).materialize().is_empty());
    }

    #[test]
    fn normalize_examples() {
        let s = OccurrenceSet::new(ctx(), 3, vec![pr(1, 2), pr(7, 2)], vec![]);
        assert_eq!(s.progressions(), &[pr(1, 4)]);
        let s = OccurrenceSet::new(ctx(), 3, vec![pr(1, 3)], vec![4]);
        assert!(s.extras().is_empty());
        assert_eq!(s.count(), 3);
    }

    #[test]
    fn union_shift_examples() {
        let one = OccurrenceSet::from_positions(ctx(), vec![1]);
        let u = OccurrenceSet::union_shift(ctx(), &[one.clone(), one.clone()], &[0, 10]).unwrap();
        assert_eq!(u.materialize(), vec![1, 11]);
        let u = OccurrenceSet::union_shift(ctx(), &[one.clone(), one.clone()], &[4, 4]).unwrap();
        assert_eq!(u.materialize(), vec![5]);
        let other = OccurrenceSet::from_positions(Context { k: 1, ..ctx() }, vec![1]);
        assert_eq!(
            OccurrenceSet::union_shift(ctx(), &[one, other], &[0, 0]),
            Err(Error::ContextMismatch)
        );
    }

    #[test]
    fn report_shape() {
        let s = OccurrenceSet::new(ctx(), 2, vec![pr(1, 3)], vec![10]);
        let json = serde_json::to_value(s.report()).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"q": 2, "progressions": [{"start": 1, "count": 3}], "extras": [10], "count": 4})
        );
    }

    fn arb_set() -> impl Strategy<Value = (usize, Vec<(usize, usize)>, Vec<usize>)> {
        (
            1usize..6,
            proptest::collection::vec((1usize..60, 1usize..8), 0..6),
            proptest::collection::vec(1usize..100, 0..8),
        )
    }

    fn reference(q: usize, progs: &[(usize, usize)], extras: &[usize]) -> BTreeSet<usize> {
        let mut s: BTreeSet<usize> = extras.iter().copied().collect();
        for &(a, c) in progs {
            s.extend((0..c).map(|i| a + i * q));
        }
        s
    }

    proptest! {
        #[test]
        fn normalize_preserves_materialization((q, progs, extras) in arb_set()) {
            let s = OccurrenceSet::new(ctx(), q, progs.iter().map(|&(a, c)| pr(a, c)).collect(), extras.clone());
            let expect: Vec<usize> = reference(q, &progs, &extras).into_iter().collect();
            prop_assert_eq!(s.materialize(), expect.clone());
            prop_assert_eq!(s.count(), expect.len());
            for &x in &expect {
                prop_assert!(s.contains(x));
            }
            let again = OccurrenceSet::new(ctx(), q, s.progressions().to_vec(), s.extras().to_vec());
            prop_assert_eq!(again, s);
        }

        #[test]
        fn union_shift_preserves_materialization(a in arb_set(), b in arb_set(), oa in 0usize..50, ob in 0usize..50) {
            let sa = OccurrenceSet::new(ctx(), a.0, a.1.iter().map(|&(x, c)| pr(x, c)).collect(), a.2.clone());
            let sb = OccurrenceSet::new(ctx(), b.0, b.1.iter().map(|&(x, c)| pr(x, c)).collect(), b.2.clone());
            let u = OccurrenceSet::union_shift(ctx(), &[sa.clone(), sb.clone()], &[oa, ob]).unwrap();
            let mut expect: BTreeSet<usize> = sa.materialize().into_iter().map(|x| x + oa).collect();
            expect.extend(sb.materialize().into_iter().map(|x| x + ob));
            prop_assert_eq!(u.materialize(), expect.into_iter().collect::<Vec<_>>());
        }
    }
}
