use proptest::prelude::*;
use sparsimatch::oracle::naive_misperiods;
use sparsimatch::pillar::{smallest_period_of, PillarIndex};
use sparsimatch::structure::{compute_s_runs, Direction, Host, MisperiodCursor, SRun};
use sparsimatch::wstring::{SolidString, StrId, Sym, WString, WILDCARD};

// Mostly periodic symbols with occasional noise; 3 encodes a wildcard.
fn noisy_periodic(max_len: usize, wild: bool) -> impl Strategy<Value = Vec<Sym>> {
    (
        1usize..4,
        1..max_len,
        proptest::collection::vec((0u32..10, 0u32..3), max_len),
    )
        .prop_map(move |(q, len, noise)| {
            (0..len)
                .map(|i| match noise[i].0 {
                    0 => noise[i].1,
                    1 if wild => WILDCARD,
                    _ => (i % q) as Sym,
                })
                .collect()
        })
}

fn naive_runs(t: &[Sym], s: &[Sym], q: usize) -> Vec<SRun> {
    let occ: Vec<usize> = (1..=(t.len() + 1).saturating_sub(s.len()))
        .filter(|&i| &t[i - 1..i - 1 + s.len()] == s)
        .collect();
    let mut runs: Vec<SRun> = Vec::new();
    for &o in &occ {
        match runs.last_mut() {
            Some(r) if r.start + r.occ_count * q == o => {
                r.occ_count += 1;
                r.end = o + s.len() - 1;
            }
            _ => runs.push(SRun {
                start: o,
                end: o + s.len() - 1,
                phase: 0,
                occ_count: 1,
            }),
        }
    }
    runs
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn misperiods_match_naive(host in noisy_periodic(60, true), a in 0usize..60, len in 1usize..12) {
        let n = host.len();
        let i = 1 + a % n;
        let j = (i + len - 1).min(n);
        prop_assume!((i..=j).all(|y| host[y - 1] != WILDCARD));
        let w = WString::from_symbols(host.clone());
        let wh = w.substitute_hash();
        let idx = PillarIndex::build(&[wh.symbols()]);
        let h = Host { frag: idx.whole(StrId(0)), groups: w.groups() };
        let q = smallest_period_of(&host[i - 1..j]);
        for dir in [Direction::Left, Direction::Right] {
            let got: Vec<usize> = MisperiodCursor::from_anchor(&idx, h, i, q, dir, j).collect();
            prop_assert_eq!(got, naive_misperiods(&host, i, j, dir));
        }
    }

    #[test]
    fn s_runs_match_naive_grouping(t in noisy_periodic(120, false), s_start in 0usize..120, s_len in 1usize..10) {
        let n = t.len();
        let a = s_start % n;
        let b = (a + s_len).min(n);
        let s = t[a..b].to_vec();
        let idx = PillarIndex::build(&[&t[..], &s[..]]);
        let q = smallest_period_of(&s);
        let runs = compute_s_runs(&idx, &idx.whole(StrId(1)), &idx.whole(StrId(0)), q);
        let want = naive_runs(&t, &s, q);
        prop_assert_eq!(runs.len(), want.len());
        for (r, w) in runs.iter().zip(&want) {
            prop_assert_eq!((r.start, r.end, r.occ_count), (w.start, w.end, w.occ_count));
        }
        for w in runs.windows(2) {
            prop_assert!(w[1].start > w[0].end || w[0].end - w[1].start + 1 < q, "runs overlap by q or more");
        }
        let _ = SolidString::from_symbols(t);
    }
}
