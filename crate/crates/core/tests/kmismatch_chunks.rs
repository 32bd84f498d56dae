use sparsimatch::exact::ExactOptions;
use sparsimatch::gen::{generate, Family, GenParams};
use sparsimatch::kmismatch::kmismatch_occurrences_chunk;
use sparsimatch::oracle::naive_occurrences;
use sparsimatch::pillar::PillarIndex;
use sparsimatch::stats::Stats;
use sparsimatch::structure::Instance;
use sparsimatch::wstring::{SolidString, StrId, WString};

fn chunk(p: &WString, t: &SolidString, k: usize, st: &mut Stats) -> Vec<usize> {
    let ph = p.substitute_hash();
    let idx = PillarIndex::build(&[t.symbols(), ph.symbols()]);
    let inst = Instance {
        index: &idx,
        p,
        pattern: idx.whole(StrId(1)),
        text: idx.whole(StrId(0)),
    };
    kmismatch_occurrences_chunk(&inst, k, ExactOptions::default(), st)
        .unwrap()
        .materialize()
}

#[test]
fn families_match_oracle() {
    let mut total = Stats::default();
    let mut seed = 0;
    for family in Family::ALL {
        for m in [200usize, 1100, 3000, 6000] {
            for k in [1usize, 2, 5] {
                for d in [0usize, 1, 3] {
                    seed += 1;
                    let n = m + m / 2 - (seed as usize % 7);
                    let prm = GenParams {
                        n,
                        m,
                        d,
                        g: d.clamp(1, 2),
                        k,
                        sigma: 3,
                    };
                    let (p, t) = generate(family, prm, seed);
                    let mut st = Stats::default();
                    let got = chunk(&p, &t, k, &mut st);
                    let want = naive_occurrences(&p, &t, k).occurrences;
                    assert_eq!(got, want, "{family:?} m={m} k={k} d={d} seed={seed}");
                    total.absorb_chunk(&st);
                }
            }
        }
    }
    assert!(total.breaks_chunks > 0 && total.regions_chunks > 0 && total.periodic_chunks > 0);
}

mod decomposition {
    use sparsimatch::gen::{generate, Family, GenParams};
    use sparsimatch::kmismatch::{check_decomposition, decompose, DecompositionOutcome};
    use sparsimatch::pillar::PillarIndex;
    use sparsimatch::wstring::{StrId, WString};

    fn check(p: &WString, k: usize) -> Option<&'static str> {
        let ph = p.substitute_hash();
        let idx = PillarIndex::build(&[ph.symbols()]);
        let out = decompose(&idx, idx.whole(StrId(0)), p, k).ok()?;
        if let Err(e) = check_decomposition(&idx, p, k, &out) {
            panic!("{e}");
        }
        Some(match out {
            DecompositionOutcome::Breaks(_) => "breaks",
            DecompositionOutcome::Regions(_) => "regions",
            DecompositionOutcome::Periodic { .. } => "periodic",
        })
    }

    #[test]
    fn outcomes_satisfy_invariants() {
        let mut seen = std::collections::BTreeMap::new();
        let mut seed = 1000;
        for family in Family::ALL {
            for m in [300usize, 2000, 5000, 9000] {
                for k in [1usize, 3] {
                    for d in [0usize, 2, 6] {
                        seed += 1;
                        let prm = GenParams {
                            n: m,
                            m,
                            d,
                            g: d.clamp(1, 3),
                            k,
                            sigma: 3,
                        };
                        let (p, _) = generate(family, prm, seed);
                        *seen
                            .entry(check(&p, k).unwrap_or("unavailable"))
                            .or_insert(0) += 1;
                    }
                }
            }
        }
        for kind in ["breaks", "regions", "periodic"] {
            assert!(
                seen.contains_key(kind),
                "no {kind} outcome generated: {seen:?}"
            );
        }
    }
}
