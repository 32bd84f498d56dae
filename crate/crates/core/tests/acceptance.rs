//! Acceptance run: one `[PASS]`/`[FAIL]` line per criterion, non-zero exit
//! if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use sparsimatch::gen::{generate, periodic_with_noise, rng, sample_params, Family, GenParams};
use sparsimatch::kmismatch::{check_decomposition, decompose};
use sparsimatch::lowerbound::{build_instance, certify_instance};
use sparsimatch::oracle::{naive_misperiods, naive_occurrences};
use sparsimatch::pillar::{smallest_period_of, PillarIndex};
use sparsimatch::structure::{
    compute_s_runs, unmarked_zeros, Direction, Host, MisperiodCursor, SRun,
};
use sparsimatch::wstring::{Interval, SolidString, StrId, Sym, WString, WILDCARD};
use sparsimatch::{match_full, match_with, MatchConfig, Stats};

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, ok: bool, detail: String, took: Duration) {
        if !ok {
            self.failed += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {id} {name}: {detail} ({:.1}s)", took.as_secs_f64());
    }
}

/// Work and size bounds observed over one suite.
#[derive(Default)]
struct Bounds {
    instances: usize,
    mismatches: Vec<String>,
    repr_violations: usize,
    work_violations: Vec<String>,
    total: Stats,
}

impl Bounds {
    fn observe(
        &mut self,
        label: &str,
        p: &WString,
        k: usize,
        set: &sparsimatch::OccurrenceSet,
        st: &Stats,
    ) {
        let (d, g, m) = (p.d_count() as u64, p.g_count() as u64, p.len() as u64);
        let k = k as u64;
        if set.progressions().len() as u64 > 4096 * (d + k + 1) * (g + 1)
            || set.extras().len() as u64 > 4096 * (d + k + 1) * (k + 1)
        {
            self.repr_violations += 1;
        }
        work_check(&mut self.work_violations, label, d, k, m, st);
        self.total.absorb_chunk(st);
    }

    fn branches(&self) -> String {
        let t = &self.total;
        format!(
            "branches: solid {} verify-all {} caseI {} caseIIa {} caseIIb {} breaks {} regions {} periodic {} fallbacks {}",
            t.solid_chunks,
            t.verify_all_chunks,
            t.case1_chunks,
            t.case2a_chunks,
            t.case2b_chunks,
            t.breaks_chunks,
            t.regions_chunks,
            t.periodic_chunks,
            t.fallbacks
        )
    }
}

fn work_check(out: &mut Vec<String>, label: &str, d: u64, k: u64, m: u64, st: &Stats) {
    let cap = 4096 * (d + k + 1);
    let checks = [
        ("kangaroo", st.max_chunk_kangaroo, cap),
        ("candidates", st.max_chunk_candidates, cap),
        ("case I", st.max_chunk_case1, 384 * d + 8),
        ("extension", st.max_chunk_extension, 4096 * m),
    ];
    for (what, got, bound) in checks {
        if got > bound {
            out.push(format!("{label}: {what} {got} > {bound}"));
        }
    }
}

fn run_case(bounds: &mut Bounds, label: &str, p: &WString, t: &SolidString, k: usize) {
    bounds.instances += 1;
    let out = match_with(p, t, &MatchConfig::new(k)).expect("matcher error");
    let want = naive_occurrences(p, t, k).occurrences;
    if out.occurrences.materialize() != want && bounds.mismatches.len() < 5 {
        bounds
            .mismatches
            .push(format!("{label} m={} n={} k={k}", p.len(), t.len()));
    }
    bounds.observe(label, p, k, &out.occurrences, &out.stats);
}

// Periodic, wildcard-heavy and sparsifier-edge instances.
fn adversarial(bounds: &mut Bounds, seed: u64, ks: &[usize], d_div: usize, per_kind: usize) {
    let mut r = rng(seed);
    for i in 0..per_kind {
        let m = r.gen_range(8..=512usize);
        let n = r.gen_range(m..=4 * m);
        let k = ks[i % ks.len()];
        let dmax = (m - 1) / d_div;
        let s = seed * 10_000 + i as u64;

        let d = r.gen_range(0..=dmax);
        let g = if d == 0 { 0 } else { r.gen_range(1..=d.min(8)) };
        let (p, t) = generate(
            Family::Periodic,
            GenParams {
                n,
                m,
                d,
                g,
                k,
                sigma: 2,
            },
            s,
        );
        run_case(bounds, "periodic", &p, &t, k);

        let g = if dmax == 0 {
            0
        } else {
            r.gen_range(1..=dmax.min(8))
        };
        let fam = if i % 2 == 0 {
            Family::Periodic
        } else {
            Family::Planted
        };
        let (p, t) = generate(
            fam,
            GenParams {
                n,
                m,
                d: dmax,
                g,
                k,
                sigma: 2,
            },
            s,
        );
        run_case(bounds, "wildcard-heavy", &p, &t, k);

        // isolated wildcards spread evenly: the sparsifier budget is spent everywhere
        let (p, t) = generate(
            Family::Periodic,
            GenParams {
                n,
                m,
                d: 0,
                g: 0,
                k,
                sigma: 2,
            },
            s,
        );
        let mut sym = p.symbols().to_vec();
        if let Some(gap) = m.checked_div(dmax) {
            for j in 0..dmax {
                sym[j * gap + gap / 2] = WILDCARD;
            }
        }
        run_case(
            bounds,
            "sparsifier-edge",
            &WString::from_symbols(sym),
            &t,
            k,
        );
    }
}

// Longer patterns with few wildcards, where the size thresholds admit the
// periodic branches.
fn large(bounds: &mut Bounds, seed: u64, ks: &[usize], count: usize) {
    let mut r = rng(seed + 77);
    for i in 0..count {
        let m = r.gen_range(1024..=6000usize);
        let n = r.gen_range(m..=2 * m);
        let k = ks[i % ks.len()];
        let d = r.gen_range(0..=3usize);
        let g = d.min(r.gen_range(1..=2));
        let noise = r.gen_range(0..=4usize);
        let family = [
            Family::Periodic,
            Family::Blocks,
            Family::Periodic,
            Family::Planted,
        ][i % 4];
        let (p, t) = generate(
            family,
            GenParams {
                n,
                m,
                d,
                g,
                k: noise,
                sigma: 2,
            },
            seed * 1_000 + i as u64,
        );
        run_case(bounds, "large", &p, &t, k);
    }
}

fn oracle_suite(seed: u64, cases: usize, ks: &[usize], d_div: usize) -> Bounds {
    let mut bounds = Bounds::default();
    let mut r = rng(seed);
    for i in 0..cases {
        let family = [
            Family::Random,
            Family::Planted,
            Family::Periodic,
            Family::Blocks,
        ][i % 4];
        let prm = sample_params(&mut r, 8..=512, ks, d_div);
        let (p, t) = generate(family, prm, seed * 100_000 + i as u64);
        run_case(&mut bounds, "random", &p, &t, prm.k);
    }
    adversarial(&mut bounds, seed, ks, d_div, 300);
    large(&mut bounds, seed, ks, 240);
    bounds
}

fn ball_ok(prefix: &[usize], n: usize, ones: usize, i: usize) -> bool {
    (1..=n).all(|r| {
        let lo = i.saturating_sub(r).max(1);
        let hi = (i + r).min(n);
        (prefix[hi] - prefix[lo - 1]) * n <= 8 * r * ones
    })
}

fn structural_suite() -> Vec<String> {
    let mut bad = Vec::new();
    let mut r = rng(4);

    for case in 0..3000 {
        let n = r.gen_range(1..=256usize);
        let density = [0.02, 0.1, 0.25, 0.5][case % 4];
        let bits: Vec<bool> = (0..n).map(|_| r.gen_bool(density)).collect();
        let w = WString::from_symbols(bits.iter().map(|&b| if b { WILDCARD } else { 1 }).collect());
        let u = unmarked_zeros(w.groups(), n);
        let mut prefix = vec![0; n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i] + bits[i] as usize;
        }
        let ok = 2 * u.total() + 2 * u.ones >= n
            && u.intervals.iter().all(|iv| {
                (iv.start..=iv.end).all(|i| !bits[i - 1] && ball_ok(&prefix, n, u.ones, i))
            });
        if !ok {
            bad.push(format!("ball property, vector {case}"));
        }
    }

    for case in 0..3000 {
        let n = r.gen_range(1..=80usize);
        let q = r.gen_range(1..=4usize);
        let host: Vec<Sym> = (0..n)
            .map(|i| match r.gen_range(0..12) {
                0 => r.gen_range(0..3),
                1 => WILDCARD,
                _ => (i % q) as Sym,
            })
            .collect();
        let i = r.gen_range(1..=n);
        let j = (i + r.gen_range(0..12)).min(n);
        if (i..=j).any(|y| host[y - 1] == WILDCARD) {
            continue;
        }
        let w = WString::from_symbols(host.clone());
        let wh = w.substitute_hash();
        let idx = PillarIndex::build(&[wh.symbols()]);
        let h = Host {
            frag: idx.whole(StrId(0)),
            groups: w.groups(),
        };
        let per = smallest_period_of(&host[i - 1..j]);
        for dir in [Direction::Left, Direction::Right] {
            let got: Vec<usize> = MisperiodCursor::from_anchor(&idx, h, i, per, dir, j).collect();
            if got != naive_misperiods(&host, i, j, dir) {
                bad.push(format!("misperiods, host {case} {dir:?}"));
            }
        }
    }

    for case in 0..3000 {
        let n = r.gen_range(1..=150usize);
        let q = r.gen_range(1..=4usize);
        let t: Vec<Sym> = (0..n)
            .map(|i| {
                if r.gen_range(0..10) == 0 {
                    r.gen_range(0..3)
                } else {
                    (i % q) as Sym
                }
            })
            .collect();
        let a = r.gen_range(0..n);
        let b = (a + r.gen_range(1..10)).min(n);
        let s = t[a..b].to_vec();
        let idx = PillarIndex::build(&[&t[..], &s[..]]);
        let per = smallest_period_of(&s);
        let runs = compute_s_runs(&idx, &idx.whole(StrId(1)), &idx.whole(StrId(0)), per);
        let occ: Vec<usize> = (1..=n + 1 - s.len())
            .filter(|&i| t[i - 1..i - 1 + s.len()] == s[..])
            .collect();
        let covered: Vec<usize> = runs
            .iter()
            .flat_map(|r: &SRun| (0..r.occ_count).map(move |x| r.start + x * per))
            .collect();
        let overlap_ok = runs
            .windows(2)
            .all(|w| w[1].start > w[0].end || w[0].end + 1 - w[1].start < per);
        if covered != occ || !overlap_ok {
            bad.push(format!("S-runs, text {case}"));
        }
    }

    let mut kinds = [0usize; 3];
    for (i, family) in Family::ALL.iter().cycle().take(400).enumerate() {
        let m = [300, 1200, 4000, 9000][(i / 4) % 4];
        let k = [1, 2, 5][(i / 16) % 3];
        let d = [0, 2, 6, m / 64][(i / 48) % 4];
        let (p, _) = generate(
            *family,
            GenParams {
                n: m,
                m,
                d,
                g: d.clamp(1, 4),
                k,
                sigma: 3,
            },
            50_000 + i as u64,
        );
        let ph = p.substitute_hash();
        let idx = PillarIndex::build(&[ph.symbols()]);
        let Ok(out) = decompose(&idx, idx.whole(StrId(0)), &p, k) else {
            continue;
        };
        kinds[match &out {
            sparsimatch::kmismatch::DecompositionOutcome::Breaks(_) => 0,
            sparsimatch::kmismatch::DecompositionOutcome::Regions(_) => 1,
            sparsimatch::kmismatch::DecompositionOutcome::Periodic { .. } => 2,
        }] += 1;
        if let Err(e) = check_decomposition(&idx, &p, k, &out) {
            bad.push(format!("decomposition {i}: {e}"));
        }
    }
    if kinds.contains(&0) {
        bad.push(format!("decomposition variants not all reached: {kinds:?}"));
    }
    bad
}

fn icbrt(n: usize) -> usize {
    let mut c = (n as f64).cbrt() as usize;
    while (c + 1).pow(3) <= n {
        c += 1;
    }
    while c.pow(3) > n {
        c -= 1;
    }
    c
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    v[v.len() / 2]
}

fn main() -> ExitCode {
    let mut rep = Report { failed: 0 };
    let mut work = Vec::new();

    let t0 = Instant::now();
    let s1 = oracle_suite(1, 10_000, &[0], 4);
    let ok = s1.mismatches.is_empty();
    rep.line(
        1,
        "oracle equivalence, exact",
        ok,
        format!(
            "{} instances, mismatches {:?}; {}",
            s1.instances,
            s1.mismatches,
            s1.branches()
        ),
        t0.elapsed(),
    );
    work.extend(s1.work_violations.iter().cloned());

    let t0 = Instant::now();
    let s2 = oracle_suite(2, 10_000, &[0, 1, 2, 5, 16], 8);
    rep.line(
        2,
        "oracle equivalence, k-mismatch",
        s2.mismatches.is_empty(),
        format!(
            "{} instances, mismatches {:?}; {}",
            s2.instances,
            s2.mismatches,
            s2.branches()
        ),
        t0.elapsed(),
    );
    work.extend(s2.work_violations.iter().cloned());

    rep.line(
        3,
        "representation bounds",
        s2.repr_violations == 0,
        format!(
            "{} violations over {} instances",
            s2.repr_violations, s2.instances
        ),
        Duration::ZERO,
    );

    let t0 = Instant::now();
    let bad = structural_suite();
    rep.line(
        4,
        "structural invariants",
        bad.is_empty(),
        format!("violations {:?}", &bad[..bad.len().min(5)]),
        t0.elapsed(),
    );

    let t0 = Instant::now();
    let lb = build_instance(4, 4).and_then(|inst| certify_instance(&inst).map(|c| (inst, c)));
    let (ok, detail) = match &lb {
        Ok((inst, c)) => {
            let same = match_full(&inst.p, &inst.t, 4).map(|s| s.materialize())
                == Ok(c.occurrences.clone());
            (
                c.occurrence_count >= 18 && c.progression_free && c.cover_lower_bound >= 9 && same,
                format!(
                    "{} occurrences, progression-free {}, cover bound {}, matcher agrees {same}",
                    c.occurrence_count, c.progression_free, c.cover_lower_bound
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    let took = t0.elapsed();
    rep.line(
        5,
        "lower-bound reproduction",
        ok && took.as_secs() < 10,
        detail,
        took,
    );

    let t0 = Instant::now();
    let mut times = Vec::new();
    for (i, n) in [1usize << 18, 1 << 19, 1 << 20].into_iter().enumerate() {
        let c = icbrt(n);
        let prm = GenParams {
            n,
            m: n / 2,
            d: c,
            g: c,
            k: c,
            sigma: 4,
        };
        let (p, t) = periodic_with_noise(2, prm, 70 + i as u64);
        let mut runs = Vec::new();
        for _ in 0..5 {
            let s = Instant::now();
            let out = match_with(&p, &t, &MatchConfig::new(c)).expect("matcher error");
            runs.push(s.elapsed().as_secs_f64());
            work_check(
                &mut work,
                "scaling",
                c as u64,
                c as u64,
                (n / 2) as u64,
                &out.stats,
            );
        }
        times.push(median(runs));
    }
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1] / w[0]).collect();
    let took = t0.elapsed();

    rep.line(
        6,
        "instrumented work bounds",
        work.is_empty(),
        format!("violations {:?}", &work[..work.len().min(5)]),
        Duration::ZERO,
    );
    rep.line(
        7,
        "scaling smoke test",
        ratios.iter().all(|&r| r <= 2.5) && took.as_secs() < 300,
        format!("median times {times:.3?} s, ratios {ratios:.2?}"),
        took,
    );

    let t0 = Instant::now();
    let v = WString::from_str_wild("cc?bdabcabcabcab");
    let vh = v.substitute_hash();
    let idx = PillarIndex::build(&[vh.symbols()]);
    let host = Host {
        frag: idx.whole(StrId(0)),
        groups: v.groups(),
    };
    let mut left: Vec<usize> = MisperiodCursor::from_anchor(&idx, host, 6, 3, Direction::Left, 13)
        .take(2)
        .collect();
    left.sort_unstable();
    let t = SolidString::from_bytes(b"cababcabcabcabc");
    let s = SolidString::from_bytes(b"abcab");
    let idx = PillarIndex::build(&[t.symbols(), s.symbols()]);
    let runs = compute_s_runs(&idx, &idx.whole(StrId(1)), &idx.whole(StrId(0)), 3);
    let spans: Vec<Interval> = runs.iter().map(|r| Interval::new(r.start, r.end)).collect();
    rep.line(
        8,
        "worked examples",
        left == [1, 5] && spans == [Interval::new(4, 14)],
        format!("left misperiods {left:?}, S-runs {spans:?}"),
        t0.elapsed(),
    );

    if rep.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
