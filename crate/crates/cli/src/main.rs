use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sparsimatch::driver::bench_once;
use sparsimatch::gen::{generate, rng, sample_params, Family, GenParams};
use sparsimatch::lowerbound::{build_instance, certify_instance};
use sparsimatch::oracle::naive_occurrences;
use sparsimatch::{
    match_with, BenchRecord, MatchConfig, OccurrenceSet, SolidString, Stats, WString,
};

#[derive(Parser)]
#[command(
    name = "sparsimatch",
    version,
    about = "Exact and k-mismatch matching with wildcards"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Report all positions with at most k mismatches.
    Match(MatchArgs),
    /// Same as `match --k 0`.
    Exact(InputArgs),
    /// Brute-force matching, cross-checked against the fast matcher.
    Oracle(MatchArgs),
    /// Write a lower-bound instance and its certificate.
    GenLb {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out_prefix: PathBuf,
        #[arg(long, default_value = "?")]
        wildcard_char: char,
    },
    /// Time the matcher on generated corpora; CSV on stdout.
    Bench(BenchArgs),
    /// Randomized differential test against the oracle.
    Selftest {
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        max_m: usize,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Pattern file; with no file flags the first stdin line is the pattern
    /// and the rest of stdin is the text.
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// Text file; read from stdin when absent.
    #[arg(long)]
    text: Option<PathBuf>,
    #[arg(long, default_value = "?")]
    wildcard_char: char,
    #[arg(long, value_enum, default_value_t = Output::Json)]
    output: Output,
    /// Print every position as an extra instead of progressions.
    #[arg(long)]
    explicit: bool,
    /// Include work counters in the output.
    #[arg(long)]
    stats: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Args)]
struct MatchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 0)]
    k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchFamily {
    Random,
    Periodic,
    Blocks,
    Planted,
    LowerBound,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value_t = BenchFamily::Periodic)]
    family: BenchFamily,
    /// Text lengths; may be repeated.
    #[arg(long, num_args = 1.., default_values_t = [1usize << 16])]
    n: Vec<usize>,
    /// Pattern length; defaults to n/2.
    #[arg(long)]
    m: Option<usize>,
    /// Wildcards, groups and threshold default to the cube root of n.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    g: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 4)]
    sigma: u32,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Match(a) => cmd_match(&a.input, a.k),
        Cmd::Exact(a) => cmd_match(&a, 0),
        Cmd::Oracle(a) => cmd_oracle(&a.input, a.k),
        Cmd::GenLb {
            d,
            k,
            out_prefix,
            wildcard_char,
        } => cmd_gen_lb(d, k, &out_prefix, wc_byte(wildcard_char)?),
        Cmd::Bench(a) => cmd_bench(&a),
        Cmd::Selftest { cases, seed, max_m } => cmd_selftest(cases, seed, max_m),
    }
}

fn wc_byte(c: char) -> Result<u8> {
    if !c.is_ascii() {
        bail!("wildcard character must be a single byte, got {c:?}");
    }
    Ok(c as u8)
}

fn read_inputs(a: &InputArgs) -> Result<(WString, SolidString)> {
    let wc = wc_byte(a.wildcard_char)?;
    let read = |p: &Path| fs::read(p).with_context(|| format!("reading {}", p.display()));
    let stdin = || -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).context("reading stdin")?;
        Ok(buf)
    };
    let (pat, txt) = match (&a.pattern, &a.text) {
        (Some(p), Some(t)) => (read(p)?, read(t)?),
        (Some(p), None) => (read(p)?, stdin()?),
        (None, Some(_)) => bail!("--text given without --pattern"),
        (None, None) => {
            let buf = stdin()?;
            let Some(nl) = buf.iter().position(|&b| b == b'\n') else {
                bail!("stdin mode expects the pattern on the first line and the text after it");
            };
            (buf[..nl].to_vec(), buf[nl + 1..].to_vec())
        }
    };
    Ok((WString::parse(&pat, wc)?, SolidString::parse(&txt)))
}

#[derive(Serialize)]
struct Counters {
    n: usize,
    m: usize,
    d: usize,
    g: usize,
    k: usize,
    kangaroo_count: u64,
    event_count: u64,
    candidate_count: u64,
    chunks: u64,
    fallbacks: u64,
}

fn counters(p: &WString, t: &SolidString, k: usize, st: &Stats) -> Counters {
    Counters {
        n: t.len(),
        m: p.len(),
        d: p.d_count(),
        g: p.g_count(),
        k,
        kangaroo_count: st.kangaroo,
        event_count: st.events,
        candidate_count: st.candidates,
        chunks: st.chunks,
        fallbacks: st.fallbacks,
    }
}

fn emit(set: OccurrenceSet, a: &InputArgs, extra: Option<Counters>) -> Result<()> {
    let set = if a.explicit { set.into_explicit() } else { set };
    let out = io::stdout();
    let mut out = out.lock();
    match a.output {
        Output::Json => {
            let mut v = serde_json::to_value(set.report())?;
            if let Some(c) = extra {
                v["stats"] = serde_json::to_value(c)?;
            }
            writeln!(out, "{v}")?;
        }
        Output::Tsv => {
            for p in set.materialize() {
                writeln!(out, "{p}")?;
            }
            if let Some(c) = extra {
                eprintln!("{}", serde_json::to_string(&c)?);
            }
        }
    }
    Ok(())
}

fn cmd_match(a: &InputArgs, k: usize) -> Result<ExitCode> {
    let (p, t) = read_inputs(a)?;
    let cfg = MatchConfig::new(k).threads(a.threads);
    let out = match_with(&p, &t, &cfg)?;
    let c = a.stats.then(|| counters(&p, &t, k, &out.stats));
    emit(out.occurrences, a, c)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(a: &InputArgs, k: usize) -> Result<ExitCode> {
    let (p, t) = read_inputs(a)?;
    let expect = naive_occurrences(&p, &t, k).occurrences;
    let got = match_with(&p, &t, &MatchConfig::new(k).threads(a.threads))?;
    let agree = got.occurrences.materialize() == expect;
    let c = a.stats.then(|| counters(&p, &t, k, &got.stats));
    let ctx = got.occurrences.context();
    emit(OccurrenceSet::from_positions(ctx, expect), a, c)?;
    if !agree {
        eprintln!("mismatch: matcher output differs from the brute-force result");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_gen_lb(d: usize, k: usize, prefix: &Path, wc: u8) -> Result<ExitCode> {
    let inst = build_instance(d, k)?;
    let cert = match certify_instance(&inst) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return Ok(ExitCode::from(1));
        }
    };
    let files = [
        (with_suffix(prefix, ".pattern"), inst.p.to_bytes(wc)),
        (with_suffix(prefix, ".text"), inst.t.to_bytes()),
        (
            with_suffix(prefix, ".cert.json"),
            serde_json::to_vec_pretty(&cert)?,
        ),
    ];
    for (path, bytes) in &files {
        fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
        println!("{}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(a: &BenchArgs) -> Result<ExitCode> {
    println!("{}", BenchRecord::CSV_HEADER);
    for &n in &a.n {
        let cube = (n as f64).cbrt().floor() as usize;
        let m = a.m.unwrap_or(n / 2).max(1);
        let (d, g, k) = (
            a.d.unwrap_or(cube),
            a.g.unwrap_or(cube),
            a.k.unwrap_or(cube),
        );
        for rep in 0..a.reps {
            let seed = a.seed + rep as u64;
            let (name, p, t) = match a.family {
                BenchFamily::LowerBound => {
                    let inst = build_instance(d, k - k % 2)?;
                    ("lower-bound", inst.p, inst.t)
                }
                f => {
                    let fam = match f {
                        BenchFamily::Random => Family::Random,
                        BenchFamily::Periodic => Family::Periodic,
                        BenchFamily::Blocks => Family::Blocks,
                        _ => Family::Planted,
                    };
                    let (p, t) = generate(
                        fam,
                        GenParams {
                            n,
                            m,
                            d,
                            g,
                            k,
                            sigma: a.sigma,
                        },
                        seed,
                    );
                    (family_name(fam), p, t)
                }
            };
            let cfg = MatchConfig::new(if a.family == BenchFamily::LowerBound {
                k - k % 2
            } else {
                k
            })
            .threads(a.threads);
            println!("{}", bench_once(name, &p, &t, &cfg)?.csv_row());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Random => "random",
        Family::Periodic => "periodic",
        Family::Blocks => "blocks",
        Family::Planted => "planted",
    }
}

fn cmd_selftest(cases: usize, seed: u64, max_m: usize) -> Result<ExitCode> {
    let mut r = rng(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let family = Family::ALL[case % Family::ALL.len()];
        let prm = sample_params(&mut r, 1..=max_m.max(1), &[0, 1, 2, 5], 4);
        let case_seed = seed.wrapping_mul(1_000_003).wrapping_add(case as u64);
        let (p, t) = generate(family, prm, case_seed);
        let expect = naive_occurrences(&p, &t, prm.k).occurrences;
        let got = match_with(&p, &t, &MatchConfig::new(prm.k))?
            .occurrences
            .materialize();
        if got != expect {
            failures
                .push(json!({ "case": case, "family": family, "params": prm, "seed": case_seed }));
        }
    }
    let report = json!({
        "seed": seed,
        "cases": cases,
        "passed": cases - failures.len(),
        "failed": failures.len(),
        "failures": failures,
    });
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
