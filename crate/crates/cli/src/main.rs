use std::io::{self, Write};
use std::process::ExitCode;
use std::sync::Arc;

use cayley_ramanujan::analytics::{enumerate_family, hl_constant, pi_f, residue_avoidance};
use cayley_ramanujan::bounds::{compute_l_hat, verify_l_hat};
use cayley_ramanujan::cayley::parse_subset_spec;
use cayley_ramanujan::classifier::{
    classify_prime, exhaustive_extremality, scan, tilde_l_exhaustive, PrimeClassification,
    PrimeVerdict, QuadraticFamily,
};
use cayley_ramanujan::error::Error;
use cayley_ramanujan::group::parse_group_spec;
use cayley_ramanujan::oracle::oracle_spectrum;
use cayley_ramanujan::spectra::{closed_form_spectrum, verdict, RamanujanVerdict, Spectrum};
use cayley_ramanujan::verify::{run_all, VerifyConfig};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Formula and oracle disagreement that fails `spectrum --oracle`.
const MISMATCH_TOLERANCE: f64 = 1e-6;
/// Eigenvalues closer than this are reported as one value with multiplicity.
const MERGE_TOLERANCE: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "cayley-ramanujan",
    version,
    about = "Ramanujan bounds for Cayley graphs of D_2p and F_{p,q}"
)]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, env = "RC_SEED", default_value_t = 0x5eed)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Spectrum and Ramanujan verdict of a Cayley graph.
    ///
    /// Groups: d2p:P or fpq:P,Q. Subsets: normal:X=..;Y=.., interval:l1=L1,l2=L2 or mask:HEX.
    Spectrum {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subset: String,
        /// Also compute the spectrum from the adjacency matrix and report max |delta|.
        #[arg(long)]
        oracle: bool,
    },
    /// Covalency lattice, trivial bound l0 and normal-subset bound l_hat.
    Bounds {
        #[arg(long)]
        group: String,
        /// Sweep every normal subset even when r >= 4 allows the fast path.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Classify a prime p >= 29 as exceptional or ordinary.
    Classify {
        #[arg(long)]
        p: u64,
    },
    /// Classify every prime in a range.
    ///
    /// CSV columns: p, parity, r, k, c, verdict, mu1, rb.
    Scan {
        #[arg(long, default_value_t = 29)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Only rows for exceptional primes.
        #[arg(long)]
        families: bool,
    },
    /// Truncated Hardy-Littlewood constant C(f)/2 of one family.
    Hl {
        #[arg(long)]
        r: u64,
        #[arg(long, allow_hyphen_values = true)]
        c: i64,
        /// Largest prime in the product; accepts forms like 1e7.
        #[arg(long, value_parser = parse_count, default_value = "1e7")]
        cutoff: u64,
        /// Also count k <= X with f(k) prime and compare with the prediction.
        #[arg(long, value_parser = parse_count)]
        pi_x: Option<u64>,
    },
    /// Values of the six families for k_min <= k <= kmax.
    ///
    /// CSV columns: r, c, k, value, is_prime.
    Families {
        #[arg(long)]
        kmax: u64,
        /// Shorthand for --format csv.
        #[arg(long)]
        csv: bool,
    },
    /// Residues mod a missed by every family, coprime to a.
    Avoid {
        #[arg(long)]
        a: u64,
    },
    /// Run the self-check suites; exits 1 if any fails.
    Verify {
        /// Fewer samples and smaller sweeps.
        #[arg(long)]
        quick: bool,
    },
    /// Exact l-tilde of D_2p for p <= 13 by sweeping every Cayley subset.
    Tilde {
        #[arg(long)]
        p: u64,
    },
}

fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = s.parse().map_err(|_| format!("not a count: {s}"))?;
    if f >= 0.0 && f.fract() == 0.0 && f <= u64::MAX as f64 {
        Ok(f as u64)
    } else {
        Err(format!("not a non-negative integer: {s}"))
    }
}

enum Failure {
    Core(Error),
    Mismatch(f64),
    VerifyFailed(usize),
    Output(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Output(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) => match e {
                Error::Parse(_)
                | Error::InvalidParameter(_)
                | Error::NotSymmetric(_)
                | Error::ContainsIdentity
                | Error::NotGenerating
                | Error::NotNormal
                | Error::UnsupportedFamily(_) => 2,
                Error::Guard { .. } => 3,
                Error::RouteDisagreement { .. } => 5,
                _ => 1,
            },
            Failure::Mismatch(_) => 4,
            Failure::VerifyFailed(_) | Failure::Output(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Mismatch(d) => {
                format!("formula and oracle differ by {d:.3e} (limit {MISMATCH_TOLERANCE:e})")
            }
            Failure::VerifyFailed(n) => format!("{n} check(s) failed"),
            Failure::Output(m) => format!("output error: {m}"),
        }
    }
}

#[derive(Serialize)]
struct Eigenvalue {
    value: f64,
    multiplicity: usize,
}

#[derive(Serialize)]
struct OracleDelta {
    max_delta: f64,
}

#[derive(Serialize)]
struct SpectrumReport {
    schema: u32,
    group: String,
    subset: String,
    size: usize,
    covalency: u64,
    source: cayley_ramanujan::spectra::SpectrumSource,
    eigenvalues: Vec<Eigenvalue>,
    verdict: RamanujanVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleDelta>,
}

fn merged(s: &Spectrum) -> Vec<Eigenvalue> {
    let mut out: Vec<Eigenvalue> = Vec::new();
    for &(v, m) in &s.entries {
        match out.last_mut() {
            Some(last) if (last.value - v).abs() < MERGE_TOLERANCE => last.multiplicity += m,
            _ => out.push(Eigenvalue {
                value: if v.abs() < MERGE_TOLERANCE { 0.0 } else { v },
                multiplicity: m,
            }),
        }
    }
    out
}

fn emit_json<T: Serialize>(out: &mut impl Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct ScanRow {
    p: u64,
    parity: String,
    r: u64,
    k: u64,
    c: i64,
    verdict: String,
    mu1: f64,
    rb: f64,
}

impl From<&PrimeClassification> for ScanRow {
    fn from(c: &PrimeClassification) -> Self {
        ScanRow {
            p: c.p,
            parity: c.parity.to_string(),
            r: c.r,
            k: c.k,
            c: c.c,
            verdict: c.verdict.to_string(),
            mu1: c.mu1,
            rb: c.rb,
        }
    }
}

#[derive(Serialize)]
struct ScanReport<'a> {
    schema: u32,
    from: u64,
    to: u64,
    rows: &'a [PrimeClassification],
}

#[derive(Serialize)]
struct FamilyRow {
    r: u64,
    c: i64,
    k: u64,
    value: u64,
    is_prime: bool,
}

#[derive(Serialize)]
struct FamiliesReport<'a> {
    schema: u32,
    kmax: u64,
    rows: &'a [FamilyRow],
}

#[derive(Serialize)]
struct HlReport {
    #[serde(flatten)]
    estimate: cayley_ramanujan::analytics::HLEstimate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pi_f: Option<cayley_ramanujan::analytics::PiF>,
}

#[derive(Serialize)]
struct TildeOutput {
    #[serde(flatten)]
    report: cayley_ramanujan::classifier::TildeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    extremality: Option<cayley_ramanujan::classifier::ExtremalityReport>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    schema: u32,
    seed: u64,
    passed: bool,
    checks: &'a [cayley_ramanujan::verify::CheckOutcome],
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Spectrum {
            group,
            subset,
            oracle,
        } => {
            let g = Arc::new(parse_group_spec(&group)?);
            let s = parse_subset_spec(g.clone(), &subset)?;
            let spec = closed_form_spectrum(&s)?;
            let delta = if oracle {
                Some(spec.max_abs_diff(&oracle_spectrum(&s)?))
            } else {
                None
            };
            let report = SpectrumReport {
                schema: 1,
                group: g.spec_string(),
                subset: s.to_string(),
                size: s.size(),
                covalency: s.covalency(),
                source: spec.source,
                eigenvalues: merged(&spec),
                verdict: verdict(&spec),
                oracle: delta.map(|max_delta| OracleDelta { max_delta }),
            };
            if format == Some(Format::Pretty) {
                writeln!(out, "group     {}", report.group)?;
                writeln!(out, "subset    {}", report.subset)?;
                writeln!(
                    out,
                    "valency   {}  covalency {}",
                    report.size, report.covalency
                )?;
                for e in &report.eigenvalues {
                    writeln!(out, "  {:>14.9} x{}", e.value, e.multiplicity)?;
                }
                let v = &report.verdict;
                writeln!(out, "mu {:.9}  bound {:.9}  {:?}", v.mu, v.bound, v.status)?;
                if let Some(d) = delta {
                    writeln!(out, "oracle max |delta| {d:.3e}")?;
                }
            } else {
                emit_json(out, &report)?;
            }
            match delta {
                Some(d) if d > MISMATCH_TOLERANCE => Err(Failure::Mismatch(d)),
                _ => Ok(()),
            }
        }
        Command::Bounds { group, exhaustive } => {
            let g = parse_group_spec(&group)?;
            let report = if exhaustive {
                verify_l_hat(&g)?
            } else {
                compute_l_hat(&g)?
            };
            if format == Some(Format::Pretty) {
                writeln!(
                    out,
                    "group {}  |G| = {}  r = {}",
                    report.group, report.order, report.ratio
                )?;
                writeln!(out, "L = {:?}", report.lattice)?;
                writeln!(
                    out,
                    "l0 = {}  l_hat = {}  ({:?})",
                    report.l0, report.l_hat, report.method
                )?;
                if let Some(w) = &report.witness {
                    writeln!(
                        out,
                        "witness {} at l = {}: mu {:.9} > {:.9}",
                        w.subset, w.covalency, w.mu, w.bound
                    )?;
                }
                Ok(())
            } else {
                emit_json(out, &report)
            }
        }
        Command::Classify { p } => {
            let c = classify_prime(p)?;
            if format == Some(Format::Pretty) {
                writeln!(
                    out,
                    "p = {}  {}  l_hat = {}  l_tilde = {}  (r, c, k) = ({}, {}, {})  mu1 = {:.9}  rb = {:.9}",
                    c.p, c.verdict, c.l_hat, c.tilde_l, c.r, c.c, c.k, c.mu1, c.rb
                )?;
                Ok(())
            } else {
                emit_json(out, &c)
            }
        }
        Command::Scan { from, to, families } => {
            let mut rows = scan(from, to)?;
            if families {
                rows.retain(|r| r.verdict == PrimeVerdict::Exceptional);
            }
            match format.unwrap_or(Format::Csv) {
                Format::Json => emit_json(
                    out,
                    &ScanReport {
                        schema: 1,
                        from,
                        to,
                        rows: &rows,
                    },
                ),
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    for r in &rows {
                        w.serialize(ScanRow::from(r))?;
                    }
                    if rows.is_empty() {
                        w.write_record(["p", "parity", "r", "k", "c", "verdict", "mu1", "rb"])?;
                    }
                    w.flush()?;
                    Ok(())
                }
                Format::Pretty => {
                    for r in &rows {
                        writeln!(
                            out,
                            "{:>8} {:>4} {} {:>4} {:>3} {:<11} {:.6} {:.6}",
                            r.p, r.parity, r.r, r.k, r.c, r.verdict, r.mu1, r.rb
                        )?;
                    }
                    Ok(())
                }
            }
        }
        Command::Hl { r, c, cutoff, pi_x } => {
            let family = QuadraticFamily::new(r, c)?;
            let estimate = hl_constant(&family, cutoff)?;
            let pi = pi_x.map(|x| pi_f(&family, x, &estimate)).transpose()?;
            if format == Some(Format::Pretty) {
                writeln!(
                    out,
                    "{family}: C(f)/2 ~ {:.6} (primes <= {})",
                    estimate.partial, estimate.cutoff
                )?;
                if let Some(pi) = &pi {
                    writeln!(
                        out,
                        "pi(f; {}) = {}, predicted {:.1}",
                        pi.x, pi.count, pi.prediction
                    )?;
                }
                Ok(())
            } else {
                emit_json(out, &HlReport { estimate, pi_f: pi })
            }
        }
        Command::Families { kmax, csv } => {
            let mut rows = Vec::new();
            for f in QuadraticFamily::all() {
                if kmax < f.k_min {
                    continue;
                }
                for m in enumerate_family(f, kmax)? {
                    rows.push(FamilyRow {
                        r: f.r,
                        c: f.c,
                        k: m.k,
                        value: m.value,
                        is_prime: m.is_prime,
                    });
                }
            }
            let format = if csv {
                Format::Csv
            } else {
                format.unwrap_or(Format::Json)
            };
            match format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    for row in &rows {
                        w.serialize(row)?;
                    }
                    w.flush()?;
                    Ok(())
                }
                Format::Pretty => {
                    for row in &rows {
                        writeln!(
                            out,
                            "({}, {:>2}) k = {:>4}  {:>10}{}",
                            row.r,
                            row.c,
                            row.k,
                            row.value,
                            if row.is_prime { "  prime" } else { "" }
                        )?;
                    }
                    Ok(())
                }
                Format::Json => emit_json(
                    out,
                    &FamiliesReport {
                        schema: 1,
                        kmax,
                        rows: &rows,
                    },
                ),
            }
        }
        Command::Avoid { a } => {
            let r = residue_avoidance(a)?;
            if format == Some(Format::Pretty) {
                writeln!(out, "J({}) = {:?}", r.a, r.residues)?;
                writeln!(out, "coprime residues outside J: {:?}", r.witnesses)?;
                Ok(())
            } else {
                emit_json(out, &r)
            }
        }
        Command::Verify { quick } => {
            let cfg = if quick {
                VerifyConfig {
                    seed: cli.seed,
                    random_oracle_samples: 500,
                    extremality_samples: 500,
                    dihedral_max_p: 31,
                }
            } else {
                VerifyConfig {
                    seed: cli.seed,
                    ..VerifyConfig::default()
                }
            };
            let checks = run_all(&cfg);
            let failed = checks.iter().filter(|c| !c.passed).count();
            if format == Some(Format::Json) {
                emit_json(
                    out,
                    &VerifyReport {
                        schema: 1,
                        seed: cfg.seed,
                        passed: failed == 0,
                        checks: &checks,
                    },
                )?;
            } else {
                for c in &checks {
                    writeln!(
                        out,
                        "{} {}: {}",
                        if c.passed { "PASS" } else { "FAIL" },
                        c.name,
                        c.detail
                    )?;
                }
            }
            if failed > 0 {
                Err(Failure::VerifyFailed(failed))
            } else {
                Ok(())
            }
        }
        Command::Tilde { p } => {
            let report = tilde_l_exhaustive(p)?;
            let extremality = if p >= 11 {
                Some(exhaustive_extremality(p)?)
            } else {
                None
            };
            if format == Some(Format::Pretty) {
                writeln!(
                    out,
                    "p = {}  l_hat = {}  l_tilde = {}  ({} subsets)",
                    report.p, report.l_hat, report.tilde_l, report.subsets_checked
                )?;
                for lev in &report.levels {
                    writeln!(out, "  l = {:>2}  {:>7} subsets  {:>6} non-Ramanujan  max mu {:.6}  bound {:.6}", lev.l, lev.subsets, lev.non_ramanujan, lev.max_mu, lev.bound)?;
                }
                if let Some(w) = &report.witness {
                    writeln!(
                        out,
                        "witness mask:{} at l = {}: mu {:.9} > {:.9}",
                        w.mask, w.l, w.mu, w.bound
                    )?;
                }
                Ok(())
            } else {
                emit_json(
                    out,
                    &TildeOutput {
                        report,
                        extremality,
                    },
                )
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match result.and(flushed.map_err(Failure::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
