//! Command-line interface.
//!
//! Exit codes: 0 when every check passes, 1 on a mismatch, 2 on a usage or
//! parameter error, 3 when evaluation fails even on the exact path.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torsieve_core::combinat::{compositions, parse_list, BoxedPartition, CosetPerm};
use torsieve_core::eval::DEFAULT_TOLERANCE;
use torsieve_core::geometry::{enumerate_flags, enumerate_subspaces, random_matrix, DEFAULT_CAP};
use torsieve_core::sieve::{
    check_cecioni, check_qt_eval, check_qt_sum, check_upper_block, check_vandermonde, CspInstance, CspReport,
    IdentityReport, Mode, DEFAULT_MAX_TORUS,
};
use torsieve_core::weightalg::{lambda_weight_table, q_binomial, q_multinomial};
use torsieve_core::Error;

use crate::format;
use crate::golden;
use crate::grid::from_grid;
use crate::runner;

// Standard output may be a closed pipe (`| head`); that is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

macro_rules! out {
    ($($arg:tt)*) => { emit(&format!($($arg)*)) };
}

macro_rules! outln {
    ($($arg:tt)*) => {{ let mut s = format!($($arg)*); s.push('\n'); emit(&s) }};
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "torsieve", version, about = "Cyclic sieving checks for finite Grassmannians and flag varieties")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare fixed-point counts with polynomial evaluations.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Print weight tables.
    #[command(subcommand)]
    Weights(WeightsCmd),
    /// Check standalone identities.
    #[command(subcommand)]
    Identities(IdentityCmd),
    /// Count subspaces or flags cell by cell.
    #[command(subcommand)]
    Enumerate(EnumerateCmd),
    /// Compare (or with --regen rewrite) the golden files.
    Golden {
        #[arg(long)]
        regen: bool,
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Must equal the sum of α when given.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    alpha: String,
    /// Sweep every group element (the default when the group is small).
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Sweep this many seeded random elements instead.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here ("-" for standard output).
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    quiet: bool,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    max_space: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_TORUS)]
    max_torus: u64,
    #[arg(long)]
    tolerance: Option<f64>,
    /// Also evaluate every prediction exactly and require agreement.
    #[arg(long)]
    cross_check: bool,
    /// Leave elapsed time out of the JSON report.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    Grassmannian {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        k: usize,
    },
    Flag {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        beta: String,
    },
    Setflag {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long)]
        beta: String,
    },
}

#[derive(Subcommand, Debug)]
enum WeightsCmd {
    /// Weight of every cell of λ.
    Lambda {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        json: bool,
    },
    /// Inversion weights of w; with --alpha and --beta also its double-coset blocks.
    Perm {
        #[arg(long)]
        w: String,
        #[arg(long, requires = "beta")]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Weight of one cell (row, column from the left, 1-based) of λ.
    Cell {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        row: usize,
        #[arg(long)]
        col: usize,
    },
}

#[derive(Subcommand, Debug)]
enum IdentityCmd {
    /// Generalised q-Vandermonde; without --alpha/--beta sweeps all pairs up to --max-n.
    Vandermonde {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, requires = "beta")]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
    /// Tree-weight sum against the (q,t)-multinomial at unit-circle points.
    QtSum {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
    /// [n; β]_{q,ω(u)} for all u of degree d against [n/d; β/d]_{q^d}.
    QtEval {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        beta: String,
        #[arg(long)]
        d: usize,
    },
    /// Product formula for solutions of diag(U1) X = X diag(U2).
    UpperBlock {
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// u1, u2 are taken in F_{q^a}.
        #[arg(long)]
        a: usize,
        /// Discrete log of u1.
        #[arg(long)]
        u1: u64,
        #[arg(long)]
        u2: u64,
        #[arg(long)]
        m1: usize,
        #[arg(long)]
        m2: usize,
    },
    /// Sylvester kernel dimension against the invariant-factor formula.
    Cecioni {
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Grid file for A; random when absent.
        #[arg(long)]
        a: Option<PathBuf>,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum EnumerateCmd {
    Subspaces {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_space: u64,
    },
    Flags {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        beta: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        max_space: u64,
    },
}

/// Errors surfaced by the command line.
#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    fn exit(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numeric() => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        }
    }
}

type CliResult = std::result::Result<i32, CliError>;

/// Run with full argv (program name first); returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                // --help and --version
                emit(&e.to_string());
                return EXIT_OK;
            }
            let msg = e.to_string();
            eprint!("error[usage]: {}", msg.strip_prefix("error: ").unwrap_or(&msg));
            return EXIT_USAGE;
        }
    };
    let threads = cli.threads;
    match runner::with_threads(threads, move || dispatch(cli.command)) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error[{}]: {e}", e.code());
            e.exit()
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Verify(v) => verify(v),
        Command::Weights(w) => weights(w),
        Command::Identities(i) => identities(i),
        Command::Enumerate(e) => enumerate(e),
        Command::Golden { regen, dir } => golden_cmd(regen, dir),
    }
}

fn list(s: &str) -> std::result::Result<Vec<usize>, CliError> {
    Ok(parse_list(s)?)
}

fn check_n(n: Option<usize>, alpha: &[usize]) -> std::result::Result<(), CliError> {
    let sum: usize = alpha.iter().sum();
    match n {
        Some(n) if n != sum => Err(CliError::Usage(format!("--n {n} but alpha sums to {sum}"))),
        _ => Ok(()),
    }
}

fn configure(base: CspInstance, s: &SweepArgs) -> std::result::Result<CspInstance, CliError> {
    check_n(s.n, &base.alpha)?;
    let mut inst = base;
    inst.mode = match s.sample {
        Some(limit) => Mode::Sampled { limit, seed: s.seed },
        None => Mode::Exhaustive,
    };
    inst.cap = s.max_space;
    inst.max_torus = s.max_torus;
    inst.tolerance = s.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    inst.modular_cross_check = s.cross_check;
    inst.validate()?;
    Ok(inst)
}

fn write_out(path: &Path, text: &str) -> std::result::Result<(), CliError> {
    if path == Path::new("-") {
        emit(text);
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

fn emit_report(mut report: CspReport, s: &SweepArgs) -> CliResult {
    if s.no_timing {
        report.elapsed_ms = None;
    }
    if !s.quiet {
        out!("{}", format::report_text(&report));
    }
    if let Some(path) = &s.json {
        write_out(path, &format::report_json(&report))?;
    }
    Ok(if report.passed() { EXIT_OK } else { EXIT_MISMATCH })
}

fn verify(v: VerifyCmd) -> CliResult {
    let (inst, sweep) = match v {
        VerifyCmd::Grassmannian { sweep, k } => {
            let alpha = list(&sweep.alpha)?;
            (configure(CspInstance::grassmannian(sweep.q, &alpha, k), &sweep)?, sweep)
        }
        VerifyCmd::Flag { sweep, beta } => {
            let alpha = list(&sweep.alpha)?;
            let beta = list(&beta)?;
            (configure(CspInstance::flag(sweep.q, &alpha, &beta), &sweep)?, sweep)
        }
        VerifyCmd::Setflag { sweep, beta } => {
            let alpha = list(&sweep.alpha)?;
            let beta = list(&beta)?;
            (configure(CspInstance::setflag(&alpha, &beta), &sweep)?, sweep)
        }
    };
    emit_report(runner::verify(&inst)?, &sweep)
}

fn partition(n: Option<usize>, k: usize, alpha: &[usize], lambda: &str) -> std::result::Result<BoxedPartition, CliError> {
    check_n(n, alpha)?;
    let total: usize = alpha.iter().sum();
    if k > total {
        return Err(CliError::Usage(format!("k = {k} exceeds n = {total}")));
    }
    let parts = list(lambda)?;
    Ok(BoxedPartition::new(k, total - k, &parts)?)
}

fn print_json(v: &serde_json::Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn weights(w: WeightsCmd) -> CliResult {
    match w {
        WeightsCmd::Lambda { n, k, alpha, lambda, json } => {
            let alpha = list(&alpha)?;
            let lam = partition(n, k, &alpha, &lambda)?;
            if json {
                print_json(&format::lambda_table_json(&lam, &alpha)?);
            } else {
                out!("{}", format::lambda_table_text(&lam, &alpha)?);
            }
        }
        WeightsCmd::Perm { w, alpha, beta, json } => {
            let word = list(&w)?;
            match (alpha, beta) {
                (Some(alpha), Some(beta)) => {
                    let p = CosetPerm::new(&list(&beta)?, &word)?;
                    let alpha = list(&alpha)?;
                    if json {
                        print_json(&serde_json::json!({
                            "inversions": format::inversion_table_json(&word),
                            "cosets": format::coset_blocks_json(&p, &alpha)?,
                        }));
                    } else {
                        out!("{}", format::inversion_table_text(&word));
                        out!("{}", format::coset_blocks_text(&p, &alpha)?);
                    }
                }
                (None, beta) => {
                    let beta = match beta {
                        Some(b) => list(&b)?,
                        None => vec![1; word.len()],
                    };
                    CosetPerm::new(&beta, &word)?;
                    if json {
                        print_json(&format::inversion_table_json(&word));
                    } else {
                        out!("{}", format::inversion_table_text(&word));
                    }
                }
                (Some(_), None) => return Err(CliError::Usage("--alpha needs --beta".into())),
            }
        }
        WeightsCmd::Cell { n, k, alpha, lambda, row, col } => {
            let alpha = list(&alpha)?;
            let lam = partition(n, k, &alpha, &lambda)?;
            let table = lambda_weight_table(&lam, &alpha)?;
            let f = row
                .checked_sub(1)
                .and_then(|r| table.get(r))
                .and_then(|r| col.checked_sub(1).and_then(|c| r.get(c)))
                .ok_or_else(|| CliError::Usage(format!("({row}, {col}) is not a cell of {lam}")))?;
            outln!("{f}");
        }
    }
    Ok(EXIT_OK)
}

fn identity_exit(reports: &[IdentityReport], json: bool) -> CliResult {
    if json {
        outln!("{}", serde_json::to_string_pretty(reports).expect("reports serialize"));
    } else {
        for r in reports {
            out!("{}", format::identity_text(r));
        }
    }
    Ok(if reports.iter().all(|r| r.ok) { EXIT_OK } else { EXIT_MISMATCH })
}

fn identities(i: IdentityCmd) -> CliResult {
    let reports = match i {
        IdentityCmd::Vandermonde { q, alpha, beta, max_n } => {
            if q < 2 {
                return Err(CliError::Usage("q must be at least 2".into()));
            }
            match (alpha, beta) {
                (Some(a), Some(b)) => {
                    let (a, b) = (list(&a)?, list(&b)?);
                    if a.iter().sum::<usize>() != b.iter().sum::<usize>() {
                        return Err(CliError::Usage("alpha and beta must have the same sum".into()));
                    }
                    vec![check_vandermonde(q, &a, &b)]
                }
                _ => {
                    let mut out = Vec::new();
                    for n in 1..=max_n {
                        let comps = compositions(n);
                        let mut ok = true;
                        let mut count = 0;
                        for a in &comps {
                            for b in &comps {
                                ok &= check_vandermonde(q, a, b).ok;
                                count += 1;
                            }
                        }
                        out.push(IdentityReport {
                            identity: "vandermonde".into(),
                            parameters: format!("q={q} n={n} all alpha, beta"),
                            ok,
                            lhs: String::new(),
                            rhs: String::new(),
                            max_error: None,
                            checks: count,
                        });
                    }
                    out
                }
            }
        }
        IdentityCmd::QtSum { q, beta, points, seed, tolerance } => {
            vec![check_qt_sum(&list(&beta)?, q, points, seed, tolerance)?]
        }
        IdentityCmd::QtEval { q, beta, d } => vec![check_qt_eval(&list(&beta)?, q, d, 1e-8)?],
        IdentityCmd::UpperBlock { q, a, u1, u2, m1, m2 } => vec![check_upper_block(q, a, (u1, u2), m1, m2)?],
        IdentityCmd::Cecioni { q, a, b, size, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let load = |p: &Option<PathBuf>, rng: &mut ChaCha8Rng| -> std::result::Result<_, CliError> {
                match p {
                    Some(path) => {
                        let text = std::fs::read_to_string(path)?;
                        let m = from_grid(q, &text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                        if !m.is_square() {
                            return Err(CliError::Usage(format!("{} is not square", path.display())));
                        }
                        Ok(m)
                    }
                    None => Ok(random_matrix(q, size, size, rng)),
                }
            };
            check_prime(q)?;
            let ma = load(&a, &mut rng)?;
            let mb = load(&b, &mut rng)?;
            vec![check_cecioni(&ma, &mb)]
        }
    };
    identity_exit(&reports, false)
}

fn enumerate(e: EnumerateCmd) -> CliResult {
    match e {
        EnumerateCmd::Subspaces { q, n, k, max_space } => {
            check_prime(q)?;
            let mut cells: BTreeMap<String, u64> = BTreeMap::new();
            let mut order = Vec::new();
            let mut total = 0u64;
            for z in enumerate_subspaces(q, n, k, max_space)? {
                let key = z.lambda().to_string();
                let c = cells.entry(key.clone()).or_insert_with(|| {
                    order.push(key);
                    0
                });
                *c += 1;
                total += 1;
            }
            for key in &order {
                outln!("{key:<16} {}", cells[key]);
            }
            outln!("total {total} (q-binomial {})", q_binomial(n, k, q as u64));
        }
        EnumerateCmd::Flags { q, beta, max_space } => {
            check_prime(q)?;
            let beta = list(&beta)?;
            let mut cells: Vec<(String, u64)> = Vec::new();
            let mut total = 0u64;
            for f in enumerate_flags(q, &beta, max_space)? {
                let key = f.w().to_string();
                match cells.last_mut() {
                    Some((k, c)) if *k == key => *c += 1,
                    _ => cells.push((key, 1)),
                }
                total += 1;
            }
            for (k, c) in &cells {
                outln!("{k:<16} {c}");
            }
            outln!("total {total} (q-multinomial {})", q_multinomial(&beta, q as u64));
        }
    }
    Ok(EXIT_OK)
}

fn check_prime(q: u32) -> std::result::Result<(), CliError> {
    if !torsieve_core::poly::is_prime(q as u64) {
        return Err(Error::InvalidField(format!("q = {q} is not prime")).into());
    }
    Ok(())
}

fn golden_cmd(regen: bool, dir: Option<PathBuf>) -> CliResult {
    let dir = dir.unwrap_or_else(golden::default_dir);
    if regen {
        let n = golden::regenerate(&dir)?;
        outln!("wrote {n} golden files to {}", dir.display());
        return Ok(EXIT_OK);
    }
    let stale = golden::stale(&dir)?;
    if stale.is_empty() {
        outln!("golden files up to date");
        Ok(EXIT_OK)
    } else {
        for s in &stale {
            outln!("differs: {s}");
        }
        Ok(EXIT_MISMATCH)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(args: &[&str]) -> i32 {
        let mut v = vec!["torsieve"];
        v.extend_from_slice(args);
        run(v)
    }

    #[test]
    fn exit_codes() {
        assert_eq!(code(&["verify", "grassmannian", "--q", "2", "--n", "4", "--k", "2", "--alpha", "2,2", "--exhaustive", "--quiet"]), 0);
        assert_eq!(code(&["verify", "grassmannian", "--q", "4", "--k", "1", "--alpha", "2", "--quiet"]), 2);
        assert_eq!(code(&["verify", "grassmannian", "--n", "5", "--k", "1", "--alpha", "2", "--quiet"]), 2);
        assert_eq!(code(&["verify", "bogus"]), 2);
        assert_eq!(code(&["weights", "perm", "--w", "385216479"]), 0);
        assert_eq!(code(&["weights", "perm", "--w", "3852"]), 2);
        assert_eq!(code(&["identities", "upper-block", "--q", "2", "--a", "2", "--u1", "1", "--u2", "2", "--m1", "2", "--m2", "2"]), 0);
        assert_eq!(code(&["identities", "upper-block", "--q", "2", "--a", "2", "--u1", "1", "--u2", "2", "--m1", "1", "--m2", "2"]), 2);
        assert_eq!(code(&["enumerate", "subspaces", "--q", "2", "--n", "8", "--k", "4", "--max-space", "10"]), 2);
    }
}
