//! The `gwtower` command line.
//!
//! Exit codes: 0 success, 2 verification mismatch, 3 resource abort
//! (`--time-limit` exceeded), 4 input error.

mod cache;
mod reports;

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

pub use cache::{Cache, CachedPresentations, GcReport, CODE_HASH};
pub use reports::{HallReport, Report};

use crate::braid::{Convention, GenOrder};
use crate::chords::{chord_report_with, ChordOptions, FourTSigns};
use crate::config::{run_checks, CheckOptions, FramedKnot};
use crate::counters;
use crate::tower::{d1_into_zero_line_with, e1_with, verify_e2comp_with, E2Report, MatchKind, TowerOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

/// An inclusive range written `3`, `2..5` or `2..=5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MRange(pub RangeInclusive<usize>);

impl FromStr for MRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad range {s:?} (expected N, A..B or A..=B)");
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let r = match s.split_once("..") {
            None => num(s).map(|n| n..=n)?,
            Some((a, b)) => num(a)?..=num(b.strip_prefix('=').unwrap_or(b))?,
        };
        if r.is_empty() {
            return Err(bad());
        }
        Ok(MRange(r))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "gwtower", version, about = "E² of the knot-space tower, chord diagrams and configuration checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Cache directory [default: $GW_CACHE, else .gw-cache/]
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Largest column or chord count accepted.
    #[arg(long, global = true, default_value_t = 6)]
    pub max_m: usize,
    /// Report format [default: csv for config-check, json otherwise]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write one file per report into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Abort with exit code 3 after this many seconds.
    #[arg(long, global = true)]
    pub time_limit: Option<f64>,
    /// Print operation counters to stderr.
    #[arg(long, global = true)]
    pub stats: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// E² on the 0-line against chord diagrams on m - 1 chords.
    E2 {
        #[arg(long, default_value = "2..5")]
        m: MRange,
        #[arg(long, default_value = "graded-symmetric")]
        convention: Convention,
        /// lex, reverse or scrambled:SEED
        #[arg(long, default_value = "lex")]
        order: GenOrder,
        /// 4T sign pattern on the chord side: standard or paired
        #[arg(long, default_value = "standard")]
        signs: FourTSigns,
        /// Keep separated diagrams on the chord side.
        #[arg(long)]
        no_sep: bool,
    },
    /// Chord diagrams modulo 4T and separated diagrams.
    Chord {
        #[arg(long)]
        m: MRange,
        #[arg(long, default_value = "standard")]
        signs: FourTSigns,
        /// Sparse elimination; the default is dense up to 3 chords.
        #[arg(long)]
        sparse: bool,
    },
    /// One E¹ entry.
    E1 {
        #[arg(long)]
        m: MRange,
        /// Total degree, 0 or 1.
        #[arg(long, default_value_t = 0)]
        degree: usize,
        #[arg(long, default_value = "graded-symmetric")]
        convention: Convention,
        #[arg(long, default_value = "lex")]
        order: GenOrder,
    },
    /// The differential d¹ into the 0-line at column m.
    D1 {
        #[arg(long)]
        m: MRange,
        #[arg(long, default_value = "graded-symmetric")]
        convention: Convention,
        #[arg(long, default_value = "lex")]
        order: GenOrder,
    },
    /// Ranks of the multilinear free Lie ring from the Hall basis.
    Hall {
        #[arg(long, default_value = "2..7")]
        k: MRange,
        /// Include the basis monomials.
        #[arg(long)]
        list: bool,
    },
    /// Numeric identity checks on framed configurations.
    ConfigCheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 6)]
        max_points: usize,
        /// Knot JSON file to include in the checks.
        #[arg(long)]
        knot: Option<PathBuf>,
    },
    /// Cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheCommand,
    },
}

#[derive(Subcommand, Debug)]
pub enum CacheCommand {
    /// Remove entries from other builds, corrupt entries and stale locks.
    Gc {
        /// Remove everything.
        #[arg(long)]
        all: bool,
    },
}

struct Failure(i32, String);

fn input(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

struct Ctx<'a> {
    cli: &'a Cli,
    cache: Option<Cache>,
    out: &'a mut Vec<u8>,
    err: &'a mut Vec<u8>,
}

impl Ctx<'_> {
    fn format(&self, default: Format) -> Format {
        self.cli.format.unwrap_or(default)
    }

    fn check_range(&self, r: &MRange, min: usize, what: &str) -> Result<Vec<usize>, Failure> {
        let (a, b) = (*r.0.start(), *r.0.end());
        if a < min || b > self.cli.max_m {
            return Err(input(format!("{what} must lie in {min}..={} (got {a}..={b})", self.cli.max_m)));
        }
        Ok(r.0.clone().collect())
    }

    fn cached<T, E>(&self, kind: &str, params: serde_json::Value, f: impl FnOnce() -> Result<T, E>) -> Result<T, E>
    where
        T: serde::Serialize + serde::de::DeserializeOwned,
    {
        match &self.cache {
            Some(c) => c.get_or_compute(kind, &params, f),
            None => f(),
        }
    }

    fn emit<R: Report>(&mut self, reports: &[R], default: Format) -> Result<(), Failure> {
        let format = self.format(default);
        let rendered = reports::render(reports, format, self.cli.out.is_some());
        match &self.cli.out {
            None => {
                for (_, text) in rendered {
                    self.out.extend_from_slice(text.as_bytes());
                }
            }
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
                for (stem, text) in rendered {
                    let ext = if format == Format::Csv { "csv" } else { "json" };
                    let path = dir.join(format!("{stem}.{ext}"));
                    std::fs::write(&path, text).map_err(|e| input(format!("{}: {e}", path.display())))?;
                    writeln!(self.out, "{}", path.display()).expect("in-memory write");
                }
            }
        }
        Ok(())
    }
}

fn diff_line(r: &E2Report) -> String {
    format!(
        "m={}: {} match; E2 free {} torsion {:?}, chords free {} torsion {:?}",
        r.m,
        match r.matches {
            MatchKind::Integral => "integral",
            MatchKind::Rational => "rational",
            MatchKind::None => "no",
        },
        r.e2.free,
        r.e2.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
        r.chord_side.free,
        r.chord_side.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
    )
}

fn dispatch(ctx: &mut Ctx<'_>) -> Result<i32, Failure> {
    match &ctx.cli.command {
        Command::E2 {
            m,
            convention,
            order,
            signs,
            no_sep,
        } => {
            let ms = ctx.check_range(m, 2, "m")?;
            let opts = TowerOptions {
                convention: *convention,
                order: *order,
            };
            let chord_opts = ChordOptions {
                signs: *signs,
                sep: !no_sep,
            };
            let mut reports = Vec::new();
            {
                let mut src = CachedPresentations::new(ctx.cache.as_ref());
                for &m in &ms {
                    let params = json!({"m": m, "tower": opts, "chords": chord_opts});
                    let r = ctx
                        .cached("e2", params, || verify_e2comp_with(&mut src, opts, chord_opts, m))
                        .map_err(|e| input(e.to_string()))?;
                    reports.push(r);
                }
            }
            ctx.emit(&reports, Format::Json)?;
            let mut code = EXIT_OK;
            for r in &reports {
                if r.matches != MatchKind::Integral {
                    writeln!(ctx.err, "{}", diff_line(r)).expect("in-memory write");
                    if !r.experimental {
                        code = EXIT_MISMATCH;
                    }
                }
            }
            Ok(code)
        }
        Command::Chord { m, signs, sparse } => {
            let ms = ctx.check_range(m, 1, "m")?;
            let mut reports = Vec::new();
            for m in ms {
                let sparse = *sparse || m > 3;
                // The elimination path does not change the answer.
                let params = json!({"m": m, "signs": signs});
                let r: Result<_, Failure> = ctx.cached("chord", params, || Ok(chord_report_with(m, *signs, sparse)));
                reports.push(r?);
            }
            ctx.emit(&reports, Format::Json)?;
            Ok(EXIT_OK)
        }
        Command::E1 {
            m,
            degree,
            convention,
            order,
        } => {
            let ms = ctx.check_range(m, 2, "m")?;
            let opts = TowerOptions {
                convention: *convention,
                order: *order,
            };
            let mut reports = Vec::new();
            {
                let mut src = CachedPresentations::new(ctx.cache.as_ref());
                for m in ms {
                    let params = json!({"m": m, "degree": degree, "tower": opts});
                    let r = ctx
                        .cached("e1", params, || e1_with(&mut src, opts, m, *degree))
                        .map_err(|e| input(e.to_string()))?;
                    reports.push(r);
                }
            }
            ctx.emit(&reports, Format::Json)?;
            Ok(EXIT_OK)
        }
        Command::D1 { m, convention, order } => {
            let ms = ctx.check_range(m, 2, "m")?;
            let opts = TowerOptions {
                convention: *convention,
                order: *order,
            };
            let mut reports = Vec::new();
            {
                let mut src = CachedPresentations::new(ctx.cache.as_ref());
                for m in ms {
                    let params = json!({"m": m, "tower": opts});
                    let r = ctx
                        .cached("d1", params, || d1_into_zero_line_with(&mut src, opts, m))
                        .map_err(|e| input(e.to_string()))?;
                    reports.push(r);
                }
            }
            ctx.emit(&reports, Format::Json)?;
            Ok(EXIT_OK)
        }
        Command::Hall { k, list } => {
            let (a, b) = (*k.0.start(), *k.0.end());
            if a < 1 || b > 9 {
                return Err(input(format!("k must lie in 1..=9 (got {a}..={b})")));
            }
            let reports: Vec<HallReport> = k.0.clone().map(|k| HallReport::compute(k, *list)).collect();
            ctx.emit(&reports, Format::Json)?;
            Ok(if reports.iter().all(|r| r.matches) { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::ConfigCheck {
            seed,
            samples,
            tol,
            max_points,
            knot,
        } => {
            if *samples == 0 {
                return Err(input("samples must be at least 1"));
            }
            if !(*tol > 0.0) {
                return Err(input("tolerance must be positive"));
            }
            if !(2..=8).contains(max_points) {
                return Err(input("max-points must lie in 2..=8"));
            }
            let knot = match knot {
                Some(path) => Some(load_knot(path)?),
                None => None,
            };
            let report = run_checks(&CheckOptions {
                seed: *seed,
                samples: *samples,
                tolerance: *tol,
                max_points: *max_points,
                knot,
            });
            let passed = report.passed();
            ctx.emit(std::slice::from_ref(&report), Format::Csv)?;
            for row in report.rows.iter().filter(|r| !r.passed) {
                writeln!(ctx.err, "{}: max error {:e} exceeds {:e}", row.check, row.max_error, row.tolerance)
                    .expect("in-memory write");
            }
            Ok(if passed { EXIT_OK } else { EXIT_MISMATCH })
        }
        Command::Cache {
            action: CacheCommand::Gc { all },
        } => {
            let cache = ctx.cache.clone().unwrap_or_else(|| cache_for(ctx.cli));
            let report = cache.gc(*all).map_err(|e| input(format!("{}: {e}", cache.dir().display())))?;
            ctx.emit(std::slice::from_ref(&report), Format::Json)?;
            Ok(EXIT_OK)
        }
    }
}

fn load_knot(path: &Path) -> Result<FramedKnot, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    FramedKnot::from_json(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn cache_for(cli: &Cli) -> Cache {
    cli.cache_dir.clone().map_or_else(Cache::from_env, Cache::new)
}

fn execute(cli: &Cli, out: &mut Vec<u8>, err: &mut Vec<u8>) -> i32 {
    let before = counters::eliminations();
    let mut ctx = Ctx {
        cli,
        cache: (!cli.no_cache).then(|| cache_for(cli)),
        out,
        err,
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&mut ctx)),
            Err(e) => Err(Failure(EXIT_RESOURCE, format!("cannot start {n} threads: {e}"))),
        },
        None => dispatch(&mut ctx),
    };
    let code = match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            writeln!(err, "error: {msg}").expect("in-memory write");
            code
        }
    };
    if cli.stats {
        writeln!(err, "eliminations: {}", counters::eliminations() - before).expect("in-memory write");
    }
    code
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `stdout` and diagnostics to `stderr`. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(t) = cli.time_limit {
        if !(t > 0.0) || !t.is_finite() {
            let _ = writeln!(stderr, "error: time limit must be a positive number of seconds");
            return EXIT_INPUT;
        }
    }
    let (code, out, err) = match cli.time_limit {
        None => {
            let (mut out, mut err) = (Vec::new(), Vec::new());
            let code = execute(&cli, &mut out, &mut err);
            (code, out, err)
        }
        Some(limit) => {
            let (tx, rx) = mpsc::channel();
            std::thread::spawn(move || {
                let (mut out, mut err) = (Vec::new(), Vec::new());
                let code = execute(&cli, &mut out, &mut err);
                let _ = tx.send((code, out, err));
            });
            match rx.recv_timeout(Duration::from_secs_f64(limit)) {
                Ok(r) => r,
                Err(_) => (EXIT_RESOURCE, Vec::new(), format!("error: time limit of {limit}s exceeded\n").into_bytes()),
            }
        }
    };
    let _ = stdout.write_all(&out);
    let _ = stderr.write_all(&err);
    let _ = stdout.flush();
    code
}
