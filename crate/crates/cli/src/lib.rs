//! Command-line driver: classification reports, verification suites and a
//! disk cache of kernel bases.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage error, 3 I/O error.

pub mod cache;
pub mod report;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use w2p_core::fock::ModelParams;

use cache::{KernelCache, CACHE_ENV};
use report::ReportDocument;
use verify::{run_suites, Context, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "w2p", version, about = "Exact computations in the W(2,2p-1) vertex algebras")]
pub struct Cli {
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    /// Directory for cached kernel bases; overrides $W2P_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the curve data and the table of highest weights.
    Report {
        #[arg(long, allow_negative_numbers = true)]
        p: i64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites; all suites if none are given.
    Verify {
        #[arg(long, allow_negative_numbers = true)]
        p: i64,
        /// Highest level checked; defaults to 2(2p-1)+2.
        #[arg(long)]
        max_level: Option<u32>,
        #[arg(long = "suite", value_enum)]
        suites: Vec<Suite>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn timestamp() -> Option<String> {
    std::env::var("SOURCE_DATE_EPOCH").ok().filter(|s| s.parse::<u64>().is_ok())
}

/// Parses `args` and runs the command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            let _ = writeln!(err, "error: --jobs must be at least 1");
            return EXIT_USAGE;
        }
        pool = pool.num_threads(j);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_IO;
        }
    };
    // Buffered so that output order never depends on worker scheduling.
    let (code, o, e) = pool.install(|| {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let code = dispatch(cli, &mut o, &mut e);
        (code, o, e)
    });
    let _ = err.write_all(&e);
    if let Err(x) = out.write_all(&o) {
        let _ = writeln!(err, "error: cannot write output: {x}");
        return EXIT_IO;
    }
    code
}

fn model(p: i64, err: &mut dyn Write) -> Option<ModelParams> {
    match ModelParams::new(p) {
        Ok(m) => Some(m),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            None
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cache_dir = cli.cache_dir.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    match cli.command {
        Command::Report { p, format, out: path } => {
            let Some(m) = model(p, err) else { return EXIT_USAGE };
            let doc = ReportDocument::build(&m, timestamp());
            let text = match format {
                Format::Json => doc.to_json(),
                Format::Text => doc.to_text(&m),
            };
            let written = match &path {
                Some(path) => std::fs::write(path, &text),
                None => out.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let target = path.map(|p| p.display().to_string()).unwrap_or_else(|| "stdout".into());
                let _ = writeln!(err, "error: cannot write report to {target}: {e}");
                return EXIT_IO;
            }
            EXIT_OK
        }
        Command::Verify { p, max_level, suites } => {
            let Some(m) = model(p, err) else { return EXIT_USAGE };
            let mut suites = if suites.is_empty() { Suite::ALL.to_vec() } else { suites };
            suites.sort();
            suites.dedup();
            let max_level = max_level.unwrap_or_else(|| m.default_max_level());
            let ctx = Context {
                params: m,
                max_level,
                cache: cache_dir.map(KernelCache::new),
            };
            let names: Vec<&str> = suites.iter().map(Suite::name).collect();
            let mut log = format!("verify p={p} max_level={max_level} suites={}\n", names.join(","));
            let reports = run_suites(&ctx, &suites);
            let (mut passed, mut failed) = (0, 0);
            for r in &reports {
                for w in &r.warnings {
                    let _ = writeln!(err, "{w}");
                }
                log.push_str(&r.render());
                let f = r.checks.iter().filter(|c| !c.passed).count();
                failed += f;
                passed += r.checks.len() - f;
            }
            log.push_str(&format!("total: {passed} passed, {failed} failed\n"));
            if let Err(e) = out.write_all(log.as_bytes()) {
                let _ = writeln!(err, "error: cannot write log: {e}");
                return EXIT_IO;
            }
            if failed == 0 { EXIT_OK } else { EXIT_FAILED }
        }
    }
}
