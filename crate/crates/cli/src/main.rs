use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use prcalc_core::dsl::{parse_expr, run_script, ScriptOptions};
use prcalc_core::suite;
use prcalc_core::{ChartSpec, Report};

#[derive(Parser)]
#[command(name = "prcalc", version, about = "Exact calculator for the non-commutative Poisson algebra of a flat chart")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Chart to evaluate on, e.g. `euclid:2` or `torus:1`; inferred when absent.
    #[arg(long, global = true)]
    chart: Option<ChartSpec>,
    #[arg(long, env = "PRCALC_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Print the JSON report instead of plain results.
    #[arg(long, global = true)]
    json: bool,
    /// Write the JSON report to a file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record wall-clock time per check. Reports are then no longer reproducible.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a script file.
    Run { file: PathBuf },
    /// Print the normal form of an expression.
    Normalize { expr: String },
    /// Poisson bracket {A, B}.
    Bracket { a: String, b: String },
    /// Commutator AB - BA.
    Commutator { a: String, b: String },
    /// Divide by z; fails when some term has no factor z.
    Divz { expr: String },
    /// Classical symbol at z = 0.
    Classical { expr: String },
    /// Truncated Fourier matrix on the circle, as JSON.
    Quantum {
        expr: String,
        #[command(flatten)]
        rep: Rep,
    },
    /// Spectrum of the momentum operator on the circle.
    Spectrum {
        #[command(flatten)]
        rep: Rep,
    },
    /// Build Z from a partition scheme and compare it with z.
    #[command(name = "construct-z")]
    ConstructZ {
        /// `circle`, `circle3`, `torus:n`, `euclid:n` or a scheme file.
        #[arg(long)]
        scheme: String,
    },
    /// Canonical relations of the cartesian construction on euclid:n.
    Heisenberg { n: usize },
    /// Run a seeded property suite.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// List the property suites.
    Suites,
}

#[derive(Args)]
struct Rep {
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    hbar: Option<String>,
    /// `minus` (z ↦ -iħ) or `plus`.
    #[arg(long)]
    orientation: Option<String>,
}

impl Rep {
    fn flags(&self) -> String {
        let mut s = String::new();
        if let Some(c) = self.cutoff {
            s += &format!(" --cutoff {c}");
        }
        for (name, v) in [("alpha", &self.alpha), ("hbar", &self.hbar), ("orientation", &self.orientation)] {
            if let Some(v) = v {
                s += &format!(" --{name} {v}");
            }
        }
        s
    }
}

/// Parse on its own first so syntax errors point into the argument.
fn one_line(expr: &str) -> Result<&str, String> {
    if expr.contains('\n') {
        return Err("expressions must fit on one line".into());
    }
    parse_expr(expr).map_err(|e| e.to_string())?;
    Ok(expr)
}

fn emit(report: &Report, lines: &[String], common: &Common) -> Result<(), String> {
    let json = report.to_json();
    if let Some(path) = &common.out {
        std::fs::write(path, format!("{json}\n")).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    if common.json {
        println!("{json}");
    } else {
        for l in lines {
            println!("{l}");
        }
    }
    Ok(())
}

fn run(cli: Cli, common: Common) -> Result<i32, String> {
    let text = match &cli.command {
        Cmd::Run { file } => std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?,
        Cmd::Normalize { expr } => format!("normalize {}", one_line(expr)?),
        Cmd::Bracket { a, b } => format!("bracket {}, {}", one_line(a)?, one_line(b)?),
        Cmd::Commutator { a, b } => format!("commutator {}, {}", one_line(a)?, one_line(b)?),
        Cmd::Divz { expr } => format!("divz {}", one_line(expr)?),
        Cmd::Classical { expr } => format!("classical {}", one_line(expr)?),
        Cmd::Quantum { expr, rep } => format!("quantum {}{}", one_line(expr)?, rep.flags()),
        Cmd::Spectrum { rep } => format!("spectrum{}", rep.flags()),
        Cmd::ConstructZ { scheme } => format!("construct-z --scheme {scheme}"),
        Cmd::Heisenberg { n } => format!("heisenberg {n}"),
        Cmd::Check { suite: name, trials } => {
            let report = suite::run_suite(name, *trials, common.seed, common.timings).map_err(|e| e.to_string())?;
            if let Some(path) = &common.out {
                std::fs::write(path, format!("{}\n", report.to_json())).map_err(|e| format!("{}: {e}", path.display()))?;
                for r in report.failures() {
                    println!("fail: {}: {}", r.name, r.witness);
                }
                println!(
                    "{}: {} records, {} failed, {} unresolved",
                    name,
                    report.records.len(),
                    report.count(prcalc_core::Verdict::Fail),
                    report.count(prcalc_core::Verdict::Unresolved)
                );
            } else {
                println!("{}", report.to_json());
            }
            return Ok(report.exit_code());
        }
        Cmd::Suites => {
            for s in suite::SUITES {
                let (anchor, chart) = suite::describe(s).map_err(|e| e.to_string())?;
                println!("{s:15} {chart:18} {anchor}");
            }
            return Ok(0);
        }
    };
    let base_dir = match &cli.command {
        Cmd::Run { file } => file.parent().map(|p| p.to_path_buf()),
        _ => None,
    };
    let opts = ScriptOptions { seed: common.seed, timings: common.timings, chart: common.chart, base_dir };
    let out = run_script(&text, &opts).map_err(|e| e.to_string())?;
    emit(&out.report, &out.lines, &common)?;
    Ok(out.report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = cli.common.clone();
    match run(cli, common) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
