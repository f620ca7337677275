//! Script evaluation.

use std::path::{Path, PathBuf};

use num_rational::BigRational;

use super::lower::{lower, ChartHints, Env};
use super::parser::{parse_script, Ast, Command, Flag, Stmt};
use crate::chart::ChartSpec;
use crate::classical::ClassicalSymbol;
use crate::error::{Error, Result};
use crate::normal::NormalForm;
use crate::quantum::{self, RepConfig, ZSign};
use crate::report::{Record, Report, Verdict};
use crate::scheme::{self, PartitionScheme, Triple};
use crate::suite;

#[derive(Clone, Debug, Default)]
pub struct ScriptOptions {
    pub seed: u64,
    pub timings: bool,
    /// Overrides any `chart` line.
    pub chart: Option<ChartSpec>,
    /// Directory that relative scheme paths are resolved against.
    pub base_dir: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub struct ScriptOutput {
    pub report: Report,
    /// Human-readable result, one entry per statement that produces output.
    pub lines: Vec<String>,
}

fn exprs(cmd: &Command) -> Vec<&Ast> {
    match cmd {
        Command::Let(_, a) | Command::Normalize(a) | Command::DivZ(a) | Command::Classical(a) | Command::Quantum(a, _) => {
            vec![a]
        }
        Command::Bracket(a, b) | Command::Commutator(a, b) => vec![a, b],
        Command::Triple(q, g, w) => vec![q, g, w],
        _ => Vec::new(),
    }
}

/// The chart a script runs on: an explicit override, its `chart` line, or
/// the chart implied by the names it uses.
pub fn script_chart(stmts: &[Stmt], over: Option<ChartSpec>) -> Result<ChartSpec> {
    let declared: Vec<ChartSpec> = stmts
        .iter()
        .filter_map(|s| match s.command {
            Command::Chart(c) => Some(c),
            _ => None,
        })
        .collect();
    if declared.len() > 1 {
        return Err(Error::MalformedExpr("a script declares at most one chart".into()));
    }
    if let Some(c) = over.or(declared.first().copied()) {
        return Ok(c);
    }
    let mut hints = ChartHints::default();
    let env = Env::new();
    let mut seen = false;
    for s in stmts {
        for a in exprs(&s.command) {
            hints.collect(a, &env);
            seen = true;
        }
    }
    if !seen {
        // only commands that carry their own chart
        for s in stmts {
            match &s.command {
                Command::Heisenberg(n) => return Ok(ChartSpec::euclid(*n)),
                Command::ConstructZ(flags) => {
                    if let Some(c) = flag(flags, "scheme").and_then(|n| PartitionScheme::builtin(n).ok()) {
                        return Ok(c.chart());
                    }
                }
                _ => {}
            }
        }
    }
    hints.chart()
}

fn flag<'a>(flags: &'a [Flag], name: &str) -> Option<&'a str> {
    flags.iter().rev().find(|f| f.name == name).map(|f| f.value.as_str())
}

fn check_flags(flags: &[Flag], allowed: &[&str]) -> Result<()> {
    match flags.iter().find(|f| !allowed.contains(&f.name.as_str())) {
        Some(f) => Err(Error::Syntax {
            line: f.pos.line,
            column: f.pos.column,
            expected: allowed.iter().map(|a| format!("--{a}")).collect::<Vec<_>>().join(", "),
            found: format!("`--{}`", f.name),
        }),
        None => Ok(()),
    }
}

fn bad_flag(name: &str, value: &str) -> Error {
    Error::InvalidConfig(format!("--{name} {value}"))
}

pub fn parse_rational(name: &str, value: &str) -> Result<BigRational> {
    value.parse().map_err(|_| bad_flag(name, value))
}

fn parse_int<T: std::str::FromStr>(name: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| bad_flag(name, value))
}

/// Build a [`RepConfig`] from `--cutoff --alpha --hbar --orientation`.
pub fn rep_config(flags: &[Flag], default_cutoff: usize) -> Result<RepConfig> {
    let cutoff = flag(flags, "cutoff").map_or(Ok(default_cutoff), |v| parse_int("cutoff", v))?;
    let alpha = flag(flags, "alpha").map_or(Ok(BigRational::from_integer(0.into())), |v| parse_rational("alpha", v))?;
    let hbar = flag(flags, "hbar").map_or(Ok(BigRational::from_integer(1.into())), |v| parse_rational("hbar", v))?;
    let orientation = match flag(flags, "orientation") {
        None | Some("minus") => ZSign::Minus,
        Some("plus") => ZSign::Plus,
        Some(v) => return Err(bad_flag("orientation", v)),
    };
    Ok(RepConfig::new(cutoff, alpha, hbar)?.with_orientation(orientation))
}

/// Parse a scheme file: an optional `chart` line and `triple q, g, w` lines.
pub fn parse_scheme(text: &str) -> Result<PartitionScheme> {
    let stmts = parse_script(text)?;
    let chart = script_chart(&stmts, None)?;
    let env = Env::new();
    let mut triples = Vec::new();
    for s in &stmts {
        match &s.command {
            Command::Chart(_) => {}
            Command::Triple(q, g, w) => triples.push(Triple::new(
                lower(q, chart, &env)?.as_function(chart)?,
                lower(g, chart, &env)?.as_function(chart)?,
                lower(w, chart, &env)?.as_vector(chart)?,
            )),
            _ => return Err(Error::MalformedExpr(format!("line {}: scheme files hold only `chart` and `triple`", s.line))),
        }
    }
    if triples.is_empty() {
        return Err(Error::MalformedExpr("scheme file has no triples".into()));
    }
    PartitionScheme::unchecked(chart, triples)
}

/// A builtin name or a path to a scheme file.
pub fn load_scheme(name: &str, base: Option<&Path>) -> Result<PartitionScheme> {
    match PartitionScheme::builtin(name) {
        Err(Error::UnknownScheme(_)) => {
            let path = match base {
                Some(b) if Path::new(name).is_relative() => b.join(name),
                _ => PathBuf::from(name),
            };
            if !path.exists() {
                return Err(Error::UnknownScheme(name.to_string()));
            }
            parse_scheme(&std::fs::read_to_string(path)?)
        }
        other => other,
    }
}

struct Eval<'a> {
    chart: ChartSpec,
    env: Env,
    opts: &'a ScriptOptions,
    report: Report,
    lines: Vec<String>,
}

impl Eval<'_> {
    fn nf(&self, a: &Ast) -> Result<NormalForm> {
        lower(a, self.chart, &self.env)?.normalize(self.chart)
    }

    fn push(&mut self, stmt: &Stmt, anchor: &str, outcome: Result<(Verdict, String)>) {
        let name = format!("line {}: {}", stmt.line, stmt.source);
        let (verdict, witness) = outcome.unwrap_or_else(|e| (Verdict::Fail, e.to_string()));
        self.lines.push(match verdict {
            Verdict::Value => witness.clone(),
            v => format!("{}: {witness}", serde_json::to_value(v).unwrap().as_str().unwrap()),
        });
        self.report.records.push(Record::new(name, anchor, verdict, witness));
    }

    fn value(r: Result<String>) -> Result<(Verdict, String)> {
        r.map(|w| (Verdict::Value, w))
    }

    fn run(&mut self, stmt: &Stmt) -> Result<()> {
        // Lowering errors abort the script; evaluation errors become failing records.
        for a in exprs(&stmt.command) {
            lower(a, self.chart, &self.env)?;
        }
        match &stmt.command {
            Command::Chart(_) => {}
            Command::Let(n, a) => {
                let e = lower(a, self.chart, &self.env)?;
                self.env.insert(n.clone(), e);
            }
            Command::Normalize(a) => {
                let r = self.nf(a).map(|n| n.to_string());
                self.push(stmt, "normal form", Self::value(r));
            }
            Command::Bracket(a, b) => {
                let r = self.nf(a).and_then(|x| x.poisson_bracket(&self.nf(b)?)).map(|n| n.to_string());
                self.push(stmt, "{A,B}", Self::value(r));
            }
            Command::Commutator(a, b) => {
                let r = self.nf(a).and_then(|x| x.commutator(&self.nf(b)?)).map(|n| n.to_string());
                self.push(stmt, "[A,B] = AB - BA", Self::value(r));
            }
            Command::DivZ(a) => {
                let r = self.nf(a).and_then(|x| x.divide_z()).map(|n| n.to_string());
                self.push(stmt, "A/z", Self::value(r));
            }
            Command::Classical(a) => {
                let r = self.nf(a).map(|n| ClassicalSymbol::project(&n).to_string());
                self.push(stmt, "z = 0 projection", Self::value(r));
            }
            Command::Quantum(a, flags) => {
                let r = (|| {
                    check_flags(flags, &["cutoff", "alpha", "hbar", "orientation"])?;
                    let n = self.nf(a)?;
                    let deg = usize::try_from(n.fun_degree().max(0)).unwrap_or(0);
                    let cfg = rep_config(flags, (deg + 1).max(4))?;
                    Ok(quantum::quantum_rep(&n, &cfg)?.to_json().to_string())
                })();
                self.push(stmt, "truncated Fourier representation, rows n = -N..N", Self::value(r));
            }
            Command::Spectrum(flags) => {
                let r = (|| {
                    check_flags(flags, &["cutoff", "alpha", "hbar", "orientation"])?;
                    let cfg = rep_config(flags, 4)?;
                    Ok(quantum::spectrum_json(&quantum::twist_spectrum(&cfg)).to_string())
                })();
                self.push(stmt, "spectrum of π(p)", Self::value(r));
            }
            Command::ConstructZ(flags) => {
                let r = (|| {
                    check_flags(flags, &["scheme"])?;
                    let name = flag(flags, "scheme").ok_or_else(|| Error::InvalidConfig("--scheme is required".into()))?;
                    let s = load_scheme(name, self.opts.base_dir.as_deref())?;
                    scheme::validate_scheme(&s)?;
                    let z = scheme::construct_z(&s)?;
                    let verdict = if z == NormalForm::z(s.chart()) { Verdict::Pass } else { Verdict::Fail };
                    Ok((verdict, z.to_string()))
                })();
                self.push(stmt, "Z = Σ [qᵢ, gᵢ∘wᵢ] equals z", r);
            }
            Command::Check(flags) => {
                check_flags(flags, &["suite", "trials", "seed"])?;
                let name = flag(flags, "suite").unwrap_or("all");
                let trials = flag(flags, "trials").map_or(Ok(100), |v| parse_int("trials", v))?;
                let seed = flag(flags, "seed").map_or(Ok(self.opts.seed), |v| parse_int("seed", v))?;
                let r = suite::run_suite(name, trials, seed, self.opts.timings)?;
                let failed = r.count(Verdict::Fail);
                self.lines.push(format!("check {name}: {} records, {failed} failed", r.records.len()));
                self.report.records.extend(r.records);
            }
            Command::Heisenberg(n) => {
                let r = scheme::heisenberg_check(*n).map(|h| {
                    let v = if h.holds() { Verdict::Pass } else { Verdict::Fail };
                    let d: Vec<String> = h.diagonal.iter().map(|x| x.to_string()).collect();
                    (v, format!("[xi, pi] = {}", d.join(", ")))
                });
                self.push(stmt, "[xᵢ,pⱼ] = −δᵢⱼ z, positions and momenta commute", r);
            }
            Command::Triple(..) => {
                return Err(Error::MalformedExpr(format!("line {}: `triple` belongs in a scheme file", stmt.line)))
            }
        }
        Ok(())
    }
}

/// Parse and evaluate `text`. Syntax, name and chart errors are returned as
/// `Err`; failures of individual computations become `fail` records.
pub fn run_script(text: &str, opts: &ScriptOptions) -> Result<ScriptOutput> {
    let stmts = parse_script(text)?;
    let chart = script_chart(&stmts, opts.chart)?;
    let mut ev = Eval { chart, env: Env::new(), opts, report: Report::new(chart.to_string(), opts.seed), lines: Vec::new() };
    for s in &stmts {
        ev.run(s)?;
    }
    Ok(ScriptOutput { report: ev.report, lines: ev.lines })
}
