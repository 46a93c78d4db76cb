//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::coxeter::Word;
use crate::error::{Error, Result};
use crate::popa::{self, ExperimentConfig};
use crate::pukanszky::PukanszkyContext;
use crate::qfock::FockSpace;
use crate::radial::density::{density as density_at, moment_table, support, DensityValue};
use crate::radial::approx::residual_sweep;
use crate::radial::RadialContext;
use crate::scalar::{format_rational, parse_rational, rational, rational_to_f64, Rational};
use crate::suites::{self, Overrides, DELTAS, SUITES, TAIL_TOL};
use crate::verdict::{self, format_float, Format, Status, VerdictRecord};

#[derive(Parser, Debug)]
#[command(name = "qmasa", version, about = "Exact checks for radial Hecke masas and q-Gaussian generator masas")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Number of Coxeter generators.
    #[arg(long = "L", global = true)]
    pub l: Option<usize>,
    /// Hecke deformation parameter (rational or decimal).
    #[arg(long, global = true, value_parser = parse_rational_arg, allow_hyphen_values = true)]
    pub p: Option<Rational>,
    /// q-Fock deformation parameter, `|q| < 1`.
    #[arg(long, global = true, value_parser = parse_rational_arg, allow_hyphen_values = true)]
    pub q: Option<Rational>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    #[arg(long, global = true)]
    pub trunc: Option<usize>,
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true, value_parser = parse_rational_arg, allow_hyphen_values = true)]
    pub alpha: Option<Rational>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub format: OutFormat,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Flat `key = value` experiment config for the popa commands.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Add `runtime_ms` to verdict records (breaks byte-for-byte
    /// reproducibility).
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a verification suite.
    Verify { suite: String },
    Radial {
        #[command(subcommand)]
        what: RadialCmd,
    },
    /// Single Hecke-side check: products, gram, expansion, intertwiner, toeplitz, cross.
    Pukanszky { check: String },
    /// Single Fock-side check: positivity, relations, covariance, growth, or
    /// field-matrix (CSV export of W(e_0)).
    Fock { check: String },
    Popa {
        #[command(subcommand)]
        what: PopaCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum RadialCmd {
    /// Exact moments against quadrature of the density.
    Moments,
    /// The density on a grid over its support.
    Density,
    /// Residual sweep over δ.
    #[command(name = "lemma24")]
    Approx,
}

#[derive(Subcommand, Debug)]
pub enum PopaCmd {
    /// `k, ‖P(x ỹ η_k)‖` in the orthogonal configuration.
    Orthogonal,
    /// Envelope table `j, lhs, envelope` in the general configuration.
    General,
}

fn parse_rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            l: self.l,
            p: self.p.clone(),
            q: self.q.clone(),
            dim: self.dim,
            trunc: self.trunc,
            depth: self.depth,
            delta: self.delta,
            alpha: self.alpha.clone(),
            seed: self.seed,
        }
    }

    fn format(&self) -> Format {
        match self.format {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
        }
    }

    fn experiment(&self, orthogonal: bool) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::parse(&std::fs::read_to_string(path)?)?,
            None if orthogonal => ExperimentConfig::orthogonal(rational(1, 2), 10),
            None => ExperimentConfig::general(rational(1, 2), 10, rational(3, 5))?,
        };
        if let Some(q) = &self.q {
            cfg.q = q.clone();
        }
        if let Some(n) = self.trunc {
            cfg.truncation = n;
        }
        if let Some(d) = self.dim {
            cfg.d = d;
        }
        if let Some(a) = &self.alpha {
            cfg = ExperimentConfig::general(cfg.q.clone(), cfg.truncation, a.clone())
                .map(|g| ExperimentConfig { x_word: cfg.x_word.clone(), y_word: cfg.y_word.clone(), d: cfg.d, ..g })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Either verdict records or a CSV table.
enum Output {
    Records(Vec<VerdictRecord>),
    Table { header: String, rows: Vec<String>, records: Vec<VerdictRecord> },
}

pub fn run(cli: Cli) -> Result<bool> {
    if let Some(t) = cli.common.threads {
        // fails only if a pool already exists, which is harmless here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let c = &cli.common;
    let output = match &cli.command {
        Command::Verify { suite } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(Error::UnknownSuite(suite.clone()));
            }
            Output::Records(suites::run_suite(suite, &c.overrides(), c.timings)?)
        }
        Command::Radial { what } => radial(what, c)?,
        Command::Pukanszky { check } => Output::Records(pukanszky(check, c)?),
        Command::Fock { check } => fock(check, c)?,
        Command::Popa { what } => popa_cmd(what, c)?,
    };
    let mut sink: Box<dyn Write> = match &c.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let ok = match output {
        Output::Records(recs) => {
            verdict::emit(&recs, c.format(), &mut *sink)?;
            verdict::all_passed(&recs)
        }
        Output::Table { header, rows, records } => {
            match c.format() {
                Format::Csv => {
                    writeln!(sink, "{header}")?;
                    for r in rows {
                        writeln!(sink, "{r}")?;
                    }
                }
                Format::Json => verdict::emit(&records, Format::Json, &mut *sink)?,
            }
            verdict::all_passed(&records)
        }
    };
    sink.flush()?;
    Ok(ok)
}

fn radial(what: &RadialCmd, c: &Common) -> Result<Output> {
    let l = c.l.unwrap_or(3);
    match what {
        RadialCmd::Moments => {
            let p = c.p.clone().unwrap_or_else(|| rational(0, 1));
            let ctx = RadialContext::new(l, 1)?;
            let rows = moment_table(&ctx, &p, c.depth.unwrap_or(10), 1e-12)?;
            let binding = p == rational(0, 1);
            let records = rows
                .iter()
                .map(|r| {
                    let status = if r.abs_err < suites::MOMENT_TOL {
                        Status::Pass
                    } else if binding {
                        Status::Fail
                    } else {
                        Status::Anomaly
                    };
                    VerdictRecord::new("density.moments", status, format_float(r.abs_err))
                        .param("L", l)
                        .param("p", format_rational(&p))
                        .param("n", r.n)
                })
                .collect();
            let rows = rows
                .iter()
                .map(|r| format!("{},{},{},{},{}", r.n, format_rational(&r.p), format_rational(&r.exact), format_float(r.quadrature), format_float(r.abs_err)))
                .collect();
            Ok(Output::Table { header: "n,p,exact,quadrature,abs_err".into(), rows, records })
        }
        RadialCmd::Density => {
            let p = rational_to_f64(&c.p.clone().unwrap_or_else(|| rational(0, 1)));
            let (a, b) = support(l, p);
            let points = c.depth.unwrap_or(64);
            let mut rows = Vec::new();
            let mut anomalies = 0;
            for i in 0..=points {
                let x = a + (b - a) * i as f64 / points as f64;
                match density_at(l, x, p) {
                    DensityValue::Value(v) => rows.push(format!("{x},{v}")),
                    DensityValue::Anomaly { denominator, .. } => {
                        anomalies += 1;
                        rows.push(format!("{x},nan,{denominator}"));
                    }
                }
            }
            let status = if anomalies == 0 { Status::Pass } else { Status::Anomaly };
            let rec = VerdictRecord::new("density.formula", status, anomalies.to_string()).param("L", l).param("p", p);
            Ok(Output::Table { header: "x,density".into(), rows, records: vec![rec] })
        }
        RadialCmd::Approx => {
            let ctx = RadialContext::new(l, 1)?;
            let deltas: Vec<f64> = c.delta.map_or_else(|| DELTAS.to_vec(), |d| vec![d]);
            let rows = residual_sweep(&ctx, &Word::from_reduced(vec![1]), &Word::from_reduced(vec![0]), &deltas, TAIL_TOL)?;
            let records = suites::run_suite("lemma24", &c.overrides(), c.timings)?;
            let rows = rows.iter().map(|r| format!("{},{},{}", r.delta, r.truncation, format_float(r.residual))).collect();
            Ok(Output::Table { header: "delta,K,residual".into(), rows, records })
        }
    }
}

fn pukanszky(check: &str, c: &Common) -> Result<Vec<VerdictRecord>> {
    let prefix = match check {
        "products" | "gram" | "expansion" | "relation" | "intertwiner" | "toeplitz" | "cross" => format!("pukanszky.{check}"),
        _ => return Err(Error::Parse(format!("unknown pukanszky check {check:?}"))),
    };
    // validate L early so a bad value is an error, not a fail record
    if let Some(l) = c.l {
        PukanszkyContext::new(l)?;
    }
    let recs = suites::run_suite("pukanszky", &c.overrides(), c.timings)?;
    let related = if check == "expansion" { "pukanszky.relation".to_string() } else { prefix.clone() };
    Ok(recs.into_iter().filter(|r| r.check == prefix || r.check == related).collect())
}

fn fock(check: &str, c: &Common) -> Result<Output> {
    if check == "field-matrix" {
        let q = c.q.clone().unwrap_or_else(|| rational(1, 2));
        let s = FockSpace::new(c.dim.unwrap_or(1), c.trunc.unwrap_or(4), q)?;
        let m = s.field_matrix(&s.unit(0));
        let symmetric = s.field_symmetry_defects(&s.unit(0))?.len();
        let mut lines = m.to_csv().lines().map(str::to_string).collect::<Vec<_>>();
        let header = lines.remove(0);
        let rec = VerdictRecord::exact("fock.field_symmetric", symmetric);
        return Ok(Output::Table { header, rows: lines, records: vec![rec] });
    }
    let wanted: &[&str] = match check {
        "positivity" => &["fock.positivity"],
        "relations" => &["fock.adjointness", "fock.qccr", "fock.field_symmetric", "fock.wick", "fock.wick_right"],
        "covariance" => &["fock.covariance", "fock.quantization_adjoint"],
        "growth" => &["fock.norm_product", "fock.growth_ratio"],
        _ => return Err(Error::Parse(format!("unknown fock check {check:?}"))),
    };
    let recs = suites::run_suite("fock-core", &c.overrides(), c.timings)?;
    Ok(Output::Records(recs.into_iter().filter(|r| wanted.contains(&r.check.as_str())).collect()))
}

fn popa_cmd(what: &PopaCmd, c: &Common) -> Result<Output> {
    match what {
        PopaCmd::Orthogonal => {
            let cfg = c.experiment(true)?;
            let d = popa::decay_orthogonal(&cfg)?;
            let rows = d.rows.iter().map(|r| format!("{},{}", r.k, format_float(r.norm()))).collect();
            let nm = cfg.n() + cfg.m();
            let records = d
                .rows
                .iter()
                .filter(|r| r.k > nm)
                .map(|r| {
                    VerdictRecord::exact("popa.orthogonal", usize::from(!r.norm_sq.is_zero()))
                        .param("q", format_rational(&cfg.q))
                        .param("k", r.k)
                        .param("x", &cfg.x_word)
                        .param("y", &cfg.y_word)
                })
                .collect();
            Ok(Output::Table { header: "k,norm".into(), rows, records })
        }
        PopaCmd::General => {
            let cfg = c.experiment(false)?;
            let g = popa::decay_general(&cfg, 4..=c.depth.unwrap_or(14))?;
            let rows = g
                .envelope
                .iter()
                .map(|r| format!("{},{},{}", r.j, format_float(rational_to_f64(&r.lhs)), format_float(r.envelope)))
                .collect();
            let nm = cfg.n() + cfg.m();
            let q = format_rational(&cfg.q);
            let records = vec![
                VerdictRecord::property("popa.envelope", g.envelope_holds(), g.c).param("q", &q),
                VerdictRecord::property("popa.sweep_decreasing", g.sweep_decreasing(nm), g.sweep.last().map_or(0.0, |r| r.1))
                    .param("q", &q),
            ];
            Ok(Output::Table { header: "j,lhs,envelope".into(), rows, records })
        }
    }
}

/// Parses, runs, and maps the outcome to a process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
