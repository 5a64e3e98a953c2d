use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coxhess::cache::{histogram_cached, CachedRunOptions, HistogramCache, CACHE_DIR_ENV};
use coxhess::certify::{parse_point, prepared_group, CertifyOptions};
use coxhess::expected::PAPER_TABLE;
use coxhess::group::{fundamental_covector, orbit};
use coxhess::molien::{
    covariant_series, numerator_from_series, recover_degrees, HistogramOptions, DEFAULT_ORDER, DEGREE_RECOVERY_ORDER,
};
use coxhess::tables::{all_match, render, tables, TablesConfig};
use coxhess::{certify_with, CovariantClass, Error, GroupLabel, Provenance, Verdict};

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "coxhess", version, about = "Exact certification of Hessian bases for finite reflection groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the Hessian basis of one group.
    Certify {
        group: String,
        /// Evaluation point in simple-root coordinates, e.g. 1,2,3 or 1/2,-3.
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
        #[arg(long, value_enum, default_value_t = NumeratorArg::Computed)]
        numerator: NumeratorArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Compare computed values with the published tables.
    Tables {
        /// Groups separated by commas or spaces (default: all six).
        groups: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Poincare series and numerator of a covariant module.
    Molien {
        group: String,
        #[arg(long, value_enum, default_value_t = ClassArg::Sym2)]
        class: ClassArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Orbit of the fundamental covector.
    Orbit {
        group: String,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Worker threads (default: available cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Truncation order of covariant series.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    truncation: usize,
    #[arg(long, env = CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    /// Allow enumerating groups above 10^8 elements (E8).
    #[arg(long)]
    long: bool,
    /// Write the JSON result here ("-" for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

impl RunArgs {
    fn workers(&self) -> usize {
        self.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())).max(1)
    }

    fn cache(&self) -> Option<HistogramCache> {
        self.cache_dir.as_ref().map(HistogramCache::new)
    }

    fn cached_opts(&self) -> CachedRunOptions {
        CachedRunOptions {
            histogram: HistogramOptions { workers: self.workers(), allow_long: self.long },
            ..CachedRunOptions::default()
        }
    }

    fn emit_json(&self, text: &str) -> Result<(), Error> {
        match &self.json {
            Some(p) if p.as_os_str() == "-" => {
                println!("{text}");
                Ok(())
            }
            Some(p) => std::fs::write(p, text).map_err(Error::from),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NumeratorArg {
    Computed,
    PaperTable,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Trivial,
    Vector,
    Sym2,
    Alt2,
}

impl From<ClassArg> for CovariantClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Trivial => CovariantClass::Trivial,
            ClassArg::Vector => CovariantClass::Vector,
            ClassArg::Sym2 => CovariantClass::Sym2,
            ClassArg::Alt2 => CovariantClass::Alt2,
        }
    }
}

/// Error plus the exit code it maps to.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::ChainInconsistent(_) => EXIT_FAIL,
            Error::SchemaMismatch { .. } | Error::HashMismatch { .. } | Error::CorruptPayload(_) => EXIT_FAIL,
            Error::NonPolynomialQuotient(_) | Error::NotAFreeAlgebraShape { .. } => EXIT_FAIL,
            _ => EXIT_INPUT,
        };
        let hint = match e {
            Error::BudgetExceeded { .. } => " (pass --long, or --numerator paper-table for certify)",
            _ => "",
        };
        Failure(code, format!("{e}{hint}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn parse_label(s: &str) -> Result<GroupLabel, Failure> {
    s.parse::<GroupLabel>().map_err(Failure::from)
}

fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Certify { group, v, numerator, run } => certify_cmd(&group, v, numerator, &run),
        Command::Tables { groups, run } => tables_cmd(&groups, &run),
        Command::Molien { group, class, run } => molien_cmd(&group, class.into(), &run),
        Command::Orbit { group, run } => orbit_cmd(&group, &run),
    }
}

fn certify_cmd(group: &str, v: Option<String>, numerator: NumeratorArg, run: &RunArgs) -> Result<u8, Failure> {
    let label = parse_label(group)?;
    let v = v.as_deref().map(parse_point).transpose()?;
    let source = match numerator {
        NumeratorArg::Computed => Provenance::Computed,
        NumeratorArg::PaperTable => Provenance::PaperTable,
    };
    let histogram = match source {
        Provenance::Computed => {
            let (g, _) = prepared_group(label)?;
            Some(histogram_cached(&g, run.cache().as_ref(), run.cached_opts())?.histogram)
        }
        Provenance::PaperTable => None,
    };
    let report = certify_with(
        &label.to_string(),
        CertifyOptions { v, numerator_source: source, workers: run.workers(), allow_long: run.long, truncation: run.truncation, histogram },
    )?;
    println!("group      {}", report.group);
    println!("degrees    {:?} ({})", report.degrees, report.degrees_source);
    println!("|O|        {}", report.orbit_size);
    println!("v          ({})", report.v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
    println!("numerator  {:?} ({})", report.numerator, report.numerator_source);
    println!("det J      {}", report.jacobian.determinant);
    for c in &report.candidate_sets {
        let flag = if c.certificate.nonzero { "nonzero" } else { "ZERO" };
        println!("T {:<60} det M {flag}", c.label);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for f in &report.failures {
        eprintln!("failure: {f}");
    }
    println!("verdict    {} ({} candidate sets)", report.verdict, report.candidate_sets.len());
    run.emit_json(&report.to_json())?;
    Ok(if report.verdict == Verdict::Pass { 0 } else { EXIT_FAIL })
}

fn tables_cmd(groups: &[String], run: &RunArgs) -> Result<u8, Failure> {
    let labels: Vec<GroupLabel> = if groups.is_empty() {
        PAPER_TABLE.iter().map(|e| e.label).collect()
    } else {
        groups
            .iter()
            .flat_map(|g| g.split(','))
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_label(s.trim()))
            .collect::<Result<_, _>>()?
    };
    let cfg = TablesConfig { workers: run.workers(), allow_long: run.long, cache: run.cache(), truncation: Some(run.truncation) };
    let rows = tables(&labels, &cfg)?;
    print!("{}", render(&rows));
    run.emit_json(&serde_json::to_string_pretty(&rows).expect("rows serialize"))?;
    Ok(if all_match(&rows) { 0 } else { EXIT_FAIL })
}

fn molien_cmd(group: &str, class: CovariantClass, run: &RunArgs) -> Result<u8, Failure> {
    let label = parse_label(group)?;
    let (g, _) = prepared_group(label)?;
    let h = histogram_cached(&g, run.cache().as_ref(), run.cached_opts())?.histogram;
    let inv = covariant_series(&h, CovariantClass::Trivial, DEGREE_RECOVERY_ORDER.max(run.truncation))?;
    let degrees = recover_degrees(&inv, g.rank())?;
    let series = covariant_series(&h, class, run.truncation)?;
    let result = numerator_from_series(series, class, &degrees)?;
    println!("group      {} (|W| = {}, {} char-poly classes)", h.label, h.total, h.entries.len());
    println!("degrees    {degrees:?}");
    println!("class      {class:?}");
    println!(
        "series     {}",
        result.series.coeffs().iter().take(24).map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
    );
    println!("numerator  {}", result.numerator);
    let json = serde_json::json!({
        "group": h.label,
        "order": h.total.to_string(),
        "class": class,
        "degrees": degrees,
        "series": result.series.coeffs().iter().map(|c| c.to_canonical()).collect::<Vec<_>>(),
        "numerator": result.numerator_ints(),
    });
    run.emit_json(&serde_json::to_string_pretty(&json).expect("json"))?;
    Ok(0)
}

fn orbit_cmd(group: &str, run: &RunArgs) -> Result<u8, Failure> {
    let label = parse_label(group)?;
    let (g, resolution) = prepared_group(label)?;
    let o = orbit(&g, &fundamental_covector(&g));
    println!("group      {}", g.label());
    println!("|O|        {}", o.len());
    if let Some(r) = &resolution {
        println!("relabel    {:?}", r.permutation);
    }
    let json = serde_json::json!({
        "group": g.label(),
        "orbit_size": o.len(),
        "node_resolution": resolution,
        "forms": o.forms(g.cartan()).iter().map(|f| f.iter().map(|x| x.to_canonical()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    run.emit_json(&serde_json::to_string_pretty(&json).expect("json"))?;
    Ok(0)
}
