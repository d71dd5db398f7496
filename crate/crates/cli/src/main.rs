mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hermite_core::derham::derham;
use hermite_core::exact::{format_rational, parse_rational, RatPoly};
use hermite_core::mask::CATALOG_NAMES;
use hermite_core::operator::{
    convergence_probe, limit_samples, probe_to_csv, pullback_window, sample_hermite, samples_to_csv,
};
use hermite_core::{
    catalog, parse_mask, serialize_mask, HermiteSequence, IndexInterval, Known, Mask, Rational,
};
use serde::Serialize;

use report::{analyze, AnalysisReport, InvariantViolation, MaskInfo, Options};

#[derive(Parser)]
#[command(
    name = "hermite",
    version,
    about = "Exact analysis of Hermite subdivision masks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order, support and structural flags of a mask.
    Info {
        /// Mask file, `catalog:<name>` or a bare catalog name.
        mask: String,
    },
    /// Spectral order, reproduction, sum rule and optional de Rham report as JSON.
    Analyze {
        mask: String,
        /// Highest degree and sum-rule order to try.
        #[arg(long, default_value_t = 8)]
        max_order: usize,
        /// Parameter for the reproduction check; inferred from the mask if omitted.
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg)]
        tau: Option<Rational>,
        /// Also analyze the de Rham transform at (3 tau - 1)/2.
        #[arg(long)]
        derham: bool,
    },
    /// Runs the scheme exactly and exports level samples as CSV.
    ///
    /// One step is (S c)_j = sum_k A_{j-2k} c_k; level n holds D^-n S^n c^[0]
    /// with entry j attached to 2^-n (j + tau). Only indices fully determined
    /// by the initial data are written.
    Simulate {
        mask: String,
        #[arg(long)]
        levels: usize,
        /// `delta:s` (e_0 at index s), `delta:s:m` (e_m at s) or `poly:k` ((x+tau)^k/k! sampled at j+tau).
        #[arg(long)]
        initial: String,
        #[arg(long, allow_hyphen_values = true, value_parser = rational_arg, default_value = "0")]
        tau: Rational,
        /// Output file; stdout if omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Significant digits in the CSV.
        #[arg(long, default_value_t = 17)]
        digits: usize,
        /// Level indices `lo,hi` to cover with `poly:k` data; defaults to x in [-1, 1].
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
        /// Also write per-level deviations `|c^[n+1]_{2j} - c^[n]_j|` here.
        #[arg(long)]
        probe_csv: Option<PathBuf>,
    },
    /// Writes the de Rham transform of a mask.
    Derham {
        mask: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Built-in masks.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { name: String },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

enum Failure {
    Invalid(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<hermite_core::Error> for Failure {
    fn from(e: hermite_core::Error) -> Self {
        match e {
            hermite_core::Error::Infeasible(_) | hermite_core::Error::HypothesisUnmet(_) => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<InvariantViolation> for Failure {
    fn from(e: InvariantViolation) -> Self {
        Failure::Internal(format!("internal inconsistency: {}", e.0))
    }
}

fn load_mask(source: &str) -> Result<(String, Mask), Failure> {
    if let Some(name) = source.strip_prefix("catalog:") {
        return Ok((source.to_string(), catalog(name)?));
    }
    let path = Path::new(source);
    if path.exists() {
        let bytes = fs::read(path).map_err(|e| Failure::Invalid(format!("{source}: {e}")))?;
        let mask = parse_mask(&bytes).map_err(|e| Failure::Invalid(format!("{source}: {e}")))?;
        return Ok((source.to_string(), mask));
    }
    if CATALOG_NAMES.contains(&source) {
        return Ok((format!("catalog:{source}"), catalog(source)?));
    }
    Err(Failure::Invalid(format!(
        "{source}: no such file and not a catalog mask (available: {})",
        CATALOG_NAMES.join(", ")
    )))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn describe(info: &MaskInfo) -> String {
    format!(
        "{}: d = {}, support [{}, {}], {}interpolatory, {}symmetric",
        info.mask,
        info.d,
        info.support[0],
        info.support[1],
        if info.interpolatory { "" } else { "not " },
        if info.symmetric { "" } else { "not " }
    )
}

fn summarize(r: &AnalysisReport) -> String {
    let opt = |o: Option<usize>| o.map_or("none".to_string(), |v| v.to_string());
    let mut out = format!(
        "{}\n  spectral order {}\n  reproduction order {} at tau = {}\n  sum rule order {}{}\n  minimal spectral condition against minimal sum rule: {} (strict moments), {} (triangular moments)",
        describe(&r.info),
        r.spectral.order,
        opt(r.reproduction.order),
        r.reproduction.tau.as_ref().map_or("none".into(), format_rational),
        opt(r.sumrule.order),
        r.sumrule.sigma.map_or(String::new(), |s| format!(" (sigma {s})")),
        if r.lemma4.consistent { "consistent" } else { "inconsistent" },
        if r.lemma4.consistent_triangular { "consistent" } else { "inconsistent" },
    );
    if let Some(sub) = &r.derham_summary {
        match sub {
            report::DeRhamSummary::Report(sub) => {
                out.push_str("\nde Rham transform:\n");
                out.push_str(&summarize(sub));
            }
            report::DeRhamSummary::Vanishes { .. } => out.push_str("\nde Rham transform vanishes"),
        }
    }
    out
}

enum Initial {
    Delta { index: i64, component: usize },
    Poly(usize),
}

fn parse_initial(s: &str) -> Result<Initial, Failure> {
    let bad = || {
        Failure::Invalid(format!(
            "--initial {s}: expected delta:s, delta:s:m or poly:k"
        ))
    };
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["delta", index] => Ok(Initial::Delta {
            index: index.parse().map_err(|_| bad())?,
            component: 0,
        }),
        ["delta", index, m] => Ok(Initial::Delta {
            index: index.parse().map_err(|_| bad())?,
            component: m.parse().map_err(|_| bad())?,
        }),
        ["poly", k] => Ok(Initial::Poly(k.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn parse_target(s: &str) -> Result<IndexInterval, Failure> {
    let bad = || Failure::Invalid(format!("--target {s}: expected lo,hi"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let w = IndexInterval::new(
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    );
    if w.is_empty() {
        return Err(Failure::Invalid(format!("--target {s}: empty interval")));
    }
    Ok(w)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Info { mask } => {
            let (id, m) = load_mask(&mask)?;
            let info = MaskInfo::new(&id, &m);
            eprintln!("{}", describe(&info));
            println!("{}", to_json(&info));
        }
        Command::Analyze {
            mask,
            max_order,
            tau,
            derham,
        } => {
            let (id, m) = load_mask(&mask)?;
            if max_order < m.d() {
                return Err(Failure::Invalid(format!(
                    "--max-order {max_order} is below the mask order {}",
                    m.d()
                )));
            }
            let report = analyze(
                &id,
                &m,
                &Options {
                    max_order,
                    tau,
                    derham,
                },
            )?;
            eprintln!("{}", summarize(&report));
            println!("{}", to_json(&report));
        }
        Command::Simulate {
            mask,
            levels,
            initial,
            tau,
            csv,
            digits,
            target,
            probe_csv,
        } => {
            let (_, m) = load_mask(&mask)?;
            if levels == 0 {
                return Err(Failure::Invalid("--levels must be at least 1".into()));
            }
            if digits == 0 {
                return Err(Failure::Invalid("--digits must be at least 1".into()));
            }
            let d = m.d();
            let (c0, known) = match parse_initial(&initial)? {
                Initial::Delta { index, component } => {
                    if target.is_some() {
                        return Err(Failure::Invalid(
                            "--target applies to poly:k data only".into(),
                        ));
                    }
                    (
                        HermiteSequence::delta(d, index, component)?,
                        Known::Everywhere,
                    )
                }
                Initial::Poly(k) => {
                    let target = match &target {
                        Some(t) => parse_target(t)?,
                        None => IndexInterval::new(-(1 << levels), 1 << levels),
                    };
                    let window = pullback_window(&m, target, levels);
                    let p = RatPoly::shifted_monomial(&tau, k);
                    (
                        sample_hermite(&p, d, &Rational::from_integer(0.into()), window),
                        Known::Window(window),
                    )
                }
            };
            let rows = limit_samples(&m, &c0, known, levels, &tau)?;
            let text = samples_to_csv(&rows, d, digits);
            eprintln!("{} rows at level {levels}", rows.len());
            match csv {
                Some(path) => write_out(&path, &text)?,
                None => print!("{text}"),
            }
            if let Some(path) = probe_csv {
                if levels < 2 {
                    return Err(Failure::Invalid(
                        "--probe-csv needs --levels 2 or more".into(),
                    ));
                }
                let probe = convergence_probe(&m, &c0, known, levels)?;
                write_out(&path, &probe_to_csv(&probe, digits))?;
            }
        }
        Command::Derham { mask, output } => {
            let (id, m) = load_mask(&mask)?;
            let t = derham(&m);
            let t = Mask::try_from(t).map_err(|_| {
                Failure::Internal(format!("the de Rham transform of {id} vanishes"))
            })?;
            write_out(&output, &(serialize_mask(&t) + "\n"))?;
            eprintln!(
                "{}",
                describe(&MaskInfo::new(&output.display().to_string(), &t))
            );
        }
        Command::Catalog { action } => match action {
            CatalogAction::List => println!("{}", to_json(&CATALOG_NAMES)),
            CatalogAction::Show { name } => {
                let m = catalog(&name)?;
                eprintln!(
                    "{}",
                    describe(&MaskInfo::new(&format!("catalog:{name}"), &m))
                );
                println!("{}", serialize_mask(&m));
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
