use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catbundle::algebra::{format_float, CATALOG};
use catbundle::base::compose_paths;
use catbundle::decorated::{parallel_transport, transport_from};
use catbundle::scenario::Scenario;
use catbundle::suites::{run_suite_with, selected_suites, SUITES};
use catbundle::{Element, Error, Exec, LawReport};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "catbundle",
    version,
    about = "Certify crossed-module and categorical-bundle laws"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites on a scenario file.
    Run {
        scenario: PathBuf,
        /// Suite to run; repeatable. Defaults to the scenario's list, or every
        /// suite the scenario has data for.
        #[arg(short, long = "suite")]
        suites: Vec<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Samples per law when the domain is too large to enumerate.
        #[arg(long)]
        budget: Option<u64>,
        /// Transport substeps per path segment.
        #[arg(long)]
        steps: Option<usize>,
        /// Tolerance for comparing matrix-group elements.
        #[arg(long)]
        tol_group: Option<f64>,
        /// Tolerance for the decorated/twisted isomorphism checks.
        #[arg(long)]
        tol_iso: Option<f64>,
        #[arg(short, long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Write the report here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Include per-law wall-clock times in the JSONL report.
        #[arg(long)]
        timings: bool,
        /// Check laws on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Print the parallel transport along named paths of a scenario.
    Transport {
        scenario: PathBuf,
        /// Named path, or composite such as `second.first`; repeatable.
        /// Defaults to every named path.
        #[arg(short, long = "path")]
        paths: Vec<String>,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// List the built-in crossed modules.
    Catalog,
    /// List the verification suites.
    Suites,
}

fn load(path: &Path) -> Result<Scenario, Error> {
    Scenario::load(path)
}

fn emit(text: &str, output: &Option<PathBuf>) -> Result<(), Error> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| Error::Input(e.to_string()))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run(
    scenario: PathBuf,
    suites: Vec<String>,
    seed: Option<u64>,
    budget: Option<u64>,
    steps: Option<usize>,
    tol_group: Option<f64>,
    tol_iso: Option<f64>,
    format: Format,
    output: Option<PathBuf>,
    timings: bool,
    sequential: bool,
) -> Result<bool, Error> {
    let mut sc = load(&scenario)?;
    if let Some(s) = seed {
        sc.seed = s;
    }
    if let Some(b) = budget {
        sc.budget = b;
    }
    if let Some(n) = steps {
        if n == 0 {
            return Err(Error::Input("--steps must be at least 1".into()));
        }
        sc.steps = n;
    }
    for (name, v, slot) in [
        ("--tol-group", tol_group, &mut sc.tolerances.group),
        ("--tol-iso", tol_iso, &mut sc.tolerances.iso),
    ] {
        if let Some(t) = v {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Input(format!("{name} must be positive")));
            }
            *slot = t;
        }
    }
    let names = if suites.is_empty() {
        selected_suites(&sc)
    } else {
        suites
    };
    if names.is_empty() {
        return Err(Error::Input("no suites selected and none applicable".into()));
    }
    let exec = if sequential { Exec::Sequential } else { Exec::Parallel };
    let checker = sc.checker().with_exec(exec);
    let reports: Vec<LawReport> = names
        .iter()
        .map(|n| run_suite_with(&sc, n, &checker))
        .collect::<Result<_, _>>()?;
    let text: String = reports
        .iter()
        .map(|r| match format {
            Format::Table => r.to_table(),
            Format::Jsonl => r.to_jsonl(timings),
        })
        .collect::<Vec<_>>()
        .join(if format == Format::Table { "\n" } else { "" });
    emit(&text, &output)?;
    if output.is_some() {
        for r in &reports {
            println!("{}: {}", r.suite, if r.passed() { "PASS" } else { "FAIL" });
        }
    }
    Ok(reports.iter().all(LawReport::passed))
}

fn clean(x: f64) -> f64 {
    x + 0.0
}

fn transport(scenario: PathBuf, paths: Vec<String>, steps: Option<usize>) -> Result<(), Error> {
    let sc = load(&scenario)?;
    let conn = sc.connection()?;
    let steps = steps.unwrap_or(sc.steps);
    let names = if paths.is_empty() { sc.path_names() } else { paths };
    if names.is_empty() {
        return Err(Error::Input("scenario names no paths".into()));
    }
    let mut out = String::new();
    for name in names {
        let pieces = name
            .split('.')
            .rev()
            .map(|n| sc.named_path(n))
            .collect::<Result<Vec<_>, _>>()?;
        let whole = pieces[1..]
            .iter()
            .try_fold(pieces[0].clone(), |acc, p| compose_paths(p, &acc))?;
        let g = pieces[1..]
            .iter()
            .try_fold(parallel_transport(&conn, &pieces[0], steps)?, |acc, p| {
                transport_from(&conn, p, steps, acc)
            })?;
        let Element::Rot(r) = g else {
            unreachable!("transport lands in SO(n)")
        };
        out.push_str(&format!(
            "path {name}: {} samples, {steps} steps per segment\n",
            whole.samples().len()
        ));
        for row in r.block() {
            let cells: Vec<String> = row.iter().map(|x| format!("{:>19}", format_float(clean(*x)))).collect();
            out.push_str(&format!("  [{} ]\n", cells.join("")));
        }
    }
    emit(&out, &None)
}

fn catalog() {
    let w = CATALOG.iter().map(|e| e.id.len()).max().unwrap_or(0);
    for e in CATALOG {
        let flag = if e.negative { "negative" } else { "positive" };
        println!("{:<w$}  {flag}  {}", e.id, e.description);
    }
}

fn suites() {
    let w = SUITES.iter().map(|s| s.name.len()).max().unwrap_or(0);
    for s in SUITES {
        let needs: Vec<&str> = s.needs.iter().map(|n| n.name()).collect();
        let needs = if needs.is_empty() {
            "-".to_string()
        } else {
            needs.join(", ")
        };
        println!("{:<w$}  [{needs}]  {}", s.name, s.summary);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run {
            scenario,
            suites,
            seed,
            budget,
            steps,
            tol_group,
            tol_iso,
            format,
            output,
            timings,
            sequential,
        } => run(
            scenario, suites, seed, budget, steps, tol_group, tol_iso, format, output, timings, sequential,
        ),
        Command::Transport { scenario, paths, steps } => transport(scenario, paths, steps).map(|_| true),
        Command::Catalog => {
            catalog();
            Ok(true)
        }
        Command::Suites => {
            suites();
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
