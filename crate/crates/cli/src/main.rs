//! `fb`: detect backdoor sets to acyclic formulas, count models, generate
//! instances.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use acyclic_backdoors::formula::parse_var_list;
use acyclic_backdoors::generators::{gen_grid, gen_hitting_set, gen_random_rcnf};
use acyclic_backdoors::oracle::{brute_count_report, brute_min_backdoor};
use acyclic_backdoors::report::{digest, RunReport, Statistics, Verdict};
use acyclic_backdoors::search::SearchLog;
use acyclic_backdoors::strong::{count_models, detect_strong_approx_logged};
use acyclic_backdoors::weak::detect_weak_logged;
use acyclic_backdoors::{
    count_via_backdoor, detect_deletion, is_deletion_bds, is_strong_bds, is_weak_bds, Assignment,
    BackdoorKind, BackdoorVerdict, Formula, Var,
};
use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "fb", version, about = "Backdoor sets to acyclic CNF formulas")]
struct Cli {
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "FB_THREADS")]
    threads: Option<usize>,
    /// Leave the wall time out of reports.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a backdoor set of at most k variables.
    Detect {
        kind: Kind,
        #[command(flatten)]
        input: Input,
        #[arg(short)]
        k: usize,
        /// Clause width bound for weak detection (default: widest clause).
        #[arg(short)]
        r: Option<usize>,
    },
    /// Count models over variables 1..=n of the DIMACS header.
    Count {
        #[command(flatten)]
        input: Input,
        /// A known strong backdoor set, e.g. `1,4`. Without it the smallest
        /// one found is used, which may take exponential time.
        #[arg(long)]
        backdoor: Option<String>,
    },
    /// Check whether a variable set is a backdoor set.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        set: String,
    },
    /// Write a generated instance to standard output.
    Gen {
        #[command(subcommand)]
        what: Generator,
    },
    /// Brute-force minimum backdoor or model count (small inputs only).
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        kind: OracleTask,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
    },
    /// Size and shape of a formula.
    Stats {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args)]
struct Input {
    /// DIMACS CNF file, `-` for standard input.
    #[arg(long)]
    cnf: PathBuf,
}

#[derive(Subcommand)]
enum Generator {
    /// r × r grid with one variable that is a weak and strong backdoor.
    Grid {
        #[arg(long = "r")]
        size: usize,
    },
    /// Weak-backdoor encoding of a hitting set instance.
    Hitting {
        /// Sets separated by `;`, elements by `,`, e.g. `1,2;2,3`.
        #[arg(long)]
        sets: String,
        /// Universe size (default: largest element).
        #[arg(long)]
        universe: Option<u32>,
    },
    /// Random r-CNF.
    Random {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Weak,
    Strong,
    Deletion,
}

impl From<Kind> for BackdoorKind {
    fn from(k: Kind) -> BackdoorKind {
        match k {
            Kind::Weak => BackdoorKind::Weak,
            Kind::Strong => BackdoorKind::Strong,
            Kind::Deletion => BackdoorKind::Deletion,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleTask {
    Weak,
    Strong,
    Deletion,
    Count,
}

struct Loaded {
    formula: Formula,
    digest: String,
}

fn load(path: &Path) -> Result<Loaded> {
    let bytes = if path == Path::new("-") {
        let mut buf = Vec::new();
        std::io::Read::read_to_end(&mut std::io::stdin(), &mut buf)?;
        buf
    } else {
        std::fs::read(path).with_context(|| format!("reading {}", path.display()))?
    };
    let text = std::str::from_utf8(&bytes).context("input is not UTF-8")?;
    let formula = Formula::parse_dimacs(text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Loaded {
        formula,
        digest: digest(&bytes),
    })
}

fn show_set(set: &BTreeSet<Var>) -> String {
    if set.is_empty() {
        return "{}".into();
    }
    let ids: Vec<String> = set.iter().map(|v| v.id().to_string()).collect();
    format!("{{{}}}", ids.join(", "))
}

fn show_assignment(tau: &Assignment) -> String {
    let parts: Vec<String> = tau
        .iter()
        .map(|(v, b)| format!("{}={}", v.id(), u8::from(b)))
        .collect();
    parts.join(" ")
}

/// Text rendering of a report for humans.
fn render(report: &RunReport) -> String {
    let mut lines = Vec::new();
    match (report.verdict, &report.backdoor) {
        (Some(Verdict::Found), Some(b)) if report.command == "detect" => {
            let noun = if b.len() == 1 { "variable" } else { "variables" };
            lines.push(format!("found backdoor set {} ({} {noun})", show_set(b), b.len()))
        }
        (Some(Verdict::No), _) if report.command == "detect" => lines.push(format!(
            "no backdoor set of size at most {}",
            report.parameters.k.unwrap_or_default()
        )),
        (Some(Verdict::True), _) => lines.push("true".into()),
        (Some(Verdict::False), _) => lines.push("false".into()),
        _ => {}
    }
    if let Some(tau) = &report.witness {
        lines.push(format!("witness: {}", show_assignment(tau)));
    }
    if let Some(c) = &report.model_count {
        lines.push(format!("models: {} over {} variables", c.count, c.universe_size));
        if let Some(b) = &report.backdoor {
            lines.push(format!("strong backdoor used: {}", show_set(b)));
        }
    }
    if let Some(o) = &report.oracle {
        match (o.optimum, &o.count) {
            (_, Some(c)) => lines.push(format!("models: {c}")),
            (Some(opt), _) => {
                lines.push(format!("optimum: {opt}"));
                for w in &o.witness_sets {
                    lines.push(format!("  {}", show_set(w)));
                }
            }
            (None, _) => lines.push(format!(
                "no backdoor set of size at most {}",
                report.parameters.k_max.unwrap_or_default()
            )),
        }
    }
    if report.command == "stats" {
        let s = &report.statistics;
        lines.push(format!("variables: {}", s.n));
        lines.push(format!("clauses: {}", s.m));
        lines.push(format!("length: {}", s.length));
        if let Some(w) = s.max_clause_width {
            lines.push(format!("max clause width: {w}"));
        }
        if let Some(a) = s.acyclic {
            lines.push(format!("acyclic: {a}"));
        }
    }
    lines.join("\n")
}

/// Runs a command; `Ok(None)` means the command printed its own output.
fn run(cli: &Cli) -> Result<Option<RunReport>> {
    let report = match &cli.command {
        Command::Detect { kind, input, k, r } => {
            let Loaded { formula: f, digest } = load(&input.cnf)?;
            let mut log = SearchLog::default();
            let r = r.unwrap_or_else(|| f.max_clause_width());
            let verdict = match kind {
                Kind::Weak => detect_weak_logged(&f, *k, r, &mut log)?,
                Kind::Strong => detect_strong_approx_logged(&f, *k, &mut log)?,
                Kind::Deletion => detect_deletion(&f, *k)?,
            };
            let mut report = RunReport::new("detect", digest, Statistics::of(&f).with_log(&log))
                .with_verdict(&verdict);
            report.parameters.kind = Some((*kind).into());
            report.parameters.k = Some(*k);
            if matches!(kind, Kind::Weak) {
                report.parameters.r = Some(r);
            }
            report
        }
        Command::Count { input, backdoor } => {
            let Loaded { formula: f, digest } = load(&input.cnf)?;
            let (set, count) = match backdoor {
                Some(list) => {
                    let b = parse_var_list(list)?;
                    let count = count_via_backdoor(&f, &b, f.universe())?;
                    (b, count)
                }
                None => count_models(&f)?,
            };
            let mut report = RunReport::new("count", digest, Statistics::of(&f))
                .with_verdict(&BackdoorVerdict::found(set));
            report.model_count = Some(count);
            report
        }
        Command::Verify { input, kind, set } => {
            let Loaded { formula: f, digest } = load(&input.cnf)?;
            let b = parse_var_list(set)?;
            let (holds, witness) = match kind {
                Kind::Weak => {
                    let tau = is_weak_bds(&f, &b)?;
                    (tau.is_some(), tau)
                }
                Kind::Strong => (is_strong_bds(&f, &b)?, None),
                Kind::Deletion => (is_deletion_bds(&f, &b)?, None),
            };
            let mut report = RunReport::new("verify", digest, Statistics::of(&f));
            report.parameters.kind = Some((*kind).into());
            report.verdict = Some(if holds { Verdict::True } else { Verdict::False });
            if holds {
                report.backdoor = Some(b);
                report.witness = witness;
            }
            report
        }
        Command::Gen { what } => {
            let f = match what {
                Generator::Grid { size } => gen_grid(*size)?,
                Generator::Hitting { sets, universe } => {
                    let family = parse_family(sets)?;
                    let largest = family.iter().flatten().copied().max().unwrap_or(0);
                    gen_hitting_set(universe.unwrap_or(largest), &family)?
                }
                Generator::Random { n, m, width, seed } => gen_random_rcnf(*n, *m, *width, *seed)?,
            };
            print!("{}", f.to_dimacs());
            return Ok(None);
        }
        Command::Oracle { input, kind, k_max } => {
            let Loaded { formula: f, digest } = load(&input.cnf)?;
            let (oracle, kind) = match kind {
                OracleTask::Count => (brute_count_report(&f)?, None),
                OracleTask::Weak => (brute_min_backdoor(&f, BackdoorKind::Weak, *k_max)?, Some(BackdoorKind::Weak)),
                OracleTask::Strong => (brute_min_backdoor(&f, BackdoorKind::Strong, *k_max)?, Some(BackdoorKind::Strong)),
                OracleTask::Deletion => {
                    (brute_min_backdoor(&f, BackdoorKind::Deletion, *k_max)?, Some(BackdoorKind::Deletion))
                }
            };
            let mut report = RunReport::new("oracle", digest, Statistics::of(&f));
            report.parameters.kind = kind;
            if kind.is_some() {
                report.parameters.k_max = Some(*k_max);
                report.verdict = Some(if oracle.optimum.is_some() { Verdict::Found } else { Verdict::No });
                report.backdoor = oracle.witness_sets.first().cloned();
            }
            report.oracle = Some(oracle);
            report
        }
        Command::Stats { input } => {
            let Loaded { formula: f, digest } = load(&input.cnf)?;
            RunReport::new("stats", digest, Statistics::of(&f).detailed(&f))
        }
    };
    Ok(Some(report))
}

fn parse_family(s: &str) -> Result<Vec<BTreeSet<u32>>> {
    s.split(';')
        .map(|part| {
            part.split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u32>().with_context(|| format!("bad element `{t}`")))
                .collect()
        })
        .collect()
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<acyclic_backdoors::Error>() {
        Some(e) if e.is_resource_guard() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("fb: cannot start {n} worker threads: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(mut report)) => {
            if !cli.no_timing {
                report.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("{}", render(&report));
            }
            ExitCode::from(report.verdict.map_or(0, |v| v.exit_code() as u8))
        }
        Err(e) => {
            eprintln!("fb: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
