//! `tropatt` command-line front end.
//!
//! [`run`] is the whole program behind an argv and three streams, so tests can
//! drive it in-process. Exit codes: 0 success, 1 usage error, 2 input
//! parse/schema error, 3 domain error. Failures print one line on stderr.

use std::ffi::OsString;
use std::fmt::Display;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use tropatt::attention::{
    attention_forward, hard_attention, log_space_attention, score_matrix, Beta,
};
use tropatt::convergence::{
    all_margins, sweep, sweep_csv, theorem_gap_report, DEFAULT_EPSILON_TIE,
};
use tropatt::io::{self as fmt, MarginRecord};
use tropatt::linalg::{reconstruct_path, trop_matvec, trop_power};
use tropatt::pathfinding::{add_self_loops, enumerate_paths, export_dot, fig2, source_vector};
use tropatt::{Error, Graph, Path as PathWitness, Values};

/// Environment override for the tie tolerance; `--epsilon-tie` wins over it.
pub const EPSILON_TIE_ENV: &str = "TROPATT_EPSILON_TIE";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Domain(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            CliError::Input(e.to_string())
        } else {
            CliError::Domain(e.to_string())
        }
    }
}

fn usage(e: impl Display) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "tropatt",
    version,
    about = "Max-plus algebra, softmax attention and its tropical limit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MatrixArg {
    /// Score matrix JSON ("-" for stdin)
    #[arg(long, short = 'm')]
    matrix: PathBuf,
}

#[derive(Args, Debug)]
struct ValuesArg {
    /// Value vector JSON ("-" for stdin)
    #[arg(long, short = 'v')]
    values: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Score matrix A_ij = <q_i, k_j> from an embeddings file
    Score {
        #[arg(long, short = 'e')]
        embeddings: PathBuf,
    },
    /// Softmax attention at inverse temperature beta
    Attend {
        #[command(flatten)]
        matrix: MatrixArg,
        #[command(flatten)]
        values: ValuesArg,
        #[arg(long, short = 'b', required_unless_present = "hard")]
        beta: Option<f64>,
        /// beta -> infinity limit: value of the winning key (mean over ties)
        #[arg(long, conflicts_with = "log_space")]
        hard: bool,
        /// (1/beta) log sum_j exp(beta (A_ij + v_j))
        #[arg(long)]
        log_space: bool,
    },
    /// Tropical product A ⊗ V
    Tropical {
        #[command(flatten)]
        matrix: MatrixArg,
        #[command(flatten)]
        values: ValuesArg,
    },
    /// Tropical power A^L
    Power {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long, short = 'L')]
        layers: usize,
    },
    /// Best length-L path into a target node
    Path(PathCmd),
    /// Distances to both beta -> infinity limits over a beta schedule
    Sweep(SweepCmd),
    /// Per-row score margins and tie-boundary flags
    Margins {
        #[command(flatten)]
        matrix: MatrixArg,
        #[arg(long)]
        epsilon_tie: Option<f64>,
    },
    /// Per-row agreement of hard attention with the tropical product
    Check {
        #[command(flatten)]
        matrix: MatrixArg,
        #[command(flatten)]
        values: ValuesArg,
    },
    /// Built-in worked examples
    Demo {
        fixture: Fixture,
        #[arg(long, default_value = "text")]
        format: DemoFormat,
    },
}

#[derive(Args, Debug)]
struct PathCmd {
    /// Score matrix JSON; entry (i, j) is the edge j -> i
    #[arg(
        long,
        short = 'm',
        required_unless_present = "graph",
        conflicts_with = "graph"
    )]
    matrix: Option<PathBuf>,
    /// Graph JSON (weights plus optional labels)
    #[arg(long, short = 'g')]
    graph: Option<PathBuf>,
    /// Start values V0
    #[arg(
        long,
        short = 'v',
        required_unless_present = "source",
        conflicts_with = "source"
    )]
    values: Option<PathBuf>,
    /// Start every path at this node (V0 = 0 there, bottom elsewhere)
    #[arg(long)]
    source: Option<usize>,
    #[arg(long, short = 'L')]
    layers: usize,
    #[arg(long, short = 't')]
    target: usize,
    /// Add zero-weight self-loops so shorter paths compete
    #[arg(long)]
    allow_stay: bool,
    #[arg(long, default_value = "json")]
    format: PathFormat,
}

#[derive(Args, Debug)]
struct SweepCmd {
    #[command(flatten)]
    matrix: MatrixArg,
    #[command(flatten)]
    values: ValuesArg,
    /// Explicit schedule, comma separated
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["beta_min", "beta_max", "steps"])]
    betas: Option<Vec<f64>>,
    #[arg(long, requires_all = ["beta_max", "steps"])]
    beta_min: Option<f64>,
    #[arg(long, requires = "beta_min")]
    beta_max: Option<f64>,
    #[arg(long, requires = "beta_min")]
    steps: Option<usize>,
    #[arg(long)]
    log_spaced: bool,
    #[arg(long, default_value = "csv")]
    format: SweepFormat,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Fixture {
    Fig2,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DemoFormat {
    Text,
    Json,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PathFormat {
    Json,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SweepFormat {
    Csv,
    Json,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, A>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let line: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty())
                .collect();
            let line = line.join(" ");
            let _ = writeln!(stderr, "tropatt: {}", line.trim_start_matches("error: "));
            return 1;
        }
    };
    let env_eps = std::env::var(EPSILON_TIE_ENV).ok();
    match execute(cli.command, env_eps.as_deref(), stdin) {
        Ok(out) => match stdout
            .write_all(out.as_bytes())
            .and_then(|_| stdout.flush())
        {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "tropatt: write failed: {e}");
                3
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "tropatt: {}", e.message().replace('\n', " "));
            e.exit_code()
        }
    }
}

fn read_text(path: &Path, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut s = String::new();
    if path == Path::new("-") {
        stdin
            .read_to_string(&mut s)
            .map_err(|e| CliError::Input(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(s)
}

fn with_file<T>(
    path: &Path,
    stdin: &mut dyn Read,
    parse: fn(&str) -> tropatt::Result<T>,
) -> Result<T, CliError> {
    let text = read_text(path, stdin)?;
    parse(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn beta(x: f64) -> Result<Beta<f64>, CliError> {
    Beta::new(x).map_err(usage)
}

fn epsilon_tie(flag: Option<f64>, env: Option<&str>) -> Result<f64, CliError> {
    let eps = match (flag, env) {
        (Some(x), _) => x,
        (None, Some(s)) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{EPSILON_TIE_ENV}: not a number: {s:?}")))?,
        (None, None) => DEFAULT_EPSILON_TIE,
    };
    if eps.is_finite() && eps >= 0.0 {
        Ok(eps)
    } else {
        Err(CliError::Usage(format!(
            "epsilon-tie must be finite and >= 0, got {eps}"
        )))
    }
}

/// Builds the β schedule from either an explicit list or min/max/steps.
fn schedule(cmd: &SweepCmd) -> Result<Vec<Beta<f64>>, CliError> {
    let raw: Vec<f64> = match (&cmd.betas, cmd.beta_min, cmd.beta_max, cmd.steps) {
        (Some(list), ..) => list.clone(),
        (None, Some(lo), Some(hi), Some(steps)) => {
            if steps == 0 {
                return Err(usage("--steps must be >= 1"));
            }
            if steps == 1 {
                vec![lo]
            } else if cmd.log_spaced {
                if lo <= 0.0 {
                    return Err(usage("log-spaced schedule needs --beta-min > 0"));
                }
                let (a, b) = (lo.log10(), hi.log10());
                let mut v: Vec<f64> = (0..steps)
                    .map(|k| 10f64.powf(a + (b - a) * k as f64 / (steps - 1) as f64))
                    .collect();
                v[0] = lo;
                v[steps - 1] = hi;
                v
            } else {
                (0..steps)
                    .map(|k| {
                        if k == steps - 1 {
                            hi
                        } else {
                            lo + (hi - lo) * k as f64 / (steps - 1) as f64
                        }
                    })
                    .collect()
            }
        }
        _ => {
            return Err(usage(
                "sweep needs --betas or --beta-min/--beta-max/--steps",
            ))
        }
    };
    let betas = raw.into_iter().map(beta).collect::<Result<Vec<_>, _>>()?;
    if betas.is_empty()
        || betas[0].value() <= 0.0
        || betas.windows(2).any(|w| w[1].value() <= w[0].value())
    {
        return Err(usage(Error::BetaSchedule));
    }
    Ok(betas)
}

fn demo_fig2(format: DemoFormat) -> Result<String, CliError> {
    let g: Graph = fig2();
    let start: Values = source_vector(g.n(), 0)?;
    let target = 3;

    let mut candidates: Vec<PathWitness> = enumerate_paths(&g, &start, 1, target)?;
    candidates.extend(enumerate_paths(&g, &start, 2, target)?);
    candidates.sort_by(|a, b| {
        a.total_weight
            .cmp(&b.total_weight)
            .then_with(|| a.nodes.cmp(&b.nodes))
    });

    let looped = add_self_loops(&g);
    let winner = reconstruct_path(looped.weights(), &start, 2, target)?;
    let squared = trop_power(g.weights(), 2)?;
    let entry = squared.get(target, 0);

    let arrows = |nodes: &[usize]| {
        nodes
            .iter()
            .map(|n| n.to_string())
            .collect::<Vec<_>>()
            .join(" -> ")
    };
    Ok(match format {
        DemoFormat::Dot => export_dot(&g, Some(&winner))?,
        DemoFormat::Json => {
            let as_value = |p: &PathWitness| -> serde_json::Value {
                serde_json::from_str(&fmt::path_to_json(p)).expect("path JSON is well formed")
            };
            let doc = serde_json::json!({
                "candidates": candidates.iter().map(as_value).collect::<Vec<_>>(),
                "winner": as_value(&winner),
                "power_entry": entry.finite(),
            });
            let mut out = serde_json::to_string_pretty(&doc).expect("demo JSON serializes");
            out.push('\n');
            out
        }
        DemoFormat::Text => {
            let mut s = String::new();
            s.push_str(
                "toy graph: 4 tokens, edges 0->1 (4), 1->3 (4), 0->3 (5), 0->2 (6), 2->3 (1)\n",
            );
            s.push_str(&format!(
                "candidate routes from node 0 into node {target}:\n"
            ));
            for p in &candidates {
                let label = if p.layers() == 1 {
                    "direct".to_string()
                } else {
                    format!(
                        "via {}",
                        p.nodes[1..p.nodes.len() - 1]
                            .iter()
                            .map(|n| n.to_string())
                            .collect::<Vec<_>>()
                            .join(", ")
                    )
                };
                s.push_str(&format!(
                    "  {label}: {}  ({})\n",
                    p.total_weight,
                    arrows(&p.nodes)
                ));
            }
            s.push_str(&format!(
                "winner: {} (weight {})\n",
                arrows(&winner.nodes),
                winner.total_weight
            ));
            s.push_str(&format!("(A^2)[{target},0] = {entry}\n"));
            s
        }
    })
}

fn execute(cmd: Command, env_eps: Option<&str>, stdin: &mut dyn Read) -> Result<String, CliError> {
    match cmd {
        Command::Score { embeddings } => {
            let e = with_file(&embeddings, stdin, fmt::parse_embeddings)?;
            Ok(fmt::matrix_to_json(&score_matrix(&e)))
        }
        Command::Attend {
            matrix,
            values,
            beta: b,
            hard,
            log_space,
        } => {
            let a = with_file(&matrix.matrix, stdin, fmt::parse_matrix)?;
            let v = with_file(&values.values, stdin, fmt::parse_values)?;
            let out = if hard {
                hard_attention(&a, &v)?
            } else {
                let b = beta(b.expect("clap enforces --beta"))?;
                if log_space {
                    log_space_attention(&a, &v, b)?
                } else {
                    attention_forward(&a, &v, b)?
                }
            };
            Ok(fmt::values_to_json(&out))
        }
        Command::Tropical { matrix, values } => {
            let a = with_file(&matrix.matrix, stdin, fmt::parse_matrix)?;
            let v = with_file(&values.values, stdin, fmt::parse_values)?;
            Ok(fmt::values_to_json(&trop_matvec(&a, &v)?))
        }
        Command::Power { matrix, layers } => {
            let a = with_file(&matrix.matrix, stdin, fmt::parse_matrix)?;
            Ok(fmt::matrix_to_json(&trop_power(&a, layers)?))
        }
        Command::Path(p) => {
            let g = match (&p.matrix, &p.graph) {
                (Some(m), _) => Graph::new(with_file(m, stdin, fmt::parse_matrix)?, None)?,
                (None, Some(g)) => with_file(g, stdin, fmt::parse_graph)?,
                (None, None) => unreachable!("clap requires --matrix or --graph"),
            };
            let v0 = match (&p.values, p.source) {
                (Some(path), _) => with_file(path, stdin, fmt::parse_values)?,
                (None, Some(s)) => source_vector(g.n(), s)?,
                (None, None) => unreachable!("clap requires --values or --source"),
            };
            let search = if p.allow_stay {
                add_self_loops(&g)
            } else {
                g.clone()
            };
            let witness = reconstruct_path(search.weights(), &v0, p.layers, p.target)?;
            Ok(match p.format {
                PathFormat::Json => fmt::path_to_json(&witness),
                PathFormat::Dot => export_dot(&search, Some(&witness))?,
            })
        }
        Command::Sweep(s) => {
            let betas = schedule(&s)?;
            let a = with_file(&s.matrix.matrix, stdin, fmt::parse_matrix)?;
            let v = with_file(&s.values.values, stdin, fmt::parse_values)?;
            let records = sweep(&a, &v, &betas)?;
            Ok(match s.format {
                SweepFormat::Csv => sweep_csv(&records),
                SweepFormat::Json => fmt::sweep_to_json(&records),
            })
        }
        Command::Margins {
            matrix,
            epsilon_tie: flag,
        } => {
            let eps = epsilon_tie(flag, env_eps)?;
            let a = with_file(&matrix.matrix, stdin, fmt::parse_matrix)?;
            let records: Vec<MarginRecord> = all_margins(&a)?
                .iter()
                .map(|r| MarginRecord::new(r, eps))
                .collect();
            Ok(fmt::margins_to_json(&records))
        }
        Command::Check { matrix, values } => {
            let a = with_file(&matrix.matrix, stdin, fmt::parse_matrix)?;
            let v = with_file(&values.values, stdin, fmt::parse_values)?;
            Ok(fmt::gap_report_to_json(&theorem_gap_report(&a, &v)?))
        }
        Command::Demo { fixture, format } => match fixture {
            Fixture::Fig2 => demo_fig2(format),
        },
    }
}
