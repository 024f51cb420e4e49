//! Command-line front end. [`run`] parses arguments, writes the report and
//! returns the process exit code: 0 ok, 1 failed check, 2 parse error or
//! bad options, 3 inapplicable letter under the abort policy.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::gamma::Word;
use crate::hyperbolic::{self, log_uniform, OracleSummary};
use crate::korepanov;
use crate::polygon::{flip_graph, Edge, Triangulation};
use crate::ptolemy::{self, ActionError, LabelledTriangulation, Policy};
use crate::symexpr::Var;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_APPLICABLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "pentaflip", version, about = "Pentagon-equation checks on polygon triangulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Skip,
    Abort,
}

#[derive(Debug, Args)]
struct Output {
    /// Report format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply a word of flip generators to a labelled state file
    Flip {
        /// JSON labelled state
        state: PathBuf,
        /// Whitespace-separated generators, e.g. "d(1,3,4,5) d(1,2,3,5)^-1"
        #[arg(default_value = "")]
        word: String,
        #[arg(long, value_enum, default_value = "skip")]
        policy: PolicyArg,
        #[command(flatten)]
        output: Output,
    },
    /// Run one of the built-in checks
    Verify {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        len: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Flip graph of the n-gon
    Flipgraph {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Decorated ideal polygons
    Hyperbolic {
        #[command(subcommand)]
        command: HyperbolicCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Lemma1,
    GammaRelations,
    MatrixPentagon,
    Laurent,
    OracleCrosscheck,
}

#[derive(Debug, Subcommand)]
enum HyperbolicCommand {
    /// Realize a labelled state at an assignment, or random fan values
    Realize {
        /// JSON labelled state; random fan values on the n-gon when absent
        state: Option<PathBuf>,
        /// Variable values, e.g. "a=1,b=2.5"
        #[arg(long)]
        assign: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Round trip and Ptolemy residuals over random realizations
    Check {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Symbolic flip labels against measured λ-lengths
    Crosscheck {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long)]
        len: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        output: Output,
    },
}

/// An error already mapped to its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

/// A finished report: rendered text plus whether the checks passed.
struct Report {
    body: String,
    pass: bool,
}

fn render(value: &Value, text: impl FnOnce() -> String, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(value).expect("serializable") + "\n"),
        Format::Text => Ok(text()),
        Format::Dot => Err(usage("--format dot is only available for flipgraph")),
    }
}

fn require_seed(seed: Option<u64>) -> Result<u64, Failure> {
    seed.ok_or_else(|| usage("this command is randomized and needs --seed"))
}

fn check_n(n: usize, lo: usize, hi: usize) -> Result<usize, Failure> {
    if (lo..=hi).contains(&n) {
        Ok(n)
    } else {
        Err(usage(format!("--n must be between {lo} and {hi}, got {n}")))
    }
}

fn read_state(path: &Path) -> Result<LabelledTriangulation, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    LabelledTriangulation::from_json(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. Reports go to `out` or the `--out` file, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    let (result, dest) = dispatch(cli.command);
    match result {
        Ok(report) => {
            let written = match dest {
                Some(path) => std::fs::write(&path, &report.body).map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(report.body.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            if report.pass {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn dispatch(command: Command) -> (Result<Report, Failure>, Option<PathBuf>) {
    match command {
        Command::Flip { state, word, policy, output } => (cmd_flip(&state, &word, policy, output.format), output.out),
        Command::Verify { target, n, seed, trials, len, output } => {
            (cmd_verify(target, n, seed, trials, len, output.format), output.out)
        }
        Command::Flipgraph { n, output } => (cmd_flipgraph(n, output.format), output.out),
        Command::Hyperbolic { command } => match command {
            HyperbolicCommand::Realize { state, assign, n, seed, output } => {
                (cmd_realize(state.as_deref(), assign.as_deref(), n, seed, output.format), output.out)
            }
            HyperbolicCommand::Check { n, seed, trials, output } => (cmd_oracle_check(n, seed, trials, output.format), output.out),
            HyperbolicCommand::Crosscheck { n, len, seed, trials, output } => {
                (cmd_crosscheck(n, len, seed, trials, output.format), output.out)
            }
        },
    }
}

fn cmd_flip(state: &Path, word: &str, policy: PolicyArg, format: Format) -> Result<Report, Failure> {
    let state = read_state(state)?;
    let word: Word = word.parse().map_err(|e| usage(format!("word: {e}")))?;
    let policy = match policy {
        PolicyArg::Skip => Policy::Skip,
        PolicyArg::Abort => Policy::Abort,
    };
    let report = state.apply_word(&word, policy).map_err(|e| match e {
        ActionError::NotApplicable { .. } => Failure { code: EXIT_NOT_APPLICABLE, message: e.to_string() },
        other => usage(other.to_string()),
    })?;
    let value = serde_json::to_value(&report).expect("serializable");
    Ok(Report { body: render(&value, || report.to_text(), format)?, pass: true })
}

fn summary_text(title: &str, value: &Value, pass: bool) -> String {
    let mut out = format!("{title}: {}\n", if pass { "pass" } else { "FAIL" });
    if let Value::Object(map) = value {
        for (k, v) in map {
            let _ = writeln!(out, "  {k}: {v}");
        }
    }
    out
}

fn cmd_verify(
    target: Target,
    n: Option<usize>,
    seed: Option<u64>,
    trials: Option<usize>,
    len: Option<usize>,
    format: Format,
) -> Result<Report, Failure> {
    let (name, pass, details) = match target {
        Target::Lemma1 => {
            let report = ptolemy::verify_lemma1();
            let pass = report.identity && report.all_applied();
            if format == Format::Text {
                return Ok(Report { body: format!("lemma1: {}\n{}", if pass { "pass" } else { "FAIL" }, report.to_text()), pass });
            }
            ("lemma1", pass, serde_json::to_value(&report).expect("serializable"))
        }
        Target::MatrixPentagon => {
            let identity = korepanov::verify_matrix_pentagon();
            let closure = korepanov::area_map_check(&korepanov::quad_matrix_for([1, 2, 3, 4]))
                && korepanov::inverse_2x2(&korepanov::quad_matrix_for([1, 2, 3, 4])).is_ok_and(|m| korepanov::area_map_check(&m));
            let pass = identity.identity && closure;
            ("matrix-pentagon", pass, json!({ "identity": identity, "column_sums_one": closure }))
        }
        Target::GammaRelations => {
            let n = check_n(n.unwrap_or(6), 4, 7)?;
            let suite = ptolemy::relation_suite(n).map_err(|e| usage(e.to_string()))?;
            ("gamma-relations", suite.holds, serde_json::to_value(&suite).expect("serializable"))
        }
        Target::Laurent => {
            let n = check_n(n.unwrap_or(8), 4, 12)?;
            let seed = require_seed(seed)?;
            let report = ptolemy::laurent_walks(n, len.unwrap_or(10), seed, trials.unwrap_or(100))
                .map_err(|e| usage(e.to_string()))?;
            ("laurent", report.holds, serde_json::to_value(&report).expect("serializable"))
        }
        Target::OracleCrosscheck => {
            let n = check_n(n.unwrap_or(5), 4, 12)?;
            let seed = require_seed(seed)?;
            let summary = hyperbolic::crosscheck_trials(n, len, seed, trials.unwrap_or(100)).map_err(|e| usage(e.to_string()))?;
            ("oracle-crosscheck", summary.passes(), serde_json::to_value(&summary).expect("serializable"))
        }
    };
    let value = json!({ "target": name, "pass": pass, "details": details });
    Ok(Report { body: render(&value, || summary_text(name, &details, pass), format)?, pass })
}

fn cmd_flipgraph(n: usize, format: Format) -> Result<Report, Failure> {
    let graph = flip_graph(n).map_err(|e| usage(e.to_string()))?;
    let body = match format {
        Format::Dot => graph.to_dot(),
        Format::Json => serde_json::to_string_pretty(&graph.to_json()).expect("serializable") + "\n",
        Format::Text => {
            let mut out = format!("n: {n}\nvertices: {}\nedges: {}\n", graph.order(), graph.edge_count());
            for (i, t) in graph.vertices().iter().enumerate() {
                let nbrs: Vec<String> = graph.neighbors(i).iter().map(|j| j.to_string()).collect();
                let _ = writeln!(out, "{i}: {}  -> {}", t.key(), nbrs.join(" "));
            }
            out
        }
    };
    Ok(Report { body, pass: true })
}

fn parse_assignment(text: &str) -> Result<HashMap<Var, f64>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|pair| {
            let (name, value) = pair.split_once('=').ok_or_else(|| usage(format!("bad assignment `{pair}`")))?;
            let var = Var::new(name.trim()).map_err(|e| usage(format!("bad variable `{name}`: {e}")))?;
            let value: f64 = value.trim().parse().map_err(|_| usage(format!("bad value `{value}`")))?;
            Ok((var, value))
        })
        .collect()
}

fn polygon_text(poly: &hyperbolic::DecoratedIdealPolygon) -> String {
    let mut out = String::new();
    for (i, (v, h)) in poly.vertices().iter().zip(poly.horocycles()).enumerate() {
        let _ = writeln!(out, "{}: {v}  horocycle {h}", i + 1);
    }
    out
}

fn cmd_realize(
    state: Option<&Path>,
    assign: Option<&str>,
    n: Option<usize>,
    seed: Option<u64>,
    format: Format,
) -> Result<Report, Failure> {
    let (base, values) = match state {
        Some(path) => {
            let state = read_state(path)?;
            let assignment = parse_assignment(assign.ok_or_else(|| usage("realizing a state needs --assign"))?)?;
            let values = hyperbolic::evaluate_labels(&state, &assignment).map_err(|e| usage(e.to_string()))?;
            (state.base().clone(), values)
        }
        None => {
            let n = check_n(n.unwrap_or(4), 3, 12)?;
            let seed = require_seed(seed)?;
            let base = Triangulation::fan(n, 1).expect("n >= 3");
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values: BTreeMap<Edge, f64> = base.edges().into_iter().map(|e| (e, log_uniform(&mut rng))).collect();
            (base, values)
        }
    };
    let poly = hyperbolic::realize_values(&base, &values).map_err(|e| usage(e.to_string()))?;
    let round_trip = hyperbolic::round_trip_error(&poly, &values);
    let residual = poly.max_ptolemy_residual();
    let pass = round_trip < hyperbolic::GEOMETRY_TOL && residual < hyperbolic::GEOMETRY_TOL;
    let labels: BTreeMap<String, f64> = values.iter().map(|(e, v)| (e.to_string(), *v)).collect();
    let value = json!({
        "polygon": poly.to_json(),
        "labels": labels,
        "round_trip_error": round_trip,
        "max_ptolemy_residual": residual,
        "pass": pass,
    });
    let text = || {
        format!(
            "{}round trip error: {round_trip:e}\nmax Ptolemy residual: {residual:e}\n{}\n",
            polygon_text(&poly),
            if pass { "pass" } else { "FAIL" }
        )
    };
    Ok(Report { body: render(&value, text, format)?, pass })
}

fn oracle_report(title: &str, summary: &OracleSummary, format: Format) -> Result<Report, Failure> {
    let pass = summary.passes();
    let details = serde_json::to_value(summary).expect("serializable");
    let value = json!({ "target": title, "pass": pass, "details": details });
    Ok(Report { body: render(&value, || summary_text(title, &details, pass), format)?, pass })
}

fn cmd_oracle_check(n: usize, seed: Option<u64>, trials: usize, format: Format) -> Result<Report, Failure> {
    let n = check_n(n, 4, 12)?;
    let seed = require_seed(seed)?;
    let summary = hyperbolic::random_polygon_trials(n, seed, trials).map_err(|e| usage(e.to_string()))?;
    oracle_report("hyperbolic-check", &summary, format)
}

fn cmd_crosscheck(n: usize, len: Option<usize>, seed: Option<u64>, trials: usize, format: Format) -> Result<Report, Failure> {
    let n = check_n(n, 4, 12)?;
    let seed = require_seed(seed)?;
    let summary = hyperbolic::crosscheck_trials(n, len, seed, trials).map_err(|e| usage(e.to_string()))?;
    oracle_report("hyperbolic-crosscheck", &summary, format)
}
