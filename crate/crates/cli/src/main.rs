use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subshift::criteria::Only;
use subshift_cli::reproduce::{reproduce, IDS};
use subshift_cli::{document, Command, Outcome, ReportDocument, TOOL};

#[derive(Parser)]
#[command(name = "subshift", version, about = "Subshifts, their spectral partial action, and freeness/minimality/simplicity criteria")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Surrogate depth for oracle shifts (criteria only).
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Membership of a word in the language.
    Lang { spec: String, word: String },
    /// The follower set of B: emptiness and isolated points.
    Follower { spec: String, words: Vec<String> },
    /// Circuit, exit and strong exit of γ.
    Circuit { spec: String, gamma: String },
    /// θ_g(x) and the fixed point of g.
    Paction { spec: String, g: String, x: String },
    /// ξ(x) restricted to the ball of radius R.
    Spectrum {
        spec: String,
        x: String,
        #[arg(long)]
        radius: usize,
        /// Write the ball as a DOT graph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// The limit ball of a sequence of points.
    Limit {
        spec: String,
        /// `even-odd-ones` or `prefix|pump|tail`.
        #[arg(long)]
        family: String,
        #[arg(long)]
        radius: usize,
        #[arg(long, default_value_t = 10)]
        k_max: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Cofinality, freeness, minimality and simplicity verdicts.
    Criteria {
        spec: String,
        #[arg(long)]
        only: Option<Only>,
    },
    /// cost(B, x), or its supremum over x.
    Cost {
        spec: String,
        #[arg(long = "B", required = true, num_args = 1.., value_delimiter = ',')]
        b: Vec<String>,
        #[arg(long, conflicts_with = "sup", required_unless_present = "sup")]
        x: Option<String>,
        #[arg(long)]
        sup: bool,
        /// The Thomsen variant (the word β may only be inserted first).
        #[arg(long)]
        thomsen: bool,
    },
    /// Run a registered example; `all` runs every one.
    Reproduce { id: String },
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let (doc, dot, dot_path) = match cli.cmd {
        Cmd::Reproduce { id } => {
            let ids: Vec<&str> = if id == "all" { IDS.to_vec() } else { vec![id.as_str()] };
            let mut doc = ReportDocument {
                tool: TOOL.into(),
                command: argv,
                shift: None,
                confidence: None,
                outcome: Outcome::Computed,
                report: serde_json::Value::Null,
                error: None,
            };
            let mut runs = Vec::new();
            for id in ids {
                match reproduce(id) {
                    Ok(r) => {
                        eprintln!("{} {}", if r.pass { "pass" } else { "FAIL" }, r.id);
                        if !r.pass {
                            doc.outcome = Outcome::PropertyFailed;
                        }
                        runs.push(r);
                    }
                    Err(e) => {
                        doc.outcome = Outcome::InputError;
                        doc.error = Some(e.to_string());
                    }
                }
            }
            doc.report = serde_json::to_value(runs).expect("reports serialize");
            (doc, None, None)
        }
        cmd => {
            let (spec, command, dot_path) = match cmd {
                Cmd::Lang { spec, word } => (spec, Command::Lang { word }, None),
                Cmd::Follower { spec, words } => (spec, Command::Follower { words }, None),
                Cmd::Circuit { spec, gamma } => (spec, Command::Circuit { gamma }, None),
                Cmd::Paction { spec, g, x } => (spec, Command::Paction { g, x }, None),
                Cmd::Spectrum { spec, x, radius, dot } => (spec, Command::Spectrum { x, radius }, dot),
                Cmd::Limit { spec, family, radius, k_max, dot } => (spec, Command::Limit { family, radius, k_max }, dot),
                Cmd::Criteria { spec, only } => (spec, Command::Criteria { only }, None),
                Cmd::Cost { spec, b, x, sup: _, thomsen } => (spec, Command::Cost { b, x, thomsen }, None),
                Cmd::Reproduce { .. } => unreachable!(),
            };
            let (doc, dot) = document(&spec, &command, cli.depth, argv);
            (doc, dot, dot_path)
        }
    };
    if let Some(e) = &doc.error {
        eprintln!("error: {e}");
    }
    let mut code = doc.outcome.exit_code();
    if let (Some(path), Some(dot)) = (&dot_path, &dot) {
        if let Err(e) = emit(&Some(path.clone()), dot) {
            eprintln!("error: {e}");
            code = 2;
        }
    }
    if let Err(e) = emit(&cli.out, &doc.to_json()) {
        eprintln!("error: {e}");
        code = 2;
    }
    ExitCode::from(code as u8)
}
