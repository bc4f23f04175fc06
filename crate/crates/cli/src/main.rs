//! `ghzw`: batch front end for diagram evaluation, rewriting and arithmetic.
//!
//! Exit codes: 0 when the command succeeds and its check passes, 1 when a
//! check fails (mismatch, non-isomorphic, unsound rule, step limit hit),
//! 2 on usage or input errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use ghzw_core::arith::{decode, encode_rational, eval_expression, parse_fraction};
use ghzw_core::io::{parse_diagram, parse_environment, serialize_diagram_with};
use ghzw_core::rewrite::{normalize, rewrite_at};
use ghzw_core::rules::{check_rule_soundness, samples};
use ghzw_core::semantics::{evaluate, format_scalar, scalar_value, Environment};
use ghzw_core::strategy::{lookup_rule, shipped_rules, strategy, STRATEGY_NAMES};
use ghzw_core::{is_isomorphic, Diagram};

#[derive(Parser)]
#[command(name = "ghzw", version, about = "Exact GHZ/W diagram rewriting")]
struct Cli {
    /// Print a JSON report `{command, pass, details}` instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the tensor of a diagram.
    Eval {
        file: PathBuf,
        /// Parameter values, overriding any in the diagram file.
        #[arg(long)]
        env: Option<PathBuf>,
    },
    /// Print the value of a closed diagram.
    Scalar {
        file: PathBuf,
        #[arg(long)]
        env: Option<PathBuf>,
    },
    /// Check every shipped rule and pattern expansion for soundness.
    CheckRules {
        /// Random environments per parameterised rule.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest box count for pattern expansions.
        #[arg(long, default_value_t = 4)]
        max_count: usize,
    },
    /// Apply one rule at one match.
    Rewrite {
        file: PathBuf,
        #[arg(long)]
        rule: String,
        #[arg(long = "match", default_value_t = 0)]
        index: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite with a named strategy until nothing matches.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        strategy: String,
        #[arg(long, default_value_t = 1000)]
        max_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the encoding of a fraction `P/Q`.
    Encode {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read the number a `(0, 1)` diagram encodes.
    Decode {
        file: PathBuf,
        #[arg(long)]
        env: Option<PathBuf>,
    },
    /// Evaluate an arithmetic expression through diagrams and compare with
    /// direct rational arithmetic.
    Arith {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Also write the compiled diagram.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether two diagrams are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval { .. } => "eval",
            Command::Scalar { .. } => "scalar",
            Command::CheckRules { .. } => "check-rules",
            Command::Rewrite { .. } => "rewrite",
            Command::Normalize { .. } => "normalize",
            Command::Encode { .. } => "encode",
            Command::Decode { .. } => "decode",
            Command::Arith { .. } => "arith",
            Command::Iso { .. } => "iso",
        }
    }
}

struct Report {
    pass: bool,
    details: Vec<String>,
}

impl Report {
    fn ok(details: Vec<String>) -> Self {
        Report { pass: true, details }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(path: &Path, env_file: Option<&Path>) -> Result<(Diagram, Environment), String> {
    let (d, env) = parse_diagram(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let env = match env_file {
        Some(p) => env.overlay(&parse_environment(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?),
        None => env,
    };
    Ok((d, env))
}

/// Writes a document to `out`, or returns it as the details when there is
/// no output file.
fn emit(d: &Diagram, env: &Environment, out: Option<&Path>, mut details: Vec<String>) -> Result<Vec<String>, String> {
    let text = serialize_diagram_with(d, env).map_err(|e| e.to_string())?;
    match out {
        Some(p) => {
            fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?;
            details.push(format!("wrote {}", p.display()));
        }
        None => details.extend(text.lines().map(str::to_string)),
    }
    Ok(details)
}

fn run(command: &Command) -> Result<Report, String> {
    match command {
        Command::Eval { file, env } => {
            let (d, env) = load(file, env.as_deref())?;
            let t = evaluate(&d, &env).map_err(|e| e.to_string())?;
            Ok(Report::ok(t.to_string().lines().map(str::to_string).collect()))
        }
        Command::Scalar { file, env } => {
            let (d, env) = load(file, env.as_deref())?;
            let s = scalar_value(&d, &env).map_err(|e| e.to_string())?;
            Ok(Report::ok(vec![format_scalar(&s)]))
        }
        Command::CheckRules {
            samples: count,
            seed,
            max_count,
        } => {
            let mut pass = true;
            let mut details = Vec::new();
            for rule in shipped_rules(*max_count) {
                let report = check_rule_soundness(&rule, &samples(&rule, *count, *seed));
                if report.pass {
                    details.push(format!("PASS {}", rule.name));
                } else {
                    pass = false;
                    let why = match report.first_counterexample() {
                        Some(s) => match (&s.error, &s.lambda) {
                            (Some(e), _) => e.to_string(),
                            (None, Some(l)) => format!("scalar {} at {}", format_scalar(l), s.env),
                            (None, None) => format!("sides differ at {}", s.env),
                        },
                        None => String::new(),
                    };
                    details.push(format!("FAIL {}: {why}", rule.name));
                }
            }
            Ok(Report { pass, details })
        }
        Command::Rewrite { file, rule, index, out } => {
            let (d, env) = load(file, None)?;
            let r = lookup_rule(rule).ok_or_else(|| format!("unknown rule `{rule}`"))?;
            let after = rewrite_at(&r, &d, *index).map_err(|e| e.to_string())?;
            Ok(Report::ok(emit(&after, &env, out.as_deref(), Vec::new())?))
        }
        Command::Normalize {
            file,
            strategy: name,
            max_steps,
            out,
        } => {
            let (d, env) = load(file, None)?;
            let rules = strategy(name).ok_or_else(|| {
                format!(
                    "unknown strategy `{name}`, expected one of {}",
                    STRATEGY_NAMES.join(", ")
                )
            })?;
            let (result, trace) = normalize(&d, &rules, *max_steps);
            let mut details: Vec<String> = trace.to_text().lines().map(str::to_string).collect();
            details.push(format!("{} steps", trace.len()));
            if trace.step_limit_exceeded {
                details.push("step limit exceeded".to_string());
            }
            if let Some(p) = out {
                details = emit(&result, &env, Some(p), details)?;
            }
            Ok(Report {
                pass: !trace.step_limit_exceeded,
                details,
            })
        }
        Command::Encode { fraction, out } => {
            let (p, q) = parse_fraction(fraction).map_err(|e| e.to_string())?;
            let d = encode_rational(p, q).map_err(|e| e.to_string())?;
            Ok(Report::ok(emit(&d, &Environment::new(), out.as_deref(), Vec::new())?))
        }
        Command::Decode { file, env } => {
            let (d, env) = load(file, env.as_deref())?;
            let v = decode(&d, &env).map_err(|e| e.to_string())?;
            Ok(Report::ok(vec![v.to_string()]))
        }
        Command::Arith { expr, out } => {
            let (d, decoded, oracle) = eval_expression(expr).map_err(|e| e.to_string())?;
            let pass = decoded == oracle;
            let verdict = if pass { "OK" } else { "MISMATCH" };
            let mut details = vec![format!("{decoded} == {oracle} {verdict}")];
            if let Some(p) = out {
                details = emit(&d, &Environment::new(), Some(p), details)?;
            }
            Ok(Report { pass, details })
        }
        Command::Iso { a, b } => {
            let (da, _) = load(a, None)?;
            let (db, _) = load(b, None)?;
            let pass = is_isomorphic(&da, &db);
            Ok(Report {
                pass,
                details: vec![if pass { "isomorphic" } else { "not isomorphic" }.to_string()],
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let (pass, details, code) = match run(&cli.command) {
        Ok(r) => {
            let code = if r.pass { 0 } else { 1 };
            (r.pass, r.details, code)
        }
        Err(e) => {
            if !cli.json {
                eprintln!("error: {e}");
            }
            (false, vec![format!("error: {e}")], 2)
        }
    };
    // a closed pipe downstream is not worth a panic
    let mut stdout = io::stdout().lock();
    if cli.json {
        let report = json!({ "command": name, "pass": pass, "details": details });
        let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("json value"));
    } else if code != 2 {
        for line in details {
            if writeln!(stdout, "{line}").is_err() {
                break;
            }
        }
    }
    ExitCode::from(code)
}
