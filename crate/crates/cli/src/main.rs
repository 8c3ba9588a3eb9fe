use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bidgame_core::advantage::threshold_frontier;
use bidgame_core::arena::TieMechanism;
use bidgame_core::configgraph::{reduce_turn_based, tie_state_name, Flavor};
use bidgame_core::determinacy::{Analysis, Verdict};
use bidgame_core::randomtie::{dominant_bid, value_bounds, value_matrix, Prob, ValueMatrix};
use bidgame_core::reproduce::{check_fig1, check_fig2, check_scc_buchi, ClaimReport};
use bidgame_core::sim::{
    build_scc_strategy, interactive_session, play_deterministic, play_random, PlayRecord, Strategy,
};
use bidgame_core::tbsolve::parse_turn_based;
use bidgame_core::{node_cap_from_env, parse_game, serialize_game, Configuration, Error, Game, Player};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bidgame", version, about = "Solve and analyze discrete-bidding games on graphs")]
struct Cli {
    /// Output form: human-readable text or a JSON document.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Doc,
}

/// A configuration named on the command line. Player 2's budget is the
/// total budget minus `--b1`.
#[derive(Args)]
struct At {
    #[arg(long = "from", value_name = "V")]
    vertex: String,
    #[arg(long, value_name = "K")]
    b1: u32,
    /// Transducer state or advantage holder (1/2); defaults to the initial one.
    #[arg(long, value_name = "S")]
    tie_state: Option<String>,
}

#[derive(Args)]
struct OptionalAt {
    #[arg(long = "from", value_name = "V", requires = "b1")]
    vertex: Option<String>,
    #[arg(long, value_name = "K", requires = "vertex")]
    b1: Option<u32>,
    #[arg(long, value_name = "S", requires = "vertex")]
    tie_state: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Determinacy verdicts, for one configuration or all of them.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        at: OptionalAt,
    },
    /// Lists the configurations that are not determined.
    Determinacy {
        file: PathBuf,
        /// List every configuration with its verdict.
        #[arg(long)]
        all: bool,
    },
    /// Bidding matrix (transducer/advantage ties) or value matrix (random ties).
    Matrix {
        file: PathBuf,
        #[command(flatten)]
        at: At,
        /// Rounds left for value matrices.
        #[arg(long, default_value_t = 64)]
        horizon: u32,
    },
    /// Pure-strategy value under random ties.
    Value {
        file: PathBuf,
        #[command(flatten)]
        at: At,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 1 << 14)]
        max_horizon: u32,
        /// Binary floating point instead of exact rationals.
        #[arg(long)]
        float: bool,
    },
    /// Threshold budgets under advantage ties.
    Threshold { file: PathBuf },
    /// Turns a turn-based game document into a bidding game document.
    Reduce {
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        file: PathBuf,
    },
    /// Simulates a play and prints its transcript.
    Simulate {
        file: PathBuf,
        #[command(flatten)]
        at: At,
        /// Seed of the coin stream for random ties.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Step budget for plays with random ties.
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// zero, tour, optimal, or scripted:SEED
        #[arg(long, default_value = "zero")]
        p1: String,
        #[arg(long, default_value = "zero")]
        p2: String,
    },
    /// Plays against the engine on the terminal.
    Play {
        file: PathBuf,
        #[command(flatten)]
        at: At,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        human: u8,
    },
    /// Checks a claim about a built-in example game.
    Paper {
        #[arg(value_enum)]
        example: Example,
        /// Largest total budget for fig2.
        #[arg(long, default_value_t = 6)]
        max_n: u32,
        /// Largest Player-1 budget for scc-buchi.
        #[arg(long, default_value_t = 8)]
        max_b1: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Transducer,
    Advantage,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Fig1,
    Fig2,
    SccBuchi,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::NodeCap { .. } => 3,
            Error::InternalConsistency(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = io::stdout().lock();
    match run(cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let _ = out.flush();
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<Game, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure {
        code: 1,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    Ok(Game::new(parse_game(&bytes)?)?)
}

fn config(game: &Game, at: &At) -> Result<Configuration, Failure> {
    Ok(Configuration::from_names(game, &at.vertex, at.b1, at.tie_state.as_deref())?)
}

fn emit(out: &mut impl Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure {
        code: 1,
        message: format!("cannot write output: {e}"),
    })
}

fn emit_doc(out: &mut impl Write, doc: &Value) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(doc).expect("json values serialize");
    s.push('\n');
    emit(out, &s)
}

fn verdict_json(v: Verdict) -> Value {
    match v {
        Verdict::Determined(p) => json!({"determined": p.number()}),
        Verdict::NotDetermined => json!({"determined": null}),
    }
}

fn config_json(game: &Game, c: &Configuration) -> Value {
    let state = tie_state_name(game, c.tie);
    json!({
        "vertex": game.vertex_name(c.vertex),
        "b1": c.b1,
        "b2": c.b2,
        "tieState": if state.is_empty() { Value::Null } else { Value::String(state) },
    })
}

fn run(cli: Cli, out: &mut impl Write) -> Outcome {
    let doc = cli.format == Format::Doc;
    let cap = node_cap_from_env();
    match cli.command {
        Command::Solve { file, at } => {
            let game = load(&file)?;
            let analysis = Analysis::new(&game, cap)?;
            let configs: Vec<Configuration> = match &at.vertex {
                Some(v) => vec![Configuration::from_names(&game, v, at.b1.unwrap_or(0), at.tie_state.as_deref())?],
                None => analysis.configs().collect(),
            };
            list_verdicts(out, &game, &analysis, &configs, doc)?;
        }
        Command::Determinacy { file, all } => {
            let game = load(&file)?;
            let analysis = Analysis::new(&game, cap)?;
            if all {
                let configs: Vec<Configuration> = analysis.configs().collect();
                list_verdicts(out, &game, &analysis, &configs, doc)?;
            } else {
                let scan = analysis.scan()?;
                if doc {
                    let list: Vec<Value> = scan.iter().map(|c| config_json(&game, c)).collect();
                    emit_doc(out, &json!({ "notDetermined": list }))?;
                } else if scan.is_empty() {
                    emit(out, "every configuration is determined\n")?;
                } else {
                    for c in &scan {
                        emit(out, &format!("{}\n", c.display(&game)))?;
                    }
                }
            }
        }
        Command::Matrix { file, at, horizon } => {
            let game = load(&file)?;
            let c = config(&game, &at)?;
            if let TieMechanism::Random = game.tie() {
                let m = value_matrix::<BigRational>(&game, &c, horizon)?;
                let (p, bid) = dominant_bid(&m)?;
                if doc {
                    let rows: Vec<Vec<String>> =
                        m.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                    emit_doc(
                        out,
                        &json!({"config": config_json(&game, &c), "horizon": horizon, "values": rows,
                                "dominantBid": {"player": p.number(), "bid": bid}}),
                    )?;
                } else {
                    emit(out, &render_values(&m))?;
                    emit(out, &format!("dominant bid: Player {p} bids {bid}\n"))?;
                }
            } else {
                let analysis = Analysis::new(&game, cap)?;
                let m = analysis.matrix(&c);
                if doc {
                    let rows: Vec<Vec<u8>> =
                        m.entries.iter().map(|r| r.iter().map(|p| p.number()).collect()).collect();
                    emit_doc(out, &json!({"config": config_json(&game, &c), "winners": rows}))?;
                } else {
                    emit(out, &m.render())?;
                }
            }
        }
        Command::Value {
            file,
            at,
            tol,
            max_horizon,
            float,
        } => {
            let game = load(&file)?;
            let c = config(&game, &at)?;
            let (lower, upper, exact, horizon, converged) = if float {
                let r = value_bounds::<f64>(&game, &c, tol, max_horizon)?;
                (r.lower, r.upper, None, r.horizon_used, r.converged)
            } else {
                let r = value_bounds::<BigRational>(&game, &c, tol, max_horizon)?;
                (
                    Prob::to_f64(&r.lower),
                    Prob::to_f64(&r.upper),
                    Some((r.lower.to_string(), r.upper.to_string())),
                    r.horizon_used,
                    r.converged,
                )
            };
            if doc {
                let mut v = json!({"config": config_json(&game, &c), "lower": lower, "upper": upper,
                                   "horizonUsed": horizon, "converged": converged});
                if let Some((l, u)) = exact {
                    v["lowerExact"] = json!(l);
                    v["upperExact"] = json!(u);
                }
                emit_doc(out, &v)?;
            } else {
                let show = |x: f64, e: Option<&String>| match e {
                    Some(e) => format!("{x:.9} ({e})"),
                    None => format!("{x:.9}"),
                };
                emit(
                    out,
                    &format!(
                        "lower {}\nupper {}\nhorizon {horizon}\nconverged {converged}\n",
                        show(lower, exact.as_ref().map(|e| &e.0)),
                        show(upper, exact.as_ref().map(|e| &e.1))
                    ),
                )?;
            }
        }
        Command::Threshold { file } => {
            let game = load(&file)?;
            let f = threshold_frontier(&game, cap)?;
            if doc {
                let entries: serde_json::Map<String, Value> = f
                    .entries
                    .iter()
                    .map(|(v, t)| {
                        let t = t.map_or(Value::Null, |t| json!({"budget": t.budget, "needsAdvantage": t.needs_advantage}));
                        (v.clone(), t)
                    })
                    .collect();
                emit_doc(out, &json!({"totalBudget": f.total_budget, "thresholds": entries}))?;
            } else {
                emit(out, &f.to_string())?;
            }
        }
        Command::Reduce { flavor, file } => {
            let bytes = std::fs::read(&file).map_err(|e| Failure {
                code: 1,
                message: format!("cannot read {}: {e}", file.display()),
            })?;
            let tb = parse_turn_based(&bytes)?;
            let flavor = match flavor {
                FlavorArg::Transducer => Flavor::Transducer,
                FlavorArg::Advantage => Flavor::Advantage,
            };
            emit(out, &serialize_game(&reduce_turn_based(&tb, flavor)?))?;
        }
        Command::Simulate {
            file,
            at,
            seed,
            steps,
            p1,
            p2,
        } => {
            let game = load(&file)?;
            let c = config(&game, &at)?;
            let random = matches!(game.tie(), TieMechanism::Random);
            let needs_solution = [&p1, &p2].iter().any(|k| k.as_str() == "optimal");
            let analysis = if needs_solution && !random {
                Some(Analysis::new(&game, cap)?)
            } else {
                None
            };
            let s1 = strategy(&game, analysis.as_ref(), Player::One, &p1)?;
            let s2 = strategy(&game, analysis.as_ref(), Player::Two, &p2)?;
            let record = if random {
                play_random(&game, &c, &s1, &s2, seed, steps)?
            } else {
                play_deterministic(&game, &c, &s1, &s2)?
            };
            emit_record(out, &game, &record, doc)?;
        }
        Command::Play { file, at, human } => {
            let game = load(&file)?;
            let c = config(&game, &at)?;
            let human = if human == 1 { Player::One } else { Player::Two };
            let stdin = io::stdin();
            interactive_session(&game, &c, human, stdin.lock(), &mut *out, cap)?;
        }
        Command::Paper { example, max_n, max_b1 } => {
            let report = match example {
                Example::Fig1 => check_fig1()?,
                Example::Fig2 => check_fig2(max_n)?,
                Example::SccBuchi => check_scc_buchi(max_b1)?,
            };
            emit_claim(out, &report, doc)?;
            return Ok(if report.holds { 0 } else { 2 });
        }
    }
    Ok(0)
}

fn list_verdicts(
    out: &mut impl Write,
    game: &Game,
    analysis: &Analysis,
    configs: &[Configuration],
    doc: bool,
) -> Result<(), Failure> {
    if doc {
        let list = configs
            .iter()
            .map(|c| {
                let mut v = config_json(game, c);
                v["verdict"] = verdict_json(analysis.verdict(c)?);
                Ok(v)
            })
            .collect::<Result<Vec<Value>, Error>>()?;
        return emit_doc(out, &json!({ "verdicts": list }));
    }
    for c in configs {
        emit(out, &format!("{} {}\n", c.display(game), analysis.verdict(c)?))?;
    }
    Ok(())
}

fn strategy(game: &Game, analysis: Option<&Analysis>, player: Player, kind: &str) -> Result<Strategy, Failure> {
    let bad = |message: String| Failure { code: 1, message };
    match kind {
        "zero" => Ok(Strategy::constant_zero(Vec::new())),
        "tour" if player == Player::One => Ok(build_scc_strategy(game, Vec::new())?),
        "tour" => Err(bad("tour is a Player-1 strategy".into())),
        "optimal" => match analysis {
            Some(a) => Ok(Strategy::optimal(a, player)),
            None => Err(bad("optimal strategies need transducer or advantage ties".into())),
        },
        _ => match kind.strip_prefix("scripted:").map(str::parse::<u64>) {
            Some(Ok(seed)) => Ok(Strategy::random_scripted(game, player, seed)),
            _ => Err(bad(format!(
                "unknown strategy \"{kind}\" (expected zero, tour, optimal, or scripted:SEED)"
            ))),
        },
    }
}

fn emit_record(out: &mut impl Write, game: &Game, r: &PlayRecord, doc: bool) -> Result<(), Failure> {
    if doc {
        let rounds: Vec<Value> = r
            .rounds
            .iter()
            .map(|x| {
                json!({"config": config_json(game, &x.config), "bid1": x.bid1, "bid2": x.bid2,
                       "resolution": x.resolution.token(), "next": config_json(game, &x.next)})
            })
            .collect();
        return emit_doc(
            out,
            &json!({"start": config_json(game, &r.start), "rounds": rounds, "outcome": r.outcome.number(),
                    "lassoSplit": r.lasso_split, "truncated": r.truncated, "visited": r.visited}),
        );
    }
    emit(out, &r.transcript(game))?;
    let how = if !matches!(game.tie(), TieMechanism::Random) {
        format!("cycle from round {}", r.lasso_split + 1)
    } else if r.truncated {
        format!("decided over {} sampled rounds", r.lasso_split)
    } else {
        format!("target reached after {} rounds", r.lasso_split)
    };
    emit(out, &format!("outcome: Player {} ({how})\n", r.outcome))
}

fn emit_claim(out: &mut impl Write, r: &ClaimReport, doc: bool) -> Result<(), Failure> {
    if doc {
        return emit_doc(out, &json!({"headline": r.headline, "holds": r.holds, "details": r.details}));
    }
    emit(out, &r.to_string())
}

fn render_values(m: &ValueMatrix<BigRational>) -> String {
    let cells: Vec<Vec<String>> = m
        .entries
        .iter()
        .map(|r| r.iter().map(|x| format!("{:.6}", Prob::to_f64(x))).collect())
        .collect();
    let mut s = String::from("b1\\b2");
    for j in 0..cells[0].len() {
        s += &format!(" {j:>8}");
    }
    s.push('\n');
    for (i, row) in cells.iter().enumerate() {
        s += &format!("{i:>5}");
        for x in row {
            s += &format!(" {x:>8}");
        }
        s.push('\n');
    }
    s
}
