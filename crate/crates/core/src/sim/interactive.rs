use std::io::{BufRead, Write};

use super::play::{finish_round, PlayRecord, Round};
use super::strategy::{RoundView, Strategy};
use crate::arena::{Game, TieMechanism};
use crate::configgraph::{resolve_bidding, BidResolution, Configuration};
use crate::determinacy::Analysis;
use crate::{Error, Objective, Player, Result};

/// Rounds after which a session stops on its own.
pub const SESSION_ROUND_LIMIT: usize = 10_000;

enum Input {
    Line(String),
    Eof,
}

fn read<R: BufRead, W: Write>(input: &mut R, out: &mut W, prompt: &str) -> Result<Input> {
    write!(out, "{prompt}").map_err(io)?;
    out.flush().map_err(io)?;
    let mut line = String::new();
    if input.read_line(&mut line).map_err(io)? == 0 {
        writeln!(out).map_err(io)?;
        return Ok(Input::Eof);
    }
    Ok(Input::Line(line.trim().to_string()))
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("terminal i/o failed: {e}"))
}

/// Terminal game against the engine. The human bids first each round and
/// the engine answers from its strategy in the game where the human reveals
/// first. Input `hint` prints the bidding matrix, `quit` or end of input
/// stops the session; either way the rounds played so far are returned.
pub fn interactive_session<R: BufRead, W: Write>(
    game: &Game,
    start: &Configuration,
    human: Player,
    mut input: R,
    mut out: W,
    cap: usize,
) -> Result<PlayRecord> {
    if let TieMechanism::Random = game.tie() {
        return Err(Error::UnsupportedMechanism(
            "interactive play needs transducer or advantage ties".into(),
        ));
    }
    let analysis = Analysis::new(game, cap)?;
    let engine_player = human.opponent();
    let engine = Strategy::optimal_in(&analysis, engine_player, human);
    let mut mem = engine.initial_memory(start);
    let mut rounds: Vec<Round> = Vec::new();
    let mut c = *start;
    let target = match game.objective() {
        Objective::Reachability(t) => Some(t.clone()),
        _ => None,
    };
    let reached = |c: &Configuration| target.as_ref().is_some_and(|t| t[c.vertex]);
    writeln!(
        out,
        "You are Player {human}; the engine is Player {engine_player}. Commands: a bid, 'hint', 'quit'."
    )
    .map_err(io)?;

    'session: while !reached(&c) && rounds.len() < SESSION_ROUND_LIMIT {
        writeln!(
            out,
            "round {} at {}; your budget {}",
            rounds.len() + 1,
            c.display(game),
            c.budget(human)
        )
        .map_err(io)?;
        let human_bid = loop {
            match read(&mut input, &mut out, "bid> ")? {
                Input::Eof => break 'session,
                Input::Line(l) if l == "quit" || l == "q" => break 'session,
                Input::Line(l) if l == "hint" => {
                    write!(out, "{}", analysis.matrix(&c).render()).map_err(io)?;
                }
                Input::Line(l) => match l.parse::<u32>() {
                    Ok(b) if b <= c.budget(human) => break b,
                    Ok(b) => writeln!(out, "bid {b} exceeds your budget {}", c.budget(human)).map_err(io)?,
                    Err(_) => writeln!(out, "enter a bid, 'hint' or 'quit'").map_err(io)?,
                },
            }
        };
        let view = RoundView {
            config: c,
            bids: None,
            outcome: None,
        };
        let engine_bid = engine.bid(engine_player, &view, Some(human_bid), mem)?;
        let bids = match human {
            Player::One => (human_bid, engine_bid),
            Player::Two => (engine_bid, human_bid),
        };
        let view = RoundView {
            bids: Some(bids),
            ..view
        };
        let outcome = match resolve_bidding(game, &c, bids.0, bids.1)? {
            BidResolution::Decided(o) => o,
            BidResolution::AdvantageChoice { holder, take, decline } if holder == human => loop {
                match read(&mut input, &mut out, "tie; take it? [y/n] ")? {
                    Input::Eof => break 'session,
                    Input::Line(l) if l == "y" => break take,
                    Input::Line(l) if l == "n" => break decline,
                    Input::Line(_) => writeln!(out, "answer y or n").map_err(io)?,
                }
            },
            BidResolution::AdvantageChoice { take, decline, .. } => {
                if engine.take_tie(&view, mem)? {
                    take
                } else {
                    decline
                }
            }
            BidResolution::Chance(_) => unreachable!("random ties rejected above"),
        };
        writeln!(
            out,
            "bids {} vs {}: Player {} wins{}",
            bids.0,
            bids.1,
            outcome.winner,
            if outcome.tie { " the tie" } else { "" }
        )
        .map_err(io)?;
        let round = if outcome.winner == human {
            let succ = game.successors(c.vertex);
            let names: Vec<&str> = succ.iter().map(|&w| game.vertex_name(w)).collect();
            let next = loop {
                match read(&mut input, &mut out, &format!("move to [{}]> ", names.join(", ")))? {
                    Input::Eof => break 'session,
                    Input::Line(l) => match succ.iter().find(|&&w| game.vertex_name(w) == l) {
                        Some(&w) => break w,
                        None => writeln!(out, "not a successor of {}", game.vertex_name(c.vertex)).map_err(io)?,
                    },
                }
            };
            let script = Strategy::constant_zero(vec![next]);
            finish_round(game, &c, bids, outcome, &script, 0)?
        } else {
            finish_round(game, &c, bids, outcome, &engine, mem)?
        };
        let view = RoundView {
            outcome: Some(outcome),
            ..view
        };
        mem = engine.update(&view, &round.next, mem);
        c = round.next;
        rounds.push(round);
    }

    let record = partial_record(game, *start, rounds, reached(&c));
    if reached(&c) {
        writeln!(out, "Player 1 reaches {}.", game.vertex_name(c.vertex)).map_err(io)?;
    }
    write!(out, "transcript:\n{}", record.transcript(game)).map_err(io)?;
    Ok(record)
}

/// Record of a play cut short: the final configuration is treated as
/// repeating forever.
fn partial_record(game: &Game, start: Configuration, rounds: Vec<Round>, reached: bool) -> PlayRecord {
    let mut prefix: Vec<usize> = rounds.iter().map(|r| r.config.vertex).collect();
    let last = rounds.last().map_or(start, |r| r.next);
    prefix.push(last.vertex);
    let outcome = game.objective().lasso_winner(&prefix, &[last.vertex]);
    let len = rounds.len();
    PlayRecord::new(start, rounds, outcome, len, !reached, game.num_vertices())
}
