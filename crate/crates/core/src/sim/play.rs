use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use super::strategy::{RoundView, Strategy};
use crate::arena::{Game, TieMechanism};
use crate::configgraph::{resolve_bidding, successor, tie_state_name, BidResolution, Configuration, Outcome};
use crate::{Error, Objective, Player, Result};

/// How a bidding was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    Strict(Player),
    Tie(Player),
}

impl Resolution {
    pub fn winner(self) -> Player {
        match self {
            Resolution::Strict(p) | Resolution::Tie(p) => p,
        }
    }

    /// `1`, `2`, `tie1` or `tie2`.
    pub fn token(self) -> String {
        match self {
            Resolution::Strict(p) => p.to_string(),
            Resolution::Tie(p) => format!("tie{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Round {
    pub config: Configuration,
    pub bid1: u32,
    pub bid2: u32,
    pub resolution: Resolution,
    pub next: Configuration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayRecord {
    pub start: Configuration,
    pub rounds: Vec<Round>,
    pub outcome: Player,
    /// Deterministic plays: index of the first round of the cycle. Sampled
    /// plays: the number of rounds played.
    pub lasso_split: usize,
    /// The step budget ran out before the play was decided.
    pub truncated: bool,
    /// Visits per vertex over the recorded rounds, counting the start.
    pub visited: Vec<usize>,
}

impl PlayRecord {
    pub(crate) fn new(start: Configuration, rounds: Vec<Round>, outcome: Player, lasso_split: usize, truncated: bool, n: usize) -> PlayRecord {
        let mut visited = vec![0; n];
        visited[start.vertex] += 1;
        for r in &rounds {
            visited[r.next.vertex] += 1;
        }
        PlayRecord {
            start,
            rounds,
            outcome,
            lasso_split,
            truncated,
            visited,
        }
    }

    /// Configuration after the last round.
    pub fn last(&self) -> Configuration {
        self.rounds.last().map_or(self.start, |r| r.next)
    }

    /// Vertices occurring in the cycle of a deterministic play.
    pub fn cycle_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.rounds[self.lasso_split..].iter().map(|r| r.config.vertex).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// One line per round: `round vertex B1 B2 state bid1 bid2 resolution next`.
    pub fn transcript(&self, game: &Game) -> String {
        let mut out = String::new();
        for (i, r) in self.rounds.iter().enumerate() {
            let state = match tie_state_name(game, r.config.tie) {
                s if s.is_empty() => "-".to_string(),
                s => s,
            };
            writeln!(
                out,
                "{} {} {} {} {} {} {} {} {}",
                i + 1,
                game.vertex_name(r.config.vertex),
                r.config.b1,
                r.config.b2,
                state,
                r.bid1,
                r.bid2,
                r.resolution.token(),
                game.vertex_name(r.next.vertex)
            )
            .unwrap();
        }
        out
    }
}

/// One round with both strategies; `coin` resolves random ties.
pub(crate) fn play_round(
    game: &Game,
    c: &Configuration,
    s: [&Strategy; 2],
    mem: [usize; 2],
    coin: &mut dyn FnMut() -> Player,
) -> Result<Round> {
    let mut view = RoundView {
        config: *c,
        bids: None,
        outcome: None,
    };
    let b1 = s[0].bid(Player::One, &view, None, mem[0])?;
    let b2 = s[1].bid(Player::Two, &view, None, mem[1])?;
    view.bids = Some((b1, b2));
    let outcome = match resolve_bidding(game, c, b1, b2)? {
        BidResolution::Decided(o) => o,
        BidResolution::AdvantageChoice { holder, take, decline } => {
            if s[holder.index()].take_tie(&view, mem[holder.index()])? {
                take
            } else {
                decline
            }
        }
        BidResolution::Chance([one, two]) => match coin() {
            Player::One => one,
            Player::Two => two,
        },
    };
    finish_round(game, c, (b1, b2), outcome, s[outcome.winner.index()], mem[outcome.winner.index()])
}

pub(crate) fn finish_round(
    game: &Game,
    c: &Configuration,
    bids: (u32, u32),
    outcome: Outcome,
    mover: &Strategy,
    mem: usize,
) -> Result<Round> {
    let view = RoundView {
        config: *c,
        bids: Some(bids),
        outcome: Some(outcome),
    };
    let next_vertex = mover.choose_move(game, &view, mem)?;
    Ok(Round {
        config: *c,
        bid1: bids.0,
        bid2: bids.1,
        resolution: if outcome.tie {
            Resolution::Tie(outcome.winner)
        } else {
            Resolution::Strict(outcome.winner)
        },
        next: successor(game, c, &outcome, next_vertex)?,
    })
}

fn view_of(r: &Round) -> RoundView {
    RoundView {
        config: r.config,
        bids: Some((r.bid1, r.bid2)),
        outcome: Some(Outcome {
            winner: r.resolution.winner(),
            payment: match r.resolution.winner() {
                Player::One => r.bid1,
                Player::Two => r.bid2,
            },
            tie: matches!(r.resolution, Resolution::Tie(_)),
        }),
    }
}

/// Plays until the pair (configuration, strategy memories) repeats and
/// evaluates the objective on the resulting lasso.
pub fn play_deterministic(game: &Game, start: &Configuration, s1: &Strategy, s2: &Strategy) -> Result<PlayRecord> {
    if let TieMechanism::Random = game.tie() {
        return Err(Error::UnsupportedMechanism(
            "deterministic plays need transducer or advantage ties".into(),
        ));
    }
    let s = [s1, s2];
    let mut mem = [s1.initial_memory(start), s2.initial_memory(start)];
    let mut seen: HashMap<(Configuration, [usize; 2]), usize> = HashMap::new();
    let mut rounds = Vec::new();
    let mut c = *start;
    let split = loop {
        if let Some(&i) = seen.get(&(c, mem)) {
            break i;
        }
        seen.insert((c, mem), rounds.len());
        let r = play_round(game, &c, s, mem, &mut || unreachable!("no chance without random ties"))?;
        let view = view_of(&r);
        mem = [s1.update(&view, &r.next, mem[0]), s2.update(&view, &r.next, mem[1])];
        c = r.next;
        rounds.push(r);
    };
    let colors = |rs: &[Round]| rs.iter().map(|r| r.config.vertex).collect::<Vec<_>>();
    let outcome = game
        .objective()
        .lasso_winner(&colors(&rounds[..split]), &colors(&rounds[split..]));
    Ok(PlayRecord::new(*start, rounds, outcome, split, false, game.num_vertices()))
}

/// Player winning a tie under the coin stream: low bit 0 gives Player 1.
pub fn coin_flip(rng: &mut SplitMix64) -> Player {
    if rng.next_u64() & 1 == 0 {
        Player::One
    } else {
        Player::Two
    }
}

/// Plays `max_steps` rounds with ties decided by a SplitMix64 stream seeded
/// with `seed`, one draw per tie. Reachability plays stop at the target and
/// are lost by Player 1 when the budget runs out. For other objectives the
/// run always uses the full budget, and the vertices of its second half
/// stand in for those seen infinitely often.
pub fn play_random(
    game: &Game,
    start: &Configuration,
    s1: &Strategy,
    s2: &Strategy,
    seed: u64,
    max_steps: usize,
) -> Result<PlayRecord> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let s = [s1, s2];
    let mut mem = [s1.initial_memory(start), s2.initial_memory(start)];
    let mut rounds = Vec::new();
    let mut c = *start;
    let n = game.num_vertices();
    let reach = match game.objective() {
        Objective::Reachability(t) => Some(t),
        _ => None,
    };
    while rounds.len() < max_steps {
        if reach.is_some_and(|t| t[c.vertex]) {
            let len = rounds.len();
            return Ok(PlayRecord::new(*start, rounds, Player::One, len, false, n));
        }
        let r = play_round(game, &c, s, mem, &mut || coin_flip(&mut rng))?;
        let view = view_of(&r);
        mem = [s1.update(&view, &r.next, mem[0]), s2.update(&view, &r.next, mem[1])];
        c = r.next;
        rounds.push(r);
    }
    let len = rounds.len();
    let outcome = match reach {
        Some(t) if t[c.vertex] => Player::One,
        Some(_) => Player::Two,
        None => {
            let tail: Vec<usize> = rounds[len / 2..].iter().map(|r| r.next.vertex).collect();
            game.objective().lasso_winner(&[], &tail)
        }
    };
    let truncated = !(reach.is_some() && outcome == Player::One);
    Ok(PlayRecord::new(*start, rounds, outcome, len, truncated, n))
}
