use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arena::{Game, TieMechanism};
use crate::configgraph::{ConfigSpace, Configuration, NodeKind, Outcome, RevealFirstGame, Stage};
use crate::determinacy::Analysis;
use crate::tbsolve::{SolveResult, StrategyTable};
use crate::{Error, Player, Result};

/// What a strategy knows when it decides, besides its memory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundView {
    pub config: Configuration,
    /// Both bids once revealed.
    pub bids: Option<(u32, u32)>,
    /// Outcome of the bidding once resolved.
    pub outcome: Option<Outcome>,
}

/// Strategy played from a solved reveal-first game. The player's own
/// decisions are read off the solver's strategy; where it gives none (the
/// player does not win there) the strategy bids 0 and takes the first option.
#[derive(Clone, Debug)]
pub struct Optimal {
    pub player: Player,
    rf: RevealFirstGame,
    sol: SolveResult,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantZero {
    /// Vertex indices in preference order.
    pub preference: Vec<usize>,
    /// With a tour, the strategy walks shortest paths to `preference[k]`,
    /// advancing `k` on arrival. Without one, it moves to the first
    /// preferred successor.
    pub tour: Option<Vec<Vec<u32>>>,
}

/// Player-`player` decisions at each configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scripted {
    pub player: Player,
    pub script: HashMap<Configuration, ScriptEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScriptEntry {
    pub bid: u32,
    /// Next vertex when the player wins the bidding.
    pub next: usize,
    /// Whether to take a tie while holding the advantage.
    pub take: Option<bool>,
}

#[derive(Clone, Debug)]
pub enum Strategy {
    Optimal(Box<Optimal>),
    ConstantZero(ConstantZero),
    Scripted(Scripted),
}

impl Strategy {
    /// Winning strategy of `player` read from G_player of `analysis`.
    pub fn optimal(analysis: &Analysis, player: Player) -> Strategy {
        Strategy::optimal_in(analysis, player, player)
    }

    /// Strategy of `player` in the reveal-first game where `revealer` bids first.
    pub fn optimal_in(analysis: &Analysis, player: Player, revealer: Player) -> Strategy {
        let (rf, sol) = analysis.reveal_first(revealer);
        Strategy::Optimal(Box::new(Optimal {
            player,
            rf: rf.clone(),
            sol: sol.clone(),
        }))
    }

    /// Always bids 0; on winning moves to the first successor in `preference`.
    pub fn constant_zero(preference: Vec<usize>) -> Strategy {
        Strategy::ConstantZero(ConstantZero { preference, tour: None })
    }

    /// Always bids 0 and tours `targets` along shortest paths.
    pub fn touring(game: &Game, targets: Vec<usize>) -> Strategy {
        let dist = targets.iter().map(|&t| distances_to(game, t)).collect();
        Strategy::ConstantZero(ConstantZero {
            preference: targets,
            tour: Some(dist),
        })
    }

    /// Uniformly random memoryless decisions at every configuration.
    pub fn random_scripted(game: &Game, player: Player, seed: u64) -> Strategy {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let advantage = matches!(game.tie(), TieMechanism::Advantage { .. });
        let script = ConfigSpace::new(game)
            .iter()
            .map(|c| {
                let entry = ScriptEntry {
                    bid: rng.gen_range(0..=c.budget(player)),
                    next: *game.successors(c.vertex).choose(&mut rng).expect("validated arena"),
                    take: advantage.then(|| rng.gen_bool(0.5)),
                };
                (c, entry)
            })
            .collect();
        Strategy::Scripted(Scripted { player, script })
    }

    /// Memory state at the start of a play from `start`.
    pub fn initial_memory(&self, start: &Configuration) -> usize {
        match self {
            Strategy::Optimal(o) => match &o.sol.strategy {
                StrategyTable::Lar(l) => l.initial(o.rf.graph.config_index(start)),
                StrategyTable::Memoryless(_) => 0,
            },
            Strategy::ConstantZero(z) => match &z.tour {
                Some(_) => z.advance_tour(0, start.vertex),
                None => 0,
            },
            Strategy::Scripted(_) => 0,
        }
    }

    /// Bid of `player`; `opponent_bid` is known only when the opponent has
    /// already revealed.
    pub fn bid(&self, player: Player, view: &RoundView, opponent_bid: Option<u32>, mem: usize) -> Result<u32> {
        let c = &view.config;
        let bid = match self {
            Strategy::Optimal(o) => {
                let ci = o.rf.graph.config_index(c);
                let node = if o.revealer() == player {
                    ci
                } else {
                    let other = opponent_bid.ok_or_else(|| {
                        Error::InvalidArgument("responding strategy needs the revealed bid".into())
                    })?;
                    o.rf.graph.reveal_node(ci, other).expect("reveal-first graph")
                };
                let path = o.path_to(view, node);
                match o.choose(&path, mem) {
                    Some(next) => o.bid_at(player, next),
                    None => 0,
                }
            }
            Strategy::ConstantZero(_) => 0,
            Strategy::Scripted(s) => s.entry(c)?.bid,
        };
        if bid > c.budget(player) {
            return Err(Error::IllegalBid {
                player: player.number(),
                bid,
                budget: c.budget(player),
            });
        }
        Ok(bid)
    }

    /// Whether the advantage holder takes a tie.
    pub fn take_tie(&self, view: &RoundView, mem: usize) -> Result<bool> {
        match self {
            Strategy::Optimal(o) => {
                let pair = o.pair(view);
                let path = o.path_through(view, pair);
                Ok(match o.choose(&path, mem) {
                    Some(next) => next == o.rf.graph.succ[pair][0],
                    None => true,
                })
            }
            Strategy::ConstantZero(_) => Ok(true),
            Strategy::Scripted(s) => Ok(s.entry(&view.config)?.take.unwrap_or(true)),
        }
    }

    /// Next vertex after winning the bidding with `view.outcome`.
    pub fn choose_move(&self, game: &Game, view: &RoundView, mem: usize) -> Result<usize> {
        let c = &view.config;
        let succ = game.successors(c.vertex);
        match self {
            Strategy::Optimal(o) => {
                let node = o.move_node(view);
                let path = o.path_through(view, node);
                Ok(match o.choose(&path, mem) {
                    Some(next) => o.rf.graph.config(next).vertex,
                    None => succ[0],
                })
            }
            Strategy::ConstantZero(z) => Ok(z.next_vertex(succ, mem)),
            Strategy::Scripted(s) => {
                let next = s.entry(c)?.next;
                if !succ.contains(&next) {
                    return Err(Error::InvalidArgument(format!(
                        "scripted move from vertex {} to {} is not an edge",
                        c.vertex, next
                    )));
                }
                Ok(next)
            }
        }
    }

    /// Memory after the round at `view` led to configuration `next`.
    pub fn update(&self, view: &RoundView, next: &Configuration, mem: usize) -> usize {
        match self {
            Strategy::Optimal(o) => match &o.sol.strategy {
                StrategyTable::Lar(l) => {
                    let mut path = o.path_through(view, o.move_node(view));
                    path.push(o.rf.graph.config_index(next));
                    let mut m = mem;
                    for w in path.windows(2) {
                        m = l.product.advance(&o.rf.game, m, w[1]).expect("path follows edges");
                    }
                    m
                }
                StrategyTable::Memoryless(_) => 0,
            },
            Strategy::ConstantZero(z) => match &z.tour {
                Some(_) => z.advance_tour(mem, next.vertex),
                None => 0,
            },
            Strategy::Scripted(_) => 0,
        }
    }
}

impl Optimal {
    fn revealer(&self) -> Player {
        self.rf.graph.revealer.expect("reveal-first graph")
    }

    fn pair(&self, view: &RoundView) -> usize {
        let (b1, b2) = view.bids.expect("bids revealed");
        self.rf.graph.pair_node(self.rf.graph.config_index(&view.config), b1, b2)
    }

    /// The move node the round went through.
    fn move_node(&self, view: &RoundView) -> usize {
        let pair = self.pair(view);
        match self.rf.graph.nodes[pair] {
            NodeKind::Intermediate {
                stage: Stage::AdvantageDecision { holder },
                ..
            } => {
                let o = view.outcome.expect("outcome resolved");
                let k = if o.winner == holder { 0 } else { 1 };
                self.rf.graph.succ[pair][k]
            }
            _ => pair,
        }
    }

    /// Nodes of G_revealer from the configuration node up to `node`, which
    /// is the configuration or reveal node of the current round.
    fn path_to(&self, view: &RoundView, node: usize) -> Vec<usize> {
        let ci = self.rf.graph.config_index(&view.config);
        if node == ci {
            vec![ci]
        } else {
            vec![ci, node]
        }
    }

    /// Path from the configuration node through the reveal and pair nodes to `node`.
    fn path_through(&self, view: &RoundView, node: usize) -> Vec<usize> {
        let g = &self.rf.graph;
        let ci = g.config_index(&view.config);
        let (b1, b2) = view.bids.expect("bids revealed");
        let revealed = match self.revealer() {
            Player::One => b1,
            Player::Two => b2,
        };
        let pair = g.pair_node(ci, b1, b2);
        let mut path = vec![ci, g.reveal_node(ci, revealed).expect("reveal-first graph"), pair];
        if node != pair {
            path.push(node);
        }
        path
    }

    /// Successor chosen at the last node of `path` by the solver's strategy.
    fn choose(&self, path: &[usize], mem: usize) -> Option<usize> {
        let last = *path.last()?;
        if self.rf.game.owner[last] != self.player {
            return None;
        }
        match &self.sol.strategy {
            StrategyTable::Memoryless(_) => self.sol.choice(last),
            StrategyTable::Lar(l) => {
                let mut m = mem;
                for w in path.windows(2) {
                    m = l.product.advance(&self.rf.game, m, w[1])?;
                }
                l.choose(m).map(|(orig, _)| orig)
            }
        }
    }

    fn bid_at(&self, player: Player, next: usize) -> u32 {
        match self.rf.graph.nodes[next] {
            NodeKind::Reveal { bid, .. } => bid,
            NodeKind::Intermediate { b1, b2, .. } => match player {
                Player::One => b1,
                Player::Two => b2,
            },
            NodeKind::Config(_) => unreachable!("bids lead to reveal or pair nodes"),
        }
    }
}

impl ConstantZero {
    fn next_vertex(&self, succ: &[usize], mem: usize) -> usize {
        match &self.tour {
            Some(dist) => {
                let d = &dist[mem];
                *succ.iter().min_by_key(|&&w| d[w]).expect("validated arena")
            }
            None => self
                .preference
                .iter()
                .find(|p| succ.contains(p))
                .copied()
                .unwrap_or(succ[0]),
        }
    }

    /// Tour index after arriving at `vertex`.
    fn advance_tour(&self, mut k: usize, vertex: usize) -> usize {
        let n = self.preference.len();
        for _ in 0..n {
            if self.preference[k] != vertex {
                break;
            }
            k = (k + 1) % n;
        }
        k
    }
}

impl Scripted {
    fn entry(&self, c: &Configuration) -> Result<&ScriptEntry> {
        self.script
            .get(c)
            .ok_or_else(|| Error::MissingDecision(format!("no scripted decision for Player {} at {:?}", self.player, c)))
    }
}

/// BFS distance from every vertex to `target`; `u32::MAX` where unreachable.
pub fn distances_to(game: &Game, target: usize) -> Vec<u32> {
    let n = game.num_vertices();
    let mut pred = vec![Vec::new(); n];
    for u in 0..n {
        for &w in game.successors(u) {
            pred[w].push(u);
        }
    }
    let mut dist = vec![u32::MAX; n];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(w) = queue.pop_front() {
        for &u in &pred[w] {
            if dist[u] == u32::MAX {
                dist[u] = dist[w] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}
