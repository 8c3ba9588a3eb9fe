//! Explicit configuration-graph semantics, the reveal-first turn-based
//! expansions G₁/G₂, and the reductions from turn-based games to bidding games.

use std::fmt;
use std::ops::RangeInclusive;

use crate::arena::{
    Game, GameSpec, LetterPattern, Letter, ObjectiveSpec, RuleSpec, TieMechanism, TieSpec, TransducerSpec,
};
use crate::tbsolve::{TurnBasedGame, TurnBasedSpec};
use crate::{Error, Player, Result};

/// State of the tie-breaking mechanism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TieState {
    /// Transducer state index.
    State(usize),
    /// Player holding the advantage.
    Holder(Player),
    /// Random ties carry no state.
    Unit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub vertex: usize,
    pub b1: u32,
    pub b2: u32,
    pub tie: TieState,
}

impl Configuration {
    pub fn budget(&self, p: Player) -> u32 {
        match p {
            Player::One => self.b1,
            Player::Two => self.b2,
        }
    }

    /// Renders as `⟨v0,1,1,A2⟩`; advantage holders print as `adv1`/`adv2`
    /// and random ties omit the state.
    pub fn display<'a>(&'a self, game: &'a Game) -> impl fmt::Display + 'a {
        DisplayConfig { cfg: self, game }
    }

    /// Configuration from user-facing names. Without `tie`, the transducer's
    /// initial state or the spec's initial holder is used.
    pub fn from_names(game: &Game, vertex: &str, b1: u32, tie: Option<&str>) -> Result<Configuration> {
        let v = game
            .vertex_index(vertex)
            .ok_or_else(|| Error::Reference(format!("unknown vertex \"{vertex}\"")))?;
        let n = game.total_budget();
        if b1 > n {
            return Err(Error::InvalidArgument(format!("budget {b1} exceeds the total budget {n}")));
        }
        let tie = match (game.tie(), tie) {
            (TieMechanism::Transducer(t), None) => TieState::State(t.initial()),
            (TieMechanism::Transducer(t), Some(s)) => TieState::State(
                t.state_index(s)
                    .ok_or_else(|| Error::Reference(format!("unknown transducer state \"{s}\"")))?,
            ),
            (TieMechanism::Advantage { holder }, None) => TieState::Holder(*holder),
            (TieMechanism::Advantage { .. }, Some(s)) => TieState::Holder(match s {
                "1" | "adv1" => Player::One,
                "2" | "adv2" => Player::Two,
                _ => return Err(Error::InvalidArgument(format!("advantage holder must be 1 or 2, got \"{s}\""))),
            }),
            (TieMechanism::Random, None) => TieState::Unit,
            (TieMechanism::Random, Some(s)) => {
                return Err(Error::InvalidArgument(format!("random ties carry no state, got \"{s}\"")))
            }
        };
        Ok(Configuration { vertex: v, b1, b2: n - b1, tie })
    }
}

struct DisplayConfig<'a> {
    cfg: &'a Configuration,
    game: &'a Game,
}

impl fmt::Display for DisplayConfig<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.cfg;
        write!(f, "⟨{},{},{}", self.game.vertex_name(c.vertex), c.b1, c.b2)?;
        match (c.tie, self.game.transducer()) {
            (TieState::State(q), Some(t)) => write!(f, ",{}", t.state_name(q))?,
            (TieState::State(q), None) => write!(f, ",q{q}")?,
            (TieState::Holder(p), _) => write!(f, ",adv{p}")?,
            (TieState::Unit, _) => {}
        }
        f.write_str("⟩")
    }
}

/// Name of a tie state as used on the command line and in transcripts.
pub fn tie_state_name(game: &Game, tie: TieState) -> String {
    match (tie, game.transducer()) {
        (TieState::State(q), Some(t)) => t.state_name(q).to_string(),
        (TieState::State(q), None) => format!("q{q}"),
        (TieState::Holder(p), _) => format!("adv{p}"),
        (TieState::Unit, _) => "-".to_string(),
    }
}

/// Dense indexing of all configurations of a game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigSpace {
    num_vertices: usize,
    total: u32,
    tie_states: usize,
    kind: TieKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum TieKind {
    Transducer,
    Advantage,
    Random,
}

impl ConfigSpace {
    pub fn new(game: &Game) -> ConfigSpace {
        let (tie_states, kind) = match game.tie() {
            TieMechanism::Transducer(t) => (t.num_states(), TieKind::Transducer),
            TieMechanism::Advantage { .. } => (2, TieKind::Advantage),
            TieMechanism::Random => (1, TieKind::Random),
        };
        ConfigSpace {
            num_vertices: game.num_vertices(),
            total: game.total_budget(),
            tie_states,
            kind,
        }
    }

    /// |V|·(N+1)·|tie states|.
    pub fn len(&self) -> usize {
        self.num_vertices * (self.total as usize + 1) * self.tie_states
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, c: &Configuration) -> usize {
        let t = match c.tie {
            TieState::State(q) => q,
            TieState::Holder(p) => p.index(),
            TieState::Unit => 0,
        };
        (c.vertex * (self.total as usize + 1) + c.b1 as usize) * self.tie_states + t
    }

    pub fn config(&self, i: usize) -> Configuration {
        let t = i % self.tie_states;
        let rest = i / self.tie_states;
        let b1 = (rest % (self.total as usize + 1)) as u32;
        let vertex = rest / (self.total as usize + 1);
        let tie = match self.kind {
            TieKind::Transducer => TieState::State(t),
            TieKind::Advantage => TieState::Holder(if t == 0 { Player::One } else { Player::Two }),
            TieKind::Random => TieState::Unit,
        };
        Configuration {
            vertex,
            b1,
            b2: self.total - b1,
            tie,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Configuration> + '_ {
        (0..self.len()).map(|i| self.config(i))
    }
}

pub fn allowed_bids(config: &Configuration) -> (RangeInclusive<u32>, RangeInclusive<u32>) {
    (0..=config.b1, 0..=config.b2)
}

/// Who won a bidding, what they pay, and whether it was a tie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Outcome {
    pub winner: Player,
    pub payment: u32,
    pub tie: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BidResolution {
    Decided(Outcome),
    /// The holder either takes the tie (and passes the advantage) or declines.
    AdvantageChoice {
        holder: Player,
        take: Outcome,
        decline: Outcome,
    },
    /// Fair coin; each branch has probability ½.
    Chance([Outcome; 2]),
}

pub fn resolve_bidding(game: &Game, config: &Configuration, b1: u32, b2: u32) -> Result<BidResolution> {
    if b1 > config.b1 {
        return Err(Error::IllegalBid { player: 1, bid: b1, budget: config.b1 });
    }
    if b2 > config.b2 {
        return Err(Error::IllegalBid { player: 2, bid: b2, budget: config.b2 });
    }
    let won = |winner, payment, tie| Outcome { winner, payment, tie };
    if b1 > b2 {
        return Ok(BidResolution::Decided(won(Player::One, b1, false)));
    }
    if b2 > b1 {
        return Ok(BidResolution::Decided(won(Player::Two, b2, false)));
    }
    Ok(match (game.tie(), config.tie) {
        (TieMechanism::Transducer(t), TieState::State(q)) => BidResolution::Decided(won(t.output(q), b1, true)),
        (TieMechanism::Advantage { .. }, TieState::Holder(h)) => BidResolution::AdvantageChoice {
            holder: h,
            take: won(h, b1, true),
            decline: won(h.opponent(), b1, true),
        },
        (TieMechanism::Random, TieState::Unit) => {
            BidResolution::Chance([won(Player::One, b1, true), won(Player::Two, b1, true)])
        }
        _ => {
            return Err(Error::InvalidArgument(
                "tie state does not match the game's mechanism".into(),
            ))
        }
    })
}

/// Configuration after `outcome` when the winner moves to `next`. The
/// transducer reads the completed bidding including the chosen vertex.
pub fn successor(game: &Game, config: &Configuration, outcome: &Outcome, next: usize) -> Result<Configuration> {
    let p = outcome.payment;
    let (b1, b2) = match outcome.winner {
        Player::One => (config.b1 - p, config.b2 + p),
        Player::Two => (config.b1 + p, config.b2 - p),
    };
    let tie = match (game.tie(), config.tie) {
        (TieMechanism::Transducer(t), TieState::State(q)) => {
            let letter = Letter {
                vertex: next,
                winner: outcome.winner,
                tie: outcome.tie,
                bid: p,
            };
            TieState::State(t.step(q, &letter)?)
        }
        (TieMechanism::Advantage { .. }, TieState::Holder(h)) => {
            if outcome.tie && outcome.winner == h {
                TieState::Holder(h.opponent())
            } else {
                TieState::Holder(h)
            }
        }
        (_, other) => other,
    };
    Ok(Configuration { vertex: next, b1, b2, tie })
}

// ---------------------------------------------------------------------------
// Explicit graphs
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// The winner of the bidding picks the next vertex.
    Move { mover: Player, outcome: Outcome },
    AdvantageDecision { holder: Player },
    Chance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Config(Configuration),
    /// The revealer has announced `bid` at configuration `config`.
    Reveal { config: usize, bid: u32 },
    /// Tagged with its configuration, so intermediate nodes of distinct
    /// configurations never coincide.
    Intermediate { config: usize, b1: u32, b2: u32, stage: Stage },
}

/// Configuration graph. With a revealer it is the turn-based game G_i; without
/// one, configuration nodes branch on bid pairs directly (concurrent form).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigGraph {
    pub space: ConfigSpace,
    pub revealer: Option<Player>,
    pub nodes: Vec<NodeKind>,
    pub succ: Vec<Vec<usize>>,
    reveal_offset: Vec<usize>,
    pair_offset: Vec<usize>,
}

impl ConfigGraph {
    pub fn num_configs(&self) -> usize {
        self.space.len()
    }

    /// Configuration nodes come first, in [`ConfigSpace`] order.
    pub fn config(&self, i: usize) -> Configuration {
        self.space.config(i)
    }

    pub fn config_index(&self, c: &Configuration) -> usize {
        self.space.index(c)
    }

    /// The intermediate node ⟨c, b₁, b₂⟩ reached right after both bids.
    pub fn pair_node(&self, config: usize, b1: u32, b2: u32) -> usize {
        let c = self.space.config(config);
        self.pair_offset[config] + b1 as usize * (c.b2 as usize + 1) + b2 as usize
    }

    pub fn reveal_node(&self, config: usize, bid: u32) -> Option<usize> {
        self.revealer.map(|_| self.reveal_offset[config] + bid as usize)
    }

    /// Controlling player; `None` for concurrent configuration nodes and chance nodes.
    pub fn owner(&self, node: usize) -> Option<Player> {
        match self.nodes[node] {
            NodeKind::Config(_) => self.revealer,
            NodeKind::Reveal { .. } => self.revealer.map(Player::opponent),
            NodeKind::Intermediate { stage, .. } => match stage {
                Stage::Move { mover, .. } => Some(mover),
                Stage::AdvantageDecision { holder } => Some(holder),
                Stage::Chance => None,
            },
        }
    }

    /// The turn-based game; configuration nodes are colored by their vertex.
    pub fn to_turn_based(&self, game: &Game) -> Result<TurnBasedGame> {
        if self.revealer.is_none() {
            return Err(Error::InvalidArgument("concurrent graph is not turn-based".into()));
        }
        let owner = (0..self.nodes.len())
            .map(|u| {
                self.owner(u)
                    .ok_or_else(|| Error::UnsupportedMechanism("random ties have chance nodes".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let color = self
            .nodes
            .iter()
            .map(|k| match k {
                NodeKind::Config(c) => Some(c.vertex),
                _ => None,
            })
            .collect();
        Ok(TurnBasedGame {
            owner,
            succ: self.succ.clone(),
            color,
            objective: game.objective().clone(),
            names: None,
        })
    }
}

/// Concurrent configuration graph over all configurations.
pub fn build_config_graph(game: &Game, cap: usize) -> Result<ConfigGraph> {
    build(game, None, cap)
}

/// G_i together with its explicit graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RevealFirstGame {
    pub graph: ConfigGraph,
    pub game: TurnBasedGame,
}

/// Turn-based expansion in which `revealer` announces each bid first.
pub fn build_reveal_first(game: &Game, revealer: Player, cap: usize) -> Result<RevealFirstGame> {
    if let TieMechanism::Random = game.tie() {
        return Err(Error::UnsupportedMechanism(
            "reveal-first games need transducer or advantage ties; use value computation for random ties".into(),
        ));
    }
    let graph = build(game, Some(revealer), cap)?;
    let tb = graph.to_turn_based(game)?;
    Ok(RevealFirstGame { graph, game: tb })
}

fn build(game: &Game, revealer: Option<Player>, cap: usize) -> Result<ConfigGraph> {
    let space = ConfigSpace::new(game);
    let configs: Vec<Configuration> = space.iter().collect();

    // Count first so oversized graphs fail before allocating.
    let extra_per_tie = match game.tie() {
        TieMechanism::Transducer(_) => 0,
        _ => 2,
    };
    let mut total = configs.len();
    for c in &configs {
        let pairs = (c.b1 as usize + 1) * (c.b2 as usize + 1);
        let reveals = revealer.map_or(0, |r| c.budget(r) as usize + 1);
        total = total
            .saturating_add(pairs + reveals)
            .saturating_add(extra_per_tie * (c.b1.min(c.b2) as usize + 1));
        if total > cap {
            return Err(Error::NodeCap { cap });
        }
    }

    let mut nodes: Vec<NodeKind> = configs.iter().map(|&c| NodeKind::Config(c)).collect();
    let mut reveal_offset = vec![0; configs.len()];
    if let Some(r) = revealer {
        for (i, c) in configs.iter().enumerate() {
            reveal_offset[i] = nodes.len();
            nodes.extend((0..=c.budget(r)).map(|bid| NodeKind::Reveal { config: i, bid }));
        }
    }
    let mut pair_offset = vec![0; configs.len()];
    let mut resolutions = Vec::new();
    for (i, c) in configs.iter().enumerate() {
        pair_offset[i] = nodes.len();
        for b1 in 0..=c.b1 {
            for b2 in 0..=c.b2 {
                let res = resolve_bidding(game, c, b1, b2)?;
                let stage = match res {
                    BidResolution::Decided(o) => Stage::Move { mover: o.winner, outcome: o },
                    BidResolution::AdvantageChoice { holder, .. } => Stage::AdvantageDecision { holder },
                    BidResolution::Chance(_) => Stage::Chance,
                };
                nodes.push(NodeKind::Intermediate { config: i, b1, b2, stage });
                resolutions.push(res);
            }
        }
    }
    let pairs_end = nodes.len();
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); pairs_end];

    // Second intermediate layer for advantage decisions and coin flips.
    for (k, res) in resolutions.iter().enumerate() {
        let u = pair_offset[0] + k;
        let NodeKind::Intermediate { config, b1, b2, .. } = nodes[u] else {
            unreachable!()
        };
        let branches = match *res {
            BidResolution::Decided(_) => continue,
            BidResolution::AdvantageChoice { take, decline, .. } => [take, decline],
            BidResolution::Chance(b) => b,
        };
        for o in branches {
            succ[u].push(nodes.len());
            nodes.push(NodeKind::Intermediate {
                config,
                b1,
                b2,
                stage: Stage::Move { mover: o.winner, outcome: o },
            });
            succ.push(Vec::new());
        }
    }

    for (i, c) in configs.iter().enumerate() {
        let cols = c.b2 as usize + 1;
        let pair = |b1: u32, b2: u32| pair_offset[i] + b1 as usize * cols + b2 as usize;
        match revealer {
            None => succ[i] = (0..=c.b1).flat_map(|b1| (0..=c.b2).map(move |b2| pair(b1, b2))).collect(),
            Some(r) => {
                succ[i] = (0..=c.budget(r) as usize).map(|b| reveal_offset[i] + b).collect();
                for bid in 0..=c.budget(r) {
                    succ[reveal_offset[i] + bid as usize] = match r {
                        Player::One => (0..=c.b2).map(|b2| pair(bid, b2)).collect(),
                        Player::Two => (0..=c.b1).map(|b1| pair(b1, bid)).collect(),
                    };
                }
            }
        }
    }

    for u in pair_offset.first().copied().unwrap_or(pairs_end)..nodes.len() {
        if let NodeKind::Intermediate {
            config,
            stage: Stage::Move { outcome, .. },
            ..
        } = nodes[u]
        {
            let c = &configs[config];
            succ[u] = game
                .successors(c.vertex)
                .iter()
                .map(|&w| successor(game, c, &outcome, w).map(|d| space.index(&d)))
                .collect::<Result<_>>()?;
        }
    }

    Ok(ConfigGraph {
        space,
        revealer,
        nodes,
        succ,
        reveal_offset,
        pair_offset,
    })
}

/// The alternating mechanism: the advantage swaps exactly when a tie occurs.
pub fn build_alternating_transducer() -> TransducerSpec {
    let rule = |from: &str, tie: Option<bool>, to: &str| RuleSpec {
        from: from.into(),
        on: LetterPattern { tie, ..LetterPattern::any() },
        to: to.into(),
    };
    TransducerSpec {
        states: vec!["A1".into(), "A2".into()],
        initial: "A1".into(),
        tie_aware: true,
        output: vec![("A1".into(), Player::One), ("A2".into(), Player::Two)],
        rules: vec![
            rule("A1", Some(true), "A2"),
            rule("A1", None, "A1"),
            rule("A2", Some(true), "A1"),
            rule("A2", None, "A2"),
        ],
    }
}

// ---------------------------------------------------------------------------
// Reductions from turn-based games
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Zero budgets; a transducer tracking the current vertex gives every tie
    /// to the vertex owner.
    Transducer,
    /// Zero budgets; the advantage is held by the player about to move.
    Advantage,
}

/// Most pass-through vertices one Müller set may span before expansion is refused.
const MULLER_EXPANSION_LIMIT: usize = 16;

fn fresh_name(base: &str, taken: &[String]) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

fn state_name(vertex: &str) -> String {
    format!("q_{vertex}")
}

/// Bidding game in which Player 1 wins from the query configuration of
/// vertex `v` (see [`reduction_query`]) iff Player 1 wins `tb` from `v`.
pub fn reduce_turn_based(tb: &TurnBasedSpec, flavor: Flavor) -> Result<GameSpec> {
    let compiled = tb.compile()?;
    let owner_of = |v: usize| compiled.owner[v];
    match flavor {
        Flavor::Transducer => {
            let states: Vec<String> = tb.vertices.iter().map(|v| state_name(v)).collect();
            let mut rules = Vec::new();
            for q in &states {
                for (w, qw) in tb.vertices.iter().zip(&states) {
                    rules.push(RuleSpec {
                        from: q.clone(),
                        on: LetterPattern {
                            vertex: Some(w.clone()),
                            ..LetterPattern::any()
                        },
                        to: qw.clone(),
                    });
                }
            }
            Ok(GameSpec {
                vertices: tb.vertices.clone(),
                edges: tb.edges.clone(),
                total_budget: 0,
                objective: tb.objective.clone(),
                tie: TieSpec::Transducer(TransducerSpec {
                    initial: states[0].clone(),
                    tie_aware: true,
                    output: states.iter().enumerate().map(|(i, q)| (q.clone(), owner_of(i))).collect(),
                    states,
                    rules,
                }),
            })
        }
        Flavor::Advantage => {
            let mut vertices = tb.vertices.clone();
            let mut owners: Vec<Player> = compiled.owner.clone();
            let mut edges = Vec::new();
            // (pass-through name, source, target)
            let mut passes: Vec<(String, String, String)> = Vec::new();
            for (u, w) in &tb.edges {
                let (iu, iw) = (tb.vertices.iter().position(|x| x == u).unwrap(), tb.vertices.iter().position(|x| x == w).unwrap());
                if owners[iu] == owners[iw] {
                    let p = fresh_name(&format!("{u}~{w}"), &vertices);
                    vertices.push(p.clone());
                    owners.push(owners[iu].opponent());
                    edges.push((u.clone(), p.clone()));
                    edges.push((p.clone(), w.clone()));
                    passes.push((p, u.clone(), w.clone()));
                } else {
                    edges.push((u.clone(), w.clone()));
                }
            }
            let t1 = fresh_name("t1", &vertices);
            vertices.push(t1.clone());
            let t2 = fresh_name("t2", &vertices);
            vertices.push(t2.clone());
            let inner = owners.len();
            for (i, v) in vertices[..inner].iter().enumerate() {
                let sink = if owners[i] == Player::One { &t2 } else { &t1 };
                edges.push((v.clone(), sink.clone()));
            }
            edges.push((t1.clone(), t1.clone()));
            edges.push((t2.clone(), t2.clone()));

            let objective = match &tb.objective {
                ObjectiveSpec::Reachability { target } => ObjectiveSpec::Reachability {
                    target: target.iter().cloned().chain([t1.clone()]).collect(),
                },
                ObjectiveSpec::Buchi { accepting } => ObjectiveSpec::Buchi {
                    accepting: accepting.iter().cloned().chain([t1.clone()]).collect(),
                },
                ObjectiveSpec::Parity { priority } => ObjectiveSpec::Parity {
                    priority: priority
                        .iter()
                        .cloned()
                        .chain(passes.iter().map(|(p, _, _)| (p.clone(), 1)))
                        .chain([(t1.clone(), 1), (t2.clone(), 2)])
                        .collect(),
                },
                ObjectiveSpec::Muller { sets } => {
                    let mut out = Vec::new();
                    for s in sets {
                        let inside: Vec<&String> = passes
                            .iter()
                            .filter(|(_, u, w)| s.contains(u) && s.contains(w))
                            .map(|(p, _, _)| p)
                            .collect();
                        if inside.len() > MULLER_EXPANSION_LIMIT {
                            return Err(Error::SizeLimit { limit: MULLER_EXPANSION_LIMIT });
                        }
                        for mask in 0u32..(1 << inside.len()) {
                            let mut set = s.clone();
                            set.extend((0..inside.len()).filter(|k| mask >> k & 1 == 1).map(|k| inside[k].clone()));
                            out.push(set);
                        }
                    }
                    out.push(vec![t1.clone()]);
                    ObjectiveSpec::Muller { sets: out }
                }
            };
            Ok(GameSpec {
                vertices,
                edges,
                total_budget: 0,
                objective,
                tie: TieSpec::Advantage {
                    holder: owners[0],
                },
            })
        }
    }
}

/// Configuration of the reduced game that corresponds to starting `tb` at `vertex`.
pub fn reduction_query(game: &Game, tb: &TurnBasedSpec, flavor: Flavor, vertex: &str) -> Result<Configuration> {
    let v = tb
        .vertices
        .iter()
        .position(|x| x == vertex)
        .ok_or_else(|| Error::Reference(format!("unknown vertex \"{vertex}\"")))?;
    let owner = tb
        .owner
        .iter()
        .find(|(x, _)| x == vertex)
        .map(|(_, p)| *p)
        .ok_or_else(|| Error::Reference(format!("no owner for \"{vertex}\"")))?;
    let tie = match flavor {
        Flavor::Transducer => Some(state_name(&tb.vertices[v])),
        Flavor::Advantage => Some(if owner == Player::One { "1".to_string() } else { "2".to_string() }),
    };
    Configuration::from_names(game, vertex, 0, tie.as_deref())
}
