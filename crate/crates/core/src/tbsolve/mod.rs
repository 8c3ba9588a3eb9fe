//! Turn-based games on finite graphs: solvers for all four objectives,
//! strategy extraction, and a brute-force cycle-forming oracle.

mod attractor;
mod buchi;
mod muller;
mod oracle;
mod zielonka;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use attractor::attractor;
pub use muller::{muller_to_parity, LarProduct, LarStrategy};
pub use oracle::{cycle_forming_oracle, DEFAULT_ORACLE_LIMIT};

use crate::arena::{self, ObjectiveDoc, ObjectiveSpec, OrderedMap, Violation};
use crate::{Error, Objective, Player, Result};

/// A finite two-player turn-based game. Nodes carry an optional color that the
/// objective refers to; uncolored (neutral) nodes never affect the winner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnBasedGame {
    pub owner: Vec<Player>,
    pub succ: Vec<Vec<usize>>,
    pub color: Vec<Option<usize>>,
    pub objective: Objective,
    /// Node names, present for games read from documents.
    pub names: Option<Vec<String>>,
}

impl TurnBasedGame {
    pub fn num_nodes(&self) -> usize {
        self.owner.len()
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.num_nodes()];
        for (u, ws) in self.succ.iter().enumerate() {
            for &w in ws {
                pred[w].push(u);
            }
        }
        pred
    }

    pub fn name(&self, n: usize) -> String {
        match &self.names {
            Some(names) => names[n].clone(),
            None => n.to_string(),
        }
    }

    /// Checks that moves are total and colors are in range.
    pub fn check(&self) -> Result<()> {
        let n = self.num_nodes();
        if self.succ.len() != n || self.color.len() != n {
            return Err(Error::InvalidArgument("node tables differ in length".into()));
        }
        for (u, ws) in self.succ.iter().enumerate() {
            if ws.is_empty() {
                return Err(Error::Semantic(format!("node {} has no successor", self.name(u))));
            }
            if let Some(&w) = ws.iter().find(|&&w| w >= n) {
                return Err(Error::InvalidArgument(format!("edge to missing node {w}")));
            }
        }
        let k = self.objective.num_colors();
        if let Some(c) = self.color.iter().flatten().find(|&&c| c >= k) {
            return Err(Error::InvalidArgument(format!("color {c} out of range")));
        }
        Ok(())
    }

    /// Priority of each node under a parity objective, 0 for neutral nodes.
    pub(crate) fn priorities(&self) -> Vec<u32> {
        let Objective::Parity(p) = &self.objective else {
            panic!("priorities() needs a parity objective");
        };
        self.color.iter().map(|c| c.map_or(0, |c| p[c])).collect()
    }
}

/// How a player plays from its winning region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyTable {
    /// Successor chosen at each node; `Some` exactly for nodes owned by the
    /// player that wins there.
    Memoryless(Vec<Option<usize>>),
    /// Finite-memory strategy through a latest-appearance-record product.
    Lar(Box<LarStrategy>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    /// Winner from each node.
    pub winner: Vec<Player>,
    pub strategy: StrategyTable,
}

impl SolveResult {
    pub fn region(&self, p: Player) -> Vec<usize> {
        (0..self.winner.len()).filter(|&n| self.winner[n] == p).collect()
    }

    /// Memoryless choice at `n`, if the strategy is memoryless.
    pub fn choice(&self, n: usize) -> Option<usize> {
        match &self.strategy {
            StrategyTable::Memoryless(s) => s[n],
            StrategyTable::Lar(_) => None,
        }
    }
}

/// Solves `game` for every node.
pub fn solve_turn_based(game: &TurnBasedGame) -> Result<SolveResult> {
    game.check()?;
    match &game.objective {
        Objective::Reachability(target) => {
            let targets: Vec<bool> = game.color.iter().map(|c| c.is_some_and(|c| target[c])).collect();
            Ok(solve_reachability(game, &targets))
        }
        Objective::Buchi(acc) => {
            let accepting: Vec<bool> = game.color.iter().map(|c| c.is_some_and(|c| acc[c])).collect();
            Ok(buchi::solve_buchi(game, &accepting))
        }
        Objective::Parity(_) => Ok(zielonka::solve_parity(game, &game.priorities())),
        Objective::Muller(_) => muller::solve_muller(game),
    }
}

fn solve_reachability(game: &TurnBasedGame, targets: &[bool]) -> SolveResult {
    let n = game.num_nodes();
    let all = vec![true; n];
    let pred = game.predecessors();
    let attr = attractor::attractor_in(game, &pred, &all, targets, Player::One);
    let mut strategy = vec![None; n];
    let mut winner = vec![Player::Two; n];
    for u in 0..n {
        if attr.contains[u] {
            winner[u] = Player::One;
            if game.owner[u] == Player::One {
                strategy[u] = attr.choice[u].or(Some(game.succ[u][0]));
            }
        } else if game.owner[u] == Player::Two {
            strategy[u] = game.succ[u].iter().copied().find(|&w| !attr.contains[w]);
        }
    }
    SolveResult {
        winner,
        strategy: StrategyTable::Memoryless(strategy),
    }
}

// ---------------------------------------------------------------------------
// Document format for plain turn-based games
// ---------------------------------------------------------------------------

/// A named turn-based game as read from a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnBasedSpec {
    pub vertices: Vec<String>,
    pub owner: Vec<(String, Player)>,
    pub edges: Vec<(String, String)>,
    pub objective: ObjectiveSpec,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TurnBasedDoc {
    vertices: Vec<String>,
    owner: OrderedMap<Player>,
    edges: Vec<[String; 2]>,
    objective: ObjectiveDoc,
}

/// Parses a turn-based game document:
/// `{"vertices", "owner": {v: 1|2}, "edges", "objective"}`.
pub fn parse_turn_based(document: &[u8]) -> Result<TurnBasedSpec> {
    let doc: TurnBasedDoc = arena::parse_json(document)?;
    let spec = TurnBasedSpec {
        vertices: doc.vertices,
        owner: doc.owner.0,
        edges: doc.edges.into_iter().map(|[u, w]| (u, w)).collect(),
        objective: doc.objective.into_spec(),
    };
    spec.compile()?;
    Ok(spec)
}

pub fn serialize_turn_based(spec: &TurnBasedSpec) -> String {
    let doc = TurnBasedDoc {
        vertices: spec.vertices.clone(),
        owner: OrderedMap(spec.owner.clone()),
        edges: spec.edges.iter().map(|(u, w)| [u.clone(), w.clone()]).collect(),
        objective: ObjectiveDoc::from_spec(&spec.objective, &spec.vertices),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("documents always serialize");
    s.push('\n');
    s
}

impl TurnBasedSpec {
    /// Index-based game in which node `i` is vertex `i` and carries color `i`.
    pub fn compile(&self) -> Result<TurnBasedGame> {
        let mut out = Vec::new();
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if v.is_empty() {
                out.push(Violation::semantic("empty vertex name"));
            }
            if index.insert(v.as_str(), i).is_some() {
                out.push(Violation::semantic(format!("duplicate vertex \"{v}\"")));
            }
        }
        let n = self.vertices.len();
        let mut owner = vec![None; n];
        for (v, p) in &self.owner {
            match index.get(v.as_str()) {
                Some(&i) => owner[i] = Some(*p),
                None => out.push(Violation::reference(format!("unknown vertex \"{v}\" in owner"))),
            }
        }
        for (i, o) in owner.iter().enumerate() {
            if o.is_none() {
                out.push(Violation::semantic(format!("owner missing for vertex \"{}\"", self.vertices[i])));
            }
        }
        let mut succ = vec![Vec::new(); n];
        for (u, w) in &self.edges {
            match (index.get(u.as_str()), index.get(w.as_str())) {
                (Some(&i), Some(&j)) => succ[i].push(j),
                _ => out.push(Violation::reference(format!("unknown vertex in edge ({u}, {w})"))),
            }
        }
        for (i, s) in succ.iter().enumerate() {
            if s.is_empty() {
                out.push(Violation::semantic(format!("vertex without successor: \"{}\"", self.vertices[i])));
            }
        }
        arena::validate_objective(&self.objective, &self.vertices, &index, &mut out);
        if let Some(v) = out.into_iter().next() {
            return Err(v.into_error());
        }
        Ok(TurnBasedGame {
            owner: owner.into_iter().map(Option::unwrap).collect(),
            succ,
            color: (0..n).map(Some).collect(),
            objective: arena::compile_objective(&self.objective, &index, n),
            names: Some(self.vertices.clone()),
        })
    }
}
