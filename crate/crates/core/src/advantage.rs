//! Threshold budgets and monotonicity checks under advantage tie-breaking.

use std::cmp::Ordering;
use std::fmt;

use crate::arena::{Game, TieMechanism};
use crate::configgraph::{Configuration, TieState};
use crate::determinacy::{Analysis, Verdict};
use crate::{Error, Objective, Player, Result};

/// Minimal Player-1 resource: `budget` chips, plus the advantage when
/// `needs_advantage`. Ordered (k, false) < (k, true) < (k+1, false).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Threshold {
    pub budget: u32,
    pub needs_advantage: bool,
}

impl Threshold {
    fn position(&self) -> u64 {
        2 * self.budget as u64 + self.needs_advantage as u64
    }

    fn at(position: u64) -> Threshold {
        Threshold {
            budget: (position / 2) as u32,
            needs_advantage: position % 2 == 1,
        }
    }

    /// Whether Player 1 holding `b1` chips (and the advantage when `holds`)
    /// meets this threshold.
    pub fn admits(&self, b1: u32, holds: bool) -> bool {
        Threshold {
            budget: b1,
            needs_advantage: holds,
        } >= *self
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> Ordering {
        self.position().cmp(&other.position())
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `3`, or `3*` when the advantage is needed as well.
impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.budget, if self.needs_advantage { "*" } else { "" })
    }
}

/// Winners of every configuration of an advantage game, indexed by
/// vertex, Player-1 budget, and holder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinTable {
    pub total_budget: u32,
    pub vertices: Vec<String>,
    winners: Vec<Player>,
}

impl WinTable {
    pub fn new(total_budget: u32, vertices: Vec<String>, fill: Player) -> WinTable {
        let size = vertices.len() * (total_budget as usize + 1) * 2;
        WinTable {
            total_budget,
            vertices,
            winners: vec![fill; size],
        }
    }

    /// Solves both reveal-first games; every configuration must be determined.
    pub fn solve(game: &Game, cap: usize) -> Result<WinTable> {
        if !matches!(game.tie(), TieMechanism::Advantage { .. }) {
            return Err(Error::UnsupportedMechanism(format!(
                "advantage analysis needs advantage ties, game uses {}",
                game.tie().name()
            )));
        }
        let analysis = Analysis::new(game, cap)?;
        let vertices = (0..game.num_vertices()).map(|v| game.vertex_name(v).to_string()).collect();
        let mut table = WinTable::new(game.total_budget(), vertices, Player::Two);
        for c in analysis.configs() {
            let TieState::Holder(h) = c.tie else { unreachable!("advantage configurations carry a holder") };
            match analysis.verdict(&c)? {
                Verdict::Determined(p) => table.set(c.vertex, c.b1, h, p),
                Verdict::NotDetermined => {
                    return Err(Error::InternalConsistency(format!(
                        "{} is not determined under advantage ties",
                        c.display(game)
                    )))
                }
            }
        }
        Ok(table)
    }

    fn slot(&self, v: usize, b1: u32, holder: Player) -> usize {
        (v * (self.total_budget as usize + 1) + b1 as usize) * 2 + holder.index()
    }

    pub fn get(&self, v: usize, b1: u32, holder: Player) -> Player {
        self.winners[self.slot(v, b1, holder)]
    }

    pub fn set(&mut self, v: usize, b1: u32, holder: Player, winner: Player) {
        let i = self.slot(v, b1, holder);
        self.winners[i] = winner;
    }

    fn config(&self, v: usize, b1: u32, holder: Player) -> Configuration {
        Configuration {
            vertex: v,
            b1,
            b2: self.total_budget - b1,
            tie: TieState::Holder(holder),
        }
    }

    fn render(&self, v: usize, b1: u32, holder: Player) -> String {
        format!("⟨{},{},{},adv{}⟩", self.vertices[v], b1, self.total_budget - b1, holder)
    }
}

/// Per-vertex thresholds for a fixed total budget; `None` means Player 1
/// cannot win at this total budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdFrontier {
    pub total_budget: u32,
    pub entries: Vec<(String, Option<Threshold>)>,
}

impl ThresholdFrontier {
    pub fn get(&self, vertex: &str) -> Option<Option<Threshold>> {
        self.entries.iter().find(|(v, _)| v == vertex).map(|(_, t)| *t)
    }
}

impl fmt::Display for ThresholdFrontier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, t) in &self.entries {
            match t {
                Some(t) => writeln!(f, "{v} {t}")?,
                None => writeln!(f, "{v} unwinnable at N={}", self.total_budget)?,
            }
        }
        Ok(())
    }
}

/// Failure of upward closure: Player 1 wins at `lower` but not at `higher`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureViolation {
    pub vertex: String,
    pub lower: Threshold,
    pub higher: Threshold,
}

/// Checks that, at every vertex, the Player-1 winning resources form an
/// upward-closed set in the threshold order. Any objective.
pub fn check_upward_closure(table: &WinTable) -> Vec<ClosureViolation> {
    let mut out = Vec::new();
    let top = 2 * table.total_budget as u64 + 1;
    for (v, name) in table.vertices.iter().enumerate() {
        let wins = |p: u64| {
            let t = Threshold::at(p);
            let holder = if t.needs_advantage { Player::One } else { Player::Two };
            table.get(v, t.budget, holder) == Player::One
        };
        if let Some(first) = (0..=top).find(|&p| wins(p)) {
            if let Some(gap) = (first..=top).find(|&p| !wins(p)) {
                out.push(ClosureViolation {
                    vertex: name.clone(),
                    lower: Threshold::at(first),
                    higher: Threshold::at(gap),
                });
            }
        }
    }
    out
}

fn frontier_of(table: &WinTable) -> ThresholdFrontier {
    let top = 2 * table.total_budget as u64 + 1;
    let entries = table
        .vertices
        .iter()
        .enumerate()
        .map(|(v, name)| {
            let t = (0..=top).map(Threshold::at).find(|t| {
                let holder = if t.needs_advantage { Player::One } else { Player::Two };
                table.get(v, t.budget, holder) == Player::One
            });
            (name.clone(), t)
        })
        .collect();
    ThresholdFrontier {
        total_budget: table.total_budget,
        entries,
    }
}

pub fn threshold_frontier(game: &Game, cap: usize) -> Result<ThresholdFrontier> {
    if !matches!(game.objective(), Objective::Reachability(_)) {
        return Err(Error::UnsupportedObjective(format!(
            "thresholds are defined for reachability only, got {}",
            game.objective().kind()
        )));
    }
    let table = WinTable::solve(game, cap)?;
    if let Some(v) = check_upward_closure(&table).first() {
        return Err(Error::InternalConsistency(format!(
            "Player 1 wins {} at {} but loses at {}",
            v.vertex, v.lower, v.higher
        )));
    }
    Ok(frontier_of(&table))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityViolation {
    /// `a`: the advantage helps its holder; `b`: Player 1 may trade the
    /// advantage for a chip; `c`: so may Player 2.
    pub check: char,
    pub from: Configuration,
    pub to: Configuration,
    pub message: String,
}

/// Checks on a win table:
/// (a) Player i wins ⟨v,B₁,B₂,3−i⟩ ⇒ Player i wins ⟨v,B₁,B₂,i⟩;
/// (b) Player 1 wins ⟨v,B₁,B₂,1⟩ ⇒ Player 1 wins ⟨v,B₁+1,B₂−1,2⟩;
/// (c) Player 2 wins ⟨v,B₁,B₂,2⟩ ⇒ Player 2 wins ⟨v,B₁−1,B₂+1,1⟩.
pub fn check_monotonicity(table: &WinTable) -> Vec<MonotonicityViolation> {
    let mut out = Vec::new();
    let n = table.total_budget;
    let mut report = |check, from: (usize, u32, Player), to: (usize, u32, Player), who: Player| {
        out.push(MonotonicityViolation {
            check,
            from: table.config(from.0, from.1, from.2),
            to: table.config(to.0, to.1, to.2),
            message: format!(
                "Player {who} wins {} but not {}",
                table.render(from.0, from.1, from.2),
                table.render(to.0, to.1, to.2)
            ),
        });
    };
    for v in 0..table.vertices.len() {
        for b1 in 0..=n {
            for i in Player::BOTH {
                let (from, to) = ((v, b1, i.opponent()), (v, b1, i));
                if table.get(from.0, from.1, from.2) == i && table.get(to.0, to.1, to.2) != i {
                    report('a', from, to, i);
                }
            }
            if b1 < n && table.get(v, b1, Player::One) == Player::One && table.get(v, b1 + 1, Player::Two) != Player::One {
                report('b', (v, b1, Player::One), (v, b1 + 1, Player::Two), Player::One);
            }
            if b1 >= 1 && table.get(v, b1, Player::Two) == Player::Two && table.get(v, b1 - 1, Player::One) != Player::Two {
                report('c', (v, b1, Player::Two), (v, b1 - 1, Player::One), Player::Two);
            }
        }
    }
    out
}

pub fn validate_advantage_monotonicity(game: &Game, cap: usize) -> Result<Vec<MonotonicityViolation>> {
    Ok(check_monotonicity(&WinTable::solve(game, cap)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::parse_game;
    use crate::DEFAULT_NODE_CAP;

    fn fork(n: u32) -> Game {
        let doc = format!(
            r#"{{"vertices": ["v","t","d"], "edges": [["v","t"],["v","d"],["t","t"],["d","d"]], "totalBudget": {n},
                "objective": {{"type": "reachability", "target": ["t"]}}, "tie": {{"type": "advantage", "holder": 1}}}}"#
        );
        Game::new(parse_game(doc.as_bytes()).unwrap()).unwrap()
    }

    fn th(budget: u32, needs_advantage: bool) -> Threshold {
        Threshold { budget, needs_advantage }
    }

    #[test]
    fn threshold_order() {
        assert!(th(1, false) < th(1, true));
        assert!(th(1, true) < th(2, false));
        assert!(th(1, true).admits(1, true));
        assert!(!th(1, true).admits(1, false));
        assert!(th(1, true).admits(2, false));
        assert_eq!(th(3, true).to_string(), "3*");
    }

    #[test]
    fn fork_thresholds() {
        let f = threshold_frontier(&fork(2), DEFAULT_NODE_CAP).unwrap();
        assert_eq!(f.get("v"), Some(Some(th(1, true))));
        assert_eq!(f.get("t"), Some(Some(th(0, false))));
        assert_eq!(f.get("d"), Some(None));
        let f = threshold_frontier(&fork(0), DEFAULT_NODE_CAP).unwrap();
        assert_eq!(f.get("v"), Some(Some(th(0, true))));
    }

    #[test]
    fn fork_is_monotone() {
        for n in 0..4 {
            assert_eq!(validate_advantage_monotonicity(&fork(n), DEFAULT_NODE_CAP).unwrap(), vec![]);
        }
    }

    #[test]
    fn corrupted_table_is_reported() {
        let mut table = WinTable::solve(&fork(2), DEFAULT_NODE_CAP).unwrap();
        // Player 1 now "wins" at v with budget 1 only without the advantage.
        table.set(0, 1, Player::Two, Player::One);
        table.set(0, 1, Player::One, Player::Two);
        let report = check_monotonicity(&table);
        let a = report.iter().find(|r| r.check == 'a').unwrap();
        assert_eq!(a.message, "Player 1 wins ⟨v,1,1,adv2⟩ but not ⟨v,1,1,adv1⟩");
        assert_eq!(a.to.tie, TieState::Holder(Player::One));
        assert!(!check_upward_closure(&table).is_empty());
    }

    #[test]
    fn other_mechanisms_rejected() {
        let g = Game::new(crate::fixtures::fig2(2)).unwrap();
        assert!(matches!(WinTable::solve(&g, DEFAULT_NODE_CAP), Err(Error::UnsupportedMechanism(_))));
    }
}
