use super::muller::muller_to_parity;
use super::TurnBasedGame;
use crate::{Error, Objective, Player, Result};

/// Default bound on explored histories.
pub const DEFAULT_ORACLE_LIMIT: usize = 2_000_000;

/// Winner from `start` of the cycle-forming game: histories are expanded until
/// a node repeats, and the closed lasso is scored by the objective. Müller
/// games are first turned into their LAR parity product, where memoryless
/// strategies suffice.
pub fn cycle_forming_oracle(game: &TurnBasedGame, start: usize, limit: usize) -> Result<Player> {
    game.check()?;
    if let Objective::Muller(_) = game.objective {
        let product = muller_to_parity(game, limit)?;
        return cycle_forming_oracle(&product.game, product.initial[start], limit);
    }
    let mut search = Search {
        game,
        path: Vec::new(),
        on_path: vec![usize::MAX; game.num_nodes()],
        expanded: 0,
        limit,
    };
    search.winner(start)
}

struct Search<'a> {
    game: &'a TurnBasedGame,
    path: Vec<usize>,
    /// Position on the current path, or `usize::MAX`.
    on_path: Vec<usize>,
    expanded: usize,
    limit: usize,
}

impl Search<'_> {
    fn winner(&mut self, u: usize) -> Result<Player> {
        if self.on_path[u] != usize::MAX {
            let split = self.on_path[u];
            let colors = |nodes: &[usize]| -> Vec<usize> {
                nodes.iter().filter_map(|&n| self.game.color[n]).collect()
            };
            let prefix = colors(&self.path[..split]);
            let cycle = colors(&self.path[split..]);
            return Ok(self.game.objective.lasso_winner(&prefix, &cycle));
        }
        self.expanded += 1;
        if self.expanded > self.limit {
            return Err(Error::SizeLimit { limit: self.limit });
        }
        self.on_path[u] = self.path.len();
        self.path.push(u);
        let owner = self.game.owner[u];
        let mut result = owner.opponent();
        for &w in &self.game.succ[u] {
            if self.winner(w)? == owner {
                result = owner;
                break;
            }
        }
        self.path.pop();
        self.on_path[u] = usize::MAX;
        Ok(result)
    }
}
