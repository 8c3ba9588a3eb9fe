use super::attractor::attractor_in;
use super::{SolveResult, StrategyTable, TurnBasedGame};
use crate::Player;

/// Zielonka's recursion for max-parity games; odd priorities favor Player 1.
pub(crate) fn solve_parity(game: &TurnBasedGame, prio: &[u32]) -> SolveResult {
    let n = game.num_nodes();
    let pred = game.predecessors();
    let mut strategy = vec![None; n];
    let won1 = zielonka(game, &pred, prio, vec![true; n], &mut strategy);
    let winner: Vec<Player> = won1
        .iter()
        .map(|&w| if w { Player::One } else { Player::Two })
        .collect();
    for u in 0..n {
        if game.owner[u] != winner[u] {
            strategy[u] = None;
        }
    }
    SolveResult {
        winner,
        strategy: StrategyTable::Memoryless(strategy),
    }
}

fn winner_of(priority: u32) -> Player {
    if priority % 2 == 1 {
        Player::One
    } else {
        Player::Two
    }
}

/// Returns the Player-1 region of the subgame `within`. The tail recursion on
/// the remainder is a loop, so depth is bounded by the number of priorities.
fn zielonka(
    game: &TurnBasedGame,
    pred: &[Vec<usize>],
    prio: &[u32],
    mut within: Vec<bool>,
    strategy: &mut [Option<usize>],
) -> Vec<bool> {
    let n = game.num_nodes();
    let mut won1 = vec![false; n];
    loop {
        let Some(d) = (0..n).filter(|&u| within[u]).map(|u| prio[u]).max() else {
            return won1;
        };
        let p = winner_of(d);
        let top: Vec<bool> = (0..n).map(|u| within[u] && prio[u] == d).collect();
        let attr = attractor_in(game, pred, &within, &top, p);
        let sub: Vec<bool> = (0..n).map(|u| within[u] && !attr.contains[u]).collect();
        let sub_won1 = zielonka(game, pred, prio, sub.clone(), strategy);
        let op_region: Vec<bool> = (0..n)
            .map(|u| sub[u] && (sub_won1[u] != (p == Player::One)))
            .collect();

        if !op_region.iter().any(|&b| b) {
            for u in (0..n).filter(|&u| attr.contains[u] && game.owner[u] == p) {
                strategy[u] = attr
                    .choice[u]
                    .or_else(|| game.succ[u].iter().copied().filter(|&w| within[w]).min());
            }
            if p == Player::One {
                for u in (0..n).filter(|&u| within[u]) {
                    won1[u] = true;
                }
            }
            return won1;
        }

        let op = p.opponent();
        let lost = attractor_in(game, pred, &within, &op_region, op);
        for u in 0..n {
            if lost.contains[u] {
                if !op_region[u] && game.owner[u] == op {
                    strategy[u] = lost.choice[u];
                }
                if op == Player::One {
                    won1[u] = true;
                }
                within[u] = false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::tbsolve::solve_turn_based;
    use crate::tbsolve::tests::game;
    use crate::{Objective, Player};

    #[test]
    fn max_priority_on_cycle_decides() {
        // 0 (P1) chooses between loop {0,1} with max 2 and self-loop at 2 with 3.
        let g = game(&[1, 2, 2], &[&[1, 2], &[0], &[2]], Objective::Parity(vec![1, 2, 3]));
        let r = solve_turn_based(&g).unwrap();
        assert_eq!(r.winner, vec![Player::One, Player::One, Player::One]);
        assert_eq!(r.choice(0), Some(2));
    }

    #[test]
    fn player_two_picks_even_cycle() {
        let g = game(&[2, 1, 1], &[&[1, 2], &[0], &[2]], Objective::Parity(vec![1, 2, 3]));
        let r = solve_turn_based(&g).unwrap();
        assert_eq!(r.winner, vec![Player::Two, Player::Two, Player::One]);
        assert_eq!(r.choice(0), Some(1));
    }

    #[test]
    fn neutral_nodes_are_ignored() {
        let mut g = game(&[1, 2], &[&[1], &[0]], Objective::Parity(vec![1]));
        g.color = vec![Some(0), None];
        assert_eq!(solve_turn_based(&g).unwrap().winner, vec![Player::One, Player::One]);
    }
}
