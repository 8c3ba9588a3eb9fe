use super::attractor::attractor_in;
use super::{SolveResult, StrategyTable, TurnBasedGame};
use crate::Player;

/// Classic fixed point: repeatedly remove the Player-2 attractor of the nodes
/// from which Player 1 cannot reach an accepting node.
pub(crate) fn solve_buchi(game: &TurnBasedGame, accepting: &[bool]) -> SolveResult {
    let n = game.num_nodes();
    let pred = game.predecessors();
    let mut alive = vec![true; n];
    let mut strategy: Vec<Option<usize>> = vec![None; n];
    loop {
        let target: Vec<bool> = (0..n).map(|u| alive[u] && accepting[u]).collect();
        let reach = attractor_in(game, &pred, &alive, &target, Player::One);
        let trap: Vec<bool> = (0..n).map(|u| alive[u] && !reach.contains[u]).collect();
        if !trap.iter().any(|&t| t) {
            for u in (0..n).filter(|&u| alive[u] && game.owner[u] == Player::One) {
                strategy[u] = reach
                    .choice[u]
                    .or_else(|| game.succ[u].iter().copied().find(|&w| alive[w]));
            }
            break;
        }
        // Player 2 stays inside the trap, where Player 1 cannot reach acceptance.
        for u in (0..n).filter(|&u| trap[u] && game.owner[u] == Player::Two) {
            strategy[u] = game.succ[u].iter().copied().find(|&w| trap[w]);
        }
        let lost = attractor_in(game, &pred, &alive, &trap, Player::Two);
        for u in 0..n {
            if lost.contains[u] {
                if !trap[u] && game.owner[u] == Player::Two {
                    strategy[u] = lost.choice[u];
                }
                alive[u] = false;
            }
        }
    }
    SolveResult {
        winner: alive
            .iter()
            .map(|&a| if a { Player::One } else { Player::Two })
            .collect(),
        strategy: StrategyTable::Memoryless(strategy),
    }
}

#[cfg(test)]
mod tests {
    use crate::tbsolve::tests::game;
    use crate::tbsolve::solve_turn_based;
    use crate::{Objective, Player};

    #[test]
    fn accepting_self_loop_wins() {
        let g = game(&[1], &[&[0]], Objective::Buchi(vec![true]));
        assert_eq!(solve_turn_based(&g).unwrap().winner, vec![Player::One]);
    }

    #[test]
    fn player_two_escapes_to_rejecting_loop() {
        // 0 (P2) -> 1 accepting -> 0, or 0 -> 2 rejecting self-loop.
        let g = game(&[2, 1, 1], &[&[1, 2], &[0], &[2]], Objective::Buchi(vec![false, true, false]));
        let r = solve_turn_based(&g).unwrap();
        assert_eq!(r.winner, vec![Player::Two, Player::Two, Player::Two]);
        assert_eq!(r.choice(0), Some(2));
    }

    #[test]
    fn player_one_keeps_revisiting() {
        // 0 (P1) -> 1 accepting -> 0; 0 -> 2 sink.
        let g = game(&[1, 2, 1], &[&[2, 1], &[0], &[2]], Objective::Buchi(vec![false, true, false]));
        let r = solve_turn_based(&g).unwrap();
        assert_eq!(r.winner, vec![Player::One, Player::One, Player::Two]);
        assert_eq!(r.choice(0), Some(1));
    }
}
