use std::collections::VecDeque;

use super::TurnBasedGame;
use crate::Player;

pub(crate) struct Attractor {
    pub contains: Vec<bool>,
    /// For attracted nodes of the attracting player (outside the target): the
    /// lowest-index successor that was attracted earlier.
    pub choice: Vec<Option<usize>>,
}

/// Nodes from which `player` can force a visit to `target`.
pub fn attractor(game: &TurnBasedGame, target: &[bool], player: Player) -> Vec<bool> {
    let all = vec![true; game.num_nodes()];
    attractor_in(game, &game.predecessors(), &all, target, player).contains
}

/// Attractor restricted to the subgame `within`; `target` is intersected with it.
pub(crate) fn attractor_in(
    game: &TurnBasedGame,
    pred: &[Vec<usize>],
    within: &[bool],
    target: &[bool],
    player: Player,
) -> Attractor {
    let n = game.num_nodes();
    let mut order = vec![usize::MAX; n];
    let mut remaining: Vec<usize> = (0..n)
        .map(|u| {
            if within[u] {
                game.succ[u].iter().filter(|&&w| within[w]).count()
            } else {
                0
            }
        })
        .collect();
    let mut queue = VecDeque::new();
    let mut next = 0;
    for u in 0..n {
        if within[u] && target[u] {
            order[u] = next;
            next += 1;
            queue.push_back(u);
        }
    }
    while let Some(w) = queue.pop_front() {
        for &u in &pred[w] {
            if !within[u] || order[u] != usize::MAX {
                continue;
            }
            let attracted = if game.owner[u] == player {
                true
            } else {
                remaining[u] -= 1;
                remaining[u] == 0
            };
            if attracted {
                order[u] = next;
                next += 1;
                queue.push_back(u);
            }
        }
    }
    let contains: Vec<bool> = order.iter().map(|&o| o != usize::MAX).collect();
    let choice = (0..n)
        .map(|u| {
            (contains[u] && !target[u] && game.owner[u] == player)
                .then(|| {
                    game.succ[u]
                        .iter()
                        .copied()
                        .filter(|&w| within[w] && order[w] < order[u])
                        .min()
                })
                .flatten()
        })
        .collect();
    Attractor { contains, choice }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tbsolve::tests::game;
    use crate::Objective;
    use proptest::prelude::*;

    #[test]
    fn player_two_node_needs_all_successors() {
        let g = game(&[2, 1, 1], &[&[1, 2], &[1], &[2]], Objective::Reachability(vec![false; 3]));
        let a = attractor(&g, &[false, true, false], Player::One);
        assert_eq!(a, vec![false, true, false]);
        let a = attractor(&g, &[false, true, false], Player::Two);
        assert_eq!(a, vec![true, true, false]);
    }

    fn arb_game() -> impl Strategy<Value = (TurnBasedGame, Vec<bool>)> {
        (1usize..8).prop_flat_map(|n| {
            (
                proptest::collection::vec(1u8..=2, n),
                proptest::collection::vec(proptest::collection::vec(0..n, 1..4), n),
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(move |(owner, succ, target)| {
                    let succ: Vec<&[usize]> = succ.iter().map(|s| s.as_slice()).collect();
                    (game(&owner, &succ, Objective::Reachability(vec![false; n])), target)
                })
        })
    }

    proptest! {
        #[test]
        fn attractor_contains_target_and_is_idempotent((g, target) in arb_game()) {
            for p in Player::BOTH {
                let a = attractor(&g, &target, p);
                for u in 0..target.len() {
                    prop_assert!(!target[u] || a[u]);
                }
                prop_assert_eq!(attractor(&g, &a, p), a);
            }
        }
    }
}
