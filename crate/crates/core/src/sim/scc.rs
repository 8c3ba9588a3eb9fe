use super::strategy::{distances_to, Strategy};
use crate::arena::{Game, TieMechanism};
use crate::configgraph::{resolve_bidding, successor, BidResolution, ConfigSpace, Configuration, TieState};
use crate::determinacy::{Analysis, Verdict};
use crate::{fixtures, node_cap_from_env, Error, Player, Result};

pub fn is_strongly_connected(game: &Game) -> bool {
    let n = game.num_vertices();
    let to_zero = distances_to(game, 0);
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &w in game.successors(u) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|&s| s) && to_zero.iter().all(|&d| d != u32::MAX)
}

/// Player-1 strategy that always bids 0 and walks shortest paths through
/// `tour` (every vertex in index order when empty).
pub fn build_scc_strategy(game: &Game, tour: Vec<usize>) -> Result<Strategy> {
    match game.tie() {
        TieMechanism::Random => {}
        TieMechanism::Transducer(t) if t.constant_output() == Some(Player::One) => {}
        other => {
            return Err(Error::UnsupportedMechanism(format!(
                "touring needs random ties or ties always won by Player 1, game uses {}",
                other.name()
            )))
        }
    }
    if !is_strongly_connected(game) {
        return Err(Error::InvalidArgument("arena not strongly connected".into()));
    }
    let tour = if tour.is_empty() {
        (0..game.num_vertices()).collect()
    } else {
        tour
    };
    if let Some(&v) = tour.iter().find(|&&v| v >= game.num_vertices()) {
        return Err(Error::InvalidArgument(format!("tour vertex {v} out of range")));
    }
    Ok(Strategy::touring(game, tour))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccBuchiCase {
    pub b1: u32,
    pub holder: Player,
    pub verdict: Verdict,
    /// Most visits to the accepting vertex any Player-1 strategy achieves
    /// against [`scc_buchi_adversary`]; `None` when unbounded.
    pub max_visits: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccBuchiReport {
    pub cases: Vec<SccBuchiCase>,
}

impl SccBuchiReport {
    /// Player 2 wins every case and the visit bound holds.
    pub fn holds(&self) -> bool {
        self.cases
            .iter()
            .all(|c| c.verdict == Verdict::Determined(Player::Two) && c.max_visits.is_some_and(|m| m <= c.b1 as usize))
    }
}

/// The adversary of the SCC-Büchi example: bids 0, takes every tie it can,
/// and on winning stays in `v1` or moves from `v2` to `v1`.
pub fn scc_buchi_adversary(game: &Game) -> Strategy {
    Strategy::constant_zero(game.vertex_index("v1").into_iter().collect())
}

/// Solves ⟨v1,B₁,0,·⟩ for B₁ = 0..=max_b1 and both holders, and bounds the
/// accepting visits against the adversary.
pub fn run_scc_buchi_experiment(max_b1: u32) -> Result<SccBuchiReport> {
    let mut cases = Vec::new();
    for b1 in 0..=max_b1 {
        let game = Game::new(fixtures::scc_buchi(b1))?;
        let analysis = Analysis::new(&game, node_cap_from_env())?;
        let v1 = game.vertex_index("v1").expect("fixture vertex");
        let v3 = game.vertex_index("v3").expect("fixture vertex");
        for holder in Player::BOTH {
            let start = Configuration {
                vertex: v1,
                b1,
                b2: 0,
                tie: TieState::Holder(holder),
            };
            cases.push(SccBuchiCase {
                b1,
                holder,
                verdict: analysis.verdict(&start)?,
                max_visits: max_visits_against(&game, &start, &scc_buchi_adversary(&game), v3)?,
            });
        }
    }
    Ok(SccBuchiReport { cases })
}

/// Most visits to `target` over all Player-1 behaviours against a fixed
/// memoryless Player-2 strategy; `None` if a reachable cycle visits it.
pub fn max_visits_against(game: &Game, start: &Configuration, adversary: &Strategy, target: usize) -> Result<Option<usize>> {
    use super::strategy::RoundView;
    if let TieMechanism::Random = game.tie() {
        return Err(Error::UnsupportedMechanism("visit bounds need deterministic ties".into()));
    }
    let space = ConfigSpace::new(game);
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); space.len()];
    for (i, c) in space.iter().enumerate() {
        let view = RoundView {
            config: c,
            bids: None,
            outcome: None,
        };
        let b2 = adversary.bid(Player::Two, &view, None, 0)?;
        for b1 in 0..=c.b1 {
            let view = RoundView {
                bids: Some((b1, b2)),
                ..view
            };
            let outcomes = match resolve_bidding(game, &c, b1, b2)? {
                BidResolution::Decided(o) => vec![o],
                BidResolution::AdvantageChoice {
                    holder: Player::One,
                    take,
                    decline,
                } => vec![take, decline],
                BidResolution::AdvantageChoice { take, decline, .. } => {
                    vec![if adversary.take_tie(&view, 0)? { take } else { decline }]
                }
                BidResolution::Chance(_) => unreachable!("random ties rejected above"),
            };
            for o in outcomes {
                let moves = match o.winner {
                    Player::One => game.successors(c.vertex).to_vec(),
                    Player::Two => vec![adversary.choose_move(
                        game,
                        &RoundView {
                            outcome: Some(o),
                            ..view
                        },
                        0,
                    )?],
                };
                for w in moves {
                    succ[i].push(space.index(&successor(game, &c, &o, w)?));
                }
            }
        }
    }
    let mut reach = vec![false; space.len()];
    let mut stack = vec![space.index(start)];
    reach[stack[0]] = true;
    while let Some(u) = stack.pop() {
        for &w in &succ[u] {
            if !reach[w] {
                reach[w] = true;
                stack.push(w);
            }
        }
    }
    // Longest path in visit count over reachable configurations; still
    // improving after |C| rounds means a reachable cycle through the target.
    let weight = |i: usize| (space.config(i).vertex == target) as usize;
    let mut best: Vec<usize> = (0..space.len()).map(weight).collect();
    for _ in 0..=space.len() {
        let mut changed = false;
        for i in (0..space.len()).filter(|&i| reach[i]) {
            let m = succ[i].iter().map(|&j| best[j]).max().unwrap_or(0) + weight(i);
            if m > best[i] {
                best[i] = m;
                changed = true;
            }
        }
        if !changed {
            return Ok(Some(best[space.index(start)]));
        }
    }
    Ok(None)
}
