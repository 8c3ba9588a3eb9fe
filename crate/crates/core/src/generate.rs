//! Seeded random instances for property tests and experiment harnesses.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::arena::{GameSpec, LetterPattern, ObjectiveSpec, RuleSpec, TieSpec, TransducerSpec};
use crate::objective::MullerFamily;
use crate::tbsolve::{TurnBasedGame, TurnBasedSpec};
use crate::{Objective, Player};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveKind {
    Reachability,
    Buchi,
    Parity,
    Muller,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 4] = [
        ObjectiveKind::Reachability,
        ObjectiveKind::Buchi,
        ObjectiveKind::Parity,
        ObjectiveKind::Muller,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MechanismKind {
    /// Transducer whose letters carry no tie flag.
    TieUnaware,
    TieAware,
    Random,
    Advantage,
}

#[derive(Clone, Copy, Debug)]
pub struct GameParams {
    pub max_vertices: usize,
    pub max_budget: u32,
    pub max_states: usize,
    pub max_out_degree: usize,
}

impl Default for GameParams {
    fn default() -> Self {
        GameParams {
            max_vertices: 5,
            max_budget: 4,
            max_states: 3,
            max_out_degree: 3,
        }
    }
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn random_edges<R: Rng>(rng: &mut R, vertices: &[String], max_out: usize) -> Vec<(String, String)> {
    let mut edges = Vec::new();
    for u in vertices {
        let k = rng.gen_range(1..=max_out.min(vertices.len()));
        for w in vertices.choose_multiple(rng, k) {
            edges.push((u.clone(), w.clone()));
        }
    }
    edges
}

/// Random nonempty subset of `0..n`, sorted.
fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

pub fn random_objective<R: Rng>(rng: &mut R, vertices: &[String], kind: ObjectiveKind) -> ObjectiveSpec {
    let pick = |s: Vec<usize>| s.into_iter().map(|i| vertices[i].clone()).collect::<Vec<_>>();
    match kind {
        ObjectiveKind::Reachability => ObjectiveSpec::Reachability {
            target: pick(random_subset(rng, vertices.len())),
        },
        ObjectiveKind::Buchi => ObjectiveSpec::Buchi {
            accepting: pick(random_subset(rng, vertices.len())),
        },
        ObjectiveKind::Parity => ObjectiveSpec::Parity {
            priority: vertices.iter().map(|v| (v.clone(), rng.gen_range(1..=4))).collect(),
        },
        ObjectiveKind::Muller => {
            let k = rng.gen_range(1..=3);
            let mut sets: Vec<Vec<String>> = Vec::new();
            for _ in 0..k {
                let s = pick(random_subset(rng, vertices.len()));
                if !sets.contains(&s) {
                    sets.push(s);
                }
            }
            ObjectiveSpec::Muller { sets }
        }
    }
}

/// Total transducer with at most `max_states` states. Each state gets a few
/// literal rules followed by a catch-all.
pub fn random_transducer<R: Rng>(
    rng: &mut R,
    vertices: &[String],
    max_states: usize,
    tie_aware: bool,
    max_budget: u32,
) -> TransducerSpec {
    let n = rng.gen_range(1..=max_states);
    let states: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let output = states
        .iter()
        .map(|q| (q.clone(), if rng.gen_bool(0.5) { Player::One } else { Player::Two }))
        .collect();
    let mut rules = Vec::new();
    for q in &states {
        for _ in 0..rng.gen_range(0..=2) {
            let mut on = LetterPattern::any();
            match rng.gen_range(0..4) {
                0 => on.vertex = Some(vertices.choose(rng).unwrap().clone()),
                1 => on.winner = Some(if rng.gen_bool(0.5) { Player::One } else { Player::Two }),
                2 if tie_aware => on.tie = Some(rng.gen_bool(0.5)),
                _ => on.bid = Some(rng.gen_range(0..=max_budget)),
            }
            rules.push(RuleSpec {
                from: q.clone(),
                on,
                to: states.choose(rng).unwrap().clone(),
            });
        }
        rules.push(RuleSpec {
            from: q.clone(),
            on: LetterPattern::any(),
            to: states.choose(rng).unwrap().clone(),
        });
    }
    TransducerSpec {
        initial: states[0].clone(),
        states,
        tie_aware,
        output,
        rules,
    }
}

pub fn random_game<R: Rng>(rng: &mut R, params: &GameParams, mechanism: MechanismKind, objective: ObjectiveKind) -> GameSpec {
    let vertices = names(rng.gen_range(1..=params.max_vertices));
    let edges = random_edges(rng, &vertices, params.max_out_degree);
    let total_budget = rng.gen_range(0..=params.max_budget);
    let tie = match mechanism {
        MechanismKind::TieUnaware | MechanismKind::TieAware => TieSpec::Transducer(random_transducer(
            rng,
            &vertices,
            params.max_states,
            mechanism == MechanismKind::TieAware,
            total_budget,
        )),
        MechanismKind::Random => TieSpec::Random,
        MechanismKind::Advantage => TieSpec::Advantage {
            holder: if rng.gen_bool(0.5) { Player::One } else { Player::Two },
        },
    };
    GameSpec {
        objective: random_objective(rng, &vertices, objective),
        vertices,
        edges,
        total_budget,
        tie,
    }
}

/// Random arena in which every vertex lies on a cycle through a random
/// Hamiltonian tour, plus extra edges. Büchi objective on the first vertex.
pub fn random_strongly_connected<R: Rng>(rng: &mut R, max_vertices: usize, total_budget: u32, tie: TieSpec) -> GameSpec {
    let vertices = names(rng.gen_range(2..=max_vertices.max(2)));
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.shuffle(rng);
    let mut edges: Vec<(String, String)> = Vec::new();
    for k in 0..order.len() {
        let (u, w) = (order[k], order[(k + 1) % order.len()]);
        edges.push((vertices[u].clone(), vertices[w].clone()));
    }
    for _ in 0..rng.gen_range(0..=vertices.len()) {
        let e = (vertices.choose(rng).unwrap().clone(), vertices.choose(rng).unwrap().clone());
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    GameSpec {
        objective: ObjectiveSpec::Buchi {
            accepting: vec![vertices[0].clone()],
        },
        vertices,
        edges,
        total_budget,
        tie,
    }
}

/// Random plain turn-based reachability game.
pub fn random_turn_based<R: Rng>(rng: &mut R, max_vertices: usize) -> TurnBasedSpec {
    let vertices = names(rng.gen_range(1..=max_vertices));
    let edges = random_edges(rng, &vertices, 3);
    let owner = vertices
        .iter()
        .map(|v| (v.clone(), if rng.gen_bool(0.5) { Player::One } else { Player::Two }))
        .collect();
    TurnBasedSpec {
        objective: random_objective(rng, &vertices, ObjectiveKind::Reachability),
        vertices,
        owner,
        edges,
    }
}

/// Random index-based turn-based game where node `i` has color `i`.
pub fn random_turn_based_game<R: Rng>(rng: &mut R, max_nodes: usize, kind: ObjectiveKind) -> TurnBasedGame {
    let n = rng.gen_range(1..=max_nodes);
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=n.min(3));
            let mut s: Vec<usize> = (0..n).collect();
            s.shuffle(rng);
            s.truncate(k);
            s
        })
        .collect();
    let owner = (0..n)
        .map(|_| if rng.gen_bool(0.5) { Player::One } else { Player::Two })
        .collect();
    let flags = |rng: &mut R| {
        let s = random_subset(rng, n);
        (0..n).map(|i| s.contains(&i)).collect::<Vec<bool>>()
    };
    let objective = match kind {
        ObjectiveKind::Reachability => Objective::Reachability(flags(rng)),
        ObjectiveKind::Buchi => Objective::Buchi(flags(rng)),
        ObjectiveKind::Parity => Objective::Parity((0..n).map(|_| rng.gen_range(1..=4)).collect()),
        ObjectiveKind::Muller => {
            let sets: Vec<Vec<usize>> = (0..rng.gen_range(1..=3)).map(|_| random_subset(rng, n)).collect();
            Objective::Muller(MullerFamily::new(n, sets))
        }
    };
    TurnBasedGame {
        owner,
        succ,
        color: (0..n).map(Some).collect(),
        objective,
        names: None,
    }
}
