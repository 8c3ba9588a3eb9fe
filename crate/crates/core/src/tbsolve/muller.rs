use std::collections::HashMap;

use super::zielonka::solve_parity;
use super::{SolveResult, StrategyTable, TurnBasedGame};
use crate::objective::MullerFamily;
use crate::{Error, Objective, Player, Result};

const NO_HIT: u8 = u8::MAX;

/// Product of a Müller game with a latest appearance record (LAR) over its
/// colors. Only colored nodes update the record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LarProduct {
    /// Parity game on product nodes; product node `i` has color `i`.
    pub game: TurnBasedGame,
    /// Original node of each product node.
    pub origin: Vec<usize>,
    /// Product node reached by entering each original node with the identity record.
    pub initial: Vec<usize>,
    records: Vec<(Vec<u8>, u8)>,
}

impl LarProduct {
    /// Record (most recent color first) and hit position at a product node.
    pub fn record(&self, p: usize) -> (&[u8], Option<usize>) {
        let (perm, hit) = &self.records[p];
        (perm, (*hit != NO_HIT).then_some(*hit as usize))
    }

    /// Product node after the original move from `origin[p]` to `m`.
    pub fn advance(&self, original: &TurnBasedGame, p: usize, m: usize) -> Option<usize> {
        let k = original.succ[self.origin[p]].iter().position(|&w| w == m)?;
        Some(self.game.succ[p][k])
    }
}

fn enter(perm: &[u8], color: Option<usize>) -> (Vec<u8>, u8) {
    match color {
        None => (perm.to_vec(), NO_HIT),
        Some(c) => {
            let h = perm.iter().position(|&x| x as usize == c).expect("color in record");
            let mut next = Vec::with_capacity(perm.len());
            next.push(c as u8);
            next.extend(perm.iter().copied().filter(|&x| x as usize != c));
            (next, h as u8)
        }
    }
}

fn priority(family: &MullerFamily, perm: &[u8], hit: u8) -> u32 {
    if hit == NO_HIT {
        return 0;
    }
    let h = hit as usize;
    let mask = perm[..=h].iter().fold(0u64, |m, &c| m | (1u64 << c));
    if family.contains_mask(mask) {
        2 * h as u32 + 1
    } else {
        2 * h as u32 + 2
    }
}

/// Builds the reachable part of the LAR product as a parity game.
pub fn muller_to_parity(game: &TurnBasedGame, cap: usize) -> Result<LarProduct> {
    let Objective::Muller(family) = &game.objective else {
        return Err(Error::UnsupportedObjective(format!(
            "LAR product needs a Müller objective, got {}",
            game.objective.kind()
        )));
    };
    let colors = family.num_colors();
    let identity: Vec<u8> = (0..colors as u8).collect();
    let mut index: HashMap<(usize, Vec<u8>, u8), usize> = HashMap::new();
    let mut origin = Vec::new();
    let mut records: Vec<(Vec<u8>, u8)> = Vec::new();
    let mut intern = |node: usize, rec: (Vec<u8>, u8), origin: &mut Vec<usize>, records: &mut Vec<(Vec<u8>, u8)>| {
        let key = (node, rec.0.clone(), rec.1);
        if let Some(&i) = index.get(&key) {
            return Ok(i);
        }
        if origin.len() >= cap {
            return Err(Error::NodeCap { cap });
        }
        let i = origin.len();
        index.insert(key, i);
        origin.push(node);
        records.push(rec);
        Ok(i)
    };

    let mut initial = Vec::with_capacity(game.num_nodes());
    for n in 0..game.num_nodes() {
        initial.push(intern(n, enter(&identity, game.color[n]), &mut origin, &mut records)?);
    }
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    while next < origin.len() {
        let node = origin[next];
        let perm = records[next].0.clone();
        let mut out = Vec::with_capacity(game.succ[node].len());
        for &m in &game.succ[node] {
            out.push(intern(m, enter(&perm, game.color[m]), &mut origin, &mut records)?);
        }
        succ.push(out);
        next += 1;
    }

    let prio: Vec<u32> = records.iter().map(|(perm, hit)| priority(family, perm, *hit)).collect();
    let size = origin.len();
    Ok(LarProduct {
        game: TurnBasedGame {
            owner: origin.iter().map(|&n| game.owner[n]).collect(),
            succ,
            color: (0..size).map(Some).collect(),
            objective: Objective::Parity(prio),
            names: None,
        },
        origin,
        initial,
        records,
    })
}

/// Finite-memory strategy: the memory state is the current product node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LarStrategy {
    pub product: LarProduct,
    pub product_winner: Vec<Player>,
    choice: Vec<Option<usize>>,
}

impl LarStrategy {
    /// Memory state on entering original node `n` at the start of a play.
    pub fn initial(&self, n: usize) -> usize {
        self.product.initial[n]
    }

    /// Original successor chosen at memory state `p`, with the next memory
    /// state; `None` where the owner of `p` does not win.
    pub fn choose(&self, p: usize) -> Option<(usize, usize)> {
        let q = self.choice[p]?;
        Some((self.product.origin[q], q))
    }
}

pub(crate) fn solve_muller(game: &TurnBasedGame) -> Result<SolveResult> {
    let product = muller_to_parity(game, crate::node_cap_from_env())?;
    let solved = solve_parity(&product.game, &product.game.priorities());
    let winner = product.initial.iter().map(|&p| solved.winner[p]).collect();
    let choice = match solved.strategy {
        StrategyTable::Memoryless(c) => c,
        StrategyTable::Lar(_) => unreachable!("parity strategies are memoryless"),
    };
    Ok(SolveResult {
        winner,
        strategy: StrategyTable::Lar(Box::new(LarStrategy {
            product,
            product_winner: solved.winner,
            choice,
        })),
    })
}
