//! Winning conditions over a finite set of colors.
//!
//! Arena games color every configuration with its vertex, so colors coincide
//! with vertex indices there; product games built by the solvers use their own
//! color spaces.

use crate::Player;

/// Maximum number of colors a Müller family can range over.
pub const MULLER_MAX_COLORS: usize = 64;

/// Player 1's objective, indexed by color.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Objective {
    /// Win iff some target color is ever seen.
    Reachability(Vec<bool>),
    /// Win iff some accepting color is seen infinitely often.
    Buchi(Vec<bool>),
    /// Win iff the largest priority seen infinitely often is odd.
    Parity(Vec<u32>),
    /// Win iff the set of colors seen infinitely often is in the family.
    Muller(MullerFamily),
}

/// A family of color sets, each stored as a bit mask.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MullerFamily {
    num_colors: usize,
    sets: Vec<u64>,
}

impl MullerFamily {
    pub fn new(num_colors: usize, sets: impl IntoIterator<Item = Vec<usize>>) -> Self {
        assert!(num_colors <= MULLER_MAX_COLORS, "too many colors for a Müller family");
        let mut masks: Vec<u64> = sets
            .into_iter()
            .map(|s| s.into_iter().fold(0u64, |m, c| m | (1u64 << c)))
            .collect();
        masks.sort_unstable();
        masks.dedup();
        MullerFamily { num_colors, sets: masks }
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn contains_mask(&self, mask: u64) -> bool {
        self.sets.binary_search(&mask).is_ok()
    }

    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    /// Member sets as sorted color lists.
    pub fn sets(&self) -> Vec<Vec<usize>> {
        self.sets
            .iter()
            .map(|&m| (0..self.num_colors).filter(|&c| m >> c & 1 == 1).collect())
            .collect()
    }
}

impl Objective {
    pub fn num_colors(&self) -> usize {
        match self {
            Objective::Reachability(t) | Objective::Buchi(t) => t.len(),
            Objective::Parity(p) => p.len(),
            Objective::Muller(f) => f.num_colors(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Objective::Reachability(_) => "reachability",
            Objective::Buchi(_) => "buchi",
            Objective::Parity(_) => "parity",
            Objective::Muller(_) => "muller",
        }
    }

    /// Winner of the ultimately periodic play `prefix · cycle^ω`, given the
    /// colors seen along each part (uncolored positions omitted).
    pub fn lasso_winner(&self, prefix: &[usize], cycle: &[usize]) -> Player {
        let p1 = match self {
            Objective::Reachability(t) => prefix.iter().chain(cycle).any(|&c| t[c]),
            Objective::Buchi(acc) => cycle.iter().any(|&c| acc[c]),
            Objective::Parity(prio) => {
                cycle.iter().map(|&c| prio[c]).max().unwrap_or(0) % 2 == 1
            }
            Objective::Muller(family) => {
                let mask = cycle.iter().fold(0u64, |m, &c| m | (1u64 << c));
                family.contains_mask(mask)
            }
        };
        if p1 {
            Player::One
        } else {
            Player::Two
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lasso_reachability_counts_prefix() {
        let obj = Objective::Reachability(vec![false, true]);
        assert_eq!(obj.lasso_winner(&[1], &[0]), Player::One);
        assert_eq!(obj.lasso_winner(&[0], &[0]), Player::Two);
    }

    #[test]
    fn lasso_buchi_ignores_prefix() {
        let obj = Objective::Buchi(vec![false, true]);
        assert_eq!(obj.lasso_winner(&[1], &[0]), Player::Two);
        assert_eq!(obj.lasso_winner(&[], &[0, 1]), Player::One);
    }

    #[test]
    fn lasso_parity_uses_max_priority() {
        let obj = Objective::Parity(vec![1, 2, 3]);
        assert_eq!(obj.lasso_winner(&[], &[0]), Player::One);
        assert_eq!(obj.lasso_winner(&[], &[0, 1]), Player::Two);
        assert_eq!(obj.lasso_winner(&[], &[1, 2]), Player::One);
    }

    #[test]
    fn lasso_muller_exact_set() {
        let obj = Objective::Muller(MullerFamily::new(3, vec![vec![0, 1]]));
        assert_eq!(obj.lasso_winner(&[2], &[1, 0, 1]), Player::One);
        assert_eq!(obj.lasso_winner(&[], &[0]), Player::Two);
        assert_eq!(obj.lasso_winner(&[], &[0, 1, 2]), Player::Two);
    }
}
