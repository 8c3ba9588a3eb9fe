//! Pure-strategy values of reachability games with random tie-breaking.
//!
//! The value after `n` rounds follows the recursion
//! `V_n = F(V_{n-1})`, where `F` evaluates every configuration's matrix of bid
//! pairs against the previous layer and takes max-min over pure bids. Layer 0
//! is 1 on targets and the timeout value elsewhere.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arena::{Game, TieMechanism};
use crate::configgraph::{ConfigSpace, Configuration, TieState};
use crate::{Error, Objective, Player, Result};

/// Probability arithmetic: exact rationals or binary floats.
pub trait Prob: Clone + PartialOrd + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn average(a: &Self, b: &Self) -> Self;
    fn diff(a: &Self, b: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn from_f64(x: f64) -> Self;
}

impl Prob for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn average(a: &Self, b: &Self) -> Self {
        (a + b) / BigInt::from(2)
    }

    fn diff(a: &Self, b: &Self) -> Self {
        a - b
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite tolerance")
    }
}

impl Prob for f64 {
    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn average(a: &Self, b: &Self) -> Self {
        0.5 * (a + b)
    }

    fn diff(a: &Self, b: &Self) -> Self {
        a - b
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Self {
        x
    }
}

fn max_of<P: Prob>(a: P, b: P) -> P {
    if b > a {
        b
    } else {
        a
    }
}

fn min_of<P: Prob>(a: P, b: P) -> P {
    if b < a {
        b
    } else {
        a
    }
}

fn check_game(game: &Game) -> Result<()> {
    if !matches!(game.tie(), TieMechanism::Random) {
        return Err(Error::UnsupportedMechanism(format!(
            "values need random ties, game uses {}",
            game.tie().name()
        )));
    }
    if !matches!(game.objective(), Objective::Reachability(_)) {
        return Err(Error::UnsupportedObjective(format!(
            "values are defined for reachability only, got {}",
            game.objective().kind()
        )));
    }
    Ok(())
}

fn targets(game: &Game) -> &[bool] {
    match game.objective() {
        Objective::Reachability(t) => t,
        _ => unreachable!("checked by check_game"),
    }
}

/// The `n`-round unrolling from `start`: configurations are layered by the
/// number of rounds left; at layer 0 targets go to t₁ and everything else to
/// the sink of `timeout_favors`.
#[derive(Clone, Debug)]
pub struct HorizonGame {
    game: Game,
    space: ConfigSpace,
    pub start: Configuration,
    pub horizon: u32,
    pub timeout_favors: Player,
    /// Configurations whose timeout is forced to t₂ regardless of `timeout_favors`.
    surely_safe: Option<Vec<bool>>,
}

impl HorizonGame {
    /// Layered configuration nodes plus the two sinks.
    pub fn num_nodes(&self) -> usize {
        self.space.len() * (self.horizon as usize + 1) + 2
    }
}

pub fn unroll_horizon(game: &Game, start: &Configuration, n: u32, timeout_favors: Player, cap: usize) -> Result<HorizonGame> {
    check_game(game)?;
    let space = ConfigSpace::new(game);
    let h = HorizonGame {
        game: game.clone(),
        space,
        start: *start,
        horizon: n,
        timeout_favors,
        surely_safe: None,
    };
    if h.num_nodes() > cap {
        return Err(Error::NodeCap { cap });
    }
    Ok(h)
}

/// Values of the unrolling.
#[derive(Clone, Debug, PartialEq)]
pub struct HorizonValue<P> {
    pub value: P,
    /// Value of every configuration with `horizon` rounds left.
    pub layer: Vec<P>,
    /// Weakly dominant bid at the start configuration.
    pub dominant: (Player, u32),
}

pub fn value_horizon<P: Prob>(h: &HorizonGame) -> Result<HorizonValue<P>> {
    let mut layer = initial_layer::<P>(h);
    for _ in 1..=h.horizon {
        layer = bellman(&h.game, &h.space, &layer)?;
    }
    let dominant = if h.horizon == 0 || targets(&h.game)[h.start.vertex] {
        (Player::One, 0)
    } else {
        let prev = previous_layer::<P>(h)?;
        dominant_bid(&matrix_at(&h.game, &h.space, &h.start, &prev))?
    };
    Ok(HorizonValue {
        value: layer[h.space.index(&h.start)].clone(),
        layer,
        dominant,
    })
}

fn previous_layer<P: Prob>(h: &HorizonGame) -> Result<Vec<P>> {
    let mut layer = initial_layer::<P>(h);
    for _ in 1..h.horizon {
        layer = bellman(&h.game, &h.space, &layer)?;
    }
    Ok(layer)
}

fn initial_layer<P: Prob>(h: &HorizonGame) -> Vec<P> {
    let t = targets(&h.game);
    h.space
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let safe = h.surely_safe.as_ref().is_some_and(|s| s[i]);
            if t[c.vertex] || (h.timeout_favors == Player::One && !safe) {
                P::one()
            } else {
                P::zero()
            }
        })
        .collect()
}

/// Value of every intermediate node ⟨c, b₁, b₂⟩ given the next layer.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueMatrix<P> {
    pub config: Configuration,
    pub entries: Vec<Vec<P>>,
}

impl<P: Prob> ValueMatrix<P> {
    pub fn get(&self, b1: u32, b2: u32) -> &P {
        &self.entries[b1 as usize][b2 as usize]
    }

    /// max over Player-1 bids of the row minimum.
    pub fn max_min(&self) -> P {
        self.entries
            .iter()
            .map(|row| row.iter().cloned().reduce(min_of).expect("nonempty row"))
            .reduce(max_of)
            .expect("nonempty matrix")
    }

    /// min over Player-2 bids of the column maximum.
    pub fn min_max(&self) -> P {
        let cols = self.entries[0].len();
        (0..cols)
            .map(|j| self.entries.iter().map(|r| r[j].clone()).reduce(max_of).unwrap())
            .reduce(min_of)
            .expect("nonempty matrix")
    }
}

fn matrix_at<P: Prob>(game: &Game, space: &ConfigSpace, c: &Configuration, next: &[P]) -> ValueMatrix<P> {
    let succ = game.successors(c.vertex);
    let after = |winner: Player, pay: u32, w: usize| {
        let (b1, b2) = match winner {
            Player::One => (c.b1 - pay, c.b2 + pay),
            Player::Two => (c.b1 + pay, c.b2 - pay),
        };
        next[space.index(&Configuration { vertex: w, b1, b2, tie: TieState::Unit })].clone()
    };
    let win1: Vec<P> = (0..=c.b1)
        .map(|b| succ.iter().map(|&w| after(Player::One, b, w)).reduce(max_of).unwrap())
        .collect();
    let win2: Vec<P> = (0..=c.b2)
        .map(|b| succ.iter().map(|&w| after(Player::Two, b, w)).reduce(min_of).unwrap())
        .collect();
    let entries = (0..=c.b1 as usize)
        .map(|i| {
            (0..=c.b2 as usize)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Greater => win1[i].clone(),
                    std::cmp::Ordering::Less => win2[j].clone(),
                    std::cmp::Ordering::Equal => P::average(&win1[i], &win2[j]),
                })
                .collect()
        })
        .collect();
    ValueMatrix { config: *c, entries }
}

fn bellman<P: Prob>(game: &Game, space: &ConfigSpace, prev: &[P]) -> Result<Vec<P>> {
    let t = targets(game);
    space
        .iter()
        .map(|c| {
            if t[c.vertex] {
                return Ok(P::one());
            }
            let m = matrix_at(game, space, &c, prev);
            let v = m.max_min();
            if v != m.min_max() {
                return Err(Error::InternalConsistency(format!(
                    "pure max-min {:?} differs from min-max {:?}",
                    v,
                    m.min_max()
                )));
            }
            Ok(v)
        })
        .collect()
}

/// Matrix at `config` with `n` rounds left (timeout favors Player 2).
pub fn value_matrix<P: Prob>(game: &Game, config: &Configuration, n: u32) -> Result<ValueMatrix<P>> {
    check_game(game)?;
    let space = ConfigSpace::new(game);
    let h = HorizonGame {
        game: game.clone(),
        space: space.clone(),
        start: *config,
        horizon: n.max(1),
        timeout_favors: Player::Two,
        surely_safe: None,
    };
    let prev = previous_layer::<P>(&h)?;
    Ok(matrix_at(game, &space, config, &prev))
}

/// A bid that weakly dominates all other bids of its player: a row that is
/// entrywise ≥ every other row (Player 1) or a column entrywise ≤ every other
/// column (Player 2). Lowest player, then lowest bid.
pub fn dominant_bid<P: Prob>(m: &ValueMatrix<P>) -> Result<(Player, u32)> {
    let rows = m.entries.len();
    let cols = m.entries[0].len();
    let row_dominates = |i: usize| (0..rows).all(|k| (0..cols).all(|j| m.entries[i][j] >= m.entries[k][j]));
    if let Some(i) = (0..rows).find(|&i| row_dominates(i)) {
        return Ok((Player::One, i as u32));
    }
    let col_dominates = |j: usize| (0..cols).all(|k| (0..rows).all(|i| m.entries[i][j] <= m.entries[i][k]));
    if let Some(j) = (0..cols).find(|&j| col_dominates(j)) {
        return Ok((Player::Two, j as u32));
    }
    Err(Error::InternalConsistency(format!(
        "no weakly dominant bid at configuration {:?}",
        m.config
    )))
}

/// Two-sided bounds on the value.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueResult<P> {
    pub lower: P,
    pub upper: P,
    pub horizon_used: u32,
    pub converged: bool,
}

/// Configurations from which Player 1 reaches the target with positive
/// probability against every pure Player-2 strategy. Its complement is
/// surely safe for Player 2: a fixed bid keeps every outcome inside it.
pub fn positive_reach(game: &Game) -> Result<Vec<bool>> {
    check_game(game)?;
    let space = ConfigSpace::new(game);
    let t = targets(game);
    let mut reach: Vec<bool> = space.iter().map(|c| t[c.vertex]).collect();
    loop {
        let mut changed = false;
        for (i, c) in space.iter().enumerate() {
            if reach[i] {
                continue;
            }
            let succ = game.successors(c.vertex);
            let into = |winner: Player, pay: u32, w: usize| {
                let (b1, b2) = match winner {
                    Player::One => (c.b1 - pay, c.b2 + pay),
                    Player::Two => (c.b1 + pay, c.b2 - pay),
                };
                reach[space.index(&Configuration { vertex: w, b1, b2, tie: TieState::Unit })]
            };
            let p1 = |b: u32| succ.iter().any(|&w| into(Player::One, b, w));
            let p2 = |b: u32| succ.iter().all(|&w| into(Player::Two, b, w));
            let good = (0..=c.b2).all(|b2| {
                (0..=c.b1).any(|b1| match b1.cmp(&b2) {
                    std::cmp::Ordering::Greater => p1(b1),
                    std::cmp::Ordering::Less => p2(b2),
                    std::cmp::Ordering::Equal => p1(b1) || p2(b2),
                })
            });
            if good {
                reach[i] = true;
                changed = true;
            }
        }
        if !changed {
            return Ok(reach);
        }
    }
}

/// Iterates lower (timeout to t₂) and upper (timeout to t₁, except on surely
/// safe configurations) unrollings, checking the gap at n = 0, 1, 2, 4, …
pub fn value_bounds<P: Prob>(game: &Game, start: &Configuration, tol: f64, max_horizon: u32) -> Result<ValueResult<P>> {
    check_game(game)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let space = ConfigSpace::new(game);
    let reach = positive_reach(game)?;
    let safe: Vec<bool> = reach.iter().map(|r| !r).collect();
    let unrolling = |favors: Player, safe: Option<Vec<bool>>| HorizonGame {
        game: game.clone(),
        space: space.clone(),
        start: *start,
        horizon: 0,
        timeout_favors: favors,
        surely_safe: safe,
    };
    let mut lower = initial_layer::<P>(&unrolling(Player::Two, None));
    let mut upper = initial_layer::<P>(&unrolling(Player::One, Some(safe)));
    let tol_p = P::from_f64(tol);
    let s = space.index(start);
    let mut n = 0u32;
    let mut next_check = 0u32;
    loop {
        if n == next_check {
            let gap = P::diff(&upper[s], &lower[s]);
            if gap < P::zero() {
                return Err(Error::InternalConsistency(format!("lower bound exceeds upper bound at horizon {n}")));
            }
            if gap <= tol_p || n >= max_horizon {
                return Ok(ValueResult {
                    lower: lower[s].clone(),
                    upper: upper[s].clone(),
                    horizon_used: n,
                    converged: gap <= tol_p,
                });
            }
            next_check = if n == 0 { 1 } else { (n.saturating_mul(2)).min(max_horizon) };
        }
        lower = bellman(game, &space, &lower)?;
        upper = bellman(game, &space, &upper)?;
        n += 1;
    }
}
