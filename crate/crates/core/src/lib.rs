//! Discrete-bidding games on graphs.
//!
//! Each round both players submit a bid in whole chips; the higher bidder pays
//! the bid to the other player and moves the token. Equal bids are resolved by a
//! tie-breaking mechanism: a transducer that reads the history of biddings, a
//! fair coin, or an "advantage" that one player holds and may spend.
//!
//! The crate builds the explicit configuration graph of such a game, expands it
//! into the two turn-based games where one player reveals each bid first, and
//! uses those to classify determinacy, extract bidding matrices, compute
//! pure-strategy values under random ties, and threshold budgets under
//! advantage ties.

pub mod advantage;
pub mod arena;
pub mod configgraph;
pub mod determinacy;
mod error;
pub mod fixtures;
pub mod generate;
pub mod objective;
mod player;
pub mod randomtie;
pub mod reproduce;
pub mod sim;
pub mod tbsolve;

pub use arena::{parse_game, serialize_game, validate_spec, Game, GameSpec};
pub use configgraph::{Configuration, TieState};
pub use error::{Error, Result};
pub use objective::Objective;
pub use player::Player;

/// Default limit on the number of nodes any explicit graph may allocate.
pub const DEFAULT_NODE_CAP: usize = 5_000_000;

/// Node cap taken from `BIDGAME_NODE_CAP` when set and valid, otherwise
/// [`DEFAULT_NODE_CAP`].
pub fn node_cap_from_env() -> usize {
    std::env::var("BIDGAME_NODE_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_CAP)
}
