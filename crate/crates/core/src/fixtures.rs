//! Built-in example games.
//!
//! * `fig1`: reachability game under alternating tie-breaking, not determined
//!   at ⟨v0,1,1,A2⟩. Besides the cycle v0 → v1 → v2 → v0 and the exit v0 → t,
//!   Player 2 needs the back edge v2 → v1 to keep the token away from v0 when
//!   Player 1 holds the whole budget. The sink `t` carries a self-loop.
//! * `fig2`: Büchi game on two vertices where the outcome of the first bidding
//!   fixes who wins all later ties.
//! * `scc_buchi`: strongly connected Büchi game under advantage ties that
//!   Player 1 loses from `v1` whenever Player 2's budget is zero. The file has
//!   total budget 0; experiments rebudget it.

use crate::arena::{parse_game, GameSpec};

pub const FIG1: &str = include_str!("../fixtures/fig1.json");
pub const FIG2: &str = include_str!("../fixtures/fig2.json");
pub const SCC_BUCHI: &str = include_str!("../fixtures/scc_buchi.json");

pub fn fig1() -> GameSpec {
    parse_game(FIG1.as_bytes()).expect("fig1 fixture is valid")
}

/// `fig2` with total budget `n`.
pub fn fig2(n: u32) -> GameSpec {
    parse_game(FIG2.as_bytes())
        .expect("fig2 fixture is valid")
        .with_total_budget(n)
}

/// `scc_buchi` with total budget `n`.
pub fn scc_buchi(n: u32) -> GameSpec {
    parse_game(SCC_BUCHI.as_bytes())
        .expect("scc_buchi fixture is valid")
        .with_total_budget(n)
}
