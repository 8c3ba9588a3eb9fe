//! Determinacy through the reveal-first games: verdicts, bidding matrices,
//! exhaustive scans, and checks of the structural matrix lemmas.

use std::fmt;

use crate::arena::{Game, TieMechanism};
use crate::configgraph::{build_reveal_first, Configuration, RevealFirstGame, TieState};
use crate::tbsolve::{solve_turn_based, SolveResult};
use crate::{Error, Player, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Determined(Player),
    NotDetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Determined(p) => write!(f, "Determined{{{p}}}"),
            Verdict::NotDetermined => f.write_str("NotDetermined"),
        }
    }
}

/// Rows are Player-1 bids, columns Player-2 bids; entry `(b₁, b₂)` is the
/// winner of ⟨c, b₁, b₂⟩ in G₁.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiddingMatrix {
    pub config: Configuration,
    pub entries: Vec<Vec<Player>>,
}

impl BiddingMatrix {
    pub fn get(&self, b1: u32, b2: u32) -> Player {
        self.entries[b1 as usize][b2 as usize]
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, Vec::len)
    }

    /// Text grid with a header of Player-2 bids.
    pub fn render(&self) -> String {
        let mut out = String::from("b1\\b2");
        for j in 0..self.cols() {
            out.push_str(&format!(" {j}"));
        }
        out.push('\n');
        for (i, row) in self.entries.iter().enumerate() {
            out.push_str(&format!("{i:>5}"));
            for p in row {
                out.push_str(&format!(" {p}"));
            }
            out.push('\n');
        }
        out
    }
}

/// A 1-row and a 2-column cannot coexist: they would meet in one entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixClass {
    OneRow(u32),
    TwoColumn(u32),
    Neither,
}

/// Lowest-index 1-row, else lowest-index 2-column, else `Neither`.
pub fn classify_matrix(m: &BiddingMatrix) -> MatrixClass {
    if let Some(i) = m.entries.iter().position(|row| row.iter().all(|&p| p == Player::One)) {
        return MatrixClass::OneRow(i as u32);
    }
    if let Some(j) = (0..m.cols()).find(|&j| m.entries.iter().all(|row| row[j] == Player::Two)) {
        return MatrixClass::TwoColumn(j as u32);
    }
    MatrixClass::Neither
}

/// Both reveal-first games of a bidding game, solved once.
pub struct Analysis {
    game: Game,
    g1: RevealFirstGame,
    g2: RevealFirstGame,
    sol1: SolveResult,
    sol2: SolveResult,
}

impl Analysis {
    pub fn new(game: &Game, cap: usize) -> Result<Analysis> {
        let g1 = build_reveal_first(game, Player::One, cap)?;
        let g2 = build_reveal_first(game, Player::Two, cap)?;
        let sol1 = solve_turn_based(&g1.game)?;
        let sol2 = solve_turn_based(&g2.game)?;
        Ok(Analysis {
            game: game.clone(),
            g1,
            g2,
            sol1,
            sol2,
        })
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn reveal_first(&self, revealer: Player) -> (&RevealFirstGame, &SolveResult) {
        match revealer {
            Player::One => (&self.g1, &self.sol1),
            Player::Two => (&self.g2, &self.sol2),
        }
    }

    pub fn configs(&self) -> impl Iterator<Item = Configuration> + '_ {
        self.g1.graph.space.iter()
    }

    /// Player 1 wins from `c` in G₁.
    pub fn wins_g1(&self, c: &Configuration) -> bool {
        self.sol1.winner[self.g1.graph.config_index(c)] == Player::One
    }

    /// Player 2 wins from `c` in G₂.
    pub fn wins_g2(&self, c: &Configuration) -> bool {
        self.sol2.winner[self.g2.graph.config_index(c)] == Player::Two
    }

    pub fn verdict(&self, c: &Configuration) -> Result<Verdict> {
        match (self.wins_g1(c), self.wins_g2(c)) {
            (true, true) => Err(Error::InternalConsistency(format!(
                "{} is won by Player 1 in G1 and by Player 2 in G2",
                c.display(&self.game)
            ))),
            (true, false) => Ok(Verdict::Determined(Player::One)),
            (false, true) => Ok(Verdict::Determined(Player::Two)),
            (false, false) => Ok(Verdict::NotDetermined),
        }
    }

    /// Configurations won by Player 1 in G₁ and by Player 2 in G₂; always
    /// empty for a correct solver.
    pub fn both_winning(&self) -> Vec<Configuration> {
        self.configs().filter(|c| self.wins_g1(c) && self.wins_g2(c)).collect()
    }

    pub fn matrix(&self, c: &Configuration) -> BiddingMatrix {
        let ci = self.g1.graph.config_index(c);
        let entries = (0..=c.b1)
            .map(|b1| {
                (0..=c.b2)
                    .map(|b2| self.sol1.winner[self.g1.graph.pair_node(ci, b1, b2)])
                    .collect()
            })
            .collect();
        BiddingMatrix { config: *c, entries }
    }

    /// All not-determined configurations in configuration order.
    pub fn scan(&self) -> Result<Vec<Configuration>> {
        let mut out = Vec::new();
        for c in self.configs() {
            if self.verdict(&c)? == Verdict::NotDetermined {
                out.push(c);
            }
        }
        Ok(out)
    }

    pub fn lemma_context(&self, c: &Configuration) -> LemmaContext {
        match (self.game.tie(), c.tie) {
            (TieMechanism::Transducer(t), TieState::State(q)) if !t.is_tie_aware() => LemmaContext {
                tie_unaware_output: Some(t.output(q)),
                advantage_holder: None,
            },
            (TieMechanism::Advantage { .. }, TieState::Holder(h)) => LemmaContext {
                tie_unaware_output: None,
                advantage_holder: Some(h),
            },
            _ => LemmaContext::default(),
        }
    }
}

pub fn bidding_matrix(game: &Game, c: &Configuration, cap: usize) -> Result<BiddingMatrix> {
    Ok(Analysis::new(game, cap)?.matrix(c))
}

pub fn global_determinacy(game: &Game, c: &Configuration, cap: usize) -> Result<Verdict> {
    Analysis::new(game, cap)?.verdict(c)
}

pub fn scan_nondetermined(game: &Game, cap: usize) -> Result<Vec<Configuration>> {
    Analysis::new(game, cap)?.scan()
}

/// Which mechanism-specific lemma checks apply to a matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LemmaContext {
    /// Γ(s) of a tie-unaware transducer.
    pub tie_unaware_output: Option<Player>,
    /// Current advantage holder.
    pub advantage_holder: Option<Player>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaViolation {
    pub check: &'static str,
    pub row: u32,
    pub column: u32,
    pub message: String,
}

pub fn validate_matrix_lemmas(game: &Game, c: &Configuration, cap: usize) -> Result<Vec<LemmaViolation>> {
    let a = Analysis::new(game, cap)?;
    Ok(check_matrix_lemmas(&a.matrix(c), a.lemma_context(c)))
}

/// Structural checks on a bidding matrix; empty iff all applicable ones hold.
pub fn check_matrix_lemmas(m: &BiddingMatrix, ctx: LemmaContext) -> Vec<LemmaViolation> {
    let mut out = Vec::new();
    let (rows, cols) = (m.rows() as u32, m.cols() as u32);
    let at = |i: u32, j: u32| m.get(i, j);
    let mut report = |check, row, column, message: String| {
        out.push(LemmaViolation { check, row, column, message });
    };

    // Strict Player-2 wins depend only on Player 2's bid, and dually.
    for j in 0..cols {
        if let Some(i) = (1..j.min(rows)).find(|&i| at(i, j) != at(0, j)) {
            report("column-constancy", i, j, format!("entry ({i},{j}) differs from (0,{j}) above the diagonal"));
        }
    }
    for i in 0..rows {
        if let Some(j) = (1..i.min(cols)).find(|&j| at(i, j) != at(i, 0)) {
            report("row-constancy", i, j, format!("entry ({i},{j}) differs from ({i},0) left of the diagonal"));
        }
    }

    let diag = rows.min(cols);
    if let Some(g) = ctx.tie_unaware_output {
        for b in 1..diag {
            let (ri, rj) = match g {
                Player::One => (b, b - 1),
                Player::Two => (b - 1, b),
            };
            if at(b, b) != at(ri, rj) {
                report("tie-diagonal", b, b, format!("tie entry ({b},{b}) differs from ({ri},{rj})"));
            }
        }
    }
    match ctx.advantage_holder {
        Some(Player::One) => {
            for i in 0..diag {
                if i >= 1 && at(i - 1, i) == Player::Two && at(i, i - 1) == Player::Two && at(i, i) != Player::Two {
                    report("holder-1-tie", i, i, format!("({},{i}) and ({i},{}) are 2 but ({i},{i}) is 1", i - 1, i - 1));
                }
                if i + 1 < rows && at(i, i) == Player::Two && at(i + 1, i) != Player::Two {
                    report("holder-1-overbid", i + 1, i, format!("({i},{i}) is 2 but ({},{i}) is 1", i + 1));
                }
            }
        }
        Some(Player::Two) => {
            for i in 1..diag {
                if at(i - 1, i) == Player::One && at(i, i - 1) == Player::One && at(i, i) != Player::One {
                    report("holder-2-tie", i, i, format!("({},{i}) and ({i},{}) are 1 but ({i},{i}) is 2", i - 1, i - 1));
                }
                if at(i, i - 1) == Player::Two && at(i, i) != Player::Two {
                    report("holder-2-overbid", i, i, format!("({i},{}) is 2 but ({i},{i}) is 1", i - 1));
                }
            }
        }
        None => {}
    }
    out
}
