//! Checks of the claims made about the built-in example games.

use std::fmt;

use crate::configgraph::{resolve_bidding, successor, BidResolution, Configuration};
use crate::determinacy::{Analysis, Verdict};
use crate::sim::run_scc_buchi_experiment;
use crate::{fixtures, node_cap_from_env, Error, Game, Player, Result};

/// Outcome of a claim check: a headline, supporting lines, and whether the
/// claim held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimReport {
    pub headline: String,
    pub details: Vec<String>,
    pub holds: bool,
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.headline)?;
        for d in &self.details {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}

/// One bidding of a replayed line: bids, the winner's move, and the
/// configuration it must produce.
#[derive(Clone, Copy, Debug)]
pub struct ReplayStep {
    pub b1: u32,
    pub b2: u32,
    pub next: &'static str,
    pub expect: (&'static str, u32, &'static str),
}

/// A line of play from a named configuration.
#[derive(Clone, Debug)]
pub struct ReplayLine {
    pub label: &'static str,
    pub start: (&'static str, u32, &'static str),
    pub steps: Vec<ReplayStep>,
}

const fn step(b1: u32, b2: u32, next: &'static str, expect: (&'static str, u32, &'static str)) -> ReplayStep {
    ReplayStep { b1, b2, next, expect }
}

/// Replay lines for `fig1` from ⟨v0,1,1,A2⟩.
pub fn fig1_lines() -> Vec<ReplayLine> {
    let start = ("v0", 1, "A2");
    vec![
        ReplayLine {
            label: "Player 2 reveals 0, Player 1 bids 1",
            start,
            steps: vec![step(1, 0, "t", ("t", 0, "A2"))],
        },
        ReplayLine {
            label: "Player 2 reveals 1, Player 1 bids 0, then 1 twice against a matching bid",
            start,
            steps: vec![
                step(0, 1, "v1", ("v1", 2, "A2")),
                step(0, 0, "v2", ("v2", 2, "A1")),
                step(1, 0, "v0", ("v0", 1, "A1")),
                step(1, 1, "t", ("t", 0, "A2")),
            ],
        },
        ReplayLine {
            label: "Player 2 reveals 1, Player 1 bids 0, then 1 twice against 0",
            start,
            steps: vec![
                step(0, 1, "v1", ("v1", 2, "A2")),
                step(0, 0, "v2", ("v2", 2, "A1")),
                step(1, 0, "v0", ("v0", 1, "A1")),
                step(1, 0, "t", ("t", 0, "A1")),
            ],
        },
        ReplayLine {
            label: "Player 1 reveals 0, Player 2 takes the tie",
            start,
            steps: vec![step(0, 0, "v1", ("v1", 1, "A1"))],
        },
        ReplayLine {
            label: "Player 1 reveals 1, Player 2 matches",
            start,
            steps: vec![step(1, 1, "v1", ("v1", 2, "A1"))],
        },
    ]
}

fn named(game: &Game, (v, b1, tie): (&str, u32, &str)) -> Result<Configuration> {
    Configuration::from_names(game, v, b1, Some(tie))
}

/// Replays `line`; `Ok(None)` when every configuration matches, otherwise a
/// description of the first mismatch.
pub fn replay(game: &Game, line: &ReplayLine) -> Result<Option<String>> {
    let mut c = named(game, line.start)?;
    for (i, s) in line.steps.iter().enumerate() {
        let outcome = match resolve_bidding(game, &c, s.b1, s.b2)? {
            BidResolution::Decided(o) => o,
            _ => return Err(Error::UnsupportedMechanism("replays need transducer ties".into())),
        };
        let next = game
            .vertex_index(s.next)
            .ok_or_else(|| Error::Reference(format!("unknown vertex \"{}\"", s.next)))?;
        if !game.successors(c.vertex).contains(&next) {
            return Ok(Some(format!("step {}: no edge to {}", i + 1, s.next)));
        }
        let d = successor(game, &c, &outcome, next)?;
        let want = named(game, s.expect)?;
        if d != want {
            return Ok(Some(format!(
                "step {}: reached {} instead of {}",
                i + 1,
                d.display(game),
                want.display(game)
            )));
        }
        c = d;
    }
    Ok(None)
}

fn render_line(game: &Game, line: &ReplayLine) -> Result<String> {
    let mut text = named(game, line.start)?.display(game).to_string();
    for s in &line.steps {
        text += &format!(" -{}:{}-> {}", s.b1, s.b2, named(game, s.expect)?.display(game));
    }
    Ok(text)
}

pub fn check_fig1() -> Result<ClaimReport> {
    let game = Game::new(fixtures::fig1())?;
    let analysis = Analysis::new(&game, node_cap_from_env())?;
    let start = named(&game, ("v0", 1, "A2"))?;
    let scan = analysis.scan()?;
    let mut details = vec![format!(
        "not determined: {}",
        scan.iter().map(|c| c.display(&game).to_string()).collect::<Vec<_>>().join(" ")
    )];
    let mut holds = scan.contains(&start);
    for line in fig1_lines() {
        let mismatch = replay(&game, &line)?;
        holds &= mismatch.is_none();
        details.push(format!(
            "{}: {} {}",
            line.label,
            render_line(&game, &line)?,
            mismatch.as_deref().unwrap_or("ok")
        ));
    }
    for (cfg, want) in [(("v2", 2, "A1"), Player::One), (("v0", 1, "A1"), Player::One)] {
        let c = named(&game, cfg)?;
        let v = analysis.verdict(&c)?;
        holds &= v == Verdict::Determined(want);
        details.push(format!("{} {}", c.display(&game), v));
    }
    let headline = if holds {
        format!("NOT DETERMINED at {}", start.display(&game))
    } else {
        format!("CLAIM FAILED at {}: {}", start.display(&game), analysis.verdict(&start)?)
    };
    Ok(ClaimReport { headline, details, holds })
}

/// Verdicts at ⟨v1,B₁,N−B₁,first⟩ for 2 ≤ N ≤ `max_n` and 1 ≤ B₁ < N.
pub fn fig2_verdicts(max_n: u32) -> Result<Vec<(u32, u32, Verdict)>> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        let game = Game::new(fixtures::fig2(n))?;
        let analysis = Analysis::new(&game, node_cap_from_env())?;
        for b1 in 1..n {
            let c = named(&game, ("v1", b1, "first"))?;
            out.push((n, b1, analysis.verdict(&c)?));
        }
    }
    Ok(out)
}

pub fn check_fig2(max_n: u32) -> Result<ClaimReport> {
    let verdicts = fig2_verdicts(max_n)?;
    let failures: Vec<String> = verdicts
        .iter()
        .filter(|(_, _, v)| *v != Verdict::NotDetermined)
        .map(|(n, b1, v)| format!("⟨v1,{},{},first⟩ {}", b1, n - b1, v))
        .collect();
    let holds = failures.is_empty();
    let headline = if holds {
        format!("NOT DETERMINED for all B1,B2 ≥ 1 up to N={max_n}")
    } else {
        format!(
            "CLAIM FAILED: {} of {} budget pairs with B1,B2 ≥ 1 are determined",
            failures.len(),
            verdicts.len()
        )
    };
    let details = verdicts
        .iter()
        .map(|(n, b1, v)| format!("⟨v1,{},{},first⟩ {}", b1, n - b1, v))
        .collect();
    Ok(ClaimReport { headline, details, holds })
}

pub fn check_scc_buchi(max_b1: u32) -> Result<ClaimReport> {
    let report = run_scc_buchi_experiment(max_b1)?;
    let details = report
        .cases
        .iter()
        .map(|c| {
            let visits = c.max_visits.map_or("unbounded".to_string(), |m| m.to_string());
            format!(
                "⟨v1,{},0,adv{}⟩ {}; most visits to v3 against the adversary: {}",
                c.b1, c.holder, c.verdict, visits
            )
        })
        .collect();
    let holds = report.holds();
    let headline = if holds {
        format!("Player 2 wins for all B1 ≤ {max_b1}")
    } else {
        format!("CLAIM FAILED for some B1 ≤ {max_b1}")
    };
    Ok(ClaimReport { headline, details, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::GameSpec;
    use crate::DEFAULT_NODE_CAP;

    #[test]
    fn fig1_claim_holds() {
        let r = check_fig1().unwrap();
        assert!(r.holds, "{r}");
        assert_eq!(r.headline, "NOT DETERMINED at ⟨v0,1,1,A2⟩");
    }

    #[test]
    fn fig1_without_back_edge_is_determined() {
        let mut spec: GameSpec = fixtures::fig1();
        spec.edges.retain(|(u, w)| !(u == "v2" && w == "v1"));
        assert_eq!(spec.edges.len(), 5);
        let game = Game::new(spec).unwrap();
        let a = Analysis::new(&game, DEFAULT_NODE_CAP).unwrap();
        let c = named(&game, ("v0", 1, "A2")).unwrap();
        assert_eq!(a.verdict(&c).unwrap(), Verdict::Determined(Player::One));
        assert!(a.scan().unwrap().is_empty());
    }

    #[test]
    fn replay_reports_mismatch() {
        let game = Game::new(fixtures::fig1()).unwrap();
        let line = ReplayLine {
            label: "wrong",
            start: ("v0", 1, "A2"),
            steps: vec![step(0, 1, "v1", ("v1", 2, "A1"))],
        };
        assert_eq!(
            replay(&game, &line).unwrap().unwrap(),
            "step 1: reached ⟨v1,2,0,A2⟩ instead of ⟨v1,2,0,A1⟩"
        );
    }

    #[test]
    fn fig2_small_budgets() {
        let v = fig2_verdicts(3).unwrap();
        assert_eq!(
            v,
            vec![
                (2, 1, Verdict::NotDetermined),
                (3, 1, Verdict::NotDetermined),
                (3, 2, Verdict::Determined(Player::One)),
            ]
        );
        assert!(!check_fig2(3).unwrap().holds);
    }

    #[test]
    fn scc_buchi_claim() {
        let r = check_scc_buchi(3).unwrap();
        assert!(r.holds, "{r}");
        assert_eq!(r.headline, "Player 2 wins for all B1 ≤ 3");
    }
}
