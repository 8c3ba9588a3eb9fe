//! Strategies, simulated plays, strongly-connected-game experiments, and the
//! interactive engine.

mod interactive;
mod play;
mod scc;
mod strategy;

pub use interactive::{interactive_session, SESSION_ROUND_LIMIT};
pub use play::{coin_flip, play_deterministic, play_random, PlayRecord, Resolution, Round};
pub use scc::{
    build_scc_strategy, is_strongly_connected, max_visits_against, run_scc_buchi_experiment, scc_buchi_adversary,
    SccBuchiCase, SccBuchiReport,
};
pub use strategy::{distances_to, ConstantZero, Optimal, RoundView, ScriptEntry, Scripted, Strategy};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::parse_game;
    use crate::configgraph::TieState;
    use crate::determinacy::{Analysis, Verdict};
    use crate::{fixtures, Configuration, Game, Player, DEFAULT_NODE_CAP};
    use rand::{RngCore, SeedableRng};
    use rand_xoshiro::SplitMix64;

    fn doc(vertices: &str, edges: &str, n: u32, objective: &str, tie: &str) -> Game {
        let d = format!(
            r#"{{"vertices": [{vertices}], "edges": [{edges}], "totalBudget": {n}, "objective": {objective}, "tie": {tie}}}"#
        );
        Game::new(parse_game(d.as_bytes()).unwrap()).unwrap()
    }

    const TIE_TO_1: &str = r#"{"type": "transducer", "states": ["s"], "initial": "s", "tieAware": false,
        "output": {"s": 1}, "rules": [{"from": "s", "on": {"vertex": "*", "winner": "*", "tie": "*", "bid": "*"}, "to": "s"}]}"#;

    fn fork(n: u32, tie: &str) -> Game {
        doc(
            r#""v","t","d""#,
            r#"["v","t"],["v","d"],["t","t"],["d","d"]"#,
            n,
            r#"{"type": "reachability", "target": ["t"]}"#,
            tie,
        )
    }

    #[test]
    fn splitmix_reference_stream() {
        let mut rng = SplitMix64::seed_from_u64(0);
        assert_eq!(rng.next_u64(), 0xe220a8397b1dcdaf);
        assert_eq!(rng.next_u64(), 0x6e789e6aa1b965f4);
    }

    #[test]
    fn self_loop_lasso() {
        let g = doc(r#""a""#, r#"["a","a"]"#, 0, r#"{"type": "buchi", "accepting": ["a"]}"#, TIE_TO_1);
        let start = Configuration::from_names(&g, "a", 0, None).unwrap();
        let z = Strategy::constant_zero(vec![]);
        let r = play_deterministic(&g, &start, &z, &z).unwrap();
        assert_eq!((r.outcome, r.rounds.len(), r.lasso_split), (Player::One, 1, 0));
        assert_eq!(r.transcript(&g), "1 a 0 0 s 0 0 tie1 a\n");
    }

    #[test]
    fn optimal_beats_random_opponents() {
        let g = Game::new(fixtures::fig1()).unwrap();
        let a = Analysis::new(&g, DEFAULT_NODE_CAP).unwrap();
        let mut checked = 0;
        for c in a.configs() {
            let Verdict::Determined(w) = a.verdict(&c).unwrap() else { continue };
            let winner = Strategy::optimal(&a, w);
            for seed in 0..10 {
                let other = Strategy::random_scripted(&g, w.opponent(), seed);
                let (s1, s2) = match w {
                    Player::One => (&winner, &other),
                    Player::Two => (&other, &winner),
                };
                let r = play_deterministic(&g, &c, s1, s2).unwrap();
                assert_eq!(r.outcome, w, "{:?}", r);
                checked += 1;
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn optimal_against_optimal_matches_solver() {
        let g = Game::new(fixtures::fig2(3)).unwrap();
        let a = Analysis::new(&g, DEFAULT_NODE_CAP).unwrap();
        for c in a.configs() {
            if let Verdict::Determined(w) = a.verdict(&c).unwrap() {
                let r = play_deterministic(&g, &c, &Strategy::optimal(&a, Player::One), &Strategy::optimal(&a, Player::Two))
                    .unwrap();
                assert_eq!(r.outcome, w);
            }
        }
    }

    #[test]
    fn budgets_are_conserved() {
        let g = Game::new(fixtures::fig2(4)).unwrap();
        let start = Configuration::from_names(&g, "v1", 2, None).unwrap();
        for seed in 0..20 {
            let r = play_deterministic(
                &g,
                &start,
                &Strategy::random_scripted(&g, Player::One, seed),
                &Strategy::random_scripted(&g, Player::Two, seed + 100),
            )
            .unwrap();
            for w in r.rounds.windows(2) {
                assert_eq!(w[0].next, w[1].config);
            }
            assert!(r.rounds.iter().all(|x| x.next.b1 + x.next.b2 == 4));
        }
    }

    #[test]
    fn random_fork_is_a_fair_coin() {
        let g = fork(0, r#"{"type": "random"}"#);
        let start = Configuration::from_names(&g, "v", 0, None).unwrap();
        let (s1, s2) = (Strategy::constant_zero(vec![1]), Strategy::constant_zero(vec![2]));
        let wins = (0..10_000u64)
            .filter(|&seed| play_random(&g, &start, &s1, &s2, seed, 10).unwrap().outcome == Player::One)
            .count();
        assert!((wins as f64 / 10_000.0 - 0.5).abs() <= 0.02, "{wins}");
        assert_eq!(
            play_random(&g, &start, &s1, &s2, 9, 10).unwrap(),
            play_random(&g, &start, &s1, &s2, 9, 10).unwrap()
        );
    }

    #[test]
    fn strict_bids_ignore_the_seed() {
        let g = fork(2, r#"{"type": "random"}"#);
        let start = Configuration::from_names(&g, "v", 2, None).unwrap();
        let s1 = Strategy::random_scripted(&g, Player::One, 1);
        let s2 = Strategy::constant_zero(vec![]);
        // Player 1's scripted bid at ⟨v,2,0⟩ decides the play when positive.
        let a = play_random(&g, &start, &s1, &s2, 1, 20).unwrap();
        if a.rounds[0].bid1 > 0 {
            assert_eq!(a, play_random(&g, &start, &s1, &s2, 2, 20).unwrap());
        }
    }

    #[test]
    fn truncated_reachability_goes_to_player_two() {
        let g = doc(
            r#""v","t""#,
            r#"["v","v"],["v","t"],["t","t"]"#,
            0,
            r#"{"type": "reachability", "target": ["t"]}"#,
            r#"{"type": "random"}"#,
        );
        let start = Configuration::from_names(&g, "v", 0, None).unwrap();
        let stay = Strategy::constant_zero(vec![0]);
        let r = play_random(&g, &start, &stay, &stay, 3, 5).unwrap();
        assert_eq!((r.outcome, r.truncated, r.rounds.len()), (Player::Two, true, 5));
    }

    #[test]
    fn tour_follows_a_cycle() {
        let g = doc(
            r#""a","b","c""#,
            r#"["a","b"],["b","c"],["c","a"]"#,
            0,
            r#"{"type": "buchi", "accepting": ["a"]}"#,
            TIE_TO_1,
        );
        let s = build_scc_strategy(&g, vec![]).unwrap();
        let start = Configuration::from_names(&g, "a", 0, None).unwrap();
        let r = play_deterministic(&g, &start, &s, &Strategy::constant_zero(vec![])).unwrap();
        assert_eq!(r.cycle_vertices(), vec![0, 1, 2]);
        let line = doc(r#""a","b""#, r#"["a","b"],["b","b"]"#, 0, r#"{"type": "buchi", "accepting": ["a"]}"#, TIE_TO_1);
        assert!(build_scc_strategy(&line, vec![]).is_err());
    }

    #[test]
    fn scc_buchi_adversary_bounds_visits() {
        let report = run_scc_buchi_experiment(4).unwrap();
        assert!(report.holds(), "{report:?}");
        assert!(report.cases.iter().any(|c| c.max_visits == Some(c.b1 as usize) && c.b1 > 0));
    }

    #[test]
    fn interactive_rejects_overbid_and_quits() {
        let g = Game::new(fixtures::fig1()).unwrap();
        let start = Configuration::from_names(&g, "v0", 1, Some("A2")).unwrap();
        let mut out = Vec::new();
        let r = interactive_session(&g, &start, Player::Two, "5\nquit\n".as_bytes(), &mut out, DEFAULT_NODE_CAP).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("bid 5 exceeds your budget 1"), "{text}");
        assert!(r.rounds.is_empty());
        let mut out = Vec::new();
        let r = interactive_session(&g, &start, Player::Two, "".as_bytes(), &mut out, DEFAULT_NODE_CAP).unwrap();
        assert!(r.rounds.is_empty());
    }

    #[test]
    fn interactive_engine_wins_example_line() {
        let g = Game::new(fixtures::fig1()).unwrap();
        let start = Configuration::from_names(&g, "v0", 1, Some("A2")).unwrap();
        let mut out = Vec::new();
        // The human (Player 2) bids 1 and moves to v1, then bids 0 and
        // prefers v1, v2, v0 in that order; lines that do not fit the
        // prompt are rejected and skipped.
        let input = format!("1\nv1\n{}", "0\nv1\nv2\nv0\n".repeat(50));
        let r = interactive_session(&g, &start, Player::Two, input.as_bytes(), &mut out, DEFAULT_NODE_CAP).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(g.vertex_name(r.last().vertex), "t", "{text}");
        assert_eq!(r.outcome, Player::One);
        assert_eq!(r.rounds[0].next.tie, TieState::State(1));
    }
}
