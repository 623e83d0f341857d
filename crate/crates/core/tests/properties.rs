//! Property tests for the algebraic invariants of the core primitives.

use proptest::prelude::*;

use parity_core::sampler::scalar_parameters;
use parity_core::schedule::{week_slices, GameRecord, LeagueConfig};
use parity_core::ssm::{
    apply_link, game_mean, invert_link, log_likelihood, HomeAdvantage, Link, ModelSpec,
    ParameterState,
};
use parity_core::{
    boundary_probability, implied_pair, money_lines, post_parity, reg_parity, FinishDistribution,
    MatchupMode, MoneyLine, ParamId, SimulatedMatchupSet,
};

fn any_line() -> impl Strategy<Value = MoneyLine> {
    (100i32..=2000, any::<bool>()).prop_map(|(magnitude, favorite)| {
        MoneyLine::new(if favorite { -magnitude } else { magnitude }).unwrap()
    })
}

fn priced(season: usize, week: usize, home: usize, away: usize, p: f64) -> GameRecord {
    GameRecord {
        season,
        week,
        home_team: home,
        away_team: away,
        home_city: home,
        home_line: None,
        away_line: None,
        implied_p_home: Some(p),
        home_win: None,
        home_score: None,
        away_score: None,
    }
}

proptest! {
    #[test]
    fn implied_probabilities_sum_to_one(home in any_line(), away in any_line()) {
        let pair = implied_pair(home, away);
        prop_assert!((pair.p_home + pair.p_away - 1.0).abs() < 1e-12);
        prop_assert!(pair.p_home > 0.0 && pair.p_home < 1.0);
    }

    #[test]
    fn swapping_sides_mirrors_the_probability(home in any_line(), away in any_line()) {
        let forward = implied_pair(home, away);
        let swapped = implied_pair(away, home);
        prop_assert!((forward.p_home - swapped.p_away).abs() < 1e-12);
        prop_assert!((forward.vig - swapped.vig).abs() < 1e-12);
    }

    #[test]
    fn equal_magnitude_lines_are_complements(magnitude in 100i32..=5000) {
        let dog = boundary_probability(MoneyLine::new(magnitude).unwrap());
        let favorite = boundary_probability(MoneyLine::new(-magnitude).unwrap());
        prop_assert!((dog + favorite - 1.0).abs() < 1e-15);
    }

    #[test]
    fn longer_odds_mean_smaller_boundary_probability(a in 100i32..=4000, b in 100i32..=4000) {
        prop_assume!(a < b);
        let short = boundary_probability(MoneyLine::new(a).unwrap());
        let long = boundary_probability(MoneyLine::new(b).unwrap());
        prop_assert!(short > long);
        let short_fav = boundary_probability(MoneyLine::new(-a).unwrap());
        let long_fav = boundary_probability(MoneyLine::new(-b).unwrap());
        prop_assert!(short_fav < long_fav);
    }

    #[test]
    fn links_round_trip(p in 1e-4..0.9999f64, arcsin in any::<bool>()) {
        let link = if arcsin { Link::ArcsinSqrt } else { Link::Logit };
        let value = apply_link(p, link).unwrap();
        prop_assert!((invert_link(value, link) - p).abs() < 1e-9);
    }

    #[test]
    fn vig_free_quantized_lines_recover_the_probability(p in 0.02..0.98f64) {
        let (home, away) = money_lines(p, 0.0).unwrap();
        let implied = implied_pair(home, away).p_home;
        prop_assert!((implied - p).abs() < 0.0051, "p {p} became {implied}");
    }

    #[test]
    fn likelihood_ignores_common_strength_shifts(
        raw in prop::collection::vec(-1.0..1.0f64, 4),
        shift in -3.0..3.0f64,
    ) {
        let league = LeagueConfig::new("prop", 4, 4, 1, 1).unwrap();
        let spec = ModelSpec::new(HomeAdvantage::Constant, Link::Logit, league);
        let mut state = ParameterState::zeros(&spec.league);
        for (j, v) in raw.iter().enumerate() {
            state.theta[(0, j)] = *v;
        }
        let games = vec![
            priced(1, 1, 1, 2, 0.6),
            priced(1, 1, 3, 4, 0.45),
            priced(1, 1, 2, 3, 0.52),
        ];
        let base = log_likelihood(&state, &spec, &games).unwrap();
        state.theta.add_scalar_mut(shift);
        let moved = log_likelihood(&state, &spec, &games).unwrap();
        prop_assert!((base - moved).abs() < 1e-9 * base.abs().max(1.0));
    }

    #[test]
    fn centering_preserves_game_means(
        raw in prop::collection::vec(-2.0..2.0f64, 6),
        alpha0 in -1.0..1.0f64,
        alpha_raw in prop::collection::vec(-0.5..0.5f64, 3),
    ) {
        let league = LeagueConfig::new("prop", 3, 3, 1, 2).unwrap();
        let spec = ModelSpec::new(HomeAdvantage::PerCity, Link::Logit, league);
        let mut state = ParameterState::zeros(&spec.league);
        for (i, v) in raw.iter().enumerate() {
            state.theta[(i / 3, i % 3)] = *v;
        }
        state.alpha0 = alpha0;
        state.alpha = alpha_raw;
        let games = vec![priced(1, 1, 1, 2, 0.5), priced(1, 2, 3, 1, 0.5)];
        let before: Vec<f64> = games
            .iter()
            .map(|g| game_mean(&state, &spec, g).unwrap())
            .collect();
        state.center_theta();
        state.center_alpha();
        for r in 0..state.theta.nrows() {
            prop_assert!(state.theta.row(r).sum().abs() < 1e-9);
        }
        let alpha_sum: f64 = state.alpha.iter().sum();
        prop_assert!(alpha_sum.abs() < 1e-9);
        for (g, b) in games.iter().zip(&before) {
            let after = game_mean(&state, &spec, g).unwrap();
            prop_assert!((after - b).abs() < 1e-9);
        }
    }

    #[test]
    fn week_slices_ignore_input_order(seed in 0u64..500, take in 4usize..20) {
        let config = parity_core::TruthConfig {
            games_per_week: 4,
            ..parity_core::TruthConfig::demo("prop", seed)
        };
        let (league, _) = parity_core::generate(&config).unwrap();
        let games: Vec<GameRecord> = league.games.into_iter().take(take).collect();
        let mut shuffled = games.clone();
        shuffled.reverse();
        let a = week_slices(&games, &league.config).unwrap();
        let b = week_slices(&shuffled, &league.config).unwrap();
        for (season, week, indices) in a.iter() {
            let left: Vec<&GameRecord> = indices.iter().map(|&i| &games[i]).collect();
            let right: Vec<&GameRecord> =
                b.get(season, week).iter().map(|&i| &shuffled[i]).collect();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn reg_parity_is_order_free_and_monotone(
        mut probs in prop::collection::vec(0.5..1.0f64, 3..40),
        bump_index in any::<prop::sample::Index>(),
    ) {
        let set = SimulatedMatchupSet {
            league_id: "prop".into(),
            mode: MatchupMode::Neutral,
            probabilities: probs.clone(),
        };
        let base = reg_parity(&set).unwrap();
        let mut sorted = probs.clone();
        sorted.sort_by(|a, b| a.total_cmp(b));
        let sorted_set = SimulatedMatchupSet {
            probabilities: sorted,
            ..set.clone()
        };
        prop_assert!((reg_parity(&sorted_set).unwrap() - base).abs() < 1e-9);
        let i = bump_index.index(probs.len());
        probs[i] = (probs[i] + 0.01).min(1.0);
        let bumped = SimulatedMatchupSet {
            probabilities: probs,
            ..set
        };
        prop_assert!(reg_parity(&bumped).unwrap() <= base + 1e-12);
    }

    #[test]
    fn post_parity_never_exceeds_one(finish in prop::collection::vec(1.0..5.0f64, 8..=8)) {
        let distribution = FinishDistribution {
            expected_finish: finish,
        };
        prop_assert!(post_parity(&distribution, 8).unwrap() <= 1.0 + 1e-12);
    }

    #[test]
    fn auc_is_stable_under_order_preserving_maps(
        preds in prop::collection::vec(0.01..0.99f64, 4..40),
        outcomes in prop::collection::vec(any::<bool>(), 4..40),
    ) {
        let n = preds.len().min(outcomes.len());
        let preds = &preds[..n];
        let outcomes = &outcomes[..n];
        prop_assume!(outcomes.iter().any(|&y| y) && outcomes.iter().any(|&y| !y));
        let squeezed: Vec<f64> = preds.iter().map(|p| p / 2.0 + 0.1).collect();
        let a = parity_core::auc(preds, outcomes).unwrap();
        let b = parity_core::auc(&squeezed, outcomes).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn parameter_names_round_trip(
        teams in 2usize..5,
        weeks in 1usize..4,
        per_city in any::<bool>(),
    ) {
        let league = LeagueConfig::new("prop", teams, teams, 2, weeks).unwrap();
        let variant = if per_city {
            HomeAdvantage::PerCity
        } else {
            HomeAdvantage::Constant
        };
        let spec = ModelSpec::new(variant, Link::Logit, league);
        for id in scalar_parameters(&spec) {
            let name = id.name();
            let parsed = ParamId::parse(&name).unwrap();
            prop_assert_eq!(parsed, id);
        }
    }
}
