//! Hot-path benchmarks: market math, calibration, the Gibbs sampler, and
//! tournament simulation.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use parity_core::sampler::{InitStrategy, UpdateMask};
use parity_core::{
    fit, generate, hosmer_lemeshow, implied_pair, simulate_tournaments, HomeAdvantage, HomeRule,
    Link, ModelSpec, MoneyLine, SamplerConfig, SeededTeam, TournamentSpec, TruthConfig,
};

fn bench_implied_pair(c: &mut Criterion) {
    let lines: Vec<(MoneyLine, MoneyLine)> = (0..1000)
        .map(|i| {
            let magnitude = 100 + (i * 7) % 400;
            (
                MoneyLine::new(-magnitude).unwrap(),
                MoneyLine::new(100 + (i * 11) % 400).unwrap(),
            )
        })
        .collect();
    c.bench_function("implied_pair_1000_lines", |b| {
        b.iter(|| {
            let mut total = 0.0;
            for &(home, away) in &lines {
                total += implied_pair(home, away).p_home;
            }
            black_box(total)
        })
    });
}

fn bench_hosmer_lemeshow(c: &mut Criterion) {
    let games: Vec<(f64, bool)> = (0..2000)
        .map(|i| {
            let p = 0.25 + 0.5 * ((i * 37) % 100) as f64 / 100.0;
            (p, (i * 13) % 100 < (p * 100.0) as usize)
        })
        .collect();
    c.bench_function("hosmer_lemeshow_2000_games", |b| {
        b.iter_batched(
            || games.clone(),
            |games| black_box(hosmer_lemeshow(&games, 10).unwrap()),
            BatchSize::SmallInput,
        )
    });
}

fn bench_fit(c: &mut Criterion) {
    let config = TruthConfig {
        seasons: 2,
        weeks: 8,
        games_per_week: 12,
        ..TruthConfig::demo("bench", 5)
    };
    let (league, _) = generate(&config).unwrap();
    let spec = ModelSpec::new(HomeAdvantage::PerCity, Link::Logit, league.config.clone());
    let sampler = SamplerConfig {
        chains: 1,
        iterations: 500,
        burn_in: 100,
        thin: 1,
        seed: 9,
        updates: UpdateMask::default(),
        init: InitStrategy::Dispersed,
    };
    c.bench_function("fit_500_sweeps_192_games", |b| {
        b.iter(|| black_box(fit(&league.games, &spec, &sampler).unwrap()))
    });
}

fn bench_tournaments(c: &mut Criterion) {
    let teams: Vec<SeededTeam> = (1..=16)
        .map(|team| SeededTeam {
            team,
            strength: 1.5 - (team - 1) as f64 * 0.2,
            home_edge: 0.25,
        })
        .collect();
    let spec = TournamentSpec {
        z: 16,
        series_length: 7,
        n_tournaments: 1000,
        home_rule: HomeRule::HigherSeedHosts,
        include_game_noise: false,
        sigma_game: 0.0,
    };
    c.bench_function("tournaments_1000_best_of_7", |b| {
        b.iter(|| black_box(simulate_tournaments(&teams, &spec, Link::Logit, 3).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_implied_pair,
    bench_hosmer_lemeshow,
    bench_fit,
    bench_tournaments
);
criterion_main!(benches);
