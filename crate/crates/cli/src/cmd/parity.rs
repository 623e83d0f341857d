//! `parity`: regular-season matchup parity or postseason tournament parity
//! from a fitted draw set.

use std::path::PathBuf;

use clap::{Args as ClapArgs, ValueEnum};
use parity_core::{
    build_bracket, import_draws, load_league, post_parity, reg_parity, simulate_matchups,
    simulate_tournaments, HomeRule, MatchupMode, TournamentSpec,
};

use crate::common::{city_map, create_out_dir, csv_writer};
use crate::manifest::RunManifest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Hypothetical-matchup parity across the whole league history.
    Reg,
    /// Seeded-tournament parity from end-of-season strengths.
    Post,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HomeRuleArg {
    HigherSeed,
    Alternating,
    Neutral,
}

impl HomeRuleArg {
    fn rule(self) -> HomeRule {
        match self {
            HomeRuleArg::HigherSeed => HomeRule::HigherSeedHosts,
            HomeRuleArg::Alternating => HomeRule::Alternating,
            HomeRuleArg::Neutral => HomeRule::Neutral,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            HomeRuleArg::HigherSeed => "higher-seed",
            HomeRuleArg::Alternating => "alternating",
            HomeRuleArg::Neutral => "neutral",
        }
    }
}

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Draws CSV from a cumulative fit.
    #[arg(long)]
    pub draws: PathBuf,
    /// Games CSV the fit was trained on.
    #[arg(long)]
    pub games: PathBuf,
    /// Team-city registry CSV; teams host in their own city when omitted.
    #[arg(long)]
    pub registry: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Simulated hypothetical matchups (reg mode).
    #[arg(long = "n-sim", default_value_t = 10_000)]
    pub n_sim: usize,
    /// Bracket size (post mode).
    #[arg(long, default_value_t = 16)]
    pub z: usize,
    /// Comma-separated best-of series lengths (post mode); the first drives
    /// the per-seed finish table.
    #[arg(long = "series-lengths", value_delimiter = ',', default_values_t = [1, 3, 7, 21, 75])]
    pub series_lengths: Vec<usize>,
    /// Tournaments per series length (post mode).
    #[arg(long, default_value_t = 1_000)]
    pub tournaments: usize,
    #[arg(long = "home-rule", value_enum, default_value = "higher-seed")]
    pub home_rule: HomeRuleArg,
    /// Add game-level noise draws inside each simulated series.
    #[arg(long, default_value_t = false)]
    pub include_noise: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<u8> {
    create_out_dir(&args.out)?;
    let (draws, _, _) = import_draws(&args.draws)?;
    let league_id = draws.spec.league.league_id.clone();
    let league = load_league(
        &args.games,
        args.registry.as_deref(),
        &league_id,
        Some(draws.spec.league.seasons),
        Some(draws.spec.league.weeks),
    )?;
    let map = city_map(&league)?;

    let mut manifest = RunManifest::new("parity", args.seed);
    manifest.input(&args.draws)?;
    manifest.input(&parity_core::sampler::io::meta_path(&args.draws))?;
    manifest.input(&args.games)?;
    if let Some(reg) = &args.registry {
        manifest.input(reg)?;
    }
    manifest.config_kv("league", &league_id);

    match args.mode {
        ModeArg::Reg => {
            manifest.config_kv("mode", "reg");
            manifest.config_kv("n_sim", args.n_sim);
            let mut matchups = csv_writer(&args.out.join("matchups.csv"), "matchup-parity-v1")?;
            matchups.write_record(["league", "mode", "p"])?;
            for mode in [MatchupMode::WithHomeAdvantage, MatchupMode::Neutral] {
                let set = simulate_matchups(&draws, &map, args.n_sim, mode, args.seed)?;
                for p in &set.probabilities {
                    matchups.write_record([league_id.clone(), mode.as_str().to_string(), format!("{p}")])?;
                }
                let value = reg_parity(&set)?;
                println!(
                    "reg parity ({}) over {} matchups: {value:.4}",
                    mode.as_str(),
                    args.n_sim
                );
            }
            matchups.flush()?;
            manifest.output("matchups.csv");
        }
        ModeArg::Post => {
            manifest.config_kv("mode", "post");
            manifest.config_kv("z", args.z);
            manifest.config_kv(
                "series_lengths",
                args.series_lengths
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            manifest.config_kv("tournaments", args.tournaments);
            manifest.config_kv("home_rule", args.home_rule.as_str());
            manifest.config_kv("include_noise", args.include_noise);

            let state = draws.mean_state()?;
            let season = draws.spec.league.seasons;
            let bracket = build_bracket(
                &state,
                &draws.spec,
                season,
                &league.games,
                args.z,
                &map,
            )?;
            let sigma_game = draws.states().map(|s| s.sigma_game).sum::<f64>()
                / draws.draws.len() as f64;

            let mut series_parity = csv_writer(&args.out.join("series_parity.csv"), "series-parity-v1")?;
            series_parity.write_record(["league", "z", "series_length", "post_parity"])?;
            let mut seed_finish = csv_writer(&args.out.join("seed_finish.csv"), "seed-finish-v1")?;
            seed_finish.write_record(["league", "season", "seed", "expected_finish"])?;

            for (i, &length) in args.series_lengths.iter().enumerate() {
                let spec = TournamentSpec {
                    z: args.z,
                    series_length: length,
                    n_tournaments: args.tournaments,
                    home_rule: args.home_rule.rule(),
                    include_game_noise: args.include_noise,
                    sigma_game,
                };
                let finish = simulate_tournaments(
                    &bracket,
                    &spec,
                    draws.spec.link,
                    args.seed.wrapping_add(i as u64),
                )?;
                let value = post_parity(&finish, args.z)?;
                series_parity.write_record([
                    league_id.clone(),
                    args.z.to_string(),
                    length.to_string(),
                    format!("{value}"),
                ])?;
                println!("post parity (best-of-{length}, z={}): {value:.4}", args.z);
                if i == 0 {
                    for (seed_rank, expected) in finish.expected_finish.iter().enumerate() {
                        seed_finish.write_record([
                            league_id.clone(),
                            season.to_string(),
                            (seed_rank + 1).to_string(),
                            format!("{expected}"),
                        ])?;
                    }
                }
            }
            series_parity.flush()?;
            seed_finish.flush()?;
            manifest.output("series_parity.csv");
            manifest.output("seed_finish.csv");
        }
    }

    manifest.write(&args.out)?;
    Ok(0)
}
