//! `synth`: synthetic league generation from a flat key=value truth config.

use std::path::{Path, PathBuf};

use clap::Args as ClapArgs;
use parity_core::{generate, write_games_csv, write_truth_csv, Error, Link, TruthConfig};

use crate::common::create_out_dir;
use crate::manifest::RunManifest;

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Truth config file, one `key = value` per line.
    #[arg(long)]
    pub config: PathBuf,
    /// Override the seed from the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Applies `key = value` lines on top of the demo config. `#` starts a
/// comment; blank lines are skipped.
fn parse_config(path: &Path) -> anyhow::Result<TruthConfig> {
    let text = std::fs::read_to_string(path).map_err(Error::from)?;
    let mut config = TruthConfig::demo("synthetic", 0);
    let mut alpha_given = false;
    for (i, raw) in text.lines().enumerate() {
        let parse_err = |msg: String| Error::Parse {
            path: path.display().to_string(),
            line: i + 1,
            msg,
        };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err("expected `key = value`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| parse_err(format!("bad {what} value `{value}`"));
        let as_usize = || value.parse::<usize>().map_err(|_| bad("integer"));
        let as_f64 = || value.parse::<f64>().map_err(|_| bad("number"));
        match key {
            "league_id" => config.league_id = value.to_string(),
            "teams" => config.teams = as_usize()?,
            "cities" => config.cities = as_usize()?,
            "seasons" => config.seasons = as_usize()?,
            "weeks" => config.weeks = as_usize()?,
            "link" => {
                config.link = match value {
                    "logit" => Link::Logit,
                    "arcsin-sqrt" => Link::ArcsinSqrt,
                    _ => return Err(bad("link").into()),
                }
            }
            "gamma_season" => config.gamma_season = as_f64()?,
            "gamma_week" => config.gamma_week = as_f64()?,
            "sigma_season" => config.sigma_season = as_f64()?,
            "sigma_week" => config.sigma_week = as_f64()?,
            "sigma_game" => config.sigma_game = as_f64()?,
            "alpha0" => config.alpha0 = as_f64()?,
            "alpha" => {
                alpha_given = true;
                config.alpha = value
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| bad("number list")))
                    .collect::<Result<_, _>>()?
            }
            "games_per_week" => config.games_per_week = as_usize()?,
            "vig" => config.vig = as_f64()?,
            "seed" => config.seed = value.parse::<u64>().map_err(|_| bad("integer"))?,
            _ => return Err(parse_err(format!("unknown key `{key}`")).into()),
        }
    }
    if !alpha_given {
        config.alpha = vec![0.0; config.cities];
    }
    Ok(config)
}

pub fn run(args: Args) -> anyhow::Result<u8> {
    create_out_dir(&args.out)?;
    let mut config = parse_config(&args.config)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }

    let (league, truth) = generate(&config)?;
    write_games_csv(&args.out.join("games.csv"), &league)?;
    write_truth_csv(&args.out.join("truth.csv"), &truth, &league.config)?;

    let mut manifest = RunManifest::new("synth", config.seed);
    manifest.input(&args.config)?;
    manifest.config_kv("league", &config.league_id);
    manifest.config_kv("teams", config.teams);
    manifest.config_kv("cities", config.cities);
    manifest.config_kv("seasons", config.seasons);
    manifest.config_kv("weeks", config.weeks);
    manifest.config_kv("games_per_week", config.games_per_week);
    manifest.config_kv("vig", config.vig);
    manifest.output("games.csv");
    manifest.output("truth.csv");
    manifest.write(&args.out)?;

    println!(
        "synth {}: {} games over {} seasons x {} weeks written to {}",
        config.league_id,
        league.games.len(),
        config.seasons,
        config.weeks,
        args.out.display()
    );
    Ok(0)
}
