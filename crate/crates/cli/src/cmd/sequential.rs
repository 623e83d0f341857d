//! `sequential`: walk-forward refits with one-week-ahead predictions.

use std::path::PathBuf;

use clap::Args as ClapArgs;
use parity_core::{export_draws, predict_from_cut, sequential_fit, SequentialFitPlan};

use crate::common::{
    create_out_dir, csv_writer, spec_from, LeagueArgs, SamplerArgs, PREDICTIONS_SCHEMA,
};
use crate::manifest::RunManifest;

#[derive(Debug, ClapArgs)]
pub struct Args {
    #[command(flatten)]
    pub league: LeagueArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Season to walk forward through.
    #[arg(long)]
    pub season: usize,
    /// Comma-separated cut weeks; defaults to every week from 2 on.
    #[arg(long, value_delimiter = ',')]
    pub cuts: Option<Vec<usize>>,
    /// Average the inverse-link probability over draws instead of plugging in
    /// the posterior mean.
    #[arg(long, default_value_t = false)]
    pub average_draws: bool,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<u8> {
    create_out_dir(&args.out)?;
    let league = args.league.load()?;
    let spec = spec_from(args.sampler.model, args.sampler.link, &league);
    let cuts = match &args.cuts {
        Some(cuts) => cuts.clone(),
        None => (2..=spec.league.weeks).collect(),
    };

    let mut manifest = RunManifest::new("sequential", args.sampler.seed);
    args.league.record(&mut manifest)?;
    args.sampler.record(&mut manifest);
    manifest.config_kv("season", args.season);
    manifest.config_kv(
        "cuts",
        cuts.iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    manifest.config_kv("average_draws", args.average_draws);

    let plan = SequentialFitPlan {
        season: args.season,
        weeks: cuts,
        config: args.sampler.config(),
    };
    let fits = sequential_fit(&league.games, &spec, &plan)?;

    for (k, draws) in &fits {
        let name = format!("draws_cut_{k:02}.csv");
        export_draws(
            draws,
            &league.team_names,
            &league.city_names,
            &args.out.join(&name),
        )?;
        manifest.output(&name);
        manifest.output(&format!("draws_cut_{k:02}.meta.json"));
    }

    let mut predictions = csv_writer(&args.out.join("predictions.csv"), PREDICTIONS_SCHEMA)?;
    predictions.write_record([
        "league",
        "season",
        "week",
        "home_team",
        "away_team",
        "p_home",
        "source",
    ])?;
    let mut n_predicted = 0usize;
    for &k in fits.keys() {
        let target = k + 1;
        if target > spec.league.weeks {
            continue;
        }
        let held_out: Vec<_> = league
            .games
            .iter()
            .filter(|g| g.season == plan.season && g.week == target)
            .cloned()
            .collect();
        if held_out.is_empty() {
            continue;
        }
        for record in predict_from_cut(&fits, k, &held_out, args.average_draws)? {
            predictions.write_record([
                league.config.league_id.clone(),
                record.season.to_string(),
                record.week.to_string(),
                league.team_names[record.home_team - 1].clone(),
                league.team_names[record.away_team - 1].clone(),
                format!("{}", record.p_home),
                record.source.as_str().to_string(),
            ])?;
            n_predicted += 1;
        }
    }
    predictions.flush()?;
    manifest.output("predictions.csv");
    manifest.write(&args.out)?;

    println!(
        "sequential {} season {}: {} cut fits, {} one-week-ahead predictions",
        league.config.league_id,
        plan.season,
        fits.len(),
        n_predicted
    );
    Ok(0)
}
