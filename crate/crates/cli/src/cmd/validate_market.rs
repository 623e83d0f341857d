//! `validate-market`: market calibration report over every league in a file.

use std::path::PathBuf;

use clap::Args as ClapArgs;
use parity_core::{hosmer_lemeshow, load_league};

use crate::common::{create_out_dir, csv_writer, distinct_leagues};
use crate::manifest::RunManifest;

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Games CSV.
    #[arg(long)]
    pub games: PathBuf,
    /// Restrict the report to one league.
    #[arg(long)]
    pub league: Option<String>,
    /// Calibration bins for the goodness-of-fit test.
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<u8> {
    create_out_dir(&args.out)?;
    let leagues = match &args.league {
        Some(id) => vec![id.clone()],
        None => distinct_leagues(&args.games)?,
    };

    let mut manifest = RunManifest::new("validate-market", 0);
    manifest.input(&args.games)?;
    manifest.config_kv("bins", args.bins);
    manifest.config_kv("leagues", leagues.join(","));

    let mut report = csv_writer(&args.out.join("report.csv"), "market-report-v1")?;
    report.write_record([
        "league",
        "n_games",
        "n_bets",
        "coverage",
        "mean_implied_p",
        "observed_home_rate",
        "hl_statistic",
        "hl_df",
        "hl_p_value",
        "lack_of_fit",
    ])?;
    let mut bins_out = csv_writer(&args.out.join("bins.csv"), "market-bins-v1")?;
    bins_out.write_record([
        "league",
        "bin_index",
        "n",
        "mean_implied_p",
        "observed_wins",
        "expected_wins",
    ])?;

    for id in &leagues {
        let league = load_league(&args.games, None, id, None, None)?;
        let n_games = league.games.len();
        let priced: Vec<f64> = league
            .games
            .iter()
            .filter_map(|g| g.implied_p_home)
            .collect();
        let n_bets = priced.len();
        let scored: Vec<(f64, bool)> = league
            .games
            .iter()
            .filter_map(|g| Some((g.implied_p_home?, g.home_win?)))
            .collect();
        let mean_implied = priced.iter().sum::<f64>() / n_bets.max(1) as f64;
        let observed_rate = scored.iter().filter(|(_, y)| *y).count() as f64
            / scored.len().max(1) as f64;
        let hl = hosmer_lemeshow(&scored, args.bins)?;
        let lack_of_fit = hl.p_value < 0.05;

        report.write_record([
            id.clone(),
            n_games.to_string(),
            n_bets.to_string(),
            format!("{}", n_bets as f64 / n_games.max(1) as f64),
            format!("{mean_implied}"),
            format!("{observed_rate}"),
            format!("{}", hl.statistic),
            hl.degrees_of_freedom.to_string(),
            format!("{}", hl.p_value),
            if lack_of_fit { "yes" } else { "no" }.to_string(),
        ])?;
        for bin in &hl.bins {
            bins_out.write_record([
                id.clone(),
                bin.bin_index.to_string(),
                bin.n.to_string(),
                format!("{}", bin.mean_implied_p),
                bin.observed_wins.to_string(),
                format!("{}", bin.expected_wins),
            ])?;
        }

        let verdict = if lack_of_fit {
            "lack of fit at the 5% level"
        } else {
            "no lack of fit at the 5% level"
        };
        println!(
            "league {id}: n_games={n_games} n_bets={n_bets} chi2={:.3} df={} p={:.4} ({verdict})",
            hl.statistic, hl.degrees_of_freedom, hl.p_value
        );
    }

    report.flush()?;
    bins_out.flush()?;
    manifest.output("report.csv");
    manifest.output("bins.csv");
    manifest.write(&args.out)?;
    Ok(0)
}
