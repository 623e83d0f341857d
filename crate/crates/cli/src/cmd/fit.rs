//! `fit`: cumulative MCMC fit with exported draws and chain diagnostics.

use std::path::PathBuf;

use clap::Args as ClapArgs;
use parity_core::{diagnostics, export_draws, fit};

use crate::common::{create_out_dir, csv_writer, spec_from, LeagueArgs, SamplerArgs};
use crate::manifest::RunManifest;

#[derive(Debug, ClapArgs)]
pub struct Args {
    #[command(flatten)]
    pub league: LeagueArgs,
    #[command(flatten)]
    pub sampler: SamplerArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<u8> {
    create_out_dir(&args.out)?;
    let league = args.league.load()?;
    let spec = spec_from(args.sampler.model, args.sampler.link, &league);
    let config = args.sampler.config();

    let mut manifest = RunManifest::new("fit", config.seed);
    args.league.record(&mut manifest)?;
    args.sampler.record(&mut manifest);

    let draws = fit(&league.games, &spec, &config)?;
    let draws_path = args.out.join("draws.csv");
    export_draws(&draws, &league.team_names, &league.city_names, &draws_path)?;
    manifest.output("draws.csv");
    manifest.output("draws.meta.json");

    let mut diag_out = csv_writer(&args.out.join("diagnostics.csv"), "diagnostics-v1")?;
    diag_out.write_record(["parameter", "rhat", "ess", "degenerate"])?;
    let mut shrink_out = csv_writer(&args.out.join("shrinkage.csv"), "slice-shrinkage-v1")?;
    shrink_out.write_record(["scale", "mean_shrinks"])?;
    let mut flagged = Vec::new();
    if config.chains >= 2 {
        let diag = diagnostics(&draws)?;
        for scalar in &diag.scalars {
            diag_out.write_record([
                scalar.name.clone(),
                format!("{}", scalar.rhat),
                format!("{}", scalar.ess),
                if scalar.degenerate { "yes" } else { "no" }.to_string(),
            ])?;
        }
        for (scale, shrinks) in &diag.slice_shrinkage {
            shrink_out.write_record([scale.clone(), format!("{shrinks}")])?;
        }
        flagged = diag.flagged;
    } else {
        log::warn!("single chain: split R-hat and ESS need at least two chains, skipping");
    }
    diag_out.flush()?;
    shrink_out.flush()?;
    manifest.output("diagnostics.csv");
    manifest.output("shrinkage.csv");
    manifest.write(&args.out)?;

    println!(
        "fit {}: {} retained draws across {} chains -> {}",
        league.config.league_id,
        draws.draws.len(),
        config.chains,
        draws_path.display()
    );
    if flagged.is_empty() {
        Ok(0)
    } else {
        log::warn!(
            "convergence warning: split R-hat above 1.1 for {}",
            flagged.join(", ")
        );
        Ok(10)
    }
}
