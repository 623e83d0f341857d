//! `compare`: DIC table for two draw sets over the same games.

use std::path::PathBuf;

use clap::Args as ClapArgs;
use parity_core::{dic, dic_difference, import_draws, load_league, Error};

use crate::common::{create_out_dir, csv_writer, model_str};
use crate::manifest::RunManifest;

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Draws CSV for model A.
    #[arg(long = "draws-a")]
    pub draws_a: PathBuf,
    /// Draws CSV for model B.
    #[arg(long = "draws-b")]
    pub draws_b: PathBuf,
    /// Games CSV both fits were trained on.
    #[arg(long)]
    pub games: PathBuf,
    /// Team-city registry CSV; teams host in their own city when omitted.
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: Args) -> anyhow::Result<u8> {
    create_out_dir(&args.out)?;
    let (a, _, _) = import_draws(&args.draws_a)?;
    let (b, _, _) = import_draws(&args.draws_b)?;
    if a.spec.league != b.spec.league {
        return Err(Error::Validation(format!(
            "draw sets describe different leagues: `{}` vs `{}`",
            a.spec.league.league_id, b.spec.league.league_id
        ))
        .into());
    }

    let league = load_league(
        &args.games,
        args.registry.as_deref(),
        &a.spec.league.league_id,
        Some(a.spec.league.seasons),
        Some(a.spec.league.weeks),
    )?;

    let dic_a = dic(&a, &league.games)?;
    let dic_b = dic(&b, &league.games)?;
    let diff = dic_difference(&a, &b, &league.games)?;

    let mut manifest = RunManifest::new("compare", 0);
    manifest.input(&args.draws_a)?;
    manifest.input(&parity_core::sampler::io::meta_path(&args.draws_a))?;
    manifest.input(&args.draws_b)?;
    manifest.input(&parity_core::sampler::io::meta_path(&args.draws_b))?;
    manifest.input(&args.games)?;
    if let Some(reg) = &args.registry {
        manifest.input(reg)?;
    }
    manifest.config_kv("league", &a.spec.league.league_id);
    manifest.config_kv("model_a", model_str(a.spec.variant));
    manifest.config_kv("model_b", model_str(b.spec.variant));

    let mut table = csv_writer(&args.out.join("compare.csv"), "dic-compare-v1")?;
    table.write_record([
        "source",
        "model",
        "dbar",
        "d_at_mean",
        "p_d",
        "dic",
        "difference",
        "se",
    ])?;
    for (source, result, variant) in [
        ("draws_a", &dic_a, a.spec.variant),
        ("draws_b", &dic_b, b.spec.variant),
    ] {
        table.write_record([
            source.to_string(),
            model_str(variant).to_string(),
            format!("{}", result.dbar),
            format!("{}", result.d_at_mean),
            format!("{}", result.p_d),
            format!("{}", result.dic),
            String::new(),
            String::new(),
        ])?;
    }
    table.write_record([
        "difference".to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        format!("{}", diff.difference),
        format!("{}", diff.se),
    ])?;
    table.flush()?;
    manifest.output("compare.csv");
    manifest.write(&args.out)?;

    let preferred = if diff.difference < 0.0 { "A" } else { "B" };
    println!(
        "DIC A ({}) = {:.3}, DIC B ({}) = {:.3}, A-B = {:.3} (se {:.3}); model {} preferred",
        model_str(a.spec.variant),
        dic_a.dic,
        model_str(b.spec.variant),
        dic_b.dic,
        diff.difference,
        diff.se,
        preferred
    );
    Ok(0)
}
