//! Lossless draw persistence: long-format CSV plus a JSON sidecar carrying
//! the model, config, seed, and name tables.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampler::{
    scalar_parameters, Draw, InitStrategy, ParamId, PosteriorDraws, SamplerConfig, UpdateMask,
};
use crate::ssm::{ModelSpec, ParameterState};

/// First line of every draws CSV this crate emits.
pub const DRAWS_SCHEMA: &str = "#schema=draws-v1";
const META_SCHEMA: &str = "draws-meta-v1";
const DRAWS_HEADER: [&str; 4] = ["chain", "iteration", "parameter", "value"];

#[derive(Debug, Serialize, Deserialize)]
struct DrawsMeta {
    schema: String,
    engine_version: String,
    model: ModelSpec,
    chains: usize,
    iterations: usize,
    burn_in: usize,
    thin: usize,
    seed: u64,
    updates: UpdateMask,
    /// "dispersed" or "fixed"; a fixed starting state is not persisted, so
    /// imported configs always restart dispersed.
    init: String,
    team_names: Vec<String>,
    city_names: Vec<String>,
    slice_shrinkage: BTreeMap<String, f64>,
}

/// Sidecar path for a draws CSV: `x.csv` → `x.meta.json`.
pub fn meta_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "draws".into());
    path.with_file_name(format!("{stem}.meta.json"))
}

/// Writes draws as `chain,iteration,parameter,value` rows plus the sidecar.
pub fn export_draws(
    draws: &PosteriorDraws,
    team_names: &[String],
    city_names: &[String],
    path: &Path,
) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "{DRAWS_SCHEMA}")?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(DRAWS_HEADER)?;
    let params = scalar_parameters(&draws.spec);
    for draw in &draws.draws {
        for param in &params {
            writer.write_record([
                draw.chain.to_string(),
                draw.iteration.to_string(),
                param.name(),
                // Display emits the shortest string that parses back exactly.
                param.get(&draw.state, &draws.spec).to_string(),
            ])?;
        }
    }
    writer.flush()?;

    let meta = DrawsMeta {
        schema: META_SCHEMA.to_string(),
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        model: draws.spec.clone(),
        chains: draws.config.chains,
        iterations: draws.config.iterations,
        burn_in: draws.config.burn_in,
        thin: draws.config.thin,
        seed: draws.config.seed,
        updates: draws.config.updates,
        init: match draws.config.init {
            InitStrategy::Dispersed => "dispersed".to_string(),
            InitStrategy::Fixed(_) => "fixed".to_string(),
        },
        team_names: team_names.to_vec(),
        city_names: city_names.to_vec(),
        slice_shrinkage: draws.slice_shrinkage.clone(),
    };
    let json = serde_json::to_string_pretty(&meta)?;
    std::fs::write(meta_path(path), json)?;
    Ok(())
}

/// Reads draws written by [`export_draws`], returning the name tables too.
pub fn import_draws(path: &Path) -> Result<(PosteriorDraws, Vec<String>, Vec<String>)> {
    let meta_file = meta_path(path);
    let meta_text = std::fs::read_to_string(&meta_file).map_err(|e| {
        Error::SchemaVersion(format!(
            "draws sidecar {} is required for import: {e}",
            meta_file.display()
        ))
    })?;
    let meta: DrawsMeta = serde_json::from_str(&meta_text)?;
    if meta.schema != META_SCHEMA {
        return Err(Error::SchemaVersion(format!(
            "sidecar schema `{}`, expected `{META_SCHEMA}`",
            meta.schema
        )));
    }

    let text = std::fs::read_to_string(path)?;
    if !text.starts_with(DRAWS_SCHEMA) {
        return Err(Error::SchemaVersion(format!(
            "{} does not begin with `{DRAWS_SCHEMA}`",
            path.display()
        )));
    }
    let spec = meta.model.clone();
    let params = scalar_parameters(&spec);
    let known: BTreeSet<String> = params.iter().map(ParamId::name).collect();

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<&str> = reader.headers()?.iter().collect();
    if header != DRAWS_HEADER {
        return Err(Error::SchemaVersion(format!(
            "draws header {header:?} does not match {DRAWS_HEADER:?}"
        )));
    }
    let mut states: BTreeMap<(usize, usize), (ParameterState, usize)> = BTreeMap::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 2;
        let parse_err = |name: &str, value: &str| Error::Parse {
            path: path.display().to_string(),
            line: row,
            msg: format!("{name} `{value}`"),
        };
        let chain: usize = record[0].parse().map_err(|_| parse_err("chain", &record[0]))?;
        let iteration: usize = record[1]
            .parse()
            .map_err(|_| parse_err("iteration", &record[1]))?;
        let name = &record[2];
        if !known.contains(name) {
            return Err(Error::SchemaVersion(format!(
                "parameter `{name}` is not part of this model"
            )));
        }
        let param = ParamId::parse(name)?;
        let value: f64 = record[3].parse().map_err(|_| parse_err("value", &record[3]))?;
        let (state, filled) = states
            .entry((chain, iteration))
            .or_insert_with(|| (ParameterState::zeros(&spec.league), 0));
        param.set(state, &spec, value)?;
        *filled += 1;
    }

    let mut draws = Vec::with_capacity(states.len());
    for ((chain, iteration), (state, filled)) in states {
        if filled != params.len() {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: 0,
                msg: format!(
                    "draw (chain {chain}, iteration {iteration}) has {filled} values, expected {}",
                    params.len()
                ),
            });
        }
        draws.push(Draw {
            chain,
            iteration,
            state,
        });
    }
    draws.sort_by_key(|d| (d.chain, d.iteration));

    let config = SamplerConfig {
        chains: meta.chains,
        iterations: meta.iterations,
        burn_in: meta.burn_in,
        thin: meta.thin,
        seed: meta.seed,
        updates: meta.updates,
        init: InitStrategy::Dispersed,
    };
    Ok((
        PosteriorDraws {
            draws,
            config,
            spec,
            slice_shrinkage: meta.slice_shrinkage,
        },
        meta.team_names,
        meta.city_names,
    ))
}
