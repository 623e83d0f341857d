//! Flag groups and small helpers shared by the subcommands.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use parity_core::sampler::InitStrategy;
use parity_core::{
    CityMap, Error, HomeAdvantage, Link, LoadedLeague, ModelSpec, SamplerConfig, UpdateMask,
};

pub const PREDICTIONS_SCHEMA: &str = "predictions-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// League-wide home edge plus one offset per home city.
    #[value(alias = "iha")]
    PerCity,
    /// League-wide home edge only.
    #[value(alias = "cha")]
    Constant,
}

impl ModelArg {
    pub fn variant(self) -> HomeAdvantage {
        match self {
            ModelArg::PerCity => HomeAdvantage::PerCity,
            ModelArg::Constant => HomeAdvantage::Constant,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelArg::PerCity => "per-city",
            ModelArg::Constant => "constant",
        }
    }
}

pub fn model_str(variant: HomeAdvantage) -> &'static str {
    match variant {
        HomeAdvantage::PerCity => "per-city",
        HomeAdvantage::Constant => "constant",
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LinkArg {
    Logit,
    #[value(alias = "arcsin_sqrt")]
    ArcsinSqrt,
}

impl LinkArg {
    pub fn link(self) -> Link {
        match self {
            LinkArg::Logit => Link::Logit,
            LinkArg::ArcsinSqrt => Link::ArcsinSqrt,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LinkArg::Logit => "logit",
            LinkArg::ArcsinSqrt => "arcsin-sqrt",
        }
    }
}

/// Sampler flags with the documented defaults.
#[derive(Debug, Args)]
pub struct SamplerArgs {
    #[arg(long, value_enum, default_value = "per-city")]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value = "logit")]
    pub link: LinkArg,
    #[arg(long, default_value_t = 3)]
    pub chains: usize,
    #[arg(long, default_value_t = 40_000)]
    pub iterations: usize,
    #[arg(long = "burn-in", default_value_t = 4_000)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 5)]
    pub thin: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl SamplerArgs {
    pub fn config(&self) -> SamplerConfig {
        SamplerConfig {
            chains: self.chains,
            iterations: self.iterations,
            burn_in: self.burn_in,
            thin: self.thin,
            seed: self.seed,
            updates: UpdateMask::default(),
            init: InitStrategy::Dispersed,
        }
    }

    pub fn record(&self, manifest: &mut crate::manifest::RunManifest) {
        manifest.config_kv("model", self.model.as_str());
        manifest.config_kv("link", self.link.as_str());
        manifest.config_kv("chains", self.chains);
        manifest.config_kv("iterations", self.iterations);
        manifest.config_kv("burn_in", self.burn_in);
        manifest.config_kv("thin", self.thin);
    }
}

/// Where the games live and which league to pull out of the file.
#[derive(Debug, Args)]
pub struct LeagueArgs {
    /// Games CSV.
    #[arg(long)]
    pub games: PathBuf,
    /// Team-city registry CSV; teams host in their own city when omitted.
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// League identifier to select from the games file.
    #[arg(long)]
    pub league: String,
    /// Override the season count implied by the data.
    #[arg(long)]
    pub seasons: Option<usize>,
    /// Override the weeks-per-season count implied by the data.
    #[arg(long)]
    pub weeks: Option<usize>,
}

impl LeagueArgs {
    pub fn load(&self) -> anyhow::Result<LoadedLeague> {
        Ok(parity_core::load_league(
            &self.games,
            self.registry.as_deref(),
            &self.league,
            self.seasons,
            self.weeks,
        )?)
    }

    pub fn record(&self, manifest: &mut crate::manifest::RunManifest) -> anyhow::Result<()> {
        manifest.config_kv("league", &self.league);
        manifest.input(&self.games)?;
        if let Some(reg) = &self.registry {
            manifest.input(reg)?;
        }
        Ok(())
    }
}

/// Resolves every (season, team) home city through the league registry.
pub fn city_map(league: &LoadedLeague) -> anyhow::Result<CityMap> {
    let mut per_season = Vec::with_capacity(league.config.seasons);
    for season in 1..=league.config.seasons {
        let mut row = Vec::with_capacity(league.config.teams);
        for team in 1..=league.config.teams {
            let city = league.registry.city_for(team, season).ok_or_else(|| {
                Error::Index(format!("no home city for team {team} in season {season}"))
            })?;
            row.push(city);
        }
        per_season.push(row);
    }
    Ok(CityMap::new(per_season))
}

/// Creates `path` with a `#schema=` first line and a CSV writer after it.
pub fn csv_writer(path: &Path, schema: &str) -> anyhow::Result<csv::Writer<std::fs::File>> {
    use std::io::Write as _;
    let mut file = std::fs::File::create(path).map_err(Error::from)?;
    writeln!(file, "#schema={schema}").map_err(Error::from)?;
    Ok(csv::Writer::from_writer(file))
}

pub fn create_out_dir(out: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(out).map_err(Error::from)?;
    Ok(())
}

/// Distinct league identifiers in a games CSV, sorted.
pub fn distinct_leagues(path: &Path) -> anyhow::Result<Vec<String>> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.display().to_string(),
        line,
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(Error::from)?;
    let headers = reader.headers().map_err(Error::from)?.clone();
    let league_col = headers
        .iter()
        .position(|h| h == "league")
        .ok_or_else(|| parse_err(1, "missing `league` column".into()))?;
    let mut leagues = std::collections::BTreeSet::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(Error::from)?;
        let league = record
            .get(league_col)
            .ok_or_else(|| parse_err(i + 2, "row too short for `league` column".into()))?;
        leagues.insert(league.to_string());
    }
    if leagues.is_empty() {
        return Err(parse_err(2, "no game rows in file".into()).into());
    }
    Ok(leagues.into_iter().collect())
}

/// Index of a team name inside the league's name table, 1-based.
pub fn team_index(league: &LoadedLeague, name: &str) -> anyhow::Result<usize> {
    league
        .team_names
        .iter()
        .position(|n| n == name)
        .map(|i| i + 1)
        .ok_or_else(|| Error::Validation(format!("unknown team name `{name}`")).into())
}

pub fn two_sided_p(z: f64) -> f64 {
    2.0 * (1.0 - parity_core::stats::std_normal_cdf(z.abs()))
}

/// Builds the model spec used by fits from CLI flag values.
pub fn spec_from(model: ModelArg, link: LinkArg, league: &LoadedLeague) -> ModelSpec {
    ModelSpec::new(model.variant(), link.link(), league.config.clone())
}
