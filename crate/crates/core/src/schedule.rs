//! Canonical league data model: games, teams, cities, week indexing, and CSV
//! ingestion with franchise-relocation support.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::market::{self, MoneyLine};

/// First line of every games CSV this crate emits.
pub const GAMES_SCHEMA: &str = "#schema=games-v1";

const GAMES_HEADER: [&str; 11] = [
    "league",
    "season",
    "week",
    "home_team",
    "away_team",
    "home_city",
    "home_line",
    "away_line",
    "home_win",
    "home_score",
    "away_score",
];

const REGISTRY_HEADER: [&str; 5] = ["league", "team", "season_from", "season_to", "city"];

/// League dimensions; all indices derived from these are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeagueConfig {
    pub league_id: String,
    /// Team count t.
    pub teams: usize,
    /// Home-city count; at least `teams` because relocation adds cities.
    pub cities: usize,
    pub seasons: usize,
    /// Weeks per season; weeks with no games are legal.
    pub weeks: usize,
}

impl LeagueConfig {
    pub fn new(
        league_id: &str,
        teams: usize,
        cities: usize,
        seasons: usize,
        weeks: usize,
    ) -> Result<Self> {
        if teams < 2 {
            return Err(Error::TooFewTeams {
                need: 2,
                found: teams,
            });
        }
        if cities < teams {
            return Err(Error::Config(format!(
                "city count {cities} below team count {teams}"
            )));
        }
        if seasons == 0 || weeks == 0 {
            return Err(Error::Config(format!(
                "seasons ({seasons}) and weeks ({weeks}) must be positive"
            )));
        }
        Ok(Self {
            league_id: league_id.to_string(),
            teams,
            cities,
            seasons,
            weeks,
        })
    }
}

/// One regular-season game; optional fields mirror feed gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct GameRecord {
    pub season: usize,
    pub week: usize,
    pub home_team: usize,
    pub away_team: usize,
    pub home_city: usize,
    pub home_line: Option<MoneyLine>,
    pub away_line: Option<MoneyLine>,
    /// Normalized market probability, present exactly when both lines are.
    pub implied_p_home: Option<f64>,
    pub home_win: Option<bool>,
    pub home_score: Option<u32>,
    pub away_score: Option<u32>,
}

impl GameRecord {
    fn sort_key(&self) -> impl Ord {
        (
            self.season,
            self.week,
            self.home_team,
            self.away_team,
            self.home_city,
            self.home_line.map(MoneyLine::value),
            self.away_line.map(MoneyLine::value),
            self.home_win,
            self.home_score,
            self.away_score,
        )
    }
}

/// Per-team city spans; answers which city a team called home in a season.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CityRegistry {
    // team index → (season_from, season_to inclusive, city index)
    spans: BTreeMap<usize, Vec<(usize, usize, usize)>>,
}

impl CityRegistry {
    /// Registers a home-city span; spans for one team must not overlap.
    pub fn add_span(&mut self, team: usize, from: usize, to: usize, city: usize) -> Result<()> {
        self.insert(team, from, to, city)
    }

    fn insert(&mut self, team: usize, from: usize, to: usize, city: usize) -> Result<()> {
        let spans = self.spans.entry(team).or_default();
        for &(a, b, _) in spans.iter() {
            if from <= b && a <= to {
                return Err(Error::Validation(format!(
                    "team {team} has overlapping city spans {a}-{b} and {from}-{to}"
                )));
            }
        }
        spans.push((from, to, city));
        spans.sort_unstable();
        Ok(())
    }

    /// City index for a team in a season, if the registry covers it.
    pub fn city_for(&self, team: usize, season: usize) -> Option<usize> {
        self.spans.get(&team)?.iter().find_map(|&(a, b, city)| {
            (a..=b).contains(&season).then_some(city)
        })
    }
}

/// Fully validated league: dimensions, name tables, registry, and games.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedLeague {
    pub config: LeagueConfig,
    /// Name for team index i at position i-1.
    pub team_names: Vec<String>,
    /// Name for city index c at position c-1.
    pub city_names: Vec<String>,
    pub registry: CityRegistry,
    pub games: Vec<GameRecord>,
}

/// Games CSV row with names still unresolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RawGame {
    pub row: usize,
    pub season: usize,
    pub week: usize,
    pub home_team: String,
    pub away_team: String,
    pub home_city: String,
    pub home_line: Option<i32>,
    pub away_line: Option<i32>,
    pub home_win: Option<bool>,
    pub home_score: Option<u32>,
    pub away_score: Option<u32>,
}

/// City registry CSV row with names still unresolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRegistryRow {
    pub row: usize,
    pub team: String,
    pub season_from: usize,
    pub season_to: usize,
    pub city: String,
}

fn parse_field<T: std::str::FromStr>(
    path: &Path,
    row: usize,
    name: &str,
    value: &str,
) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: row,
        msg: format!("{name} `{value}`: {e}"),
    })
}

fn parse_optional<T: std::str::FromStr>(
    path: &Path,
    row: usize,
    name: &str,
    value: &str,
) -> Result<Option<T>>
where
    T::Err: std::fmt::Display,
{
    if value.is_empty() {
        Ok(None)
    } else {
        parse_field(path, row, name, value).map(Some)
    }
}

fn check_header(path: &Path, got: &csv::StringRecord, want: &[&str]) -> Result<()> {
    let got: Vec<&str> = got.iter().collect();
    if got != want {
        return Err(Error::Parse {
            path: path.display().to_string(),
            line: 1,
            msg: format!("header {got:?} does not match required columns {want:?}"),
        });
    }
    Ok(())
}

/// Reads the games CSV, keeping only rows for `league_id`.
pub fn read_games_csv(path: &Path, league_id: &str) -> Result<Vec<RawGame>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)?;
    check_header(path, reader.headers()?, &GAMES_HEADER)?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        // Data rows start after the header line.
        let row = i + 2;
        let home_win = match &record[8] {
            "" => None,
            "0" => Some(false),
            "1" => Some(true),
            other => {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: row,
                    msg: format!("home_win `{other}` not in {{0, 1, empty}}"),
                })
            }
        };
        if &record[0] != league_id {
            continue;
        }
        rows.push(RawGame {
            row,
            season: parse_field(path, row, "season", &record[1])?,
            week: parse_field(path, row, "week", &record[2])?,
            home_team: record[3].to_string(),
            away_team: record[4].to_string(),
            home_city: record[5].to_string(),
            home_line: parse_optional(path, row, "home_line", &record[6])?,
            away_line: parse_optional(path, row, "away_line", &record[7])?,
            home_win,
            home_score: parse_optional(path, row, "home_score", &record[9])?,
            away_score: parse_optional(path, row, "away_score", &record[10])?,
        });
    }
    Ok(rows)
}

/// Reads the city registry CSV, keeping only rows for `league_id`.
pub fn read_city_registry_csv(path: &Path, league_id: &str) -> Result<Vec<RawRegistryRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)?;
    check_header(path, reader.headers()?, &REGISTRY_HEADER)?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 2;
        if &record[0] != league_id {
            continue;
        }
        let season_from = parse_field(path, row, "season_from", &record[2])?;
        let season_to = parse_field(path, row, "season_to", &record[3])?;
        if season_from == 0 || season_from > season_to {
            return Err(Error::Validation(format!(
                "row {row}: span {season_from}-{season_to} is not a valid season range"
            )));
        }
        rows.push(RawRegistryRow {
            row,
            team: record[1].to_string(),
            season_from,
            season_to,
            city: record[4].to_string(),
        });
    }
    Ok(rows)
}

/// Resolves names to dense 1-based indices and validates every invariant.
///
/// With no registry rows, each team's city is inferred from its home
/// appearances; an explicit registry is required when teams share a city.
/// `seasons`/`weeks` overrides enlarge the grid beyond the observed maxima.
pub fn build_league(
    league_id: &str,
    raw_games: &[RawGame],
    registry_rows: &[RawRegistryRow],
    seasons: Option<usize>,
    weeks: Option<usize>,
) -> Result<LoadedLeague> {
    if raw_games.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no games found for league `{league_id}`"
        )));
    }

    let mut team_names: Vec<String> = raw_games
        .iter()
        .flat_map(|g| [g.home_team.clone(), g.away_team.clone()])
        .collect();
    team_names.sort_unstable();
    team_names.dedup();
    let team_index: BTreeMap<&str, usize> = team_names
        .iter()
        .enumerate()
        .map(|(i, name)| (name.as_str(), i + 1))
        .collect();

    let max_season = raw_games.iter().map(|g| g.season).max().unwrap_or(1);
    let max_week = raw_games.iter().map(|g| g.week).max().unwrap_or(1);
    let seasons = match seasons {
        Some(s) if s < max_season => {
            return Err(Error::Config(format!(
                "seasons override {s} below observed maximum {max_season}"
            )))
        }
        Some(s) => s,
        None => max_season,
    };
    let weeks = match weeks {
        Some(k) if k < max_week => {
            return Err(Error::Config(format!(
                "weeks override {k} below observed maximum {max_week}"
            )))
        }
        Some(k) => k,
        None => max_week,
    };
    for g in raw_games {
        if g.season == 0 || g.week == 0 {
            return Err(Error::Validation(format!(
                "row {}: season and week are 1-based, got ({}, {})",
                g.row, g.season, g.week
            )));
        }
    }

    let mut city_names: Vec<String>;
    let mut registry = CityRegistry::default();
    if registry_rows.is_empty() {
        // (team, season) → city name observed from home games.
        let mut observed: BTreeMap<(usize, usize), &str> = BTreeMap::new();
        for g in raw_games {
            let team = team_index[g.home_team.as_str()];
            match observed.entry((team, g.season)) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(&g.home_city);
                }
                std::collections::btree_map::Entry::Occupied(e) => {
                    if *e.get() != g.home_city {
                        return Err(Error::Validation(format!(
                            "row {}: team `{}` hosts in both `{}` and `{}` during season {}",
                            g.row, g.home_team, e.get(), g.home_city, g.season
                        )));
                    }
                }
            }
        }
        city_names = observed.values().map(|c| c.to_string()).collect();
        city_names.sort_unstable();
        city_names.dedup();
        let city_index: BTreeMap<&str, usize> = city_names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.as_str(), i + 1))
            .collect();
        for (&(team, season), &city) in &observed {
            registry.insert(team, season, season, city_index[city])?;
        }
    } else {
        city_names = registry_rows.iter().map(|r| r.city.clone()).collect();
        city_names.sort_unstable();
        city_names.dedup();
        let city_index: BTreeMap<&str, usize> = city_names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.as_str(), i + 1))
            .collect();
        for r in registry_rows {
            if let Some(&team) = team_index.get(r.team.as_str()) {
                registry
                    .insert(team, r.season_from, r.season_to, city_index[&r.city.as_str()])
                    .map_err(|e| Error::Validation(format!("row {}: {e}", r.row)))?;
            }
        }
    }

    let config = LeagueConfig::new(league_id, team_names.len(), city_names.len(), seasons, weeks)?;

    let mut games = Vec::with_capacity(raw_games.len());
    for g in raw_games {
        let home_team = team_index[g.home_team.as_str()];
        let away_team = team_index[g.away_team.as_str()];
        if home_team == away_team {
            return Err(Error::Validation(format!(
                "row {}: team `{}` cannot play itself",
                g.row, g.home_team
            )));
        }
        let expected_city = registry.city_for(home_team, g.season).ok_or_else(|| {
            Error::Validation(format!(
                "row {}: no registered city for team `{}` in season {}",
                g.row, g.home_team, g.season
            ))
        })?;
        let home_city = city_names
            .iter()
            .position(|c| *c == g.home_city)
            .map(|i| i + 1)
            .ok_or_else(|| {
                Error::Validation(format!(
                    "row {}: city `{}` not present in the registry",
                    g.row, g.home_city
                ))
            })?;
        if home_city != expected_city {
            return Err(Error::Validation(format!(
                "row {}: home city `{}` contradicts the registry entry `{}` for team `{}`",
                g.row,
                g.home_city,
                city_names[expected_city - 1],
                g.home_team
            )));
        }
        let home_line = g
            .home_line
            .map(MoneyLine::new)
            .transpose()
            .map_err(|e| Error::Validation(format!("row {}: home_line: {e}", g.row)))?;
        let away_line = g
            .away_line
            .map(MoneyLine::new)
            .transpose()
            .map_err(|e| Error::Validation(format!("row {}: away_line: {e}", g.row)))?;
        let implied_p_home = match (home_line, away_line) {
            (Some(h), Some(a)) => Some(market::implied_pair(h, a).p_home),
            _ => None,
        };
        games.push(GameRecord {
            season: g.season,
            week: g.week,
            home_team,
            away_team,
            home_city,
            home_line,
            away_line,
            implied_p_home,
            home_win: g.home_win,
            home_score: g.home_score,
            away_score: g.away_score,
        });
    }

    Ok(LoadedLeague {
        config,
        team_names,
        city_names,
        registry,
        games,
    })
}

/// Reads and validates a league from CSV files in one call.
pub fn load_league(
    games_path: &Path,
    registry_path: Option<&Path>,
    league_id: &str,
    seasons: Option<usize>,
    weeks: Option<usize>,
) -> Result<LoadedLeague> {
    let raw_games = read_games_csv(games_path, league_id)?;
    let registry_rows = match registry_path {
        Some(p) => read_city_registry_csv(p, league_id)?,
        None => Vec::new(),
    };
    build_league(league_id, &raw_games, &registry_rows, seasons, weeks)
}

/// Writes games back to CSV in the canonical column order.
pub fn write_games_csv(path: &Path, league: &LoadedLeague) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "{GAMES_SCHEMA}")?;
    let mut writer = csv::Writer::from_writer(file);
    writer.write_record(GAMES_HEADER)?;
    for g in &league.games {
        let int_opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
        writer.write_record([
            league.config.league_id.clone(),
            g.season.to_string(),
            g.week.to_string(),
            league.team_names[g.home_team - 1].clone(),
            league.team_names[g.away_team - 1].clone(),
            league.city_names[g.home_city - 1].clone(),
            g.home_line.map(|l| l.value().to_string()).unwrap_or_default(),
            g.away_line.map(|l| l.value().to_string()).unwrap_or_default(),
            g.home_win.map(|w| u8::from(w).to_string()).unwrap_or_default(),
            int_opt(g.home_score),
            int_opt(g.away_score),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Games partitioned by (season, week); input order never changes the result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeekSlices {
    seasons: usize,
    weeks: usize,
    // Row-major (season-1)*weeks + (week-1) → indices into the games slice.
    slices: Vec<Vec<usize>>,
}

impl WeekSlices {
    pub fn get(&self, season: usize, week: usize) -> &[usize] {
        &self.slices[(season - 1) * self.weeks + (week - 1)]
    }

    /// Iterates slices as (season, week, game indices) in grid order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &[usize])> {
        self.slices.iter().enumerate().map(|(i, idx)| {
            (i / self.weeks + 1, i % self.weeks + 1, idx.as_slice())
        })
    }

    pub fn total_games(&self) -> usize {
        self.slices.iter().map(Vec::len).sum()
    }
}

/// Buckets every game into its (season, week) slice.
///
/// Slice contents are ordered by game fields, not input position, so shuffled
/// inputs produce identical slices.
pub fn week_slices(games: &[GameRecord], config: &LeagueConfig) -> Result<WeekSlices> {
    let mut slices = vec![Vec::new(); config.seasons * config.weeks];
    for (i, g) in games.iter().enumerate() {
        if g.season == 0 || g.season > config.seasons || g.week == 0 || g.week > config.weeks {
            return Err(Error::Index(format!(
                "game {i} at (season {}, week {}) outside the {}x{} grid",
                g.season, g.week, config.seasons, config.weeks
            )));
        }
        slices[(g.season - 1) * config.weeks + (g.week - 1)].push(i);
    }
    for slice in &mut slices {
        slice.sort_by_key(|&i| games[i].sort_key());
    }
    Ok(WeekSlices {
        seasons: config.seasons,
        weeks: config.weeks,
        slices,
    })
}
