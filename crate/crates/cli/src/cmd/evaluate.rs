//! `evaluate`: scores stored predictions against outcomes and reports the
//! predictability of future win percentage by game number.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::path::PathBuf;

use clap::Args as ClapArgs;
use parity_core::{
    auc, auc_null_se, brier, future_win_r2, import_draws, load_league, Error, LoadedLeague,
    TeamGameObs, TeamSeasonSeries,
};

use crate::common::{create_out_dir, csv_writer, team_index, two_sided_p, PREDICTIONS_SCHEMA};
use crate::manifest::RunManifest;

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Predictions CSV produced by `sequential`.
    #[arg(long)]
    pub predictions: PathBuf,
    /// Games CSV with outcomes.
    #[arg(long)]
    pub games: PathBuf,
    /// Team-city registry CSV; teams host in their own city when omitted.
    #[arg(long)]
    pub registry: Option<PathBuf>,
    /// League identifier; defaults to the one league in the predictions file.
    #[arg(long)]
    pub league: Option<String>,
    /// Cumulative draws CSV supplying strength estimates for the
    /// per-game-number regressions.
    #[arg(long)]
    pub draws: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

struct PredictionRow {
    league: String,
    season: usize,
    week: usize,
    home_team: String,
    away_team: String,
    p_home: f64,
}

fn read_predictions(path: &PathBuf) -> anyhow::Result<Vec<PredictionRow>> {
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: path.display().to_string(),
        line,
        msg,
    };
    let file = std::fs::File::open(path).map_err(Error::from)?;
    let mut first = String::new();
    std::io::BufReader::new(&file)
        .read_line(&mut first)
        .map_err(Error::from)?;
    let expected = format!("#schema={PREDICTIONS_SCHEMA}");
    if first.trim_end() != expected {
        return Err(Error::SchemaVersion(format!(
            "{} does not declare `{expected}`",
            path.display()
        ))
        .into());
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(Error::from)?;
    let headers = reader.headers().map_err(Error::from)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(2, format!("missing `{name}` column")))
    };
    let (c_league, c_season, c_week) = (col("league")?, col("season")?, col("week")?);
    let (c_home, c_away, c_p) = (col("home_team")?, col("away_team")?, col("p_home")?);

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(Error::from)?;
        let line = i + 3;
        let field = |c: usize| {
            record
                .get(c)
                .ok_or_else(|| parse_err(line, "row too short".into()))
        };
        let number = |c: usize, name: &str| -> Result<usize, Error> {
            field(c)?
                .parse()
                .map_err(|_| parse_err(line, format!("bad `{name}` value")))
        };
        let p_home: f64 = field(c_p)?
            .parse()
            .map_err(|_| parse_err(line, "bad `p_home` value".into()))?;
        rows.push(PredictionRow {
            league: field(c_league)?.to_string(),
            season: number(c_season, "season")?,
            week: number(c_week, "week")?,
            home_team: field(c_home)?.to_string(),
            away_team: field(c_away)?.to_string(),
            p_home,
        });
    }
    if rows.is_empty() {
        return Err(parse_err(3, "no prediction rows".into()).into());
    }
    Ok(rows)
}

/// Per-team ordered game observations for the future-win regressions.
fn team_series(league: &LoadedLeague, theta: Option<&StrengthLookup>) -> Vec<TeamSeasonSeries> {
    let mut series: BTreeMap<(usize, usize), Vec<TeamGameObs>> = BTreeMap::new();
    for game in &league.games {
        let (Some(hs), Some(as_)) = (game.home_score, game.away_score) else {
            continue;
        };
        let diff = hs as f64 - as_ as f64;
        let won_home = match hs.cmp(&as_) {
            std::cmp::Ordering::Greater => Some(true),
            std::cmp::Ordering::Less => Some(false),
            std::cmp::Ordering::Equal => None,
        };
        for (team, won, point_diff) in [
            (game.home_team, won_home, diff),
            (game.away_team, won_home.map(|w| !w), -diff),
        ] {
            let theta_val = theta
                .map(|t| t.at(game.season, game.week, team))
                .unwrap_or(0.0);
            series
                .entry((game.season, team))
                .or_default()
                .push(TeamGameObs {
                    won,
                    point_diff,
                    theta: theta_val,
                });
        }
    }
    series
        .into_iter()
        .map(|((season, team), games)| TeamSeasonSeries {
            season,
            team,
            games,
        })
        .collect()
}

struct StrengthLookup {
    state: parity_core::ParameterState,
    spec: parity_core::ModelSpec,
}

impl StrengthLookup {
    fn at(&self, season: usize, week: usize, team: usize) -> f64 {
        self.state.theta_at(&self.spec, season, week, team)
    }
}

pub fn run(args: Args) -> anyhow::Result<u8> {
    create_out_dir(&args.out)?;
    let rows = read_predictions(&args.predictions)?;
    let league_id = match &args.league {
        Some(id) => id.clone(),
        None => {
            let ids: std::collections::BTreeSet<&str> =
                rows.iter().map(|r| r.league.as_str()).collect();
            if ids.len() != 1 {
                return Err(Error::Validation(format!(
                    "predictions span {} leagues; pass --league",
                    ids.len()
                ))
                .into());
            }
            ids.into_iter().next().unwrap().to_string()
        }
    };
    let league = load_league(
        &args.games,
        args.registry.as_deref(),
        &league_id,
        None,
        None,
    )?;

    let mut manifest = RunManifest::new("evaluate", 0);
    manifest.input(&args.predictions)?;
    manifest.input(&args.games)?;
    if let Some(reg) = &args.registry {
        manifest.input(reg)?;
    }
    manifest.config_kv("league", &league_id);

    let thetas = match &args.draws {
        Some(path) => {
            manifest.input(path)?;
            manifest.input(&parity_core::sampler::io::meta_path(path))?;
            let (draws, _, _) = import_draws(path)?;
            let state = draws.mean_state()?;
            Some(StrengthLookup {
                state,
                spec: draws.spec,
            })
        }
        None => None,
    };

    let mut by_key: BTreeMap<(usize, usize, usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, game) in league.games.iter().enumerate() {
        by_key
            .entry((game.season, game.week, game.home_team, game.away_team))
            .or_default()
            .push(i);
    }

    let mut model_p = Vec::new();
    let mut outcomes = Vec::new();
    let mut market_p = Vec::new();
    let mut market_outcomes = Vec::new();
    let mut unmatched = 0usize;
    let mut undecided = 0usize;
    for row in &rows {
        let home = team_index(&league, &row.home_team)?;
        let away = team_index(&league, &row.away_team)?;
        let Some(indices) = by_key.get_mut(&(row.season, row.week, home, away)) else {
            unmatched += 1;
            continue;
        };
        if indices.is_empty() {
            unmatched += 1;
            continue;
        }
        let game = &league.games[indices.remove(0)];
        let Some(won) = game.home_win else {
            undecided += 1;
            continue;
        };
        model_p.push(row.p_home);
        outcomes.push(won);
        if let Some(implied) = game.implied_p_home {
            market_p.push(implied);
            market_outcomes.push(won);
        }
    }
    if unmatched > 0 || undecided > 0 {
        log::warn!("{unmatched} predictions had no matching game, {undecided} matched games had no recorded outcome");
    }

    let mut metrics = csv_writer(&args.out.join("metrics.csv"), "metrics-v1")?;
    metrics.write_record(["metric", "source", "value", "p_value"])?;
    let mut emit = |metric: &str, source: &str, value: f64, p: f64| {
        metrics.write_record([
            metric.to_string(),
            source.to_string(),
            format!("{value}"),
            format!("{p}"),
        ])
    };

    let mut summaries = Vec::new();
    for (source, ps, ys) in [
        ("model", &model_p, &outcomes),
        ("market", &market_p, &market_outcomes),
    ] {
        if ps.is_empty() {
            log::warn!("no scored games for source `{source}`, skipping its metrics");
            continue;
        }
        let n_pos = ys.iter().filter(|&&y| y).count();
        let n_neg = ys.len() - n_pos;
        let auc_value = auc(ps, ys)?;
        let auc_p = two_sided_p((auc_value - 0.5) / auc_null_se(n_pos, n_neg));
        emit("auc", source, auc_value, auc_p)?;
        let brier_result = brier(ps, ys)?;
        emit("brier", source, brier_result.score, brier_result.p_value)?;
        summaries.push(format!(
            "{source}: n={} auc={auc_value:.4} (p={auc_p:.4}) brier={:.4} (p={:.4})",
            ps.len(),
            brier_result.score,
            brier_result.p_value
        ));
    }
    metrics.flush()?;
    manifest.output("metrics.csv");

    let mut future_win = csv_writer(&args.out.join("future_win.csv"), "future-win-r2-v1")?;
    future_win.write_record(["game_number", "predictor", "r2"])?;
    match future_win_r2(&team_series(&league, thetas.as_ref())) {
        Ok(points) => {
            for point in points {
                future_win.write_record([
                    point.game_number.to_string(),
                    point.predictor.as_str().to_string(),
                    format!("{}", point.r2),
                ])?;
            }
        }
        Err(Error::InsufficientTeams(msg)) => {
            log::warn!("future-win regression skipped: {msg}");
        }
        Err(e) => return Err(e.into()),
    }
    future_win.flush()?;
    manifest.output("future_win.csv");
    manifest.write(&args.out)?;

    for line in &summaries {
        println!("{line}");
    }
    Ok(0)
}
