use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::Args;
use saba_core::metrics::{average_ranks, hypervolume, mean_std, median, win_counts, NormalizationBounds};

use crate::error::{write, CliError, CliResult};
use crate::files::{load_front, Table};
use crate::svg;
use crate::Global;

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Run sets as LABEL=DIR (or DIR, labeled by its last component); each DIR is a solve --out.
    #[arg(required = true)]
    sets: Vec<String>,
}

type Fronts = Vec<Vec<(f64, f64)>>;

struct RunSet {
    label: String,
    /// instance name -> fronts of run_00, run_01, ...
    instances: BTreeMap<String, Fronts>,
}

fn parse_set(arg: &str) -> (String, PathBuf) {
    match arg.split_once('=') {
        Some((l, d)) => (l.to_string(), PathBuf::from(d)),
        None => {
            let p = PathBuf::from(arg);
            let label = p.file_name().map_or_else(|| arg.to_string(), |f| f.to_string_lossy().into_owned());
            (label, p)
        }
    }
}

fn sorted_dirs(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).map_err(|e| CliError::io(dir, e))? {
        let p = e.map_err(|e| CliError::io(dir, e))?.path();
        if p.is_dir() {
            out.push(p);
        }
    }
    out.sort();
    Ok(out)
}

fn load_set(label: String, dir: &Path) -> CliResult<RunSet> {
    let mut instances = BTreeMap::new();
    for inst_dir in sorted_dirs(dir)? {
        let runs: Vec<PathBuf> = sorted_dirs(&inst_dir)?
            .into_iter()
            .filter(|p| p.file_name().is_some_and(|f| f.to_string_lossy().starts_with("run_")))
            .collect();
        if runs.is_empty() {
            continue;
        }
        let mut fronts = Vec::with_capacity(runs.len());
        for r in &runs {
            fronts.push(load_front(r)?.into_iter().map(|row| (row.makespan_s, row.energy_kj)).collect());
        }
        let name = inst_dir.file_name().expect("read_dir entries have names").to_string_lossy().into_owned();
        instances.insert(name, fronts);
    }
    if instances.is_empty() {
        return Err(CliError::Config(format!("{}: no run directories found", dir.display())));
    }
    Ok(RunSet { label, instances })
}

pub fn run(g: &Global, a: &CompareArgs) -> CliResult<()> {
    let mut sets = Vec::new();
    for s in &a.sets {
        let (label, dir) = parse_set(s);
        if sets.iter().any(|x: &RunSet| x.label == label) {
            return Err(CliError::Config(format!("duplicate label {label:?}")));
        }
        sets.push(load_set(label, &dir)?);
    }
    let names: Vec<String> = sets[0].instances.keys().cloned().collect();
    for s in &sets[1..] {
        if !s.instances.keys().eq(names.iter()) {
            return Err(CliError::Config(format!(
                "instance names differ: {} has {:?}, {} has {:?}",
                sets[0].label,
                names,
                s.label,
                s.instances.keys().collect::<Vec<_>>()
            )));
        }
    }
    let labels: Vec<String> = sets.iter().map(|s| s.label.clone()).collect();

    let mut metrics = Table::new(&["instance", "label", "run", "hv_shared", "hv_run"]);
    let mut summary = Table::new(&["instance", "label", "runs", "mean_hv", "std_hv", "median_hv", "wins", "ties"]);
    let mut header = vec!["instance"];
    header.extend(labels.iter().map(String::as_str));
    let mut wins_table = Table::new(&header);
    let mut total_wins = vec![0usize; sets.len()];
    let mut rank_matrix = Vec::new();

    for name in &names {
        let runs: Vec<Fronts> = sets.iter().map(|s| s.instances[name].clone()).collect();
        let wc = win_counts(&runs).map_err(|e| CliError::Config(format!("{name}: {e}")))?;
        let bounds = NormalizationBounds::from_points(runs.iter().flatten().flatten().copied());
        let mut means = Vec::new();
        for (v, set_runs) in runs.iter().enumerate() {
            let shared: Vec<f64> = set_runs.iter().map(|f| hypervolume(f, &bounds)).collect();
            for (k, hv) in shared.iter().enumerate() {
                metrics.push(vec![name.clone(), labels[v].clone(), k.to_string(), hv.to_string(), wc.hv[v][k].to_string()]);
            }
            let (mean, std) = mean_std(&shared);
            summary.push(vec![
                name.clone(),
                labels[v].clone(),
                shared.len().to_string(),
                mean.to_string(),
                std.to_string(),
                median(&shared).to_string(),
                wc.wins[v].to_string(),
                wc.ties.to_string(),
            ]);
            means.push(mean);
            total_wins[v] += wc.wins[v];
        }
        let mut row = vec![name.clone()];
        row.extend(wc.wins.iter().map(usize::to_string));
        wins_table.push(row);
        rank_matrix.push(means);
    }
    let ranks = average_ranks(&rank_matrix).map_err(CliError::config)?;
    let mut rank_table = Table::new(&["label", "average_rank", "total_wins"]);
    for (v, l) in labels.iter().enumerate() {
        rank_table.push(vec![l.clone(), ranks[v].to_string(), total_wins[v].to_string()]);
    }

    metrics.save(&g.out, "metrics", g.format)?;
    summary.save(&g.out, "summary", g.format)?;
    wins_table.save(&g.out, "wins", g.format)?;
    rank_table.save(&g.out, "ranks", g.format)?;
    let values: Vec<f64> = total_wins.iter().map(|&w| w as f64).collect();
    write(&g.out.join("wins.svg"), svg::bar_chart("Win counts", &labels, &values, "wins"))?;
    print!("{}", summary.to_csv());
    print!("{}", rank_table.to_csv());
    Ok(())
}
