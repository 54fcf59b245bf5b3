use std::path::Path;

use rayon::prelude::*;
use seqflow::solver::{check_solution, solve, Limits, SolveStatus};
use serde::Serialize;

use crate::config::{BenchConfig, BenchKind, Cell, PropId};
use crate::instance::{generate_instance, instance_seed, mix, Instance};
use crate::BenchError;

/// Outcome of one solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunRecord {
    pub status: SolveStatus,
    pub backtracks: u64,
    pub nodes: u64,
    pub time_ms: f64,
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellResult {
    pub bench: BenchKind,
    pub n: usize,
    pub k: usize,
    pub delta: usize,
    pub m: usize,
    pub prop: PropId,
    pub seed: u64,
    pub solved: usize,
    pub total: usize,
    /// Means over solved instances; empty when none was solved.
    pub avg_time_ms: Option<f64>,
    pub avg_backtracks: Option<f64>,
}

fn instance_path(dir: &Path, config: &BenchConfig, cell: Cell, index: usize) -> std::path::PathBuf {
    dir.join(format!(
        "{}-n{}-k{}-d{}-m{}-s{}-{index}.txt",
        config.bench, cell.n, cell.k, cell.delta, config.m, config.seed
    ))
}

/// The instance from `--instances-dir` if present there, otherwise a fresh
/// one, which is then written to that directory.
pub fn load_or_generate(
    config: &BenchConfig,
    cell: Cell,
    index: usize,
) -> Result<Instance, BenchError> {
    let Some(dir) = &config.instances_dir else {
        return generate_instance(config, cell, index);
    };
    let path = instance_path(dir, config, cell, index);
    if path.exists() {
        return Instance::read(&path);
    }
    let inst = generate_instance(config, cell, index)?;
    inst.write(&path)?;
    Ok(inst)
}

/// Solves one instance. A returned solution is re-checked against the model.
pub fn run_instance(
    config: &BenchConfig,
    cell: Cell,
    index: usize,
) -> Result<RunRecord, BenchError> {
    let inst = load_or_generate(config, cell, index)?;
    let model = inst.to_model(config.prop)?;
    let limits = Limits {
        max_nodes: None,
        timeout: Some(config.timeout),
    };
    let r = solve(&model, mix(instance_seed(config, cell, index)), &limits);
    if let Some(s) = &r.solution {
        if !check_solution(&model, s) {
            return Err(BenchError::InvalidSolution {
                n: cell.n,
                k: cell.k,
                delta: cell.delta,
                index,
            });
        }
    }
    Ok(RunRecord {
        status: r.stats.status,
        backtracks: r.stats.backtracks,
        nodes: r.stats.nodes,
        time_ms: r.stats.elapsed.as_secs_f64() * 1000.0,
    })
}

/// Every instance of one cell, solved in parallel and returned in index order.
pub fn run_cell(config: &BenchConfig, cell: Cell) -> Result<Vec<RunRecord>, BenchError> {
    if let Some(dir) = &config.instances_dir {
        std::fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    (0..config.per_cell)
        .into_par_iter()
        .map(|i| run_instance(config, cell, i))
        .collect()
}

pub fn summarize(config: &BenchConfig, cell: Cell, runs: &[RunRecord]) -> CellResult {
    let solved: Vec<_> = runs
        .iter()
        .filter(|r| r.status == SolveStatus::Sat)
        .collect();
    let mean = |f: &dyn Fn(&RunRecord) -> f64| {
        (!solved.is_empty()).then(|| solved.iter().map(|r| f(r)).sum::<f64>() / solved.len() as f64)
    };
    CellResult {
        bench: config.bench,
        n: cell.n,
        k: cell.k,
        delta: cell.delta,
        m: config.m,
        prop: config.prop,
        seed: config.seed,
        solved: solved.len(),
        total: runs.len(),
        avg_time_ms: mean(&|r| r.time_ms),
        avg_backtracks: mean(&|r| r.backtracks as f64),
    }
}

pub fn run_bench(config: &BenchConfig) -> Result<Vec<CellResult>, BenchError> {
    config.validate()?;
    config
        .cells()
        .into_iter()
        .map(|cell| Ok(summarize(config, cell, &run_cell(config, cell)?)))
        .collect()
}

pub fn write_csv(rows: &[CellResult], path: &Path) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| BenchError::csv(path, e))?;
    if rows.is_empty() {
        w.write_record([
            "bench",
            "n",
            "k",
            "delta",
            "m",
            "prop",
            "seed",
            "solved",
            "total",
            "avg_time_ms",
            "avg_backtracks",
        ])
        .map_err(|e| BenchError::csv(path, e))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| BenchError::csv(path, e))?;
    }
    w.flush().map_err(|e| BenchError::io(path, e))
}

/// Right-aligned plain-text table.
pub fn format_table(rows: &[CellResult]) -> String {
    let header = [
        "bench", "n", "k", "delta", "m", "prop", "solved", "avg ms", "avg bt",
    ];
    let opt =
        |v: Option<f64>, digits: usize| v.map_or("-".to_string(), |x| format!("{x:.digits$}"));
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.bench.to_string(),
                r.n.to_string(),
                r.k.to_string(),
                r.delta.to_string(),
                r.m.to_string(),
                r.prop.to_string(),
                format!("{}/{}", r.solved, r.total),
                opt(r.avg_time_ms, 2),
                opt(r.avg_backtracks, 1),
            ]
        })
        .collect();
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &body {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: Vec<String>| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let mut out = line(header.iter().map(|s| s.to_string()).collect());
    out.push('\n');
    for row in body {
        out.push_str(&line(row));
        out.push('\n');
    }
    out
}
