//! Running solution methods on instances and reporting the results.
//!
//! Every run yields a [`BenchRecord`]. Records go to CSV with the columns
//! `instance,method,seed,size,gamma,deviation_pct,elapsed_ms` and are reduced to
//! one [`MethodSummary`] per method (mean size and mean percent deviation from
//! `gamma`). Summaries are computed from records alone, so re-reading the CSV
//! reproduces them exactly.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Instance;
use crate::exact::{solve_exact, Budget};
use crate::gcn::{forward, GcnWeights};
use crate::heuristics::{construct, construct_from_maps, prune, Heuristic};
use crate::ig::{run_ig, IgConfig, IgMode};
use crate::{Error, Graph, Result, VertexSet};

pub const CSV_HEADER: [&str; 7] = [
    "instance",
    "method",
    "seed",
    "size",
    "gamma",
    "deviation_pct",
    "elapsed_ms",
];

pub const DEFAULT_RANDOM_SEEDS: [u64; 5] = [0, 1, 2, 3, 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Random,
    Greedy,
    Gcn,
    Ig,
    IgGcn,
    Exact,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Random,
        Method::Greedy,
        Method::Gcn,
        Method::Ig,
        Method::IgGcn,
        Method::Exact,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Random => "random",
            Method::Greedy => "greedy",
            Method::Gcn => "gcn",
            Method::Ig => "ig",
            Method::IgGcn => "ig-gcn",
            Method::Exact => "exact",
        }
    }

    pub fn needs_weights(self) -> bool {
        matches!(self, Method::Gcn | Method::IgGcn)
    }

    pub fn is_ig(self) -> bool {
        matches!(self, Method::Ig | Method::IgGcn)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown method {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub instance: String,
    pub method: Method,
    pub seed: Option<u64>,
    pub size: usize,
    pub gamma: Option<usize>,
    /// `100 * (size - gamma) / gamma`.
    pub deviation_pct: Option<f64>,
    pub elapsed_ms: f64,
}

impl BenchRecord {
    pub fn new(
        instance: impl Into<String>,
        method: Method,
        seed: Option<u64>,
        size: usize,
        gamma: Option<usize>,
        elapsed: Duration,
    ) -> Self {
        BenchRecord {
            instance: instance.into(),
            method,
            seed,
            size,
            gamma,
            deviation_pct: gamma.map(|g| deviation_pct(size, g)),
            elapsed_ms: elapsed.as_secs_f64() * 1e3,
        }
    }
}

pub fn deviation_pct(size: usize, gamma: usize) -> f64 {
    if gamma == 0 {
        return 0.0;
    }
    100.0 * (size as f64 - gamma as f64) / gamma as f64
}

/// Per-method knobs shared by every instance in a run.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// IG parameters; `mode` is overridden per method and `seed` by `ig_seed`.
    pub ig: IgConfig,
    pub ig_seed: u64,
    pub weights: Option<GcnWeights>,
    pub exact_budget: Budget,
    pub random_seeds: Vec<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            ig: IgConfig::default(),
            ig_seed: 0,
            weights: None,
            exact_budget: Budget::unlimited(),
            random_seeds: DEFAULT_RANDOM_SEEDS.to_vec(),
        }
    }
}

fn need_weights(opts: &SolveOptions, method: Method) -> Result<&GcnWeights> {
    opts.weights
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter(format!("method {method} requires GCN weights")))
}

/// Solution of one method run; `None` seed for deterministic methods.
pub fn solve_with(g: &Graph, method: Method, seed: Option<u64>, opts: &SolveOptions) -> Result<VertexSet> {
    let pruned = |s: VertexSet| prune(g, &s).expect("constructions dominate");
    Ok(match method {
        Method::Random => pruned(construct(g, Heuristic::Random { seed: seed.unwrap_or(0) })),
        Method::Greedy => pruned(construct(g, Heuristic::Greedy)),
        Method::Gcn => {
            let maps = forward(g, need_weights(opts, method)?);
            construct_from_maps(g, &maps)?
        }
        Method::Ig => {
            let cfg = IgConfig {
                mode: IgMode::Classic,
                seed: seed.unwrap_or(opts.ig_seed),
                ..opts.ig
            };
            run_ig(g, &cfg, None)?.0
        }
        Method::IgGcn => {
            let maps = forward(g, need_weights(opts, method)?);
            let cfg = IgConfig {
                mode: IgMode::GcnCycling,
                seed: seed.unwrap_or(opts.ig_seed),
                ..opts.ig
            };
            run_ig(g, &cfg, Some(&maps))?.0
        }
        Method::Exact => solve_exact(g, opts.exact_budget)?.solution,
    })
}

/// Runs `method` on one instance; the random method yields one record per seed.
pub fn run_method(inst: &Instance, method: Method, opts: &SolveOptions) -> Result<Vec<BenchRecord>> {
    let seeds: Vec<Option<u64>> = match method {
        Method::Random => opts.random_seeds.iter().copied().map(Some).collect(),
        Method::Ig | Method::IgGcn => vec![Some(opts.ig_seed)],
        _ => vec![None],
    };
    seeds
        .into_iter()
        .map(|seed| {
            let start = Instant::now();
            let s = solve_with(&inst.graph, method, seed, opts)?;
            let elapsed = start.elapsed();
            if let Some(gamma) = inst.gamma {
                if s.len() < gamma {
                    return Err(Error::InvalidInstance {
                        instance: inst.id.clone(),
                        message: format!("{method} found {} < stored gamma {gamma}", s.len()),
                    });
                }
            }
            Ok(BenchRecord::new(&inst.id, method, seed, s.len(), inst.gamma, elapsed))
        })
        .collect()
}

#[derive(Debug)]
pub struct BenchFailure {
    pub instance: String,
    pub method: Method,
    pub error: Error,
}

/// Runs every method on every instance. Failures are collected per
/// (instance, method) and do not stop the run; records are ordered by instance
/// then by method order in `methods`.
pub fn run_bench(
    instances: &[Instance],
    methods: &[Method],
    opts: &SolveOptions,
) -> (Vec<BenchRecord>, Vec<BenchFailure>) {
    let per_instance: Vec<Vec<std::result::Result<Vec<BenchRecord>, BenchFailure>>> = instances
        .par_iter()
        .map(|inst| {
            methods
                .iter()
                .map(|&m| {
                    run_method(inst, m, opts).map_err(|error| BenchFailure {
                        instance: inst.id.clone(),
                        method: m,
                        error,
                    })
                })
                .collect()
        })
        .collect();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for res in per_instance.into_iter().flatten() {
        match res {
            Ok(r) => records.extend(r),
            Err(f) => failures.push(f),
        }
    }
    (records, failures)
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(String::new, ToString::to_string)
}

pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.instance.clone(),
            r.method.to_string(),
            opt(&r.seed),
            r.size.to_string(),
            opt(&r.gamma),
            opt(&r.deviation_pct),
            r.elapsed_ms.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<BenchRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("unexpected CSV header {headers:?}"),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let line = i + 2;
        let bad = |field: &str| Error::Parse {
            line,
            message: format!("bad {field} value"),
        };
        let parse_opt = |idx: usize, name: &str| -> Result<Option<String>> {
            let s = row.get(idx).ok_or_else(|| bad(name))?;
            Ok((!s.is_empty()).then(|| s.to_string()))
        };
        out.push(BenchRecord {
            instance: row.get(0).ok_or_else(|| bad("instance"))?.to_string(),
            method: row.get(1).ok_or_else(|| bad("method"))?.parse()?,
            seed: parse_opt(2, "seed")?.map(|s| s.parse()).transpose().map_err(|_| bad("seed"))?,
            size: row.get(3).ok_or_else(|| bad("size"))?.parse().map_err(|_| bad("size"))?,
            gamma: parse_opt(4, "gamma")?.map(|s| s.parse()).transpose().map_err(|_| bad("gamma"))?,
            deviation_pct: parse_opt(5, "deviation_pct")?
                .map(|s| s.parse())
                .transpose()
                .map_err(|_| bad("deviation_pct"))?,
            elapsed_ms: row
                .get(6)
                .ok_or_else(|| bad("elapsed_ms"))?
                .parse()
                .map_err(|_| bad("elapsed_ms"))?,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub runs: usize,
    pub mean_size: f64,
    /// Mean over runs with a known `gamma`.
    pub mean_deviation_pct: Option<f64>,
    pub mean_elapsed_ms: f64,
}

/// One summary per method present, in [`Method::ALL`] order.
pub fn summarize(records: &[BenchRecord]) -> Vec<MethodSummary> {
    Method::ALL
        .into_iter()
        .filter_map(|method| {
            let rs: Vec<&BenchRecord> = records.iter().filter(|r| r.method == method).collect();
            if rs.is_empty() {
                return None;
            }
            let devs: Vec<f64> = rs.iter().filter_map(|r| r.deviation_pct).collect();
            let k = rs.len() as f64;
            Some(MethodSummary {
                method,
                runs: rs.len(),
                mean_size: rs.iter().map(|r| r.size as f64).sum::<f64>() / k,
                mean_deviation_pct: (!devs.is_empty())
                    .then(|| devs.iter().sum::<f64>() / devs.len() as f64),
                mean_elapsed_ms: rs.iter().map(|r| r.elapsed_ms).sum::<f64>() / k,
            })
        })
        .collect()
}

/// Fixed-width table in the "mean size (mean deviation %)" layout.
pub fn format_summary(summary: &[MethodSummary]) -> String {
    let mut out = format!(
        "{:<8} {:>6} {:>12} {:>14} {:>12}\n",
        "method", "runs", "mean_size", "deviation_pct", "elapsed_ms"
    );
    for s in summary {
        let dev = s.mean_deviation_pct.map_or_else(|| "-".to_string(), |d| format!("{d:.2}"));
        out.push_str(&format!(
            "{:<8} {:>6} {:>12.3} {:>14} {:>12.2}\n",
            s.method.as_str(),
            s.runs,
            s.mean_size,
            dev,
            s.mean_elapsed_ms
        ));
    }
    out
}
