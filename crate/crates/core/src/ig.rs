//! Iterated greedy search for small dominating sets.
//!
//! ```text
//! S* = LocalImprovement(InitialSolution(G))
//! while no-improvement counter < delta_max and time remains:
//!     S' = LocalImprovement(Reconstruction(RandomDestruction(S*, beta)))
//!     if |S'| < |S*| { S* = S'; counter = 0 } else { counter += 1 }
//! ```
//!
//! In classic mode construction and reconstruction use the greedy score. In
//! GCN-cycling mode the initial solution uses map 0 and iteration `t` (1-based)
//! reconstructs with map `(t - 1) mod m`.

use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gcn::ProbabilityMaps;
use crate::graph::Coverage;
use crate::heuristics::{construct, prune_with, Heuristic};
use crate::{Error, Graph, Result, VertexSet};

pub use crate::heuristics::reconstruct as reconstruction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IgMode {
    Classic,
    GcnCycling,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IgConfig {
    /// Fraction of the incumbent destroyed per iteration, in `(0, 1)`.
    pub beta: f64,
    /// Iterations without improvement before stopping.
    pub delta_max: usize,
    pub time_limit: Duration,
    pub seed: u64,
    pub mode: IgMode,
}

impl Default for IgConfig {
    fn default() -> Self {
        IgConfig {
            beta: 0.2,
            delta_max: 200,
            time_limit: Duration::from_secs(10),
            seed: 0,
            mode: IgMode::Classic,
        }
    }
}

impl IgConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::InvalidParameter(format!("beta {} outside (0, 1)", self.beta)));
        }
        if self.delta_max == 0 {
            return Err(Error::InvalidParameter("delta_max must be at least 1".into()));
        }
        if self.time_limit.is_zero() {
            return Err(Error::InvalidParameter("time limit must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub size: usize,
    pub elapsed: Duration,
}

/// Incumbent history: the initial solution and every accepted improvement.
#[derive(Clone, Debug)]
pub struct IgTrace {
    pub points: Vec<TracePoint>,
    /// Iterations executed after the initial solution.
    pub iterations: usize,
    pub final_set: VertexSet,
    pub timed_out: bool,
}

impl IgTrace {
    pub fn initial_size(&self) -> usize {
        self.points[0].size
    }

    pub fn is_non_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].size <= w[0].size)
    }
}

/// Number of members removed by destruction: `ceil(beta * |s|)`, at least one.
pub fn destruction_count(len: usize, beta: f64) -> usize {
    if len == 0 {
        return 0;
    }
    // Slack absorbs products like 0.7 * 10 = 7.000000000000001.
    let raw = (beta * len as f64 - 1e-9).ceil();
    (raw.max(1.0) as usize).min(len)
}

/// Removes `ceil(beta * |s|)` members chosen uniformly; survivors keep their order.
pub fn random_destruction<R: Rng + ?Sized>(s: &VertexSet, beta: f64, rng: &mut R) -> VertexSet {
    let remove = destruction_count(s.len(), beta);
    let mut drop = vec![false; s.len()];
    for i in sample(rng, s.len(), remove) {
        drop[i] = true;
    }
    let mut out = VertexSet::new(s.universe());
    for (i, v) in s.iter().enumerate() {
        if !drop[i] {
            out.insert(v);
        }
    }
    out
}

/// Prune, then apply 2-for-1 exchanges until none applies.
///
/// An exchange replaces two members `u < v` by one outside vertex `w` (lowest id
/// first) such that the set still dominates. Pairs are scanned in ascending id
/// order; after each accepted exchange the set is pruned again and the scan
/// restarts.
pub fn local_improvement(g: &Graph, s: &VertexSet) -> Result<VertexSet> {
    let mut cov = Coverage::of(g, s);
    if !cov.is_complete() {
        return Err(Error::NotDominating);
    }
    let mut current = prune_with(g, s, &mut cov);
    let mut lost = Vec::new();
    'scan: loop {
        let members = current.sorted();
        for (i, &u) in members.iter().enumerate() {
            for &v in &members[i + 1..] {
                // Vertices that only u and v dominate.
                lost.clear();
                for x in g.closed_neighbors(u).chain(g.closed_neighbors(v)) {
                    let hits = u32::from(x == u || g.has_edge(x, u))
                        + u32::from(x == v || g.has_edge(x, v));
                    if cov.count(x) == hits && !lost.contains(&x) {
                        lost.push(x);
                    }
                }
                let Some(&anchor) = lost.first() else {
                    continue;
                };
                let mut options: Vec<usize> =
                    g.closed_neighbors(anchor).filter(|&w| !current.contains(w)).collect();
                options.sort_unstable();
                let found = options.into_iter().find(|&w| {
                    lost.iter().all(|&x| x == w || g.has_edge(x, w))
                });
                if let Some(w) = found {
                    current.remove(u);
                    current.remove(v);
                    cov.remove(g, u);
                    cov.remove(g, v);
                    current.insert(w);
                    cov.add(g, w);
                    debug_assert!(cov.is_complete());
                    current = prune_with(g, &current, &mut cov);
                    continue 'scan;
                }
            }
        }
        return Ok(current);
    }
}

fn heuristic_for<'a>(cfg: &IgConfig, maps: Option<&'a ProbabilityMaps>, iteration: usize) -> Heuristic<'a> {
    match (cfg.mode, maps) {
        (IgMode::GcnCycling, Some(maps)) => {
            let index = iteration.saturating_sub(1) % maps.num_maps();
            Heuristic::from_map(maps, index)
        }
        _ => Heuristic::Greedy,
    }
}

pub fn run_ig(g: &Graph, cfg: &IgConfig, maps: Option<&ProbabilityMaps>) -> Result<(VertexSet, IgTrace)> {
    cfg.validate()?;
    if cfg.mode == IgMode::GcnCycling {
        let maps = maps.ok_or(Error::MissingMaps)?;
        if maps.num_vertices() != g.n() {
            return Err(Error::DimensionMismatch {
                expected: g.n(),
                found: maps.num_vertices(),
            });
        }
        if maps.num_maps() == 0 {
            return Err(Error::MissingMaps);
        }
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let initial = construct(g, heuristic_for(cfg, maps, 0));
    let mut best = local_improvement(g, &initial).expect("construction dominates");
    let mut points = vec![TracePoint {
        iteration: 0,
        size: best.len(),
        elapsed: start.elapsed(),
    }];

    let mut stale = 0;
    let mut iteration = 0;
    let mut timed_out = false;
    while stale < cfg.delta_max {
        if start.elapsed() >= cfg.time_limit {
            timed_out = true;
            break;
        }
        iteration += 1;
        let destroyed = random_destruction(&best, cfg.beta, &mut rng);
        let rebuilt = reconstruction(g, &destroyed, heuristic_for(cfg, maps, iteration));
        let candidate = local_improvement(g, &rebuilt).expect("reconstruction dominates");
        if candidate.len() < best.len() {
            best = candidate;
            stale = 0;
            points.push(TracePoint {
                iteration,
                size: best.len(),
                elapsed: start.elapsed(),
            });
        } else {
            stale += 1;
        }
    }
    let trace = IgTrace {
        points,
        iterations: iteration,
        final_set: best.clone(),
        timed_out,
    };
    Ok((best, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{is_dominating, prune};

    fn set(n: usize, ids: &[usize]) -> VertexSet {
        VertexSet::from_slice(n, ids).unwrap()
    }

    #[test]
    fn destruction_counts_use_ceiling() {
        assert_eq!(destruction_count(10, 0.2), 2);
        assert_eq!(destruction_count(1, 0.2), 1);
        assert_eq!(destruction_count(7, 0.2), 2);
        assert_eq!(destruction_count(10, 0.7), 7);
        assert_eq!(destruction_count(0, 0.2), 0);
    }

    #[test]
    fn destruction_removes_members_only() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = set(20, &[3, 9, 1, 14, 7, 0, 12, 19, 5, 2]);
        let d = random_destruction(&s, 0.2, &mut rng);
        assert_eq!(d.len(), 8);
        assert!(d.is_subset(&s));
        let single = random_destruction(&set(5, &[2]), 0.2, &mut rng);
        assert!(single.is_empty());
    }

    #[test]
    fn local_improvement_cases() {
        let k4 = Graph::complete(4);
        assert_eq!(local_improvement(&k4, &set(4, &[0, 1])).unwrap().len(), 1);
        let c6 = Graph::cycle(6);
        assert_eq!(local_improvement(&c6, &set(6, &[0, 1, 3])).unwrap().sorted(), vec![0, 3]);
        let minimal = set(6, &[0, 3]);
        assert_eq!(local_improvement(&c6, &minimal).unwrap(), minimal);
        assert!(local_improvement(&c6, &set(6, &[0])).is_err());
    }

    #[test]
    fn exchange_replaces_two_by_one() {
        // Path 0-1-2-3-4 with {0, 2, 4} minimal, but {1, 3} is smaller.
        // Dropping {0, 2} uncovers {0, 1, 2}; vertex 1 covers all three, giving {4, 1}.
        let g = Graph::path(5);
        let s = set(5, &[0, 2, 4]);
        assert_eq!(prune(&g, &s).unwrap().len(), 3);
        let out = local_improvement(&g, &s).unwrap();
        assert_eq!(out.len(), 2);
        assert!(is_dominating(&g, &out));
    }

    #[test]
    fn star_is_solved_immediately() {
        let (s, trace) = run_ig(&Graph::star(9), &IgConfig::default(), None).unwrap();
        assert_eq!(s.as_slice(), &[0]);
        assert_eq!(trace.points.len(), 1);
        assert_eq!(trace.iterations, 200);
    }

    #[test]
    fn six_cycle_reaches_optimum() {
        let cfg = IgConfig {
            seed: 4,
            ..IgConfig::default()
        };
        let (s, _) = run_ig(&Graph::cycle(6), &cfg, None).unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn gcn_mode_needs_maps() {
        let cfg = IgConfig {
            mode: IgMode::GcnCycling,
            ..IgConfig::default()
        };
        assert!(matches!(run_ig(&Graph::cycle(6), &cfg, None), Err(Error::MissingMaps)));
    }

    #[test]
    fn map_schedule_cycles() {
        let maps = ProbabilityMaps::new(vec![vec![0.5; 3]; 4], 3, String::new()).unwrap();
        let cfg = IgConfig {
            mode: IgMode::GcnCycling,
            ..IgConfig::default()
        };
        let idx = |t| match heuristic_for(&cfg, Some(&maps), t) {
            Heuristic::Map { index, .. } => index,
            _ => unreachable!(),
        };
        assert_eq!([idx(0), idx(1), idx(2), idx(4), idx(5), idx(9)], [0, 0, 1, 3, 0, 0]);
    }

    #[test]
    fn config_validation() {
        let bad = [
            IgConfig { beta: 0.0, ..IgConfig::default() },
            IgConfig { beta: 1.0, ..IgConfig::default() },
            IgConfig { delta_max: 0, ..IgConfig::default() },
            IgConfig { time_limit: Duration::ZERO, ..IgConfig::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().is_err());
        }
    }
}
