//! Greedy construction of dominating sets and the pruning pass.
//!
//! [`construct`] repeatedly adds the highest-scoring vertex outside the partial
//! set until the set dominates the graph. One vertex is added per step, with ties
//! broken towards the lowest id. Scores come from a [`Heuristic`]:
//!
//! * `Greedy` scores `v` by how many undominated vertices it would cover, recomputed
//!   after every addition,
//! * `Random` draws a static `U(0, 1)` score per vertex once per construction,
//! * `Map` uses a static per-vertex probability from one GCN output map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::gcn::ProbabilityMaps;
use crate::graph::Coverage;
use crate::{Error, Graph, Result, VertexSet};

#[derive(Clone, Copy, Debug)]
pub enum Heuristic<'a> {
    Greedy,
    Random { seed: u64 },
    /// Row `index` of a set of probability maps.
    Map { index: usize, scores: &'a [f64] },
}

impl<'a> Heuristic<'a> {
    pub fn from_map(maps: &'a ProbabilityMaps, index: usize) -> Self {
        Heuristic::Map {
            index,
            scores: maps.row(index),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Heuristic::Greedy => "greedy".into(),
            Heuristic::Random { seed } => format!("random({seed})"),
            Heuristic::Map { index, .. } => format!("map({index})"),
        }
    }
}

/// `|N[v] \ N[S]|`.
pub fn greedy_score(g: &Graph, s: &VertexSet, v: usize) -> usize {
    Coverage::of(g, s).gain(g, v)
}

pub fn construct(g: &Graph, h: Heuristic<'_>) -> VertexSet {
    reconstruct(g, &VertexSet::new(g.n()), h)
}

/// Extends `partial` with the selection rule of [`construct`] until it dominates `g`.
pub fn reconstruct(g: &Graph, partial: &VertexSet, h: Heuristic<'_>) -> VertexSet {
    let mut set = partial.clone();
    let mut cov = Coverage::of(g, &set);
    if cov.is_complete() {
        return set;
    }
    match h {
        Heuristic::Greedy => extend_greedy(g, &mut set, &mut cov),
        Heuristic::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let scores: Vec<f64> = (0..g.n()).map(|_| rng.random()).collect();
            extend_static(g, &mut set, &mut cov, &scores);
        }
        Heuristic::Map { scores, .. } => {
            assert_eq!(scores.len(), g.n(), "probability map length must equal vertex count");
            extend_static(g, &mut set, &mut cov, scores);
        }
    }
    debug_assert!(cov.is_complete());
    set
}

fn extend_greedy(g: &Graph, set: &mut VertexSet, cov: &mut Coverage) {
    let mut gain: Vec<usize> = (0..g.n()).map(|v| cov.gain(g, v)).collect();
    while !cov.is_complete() {
        let mut best = usize::MAX;
        let mut best_gain = 0;
        for v in 0..g.n() {
            if !set.contains(v) && (best == usize::MAX || gain[v] > best_gain) {
                best = v;
                best_gain = gain[v];
            }
        }
        set.insert(best);
        for x in g.closed_neighbors(best) {
            if !cov.is_dominated(x) {
                for y in g.closed_neighbors(x) {
                    gain[y] -= 1;
                }
            }
        }
        cov.add(g, best);
    }
}

fn extend_static(g: &Graph, set: &mut VertexSet, cov: &mut Coverage, scores: &[f64]) {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    for v in order {
        if cov.is_complete() {
            break;
        }
        if set.insert(v) {
            cov.add(g, v);
        }
    }
}

/// Drops redundant members, scanning from the most recently inserted to the first.
///
/// The result is minimal: removing any single member breaks domination.
pub fn prune(g: &Graph, s: &VertexSet) -> Result<VertexSet> {
    let mut cov = Coverage::of(g, s);
    if !cov.is_complete() {
        return Err(Error::NotDominating);
    }
    Ok(prune_with(g, s, &mut cov))
}

pub(crate) fn prune_with(g: &Graph, s: &VertexSet, cov: &mut Coverage) -> VertexSet {
    let mut keep = vec![true; s.len()];
    for (i, &v) in s.as_slice().iter().enumerate().rev() {
        if cov.is_redundant(g, v) {
            cov.remove(g, v);
            keep[i] = false;
        }
    }
    let mut out = VertexSet::new(g.n());
    for (i, v) in s.iter().enumerate() {
        if keep[i] {
            out.insert(v);
        }
    }
    out
}

/// Builds and prunes one candidate per map and returns the smallest
/// (lowest map index on ties).
pub fn construct_from_maps(g: &Graph, maps: &ProbabilityMaps) -> Result<VertexSet> {
    candidates_from_maps(g, maps)?
        .into_iter()
        .min_by_key(|s| s.len())
        .ok_or_else(|| Error::InvalidParameter("probability maps contain no rows".into()))
}

/// One pruned candidate per map, in map order.
pub fn candidates_from_maps(g: &Graph, maps: &ProbabilityMaps) -> Result<Vec<VertexSet>> {
    if maps.num_vertices() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: maps.num_vertices(),
        });
    }
    Ok((0..maps.num_maps())
        .into_par_iter()
        .map(|k| {
            let built = construct(g, Heuristic::from_map(maps, k));
            prune(g, &built).expect("construction always dominates")
        })
        .collect())
}
