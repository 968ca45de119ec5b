//! Oracles and generators shared by the integration tests.
//!
//! The oracles work on raw edge lists and bitmasks so they share no code with
//! the library under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use mds_core::{Graph, VertexSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Vertex count and an edge list with `u < v`, each pair present independently.
pub fn edge_lists(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_n, 0.0..=1.0f64).prop_flat_map(|(n, p)| {
        let pairs = n * (n - 1) / 2;
        (Just(n), prop::collection::vec(0.0..1.0f64, pairs)).prop_map(move |(n, draws)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if draws[k] < p {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            (n, edges)
        })
    })
}

pub fn graphs(max_n: usize) -> impl Strategy<Value = Graph> {
    edge_lists(max_n).prop_map(|(n, edges)| Graph::from_edges(n, edges).unwrap())
}

/// Random permutation of `0..n` as a strategy.
pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

/// Independent ER sampler used where a fixed corpus is needed.
pub fn er_edges(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    edges
}

pub fn edges_of(g: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        for &v in g.neighbors(u) {
            if u < v {
                out.push((u, v));
            }
        }
    }
    out
}

/// Closed neighborhoods as bitmasks; `n` must be at most 32.
pub fn closed_masks(n: usize, edges: &[(usize, usize)]) -> Vec<u32> {
    assert!(n <= 32);
    let mut masks: Vec<u32> = (0..n).map(|v| 1 << v).collect();
    for &(u, v) in edges {
        masks[u] |= 1 << v;
        masks[v] |= 1 << u;
    }
    masks
}

fn full(n: usize) -> u32 {
    if n == 32 { u32::MAX } else { (1u32 << n) - 1 }
}

pub fn mask_dominates(masks: &[u32], set: u32) -> bool {
    let covered = (0..masks.len())
        .filter(|&v| set >> v & 1 == 1)
        .fold(0u32, |acc, v| acc | masks[v]);
    covered == full(masks.len())
}

/// Every minimum dominating set, as sorted vertex lists, by scanning all subsets.
pub fn oracle_optima(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    assert!(n <= 16, "exhaustive oracle limited to 16 vertices");
    let masks = closed_masks(n, edges);
    let mut best = usize::MAX;
    let mut found = Vec::new();
    for set in 0..=full(n) {
        let size = set.count_ones() as usize;
        if size > best || !mask_dominates(&masks, set) {
            continue;
        }
        if size < best {
            best = size;
            found.clear();
        }
        found.push(set);
    }
    found
        .into_iter()
        .map(|set| (0..n).filter(|&v| set >> v & 1 == 1).collect())
        .collect()
}

pub fn oracle_gamma(n: usize, edges: &[(usize, usize)]) -> usize {
    oracle_optima(n, edges)[0].len()
}

/// Closed neighborhood of a set from the edge list alone.
pub fn oracle_closed_neighborhood(n: usize, edges: &[(usize, usize)], set: &[usize]) -> BTreeSet<usize> {
    let members: BTreeSet<usize> = set.iter().copied().collect();
    let mut out = members.clone();
    for &(u, v) in edges {
        if members.contains(&u) {
            out.insert(v);
        }
        if members.contains(&v) {
            out.insert(u);
        }
    }
    assert!(out.iter().all(|&v| v < n));
    out
}

pub fn oracle_dominates(n: usize, edges: &[(usize, usize)], set: &[usize]) -> bool {
    oracle_closed_neighborhood(n, edges, set).len() == n
}

/// True when removing any single member breaks domination.
pub fn oracle_minimal(n: usize, edges: &[(usize, usize)], set: &[usize]) -> bool {
    (0..set.len()).all(|i| {
        let rest: Vec<usize> = set.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
        !oracle_dominates(n, edges, &rest)
    })
}

pub fn sorted_sets(sets: &[VertexSet]) -> BTreeSet<Vec<usize>> {
    sets.iter().map(VertexSet::sorted).collect()
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub const FIXTURE_WEIGHTS: &str = "gcn_weights_32x4.json";
pub const FIXTURE_DIMS: [usize; 5] = [32; 5];
pub const FIXTURE_SEED: u64 = 20_240_601;
