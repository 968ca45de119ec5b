//! Random graph generators (Erdős–Rényi and Barabási–Albert).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Graph, Result};

/// Below this edge probability the generator skips ahead geometrically instead
/// of flipping a coin per pair.
const SKIP_THRESHOLD: f64 = 0.25;

/// G(n, p): every unordered pair is an edge independently with probability `p`.
pub fn generate_er(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("vertex count must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    if p == 0.0 {
        // edgeless
    } else if p <= SKIP_THRESHOLD {
        // Batagelj & Brandes: walk the lower triangle in gaps of Geometric(p).
        let log_q = (1.0 - p).ln();
        let mut v: usize = 1;
        let mut w: i64 = -1;
        while v < n {
            let r: f64 = rng.random();
            let skip = ((1.0 - r).ln() / log_q).floor();
            w += 1 + skip.min(i64::MAX as f64 / 2.0) as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((v, w as usize));
            }
        }
    } else {
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Preferential attachment with `k` edges per newcomer.
///
/// Starts from `k` isolated vertices; vertex `k` attaches to all of them and each
/// later vertex picks `k` distinct targets with probability proportional to degree.
/// The result is connected and has exactly `k * (n - k)` edges.
pub fn generate_ba(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if k < 1 || k >= n {
        return Err(Error::InvalidParameter(format!(
            "attachments per vertex must satisfy 1 <= k < n (k = {k}, n = {n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(k * (n - k));
    // Each vertex appears once per incident edge.
    let mut repeated: Vec<usize> = Vec::with_capacity(2 * k * (n - k));
    let mut targets: Vec<usize> = (0..k).collect();
    let mut chosen = vec![false; n];
    for source in k..n {
        for &t in &targets {
            edges.push((source, t));
        }
        repeated.extend_from_slice(&targets);
        repeated.extend(std::iter::repeat_n(source, k));

        if source + 1 == n {
            break;
        }
        for &t in &targets {
            chosen[t] = false;
        }
        targets.clear();
        while targets.len() < k {
            let t = repeated[rng.random_range(0..repeated.len())];
            if !chosen[t] {
                chosen[t] = true;
                targets.push(t);
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn er_extremes() {
        assert_eq!(generate_er(10, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(generate_er(10, 1.0, 1).unwrap().edge_count(), 45);
        assert!(generate_er(10, 1.5, 1).is_err());
        assert!(generate_er(10, -0.1, 1).is_err());
        assert!(generate_er(0, 0.5, 1).is_err());
    }

    #[test]
    fn er_edge_count_within_four_sigma() {
        let g = generate_er(200, 0.02, 7).unwrap();
        let pairs = 200.0 * 199.0 / 2.0;
        let mean = 0.02 * pairs;
        let sigma = (pairs * 0.02 * 0.98_f64).sqrt();
        assert!((g.edge_count() as f64 - mean).abs() <= 4.0 * sigma, "{} edges", g.edge_count());
    }

    #[test]
    fn er_skipping_matches_bernoulli_rate() {
        // Both branches should produce the same expected density.
        for &p in &[0.05, 0.25, 0.3] {
            let mut total = 0usize;
            for seed in 0..40 {
                total += generate_er(60, p, seed).unwrap().edge_count();
            }
            let pairs = 40.0 * 60.0 * 59.0 / 2.0;
            let sigma = (pairs * p * (1.0 - p)).sqrt();
            assert!((total as f64 - p * pairs).abs() <= 4.0 * sigma, "p = {p}: {total}");
        }
    }

    #[test]
    fn er_is_deterministic_per_seed() {
        let a = generate_er(50, 0.1, 11).unwrap();
        let b = generate_er(50, 0.1, 11).unwrap();
        let c = generate_er(50, 0.1, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn ba_with_k_equal_n_minus_one_is_a_star() {
        // Edgeless 4-vertex core, one newcomer attaching to all of it.
        let g = generate_ba(5, 4, 0).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degree(4), 4);
    }

    #[test]
    fn ba_edge_count_and_heavy_tail() {
        let g = generate_ba(100, 2, 3).unwrap();
        assert_eq!(g.edge_count(), 196);
        let mut degrees: Vec<_> = (0..100).map(|v| g.degree(v)).collect();
        degrees.sort_unstable();
        assert!(degrees[99] > degrees[50]);
        assert!(degrees[0] >= 1);
    }

    #[test]
    fn ba_rejects_bad_k() {
        assert!(generate_ba(5, 5, 0).is_err());
        assert!(generate_ba(5, 0, 0).is_err());
    }
}
