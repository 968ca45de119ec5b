//! Exact minimum dominating sets by branch and bound.
//!
//! Every vertex must be dominated by some member of its closed neighborhood, so
//! the search picks an undominated vertex `u` and branches on which `w ∈ N[u]`
//! dominates it. Candidates tried earlier at the same node are excluded from the
//! later sibling subtrees, so each vertex set is visited at most once.
//!
//! Because of those exclusions, distinct leaves of the search tree are distinct
//! sets. Enumerating optima is therefore a second pass with the bound fixed at
//! `γ + 1` that records every dominating leaf instead of tightening the bound.

use std::time::{Duration, Instant};

use crate::graph::Coverage;
use crate::heuristics::{construct, prune, Heuristic};
use crate::{Error, Graph, Result, VertexSet};

/// Largest graph accepted by [`brute_force_gamma`].
pub const BRUTE_FORCE_MAX_N: usize = 25;

/// Default number of optima requested per instance when enumerating.
pub const DEFAULT_MAX_SOLUTIONS: usize = 32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Budget {
            max_nodes: Some(max_nodes),
            time_limit: None,
        }
    }

    pub fn time(limit: Duration) -> Self {
        Budget {
            max_nodes: None,
            time_limit: Some(limit),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExactResult {
    pub gamma: usize,
    /// Vertices in ascending order.
    pub solution: VertexSet,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

struct Clock {
    budget: Budget,
    start: Instant,
    nodes: u64,
}

impl Clock {
    fn new(budget: Budget) -> Self {
        Clock {
            budget,
            start: Instant::now(),
            nodes: 0,
        }
    }

    /// Counts a node; false once the budget is spent.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if let Some(max) = self.budget.max_nodes {
            if self.nodes > max {
                return false;
            }
        }
        if let Some(limit) = self.budget.time_limit {
            if self.nodes.is_multiple_of(256) && self.start.elapsed() > limit {
                return false;
            }
        }
        true
    }
}

struct Search<'a> {
    g: &'a Graph,
    cov: Coverage,
    chosen: Vec<usize>,
    /// Nesting depth of exclusions per vertex.
    excluded: Vec<u32>,
    closed_max: usize,
    /// Only solutions strictly smaller than this are accepted.
    bound: usize,
    best: Option<Vec<usize>>,
    /// In enumeration mode, the number of optima still wanted.
    collect: Option<usize>,
    found: Vec<Vec<usize>>,
    clock: &'a mut Clock,
    out_of_budget: bool,
    gains: Vec<usize>,
    weight: Vec<f64>,
    load: Vec<f64>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, bound: usize, collect: Option<usize>, clock: &'a mut Clock) -> Self {
        Search {
            g,
            cov: Coverage::new(g.n()),
            chosen: Vec::new(),
            excluded: vec![0; g.n()],
            closed_max: g.max_degree() + 1,
            bound,
            best: None,
            collect,
            found: Vec::new(),
            clock,
            out_of_budget: false,
            gains: vec![0; g.n()],
            weight: vec![0.0; g.n()],
            load: vec![0.0; g.n()],
        }
    }

    fn push(&mut self, w: usize) {
        self.chosen.push(w);
        self.cov.add(self.g, w);
    }

    fn pop(&mut self) {
        let w = self.chosen.pop().expect("push/pop balanced");
        self.cov.remove(self.g, w);
    }

    fn stopped(&self) -> bool {
        self.out_of_budget || self.collect == Some(0)
    }

    /// Lower bound on the number of further vertices needed, or `None` if some
    /// undominated vertex has no admissible dominator left.
    ///
    /// Uses the larger of `ceil(U / (Δ + 1))` and a feasible dual of the covering
    /// LP: each undominated `u` gets weight `1 / max_{w ∈ N[u]} gain(w)`, so no
    /// admissible `w` collects more than 1 and the weights sum to a lower bound.
    fn lower_bound(&mut self) -> Option<usize> {
        let undominated = self.cov.undominated();
        let degree_bound = undominated.div_ceil(self.closed_max);
        for v in 0..self.g.n() {
            self.gains[v] = if self.excluded[v] == 0 {
                self.cov.gain(self.g, v)
            } else {
                0
            };
        }
        // Start from y_u = 1 / max gain, then raise each y_u by the slack left on
        // its tightest admissible dominator.
        let mut dual = 0.0;
        for u in 0..self.g.n() {
            self.weight[u] = 0.0;
            if self.cov.is_dominated(u) {
                continue;
            }
            let best = self.g.closed_neighbors(u).map(|w| self.gains[w]).max().unwrap_or(0);
            if best == 0 {
                return None;
            }
            self.weight[u] = 1.0 / best as f64;
        }
        for w in 0..self.g.n() {
            self.load[w] = if self.excluded[w] == 0 {
                self.g.closed_neighbors(w).map(|u| self.weight[u]).sum()
            } else {
                0.0
            };
        }
        for u in 0..self.g.n() {
            if self.cov.is_dominated(u) {
                continue;
            }
            let slack = self
                .g
                .closed_neighbors(u)
                .filter(|&w| self.excluded[w] == 0)
                .map(|w| 1.0 - self.load[w])
                .fold(f64::INFINITY, f64::min)
                .max(0.0);
            if slack > 0.0 {
                for w in self.g.closed_neighbors(u) {
                    self.load[w] += slack;
                }
            }
            dual += self.weight[u] + slack;
        }
        let dual_bound = (dual - 1e-9).ceil().max(0.0) as usize;
        Some(dual_bound.max(degree_bound))
    }

    /// Undominated vertex with the fewest admissible dominators (lowest id on ties),
    /// together with those dominators in branching order.
    fn branch_vertex(&self) -> (usize, Vec<usize>) {
        let mut best: Option<(usize, usize)> = None;
        for u in 0..self.g.n() {
            if self.cov.is_dominated(u) {
                continue;
            }
            let options = self.g.closed_neighbors(u).filter(|&w| self.excluded[w] == 0).count();
            if best.is_none_or(|(_, c)| options < c) {
                best = Some((u, options));
                if options <= 1 {
                    break;
                }
            }
        }
        let (u, _) = best.expect("called only when some vertex is undominated");
        let mut cands: Vec<(usize, usize)> = self
            .g
            .closed_neighbors(u)
            .filter(|&w| self.excluded[w] == 0)
            .map(|w| (self.cov.gain(self.g, w), w))
            .collect();
        cands.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut cands: Vec<usize> = cands.into_iter().map(|(_, w)| w).collect();
        if self.collect.is_none() {
            self.drop_dominated(&mut cands);
        }
        (u, cands)
    }

    /// Removes candidates whose undominated neighborhood is covered by another
    /// candidate's; swapping one for the other never worsens a solution. Not
    /// used when enumerating, since it skips equally good alternatives.
    fn drop_dominated(&self, cands: &mut Vec<usize>) {
        let fresh: Vec<Vec<usize>> = cands
            .iter()
            .map(|&w| self.g.closed_neighbors(w).filter(|&x| !self.cov.is_dominated(x)).collect())
            .collect();
        let subset = |a: &[usize], b: &[usize]| a.iter().all(|x| b.binary_search(x).is_ok());
        let mut keep = vec![true; cands.len()];
        for i in 0..cands.len() {
            for j in 0..cands.len() {
                if i == j || !keep[j] || !subset(&fresh[i], &fresh[j]) {
                    continue;
                }
                // Equal neighborhoods keep the earlier candidate.
                if fresh[i].len() < fresh[j].len() || j < i {
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut k = 0;
        cands.retain(|_| {
            k += 1;
            keep[k - 1]
        });
    }

    fn dfs(&mut self) {
        if !self.clock.tick() {
            self.out_of_budget = true;
            return;
        }
        if self.cov.is_complete() {
            if let Some(wanted) = self.collect.as_mut() {
                *wanted -= 1;
                self.found.push(self.chosen.clone());
            } else if self.chosen.len() < self.bound {
                self.bound = self.chosen.len();
                self.best = Some(self.chosen.clone());
            }
            return;
        }
        let Some(lb) = self.lower_bound() else {
            return;
        };
        if self.chosen.len() + lb >= self.bound {
            return;
        }
        let (_, candidates) = self.branch_vertex();
        let mut tried = Vec::with_capacity(candidates.len());
        for w in candidates {
            self.push(w);
            self.dfs();
            self.pop();
            if self.stopped() {
                break;
            }
            self.excluded[w] += 1;
            tried.push(w);
            if self.chosen.len() + 1 >= self.bound {
                break;
            }
        }
        for w in tried {
            self.excluded[w] -= 1;
        }
    }

    /// Places forced vertices and runs the search.
    fn run(&mut self) {
        for v in 0..self.g.n() {
            if self.g.degree(v) == 0 {
                self.push(v);
            }
        }
        self.dfs();
    }
}

fn sorted_set(n: usize, mut ids: Vec<usize>) -> VertexSet {
    ids.sort_unstable();
    VertexSet::from_slice(n, &ids).expect("search yields distinct in-range vertices")
}

/// Minimum dominating set of `g`.
///
/// The greedy-plus-prune solution seeds the incumbent. When the budget runs out
/// the error carries the best set found so far, which is not proven optimal.
pub fn solve_exact(g: &Graph, budget: Budget) -> Result<ExactResult> {
    if g.n() == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    let mut clock = Clock::new(budget);
    let initial = prune(g, &construct(g, Heuristic::Greedy)).expect("greedy output dominates");
    let mut search = Search::new(g, initial.len(), None, &mut clock);
    search.run();
    let out_of_budget = search.out_of_budget;
    let best = search.best.take();
    let solution = match best {
        Some(ids) => sorted_set(g.n(), ids),
        None => sorted_set(g.n(), initial.as_slice().to_vec()),
    };
    if out_of_budget {
        return Err(Error::BudgetExceeded {
            incumbent: Some(solution),
            nodes: clock.nodes,
        });
    }
    Ok(ExactResult {
        gamma: solution.len(),
        solution,
        nodes_explored: clock.nodes,
        elapsed: clock.start.elapsed(),
    })
}

/// Up to `max_solutions` distinct minimum dominating sets.
///
/// The first entry is the optimum returned by [`solve_exact`]; the rest follow in
/// search order. The budget covers both passes.
pub fn enumerate_optima(g: &Graph, max_solutions: usize, budget: Budget) -> Result<Vec<VertexSet>> {
    if max_solutions == 0 {
        return Err(Error::InvalidParameter("max_solutions must be at least 1".into()));
    }
    let start = Instant::now();
    let first = solve_exact(g, budget)?;
    let gamma = first.gamma;
    let mut clock = Clock {
        budget,
        start,
        nodes: first.nodes_explored,
    };
    let mut search = Search::new(g, gamma + 1, Some(max_solutions), &mut clock);
    search.run();
    let out_of_budget = search.out_of_budget;
    let found = std::mem::take(&mut search.found);
    if out_of_budget {
        return Err(Error::BudgetExceeded {
            incumbent: Some(first.solution),
            nodes: clock.nodes,
        });
    }
    let mut solutions = vec![first.solution];
    for ids in found {
        debug_assert_eq!(ids.len(), gamma);
        let set = sorted_set(g.n(), ids);
        if solutions.len() < max_solutions && set != solutions[0] {
            solutions.push(set);
        }
    }
    Ok(solutions)
}

/// Domination number by exhaustive search over subsets of increasing size.
pub fn brute_force_gamma(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::GraphTooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
        });
    }
    if n == 0 {
        return Ok(0);
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| g.closed_neighbors(v).fold(0u32, |m, u| m | (1 << u)))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    for k in 1..=n {
        // Gosper's hack over k-subsets of 0..n.
        let mut subset: u32 = (1u32 << k) - 1;
        while subset <= full {
            let mut covered = 0u32;
            let mut bits = subset;
            while bits != 0 {
                covered |= masks[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            if covered == full {
                return Ok(k);
            }
            let c = subset & subset.wrapping_neg();
            let r = subset + c;
            subset = (((r ^ subset) >> 2) / c) | r;
        }
    }
    unreachable!("the full vertex set dominates")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::is_dominating;

    fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
    }

    fn k33() -> Graph {
        Graph::from_edges(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v)))).unwrap()
    }

    #[test]
    fn solves_small_named_graphs() {
        let r = solve_exact(&Graph::star(9), Budget::unlimited()).unwrap();
        assert_eq!(r.gamma, 1);
        assert_eq!(r.solution.as_slice(), &[0]);
        assert_eq!(solve_exact(&Graph::cycle(6), Budget::unlimited()).unwrap().gamma, 2);
        let p = solve_exact(&petersen(), Budget::unlimited()).unwrap();
        assert_eq!(p.gamma, 3);
        assert!(is_dominating(&petersen(), &p.solution));
    }

    #[test]
    fn brute_force_cases() {
        assert_eq!(brute_force_gamma(&Graph::empty(5)).unwrap(), 5);
        assert_eq!(brute_force_gamma(&k33()).unwrap(), 2);
        assert_eq!(brute_force_gamma(&Graph::cycle(6)).unwrap(), 2);
        assert_eq!(brute_force_gamma(&petersen()).unwrap(), 3);
        assert!(matches!(
            brute_force_gamma(&Graph::empty(26)),
            Err(Error::GraphTooLarge { n: 26, .. })
        ));
    }

    #[test]
    fn isolated_vertices_are_forced() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2)]).unwrap();
        let r = solve_exact(&g, Budget::unlimited()).unwrap();
        assert_eq!(r.gamma, 3);
        assert!(r.solution.contains(3) && r.solution.contains(4));
    }

    #[test]
    fn enumerates_six_cycle_optima() {
        let mut got: Vec<_> = enumerate_optima(&Graph::cycle(6), 10, Budget::unlimited())
            .unwrap()
            .iter()
            .map(VertexSet::sorted)
            .collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 3], vec![1, 4], vec![2, 5]]);
    }

    #[test]
    fn enumerates_k4_and_path_optima() {
        let mut k4: Vec<_> = enumerate_optima(&Graph::complete(4), 10, Budget::unlimited())
            .unwrap()
            .iter()
            .map(VertexSet::sorted)
            .collect();
        k4.sort();
        assert_eq!(k4, vec![vec![0], vec![1], vec![2], vec![3]]);

        let mut p4: Vec<_> = enumerate_optima(&Graph::path(4), 10, Budget::unlimited())
            .unwrap()
            .iter()
            .map(VertexSet::sorted)
            .collect();
        p4.sort();
        assert_eq!(p4, vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
    }

    #[test]
    fn enumeration_respects_cap() {
        let sols = enumerate_optima(&Graph::cycle(6), 2, Budget::unlimited()).unwrap();
        assert_eq!(sols.len(), 2);
        assert_ne!(sols[0], sols[1]);
        assert!(enumerate_optima(&Graph::cycle(6), 0, Budget::unlimited()).is_err());
    }

    #[test]
    fn budget_exceeded_carries_incumbent() {
        let g = crate::generate_er(120, 0.04, 5).unwrap();
        match solve_exact(&g, Budget::nodes(3)) {
            Err(Error::BudgetExceeded {
                incumbent: Some(s),
                nodes,
            }) => {
                assert!(is_dominating(&g, &s));
                assert!(nodes > 3);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
