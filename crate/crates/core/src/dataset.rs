//! Labeled instance datasets.
//!
//! An instance is one JSON document:
//!
//! ```json
//! { "n": 6, "edges": [[0,1], ...], "gamma": 2, "solutions": [[0,3], [1,4]], "provenance": {} }
//! ```
//!
//! A manifest lists instance files relative to its own directory, each with an
//! optional train/test assignment, plus summary counts.

use std::path::{Path, PathBuf};

use log::{info, warn};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::exact::{enumerate_optima, Budget, DEFAULT_MAX_SOLUTIONS};
use crate::{generate_er, is_dominating, Error, Graph, Result, VertexSet};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub id: String,
    pub graph: Graph,
    /// Domination number, when labeled.
    pub gamma: Option<usize>,
    /// Distinct minimum dominating sets, ascending ids each.
    pub solutions: Vec<VertexSet>,
    pub provenance: Map<String, Value>,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    gamma: Option<usize>,
    #[serde(default)]
    solutions: Vec<Vec<usize>>,
    #[serde(default)]
    provenance: Map<String, Value>,
    #[serde(flatten)]
    unknown: Map<String, Value>,
}

impl Instance {
    pub fn unlabeled(id: impl Into<String>, graph: Graph, provenance: Map<String, Value>) -> Self {
        Instance {
            id: id.into(),
            graph,
            gamma: None,
            solutions: Vec::new(),
            provenance,
        }
    }

    pub fn is_labeled(&self) -> bool {
        self.gamma.is_some()
    }

    /// Checks every stored solution: size `gamma`, dominating, pairwise distinct.
    pub fn validate(&self) -> Result<()> {
        let fail = |message: String| Error::InvalidInstance {
            instance: self.id.clone(),
            message,
        };
        match self.gamma {
            None if !self.solutions.is_empty() => {
                return Err(fail("solutions present but gamma missing".into()));
            }
            Some(_) if self.solutions.is_empty() => {
                return Err(fail("gamma present but no solutions stored".into()));
            }
            _ => {}
        }
        for (i, s) in self.solutions.iter().enumerate() {
            if s.universe() != self.graph.n() {
                return Err(fail(format!("solution {i} built for a different vertex count")));
            }
            if Some(s.len()) != self.gamma {
                return Err(fail(format!(
                    "solution {i} has {} vertices but gamma is {}",
                    s.len(),
                    self.gamma.unwrap_or(0)
                )));
            }
            if !is_dominating(&self.graph, s) {
                return Err(fail(format!("solution {i} does not dominate the graph")));
            }
            if self.solutions[..i].contains(s) {
                return Err(fail(format!("solution {i} repeats an earlier solution")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            n: self.graph.n(),
            edges: self.graph.edges().map(|(u, v)| [u, v]).collect(),
            gamma: self.gamma,
            solutions: self.solutions.iter().map(VertexSet::sorted).collect(),
            provenance: self.provenance.clone(),
            unknown: Map::new(),
        };
        let mut text = serde_json::to_string(&file).expect("instance serializes");
        text.push('\n');
        text
    }

    /// Parses and validates an instance; unknown top-level fields are logged and ignored.
    pub fn from_json(id: impl Into<String>, text: &str) -> Result<Self> {
        let id = id.into();
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::from_json(text, e))?;
        for key in file.unknown.keys() {
            warn!("instance {id}: ignoring unknown field {key:?}");
        }
        let wrap = |e: Error| Error::InvalidInstance {
            instance: id.clone(),
            message: e.to_string(),
        };
        let graph = Graph::from_edges(file.n, file.edges.iter().map(|e| (e[0], e[1]))).map_err(wrap)?;
        let solutions = file
            .solutions
            .iter()
            .map(|s| VertexSet::from_slice(file.n, s))
            .collect::<Result<Vec<_>>>()
            .map_err(wrap)?;
        let inst = Instance {
            id,
            graph,
            gamma: file.gamma,
            solutions,
            provenance: file.provenance,
        };
        inst.validate()?;
        Ok(inst)
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned())
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
    Instance::from_json(stem(path), &text).map_err(|e| e.in_file(path))
}

pub fn save_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, inst.to_json())?;
    Ok(())
}

/// Exact labels for a graph: `gamma` and up to `max_solutions` distinct optima.
pub fn label_instance(mut inst: Instance, max_solutions: usize, budget: Budget) -> Result<Instance> {
    let solutions = enumerate_optima(&inst.graph, max_solutions, budget)?;
    inst.gamma = Some(solutions[0].len());
    inst.solutions = solutions;
    inst.provenance.insert("max_solutions".into(), max_solutions.into());
    Ok(inst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    /// Relative to the manifest's directory.
    pub path: String,
    pub n: usize,
    pub gamma: Option<usize>,
    #[serde(default)]
    pub split: Option<Split>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub count: usize,
    pub labeled: usize,
    pub mean_n: f64,
    pub mean_gamma: Option<f64>,
    pub train: usize,
    pub test: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub instances: Vec<ManifestEntry>,
    pub summary: DatasetSummary,
    #[serde(default)]
    pub provenance: Map<String, Value>,
}

impl DatasetManifest {
    pub fn new(instances: Vec<ManifestEntry>, provenance: Map<String, Value>) -> Self {
        let summary = summarize(&instances);
        DatasetManifest {
            instances,
            summary,
            provenance,
        }
    }

    pub fn recompute_summary(&self) -> DatasetSummary {
        summarize(&self.instances)
    }

    pub fn entries(&self, split: Option<Split>) -> impl Iterator<Item = &ManifestEntry> {
        self.instances.iter().filter(move |e| split.is_none() || e.split == split)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: DatasetManifest = serde_json::from_str(text).map_err(|e| Error::from_json(text, e))?;
        if m.summary != m.recompute_summary() {
            warn!("manifest summary is stale; using recomputed values");
        }
        Ok(DatasetManifest::new(m.instances, m.provenance))
    }
}

fn summarize(entries: &[ManifestEntry]) -> DatasetSummary {
    let count = entries.len();
    let gammas: Vec<usize> = entries.iter().filter_map(|e| e.gamma).collect();
    let mean = |total: usize, k: usize| if k == 0 { 0.0 } else { total as f64 / k as f64 };
    DatasetSummary {
        count,
        labeled: gammas.len(),
        mean_n: mean(entries.iter().map(|e| e.n).sum(), count),
        mean_gamma: (!gammas.is_empty()).then(|| mean(gammas.iter().sum(), gammas.len())),
        train: entries.iter().filter(|e| e.split == Some(Split::Train)).count(),
        test: entries.iter().filter(|e| e.split == Some(Split::Test)).count(),
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
    DatasetManifest::from_json(&text).map_err(|e| e.in_file(path))
}

pub fn save_manifest(m: &DatasetManifest, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, m.to_json())?;
    Ok(())
}

/// Loads the instances referenced by `manifest` (optionally one split only).
pub fn load_instances(
    manifest: &DatasetManifest,
    base_dir: impl AsRef<Path>,
    split: Option<Split>,
) -> Result<Vec<Instance>> {
    let base = base_dir.as_ref();
    manifest
        .entries(split)
        .map(|e| {
            let mut inst = load_instance(base.join(&e.path))?;
            inst.id = e.id.clone();
            Ok(inst)
        })
        .collect()
}

/// Deterministic train/test partition: `floor(count * train_fraction)` instances
/// go to train after a seeded shuffle.
pub fn split_dataset(manifest: &DatasetManifest, train_fraction: f64, seed: u64) -> Result<DatasetManifest> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train fraction {train_fraction} outside (0, 1)"
        )));
    }
    let count = manifest.instances.len();
    let train = ((count as f64 * train_fraction) + 1e-9).floor() as usize;
    let mut order: Vec<usize> = (0..count).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut instances = manifest.instances.clone();
    for (rank, &i) in order.iter().enumerate() {
        instances[i].split = Some(if rank < train { Split::Train } else { Split::Test });
    }
    let mut provenance = manifest.provenance.clone();
    provenance.insert(
        "split".into(),
        json!({ "train_fraction": train_fraction, "seed": seed }),
    );
    Ok(DatasetManifest::new(instances, provenance))
}

/// How edge probabilities are drawn for generated graphs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Density {
    /// `p` uniform in `[lo, hi]`.
    Probability(f64, f64),
    /// Expected average degree uniform in `[lo, hi]`, i.e. `p = d / (n - 1)`.
    AverageDegree(f64, f64),
}

#[derive(Clone, Debug)]
pub struct DatasetParams {
    pub count: usize,
    /// Inclusive vertex-count range.
    pub n_range: (usize, usize),
    pub density: Density,
    pub seed: u64,
    pub max_solutions: usize,
    /// Per-instance labeling budget.
    pub budget: Budget,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    /// Candidates tried before giving up, as a multiple of `count`.
    pub oversample: usize,
}

impl Default for DatasetParams {
    fn default() -> Self {
        DatasetParams {
            count: 10,
            n_range: (150, 255),
            density: Density::AverageDegree(3.0, 8.0),
            seed: 0,
            max_solutions: DEFAULT_MAX_SOLUTIONS,
            budget: Budget::time(std::time::Duration::from_secs(60)),
            jobs: 0,
            oversample: 4,
        }
    }
}

impl DatasetParams {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.n_range;
        if lo == 0 || lo > hi {
            return Err(Error::InvalidParameter(format!("bad vertex range {lo}..={hi}")));
        }
        let (a, b) = match self.density {
            Density::Probability(a, b) => {
                if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
                    return Err(Error::InvalidParameter("edge probability outside [0, 1]".into()));
                }
                (a, b)
            }
            Density::AverageDegree(a, b) => {
                if a < 0.0 {
                    return Err(Error::InvalidParameter("negative average degree".into()));
                }
                (a, b)
            }
        };
        if a > b {
            return Err(Error::InvalidParameter(format!("empty density range {a}..={b}")));
        }
        if self.max_solutions == 0 {
            return Err(Error::InvalidParameter("max_solutions must be at least 1".into()));
        }
        Ok(())
    }
}

/// Graph and provenance for candidate `index`, independent of all other candidates.
fn candidate(params: &DatasetParams, index: u64) -> Result<(Graph, Map<String, Value>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index);
    let (lo, hi) = params.n_range;
    let n = rng.random_range(lo..=hi);
    let draw = |rng: &mut ChaCha8Rng, a: f64, b: f64| if a == b { a } else { rng.random_range(a..=b) };
    let p = match params.density {
        Density::Probability(a, b) => draw(&mut rng, a, b),
        Density::AverageDegree(a, b) => {
            let d = draw(&mut rng, a, b);
            if n > 1 { (d / (n - 1) as f64).min(1.0) } else { 0.0 }
        }
    };
    let graph_seed: u64 = rng.random();
    let g = generate_er(n, p, graph_seed)?;
    let mut prov = Map::new();
    prov.insert("generator".into(), "erdos-renyi".into());
    prov.insert("n".into(), n.into());
    prov.insert("p".into(), p.into());
    prov.insert("seed".into(), graph_seed.into());
    prov.insert("dataset_seed".into(), params.seed.into());
    prov.insert("candidate".into(), index.into());
    Ok((g, prov))
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
}

fn instance_file(index: usize) -> String {
    format!("inst_{index:05}.json")
}

/// Generates, labels and stores `count` ER instances under `out_dir`.
///
/// Candidates whose labeling exceeds the budget are discarded and replaced by
/// further candidates, up to `oversample * count` attempts. The manifest is
/// written to `out_dir/manifest.json` in either case; if too few instances
/// could be labeled the error carries the partial manifest.
pub fn generate_dataset(params: &DatasetParams, out_dir: impl AsRef<Path>) -> Result<DatasetManifest> {
    params.validate()?;
    let out = out_dir.as_ref();
    std::fs::create_dir_all(out)?;
    let max_attempts = params.count.saturating_mul(params.oversample.max(1)) as u64;
    let workers = pool(params.jobs);

    let mut entries = Vec::with_capacity(params.count);
    let mut next: u64 = 0;
    while entries.len() < params.count && next < max_attempts {
        let batch: Vec<u64> = (next..max_attempts).take(params.count - entries.len()).collect();
        next += batch.len() as u64;
        let labeled: Vec<(u64, Result<Instance>)> = workers.install(|| {
            batch
                .par_iter()
                .map(|&i| {
                    let res = candidate(params, i).and_then(|(g, prov)| {
                        let inst = Instance::unlabeled(String::new(), g, prov);
                        label_instance(inst, params.max_solutions, params.budget)
                    });
                    (i, res)
                })
                .collect()
        });
        for (i, res) in labeled {
            match res {
                Ok(mut inst) => {
                    let k = entries.len();
                    inst.id = format!("inst_{k:05}");
                    let path = instance_file(k);
                    save_instance(&inst, out.join(&path))?;
                    entries.push(ManifestEntry {
                        id: inst.id.clone(),
                        path,
                        n: inst.graph.n(),
                        gamma: inst.gamma,
                        split: None,
                    });
                }
                Err(Error::BudgetExceeded { nodes, .. }) => {
                    warn!("candidate {i}: labeling budget exceeded after {nodes} nodes; discarded");
                }
                Err(e) => return Err(e),
            }
        }
    }

    let provenance = match json!({
        "generator": "erdos-renyi",
        "count": params.count,
        "n_range": [params.n_range.0, params.n_range.1],
        "density": match params.density {
            Density::Probability(a, b) => json!({ "p": [a, b] }),
            Density::AverageDegree(a, b) => json!({ "average_degree": [a, b] }),
        },
        "seed": params.seed,
        "max_solutions": params.max_solutions,
        "budget": budget_json(&params.budget),
        "candidates_tried": next,
    }) {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    let manifest = DatasetManifest::new(entries, provenance);
    save_manifest(&manifest, out.join(MANIFEST_FILE))?;
    info!(
        "dataset: {} instances, mean n {:.1}, mean gamma {:?}",
        manifest.summary.count, manifest.summary.mean_n, manifest.summary.mean_gamma
    );
    if manifest.instances.len() < params.count {
        return Err(Error::DatasetIncomplete {
            accepted: manifest.instances.len(),
            requested: params.count,
            manifest: Box::new(manifest),
        });
    }
    Ok(manifest)
}

fn budget_json(b: &Budget) -> Value {
    json!({
        "max_nodes": b.max_nodes,
        "time_limit_ms": b.time_limit.map(|t| t.as_millis() as u64),
    })
}

/// Reads a graph as an unlabeled instance, or a stored instance from `.json`.
///
/// `.edges` files are headerless `a b` dumps with arbitrary vertex labels (the
/// labels are kept in provenance); any other extension is the `n m` edge-list
/// format.
pub fn read_graph_file(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    if path.extension().is_some_and(|e| e == "json") {
        return load_instance(path);
    }
    let mut prov = Map::new();
    prov.insert("source".into(), path.display().to_string().into());
    let g = if path.extension().is_some_and(|e| e == "edges") {
        let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
        let (g, labels) = crate::io::parse_labeled_edge_list(&text).map_err(|e| e.in_file(path))?;
        prov.insert("labels".into(), labels.into());
        g
    } else {
        crate::io::read_edge_list(path)?
    };
    Ok(Instance::unlabeled(stem(path), g, prov))
}

/// Labels every graph in `inputs` and writes instances plus a manifest to `out_dir`.
///
/// Graphs that exceed the budget are skipped with a warning.
pub fn label_graphs(
    inputs: Vec<Instance>,
    out_dir: impl AsRef<Path>,
    max_solutions: usize,
    budget: Budget,
    jobs: usize,
) -> Result<DatasetManifest> {
    let out = out_dir.as_ref();
    std::fs::create_dir_all(out)?;
    let results: Vec<(String, Result<Instance>)> = pool(jobs).install(|| {
        inputs
            .into_par_iter()
            .map(|inst| (inst.id.clone(), label_instance(inst, max_solutions, budget)))
            .collect()
    });
    let mut entries = Vec::new();
    for (id, res) in results {
        match res {
            Ok(inst) => {
                let path = format!("{id}.json");
                save_instance(&inst, out.join(&path))?;
                entries.push(ManifestEntry {
                    id,
                    path,
                    n: inst.graph.n(),
                    gamma: inst.gamma,
                    split: None,
                });
            }
            Err(Error::BudgetExceeded { nodes, .. }) => {
                warn!("{id}: labeling budget exceeded after {nodes} nodes; skipped");
            }
            Err(e) => return Err(e),
        }
    }
    let mut prov = Map::new();
    prov.insert("max_solutions".into(), max_solutions.into());
    prov.insert("budget".into(), budget_json(&budget));
    let manifest = DatasetManifest::new(entries, prov);
    save_manifest(&manifest, out.join(MANIFEST_FILE))?;
    Ok(manifest)
}

/// Files in `dir` that look like graphs, sorted by name.
pub fn graph_files(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.file_name().is_some_and(|f| f != MANIFEST_FILE)
                && p.extension()
                    .is_some_and(|e| ["el", "txt", "edges", "json"].iter().any(|x| e == *x))
        })
        .collect();
    files.sort();
    Ok(files)
}
