//! GCN forward pass producing per-vertex probability maps.
//!
//! Each layer computes
//!
//! ```text
//! H[l+1] = act(H[l] · W0[l] + Â · H[l] · W1[l]),   Â = D^-1/2 · A · D^-1/2
//! ```
//!
//! with `H[0]` all ones, ReLU on hidden layers and a sigmoid on the last one.
//! `A` is the plain adjacency matrix (no self-loops) and `D` the degree matrix;
//! vertices of degree 0 get a zero row and column in `Â`. There are no biases.
//! The `m = C[L]` output columns, transposed, are the probability maps.

use std::path::Path;

use ndarray::{Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::{Error, Graph, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GcnLayer {
    /// Self path, `C[l] x C[l+1]`.
    pub theta0: Array2<f64>,
    /// Neighbor path, `C[l] x C[l+1]`.
    pub theta1: Array2<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GcnWeights {
    channel_dims: Vec<usize>,
    layers: Vec<GcnLayer>,
    metadata: Map<String, Value>,
}

impl GcnWeights {
    /// Validates the dimension chain and finiteness of every entry.
    pub fn new(
        channel_dims: Vec<usize>,
        layers: Vec<GcnLayer>,
        metadata: Map<String, Value>,
    ) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::DimensionChain {
                layer: 0,
                message: "network has no layers".into(),
            });
        }
        if channel_dims.len() != layers.len() + 1 {
            return Err(Error::DimensionChain {
                layer: 0,
                message: format!(
                    "{} layers need {} channel dims, found {}",
                    layers.len(),
                    layers.len() + 1,
                    channel_dims.len()
                ),
            });
        }
        if let Some(pos) = channel_dims.iter().position(|&c| c == 0) {
            return Err(Error::DimensionChain {
                layer: pos,
                message: "channel dimension must be positive".into(),
            });
        }
        for (l, layer) in layers.iter().enumerate() {
            let want = (channel_dims[l], channel_dims[l + 1]);
            for (field, m) in [("theta0", &layer.theta0), ("theta1", &layer.theta1)] {
                if m.dim() != want {
                    return Err(Error::DimensionChain {
                        layer: l,
                        message: format!(
                            "{field} is {}x{}, expected {}x{}",
                            m.nrows(),
                            m.ncols(),
                            want.0,
                            want.1
                        ),
                    });
                }
                if let Some(((row, col), _)) = m.indexed_iter().find(|(_, x)| !x.is_finite()) {
                    return Err(Error::NonFiniteWeight {
                        layer: l,
                        field,
                        row,
                        col,
                    });
                }
            }
        }
        Ok(GcnWeights {
            channel_dims,
            layers,
            metadata,
        })
    }

    pub fn zeros(channel_dims: &[usize]) -> Result<Self> {
        Self::from_fn(channel_dims, Map::new(), |_, _| 0.0)
    }

    /// Uniform in `±1/sqrt(fan_in)`, reproducible per seed.
    pub fn random(channel_dims: &[usize], seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut meta = Map::new();
        meta.insert("init".into(), "uniform-fan-in".into());
        meta.insert("seed".into(), seed.into());
        meta.insert("input_channels".into(), channel_dims.first().copied().unwrap_or(0).into());
        Self::from_fn(channel_dims, meta, |fan_in, _| {
            let bound = 1.0 / (fan_in as f64).sqrt();
            rng.random_range(-bound..=bound)
        })
    }

    fn from_fn(
        channel_dims: &[usize],
        metadata: Map<String, Value>,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        if channel_dims.len() < 2 {
            return Err(Error::DimensionChain {
                layer: 0,
                message: "need at least input and output channel dims".into(),
            });
        }
        let layers = channel_dims
            .windows(2)
            .enumerate()
            .map(|(l, w)| GcnLayer {
                theta0: Array2::from_shape_simple_fn((w[0], w[1]), || f(w[0], l)),
                theta1: Array2::from_shape_simple_fn((w[0], w[1]), || f(w[0], l)),
            })
            .collect();
        Self::new(channel_dims.to_vec(), layers, metadata)
    }

    pub fn channel_dims(&self) -> &[usize] {
        &self.channel_dims
    }

    pub fn layers(&self) -> &[GcnLayer] {
        &self.layers
    }

    pub fn metadata(&self) -> &Map<String, Value> {
        &self.metadata
    }

    pub fn num_maps(&self) -> usize {
        *self.channel_dims.last().expect("validated non-empty")
    }

    pub fn to_json(&self) -> String {
        let file = WeightFile {
            channel_dims: self.channel_dims.clone(),
            layers: self
                .layers
                .iter()
                .map(|l| LayerFile {
                    theta0: to_rows(l.theta0.view()),
                    theta1: to_rows(l.theta1.view()),
                })
                .collect(),
            metadata: self.metadata.clone(),
        };
        serde_json::to_string_pretty(&file).expect("weights serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: WeightFile = serde_json::from_str(text).map_err(|e| Error::from_json(text, e))?;
        let mut layers = Vec::with_capacity(file.layers.len());
        for (l, layer) in file.layers.into_iter().enumerate() {
            layers.push(GcnLayer {
                theta0: from_rows(l, "theta0", layer.theta0)?,
                theta1: from_rows(l, "theta1", layer.theta1)?,
            });
        }
        Self::new(file.channel_dims, layers, file.metadata)
    }
}

#[derive(Serialize, Deserialize)]
struct WeightFile {
    channel_dims: Vec<usize>,
    layers: Vec<LayerFile>,
    #[serde(default)]
    metadata: Map<String, Value>,
}

#[derive(Serialize, Deserialize)]
struct LayerFile {
    theta0: Vec<Vec<f64>>,
    theta1: Vec<Vec<f64>>,
}

fn to_rows(m: ArrayView2<'_, f64>) -> Vec<Vec<f64>> {
    m.axis_iter(Axis(0)).map(|r| r.to_vec()).collect()
}

fn from_rows(layer: usize, field: &str, rows: Vec<Vec<f64>>) -> Result<Array2<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().position(|r| r.len() != ncols) {
        return Err(Error::DimensionChain {
            layer,
            message: format!("{field} row {bad} has {} entries, expected {ncols}", rows[bad].len()),
        });
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    Ok(Array2::from_shape_vec((nrows, ncols), flat).expect("shape checked"))
}

pub fn load_weights(path: impl AsRef<Path>) -> Result<GcnWeights> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).in_file(path))?;
    GcnWeights::from_json(&text).map_err(|e| e.in_file(path))
}

pub fn save_weights(w: &GcnWeights, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, w.to_json())?;
    Ok(())
}

/// `m x n` matrix; row `k` is the k-th map over the vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbabilityMaps {
    values: Vec<f64>,
    num_maps: usize,
    num_vertices: usize,
    fingerprint: String,
}

impl ProbabilityMaps {
    pub fn new(rows: Vec<Vec<f64>>, num_vertices: usize, fingerprint: String) -> Result<Self> {
        let num_maps = rows.len();
        let mut values = Vec::with_capacity(num_maps * num_vertices);
        for row in rows {
            if row.len() != num_vertices {
                return Err(Error::DimensionMismatch {
                    expected: num_vertices,
                    found: row.len(),
                });
            }
            if let Some(x) = row.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::InvalidParameter(format!("probability {x} outside [0, 1]")));
            }
            values.extend(row);
        }
        Ok(ProbabilityMaps {
            values,
            num_maps,
            num_vertices,
            fingerprint,
        })
    }

    pub fn num_maps(&self) -> usize {
        self.num_maps
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k * self.num_vertices..(k + 1) * self.num_vertices]
    }

    pub fn get(&self, k: usize, v: usize) -> f64 {
        self.values[k * self.num_vertices + v]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Fingerprint of the graph the maps were computed for.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }
}

/// SHA-256 over the vertex count and sorted edge list, hex encoded.
pub fn graph_fingerprint(g: &Graph) -> String {
    let mut h = Sha256::new();
    h.update((g.n() as u64).to_le_bytes());
    for (u, v) in g.edges() {
        h.update((u as u64).to_le_bytes());
        h.update((v as u64).to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Dense `D^-1/2 A D^-1/2`.
pub fn normalized_adjacency(g: &Graph) -> Array2<f64> {
    let inv = inv_sqrt_degrees(g);
    let mut a = Array2::zeros((g.n(), g.n()));
    for (u, v) in g.edges() {
        let x = inv[u] * inv[v];
        a[[u, v]] = x;
        a[[v, u]] = x;
    }
    a
}

fn inv_sqrt_degrees(g: &Graph) -> Vec<f64> {
    (0..g.n())
        .map(|v| match g.degree(v) {
            0 => 0.0,
            d => 1.0 / (d as f64).sqrt(),
        })
        .collect()
}

/// `Â · x` without materialising `Â`.
fn propagate(g: &Graph, inv: &[f64], x: &Array2<f64>) -> Array2<f64> {
    let mut out = Array2::zeros(x.dim());
    for (i, mut row) in out.axis_iter_mut(Axis(0)).enumerate() {
        if inv[i] == 0.0 {
            continue;
        }
        for &j in g.neighbors(i) {
            row.scaled_add(inv[j], &x.row(j));
        }
        row *= inv[i];
    }
    out
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

pub fn forward(g: &Graph, w: &GcnWeights) -> ProbabilityMaps {
    let n = g.n();
    let inv = inv_sqrt_degrees(g);
    let mut h = Array2::<f64>::ones((n, w.channel_dims[0]));
    let last = w.layers.len() - 1;
    for (l, layer) in w.layers.iter().enumerate() {
        let mut next = h.dot(&layer.theta0);
        next += &propagate(g, &inv, &h.dot(&layer.theta1));
        if l == last {
            next.mapv_inplace(sigmoid);
        } else {
            next.mapv_inplace(|x| x.max(0.0));
        }
        h = next;
    }
    let m = w.num_maps();
    let values = h.t().iter().copied().collect::<Vec<_>>();
    debug_assert_eq!(values.len(), m * n);
    ProbabilityMaps {
        values,
        num_maps: m,
        num_vertices: n,
        fingerprint: graph_fingerprint(g),
    }
}
