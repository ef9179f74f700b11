//! Algebraic coordinates via Jacobi over-relaxation, and the distance /
//! similarity measures derived from them.
//!
//! Each trial relaxes a random test vector over the graph for a fixed number
//! of sweeps. Two nodes that stay close across many independent trials are
//! considered locally similar.

use std::fs::File;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, NodeId, Part};
use crate::rng::{salt, stream};

/// Relaxed test-vector coordinates: `trials` rows over all nodes (part A
/// first). Every entry stays in [0,1].
#[derive(Clone, Debug)]
pub struct AlgebraicCoordinates {
    pub trials: usize,
    pub iterations: usize,
    pub damping: f64,
    pub seed: u64,
    len_a: usize,
    len_b: usize,
    /// trials x (len_a + len_b), row-major by trial.
    data: Vec<f64>,
}

impl AlgebraicCoordinates {
    pub fn node_count(&self) -> usize {
        self.len_a + self.len_b
    }

    fn unified(&self, v: NodeId) -> Result<usize> {
        let (offset, bound) = match v.part {
            Part::A => (0, self.len_a),
            Part::B => (self.len_a, self.len_b),
        };
        if v.index >= bound {
            return Err(Error::UnknownNode(v.to_string()));
        }
        Ok(offset + v.index)
    }

    pub fn coordinate(&self, trial: usize, v: NodeId) -> Result<f64> {
        Ok(self.data[trial * self.node_count() + self.unified(v)?])
    }

    fn column(&self, u: usize) -> impl Iterator<Item = f64> + '_ {
        let n = self.node_count();
        (0..self.trials).map(move |r| self.data[r * n + u])
    }
}

/// One simultaneous (Jacobi) sweep over all nodes. Each node moves toward
/// the degree-weighted average of its neighbors; neighbors with small
/// degree pull harder. Isolated nodes keep their coordinate.
pub fn jor_sweep(g: &BipartiteGraph, cur: &[f64], damping: f64) -> Vec<f64> {
    let len_a = g.len_a();
    let mut next = vec![0.0; cur.len()];
    for v in g.nodes() {
        let u = g.unified(v);
        let nbrs = g.neighbors(v);
        if nbrs.is_empty() {
            next[u] = cur[u];
            continue;
        }
        let mut num = 0.0;
        let mut den = 0.0;
        let opposite = v.part.other();
        for &w in nbrs {
            let wid = NodeId { part: opposite, index: w };
            let inv_deg = 1.0 / g.degree(wid) as f64;
            let wu = match opposite {
                Part::A => w,
                Part::B => len_a + w,
            };
            num += cur[wu] * inv_deg;
            den += inv_deg;
        }
        next[u] = damping * cur[u] + (1.0 - damping) * num / den;
    }
    next
}

/// Run `iterations` Jacobi sweeps on `trials` independently seeded test
/// vectors initialized uniformly in [0,1]. Trials run in parallel; the
/// result depends only on the arguments.
pub fn jor_relax(
    g: &BipartiteGraph,
    trials: usize,
    iterations: usize,
    damping: f64,
    seed: u64,
) -> Result<AlgebraicCoordinates> {
    if g.node_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if trials == 0 || iterations == 0 {
        return Err(Error::Parameter("trials and iterations must be positive".into()));
    }
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::Parameter(format!("damping must be in (0,1), got {damping}")));
    }
    let n = g.node_count();
    let rows: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream(seed, &[salt::JOR, trial as u64]);
            let mut cur: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            for _ in 0..iterations {
                cur = jor_sweep(g, &cur, damping);
            }
            cur
        })
        .collect();
    let mut data = Vec::with_capacity(trials * n);
    for row in rows {
        data.extend(row);
    }
    Ok(AlgebraicCoordinates {
        trials,
        iterations,
        damping,
        seed,
        len_a: g.len_a(),
        len_b: g.len_b(),
        data,
    })
}

/// l2 gap between two nodes' coordinates across all trials.
pub fn alg_distance(coords: &AlgebraicCoordinates, i: NodeId, j: NodeId) -> Result<f64> {
    let ui = coords.unified(i)?;
    let uj = coords.unified(j)?;
    let sum: f64 = coords
        .column(ui)
        .zip(coords.column(uj))
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(sum.sqrt())
}

/// Rescale distance to the unit interval: 1 for identical coordinates,
/// 0 at the maximal possible gap of sqrt(trials).
pub fn alg_similarity(coords: &AlgebraicCoordinates, i: NodeId, j: NodeId) -> Result<f64> {
    let d = alg_distance(coords, i, j)?;
    let max = (coords.trials as f64).sqrt();
    Ok((max - d) / max)
}

/// Per-edge similarity cache, aligned with the graph's adjacency.
#[derive(Clone, Debug)]
pub struct EdgeSimilarities {
    by_a: Vec<Vec<f64>>,
    pub seed: u64,
}

impl EdgeSimilarities {
    /// Similarity of edge (a, b); `None` when the pair is not an edge.
    pub fn get(&self, g: &BipartiteGraph, a: usize, b: usize) -> Option<f64> {
        let pos = g.neighbors(NodeId::a(a)).binary_search(&b).ok()?;
        Some(self.by_a[a][pos])
    }

    /// Build from an explicit per-edge function (test and tooling hook).
    pub fn from_fn(g: &BipartiteGraph, seed: u64, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let by_a = (0..g.len_a())
            .map(|a| g.neighbors(NodeId::a(a)).iter().map(|&b| f(a, b)).collect())
            .collect();
        EdgeSimilarities { by_a, seed }
    }
}

/// Compute s(a, b) for every edge of `g`; the sampler reads these instead
/// of recomputing pair similarities.
pub fn edge_similarities(g: &BipartiteGraph, coords: &AlgebraicCoordinates) -> Result<EdgeSimilarities> {
    let by_a = (0..g.len_a())
        .map(|a| {
            g.neighbors(NodeId::a(a))
                .iter()
                .map(|&b| alg_similarity(coords, NodeId::a(a), NodeId::b(b)))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EdgeSimilarities { by_a, seed: coords.seed })
}

/// Dump coordinates as a text matrix: one node per line, one column per
/// trial, with a header recording the relaxation parameters.
pub fn write_coordinates(
    coords: &AlgebraicCoordinates,
    g: &BipartiteGraph,
    w: &mut impl Write,
) -> Result<()> {
    writeln!(
        w,
        "# algdist R={} K={} lambda={} seed={}",
        coords.trials, coords.iterations, coords.damping, coords.seed
    )?;
    for v in g.nodes() {
        write!(w, "{}", g.name(v))?;
        for r in 0..coords.trials {
            write!(w, " {}", coords.coordinate(r, v)?)?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_coordinates_path(
    coords: &AlgebraicCoordinates,
    g: &BipartiteGraph,
    path: impl AsRef<Path>,
) -> Result<()> {
    let mut f = File::create(path)?;
    write_coordinates(coords, g, &mut f)
}

/// Reload a coordinate dump produced by [`write_coordinates`].
pub fn read_coordinates(g: &BipartiteGraph, reader: impl BufRead) -> Result<AlgebraicCoordinates> {
    let mut trials = 0usize;
    let mut iterations = 0usize;
    let mut damping = 0.0f64;
    let mut seed = 0u64;
    let mut per_node: Vec<Option<Vec<f64>>> = vec![None; g.node_count()];
    let mut saw_header = false;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        if let Some(rest) = line.strip_prefix("# algdist") {
            saw_header = true;
            for tok in rest.split_whitespace() {
                let parse_err = |e: String| Error::Parse { line: lineno, msg: e };
                if let Some(v) = tok.strip_prefix("R=") {
                    trials = v.parse().map_err(|e| parse_err(format!("bad R: {e}")))?;
                } else if let Some(v) = tok.strip_prefix("K=") {
                    iterations = v.parse().map_err(|e| parse_err(format!("bad K: {e}")))?;
                } else if let Some(v) = tok.strip_prefix("lambda=") {
                    damping = v.parse().map_err(|e| parse_err(format!("bad lambda: {e}")))?;
                } else if let Some(v) = tok.strip_prefix("seed=") {
                    seed = v.parse().map_err(|e| parse_err(format!("bad seed: {e}")))?;
                }
            }
            continue;
        }
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let name = it.next().ok_or(Error::Parse { line: lineno, msg: "empty line".into() })?;
        let v = g.node_by_name(name).ok_or_else(|| Error::UnknownNode(name.to_string()))?;
        let vals = it
            .map(|s| s.parse::<f64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad coordinate: {e}"),
            }))
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != trials {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {trials} coordinates, got {}", vals.len()),
            });
        }
        per_node[g.unified(v)] = Some(vals);
    }
    if !saw_header {
        return Err(Error::Parse { line: 1, msg: "missing algdist header".into() });
    }
    let n = g.node_count();
    let mut data = vec![0.0; trials * n];
    for (u, vals) in per_node.into_iter().enumerate() {
        let vals = vals.ok_or_else(|| {
            Error::UnknownNode(g.name(g.node_from_unified(u)).to_string())
        })?;
        for (r, val) in vals.into_iter().enumerate() {
            data[r * n + u] = val;
        }
    }
    Ok(AlgebraicCoordinates {
        trials,
        iterations,
        damping,
        seed,
        len_a: g.len_a(),
        len_b: g.len_b(),
        data,
    })
}
