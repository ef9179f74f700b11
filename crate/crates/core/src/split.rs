//! Connectivity-preserving holdout splits and negative-pair sampling.

use std::collections::{HashSet, VecDeque};
use std::fs::File;
use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{load_edge_list, BipartiteGraph, NodeId, Part};
use crate::rng::{salt, stream};

/// A train/test partition of a graph's edges.
///
/// `removed_edges` are the positive test examples; `negative_edges` are
/// absent pairs of equal count. The training graph keeps every node and the
/// component count of the original graph.
#[derive(Clone, Debug)]
pub struct HoldoutSplit {
    pub training_graph: BipartiteGraph,
    pub removed_edges: Vec<(usize, usize)>,
    pub negative_edges: Vec<(usize, usize)>,
    pub holdout_ratio: f64,
    pub seed: u64,
}

/// The removal phase of a split: visit edges in seeded random order and
/// drop each with probability `h` unless dropping it would change the
/// component count. Returns the training graph and the removed edges.
pub fn holdout_removals(
    g: &BipartiteGraph,
    h: f64,
    seed: u64,
) -> Result<(BipartiteGraph, Vec<(usize, usize)>)> {
    if !(0.0..=1.0).contains(&h) || !h.is_finite() {
        return Err(Error::Parameter(format!("holdout ratio must be in [0,1], got {h}")));
    }
    let mut rng = stream(seed, &[salt::SPLIT]);
    let mut order = g.edges();
    order.shuffle(&mut rng);

    // Mutable adjacency as hash sets; only reachability is read from them,
    // so iteration order never leaks into the result.
    let mut adj_a: Vec<HashSet<usize>> = (0..g.len_a())
        .map(|a| g.neighbors(NodeId::a(a)).iter().copied().collect())
        .collect();
    let mut adj_b: Vec<HashSet<usize>> = (0..g.len_b())
        .map(|b| g.neighbors(NodeId::b(b)).iter().copied().collect())
        .collect();

    let mut removed = Vec::new();
    for (a, b) in order {
        if rng.gen::<f64>() >= h {
            continue;
        }
        adj_a[a].remove(&b);
        adj_b[b].remove(&a);
        if reachable(&adj_a, &adj_b, g.len_a(), NodeId::a(a), NodeId::b(b)) {
            removed.push((a, b));
        } else {
            adj_a[a].insert(b);
            adj_b[b].insert(a);
        }
    }

    let names_a: Vec<String> = (0..g.len_a()).map(|a| g.name(NodeId::a(a)).to_string()).collect();
    let names_b: Vec<String> = (0..g.len_b()).map(|b| g.name(NodeId::b(b)).to_string()).collect();
    let mut kept = Vec::with_capacity(g.edge_count() - removed.len());
    for (a, b) in g.edges() {
        if adj_a[a].contains(&b) {
            kept.push((a, b));
        }
    }
    let training_graph = BipartiteGraph::assemble(names_a, names_b, kept)?;
    removed.sort_unstable();
    Ok((training_graph, removed))
}

/// Full split: removals plus an equal count of uniformly sampled absent
/// pairs. Fails when the graph cannot supply enough negatives (for
/// example, a complete bipartite graph with h > 0).
pub fn holdout_split(g: &BipartiteGraph, h: f64, seed: u64) -> Result<HoldoutSplit> {
    let (training_graph, removed) = holdout_removals(g, h, seed)?;
    let negative_edges =
        sample_negatives_rng(g, removed.len(), &mut stream(seed, &[salt::NEGATIVE]))?;
    Ok(HoldoutSplit {
        training_graph,
        removed_edges: removed,
        negative_edges,
        holdout_ratio: h,
        seed,
    })
}

/// BFS from `from` to `to` over the mutable adjacency, bounded by the
/// component containing `from`.
fn reachable(
    adj_a: &[HashSet<usize>],
    adj_b: &[HashSet<usize>],
    len_a: usize,
    from: NodeId,
    to: NodeId,
) -> bool {
    let unified = |v: NodeId| match v.part {
        Part::A => v.index,
        Part::B => len_a + v.index,
    };
    let target = unified(to);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(unified(from));
    queue.push_back(from);
    while let Some(v) = queue.pop_front() {
        let nbrs = match v.part {
            Part::A => &adj_a[v.index],
            Part::B => &adj_b[v.index],
        };
        for &w in nbrs {
            let wid = NodeId { part: v.part.other(), index: w };
            let wu = unified(wid);
            if wu == target {
                return true;
            }
            if seen.insert(wu) {
                queue.push_back(wid);
            }
        }
    }
    false
}

/// Uniformly sample `count` distinct cross-part pairs absent from `g`.
pub fn sample_negative_pairs(g: &BipartiteGraph, count: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    sample_negatives_rng(g, count, &mut stream(seed, &[salt::NEGATIVE]))
}

pub(crate) fn sample_negatives_rng(
    g: &BipartiteGraph,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let total_pairs = g.len_a() * g.len_b();
    let non_edges = total_pairs - g.edge_count();
    if non_edges == 0 {
        return Err(Error::NoNegatives);
    }
    if count > non_edges {
        return Err(Error::ExhaustedNegatives { requested: count, available: non_edges });
    }

    // Rejection sampling stalls on dense graphs; enumerate instead when the
    // request covers a large share of the non-edges.
    if non_edges <= 2 * count || g.edge_count() * 2 > total_pairs {
        let mut all: Vec<(usize, usize)> = Vec::with_capacity(non_edges);
        for a in 0..g.len_a() {
            let nbrs = g.neighbors(NodeId::a(a));
            let mut it = nbrs.iter().copied().peekable();
            for b in 0..g.len_b() {
                if it.peek() == Some(&b) {
                    it.next();
                } else {
                    all.push((a, b));
                }
            }
        }
        all.shuffle(rng);
        all.truncate(count);
        return Ok(all);
    }

    let mut seen = HashSet::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let a = rng.gen_range(0..g.len_a());
        let b = rng.gen_range(0..g.len_b());
        if g.has_edge(a, b) || !seen.insert((a, b)) {
            continue;
        }
        out.push((a, b));
    }
    Ok(out)
}

impl HoldoutSplit {
    /// Write the three-section manifest: training edges, removed positives,
    /// sampled negatives, with a header recording h and seed.
    pub fn write_manifest(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "# holdout h={} seed={}", self.holdout_ratio, self.seed)?;
        writeln!(w, "# section train")?;
        self.training_graph.write_edge_list(w)?;
        writeln!(w, "# section removed")?;
        self.write_pairs(w, &self.removed_edges)?;
        writeln!(w, "# section negatives")?;
        self.write_pairs(w, &self.negative_edges)?;
        Ok(())
    }

    fn write_pairs(&self, w: &mut impl Write, pairs: &[(usize, usize)]) -> Result<()> {
        let g = &self.training_graph;
        for &(a, b) in pairs {
            writeln!(w, "{}\t{}", g.name(NodeId::a(a)), g.name(NodeId::b(b)))?;
        }
        Ok(())
    }

    pub fn write_manifest_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut f = File::create(path)?;
        self.write_manifest(&mut f)
    }

    /// Reload a manifest written by [`HoldoutSplit::write_manifest`].
    pub fn read_manifest(reader: impl BufRead) -> Result<HoldoutSplit> {
        let mut h = None;
        let mut seed = None;
        let mut sections: Vec<(String, Vec<String>)> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            if let Some(rest) = line.strip_prefix("# holdout") {
                for tok in rest.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("h=") {
                        h = Some(v.parse::<f64>().map_err(|e| Error::Parse {
                            line: lineno,
                            msg: format!("bad h: {e}"),
                        })?);
                    } else if let Some(v) = tok.strip_prefix("seed=") {
                        seed = Some(v.parse::<u64>().map_err(|e| Error::Parse {
                            line: lineno,
                            msg: format!("bad seed: {e}"),
                        })?);
                    }
                }
            } else if let Some(name) = line.strip_prefix("# section ") {
                sections.push((name.trim().to_string(), Vec::new()));
            } else if line.trim().is_empty() || line.starts_with('#') {
                continue;
            } else {
                match sections.last_mut() {
                    Some((_, lines)) => lines.push(line),
                    None => {
                        return Err(Error::Parse { line: lineno, msg: "edge before any section".into() })
                    }
                }
            }
        }
        let h = h.ok_or_else(|| Error::Parse { line: 1, msg: "missing holdout header".into() })?;
        let seed = seed.ok_or_else(|| Error::Parse { line: 1, msg: "missing seed".into() })?;
        let mut train = None;
        let mut removed_raw = Vec::new();
        let mut negative_raw = Vec::new();
        for (name, lines) in sections {
            match name.as_str() {
                "train" => train = Some(load_edge_list(lines.join("\n").as_bytes())?),
                "removed" => removed_raw = lines,
                "negatives" => negative_raw = lines,
                other => {
                    return Err(Error::Parse { line: 0, msg: format!("unknown section `{other}`") })
                }
            }
        }
        let training_graph = train.ok_or_else(|| Error::Parse { line: 0, msg: "missing train section".into() })?;
        let resolve = |lines: Vec<String>| -> Result<Vec<(usize, usize)>> {
            lines
                .iter()
                .map(|line| {
                    let mut it = line.split('\t');
                    let (an, bn) = (it.next().unwrap_or(""), it.next().unwrap_or(""));
                    let a = training_graph
                        .node_by_name(an)
                        .filter(|v| v.part == Part::A)
                        .ok_or_else(|| Error::UnknownNode(an.to_string()))?;
                    let b = training_graph
                        .node_by_name(bn)
                        .filter(|v| v.part == Part::B)
                        .ok_or_else(|| Error::UnknownNode(bn.to_string()))?;
                    Ok((a.index, b.index))
                })
                .collect()
        };
        Ok(HoldoutSplit {
            removed_edges: resolve(removed_raw)?,
            negative_edges: resolve(negative_raw)?,
            training_graph,
            holdout_ratio: h,
            seed,
        })
    }
}
