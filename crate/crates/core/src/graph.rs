//! Bipartite graph storage, edge-list ingestion, degree pruning, and
//! neighborhood walk sampling.
//!
//! Nodes live in two disjoint parts A and B with dense indices per part;
//! all edges cross parts. External string ids are kept in a side table and
//! every computation runs on the dense indices.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};

/// Which side of the bipartition a node belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Part {
    A,
    B,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::A => Part::B,
            Part::B => Part::A,
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::A => write!(f, "A"),
            Part::B => write!(f, "B"),
        }
    }
}

/// A node handle: part plus dense index within that part.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct NodeId {
    pub part: Part,
    pub index: usize,
}

impl NodeId {
    pub fn a(index: usize) -> NodeId {
        NodeId { part: Part::A, index }
    }

    pub fn b(index: usize) -> NodeId {
        NodeId { part: Part::B, index }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.part, self.index)
    }
}

/// How a k-hop partner is drawn.
///
/// `Walk` takes k uniform single-neighbor steps, which biases toward
/// high-degree intermediates but never materializes the k-hop set.
/// `SetUniform` materializes the exact k-hop neighbor set and draws
/// uniformly from it; quadratic near hubs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KhopMode {
    Walk,
    SetUniform,
}

/// Undirected bipartite graph with sorted cross-part adjacency.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    adj_a: Vec<Vec<usize>>,
    adj_b: Vec<Vec<usize>>,
    names_a: Vec<String>,
    names_b: Vec<String>,
    name_map: HashMap<String, NodeId>,
    edge_count: usize,
}

impl BipartiteGraph {
    /// Build a graph from explicit name tables and (a_index, b_index) edges.
    /// Duplicate edges are collapsed. Nodes without edges are kept, so this
    /// can represent mid-pipeline graphs with isolated nodes.
    pub fn assemble(
        names_a: Vec<String>,
        names_b: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<BipartiteGraph> {
        let na = names_a.len();
        let nb = names_b.len();
        let mut name_map = HashMap::with_capacity(na + nb);
        for (i, name) in names_a.iter().enumerate() {
            if name_map.insert(name.clone(), NodeId::a(i)).is_some() {
                return Err(Error::Parameter(format!("duplicate node name `{name}`")));
            }
        }
        for (j, name) in names_b.iter().enumerate() {
            if let Some(prev) = name_map.insert(name.clone(), NodeId::b(j)) {
                return if prev.part == Part::A {
                    Err(Error::BipartiteViolation(name.clone()))
                } else {
                    Err(Error::Parameter(format!("duplicate node name `{name}`")))
                };
            }
        }

        let mut adj_a = vec![Vec::new(); na];
        let mut adj_b = vec![Vec::new(); nb];
        let mut seen = HashSet::new();
        let mut edge_count = 0;
        for (a, b) in edges {
            if a >= na || b >= nb {
                return Err(Error::Parameter(format!(
                    "edge ({a}, {b}) out of range for |A|={na}, |B|={nb}"
                )));
            }
            if seen.insert((a, b)) {
                adj_a[a].push(b);
                adj_b[b].push(a);
                edge_count += 1;
            }
        }
        for list in adj_a.iter_mut().chain(adj_b.iter_mut()) {
            list.sort_unstable();
        }
        Ok(BipartiteGraph {
            adj_a,
            adj_b,
            names_a,
            names_b,
            name_map,
            edge_count,
        })
    }

    /// Convenience constructor with synthetic names `a{i}` / `b{j}`.
    pub fn from_index_edges(
        na: usize,
        nb: usize,
        edges: &[(usize, usize)],
    ) -> Result<BipartiteGraph> {
        let names_a = (0..na).map(|i| format!("a{i}")).collect();
        let names_b = (0..nb).map(|j| format!("b{j}")).collect();
        BipartiteGraph::assemble(names_a, names_b, edges.iter().copied())
    }

    pub fn len_a(&self) -> usize {
        self.adj_a.len()
    }

    pub fn len_b(&self) -> usize {
        self.adj_b.len()
    }

    pub fn node_count(&self) -> usize {
        self.len_a() + self.len_b()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn part_len(&self, part: Part) -> usize {
        match part {
            Part::A => self.len_a(),
            Part::B => self.len_b(),
        }
    }

    /// Sorted opposite-part neighbor indices of `v`.
    pub fn neighbors(&self, v: NodeId) -> &[usize] {
        match v.part {
            Part::A => &self.adj_a[v.index],
            Part::B => &self.adj_b[v.index],
        }
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj_a[a].binary_search(&b).is_ok()
    }

    /// All edges as (a_index, b_index), ordered by a then b.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (a, nbrs) in self.adj_a.iter().enumerate() {
            for &b in nbrs {
                out.push((a, b));
            }
        }
        out
    }

    /// Iterate all nodes, part A first, each part in index order.
    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.len_a())
            .map(NodeId::a)
            .chain((0..self.len_b()).map(NodeId::b))
    }

    pub fn name(&self, v: NodeId) -> &str {
        match v.part {
            Part::A => &self.names_a[v.index],
            Part::B => &self.names_b[v.index],
        }
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.name_map.get(name).copied()
    }

    /// Flat index over both parts: A nodes first, then B.
    pub fn unified(&self, v: NodeId) -> usize {
        match v.part {
            Part::A => v.index,
            Part::B => self.len_a() + v.index,
        }
    }

    pub fn node_from_unified(&self, u: usize) -> NodeId {
        if u < self.len_a() {
            NodeId::a(u)
        } else {
            NodeId::b(u - self.len_a())
        }
    }

    /// Number of connected components; isolated nodes count as components.
    pub fn component_count(&self) -> usize {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut components = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                let v = self.node_from_unified(u);
                for &w in self.neighbors(v) {
                    let wu = self.unified(NodeId {
                        part: v.part.other(),
                        index: w,
                    });
                    if !seen[wu] {
                        seen[wu] = true;
                        queue.push_back(wu);
                    }
                }
            }
        }
        components
    }

    /// Write the canonical tab-separated edge list. Reloading the output
    /// reproduces identical adjacency and id assignment.
    pub fn write_edge_list(&self, w: &mut impl Write) -> Result<()> {
        for (a, b) in self.edges() {
            writeln!(w, "{}\t{}", self.names_a[a], self.names_b[b])?;
        }
        Ok(())
    }
}

/// One parsed edge-list line: a id, b id, optional weight.
pub(crate) type RawEdge = (String, String, Option<f64>);

/// Parse a tab-separated edge list. `#` lines and blank lines are skipped.
pub(crate) fn parse_edge_lines(reader: impl BufRead) -> Result<Vec<RawEdge>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected 2 or 3 tab-separated fields, got {}", fields.len()),
            });
        }
        let a = fields[0].trim();
        let b = fields[1].trim();
        if a.is_empty() || b.is_empty() {
            return Err(Error::Parse {
                line: lineno,
                msg: "empty node id".into(),
            });
        }
        if a.chars().any(char::is_whitespace) || b.chars().any(char::is_whitespace) {
            return Err(Error::Parse {
                line: lineno,
                msg: "node ids must not contain whitespace".into(),
            });
        }
        let weight = match fields.get(2) {
            Some(s) => Some(s.trim().parse::<f64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad weight `{s}`: {e}"),
            })?),
            None => None,
        };
        out.push((a.to_string(), b.to_string(), weight));
    }
    Ok(out)
}

/// Build a graph from parsed raw edges, assigning ids in first-seen order.
pub(crate) fn graph_from_raw(raw: &[RawEdge]) -> Result<BipartiteGraph> {
    let mut name_map: HashMap<&str, NodeId> = HashMap::new();
    let mut names_a = Vec::new();
    let mut names_b = Vec::new();
    let mut edges = Vec::with_capacity(raw.len());
    for (a_name, b_name, _) in raw {
        let a = match name_map.get(a_name.as_str()) {
            Some(id) if id.part == Part::A => id.index,
            Some(_) => return Err(Error::BipartiteViolation(a_name.clone())),
            None => {
                let idx = names_a.len();
                names_a.push(a_name.clone());
                name_map.insert(a_name.as_str(), NodeId::a(idx));
                idx
            }
        };
        let b = match name_map.get(b_name.as_str()) {
            Some(id) if id.part == Part::B => id.index,
            Some(_) => return Err(Error::BipartiteViolation(b_name.clone())),
            None => {
                let idx = names_b.len();
                names_b.push(b_name.clone());
                name_map.insert(b_name.as_str(), NodeId::b(idx));
                idx
            }
        };
        edges.push((a, b));
    }
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    BipartiteGraph::assemble(names_a, names_b, edges)
}

/// Load a bipartite graph from a tab-separated edge list. Duplicate lines
/// collapse to one edge; weights are ignored here (rating loaders keep them).
pub fn load_edge_list(reader: impl BufRead) -> Result<BipartiteGraph> {
    let raw = parse_edge_lines(reader)?;
    graph_from_raw(&raw)
}

pub fn load_edge_list_path(path: impl AsRef<Path>) -> Result<BipartiteGraph> {
    load_edge_list(BufReader::new(File::open(path)?))
}

/// Repeatedly delete nodes of degree < `min_degree` until none remain,
/// then relabel the survivors densely (names preserved).
pub fn degree_prune(g: &BipartiteGraph, min_degree: usize) -> Result<BipartiteGraph> {
    let mut alive_a = vec![true; g.len_a()];
    let mut alive_b = vec![true; g.len_b()];
    let mut degree_a: Vec<usize> = g.adj_a.iter().map(Vec::len).collect();
    let mut degree_b: Vec<usize> = g.adj_b.iter().map(Vec::len).collect();

    loop {
        let mut removed_any = false;
        let kill_a: Vec<usize> = (0..g.len_a())
            .filter(|&i| alive_a[i] && degree_a[i] < min_degree)
            .collect();
        let kill_b: Vec<usize> = (0..g.len_b())
            .filter(|&j| alive_b[j] && degree_b[j] < min_degree)
            .collect();
        for &i in &kill_a {
            alive_a[i] = false;
            removed_any = true;
            for &j in &g.adj_a[i] {
                if alive_b[j] {
                    degree_b[j] -= 1;
                }
            }
        }
        for &j in &kill_b {
            alive_b[j] = false;
            removed_any = true;
            for &i in &g.adj_b[j] {
                if alive_a[i] {
                    degree_a[i] -= 1;
                }
            }
        }
        if !removed_any {
            break;
        }
    }

    let mut remap_a = vec![usize::MAX; g.len_a()];
    let mut names_a = Vec::new();
    for i in 0..g.len_a() {
        if alive_a[i] {
            remap_a[i] = names_a.len();
            names_a.push(g.names_a[i].clone());
        }
    }
    let mut remap_b = vec![usize::MAX; g.len_b()];
    let mut names_b = Vec::new();
    for j in 0..g.len_b() {
        if alive_b[j] {
            remap_b[j] = names_b.len();
            names_b.push(g.names_b[j].clone());
        }
    }
    if names_a.is_empty() && names_b.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let mut edges = Vec::new();
    for (a, b) in g.edges() {
        if alive_a[a] && alive_b[b] {
            edges.push((remap_a[a], remap_b[b]));
        }
    }
    BipartiteGraph::assemble(names_a, names_b, edges)
}

/// Draw a `hops`-step partner of `v` (hops in 1..=3). Even hop counts land
/// in `v`'s own part, odd counts in the other part.
pub fn sample_khop(
    g: &BipartiteGraph,
    v: NodeId,
    hops: usize,
    mode: KhopMode,
    rng: &mut impl Rng,
) -> Result<NodeId> {
    if !(1..=3).contains(&hops) {
        return Err(Error::Parameter(format!("hops must be 1..=3, got {hops}")));
    }
    if g.degree(v) == 0 {
        return Err(Error::NoNeighbor(g.name(v).to_string()));
    }
    match mode {
        KhopMode::Walk => {
            let mut cur = v;
            for _ in 0..hops {
                let nbrs = g.neighbors(cur);
                let pick = nbrs[rng.gen_range(0..nbrs.len())];
                cur = NodeId {
                    part: cur.part.other(),
                    index: pick,
                };
            }
            Ok(cur)
        }
        KhopMode::SetUniform => {
            // Frontier sets are materialized exactly; sorted vecs keep the
            // draw deterministic for a fixed stream.
            let mut frontier: Vec<NodeId> = vec![v];
            let mut part = v.part;
            for _ in 0..hops {
                let mut next = HashSet::new();
                for &u in &frontier {
                    for &w in g.neighbors(u) {
                        next.insert(w);
                    }
                }
                part = part.other();
                let mut sorted: Vec<usize> = next.into_iter().collect();
                sorted.sort_unstable();
                frontier = sorted.into_iter().map(|i| NodeId { part, index: i }).collect();
            }
            Ok(frontier[rng.gen_range(0..frontier.len())])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{salt, stream};
    use std::io::Cursor;

    fn load(text: &str) -> Result<BipartiteGraph> {
        load_edge_list(Cursor::new(text.to_string()))
    }

    #[test]
    fn load_two_users_one_item() {
        let g = load("u1\tm1\nu2\tm1\n").unwrap();
        assert_eq!(g.len_a(), 2);
        assert_eq!(g.len_b(), 1);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn duplicate_lines_collapse() {
        let g = load("u1\tm1\nu1\tm1\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn id_in_both_columns_is_rejected() {
        let err = load("u1\tm1\nm1\tu1\n").unwrap_err();
        assert!(matches!(err, Error::BipartiteViolation(id) if id == "m1"));
    }

    #[test]
    fn malformed_line_reports_number() {
        let err = load("u1\tm1\nbadline\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let g = load("# header\nu1\tm1\n\nu2\tm2\n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn weights_parse_but_do_not_change_structure() {
        let g = load("u1\tm1\t3.5\nu2\tm1\t1\n").unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(load("u1\tm1\tnotanumber\n").is_err());
    }

    #[test]
    fn reload_is_idempotent() {
        let g = load("u3\tm9\nu1\tm9\nu3\tm2\n").unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let g2 = load_edge_list(Cursor::new(buf)).unwrap();
        assert_eq!(g.edges(), g2.edges());
        for v in g.nodes() {
            assert_eq!(g.name(v), g2.name(v));
        }
    }

    #[test]
    fn prune_cascade_empties_path_with_pendant() {
        // a1-b1-a2 plus pendant b2-a2
        let g = BipartiteGraph::from_index_edges(2, 2, &[(0, 0), (1, 0), (1, 1)]).unwrap();
        let err = degree_prune(&g, 2).unwrap_err();
        assert!(matches!(err, Error::EmptyGraph));
    }

    #[test]
    fn prune_keeps_k22() {
        let g = BipartiteGraph::from_index_edges(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        let pruned = degree_prune(&g, 2).unwrap();
        assert_eq!(pruned.edges(), g.edges());
    }

    #[test]
    fn prune_with_zero_threshold_is_identity() {
        let g = BipartiteGraph::from_index_edges(2, 2, &[(0, 0), (1, 1)]).unwrap();
        let pruned = degree_prune(&g, 0).unwrap();
        assert_eq!(pruned.edges(), g.edges());
    }

    #[test]
    fn prune_relabels_densely_and_keeps_names() {
        // a0 pendant; a1,a2 each tied to both b1,b2 -> pruning deg<2 drops a0,b0
        let g = BipartiteGraph::from_index_edges(
            3,
            3,
            &[(0, 0), (1, 1), (1, 2), (2, 1), (2, 2)],
        )
        .unwrap();
        let pruned = degree_prune(&g, 2).unwrap();
        assert_eq!(pruned.len_a(), 2);
        assert_eq!(pruned.len_b(), 2);
        assert_eq!(pruned.name(NodeId::a(0)), "a1");
        assert_eq!(pruned.name(NodeId::b(1)), "b2");
    }

    #[test]
    fn component_count_counts_isolated() {
        let g = BipartiteGraph::from_index_edges(3, 2, &[(0, 0), (1, 1)]).unwrap();
        // a2 is isolated
        assert_eq!(g.component_count(), 3);
    }

    #[test]
    fn khop_one_hop_on_single_edge() {
        let g = BipartiteGraph::from_index_edges(1, 1, &[(0, 0)]).unwrap();
        let mut rng = stream(1, &[salt::SAMPLE]);
        let u = sample_khop(&g, NodeId::a(0), 1, KhopMode::Walk, &mut rng).unwrap();
        assert_eq!(u, NodeId::b(0));
    }

    #[test]
    fn khop_two_hop_path_splits_evenly() {
        // a0-b0-a1
        let g = BipartiteGraph::from_index_edges(2, 1, &[(0, 0), (1, 0)]).unwrap();
        let mut rng = stream(3, &[salt::SAMPLE]);
        let mut hits = [0usize; 2];
        let draws = 10_000;
        for _ in 0..draws {
            let u = sample_khop(&g, NodeId::a(0), 2, KhopMode::Walk, &mut rng).unwrap();
            assert_eq!(u.part, Part::A);
            hits[u.index] += 1;
        }
        let frac = hits[0] as f64 / draws as f64;
        assert!((frac - 0.5).abs() < 0.03, "frac {frac}");
    }

    #[test]
    fn khop_two_hop_star_is_uniform() {
        // b0 joined to a0..a4
        let g =
            BipartiteGraph::from_index_edges(5, 1, &[(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)])
                .unwrap();
        for mode in [KhopMode::Walk, KhopMode::SetUniform] {
            let mut rng = stream(5, &[salt::SAMPLE]);
            let mut hits = [0usize; 5];
            let draws = 10_000;
            for _ in 0..draws {
                let u = sample_khop(&g, NodeId::a(0), 2, mode, &mut rng).unwrap();
                hits[u.index] += 1;
            }
            for h in hits {
                let frac = h as f64 / draws as f64;
                assert!((frac - 0.2).abs() < 0.03, "mode {mode:?} frac {frac}");
            }
        }
    }

    #[test]
    fn khop_parity() {
        let g = BipartiteGraph::from_index_edges(3, 3, &[(0, 0), (0, 1), (1, 1), (2, 2), (1, 2)])
            .unwrap();
        let mut rng = stream(9, &[salt::SAMPLE]);
        for hops in 1..=3 {
            for v in g.nodes() {
                let u = sample_khop(&g, v, hops, KhopMode::Walk, &mut rng).unwrap();
                if hops % 2 == 0 {
                    assert_eq!(u.part, v.part);
                } else {
                    assert_eq!(u.part, v.part.other());
                }
            }
        }
    }

    #[test]
    fn khop_rejects_bad_hops() {
        let g = BipartiteGraph::from_index_edges(1, 1, &[(0, 0)]).unwrap();
        let mut rng = stream(1, &[salt::SAMPLE]);
        assert!(sample_khop(&g, NodeId::a(0), 0, KhopMode::Walk, &mut rng).is_err());
        assert!(sample_khop(&g, NodeId::a(0), 4, KhopMode::Walk, &mut rng).is_err());
    }
}
