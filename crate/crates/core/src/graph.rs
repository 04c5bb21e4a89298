//! Undirected social graph in compressed sparse row form.
//!
//! Original node ids are kept sorted, so the dense index of a node preserves
//! id order and every neighbor list is sorted by id as well.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type NodeId = u64;

#[derive(Debug, Clone, Default)]
pub struct SocialGraph {
    ids: Vec<NodeId>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    self_loops_dropped: usize,
}

impl PartialEq for SocialGraph {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.offsets == other.offsets && self.targets == other.targets
    }
}

impl Eq for SocialGraph {}

impl SocialGraph {
    /// Builds a graph from undirected edges. Duplicates (in either direction)
    /// collapse; self-loops are dropped and counted.
    pub fn from_edges<I>(edges: I) -> Self
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        Self::from_nodes_and_edges(std::iter::empty(), edges)
    }

    /// Like [`from_edges`](Self::from_edges), also registering `nodes` so that
    /// isolated vertices exist.
    pub fn from_nodes_and_edges<N, I>(nodes: N, edges: I) -> Self
    where
        N: IntoIterator<Item = NodeId>,
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut ids: Vec<NodeId> = nodes.into_iter().collect();
        let mut pairs = Vec::new();
        let mut self_loops = 0;
        for (u, v) in edges {
            if u == v {
                self_loops += 1;
                continue;
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        pairs.dedup();
        ids.reserve(pairs.len() * 2);
        for &(u, v) in &pairs {
            ids.push(u);
            ids.push(v);
        }
        ids.sort_unstable();
        ids.dedup();

        let n = ids.len();
        assert!(n <= u32::MAX as usize, "graph exceeds u32 node index space");
        let index = |id: NodeId| ids.binary_search(&id).expect("endpoint registered") as u32;
        let dense: Vec<(u32, u32)> = pairs.iter().map(|&(u, v)| (index(u), index(v))).collect();

        let mut degree = vec![0usize; n];
        for &(a, b) in &dense {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; offsets[n]];
        for &(a, b) in &dense {
            targets[fill[a as usize]] = b;
            fill[a as usize] += 1;
            targets[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        for i in 0..n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }

        Self { ids, offsets, targets, self_loops_dropped: self_loops }
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Self-loops discarded while building.
    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    /// Node ids in ascending order; position equals dense index.
    pub fn nodes(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn contains(&self, u: NodeId) -> bool {
        self.ids.binary_search(&u).is_ok()
    }

    pub fn index_of(&self, u: NodeId) -> Result<usize> {
        self.ids.binary_search(&u).map_err(|_| Error::UnknownNode(u))
    }

    pub fn node_id(&self, index: usize) -> NodeId {
        self.ids[index]
    }

    /// Dense indices of the neighbors of the node at `index`, ascending.
    pub fn neighbor_indices(&self, index: usize) -> &[u32] {
        &self.targets[self.offsets[index]..self.offsets[index + 1]]
    }

    pub fn neighbors(&self, u: NodeId) -> Result<Vec<NodeId>> {
        let i = self.index_of(u)?;
        Ok(self.neighbor_indices(i).iter().map(|&j| self.ids[j as usize]).collect())
    }

    pub fn degree(&self, u: NodeId) -> Result<usize> {
        self.index_of(u).map(|i| self.degree_at(i))
    }

    pub fn degree_at(&self, index: usize) -> usize {
        self.offsets[index + 1] - self.offsets[index]
    }

    pub fn are_adjacent(&self, u: NodeId, v: NodeId) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Ok(a), Ok(b)) => self.neighbor_indices(a).binary_search(&(b as u32)).is_ok(),
            _ => false,
        }
    }

    /// Edges as `(smaller, larger)` id pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.node_count()).flat_map(move |i| {
            self.neighbor_indices(i)
                .iter()
                .filter(move |&&j| j as usize > i)
                .map(move |&j| (self.ids[i], self.ids[j as usize]))
        })
    }

    /// Writes one `u v` line per edge, smaller id first, ascending.
    pub fn write_edge_list<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        w.flush()
    }
}

/// Parses a SNAP-style edge list: one whitespace-separated integer pair per
/// line, `#` comments and blank lines ignored, treated as undirected.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<SocialGraph> {
    let mut edges = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line_no = n + 1;
        let line = line.map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let mut next = || -> Result<NodeId> {
            let tok = fields.next().ok_or_else(|| Error::Parse {
                line: line_no,
                message: "expected two node ids".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid node id {tok:?}"),
            })
        };
        let u = next()?;
        let v = next()?;
        if fields.next().is_some() {
            return Err(Error::Parse { line: line_no, message: "expected exactly two node ids".into() });
        }
        edges.push((u, v));
    }
    Ok(SocialGraph::from_edges(edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> SocialGraph {
        load_edge_list(s.as_bytes()).unwrap()
    }

    #[test]
    fn empty_input() {
        let g = load("");
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn path_graph() {
        let g = load("1 2\n2 3");
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.neighbors(2).unwrap(), vec![1, 3]);
        assert_eq!(g.degree(1).unwrap(), 1);
    }

    #[test]
    fn dedup_and_self_loops() {
        let g = load("# comment\n1 2\n2 1\n\n3 3\n");
        assert_eq!(g.nodes(), &[1, 2]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.self_loops_dropped(), 1);
    }

    #[test]
    fn malformed_lines_report_line_number() {
        for (input, line) in [("1 2\n3 x\n", 2), ("1\n", 1), ("1 2 3\n", 1), ("# c\n-1 2", 2)] {
            match load_edge_list(input.as_bytes()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{input:?}"),
                other => panic!("{input:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn isolated_and_unknown_nodes() {
        let g = SocialGraph::from_nodes_and_edges([9], [(1, 2)]);
        assert_eq!(g.neighbors(9).unwrap(), Vec::<NodeId>::new());
        assert_eq!(g.degree(9).unwrap(), 0);
        assert!(matches!(g.neighbors(5), Err(Error::UnknownNode(5))));
        assert!(matches!(g.degree(5), Err(Error::UnknownNode(5))));
    }

    #[test]
    fn export_format_is_canonical() {
        let g = load("5 1\n3 1\n1 5\n2 3\n");
        let mut out = Vec::new();
        g.write_edge_list(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1 3\n1 5\n2 3\n");
    }
}
