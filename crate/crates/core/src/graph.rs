//! Shell and face graphs, and cuts as edge subsets of the shell graph.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::bitset::{EdgeSet, VertexSet, MAX_EDGES, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::polyhedron::{pair, PolyhedronSpec};
use crate::scalar::Scalar;

const NO_EDGE: u16 = u16::MAX;

/// Simple undirected graph of shell vertices and edges.
///
/// Edges are indexed `0..E` in lexicographic order of `(min, max)` vertex
/// pairs, so indices are stable across runs and across equal inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    /// `(neighbor, edge index)` per vertex, ascending by neighbor.
    incident: Vec<Vec<(usize, usize)>>,
    neighbor_sets: Vec<VertexSet>,
    edge_table: Vec<u16>,
}

impl ShellGraph {
    /// Builds a graph from an arbitrary edge list. Duplicate edges collapse;
    /// self-loops are rejected.
    pub fn from_edges(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if vertex_count > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex set",
                actual: vertex_count,
                max: MAX_VERTICES,
            });
        }
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidCut(format!("self-loop at vertex {a}")));
            }
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::VertexIndexOutOfRange {
                    face: usize::MAX,
                    index: a.max(b),
                    vertex_count,
                });
            }
            list.push(pair(a, b));
        }
        list.sort_unstable();
        list.dedup();
        if list.len() > MAX_EDGES {
            return Err(Error::TooLarge {
                what: "edge set",
                actual: list.len(),
                max: MAX_EDGES,
            });
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut incident = vec![Vec::new(); vertex_count];
        let mut neighbor_sets = vec![VertexSet::new(); vertex_count];
        let mut edge_table = vec![NO_EDGE; vertex_count * vertex_count];
        for (e, &(a, b)) in list.iter().enumerate() {
            adjacency[a].push(b);
            adjacency[b].push(a);
            incident[a].push((b, e));
            incident[b].push((a, e));
            neighbor_sets[a].insert(b);
            neighbor_sets[b].insert(a);
            edge_table[a * vertex_count + b] = e as u16;
            edge_table[b * vertex_count + a] = e as u16;
        }
        for v in 0..vertex_count {
            adjacency[v].sort_unstable();
            incident[v].sort_unstable();
        }
        Ok(ShellGraph {
            vertex_count,
            edges: list,
            adjacency,
            incident,
            neighbor_sets,
            edge_table,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonically ordered endpoint pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Sorted neighbor list `A_i`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.incident[v]
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        self.neighbor_sets[v]
    }

    /// Closed neighborhood `{v} ∪ A_v`.
    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.neighbor_sets[v];
        s.insert(v);
        s
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count)
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        if a >= self.vertex_count || b >= self.vertex_count {
            return None;
        }
        match self.edge_table[a * self.vertex_count + b] {
            NO_EDGE => None,
            e => Some(e as usize),
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_index(a, b).is_some()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.vertex_count)
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0, &EdgeSet::full(self.edge_count()))
            .len()
            == self.vertex_count
            || self.vertex_count == 0
    }

    /// Vertices reachable from `start` through the given edges.
    pub fn component_of(&self, start: usize, allowed: &EdgeSet) -> VertexSet {
        let mut seen = VertexSet::new();
        if start >= self.vertex_count {
            return seen;
        }
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for &(w, e) in &self.incident[v] {
                if allowed.contains(e) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Vertices touched by a set of edges.
    pub fn endpoints(&self, edges: &EdgeSet) -> VertexSet {
        let mut s = VertexSet::new();
        for e in edges.iter() {
            let (a, b) = self.edges[e];
            s.insert(a);
            s.insert(b);
        }
        s
    }

    /// Degree of every vertex within an edge subset.
    pub fn degrees_in(&self, edges: &EdgeSet) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in edges.iter() {
            let (a, b) = self.edges[e];
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    /// Applies a vertex relabeling to an edge set.
    pub fn map_edges(&self, edges: &EdgeSet, perm: &[usize]) -> Option<EdgeSet> {
        let mut out = EdgeSet::new();
        for e in edges.iter() {
            let (a, b) = self.edges[e];
            out.insert(self.edge_index(perm[a], perm[b])?);
        }
        Some(out)
    }
}

/// Builds the shell graph of a closed polyhedron.
///
/// Every face-cycle edge must lie on exactly two faces.
pub fn build_shell_graph<T: Scalar>(spec: &PolyhedronSpec<T>) -> Result<ShellGraph> {
    build_graph(spec, false)
}

/// Builds the shell graph of an open shell: edges may lie on one face
/// (the hole boundary) or two.
pub fn build_open_shell_graph<T: Scalar>(spec: &PolyhedronSpec<T>) -> Result<ShellGraph> {
    build_graph(spec, true)
}

fn build_graph<T: Scalar>(spec: &PolyhedronSpec<T>, open: bool) -> Result<ShellGraph> {
    spec.check_faces()?;
    let edge_faces = spec.edge_faces();
    for (&(a, b), faces) in &edge_faces {
        let ok = faces.len() == 2 || (open && faces.len() == 1);
        if !ok {
            return Err(Error::NonManifoldEdge {
                a,
                b,
                faces: faces.len(),
            });
        }
    }
    let graph = ShellGraph::from_edges(spec.vertex_count(), edge_faces.into_keys())?;
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(graph)
}

/// A link of the face graph: two faces sharing one shell edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceLink {
    pub faces: (usize, usize),
    pub edge: usize,
}

/// Faces as nodes, linked when they share a shell edge. Each link carries
/// the index of that shell edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceGraph {
    face_count: usize,
    links: Vec<FaceLink>,
    /// Per face: `(neighbor face, link index)`.
    incident: Vec<Vec<(usize, usize)>>,
    link_of_edge: Vec<Option<usize>>,
}

impl FaceGraph {
    pub fn face_count(&self) -> usize {
        self.face_count
    }

    pub fn links(&self) -> &[FaceLink] {
        &self.links
    }

    pub fn incident(&self, face: usize) -> &[(usize, usize)] {
        &self.incident[face]
    }

    /// The link labeled by a shell edge; `None` for boundary edges.
    pub fn link_of_edge(&self, edge: usize) -> Option<usize> {
        self.link_of_edge.get(edge).copied().flatten()
    }

    pub fn degree(&self, face: usize) -> usize {
        self.incident[face].len()
    }

    /// Whether the links whose shell edge is *not* in `cut` connect every face.
    pub fn hinges_connect(&self, cut: &EdgeSet) -> bool {
        if self.face_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.face_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(f) = stack.pop() {
            for &(g, l) in &self.incident[f] {
                if !cut.contains(self.links[l].edge) && !seen[g] {
                    seen[g] = true;
                    count += 1;
                    stack.push(g);
                }
            }
        }
        count == self.face_count
    }
}

/// Builds the face graph; link labels index into `graph`'s edges.
pub fn build_face_graph<T: Scalar>(
    spec: &PolyhedronSpec<T>,
    graph: &ShellGraph,
) -> Result<FaceGraph> {
    let mut links = Vec::new();
    let mut incident = vec![Vec::new(); spec.face_count()];
    let mut link_of_edge = vec![None; graph.edge_count()];
    for ((a, b), faces) in spec.edge_faces() {
        let edge = graph.edge_index(a, b).ok_or_else(|| {
            Error::InvalidCut(format!("edge ({a}, {b}) missing from shell graph"))
        })?;
        match faces.as_slice() {
            [f, g] => {
                let l = links.len();
                links.push(FaceLink {
                    faces: (*f, *g),
                    edge,
                });
                incident[*f].push((*g, l));
                incident[*g].push((*f, l));
                link_of_edge[edge] = Some(l);
            }
            [_] => {}
            _ => {
                return Err(Error::NonManifoldEdge {
                    a,
                    b,
                    faces: faces.len(),
                })
            }
        }
    }
    Ok(FaceGraph {
        face_count: spec.face_count(),
        links,
        incident,
        link_of_edge,
    })
}

/// Builds both graphs of a closed shell.
pub fn build_graphs<T: Scalar>(spec: &PolyhedronSpec<T>) -> Result<(ShellGraph, FaceGraph)> {
    let graph = build_shell_graph(spec)?;
    let faces = build_face_graph(spec, &graph)?;
    Ok((graph, faces))
}

/// Shell edges removed to unfold a shell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cut(pub EdgeSet);

impl Cut {
    pub fn edges(&self) -> &EdgeSet {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree-1 vertices of the cut subgraph, ascending. These are the
    /// vertex connections of the unfolded net.
    pub fn leaves(&self, graph: &ShellGraph) -> Vec<usize> {
        graph
            .degrees_in(&self.0)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 1)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn leaf_count(&self, graph: &ShellGraph) -> usize {
        graph
            .degrees_in(&self.0)
            .iter()
            .filter(|&&d| d == 1)
            .count()
    }

    /// Checks that the cut is a spanning tree: `V-1` edges reaching every
    /// vertex (connected with `V-1` edges implies acyclic).
    pub fn check_spanning_tree(&self, graph: &ShellGraph) -> Result<()> {
        let v = graph.vertex_count();
        if self.0.iter().any(|e| e >= graph.edge_count()) {
            return Err(Error::InvalidCut("edge index out of range".into()));
        }
        if self.len() + 1 != v {
            return Err(Error::InvalidCut(format!(
                "{} edges, a spanning tree on {v} vertices needs {}",
                self.len(),
                v.saturating_sub(1)
            )));
        }
        if graph.component_of(0, &self.0).len() != v {
            return Err(Error::InvalidCut("cut does not reach every vertex".into()));
        }
        Ok(())
    }

    pub fn is_spanning_tree(&self, graph: &ShellGraph) -> bool {
        self.check_spanning_tree(graph).is_ok()
    }

    pub fn edge_pairs(&self, graph: &ShellGraph) -> Vec<(usize, usize)> {
        self.0.iter().map(|e| graph.edge(e)).collect()
    }
}

/// Breadth-first distances from `start`; unreachable vertices get `usize::MAX`.
pub fn bfs_distances(graph: &ShellGraph, start: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; graph.vertex_count()];
    let mut queue = VecDeque::from([start]);
    dist[start] = 0;
    while let Some(v) = queue.pop_front() {
        for &w in graph.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Small named graphs used throughout the tests and examples.
pub mod named {
    use super::ShellGraph;

    pub fn complete(n: usize) -> ShellGraph {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        ShellGraph::from_edges(n, edges).unwrap()
    }

    pub fn path(n: usize) -> ShellGraph {
        ShellGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> ShellGraph {
        ShellGraph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    /// Hub `0` joined to a rim cycle `1..=n`.
    pub fn wheel(n: usize) -> ShellGraph {
        let rim = (0..n).map(|i| (1 + i, 1 + (i + 1) % n));
        let spokes = (1..=n).map(|i| (0, i));
        ShellGraph::from_edges(n + 1, rim.chain(spokes)).unwrap()
    }

    /// The 3-cube graph on bit-labeled vertices.
    pub fn cube() -> ShellGraph {
        let edges = (0..8usize).flat_map(|v| {
            (0..3)
                .map(move |bit| (v, v ^ (1 << bit)))
                .filter(|(a, b)| a < b)
        });
        ShellGraph::from_edges(8, edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> PolyhedronSpec<f64> {
        PolyhedronSpec::from_faces(
            "tetrahedron",
            vec![vec![0, 1, 2], vec![0, 3, 1], vec![1, 3, 2], vec![0, 2, 3]],
        )
    }

    #[test]
    fn tetrahedron_graphs() {
        let (g, fg) = build_graphs(&tetra()).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 6));
        assert_eq!(g, named::complete(4));
        assert_eq!(fg.face_count(), 4);
        assert_eq!(fg.links().len(), 6);
        assert!((0..4).all(|f| fg.degree(f) == 3));
    }

    #[test]
    fn edge_indexing_is_lexicographic() {
        let g = named::complete(4);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(g.edge_index(3, 1), Some(4));
        assert_eq!(g.edge_index(1, 1), None);
    }

    #[test]
    fn lone_triangle_is_non_manifold() {
        let spec = PolyhedronSpec::<f64>::from_faces("triangle", vec![vec![0, 1, 2]]);
        assert!(matches!(
            build_shell_graph(&spec),
            Err(Error::NonManifoldEdge { faces: 1, .. })
        ));
        assert!(build_open_shell_graph(&spec).is_ok());
    }

    #[test]
    fn face_links_are_a_bijection() {
        let (g, fg) = build_graphs(&tetra()).unwrap();
        let mut labels: Vec<usize> = fg.links().iter().map(|l| l.edge).collect();
        labels.sort_unstable();
        assert_eq!(labels, (0..g.edge_count()).collect::<Vec<_>>());
    }

    #[test]
    fn cut_leaves_and_tree_check() {
        let g = named::path(3);
        let cut = Cut(EdgeSet::full(2));
        assert!(cut.is_spanning_tree(&g));
        assert_eq!(cut.leaves(&g), vec![0, 2]);

        let k4 = named::complete(4);
        let triangle = Cut([0, 1, 3].into_iter().collect()); // 01, 02, 12
        assert!(triangle.check_spanning_tree(&k4).is_err());
    }

    #[test]
    fn named_graphs() {
        let c = named::cube();
        assert_eq!((c.vertex_count(), c.edge_count()), (8, 12));
        assert!((0..8).all(|v| c.degree(v) == 3));
        let w = named::wheel(5);
        assert_eq!((w.vertex_count(), w.edge_count(), w.degree(0)), (6, 10, 5));
        assert_eq!(bfs_distances(&c, 0)[7], 3);
    }
}
