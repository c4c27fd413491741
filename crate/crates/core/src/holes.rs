//! Optimal cuts of open shells: polyhedra with one face, or one edge-connected
//! patch of faces, removed.
//!
//! Every edge around the hole is cut, so the cut contains the hole boundary
//! cycle plus loop-free branches reaching every other vertex. The search
//! starts from the whole boundary as its subtree and grows it exactly like
//! the closed-shell search, without roots or exclusions.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::bitset::{EdgeSet, VertexSet};
use crate::error::{Error, Result};
use crate::graph::{build_face_graph, build_open_shell_graph, Cut, FaceGraph, ShellGraph};
use crate::mlst::{Budget, Grower, LevelStats, SearchConfig, SearchState, SearchStats};
use crate::polyhedron::PolyhedronSpec;
use crate::scalar::Scalar;

/// The removed faces and the boundary they leave, in open-shell indexing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleSpec {
    /// Removed face indices in the original polyhedron.
    pub removed_faces: Vec<usize>,
    /// `V_h`
    pub boundary_vertices: VertexSet,
    pub boundary_edges: EdgeSet,
    /// Boundary vertices in cycle order, starting from the lowest index.
    pub boundary_cycle: Vec<usize>,
}

/// A polyhedron with a hole: the remaining faces, their graphs, and the hole.
#[derive(Clone, Debug)]
pub struct OpenShell<T = f64> {
    pub spec: PolyhedronSpec<T>,
    pub graph: ShellGraph,
    pub face_graph: FaceGraph,
    pub hole: HoleSpec,
    /// Original vertex index of each open-shell vertex.
    pub vertex_map: Vec<usize>,
    /// Original face index of each open-shell face.
    pub face_map: Vec<usize>,
}

impl<T: Scalar> OpenShell<T> {
    /// Removes `faces` from a closed polyhedron. The removed faces must be
    /// edge-connected and leave a boundary that is one simple cycle.
    pub fn new(closed: &PolyhedronSpec<T>, faces: &[usize]) -> Result<Self> {
        let mut removed = faces.to_vec();
        removed.sort_unstable();
        removed.dedup();
        if removed.is_empty() {
            return Err(Error::InvalidHole("no faces removed".into()));
        }
        if removed.len() >= closed.face_count() {
            return Err(Error::InvalidHole("every face removed".into()));
        }
        closed.check_faces()?;
        check_patch_connected(closed, &removed)?;

        let (spec, vertex_map) = closed.without_faces(&removed)?;
        let face_map: Vec<usize> = (0..closed.face_count())
            .filter(|f| !removed.contains(f))
            .collect();
        let graph = build_open_shell_graph(&spec)?;
        let face_graph = build_face_graph(&spec, &graph)?;

        let mut boundary_edges = EdgeSet::new();
        for ((a, b), fs) in spec.edge_faces() {
            if fs.len() == 1 {
                boundary_edges.insert(graph.edge_index(a, b).expect("edge present"));
            }
        }
        let boundary_cycle = simple_cycle(&graph, &boundary_edges)?;
        let hole = HoleSpec {
            removed_faces: removed,
            boundary_vertices: boundary_cycle.iter().copied().collect(),
            boundary_edges,
            boundary_cycle,
        };
        Ok(OpenShell {
            spec,
            graph,
            face_graph,
            hole,
            vertex_map,
            face_map,
        })
    }
}

fn check_patch_connected<T: Scalar>(spec: &PolyhedronSpec<T>, removed: &[usize]) -> Result<()> {
    let edge_faces = spec.edge_faces();
    let mut reached = vec![removed[0]];
    let mut stack = vec![removed[0]];
    while let Some(f) = stack.pop() {
        for fs in edge_faces.values() {
            if fs.contains(&f) {
                for &g in fs {
                    if removed.contains(&g) && !reached.contains(&g) {
                        reached.push(g);
                        stack.push(g);
                    }
                }
            }
        }
    }
    if reached.len() != removed.len() {
        return Err(Error::InvalidHole(
            "removed faces are not edge-connected".into(),
        ));
    }
    Ok(())
}

/// Orders the boundary edges as one simple cycle, or explains why not.
fn simple_cycle(graph: &ShellGraph, edges: &EdgeSet) -> Result<Vec<usize>> {
    let deg = graph.degrees_in(edges);
    if let Some(v) = deg.iter().position(|&d| d != 0 && d != 2) {
        return Err(Error::InvalidHole(format!(
            "boundary vertex {v} has {} boundary edges",
            deg[v]
        )));
    }
    let Some(start) = deg.iter().position(|&d| d == 2) else {
        return Err(Error::InvalidHole("hole has no boundary".into()));
    };
    let mut cycle = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = graph
            .incident(cur)
            .iter()
            .find(|(w, e)| edges.contains(*e) && *w != prev)
            .map(|&(w, _)| w)
            .expect("degree two");
        if next == start {
            break;
        }
        cycle.push(next);
        prev = cur;
        cur = next;
    }
    if cycle.len() != edges.len() {
        return Err(Error::InvalidHole(
            "hole boundary consists of several cycles".into(),
        ));
    }
    Ok(cycle)
}

/// All optimal cuts of one open shell.
#[derive(Clone, Debug)]
pub struct HoleCutResult {
    /// Leaves per cut; boundary vertices are never leaves.
    pub leaf_count: usize,
    /// Size of the grown subgraph (boundary plus interior branches).
    pub interior_size: usize,
    /// Canonically sorted.
    pub cuts: Vec<Cut>,
    pub interior_count: u64,
    pub stats: SearchStats,
}

/// Checks every structural property of an open-shell cut: it contains the
/// whole boundary, spans and connects all vertices, has exactly one cycle
/// (the boundary), and no boundary vertex is a leaf.
pub fn check_hole_cut(graph: &ShellGraph, hole: &HoleSpec, cut: &Cut) -> Result<()> {
    let edges = cut.edges();
    if !hole.boundary_edges.is_subset(edges) {
        return Err(Error::InvalidCut("cut misses a hole edge".into()));
    }
    let v = graph.vertex_count();
    if edges.len() != v {
        return Err(Error::InvalidCut(format!(
            "{} edges; a spanning tree plus one cycle on {v} vertices has {v}",
            edges.len()
        )));
    }
    if graph.component_of(0, edges).len() != v {
        return Err(Error::InvalidCut("cut does not reach every vertex".into()));
    }
    // connected with V edges: exactly one cycle; removing a boundary edge
    // must leave a tree, which pins that cycle to the boundary
    let mut opened = *edges;
    opened.remove(hole.boundary_edges.first().expect("boundary"));
    if !Cut(opened).is_spanning_tree(graph) {
        return Err(Error::InvalidCut(
            "cycle other than the hole boundary".into(),
        ));
    }
    let deg = graph.degrees_in(edges);
    if hole.boundary_vertices.iter().any(|b| deg[b] < 2) {
        return Err(Error::InvalidCut("hole vertex is a leaf".into()));
    }
    Ok(())
}

/// Enumerates the maximum-leaf cuts of an open shell, growing `n_S` from
/// `|V_h|` until some cut exists.
pub fn enumerate_hole_cuts(graph: &ShellGraph, hole: &HoleSpec) -> Result<HoleCutResult> {
    enumerate_hole_cuts_with(graph, hole, &SearchConfig::default())
}

pub fn enumerate_hole_cuts_with(
    graph: &ShellGraph,
    hole: &HoleSpec,
    config: &SearchConfig,
) -> Result<HoleCutResult> {
    let started = Instant::now();
    let vh = hole.boundary_vertices;
    if !graph.endpoints(&hole.boundary_edges).eq(&vh) {
        return Err(Error::InvalidHole(
            "boundary edges and vertices disagree".into(),
        ));
    }
    let frontier: Vec<usize> = vh
        .iter()
        .flat_map(|i| {
            graph
                .incident(i)
                .iter()
                .filter(|(j, _)| !vh.contains(*j))
                .map(|&(_, e)| e)
        })
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let budget = Budget::new(config);
    let mut stats = SearchStats::default();
    let v = graph.vertex_count();
    for target in vh.len()..=v {
        let state = SearchState {
            tree_vertices: vh,
            tree_edges: hole.boundary_edges,
            frontier: frontier.clone(),
            excluded: VertexSet::new(),
            target_size: target,
        };
        debug_assert!(state.check_invariants(graph, 1).is_ok());
        let before = budget.used();
        let grower = Grower::new(graph, target, VertexSet::new(), true, &budget);
        let harvest = grower
            .run(&state, config)
            .map_err(|_| budget.error(target, 0))?;
        stats.levels.push(LevelStats {
            interior_size: target,
            nodes_visited: budget.used() - before,
            dominating_subtrees: harvest.interiors,
        });
        if harvest.trees.is_empty() {
            continue;
        }
        stats.nodes_visited = budget.used();
        stats.elapsed = started.elapsed();
        let mut cuts: Vec<Cut> = harvest.trees.into_iter().map(Cut).collect();
        cuts.sort_unstable();
        debug_assert!(cuts.iter().all(|c| check_hole_cut(graph, hole, c).is_ok()));
        return Ok(HoleCutResult {
            leaf_count: v - target,
            interior_size: target,
            cuts,
            interior_count: harvest.interiors,
            stats,
        });
    }
    Err(Error::InvalidHole(
        "no cut contains the hole boundary".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pentagonal pyramid: hub 0 over rim 1..=5, base face last.
    fn pyramid() -> PolyhedronSpec<f64> {
        let mut faces: Vec<Vec<usize>> = (0..5).map(|i| vec![0, 1 + i, 1 + (i + 1) % 5]).collect();
        faces.push(vec![5, 4, 3, 2, 1]);
        PolyhedronSpec::from_faces("pentagonal pyramid", faces)
    }

    #[test]
    fn pyramid_without_base() {
        let open = OpenShell::new(&pyramid(), &[5]).unwrap();
        assert_eq!(open.hole.boundary_cycle.len(), 5);
        let r = enumerate_hole_cuts(&open.graph, &open.hole).unwrap();
        // rim cycle plus one spoke; the hub hangs off as a leaf
        assert_eq!(r.cuts.len(), 5);
        assert_eq!(r.leaf_count, 1);
        for c in &r.cuts {
            check_hole_cut(&open.graph, &open.hole, c).unwrap();
            assert_eq!(c.leaves(&open.graph), vec![0]);
        }
    }

    #[test]
    fn brute_force_agrees_on_pyramid() {
        let open = OpenShell::new(&pyramid(), &[5]).unwrap();
        let g = &open.graph;
        let e = g.edge_count();
        let mut best = 0;
        let mut found = Vec::new();
        for mask in 0u32..(1 << e) {
            let cut = Cut((0..e).filter(|i| mask >> i & 1 == 1).collect());
            if check_hole_cut(g, &open.hole, &cut).is_ok() {
                let l = cut.leaf_count(g);
                if l > best {
                    best = l;
                    found.clear();
                }
                if l == best {
                    found.push(cut);
                }
            }
        }
        found.sort();
        let r = enumerate_hole_cuts(g, &open.hole).unwrap();
        assert_eq!(r.leaf_count, best);
        assert_eq!(r.cuts, found);
    }

    #[test]
    fn rejects_disconnected_patches() {
        // two opposite triangles of an octahedron-like fan share no edge
        let err = OpenShell::new(&pyramid(), &[0, 2]).unwrap_err();
        assert!(matches!(err, Error::InvalidHole(_)));
    }

    #[test]
    fn rejects_bad_face_index() {
        assert!(OpenShell::new(&pyramid(), &[9]).is_err());
    }
}
