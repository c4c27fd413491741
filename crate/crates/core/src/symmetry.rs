//! Graph automorphisms and deduplication of labeled cuts into unlabeled ones.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::EdgeSet;
use crate::counting::count_spanning_trees;
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, Cut, ShellGraph};

/// Every vertex relabeling that maps the edge set onto itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismGroup {
    /// Vertex permutations, sorted; the identity comes first.
    perms: Vec<Vec<usize>>,
    /// The induced permutation of edge indices, per vertex permutation.
    edge_perms: Vec<Vec<u16>>,
}

impl AutomorphismGroup {
    /// `N_aut`
    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn edge_permutation(&self, k: usize) -> &[u16] {
        &self.edge_perms[k]
    }

    /// The trivial group on `n` vertices.
    pub fn identity(graph: &ShellGraph) -> Self {
        Self::from_permutations(graph, vec![(0..graph.vertex_count()).collect()])
    }

    fn from_permutations(graph: &ShellGraph, mut perms: Vec<Vec<usize>>) -> Self {
        perms.sort();
        let edge_perms = perms
            .iter()
            .map(|p| {
                graph
                    .edges()
                    .iter()
                    .map(|&(a, b)| graph.edge_index(p[a], p[b]).expect("automorphism") as u16)
                    .collect()
            })
            .collect();
        AutomorphismGroup { perms, edge_perms }
    }

    /// Image of an edge set under the `k`-th automorphism.
    #[inline]
    pub fn apply(&self, k: usize, edges: &EdgeSet) -> EdgeSet {
        let map = &self.edge_perms[k];
        let mut out = EdgeSet::new();
        for e in edges.iter() {
            out.insert(map[e] as usize);
        }
        out
    }

    /// The subgroup mapping `edges` onto itself, such as the symmetries of
    /// an open shell that keep its hole in place.
    pub fn stabilizer(&self, graph: &ShellGraph, edges: &EdgeSet) -> Self {
        let keep = (0..self.order())
            .filter(|&k| self.apply(k, edges) == *edges)
            .map(|k| self.perms[k].clone())
            .collect();
        Self::from_permutations(graph, keep)
    }

    /// Closure, identity and inverses, plus edge preservation.
    pub fn check_axioms(&self, graph: &ShellGraph) -> Result<()> {
        let n = graph.vertex_count();
        let index: HashMap<&[usize], usize> = self
            .perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_slice(), i))
            .collect();
        let identity: Vec<usize> = (0..n).collect();
        if !index.contains_key(identity.as_slice()) {
            return Err(Error::InvalidCut("group lacks the identity".into()));
        }
        for p in &self.perms {
            if graph
                .edges()
                .iter()
                .any(|&(a, b)| !graph.has_edge(p[a], p[b]))
            {
                return Err(Error::InvalidCut("permutation breaks an edge".into()));
            }
            let mut inv = vec![0; n];
            for (i, &pi) in p.iter().enumerate() {
                inv[pi] = i;
            }
            if !index.contains_key(inv.as_slice()) {
                return Err(Error::InvalidCut("group not closed under inverse".into()));
            }
            for q in &self.perms {
                let pq: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                if !index.contains_key(pq.as_slice()) {
                    return Err(Error::InvalidCut(
                        "group not closed under composition".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Finds all automorphisms by backtracking. Vertices are mapped in
/// breadth-first order, so each new vertex has an already-mapped neighbor
/// and its candidate images are the neighbors of that neighbor's image.
/// Candidates must match degree, the sorted degree multiset of their
/// neighborhood, and adjacency to every vertex mapped so far.
pub fn find_automorphisms(graph: &ShellGraph) -> AutomorphismGroup {
    let n = graph.vertex_count();
    if n == 0 {
        return AutomorphismGroup::from_permutations(graph, vec![vec![]]);
    }
    let signature: Vec<(usize, Vec<usize>)> = (0..n)
        .map(|v| {
            let mut ds: Vec<usize> = graph
                .neighbors(v)
                .iter()
                .map(|&w| graph.degree(w))
                .collect();
            ds.sort_unstable();
            (graph.degree(v), ds)
        })
        .collect();

    // breadth-first order over every component, remembering a mapped anchor
    let mut order = Vec::with_capacity(n);
    let mut anchor = vec![None; n];
    let mut placed = vec![false; n];
    for s in 0..n {
        if placed[s] {
            continue;
        }
        let dist = bfs_distances(graph, s);
        let mut comp: Vec<usize> = (0..n)
            .filter(|&v| dist[v] != usize::MAX && !placed[v])
            .collect();
        comp.sort_by_key(|&v| (dist[v], v));
        for v in comp {
            placed[v] = true;
            anchor[v] = graph
                .neighbors(v)
                .iter()
                .copied()
                .filter(|w| order.contains(w))
                .min_by_key(|&w| dist[w]);
            order.push(v);
        }
    }

    struct Ctx<'a> {
        graph: &'a ShellGraph,
        signature: Vec<(usize, Vec<usize>)>,
        order: Vec<usize>,
        anchor: Vec<Option<usize>>,
        image: Vec<usize>,
        used: Vec<bool>,
        found: Vec<Vec<usize>>,
    }

    fn extend(ctx: &mut Ctx, depth: usize) {
        let n = ctx.graph.vertex_count();
        if depth == n {
            ctx.found.push(ctx.image.clone());
            return;
        }
        let v = ctx.order[depth];
        let candidates: Vec<usize> = match ctx.anchor[v] {
            Some(a) => ctx.graph.neighbors(ctx.image[a]).to_vec(),
            None => (0..n).collect(),
        };
        for c in candidates {
            if ctx.used[c] || ctx.signature[c] != ctx.signature[v] {
                continue;
            }
            let consistent = ctx.order[..depth]
                .iter()
                .all(|&u| ctx.graph.has_edge(u, v) == ctx.graph.has_edge(ctx.image[u], c));
            if !consistent {
                continue;
            }
            ctx.image[v] = c;
            ctx.used[c] = true;
            extend(ctx, depth + 1);
            ctx.used[c] = false;
            ctx.image[v] = usize::MAX;
        }
    }

    let mut ctx = Ctx {
        graph,
        signature,
        order,
        anchor,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
    };
    extend(&mut ctx, 0);
    let group = AutomorphismGroup::from_permutations(graph, ctx.found);
    debug_assert!(group.check_axioms(graph).is_ok());
    group
}

/// The lexicographically smallest image of a cut over a group, with the
/// number of distinct images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalCut {
    pub representative: Cut,
    pub orbit_size: usize,
}

pub fn canonical_cut(cut: &Cut, group: &AutomorphismGroup) -> CanonicalCut {
    let mut images: Vec<EdgeSet> = (0..group.order())
        .map(|k| group.apply(k, cut.edges()))
        .collect();
    images.sort_unstable();
    images.dedup();
    CanonicalCut {
        representative: Cut(images[0]),
        orbit_size: images.len(),
    }
}

/// One representative per orbit, sorted by representative. Orbit sizes sum
/// to the input length when the input is a union of whole orbits, which
/// holds for any complete enumeration.
pub fn dedupe_cuts(cuts: &[Cut], group: &AutomorphismGroup) -> Vec<CanonicalCut> {
    let mut reps: Vec<CanonicalCut> = cuts
        .par_iter()
        .with_min_len(256)
        .map(|c| {
            let mut best = *c.edges();
            for k in 0..group.order() {
                let img = group.apply(k, c.edges());
                if img < best {
                    best = img;
                }
            }
            best
        })
        .collect::<Vec<EdgeSet>>()
        .into_iter()
        .map(|e| CanonicalCut {
            representative: Cut(e),
            orbit_size: 0,
        })
        .collect();
    reps.sort_unstable();
    reps.dedup();
    for r in &mut reps {
        r.orbit_size = canonical_cut(&r.representative, group).orbit_size;
    }
    reps
}

/// Lower bound `N_ST / N_aut` on the number of distinct nets.
pub fn estimate_net_count(graph: &ShellGraph) -> BigRational {
    estimate_with_group(graph, &find_automorphisms(graph))
}

pub fn estimate_with_group(graph: &ShellGraph, group: &AutomorphismGroup) -> BigRational {
    BigRational::new(
        BigInt::from(count_spanning_trees(graph)),
        BigInt::from(group.order()),
    )
}
