//! Exact spanning-tree counting (matrix-tree theorem) and a brute-force
//! spanning-tree enumerator used as a verification oracle.

use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::bitset::EdgeSet;
use crate::error::Error;
use crate::graph::{Cut, ShellGraph};

/// Default cap on the number of trees the oracle will list.
pub const DEFAULT_TREE_CAP: u64 = 10_000_000;

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Every intermediate division is exact, so the result is exact
/// for any integer type that does not overflow.
pub fn bareiss_determinant<T>(mut m: Vec<Vec<T>>) -> T
where
    T: Integer + Signed + Clone,
{
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let mut sign_negative = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return T::zero();
            };
            m.swap(k, swap);
            sign_negative = !sign_negative;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * pivot.clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num / prev.clone();
            }
            m[i][k] = T::zero();
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    if sign_negative {
        -det
    } else {
        det
    }
}

/// The Laplacian `D - A` with the first row and column removed.
pub fn reduced_laplacian<T>(graph: &ShellGraph) -> Vec<Vec<T>>
where
    T: Integer + Signed + Clone + From<i32>,
{
    let v = graph.vertex_count();
    let mut m = vec![vec![T::zero(); v.saturating_sub(1)]; v.saturating_sub(1)];
    for i in 1..v {
        m[i - 1][i - 1] = T::from(graph.degree(i) as i32);
        for &j in graph.neighbors(i) {
            if j > 0 {
                m[i - 1][j - 1] = T::from(-1);
            }
        }
    }
    m
}

/// Number of labeled spanning trees, exactly. Disconnected graphs give 0.
pub fn count_spanning_trees(graph: &ShellGraph) -> BigUint {
    if graph.vertex_count() == 0 || !graph.is_connected() {
        return BigUint::zero();
    }
    let det: BigInt = bareiss_determinant(reduced_laplacian::<BigInt>(graph));
    det.to_biguint()
        .expect("Laplacian cofactor is non-negative")
}

/// The oracle gave up after `cap` trees; `partial` holds what it found.
#[derive(Debug, Clone)]
pub struct CapExceeded {
    pub cap: u64,
    pub partial: Vec<Cut>,
}

impl From<CapExceeded> for Error {
    fn from(e: CapExceeded) -> Self {
        Error::CapExceeded {
            cap: e.cap,
            found: e.partial.len() as u64,
        }
    }
}

/// Lists every labeled spanning tree exactly once, in a fixed order, by
/// include/exclude recursion on edges in index order (contraction and
/// deletion). Fails once more than `cap` trees exist.
pub fn enumerate_spanning_trees(graph: &ShellGraph, cap: u64) -> Result<Vec<Cut>, CapExceeded> {
    let mut out = Vec::new();
    let result = for_each_spanning_tree(graph, |cut| {
        if out.len() as u64 >= cap {
            return ControlFlow::Break(());
        }
        out.push(*cut);
        ControlFlow::Continue(())
    });
    match result {
        ControlFlow::Continue(()) => Ok(out),
        ControlFlow::Break(()) => Err(CapExceeded { cap, partial: out }),
    }
}

/// Streaming form of [`enumerate_spanning_trees`]; stops when `visit` breaks.
pub fn for_each_spanning_tree<F>(graph: &ShellGraph, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(&Cut) -> ControlFlow<()>,
{
    let v = graph.vertex_count();
    if v == 0 || !graph.is_connected() {
        return ControlFlow::Continue(());
    }
    let mut walker = TreeWalker {
        graph,
        parent: (0..v).collect(),
        size: vec![1; v],
        history: Vec::new(),
    };
    walker.walk(
        0,
        EdgeSet::new(),
        EdgeSet::full(graph.edge_count()),
        &mut visit,
    )
}

struct TreeWalker<'g> {
    graph: &'g ShellGraph,
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<usize>,
}

impl TreeWalker<'_> {
    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn walk<F>(
        &mut self,
        e: usize,
        chosen: EdgeSet,
        available: EdgeSet,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&Cut) -> ControlFlow<()>,
    {
        if chosen.len() + 1 == self.graph.vertex_count() {
            debug_assert!(Cut(chosen).is_spanning_tree(self.graph));
            return visit(&Cut(chosen));
        }
        if e >= self.graph.edge_count() {
            return ControlFlow::Continue(());
        }
        let (a, b) = self.graph.edge(e);
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // contract e
            let (big, small) = if self.size[ra] >= self.size[rb] {
                (ra, rb)
            } else {
                (rb, ra)
            };
            self.parent[small] = big;
            self.size[big] += self.size[small];
            self.history.push(small);
            let mut next = chosen;
            next.insert(e);
            let flow = self.walk(e + 1, next, available, visit);
            let small = self.history.pop().unwrap();
            let big = self.parent[small];
            self.size[big] -= self.size[small];
            self.parent[small] = small;
            flow?;
        }
        // delete e, provided the graph stays connected
        let mut rest = available;
        rest.remove(e);
        if self.graph.component_of(0, &rest).len() == self.graph.vertex_count() {
            self.walk(e + 1, chosen, rest, visit)?;
        }
        ControlFlow::Continue(())
    }
}
