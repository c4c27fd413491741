use std::collections::VecDeque;

use super::{cross2, Hinge, NetLayout, PlacedFace, Point2, VertexConnection};
use crate::error::{Error, Result};
use crate::graph::{
    build_face_graph, build_open_shell_graph, build_shell_graph, Cut, FaceGraph, ShellGraph,
};
use crate::polyhedron::PolyhedronSpec;
use crate::scalar::{v3, Scalar};

/// Unfolds one shell many times; holds the graphs and each face's
/// isometric 2D chart.
#[derive(Clone, Debug)]
pub struct Unfolder<T> {
    graph: ShellGraph,
    face_graph: FaceGraph,
    faces: Vec<Vec<usize>>,
    /// Per face: vertex positions in a face-local orthonormal frame,
    /// counter-clockwise seen from outside.
    charts: Vec<Vec<Point2<T>>>,
}

impl<T: Scalar> Unfolder<T> {
    /// For a closed shell.
    pub fn new(spec: &PolyhedronSpec<T>) -> Result<Self> {
        let graph = build_shell_graph(spec)?;
        Self::with_graph(spec, graph)
    }

    /// For an open shell (faces on the hole boundary have free edges).
    pub fn new_open(spec: &PolyhedronSpec<T>) -> Result<Self> {
        let graph = build_open_shell_graph(spec)?;
        Self::with_graph(spec, graph)
    }

    pub fn with_graph(spec: &PolyhedronSpec<T>, graph: ShellGraph) -> Result<Self> {
        let face_graph = build_face_graph(spec, &graph)?;
        let coords = spec.coordinates()?;
        let charts = spec
            .faces
            .iter()
            .map(|face| {
                let pts: Vec<[T; 3]> = face.iter().map(|&i| coords[i]).collect();
                face_chart(&pts)
            })
            .collect();
        Ok(Unfolder {
            graph,
            face_graph,
            faces: spec.faces.clone(),
            charts,
        })
    }

    pub fn graph(&self) -> &ShellGraph {
        &self.graph
    }

    pub fn face_graph(&self) -> &FaceGraph {
        &self.face_graph
    }

    /// Unfolds with the lowest-index face as root.
    pub fn unfold(&self, cut: &Cut) -> Result<NetLayout<T>> {
        self.unfold_from(cut, 0)
    }

    /// Unfolds breadth-first from `root`: the root face keeps its chart, and
    /// every child is placed by the rotation and translation that lays its
    /// copy of the shared edge onto the parent's, which puts it across the
    /// hinge line from the parent.
    pub fn unfold_from(&self, cut: &Cut, root: usize) -> Result<NetLayout<T>> {
        let fg = &self.face_graph;
        let f_count = fg.face_count();
        if root >= f_count {
            return Err(Error::InvalidCut(format!("root face {root} out of range")));
        }
        let hinge_count = fg
            .links()
            .iter()
            .filter(|l| !cut.edges().contains(l.edge))
            .count();
        if hinge_count + 1 != f_count || !fg.hinges_connect(cut.edges()) {
            return Err(Error::InvalidCut(format!(
                "{hinge_count} uncut links do not form a spanning tree of {f_count} faces"
            )));
        }

        let mut placed: Vec<Option<Vec<Point2<T>>>> = vec![None; f_count];
        placed[root] = Some(self.charts[root].clone());
        let mut hinges = Vec::with_capacity(f_count - 1);
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            for &(g, l) in fg.incident(f) {
                let link = fg.links()[l];
                if cut.edges().contains(link.edge) || placed[g].is_some() {
                    continue;
                }
                let (a, b) = self.graph.edge(link.edge);
                let parent = placed[f].as_ref().unwrap();
                let pa = parent[self.slot(f, a)];
                let pb = parent[self.slot(f, b)];
                let chart = &self.charts[g];
                let ca = chart[self.slot(g, a)];
                let cb = chart[self.slot(g, b)];
                let points = rigid_fit(chart, ca, cb, pa, pb);
                debug_assert!(opposite_sides(parent, &points, pa, pb));
                placed[g] = Some(points);
                hinges.push(Hinge {
                    parent: f,
                    child: g,
                    edge: link.edge,
                });
                queue.push_back(g);
            }
        }

        let faces: Vec<PlacedFace<T>> = placed
            .into_iter()
            .enumerate()
            .map(|(f, pts)| PlacedFace {
                face: f,
                vertices: self.faces[f].clone(),
                points: pts.expect("hinges span all faces"),
            })
            .collect();
        let connections = self.connections(cut, &faces)?;
        Ok(NetLayout {
            root_face: root,
            faces,
            hinges,
            connections,
        })
    }

    fn slot(&self, face: usize, vertex: usize) -> usize {
        self.faces[face]
            .iter()
            .position(|&v| v == vertex)
            .expect("vertex on face")
    }

    fn connections(&self, cut: &Cut, faces: &[PlacedFace<T>]) -> Result<Vec<VertexConnection<T>>> {
        let mut out = Vec::new();
        for v in vertex_connections(&self.graph, cut) {
            let (w, e) = self
                .graph
                .incident(v)
                .iter()
                .copied()
                .find(|&(_, e)| cut.edges().contains(e))
                .expect("leaf has one cut edge");
            let Some(l) = self.face_graph.link_of_edge(e) else {
                return Err(Error::InvalidCut(format!(
                    "leaf {v} sits on a boundary edge"
                )));
            };
            let (f1, f2) = self.face_graph.links()[l].faces;
            let at = |f: usize, x: usize| faces[f].position_of(x).expect("vertex on face");
            out.push(VertexConnection {
                vertex: v,
                cut_edge: e,
                faces: (f1, f2),
                points: (at(f1, v), at(f2, v)),
                far_points: (at(f1, w), at(f2, w)),
            });
        }
        Ok(out)
    }
}

/// Unfolds a closed shell along `cut` from its lowest-index face.
pub fn unfold<T: Scalar>(spec: &PolyhedronSpec<T>, cut: &Cut) -> Result<NetLayout<T>> {
    Unfolder::new(spec)?.unfold(cut)
}

/// Degree-1 vertices of the cut subgraph.
pub fn vertex_connections(graph: &ShellGraph, cut: &Cut) -> Vec<usize> {
    cut.leaves(graph)
}

/// Isometric chart of a planar 3D polygon: origin at the first vertex,
/// x along the first edge, y completing a right-handed frame with the
/// outward normal.
fn face_chart<T: Scalar>(pts: &[[T; 3]]) -> Vec<Point2<T>> {
    let normal = v3::normalize(v3::newell(pts));
    let x = v3::normalize(v3::sub(pts[1], pts[0]));
    let y = v3::cross(normal, x);
    pts.iter()
        .map(|p| {
            let d = v3::sub(*p, pts[0]);
            [v3::dot(d, x), v3::dot(d, y)]
        })
        .collect()
}

/// Rotates and translates `chart` so that `ca -> pa` and `cb -> pb`.
fn rigid_fit<T: Scalar>(
    chart: &[Point2<T>],
    ca: Point2<T>,
    cb: Point2<T>,
    pa: Point2<T>,
    pb: Point2<T>,
) -> Vec<Point2<T>> {
    let dc = [cb[0] - ca[0], cb[1] - ca[1]];
    let dp = [pb[0] - pa[0], pb[1] - pa[1]];
    // unit complex number dp / dc
    let re = dp[0] * dc[0] + dp[1] * dc[1];
    let im = dp[1] * dc[0] - dp[0] * dc[1];
    let norm = (re * re + im * im).sqrt();
    let (c, s) = (re / norm, im / norm);
    chart
        .iter()
        .map(|q| {
            let d = [q[0] - ca[0], q[1] - ca[1]];
            [pa[0] + c * d[0] - s * d[1], pa[1] + s * d[0] + c * d[1]]
        })
        .collect()
}

/// Parent and child polygons lie on opposite sides of the hinge line.
fn opposite_sides<T: Scalar>(
    parent: &[Point2<T>],
    child: &[Point2<T>],
    a: Point2<T>,
    b: Point2<T>,
) -> bool {
    let side = |pts: &[Point2<T>]| {
        pts.iter()
            .map(|&p| cross2(a, b, p))
            .fold(
                T::zero(),
                |acc, x| if x.abs() > acc.abs() { x } else { acc },
            )
    };
    side(parent) * side(child) < T::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::EdgeSet;
    use crate::geometry::dist;

    /// Two unit squares sharing an edge, as an open strip.
    fn domino() -> PolyhedronSpec<f64> {
        PolyhedronSpec::new(
            "domino",
            vec![
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [2.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [1.0, 1.0, 0.0],
                [2.0, 1.0, 0.0],
            ],
            vec![vec![0, 1, 4, 3], vec![1, 2, 5, 4]],
        )
    }

    #[test]
    fn single_hinge_gives_rectangle() {
        let spec = domino();
        let u = Unfolder::new_open(&spec).unwrap();
        let g = u.graph();
        let boundary: EdgeSet = (0..g.edge_count())
            .filter(|&e| g.edge(e) != (1, 4))
            .collect();
        let net = u.unfold(&Cut(boundary)).unwrap();
        assert_eq!(net.hinges.len(), 1);
        let xs: Vec<f64> = net
            .faces
            .iter()
            .flat_map(|f| f.points.iter().map(|p| p[0]))
            .collect();
        let ys: Vec<f64> = net
            .faces
            .iter()
            .flat_map(|f| f.points.iter().map(|p| p[1]))
            .collect();
        let span = |v: &[f64]| {
            v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
        };
        let (w, h) = (span(&xs), span(&ys));
        assert!((w.max(h) - 2.0).abs() < 1e-12 && (w.min(h) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn charts_are_isometric() {
        let pts: [[f64; 3]; 3] = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let chart = face_chart(&pts);
        for i in 0..3 {
            let j = (i + 1) % 3;
            let d3 = v3::norm(v3::sub(pts[i], pts[j]));
            assert!((dist(chart[i], chart[j]) - d3).abs() < 1e-12);
        }
        // counter-clockwise in the chart when CCW around the normal
        assert!(cross2(chart[0], chart[1], chart[2]) > 0.0);
    }
}
