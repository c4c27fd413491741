//! Planar nets: unfolding, area moments, overlap screening, ranking and
//! SVG export. Everything here is generic over the [`Scalar`] type.
//!
//! [`Scalar`]: crate::Scalar

mod moments;
mod overlap;
mod ranking;
mod svg;
mod unfold;

pub use moments::{centroid_and_rg, polygon_moments, PolygonMoments};
pub use overlap::{check_overlap, polygons_overlap_area, OverlapReport};
pub use ranking::{rank_nets, rank_with, select_optimal_net, RankedNet};
pub use svg::{export_svg, SvgOptions};
pub use unfold::{unfold, vertex_connections, Unfolder};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

pub type Point2<T> = [T; 2];

/// One face placed in the plane. `vertices` are shell vertex indices in the
/// face's cycle order and `points` their placed positions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacedFace<T> {
    pub face: usize,
    pub vertices: Vec<usize>,
    pub points: Vec<Point2<T>>,
}

impl<T: Scalar> PlacedFace<T> {
    pub fn position_of(&self, vertex: usize) -> Option<Point2<T>> {
        self.vertices
            .iter()
            .position(|&v| v == vertex)
            .map(|i| self.points[i])
    }
}

/// A kept (uncut) shell edge joining a placed face to its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hinge {
    pub parent: usize,
    pub child: usize,
    pub edge: usize,
}

/// A leaf of the cut: two faces that meet at `vertex` in the net without
/// sharing an edge. `points` are the placed copies of `vertex` in the two
/// faces beside the cut edge, `far_points` the copies of the cut edge's other
/// endpoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexConnection<T> {
    pub vertex: usize,
    pub cut_edge: usize,
    pub faces: (usize, usize),
    pub points: (Point2<T>, Point2<T>),
    pub far_points: (Point2<T>, Point2<T>),
}

/// A complete unfolded net.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetLayout<T> {
    pub root_face: usize,
    /// Indexed by face.
    pub faces: Vec<PlacedFace<T>>,
    /// In placement order.
    pub hinges: Vec<Hinge>,
    pub connections: Vec<VertexConnection<T>>,
}

impl<T: Scalar> NetLayout<T> {
    /// Mean placed edge length over all faces.
    pub fn mean_edge_length(&self) -> T {
        let mut total = T::zero();
        let mut count = 0usize;
        for f in &self.faces {
            for i in 0..f.points.len() {
                total = total + dist(f.points[i], f.points[(i + 1) % f.points.len()]);
                count += 1;
            }
        }
        if count == 0 {
            T::zero()
        } else {
            total / T::from_usize(count).unwrap()
        }
    }

    /// Applies a rotation by `angle` and then a translation.
    pub fn transformed(&self, angle: T, shift: Point2<T>) -> Self {
        let (s, c) = angle.sin_cos();
        let map = |p: Point2<T>| {
            [
                c * p[0] - s * p[1] + shift[0],
                s * p[0] + c * p[1] + shift[1],
            ]
        };
        let mut out = self.clone();
        for f in &mut out.faces {
            for p in &mut f.points {
                *p = map(*p);
            }
        }
        for vc in &mut out.connections {
            vc.points = (map(vc.points.0), map(vc.points.1));
            vc.far_points = (map(vc.far_points.0), map(vc.far_points.1));
        }
        out
    }
}

#[inline]
pub(crate) fn dist<T: Scalar>(a: Point2<T>, b: Point2<T>) -> T {
    ((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1])).sqrt()
}

#[inline]
pub(crate) fn cross2<T: Scalar>(o: Point2<T>, a: Point2<T>, b: Point2<T>) -> T {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}
