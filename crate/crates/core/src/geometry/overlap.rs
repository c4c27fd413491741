use super::{cross2, NetLayout, Point2};
use crate::scalar::Scalar;

/// Relative area below which two faces count as merely touching.
const AREA_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapReport<T> {
    pub overlapping: bool,
    /// Lowest overlapping face pair.
    pub witness: Option<(usize, usize)>,
    /// Intersection area of the witness pair.
    pub area: T,
}

/// Tests every pair of placed faces for an intersection of positive area.
/// Shared hinge edges and touching vertices have zero area, so adjacent
/// faces need no special casing.
pub fn check_overlap<T: Scalar>(layout: &NetLayout<T>) -> OverlapReport<T> {
    let scale = layout.mean_edge_length();
    let tol = T::lit(AREA_TOLERANCE) * scale * scale;
    let boxes: Vec<[T; 4]> = layout.faces.iter().map(|f| bbox(&f.points)).collect();
    let tris: Vec<Vec<[Point2<T>; 3]>> = layout
        .faces
        .iter()
        .map(|f| triangulate(&f.points))
        .collect();
    let margin = T::lit(AREA_TOLERANCE) * scale;
    for i in 0..layout.faces.len() {
        for j in i + 1..layout.faces.len() {
            let (a, b) = (boxes[i], boxes[j]);
            if a[0] > b[2] - margin
                || b[0] > a[2] - margin
                || a[1] > b[3] - margin
                || b[1] > a[3] - margin
            {
                continue;
            }
            let area = triangles_overlap_area(&tris[i], &tris[j]);
            if area > tol {
                return OverlapReport {
                    overlapping: true,
                    witness: Some((layout.faces[i].face, layout.faces[j].face)),
                    area,
                };
            }
        }
    }
    OverlapReport {
        overlapping: false,
        witness: None,
        area: T::zero(),
    }
}

/// Area of the intersection of two simple polygons.
pub fn polygons_overlap_area<T: Scalar>(a: &[Point2<T>], b: &[Point2<T>]) -> T {
    triangles_overlap_area(&triangulate(a), &triangulate(b))
}

fn triangles_overlap_area<T: Scalar>(a: &[[Point2<T>; 3]], b: &[[Point2<T>; 3]]) -> T {
    let mut total = T::zero();
    for s in a {
        for t in b {
            total = total + polygon_area(&clip_convex(s, t));
        }
    }
    total
}

fn bbox<T: Scalar>(pts: &[Point2<T>]) -> [T; 4] {
    let inf = T::infinity();
    pts.iter().fold([inf, inf, -inf, -inf], |b, p| {
        [
            b[0].min(p[0]),
            b[1].min(p[1]),
            b[2].max(p[0]),
            b[3].max(p[1]),
        ]
    })
}

fn polygon_area<T: Scalar>(pts: &[Point2<T>]) -> T {
    let n = pts.len();
    let mut s = T::zero();
    for i in 0..n {
        let (p, q) = (pts[i], pts[(i + 1) % n]);
        s = s + p[0] * q[1] - q[0] * p[1];
    }
    s / T::lit(2.0)
}

/// Ear clipping; the result is counter-clockwise whatever the input winding.
fn triangulate<T: Scalar>(pts: &[Point2<T>]) -> Vec<[Point2<T>; 3]> {
    let mut ring: Vec<Point2<T>> = pts.to_vec();
    if polygon_area(&ring) < T::zero() {
        ring.reverse();
    }
    let mut out = Vec::with_capacity(ring.len().saturating_sub(2));
    while ring.len() > 3 {
        let n = ring.len();
        let ear = (0..n).find(|&i| {
            let (p, c, q) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
            cross2(p, c, q) > T::zero()
                && !ring
                    .iter()
                    .any(|&r| r != p && r != c && r != q && in_triangle(r, p, c, q))
        });
        // a degenerate ring has no strict ear; fall back to a fan
        let i = ear.unwrap_or(1);
        out.push([ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]]);
        ring.remove(i);
    }
    if ring.len() == 3 {
        out.push([ring[0], ring[1], ring[2]]);
    }
    out
}

fn in_triangle<T: Scalar>(r: Point2<T>, a: Point2<T>, b: Point2<T>, c: Point2<T>) -> bool {
    cross2(a, b, r) >= T::zero() && cross2(b, c, r) >= T::zero() && cross2(c, a, r) >= T::zero()
}

/// Sutherland-Hodgman clip of `subject` by the counter-clockwise `clip`.
fn clip_convex<T: Scalar>(subject: &[Point2<T>; 3], clip: &[Point2<T>; 3]) -> Vec<Point2<T>> {
    let mut poly: Vec<Point2<T>> = subject.to_vec();
    for k in 0..3 {
        if poly.is_empty() {
            break;
        }
        let (a, b) = (clip[k], clip[(k + 1) % 3]);
        let input = std::mem::take(&mut poly);
        let n = input.len();
        for i in 0..n {
            let p = input[i];
            let q = input[(i + 1) % n];
            let sp = cross2(a, b, p);
            let sq = cross2(a, b, q);
            if sp >= T::zero() {
                poly.push(p);
            }
            if (sp >= T::zero()) != (sq >= T::zero()) {
                let t = sp / (sp - sq);
                poly.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
    }
    poly
}
