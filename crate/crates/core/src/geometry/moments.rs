use super::{NetLayout, Point2};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Area integrals of a polygon region, taken relative to some origin:
/// `area = ∫dA`, `first = (∫x dA, ∫y dA)`, `second = ∫(x² + y²) dA`.
/// Clockwise polygons give negated values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolygonMoments<T> {
    pub area: T,
    pub first: Point2<T>,
    pub second: T,
}

impl<T: Scalar> PolygonMoments<T> {
    pub fn zero() -> Self {
        PolygonMoments {
            area: T::zero(),
            first: [T::zero(); 2],
            second: T::zero(),
        }
    }

    pub fn add(self, other: Self) -> Self {
        PolygonMoments {
            area: self.area + other.area,
            first: [
                self.first[0] + other.first[0],
                self.first[1] + other.first[1],
            ],
            second: self.second + other.second,
        }
    }

    pub fn centroid(&self) -> Point2<T> {
        [self.first[0] / self.area, self.first[1] / self.area]
    }

    /// Polar second moment about the centroid, per unit area.
    pub fn central_second(&self) -> T {
        let c = self.centroid();
        self.second / self.area - (c[0] * c[0] + c[1] * c[1])
    }
}

/// Shoelace-type moments of a simple polygon about `origin`.
pub fn polygon_moments<T: Scalar>(points: &[Point2<T>], origin: Point2<T>) -> PolygonMoments<T> {
    let n = points.len();
    let mut area = T::zero();
    let mut mx = T::zero();
    let mut my = T::zero();
    let mut ixx = T::zero();
    let mut iyy = T::zero();
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        let (x0, y0) = (p[0] - origin[0], p[1] - origin[1]);
        let (x1, y1) = (q[0] - origin[0], q[1] - origin[1]);
        let c = x0 * y1 - x1 * y0;
        area = area + c;
        mx = mx + (x0 + x1) * c;
        my = my + (y0 + y1) * c;
        ixx = ixx + (x0 * x0 + x0 * x1 + x1 * x1) * c;
        iyy = iyy + (y0 * y0 + y0 * y1 + y1 * y1) * c;
    }
    PolygonMoments {
        area: area / T::lit(2.0),
        first: [mx / T::lit(6.0), my / T::lit(6.0)],
        second: (ixx + iyy) / T::lit(12.0),
    }
}

/// Centroid and radius of gyration of the whole net, summing faces (so
/// overlapping regions count more than once).
pub fn centroid_and_rg<T: Scalar>(layout: &NetLayout<T>) -> Result<(Point2<T>, T)> {
    let mut count = 0usize;
    let mut origin = [T::zero(); 2];
    for f in &layout.faces {
        for p in &f.points {
            origin = [origin[0] + p[0], origin[1] + p[1]];
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::DegenerateArea);
    }
    let n = T::from_usize(count).unwrap();
    origin = [origin[0] / n, origin[1] / n];
    let total = layout
        .faces
        .iter()
        .map(|f| polygon_moments(&f.points, origin))
        .fold(PolygonMoments::zero(), PolygonMoments::add);
    let scale = layout.mean_edge_length();
    if !(total.area.abs() > T::lit(1e-12) * scale * scale) {
        return Err(Error::DegenerateArea);
    }
    let c = total.centroid();
    let rg2 = total.central_second().max(T::zero());
    Ok(([c[0] + origin[0], c[1] + origin[1]], rg2.sqrt()))
}
