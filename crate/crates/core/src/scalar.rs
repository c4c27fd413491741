//! Floating-point scalar abstraction for the geometric half of the pipeline.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used for coordinates, areas and moments.
///
/// Implemented for `f32` and `f64`; graph topology never depends on it.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts a literal, panicking only for values the type cannot hold.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// 3D vector helpers on plain arrays.
pub(crate) mod v3 {
    use super::Scalar;

    #[inline]
    pub fn sub<T: Scalar>(a: [T; 3], b: [T; 3]) -> [T; 3] {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    #[inline]
    pub fn add<T: Scalar>(a: [T; 3], b: [T; 3]) -> [T; 3] {
        [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
    }

    #[inline]
    pub fn scale<T: Scalar>(a: [T; 3], s: T) -> [T; 3] {
        [a[0] * s, a[1] * s, a[2] * s]
    }

    #[inline]
    pub fn dot<T: Scalar>(a: [T; 3], b: [T; 3]) -> T {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    #[inline]
    pub fn cross<T: Scalar>(a: [T; 3], b: [T; 3]) -> [T; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    #[inline]
    pub fn norm<T: Scalar>(a: [T; 3]) -> T {
        dot(a, a).sqrt()
    }

    pub fn normalize<T: Scalar>(a: [T; 3]) -> [T; 3] {
        let n = norm(a);
        if n == T::zero() {
            a
        } else {
            scale(a, T::one() / n)
        }
    }

    /// Newell normal of a polygon (unnormalized, length = twice the area).
    pub fn newell<T: Scalar>(points: &[[T; 3]]) -> [T; 3] {
        let mut n = [T::zero(); 3];
        for (i, p) in points.iter().enumerate() {
            let q = points[(i + 1) % points.len()];
            n[0] = n[0] + (p[1] - q[1]) * (p[2] + q[2]);
            n[1] = n[1] + (p[2] - q[2]) * (p[0] + q[0]);
            n[2] = n[2] + (p[0] - q[0]) * (p[1] + q[1]);
        }
        n
    }

    pub fn centroid<T: Scalar>(points: &[[T; 3]]) -> [T; 3] {
        let mut c = [T::zero(); 3];
        for p in points {
            c = add(c, *p);
        }
        scale(c, T::one() / T::from_usize(points.len()).unwrap())
    }
}
