//! Small fixed-size vector helpers and the tolerance policy.

use serde::{Deserialize, Serialize};

use crate::mesh::Point3;

#[inline]
pub fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn add(a: Point3, b: Point3) -> Point3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn scale(a: Point3, s: f64) -> Point3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot(a: Point3, b: Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: Point3, b: Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm(a: Point3) -> f64 {
    dot(a, a).sqrt()
}

/// Scalar triple product `a · (b × c)`.
#[inline]
pub fn triple(a: Point3, b: Point3, c: Point3) -> f64 {
    dot(a, cross(b, c))
}

/// `det[(b−a), (c−a), (d−a)] / 6`; exactly zero when two corners coincide.
#[inline]
pub fn signed_volume(a: Point3, b: Point3, c: Point3, d: Point3) -> f64 {
    if a == b || a == c || a == d || b == c || b == d || c == d {
        return 0.0;
    }
    triple(sub(b, a), sub(c, a), sub(d, a)) / 6.0
}

pub fn centroid<'a>(points: impl IntoIterator<Item = &'a Point3>) -> Point3 {
    let mut sum = [0.0; 3];
    let mut n = 0usize;
    for p in points {
        sum = add(sum, *p);
        n += 1;
    }
    if n == 0 {
        sum
    } else {
        scale(sum, 1.0 / n as f64)
    }
}

/// Axis-aligned bounds `(min, max)`; `None` for an empty input.
pub fn bounds<'a>(points: impl IntoIterator<Item = &'a Point3>) -> Option<(Point3, Point3)> {
    let mut it = points.into_iter();
    let first = *it.next()?;
    Some(it.fold((first, first), |(lo, hi), p| {
        (
            [lo[0].min(p[0]), lo[1].min(p[1]), lo[2].min(p[2])],
            [hi[0].max(p[0]), hi[1].max(p[1]), hi[2].max(p[2])],
        )
    }))
}

pub fn bbox_diagonal<'a>(points: impl IntoIterator<Item = &'a Point3>) -> f64 {
    bounds(points).map_or(0.0, |(lo, hi)| norm(sub(hi, lo)))
}

/// Geometric tolerances. Lengths scale with the bounding-box diagonal `d`:
/// distances use `eps_c·d`, areas `eps_c·d²` and volumes `eps_v·d³`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_c: f64,
    pub eps_v: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps_c: 1e-9,
            eps_v: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn length(&self, diag: f64) -> f64 {
        self.eps_c * diag
    }

    pub fn area(&self, diag: f64) -> f64 {
        self.eps_c * diag * diag
    }

    pub fn volume(&self, diag: f64) -> f64 {
        self.eps_v * diag * diag * diag
    }
}
