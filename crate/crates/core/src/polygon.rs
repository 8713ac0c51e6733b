//! Planar convex polygon helpers.

use crate::linalg::{vector, Vector};

pub type P2 = [f64; 2];

fn cross(o: P2, a: P2, b: P2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex hull in counter-clockwise order without collinear vertices
/// (Andrew's monotone chain).
pub fn convex_hull(points: &[P2]) -> Vec<P2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() < 1e-12 && (a[1] - b[1]).abs() < 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts
        .iter()
        .fold(1.0f64, |s, p| s.max(p[0].abs()).max(p[1].abs()));
    let eps = 1e-12 * scale * scale;
    let mut hull: Vec<P2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &P2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Outward unit normals and offsets describing the convex hull of `points`.
/// Degenerate hulls (a point or a segment) get a four-halfspace description.
pub fn halfspaces_of_hull(points: &[P2]) -> (Vec<Vector>, Vec<f64>) {
    let hull = convex_hull(points);
    let mut normals = Vec::new();
    let mut offsets = Vec::new();
    let mut push = |n: [f64; 2], p: P2| {
        let len = (n[0] * n[0] + n[1] * n[1]).sqrt();
        let n = [n[0] / len, n[1] / len];
        normals.push(vector(&n));
        offsets.push(n[0] * p[0] + n[1] * p[1]);
    };
    match hull.len() {
        0 => {}
        1 => {
            let p = hull[0];
            push([1.0, 0.0], p);
            push([-1.0, 0.0], p);
            push([0.0, 1.0], p);
            push([0.0, -1.0], p);
        }
        2 => {
            let (a, b) = (hull[0], hull[1]);
            let d = [b[0] - a[0], b[1] - a[1]];
            push(d, b);
            push([-d[0], -d[1]], a);
            push([d[1], -d[0]], a);
            push([-d[1], d[0]], a);
        }
        k => {
            for i in 0..k {
                let a = hull[i];
                let b = hull[(i + 1) % k];
                push([b[1] - a[1], a[0] - b[0]], a);
            }
        }
    }
    (normals, offsets)
}

/// Vertices of the Minkowski sum of two convex vertex sets.
pub fn minkowski_sum(a: &[P2], b: &[P2]) -> Vec<P2> {
    let sums: Vec<P2> = a
        .iter()
        .flat_map(|p| b.iter().map(move |q| [p[0] + q[0], p[1] + q[1]]))
        .collect();
    convex_hull(&sums)
}

pub fn to_p2(v: &Vector) -> P2 {
    [v[0], v[1]]
}

pub fn area(poly: &[P2]) -> f64 {
    let k = poly.len();
    (0..k)
        .map(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % k];
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
        / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_plus_triangle() {
        let sum = minkowski_sum(&[[0.0, 0.0], [1.0, 0.0]], &[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]);
        assert_eq!(sum, vec![[0.0, 0.0], [3.0, 0.0], [1.0, 2.0], [0.0, 2.0]]);
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let h = convex_hull(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [1.0, 1.0], [1.0, 0.2]]);
        assert_eq!(h, vec![[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]]);
        assert!((area(&h) - 1.0).abs() < 1e-12);
    }
}
