//! Small vector helpers over `nalgebra` dynamic vectors.

use nalgebra::{DMatrix, DVector};

use crate::error::{GeomError, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Builds a vector from a slice.
pub fn vector(coords: &[f64]) -> Vector {
    DVector::from_column_slice(coords)
}

pub fn zeros(n: usize) -> Vector {
    DVector::zeros(n)
}

/// Standard basis vector `e_i` in dimension `n`.
pub fn basis(n: usize, i: usize) -> Vector {
    let mut e = DVector::zeros(n);
    e[i] = 1.0;
    e
}

pub fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(GeomError::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub fn normalized(u: &Vector) -> Result<Vector> {
    let n = u.norm();
    if !(n > 0.0) || !n.is_finite() {
        return Err(GeomError::ZeroDirection);
    }
    Ok(u / n)
}

/// Coordinate block `[start, start + len)` of `v`.
pub fn block(v: &Vector, start: usize, len: usize) -> Vector {
    v.rows(start, len).into_owned()
}

pub fn concat(parts: &[Vector]) -> Vector {
    let coords: Vec<f64> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    DVector::from_vec(coords)
}

/// Centroid of a nonempty point list.
pub fn centroid(points: &[Vector]) -> Vector {
    let mut c = zeros(points[0].len());
    for p in points {
        c += p;
    }
    c / points.len() as f64
}

/// Largest pairwise distance, used as a length scale.
pub fn diameter(points: &[Vector]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}
