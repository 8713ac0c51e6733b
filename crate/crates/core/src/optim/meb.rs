//! Minimum enclosing ball in any dimension (Welzl's recursion).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{Matrix, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct EnclosingBall {
    pub center: Vector,
    pub radius: f64,
}

impl EnclosingBall {
    fn covers(&self, p: &Vector) -> bool {
        (p - &self.center).norm() <= self.radius * (1.0 + 1e-12) + 1e-14
    }
}

/// Smallest ball through all points of `boundary` (within their affine hull).
fn circumball(boundary: &[Vector]) -> Option<EnclosingBall> {
    let p0 = boundary.first()?;
    if boundary.len() == 1 {
        return Some(EnclosingBall {
            center: p0.clone(),
            radius: 0.0,
        });
    }
    let k = boundary.len() - 1;
    let diffs: Vec<Vector> = boundary[1..].iter().map(|p| p - p0).collect();
    let mut gram = Matrix::zeros(k, k);
    let mut rhs = Vector::zeros(k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = diffs[i].dot(&diffs[j]);
        }
        rhs[i] = diffs[i].norm_squared() / 2.0;
    }
    let lambda = gram.svd(true, true).solve(&rhs, 1e-12).ok()?;
    let mut center = p0.clone();
    for i in 0..k {
        center += &diffs[i] * lambda[i];
    }
    let radius = boundary
        .iter()
        .map(|p| (p - &center).norm())
        .fold(0.0, f64::max);
    Some(EnclosingBall { center, radius })
}

fn welzl(points: &[Vector], boundary: &mut Vec<Vector>, dim: usize) -> Option<EnclosingBall> {
    if points.is_empty() || boundary.len() == dim + 1 {
        return circumball(boundary);
    }
    let (last, rest) = points.split_last()?;
    if let Some(ball) = welzl(rest, boundary, dim) {
        if ball.covers(last) {
            return Some(ball);
        }
    }
    boundary.push(last.clone());
    let ball = welzl(rest, boundary, dim);
    boundary.pop();
    ball
}

/// Minimum enclosing ball of a nonempty point set.
pub fn min_enclosing_ball(points: &[Vector]) -> Option<EnclosingBall> {
    let first = points.first()?;
    let mut shuffled = points.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(0xba11));
    let mut boundary = Vec::new();
    let ball = welzl(&shuffled, &mut boundary, first.len())?;
    // Guard against round-off: the radius must reach every point.
    let radius = points
        .iter()
        .map(|p| (p - &ball.center).norm())
        .fold(ball.radius, f64::max);
    Some(EnclosingBall {
        center: ball.center,
        radius,
    })
}
