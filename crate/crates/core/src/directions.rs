//! Deterministic direction grids on the unit sphere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr_free::standard_normal;

use crate::linalg::{vector, Vector};

/// `count` unit directions in dimension `n`.
///
/// Equally spaced angles in 2D, a Fibonacci lattice in 3D, and seeded
/// Gaussian samples otherwise. The output depends only on `(n, count)`.
pub fn sphere_grid(n: usize, count: usize) -> Vec<Vector> {
    match n {
        0 => Vec::new(),
        1 => vec![vector(&[1.0]), vector(&[-1.0])],
        2 => (0..count)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / count as f64;
                vector(&[a.cos(), a.sin()])
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let a = golden * k as f64;
                    vector(&[r * a.cos(), r * a.sin(), z])
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + n as u64);
            let mut out = Vec::with_capacity(count + 2 * n);
            for i in 0..n {
                let mut e = Vector::zeros(n);
                e[i] = 1.0;
                out.push(e.clone());
                out.push(-e);
            }
            while out.len() < count.max(2 * n) {
                let g: Vec<f64> = (0..n).map(|_| standard_normal(&mut rng)).collect();
                let v = vector(&g);
                let norm = v.norm();
                if norm > 1e-9 {
                    out.push(v / norm);
                }
            }
            out
        }
    }
}

mod rand_distr_free {
    use rand::Rng;

    /// Box-Muller standard normal sample.
    pub fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
        let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

pub use rand_distr_free::standard_normal as gaussian;
