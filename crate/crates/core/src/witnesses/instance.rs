use crate::body::Body;
use crate::covering::CoverWitness;
use crate::error::Result;
use crate::linalg::Vector;
use crate::strong::hull_member;
use crate::tolerance::ToleranceConfig;

/// A gauge, a point set and a point in its strong hull that no small subset
/// captures.
#[derive(Debug, Clone)]
pub struct WitnessInstance {
    pub gauge: Body,
    pub points: Vec<Vector>,
    pub test_point: Vector,
    /// Lower bound on the size of any subset whose hull contains the point.
    pub expected_min_subset: usize,
    /// Subsets of `points` with a translate separating them from the point.
    pub certificate_translates: Vec<(Vec<usize>, CoverWitness)>,
}

impl WitnessInstance {
    /// The point is in the hull of all points and every certificate holds.
    pub fn verify(&self, tol: &ToleranceConfig) -> Result<bool> {
        if !hull_member(&self.gauge, &self.points, &self.test_point, tol)?.is_member() {
            return Ok(false);
        }
        for (idx, w) in &self.certificate_translates {
            let pts: Vec<Vector> = idx.iter().map(|&i| self.points[i].clone()).collect();
            if !w.verify(&self.gauge, &pts, &self.test_point, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
