use crate::error::{GeomError, Result};

/// Numerical tolerances shared by every query.
///
/// `eps_feas` is the slack granted to closed-set membership; a separation is
/// only trusted when its margin exceeds `eps_margin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub eps_feas: f64,
    pub eps_margin: f64,
    pub direction_grid_size: usize,
    pub refine_iters: usize,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eps_feas: 1e-9,
            eps_margin: 1e-6,
            direction_grid_size: 2000,
            refine_iters: 50,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = self.eps_feas > 0.0
            && self.eps_margin > 0.0
            && self.direction_grid_size > 0
            && self.refine_iters > 0;
        if !positive || self.eps_feas >= self.eps_margin {
            return Err(GeomError::Precondition(format!(
                "invalid tolerances: {self:?}"
            )));
        }
        Ok(())
    }

    /// Same tolerances with the direction grid multiplied by `factor`.
    pub fn escalated(&self, factor: usize) -> Self {
        Self {
            direction_grid_size: self.direction_grid_size * factor,
            ..*self
        }
    }
}
