use crate::model::Objective;
use crate::Error;

/// Radius of the grid neighborhood searched for candidate points, in cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hood {
    Cells(u32),
    Infinite,
}

/// Sign of the existing-edge term in the penalty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightVariant {
    /// `area + alpha * (|qp1| + |qp2| - |p1p2|)`
    Minus,
    /// `area + alpha * (|qp1| + |qp2| + |p1p2|)`
    Plus,
}

/// Instances up to this size always use an unbounded neighborhood unless the
/// caller pins `hood` explicitly.
pub const SMALL_INSTANCE: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct SolveParams {
    /// Long-edge penalty. The CLI exposes it as `pen = 1 / alpha`.
    pub alpha: f64,
    /// Longest vertex path moved by the local search.
    pub hops: usize,
    pub hood: Hood,
    /// When false, `hood` is replaced by [`Hood::Infinite`] on small instances.
    pub hood_pinned: bool,
    /// Standard deviation of the multiplicative weight noise.
    pub sigma: f64,
    pub objective: Objective,
    pub seed: u64,
    pub weight_variant: WeightVariant,
    /// Local search stops once a full round improves the score by less than this.
    pub ls_epsilon: f64,
    /// Number of starting triangles tried when minimizing.
    pub start_triangles: usize,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            alpha: 1.0 / 90.0,
            hops: 10,
            hood: Hood::Cells(2),
            hood_pinned: false,
            sigma: 0.0,
            objective: Objective::Max,
            seed: 0,
            weight_variant: WeightVariant::Minus,
            ls_epsilon: 0.001,
            start_triangles: 8,
        }
    }
}

impl SolveParams {
    pub fn new(objective: Objective) -> Self {
        SolveParams { objective, ..Default::default() }
    }

    /// Neighborhood actually used for an instance of `n` points.
    pub fn effective_hood(&self, n: usize) -> Hood {
        if !self.hood_pinned && n <= SMALL_INSTANCE {
            Hood::Infinite
        } else {
            self.hood
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter("alpha must be finite and non-negative"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter("sigma must be finite and non-negative"));
        }
        if self.ls_epsilon.is_nan() || self.ls_epsilon < 0.0 {
            return Err(Error::InvalidParameter("ls_epsilon must be non-negative"));
        }
        if self.start_triangles == 0 {
            return Err(Error::InvalidParameter("start_triangles must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let p = SolveParams::default();
        assert_eq!(p.alpha, 1.0 / 90.0);
        assert_eq!(p.hops, 10);
        assert_eq!(p.hood, Hood::Cells(2));
        assert_eq!(p.sigma, 0.0);
        assert_eq!(p.weight_variant, WeightVariant::Minus);
        assert_eq!(p.ls_epsilon, 0.001);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn small_instances_search_everything() {
        let mut p = SolveParams::default();
        assert_eq!(p.effective_hood(100), Hood::Infinite);
        assert_eq!(p.effective_hood(101), Hood::Cells(2));
        p.hood_pinned = true;
        assert_eq!(p.effective_hood(10), Hood::Cells(2));
    }

    #[test]
    fn rejects_bad_values() {
        let p = SolveParams { alpha: -1.0, ..Default::default() };
        assert!(p.validate().is_err());
        let p = SolveParams { sigma: f64::NAN, ..Default::default() };
        assert!(p.validate().is_err());
    }
}
