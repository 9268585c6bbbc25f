use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Design parameters shared by the conventional and optimized NTFs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec<T> {
    pub order: usize,
    pub osr: usize,
    /// Bound on `max |NTF(e^{jw})|`.
    pub gamma: T,
    /// Number of frequencies in `[0, pi]` carrying the gain constraint.
    pub grid_points: usize,
    /// Solver tolerance (KKT residual, gain bisection).
    pub tol: T,
}

impl<T: Real> Default for DesignSpec<T> {
    fn default() -> Self {
        Self {
            order: 8,
            osr: 1000,
            gamma: lit(1.5),
            grid_points: 1024,
            tol: lit(1e-9),
        }
    }
}

impl<T: Real> DesignSpec<T> {
    pub fn with_order(order: usize) -> Self {
        Self {
            order,
            grid_points: 1024.max(16 * order),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 || self.order > 32 {
            return Err(Error::InvalidParameter(format!(
                "order must be in 1..=32, got {}",
                self.order
            )));
        }
        if self.osr < 2 {
            return Err(Error::InvalidParameter("OSR must be at least 2".into()));
        }
        if !(self.gamma > T::one()) || !self.gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gamma must exceed 1, got {}",
                self.gamma
            )));
        }
        if self.grid_points < 16 * self.order {
            return Err(Error::InvalidParameter(format!(
                "grid_points must be at least 16*order = {}",
                16 * self.order
            )));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::InvalidParameter("tol must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        DesignSpec::<f64>::default().validate().unwrap();
    }

    #[test]
    fn invalid_specs() {
        let base = DesignSpec::<f64>::default();
        for bad in [
            DesignSpec { gamma: 1.0, ..base },
            DesignSpec { order: 0, ..base },
            DesignSpec {
                order: 33,
                grid_points: 4096,
                ..base
            },
            DesignSpec {
                grid_points: 100,
                ..base
            },
            DesignSpec { osr: 1, ..base },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }
}
