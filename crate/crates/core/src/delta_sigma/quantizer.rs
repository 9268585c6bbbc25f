use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Uniform quantizer with `levels` outputs evenly spanning
/// `[-full_scale, +full_scale]`, saturating at the extremes.
///
/// Inputs are mapped to the nearest level; exact ties go to the upper
/// level, so the two-level quantizer is `full_scale * sign(v)` with
/// `sign(0) = +1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantizer<T> {
    levels: usize,
    full_scale: T,
}

impl<T: Real> Quantizer<T> {
    pub fn new(levels: usize, full_scale: T) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidParameter(format!(
                "quantizer needs at least 2 levels, got {levels}"
            )));
        }
        if !(full_scale > T::zero()) || !full_scale.is_finite() {
            return Err(Error::InvalidParameter(
                "full scale must be positive and finite".into(),
            ));
        }
        Ok(Self { levels, full_scale })
    }

    /// The single-phase bridge default: two levels at +/-320 V.
    pub fn bridge() -> Self {
        Self {
            levels: 2,
            full_scale: lit(320.0),
        }
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn full_scale(&self) -> T {
        self.full_scale
    }

    /// Spacing between adjacent output levels.
    pub fn step(&self) -> T {
        lit::<T>(2.0) * self.full_scale / T::from_usize_lossy(self.levels - 1)
    }

    #[inline]
    pub fn quantize(&self, v: T) -> T {
        let step = self.step();
        let top = T::from_usize_lossy(self.levels - 1);
        let idx = ((v + self.full_scale) / step + lit(0.5)).floor();
        let idx = if idx.is_nan() {
            T::zero()
        } else {
            idx.max(T::zero()).min(top)
        };
        -self.full_scale + idx * step
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_level_is_sign() {
        let q = Quantizer::new(2, 320.0).unwrap();
        assert_eq!(q.quantize(10.0), 320.0);
        assert_eq!(q.quantize(-0.1), -320.0);
        assert_eq!(q.quantize(0.0), 320.0);
        assert_eq!(q.quantize(1e9), 320.0);
        assert_eq!(q.step(), 640.0);
    }

    #[test]
    fn three_level_nearest() {
        let q = Quantizer::new(3, 320.0).unwrap();
        assert_eq!(q.step(), 320.0);
        assert_eq!(q.quantize(100.0), 0.0);
        assert_eq!(q.quantize(170.0), 320.0);
        assert_eq!(q.quantize(-170.0), -320.0);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(Quantizer::new(1, 1.0).is_err());
        assert!(Quantizer::new(2, 0.0).is_err());
        assert!(Quantizer::new(2, f64::NAN).is_err());
    }

    #[test]
    fn single_precision() {
        let q = Quantizer::<f32>::new(5, 2.0).unwrap();
        assert_eq!(q.quantize(0.4), 0.0);
        assert_eq!(q.quantize(0.6), 1.0);
    }

    proptest! {
        #[test]
        fn error_bounded_inside_range(levels in 2usize..33, v in -1.0f64..1.0) {
            let q = Quantizer::new(levels, 1.0).unwrap();
            let y = q.quantize(v);
            prop_assert!((y - v).abs() <= q.step() / 2.0 + 1e-12);
        }

        #[test]
        fn output_is_a_level(levels in 2usize..33, v in -5.0f64..5.0) {
            let q = Quantizer::new(levels, 1.0).unwrap();
            let y = q.quantize(v);
            let k = (y + 1.0) / q.step();
            prop_assert!((k - k.round()).abs() < 1e-9);
            prop_assert!(y.abs() <= 1.0 + 1e-12);
        }
    }
}
