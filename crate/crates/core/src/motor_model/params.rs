use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Electrical and mechanical constants of a 3-phase induction motor.
///
/// Serialized with the customary symbol names (`P`, `B`, `J`, `Rs`, ...),
/// SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotorParams<T> {
    /// Number of poles.
    #[serde(rename = "P")]
    pub poles: u32,
    /// Viscous damping, N m s.
    #[serde(rename = "B")]
    pub damping: T,
    /// Rotor inertia, kg m^2.
    #[serde(rename = "J")]
    pub inertia: T,
    #[serde(rename = "Rs")]
    pub stator_resistance: T,
    #[serde(rename = "Rr")]
    pub rotor_resistance: T,
    #[serde(rename = "Ls")]
    pub stator_inductance: T,
    #[serde(rename = "Lr")]
    pub rotor_inductance: T,
    #[serde(rename = "Lm")]
    pub magnetizing_inductance: T,
    /// Nominal drive frequency, Hz.
    #[serde(rename = "fw")]
    pub nominal_frequency: T,
    /// Nominal peak phase voltage, V.
    #[serde(rename = "Vw")]
    pub nominal_voltage: T,
}

impl<T: Real> MotorParams<T> {
    /// The 4-pole reference machine used throughout the test-suite.
    pub fn reference() -> Self {
        Self {
            poles: 4,
            damping: lit(25e-3),
            inertia: lit(25e-3),
            stator_resistance: lit(17.7),
            rotor_resistance: lit(13.8),
            stator_inductance: lit(459.2e-3),
            rotor_inductance: lit(457.0e-3),
            magnetizing_inductance: lit(442.5e-3),
            nominal_frequency: lit(50.0),
            nominal_voltage: lit(320.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("B", self.damping),
            ("J", self.inertia),
            ("Rs", self.stator_resistance),
            ("Rr", self.rotor_resistance),
            ("Ls", self.stator_inductance),
            ("Lr", self.rotor_inductance),
            ("Lm", self.magnetizing_inductance),
            ("fw", self.nominal_frequency),
            ("Vw", self.nominal_voltage),
        ];
        for (name, v) in fields {
            if !v.is_finite() || v <= T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        if self.poles == 0 || !self.poles.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "pole count must be a positive even number, got {}",
                self.poles
            )));
        }
        let leak = self.leakage();
        if !(leak > T::zero() && leak < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "Lm^2 must be below Ls*Lr (leakage coefficient {leak})"
            )));
        }
        Ok(())
    }

    /// Total leakage coefficient `1 - Lm^2 / (Ls Lr)`.
    pub fn leakage(&self) -> T {
        let lm = self.magnetizing_inductance;
        T::one() - lm * lm / (self.stator_inductance * self.rotor_inductance)
    }

    pub fn pole_pairs(&self) -> T {
        T::from_u32(self.poles).expect("pole count") * lit(0.5)
    }

    /// Nominal electrical angular frequency, rad/s.
    pub fn nominal_omega(&self) -> T {
        T::TAU() * self.nominal_frequency
    }

    pub fn from_json(text: &str) -> Result<Self>
    where
        T: for<'de> Deserialize<'de>,
    {
        let p: Self = serde_json::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("motor parameters: {e}")))?;
        p.validate()?;
        Ok(p)
    }
}

/// Operating point on the torque-slip curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlipPoint<T> {
    pub sigma: T,
    /// Drive electrical angular frequency, rad/s.
    pub omega_w: T,
}

impl<T: Real> SlipPoint<T> {
    pub fn new(sigma: T, omega_w: T) -> Result<Self> {
        if !(sigma >= T::zero() && sigma <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "slip must lie in [0, 1], got {sigma}"
            )));
        }
        if !(omega_w > T::zero()) || !omega_w.is_finite() {
            return Err(Error::InvalidParameter("omega_w must be positive".into()));
        }
        Ok(Self { sigma, omega_w })
    }

    /// Slip from rotor mechanical speed: `1 - (omega_m P / 2) / omega_w`.
    pub fn slip_of(params: &MotorParams<T>, omega_m: T, omega_w: T) -> T {
        T::one() - omega_m * params.pole_pairs() / omega_w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_is_valid() {
        let p = MotorParams::<f64>::reference();
        p.validate().unwrap();
        assert!((p.leakage() - 0.066_942_365_754_542).abs() < 1e-12);
    }

    #[test]
    fn json_field_names() {
        let text = r#"{"P":4,"B":0.025,"J":0.025,"Rs":17.7,"Rr":13.8,"Ls":0.4592,"Lr":0.457,"Lm":0.4425,"fw":50,"Vw":320}"#;
        let p = MotorParams::<f64>::from_json(text).unwrap();
        assert_eq!(p, MotorParams::reference());
        let back = serde_json::to_string(&p).unwrap();
        assert!(back.starts_with(r#"{"P":4,"B":0.025"#));
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut p = MotorParams::<f64>::reference();
        p.poles = 3;
        assert!(p.validate().is_err());
        let mut p = MotorParams::<f64>::reference();
        p.magnetizing_inductance = 0.5;
        assert!(p.validate().is_err());
        let mut p = MotorParams::<f64>::reference();
        p.stator_resistance = -1.0;
        assert!(p.validate().is_err());
        assert!(MotorParams::<f64>::from_json(r#"{"P":4}"#).is_err());
    }

    #[test]
    fn slip_bounds() {
        assert!(SlipPoint::new(1.2, 314.0).is_err());
        assert!(SlipPoint::new(0.0, 314.0).is_ok());
        assert!(SlipPoint::new(0.5, 0.0).is_err());
    }
}
