use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::filter::{FrequencyResponse, RationalFilter};
use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::Real;

/// FIR noise transfer function given by its impulse response `q`.
///
/// `q[0]` is always exactly one: the current quantization error reaches
/// the output undelayed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<T>", into = "Vec<T>")]
#[serde(bound(
    serialize = "T: Real + Serialize",
    deserialize = "T: Real + Deserialize<'de>"
))]
pub struct NtfFir<T> {
    q: Vec<T>,
}

impl<T: Real> NtfFir<T> {
    pub fn new(q: Vec<T>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidParameter("empty NTF".into()));
        }
        if q.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("NTF coefficients"));
        }
        if q[0] != T::one() {
            return Err(Error::InvalidParameter(format!(
                "NTF first coefficient must be exactly 1, got {}",
                q[0]
            )));
        }
        Ok(Self { q })
    }

    /// `NTF = 1`, no shaping.
    pub fn unity() -> Self {
        Self { q: vec![T::one()] }
    }

    pub fn coefficients(&self) -> &[T] {
        &self.q
    }

    /// Number of delays.
    pub fn order(&self) -> usize {
        self.q.len() - 1
    }

    pub fn to_filter(&self) -> RationalFilter<T> {
        RationalFilter::fir(self.q.clone()).expect("validated coefficients")
    }
}

impl<T: Real> TryFrom<Vec<T>> for NtfFir<T> {
    type Error = Error;
    fn try_from(q: Vec<T>) -> Result<Self> {
        Self::new(q)
    }
}

impl<T: Real> From<NtfFir<T>> for Vec<T> {
    fn from(n: NtfFir<T>) -> Self {
        n.q
    }
}

impl<T: Real> FrequencyResponse<T> for NtfFir<T> {
    fn response(&self, omega: T) -> Complex<T> {
        poly::eval_ascending(&self.q, Complex::from_polar(T::one(), -omega))
    }
}

/// Either NTF representation accepted by the modulator and the analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum Ntf<T> {
    Fir(NtfFir<T>),
    Rational(RationalFilter<T>),
}

impl<T: Real> Ntf<T> {
    /// Checks that the impulse response starts with exactly one sample of
    /// unit weight, which every realizable NTF must satisfy.
    pub fn validate(&self) -> Result<()> {
        match self {
            Ntf::Fir(_) => Ok(()),
            Ntf::Rational(f) => {
                let lead = f.num()[0];
                if (lead - T::one()).abs() > T::epsilon() * T::lit(16.0) {
                    return Err(Error::InvalidParameter(format!(
                        "NTF impulse response must start with 1, got {lead}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn to_filter(&self) -> RationalFilter<T> {
        match self {
            Ntf::Fir(q) => q.to_filter(),
            Ntf::Rational(f) => f.clone(),
        }
    }

    pub fn as_fir(&self) -> Option<&NtfFir<T>> {
        match self {
            Ntf::Fir(q) => Some(q),
            Ntf::Rational(_) => None,
        }
    }
}

impl<T: Real> From<NtfFir<T>> for Ntf<T> {
    fn from(q: NtfFir<T>) -> Self {
        Ntf::Fir(q)
    }
}

impl<T: Real> From<RationalFilter<T>> for Ntf<T> {
    fn from(f: RationalFilter<T>) -> Self {
        Ntf::Rational(f)
    }
}

impl<T: Real> FrequencyResponse<T> for Ntf<T> {
    fn response(&self, omega: T) -> Complex<T> {
        match self {
            Ntf::Fir(q) => q.response(omega),
            Ntf::Rational(f) => f.response(omega),
        }
    }
}

/// Frequency response at `omega` rad/sample for any filter-like value.
pub fn evaluate<T: Real, F: FrequencyResponse<T> + ?Sized>(filter: &F, omega: T) -> Complex<T> {
    filter.response(omega)
}

/// On-disk NTF description.
///
/// FIR designs use `q`. Rational designs (the conventional high-pass NTF)
/// use `num`/`den` instead and leave `q` out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NtfDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub num: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub den: Option<Vec<f64>>,
    pub gamma: f64,
    pub fs: f64,
    pub designed_for_sigma: Option<f64>,
}

impl NtfDocument {
    pub fn from_ntf(ntf: &Ntf<f64>, gamma: f64, fs: f64, designed_for_sigma: Option<f64>) -> Self {
        let (q, num, den) = match ntf {
            Ntf::Fir(q) => (Some(q.coefficients().to_vec()), None, None),
            Ntf::Rational(f) => (None, Some(f.num().to_vec()), Some(f.den().to_vec())),
        };
        Self {
            q,
            num,
            den,
            gamma,
            fs,
            designed_for_sigma,
        }
    }

    pub fn to_ntf(&self) -> Result<Ntf<f64>> {
        match (&self.q, &self.num, &self.den) {
            (Some(q), None, None) => Ok(Ntf::Fir(NtfFir::new(q.clone())?)),
            (None, Some(n), Some(d)) => {
                let ntf = Ntf::Rational(RationalFilter::new(n.clone(), d.clone())?);
                ntf.validate()?;
                Ok(ntf)
            }
            _ => Err(Error::InvalidParameter(
                "NTF document needs either `q` or both `num` and `den`".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fir_requires_exact_unit_lead() {
        assert!(NtfFir::new(vec![1.0 + 1e-15, 0.5]).is_err());
        assert!(NtfFir::new(vec![1.0, 0.5]).is_ok());
        assert!(NtfFir::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn evaluate_differencer() {
        let n = NtfFir::new(vec![1.0, -1.0]).unwrap();
        assert!(evaluate(&n, 0.0).norm() < 1e-15);
        assert!((evaluate(&n, PI).norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn fir_response_matches_direct_fourier_sum() {
        let q = vec![1.0, -0.73, -0.26, 0.01, 0.06, 0.02];
        let n = NtfFir::new(q.clone()).unwrap();
        for i in 0..=50 {
            let w = PI * i as f64 / 50.0;
            let (mut re, mut im) = (0.0, 0.0);
            for (k, c) in q.iter().enumerate() {
                re += c * (w * k as f64).cos();
                im -= c * (w * k as f64).sin();
            }
            let h = evaluate(&n, w);
            assert!((h.re - re).abs() < 1e-13 && (h.im - im).abs() < 1e-13);
        }
    }

    #[test]
    fn json_schema_for_fir() {
        let doc = NtfDocument::from_ntf(
            &Ntf::Fir(NtfFir::new(vec![1.0, -0.5]).unwrap()),
            1.5,
            1e5,
            Some(0.2),
        );
        let s = serde_json::to_string(&doc).unwrap();
        assert_eq!(
            s,
            r#"{"q":[1.0,-0.5],"gamma":1.5,"fs":100000.0,"designed_for_sigma":0.2}"#
        );
        let back: NtfDocument = serde_json::from_str(&s).unwrap();
        assert_eq!(
            back.to_ntf().unwrap(),
            Ntf::Fir(NtfFir::new(vec![1.0, -0.5]).unwrap())
        );
    }

    #[test]
    fn json_rejects_bad_lead() {
        let doc: NtfDocument = serde_json::from_str(
            r#"{"q":[0.9,-0.5],"gamma":1.5,"fs":1e5,"designed_for_sigma":null}"#,
        )
        .unwrap();
        assert!(doc.to_ntf().is_err());
    }
}
