use std::path::{Path, PathBuf};

use dsm_drive::analysis::{AnalysisConfig, DriveSignal, NoiseScale, SnrMethod};
use dsm_drive::MotorParams64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Drive {
    pub v_peak: f64,
    pub f: f64,
}

/// Everything a run depends on. Defaults reproduce the reference setup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Motor parameter file; the built-in reference machine when absent.
    pub motor: Option<PathBuf>,
    pub fs: f64,
    pub osr: usize,
    pub gamma: f64,
    pub sigmas: Vec<f64>,
    pub drive: Drive,
    pub output_dir: PathBuf,
    pub levels: usize,
    pub full_scale: f64,
    pub standard_order: usize,
    pub optimized_order: usize,
    pub grid_points: usize,
    pub noise_scale: NoiseScale,
    pub transient_periods: usize,
    pub measured_periods: usize,
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            motor: None,
            fs: 1e5,
            osr: 1000,
            gamma: 1.5,
            sigmas: vec![0.043, 0.2, 0.6],
            drive: Drive {
                v_peak: 190.0,
                f: 50.0,
            },
            output_dir: PathBuf::from("out"),
            levels: 2,
            full_scale: 320.0,
            standard_order: 4,
            optimized_order: 8,
            grid_points: 1024,
            noise_scale: NoiseScale::HalfBand,
            transient_periods: 10,
            measured_periods: 40,
            seed: None,
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub fs: Option<f64>,
    pub osr: Option<usize>,
    pub gamma: Option<f64>,
    pub sigmas: Vec<f64>,
    pub levels: Option<usize>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(v) = &overrides.out {
            cfg.output_dir = v.clone();
        }
        if let Some(v) = overrides.fs {
            cfg.fs = v;
        }
        if let Some(v) = overrides.osr {
            cfg.osr = v;
        }
        if let Some(v) = overrides.gamma {
            cfg.gamma = v;
        }
        if !overrides.sigmas.is_empty() {
            cfg.sigmas = overrides.sigmas.clone();
        }
        if let Some(v) = overrides.levels {
            cfg.levels = v;
        }
        if overrides.seed.is_some() {
            cfg.seed = overrides.seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.fs > 0.0) || !self.fs.is_finite() {
            return bad(format!("fs must be positive, got {}", self.fs));
        }
        if self.osr < 2 {
            return bad(format!("osr must be at least 2, got {}", self.osr));
        }
        if !(self.drive.f > 0.0) || !(self.drive.v_peak >= 0.0) {
            return bad("drive needs positive f and non-negative v_peak".into());
        }
        if self.fs / (2.0 * self.osr as f64) < self.drive.f {
            return bad(format!(
                "signal band fs/(2 osr) = {} Hz is below the drive frequency {} Hz",
                self.fs / (2.0 * self.osr as f64),
                self.drive.f
            ));
        }
        if !(self.gamma > 1.0) {
            return bad(format!("gamma must exceed 1, got {}", self.gamma));
        }
        if let Some(s) = self.sigmas.iter().find(|s| !(**s >= 0.0 && **s <= 1.0)) {
            return bad(format!("slip {s} outside [0, 1]"));
        }
        if self.levels < 2 {
            return bad(format!(
                "quantizer needs at least 2 levels, got {}",
                self.levels
            ));
        }
        Ok(())
    }

    pub fn motor_params(&self) -> Result<MotorParams64, CliError> {
        match &self.motor {
            None => Ok(MotorParams64::reference()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                MotorParams64::from_json(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
            }
        }
    }

    pub fn analysis(&self) -> AnalysisConfig<f64> {
        AnalysisConfig {
            fs: self.fs,
            drive: DriveSignal {
                v_peak: self.drive.v_peak,
                frequency: self.drive.f,
            },
            quantizer_levels: self.levels,
            full_scale: self.full_scale,
            noise_scale: self.noise_scale,
            transient_periods: self.transient_periods,
            measured_periods: self.measured_periods,
        }
    }

    /// SHA-256 of the resolved configuration and motor parameters.
    pub fn hash(&self, motor: &MotorParams64, method: Option<SnrMethod>) -> String {
        #[derive(Serialize)]
        struct Hashed<'a> {
            config: &'a RunConfig,
            motor: &'a MotorParams64,
            method: Option<SnrMethod>,
        }
        let mut cfg = self.clone();
        // where the results go does not change them
        cfg.output_dir = PathBuf::new();
        let bytes = serde_json::to_vec(&Hashed {
            config: &cfg,
            motor,
            method,
        })
        .expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}
