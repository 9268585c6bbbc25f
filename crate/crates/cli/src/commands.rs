use std::path::{Path, PathBuf};

use dsm_drive::analysis::{
    build_sweep, diagonal_advantage, drive_samples, measure_current, modulate_drive, NtfEntry,
    SnrMethod, SweepConfig,
};
use dsm_drive::delta_sigma::{FrequencyResponse, Ntf, NtfDocument};
use dsm_drive::motor_model::{admittance, discretize_admittance, steady_state_slip};
use dsm_drive::ntf_design::{
    optimize_ntf_fir_report, synthesize_standard, weighting_from_admittance, DesignReport,
    DesignSpec,
};
use dsm_drive::MotorParams64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{stream_rows, Metadata, Output};

const RESPONSE_POINTS: usize = 1024;
const TF_POINTS: usize = 500;
const TF_MIN_HZ: f64 = 1.0;
const TF_MAX_HZ: f64 = 5e4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DesignMode {
    Standard,
    Optimized,
}

struct Context {
    cfg: RunConfig,
    motor: MotorParams64,
    out: Output,
}

impl Context {
    fn new(cfg: RunConfig, method: Option<SnrMethod>) -> Result<Self, CliError> {
        let motor = cfg.motor_params()?;
        let meta = Metadata {
            tool: "dsm-drive",
            version: env!("CARGO_PKG_VERSION"),
            config_sha256: cfg.hash(&motor, method),
            gamma: cfg.gamma,
            quantizer_levels: cfg.levels,
            full_scale: cfg.full_scale,
            fs: cfg.fs,
            seed: cfg.seed,
        };
        let out = Output::new(&cfg.output_dir, meta)?;
        Ok(Self { cfg, motor, out })
    }

    fn spec(&self, order: usize) -> DesignSpec<f64> {
        DesignSpec {
            order,
            osr: self.cfg.osr,
            gamma: self.cfg.gamma,
            grid_points: self.cfg.grid_points.max(16 * order),
            ..DesignSpec::default()
        }
    }

    fn standard(&self) -> Result<NtfEntry<f64>, CliError> {
        let ntf = synthesize_standard(&self.spec(self.cfg.standard_order))?;
        Ok(NtfEntry::new("standard", ntf, None))
    }

    fn optimized(&self, sigma: f64) -> Result<(NtfEntry<f64>, DesignReport<f64>), CliError> {
        let spec = self.spec(self.cfg.optimized_order);
        let w = weighting_from_admittance(&self.motor, sigma, self.cfg.fs, spec.order)?;
        let (q, report) = optimize_ntf_fir_report(&w, &spec)?;
        Ok((
            NtfEntry::new(format!("opt-{sigma}"), q, Some(sigma)),
            report,
        ))
    }
}

/// `|Y(j 2 pi f)|` in dB on a log grid, one column per slip.
pub fn motor_tf(cfg: RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let ctx = Context::new(cfg, None)?;
    let sigmas = ctx.cfg.sigmas.clone();
    let mut header = vec!["f_hz".to_string()];
    header.extend(sigmas.iter().map(|s| format!("sigma={s}")));
    let span = (TF_MAX_HZ / TF_MIN_HZ).log10();
    let rows = (0..TF_POINTS).map(|k| {
        let f = TF_MIN_HZ * 10f64.powf(span * k as f64 / (TF_POINTS - 1) as f64);
        let mut row = vec![f.to_string()];
        row.extend(sigmas.iter().map(|&s| {
            let y = admittance(&ctx.motor, s, std::f64::consts::TAU * f);
            (20.0 * y.norm().log10()).to_string()
        }));
        row
    });
    Ok(vec![ctx.out.csv("motor_tf.csv", &header, rows)?])
}

#[derive(Serialize)]
struct DesignDoc<'a> {
    #[serde(flatten)]
    ntf: NtfDocument,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<&'a DesignReport<f64>>,
}

fn write_design(
    ctx: &Context,
    stem: &str,
    entry: &NtfEntry<f64>,
    report: Option<&DesignReport<f64>>,
) -> Result<Vec<PathBuf>, CliError> {
    let doc = DesignDoc {
        ntf: NtfDocument::from_ntf(
            &entry.ntf,
            ctx.cfg.gamma,
            ctx.cfg.fs,
            entry.designed_for_sigma,
        ),
        report,
    };
    let json = ctx.out.json(&format!("{stem}.json"), &doc)?;
    let header = vec!["omega_over_pi".to_string(), "magnitude_db".to_string()];
    let rows = (0..RESPONSE_POINTS).map(|i| {
        let x = i as f64 / (RESPONSE_POINTS - 1) as f64;
        let m = entry.ntf.magnitude(std::f64::consts::PI * x);
        vec![x.to_string(), (20.0 * m.log10()).to_string()]
    });
    let csv = ctx
        .out
        .csv(&format!("{stem}_response.csv"), &header, rows)?;
    Ok(vec![json, csv])
}

/// The standard NTF, or one optimized NTF per configured slip.
pub fn design(cfg: RunConfig, mode: DesignMode) -> Result<Vec<PathBuf>, CliError> {
    let ctx = Context::new(cfg, None)?;
    match mode {
        DesignMode::Standard => write_design(&ctx, "ntf_standard", &ctx.standard()?, None),
        DesignMode::Optimized => {
            let sigmas = ctx.cfg.sigmas.clone();
            if sigmas.is_empty() {
                return Err(CliError::Config("no slip values to design for".into()));
            }
            let mut paths = Vec::new();
            for s in sigmas {
                let (entry, report) = ctx.optimized(s)?;
                paths.extend(write_design(
                    &ctx,
                    &format!("ntf_opt_sigma{s}"),
                    &entry,
                    Some(&report),
                )?);
            }
            Ok(paths)
        }
    }
}

pub fn table(cfg: RunConfig, method: SnrMethod) -> Result<Vec<PathBuf>, CliError> {
    if cfg.sigmas.is_empty() {
        return Err(CliError::Config(
            "empty slip list: no optimized NTFs to tabulate".into(),
        ));
    }
    let ctx = Context::new(cfg, Some(method))?;
    let mut entries = vec![ctx.standard()?];
    for &s in &ctx.cfg.sigmas {
        entries.push(ctx.optimized(s)?.0);
    }
    let sweep = SweepConfig {
        params: ctx.motor,
        analysis: ctx.cfg.analysis(),
        method,
    };
    let table = build_sweep(&entries, &ctx.cfg.sigmas, &sweep)?;
    let winners = diagonal_advantage(&table.select_rows(|r| r.designed_for_sigma.is_some()));

    let stem = format!("table_{method}");
    let csv = ctx
        .out
        .csv_with(&format!("{stem}.csv"), |w| table.write_csv(w))?;
    #[derive(Serialize)]
    struct TableDoc<'a> {
        table: &'a dsm_drive::SweepTable64,
        optimized_winners: &'a [dsm_drive::analysis::ColumnWinner<f64>],
    }
    let json = ctx.out.json(
        &format!("{stem}.json"),
        &TableDoc {
            table: &table,
            optimized_winners: &winners,
        },
    )?;

    let mut stdout = Vec::new();
    table
        .write_csv(&mut stdout)
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })?;
    print!("{}", String::from_utf8_lossy(&stdout));
    for w in &winners {
        let margin = w
            .margin_db
            .map_or("n/a".to_string(), |m| format!("{m:.2} dB"));
        println!(
            "sigma={}: best optimized NTF {} ({:.2} dB, lead {margin}, {})",
            w.sigma,
            w.best_id,
            w.best_snr_db,
            if w.on_diagonal {
                "on diagonal"
            } else {
                "off diagonal"
            }
        );
    }
    Ok(vec![csv, json])
}

pub fn steady_state(cfg: RunConfig, load: f64) -> Result<Vec<PathBuf>, CliError> {
    if !load.is_finite() {
        return Err(CliError::Config(format!("load must be finite, got {load}")));
    }
    let ctx = Context::new(cfg, None)?;
    let m = &ctx.motor;
    let point = steady_state_slip(m, load, m.nominal_voltage, m.nominal_frequency)?;
    #[derive(Serialize)]
    struct Doc {
        load_nm: f64,
        #[serde(flatten)]
        point: dsm_drive::SlipPoint64,
    }
    println!("sigma = {}", point.sigma);
    Ok(vec![ctx.out.json(
        "steady_state.json",
        &Doc {
            load_nm: load,
            point,
        },
    )?])
}

fn read_ntf(path: &Path) -> Result<Ntf<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let doc: NtfDocument = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    doc.to_ntf()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Raw modulator streams and the resulting motor current.
pub fn simulate(cfg: RunConfig, ntf_path: Option<&Path>) -> Result<Vec<PathBuf>, CliError> {
    let ctx = Context::new(cfg, None)?;
    let entry = match ntf_path {
        Some(p) => NtfEntry::new(p.display().to_string(), read_ntf(p)?, None),
        None => ctx.standard()?,
    };
    let sigma = *ctx
        .cfg
        .sigmas
        .first()
        .ok_or_else(|| CliError::Config("simulate needs a slip value".into()))?;
    let analysis = ctx.cfg.analysis();
    let run = modulate_drive(&entry.ntf, &analysis)?;
    let input = drive_samples(&analysis, run.output.len())?;
    let y = discretize_admittance(&ctx.motor, sigma, ctx.cfg.fs)?;
    let current = y.filter(&run.output);
    let report = measure_current(&run.output, run.overloaded, &y, sigma, &entry.id, &analysis)?;

    let mut paths = Vec::new();
    for (name, col, data) in [
        ("stream_input.csv", "input_v", &input),
        ("stream_output.csv", "output_v", &run.output),
        ("stream_error.csv", "error_v", &run.error),
        ("stream_current.csv", "current_a", &current),
    ] {
        paths.push(ctx.out.csv(name, &[col.to_string()], stream_rows(data))?);
    }
    paths.push(ctx.out.json("simulate_report.json", &report)?);
    println!(
        "sigma = {sigma}: SNR {:.2} dB{}",
        report.snr_db,
        if run.overloaded {
            " (quantizer overloaded)"
        } else {
            ""
        }
    );
    Ok(paths)
}
