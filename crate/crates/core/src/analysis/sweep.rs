use std::io;

use rayon::prelude::*;
use serde::Serialize;

use super::snr::{
    measure_current, modulate_drive, snr_frequency_weighted, AnalysisConfig, NtfEntry, SnrMethod,
    SnrReport,
};
use crate::error::{Error, Result};
use crate::motor_model::{discretize_admittance, MotorParams};
use crate::ntf_design::weighting_from_admittance;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig<T> {
    pub params: MotorParams<T>,
    pub analysis: AnalysisConfig<T>,
    pub method: SnrMethod,
}

/// A table cell: the report, or the reason it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SweepCell<T> {
    Report(SnrReport<T>),
    Failed { error: String },
}

impl<T: Real> SweepCell<T> {
    pub fn report(&self) -> Option<&SnrReport<T>> {
        match self {
            SweepCell::Report(r) => Some(r),
            SweepCell::Failed { .. } => None,
        }
    }

    pub fn snr_db(&self) -> Option<T> {
        self.report().map(|r| r.snr_db)
    }
}

impl<T> From<Result<SnrReport<T>>> for SweepCell<T> {
    fn from(r: Result<SnrReport<T>>) -> Self {
        match r {
            Ok(rep) => SweepCell::Report(rep),
            Err(e) => SweepCell::Failed {
                error: e.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow<T> {
    pub id: String,
    pub designed_for_sigma: Option<T>,
    pub cells: Vec<SweepCell<T>>,
}

/// NTFs (rows) against slips (columns).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable<T> {
    pub method: SnrMethod,
    pub sigmas: Vec<T>,
    pub rows: Vec<SweepRow<T>>,
}

/// Every (NTF, slip) cell. Cells are computed in parallel; each is a pure
/// function of its inputs, so the table does not depend on scheduling.
pub fn build_sweep<T: Real>(
    entries: &[NtfEntry<T>],
    sigmas: &[T],
    config: &SweepConfig<T>,
) -> Result<SweepTable<T>> {
    if entries.is_empty() || sigmas.is_empty() {
        return Err(Error::InvalidParameter(
            "sweep needs at least one NTF and one slip".into(),
        ));
    }
    config.analysis.validate()?;
    let rows = match config.method {
        SnrMethod::Frequency => frequency_rows(entries, sigmas, config),
        SnrMethod::Time => time_rows(entries, sigmas, config),
    };
    Ok(SweepTable {
        method: config.method,
        sigmas: sigmas.to_vec(),
        rows,
    })
}

fn frequency_rows<T: Real>(
    entries: &[NtfEntry<T>],
    sigmas: &[T],
    config: &SweepConfig<T>,
) -> Vec<SweepRow<T>> {
    let lags = entries
        .iter()
        .filter_map(|e| e.ntf.as_fir().map(|q| q.order()))
        .max()
        .unwrap_or(1)
        .max(1);
    let weightings: Vec<_> = sigmas
        .par_iter()
        .map(|&s| weighting_from_admittance(&config.params, s, config.analysis.fs, lags))
        .collect();
    entries
        .par_iter()
        .map(|entry| {
            let cells = sigmas
                .iter()
                .zip(&weightings)
                .map(|(&sigma, w)| {
                    let cell = match w {
                        Ok(w) => snr_frequency_weighted(
                            entry,
                            &config.params,
                            sigma,
                            w,
                            &config.analysis,
                        ),
                        Err(e) => Err(e.clone()),
                    };
                    cell.into()
                })
                .collect();
            row(entry, cells)
        })
        .collect()
}

fn time_rows<T: Real>(
    entries: &[NtfEntry<T>],
    sigmas: &[T],
    config: &SweepConfig<T>,
) -> Vec<SweepRow<T>> {
    let admittances: Vec<_> = sigmas
        .iter()
        .map(|&s| discretize_admittance(&config.params, s, config.analysis.fs))
        .collect();
    entries
        .par_iter()
        .map(|entry| {
            // the modulator does not see the load, so one run serves every column
            let run = modulate_drive(&entry.ntf, &config.analysis);
            let cells = sigmas
                .par_iter()
                .zip(admittances.par_iter())
                .map(|(&sigma, y)| {
                    let cell = match (&run, y) {
                        (Ok(run), Ok(y)) => measure_current(
                            &run.output,
                            run.overloaded,
                            y,
                            sigma,
                            &entry.id,
                            &config.analysis,
                        ),
                        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                    };
                    cell.into()
                })
                .collect();
            row(entry, cells)
        })
        .collect()
}

fn row<T: Real>(entry: &NtfEntry<T>, cells: Vec<SweepCell<T>>) -> SweepRow<T> {
    SweepRow {
        id: entry.id.clone(),
        designed_for_sigma: entry.designed_for_sigma,
        cells,
    }
}

impl<T: Real + Serialize> SweepTable<T> {
    pub fn row(&self, id: &str) -> Option<&SweepRow<T>> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn snr_db(&self, id: &str, column: usize) -> Option<T> {
        self.row(id)?.cells.get(column)?.snr_db()
    }

    /// Sub-table with the rows accepted by `keep`, in their original order.
    pub fn select_rows<F: Fn(&SweepRow<T>) -> bool>(&self, keep: F) -> Self {
        Self {
            method: self.method,
            sigmas: self.sigmas.clone(),
            rows: self.rows.iter().filter(|r| keep(r)).cloned().collect(),
        }
    }

    /// One line per NTF, one column per slip, SNR in dB to two decimals.
    /// Failed cells are written as `error`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["ntf".to_string()];
        header.extend(self.sigmas.iter().map(|s| format!("sigma={s}")));
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.id.clone()];
            rec.extend(r.cells.iter().map(|c| match c.snr_db() {
                Some(v) => format!("{v:.2}"),
                None => "error".to_string(),
            }));
            w.write_record(&rec)?;
        }
        w.flush()
    }

    pub fn write_json<W: io::Write>(&self, out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(out, self).map_err(io::Error::from)
    }
}

/// Winner of one slip column.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnWinner<T> {
    pub sigma: T,
    pub best_id: String,
    pub best_snr_db: T,
    /// Lead over the runner-up; `None` when the column has a single entry.
    pub margin_db: Option<T>,
    /// The winner was designed for this column's slip.
    pub on_diagonal: bool,
}

/// Per column, the best row and its lead over the runner-up. Failed cells
/// are ignored; a column without any report yields no entry.
pub fn diagonal_advantage<T: Real>(table: &SweepTable<T>) -> Vec<ColumnWinner<T>> {
    table
        .sigmas
        .iter()
        .enumerate()
        .filter_map(|(j, &sigma)| {
            let mut scored: Vec<(&SweepRow<T>, T)> = table
                .rows
                .iter()
                .filter_map(|r| r.cells.get(j).and_then(|c| c.snr_db()).map(|v| (r, v)))
                .collect();
            // stable sort keeps the first row on exact ties
            scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
            let (best, best_snr) = *scored.first()?;
            let margin_db = scored.get(1).map(|&(_, v)| best_snr - v);
            let on_diagonal = best.designed_for_sigma.is_some_and(|d| {
                (d - sigma).abs() <= T::epsilon() * sigma.abs().max(T::one()) * T::lit(16.0)
            });
            Some(ColumnWinner {
                sigma,
                best_id: best.id.clone(),
                best_snr_db: best_snr,
                margin_db,
                on_diagonal,
            })
        })
        .collect()
}
