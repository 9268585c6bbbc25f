//! Weighted-noise-optimal FIR NTF under a peak-gain bound.

use serde::Serialize;

use super::qcqp::{BallConstraint, Qcqp, QcqpSettings};
use super::spec::DesignSpec;
use super::standard::peak_gain;
use super::weighting::Weighting;
use crate::delta_sigma::NtfFir;
use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::scalar::{lit, Real};

/// Diagnostics from [`optimize_ntf_fir_report`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DesignReport<T> {
    /// `q' R q`, in the units of the weighting.
    pub objective: T,
    /// Peak `|NTF|` on a grid 16 times finer than the constraint grid.
    pub gamma_achieved: T,
    pub newton_iterations: usize,
    pub outer_iterations: usize,
    pub kkt_residual: T,
    /// Constraint grid actually used (it is refined if the fine-grid check fails).
    pub grid_points: usize,
    /// Constraints with a non-zero multiplier.
    pub active_constraints: usize,
}

/// Slack on the fine-grid gain check before the constraint grid is refined.
const GAIN_SLACK: f64 = 1e-5;
const MAX_REFINEMENTS: usize = 3;

pub fn optimize_ntf_fir<T: Real>(
    weighting: &Weighting<T>,
    spec: &DesignSpec<T>,
) -> Result<NtfFir<T>> {
    optimize_ntf_fir_report(weighting, spec).map(|(q, _)| q)
}

/// Minimizes `q' R q` over `q = [1, q_1 .. q_n]` with
/// `|NTF(e^{jw})| <= gamma` on a uniform grid over `[0, pi]`.
pub fn optimize_ntf_fir_report<T: Real>(
    weighting: &Weighting<T>,
    spec: &DesignSpec<T>,
) -> Result<(NtfFir<T>, DesignReport<T>)> {
    spec.validate()?;
    let n = spec.order;
    if weighting.lags() < n {
        return Err(Error::InvalidParameter(format!(
            "weighting has {} lags, order {} needs at least as many",
            weighting.lags(),
            n
        )));
    }
    let r0 = weighting.r[0];
    let r: Vec<T> = weighting.r[..=n].iter().map(|&v| v / r0).collect();

    let settings = QcqpSettings {
        tol: spec.tol,
        ..QcqpSettings::default()
    };
    let mut grid = spec.grid_points;
    for _ in 0..=MAX_REFINEMENTS {
        let problem = build_problem(&r, n, spec.gamma, grid);
        let sol = problem.solve(&vec![T::zero(); n], &settings)?;
        let mut q = Vec::with_capacity(n + 1);
        q.push(T::one());
        q.extend_from_slice(&sol.x);
        let fir = NtfFir::new(q)?;
        let achieved = peak_gain(&fir, 16 * grid);
        if achieved <= spec.gamma + lit(GAIN_SLACK) {
            let active = sol.duals.iter().filter(|&&d| d > T::zero()).count();
            let scale = sol.duals.iter().fold(T::zero(), |m, &d| m.max(d));
            let active = if scale > T::zero() {
                sol.duals.iter().filter(|&&d| d > scale * lit(1e-6)).count()
            } else {
                active
            };
            let report = DesignReport {
                objective: sol.objective * r0,
                gamma_achieved: achieved,
                newton_iterations: sol.newton_iterations,
                outer_iterations: sol.outer_iterations,
                kkt_residual: sol.kkt_residual,
                grid_points: grid,
                active_constraints: active,
            };
            return Ok((fir, report));
        }
        grid *= 4;
    }
    Err(Error::SolverNoConvergence {
        iterations: MAX_REFINEMENTS,
        residual: f64::NAN,
    })
}

fn build_problem<T: Real>(r: &[T], n: usize, gamma: T, grid: usize) -> Qcqp<T> {
    let p = SquareMatrix::toeplitz(&r[..n], n);
    let c = r[1..=n].to_vec();
    let last = T::from_usize_lossy(grid - 1);
    let constraints = (0..grid)
        .map(|i| {
            let w = T::PI() * T::from_usize_lossy(i) / last;
            let (re, im): (Vec<T>, Vec<T>) = (1..=n)
                .map(|k| {
                    let (s, c) = (w * T::from_usize_lossy(k)).sin_cos();
                    (c, -s)
                })
                .unzip();
            BallConstraint {
                rows: vec![re, im],
                offsets: vec![T::one(), T::zero()],
                bound: gamma * gamma,
            }
        })
        .collect();
    Qcqp {
        p,
        c,
        d: r[0],
        constraints,
    }
}
