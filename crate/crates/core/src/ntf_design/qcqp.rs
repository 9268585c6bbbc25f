//! Log-barrier interior-point method for small convex QCQPs of the form
//!
//! ```text
//! minimize    x' P x + 2 c' x + d
//! subject to  sum_r (a_r' x + b_r)^2 <= bound   for every constraint
//! ```
//!
//! The barrier is self-concordant, so centering uses damped Newton steps
//! `1 / (1 + lambda)` that need no function values.

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::scalar::{lit, Real};

/// `sum_r (rows[r] . x + offsets[r])^2 <= bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallConstraint<T> {
    pub rows: Vec<Vec<T>>,
    pub offsets: Vec<T>,
    pub bound: T,
}

impl<T: Real> BallConstraint<T> {
    /// Constraint value `g(x)`, feasible when negative.
    pub fn value(&self, x: &[T]) -> T {
        self.residuals(x).iter().map(|v| *v * *v).sum::<T>() - self.bound
    }

    fn residuals(&self, x: &[T]) -> Vec<T> {
        self.rows
            .iter()
            .zip(&self.offsets)
            .map(|(row, &b)| dot(row, x) + b)
            .collect()
    }

    fn gradient(&self, x: &[T]) -> Vec<T> {
        let res = self.residuals(x);
        let mut g = vec![T::zero(); x.len()];
        for (row, r) in self.rows.iter().zip(res) {
            for (gi, &a) in g.iter_mut().zip(row) {
                *gi += lit::<T>(2.0) * r * a;
            }
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Qcqp<T> {
    pub p: SquareMatrix<T>,
    pub c: Vec<T>,
    pub d: T,
    pub constraints: Vec<BallConstraint<T>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcqpSettings<T> {
    /// Bound on the duality gap relative to the objective.
    pub tol: T,
    /// Barrier parameter growth per outer iteration.
    pub mu: T,
    pub max_newton: usize,
}

impl<T: Real> Default for QcqpSettings<T> {
    fn default() -> Self {
        Self {
            tol: lit(1e-9),
            mu: lit(10.0),
            max_newton: 5000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QcqpSolution<T> {
    pub x: Vec<T>,
    pub objective: T,
    /// Lagrange multipliers, one per constraint.
    pub duals: Vec<T>,
    pub newton_iterations: usize,
    pub outer_iterations: usize,
    pub kkt_residual: T,
}

const MAX_CENTERING_STEPS: usize = 200;

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn inf_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

impl<T: Real> Qcqp<T> {
    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn objective(&self, x: &[T]) -> T {
        dot(x, &self.p.mul_vec(x)) + lit::<T>(2.0) * dot(&self.c, x) + self.d
    }

    fn objective_gradient(&self, x: &[T]) -> Vec<T> {
        self.p
            .mul_vec(x)
            .iter()
            .zip(&self.c)
            .map(|(&px, &c)| lit::<T>(2.0) * (px + c))
            .collect()
    }

    pub fn is_strictly_feasible(&self, x: &[T]) -> bool {
        self.constraints.iter().all(|g| g.value(x) < T::zero())
    }

    /// Stationarity and complementarity residuals for given multipliers.
    pub fn kkt_residual(&self, x: &[T], duals: &[T]) -> T {
        let grad_f = self.objective_gradient(x);
        let mut stat = grad_f.clone();
        let mut comp = T::zero();
        for (g, &lam) in self.constraints.iter().zip(duals) {
            for (s, gi) in stat.iter_mut().zip(g.gradient(x)) {
                *s += lam * gi;
            }
            comp += (lam * g.value(x)).abs();
        }
        let fscale = self.objective(x).abs().max(T::epsilon());
        let gscale = T::one() + inf_norm(&grad_f);
        (inf_norm(&stat) / gscale).max(comp / fscale)
    }

    /// Solves from a strictly feasible starting point.
    pub fn solve(&self, x0: &[T], settings: &QcqpSettings<T>) -> Result<QcqpSolution<T>> {
        let n = self.dim();
        if x0.len() != n || self.p.dim() != n {
            return Err(Error::InvalidParameter("QCQP dimensions disagree".into()));
        }
        if !self.is_strictly_feasible(x0) {
            return Err(Error::InvalidParameter(
                "starting point is not strictly feasible".into(),
            ));
        }
        let m = self.constraints.len();
        if m == 0 {
            let x = self
                .p
                .solve_spd(&self.c.iter().map(|&v| -v).collect::<Vec<_>>())?;
            let objective = self.objective(&x);
            let kkt = self.kkt_residual(&x, &[]);
            return Ok(QcqpSolution {
                x,
                objective,
                duals: vec![],
                newton_iterations: 1,
                outer_iterations: 1,
                kkt_residual: kkt,
            });
        }
        let mm = T::from_usize_lossy(m);

        let mut x = x0.to_vec();
        let mut t = self.initial_t(&x);
        let mut newton = 0usize;
        let mut outer = 0usize;

        loop {
            outer += 1;
            // centering
            let mut centering = 0usize;
            loop {
                if newton >= settings.max_newton {
                    let duals = self.duals(&x, t);
                    return Err(Error::SolverNoConvergence {
                        iterations: newton,
                        residual: self.kkt_residual(&x, &duals).to_f64_lossy(),
                    });
                }
                newton += 1;
                centering += 1;
                let (grad, hess) = self.barrier_derivatives(&x, t);
                let neg: Vec<T> = grad.iter().map(|&g| -g).collect();
                let dx = hess.solve_spd(&neg)?;
                let decrement_sq = -dot(&grad, &dx);
                if !(decrement_sq > lit(2e-10)) {
                    break;
                }
                let lambda = decrement_sq.max(T::zero()).sqrt();
                let mut step = if lambda < lit(0.25) {
                    T::one()
                } else {
                    T::one() / (T::one() + lambda)
                };
                let trial = loop {
                    let trial: Vec<T> = x.iter().zip(&dx).map(|(&a, &d)| a + step * d).collect();
                    if self.is_strictly_feasible(&trial) {
                        break Some(trial);
                    }
                    step *= lit(0.5);
                    if step < lit(1e-20) {
                        break None;
                    }
                };
                let Some(trial) = trial else {
                    break;
                };
                x = trial;
                // near the optimum the slacks lose precision and the
                // decrement stalls at the rounding floor
                if centering >= MAX_CENTERING_STEPS {
                    break;
                }
            }

            let gap = mm / t;
            let fx = self.objective(&x).abs();
            if gap <= settings.tol * (fx + settings.tol) {
                let duals = self.duals(&x, t);
                let residual = self.kkt_residual(&x, &duals);
                let mut sol = QcqpSolution {
                    objective: self.objective(&x),
                    x,
                    duals,
                    newton_iterations: newton,
                    outer_iterations: outer,
                    kkt_residual: residual,
                };
                self.polish_unconstrained(&mut sol);
                return Ok(sol);
            }
            t *= settings.mu;
        }
    }

    /// Barrier weight that best balances the objective and barrier
    /// gradients at the starting point.
    fn initial_t(&self, x: &[T]) -> T {
        let gf = self.objective_gradient(x);
        let mut gb = vec![T::zero(); x.len()];
        for g in &self.constraints {
            let slack = -g.value(x);
            for (a, b) in gb.iter_mut().zip(g.gradient(x)) {
                *a += b / slack;
            }
        }
        let ff = dot(&gf, &gf);
        let t = -dot(&gf, &gb) / ff;
        if ff > T::zero() && t.is_finite() && t > T::zero() {
            t.max(lit(1e-6)).min(lit(1e6))
        } else {
            T::one()
        }
    }

    fn duals(&self, x: &[T], t: T) -> Vec<T> {
        self.constraints
            .iter()
            .map(|g| T::one() / (t * (-g.value(x))))
            .collect()
    }

    fn barrier_derivatives(&self, x: &[T], t: T) -> (Vec<T>, SquareMatrix<T>) {
        let n = self.dim();
        let mut grad: Vec<T> = self.objective_gradient(x).iter().map(|&g| t * g).collect();
        let mut hess = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                hess[(i, j)] = lit::<T>(2.0) * t * self.p[(i, j)];
            }
        }
        for g in &self.constraints {
            let slack = -g.value(x);
            let gg = g.gradient(x);
            for (a, &b) in grad.iter_mut().zip(&gg) {
                *a += b / slack;
            }
            hess.rank_one_update(T::one() / (slack * slack), &gg);
            for row in &g.rows {
                hess.rank_one_update(lit::<T>(2.0) / slack, row);
            }
        }
        (grad, hess)
    }

    /// If no constraint is binding, replace the barrier iterate by the
    /// exact unconstrained minimizer (when it is feasible and no worse).
    fn polish_unconstrained(&self, sol: &mut QcqpSolution<T>) {
        let neg: Vec<T> = self.c.iter().map(|&v| -v).collect();
        let xu = if self.dim() == 1 {
            vec![neg[0] / self.p[(0, 0)]]
        } else {
            let Ok(l) = self.p.cholesky() else {
                return;
            };
            l.cholesky_solve(&neg)
        };
        if xu.iter().any(|v| !v.is_finite()) {
            return;
        }
        if self.constraints.iter().all(|g| g.value(&xu) <= T::zero()) {
            let fu = self.objective(&xu);
            if fu <= sol.objective {
                let zeros = vec![T::zero(); self.constraints.len()];
                sol.kkt_residual = self.kkt_residual(&xu, &zeros);
                sol.objective = fu;
                sol.duals = zeros;
                sol.x = xu;
            }
        }
    }
}
