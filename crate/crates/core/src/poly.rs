//! Polynomial helpers. Coefficient slices are in ascending powers of z^-1
//! unless a function says otherwise.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::{lit, Real};

/// Evaluates `c[0] + c[1] x + c[2] x^2 + ...` at a complex point.
pub fn eval_ascending<T: Real>(coeffs: &[T], x: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::zero(), |acc, &c| {
        acc * x + Complex::new(c, T::zero())
    })
}

/// Product of two polynomials.
pub fn mul<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficient-wise `a - b`, padding the shorter operand with zeros.
pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            a.get(k).copied().unwrap_or_else(T::zero) - b.get(k).copied().unwrap_or_else(T::zero)
        })
        .collect()
}

/// Expands `prod (1 - r_k x)` for roots given in conjugate pairs (or real).
/// Imaginary residue from rounding is dropped.
pub fn from_reciprocal_roots<T: Real>(roots: &[Complex<T>]) -> Vec<T> {
    let mut acc: Vec<Complex<T>> = vec![Complex::<T>::one()];
    for &r in roots {
        let mut next = vec![Complex::zero(); acc.len() + 1];
        for (k, &c) in acc.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c * r;
        }
        acc = next;
    }
    acc.into_iter().map(|c| c.re).collect()
}

/// Roots in z of `c[0] + c[1] z^-1 + ... + c[n] z^-n`.
///
/// Multiplying through by z^n gives the ordinary polynomial with
/// descending coefficients `c`, solved by Aberth-Ehrlich iteration.
pub fn roots_z_inv<T: Real>(coeffs: &[T]) -> Vec<Complex<T>> {
    let mut c: Vec<T> = coeffs.to_vec();
    while c.first().is_some_and(|v| v.is_zero()) {
        c.remove(0);
    }
    let mut zeros_at_origin = 0;
    while c.len() > 1 && c.last().is_some_and(|v| v.is_zero()) {
        c.pop();
        zeros_at_origin += 1;
    }
    let mut roots = aberth_descending(&c);
    roots.extend(std::iter::repeat_n(Complex::zero(), zeros_at_origin));
    roots
}

fn aberth_descending<T: Real>(c: &[T]) -> Vec<Complex<T>> {
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = c[0];
    let monic: Vec<Complex<T>> = c
        .iter()
        .map(|&v| Complex::new(v / lead, T::zero()))
        .collect();
    if n == 1 {
        return vec![-monic[1]];
    }

    // Cauchy upper bound sets the radius of the starting circle.
    let radius = T::one() + monic[1..].iter().map(|v| v.norm()).fold(T::zero(), T::max);
    let two_pi = T::TAU();
    let mut z: Vec<Complex<T>> = (0..n)
        .map(|k| {
            let theta = two_pi * T::from_usize_lossy(k) / T::from_usize_lossy(n) + lit(0.4);
            Complex::from_polar(radius * lit(0.5), theta)
        })
        .collect();

    let horner = |x: Complex<T>| -> (Complex<T>, Complex<T>) {
        let mut p = Complex::zero();
        let mut dp = Complex::zero();
        for &a in &monic {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };

    let tol = T::epsilon() * lit(4.0);
    for _ in 0..500 {
        let mut max_step = T::zero();
        for k in 0..n {
            let (p, dp) = horner(z[k]);
            if p.norm().is_zero() {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex::zero();
            for j in 0..n {
                if j != k {
                    let d = z[k] - z[j];
                    if !d.norm().is_zero() {
                        repulsion += Complex::<T>::one() / d;
                    }
                }
            }
            let step: Complex<T> = ratio / (Complex::<T>::one() - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                let rel = step.norm() / (T::one() + z[k].norm());
                max_step = max_step.max(rel);
            }
        }
        if max_step <= tol {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_known_quadratic() {
        // 1 - 1.5 z^-1 + 0.56 z^-2 = (1 - 0.8 z^-1)(1 - 0.7 z^-1)
        let mut r: Vec<f64> = roots_z_inv(&[1.0, -1.5, 0.56])
            .iter()
            .map(|c| c.re)
            .collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((r[0] - 0.7).abs() < 1e-12);
        assert!((r[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn roots_round_trip_through_expansion() {
        let roots = vec![
            Complex::new(0.5, 0.3),
            Complex::new(0.5, -0.3),
            Complex::new(-0.2, 0.0),
            Complex::new(0.95, 0.1),
            Complex::new(0.95, -0.1),
        ];
        let poly = from_reciprocal_roots::<f64>(&roots);
        let found = roots_z_inv(&poly);
        for r in &roots {
            let best = found
                .iter()
                .map(|f| (f - r).norm())
                .fold(f64::MAX, f64::min);
            assert!(best < 1e-9, "root {r} missing, best distance {best}");
        }
    }

    #[test]
    fn trailing_zero_gives_root_at_origin() {
        let r = roots_z_inv(&[1.0f64, -0.5, 0.0]);
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|c| c.norm() < 1e-15));
        assert!(r.iter().any(|c| (c.re - 0.5).abs() < 1e-14));
    }

    #[test]
    fn multiply_and_subtract() {
        assert_eq!(mul(&[1.0, -1.0], &[1.0, 1.0]), vec![1.0, 0.0, -1.0]);
        assert_eq!(sub(&[1.0, 2.0], &[1.0]), vec![0.0, 2.0]);
    }
}
