//! Matrix-free Hermitian solvers: conjugate gradient and extremal
//! eigenvalues by power iteration, plus a dense eigensolver for small
//! operators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) fn vdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn vnorm(a: &[Complex64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Result of [`conjugate_gradient`].
#[derive(Debug, Clone)]
pub struct CgOutcome {
    pub x: Vec<Complex64>,
    pub iterations: usize,
    /// `‖b − A x‖ / ‖b‖` of the returned iterate.
    pub relative_residual: f64,
    pub converged: bool,
}

/// Conjugate gradient for a Hermitian positive (semi)definite operator.
/// Stops when `‖b − Ax‖ ≤ tol·‖b‖`; if `max_iter` runs out, returns the
/// iterate with the smallest residual seen.
pub fn conjugate_gradient<F>(apply: F, b: &[Complex64], tol: f64, max_iter: usize) -> CgOutcome
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let n = b.len();
    let zero = Complex64::new(0.0, 0.0);
    let b_norm = vnorm(b);
    if b_norm == 0.0 {
        return CgOutcome { x: vec![zero; n], iterations: 0, relative_residual: 0.0, converged: true };
    }
    let mut x = vec![zero; n];
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = vdot(&r, &r).re;
    let mut best = (x.clone(), 1.0);
    let mut iterations = 0;
    while iterations < max_iter {
        if rr.sqrt() <= tol * b_norm {
            break;
        }
        let ap = apply(&p);
        let pap = vdot(&p, &ap).re;
        if !(pap > 0.0) {
            break;
        }
        let alpha = rr / pap;
        for i in 0..n {
            x[i] += p[i] * alpha;
            r[i] -= ap[i] * alpha;
        }
        iterations += 1;
        let rr_new = vdot(&r, &r).re;
        let rel = rr_new.sqrt() / b_norm;
        if rel < best.1 {
            best = (x.clone(), rel);
        }
        let beta = rr_new / rr;
        for i in 0..n {
            p[i] = r[i] + p[i] * beta;
        }
        rr = rr_new;
    }
    // recompute the true residual of the best iterate; the recursive one drifts
    let ax = apply(&best.0);
    let true_res = b.iter().zip(&ax).map(|(bi, ai)| (bi - ai).norm_sqr()).sum::<f64>().sqrt() / b_norm;
    CgOutcome {
        x: best.0,
        iterations,
        relative_residual: true_res,
        converged: true_res <= tol,
    }
}

/// Extremal eigenvalues of a Hermitian operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremes {
    pub min: f64,
    pub max: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Eigenvalues of a dense Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn dense_extremes(m: &DMatrix<Complex64>) -> Extremes {
    let ev = hermitian_eigenvalues(m);
    Extremes {
        min: ev[0],
        max: ev[ev.len() - 1],
        iterations: 0,
        converged: true,
    }
}

fn start_vector(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let n = vnorm(&v);
    v.into_iter().map(|x| x / n).collect()
}

/// Power iteration for the top eigenvalue of `apply`. Converged when the
/// eigen-residual `‖Av − θv‖` is at most `tol·scale`.
fn power_top<F>(apply: F, dim: usize, tol: f64, scale: Option<f64>, max_iter: usize, seed: u64) -> (f64, usize, bool)
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let mut v = start_vector(dim, seed);
    let mut theta = 0.0;
    for it in 1..=max_iter {
        let w = apply(&v);
        theta = vdot(&v, &w).re;
        let res = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - vi * theta).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let s = scale.unwrap_or(theta.abs());
        if res <= tol * s {
            return (theta, it, true);
        }
        let wn = vnorm(&w);
        if wn == 0.0 {
            // v is in the kernel of a positive semidefinite operator
            return (0.0, it, true);
        }
        v = w.into_iter().map(|x| x / wn).collect();
    }
    (theta, max_iter, false)
}

/// Extremal eigenvalues of a Hermitian positive semidefinite operator:
/// power iteration for the largest, then power iteration on `B·I − A` for
/// the smallest. Both stop at eigen-residual `tol·B`.
pub fn power_extremes<F>(apply: F, dim: usize, tol: f64, max_iter: usize) -> Extremes
where
    F: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let (top, it_top, ok_top) = power_top(&apply, dim, tol, None, max_iter, 0x5eed);
    if top <= 0.0 {
        return Extremes { min: 0.0, max: 0.0, iterations: it_top, converged: ok_top };
    }
    let shift = top;
    let shifted = |v: &[Complex64]| -> Vec<Complex64> {
        apply(v).iter().zip(v).map(|(a, x)| x * shift - a).collect()
    };
    let (gap, it_low, ok_low) = power_top(shifted, dim, tol, Some(top), max_iter, 0x1057);
    Extremes {
        min: shift - gap,
        max: top,
        iterations: it_top + it_low,
        converged: ok_top && ok_low,
    }
}
