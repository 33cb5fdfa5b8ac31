//! Discrete Fourier analysis on centered grids.
//!
//! Normalization: the forward transform multiplies the standard discrete
//! transform by the cell volume of the time grid, the inverse by the cell
//! volume of the dual grid. With this convention `dft` is a Riemann sum of
//! `∫ f(x) e^{-2πi x·γ} dx`, the round trip is the identity and Parseval
//! holds for the quadrature norms.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::lattice::{GridSignal, SpectrumSet, UniformGrid};

/// Direction of a [`dft`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// The character `e_x(γ) = exp(2πi x·γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Exponential {
    pub x: Vec<f64>,
}

impl Exponential {
    pub fn new(x: Vec<f64>) -> Self {
        Self { x }
    }

    pub fn eval(&self, gamma: &[f64]) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * dot(&self.x, gamma))
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn cis(phase: f64) -> Complex64 {
    let (s, c) = phase.sin_cos();
    Complex64::new(c, s)
}

/// In-place unnormalized DFT over every axis of a row-major `n^d` array laid
/// out in centered order (index `i` ↔ lattice index `i − n/2`), multiplied by `scale`.
///
/// For even `n`, `e^{∓2πi (j−n/2)(k−n/2)/n} = (−1)^{j+k+n/2} e^{∓2πi jk/n}`, so
/// the centered transform is a plain FFT between two checkerboard sign flips.
pub(crate) fn centered_fft(values: &mut [Complex64], n: usize, dim: usize, direction: FftDirection, scale: f64) {
    debug_assert!(n.is_multiple_of(2));
    let global = if (n / 2 * dim).is_multiple_of(2) { 1.0 } else { -1.0 };
    checkerboard(values, n, dim, 1.0);
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(n, direction));
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    let mut batch = Vec::new();
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            fft.process_with_scratch(values, &mut scratch);
            continue;
        }
        if stride == n {
            for chunk in values.chunks_mut(n * n) {
                transpose_square(chunk, n);
                fft.process_with_scratch(chunk, &mut scratch);
                transpose_square(chunk, n);
            }
            continue;
        }
        // gather a few columns at a time into contiguous lines
        let width = stride.min(COLUMN_BATCH);
        batch.resize(width * n, Complex64::new(0.0, 0.0));
        for chunk in values.chunks_mut(n * stride) {
            for c0 in (0..stride).step_by(width) {
                let w = width.min(stride - c0);
                let lines = &mut batch[..w * n];
                for i in 0..n {
                    let row = &chunk[i * stride + c0..i * stride + c0 + w];
                    for (c, v) in row.iter().enumerate() {
                        lines[c * n + i] = *v;
                    }
                }
                fft.process_with_scratch(lines, &mut scratch);
                for i in 0..n {
                    let row = &mut chunk[i * stride + c0..i * stride + c0 + w];
                    for (c, v) in row.iter_mut().enumerate() {
                        *v = lines[c * n + i];
                    }
                }
            }
        }
    }
    checkerboard(values, n, dim, global * scale);
}

const COLUMN_BATCH: usize = 16;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn transpose_square(m: &mut [Complex64], n: usize) {
    const TILE: usize = 32;
    for r0 in (0..n).step_by(TILE) {
        for c0 in (r0..n).step_by(TILE) {
            for r in r0..(r0 + TILE).min(n) {
                let start = if r0 == c0 { r + 1 } else { c0 };
                for c in start..(c0 + TILE).min(n) {
                    m.swap(r * n + c, c * n + r);
                }
            }
        }
    }
}

/// Multiplies entry `(i_1, …, i_d)` by `scale · (−1)^{i_1+…+i_d}`.
fn checkerboard(values: &mut [Complex64], n: usize, dim: usize, scale: f64) {
    for (r, row) in values.chunks_mut(n).enumerate() {
        let mut rest = r;
        let mut parity = 0;
        for _ in 1..dim {
            parity ^= (rest % n) & 1;
            rest /= n;
        }
        let mut sign = if parity == 0 { scale } else { -scale };
        for v in row {
            *v *= sign;
            sign = -sign;
        }
    }
}

/// Quadrature-normalized DFT. The output lives on the dual grid and the
/// domain tag is flipped.
pub fn dft(f: &GridSignal, direction: Direction) -> GridSignal {
    dft_into(f.clone(), direction)
}

/// [`dft`] reusing the storage of `f`.
pub fn dft_into(mut f: GridSignal, direction: Direction) -> GridSignal {
    let fft_dir = match direction {
        Direction::Forward => FftDirection::Forward,
        Direction::Inverse => FftDirection::Inverse,
    };
    centered_fft(&mut f.values, f.grid.n(), f.grid.dim(), fft_dir, f.grid.cell_volume());
    GridSignal {
        grid: f.grid.dual(),
        domain: f.domain.flipped(),
        values: f.values,
    }
}

/// Forward transform of a time signal.
pub fn forward(f: &GridSignal) -> GridSignal {
    dft(f, Direction::Forward)
}

/// Inverse transform of a frequency signal.
pub fn inverse(f: &GridSignal) -> GridSignal {
    dft(f, Direction::Inverse)
}

/// Periodic translation `(τ_x f)(t) = f(t − x)`. On-grid shifts are exact
/// index rotations; off-grid shifts (with `interpolate`) apply the phase
/// `e^{-2πi x·γ}` on the dual grid, which is exact for the periodic
/// trigonometric interpolant of `f`.
pub fn translate(f: &GridSignal, x: &[f64], interpolate: bool) -> Result<GridSignal> {
    if x.len() != f.grid.dim() {
        return Err(Error::DimensionMismatch { expected: f.grid.dim(), found: x.len() });
    }
    if x.iter().all(|v| *v == 0.0) {
        return Ok(f.clone());
    }
    if let Some(k) = f.grid.lattice_indices(x) {
        let grid = &f.grid;
        let mut idx = vec![0i64; grid.dim()];
        let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
        for (flat, v) in values.iter_mut().enumerate() {
            let mut rem = flat;
            for axis in (0..grid.dim()).rev() {
                idx[axis] = grid.axis_index(rem % grid.n()) - k[axis];
                rem /= grid.n();
            }
            *v = f.values[grid.flat_index(&idx)];
        }
        return Ok(GridSignal { values, ..f.clone() });
    }
    if !interpolate {
        return Err(Error::OffGrid(x.to_vec()));
    }
    let mut spec = dft(f, Direction::Forward);
    let dual = spec.grid.clone();
    let mut gamma = vec![0.0; dual.dim()];
    for (i, v) in spec.values.iter_mut().enumerate() {
        dual.point_into(i, &mut gamma);
        *v *= cis(-2.0 * PI * dot(x, &gamma));
    }
    let mut out = dft(&spec, Direction::Inverse);
    out.domain = f.domain;
    Ok(out)
}

/// Pointwise modulation by `e^{2πi t·ω}`.
pub fn modulate(f: &GridSignal, omega: &[f64]) -> Result<GridSignal> {
    if omega.len() != f.grid.dim() {
        return Err(Error::DimensionMismatch { expected: f.grid.dim(), found: omega.len() });
    }
    if omega.iter().all(|v| *v == 0.0) {
        return Ok(f.clone());
    }
    let mut t = vec![0.0; f.grid.dim()];
    let values = f
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            f.grid.point_into(i, &mut t);
            v * cis(2.0 * PI * dot(&t, omega))
        })
        .collect();
    Ok(GridSignal { values, ..f.clone() })
}

/// `e^{2πi t·ω} f(t − x)`.
pub fn time_frequency_shift(
    f: &GridSignal,
    x: &[f64],
    omega: &[f64],
    interpolate: bool,
) -> Result<GridSignal> {
    modulate(&translate(f, x, interpolate)?, omega)
}

/// Indices of dual-grid points that belong to `spectrum`.
pub fn spectrum_indices(freq_grid: &UniformGrid, spectrum: &SpectrumSet) -> Result<Vec<usize>> {
    let mut gamma = vec![0.0; freq_grid.dim()];
    let mut out = Vec::new();
    for i in 0..freq_grid.len() {
        freq_grid.point_into(i, &mut gamma);
        if spectrum.contains(&gamma, 0.0)? {
            out.push(i);
        }
    }
    Ok(out)
}

/// Zeroes every frequency sample outside `spectrum`.
pub fn mask_spectrum(spec: &GridSignal, spectrum: &SpectrumSet) -> Result<GridSignal> {
    let keep = spectrum_indices(&spec.grid, spectrum)?;
    let mut values = vec![Complex64::new(0.0, 0.0); spec.values.len()];
    for i in keep {
        values[i] = spec.values[i];
    }
    Ok(GridSignal { values, ..spec.clone() })
}

/// Orthogonal projection onto the Paley–Wiener space `PW_Λ` of the periodic model.
pub fn pw_project(f: &GridSignal, spectrum: &SpectrumSet) -> Result<GridSignal> {
    spectrum.check_resolved_by(&f.grid)?;
    let spec = mask_spectrum(&dft(f, Direction::Forward), spectrum)?;
    let mut out = dft(&spec, Direction::Inverse);
    out.domain = f.domain;
    Ok(out)
}

/// Quadrature of `∫_Λ F(γ) e^{2πi x·γ} dγ`, i.e. `⟨F, e_{-x}⟩ = f(x)` for an
/// off-grid `x`. `F` is masked to `spectrum` first. Direct summation.
pub fn sample_at(spec: &GridSignal, spectrum: &SpectrumSet, x: &[f64]) -> Result<Complex64> {
    if x.len() != spec.grid.dim() {
        return Err(Error::DimensionMismatch { expected: spec.grid.dim(), found: x.len() });
    }
    let keep = spectrum_indices(&spec.grid, spectrum)?;
    Ok(sample_indices(spec, &keep, x))
}

pub(crate) fn sample_indices(spec: &GridSignal, keep: &[usize], x: &[f64]) -> Complex64 {
    let mut gamma = vec![0.0; spec.grid.dim()];
    let mut acc = Complex64::new(0.0, 0.0);
    for &i in keep {
        spec.grid.point_into(i, &mut gamma);
        acc += spec.values[i] * cis(2.0 * PI * dot(x, &gamma));
    }
    acc * spec.grid.cell_volume()
}

/// [`sample_at`] over many points, evaluated in parallel. The order of the
/// output matches `points`.
pub fn sample_many(spec: &GridSignal, spectrum: &SpectrumSet, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    if let Some(p) = points.iter().find(|p| p.len() != spec.grid.dim()) {
        return Err(Error::DimensionMismatch { expected: spec.grid.dim(), found: p.len() });
    }
    let keep = spectrum_indices(&spec.grid, spectrum)?;
    Ok(points.par_iter().map(|x| sample_indices(spec, &keep, x)).collect())
}
