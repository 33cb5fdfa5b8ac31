//! Fourier frames `{e_{-x} : x ∈ E}` for `L²(Λ)`.
//!
//! The model space is spanned by the dual-grid frequencies that lie in `Λ`,
//! with the quadrature inner product. In those coordinates the analysis map
//! is `(UF)_x = Δγ^d Σ_j F_j e^{2πi x·γ_j}` and the frame operator is
//! `S = U^†U`, a Hermitian matrix whose extremal eigenvalues are the
//! frame bounds.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{cis, dot, spectrum_indices};
use crate::lattice::{Domain, GridSignal, SpectrumSet, UniformGrid};
use crate::linalg::{self, conjugate_gradient, vnorm};
use crate::sampling::SeparatedSet;

/// Operators of dimension up to this use the dense eigensolver under [`EigenMethod::Auto`].
pub const DENSE_DIMENSION_THRESHOLD: usize = 512;

/// Relative tolerance of the iterative eigensolver.
pub const POWER_TOLERANCE: f64 = 1e-8;

const POWER_MAX_ITER: usize = 200_000;

/// A lower bound below `ZERO_BOUND_RATIO · B` is reported as zero.
pub const ZERO_BOUND_RATIO: f64 = 1e-12;

/// How extremal eigenvalues are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenMethod {
    /// Dense when the dimension is at most `threshold`, power iteration otherwise.
    Auto { threshold: usize },
    Dense,
    PowerIteration,
}

impl Default for EigenMethod {
    fn default() -> Self {
        EigenMethod::Auto { threshold: DENSE_DIMENSION_THRESHOLD }
    }
}

/// Method that actually produced a [`FrameReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsMethod {
    DenseEigen,
    PowerIteration,
}

impl fmt::Display for BoundsMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundsMethod::DenseEigen => f.write_str("dense-eigen"),
            BoundsMethod::PowerIteration => f.write_str("power-iteration"),
        }
    }
}

/// Frame bounds of a discretized frame operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameReport {
    pub lower: f64,
    pub upper: f64,
    /// `B/A`, infinite when `A` is reported as zero.
    pub condition: f64,
    pub method: BoundsMethod,
    pub iterations: usize,
    pub converged: bool,
}

impl FrameReport {
    pub(crate) fn from_extremes(ext: linalg::Extremes, method: BoundsMethod) -> Self {
        let upper = ext.max.max(0.0);
        let mut lower = ext.min;
        if !(lower > ZERO_BOUND_RATIO * upper) {
            lower = 0.0;
        }
        let condition = if lower > 0.0 { upper / lower } else { f64::INFINITY };
        Self { lower, upper, condition, method, iterations: ext.iterations, converged: ext.converged }
    }

    pub fn is_frame(&self) -> bool {
        self.lower > 0.0
    }
}

/// Extremal eigenvalues of a Hermitian PSD operator, given both as a dense
/// matrix builder and as a matrix-free product.
pub(crate) fn operator_bounds<M, A>(dim: usize, method: EigenMethod, dense: M, apply: A) -> FrameReport
where
    M: FnOnce() -> DMatrix<Complex64>,
    A: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let use_dense = match method {
        EigenMethod::Auto { threshold } => dim <= threshold,
        EigenMethod::Dense => true,
        EigenMethod::PowerIteration => false,
    };
    if use_dense {
        FrameReport::from_extremes(linalg::dense_extremes(&dense()), BoundsMethod::DenseEigen)
    } else {
        let ext = linalg::power_extremes(apply, dim, POWER_TOLERANCE, POWER_MAX_ITER);
        FrameReport::from_extremes(ext, BoundsMethod::PowerIteration)
    }
}

fn same_grid(a: &UniformGrid, b: &UniformGrid) -> bool {
    a.n() == b.n()
        && a.dim() == b.dim()
        && a.spacing().iter().zip(b.spacing()).all(|(x, y)| (x - y).abs() <= 1e-12 * x.abs())
}

/// Exponential system of a sampling set against a discretized `L²(Λ)`.
#[derive(Debug, Clone)]
pub struct FourierFrame {
    freq_grid: UniformGrid,
    spectrum: SpectrumSet,
    model: Vec<usize>,
    points: SeparatedSet,
    weight: f64,
    /// Row-major `|E| × M` matrix of `e^{2πi x·γ_j}`.
    kernel: Vec<Complex64>,
}

impl FourierFrame {
    /// Builds the system on the dual of `time_grid`.
    pub fn new(points: &SeparatedSet, spectrum: &SpectrumSet, time_grid: &UniformGrid) -> Result<Self> {
        Self::on_frequency_grid(points, spectrum, &time_grid.dual())
    }

    pub fn on_frequency_grid(points: &SeparatedSet, spectrum: &SpectrumSet, freq_grid: &UniformGrid) -> Result<Self> {
        if points.dim() != freq_grid.dim() {
            return Err(Error::DimensionMismatch { expected: freq_grid.dim(), found: points.dim() });
        }
        let time_grid = freq_grid.dual();
        spectrum.check_resolved_by(&time_grid)?;
        let model = spectrum_indices(freq_grid, spectrum)?;
        if model.is_empty() {
            return Err(Error::InvalidParameter("no grid frequency lies inside the spectrum".into()));
        }
        let freqs: Vec<Vec<f64>> = model.iter().map(|&i| freq_grid.point(i)).collect();
        let kernel: Vec<Complex64> = points
            .points()
            .par_iter()
            .flat_map_iter(|x| freqs.iter().map(move |g| cis(2.0 * PI * dot(x, g))))
            .collect();
        Ok(Self {
            freq_grid: freq_grid.clone(),
            spectrum: spectrum.clone(),
            model,
            points: points.clone(),
            weight: freq_grid.cell_volume(),
            kernel,
        })
    }

    /// Number of grid frequencies inside `Λ`.
    pub fn model_dimension(&self) -> usize {
        self.model.len()
    }

    pub fn points(&self) -> &SeparatedSet {
        &self.points
    }

    pub fn frequency_grid(&self) -> &UniformGrid {
        &self.freq_grid
    }

    pub fn spectrum(&self) -> &SpectrumSet {
        &self.spectrum
    }

    /// Model coordinates of a frequency signal (values at the frequencies in `Λ`).
    pub fn restrict(&self, spec: &GridSignal) -> Result<Vec<Complex64>> {
        if !same_grid(&spec.grid, &self.freq_grid) {
            return Err(Error::InvalidGrid("signal is not on the frame's frequency grid".into()));
        }
        Ok(self.model.iter().map(|&i| spec.values[i]).collect())
    }

    /// Frequency signal that is zero outside `Λ`.
    pub fn extend(&self, coeffs: &[Complex64]) -> GridSignal {
        let mut out = GridSignal::zeros(self.freq_grid.clone(), Domain::Frequency);
        for (&i, c) in self.model.iter().zip(coeffs) {
            out.values[i] = *c;
        }
        out
    }

    /// Quadrature norm of model coordinates.
    pub fn model_norm_sqr(&self, coeffs: &[Complex64]) -> f64 {
        self.weight * coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// `c ↦ (⟨F, e_{-x}⟩)_{x∈E}` in model coordinates.
    pub fn analysis_coeffs(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let m = self.model.len();
        self.kernel
            .par_chunks(m)
            .map(|row| row.iter().zip(coeffs).map(|(k, c)| k * c).sum::<Complex64>() * self.weight)
            .collect()
    }

    /// Adjoint of the analysis map: `s ↦ Σ_x s_x e_{-x}` restricted to `Λ`.
    pub fn synthesis_coeffs(&self, samples: &[Complex64]) -> Vec<Complex64> {
        let m = self.model.len();
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        for (row, s) in self.kernel.chunks(m).zip(samples) {
            for (o, k) in out.iter_mut().zip(row) {
                *o += k.conj() * s;
            }
        }
        out
    }

    /// `S = U^†U` in model coordinates.
    pub fn apply_coeffs(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        self.synthesis_coeffs(&self.analysis_coeffs(coeffs))
    }

    /// Samples `f(x) = ⟨F, e_{-x}⟩` for `x ∈ E`.
    pub fn analysis(&self, spec: &GridSignal) -> Result<Vec<Complex64>> {
        Ok(self.analysis_coeffs(&self.restrict(spec)?))
    }

    pub fn synthesis(&self, samples: &[Complex64]) -> Result<GridSignal> {
        if samples.len() != self.points.len() {
            return Err(Error::DimensionMismatch { expected: self.points.len(), found: samples.len() });
        }
        Ok(self.extend(&self.synthesis_coeffs(samples)))
    }

    /// `SF = Σ_x ⟨F, e_{-x}⟩ e_{-x}` restricted to `Λ`.
    pub fn apply(&self, spec: &GridSignal) -> Result<GridSignal> {
        Ok(self.extend(&self.apply_coeffs(&self.restrict(spec)?)))
    }

    /// Dense `M × M` frame operator.
    pub fn operator_matrix(&self) -> DMatrix<Complex64> {
        let m = self.model.len();
        let mut s = DMatrix::<Complex64>::zeros(m, m);
        for row in self.kernel.chunks(m) {
            for j in 0..m {
                let a = row[j].conj() * self.weight;
                for l in 0..m {
                    s[(j, l)] += a * row[l];
                }
            }
        }
        s
    }

    pub fn bounds(&self, method: EigenMethod) -> FrameReport {
        operator_bounds(self.model.len(), method, || self.operator_matrix(), |c| self.apply_coeffs(c))
    }

    /// Inverts the frame operator on `U^† samples`.
    pub fn reconstruct(&self, samples: &[Complex64], opts: &ReconstructOptions) -> Result<Reconstruction> {
        if samples.len() != self.points.len() {
            return Err(Error::DimensionMismatch { expected: self.points.len(), found: samples.len() });
        }
        let rhs = self.synthesis_coeffs(samples);
        let (coeffs, iterations, residual, converged) = match opts.method {
            ReconstructMethod::ConjugateGradient => {
                let out = conjugate_gradient(|c| self.apply_coeffs(c), &rhs, opts.tol, opts.max_iter);
                (out.x, out.iterations, out.relative_residual, out.converged)
            }
            ReconstructMethod::FrameAlgorithm(report) => {
                if !report.is_frame() {
                    return Err(Error::NotAFrame);
                }
                frame_algorithm(|c| self.apply_coeffs(c), &rhs, &report, opts.tol, opts.max_iter)
            }
        };
        Ok(Reconstruction { signal: self.extend(&coeffs), iterations, residual, converged })
    }
}

/// Richardson iteration `F ← F + λ(b − SF)` with `λ = 2/(A+B)`.
pub(crate) fn frame_algorithm<A>(
    apply: A,
    rhs: &[Complex64],
    report: &FrameReport,
    tol: f64,
    max_iter: usize,
) -> (Vec<Complex64>, usize, f64, bool)
where
    A: Fn(&[Complex64]) -> Vec<Complex64>,
{
    let relax = 2.0 / (report.lower + report.upper);
    let b_norm = vnorm(rhs);
    let mut x = vec![Complex64::new(0.0, 0.0); rhs.len()];
    if b_norm == 0.0 {
        return (x, 0, 0.0, true);
    }
    let mut residual: Vec<Complex64> = rhs.to_vec();
    let mut rel = 1.0;
    let mut iterations = 0;
    while iterations < max_iter {
        if rel <= tol {
            break;
        }
        for (xi, ri) in x.iter_mut().zip(&residual) {
            *xi += ri * relax;
        }
        iterations += 1;
        let sx = apply(&x);
        residual = rhs.iter().zip(&sx).map(|(b, s)| b - s).collect();
        rel = vnorm(&residual) / b_norm;
    }
    (x, iterations, rel, rel <= tol)
}

/// Solver used by [`frame_reconstruct`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReconstructMethod {
    /// Relaxation from the given bounds; refuses when `A = 0`.
    FrameAlgorithm(FrameReport),
    ConjugateGradient,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructOptions {
    pub method: ReconstructMethod,
    /// Target `‖SF − U^†s‖ / ‖U^†s‖`.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self { method: ReconstructMethod::ConjugateGradient, tol: 1e-10, max_iter: 500 }
    }
}

/// Reconstructed spectrum with solver diagnostics. When `converged` is false
/// the signal is the best iterate found.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub signal: GridSignal,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

/// `(⟨F, e_{-x}⟩)_{x∈E}`; `F` is masked to `Λ`.
pub fn analysis_map(spec: &GridSignal, points: &SeparatedSet, spectrum: &SpectrumSet) -> Result<Vec<Complex64>> {
    FourierFrame::on_frequency_grid(points, spectrum, &spec.grid)?.analysis(spec)
}

pub fn frame_operator_apply(spec: &GridSignal, points: &SeparatedSet, spectrum: &SpectrumSet) -> Result<GridSignal> {
    FourierFrame::on_frequency_grid(points, spectrum, &spec.grid)?.apply(spec)
}

/// Frame bounds of `E` for `L²(Λ)` discretized on the dual of `time_grid`.
pub fn frame_bounds(
    points: &SeparatedSet,
    spectrum: &SpectrumSet,
    time_grid: &UniformGrid,
    method: EigenMethod,
) -> Result<FrameReport> {
    Ok(FourierFrame::new(points, spectrum, time_grid)?.bounds(method))
}

/// Spectrum `F` on the dual of `time_grid` whose samples on `E` match `samples`
/// in the least-squares sense.
pub fn frame_reconstruct(
    samples: &[Complex64],
    points: &SeparatedSet,
    spectrum: &SpectrumSet,
    time_grid: &UniformGrid,
    opts: &ReconstructOptions,
) -> Result<Reconstruction> {
    FourierFrame::new(points, spectrum, time_grid)?.reconstruct(samples, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{forward, inverse, mask_spectrum};
    use crate::lattice::make_grid;
    use crate::sampling::{jittered_lattice, JitterSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn lattice(spacing: f64, jitter: f64, extent: f64) -> SeparatedSet {
        jittered_lattice(&JitterSpec { dim: 1, spacing, jitter, extent, symmetric: true, seed: 17 }).unwrap()
    }

    // period 65 matches the 65-point window ℤ ∩ [-32, 32]
    fn period65() -> UniformGrid {
        make_grid(1, 130, 0.5).unwrap()
    }

    fn half_band() -> SpectrumSet {
        SpectrumSet::interval(0.5).unwrap()
    }

    fn random_model(frame: &FourierFrame, seed: u64) -> Vec<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..frame.model_dimension())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn analysis_of_zero_is_zero() {
        let frame = FourierFrame::new(&lattice(1.0, 0.0, 8.0), &half_band(), &period65()).unwrap();
        let zero = GridSignal::zeros(frame.frequency_grid().clone(), Domain::Frequency);
        assert!(frame.analysis(&zero).unwrap().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn analysis_on_grid_points_matches_inverse_dft() {
        let time = make_grid(1, 64, 0.5).unwrap();
        let lam = SpectrumSet::interval(0.7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let values = (0..time.len()).map(|_| Complex64::new(rng.gen(), rng.gen())).collect();
        let f = GridSignal::new(time.clone(), Domain::Time, values).unwrap();
        let spec = mask_spectrum(&forward(&f), &lam).unwrap();
        let back = inverse(&spec);
        let pts = SeparatedSet::from_reals(&[-3.0, 0.0, 2.5, 7.5]).unwrap();
        let samples = analysis_map(&spec, &pts, &lam).unwrap();
        for (p, s) in pts.points().iter().zip(samples) {
            let i = time.flat_index(&time.lattice_indices(p).unwrap());
            assert!((s - back.values[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn analysis_of_indicator_is_sinc() {
        let time = make_grid(1, 2050, 0.5).unwrap();
        let lam = half_band();
        let spec = GridSignal::from_fn(time.dual(), Domain::Frequency, |_| Complex64::new(1.0, 0.0));
        let s = analysis_map(&spec, &SeparatedSet::from_reals(&[0.0, 1.0 / 3.0]).unwrap(), &lam).unwrap();
        assert!((s[0].re - 1.0).abs() < 1e-12);
        let x = 1.0 / 3.0;
        assert!((s[1].re - (PI * x).sin() / (PI * x)).abs() < 1e-6);
        assert!((s[1].re - 0.82699).abs() < 1e-5);
    }

    #[test]
    fn frame_operator_identities() {
        let frame = FourierFrame::new(&lattice(1.0, 0.3, 20.0), &half_band(), &period65()).unwrap();
        let f = random_model(&frame, 1);
        let g = random_model(&frame, 2);
        let sf = frame.apply_coeffs(&f);
        let sg = frame.apply_coeffs(&g);
        let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
            a.iter().zip(b).map(|(x, y)| x * y.conj()).sum::<Complex64>() * frame.weight
        };
        let energy: f64 = frame.analysis_coeffs(&f).iter().map(|v| v.norm_sqr()).sum();
        let q = inner(&sf, &f);
        assert!((q.re - energy).abs() < 1e-10 * energy && q.im.abs() < 1e-10 * energy);
        assert!((inner(&sf, &g) - inner(&sg, &f).conj()).norm() < 1e-10 * energy);
    }

    #[test]
    fn nyquist_lattice_is_tight() {
        let frame = FourierFrame::new(&lattice(1.0, 0.0, 32.0), &half_band(), &period65()).unwrap();
        assert_eq!(frame.model_dimension(), 65);
        let r = frame.bounds(EigenMethod::Dense);
        assert!((r.lower - 1.0).abs() < 1e-10 && (r.upper - 1.0).abs() < 1e-10);
        let f = random_model(&frame, 3);
        let sf = frame.apply_coeffs(&f);
        for (a, b) in sf.iter().zip(&f) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn thinned_lattice_is_not_a_frame() {
        let r = frame_bounds(&lattice(2.0, 0.0, 32.0), &half_band(), &period65(), EigenMethod::Dense).unwrap();
        assert_eq!(r.lower, 0.0);
        assert!(r.condition.is_infinite());
        assert!(!r.is_frame());
    }

    #[test]
    fn jittered_lattice_is_a_frame_and_iterative_agrees() {
        let e = lattice(1.0, 0.2, 32.0);
        let dense = frame_bounds(&e, &half_band(), &period65(), EigenMethod::Dense).unwrap();
        let iter = frame_bounds(&e, &half_band(), &period65(), EigenMethod::PowerIteration).unwrap();
        assert!(dense.lower > 0.0 && dense.condition.is_finite());
        assert!(iter.converged);
        assert!((dense.lower - iter.lower).abs() <= 1e-6 * dense.upper);
        assert!((dense.upper - iter.upper).abs() <= 1e-6 * dense.upper);
        assert_eq!(iter.method, BoundsMethod::PowerIteration);
    }

    #[test]
    fn frame_inequality_on_random_signals() {
        let frame = FourierFrame::new(&lattice(1.0, 0.25, 32.0), &half_band(), &period65()).unwrap();
        let r = frame.bounds(EigenMethod::Dense);
        for seed in 0..100 {
            let f = random_model(&frame, seed);
            let norm = frame.model_norm_sqr(&f);
            let energy: f64 = frame.analysis_coeffs(&f).iter().map(|v| v.norm_sqr()).sum();
            assert!(r.lower * norm <= energy * (1.0 + 1e-8));
            assert!(energy <= r.upper * norm * (1.0 + 1e-8));
        }
    }

    #[test]
    fn reconstruct_gaussian_from_nyquist_samples() {
        let time = period65();
        let gauss = GridSignal::from_fn(time.clone(), Domain::Time, |x| {
            Complex64::new((-PI * x[0] * x[0] / 16.0).exp(), 0.0)
        });
        let frame = FourierFrame::new(&lattice(1.0, 0.0, 32.0), &half_band(), &time).unwrap();
        let truth = mask_spectrum(&forward(&gauss), &half_band()).unwrap();
        let samples = frame.analysis(&truth).unwrap();
        let opts = ReconstructOptions { tol: 1e-12, max_iter: 20, ..Default::default() };
        let rec = frame.reconstruct(&samples, &opts).unwrap();
        assert!(rec.converged && rec.iterations <= 20);
        assert!(rec.signal.relative_error(&truth) < 1e-8);

        let report = frame.bounds(EigenMethod::Dense);
        let opts = ReconstructOptions { method: ReconstructMethod::FrameAlgorithm(report), tol: 1e-12, max_iter: 20 };
        let rec = frame.reconstruct(&samples, &opts).unwrap();
        assert!(rec.signal.relative_error(&truth) < 1e-8);
    }

    #[test]
    fn zero_samples_give_zero_signal() {
        let frame = FourierFrame::new(&lattice(1.0, 0.1, 32.0), &half_band(), &period65()).unwrap();
        let rec = frame.reconstruct(&vec![Complex64::new(0.0, 0.0); frame.points().len()], &Default::default()).unwrap();
        assert_eq!(rec.signal.norm(), 0.0);
    }

    #[test]
    fn frame_algorithm_refuses_without_lower_bound() {
        let frame = FourierFrame::new(&lattice(2.0, 0.0, 32.0), &half_band(), &period65()).unwrap();
        let report = frame.bounds(EigenMethod::Dense);
        let opts = ReconstructOptions { method: ReconstructMethod::FrameAlgorithm(report), tol: 1e-8, max_iter: 10 };
        let s = vec![Complex64::new(1.0, 0.0); frame.points().len()];
        assert!(matches!(frame.reconstruct(&s, &opts), Err(Error::NotAFrame)));
    }

    #[test]
    fn cg_iterations_respect_condition_bound() {
        let time = period65();
        let frame = FourierFrame::new(&lattice(1.0, 0.2, 32.0), &half_band(), &time).unwrap();
        let report = frame.bounds(EigenMethod::Dense);
        let truth = random_model(&frame, 5);
        let samples = frame.analysis_coeffs(&truth);
        let tol = 1e-9;
        let rec = frame.reconstruct(&samples, &ReconstructOptions { tol, max_iter: 500, ..Default::default() }).unwrap();
        assert!(rec.converged);
        // dense solve oracle
        let s = frame.operator_matrix();
        let rhs = nalgebra::DVector::from_vec(frame.synthesis_coeffs(&samples));
        let exact = s.lu().solve(&rhs).unwrap();
        let got = frame.restrict(&rec.signal).unwrap();
        let err = got.iter().zip(exact.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
            / exact.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-9 * report.condition);
        let bound = (0.5 * report.condition.sqrt() * (2.0 / tol).ln()).ceil() as usize;
        assert!(rec.iterations <= bound.max(1), "{} > {}", rec.iterations, bound);
    }

    #[test]
    fn two_dimensional_frame() {
        let time = make_grid(2, 18, 0.5).unwrap();
        let pts = jittered_lattice(&JitterSpec { dim: 2, spacing: 0.5, jitter: 0.05, extent: 4.0, symmetric: true, seed: 2 }).unwrap();
        let lam = SpectrumSet::ball(2, 0.6).unwrap();
        let frame = FourierFrame::new(&pts, &lam, &time).unwrap();
        let dense = frame.bounds(EigenMethod::Dense);
        let iter = frame.bounds(EigenMethod::PowerIteration);
        assert!(dense.is_frame());
        assert!((dense.lower - iter.lower).abs() <= 1e-6 * dense.upper);
        assert!((dense.upper - iter.upper).abs() <= 1e-6 * dense.upper);
    }
}
