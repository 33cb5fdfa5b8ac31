//! Non-uniform Gabor systems `{e_σ τ_s g : (s, σ) ∈ E}` and their frame
//! operator `S f = Σ ⟨f, e_σ τ_s g⟩ e_σ τ_s g`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::time_frequency_shift;
use crate::frames::{operator_bounds, EigenMethod, FrameReport, Reconstruction};
use crate::lattice::{Domain, GridSignal, Shape, SpectrumSet, UniformGrid};
use crate::linalg::conjugate_gradient;
use crate::sampling::SeparatedSet;
use crate::stft::WINDOW_NORM_TOLERANCE;

/// Signal space on which the frame operator is studied.
#[derive(Debug, Clone, PartialEq)]
pub enum GaborModel {
    /// Every grid signal.
    Full,
    /// Signals vanishing outside `Π [-h_i, h_i]`. These are the signals whose
    /// STFT has its `2d`-dimensional spectrum in a box with time-side
    /// half-widths `h`.
    TimeLimited { half_extent: Vec<f64> },
}

impl GaborModel {
    /// The model selected by a phase-space spectrum box `Λ ⊂ ℝ^{2d}`: its
    /// last `d` half-widths bound the time support.
    pub fn from_phase_spectrum(spectrum: &SpectrumSet) -> Result<Self> {
        match spectrum.shape() {
            Shape::Box { half_extent } if half_extent.len() % 2 == 0 && spectrum.epsilon() == 0.0 => {
                let d = half_extent.len() / 2;
                Ok(GaborModel::TimeLimited { half_extent: half_extent[d..].to_vec() })
            }
            _ => Err(Error::InvalidParameter("phase-space spectrum must be a box in an even dimension".into())),
        }
    }
}

/// Time–frequency shifts of one window at the points of a phase-space set.
#[derive(Debug, Clone)]
pub struct GaborSystem {
    window: GridSignal,
    points: SeparatedSet,
    /// Row `k` holds the atom of point `k` restricted to the model.
    atoms: Vec<Complex64>,
    model: Vec<usize>,
}

impl GaborSystem {
    /// Requires `‖g‖₂ = 1`.
    pub fn new(window: &GridSignal, points: &SeparatedSet) -> Result<Self> {
        let norm = window.norm();
        if (norm - 1.0).abs() > WINDOW_NORM_TOLERANCE {
            return Err(Error::InvalidParameter(format!("window must have unit norm, got {norm}")));
        }
        Self::new_unchecked(window, points)
    }

    /// Skips the window normalization check.
    pub fn new_unchecked(window: &GridSignal, points: &SeparatedSet) -> Result<Self> {
        let d = window.grid.dim();
        if points.dim() != 2 * d {
            return Err(Error::DimensionMismatch { expected: 2 * d, found: points.dim() });
        }
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        let model: Vec<usize> = (0..window.grid.len()).collect();
        let mut sys = Self { window: window.clone(), points: points.clone(), atoms: Vec::new(), model };
        sys.atoms = sys.build_atoms()?;
        Ok(sys)
    }

    fn build_atoms(&self) -> Result<Vec<Complex64>> {
        let d = self.window.grid.dim();
        let rows: Vec<Vec<Complex64>> = self
            .points
            .points()
            .par_iter()
            .map(|z| {
                let atom = time_frequency_shift(&self.window, &z[..d], &z[d..], true)?;
                Ok(self.model.iter().map(|&i| atom.values[i]).collect())
            })
            .collect::<Result<_>>()?;
        Ok(rows.concat())
    }

    /// Restricts the system to a model space.
    pub fn with_model(mut self, model: GaborModel) -> Result<Self> {
        let grid = &self.window.grid;
        self.model = match model {
            GaborModel::Full => (0..grid.len()).collect(),
            GaborModel::TimeLimited { half_extent } => {
                if half_extent.len() != grid.dim() {
                    return Err(Error::DimensionMismatch { expected: grid.dim(), found: half_extent.len() });
                }
                let keep: Vec<usize> = (0..grid.len())
                    .filter(|&i| grid.point(i).iter().zip(&half_extent).all(|(t, h)| t.abs() <= *h))
                    .collect();
                if keep.is_empty() {
                    return Err(Error::InvalidParameter("time support contains no grid point".into()));
                }
                keep
            }
        };
        self.atoms = self.build_atoms()?;
        Ok(self)
    }

    pub fn window(&self) -> &GridSignal {
        &self.window
    }

    pub fn points(&self) -> &SeparatedSet {
        &self.points
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.window.grid
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn model_dimension(&self) -> usize {
        self.model.len()
    }

    /// Model coordinates of a grid signal.
    pub fn restrict(&self, f: &GridSignal) -> Result<Vec<Complex64>> {
        if f.grid != self.window.grid {
            return Err(Error::InvalidGrid("signal is not on the window's grid".into()));
        }
        Ok(self.model.iter().map(|&i| f.values[i]).collect())
    }

    /// Grid signal that vanishes off the model support.
    pub fn extend(&self, coords: &[Complex64]) -> GridSignal {
        let mut out = GridSignal::zeros(self.window.grid.clone(), Domain::Time);
        for (&i, v) in self.model.iter().zip(coords) {
            out.values[i] = *v;
        }
        out
    }

    /// `⟨f, e_σ τ_s g⟩ = V_g f(s, σ)` in model coordinates.
    pub fn analysis_coords(&self, coords: &[Complex64]) -> Vec<Complex64> {
        let m = self.model.len();
        let w = self.window.grid.cell_volume();
        self.atoms
            .par_chunks(m)
            .map(|atom| atom.iter().zip(coords).map(|(a, f)| f * a.conj()).sum::<Complex64>() * w)
            .collect()
    }

    /// `Σ_k c_k e_{σ_k} τ_{s_k} g` restricted to the model.
    pub fn synthesis_coords(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let m = self.model.len();
        let mut out = vec![Complex64::new(0.0, 0.0); m];
        for (atom, c) in self.atoms.chunks(m).zip(coeffs) {
            for (o, a) in out.iter_mut().zip(atom) {
                *o += a * c;
            }
        }
        out
    }

    pub fn apply_coords(&self, coords: &[Complex64]) -> Vec<Complex64> {
        self.synthesis_coords(&self.analysis_coords(coords))
    }

    /// Dense matrix of the frame operator on the model, `Δ^d ΦΦ^*`.
    pub fn operator_matrix(&self) -> DMatrix<Complex64> {
        let m = self.model.len();
        let w = self.window.grid.cell_volume();
        let phi = DMatrix::from_fn(m, self.points.len(), |i, k| self.atoms[k * m + i]);
        (&phi * phi.adjoint()) * Complex64::new(w, 0.0)
    }

    pub fn bounds(&self, method: EigenMethod) -> FrameReport {
        operator_bounds(self.model.len(), method, || self.operator_matrix(), |c| self.apply_coords(c))
    }

    /// Solves `S f = Σ c_k e_{σ_k} τ_{s_k} g` by conjugate gradient.
    pub fn reconstruct(&self, coeffs: &[Complex64], tol: f64, max_iter: usize) -> Result<Reconstruction> {
        if coeffs.len() != self.points.len() {
            return Err(Error::DimensionMismatch { expected: self.points.len(), found: coeffs.len() });
        }
        let rhs = self.synthesis_coords(coeffs);
        let out = conjugate_gradient(|c| self.apply_coords(c), &rhs, tol, max_iter);
        Ok(Reconstruction {
            signal: self.extend(&out.x),
            iterations: out.iterations,
            residual: out.relative_residual,
            converged: out.converged,
        })
    }
}

/// `V_g f(s_k, σ_k)` for every phase point; `f` is restricted to the model.
pub fn gabor_coefficients(f: &GridSignal, sys: &GaborSystem) -> Result<Vec<Complex64>> {
    Ok(sys.analysis_coords(&sys.restrict(f)?))
}

pub fn gabor_frame_apply(f: &GridSignal, sys: &GaborSystem) -> Result<GridSignal> {
    Ok(sys.extend(&sys.apply_coords(&sys.restrict(f)?)))
}

pub fn gabor_frame_bounds(sys: &GaborSystem, method: EigenMethod) -> FrameReport {
    sys.bounds(method)
}

pub fn gabor_reconstruct(coeffs: &[Complex64], sys: &GaborSystem, tol: f64, max_iter: usize) -> Result<Reconstruction> {
    sys.reconstruct(coeffs, tol, max_iter)
}

/// Parameters of [`phase_lattice`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseLatticeSpec {
    /// Time step `a`.
    pub a: f64,
    /// Frequency step `b`.
    pub b: f64,
    /// Maximum displacement per coordinate, below `min(a, b)/2`.
    pub jitter: f64,
    pub seed: u64,
}

fn axis_steps(span: f64, step: f64) -> Vec<i64> {
    let ratio = span / step;
    let count = if (ratio - ratio.round()).abs() < 1e-9 { ratio.round() } else { ratio.floor() } as i64;
    let lo = -(count / 2);
    (lo..lo + count).collect()
}

/// `aℤ^d × bℤ^d` over the phase-space box covered by `grid` and its dual,
/// each coordinate displaced by at most `jitter`. When `a` and `b` divide
/// the spans the lattice is periodic on the grid torus.
pub fn phase_lattice(grid: &UniformGrid, spec: &PhaseLatticeSpec) -> Result<SeparatedSet> {
    let PhaseLatticeSpec { a, b, jitter, seed } = *spec;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter(format!("lattice steps must be positive, got a={a}, b={b}")));
    }
    if !(jitter >= 0.0 && jitter < a.min(b) / 2.0) {
        return Err(Error::InvalidParameter(format!("jitter must be < min(a, b)/2, got {jitter}")));
    }
    let d = grid.dim();
    let dual = grid.dual();
    let mut axes: Vec<(Vec<i64>, f64)> = (0..d).map(|i| (axis_steps(grid.span(i), a), a)).collect();
    axes.extend((0..d).map(|i| (axis_steps(dual.span(i), b), b)));
    let total: usize = axes.iter().map(|(k, _)| k.len()).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut p = vec![0.0; 2 * d];
        for axis in (0..2 * d).rev() {
            let (ks, step) = &axes[axis];
            p[axis] = ks[rem % ks.len()] as f64 * step;
            rem /= ks.len();
        }
        for v in &mut p {
            *v += jitter * rng.gen_range(-1.0..=1.0);
        }
        points.push(p);
    }
    SeparatedSet::new(2 * d, points)
}

/// `sup_z Σ_n e^{-π‖z − z_n‖²/2}` over the probe points: the Schur bound on
/// the Gram matrix of a Gaussian Gabor system, `B ≤ C`.
pub fn phase_space_constant(points: &SeparatedSet, probe: &UniformGrid) -> Result<f64> {
    if points.dim() != probe.dim() {
        return Err(Error::DimensionMismatch { expected: points.dim(), found: probe.dim() });
    }
    let sums: Vec<f64> = probe
        .points()
        .par_iter()
        .map(|z| {
            points
                .points()
                .iter()
                .map(|p| (-PI * p.iter().zip(z).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / 2.0).exp())
                .sum()
        })
        .collect();
    Ok(sums.into_iter().fold(0.0, f64::max))
}

/// One lattice cell `[-a/2, a/2)^d × [-b/2, b/2)^d` at eight probes per step.
pub fn lattice_cell_probe(d: usize, a: f64, b: f64) -> Result<UniformGrid> {
    let mut spacing = vec![a / 8.0; d];
    spacing.extend(vec![b / 8.0; d]);
    UniformGrid::with_spacings(8, spacing)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::translate;
    use crate::lattice::make_grid;
    use crate::stft::{gaussian_window, phase_space_band_limit, stft_points};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn grid() -> UniformGrid {
        make_grid(1, 64, 0.125).unwrap()
    }

    fn system(a: f64, b: f64, jitter: f64) -> GaborSystem {
        let g = gaussian_window(&grid()).unwrap();
        let pts = phase_lattice(&grid(), &PhaseLatticeSpec { a, b, jitter, seed: 11 }).unwrap();
        GaborSystem::new(&g, &pts).unwrap()
    }

    fn bump(center: f64, freq: f64) -> GridSignal {
        GridSignal::from_fn(grid(), Domain::Time, |t| {
            Complex64::from_polar((-PI * (t[0] - center).powi(2)).exp(), 2.0 * PI * freq * t[0])
        })
    }

    #[test]
    fn window_at_origin_has_unit_coefficient() {
        let g = gaussian_window(&grid()).unwrap();
        let sys = GaborSystem::new(&g, &SeparatedSet::new(2, vec![vec![0.0, 0.0], vec![0.5, 1.0]]).unwrap()).unwrap();
        let c = gabor_coefficients(&g, &sys).unwrap();
        assert!((c[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let direct = stft_points(&g, &g, &[(vec![0.5], vec![1.0])]).unwrap()[0];
        assert!((c[1] - direct).norm() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized_window() {
        let g = gaussian_window(&grid()).unwrap().scale(Complex64::new(2.0, 0.0));
        let pts = SeparatedSet::new(2, vec![vec![0.0, 0.0]]).unwrap();
        assert!(matches!(GaborSystem::new(&g, &pts), Err(Error::InvalidParameter(_))));
        assert!(GaborSystem::new_unchecked(&g, &pts).is_ok());
    }

    #[test]
    fn coefficients_are_linear() {
        let sys = system(0.5, 1.0, 0.0);
        let f = bump(0.3, 0.5);
        let h = bump(-1.0, -1.5);
        let a = Complex64::new(0.7, -1.2);
        let lhs = gabor_coefficients(&f.scale(a).add(&h), &sys).unwrap();
        let cf = gabor_coefficients(&f, &sys).unwrap();
        let ch = gabor_coefficients(&h, &sys).unwrap();
        for ((l, x), y) in lhs.iter().zip(cf).zip(ch) {
            assert!((l - (a * x + y)).norm() < 1e-12);
        }
    }

    #[test]
    fn frame_operator_identities() {
        let sys = system(0.5, 1.0, 0.1);
        let f = bump(0.3, 0.5);
        let h = bump(-1.0, -1.5);
        let sf = gabor_frame_apply(&f, &sys).unwrap();
        let sh = gabor_frame_apply(&h, &sys).unwrap();
        let energy: f64 = gabor_coefficients(&f, &sys).unwrap().iter().map(|c| c.norm_sqr()).sum();
        assert!((sf.inner(&f).re - energy).abs() < 1e-10 * energy);
        assert!((sf.inner(&h) - sh.inner(&f).conj()).norm() < 1e-10 * energy);
    }

    #[test]
    fn half_density_lattice_bounds_and_sandwich() {
        let sys = system(0.5, 1.0, 0.0);
        let dense = sys.bounds(EigenMethod::Dense);
        let iter = sys.bounds(EigenMethod::PowerIteration);
        assert!(dense.lower > 0.0 && dense.condition < 10.0, "{dense:?}");
        assert!((dense.lower - iter.lower).abs() <= 1e-6 * dense.upper);
        assert!((dense.upper - iter.upper).abs() <= 1e-6 * dense.upper);

        let g = gaussian_window(&grid()).unwrap();
        let tilted = phase_lattice(&grid(), &PhaseLatticeSpec { a: FRAC_1_SQRT_2, b: FRAC_1_SQRT_2, jitter: 0.0, seed: 0 }).unwrap();
        let sys = GaborSystem::new(&g, &tilted).unwrap();
        let r = sys.bounds(EigenMethod::Dense);
        let energy: f64 = gabor_coefficients(&g, &sys).unwrap().iter().map(|c| c.norm_sqr()).sum();
        assert!(r.lower * (1.0 - 1e-10) <= energy && energy <= r.upper * (1.0 + 1e-10));
    }

    #[test]
    fn density_extremes() {
        let tight = system(0.5, 0.5, 0.0).bounds(EigenMethod::Dense);
        assert!(tight.condition < 1.1, "{tight:?}");
        let sparse = system(2.0, 1.0, 0.0).bounds(EigenMethod::Dense);
        assert!(sparse.lower < 1e-3);
    }

    #[test]
    fn removing_a_point_shrinks_both_bounds() {
        let sys = system(0.5, 1.0, 0.1);
        let r = sys.bounds(EigenMethod::Dense);
        let fewer = GaborSystem::new(sys.window(), &sys.points().without(7)).unwrap().bounds(EigenMethod::Dense);
        assert!(fewer.lower <= r.lower * (1.0 + 1e-12));
        assert!(fewer.upper <= r.upper * (1.0 + 1e-12));
    }

    #[test]
    fn bounds_scale_with_window() {
        let sys = system(0.5, 1.0, 0.0);
        let r = sys.bounds(EigenMethod::Dense);
        let scaled = GaborSystem::new_unchecked(&sys.window().scale(Complex64::new(0.0, 3.0)), sys.points())
            .unwrap()
            .bounds(EigenMethod::Dense);
        assert!((scaled.lower - 9.0 * r.lower).abs() < 1e-9 * scaled.upper);
        assert!((scaled.upper - 9.0 * r.upper).abs() < 1e-9 * scaled.upper);
    }

    #[test]
    fn schur_constant_bounds_upper_frame_bound() {
        for (a, b) in [(0.5, 1.0), (0.5, 0.5)] {
            let sys = system(a, b, 0.0);
            let c = phase_space_constant(sys.points(), &lattice_cell_probe(1, a, b).unwrap()).unwrap();
            let r = sys.bounds(EigenMethod::Dense);
            assert!(r.upper <= c * (1.0 + 1e-9), "{} > {}", r.upper, c);
        }
    }

    #[test]
    fn reconstruction_round_trips() {
        let sys = system(0.5, 1.0, 0.0);
        let f = translate(&bump(0.0, 0.0), &[0.75], false).unwrap();
        let rec = gabor_reconstruct(&gabor_coefficients(&f, &sys).unwrap(), &sys, 1e-12, 200).unwrap();
        assert!(rec.converged);
        assert!(rec.signal.relative_error(&f) < 1e-7);

        let zero = gabor_reconstruct(&vec![Complex64::new(0.0, 0.0); sys.len()], &sys, 1e-12, 10).unwrap();
        assert_eq!(zero.signal.norm(), 0.0);

        let jit = system(0.5, 1.0, 0.1);
        let r = jit.bounds(EigenMethod::Dense);
        assert!(r.lower > 0.0);
        let f = bump(0.4, -0.8);
        let tol = 1e-12;
        let rec = gabor_reconstruct(&gabor_coefficients(&f, &jit).unwrap(), &jit, tol, 500).unwrap();
        assert!(rec.signal.relative_error(&f) < 1e-6);
        let s = jit.operator_matrix();
        let rhs = nalgebra::DVector::from_vec(jit.synthesis_coords(&gabor_coefficients(&f, &jit).unwrap()));
        let exact = s.lu().solve(&rhs).unwrap();
        let err: f64 = rec.signal.values.iter().zip(exact.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
            / exact.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        assert!(err < 1e-9);
        let bound = (0.5 * r.condition.sqrt() * (2.0 / tol).ln()).ceil() as usize;
        assert!(rec.iterations <= bound, "{} > {bound}", rec.iterations);
    }

    #[test]
    fn time_limited_model() {
        let g = gaussian_window(&grid()).unwrap();
        let box2 = SpectrumSet::boxed(vec![3.0, 1.5]).unwrap();
        let pts = phase_lattice(&grid(), &PhaseLatticeSpec { a: 0.5, b: 1.0, jitter: 0.1, seed: 4 }).unwrap();
        let sys = GaborSystem::new(&g, &pts).unwrap().with_model(GaborModel::from_phase_spectrum(&box2).unwrap()).unwrap();
        assert_eq!(sys.model_dimension(), 25);
        let r = sys.bounds(EigenMethod::Dense);
        assert!(r.lower > 0.0);
        let f = phase_space_band_limit(&bump(0.2, 0.7), &g, &box2).unwrap();
        let coords = sys.restrict(&f).unwrap();
        assert!((sys.extend(&coords).norm() - f.norm()).abs() < 1e-10 * f.norm());
        let energy: f64 = gabor_coefficients(&f, &sys).unwrap().iter().map(|c| c.norm_sqr()).sum();
        let n2 = f.norm_sqr();
        assert!(r.lower * n2 * (1.0 - 1e-10) <= energy && energy <= r.upper * n2 * (1.0 + 1e-10));
    }

    #[test]
    fn lattice_helper() {
        let pts = phase_lattice(&grid(), &PhaseLatticeSpec { a: 0.5, b: 1.0, jitter: 0.0, seed: 0 }).unwrap();
        assert_eq!(pts.len(), 16 * 8);
        assert!((pts.separation() - 0.5).abs() < 1e-12);
        assert!(phase_lattice(&grid(), &PhaseLatticeSpec { a: 0.5, b: 1.0, jitter: 0.25, seed: 0 }).is_err());
        let j = phase_lattice(&grid(), &PhaseLatticeSpec { a: 0.5, b: 1.0, jitter: 0.1, seed: 0 }).unwrap();
        assert!(j.separation() >= 0.3 - 1e-12);
    }
}
