//! Short-time Fourier transform `V_g f(x, ω) = ⟨f, e_ω τ_x g⟩` on the
//! periodic grid model, the Gaussian reference window `G₀`, and the
//! constants of the semi-discrete frame inequality.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::fourier::{cis, dot, forward, inverse, mask_spectrum, spectrum_indices, translate};
use crate::frames::{operator_bounds, EigenMethod, FrameReport};
use crate::lattice::{Domain, GridSignal, SpectrumSet, UniformGrid};
use crate::sampling::SeparatedSet;

/// Window norms further than this from one trigger a warning and rescaling.
pub const WINDOW_NORM_TOLERANCE: f64 = 1e-8;

/// Largest admissible mass of `|G₀|²` outside the grid, and largest
/// admissible deviation of its quadrature norm from one.
pub const GAUSSIAN_TRUNCATION: f64 = 1e-10;

/// A Feichtinger-norm estimate whose refinement delta exceeds this is unconverged.
pub const REFINEMENT_TOLERANCE: f64 = 0.01;

const X_CHUNK: usize = 16;

/// `V_g f` sampled on (time grid) × (its dual grid), stored row-major with
/// the time index outermost.
#[derive(Debug, Clone, PartialEq)]
pub struct StftField {
    pub time_grid: UniformGrid,
    pub freq_grid: UniformGrid,
    pub values: Vec<Complex64>,
}

impl StftField {
    pub fn zeros(time_grid: UniformGrid) -> Self {
        let freq_grid = time_grid.dual();
        let values = vec![Complex64::new(0.0, 0.0); time_grid.len() * freq_grid.len()];
        Self { time_grid, freq_grid, values }
    }

    pub fn get(&self, x_index: usize, omega_index: usize) -> Complex64 {
        self.values[x_index * self.freq_grid.len() + omega_index]
    }

    /// Quadrature weight of one phase-space cell.
    pub fn cell_area(&self) -> f64 {
        self.time_grid.cell_volume() * self.freq_grid.cell_volume()
    }

    /// `∫∫ |V|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.cell_area() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// `∫∫ |V|`.
    pub fn l1_norm(&self) -> f64 {
        self.cell_area() * self.values.iter().map(|v| v.norm()).sum::<f64>()
    }

    /// The `2d`-dimensional phase-space grid carrying the field.
    pub fn phase_space_grid(&self) -> UniformGrid {
        self.time_grid.product(&self.freq_grid).expect("time and dual grid share n")
    }

    /// The field as a signal on [`phase_space_grid`](Self::phase_space_grid).
    pub fn to_signal(&self) -> GridSignal {
        GridSignal { grid: self.phase_space_grid(), domain: Domain::Time, values: self.values.clone() }
    }

    /// CSV with columns `x, omega, re, im, abs` (`x0, x1, …, omega0, …` when `d > 1`).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let d = self.time_grid.dim();
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = if d == 1 {
            vec!["x".into(), "omega".into()]
        } else {
            (0..d).map(|i| format!("x{i}")).chain((0..d).map(|i| format!("omega{i}"))).collect()
        };
        header.extend(["re", "im", "abs"].map(String::from));
        w.write_record(&header)?;
        let mut x = vec![0.0; d];
        let mut om = vec![0.0; d];
        for i in 0..self.time_grid.len() {
            self.time_grid.point_into(i, &mut x);
            for j in 0..self.freq_grid.len() {
                self.freq_grid.point_into(j, &mut om);
                let v = self.get(i, j);
                let row: Vec<String> = x
                    .iter()
                    .chain(&om)
                    .copied()
                    .chain([v.re, v.im, v.norm()])
                    .map(|c| c.to_string())
                    .collect();
                w.write_record(&row)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn check_same_grid(f: &GridSignal, g: &GridSignal) -> Result<()> {
    if f.grid != g.grid {
        return Err(Error::InvalidGrid("signal and window live on different grids".into()));
    }
    Ok(())
}

/// `‖g‖²`, warning when `g` is not normalized.
fn window_norm_sqr(g: &GridSignal) -> f64 {
    let n2 = g.norm_sqr();
    if (n2.sqrt() - 1.0).abs() > WINDOW_NORM_TOLERANCE {
        log::warn!("window norm is {} rather than 1", n2.sqrt());
    }
    n2
}

fn gaussian_on(grid: &UniformGrid, domain: Domain) -> Result<GridSignal> {
    let d = grid.dim() as f64;
    // mass of |G₀|² outside [-L/2, L/2] along one axis is erfc(√(2π)·L/2)
    let inside: f64 = (0..grid.dim())
        .map(|a| 1.0 - erfc((2.0 * PI).sqrt() * grid.span(a) / 2.0))
        .product();
    if 1.0 - inside > GAUSSIAN_TRUNCATION {
        return Err(Error::Truncation(format!(
            "Gaussian window loses {:e} of its energy outside a grid of span {}",
            1.0 - inside,
            grid.span(0)
        )));
    }
    let c = 2f64.powf(d / 4.0);
    let g = GridSignal::from_fn(grid.clone(), domain, |p| {
        Complex64::new(c * (-PI * dot(p, p)).exp(), 0.0)
    });
    let err = (g.norm() - 1.0).abs();
    if err > GAUSSIAN_TRUNCATION {
        return Err(Error::Truncation(format!("grid spacing too coarse: quadrature norm of G₀ is off by {err:e}")));
    }
    Ok(g)
}

/// `G₀(λ) = 2^{d/4} e^{-π‖λ‖²}`, the L²-normalized Gaussian.
pub fn gaussian_window(grid: &UniformGrid) -> Result<GridSignal> {
    gaussian_on(grid, Domain::Time)
}

/// `h_x = f · conj(τ_x g)`.
fn windowed(f: &GridSignal, g: &GridSignal, x: &[f64]) -> Result<GridSignal> {
    let shifted = translate(g, x, true)?;
    let values = f.values.iter().zip(&shifted.values).map(|(a, b)| a * b.conj()).collect();
    Ok(GridSignal { values, ..f.clone() })
}

/// `V_g f` on the full grid: one windowed DFT per time position.
pub fn stft_forward(f: &GridSignal, g: &GridSignal) -> Result<StftField> {
    check_same_grid(f, g)?;
    window_norm_sqr(g);
    let grid = &f.grid;
    let columns: Vec<Vec<Complex64>> = (0..grid.len())
        .into_par_iter()
        .map(|i| Ok(forward(&windowed(f, g, &grid.point(i))?).values))
        .collect::<Result<_>>()?;
    Ok(StftField {
        time_grid: grid.clone(),
        freq_grid: grid.dual(),
        values: columns.concat(),
    })
}

/// `V_g f(x, ω)` at arbitrary phase-space points by direct summation;
/// off-grid `x` uses the trigonometric interpolant of `g`.
pub fn stft_points(f: &GridSignal, g: &GridSignal, points: &[(Vec<f64>, Vec<f64>)]) -> Result<Vec<Complex64>> {
    check_same_grid(f, g)?;
    let grid = &f.grid;
    let w = grid.cell_volume();
    points
        .par_iter()
        .map(|(x, omega)| {
            let h = windowed(f, g, x)?;
            if omega.len() != grid.dim() {
                return Err(Error::DimensionMismatch { expected: grid.dim(), found: omega.len() });
            }
            let mut t = vec![0.0; grid.dim()];
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, v) in h.values.iter().enumerate() {
                grid.point_into(i, &mut t);
                acc += v * cis(-2.0 * PI * dot(&t, omega));
            }
            Ok(acc * w)
        })
        .collect()
}

/// Quadrature of `f = ‖g‖^{-2} ∫∫ V(x, ω) e_ω τ_x g dω dx`.
pub fn stft_inverse(field: &StftField, g: &GridSignal) -> Result<GridSignal> {
    if field.time_grid != g.grid {
        return Err(Error::InvalidGrid("window does not live on the field's time grid".into()));
    }
    let norm_sqr = window_norm_sqr(g);
    let grid = &field.time_grid;
    let n_omega = field.freq_grid.len();
    let chunks: Vec<Vec<Complex64>> = (0..grid.len())
        .collect::<Vec<_>>()
        .par_chunks(X_CHUNK)
        .map(|xs| {
            let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
            for &i in xs {
                let col = GridSignal {
                    grid: field.freq_grid.clone(),
                    domain: Domain::Frequency,
                    values: field.values[i * n_omega..(i + 1) * n_omega].to_vec(),
                };
                let h = inverse(&col);
                let shifted = translate(g, &grid.point(i), false)?;
                for ((a, hv), gv) in acc.iter_mut().zip(&h.values).zip(&shifted.values) {
                    *a += hv * gv;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    for chunk in &chunks {
        for (v, c) in values.iter_mut().zip(chunk) {
            *v += c;
        }
    }
    let scale = grid.cell_volume() / norm_sqr;
    for v in &mut values {
        *v *= scale;
    }
    Ok(GridSignal { grid: grid.clone(), domain: Domain::Time, values })
}

/// `Σ_{x∈E} ∫ |V_g f(x, ω)|² dω`, each ω-integral a quadrature over the full dual grid.
pub fn semidiscrete_energy(f: &GridSignal, g: &GridSignal, points: &SeparatedSet) -> Result<f64> {
    check_same_grid(f, g)?;
    if points.dim() != f.grid.dim() {
        return Err(Error::DimensionMismatch { expected: f.grid.dim(), found: points.dim() });
    }
    let parts: Vec<f64> = points
        .points()
        .par_iter()
        .map(|x| Ok(forward(&windowed(f, g, x)?).norm_sqr()))
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}

/// Bounds of `f ↦ Σ_{x∈E} ∫ |V_g f(x, ω)|² dω` on `PW_Λ`: the compression of
/// multiplication by `Σ_x |g(t − x)|²` to signals with spectrum in `Λ`.
pub fn semidiscrete_bounds(
    g: &GridSignal,
    points: &SeparatedSet,
    spectrum: &SpectrumSet,
    method: EigenMethod,
) -> Result<FrameReport> {
    spectrum.check_resolved_by(&g.grid)?;
    let freq = g.grid.dual();
    let model = spectrum_indices(&freq, spectrum)?;
    if model.is_empty() {
        return Err(Error::InvalidParameter("no grid frequency lies inside the spectrum".into()));
    }
    let mut weight = vec![0.0; g.grid.len()];
    for x in points.points() {
        let s = translate(g, x, true)?;
        for (w, v) in weight.iter_mut().zip(&s.values) {
            *w += v.norm_sqr();
        }
    }
    let apply = |c: &[Complex64]| -> Vec<Complex64> {
        let mut spec = GridSignal::zeros(freq.clone(), Domain::Frequency);
        for (&i, v) in model.iter().zip(c) {
            spec.values[i] = *v;
        }
        let mut f = inverse(&spec);
        for (v, w) in f.values.iter_mut().zip(&weight) {
            *v *= w;
        }
        let back = forward(&f);
        model.iter().map(|&i| back.values[i]).collect()
    };
    let m = model.len();
    let dense = || {
        let cols: Vec<Vec<Complex64>> = (0..m)
            .into_par_iter()
            .map(|j| {
                let mut e = vec![Complex64::new(0.0, 0.0); m];
                e[j] = Complex64::new(1.0, 0.0);
                apply(&e)
            })
            .collect();
        nalgebra::DMatrix::from_fn(m, m, |i, j| cols[j][i])
    };
    Ok(operator_bounds(m, method, dense, apply))
}

/// Supremum defining the upper constant and where it is attained.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperConstant {
    pub value: f64,
    pub y: Vec<f64>,
    pub gamma: Vec<f64>,
}

/// `∫_ℝ e^{-π(γ+ω)²/2} dω` by the trapezoid rule.
fn gaussian_line_integral(gamma: f64) -> f64 {
    let h = 1.0 / 16.0;
    let reach = 12.0;
    let steps = (2.0 * reach / h) as i64;
    (0..=steps)
        .map(|k| {
            let w = if k == 0 || k == steps { 0.5 } else { 1.0 };
            let om = -gamma - reach + k as f64 * h;
            w * (-PI * (gamma + om).powi(2) / 2.0).exp()
        })
        .sum::<f64>()
        * h
}

/// `sup_{y,γ} Σ_{x∈E} ∫ |V_{G₀}G₀(γ + ω, y + x)| dω` with `y` and `γ` ranging
/// over `probe`, using `|V_{G₀}G₀(a, b)| = e^{-π(‖a‖² + ‖b‖²)/2}`.
pub fn upper_constant_c(points: &SeparatedSet, probe: &UniformGrid) -> Result<UpperConstant> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    if points.dim() != probe.dim() {
        return Err(Error::DimensionMismatch { expected: points.dim(), found: probe.dim() });
    }
    let probes = probe.points();
    let by_y: Vec<f64> = probes
        .par_iter()
        .map(|y| {
            points
                .points()
                .iter()
                .map(|x| (-PI * x.iter().zip(y).map(|(a, b)| (a + b).powi(2)).sum::<f64>() / 2.0).exp())
                .sum()
        })
        .collect();
    let by_gamma: Vec<f64> = probes.iter().map(|g| g.iter().map(|&c| gaussian_line_integral(c)).product()).collect();
    let mut best = UpperConstant { value: f64::NEG_INFINITY, y: Vec::new(), gamma: Vec::new() };
    for (yi, sy) in by_y.iter().enumerate() {
        for (gi, sg) in by_gamma.iter().enumerate() {
            let v = sy * sg;
            if v > best.value {
                best = UpperConstant { value: v, y: probes[yi].clone(), gamma: probes[gi].clone() };
            }
        }
    }
    Ok(best)
}

/// One separation cell `[-r/2, r/2)^d` sampled at spacing `r/(8·refine)`.
pub fn default_probe(points: &SeparatedSet, refine: usize) -> Result<UniformGrid> {
    let r = if points.len() > 1 { points.separation() } else { 1.0 };
    let n = 8 * refine.max(1);
    UniformGrid::new(points.dim(), n, r / n as f64)
}

/// Estimate of `‖V_{G₀}ĝ‖₁` with its grid-refinement delta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeichtingerNorm {
    pub value: f64,
    /// Relative change when every other phase-space row is dropped.
    pub refinement_delta: f64,
    pub converged: bool,
}

/// `∫∫ |V_{G₀}ĝ|` over the phase-space grid of the spectrum of `g`.
pub fn feichtinger_norm(g: &GridSignal) -> Result<FeichtingerNorm> {
    let spec = forward(g);
    let reference = gaussian_on(&spec.grid, Domain::Frequency)?;
    let field = stft_forward(&spec, &reference)?;
    let value = field.l1_norm();
    let n_omega = field.freq_grid.len();
    let coarse: f64 = (0..field.time_grid.len())
        .filter(|i| i % 2 == 0)
        .map(|i| field.values[i * n_omega..(i + 1) * n_omega].iter().map(|v| v.norm()).sum::<f64>())
        .sum::<f64>()
        * 2.0
        * field.cell_area();
    let refinement_delta = if value > 0.0 { (value - coarse).abs() / value } else { 0.0 };
    Ok(FeichtingerNorm { value, refinement_delta, converged: refinement_delta <= REFINEMENT_TOLERANCE })
}

/// Projects `V_g f` onto fields whose `2d`-dimensional spectrum lies in
/// `phase_spectrum` and maps back with [`stft_inverse`].
pub fn phase_space_band_limit(f: &GridSignal, g: &GridSignal, phase_spectrum: &SpectrumSet) -> Result<GridSignal> {
    let field = stft_forward(f, g)?;
    let psg = field.phase_space_grid();
    phase_spectrum.check_resolved_by(&psg)?;
    let projected = inverse(&mask_spectrum(&forward(&field.to_signal()), phase_spectrum)?);
    let out = StftField { values: projected.values, ..field };
    stft_inverse(&out, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{modulate, pw_project};
    use crate::lattice::make_grid;
    use crate::sampling::{jittered_lattice, JitterSpec};
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid64() -> UniformGrid {
        make_grid(1, 64, 0.125).unwrap()
    }

    fn bump(grid: &UniformGrid, center: f64, width: f64, freq: f64) -> GridSignal {
        GridSignal::from_fn(grid.clone(), Domain::Time, |t| {
            let u = (t[0] - center) / width;
            Complex64::from_polar((-PI * u * u).exp(), 2.0 * PI * freq * t[0])
        })
    }

    #[test]
    fn gaussian_window_examples() {
        let g = gaussian_window(&grid64()).unwrap();
        assert!((g.values[32].re - 2f64.powf(0.25)).abs() < 1e-15);
        assert!((g.values[32].re - 1.18921).abs() < 1e-5);
        assert!((g.norm() - 1.0).abs() < 1e-10);
        for k in 1..32 {
            assert_eq!(g.values[32 + k], g.values[32 - k]);
        }
        let g2 = gaussian_window(&make_grid(2, 64, 0.125).unwrap()).unwrap();
        assert!((g2.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gaussian_window_rejects_small_or_coarse_grids() {
        assert!(matches!(gaussian_window(&make_grid(1, 8, 0.25).unwrap()), Err(Error::Truncation(_))));
        assert!(matches!(gaussian_window(&make_grid(1, 16, 0.75).unwrap()), Err(Error::Truncation(_))));
    }

    #[test]
    fn window_against_itself() {
        let g = gaussian_window(&grid64()).unwrap();
        let v = stft_points(&g, &g, &[(vec![0.0], vec![0.0])]).unwrap();
        assert!((v[0] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn gaussian_ambiguity_modulus() {
        let grid = make_grid(1, 128, 0.0625).unwrap();
        let g = gaussian_window(&grid).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<(Vec<f64>, Vec<f64>)> =
            (0..20).map(|_| (vec![rng.gen_range(-2.0..2.0)], vec![rng.gen_range(-2.0..2.0)])).collect();
        let got = stft_points(&g, &g, &pts).unwrap();
        for ((x, w), v) in pts.iter().zip(got) {
            // independent dense quadrature of the defining integral
            let fine = 4096;
            let h = 16.0 / fine as f64;
            let q: Complex64 = (0..fine)
                .map(|k| {
                    let t = -8.0 + k as f64 * h;
                    let gt = 2f64.powf(0.25) * (-PI * t * t).exp();
                    let gs = 2f64.powf(0.25) * (-PI * (t - x[0]).powi(2)).exp();
                    Complex64::from_polar(gt * gs * h, -2.0 * PI * t * w[0])
                })
                .sum();
            let exact = (-PI * (x[0] * x[0] + w[0] * w[0]) / 2.0).exp();
            assert!((v.norm() - exact).abs() < 1e-8, "{x:?} {w:?}");
            assert!((q.norm() - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn full_grid_matches_direct_summation() {
        let grid = make_grid(1, 32, 0.25).unwrap();
        let f = bump(&grid, 0.5, 1.0, 0.7);
        let g = bump(&grid, 0.0, 1.5, 0.0);
        let field = stft_forward(&f, &g).unwrap();
        for &(i, j) in &[(0, 0), (5, 17), (16, 16), (31, 3)] {
            let p = (field.time_grid.point(i), field.freq_grid.point(j));
            let direct = stft_points(&f, &g, &[p]).unwrap()[0];
            assert!((field.get(i, j) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn moyal_and_round_trip() {
        let grid = grid64();
        let g = gaussian_window(&grid).unwrap();
        let f = bump(&grid, 0.5, 1.0, 0.3).add(&bump(&grid, -1.25, 0.7, -1.0).scale(Complex64::new(0.0, 2.0)));
        let field = stft_forward(&f, &g).unwrap();
        let expect = f.norm_sqr() * g.norm_sqr();
        assert!((field.norm_sqr() - expect).abs() <= 1e-8 * expect);
        let back = stft_inverse(&field, &g).unwrap();
        assert!(back.relative_error(&f) < 1e-8);
        let zero = stft_inverse(&StftField::zeros(grid), &g).unwrap();
        assert_eq!(zero.norm(), 0.0);
    }

    #[test]
    fn inverse_rescales_unnormalized_window() {
        let grid = grid64();
        let g = gaussian_window(&grid).unwrap().scale(Complex64::new(3.0, 0.0));
        let f = bump(&grid, 0.0, 1.0, 0.0);
        let back = stft_inverse(&stft_forward(&f, &g).unwrap(), &g).unwrap();
        assert!(back.relative_error(&f) < 1e-10);
    }

    #[test]
    fn semidiscrete_energy_basics() {
        let grid = make_grid(1, 256, 0.125).unwrap();
        let g = gaussian_window(&grid).unwrap();
        let e = SeparatedSet::from_reals(&[-1.0, 0.0, 1.0]).unwrap();
        let zero = GridSignal::zeros(grid.clone(), Domain::Time);
        assert_eq!(semidiscrete_energy(&zero, &g, &e).unwrap(), 0.0);
        let f = pw_project(&bump(&grid, 0.2, 2.0, 0.0), &SpectrumSet::interval(0.5).unwrap()).unwrap();
        let base = semidiscrete_energy(&f, &g, &e).unwrap();
        let more = semidiscrete_energy(&f, &g, &e.with_points(&[vec![2.5], vec![-3.5]]).unwrap()).unwrap();
        assert!(base > 0.0 && more >= base);
    }

    #[test]
    fn energy_of_nyquist_set_lies_within_its_bounds() {
        // the lattice covers the whole period, so no signal escapes it
        let grid = make_grid(1, 256, 0.125).unwrap();
        let g = gaussian_window(&grid).unwrap();
        let lam = SpectrumSet::interval(0.5).unwrap();
        let e = jittered_lattice(&JitterSpec { dim: 1, spacing: 1.0, jitter: 0.0, extent: 16.0, symmetric: true, seed: 0 }).unwrap();
        let report = semidiscrete_bounds(&g, &e, &lam, EigenMethod::Dense).unwrap();
        assert!(report.lower > 0.0);
        let f = pw_project(&bump(&grid, 0.0, 3.0, 0.0), &lam).unwrap();
        let ratio = semidiscrete_energy(&f, &g, &e).unwrap() / f.norm_sqr();
        assert!(report.lower * (1.0 - 1e-10) <= ratio && ratio <= report.upper * (1.0 + 1e-10));
    }

    #[test]
    fn upper_constant_examples() {
        let single = SeparatedSet::from_reals(&[0.0]).unwrap();
        let c = upper_constant_c(&single, &default_probe(&single, 1).unwrap()).unwrap();
        assert!((c.value - SQRT_2).abs() < 1e-10);
        assert_eq!(c.y, vec![0.0]);

        let line = jittered_lattice(&JitterSpec { dim: 1, spacing: 1.0, jitter: 0.0, extent: 16.0, symmetric: true, seed: 0 }).unwrap();
        let c16 = upper_constant_c(&line, &default_probe(&line, 1).unwrap()).unwrap();
        let theta: f64 = (-40..=40).map(|k: i32| (-PI * (k * k) as f64 / 2.0).exp()).sum();
        assert!(c16.value >= SQRT_2 && c16.value <= SQRT_2 * theta + 1e-12);
        let oracle = SQRT_2 * (-16..=16).map(|k: i32| (-PI * (k * k) as f64 / 2.0).exp()).sum::<f64>();
        assert!((c16.value - oracle).abs() < 1e-10);
        assert!((c16.value - 2.0075).abs() < 1e-4);
        let wide = jittered_lattice(&JitterSpec { dim: 1, spacing: 1.0, jitter: 0.0, extent: 32.0, symmetric: true, seed: 0 }).unwrap();
        let c32 = upper_constant_c(&wide, &default_probe(&wide, 2).unwrap()).unwrap();
        assert!((c32.value - c16.value).abs() < 1e-12);
        assert!(c16.value >= c.value);
    }

    #[test]
    fn feichtinger_norm_examples() {
        let grid = make_grid(1, 512, 0.125).unwrap();
        let g = gaussian_window(&grid).unwrap();
        let n = feichtinger_norm(&g).unwrap();
        assert!((n.value - 2.0).abs() < 1e-6, "{}", n.value);
        assert!(n.converged);
        let scaled = feichtinger_norm(&g.scale(Complex64::new(0.0, -2.5))).unwrap();
        assert!((scaled.value - 2.5 * n.value).abs() < 1e-9);

        let mut wide = bump(&grid, 0.0, 2.0, 0.0);
        let s = 1.0 / wide.norm();
        wide = wide.scale(Complex64::new(s, 0.0));
        let coarse_grid = make_grid(1, 256, 0.125).unwrap();
        let mut wide_coarse = bump(&coarse_grid, 0.0, 2.0, 0.0);
        let s = 1.0 / wide_coarse.norm();
        wide_coarse = wide_coarse.scale(Complex64::new(s, 0.0));
        let a = feichtinger_norm(&wide).unwrap();
        let b = feichtinger_norm(&wide_coarse).unwrap();
        assert!(a.value > 2.0 && a.value.is_finite());
        assert!((a.value - b.value).abs() < 1e-6 * a.value);
    }

    #[test]
    fn phase_space_band_limit_is_time_limiting() {
        let grid = grid64();
        let g = gaussian_window(&grid).unwrap();
        let f = bump(&grid, 0.3, 1.2, 0.5);
        let box2 = SpectrumSet::boxed(vec![2.0, 1.5]).unwrap();
        let out = phase_space_band_limit(&f, &g, &box2).unwrap();
        let band = mask_spectrum(&forward(&g), &SpectrumSet::interval(2.0).unwrap()).unwrap();
        let c = band.norm_sqr() / g.norm_sqr();
        let expect = GridSignal::from_fn(grid.clone(), Domain::Time, |t| {
            if t[0].abs() <= 1.5 {
                let u = (t[0] - 0.3) / 1.2;
                Complex64::from_polar(c * (-PI * u * u).exp(), 2.0 * PI * 0.5 * t[0])
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!(out.relative_error(&expect) < 1e-10, "{}", out.relative_error(&expect));
    }

    #[test]
    fn stft_csv_header() {
        let grid = make_grid(1, 2, 1.0).unwrap();
        let mut buf = Vec::new();
        StftField::zeros(grid).write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,omega,re,im,abs\n"));
        assert_eq!(text.lines().count(), 5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn covariance_modulus(u in -16i64..16, eta in -10i64..10, xi in 0usize..64, wi in 0usize..64) {
            let grid = grid64();
            let g = gaussian_window(&grid).unwrap();
            let f = bump(&grid, -0.4, 0.9, 0.6);
            let ushift = u as f64 * 0.125;
            let freq = eta as f64 * grid.dual().spacing()[0];
            let moved = modulate(&translate(&f, &[ushift], false).unwrap(), &[freq]).unwrap();
            let a = stft_forward(&moved, &g).unwrap();
            let b = stft_forward(&f, &g).unwrap();
            let n = 64i64;
            let xs = ((xi as i64 - u).rem_euclid(n)) as usize;
            let ws = ((wi as i64 - eta).rem_euclid(n)) as usize;
            prop_assert!((a.get(xi, wi).norm() - b.get(xs, ws).norm()).abs() < 1e-12);
        }
    }
}
