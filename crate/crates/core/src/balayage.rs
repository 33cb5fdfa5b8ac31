//! Balayage as moment matching: sweep an atomic measure `μ` onto a sampling
//! set `E` by finding weights on `E` whose Fourier transform matches `μ̂` on a
//! discretization of `Λ` in the least-squares sense.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fourier::{cis, dot};
use crate::lattice::SpectrumSet;
use crate::sampling::SeparatedSet;

/// Default points per unit frequency length per dual-grid cell of the window
/// spanned by `E`.
pub const DEFAULT_POINTS_PER_CELL: f64 = 8.0;

/// Without regularization, systems with a larger condition estimate are refused.
pub const MAX_UNREGULARIZED_CONDITION: f64 = 1e12;

/// Finite sum of weighted point masses.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    dim: usize,
    points: Vec<Vec<f64>>,
    weights: Vec<Complex64>,
}

impl AtomicMeasure {
    pub fn new(dim: usize, points: Vec<Vec<f64>>, weights: Vec<Complex64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), found: weights.len() });
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        Ok(Self { dim, points, weights })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, points: Vec::new(), weights: Vec::new() }
    }

    /// Unit point mass `δ_x`.
    pub fn point_mass(x: Vec<f64>) -> Self {
        Self { dim: x.len(), points: vec![x], weights: vec![Complex64::new(1.0, 0.0)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn total_variation(&self) -> f64 {
        self.weights.iter().map(|w| w.norm()).sum()
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        Self { weights: self.weights.iter().map(|w| w * a).collect(), ..self.clone() }
    }

    /// `μ̂(γ) = Σ_k w_k e^{-2πi x_k·γ}`.
    pub fn transform_at(&self, gamma: &[f64]) -> Complex64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * cis(-2.0 * PI * dot(x, gamma)))
            .sum()
    }
}

/// `μ̂` at each frequency in `freqs`.
pub fn measure_transform(mu: &AtomicMeasure, freqs: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    if let Some(g) = freqs.iter().find(|g| g.len() != mu.dim) {
        return Err(Error::DimensionMismatch { expected: mu.dim, found: g.len() });
    }
    Ok(freqs.iter().map(|g| mu.transform_at(g)).collect())
}

/// Points `j/density` (`j` integer per axis) inside `Λ`. Anchoring at the
/// origin makes the discretizations of nested spectra nested.
pub fn spectrum_samples(spectrum: &SpectrumSet, density: f64) -> Result<Vec<Vec<f64>>> {
    if !(density > 0.0) {
        return Err(Error::InvalidParameter(format!("density must be positive, got {density}")));
    }
    let ext = spectrum.bounding_half_extent();
    let counts: Vec<i64> = ext.iter().map(|h| (h * density + 1e-9).floor() as i64).collect();
    let dim = ext.len();
    let mut out = Vec::new();
    let mut idx: Vec<i64> = counts.iter().map(|c| -c).collect();
    loop {
        let gamma: Vec<f64> = idx.iter().map(|&j| j as f64 / density).collect();
        if spectrum.contains(&gamma, 0.0)? {
            out.push(gamma);
        }
        let mut axis = dim;
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            if idx[axis] < counts[axis] {
                idx[axis] += 1;
                break;
            }
            idx[axis] = -counts[axis];
        }
    }
}

/// Frequency sampling density used when none is given: `8` points per
/// dual-grid cell of the smallest cube `[-T/2, T/2]^d` holding `E`.
pub fn default_density(points: &SeparatedSet) -> f64 {
    let reach = points
        .points()
        .iter()
        .flat_map(|p| p.iter().map(|c| c.abs()))
        .fold(0.0, f64::max);
    DEFAULT_POINTS_PER_CELL * (2.0 * reach).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BalayageOptions {
    /// Frequency samples per unit length along each axis; `None` uses [`default_density`].
    pub density: Option<f64>,
    /// Ridge weight; `None` uses `1e-10 · rows`. Zero is allowed for
    /// well-conditioned systems.
    pub regularization: Option<f64>,
}

/// Result of [`balayage_solve`].
#[derive(Debug, Clone)]
pub struct BalayageSolution {
    /// The swept measure, supported on `E` in the order of `E`.
    pub measure: AtomicMeasure,
    /// `‖μ̂ − ν̂‖ / ‖μ̂‖` in the quadrature norm of `L²(Λ)`; zero when `μ̂ = 0`.
    pub residual: f64,
    /// `‖μ̂ − ν̂‖` in the same norm.
    pub misfit: f64,
    /// `misfit² + regularization · ‖weights‖²`.
    pub objective: f64,
    /// Ratio of extreme singular values of the weighted system matrix.
    pub condition_estimate: f64,
    pub regularization: f64,
    pub rows: usize,
}

/// Weights on `E` minimizing `‖μ̂ − ν̂‖²_{L²(Λ_grid)} + reg·‖w‖²`, solved by SVD.
pub fn balayage_solve(
    mu: &AtomicMeasure,
    points: &SeparatedSet,
    spectrum: &SpectrumSet,
    opts: &BalayageOptions,
) -> Result<BalayageSolution> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let dim = points.dim();
    if mu.dim != dim || spectrum.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: if mu.dim != dim { mu.dim } else { spectrum.dim() } });
    }
    let density = opts.density.unwrap_or_else(|| default_density(points));
    let freqs = spectrum_samples(spectrum, density)?;
    let rows = freqs.len();
    let cols = points.len();
    let reg = opts.regularization.unwrap_or(1e-10 * rows as f64);
    if !(reg >= 0.0) {
        return Err(Error::InvalidParameter(format!("regularization must be >= 0, got {reg}")));
    }
    let sqrt_w = density.powf(-(dim as f64) / 2.0);

    let target = DVector::from_vec(measure_transform(mu, &freqs)?.into_iter().map(|v| v * sqrt_w).collect());
    let system = DMatrix::from_fn(rows, cols, |j, k| cis(-2.0 * PI * dot(&points.points()[k], &freqs[j])) * sqrt_w);

    let svd = system.clone().svd(true, true);
    let sv = &svd.singular_values;
    let s_max = sv.max();
    let s_min = sv.min();
    let condition_estimate = if s_min > 0.0 { s_max / s_min } else { f64::INFINITY };
    if reg == 0.0 && !(condition_estimate <= MAX_UNREGULARIZED_CONDITION) {
        return Err(Error::IllConditioned { condition: condition_estimate });
    }

    let u = svd.u.as_ref().expect("left singular vectors requested");
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let projected = u.adjoint() * &target;
    let filtered = DVector::from_iterator(
        sv.len(),
        sv.iter().zip(projected.iter()).map(|(&s, &c)| {
            let d = s * s + reg;
            if d > 0.0 {
                c * (s / d)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    );
    let weights = v_t.adjoint() * filtered;

    let misfit = (&target - &system * &weights).norm();
    let target_norm = target.norm();
    let residual = if target_norm == 0.0 { if misfit == 0.0 { 0.0 } else { f64::INFINITY } } else { misfit / target_norm };
    let w_norm_sqr = weights.norm_squared();
    let measure = AtomicMeasure::new(dim, points.points().to_vec(), weights.iter().copied().collect())?;
    Ok(BalayageSolution {
        measure,
        residual,
        misfit,
        objective: misfit * misfit + reg * w_norm_sqr,
        condition_estimate,
        regularization: reg,
        rows,
    })
}

/// One entry of a residual curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub set_size: usize,
    pub separation: f64,
    pub residual: f64,
    pub objective: f64,
    pub condition_estimate: f64,
}

/// Balayage residuals along a family of sampling sets ordered by inclusion.
/// All sets share one frequency discretization (that of the largest set
/// unless `opts.density` is given) and one regularization, so the
/// objective is nonincreasing along the family.
pub fn balayage_residual_curve(
    mu: &AtomicMeasure,
    family: &[SeparatedSet],
    spectrum: &SpectrumSet,
    opts: &BalayageOptions,
) -> Result<Vec<CurvePoint>> {
    let last = family.last().ok_or(Error::EmptySet)?;
    for (i, pair) in family.windows(2).enumerate() {
        if !pair[0].is_subset_of(&pair[1]) {
            return Err(Error::NotInclusionOrdered { index: i });
        }
    }
    let density = opts.density.unwrap_or_else(|| default_density(last));
    let rows = spectrum_samples(spectrum, density)?.len();
    let shared = BalayageOptions {
        density: Some(density),
        regularization: Some(opts.regularization.unwrap_or(1e-10 * rows as f64)),
    };
    family
        .par_iter()
        .map(|set| {
            let sol = balayage_solve(mu, set, spectrum, &shared)?;
            Ok(CurvePoint {
                set_size: set.len(),
                separation: set.separation(),
                residual: sol.residual,
                objective: sol.objective,
                condition_estimate: sol.condition_estimate,
            })
        })
        .collect()
}

/// CSV with columns `set_size, separation, residual, condition_estimate`.
pub fn write_curve_csv<W: Write>(curve: &[CurvePoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["set_size", "separation", "residual", "condition_estimate"])?;
    for p in curve {
        w.write_record([
            p.set_size.to_string(),
            p.separation.to_string(),
            p.residual.to_string(),
            p.condition_estimate.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
