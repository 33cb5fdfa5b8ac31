//! Uniform grids, grid signals and compact spectrum sets.
//!
//! Every continuous integral in the toolkit is a Riemann sum on a
//! [`UniformGrid`]. A grid with `n` points per axis and spacing `Δ` covers
//! `[-nΔ/2, nΔ/2)` per axis; its dual grid has spacing `1/(nΔ)` and covers
//! `[-1/(2Δ), 1/(2Δ))`, so the two form an exact DFT pair. Grids are
//! centered on the origin and treated as one period of a torus.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Centered uniform grid on `ℝ^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformGrid {
    n: usize,
    spacing: Vec<f64>,
}

impl UniformGrid {
    /// Builds a `d`-dimensional grid with `n` points and spacing `spacing` on every axis.
    pub fn new(dim: usize, n: usize, spacing: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        Self::with_spacings(n, vec![spacing; dim])
    }

    /// Builds a grid with a per-axis spacing; the dimension is `spacings.len()`.
    pub fn with_spacings(n: usize, spacings: Vec<f64>) -> Result<Self> {
        if spacings.is_empty() {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "point count per axis must be even and at least 2, got {n}"
            )));
        }
        if let Some(s) = spacings.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(Error::InvalidGrid(format!("spacing must be positive, got {s}")));
        }
        Ok(Self { n, spacing: spacings })
    }

    pub fn dim(&self) -> usize {
        self.spacing.len()
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    /// Total number of points, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Quadrature weight of one cell, `Π Δ_i`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Side length `nΔ` of the covered box along `axis`.
    pub fn span(&self, axis: usize) -> f64 {
        self.n as f64 * self.spacing[axis]
    }

    /// The frequency grid paired with this one by the DFT.
    pub fn dual(&self) -> Self {
        let n = self.n as f64;
        Self {
            n: self.n,
            spacing: self.spacing.iter().map(|s| 1.0 / (n * s)).collect(),
        }
    }

    /// Concatenates the axes of two grids with equal `n`, e.g. time × frequency.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidGrid(format!(
                "cannot form product of grids with {} and {} points per axis",
                self.n, other.n
            )));
        }
        let mut spacing = self.spacing.clone();
        spacing.extend_from_slice(&other.spacing);
        Ok(Self { n: self.n, spacing })
    }

    /// Signed lattice index `k ∈ [-n/2, n/2)` of axis position `i`.
    pub fn axis_index(&self, i: usize) -> i64 {
        i as i64 - (self.n / 2) as i64
    }

    pub fn axis_coord(&self, axis: usize, i: usize) -> f64 {
        self.axis_index(i) as f64 * self.spacing[axis]
    }

    /// Coordinates of the point at flat (row-major) index `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.point_into(flat, &mut out);
        out
    }

    pub fn point_into(&self, flat: usize, out: &mut [f64]) {
        let mut rem = flat;
        for axis in (0..self.dim()).rev() {
            out[axis] = self.axis_coord(axis, rem % self.n);
            rem /= self.n;
        }
    }

    /// All grid points in row-major order.
    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Flat index of the point with signed lattice indices `k` (wrapped periodically).
    pub fn flat_index(&self, k: &[i64]) -> usize {
        let n = self.n as i64;
        k.iter().fold(0usize, |acc, &ki| {
            let i = (ki + n / 2).rem_euclid(n) as usize;
            acc * self.n + i
        })
    }

    /// Signed lattice indices of `x` if it lies on the grid lattice (within
    /// `1e-9` of a spacing multiple), otherwise `None`.
    pub fn lattice_indices(&self, x: &[f64]) -> Option<Vec<i64>> {
        x.iter()
            .zip(&self.spacing)
            .map(|(xi, s)| {
                let k = xi / s;
                let r = k.round();
                ((k - r).abs() <= 1e-9).then_some(r as i64)
            })
            .collect()
    }

    /// Largest representable |frequency| on the dual grid along `axis`.
    pub fn nyquist(&self, axis: usize) -> f64 {
        0.5 / self.spacing[axis]
    }
}

/// Builds a grid, rejecting odd `n` and nonpositive spacing.
pub fn make_grid(dim: usize, n: usize, spacing: f64) -> Result<UniformGrid> {
    UniformGrid::new(dim, n, spacing)
}

/// Whether a signal lives on a time grid or on a frequency (dual) grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Time,
    Frequency,
}

impl Domain {
    pub fn flipped(self) -> Self {
        match self {
            Domain::Time => Domain::Frequency,
            Domain::Frequency => Domain::Time,
        }
    }
}

/// Complex samples on a [`UniformGrid`], stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSignal {
    pub grid: UniformGrid,
    pub domain: Domain,
    pub values: Vec<Complex64>,
}

impl GridSignal {
    pub fn new(grid: UniformGrid, domain: Domain, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        Ok(Self { grid, domain, values })
    }

    pub fn zeros(grid: UniformGrid, domain: Domain) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, domain, values }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn<F>(grid: UniformGrid, domain: Domain, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        let mut p = vec![0.0; grid.dim()];
        let values = (0..grid.len())
            .map(|i| {
                grid.point_into(i, &mut p);
                f(&p)
            })
            .collect();
        Self { grid, domain, values }
    }

    /// Quadrature inner product `Π Δ · Σ a conj(b)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum();
        s * self.grid.cell_volume()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.grid.cell_volume() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// Quadrature L² norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let values = self.values.iter().map(|v| v * a).collect();
        Self { grid: self.grid.clone(), domain: self.domain, values }
    }

    pub fn add(&self, other: &Self) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Self { grid: self.grid.clone(), domain: self.domain, values }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Self { grid: self.grid.clone(), domain: self.domain, values }
    }

    /// `‖self − other‖ / ‖other‖`, or the absolute difference when `other` is zero.
    pub fn relative_error(&self, reference: &Self) -> f64 {
        let w = self.grid.cell_volume();
        let diff = (w * self.values.iter().zip(&reference.values).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>()).sqrt();
        let base = reference.norm();
        if base == 0.0 {
            diff
        } else {
            diff / base
        }
    }
}

/// Base shape of a spectrum set.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// `Π [-h_i, h_i]`.
    Box { half_extent: Vec<f64> },
    /// Closed Euclidean ball of `radius` about the origin in `ℝ^dim`.
    Ball { dim: usize, radius: f64 },
}

/// Compact, convex, origin-symmetric frequency set `Λ`, optionally enlarged
/// to `Λ_ε = {γ : dist(γ, Λ) ≤ ε}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSet {
    shape: Shape,
    epsilon: f64,
}

impl SpectrumSet {
    pub fn boxed(half_extent: Vec<f64>) -> Result<Self> {
        if half_extent.is_empty() {
            return Err(Error::InvalidParameter("box needs at least one axis".into()));
        }
        if half_extent.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::InvalidParameter("box half-widths must be positive".into()));
        }
        Ok(Self { shape: Shape::Box { half_extent }, epsilon: 0.0 })
    }

    /// Symmetric interval `[-h, h]`.
    pub fn interval(h: f64) -> Result<Self> {
        Self::boxed(vec![h])
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("ball dimension must be positive".into()));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter("ball radius must be positive".into()));
        }
        Ok(Self { shape: Shape::Ball { dim, radius }, epsilon: 0.0 })
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        match &self.shape {
            Shape::Box { half_extent } => half_extent.len(),
            Shape::Ball { dim, .. } => *dim,
        }
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }

    /// Euclidean distance from `gamma` to the set (zero inside).
    pub fn distance(&self, gamma: &[f64]) -> Result<f64> {
        self.check_dim(gamma.len())?;
        let base = match &self.shape {
            Shape::Box { half_extent } => gamma
                .iter()
                .zip(half_extent)
                .map(|(g, h)| (g.abs() - h).max(0.0).powi(2))
                .sum::<f64>()
                .sqrt(),
            Shape::Ball { radius, .. } => {
                let r = gamma.iter().map(|g| g * g).sum::<f64>().sqrt();
                (r - radius).max(0.0)
            }
        };
        Ok((base - self.epsilon).max(0.0))
    }

    /// `dist(γ, Λ) ≤ ε`.
    pub fn contains(&self, gamma: &[f64], eps: f64) -> Result<bool> {
        if !(eps >= 0.0) {
            return Err(Error::InvalidParameter(format!("epsilon must be nonnegative, got {eps}")));
        }
        Ok(self.distance(gamma)? <= eps)
    }

    /// Minkowski sum with the closed ε-ball. Intervals and balls stay in
    /// closed form; boxes in two or more dimensions carry ε separately.
    pub fn enlarge(&self, eps: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be nonnegative, got {eps}")));
        }
        let mut out = self.clone();
        match &mut out.shape {
            Shape::Ball { radius, .. } => *radius += eps,
            Shape::Box { half_extent } if half_extent.len() == 1 => half_extent[0] += eps,
            Shape::Box { .. } => out.epsilon += eps,
        }
        Ok(out)
    }

    /// Per-axis half-width of the smallest enclosing box.
    pub fn bounding_half_extent(&self) -> Vec<f64> {
        match &self.shape {
            Shape::Box { half_extent } => half_extent.iter().map(|h| h + self.epsilon).collect(),
            Shape::Ball { dim, radius } => vec![radius + self.epsilon; *dim],
        }
    }

    /// Rejects sets that reach the Nyquist frequency of `grid`'s dual.
    pub fn check_resolved_by(&self, grid: &UniformGrid) -> Result<()> {
        self.check_dim(grid.dim())?;
        for (axis, h) in self.bounding_half_extent().into_iter().enumerate() {
            let nyquist = grid.nyquist(axis);
            if h >= nyquist {
                return Err(Error::Aliasing { extent: h, nyquist });
            }
        }
        Ok(())
    }
}

/// `dist(γ, Λ) ≤ ε`.
pub fn spectrum_membership(set: &SpectrumSet, gamma: &[f64], eps: f64) -> Result<bool> {
    set.contains(gamma, eps)
}

/// `Λ_ε`, the closed ε-neighbourhood of `Λ`.
pub fn epsilon_enlarge(set: &SpectrumSet, eps: f64) -> Result<SpectrumSet> {
    set.enlarge(eps)
}
