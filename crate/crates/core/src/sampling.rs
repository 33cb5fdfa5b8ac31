//! Separated sampling sets in `ℝ^d` and in phase space `ℝ^{2d}`.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Finite point set with its measured separation (minimum pairwise
/// Euclidean distance, `+∞` for fewer than two points).
#[derive(Debug, Clone, PartialEq)]
pub struct SeparatedSet {
    dim: usize,
    points: Vec<Vec<f64>>,
    separation: f64,
}

impl SeparatedSet {
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("points must be finite".into()));
        }
        let separation = min_distance(&points);
        Ok(Self { dim, points, separation })
    }

    /// Convenience constructor for sets on the real line.
    pub fn from_reals(xs: &[f64]) -> Result<Self> {
        Self::new(1, xs.iter().map(|x| vec![*x]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn contains_point(&self, p: &[f64]) -> bool {
        self.points.iter().any(|q| q.as_slice() == p)
    }

    /// `x ∈ E ⟹ −x ∈ E`, with exact floating-point equality.
    pub fn is_symmetric(&self) -> bool {
        self.points.iter().all(|p| {
            let neg: Vec<f64> = p.iter().map(|v| -v).collect();
            self.contains_point(&neg)
        })
    }

    /// Every point of `self` is a point of `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points.iter().all(|p| other.contains_point(p))
    }

    /// Set with one point removed.
    pub fn without(&self, index: usize) -> Self {
        let mut points = self.points.clone();
        points.remove(index);
        Self::new(self.dim, points).expect("subset of a valid set")
    }

    /// Set with `extra` appended.
    pub fn with_points(&self, extra: &[Vec<f64>]) -> Result<Self> {
        let mut points = self.points.clone();
        points.extend_from_slice(extra);
        Self::new(self.dim, points)
    }

    /// One point per row, one column per coordinate, shortest round-trip decimals.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let header: Vec<String> = (0..self.dim).map(|i| format!("x{i}")).collect();
        w.write_record(&header)?;
        for p in &self.points {
            w.write_record(p.iter().map(|v| v.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let dim = r.headers()?.len();
        let mut points = Vec::new();
        for (row, rec) in r.records().enumerate() {
            let rec = rec?;
            let p = rec
                .iter()
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|e| {
                        Error::Format(format!("row {}: cannot parse {s:?}: {e}", row + 1))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            points.push(p);
        }
        Self::new(dim, points)
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn min_distance(points: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min(distance(a, b));
        }
    }
    best
}

/// All pairwise distances are at least `r`. Brute force.
pub fn is_separated(set: &SeparatedSet, r: f64) -> bool {
    set.separation() >= r
}

/// Parameters of [`jittered_lattice`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JitterSpec {
    pub dim: usize,
    /// Lattice spacing δ.
    pub spacing: f64,
    /// Maximum displacement η per axis, `0 ≤ η < δ/2`.
    pub jitter: f64,
    /// Lattice points `kδ` with `‖kδ‖_∞ ≤ extent` are kept.
    pub extent: f64,
    pub symmetric: bool,
    pub seed: u64,
}

/// Lattice `δℤ^d ∩ [−extent, extent]^d` with every point displaced by at most
/// `η` per axis. The displacement pattern depends only on the seed, so
/// sweeping `η` at a fixed seed scales one pattern. With `symmetric` the
/// lexicographically positive half is jittered and mirrored, and the origin
/// stays fixed, so `E = −E` exactly.
pub fn jittered_lattice(spec: &JitterSpec) -> Result<SeparatedSet> {
    let JitterSpec { dim, spacing, jitter, extent, symmetric, seed } = *spec;
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::InvalidParameter(format!("lattice spacing must be positive, got {spacing}")));
    }
    if !(jitter >= 0.0 && jitter < spacing / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "jitter must satisfy 0 <= jitter < spacing/2, got jitter={jitter}, spacing={spacing}"
        )));
    }
    if !(extent > 0.0 && extent.is_finite()) {
        return Err(Error::InvalidParameter(format!("extent must be positive, got {extent}")));
    }
    let kmax = (extent / spacing + 1e-9).floor() as i64;
    let side = (2 * kmax + 1) as usize;
    let total = side.pow(dim as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(total);
    let mut k = vec![0i64; dim];
    for flat in 0..total {
        let mut rem = flat;
        for axis in (0..dim).rev() {
            k[axis] = (rem % side) as i64 - kmax;
            rem /= side;
        }
        let offsets: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let sign = k.iter().find(|v| **v != 0).map_or(0, |v| v.signum());
        if symmetric && sign <= 0 {
            continue;
        }
        let p: Vec<f64> = k
            .iter()
            .zip(&offsets)
            .map(|(ki, u)| *ki as f64 * spacing + jitter * u)
            .collect();
        points.push(p);
    }
    if symmetric {
        let mirrored: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(|v| -v).collect()).collect();
        let mut all = Vec::with_capacity(2 * points.len() + 1);
        all.extend(mirrored.into_iter().rev());
        all.push(vec![0.0; dim]);
        all.append(&mut points);
        points = all;
    }
    SeparatedSet::new(dim, points)
}

/// Axis-aligned box `Π [lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Region {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidParameter("region bounds must have equal, nonzero length".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a <= b && a.is_finite() && b.is_finite())) {
            return Err(Error::InvalidParameter("region must be a bounded box with lo <= hi".into()));
        }
        Ok(Self { lo, hi })
    }

    /// `[−h, h]^dim`.
    pub fn cube(dim: usize, h: f64) -> Result<Self> {
        Self::new(vec![-h; dim], vec![h; dim])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }
}

/// Largest distance from a probe point in `region` to the nearest point of
/// `set`, probing at spacing `step` (endpoints included). Closed balls of this
/// radius centered at `set` cover every probe point; the true radius over the
/// region exceeds it by at most `step·√d/2`.
pub fn covering_radius_with_step(set: &SeparatedSet, region: &Region, step: f64) -> Result<f64> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    if region.dim() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: region.dim() });
    }
    if !(step > 0.0) {
        return Err(Error::InvalidParameter("probe step must be positive".into()));
    }
    let counts: Vec<usize> = region
        .lo
        .iter()
        .zip(&region.hi)
        .map(|(a, b)| ((b - a) / step + 1e-9).floor() as usize + 1)
        .collect();
    let total: usize = counts.iter().product();
    let mut probe = vec![0.0; set.dim()];
    let mut worst: f64 = 0.0;
    for flat in 0..total {
        let mut rem = flat;
        for axis in (0..set.dim()).rev() {
            let i = rem % counts[axis];
            rem /= counts[axis];
            probe[axis] = (region.lo[axis] + i as f64 * step).min(region.hi[axis]);
        }
        let nearest = set
            .points()
            .iter()
            .map(|p| distance(p, &probe))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
    }
    Ok(worst)
}

/// [`covering_radius_with_step`] with the probe step at 1/8 of the set's
/// separation (1/64 of the region's largest side for singletons).
pub fn covering_radius(set: &SeparatedSet, region: &Region) -> Result<f64> {
    let side = region
        .lo
        .iter()
        .zip(&region.hi)
        .map(|(a, b)| b - a)
        .fold(0.0, f64::max);
    let mut step = if set.separation().is_finite() {
        set.separation() / 8.0
    } else {
        side / 64.0
    };
    if !(step > 0.0) {
        step = 1.0 / 64.0;
    }
    covering_radius_with_step(set, region, step)
}
