#![allow(dead_code)]

use std::f64::consts::PI;

use balayage_frames::fourier::forward;
use balayage_frames::{Domain, GridSignal, SeparatedSet, UniformGrid};
use num_complex::Complex64;
use rand::Rng;

pub fn random_signal<R: Rng>(grid: &UniformGrid, rng: &mut R) -> GridSignal {
    let values = (0..grid.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    GridSignal::new(grid.clone(), Domain::Time, values).unwrap()
}

/// A few modulated Gaussians near the origin.
pub fn gaussian_mixture<R: Rng>(grid: &UniformGrid, rng: &mut R) -> GridSignal {
    let bumps: Vec<(f64, f64, f64, Complex64)> = (0..3)
        .map(|_| {
            (
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.75..2.0),
                rng.gen_range(-2.0..2.0),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    GridSignal::from_fn(grid.clone(), Domain::Time, |t| {
        bumps
            .iter()
            .map(|(c, w, f, a)| a * Complex64::from_polar((-PI * ((t[0] - c) / w).powi(2)).exp(), 2.0 * PI * f * t[0]))
            .sum()
    })
}

/// `Σ_{x∈E} ∫ |V_ĝ f̂(ω, −x)|² dω` on a 1-D grid, by direct summation over
/// the dual grid with periodic frequency shifts.
pub fn frequency_side_energy(f: &GridSignal, g: &GridSignal, points: &SeparatedSet) -> f64 {
    let ff = forward(f);
    let gg = forward(g);
    let dual = ff.grid.clone();
    let n = dual.n();
    let dw = dual.spacing()[0];
    let mut total = 0.0;
    for x in points.points() {
        let phases: Vec<Complex64> = (0..n).map(|i| Complex64::from_polar(1.0, 2.0 * PI * x[0] * dual.axis_coord(0, i))).collect();
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, (fv, ph)) in ff.values.iter().zip(&phases).enumerate() {
                let shifted = (i + n - j + n / 2) % n;
                acc += fv * gg.values[shifted].conj() * ph;
            }
            total += (acc * dw).norm_sqr() * dw;
        }
    }
    total
}
