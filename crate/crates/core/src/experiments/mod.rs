//! Batch experiments driven by a `key=value` config. Each run writes CSV
//! tables, a manifest and a plotting script into an output directory.

pub mod config;
mod plot;

use std::f64::consts::PI;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use config::{parse_config, ExperimentConfig, ExperimentKind};
use config::{EigenChoice, GaborSweepKind, SolverChoice, SpectrumShape};

use crate::balayage::{balayage_residual_curve, write_curve_csv, AtomicMeasure, BalayageOptions};
use crate::error::{Error, Result};
use crate::fourier::{forward, mask_spectrum, pw_project};
use crate::frames::{EigenMethod, FourierFrame, FrameReport, ReconstructMethod, ReconstructOptions};
use crate::gabor::{gabor_coefficients, lattice_cell_probe, phase_lattice, phase_space_constant, GaborSystem, PhaseLatticeSpec};
use crate::io::{write_signal, write_signal_csv};
use crate::lattice::{Domain, GridSignal, SpectrumSet, UniformGrid};
use crate::sampling::{jittered_lattice, JitterSpec, SeparatedSet};
use crate::stft::{
    default_probe, feichtinger_norm, gaussian_window, semidiscrete_bounds, semidiscrete_energy, stft_forward,
    stft_inverse, upper_constant_c,
};

/// Whether every numerical routine of a run met its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    Converged,
    Unconverged(Vec<String>),
}

impl RunStatus {
    fn flag(&mut self, what: String) {
        match self {
            RunStatus::Converged => *self = RunStatus::Unconverged(vec![what]),
            RunStatus::Unconverged(list) => list.push(what),
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, RunStatus::Converged)
    }
}

/// Outcome of [`run_experiment`].
#[derive(Debug, Clone)]
pub struct RunReport {
    pub status: RunStatus,
    /// Files written, in order; the manifest and plot script come last.
    pub files: Vec<PathBuf>,
    /// Scalar results echoed into the manifest.
    pub results: Vec<(String, String)>,
}

struct Run<'a> {
    cfg: &'a ExperimentConfig,
    out: &'a Path,
    status: RunStatus,
    files: Vec<PathBuf>,
    results: Vec<(String, String)>,
}

fn num(v: f64) -> String {
    v.to_string()
}

impl Run<'_> {
    fn table(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let path = self.out.join(name);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        self.files.push(path);
        Ok(())
    }

    fn file(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.out.join(name);
        let f = File::create(&path)?;
        self.files.push(path);
        Ok(BufWriter::new(f))
    }

    fn result(&mut self, key: &str, value: impl ToString) {
        self.results.push((key.to_string(), value.to_string()));
    }

    fn eigen(&self) -> EigenMethod {
        match self.cfg.eigen {
            EigenChoice::Auto => EigenMethod::Auto { threshold: self.cfg.dense_threshold },
            EigenChoice::Dense => EigenMethod::Dense,
            EigenChoice::Power => EigenMethod::PowerIteration,
        }
    }

    fn check_report(&mut self, what: &str, r: &FrameReport) {
        if !r.converged {
            self.status.flag(format!("{what}: eigenvalue iteration did not converge"));
        }
    }

    fn spectrum(&self) -> Result<SpectrumSet> {
        let base = match self.cfg.spectrum {
            SpectrumShape::Box => SpectrumSet::boxed(vec![self.cfg.band; self.cfg.dim])?,
            SpectrumShape::Ball => SpectrumSet::ball(self.cfg.dim, self.cfg.band)?,
        };
        base.enlarge(self.cfg.epsilon)
    }

    fn extent(&self, default_1d: f64, default_nd: f64) -> f64 {
        self.cfg.extent.unwrap_or(if self.cfg.dim == 1 { default_1d } else { default_nd })
    }

    fn lattice(&self, delta: f64, jitter: f64, extent: f64) -> Result<SeparatedSet> {
        jittered_lattice(&JitterSpec {
            dim: self.cfg.dim,
            spacing: delta,
            jitter,
            extent,
            symmetric: self.cfg.symmetric,
            seed: self.cfg.seed,
        })
    }

    /// Periodic grid matched to the lattice: `period = 2·kmax·δ + δ`,
    /// with `n` large enough to resolve `Λ` twice over.
    fn frame_grid(&self, extent: f64) -> Result<UniformGrid> {
        let delta = self.cfg.delta;
        let kmax = (extent / delta + 1e-9).floor();
        let period = self.cfg.period.unwrap_or((2.0 * kmax + 1.0) * delta);
        let reach = self.spectrum()?.bounding_half_extent().into_iter().fold(0.0, f64::max);
        let n = self.cfg.n.unwrap_or_else(|| {
            let m = (4.0 * reach * period).ceil() as usize;
            (m + m % 2).max(16)
        });
        UniformGrid::new(self.cfg.dim, n, period / n as f64)
    }

    fn signal_grid(&self, n: usize, spacing: f64) -> Result<UniformGrid> {
        UniformGrid::new(self.cfg.dim, self.cfg.n.unwrap_or(n), self.cfg.spacing.unwrap_or(spacing))
    }

    fn window(&self, grid: &UniformGrid) -> Result<GridSignal> {
        let g0 = gaussian_window(grid)?;
        let s = self.cfg.window_width;
        if s == 1.0 {
            return Ok(g0);
        }
        let g = GridSignal::from_fn(grid.clone(), Domain::Time, |t| {
            Complex64::new((-PI * t.iter().map(|v| v * v).sum::<f64>() / (s * s)).exp(), 0.0)
        });
        let norm = g.norm();
        Ok(g.scale(Complex64::new(1.0 / norm, 0.0)))
    }
}

/// Sum of three random modulated Gaussians centered in the middle quarter of the grid.
fn random_mixture(grid: &UniformGrid, rng: &mut ChaCha8Rng) -> GridSignal {
    let d = grid.dim();
    let quarter = grid.span(0) / 8.0;
    let nyq = grid.nyquist(0) / 8.0;
    let bumps: Vec<(Vec<f64>, f64, Vec<f64>, Complex64)> = (0..3)
        .map(|_| {
            let center = (0..d).map(|_| rng.gen_range(-quarter..quarter)).collect();
            let width = rng.gen_range(0.75..2.0);
            let freq = (0..d).map(|_| rng.gen_range(-nyq..nyq).clamp(-2.0, 2.0)).collect();
            let amp = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (center, width, freq, amp)
        })
        .collect();
    GridSignal::from_fn(grid.clone(), Domain::Time, |t| {
        bumps
            .iter()
            .map(|(c, w, f, a)| {
                let r2: f64 = t.iter().zip(c).map(|(ti, ci)| ((ti - ci) / w).powi(2)).sum();
                let phase: f64 = t.iter().zip(f).map(|(ti, fi)| ti * fi).sum();
                a * Complex64::from_polar((-PI * r2).exp(), 2.0 * PI * phase)
            })
            .sum()
    })
}

fn frame_bounds_sweep(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let extent = run.extent(32.0, 6.0);
    let grid = run.frame_grid(extent)?;
    let spectrum = run.spectrum()?;
    let jitters = cfg
        .jitters
        .clone()
        .unwrap_or_else(|| [0.0, 0.1, 0.2, 0.3, 0.4].iter().map(|j| j * cfg.delta).collect());
    let method = run.eigen();
    let rows: Vec<(f64, SeparatedSet, FrameReport)> = jitters
        .par_iter()
        .map(|&eta| {
            let set = run.lattice(cfg.delta, eta, extent)?;
            let report = FourierFrame::new(&set, &spectrum, &grid)?.bounds(method);
            Ok((eta, set, report))
        })
        .collect::<Result<_>>()?;
    let mut table = Vec::new();
    for (eta, set, r) in &rows {
        run.check_report(&format!("jitter {eta}"), r);
        table.push(vec![num(*eta), num(set.separation()), num(r.lower), num(r.upper), num(r.condition), r.iterations.to_string()]);
    }
    run.result("period", grid.span(0));
    run.result("n", grid.n());
    run.table("frame_bounds.csv", &["jitter", "separation", "A", "B", "condition", "iterations"], &table)
}

fn balayage_curve(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let extent = run.extent(8.0, 3.0);
    let family: Vec<SeparatedSet> = cfg.deltas.iter().map(|&d| run.lattice(d, 0.0, extent)).collect::<Result<_>>()?;
    let mu = AtomicMeasure::point_mass(vec![cfg.mu; cfg.dim]);
    let opts = BalayageOptions { density: cfg.density, regularization: cfg.regularization };
    let curve = balayage_residual_curve(&mu, &family, &run.spectrum()?, &opts)?;
    let w = run.file("balayage_curve.csv")?;
    write_curve_csv(&curve, w)
}

fn stft_roundtrip(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let grid = run.signal_grid(512, 1.0 / 16.0)?;
    let g = run.window(&grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let count = cfg.signals.unwrap_or(1);
    let signals: Vec<GridSignal> = (0..count).map(|_| random_mixture(&grid, &mut rng)).collect();
    let mut table = Vec::new();
    for (k, f) in signals.iter().enumerate() {
        let field = stft_forward(f, &g)?;
        let expect = f.norm_sqr() * g.norm_sqr();
        let moyal = (field.norm_sqr() - expect).abs() / expect;
        let back = stft_inverse(&field, &g)?;
        table.push(vec![k.to_string(), num(f.norm()), num(moyal), num(back.relative_error(f))]);
        if k == 0 && cfg.export_field {
            let w = run.file("stft_field.csv")?;
            field.write_csv(w)?;
        }
    }
    run.table("stft_roundtrip.csv", &["signal", "norm", "moyal_error", "roundtrip_error"], &table)
}

fn semidiscrete_check(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let grid = run.signal_grid(256, 0.125)?;
    let g = run.window(&grid)?;
    let spectrum = run.spectrum()?;
    let set = run.lattice(cfg.delta, cfg.jitter, run.extent(16.0, 4.0))?;
    let upper = upper_constant_c(&set, &default_probe(&set, cfg.probe_refine)?)?;
    let feich = feichtinger_norm(&g)?;
    if !feich.converged {
        run.status.flag(format!("window norm refinement delta {}", feich.refinement_delta));
    }
    let bounds = semidiscrete_bounds(&g, &set, &spectrum, run.eigen())?;
    run.check_report("semidiscrete bounds", &bounds);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let count = cfg.signals.unwrap_or(20);
    let signals: Vec<GridSignal> =
        (0..count).map(|_| pw_project(&random_mixture(&grid, &mut rng), &spectrum)).collect::<Result<_>>()?;
    let energies: Vec<f64> = signals.iter().map(|f| semidiscrete_energy(f, &g, &set)).collect::<Result<_>>()?;
    let table: Vec<Vec<String>> = signals
        .iter()
        .zip(&energies)
        .enumerate()
        .map(|(k, (f, e))| {
            let n2 = f.norm_sqr();
            let hi = upper.value * feich.value * n2;
            vec![k.to_string(), num(n2), num(*e), num(bounds.lower * n2), num(hi), num(hi / e)]
        })
        .collect();
    run.result("A", bounds.lower);
    run.result("B", bounds.upper);
    run.result("C_constant", upper.value);
    run.result("feichtinger_norm", feich.value);
    run.result("feichtinger_refinement_delta", feich.refinement_delta);
    run.table(
        "semidiscrete_check.csv",
        &["signal", "norm_sqr", "energy", "lower_bound", "upper_bound", "slack"],
        &table,
    )
}

fn gabor_sweep(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let grid = run.signal_grid(64, 0.125)?;
    let g = run.window(&grid)?;
    let feich = feichtinger_norm(&g)?;
    if !feich.converged {
        run.status.flag(format!("window norm refinement delta {}", feich.refinement_delta));
    }
    let rows: Vec<(f64, PhaseLatticeSpec)> = match cfg.sweep {
        GaborSweepKind::Lattice => cfg
            .lattices
            .iter()
            .map(|&(a, b)| (a * b, PhaseLatticeSpec { a, b, jitter: 0.0, seed: cfg.seed }))
            .collect(),
        GaborSweepKind::Jitter => cfg
            .phase_jitters
            .iter()
            .map(|&j| (j, PhaseLatticeSpec { a: cfg.a, b: cfg.b, jitter: j, seed: cfg.seed }))
            .collect(),
    };
    let test = GridSignal::from_fn(grid.clone(), Domain::Time, |t| {
        let r2: f64 = t.iter().map(|v| (v - 0.75).powi(2)).sum();
        Complex64::from_polar((-PI * r2).exp(), PI * t[0])
    });
    let tol = cfg.tol.unwrap_or(1e-10);
    let method = run.eigen();
    let results: Vec<(f64, FrameReport, f64, f64, bool)> = rows
        .par_iter()
        .map(|(label, spec)| {
            let points = phase_lattice(&grid, spec)?;
            let sys = GaborSystem::new(&g, &points)?;
            let report = sys.bounds(method);
            let c = phase_space_constant(&points, &lattice_cell_probe(cfg.dim, spec.a, spec.b)?)?;
            let rec = sys.reconstruct(&gabor_coefficients(&test, &sys)?, tol, cfg.max_iter)?;
            let ok = rec.converged || !report.is_frame();
            Ok((*label, report, c, rec.signal.relative_error(&test), ok))
        })
        .collect::<Result<_>>()?;
    let mut table = Vec::new();
    for (label, r, c, err, ok) in &results {
        run.check_report(&format!("row {label}"), r);
        if !ok {
            run.status.flag(format!("row {label}: reconstruction did not converge"));
        }
        table.push(vec![num(*label), num(r.lower), num(r.upper), num(r.condition), num(*c), num(feich.value), num(*err)]);
    }
    run.table(
        "gabor_sweep.csv",
        &["ab_product_or_jitter", "A", "B", "condition", "C_constant", "feichtinger_norm", "reconstruction_error"],
        &table,
    )
}

fn reconstruct(run: &mut Run) -> Result<()> {
    let cfg = run.cfg;
    let extent = run.extent(32.0, 6.0);
    let grid = run.frame_grid(extent)?;
    let spectrum = run.spectrum()?;
    let set = run.lattice(cfg.delta, cfg.jitter, extent)?;
    let frame = FourierFrame::new(&set, &spectrum, &grid)?;
    let bump = GridSignal::from_fn(grid.clone(), Domain::Time, |t| {
        Complex64::new((-PI * t.iter().map(|v| v * v).sum::<f64>() / 16.0).exp(), 0.0)
    });
    let truth = mask_spectrum(&forward(&bump), &spectrum)?;
    let samples = frame.analysis(&truth)?;
    let method = match cfg.method {
        SolverChoice::ConjugateGradient => ReconstructMethod::ConjugateGradient,
        SolverChoice::FrameAlgorithm => {
            let report = frame.bounds(run.eigen());
            run.check_report("frame bounds", &report);
            ReconstructMethod::FrameAlgorithm(report)
        }
    };
    let opts = ReconstructOptions { method, tol: cfg.tol.unwrap_or(1e-10), max_iter: cfg.max_iter };
    let rec = frame.reconstruct(&samples, &opts)?;
    if !rec.converged {
        run.status.flag(format!("reconstruction stopped at residual {} after {} iterations", rec.residual, rec.iterations));
    }
    let err = rec.signal.relative_error(&truth);
    run.table(
        "reconstruct.csv",
        &["iterations", "residual", "relative_error", "converged"],
        &[vec![rec.iterations.to_string(), num(rec.residual), num(err), rec.converged.to_string()]],
    )?;
    let w = run.file("reconstruction.csv")?;
    write_signal_csv(&rec.signal, w)?;
    let w = run.file("reconstruction.bin")?;
    write_signal(&rec.signal, w)
}

fn write_manifest(run: &Run, seconds: f64) -> Result<PathBuf> {
    let path = run.out.join("manifest.txt");
    let mut w = BufWriter::new(File::create(&path)?);
    writeln!(w, "toolkit_version={}", crate::VERSION)?;
    writeln!(w, "experiment={}", run.cfg.experiment)?;
    writeln!(w, "seed={}", run.cfg.seed)?;
    writeln!(w, "threads={}", rayon::current_num_threads())?;
    writeln!(w, "wall_time_seconds={seconds:.3}")?;
    match &run.status {
        RunStatus::Converged => writeln!(w, "status=ok")?,
        RunStatus::Unconverged(why) => {
            writeln!(w, "status=unconverged")?;
            for reason in why {
                writeln!(w, "unconverged={reason}")?;
            }
        }
    }
    writeln!(w, "\n[config]")?;
    for (k, v) in &run.cfg.entries {
        writeln!(w, "{k}={v}")?;
    }
    if !run.results.is_empty() {
        writeln!(w, "\n[results]")?;
        for (k, v) in &run.results {
            writeln!(w, "{k}={v}")?;
        }
    }
    writeln!(w, "\n[files]")?;
    for f in &run.files {
        if let Some(name) = f.file_name() {
            writeln!(w, "{}", name.to_string_lossy())?;
        }
    }
    w.flush()?;
    Ok(path)
}

/// Runs the configured experiment, writing its artifacts into `out`.
/// Unconverged numerics still produce artifacts; the report says which
/// parts failed.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    fs::create_dir_all(out)?;
    let start = Instant::now();
    let mut run = Run { cfg, out, status: RunStatus::Converged, files: Vec::new(), results: Vec::new() };
    match cfg.experiment {
        ExperimentKind::FrameBoundsSweep => frame_bounds_sweep(&mut run)?,
        ExperimentKind::BalayageCurve => balayage_curve(&mut run)?,
        ExperimentKind::StftRoundtrip => stft_roundtrip(&mut run)?,
        ExperimentKind::SemidiscreteCheck => semidiscrete_check(&mut run)?,
        ExperimentKind::GaborSweep => gabor_sweep(&mut run)?,
        ExperimentKind::Reconstruct => reconstruct(&mut run)?,
    }
    let script = out.join(format!("plot_{}.py", cfg.experiment.name().replace('-', "_")));
    fs::write(&script, plot::script(cfg.experiment))?;
    run.files.push(script);
    let manifest = write_manifest(&run, start.elapsed().as_secs_f64())?;
    run.files.push(manifest);
    Ok(RunReport { status: run.status, files: run.files, results: run.results })
}

/// Exit status of the command-line driver for a run result.
pub fn exit_code(result: &Result<RunReport>) -> i32 {
    match result {
        Ok(r) if r.status.is_converged() => 0,
        Ok(_) => 2,
        Err(Error::IllConditioned { .. } | Error::NotAFrame) => 2,
        Err(_) => 1,
    }
}

/// Convenience used by tests and the CLI: parse, apply overrides, run.
pub fn run_config_text(text: &str, out: Option<&Path>, seed: Option<u64>) -> Result<RunReport> {
    let mut cfg = parse_config(text)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let dir = out.map(Path::to_path_buf).or_else(|| cfg.out.clone()).unwrap_or_else(|| PathBuf::from("out"));
    run_experiment(&cfg, &dir)
}
