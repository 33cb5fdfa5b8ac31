//! `key=value` experiment configuration.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The experiments the driver can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    FrameBoundsSweep,
    BalayageCurve,
    StftRoundtrip,
    SemidiscreteCheck,
    GaborSweep,
    Reconstruct,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::FrameBoundsSweep,
        ExperimentKind::BalayageCurve,
        ExperimentKind::StftRoundtrip,
        ExperimentKind::SemidiscreteCheck,
        ExperimentKind::GaborSweep,
        ExperimentKind::Reconstruct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::FrameBoundsSweep => "frame-bounds-sweep",
            ExperimentKind::BalayageCurve => "balayage-curve",
            ExperimentKind::StftRoundtrip => "stft-roundtrip",
            ExperimentKind::SemidiscreteCheck => "semidiscrete-check",
            ExperimentKind::GaborSweep => "gabor-sweep",
            ExperimentKind::Reconstruct => "reconstruct",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown experiment '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumShape {
    Box,
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverChoice {
    ConjugateGradient,
    FrameAlgorithm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenChoice {
    Auto,
    Dense,
    Power,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaborSweepKind {
    Lattice,
    Jitter,
}

/// Recognized keys and their help text.
pub const KEYS: &[(&str, &str)] = &[
    ("experiment", "experiment to run (required): frame-bounds-sweep | balayage-curve | stft-roundtrip | semidiscrete-check | gabor-sweep | reconstruct"),
    ("out", "output directory (overridden by --out; default: out)"),
    ("seed", "RNG seed for jitter and random test signals (overridden by --seed; default 0)"),
    ("dim", "space dimension d (default 1)"),
    ("n", "grid points per axis, even"),
    ("spacing", "time grid spacing; for frame experiments derived from period/n"),
    ("period", "length nΔ of the periodic time window of frame experiments (default: 2·extent + delta)"),
    ("delta", "sampling lattice spacing δ (default 1)"),
    ("jitter", "maximum per-axis displacement η of the lattice points, 0 ≤ η < δ/2 (default 0)"),
    ("jitters", "comma-separated η values for frame-bounds-sweep (default 0,0.1,0.2,0.3,0.4)"),
    ("extent", "lattice points with ‖kδ‖∞ ≤ extent are kept"),
    ("symmetric", "mirror the jitter so that E = −E (default true)"),
    ("band", "half-width (box) or radius (ball) of the spectrum Λ (default 0.5)"),
    ("spectrum", "shape of Λ: box | ball (default box)"),
    ("epsilon", "enlargement ε ≥ 0 of Λ (default 0)"),
    ("window", "analysis window: gaussian (default)"),
    ("window_width", "width s of the window e^{-π t²/s²}, normalized (default 1, i.e. G₀)"),
    ("tol", "relative residual target of iterative solvers (default 1e-10)"),
    ("max_iter", "iteration cap of iterative solvers (default 500)"),
    ("method", "reconstruction solver: cg | frame-algorithm (default cg)"),
    ("eigen", "frame-bound eigensolver: auto | dense | power (default auto)"),
    ("dense_threshold", "largest dimension solved densely under eigen=auto (default 512)"),
    ("density", "balayage frequency samples per unit length (default: 8 per dual-grid cell)"),
    ("regularization", "balayage ridge weight ≥ 0 (default 1e-10 · rows)"),
    ("mu", "location of the point mass swept by balayage-curve (default 0.3)"),
    ("deltas", "comma-separated lattice spacings of the balayage-curve family, coarsest first (default 2,1,0.5)"),
    ("signals", "number of random test signals (default 1 for stft-roundtrip, 20 for semidiscrete-check)"),
    ("export_field", "stft-roundtrip: also write the STFT of the first signal (default false)"),
    ("sweep", "gabor-sweep axis: lattice | jitter (default lattice)"),
    ("lattices", "gabor-sweep lattice list as AxB pairs (default 0.5x0.5,0.5x1,2x1)"),
    ("a", "time step of the phase-space lattice for sweep=jitter (default 0.5)"),
    ("b", "frequency step of the phase-space lattice for sweep=jitter (default 1)"),
    ("phase_jitters", "comma-separated phase-space jitters for sweep=jitter (default 0,0.05,0.1)"),
    ("probe_refine", "refinement factor of the probe grid for the upper constant (default 1)"),
];

/// Fully parsed configuration. Unset optional fields take per-experiment
/// defaults when the experiment runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// `(key, value)` in file order, for the manifest.
    pub entries: Vec<(String, String)>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub dim: usize,
    pub n: Option<usize>,
    pub spacing: Option<f64>,
    pub period: Option<f64>,
    pub delta: f64,
    pub jitter: f64,
    pub jitters: Option<Vec<f64>>,
    pub extent: Option<f64>,
    pub symmetric: bool,
    pub band: f64,
    pub spectrum: SpectrumShape,
    pub epsilon: f64,
    pub window_width: f64,
    pub tol: Option<f64>,
    pub max_iter: usize,
    pub method: SolverChoice,
    pub eigen: EigenChoice,
    pub dense_threshold: usize,
    pub density: Option<f64>,
    pub regularization: Option<f64>,
    pub mu: f64,
    pub deltas: Vec<f64>,
    pub signals: Option<usize>,
    pub export_field: bool,
    pub sweep: GaborSweepKind,
    pub lattices: Vec<(f64, f64)>,
    pub a: f64,
    pub b: f64,
    pub phase_jitters: Vec<f64>,
    pub probe_refine: usize,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Config { line, message: message.into() }
}

fn num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| err(line, format!("{key}: cannot parse '{v}'")))
}

fn list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    let out: Vec<f64> = v.split(',').map(|s| num(line, key, s.trim())).collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(err(line, format!("{key}: empty list")));
    }
    Ok(out)
}

fn flag(line: usize, key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(err(line, format!("{key}: expected true or false, got '{v}'"))),
    }
}

fn pairs(line: usize, key: &str, v: &str) -> Result<Vec<(f64, f64)>> {
    v.split(',')
        .map(|item| {
            let (a, b) = item
                .trim()
                .split_once('x')
                .ok_or_else(|| err(line, format!("{key}: expected AxB, got '{item}'")))?;
            Ok((num(line, key, a.trim())?, num(line, key, b.trim())?))
        })
        .collect()
}

/// Parses `key=value` lines; `#` starts a comment. Unknown or repeated
/// keys and out-of-range values are reported with their line number.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig {
        experiment: ExperimentKind::FrameBoundsSweep,
        entries: Vec::new(),
        out: None,
        seed: 0,
        dim: 1,
        n: None,
        spacing: None,
        period: None,
        delta: 1.0,
        jitter: 0.0,
        jitters: None,
        extent: None,
        symmetric: true,
        band: 0.5,
        spectrum: SpectrumShape::Box,
        epsilon: 0.0,
        window_width: 1.0,
        tol: None,
        max_iter: 500,
        method: SolverChoice::ConjugateGradient,
        eigen: EigenChoice::Auto,
        dense_threshold: crate::frames::DENSE_DIMENSION_THRESHOLD,
        density: None,
        regularization: None,
        mu: 0.3,
        deltas: vec![2.0, 1.0, 0.5],
        signals: None,
        export_field: false,
        sweep: GaborSweepKind::Lattice,
        lattices: vec![(0.5, 0.5), (0.5, 1.0), (2.0, 1.0)],
        a: 0.5,
        b: 1.0,
        phase_jitters: vec![0.0, 0.05, 0.1],
        probe_refine: 1,
    };
    let mut experiment = None;
    let mut seen: Vec<(String, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected key=value, got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.iter().any(|(k, _)| *k == key) {
            return Err(err(line, format!("unknown key '{key}'")));
        }
        if let Some((_, first)) = seen.iter().find(|(k, _)| k == key) {
            return Err(err(line, format!("key '{key}' already set on line {first}")));
        }
        seen.push((key.to_string(), line));
        cfg.entries.push((key.to_string(), value.to_string()));
        match key {
            "experiment" => experiment = Some(value.parse::<ExperimentKind>().map_err(|m| err(line, m))?),
            "out" => cfg.out = Some(PathBuf::from(value)),
            "seed" => cfg.seed = num(line, key, value)?,
            "dim" => cfg.dim = num(line, key, value)?,
            "n" => cfg.n = Some(num(line, key, value)?),
            "spacing" => cfg.spacing = Some(num(line, key, value)?),
            "period" => cfg.period = Some(num(line, key, value)?),
            "delta" => cfg.delta = num(line, key, value)?,
            "jitter" => cfg.jitter = num(line, key, value)?,
            "jitters" => cfg.jitters = Some(list(line, key, value)?),
            "extent" => cfg.extent = Some(num(line, key, value)?),
            "symmetric" => cfg.symmetric = flag(line, key, value)?,
            "band" => cfg.band = num(line, key, value)?,
            "spectrum" => {
                cfg.spectrum = match value {
                    "box" => SpectrumShape::Box,
                    "ball" => SpectrumShape::Ball,
                    _ => return Err(err(line, format!("spectrum: expected box or ball, got '{value}'"))),
                }
            }
            "epsilon" => cfg.epsilon = num(line, key, value)?,
            "window" => {
                if value != "gaussian" {
                    return Err(err(line, format!("window: only 'gaussian' is available, got '{value}'")));
                }
            }
            "window_width" => cfg.window_width = num(line, key, value)?,
            "tol" => cfg.tol = Some(num(line, key, value)?),
            "max_iter" => cfg.max_iter = num(line, key, value)?,
            "method" => {
                cfg.method = match value {
                    "cg" | "conjugate-gradient" => SolverChoice::ConjugateGradient,
                    "frame-algorithm" => SolverChoice::FrameAlgorithm,
                    _ => return Err(err(line, format!("method: expected cg or frame-algorithm, got '{value}'"))),
                }
            }
            "eigen" => {
                cfg.eigen = match value {
                    "auto" => EigenChoice::Auto,
                    "dense" => EigenChoice::Dense,
                    "power" => EigenChoice::Power,
                    _ => return Err(err(line, format!("eigen: expected auto, dense or power, got '{value}'"))),
                }
            }
            "dense_threshold" => cfg.dense_threshold = num(line, key, value)?,
            "density" => cfg.density = Some(num(line, key, value)?),
            "regularization" => cfg.regularization = Some(num(line, key, value)?),
            "mu" => cfg.mu = num(line, key, value)?,
            "deltas" => cfg.deltas = list(line, key, value)?,
            "signals" => cfg.signals = Some(num(line, key, value)?),
            "export_field" => cfg.export_field = flag(line, key, value)?,
            "sweep" => {
                cfg.sweep = match value {
                    "lattice" => GaborSweepKind::Lattice,
                    "jitter" => GaborSweepKind::Jitter,
                    _ => return Err(err(line, format!("sweep: expected lattice or jitter, got '{value}'"))),
                }
            }
            "lattices" => cfg.lattices = pairs(line, key, value)?,
            "a" => cfg.a = num(line, key, value)?,
            "b" => cfg.b = num(line, key, value)?,
            "phase_jitters" => cfg.phase_jitters = list(line, key, value)?,
            "probe_refine" => cfg.probe_refine = num(line, key, value)?,
            _ => unreachable!("key list and match arms agree"),
        }
    }

    let at = |key: &str| seen.iter().find(|(k, _)| k == key).map_or(0, |(_, l)| *l);
    validate(&cfg, &at)?;
    cfg.experiment = experiment.ok_or_else(|| err(0, "experiment key required"))?;
    Ok(cfg)
}

fn validate(cfg: &ExperimentConfig, at: &dyn Fn(&str) -> usize) -> Result<()> {
    if let Some(n) = cfg.n {
        if n < 2 || n % 2 != 0 {
            return Err(err(at("n"), format!("n must be even and at least 2, got {n}")));
        }
    }
    if cfg.dim == 0 || cfg.dim > 3 {
        return Err(err(at("dim"), "dim must be 1, 2 or 3"));
    }
    let positive = |key: &str, v: Option<f64>| -> Result<()> {
        match v {
            Some(x) if !(x > 0.0 && x.is_finite()) => Err(err(at(key), format!("{key} must be positive"))),
            _ => Ok(()),
        }
    };
    positive("spacing", cfg.spacing)?;
    positive("period", cfg.period)?;
    positive("delta", Some(cfg.delta))?;
    positive("extent", cfg.extent)?;
    positive("band", Some(cfg.band))?;
    positive("window_width", Some(cfg.window_width))?;
    positive("tol", cfg.tol)?;
    positive("density", cfg.density)?;
    positive("a", Some(cfg.a))?;
    positive("b", Some(cfg.b))?;
    if !(cfg.epsilon >= 0.0) {
        return Err(err(at("epsilon"), "epsilon must be >= 0"));
    }
    if let Some(r) = cfg.regularization {
        if !(r >= 0.0) {
            return Err(err(at("regularization"), "regularization must be >= 0"));
        }
    }
    let jitter_ok = |eta: f64| eta >= 0.0 && eta < cfg.delta / 2.0;
    if !jitter_ok(cfg.jitter) {
        return Err(err(at("jitter"), "jitter must be < delta/2"));
    }
    if let Some(js) = &cfg.jitters {
        if !js.iter().all(|&j| jitter_ok(j)) {
            return Err(err(at("jitters"), "jitter must be < delta/2"));
        }
    }
    if cfg.max_iter == 0 {
        return Err(err(at("max_iter"), "max_iter must be at least 1"));
    }
    if cfg.deltas.iter().any(|d| !(*d > 0.0)) {
        return Err(err(at("deltas"), "deltas must be positive"));
    }
    if cfg.lattices.iter().any(|(a, b)| !(*a > 0.0 && *b > 0.0)) {
        return Err(err(at("lattices"), "lattice steps must be positive"));
    }
    if cfg.phase_jitters.iter().any(|j| !(*j >= 0.0 && *j < cfg.a.min(cfg.b) / 2.0)) {
        return Err(err(at("phase_jitters"), "phase jitter must be < min(a, b)/2"));
    }
    if cfg.probe_refine == 0 {
        return Err(err(at("probe_refine"), "probe_refine must be at least 1"));
    }
    Ok(())
}

/// Help text listing every key.
pub fn keys_help() -> String {
    let width = KEYS.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::from("Config keys (key=value, one per line, '#' starts a comment):\n");
    for (k, d) in KEYS {
        s.push_str(&format!("  {k:<width$}  {d}\n"));
    }
    s
}
