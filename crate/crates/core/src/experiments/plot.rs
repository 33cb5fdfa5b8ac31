use super::ExperimentKind;

const HEADER: &str = "import csv
import sys
from pathlib import Path

import matplotlib
matplotlib.use(\"Agg\")
import matplotlib.pyplot as plt

HERE = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent


def load(name):
    with open(HERE / name, newline=\"\") as fh:
        rows = list(csv.DictReader(fh))
    return {k: [float(r[k]) if r[k] not in (\"true\", \"false\") else r[k] == \"true\" for r in rows] for k in rows[0]}


";

fn body(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::FrameBoundsSweep => {
            "t = load(\"frame_bounds.csv\")
fig, ax = plt.subplots()
ax.plot(t[\"jitter\"], t[\"A\"], \"o-\", label=\"A\")
ax.plot(t[\"jitter\"], t[\"B\"], \"s-\", label=\"B\")
ax.set_xlabel(\"jitter\")
ax.set_ylabel(\"frame bound\")
ax.legend()
fig.savefig(HERE / \"frame_bounds.png\", dpi=150)
"
        }
        ExperimentKind::BalayageCurve => {
            "t = load(\"balayage_curve.csv\")
fig, ax = plt.subplots()
ax.semilogy(t[\"separation\"], t[\"residual\"], \"o-\")
ax.set_xlabel(\"separation\")
ax.set_ylabel(\"relative residual\")
fig.savefig(HERE / \"balayage_curve.png\", dpi=150)
"
        }
        ExperimentKind::StftRoundtrip => {
            "t = load(\"stft_roundtrip.csv\")
fig, ax = plt.subplots()
ax.semilogy(t[\"signal\"], t[\"moyal_error\"], \"o\", label=\"energy identity\")
ax.semilogy(t[\"signal\"], t[\"roundtrip_error\"], \"s\", label=\"round trip\")
ax.set_xlabel(\"signal\")
ax.set_ylabel(\"relative error\")
ax.legend()
fig.savefig(HERE / \"stft_roundtrip.png\", dpi=150)
field = HERE / \"stft_field.csv\"
if field.exists():
    f = load(\"stft_field.csv\")
    fig, ax = plt.subplots()
    ax.tricontourf(f[\"x\"], f[\"omega\"], f[\"abs\"], levels=40)
    ax.set_xlabel(\"x\")
    ax.set_ylabel(\"omega\")
    fig.savefig(HERE / \"stft_field.png\", dpi=150)
"
        }
        ExperimentKind::SemidiscreteCheck => {
            "t = load(\"semidiscrete_check.csv\")
fig, ax = plt.subplots()
ax.plot(t[\"signal\"], [e / n for e, n in zip(t[\"energy\"], t[\"norm_sqr\"])], \"o\", label=\"energy\")
ax.plot(t[\"signal\"], [e / n for e, n in zip(t[\"lower_bound\"], t[\"norm_sqr\"])], \"_\", label=\"lower\")
ax.plot(t[\"signal\"], [e / n for e, n in zip(t[\"upper_bound\"], t[\"norm_sqr\"])], \"_\", label=\"upper\")
ax.set_xlabel(\"signal\")
ax.set_ylabel(\"energy / norm^2\")
ax.legend()
fig.savefig(HERE / \"semidiscrete_check.png\", dpi=150)
"
        }
        ExperimentKind::GaborSweep => {
            "t = load(\"gabor_sweep.csv\")
fig, ax = plt.subplots()
ax.plot(t[\"ab_product_or_jitter\"], t[\"A\"], \"o-\", label=\"A\")
ax.plot(t[\"ab_product_or_jitter\"], t[\"B\"], \"s-\", label=\"B\")
ax.plot(t[\"ab_product_or_jitter\"], t[\"C_constant\"], \"^--\", label=\"C\")
ax.set_xlabel(\"ab or jitter\")
ax.legend()
fig.savefig(HERE / \"gabor_sweep.png\", dpi=150)
"
        }
        ExperimentKind::Reconstruct => {
            "s = load(\"reconstruction.csv\")
fig, ax = plt.subplots()
ax.plot(s[\"w0\"], s[\"abs\"])
ax.set_xlabel(\"frequency\")
ax.set_ylabel(\"|reconstruction|\")
fig.savefig(HERE / \"reconstruction.png\", dpi=150)
"
        }
    }
}

pub(super) fn script(kind: ExperimentKind) -> String {
    format!("{HEADER}{}", body(kind))
}
