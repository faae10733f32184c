"""Figure builders over the benchmark CSV contract.

These read completed sweep CSVs (or polynomial dump CSVs) and draw; no
simulation happens here and the primary package is never imported.  Each
sweep figure also writes a JSON sidecar next to the image with the exact
numbers plotted, so downstream checks can validate the plot against the CSV.
"""

import csv
import json
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# version signature of the harness CSV body (header row v1)
SWEEP_HEADER_V1 = ("run_id,algorithm,a,eps,delta,beta,eta,mu,seed,a_hat,"
                   "abs_err,success,q_psi,q_pi,d_max,d_total,tosses,"
                   "final_state,wall_us")
POLY_HEADER = "x,P,p2"


class SchemaError(Exception):
    """Input file does not match the expected CSV contract."""


def read_sweep(path):
    with open(path) as f:
        header = f.readline().rstrip("\n")
        if header != SWEEP_HEADER_V1:
            raise SchemaError(f"{path}: unexpected sweep header {header!r}")
        rows = list(csv.DictReader(f, fieldnames=SWEEP_HEADER_V1.split(",")))
    if not rows:
        raise SchemaError(f"{path}: sweep CSV has no rows")
    return rows


def read_poly(path):
    with open(path) as f:
        header = f.readline().rstrip("\n")
        if header != POLY_HEADER:
            raise SchemaError(f"{path}: unexpected poly header {header!r}")
        rows = list(csv.DictReader(f, fieldnames=POLY_HEADER.split(",")))
    if not rows:
        raise SchemaError(f"{path}: poly CSV has no rows")
    xs = [float(r["x"]) for r in rows]
    values = [float(r["P"]) if r["P"] else None for r in rows]
    p2 = [float(r["p2"]) for r in rows]
    return xs, values, p2


def _sidecar(out_path, payload):
    side = str(out_path) + ".data.json"
    with open(side, "w") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
    return side


def _by_algorithm_eps(rows):
    grouped = {}
    for r in rows:
        grouped.setdefault(r["algorithm"], {}).setdefault(
            float(r["eps"]), []).append(float(r["q_pi"]))
    return grouped


def fig_q_vs_eps(inputs, out_path, style=None):
    """Log-log query complexity against accuracy: per-eps means plus the
    min/max band observed, one series per algorithm."""
    payload = {}
    fig, ax = plt.subplots(figsize=(7, 5))
    for path in inputs:
        for algo, cells in _by_algorithm_eps(read_sweep(path)).items():
            eps = sorted(cells, reverse=True)
            means = [sum(cells[e]) / len(cells[e]) for e in eps]
            lows = [min(cells[e]) for e in eps]
            highs = [max(cells[e]) for e in eps]
            ax.plot(eps, means, "o-", label=algo)
            ax.fill_between(eps, lows, highs, alpha=0.25)
            payload[algo] = {"eps": eps, "mean_q_pi": means,
                             "min_q_pi": lows, "max_q_pi": highs}
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.invert_xaxis()
    ax.set_xlabel("target accuracy")
    ax.set_ylabel("oracle queries")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return _sidecar(out_path, payload)


def fig_q_vs_a(inputs, out_path, style=None):
    """Violin plot of the query count distribution for each amplitude."""
    cells = {}
    for path in inputs:
        for r in read_sweep(path):
            cells.setdefault((r["algorithm"], float(r["a"])), []).append(
                float(r["q_pi"]))
    keys = sorted(cells)
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.violinplot([cells[k] for k in keys], showmeans=True)
    ax.set_xticks(range(1, len(keys) + 1))
    ax.set_xticklabels([f"{k[0]}\na={k[1]:g}" for k in keys], fontsize=8)
    ax.set_ylabel("oracle queries")
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return _sidecar(out_path, {
        f"{k[0]}|a={k[1]!r}": {"mean_q_pi": sum(v) / len(v), "n": len(v)}
        for k, v in cells.items()})


def fig_poly(inputs, out_path, style=None):
    """Value and squared-magnitude curves of dumped polynomials."""
    fig, ax = plt.subplots(figsize=(7, 5))
    for path in inputs:
        xs, values, p2 = read_poly(path)
        label = str(path).rsplit("/", 1)[-1]
        if all(v is not None for v in values):
            ax.plot(xs, values, label=f"{label}: P")
        ax.plot(xs, p2, "--", label=f"{label}: |P|^2")
    ax.set_xlabel("x")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return None


def fig_amppolys(inputs, out_path, style=None):
    """Sketch of the fixed-point pair: |J|^2 pinned low left of the
    threshold, |K|^2 pinned high right of it."""
    if len(inputs) != 2:
        raise SchemaError("amppolys needs two dump files: J then K")
    style = style or {}
    eta = float(style.get("eta", 0.1))
    kappa = float(style.get("kappa", 0.25))
    fig, ax = plt.subplots(figsize=(7, 4))
    for path, name in zip(inputs, ("|J|^2", "|K|^2")):
        xs, _, p2 = read_poly(path)
        ax.plot(xs, p2, label=name)
    ax.axhline(eta, ls=":", c="gray")
    ax.axhline(1 - eta, ls=":", c="gray")
    ax.axvline(kappa, ls=":", c="gray")
    ax.axvline(math.sqrt(1 - kappa ** 2), ls=":", c="gray")
    ax.set_xlabel("x")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return None


def fig_poly_invert(inputs, out_path, style=None):
    """A squared polynomial over a confidence interval with the bias window
    and its preimage marked."""
    style = style or {}
    fig, ax = plt.subplots(figsize=(7, 4))
    for path in inputs:
        xs, _, p2 = read_poly(path)
        ax.plot(xs, p2, label="|P|^2")
    for key, color in (("p_min", "tab:orange"), ("p_max", "tab:orange")):
        if key in style:
            ax.axhline(float(style[key]), ls="--", c=color)
    ax.set_xlabel("a")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return None


FIGURES = {
    "q_vs_eps": fig_q_vs_eps,
    "q_vs_a": fig_q_vs_a,
    "poly": fig_poly,
    "amppolys": fig_amppolys,
    "hybridpoly": fig_poly,
    "erfproperties": fig_poly,
    "poly_invert": fig_poly_invert,
}
