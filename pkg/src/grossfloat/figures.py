"""Experiment sweeps behind the CLI's figure command.

Each figure is emitted as one CSV per curve (plot-ready, deterministic) plus
a rendered PNG of the error-versus-iteration picture.  Figure 1 compares the
single-precision emulated run against a native float64 Newton iteration;
figure 2 overlays the five fixed-precision runs and the dynamic run.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .config import ArithConfig
from .number import GrossFloat, from_fraction
from .profiler import OpCounter
from .rootfind import Polynomial, SolveTrace, newton_solve

__all__ = ["FigureResult", "quintic_benchmark", "run_figure"]

BENCHMARK_COEFFS = (1, -5, 10, -10, 5, -1)   # (x - 1)**5, root of multiplicity 5


@dataclass(frozen=True)
class FigureResult:
    csv_paths: tuple[str, ...]
    png_path: str | None


def quintic_benchmark(config: ArithConfig) -> tuple[Polynomial, GrossFloat]:
    """The ill-conditioned benchmark problem: (x-1)^5 from x0 = 2."""
    poly = Polynomial.from_coefficients(BENCHMARK_COEFFS, config)
    return poly, from_fraction(2, config)


def _true_errors(trace: SolveTrace) -> list[float]:
    out = []
    for s in trace.steps:
        err = abs(s.x.to_fraction() - 1)
        out.append(float(err))
    return out


def _write_curve(path: str, trace: SolveTrace, true_errs: list[float]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("step,err_est,err_true,prec,cum_mults,cum_adds\n")
        for s, te in zip(trace.steps, true_errs):
            fh.write(f"{s.k},{s.err:.17g},{te:.17g},{s.prec},"
                     f"{s.cum_mults},{s.cum_adds}\n")


def _float64_newton(max_iter: int) -> list[tuple[int, float, float]]:
    """Native double-precision reference run on the same problem."""
    rows = []
    x = 2.0
    for k in range(1, max_iter + 1):
        p = ((((x - 5) * x + 10) * x - 10) * x + 5) * x - 1
        dp = (((5 * x - 20) * x + 30) * x - 20) * x + 5
        if dp == 0 or p == 0:
            rows.append((k, 0.0, abs(x - 1.0)))
            break
        x_new = x - p / dp
        est = abs(x_new - x) / abs(x_new) if x_new else float("inf")
        rows.append((k, est, abs(x_new - 1.0)))
        x = x_new
    return rows


def _plot(png_path: str, curves: list[tuple[str, list[int], list[float]]],
          title: str) -> None:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, ks, errs in curves:
        style = "-" if label == "dynamic" else "--"
        ax.semilogy(ks, [max(e, 1e-300) for e in errs], style, label=label)
    ax.set_xlabel("iteration")
    ax.set_ylabel("relative error estimate")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=150)
    plt.close(fig)


def run_figure(figure_id: int, config: ArithConfig, outdir: str, *,
               tol: float = 0.0, max_iter: int = 200, safety: float = 1.0,
               render_png: bool = True) -> FigureResult:
    """Run the sweep behind one figure and write its CSV bundle (plus PNG).

    Figure 1: the single-precision emulated run next to a native float64 run.
    Figure 2: fixed runs at sections 0..max_section plus the dynamic run.
    """
    if figure_id not in (1, 2):
        raise ValueError("figure id must be 1 or 2")
    os.makedirs(outdir, exist_ok=True)
    poly, x0 = quintic_benchmark(config)
    csvs: list[str] = []
    curves: list[tuple[str, list[int], list[float]]] = []

    if figure_id == 1:
        trace = newton_solve(poly, x0, tol, mode="fixed", fixed_section=0,
                             max_iter=max_iter, safety=safety)
        path = os.path.join(outdir, "figure1_fixed0.csv")
        _write_curve(path, trace, _true_errors(trace))
        csvs.append(path)
        curves.append(("fixed q=0", [s.k for s in trace.steps],
                       [s.err for s in trace.steps]))
        native = _float64_newton(max_iter)
        npath = os.path.join(outdir, "figure1_float64.csv")
        with open(npath, "w", encoding="utf-8") as fh:
            fh.write("step,err_est,err_true\n")
            for k, est, te in native:
                fh.write(f"{k},{est:.17g},{te:.17g}\n")
        csvs.append(npath)
        curves.append(("float64", [r[0] for r in native], [r[1] for r in native]))
        title = "Newton on the quintuple root: single precision vs float64"
    else:
        for q in range(config.max_section + 1):
            trace = newton_solve(poly, x0, 0.0, mode="fixed", fixed_section=q,
                                 max_iter=max_iter, safety=safety,
                                 profiler=OpCounter())
            path = os.path.join(outdir, f"figure2_fixed{q}.csv")
            _write_curve(path, trace, _true_errors(trace))
            csvs.append(path)
            curves.append((f"fixed q={q}", [s.k for s in trace.steps],
                           [s.err for s in trace.steps]))
        trace = newton_solve(poly, x0, tol, mode="dynamic",
                             max_iter=max_iter, safety=safety,
                             profiler=OpCounter())
        path = os.path.join(outdir, "figure2_dynamic.csv")
        _write_curve(path, trace, _true_errors(trace))
        csvs.append(path)
        curves.append(("dynamic", [s.k for s in trace.steps],
                       [s.err for s in trace.steps]))
        title = "Newton on the quintuple root: fixed precisions vs dynamic"

    png_path = None
    if render_png:
        png_path = os.path.join(outdir, f"figure{figure_id}.png")
        _plot(png_path, curves, title)
    return FigureResult(tuple(csvs), png_path)
