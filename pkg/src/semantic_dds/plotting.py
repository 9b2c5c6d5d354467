"""SVG views of sweep curves and temporal profiles (regenerable from the CSVs)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .interventions import SemanticResult, SweepCurve  # noqa: E402

_SVG_OPTIONS = {"metadata": {"Date": None}}


def _save(fig, path: Path):
    with matplotlib.rc_context({"svg.hashsalt": "semantic-dds"}):
        fig.savefig(path, format="svg", **_SVG_OPTIONS)
    plt.close(fig)


def plot_sweep(curve: SweepCurve, result: SemanticResult, path: Path) -> Path:
    capacity = curve.column("capacity")
    viability = curve.column("viability")
    values = curve.column("value")

    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    ax.plot(capacity, viability, "o-", ms=3, lw=1, color="tab:blue")
    ax.axvline(result.s_epsilon, ls="--", color="tab:orange",
               label=f"$S_\\epsilon$ = {result.s_epsilon:.3f} bit/s")
    if result.meaningless_range is not None:
        lo, hi = result.meaningless_range
        inside = (values >= lo) & (values <= hi)
        ax.axvspan(capacity[inside].min(), capacity[inside].max(), color="pink", alpha=0.5,
                   label="meaningless range")
    ax.set_xlabel("channel capacity [bit/s]")
    ax.set_ylabel("viability V")
    ax.set_title(f"{curve.spec.parameter} in [{curve.spec.range_min:g}, {curve.spec.range_max:g}]")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, path)
    return path


def plot_temporal(profiles: dict, path: Path) -> Path:
    """``profiles`` maps parameter -> list of (tau, s_epsilon)."""
    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    for parameter, rows in profiles.items():
        taus = [1e3 * t for t, _ in rows]
        ax.plot(taus, [s for _, s in rows], "-", lw=1.2, label=parameter)
    ax.set_xlabel("tau [ms]")
    ax.set_ylabel("$S_\\epsilon(\\tau)$ [bit/s]")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, path)
    return path
