"""Figure rendering for the CLI report commands (opt-in via --plot)."""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

plt.rcParams.update(
    {
        "figure.figsize": (7.0, 4.5),
        "axes.grid": True,
        "grid.alpha": 0.3,
        "font.size": 11,
    }
)


def _save(fig, path: str) -> None:
    kwargs = {"dpi": 150, "bbox_inches": "tight"}
    if path.lower().endswith(".png"):
        kwargs["metadata"] = {"Software": None}  # keep bytes version-independent
    fig.savefig(path, **kwargs)
    plt.close(fig)


def plot_density_curves(
    lams: Sequence[float],
    g2_vals: Sequence[float],
    gue_vals: Sequence[float],
    poisson_vals: Sequence[float],
    path: str,
) -> None:
    fig, ax = plt.subplots()
    ax.plot(lams, g2_vals, label="limiting pair density", lw=2)
    ax.plot(lams, gue_vals, label="GUE", ls="--")
    ax.plot(lams, poisson_vals, label="Poisson", ls=":")
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel("pair correlation density")
    ax.legend()
    _save(fig, path)


def plot_histogram(
    edges: Sequence[float],
    densities: Sequence[float],
    path: str,
    curve: tuple[Sequence[float], Sequence[float]] | None = None,
) -> None:
    fig, ax = plt.subplots()
    ax.stairs(densities, edges, fill=True, alpha=0.4, label="empirical")
    if curve is not None:
        ax.plot(curve[0], curve[1], color="C3", lw=2, label="limiting density")
    ax.set_xlabel("scaled gap")
    ax.set_ylabel("density")
    ax.legend()
    _save(fig, path)


def plot_compare(
    edges: Sequence[float],
    empirical: Sequence[float],
    theoretical: Sequence[float],
    path: str,
) -> None:
    fig, (ax, axd) = plt.subplots(
        2, 1, sharex=True, height_ratios=[3, 1], figsize=(7.0, 5.5)
    )
    ax.stairs(empirical, edges, fill=True, alpha=0.4, label="empirical")
    ax.stairs(theoretical, edges, color="C3", lw=2, label="bin-averaged density")
    ax.set_ylabel("density")
    ax.legend()
    dev = [e - t for e, t in zip(empirical, theoretical)]
    axd.stairs(dev, edges, color="C2")
    axd.axhline(0.0, color="k", lw=0.8)
    axd.set_xlabel("scaled gap")
    axd.set_ylabel("deviation")
    _save(fig, path)


def plot_asymptotic(
    lams: Sequence[float], scaled_deviations: Sequence[float], path: str
) -> None:
    fig, ax = plt.subplots()
    ax.loglog(lams, scaled_deviations, "o-")
    ax.set_xlabel(r"$\lambda$")
    ax.set_ylabel(r"$\lambda\,|g_2(\lambda) - 1|$")
    _save(fig, path)
