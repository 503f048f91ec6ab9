"""Optional matplotlib renderings of amoebas and free-energy integrands.

Figures are written straight to files; nothing here opens a window, so the
module is safe in headless environments.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .laurent import LaurentPoly2
from .models import AmoebaCloud


def plot_amoeba(cloud: AmoebaCloud, path: str,
                witness: tuple[float, float] | None = None, title: str = "") -> None:
    """Scatter plot of an amoeba point cloud, optionally marking a point of
    the complement (e.g. a gas-phase witness)."""
    fig, ax = plt.subplots(figsize=(6, 6))
    if len(cloud.points):
        ax.plot(cloud.points[:, 0], cloud.points[:, 1], ",", color="#1f77b4",
                rasterized=True)
    if witness is not None:
        ax.plot([witness[0]], [witness[1]], "r*", markersize=12)
    ax.set_xlabel("log |z|")
    ax.set_ylabel("log |w|")
    ax.set_aspect("equal", adjustable="datalim")
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def plot_torus_integrand(P: LaurentPoly2, path: str, grid: int = 256,
                         title: str = "") -> None:
    """Heatmap of log|P(e^{i th}, e^{i ph})| over the unit torus, the integrand
    whose mean value is the free energy."""
    thetas = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    z = np.exp(1j * thetas)[:, None]
    w = np.exp(1j * thetas)[None, :]
    vals = np.zeros((grid, grid), dtype=complex)
    for i, j, c in P.terms():
        vals += complex(c) * z**i * w**j
    mag = np.abs(vals)
    with np.errstate(divide="ignore"):
        img = np.log(mag)
    finite = img[np.isfinite(img)]
    floor = finite.min() if len(finite) else 0.0
    img = np.where(np.isfinite(img), img, floor)
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(img.T, origin="lower", extent=(0, 2 * np.pi, 0, 2 * np.pi),
                   cmap="viridis")
    fig.colorbar(im, ax=ax, label="log |P|")
    ax.set_xlabel("arg z")
    ax.set_ylabel("arg w")
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
