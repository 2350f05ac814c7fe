"""Figure rendering for the CLI report paths.

Each CLI command that writes delimited data can also render the matching
figure next to it.  Rendering is presentation only: every number on a figure
is also in the CSV/JSON outputs, which remain the canonical interchange.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evans import EvansScan
from .k2atlas import AtlasGrid
from .kernels import Kernel, KernelClassReport
from .pulse import PhasePortrait


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_threshold_diagram(
    kernel: Kernel,
    report: KernelClassReport,
    zeros,
    alpha: float,
    theta: float,
    path: str | Path,
    window: float | None = None,
) -> Path:
    """Kernel profile with the running threshold curve and checked crossings."""
    if window is None:
        window = min(kernel.default_window(), 6.0 * np.pi / max(kernel.envelope[1], 0.2))
    xs = np.linspace(-window, window, 1201)
    running = alpha * kernel.cdf(xs)  # equals alpha/2 - alpha*int_x^0 K

    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(xs, kernel.eval(xs), "b-", lw=1.2, label="kernel")
    ax.plot(xs, running, "k:", lw=1.2, label="running threshold integral")
    ax.axhline(theta, color="gray", lw=0.8, ls="--", label="threshold")
    ax.axhline(0.0, color="gray", lw=0.5)
    checked_left = {m.crossing_index for m in report.threshold.margins if m.side == "left"}
    checked_right = {m.crossing_index for m in report.threshold.margins if m.side == "right"}
    for idx, (loc, _) in enumerate(zeros.left_crossings, start=1):
        if idx in checked_left and loc <= window:
            ax.plot(-loc, alpha * float(kernel.cdf(-loc)), "ro", ms=5)
    for idx, (loc, _) in enumerate(zeros.right_crossings, start=1):
        if idx in checked_right and loc <= window:
            ax.plot(loc, alpha * float(kernel.cdf(loc)), "ks", ms=5, fillstyle="none")
    ax.set_xlabel("x")
    ax.set_title(f"class {report.label}, wave-speed condition {report.wave_speed.label}")
    ax.legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def render_phi_profile(samples, level: float, path: str | Path, label: str = "") -> Path:
    mus = [m for m, _ in samples]
    phis = [p for _, p in samples]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(mus, phis, "b-", lw=1.3)
    ax.axhline(level, color="gray", ls="--", lw=0.9, label="compatibility level")
    ax.axhline(0.5, color="gray", ls=":", lw=0.7)
    ax.set_xlabel("wave speed")
    ax.set_ylabel("speed index")
    if label:
        ax.set_title(label)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def render_front_profile(rows, theta: float, path: str | Path, label: str = "") -> Path:
    zs = [r[0] for r in rows]
    us = [r[1] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(zs, us, "b-", lw=1.3)
    ax.axhline(theta, color="gray", ls="--", lw=0.9)
    ax.axvline(0.0, color="gray", lw=0.5)
    ax.set_xlabel("traveling coordinate")
    ax.set_ylabel("front displacement")
    if label:
        ax.set_title(label)
    fig.tight_layout()
    return _save(fig, path)


def render_evans_surface(scan: EvansScan, path: str | Path, label: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(6.5, 5))
    grid = scan.abs_grid.T  # imshow wants rows = imaginary axis
    mesh = ax.pcolormesh(
        scan.re_grid, scan.im_grid, grid, shading="nearest", cmap="viridis"
    )
    fig.colorbar(mesh, ax=ax, label="|stability index|")
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    title = f"winding {scan.winding}, min modulus {scan.min_modulus:.2e}"
    ax.set_title(f"{label} {title}".strip())
    fig.tight_layout()
    return _save(fig, path)


def render_atlas(grid: AtlasGrid, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 5))
    mask = grid.in_region.astype(float)
    ax.pcolormesh(grid.a_values, grid.theta_values, mask.T, shading="nearest", cmap="Greys", vmin=0, vmax=1.6)
    ax.axvline(grid.a_star, color="r", lw=1.0, ls="--", label=f"class change at {grid.a_star:.4f}")
    gs = np.array([g for g in map(float, _boundary_curve(grid))])
    ax.plot(grid.a_values, gs, "b-", lw=1.0, label="threshold boundary")
    ax.set_xlabel("decay parameter")
    ax.set_ylabel("threshold")
    ax.set_ylim(grid.theta_values[0], grid.theta_values[-1])
    ax.legend(fontsize=8, loc="lower right")
    fig.tight_layout()
    return _save(fig, path)


def _boundary_curve(grid: AtlasGrid):
    from .k2atlas import threshold_boundary

    return np.clip(threshold_boundary(grid.a_values), 0.0, 1.0)


def render_moment_curve(a_values, f_values, a_star: float, path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(a_values, f_values, "b-", lw=1.3)
    ax.axhline(0.0, color="gray", lw=0.7)
    ax.axvline(a_star, color="r", ls="--", lw=0.9, label=f"sign change at {a_star:.4f}")
    ax.set_xlabel("decay parameter")
    ax.set_ylabel("signed first moment")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def render_phase_portrait(portrait: PhasePortrait, path: str | Path, label: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(6.5, 5))
    if portrait.singular_overlay is not None:
        su = [p[0] for p in portrait.singular_overlay]
        sw = [p[1] for p in portrait.singular_overlay]
        ax.plot(su, sw, "k-", lw=1.0, label="singular orbit")
    us = [u for _, u, _ in portrait.samples]
    ws = [w for _, _, w in portrait.samples]
    ax.plot(us, ws, "r-", lw=1.0, label="pulse")
    ax.set_xlabel("potential")
    ax.set_ylabel("feedback")
    if label:
        ax.set_title(label)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return _save(fig, path)
