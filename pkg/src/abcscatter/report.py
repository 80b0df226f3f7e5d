"""Figures for CLI reports, rendered off-screen with matplotlib."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["render_figure"]


def _title(spec):
    parts = [f"gamma={spec['gamma']:g}", f"alpha={spec['alpha']:g}"]
    if spec.get("energy") is not None:
        parts.append(f"E={spec['energy']:g}")
    return ", ".join(parts)


def _cross_section(ax, rows):
    th = [r["theta_deg"] for r in rows]
    ax.semilogy(th, [r["sigma"] for r in rows], "o-", ms=3)
    ax.set_xlabel("theta [deg]")
    ax.set_ylabel("sigma [1/k units]")


def _amplitude(ax, rows):
    th = [r["theta_deg"] for r in rows]
    ax.plot(th, [r["re_f"] for r in rows], label="Re f")
    ax.plot(th, [r["im_f"] for r in rows], label="Im f")
    ax.set_xlabel("theta [deg]")
    ax.set_ylabel("f(theta)")
    ax.legend()


def _phase_shifts(ax, rows):
    pts = [(r["j"], r["eta"]) for r in rows if r["eta"] is not None]
    ax.plot([p[0] for p in pts], [p[1] for p in pts], "o")
    ax.axhline(0.0, color="0.7", lw=0.8)
    ax.set_xlabel("j")
    ax.set_ylabel("eta_j [rad]")


def _bound_states(ax, rows):
    for r in rows:
        ax.hlines(r["energy"], r["j"] - 0.35, r["j"] + 0.35,
                  lw=2.5 if r["degeneracy"] == 2 else 1.2)
    ax.set_xlabel("j")
    ax.set_ylabel("E / mu c^2")


def _validate(ax, rows):
    rows = [r for r in rows if r["max_deviation"] is not None]
    names = [r["check"] for r in rows]
    ax.bar(names, [max(r["max_deviation"], 1e-18) for r in rows])
    for i, r in enumerate(rows):
        if r["tolerance"] is not None:
            ax.hlines(r["tolerance"], i - 0.4, i + 0.4, colors="r")
    ax.set_yscale("log")
    ax.set_ylabel("max deviation")


_PLOTTERS = {
    "cross-section": _cross_section,
    "amplitude": _amplitude,
    "phase-shifts": _phase_shifts,
    "bound-states": _bound_states,
    "validate": _validate,
}


def render_figure(command, rows, spec, path):
    """Write a figure for ``command``'s rows to ``path`` (format from suffix)."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    try:
        _PLOTTERS[command](ax, rows)
        ax.set_title(f"{command}: {_title(spec)}", fontsize=10)
        fig.tight_layout()
        fig.savefig(path, dpi=120)
    finally:
        plt.close(fig)
