"""
Command-line front end.

    abcscatter phase-shifts  --gamma 0.05 --alpha 0.2 --energy 1.25 --jmax 5/2
    abcscatter amplitude     --gamma 0.05 --alpha 0.2 --energy 1.25 --theta 30:180:16
    abcscatter cross-section --gamma 0.05 --alpha 0   --energy 1.25 --format csv
    abcscatter bound-states  --gamma 0.1  --alpha 0   --nmax 3 --jmax 5/2
    abcscatter validate      --gamma 0.05 --alpha 0.2 --energy 1.25

Tables go to stdout (CSV with a header row, or JSON with keys spec / rows /
diagnostics); diagnostics and warnings go to stderr.  Exit status is 2 for
invalid input, 3 for a convergence failure and 4 for a validation breach.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

import click
import numpy as np

from .amplitude import (
    AngularGrid,
    amplitude,
    amplitude_closed_generic,
    amplitude_series,
)
from .bound import spectrum
from .errors import ChannelKindError, ConvergenceError, CriticalChannelError, InvalidInput
from .oracle import ode_s_matrix
from .physics import Channel, PhysicalConfig, kinematics
from .smatrix import s_approx, s_matrix

__all__ = ["RunSpec", "run", "cli", "main"]

log = logging.getLogger("abcscatter")

EXIT_INVALID = 2
EXIT_CONVERGENCE = 3
EXIT_BREACH = 4

RESUMMATION_TOL = 1e-5
ODE_TOL = 1e-5
VALIDATE_CHANNELS = ("-3/2", "-1/2", "1/2", "3/2", "5/2")


@dataclass(frozen=True)
class RunSpec:
    gamma: float
    alpha: float
    energy: float | None = None
    theta: tuple = (30.0, 180.0, 16)
    jmax: str = "5/2"
    nmax: int = 3
    method: str = "auto"
    output_format: str = "csv"


class ValidationBreach(Exception):
    def __init__(self, result):
        super().__init__("validation tolerance breached")
        self.result = result


def _num(x):
    """Round to 15 significant digits so CSV and JSON carry the same value."""
    if x is None:
        return None
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return int(x)
    x = float(x)
    return x if not math.isfinite(x) else float(format(x, ".15g"))


def _setup(spec, need_energy=True):
    cfg = PhysicalConfig(spec.gamma, spec.alpha)
    kin = None
    if need_energy:
        if spec.energy is None:
            raise InvalidInput("--energy is required for this command")
        kin = kinematics(cfg, spec.energy)
    return cfg, kin


def _grid(spec):
    lo, hi, n = spec.theta
    if n < 1:
        raise InvalidInput("theta count must be positive")
    return AngularGrid.from_degrees(lo, hi, n)


def _base_diagnostics(cfg, kin):
    split = cfg.split
    d = {"m0": split.m0, "nu": _num(split.nu)}
    if kin is not None:
        d.update(k=_num(kin.k), beta=_num(kin.beta), beta_prime=_num(kin.beta_prime),
                 v_over_c=_num(kin.v_over_c))
    return d


def _channels(jmax):
    top = Channel.from_j(jmax)
    if top.j < 0:
        raise InvalidInput("--jmax must be positive")
    return [Channel(m) for m in range(-top.m - 1, top.m + 1)]


def _phase_shifts(spec):
    cfg, kin = _setup(spec)
    split = cfg.split
    rows = []
    for ch in _channels(spec.jmax):
        if spec.method == "closed":
            res = s_approx(ch, kin, split)
        else:
            res = s_matrix(ch, kin, split)
        exp_ = res.exponent
        rows.append({
            "j": _num(ch.j),
            "kind": exp_.kind.value if exp_ is not None else "pure-ab",
            "s": _num(exp_.s) if exp_ is not None else None,
            "gamma_prime": _num(exp_.gamma_prime) if exp_ is not None else None,
            "re_S": _num(res.s_value.real),
            "im_S": _num(res.s_value.imag),
            "abs_S": _num(abs(res.s_value)),
            "eta": _num(res.phase_shift),
            "method": res.method.value,
        })
    return rows, _base_diagnostics(cfg, kin)


def _profile(spec):
    cfg, kin = _setup(spec)
    grid = _grid(spec)
    prof = amplitude(kin, cfg.split, grid, method=spec.method)
    diag = _base_diagnostics(cfg, kin)
    diag["method"] = prof.method.value
    diag.update({k: _num(v) if isinstance(v, float) else v
                 for k, v in prof.diagnostics.items() if k != "damping_grid"})
    return grid, prof, diag


def _amplitude(spec):
    grid, prof, diag = _profile(spec)
    rows = [{"theta_deg": _num(t), "re_f": _num(f.real), "im_f": _num(f.imag),
             "sigma": _num(s), "method": prof.method.value}
            for t, f, s in zip(grid.degrees, prof.f_values, prof.sigma_values)]
    return rows, diag


def _cross_section(spec):
    grid, prof, diag = _profile(spec)
    rows = [{"theta_deg": _num(t), "sigma": _num(s), "method": prof.method.value}
            for t, s in zip(grid.degrees, prof.sigma_values)]
    return rows, diag


def _bound_states(spec):
    cfg, _ = _setup(spec, need_energy=False)
    levels = spectrum(spec.nmax, spec.jmax, cfg.split, cfg.gamma, cfg.rest_energy)
    rows = [{"n": lv.n, "j": _num(lv.j), "energy": _num(lv.energy),
             "degeneracy": lv.degeneracy} for lv in levels]
    return rows, _base_diagnostics(cfg, None)


def _check_row(name, dev, tol):
    status = "info" if tol is None else ("pass" if dev <= tol else "fail")
    return {"check": name, "max_deviation": _num(dev), "tolerance": tol, "status": status}


def _validate(spec):
    cfg, kin = _setup(spec)
    split = cfg.split
    grid = _grid(spec)
    rows = []
    diag = _base_diagnostics(cfg, kin)

    approx = amplitude_series(kin, split, grid=grid, prescription="approx")
    closed = amplitude_closed_generic(kin, split, grid)
    rel = np.abs(approx.f_values - closed.f_values) / np.maximum(np.abs(closed.f_values), 1e-300)
    rows.append(_check_row("resummation", float(np.max(rel)), RESUMMATION_TOL))

    exact = amplitude_series(kin, split, grid=grid)
    rel = np.abs(exact.f_values - closed.f_values) / np.maximum(np.abs(exact.f_values), 1e-300)
    rows.append(_check_row("series_vs_closed", float(np.max(rel)), None))

    if cfg.gamma == 0:
        rows.append({"check": "ode_vs_exact", "max_deviation": None,
                     "tolerance": ODE_TOL, "status": "skipped"})
        diag["ode_skipped"] = "gamma = 0"
    else:
        devs, used = [], []
        for label in VALIDATE_CHANNELS:
            ch = Channel.from_j(label)
            try:
                ref = s_matrix(ch, kin, split)
                if ref.exponent is None or not ref.exponent.is_subcritical:
                    continue
                got = ode_s_matrix(ch, kin, split)
            except (ChannelKindError, CriticalChannelError):
                continue
            devs.append(abs(got.s_extracted - ref.s_value))
            used.append(ch.j_label)
        diag["ode_channels"] = used
        rows.append(_check_row("ode_vs_exact", max(devs) if devs else 0.0, ODE_TOL))
    return rows, diag


_COMMANDS = {
    "phase-shifts": _phase_shifts,
    "amplitude": _amplitude,
    "cross-section": _cross_section,
    "bound-states": _bound_states,
    "validate": _validate,
}


def run(spec, command):
    """Execute ``command``; returns the result dict {spec, rows, diagnostics}.

    Raises ``ValidationBreach`` (carrying the result) if ``validate`` finds
    a deviation above tolerance.
    """
    if spec.method not in ("auto", "series", "closed"):
        raise InvalidInput(f"unknown method {spec.method!r}")
    rows, diag = _COMMANDS[command](spec)
    spec_out = {"command": command, **asdict(spec)}
    spec_out["theta"] = list(spec.theta)
    result = {"spec": spec_out, "rows": rows, "diagnostics": diag}
    if command == "validate" and any(r["status"] == "fail" for r in rows):
        raise ValidationBreach(result)
    return result


def _fmt_cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".15g")
    return str(v)


def render(result, output_format):
    """Serialize a result as CSV or JSON text."""
    if output_format == "json":
        return json.dumps(result, indent=2, allow_nan=True) + "\n"
    rows = result["rows"]
    buf = io.StringIO()
    cols = list(rows[0]) if rows else []
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt_cell(r[c]) for c in cols])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# click wiring


def _parse_theta(ctx, param, value):
    try:
        lo, hi, n = value.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise click.BadParameter("expected MIN:MAX:COUNT in degrees, e.g. 30:180:16")


def _parse_jmax(ctx, param, value):
    try:
        Channel.from_j(Fraction(value))
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter("expected a half-odd integer such as 5/2")
    return value


def _common(f):
    opts = [
        click.option("--gamma", type=float, required=True, help="Coulomb coupling, |gamma| < 1/2."),
        click.option("--alpha", type=float, required=True, help="Flux in units of the flux quantum."),
        click.option("--energy", type=float, default=None, help="Total energy / rest energy (> 1)."),
        click.option("--theta", default="30:180:16", callback=_parse_theta,
                     help="Angular grid MIN:MAX:COUNT in degrees."),
        click.option("--jmax", default="5/2", callback=_parse_jmax, help="Channel cutoff |j|."),
        click.option("--nmax", type=int, default=3, help="Largest radial quantum number."),
        click.option("--method", type=click.Choice(["auto", "series", "closed"]), default="auto"),
        click.option("--format", "output_format", type=click.Choice(["csv", "json"]), default="csv"),
        click.option("--plot", "plot_path", type=click.Path(dir_okay=False), default=None,
                     help="Also render a figure to this file."),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _execute(command, plot_path, **kwargs):
    spec = RunSpec(**kwargs)
    status = 0
    try:
        result = run(spec, command)
    except ValidationBreach as exc:
        result, status = exc.result, EXIT_BREACH
        click.echo("validation tolerance breached", err=True)
    except InvalidInput as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INVALID)
    except ConvergenceError as exc:
        click.echo(f"convergence failure: {exc}", err=True)
        sys.exit(EXIT_CONVERGENCE)
    click.echo(render(result, spec.output_format), nl=False)
    if plot_path:
        from .report import render_figure

        render_figure(command, result["rows"], result["spec"], plot_path)
        click.echo(f"figure written to {plot_path}", err=True)
    sys.exit(status)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log diagnostics to stderr.")
def cli(verbose):
    """Relativistic spin-1/2 scattering by Aharonov-Bohm + Coulomb potentials."""
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")


def _make_command(name, doc):
    @_common
    def cmd(plot_path, **kwargs):
        _execute(name, plot_path, **kwargs)

    cmd.__doc__ = doc
    cli.command(name)(cmd)


_make_command("phase-shifts", "S_j and phase shifts for |j| <= jmax.")
_make_command("amplitude", "Scattering amplitude f(theta) on the angular grid.")
_make_command("cross-section", "Differential cross section |f(theta)|^2.")
_make_command("bound-states", "Bound levels for gamma > 0, n <= nmax, |j| <= jmax.")
_make_command("validate", "Series/closed-form and ODE/analytic consistency checks.")


def main():
    cli()
