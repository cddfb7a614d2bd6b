"""Command-line interface.

Subcommands print JSON (or CSV for ``grid`` and growth traces) on standard
output.  Exit status: 0 success, 2 accuracy or evaluation failures and
failed checks, 3 usage errors (bad arguments, points outside the domain,
violated certificates).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import sys

import click
import numpy as np

from . import __version__
from .catalog import get_boundary, get_entry, series_names
from .contours import gamma_m_contour
from .continuation import SeriesContinuation, SeriesSpec, map_points
from .exceptions import AccuracyError, EvaluationError, HolocontError, ParameterError
from .expr import parse_expr
from .growth import GrowthEstimator, RadialSchedule, indicator_trace
from .interpolant import (
    CoefficientInterpolant,
    DecayCertificate,
    InterpolantConfig,
    check_r_independence,
    evaluate_interpolant,
    phi_deformed,
)
from .kernel import reciprocal_bound_constant
from .validation import parse_point

EXIT_OK, EXIT_ACCURACY, EXIT_USAGE = 0, 2, 3


# ---------------------------------------------------------------------------
# output


def _num(x):
    if x is None:
        return "null"
    x = float(x)
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _encode([obj.real, obj.imag], indent, level)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in sorted(obj.items())]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON with every float written to 17 significant digits (byte-stable output)."""
    return _encode(obj, indent, 0)


def _emit(obj):
    click.echo(dumps(obj))


# ---------------------------------------------------------------------------
# argument helpers


def load_series(ref: str) -> tuple[SeriesSpec, object]:
    """A series from a JSON file path or a built-in name; also returns the closed form if known."""
    if os.path.exists(ref):
        with open(ref, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParameterError(f"{ref}: invalid JSON ({exc})") from None
        return SeriesSpec.from_dict(data), None
    entry = get_entry(ref)
    return entry.spec, entry.closed_form


def parse_grid(text: str) -> np.ndarray:
    """``"re0:re1:n,im0:im1:n"`` to a row-major array of points (imaginary part varies fastest)."""
    try:
        xs, ys = (part.split(":") for part in text.split(","))
        re = np.linspace(float(xs[0]), float(xs[1]), int(xs[2]))
        im = np.linspace(float(ys[0]), float(ys[1]), int(ys[2]))
    except (ValueError, IndexError):
        raise ParameterError(f"cannot read grid {text!r}; expected 're0:re1:n,im0:im1:n'") from None
    if re.size < 1 or im.size < 1:
        raise ParameterError("grid counts must be positive")
    return (re[:, None] + 1j * im[None, :]).ravel()


def _series_estimator(m, theta, tol):
    return SeriesContinuation(m=m, theta=theta, quad_tol=tol)


def _certificate(g, theta, eta, M):
    if M is None:
        return DecayCertificate.fit(g, theta, eta)
    return DecayCertificate(M, eta, theta).verify(g)


def _boundary(g, boundary):
    if (g is None) == (boundary is None):
        raise ParameterError("give exactly one of --g and --boundary")
    if boundary is not None:
        b = get_boundary(boundary)
        return b.g, b.cert
    return parse_expr(g), None


# ---------------------------------------------------------------------------
# commands


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="holocont")
def cli():
    """Continue power series past their disc of convergence and build coefficient interpolants."""


series_option = click.option("--series", required=True,
                             help=f"JSON file or built-in name ({', '.join(series_names())}).")


@cli.command("eval")
@series_option
@click.option("--z", "z_text", required=True, help='Point as "re,im".')
@click.option("--m", type=int, default=None, help="Split index (default: automatic).")
@click.option("--theta", type=float, default=None, help="Sector half-angle in (0, pi/2).")
@click.option("--tol", type=float, default=1e-10, show_default=True, help="Relative quadrature tolerance.")
@click.option("--show-contour", is_flag=True, help="Include the integration contour in the output.")
def eval_cmd(series, z_text, m, theta, tol, show_contour):
    """Evaluate the continuation at one point."""
    spec, _ = load_series(series)
    z = parse_point(z_text)
    est = _series_estimator(m, theta, tol).fit(spec)
    res = est.evaluate([z])[0]
    out = {
        "series": spec.label or series,
        "z": z,
        "value": res.value,
        "error": res.error,
        "config": {"method": res.method, "m": res.m, "theta": res.theta,
                   "truncation": res.truncation, "quad_tol": tol},
    }
    if show_contour and res.method == "contour":
        out["contour"] = gamma_m_contour(res.m, res.theta).to_dict()
    _emit(out)


@cli.command("grid")
@series_option
@click.option("--grid", "grid_text", required=True, help='"re0:re1:n,im0:im1:n".')
@click.option("--m", type=int, default=None)
@click.option("--theta", type=float, default=None)
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False, writable=True), default=None,
              help="CSV file (default: standard output).")
def grid_cmd(series, grid_text, m, theta, tol, output):
    """Evaluate on a rectangular grid; CSV columns re, im, F_re, F_im, err."""
    spec, _ = load_series(series)
    zs = parse_grid(grid_text)
    est = _series_estimator(m, theta, tol).fit(spec)
    failures = {"accuracy": 0, "domain": 0}

    def one(z):
        try:
            r = est._one(z)
            return r.value, r.error
        except (AccuracyError, EvaluationError):
            failures["accuracy"] += 1
        except HolocontError:
            failures["domain"] += 1
        return complex(math.nan, math.nan), math.nan

    rows = map_points(one, list(zs))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "F_re", "F_im", "err"])
    for z, (v, e) in zip(zs, rows):
        w.writerow([_num(z.real), _num(z.imag), _num(v.real), _num(v.imag), _num(e)])
    text = buf.getvalue().replace("null", "nan")
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    if failures["domain"]:
        click.echo(f"{failures['domain']} grid point(s) outside the domain were written as nan", err=True)
    if failures["accuracy"]:
        click.echo(f"{failures['accuracy']} grid point(s) missed the accuracy target", err=True)
        return EXIT_ACCURACY
    return EXIT_OK


@cli.command("verify")
@series_option
def verify_cmd(series):
    """Run the invariant suite (residue identity, m/theta independence, holomorphy)."""
    from .verify import run_all

    spec, closed = load_series(series)
    checks = run_all(spec, closed)
    _emit({"series": spec.label or series, "checks": [c.to_dict() for c in checks],
           "passed": all(c.passed for c in checks)})
    return EXIT_OK if all(c.passed for c in checks) else EXIT_ACCURACY


@cli.command("growth")
@click.option("--f", "f_text", required=True, help="Expression in z.")
@click.option("--sector", default=f"{-math.pi / 2},{math.pi / 2}", show_default=True, help='"theta1,theta2".')
@click.option("--r-min", type=float, default=1.0, show_default=True)
@click.option("--r-max", type=float, default=200.0, show_default=True)
@click.option("--count", type=int, default=64, show_default=True)
@click.option("--spacing", type=click.Choice(["geometric", "linear"]), default="geometric", show_default=True)
@click.option("--mesh", type=int, default=64, show_default=True, help="Angular mesh intervals.")
@click.option("--tail", type=float, default=0.25, show_default=True, help="Tail fraction of the schedule.")
@click.option("--trace-csv", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write (R, log|f|/R) traces along the indicator angles to this CSV.")
def growth_cmd(f_text, sector, r_min, r_max, count, spacing, mesh, tail, trace_csv):
    """Finite-radius estimates of exponential type, inner type, indicator and order."""
    f = parse_expr(f_text)
    try:
        t1, t2 = (float(v) for v in sector.split(","))
    except ValueError:
        raise ParameterError(f"cannot read sector {sector!r}") from None
    est = GrowthEstimator((t1, t2), r_min, r_max, count, spacing, mesh, tail).fit(f)
    _emit({"f": f.text, "report": est.report_.to_dict()})
    if trace_csv:
        sched = RadialSchedule(r_min, r_max, count, spacing)
        with open(trace_csv, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["theta", "R", "value"])
            for t, _ in est.indicator_samples_:
                for R, v in zip(*indicator_trace(f, t, sched)):
                    w.writerow([_num(t), _num(R), _num(v)])


interp_options = [
    click.option("--g", "g_text", default=None, help="Boundary function, an expression in z."),
    click.option("--boundary", default=None, help="Built-in boundary function (expneg, sqrtexp)."),
    click.option("--eta", type=float, default=0.4, show_default=True, help="Decay exponent in (0, 1/2)."),
    click.option("--M", "M", type=float, default=None, help="Decay constant (default: fitted)."),
    click.option("--theta", type=float, default=None, help="Ray angle in [-pi, pi) (default 0 or the built-in's)."),
    click.option("--tol", type=float, default=1e-12, show_default=True),
]


def _with(options):
    def deco(f):
        for opt in reversed(options):
            f = opt(f)
        return f

    return deco


def _setup_interp(g_text, boundary, eta, M, theta):
    g, cert = _boundary(g_text, boundary)
    if cert is not None and theta is None and M is None:
        return g, cert.verify(g), cert.theta_ray
    theta = 0.0 if theta is None else theta
    return g, _certificate(g, theta, eta, M), theta


@cli.command("interp")
@_with(interp_options)
@click.option("--r", type=float, default=None, help="Circle radius (default: automatic).")
@click.option("--z", "z_text", required=True, help='Point as "re,im".')
@click.option("--deformed", type=float, default=None, metavar="DELTA",
              help="Evaluate through the deformed contour with this half-angle instead.")
def interp_cmd(g_text, boundary, eta, M, theta, tol, r, z_text, deformed):
    """Evaluate the coefficient interpolant of g at one point."""
    z = parse_point(z_text)
    if deformed is not None:
        g, _ = _boundary(g_text, boundary)
        res = phi_deformed(g, deformed, z, tol)
        _emit({"value": res.value, "err_estimate": res.error,
               "config": {"delta": deformed, "r": res.r, "truncation": res.truncation, "quad_tol": tol}})
        return
    g, cert, theta = _setup_interp(g_text, boundary, eta, M, theta)
    res = evaluate_interpolant(g, cert, InterpolantConfig(r=r, theta=theta, quad_tol=tol), [z])[0]
    _emit({"value": res.value, "err_estimate": res.error,
           "config": {"r": res.r, "theta": res.theta, "truncation": res.truncation, "quad_tol": tol,
                      "M": cert.M, "eta": cert.eta}})


def taylor_coefficients(g, n: int, radius: float = 0.5, points: int = 256) -> np.ndarray:
    """``a_0 .. a_{n-1}`` of ``g`` by the trapezoidal Cauchy integral (an FFT)."""
    w = radius * np.exp(2j * math.pi * np.arange(points) / points)
    c = np.fft.fft(np.asarray(g(w), dtype=complex)) / points
    return c[:n] / radius ** np.arange(n)


@cli.command("interp-check")
@_with(interp_options)
def interp_check_cmd(g_text, boundary, eta, M, theta, tol):
    """Interpolation at 0..12, zeros at -1..-5 and r-independence for g."""
    g, cert, theta = _setup_interp(g_text, boundary, eta, M, theta)
    phi = CoefficientInterpolant(theta=theta, quad_tol=tol).fit(g, cert)
    n = np.arange(13)
    a = taylor_coefficients(g, 13)
    dev_n = float(np.max(np.abs(phi.predict(n) - a)))
    dev_neg = float(np.max(np.abs(phi.predict(-np.arange(1, 6)))))
    dev_r = check_r_independence(g, cert, theta, 1.5 + 0.5j, [0.3, 0.5, 0.7], tol)
    checks = [
        {"name": "phi(n) = a_n, n = 0..12", "value": dev_n, "tolerance": 1e-8},
        {"name": "phi(-k) = 0, k = 1..5", "value": dev_neg, "tolerance": 1e-8},
        {"name": "r-independence at 1.5+0.5i", "value": dev_r, "tolerance": 1e-7},
    ]
    for c in checks:
        c["passed"] = bool(c["value"] < c["tolerance"])
    ok = all(c["passed"] for c in checks)
    _emit({"g": str(g), "theta": theta, "checks": checks, "passed": ok})
    return EXIT_OK if ok else EXIT_ACCURACY


@cli.command("constants")
@click.option("--r", "r_exclusion", type=float, default=0.25, show_default=True,
              help="Radius of the excluded discs around the integers.")
def constants_cmd(r_exclusion):
    """Constants of the kernel reciprocal bound."""
    _emit(reciprocal_bound_constant(r_exclusion).to_dict())


# ---------------------------------------------------------------------------
# entry points


def cli_main(argv=None) -> int:
    """Run the CLI on ``argv`` and return the exit status instead of exiting."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="holocont",
                      standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except (AccuracyError, EvaluationError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_ACCURACY
    except HolocontError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


def entry():
    sys.exit(cli_main())
