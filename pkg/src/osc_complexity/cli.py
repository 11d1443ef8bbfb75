"""Command-line front end.

Exit codes: 0 success, 1 solver or verification failure, 2 invalid input.
The default output format can be set with OSC_COMPLEXITY_FORMAT.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from typing import Dict, List, Optional

import click
import numpy as np

from .boundary import (
    TWO_PI,
    BoundaryProblem,
    ComplexityResult,
    EPS_POLE,
    WINDOW_CAP,
    branch_max,
    complexity,
    f_of_nu,
)
from .errors import InvalidMetric, InvalidRepresentation, OscillatorGroupError
from .geodesics import GeodesicModel, Metric
from .group import GroupElement
from .representations import (
    Displacement,
    OscillatorEvolution,
    RepresentationSpec,
    ShiftedOscillator,
    kernel,
    to_group_element,
    coset_complexity,
)

FORMATS = ["text", "json", "csv"]
FORMAT_ENV = "OSC_COMPLEXITY_FORMAT"


def _floats(text: str, n: int, what: str) -> List[float]:
    try:
        vals = [float(v) for v in str(text).split(",")]
    except ValueError:
        raise click.BadParameter(f"{what} must be {n} comma-separated numbers, got {text!r}")
    if len(vals) != n or not all(math.isfinite(v) for v in vals):
        raise click.BadParameter(f"{what} must be {n} comma-separated finite numbers, got {text!r}")
    return vals


def _load_config(ctx: click.Context, param, value):
    """Read a flat key=value file into the command's defaults."""
    if not value:
        return value
    # keys follow the long option names, e.g. "omega-t" or "format"
    names: Dict[str, str] = {}
    for prm in ctx.command.params:
        for opt in prm.opts:
            names[opt.lstrip("-").replace("-", "_")] = prm.name
    cfg: Dict[str, str] = {}
    with open(value) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise click.BadParameter(f"line {lineno}: expected key=value", param=param)
            k, v = (s.strip() for s in line.split("=", 1))
            key = k.replace("-", "_")
            if key not in names or key == "config":
                raise click.BadParameter(f"line {lineno}: unknown key {k!r}", param=param)
            key = names[key]
            if v.lower() in ("true", "yes", "on"):
                cfg[key] = True
            elif v.lower() in ("false", "no", "off"):
                cfg[key] = False
            else:
                cfg[key] = v
    ctx.default_map = {**(ctx.default_map or {}), **cfg}
    return value


def _fmt(x: Optional[float]) -> str:
    if x is None:
        return "-"
    return f"{x:.6g}"


def _num(x: float):
    """JSON/CSV-safe number: infinities become null/empty."""
    return x if x is not None and math.isfinite(x) else None


def _model(name: str) -> GeodesicModel:
    return GeodesicModel.parse(name)


def _emit_rows(header: List[str], rows: List[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else (repr(v) if isinstance(v, float) else v) for v in r])
    return buf.getvalue()


def complexity_payload(res: ComplexityResult, model: GeodesicModel, target: GroupElement, extra: dict = None) -> dict:
    def cand(c):
        return {
            "nu_tilde": c.nu_tilde,
            "branch_index": c.branch_index,
            "length": c.length,
            "family": c.family,
            "A": c.params.A,
            "B": c.params.B,
            "D": c.params.D,
            "F": c.params.F,
        }

    out = {
        "model": model.name.lower().replace("_", "-"),
        "target": {"e": target.e, "alpha": target.alpha, "q": target.q, "p": target.p},
        "complexity": res.value,
        "winner": cand(res.winner),
        "candidates": [cand(c) for c in res.candidates],
        "certification_bound": _num(res.bound),
        "window": res.window,
    }
    if extra:
        out.update(extra)
    return out


CSV_HEADER = ["record", "nu_tilde", "branch_index", "length", "family", "A", "B", "D", "F", "certification_bound", "window"]


def complexity_csv(payload: dict) -> str:
    rows = []
    w = payload["winner"]
    rows.append(["winner", w["nu_tilde"], w["branch_index"], w["length"], w["family"], w["A"], w["B"], w["D"], w["F"],
                 payload["certification_bound"], payload["window"]])
    for c in payload["candidates"]:
        rows.append(["candidate", c["nu_tilde"], c["branch_index"], c["length"], c["family"], c["A"], c["B"], c["D"], c["F"], None, None])
    return _emit_rows(CSV_HEADER, rows)


def complexity_text(payload: dict) -> str:
    t = payload["target"]
    lines = [
        f"model: {payload['model']}",
        f"target (e, alpha, q, p): {_fmt(t['e'])}, {_fmt(t['alpha'])}, {_fmt(t['q'])}, {_fmt(t['p'])}",
    ]
    if "representative" in payload:
        r = payload["representative"]
        lines.append(f"minimising representative (e, alpha, q, p): {_fmt(r['e'])}, {_fmt(r['alpha'])}, {_fmt(r['q'])}, {_fmt(r['p'])}")
    lines += [
        f"C = {_fmt(payload['complexity'])}",
        f"winning nu~ = {_fmt(payload['winner']['nu_tilde'])} (branch {payload['winner']['branch_index']})",
        f"certification bound = {_fmt(payload['certification_bound'])} (window |k| <= {payload['window']})",
        "candidates:",
        f"  {'nu~':>12} {'k':>5} {'length':>12}  family",
    ]
    for c in payload["candidates"]:
        lines.append(f"  {_fmt(c['nu_tilde']):>12} {c['branch_index']:>5} {_fmt(c['length']):>12}  {c['family']}")
    return "\n".join(lines) + "\n"


def _render(payload, fmt: str, csv_fn, text_fn) -> str:
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        return csv_fn(payload)
    return text_fn(payload)


format_option = click.option(
    "--format", "fmt", type=click.Choice(FORMATS), default="text", show_default=True, envvar=FORMAT_ENV,
    help=f"Output format (env: {FORMAT_ENV}).",
)
model_option = click.option(
    "--model", type=click.Choice(["levi-civita", "paper"]), default="levi-civita", show_default=True,
    help="Geodesic flow: Levi-Civita (geometric) or the published sign convention.",
)
config_option = click.option(
    "--config", type=click.Path(exists=True, dir_okay=False), callback=_load_config, is_eager=True, expose_value=False,
    help="Flat key=value file providing option defaults.",
)


@click.group()
def main() -> None:
    """Geodesic complexity on the oscillator group."""


@main.command("complexity")
@config_option
@click.option("--metric", required=True, help="a,b,d of the invariant form (a > 0, ad - b^2 > 0).")
@click.option("--target", default=None, help="Group element e,alpha,q,p.")
@click.option("--oscillator", is_flag=True, help="Target exp(-i t Omega H); needs --omega-t.")
@click.option("--displacement", default=None, help="Target exp(i(pQ + qP)) given as q,p.")
@click.option("--shifted-oscillator", is_flag=True, help="Target exp(-it(H_osc + lam Q~)); needs --lam2-over-omega4 and --omega-t.")
@click.option("--lam2-over-omega4", type=float, default=None)
@click.option("--omega-t", type=float, default=None)
@click.option("--omega", type=float, default=1.0, show_default=True, help="Casimir value E = Omega.")
@click.option("--h", "h_value", type=float, default=0.0, show_default=True, help="Casimir value C2 = h.")
@click.option("--rational", default=None, help="Declare h/Omega + 1/2 = k/l (as k/l) or 'auto'.")
@click.option("--quotient/--no-quotient", default=False, show_default=True,
              help="Minimise over kernel translates of the representation.")
@click.option("--window-cap", type=click.IntRange(min=1), default=WINDOW_CAP, show_default=True)
@model_option
@format_option
def cmd_complexity(metric, target, oscillator, displacement, shifted_oscillator, lam2_over_omega4, omega_t,
                   omega, h_value, rational, quotient, window_cap, model, fmt):
    """Minimal geodesic length from the identity to a target."""
    try:
        m = Metric(*_floats(metric, 3, "--metric"))
    except InvalidMetric as exc:
        raise click.BadParameter(str(exc), param_hint="--metric")
    chosen = [x for x in (target is not None, bool(oscillator), displacement is not None, bool(shifted_oscillator)) if x]
    if len(chosen) != 1:
        raise click.UsageError("give exactly one of --target, --oscillator, --displacement, --shifted-oscillator")
    try:
        if rational is None:
            spec = RepresentationSpec(omega, h_value)
        elif rational == "auto":
            spec = RepresentationSpec.with_detected_rationality(omega, h_value)
        else:
            k, l = (int(v) for v in rational.split("/"))
            spec = RepresentationSpec(omega, h_value, (k, l))
    except (InvalidRepresentation, ValueError) as exc:
        raise click.BadParameter(str(exc), param_hint="--omega/--h/--rational")

    if target is not None:
        unitary = None
        g = GroupElement(*_floats(target, 4, "--target"))
    elif oscillator:
        if omega_t is None:
            raise click.UsageError("--oscillator needs --omega-t")
        unitary = OscillatorEvolution(omega_t / omega)
    elif displacement is not None:
        unitary = Displacement(*_floats(displacement, 2, "--displacement"))
    else:
        if omega_t is None or lam2_over_omega4 is None:
            raise click.UsageError("--shifted-oscillator needs --lam2-over-omega4 and --omega-t")
        if lam2_over_omega4 < 0:
            raise click.BadParameter("must be >= 0", param_hint="--lam2-over-omega4")
        unitary = ShiftedOscillator(omega_t / omega, math.sqrt(lam2_over_omega4) * omega**2)
    if unitary is not None:
        g = to_group_element(unitary, spec)

    mdl = _model(model)
    try:
        if quotient:
            det = coset_complexity(g, spec, m, mdl)
            res, rep = det.result, det.representative
            k = kernel(spec)
            extra = {
                "representative": {"e": rep.e, "alpha": rep.alpha, "q": rep.q, "p": rep.p},
                "kernel": {"e_period": k.e_period, "alpha_period": k.alpha_period},
            }
        else:
            res = complexity(BoundaryProblem(m, g, mdl), window_cap=window_cap)
            extra = None
    except OscillatorGroupError as exc:
        click.echo(f"Error: {exc}", err=True)
        sys.exit(1)
    payload = complexity_payload(res, mdl, g, extra)
    click.echo(_render(payload, fmt, complexity_csv, complexity_text), nl=False)


def plot_f_data(delta: float, lo: float, hi: float, samples: int) -> dict:
    grid = np.linspace(lo, hi, samples)
    pts = []
    for nu in grid:
        k = round(nu / TWO_PI)
        if k != 0 and abs(nu - TWO_PI * k) < max(EPS_POLE, 1e-6):
            continue
        pts.append((float(nu), float(f_of_nu(float(nu), delta))))
    maxima = []
    kmin, kmax = math.floor(lo / TWO_PI), math.floor(hi / TWO_PI)
    for k in range(kmin, kmax + 1):
        if k == 0 or k == -1:
            if delta > 1.0 / 3.0:
                nu, f = branch_max(0, delta)
                cand = [(nu, f)] if k == 0 else [(-nu, -f)]
            else:
                continue
        elif k > 0:
            cand = [branch_max(k, delta)]
        else:
            nu, f = branch_max(-k - 1, delta)
            cand = [(-nu, -f)]
        maxima += [(n, f) for n, f in cand if lo <= n <= hi]
    return {
        "delta": delta,
        "samples": [{"nu": n, "f": f, "asymptote": (delta - 0.5) * n} for n, f in pts],
        "extrema": [{"nu": n, "f": f} for n, f in maxima],
    }


def plot_f_csv(payload: dict) -> str:
    rows = [["sample", s["nu"], s["f"]] for s in payload["samples"]]
    rows += [["asymptote", s["nu"], s["asymptote"]] for s in payload["samples"]]
    rows += [["extremum", e["nu"], e["f"]] for e in payload["extrema"]]
    return _emit_rows(["kind", "nu", "value"], rows)


def plot_f_text(payload: dict) -> str:
    lines = [f"f(nu; Delta={_fmt(payload['delta'])}): {len(payload['samples'])} samples", "branch extrema:"]
    lines += [f"  nu={_fmt(e['nu'])}  f={_fmt(e['f'])}" for e in payload["extrema"]]
    return "\n".join(lines) + "\n"


@main.command("plot-f")
@config_option
@click.option("--delta", type=float, required=True, help="Delta > 0.")
@click.option("--range", "nu_range", default="-25,25", show_default=True, help="lo,hi of the nu grid.")
@click.option("--samples", type=int, default=2001, show_default=True)
@click.option("--gamma", type=float, default=None, help="Draw a horizontal Gamma level on the figure.")
@click.option("--figure", type=click.Path(dir_okay=False), default=None, help="Also render a PNG to this path.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="csv", show_default=True, envvar=FORMAT_ENV)
def cmd_plot_f(delta, nu_range, samples, gamma, figure, fmt):
    """Sample f(nu; Delta), its branch extrema and the asymptote (Delta - 1/2) nu."""
    if samples < 2:
        raise click.BadParameter("must be >= 2", param_hint="--samples")
    if not (delta > 0 and math.isfinite(delta)):
        raise click.BadParameter("must be positive", param_hint="--delta")
    lo, hi = _floats(nu_range, 2, "--range")
    if not lo < hi:
        raise click.BadParameter("need lo < hi", param_hint="--range")
    payload = plot_f_data(delta, lo, hi, samples)
    if figure:
        from .plotting import render_f_figure

        render_f_figure([(s["nu"], s["f"]) for s in payload["samples"]],
                        [(e["nu"], e["f"]) for e in payload["extrema"]], delta, figure, gamma)
        click.echo(f"wrote {figure}", err=True)
    click.echo(_render(payload, fmt, plot_f_csv, plot_f_text), nl=False)


@main.command("reproduce-paper")
@config_option
@model_option
@format_option
def cmd_reproduce(model, fmt):
    """Shifted-oscillator table, sawtooth and displacement checks with PASS/FAIL."""
    from .reproduce import run_reproduction

    rep = run_reproduction(_model(model))
    payload = {
        "passed": rep.passed,
        "checks": [
            {"name": c.name, "computed": c.computed, "expected": c.expected, "tol": c.tol,
             "relation": c.relation, "passed": c.passed}
            for c in rep.checks
        ],
        "info": [{"name": n, "value": v} for n, v in rep.info],
    }

    def as_csv(p):
        rows = [["check", c["name"], c["computed"], c["expected"], c["tol"], c["relation"], "PASS" if c["passed"] else "FAIL"]
                for c in p["checks"]]
        rows += [["info", i["name"], i["value"], None, None, None, None] for i in p["info"]]
        return _emit_rows(["record", "name", "computed", "expected", "tol", "relation", "status"], rows)

    def as_text(p):
        lines = [f"{'check':<44} {'computed':>12} {'expected':>12}  status"]
        for c in p["checks"]:
            rel = "<=" if c["relation"] == "<=" else "  "
            lines.append(f"{c['name']:<44} {_fmt(c['computed']):>12} {rel}{_fmt(c['expected']):>10}  "
                         f"{'PASS' if c['passed'] else 'FAIL'}")
        lines.append("")
        for i in p["info"]:
            lines.append(f"{i['name']:<50} {_fmt(i['value'])}")
        lines.append("")
        lines.append("ALL PASS" if p["passed"] else "SOME CHECKS FAILED")
        return "\n".join(lines) + "\n"

    click.echo(_render(payload, fmt, as_csv, as_text), nl=False)
    if not rep.passed:
        sys.exit(1)


@main.command("verify")
@config_option
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--steps", type=click.IntRange(min=10), default=2000, show_default=True, help="RK4 steps for the oracle suite.")
@format_option
def cmd_verify(seed, trials, steps, fmt):
    """Randomised property suites: group laws, boundary round trips, oracle agreement, conservation."""
    from .verify import run_verification

    summary = run_verification(seed, trials, steps)
    payload = {
        "seed": seed,
        "trials": trials,
        "passed": summary.passed,
        "suites": [{"name": s.name, "max_error": s.max_error, "tol": s.tol, "passed": s.passed} for s in summary.suites],
    }

    def as_csv(p):
        return _emit_rows(["suite", "max_error", "tol", "status"],
                          [[s["name"], s["max_error"], s["tol"], "PASS" if s["passed"] else "FAIL"] for s in p["suites"]])

    def as_text(p):
        lines = [f"seed={p['seed']} trials={p['trials']}"]
        lines += [f"{s['name']:<32} max error {_fmt(s['max_error']):>10} (tol {_fmt(s['tol'])})  "
                  f"{'PASS' if s['passed'] else 'FAIL'}" for s in p["suites"]]
        lines.append("PASS" if p["passed"] else "FAIL")
        return "\n".join(lines) + "\n"

    click.echo(_render(payload, fmt, as_csv, as_text), nl=False)
    if not summary.passed:
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
