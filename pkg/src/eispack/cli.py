"""The ``eis`` command line.

Exit codes: 2 for usage and invalid input, 3 when a capacity limit is hit,
4 when an internal consistency guard fires.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click

from . import __version__
from .enumeration import CurvatureSieve, enumerate_packing, fit_growth
from .errors import EisError
from .forms import (
    FirstOddForm,
    count_packings,
    enumerate_reduced_forms,
    phi,
    reduce_form,
    roots_with_outer_curvature,
)
from .quadruples import as_quadruple, is_primitive, packing_type, reduce as reduce_quadruple, word_to_str
from .reciprocity import chi2, packing_chi2, sporadic_from_sieve
from .schmidt import Window, enumerate_window, window_csv_rows
from .strongapprox import strong_approx_report
from .svg import DEFAULT_CAP, DrawSpec, draw_packing, draw_schmidt


def _ints(text: str, n: int | None = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(v) for v in text.replace(" ", "").split(","))
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise click.BadParameter(f"expected {n} integers, got {len(vals)}")
    return vals


def _quad(ctx, param, value):
    return None if value is None else _ints(value, 4)


def _emit(payload: dict) -> None:
    click.echo(json.dumps({"eis_version": __version__, **payload}, sort_keys=False))


def _write(text: str, out: str | None) -> None:
    if out is None or out == "-":
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


QUAD = click.option("-q", "--quadruple", "quad", callback=_quad, required=True, help="a,b,c,d")


@click.group()
@click.version_option(__version__, prog_name="eis")
def cli():
    """Eisenstein circle packings: reduction, enumeration and invariants."""


@cli.command("reduce")
@QUAD
def cmd_reduce(quad):
    """Reduce a quadruple to its root."""
    root, word = reduce_quadruple(as_quadruple(quad))
    _emit(
        {
            "root": list(root),
            "word": word_to_str(word),
            "primitive": is_primitive(quad),
            "type": f"(3,{packing_type(root)})" if is_primitive(root) else None,
        }
    )


def _sieve_csv(sieve: CurvatureSieve, moieties) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["curvature", "moiety", "first_seen_count"])
    rows = []
    for idx, m in enumerate(("O", "E")):
        if m not in moieties:
            continue
        for v in sieve.curvatures(m):
            rows.append((int(v), m, int(sieve.counts[idx, v])))
    rows.sort()
    w.writerows(rows)
    return buf.getvalue()


@cli.command("enumerate")
@QUAD
@click.option("-N", "--bound", "N", type=int, required=True)
@click.option("--moiety", type=click.Choice(["O", "E", "both"]), default="both")
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "sieve"]), default="json")
@click.option("-o", "--output", "out", default=None, help="output path (stdout if omitted)")
def cmd_enumerate(quad, N, moiety, fmt, out):
    """Enumerate all curvatures up to N."""
    sieve = enumerate_packing(quad, N, moiety, with_counts=fmt == "csv")
    moieties = ("O", "E") if moiety == "both" else (moiety,)
    if fmt == "sieve":
        if out is None:
            raise click.UsageError("--format sieve needs -o PATH")
        sieve.save(out)
        _emit({"root": list(sieve.root), "N": N, "path": out, "circles": sieve.total})
    elif fmt == "csv":
        _write(_sieve_csv(sieve, moieties), out)
    else:
        payload = {"root": list(sieve.root), "N": N, "circles": sieve.total}
        for m in moieties:
            payload[f"curvatures_{m}"] = [int(v) for v in sieve.curvatures(m)]
        text = json.dumps({"eis_version": __version__, **payload})
        _write(text + "\n", out)


@cli.command("sporadic")
@QUAD
@click.option("-N", "--bound", "N", type=int, default=None)
@click.option("--moiety", type=click.Choice(["O", "E", "both"]), default="both")
@click.option("--sieve", "sieve_path", default=None, help="reuse a saved sieve instead of enumerating")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def cmd_sporadic(quad, N, moiety, sieve_path, fmt):
    """Sporadic curvatures of one or both moieties."""
    if sieve_path:
        sieve = CurvatureSieve.load(sieve_path, as_quadruple(quad))
        if N is not None and N != sieve.N:
            raise click.UsageError(f"sieve bound {sieve.N} differs from -N {N}")
    elif N is None:
        raise click.UsageError("give -N or --sieve")
    else:
        sieve = enumerate_packing(quad, N)
    reports = [sporadic_from_sieve(sieve, m) for m in (("O", "E") if moiety == "both" else (moiety,))]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["root", "moiety", "type", "N", "count", "max", "N/max"])
        for r in reports:
            w.writerow(r.table_row())
        click.echo(buf.getvalue(), nl=False)
    elif len(reports) == 1:
        _emit(reports[0].as_dict())
    else:
        _emit({"reports": [r.as_dict() for r in reports]})


@cli.command("count")
@click.option("-n", "--outer", "n", type=int, required=True, help="outer curvature is -n")
@click.option("--check/--no-check", default=True, help="cross-check against enumerated roots")
def cmd_count(n, check):
    """Number of primitive packings with outer curvature -n."""
    if n < 1:
        raise click.BadParameter("n must be positive", param_hint="-n")
    value = count_packings(n)
    payload = {"n": n, "count": value}
    if check:
        roots = roots_with_outer_curvature(n)
        payload["roots"] = [list(r) for r in roots]
        payload["matches"] = len(roots) == value
    _emit(payload)
    if check and not payload["matches"]:
        sys.exit(4)


@cli.command("forms")
@click.option("-D", "--disc", "D", type=int, default=None, help="list reduced forms of discriminant D")
@click.option("--reduce", "form", default=None, help="reduce the form A,B,C")
@click.option("--phi", "phi_quad", callback=_quad, default=None, help="form of a standard quadruple")
def cmd_forms(D, form, phi_quad):
    """Reduced first-odd forms, form reduction, and the quadruple-to-form map."""
    if sum(x is not None for x in (D, form, phi_quad)) != 1:
        raise click.UsageError("give exactly one of -D, --reduce, --phi")
    if D is not None:
        forms = enumerate_reduced_forms(D)
        _emit({"D": D, "count": len(forms), "forms": [f.as_list() for f in forms]})
    elif form is not None:
        f = FirstOddForm(*_ints(form, 3))
        g, m = reduce_form(f)
        _emit({"form": f.as_list(), "reduced": g.as_list(), "matrix": [list(r) for r in m]})
    else:
        _emit({"quadruple": list(phi_quad), "form": phi(phi_quad).as_list()})


@cli.command("chi2")
@click.option("-q", "--quadruple", "quad", callback=_quad, default=None)
@click.option("--n", "n", type=int, default=None, help="curvature")
@click.option("--b", "b", type=int, default=None, help="coprime tangent curvature")
@click.option("--t", "t", type=click.Choice(["1", "3"]), default=None, help="type residue")
def cmd_chi2(quad, n, b, t):
    """chi_2 of a packing's moieties, or of a single tangent pair."""
    if quad is not None:
        q = as_quadruple(quad)
        chi_o, chi_e = packing_chi2(q)
        tt = packing_type(q)
        _emit({"root": list(q), "type": f"(3,{tt})", "chi_O": chi_o, "chi_E": chi_e,
               "extended_O": f"(3,{tt},{chi_o})", "extended_E": f"(3,{tt},{chi_e})"})
    elif None not in (n, b, t):
        _emit({"n": n, "b": b, "t": int(t), "chi2": chi2(n, b, int(t))})
    else:
        raise click.UsageError("give -q, or all of --n, --b, --t")


@cli.command("growth")
@QUAD
@click.option("-N", "--bound", "N", type=int, required=True)
@click.option("--bins", type=int, default=1000)
def cmd_growth(quad, N, bins):
    """Fit the growth exponent of the circle count."""
    fit = fit_growth(quad, N, bins)
    _emit({"root": list(quad), "N": N, "delta": fit.delta, "c": fit.c, "r2": fit.r2, "bins": bins})


@cli.command("strongapprox")
@click.option("--level", type=int, default=4)
@click.option("--budget", type=int, default=10**6, help="word budget for the search levels")
@click.option("--json", "as_json", is_flag=True)
def cmd_strongapprox(level, budget, as_json):
    """Closure orders and identity fibres modulo powers of 2."""
    rows, verdict = strong_approx_report(level, budget=budget)
    if as_json:
        _emit({"levels": [r.__dict__ for r in rows], "verdict": verdict})
        return
    for r in rows:
        order = "-" if r.order is None else str(r.order)
        click.echo(f"level {r.k}: closure order {order}, identity fibre to 2^{r.k + 1}: {r.fibre}/64 ({r.method})")
    label = {"PASS": "PASS (bad modulus 16)"}.get(verdict, verdict)
    click.echo(label)


def _window(ctx, param, value):
    return None if value is None else Window.parse(value)


@cli.command("draw")
@QUAD
@click.option("-N", "--bound", "N", type=int, default=400)
@click.option("-o", "--output", "out", default=None)
@click.option("--window", callback=_window, default=None, help="xmin,xmax,ymin,ymax")
@click.option("--labels/--no-labels", default=True)
@click.option("--color-moiety", is_flag=True)
@click.option("--cap", type=int, default=DEFAULT_CAP)
def cmd_draw(quad, N, out, window, labels, color_moiety, cap):
    """SVG drawing of a packing up to curvature N."""
    spec = DrawSpec(N=N, window=window, labels=labels, color_moiety=color_moiety, cap=cap)
    _write(draw_packing(quad, spec), out)


@cli.command("schmidt")
@click.option("--max-s", "max_s", type=int, default=40)
@click.option("--window", callback=_window, default="-2,2,-2,2", help="xmin,xmax,ymin,ymax")
@click.option("--cosets", default="0,4")
@click.option("--format", "fmt", type=click.Choice(["svg", "csv"]), default="svg")
@click.option("-o", "--output", "out", default=None)
@click.option("--labels", is_flag=True)
@click.option("--cap", type=int, default=DEFAULT_CAP)
def cmd_schmidt(max_s, window, cosets, fmt, out, labels, cap):
    """Circles of the Schmidt arrangement in a window."""
    keep = None if cosets == "all" else set(_ints(cosets))
    circles = enumerate_window(max_s, window, keep)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "t", "x", "z", "coset"])
        w.writerows(window_csv_rows(circles))
        _write(buf.getvalue(), out)
    else:
        lines = keep is None or 0 in keep
        _write(draw_schmidt(circles, window, labels=labels, lines=lines, cap=cap), out)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="eis", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 2
    except click.Abort:
        return 2
    except EisError as e:
        click.echo(f"error: {e}", err=True)
        return e.exit_code
    except SystemExit as e:
        return int(e.code or 0)
    return 0


if __name__ == "__main__":
    sys.exit(main())
