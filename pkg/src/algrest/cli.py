"""Command line interface: ``algrest <command> <scenario> ...``.

Scenarios are shipped names (``t7``, ``t8``, ``a2`` ...) or paths to ``.scn``
files.  Forms are given as expressions such as ``x3^2*dx1^dx3 + dx2^dx3``,
as the name of a form in the scenario, or as ``coords: c1, c2, ...`` over the
closed basis.  Polynomials use ``3/2*x1^2*x3`` style terms.

Exit codes: 0 success, 1 diff or validation failure, 2 usage error.
"""

from __future__ import annotations

import json
import math
import sys
from fractions import Fraction
from typing import Optional

import click

from . import tables
from .classify import (
    ClassificationError,
    classify_by_invariants,
    classify_t7,
    classify_t8,
    format_value,
    t7_moduli_report,
)
from .germs import GermError
from .invariants import invariant_report
from .parsing import ParseError, parse_polynomial
from .restriction import ALL, CLOSED, RestrictionError, StabilizationError
from .scenario import ScenarioError, load_scenario, parse_coords, shipped_scenarios
from .tangent import action_table, euler_field, hamiltonian_fields

FORMATS = click.Choice(["text", "csv", "json-lines"])
USER_ERRORS = (ScenarioError, ParseError, GermError, ClassificationError, RestrictionError, StabilizationError)


class Failure(click.ClickException):
    exit_code = 1


# output


def cell(x) -> str:
    return tables.format_cell(x)


def _json_value(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, float) and math.isinf(x):
        return format_value(x)
    if isinstance(x, (Fraction, float)):
        return format_value(x)
    return str(x)


def _csv_field(x) -> str:
    # identifiers are unquoted, so commas inside a cell become semicolons
    return cell(x).replace(", ", ";").replace(",", ";")


def emit(header: list, rows: list, fmt: str, extra: Optional[dict] = None) -> str:
    """Serialize ``rows`` (lists aligned with ``header``) deterministically."""
    if fmt == "csv":
        lines = [",".join(header)] + [",".join(_csv_field(x) for x in r) for r in rows]
    elif fmt == "json-lines":
        lines = []
        for r in rows:
            obj = dict(extra or {})
            obj.update({h: _json_value(x) for h, x in zip(header, r)})
            lines.append(json.dumps(obj, ensure_ascii=False))
    else:
        text = [[cell(x) for x in r] for r in rows]
        widths = [max([len(h)] + [len(t[i]) for t in text]) for i, h in enumerate(header)]
        lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
        lines += ["  ".join(t.ljust(w) for t, w in zip(r, widths)).rstrip() for r in text]
    return "\n".join(lines)


# argument helpers


def _scenario(name: str):
    try:
        return load_scenario(name)
    except ScenarioError as exc:
        known = ", ".join(shipped_scenarios())
        raise Failure(f"{exc} (shipped scenarios: {known})") from exc


def _class_of(sc, basis, text: str):
    """Restriction class of a named form, a coordinate list or a form expression."""
    text = text.strip()
    if text in sc.forms:
        return basis.restrict(sc.form(text))
    if text.startswith("coords:"):
        return basis.element(parse_coords(text[len("coords:"):]))
    return basis.restrict(sc.parse_form(text))


def _form_of(sc, basis, text: str):
    text = text.strip()
    if text in sc.forms:
        return sc.form(text)
    if text.startswith("coords:"):
        return basis.element(parse_coords(text[len("coords:"):])).representative()
    return sc.parse_form(text)


def _capped(x, cap: Optional[int]):
    if cap is not None and isinstance(x, (int, Fraction)) and x > cap:
        return f">{cap}"
    return x


def _guard(fn):
    """Turn library errors into exit code 1 with a one-line message."""
    import functools

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except USER_ERRORS as exc:
            raise Failure(str(exc)) from exc

    return wrapper


fmt_option = click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
cap_option = click.option("--degree-cap", type=click.IntRange(min=0), default=None,
                          help="Stop the graded basis search at this quasi-degree.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Algebraic restrictions of 2-forms to quasi-homogeneous curve germs."""


@main.command()
@click.argument("scenario")
@click.option("--flavor", type=click.Choice([ALL, CLOSED]), default=CLOSED, show_default=True)
@fmt_option
@cap_option
@_guard
def basis(scenario, flavor, fmt, degree_cap):
    """Print the dimension and representatives of the restriction space."""
    sc = _scenario(scenario)
    b = sc.basis(flavor, degree_cap)
    rows = [[n, e.degree, _form_text(e.form)] for n, e in zip(b.names(), b.entries)]
    if fmt == "text":
        click.echo(f"{sc.name or scenario} {flavor}: dim {b.dim}")
    click.echo(emit(["name", "degree", "form"], rows, fmt, {"scenario": sc.name}))


def _form_text(form) -> str:
    from .forms import format_form

    return format_form(form)


@main.command()
@click.argument("scenario")
@click.option("--omega", required=True, help="Form expression, scenario form name, or coords: list.")
@click.option("--flavor", type=click.Choice([ALL, CLOSED]), default=CLOSED, show_default=True)
@fmt_option
@cap_option
@_guard
def restrict(scenario, omega, flavor, fmt, degree_cap):
    """Coordinates of the restriction class of a form."""
    sc = _scenario(scenario)
    b = sc.basis(flavor, degree_cap)
    a = _class_of(sc, b, omega)
    rows = [[n, c] for n, c in zip(b.names(), a.coords)]
    if fmt == "text":
        click.echo(str(a))
    click.echo(emit(["basis", "coefficient"], rows, fmt))


@main.command()
@click.argument("scenario")
@click.option("--omega", default=None, help="Form expression, scenario form name, or coords: list.")
@click.option("--coords", default=None, help="Coordinates over the closed basis, comma separated.")
@fmt_option
@cap_option
@_guard
def classify(scenario, omega, coords, fmt, degree_cap):
    """Normal-form class, moduli and realizable ambient dimensions."""
    if (omega is None) == (coords is None):
        raise click.UsageError("give exactly one of --omega and --coords")
    sc = _scenario(scenario)
    b = sc.basis(CLOSED, degree_cap)
    a = b.element(parse_coords(coords)) if coords is not None else _class_of(sc, b, omega)
    family = (sc.family or sc.name).upper()
    extra = []
    if family == "T7":
        label = classify_t7(a.coords)
        extra.append(("moduli directions", " ".join(t7_moduli_report(b, a)) or "none"))
    elif family == "T8":
        label = classify_t8(b, a)
    elif family in ("A", "D"):
        label = classify_by_invariants(family, b, a, _family_index(sc))
    elif family == "E6":
        label = classify_by_invariants("E6", b, a)
    else:
        raise Failure(f"no classifier for family {sc.family!r}")
    rows = [["class", label.name], ["subcase", label.subcase or "-"]]
    rows += [[f"modulus {k}", format_value(v)] for k, v in label.moduli.items()]
    rows.append(["realizable", str(label.realizable) if label.realizable else "-"])
    rows += [list(e) for e in extra]
    if label.notes:
        rows.append(["note", label.notes])
    click.echo(emit(["field", "value"], rows, fmt))


def _family_index(sc) -> int:
    digits = "".join(ch for ch in sc.name if ch.isdigit())
    if not digits:
        raise Failure(f"cannot read k from scenario name {sc.name!r}")
    return int(digits)


def _parse_relative(spec: str, germ) -> tuple:
    """``B1=3,B2=own`` -> (other branches, {branch: order or None})."""
    req = {}
    for part in spec.split(","):
        if "=" not in part:
            raise click.BadParameter(f"expected NAME=order, got {part!r}", param_hint="--relative")
        name, order = (s.strip() for s in part.split("=", 1))
        members = germ.components.get(name, [name])
        for m in members:
            germ.branch(m)
            if order in ("own", "lt"):
                req[m] = None
            elif order == "inf":
                req[m] = math.inf
            else:
                try:
                    req[m] = int(order)
                except ValueError:
                    raise click.BadParameter(f"bad order {order!r}", param_hint="--relative") from None
    others = [br.name for br in germ.branches if br.name not in req]
    return others, req


@main.command()
@click.argument("scenario")
@click.option("--omega", required=True, help="Form expression, scenario form name, or coords: list.")
@click.option("--component", "components", multiple=True, help="Also report this component (repeatable).")
@click.option("--relative", default=None, help="Required orders, e.g. C1=own or B1=3,B2=own.")
@click.option("--geometry", is_flag=True, help="Add the tangent-plane and condition I-IV report.")
@click.option("--lt-cap", type=click.IntRange(min=0), default=None, help="Print finite orders above this as >cap.")
@fmt_option
@cap_option
@_guard
def invariants(scenario, omega, components, relative, geometry, lt_cap, fmt, degree_cap):
    """Lagrangian tangency orders, index of isotropy and symplectic multiplicity."""
    sc = _scenario(scenario)
    b = sc.basis(CLOSED, degree_cap)
    w = _form_of(sc, b, omega)
    g = b.germ
    if components:
        for comp in components:
            if comp not in g.components:
                raise Failure(f"unknown component {comp!r}; known: {', '.join(g.components)}")
    rel = None
    if relative:
        rel = {"relative": _parse_relative(relative, g)}
    rep = invariant_report(b, w, components, rel, with_geometry=geometry, frame_groups=list(sc.frame) or None)
    rows = [["Lt", _capped(rep.lt, lt_cap)], ["ind", rep.ind], ["mu", rep.mu]]
    for comp in components:
        rows.append([f"Lt({comp})", _capped(rep.component_lt[comp], lt_cap)])
        rows.append([f"ind({comp})", rep.component_ind[comp]])
    if len(components) > 1:
        rows += [["L_near", _capped(rep.lt_near, lt_cap)], ["L_far", _capped(rep.lt_far, lt_cap)],
                 ["ind_near", rep.ind_near], ["ind_far", rep.ind_far]]
    if rel:
        rows.append(["Lt relative", _capped(rep.relative["relative"], lt_cap)])
    if rep.geometry is not None:
        geo = rep.geometry
        for (i, j), iso in sorted(geo.plane_isotropic.items()):
            rows.append([f"l{i}+l{j} isotropic", iso])
        for k, v in geo.conditions().items():
            rows.append([f"condition {k}", v])
        for comp, lag in geo.lagrangian_components.items():
            rows.append([f"{comp} in Lagrangian", lag])
        rows.append(["germ in Lagrangian", geo.lagrangian_germ])
    click.echo(emit(["invariant", "value"], rows, fmt))


def _generator(text: str, v, ham: dict):
    """``x3^2*E`` (monomial times Euler field) or ``X_H(1,2,3)``."""
    text = text.strip()
    if text.startswith("X_H"):
        key = text[3:].strip("() ")
        idx = tuple(int(s) - 1 for s in key.split(",")) if key else ()
        if idx not in ham:
            raise click.BadParameter(f"no Hamiltonian field {text!r}; known: "
                                     + ", ".join(f"X_H({','.join(str(i + 1) for i in k)})" for k in ham),
                                     param_hint="--generators")
        return ham[idx]
    E = euler_field(v)
    if text == "E":
        return E
    if not text.endswith("*E"):
        raise click.BadParameter(f"expected a monomial times E, got {text!r}", param_hint="--generators")
    return E * parse_polynomial(text[:-2], v)


@main.command("action-table")
@click.argument("scenario")
@click.option("--generators", default=None,
              help="Comma separated fields, e.g. E,x3*E,x2^2*E,X_H(1,2,3). Default: every monomial "
                   "multiple of E with a nonzero row.")
@fmt_option
@cap_option
@_guard
def action_table_cmd(scenario, generators, fmt, degree_cap):
    """Infinitesimal actions of tangent fields on the closed basis."""
    from .poly import Polynomial, format_monomial, monomials_up_to

    sc = _scenario(scenario)
    b = sc.basis(CLOSED, degree_cap)
    v = b.varset
    ham = dict(hamiltonian_fields(b.germ))
    if generators:
        labels = [s.strip() for s in generators.split(",") if s.strip()]
        # commas inside X_H(...) were split; glue them back
        labels = _rejoin(labels)
        fields = [_generator(s, v, ham) for s in labels]
        table = action_table(b, fields)
    else:
        E = euler_field(v)
        labels, table = [], []
        span = b.top_degree - min(b.degrees, default=0)
        for m in monomials_up_to(v, span):
            mono = format_monomial(v, m)
            row = action_table(b, [E * Polynomial.monomial(v, m)])[0]
            if mono and all(c.is_zero() for c in row):
                continue
            labels.append(f"{mono}*E" if mono else "E")
            table.append(row)
    rows = [[lab] + [tables.class_text(c) for c in row] for lab, row in zip(labels, table)]
    click.echo(emit(["field"] + list(b.names()), rows, fmt))


def _rejoin(parts: list) -> list:
    out, buf = [], []
    for p in parts:
        buf.append(p)
        joined = ",".join(buf)
        if joined.count("(") == joined.count(")"):
            out.append(joined)
            buf = []
    if buf:
        out.append(",".join(buf))
    return out


@main.command()
@click.argument("table_id")
@fmt_option
def reproduce(table_id, fmt):
    """Recompute a stored invariant table (or all of them) and diff it against the goldens."""
    ids = tables.table_ids() if table_id in ("all", "*") else [table_id]
    for t in ids:
        if t not in tables.TABLES:
            raise click.BadParameter(f"unknown table {t!r}; choose from {', '.join(tables.TABLES)}, all",
                                     param_hint="TABLE_ID")
    failed = False
    blocks = []
    for t in ids:
        try:
            res = tables.reproduce(t)
        except USER_ERRORS as exc:
            raise Failure(f"{t}: {exc}") from exc
        rows = [[r.label] + list(r.computed) for r in res.rows]
        header = [res.label_column] + list(res.columns)
        out = emit(header, rows, fmt, {"table": t})
        diffs = res.diffs()
        if fmt == "text":
            lines = [f"== {t}", out]
            for (row, col), note in sorted(res.provenance.items()):
                lines.append(f"   note: {row} / {col}: {note}")
            for row, col, got, want in diffs:
                lines.append(f"   DIFF {row} / {col}: computed {cell(got)}, expected {cell(want)}")
            lines.append(f"{t}: {'PASS' if not diffs else 'FAIL'} ({res.checked_cells()} cells checked, "
                         f"{len(diffs)} differ)")
            blocks.append("\n".join(lines))
        else:
            blocks.append(out)
            for row, col, got, want in diffs:
                click.echo(f"DIFF {t} {row} / {col}: computed {cell(got)}, expected {cell(want)}", err=True)
        failed = failed or bool(diffs)
    click.echo(("\n\n" if fmt != "json-lines" else "\n").join(blocks))
    if failed:
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()
