"""Scenario files: a curve germ plus named forms.

Example::

    [curve]
    name = T7
    vars = x1, x2, x3
    weights = 3, 2, 2
    ideal = x1^2 + x2^3 + x3^3; x2*x3
    branch B1 = (t^3, 0, -t^2)
    component B1 = B1
    component_ideal B1 = x2; x1^2 + x3^3

    [basis]
    theta1 = dx2^dx3

    [forms]
    omega = dx2^dx3 + 2*dx1^dx3
    a = coords: 1, 0, 0, 0, 0, 0, 0
    b = symplectic: B1 = (t^3, 0, -t^2, 0); B2 = (...)

``symplectic:`` lines describe the branches in canonical coordinates
(p1, q1, p2, q2, ...); the form is the pullback of sum dp_i^dq_i to the model
variables.  The optional ``[basis]`` section names closed representatives that
replace the computed basis of the closed flavor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from typing import Optional

from .forms import DiffForm
from .germs import Branch, GermError, IdealPresentation, MultiGerm, reduce_ambient, symplectic_pullback, validate
from .parsing import ParseError, parse_form, parse_polynomial
from .poly import T, VarSet, format_polynomial, format_scalar
from .forms import format_form
from .restriction import ALL, CLOSED, GradedBasis, RestrictionClass, restriction_basis

SECTIONS = ("curve", "basis", "forms")


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class FormSpec:
    kind: str  # "form", "coords" or "symplectic"
    text: str


@dataclass
class Scenario:
    name: str
    family: str
    varset: VarSet
    generators: list
    branches: list
    components: dict
    component_ideals: dict
    drop: tuple = ()
    ambient: Optional[int] = None
    frame: tuple = ()
    basis_names: list = field(default_factory=list)
    basis_texts: list = field(default_factory=list)
    forms: dict = field(default_factory=dict)  # name -> FormSpec

    @cached_property
    def full_germ(self) -> MultiGerm:
        return MultiGerm(self.varset, IdealPresentation(self.varset, self.generators), self.branches,
                         self.components, self.component_ideals, name=self.name)

    @cached_property
    def germ(self) -> MultiGerm:
        g = self.full_germ
        report = validate(g)
        report.raise_if_invalid()
        if self.drop:
            g, _ = reduce_ambient(g, self.drop)
        return g

    @property
    def warnings(self) -> list:
        return validate(self.full_germ).warnings

    def basis(self, flavor: str = CLOSED, degree_cap: Optional[int] = None) -> GradedBasis:
        if degree_cap is not None:
            base = restriction_basis(self.germ, flavor, degree_cap)
            if flavor == CLOSED and self.basis_texts:
                return base.with_representatives(self._basis_forms(), self.basis_names)
            return base
        if flavor == CLOSED and self.basis_texts:
            return self._named_basis
        return restriction_basis(self.germ, flavor)

    def _basis_forms(self) -> list:
        return [self._reduce(parse_form(t, self.varset)) for t in self.basis_texts]

    @cached_property
    def _named_basis(self) -> GradedBasis:
        base = restriction_basis(self.germ, CLOSED)
        return base.with_representatives(self._basis_forms(), self.basis_names)

    def _reduce(self, form: DiffForm) -> DiffForm:
        if not self.drop:
            return form
        keep = [i for i, n in enumerate(self.varset.names) if n not in self.drop]
        return form.restrict_vars(keep)

    def parse_form(self, text: str) -> DiffForm:
        """A 2-form over the essential variables."""
        return self._reduce(parse_form(text, self.varset))

    def form(self, name: str) -> DiffForm:
        spec = self.forms[name]
        if spec.kind == "form":
            return self.parse_form(spec.text)
        if spec.kind == "coords":
            return self.restriction(name).representative()
        return symplectic_pullback(self.germ, parse_branch_list(spec.text))

    def restriction(self, name: str, flavor: str = CLOSED) -> RestrictionClass:
        spec = self.forms[name]
        basis = self.basis(flavor)
        if spec.kind == "coords":
            return basis.element(parse_coords(spec.text))
        return basis.restrict(self.form(name))

    def to_text(self) -> str:
        lines = ["[curve]", f"name = {self.name}"]
        if self.family:
            lines.append(f"family = {self.family}")
        lines.append("vars = " + ", ".join(self.varset.names))
        lines.append("weights = " + ", ".join(str(w) for w in self.varset.weights))
        lines.append("ideal = " + "; ".join(format_polynomial(h) for h in self.generators))
        for b in self.branches:
            lines.append(f"branch {b.name} = (" + ", ".join(format_polynomial(c) for c in b.coords) + ")")
        for comp, members in self.components.items():
            lines.append(f"component {comp} = " + ", ".join(members))
        for comp, gens in self.component_ideals.items():
            lines.append(f"component_ideal {comp} = " + "; ".join(format_polynomial(h) for h in gens))
        if self.drop:
            lines.append("drop = " + ", ".join(self.drop))
        if self.ambient:
            lines.append(f"ambient = {self.ambient}")
        if self.frame:
            lines.append("frame = " + ", ".join(self.frame))
        if self.basis_texts:
            lines += ["", "[basis]"]
            for n, t in zip(self.basis_names, self.basis_texts):
                lines.append(f"{n} = {format_form(parse_form(t, self.varset))}")
        if self.forms:
            lines += ["", "[forms]"]
            for n, spec in self.forms.items():
                if spec.kind == "form":
                    lines.append(f"{n} = {format_form(parse_form(spec.text, self.varset))}")
                elif spec.kind == "coords":
                    lines.append(f"{n} = coords: " + ", ".join(format_scalar(c) for c in parse_coords(spec.text)))
                else:
                    lines.append(f"{n} = symplectic: {spec.text}")
        return "\n".join(lines) + "\n"

    def same_as(self, other: "Scenario") -> bool:
        return self.to_text() == other.to_text()


def parse_coords(text: str) -> list:
    try:
        return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ScenarioError(f"bad coordinate list {text!r}") from exc


_TUPLE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_+-]*)\s*=\s*\((.*)\)\s*$")


def parse_branch_tuple(text: str):
    m = _TUPLE.match(text)
    if not m:
        raise ScenarioError(f"expected NAME = (poly, ...), got {text!r}")
    coords = [parse_polynomial(c, T) for c in _split_top(m.group(2), ",")]
    return m.group(1), coords


def parse_branch_list(text: str) -> dict:
    out = {}
    for part in _split_top(text, ";"):
        name, coords = parse_branch_tuple(part)
        out[name] = coords
    return out


def _split_top(text: str, sep: str) -> list:
    """Split on ``sep`` outside parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _names(text: str) -> list:
    return [x.strip() for x in text.split(",") if x.strip()]


def parse_scenario(text: str) -> Scenario:
    section = None
    curve = {}
    branches, components, comp_ideals = [], {}, {}
    basis_names, basis_texts, forms = [], [], {}
    raw_branches = []
    raw_comp_ideals = []
    ideal_text = None
    saw_content = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        saw_content = True
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise ScenarioError(f"unknown section [{section}]", lineno)
            continue
        if section is None:
            raise ScenarioError("content before the first section header", lineno)
        if "=" not in line:
            raise ScenarioError("expected KEY = VALUE", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if section == "curve":
            words = key.split()
            if words[0] == "branch" and len(words) == 2:
                raw_branches.append((lineno, words[1], value))
            elif words[0] == "component" and len(words) == 2:
                components[words[1]] = _names(value)
            elif words[0] == "component_ideal" and len(words) == 2:
                raw_comp_ideals.append((lineno, words[1], value))
            elif key == "ideal":
                ideal_text = (lineno, value)
            elif key in ("name", "family", "vars", "weights", "drop", "ambient", "frame"):
                curve[key] = (lineno, value)
            else:
                raise ScenarioError(f"unknown key {key!r} in [curve]", lineno)
        elif section == "basis":
            basis_names.append(key)
            basis_texts.append((lineno, value))
        else:
            if value.startswith("coords:"):
                forms[key] = FormSpec("coords", value[len("coords:"):].strip())
            elif value.startswith("symplectic:"):
                forms[key] = FormSpec("symplectic", value[len("symplectic:"):].strip())
            else:
                forms[key] = FormSpec("form", value)
    if not saw_content:
        raise ScenarioError("empty scenario")
    for req in ("vars", "weights"):
        if req not in curve:
            raise ScenarioError(f"[curve] is missing {req!r}")
    if ideal_text is None:
        raise ScenarioError("[curve] is missing 'ideal'")
    names = _names(curve["vars"][1])
    try:
        weights = [int(w) for w in _names(curve["weights"][1])]
        varset = VarSet(names, weights)
    except ValueError as exc:
        raise ScenarioError(str(exc), curve["weights"][0]) from exc

    def polys(lineno, value):
        try:
            return [parse_polynomial(p, varset) for p in _split_top(value, ";")]
        except ParseError as exc:
            raise ScenarioError(str(exc), lineno) from exc

    generators = polys(*ideal_text)
    for lineno, name, value in raw_branches:
        try:
            _, coords = parse_branch_tuple(f"{name} = {value}")
            branches.append(Branch(name, coords))
        except (ParseError, GermError) as exc:
            raise ScenarioError(str(exc), lineno) from exc
    for lineno, name, value in raw_comp_ideals:
        comp_ideals[name] = polys(lineno, value)
    for lineno, value in basis_texts:
        try:
            parse_form(value, varset)
        except ParseError as exc:
            raise ScenarioError(str(exc), lineno) from exc
    sc = Scenario(
        name=curve.get("name", (0, ""))[1],
        family=curve.get("family", (0, ""))[1],
        varset=varset,
        generators=generators,
        branches=branches,
        components=components,
        component_ideals=comp_ideals,
        drop=tuple(_names(curve["drop"][1])) if "drop" in curve else (),
        ambient=int(curve["ambient"][1]) if "ambient" in curve else None,
        frame=tuple(_names(curve["frame"][1])) if "frame" in curve else (),
        basis_names=basis_names,
        basis_texts=[v for _, v in basis_texts],
        forms=forms,
    )
    try:
        sc.germ
    except GermError as exc:
        raise ScenarioError(f"invalid curve: {exc}") from exc
    return sc


def shipped_scenarios() -> list:
    files = resources.files("algrest") / "scenarios"
    return sorted(p.name[:-4] for p in files.iterdir() if p.name.endswith(".scn"))


def load_scenario(name_or_path: str) -> Scenario:
    """Load a shipped scenario by name (``t7``) or a file by path."""
    from pathlib import Path

    p = Path(name_or_path)
    if p.suffix == ".scn" and p.exists():
        return parse_scenario(p.read_text())
    res = resources.files("algrest") / "scenarios" / f"{name_or_path}.scn"
    if not res.is_file():
        raise ScenarioError(f"no scenario named {name_or_path!r}")
    return _load_shipped(name_or_path)


_CACHE = {}


def _load_shipped(name: str) -> Scenario:
    if name not in _CACHE:
        text = (resources.files("algrest") / "scenarios" / f"{name}.scn").read_text()
        _CACHE[name] = parse_scenario(text)
    return _CACHE[name]
