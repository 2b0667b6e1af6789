"""Reading lattice, site, valuation and region description files.

Files are YAML.  A lattice is given by ``elements`` (labels) and ``leq``
(label pairs whose reflexive-transitive closure is the order), either at top
level or under a ``lattice`` key::

    elements: [0, U, 1]
    leq: [[0, U], [U, 1]]
    coverage:
      kind: mu-inner            # or finite-join, or explicit
      valuation: {0: 0, U: 1/2, 1: 1}
    # explicit coverages instead list generating covers:
    #   covers: [[1, [U]]]

A top-level ``valuation`` map is accepted as well.  Values are integers or
``p/q`` strings; floats are rejected.  Regions are ``dim``, ``thinness`` and
``cubes`` (integer corner vectors).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from .dyadic import StandardSet
from .errors import ParseError
from .order import FiniteLattice, build_lattice
from .site import CoverageKind, Site
from .valuation import Valuation, check_valuation, to_rat


@dataclass(frozen=True)
class SiteFile:
    path: str
    lattice: FiniteLattice
    site: Site
    valuation: Valuation | None
    raw: dict


def load_yaml(path: str | Path) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", location=str(p)) from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{p}:{mark.line + 1}:{mark.column + 1}" if mark else str(p)
        problem = getattr(exc, "problem", None) or str(exc)
        raise ParseError(f"invalid YAML: {problem}", location=where) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be a mapping", location=str(p))
    return data


def _label(x: Any, where: str) -> str:
    if isinstance(x, (dict, list)) or x is None:
        raise ParseError(f"expected an element label, got {x!r}", location=where)
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(x)


def _rational(x: Any, where: str) -> Fraction:
    try:
        return to_rat(x)
    except ValueError as exc:
        raise ParseError(str(exc), location=where) from None


def parse_lattice(data: dict, where: str) -> FiniteLattice:
    block = data.get("lattice", data)
    if not isinstance(block, dict):
        raise ParseError("lattice block must be a mapping", location=f"{where}: lattice")
    elements = block.get("elements")
    if not isinstance(elements, list) or not elements:
        raise ParseError("'elements' must be a nonempty list", location=f"{where}: elements")
    labels = [_label(e, f"{where}: elements[{i}]") for i, e in enumerate(elements)]
    if len(set(labels)) != len(labels):
        dup = next(x for x in labels if labels.count(x) > 1)
        raise ParseError(f"duplicate element label {dup!r}", location=f"{where}: elements")
    pairs = block.get("leq", [])
    if not isinstance(pairs, list):
        raise ParseError("'leq' must be a list of pairs", location=f"{where}: leq")
    known = set(labels)
    out = []
    for i, pair in enumerate(pairs):
        loc = f"{where}: leq[{i}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"expected a pair, got {pair!r}", location=loc)
        a, b = _label(pair[0], loc), _label(pair[1], loc)
        for x in (a, b):
            if x not in known:
                raise ParseError(f"unknown element {x!r}", location=loc)
        out.append((a, b))
    return build_lattice(labels, out)


def parse_values(lattice: FiniteLattice, block: Any, where: str) -> dict[str, Fraction]:
    if not isinstance(block, dict):
        raise ParseError("valuation must be a mapping from labels to values", location=where)
    values = {}
    for key, raw in block.items():
        label = _label(key, where)
        if label not in lattice.labels:
            raise ParseError(f"unknown element {label!r}", location=f"{where}.{label}")
        values[label] = _rational(raw, f"{where}.{label}")
    return values


def parse_valuation(lattice: FiniteLattice, block: Any, where: str) -> Valuation:
    values = parse_values(lattice, block, where)
    missing = [x for x in lattice.labels if x not in values]
    if missing:
        raise ParseError(f"valuation is missing elements {missing}", location=where)
    return check_valuation(lattice, values)


def parse_site(data: dict, where: str) -> SiteFile:
    lattice = parse_lattice(data, where)
    coverage = data.get("coverage", {"kind": "finite-join"})
    if not isinstance(coverage, dict):
        raise ParseError("coverage must be a mapping", location=f"{where}: coverage")
    kind_name = coverage.get("kind", "finite-join")
    try:
        kind = CoverageKind(kind_name)
    except ValueError:
        raise ParseError(f"unknown coverage kind {kind_name!r}", location=f"{where}: coverage.kind") from None
    val_block = coverage.get("valuation", data.get("valuation"))
    valuation = None
    if val_block is not None:
        vwhere = f"{where}: coverage.valuation" if "valuation" in coverage else f"{where}: valuation"
        valuation = parse_valuation(lattice, val_block, vwhere)
    if kind is CoverageKind.MU_INNER:
        if valuation is None:
            raise ParseError("mu-inner coverage needs a valuation", location=f"{where}: coverage")
        site = Site.mu_inner(valuation)
    elif kind is CoverageKind.FINITE_JOIN:
        site = Site.finite_join(lattice)
    else:
        covers = coverage.get("covers", [])
        if not isinstance(covers, list):
            raise ParseError("covers must be a list", location=f"{where}: coverage.covers")
        spec = []
        for i, item in enumerate(covers):
            loc = f"{where}: coverage.covers[{i}]"
            if not isinstance(item, list) or len(item) != 2 or not isinstance(item[1], list):
                raise ParseError("expected [target, [members...]]", location=loc)
            target = _label(item[0], loc)
            members = [_label(x, loc) for x in item[1]]
            for x in [target, *members]:
                if x not in lattice.labels:
                    raise ParseError(f"unknown element {x!r}", location=loc)
            spec.append((target, members))
        site = Site.explicit(lattice, spec, by_label=True)
    return SiteFile(where, lattice, site, valuation, data)


def read_site_file(path: str | Path) -> SiteFile:
    """Parse a site (or lattice, or lattice-plus-valuation) description file."""
    return parse_site(load_yaml(path), str(path))


def parse_site_file(path: str | Path) -> SiteFile:
    return read_site_file(path)


def parse_region(data: dict, where: str) -> StandardSet:
    try:
        dim = int(data["dim"])
        thinness = int(data.get("thinness", 0))
    except (KeyError, TypeError, ValueError):
        raise ParseError("region needs integer 'dim' and 'thinness'", location=where) from None
    cubes = data.get("cubes", [])
    if not isinstance(cubes, list):
        raise ParseError("'cubes' must be a list of integer vectors", location=f"{where}: cubes")
    out = []
    for i, c in enumerate(cubes):
        loc = f"{where}: cubes[{i}]"
        if not isinstance(c, list) or len(c) != dim or not all(isinstance(x, int) and not isinstance(x, bool) for x in c):
            raise ParseError(f"expected {dim} integers, got {c!r}", location=loc)
        out.append(c)
    return StandardSet.from_cubes(dim, thinness, out)


def read_region_file(path: str | Path) -> StandardSet:
    return parse_region(load_yaml(path), str(path))


def parse_vector(text: str, where: str = "--vector") -> list[Fraction]:
    out = []
    for part in text.split(","):
        part = part.strip()
        try:
            out.append(Fraction(part))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational: {part!r}", location=where) from None
    return out
