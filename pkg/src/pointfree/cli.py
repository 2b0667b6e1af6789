"""Command-line interface.

Exit status is 0 on success, 1 when a verification fails (the witness is
printed), and 2 on unreadable or out-of-scope input.

``--json-lines`` switches to line-delimited JSON: a versioned header line,
then one object per result.  That output carries no timings, so identical
requests give byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import __version__
from .coin import fat_cantor, no_complement_fibers, recurrence_value
from .dyadic import (
    ShearSpec,
    measure_standard,
    shear_bracket,
    standard_set_site,
    svc_stage,
    translate_s,
)
from .errors import CapExceeded, DimMismatch, ParseError, PointfreeError, ScopeError
from .frame import (
    FiniteFrame,
    FrameMap,
    atoms,
    boolean_sublocale,
    complement_of,
    enumerate_sublocales,
    is_boolean,
)
from .fuzz import KINDS, fuzz_campaign
from .inner import (
    exhaustion,
    finite_part_roundtrip,
    inner_frame,
    is_almost_boolean,
    is_almost_disconnected,
    theorem_equivalence_check,
)
from .io import (
    load_yaml,
    parse_lattice,
    parse_values,
    read_region_file,
    read_site_file,
    parse_vector,
)
from .order import bits, to_mask
from .site import SHEAF_ENUMERATION_CAP, enumerate_points, ideal_label, sheafify
from .valuation import (
    check_valuation,
    faithfulness_witness,
    glue_measures,
    pushforward_measure,
    quotient_by_congruence,
)

FORMAT_NAME = "pointfree-report"
FORMAT_VERSION = 1


class VerificationFailed(Exception):
    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=str) if isinstance(x, (set, frozenset)) else items
    return x


class Reporter:
    """Collects result records and prints them as text or JSON lines."""

    def __init__(self, json_lines: bool, command: str, echo: dict):
        self.json_lines = json_lines
        self.command = command
        self.echo = echo
        self.started = time.perf_counter()
        if json_lines:
            header = {"format": FORMAT_NAME, "version": FORMAT_VERSION, "command": command, "inputs": echo}
            self._emit(header)
        else:
            print(f"# {command}")

    def _emit(self, obj: dict) -> None:
        print(json.dumps(_jsonable(obj), sort_keys=True, separators=(",", ":")))

    def record(self, section: str, **fields: Any) -> None:
        if self.json_lines:
            self._emit({"section": section, **fields})
            return
        print(f"[{section}]")
        for k, v in fields.items():
            print(f"  {k}: {_text(v)}")

    def table(self, section: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
        if self.json_lines:
            for row in rows:
                self._emit({"section": section, **dict(zip(header, row))})
            return
        print(f"[{section}]")
        cells = [[_text(c) for c in row] for row in rows]
        widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(header)]
        print("  " + "  ".join(h.ljust(w) for h, w in zip(header, widths)))
        for r in cells:
            print("  " + "  ".join(c.ljust(w) for c, w in zip(r, widths)))

    def finish(self, status: int) -> None:
        if self.json_lines:
            self._emit({"section": "status", "exit": status})
        else:
            print(f"[status] exit {status} ({time.perf_counter() - self.started:.3f} s)")


def _text(v: Any) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_text(x) for x in v) + "]"
    if isinstance(v, (set, frozenset)):
        return "{" + ", ".join(sorted(_text(x) for x in v)) + "}"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_text(x)}" for k, x in v.items()) + "}"
    return str(v)


def _decimal(x: Fraction) -> str:
    return f"{float(x):.6g}"


# helpers ----------------------------------------------------------------------
def _cap(args) -> int | None:
    if args.cap is not None and args.cap > SHEAF_ENUMERATION_CAP:
        print(f"warning: raising the enumeration cap to {args.cap}; enumeration is exponential", file=sys.stderr)
    return args.cap


def _need_file(args) -> str:
    if not args.file:
        raise ParseError("this command needs --file")
    return args.file


def _site(args):
    return read_site_file(_need_file(args))


def _valuation(args):
    sf = _site(args)
    if sf.valuation is None:
        raise ParseError("file has no valuation", location=sf.path)
    return sf.valuation


def _frame_report(rep: Reporter, frame: FiniteFrame) -> None:
    lat = frame.lattice
    rep.record("frame", size=frame.size, elements=list(lat.labels), boolean=is_boolean(frame),
               atoms=[frame.label(a) for a in atoms(frame)])
    rep.table("hasse", ["lower", "upper"], [(lat.label(a), lat.label(b)) for a, b in lat.hasse_edges()])


def _element(frame: FiniteFrame, label: str, what: str) -> int:
    try:
        return frame.index(label)
    except (KeyError, ValueError, PointfreeError):
        raise ParseError(f"unknown frame element {label!r}; elements are {list(frame.lattice.labels)}",
                         location=what) from None


def _members(lattice, text: str | None, what: str) -> list[int]:
    if not text:
        return []
    out = []
    for part in text.split(","):
        part = part.strip()
        if part not in lattice.labels:
            raise ParseError(f"unknown element {part!r}", location=what)
        out.append(lattice.index(part))
    return out


# verbs ------------------------------------------------------------------------
def cmd_lattice_check(args, rep: Reporter) -> int:
    sf = _site(args)
    lat = sf.lattice
    rep.record("lattice", size=lat.size, bottom=lat.label(lat.bottom),
               top=lat.label(lat.top) if lat.top is not None else None, distributive=True)
    rep.table("hasse", ["lower", "upper"], [(lat.label(a), lat.label(b)) for a, b in lat.hasse_edges()])
    return 0


def cmd_site_sheafify(args, rep: Reporter) -> int:
    sf = _site(args)
    lat = sf.lattice
    members = _members(lat, args.members, "--members")
    result = sheafify(sf.site, members)
    rep.record("sheafify", input=[lat.label(p) for p in members],
               result=[lat.label(p) for p in sorted(result)], label=ideal_label(lat, result))
    return 0


def cmd_site_frame(args, rep: Reporter) -> int:
    sf = _site(args)
    frame = FiniteFrame.from_site(sf.site, _cap(args))
    lat = sf.lattice
    rep.table("ideals", ["element", "members"],
              [(frame.label(u), [lat.label(p) for p in sorted(frame.ideal(u))]) for u in frame.elements])
    _frame_report(rep, frame)
    return 0


def cmd_site_inner(args, rep: Reporter) -> int:
    v = _valuation(args)
    report = inner_frame(v, _cap(args))
    frame = report.frame
    rows = [(frame.label(u), report.inner_measure[u], _decimal(report.inner_measure[u])) for u in frame.elements]
    _frame_report(rep, frame)
    rep.table("inner_measure", ["element", "value", "approx"], rows)
    rep.record("verdict", boolean=report.boolean, faithful=report.faithful,
               null_ideal=[v.lattice.label(p) for p in sorted(report.null_ideal)])
    return 0


def cmd_site_points(args, rep: Reporter) -> int:
    sf = _site(args)
    lat = sf.lattice
    points = enumerate_points(sf.site, _cap(args))
    rep.record("points", count=len(points))
    rep.table("point", ["generator", "members"],
              [(lat.label(lat.meet_mask(to_mask(p))), [lat.label(x) for x in sorted(p)]) for p in points])
    return 0


def _site_frame(args) -> FiniteFrame:
    return FiniteFrame.from_site(_site(args).site, _cap(args))


def cmd_frame_heyting(args, rep: Reporter) -> int:
    frame = _site_frame(args)
    if args.u is None or args.v is None:
        rows = [(frame.label(u), frame.label(w), frame.label(frame.heyting(u, w)))
                for u in frame.elements for w in frame.elements]
        rep.table("heyting", ["u", "v", "u->v"], rows)
        return 0
    u, w = _element(frame, args.u, "--u"), _element(frame, args.v, "--v")
    rep.record("heyting", u=args.u, v=args.v, result=frame.label(frame.heyting(u, w)))
    return 0


def cmd_frame_negation(args, rep: Reporter) -> int:
    frame = _site_frame(args)
    targets = [_element(frame, args.u, "--u")] if args.u else list(frame.elements)
    rows = []
    for u in targets:
        c = complement_of(frame, u)
        rows.append((frame.label(u), frame.label(frame.negation(u)), c is not None))
    rep.table("negation", ["u", "not u", "complemented"], rows)
    return 0


def cmd_frame_boolean(args, rep: Reporter) -> int:
    frame = _site_frame(args)
    bad = [frame.label(u) for u in frame.elements if complement_of(frame, u) is None]
    rep.record("boolean", boolean=not bad, uncomplemented=bad, atoms=[frame.label(a) for a in atoms(frame)])
    return 0


def cmd_frame_sublocales(args, rep: Reporter) -> int:
    frame = _site_frame(args)
    subs = enumerate_sublocales(frame, args.cap)
    rep.record("sublocales", count=len(subs))
    rep.table("sublocale", ["members", "kind"],
              [([frame.label(x) for x in sorted(s.members)], s.kind) for s in subs])
    return 0


def cmd_frame_bsub(args, rep: Reporter) -> int:
    frame = _site_frame(args)
    n = _element(frame, args.n, "--n") if args.n else frame.bottom
    sub, quotient = boolean_sublocale(frame, n)
    rep.record("bsub", n=frame.label(n), carrier=list(sub.lattice.labels), boolean=is_boolean(sub))
    rep.table("quotient", ["u", "image"], [(frame.label(u), sub.label(quotient(u))) for u in frame.elements])
    return 0


def cmd_valuation_check(args, rep: Reporter) -> int:
    data = load_yaml(_need_file(args))
    lat = parse_lattice(data, args.file)
    block = data.get("coverage", {}).get("valuation", data.get("valuation"))
    values = parse_values(lat, block, f"{args.file}: valuation")
    try:
        v = check_valuation(lat, values)
    except PointfreeError as exc:
        raise VerificationFailed(f"{type(exc).__name__}: {exc}", exc.witness) from None
    w = faithfulness_witness(v)
    rep.record("valuation", valid=True, faithful=w is None,
               witness=[lat.label(w[0]), lat.label(w[1])] if w else None, total=v.total)
    return 0


def cmd_valuation_quotient(args, rep: Reporter) -> int:
    v = _valuation(args)
    qv, proj = quotient_by_congruence(v)
    ql = qv.lattice
    rep.record("quotient", size=ql.size, elements=list(ql.labels), values=[str(x) for x in qv.values])
    rep.table("projection", ["element", "class"],
              [(v.lattice.label(p), ql.label(proj(p))) for p in v.lattice.elements])
    return 0


def cmd_valuation_glue(args, rep: Reporter) -> int:
    data = load_yaml(_need_file(args))
    lat = parse_lattice(data, args.file)
    block = data.get("glue")
    if not isinstance(block, dict):
        raise ParseError("needs a 'glue' block with u, v, m_u, m_v", location=f"{args.file}: glue")
    try:
        u, w = lat.index(str(block["u"])), lat.index(str(block["v"]))
    except (KeyError, ValueError, PointfreeError):
        raise ParseError("glue.u and glue.v must be element labels", location=f"{args.file}: glue") from None
    mu = {lat.index(k): x for k, x in parse_values(lat, block.get("m_u"), f"{args.file}: glue.m_u").items()}
    mv = {lat.index(k): x for k, x in parse_values(lat, block.get("m_v"), f"{args.file}: glue.m_v").items()}
    try:
        glued = glue_measures(lat, u, w, mu, mv)
    except PointfreeError as exc:
        raise VerificationFailed(f"{type(exc).__name__}: {exc}", exc.witness) from None
    rep.table("glued", ["element", "value"], [(lat.label(p), glued[p]) for p in sorted(glued)])
    return 0


def cmd_valuation_push(args, rep: Reporter) -> int:
    data = load_yaml(_need_file(args))
    source = FiniteFrame(parse_lattice(data["source"], f"{args.file}: source")) if "source" in data else None
    target = FiniteFrame(parse_lattice(data["target"], f"{args.file}: target")) if "target" in data else None
    if source is None or target is None or not isinstance(data.get("map"), dict):
        raise ParseError("needs 'source', 'target' lattices and a 'map' (source label -> target label)",
                         location=args.file)
    table = [0] * source.size
    for k, x in data["map"].items():
        table[_element(source, str(k), f"{args.file}: map")] = _element(target, str(x), f"{args.file}: map")
    f = FrameMap(source, target, tuple(table))
    problem = f.violation()
    if problem:
        raise VerificationFailed(f"map is not a frame homomorphism: {problem}")
    m = parse_values(target.lattice, data.get("measure"), f"{args.file}: measure")
    pushed = pushforward_measure(f, {target.index(k): x for k, x in m.items()})
    rep.table("pushforward", ["element", "value"], [(source.label(u), pushed[u]) for u in source.elements])
    return 0


def cmd_inner_almost(args, rep: Reporter) -> int:
    v = _valuation(args)
    d = is_almost_disconnected(v)
    b = is_almost_boolean(v)
    rep.record("almost", disconnected=d.disconnected, boolean=b.boolean,
               witness=list(d.witness) if d.witness else None, checked_pairs=d.checked_pairs)
    return 0


def cmd_inner_equivalence(args, rep: Reporter) -> int:
    v = _valuation(args)
    report = theorem_equivalence_check(v, _cap(args))
    rep.record("equivalence", **report.as_dict())
    if not report.agree:
        raise VerificationFailed("the three conditions disagree", list(report.transcript))
    return 0


def cmd_inner_exhaust(args, rep: Reporter) -> int:
    v = _valuation(args)
    lat = v.lattice
    from .site import Site

    ideal = sheafify(Site.mu_inner(v), bits(lat.downclose_mask(to_mask(_members(lat, args.members, "--members")))))
    chain = exhaustion(v, ideal)
    rep.record("exhaustion", ideal=[lat.label(p) for p in sorted(ideal)],
               chain=[lat.label(p) for p in chain], values=[v(p) for p in chain])
    return 0


def cmd_inner_roundtrip(args, rep: Reporter) -> int:
    v = _valuation(args)
    frame = FiniteFrame(v.lattice)
    try:
        rt = finite_part_roundtrip(frame, v.values)
    except PointfreeError as exc:
        raise VerificationFailed(f"{type(exc).__name__}: {exc}", exc.witness) from None
    rep.record("roundtrip", isomorphic=rt.isomorphic, size=frame.size)
    if not rt.isomorphic:
        raise VerificationFailed("counit comparison is not an isomorphism")
    return 0


def cmd_coin_fatcantor(args, rep: Reporter) -> int:
    stages = fat_cantor(args.stages)
    rows = []
    prev = None
    for st in stages:
        expected = Fraction(1, 2) if prev is None else recurrence_value(prev, st.n)
        rows.append((st.n, st.stage.tosses, st.measure, _decimal(st.measure), st.measure == expected))
        prev = st.measure
    rep.table("fatcantor", ["n", "tosses", "measure", "approx", "recurrence"], rows)
    ok = all(r[-1] for r in rows)
    if args.verify_complement:
        checks = []
        for k in range(1, min(len(stages) - 1, 3) + 1):
            verdict, count = no_complement_fibers(stages, k)
            checks.append((k, count, verdict))
        rep.table("no_complement", ["k", "fibers", "holds"], checks)
        ok = ok and all(c[-1] for c in checks)
    if not ok:
        raise VerificationFailed("Fat Cantor check failed")
    return 0


def cmd_lebesgue_measure(args, rep: Reporter) -> int:
    s = read_region_file(_need_file(args))
    m = measure_standard(s)
    rep.record("measure", dim=s.dim, thinness=s.thinness, cubes=s.count(), measure=m, approx=_decimal(m))
    return 0


def cmd_lebesgue_translate(args, rep: Reporter) -> int:
    s = read_region_file(_need_file(args))
    vec = parse_vector(args.vector or "")
    t = translate_s(s, vec)
    rep.record("translate", vector=[str(x) for x in vec], thinness=t.thinness,
               before=measure_standard(s), after=measure_standard(t))
    return 0


def cmd_lebesgue_shear(args, rep: Reporter) -> int:
    s = read_region_file(_need_file(args))
    spec = ShearSpec(args.i, args.j, Fraction(args.a))
    inner, outer = shear_bracket(s, spec, args.n)
    mi, mo = measure_standard(inner), measure_standard(outer)
    rep.record("shear", n=args.n, inner=mi, outer=mo, gap=mo - mi, original=measure_standard(s))
    return 0


def cmd_lebesgue_svc(args, rep: Reporter) -> int:
    st = svc_stage(args.k)
    rep.record("svc", k=args.k, thinness=st.set.thinness, intervals=len(st.set.rows[0][1]) // 2 if st.set.rows else 0,
               measure=st.measure, expected=st.expected)
    if st.measure != st.expected:
        raise VerificationFailed("closed form violated")
    return 0


def cmd_lebesgue_site(args, rep: Reporter) -> int:
    s = read_region_file(_need_file(args))
    v = standard_set_site(s, args.n)
    report = inner_frame(v, _cap(args))
    rep.record("site", lattice_size=v.lattice.size, atoms=list(v.lattice.atoms),
               frame_size=report.frame.size, boolean=report.boolean)
    return 0


def cmd_fuzz(args, rep: Reporter) -> int:
    report = fuzz_campaign(args.kind, args.cases, args.max_size, args.seed, start=args.start, workers=args.workers)
    rep.record("fuzz", kind=args.kind, seed=args.seed, start=args.start, cases=args.cases,
               max_size=args.max_size, passed=report.passed, failed=len(report.failures))
    for r in report.failures:
        rep.record("failure", index=r.index, messages=r.messages, site=r.site, replay=report.replay_command(r.index))
    if not report.ok:
        raise VerificationFailed(f"{len(report.failures)} of {args.cases} cases failed")
    return 0


# parser ---------------------------------------------------------------------
VERBS: dict[str, dict[str, Callable]] = {
    "lattice": {"check": cmd_lattice_check},
    "site": {"sheafify": cmd_site_sheafify, "frame": cmd_site_frame, "inner": cmd_site_inner,
             "points": cmd_site_points},
    "frame": {"heyting": cmd_frame_heyting, "boolean": cmd_frame_boolean, "sublocales": cmd_frame_sublocales,
              "negation": cmd_frame_negation, "bsub": cmd_frame_bsub},
    "valuation": {"check": cmd_valuation_check, "quotient": cmd_valuation_quotient, "glue": cmd_valuation_glue,
                  "push": cmd_valuation_push},
    "inner": {"almost": cmd_inner_almost, "equivalence": cmd_inner_equivalence, "exhaust": cmd_inner_exhaust,
              "roundtrip": cmd_inner_roundtrip},
    "coin": {"fatcantor": cmd_coin_fatcantor},
    "lebesgue": {"measure": cmd_lebesgue_measure, "translate": cmd_lebesgue_translate,
                 "shear": cmd_lebesgue_shear, "svc": cmd_lebesgue_svc, "site": cmd_lebesgue_site},
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--file", help="description file (YAML)")
    p.add_argument("--json-lines", action="store_true", help="line-delimited JSON output")
    p.add_argument("--cap", type=int, default=None, help="override the enumeration cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pointfree", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)
    for group, verbs in VERBS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="verb", required=True)
        for verb in verbs:
            p = sub.add_parser(verb)
            _common(p)
            if group in ("site", "inner") and verb in ("sheafify", "exhaust"):
                p.add_argument("--members", help="comma-separated element labels")
            if group == "frame":
                p.add_argument("--u")
                p.add_argument("--v")
                p.add_argument("--n")
            if group == "coin":
                p.add_argument("--stages", type=int, default=4)
                p.add_argument("--verify-complement", action="store_true")
            if group == "lebesgue":
                p.add_argument("--vector")
                p.add_argument("--i", type=int, default=0)
                p.add_argument("--j", type=int, default=1)
                p.add_argument("--a", default="1/2")
                p.add_argument("--n", type=int, default=6)
                p.add_argument("--k", type=int, default=3)
    fz = groups.add_parser("fuzz")
    fz.add_argument("kind", choices=KINDS)
    _common(fz)
    fz.add_argument("--cases", type=int, default=100)
    fz.add_argument("--max-size", type=int, default=8)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--start", type=int, default=0)
    fz.add_argument("--workers", type=int, default=1)
    return parser


def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("json_lines",) and v is not None}


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.group if args.group == "fuzz" else f"{args.group} {args.verb}"
    handler = cmd_fuzz if args.group == "fuzz" else VERBS[args.group][args.verb]
    rep = Reporter(args.json_lines, command, _echo(args))
    try:
        status = handler(args, rep)
    except VerificationFailed as exc:
        rep.record("failure", message=str(exc), witness=exc.witness)
        status = 1
    except (ParseError, CapExceeded, ScopeError, DimMismatch) as exc:
        rep.record("error", kind=type(exc).__name__, message=str(exc), witness=exc.witness)
        status = 2
    except PointfreeError as exc:
        rep.record("failure", kind=type(exc).__name__, message=str(exc), witness=exc.witness)
        status = 1
    rep.finish(status)
    return status


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
