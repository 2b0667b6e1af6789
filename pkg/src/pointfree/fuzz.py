"""Random valuation sites and the cross-check campaigns run over them.

Lattices are drawn as downset lattices of random finite posets, which covers
every finite distributive lattice.  A valuation on a downset lattice is
determined by nonnegative weights on the poset's points
(``mu(D) = sum of the weights in D``), so every draw is a valuation; each
one is still validated by :func:`check_valuation`.

Every case is generated from its own ``random.Random(f"{seed}:{index}")`` so
it can be replayed alone with ``--start index --cases 1``.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import PointfreeError
from .frame import FiniteFrame
from .inner import inner_frame, quotient_invariance, theorem_equivalence_check
from .laws import (
    frame_law_violations,
    heyting_law_violations,
    implication_formula_violations,
    sheafify_violations,
    subcanonicity_violations,
    sublocale_structure_violations,
    valuation_difference_violations,
)
from .order import _transitive_closure, bits, find_isomorphism, lattice_from_order, to_mask
from .site import Site, induced_basis_site
from .valuation import Valuation, check_valuation

WEIGHTS = (Fraction(0), Fraction(0), Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2), Fraction(3, 4))
KINDS = ("equivalence", "laws", "quotient", "basis")


@dataclass(frozen=True)
class RandomSite:
    valuation: Valuation
    points: int
    weights: tuple[Fraction, ...]

    def describe(self) -> dict:
        lat = self.valuation.lattice
        return {
            "elements": list(lat.labels),
            "leq": [[lat.label(a), lat.label(b)] for a, b in lat.hasse_edges()],
            "valuation": {lat.label(i): str(x) for i, x in enumerate(self.valuation.values)},
        }


def random_poset(rng: random.Random, points: int, density: float) -> list[int]:
    """Up-set masks of a random order on ``points`` points (edges only go forward)."""
    up = [1 << i for i in range(points)]
    for i in range(points):
        for j in range(i + 1, points):
            if rng.random() < density:
                up[i] |= 1 << j
    return _transitive_closure(points, up)


def random_site(rng: random.Random, max_size: int = 8) -> RandomSite:
    """A random distributive lattice with at most ``max_size`` elements and a valuation on it."""
    while True:
        points = rng.randint(1, 5)
        up = random_poset(rng, points, rng.choice((0.2, 0.5, 0.8)))
        down = [to_mask(i for i in range(points) if up[i] >> j & 1) for j in range(points)]
        downsets = [m for m in range(1 << points) if all(down[i] & ~m == 0 for i in bits(m))]
        if len(downsets) <= max_size:
            break
    names = "abcdefgh"
    labels = ["".join(names[i] for i in bits(d)) or "0" for d in downsets]
    order = [to_mask(j for j, e in enumerate(downsets) if d & ~e == 0) for d in downsets]
    lattice = lattice_from_order(labels, order)
    weights = tuple(rng.choice(WEIGHTS) for _ in range(points))
    values = [sum((weights[i] for i in bits(d)), Fraction(0)) for d in downsets]
    return RandomSite(check_valuation(lattice, values), points, weights)


def case_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


# campaign kernels: each returns a list of failure messages ------------------
def check_equivalence(site: RandomSite) -> list[str]:
    report = theorem_equivalence_check(site.valuation)
    return [] if report.agree else ["three-way disagreement", *report.transcript]


def check_laws(site: RandomSite) -> list[str]:
    v = site.valuation
    mu_site = Site.mu_inner(v)
    frame = FiniteFrame.from_site(mu_site)
    out = valuation_difference_violations(v)
    out += implication_formula_violations(v, frame)
    out += subcanonicity_violations(v, frame)
    out += frame_law_violations(mu_site)
    out += sheafify_violations(mu_site)
    for f in (frame, FiniteFrame.from_site(Site.finite_join(v.lattice))):
        for item, msgs in heyting_law_violations(f).items():
            out.append(f"Heyting item {item}: {msgs[0]}")
        if f.size <= 10:
            out += sublocale_structure_violations(f)
    return out


def check_quotient(site: RandomSite) -> list[str]:
    return [] if quotient_invariance(site.valuation) else ["inner frame changes under the null quotient"]


def check_basis(site: RandomSite) -> list[str]:
    """Rebuild the inner frame from the site induced on the generator image ``{[p]}``."""
    report = inner_frame(site.valuation)
    frame = report.frame
    basis = sorted({report.principal(p) for p in site.valuation.lattice.elements})
    basis_site, _ = induced_basis_site(frame.lattice, basis)
    rebuilt = FiniteFrame.from_site(basis_site)
    if find_isomorphism(frame.lattice, rebuilt.lattice) is None:
        return [f"basis rebuild has {rebuilt.size} elements, frame has {frame.size}; not isomorphic"]
    return []


KERNELS: dict[str, Callable[[RandomSite], list[str]]] = {
    "equivalence": check_equivalence,
    "laws": check_laws,
    "quotient": check_quotient,
    "basis": check_basis,
}


@dataclass
class CaseResult:
    index: int
    ok: bool
    messages: list[str] = field(default_factory=list)
    site: dict | None = None
    size: int = 0


def run_case(kind: str, seed: int, index: int, max_size: int) -> CaseResult:
    site = random_site(case_rng(seed, index), max_size)
    try:
        messages = KERNELS[kind](site)
    except PointfreeError as exc:
        messages = [f"{type(exc).__name__}: {exc}"]
    ok = not messages
    return CaseResult(index, ok, messages, None if ok else site.describe(), site.valuation.lattice.size)


def _run_star(args: tuple[str, int, int, int]) -> CaseResult:
    return run_case(*args)


@dataclass
class CampaignReport:
    kind: str
    seed: int
    start: int
    cases: int
    max_size: int
    results: list[CaseResult]

    @property
    def passed(self) -> int:
        return sum(r.ok for r in self.results)

    @property
    def failures(self) -> list[CaseResult]:
        return [r for r in self.results if not r.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def replay_command(self, index: int) -> str:
        return (f"pointfree fuzz {self.kind} --cases 1 --start {index} "
                f"--max-size {self.max_size} --seed {self.seed}")


def fuzz_campaign(kind: str, cases: int, max_size: int = 8, seed: int = 0, *,
                  start: int = 0, workers: int = 1) -> CampaignReport:
    """Run ``cases`` random cases of ``kind``; results are ordered by case index."""
    if kind not in KERNELS:
        raise PointfreeError(f"unknown fuzz kind {kind!r}; choose from {', '.join(KINDS)}")
    jobs = [(kind, seed, i, max_size) for i in range(start, start + cases)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_star, jobs, chunksize=max(1, cases // (4 * workers))))
    else:
        results = [_run_star(j) for j in jobs]
    results.sort(key=lambda r: r.index)
    return CampaignReport(kind, seed, start, cases, max_size, results)


def random_sites(count: int, max_size: int = 8, seed: int = 0) -> list[RandomSite]:
    return [random_site(case_rng(seed, i), max_size) for i in range(count)]
