"""Finite posets and lower-bounded distributive lattices.

Element sets are passed around as ``frozenset[int]`` at the public surface and
as integer bitmasks internally (bit ``i`` set means element ``i`` is a member).
Lattice operations are precomputed into tables when the lattice is built, so
every downstream fixpoint loop gets O(1) meets and joins.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    CycleError,
    LatticeError,
    MissingBoundError,
    NoTopError,
    NotDistributiveError,
    NotLatticeHom,
)

# Exhaustive enumerations (subsets of elements) refuse to run past this.
ENUMERATION_HARD_CAP = 64

DownSet = frozenset  # frozenset[int], downward closed


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << e
    return mask


def to_set(mask: int) -> frozenset[int]:
    return frozenset(bits(mask))


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FiniteLattice:
    """A finite lattice with a bottom element, backed by operation tables.

    Build instances with :func:`build_lattice` (from labels and generating
    order pairs) or :func:`lattice_from_order` (from a closed order).  The
    constructor trusts its arguments.
    """

    def __init__(
        self,
        labels: Sequence[str],
        up: Sequence[int],
        down: Sequence[int],
        meet: Sequence[Sequence[int]],
        join: Sequence[Sequence[int]],
        bottom: int,
        top: int | None,
    ):
        self._labels = tuple(labels)
        self._up = tuple(up)
        self._down = tuple(down)
        self._meet = tuple(tuple(row) for row in meet)
        self._join = tuple(tuple(row) for row in join)
        self.bottom = bottom
        self.top = top
        self._index = {label: i for i, label in enumerate(self._labels)}

    # basic structure -----------------------------------------------------
    @property
    def size(self) -> int:
        return len(self._labels)

    def __len__(self) -> int:
        return self.size

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def label(self, i: int) -> str:
        return self._labels[i]

    def index(self, label: object) -> int:
        """Index of the element with this label (non-strings are looked up via ``str``)."""
        try:
            return self._index[str(label)]
        except KeyError:
            raise LatticeError(f"unknown element {label!r}", witness=label) from None

    def leq(self, a: int, b: int) -> bool:
        return bool(self._up[a] >> b & 1)

    def meet(self, a: int, b: int) -> int:
        return self._meet[a][b]

    def join(self, a: int, b: int) -> int:
        return self._join[a][b]

    def down(self, a: int) -> int:
        """Bitmask of the principal downset of ``a``."""
        return self._down[a]

    def up(self, a: int) -> int:
        """Bitmask of the principal upset of ``a``."""
        return self._up[a]

    def require_top(self) -> int:
        if self.top is None:
            raise NoTopError("lattice has no top element")
        return self.top

    # derived -------------------------------------------------------------
    def join_mask(self, mask: int) -> int:
        j = self.bottom
        for e in bits(mask):
            j = self.join(j, e)
        return j

    def meet_mask(self, mask: int) -> int:
        if not mask:
            return self.require_top()
        it = bits(mask)
        m = next(it)
        for e in it:
            m = self.meet(m, e)
        return m

    def downclose_mask(self, mask: int) -> int:
        out = 0
        for e in bits(mask):
            out |= self.down(e)
        return out

    def is_downset_mask(self, mask: int) -> bool:
        return self.downclose_mask(mask) == mask

    def lower_covers(self, a: int) -> list[int]:
        below = self.down(a) & ~(1 << a)
        return [b for b in bits(below) if self.up(b) & below == 1 << b]

    def hasse_edges(self) -> list[tuple[int, int]]:
        return [(b, a) for a in self.elements for b in self.lower_covers(a)]

    def linear_extension(self) -> list[int]:
        """Elements sorted so that ``a <= b`` implies ``a`` comes first."""
        return sorted(self.elements, key=lambda a: (popcount(self.down(a)), a))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(size={self.size}, labels={list(self._labels)})"


class BooleanLattice(FiniteLattice):
    """The powerset of ``k`` atoms, indexed by subset bitmask.

    Operations are bitwise, so no tables are stored; this keeps powersets of
    up to 16 atoms (65536 elements) usable as valuation carriers.
    """

    def __init__(self, atoms: Sequence[str]):
        self.atoms = tuple(str(a) for a in atoms)
        self.k = len(self.atoms)
        if len(set(self.atoms)) != self.k:
            raise LatticeError("duplicate atom labels", witness=self.atoms)
        self.bottom = 0
        self.top = (1 << self.k) - 1
        self._labels_cache: tuple[str, ...] | None = None

    @property
    def size(self) -> int:
        return 1 << self.k

    @property
    def labels(self) -> tuple[str, ...]:
        if self._labels_cache is None:
            self._labels_cache = tuple(self.label(i) for i in range(self.size))
        return self._labels_cache

    def label(self, i: int) -> str:
        return "{" + ",".join(self.atoms[j] for j in bits(i)) + "}"

    def index(self, label: object) -> int:
        text = str(label).strip()
        if not (text.startswith("{") and text.endswith("}")):
            raise LatticeError(f"unknown element {label!r}", witness=label)
        names = [t.strip() for t in text[1:-1].split(",") if t.strip()]
        try:
            return to_mask(self.atoms.index(n) for n in names)
        except ValueError:
            raise LatticeError(f"unknown element {label!r}", witness=label) from None

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    def meet(self, a: int, b: int) -> int:
        return a & b

    def join(self, a: int, b: int) -> int:
        return a | b

    def down(self, a: int) -> int:
        return _submask_set(a)

    def up(self, a: int) -> int:
        return _supermask_set(a, self.top)

    def lower_covers(self, a: int) -> list[int]:
        return [a & ~(1 << j) for j in bits(a)]

    def __repr__(self) -> str:
        return f"BooleanLattice(atoms={list(self.atoms)})"


@lru_cache(maxsize=4096)
def _submask_set(a: int) -> int:
    out = 0
    s = a
    while True:
        out |= 1 << s
        if s == 0:
            return out
        s = (s - 1) & a


@lru_cache(maxsize=4096)
def _supermask_set(a: int, full: int) -> int:
    out = 0
    free = full & ~a
    s = free
    while True:
        out |= 1 << (a | s)
        if s == 0:
            return out
        s = (s - 1) & free


# construction -------------------------------------------------------------
def _transitive_closure(n: int, up: list[int]) -> list[int]:
    for k in range(n):
        bit = 1 << k
        uk = up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= uk
    return up


def lattice_from_order(labels: Sequence[str], up: Sequence[int], *, check_distributive: bool = True) -> FiniteLattice:
    """Build a lattice from a reflexive-transitive order given as upset masks."""
    n = len(labels)
    if n == 0:
        raise LatticeError("a lattice needs at least one element")
    if len(set(labels)) != n:
        dupes = sorted({x for x in labels if list(labels).count(x) > 1})
        raise LatticeError(f"duplicate labels {dupes}", witness=dupes)
    up = list(up)
    for i in range(n):
        same = [j for j in range(n) if j != i and up[i] >> j & 1 and up[j] >> i & 1]
        if same:
            cycle = [labels[i]] + [labels[j] for j in same]
            raise CycleError(f"order relation has a cycle through {cycle}", witness=cycle)
    down = [0] * n
    for i in range(n):
        for j in bits(up[i]):
            down[j] |= 1 << i

    full = (1 << n) - 1
    bottoms = [i for i in range(n) if up[i] == full]
    if not bottoms:
        raise MissingBoundError("no bottom element", witness=None)
    tops = [i for i in range(n) if down[i] == full]

    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            lower = down[a] & down[b]
            g = next((c for c in bits(lower) if down[c] == lower), None)
            if g is None:
                raise MissingBoundError(
                    f"{labels[a]} and {labels[b]} have no meet", witness=(labels[a], labels[b])
                )
            upper = up[a] & up[b]
            l = next((c for c in bits(upper) if up[c] == upper), None)
            if l is None:
                raise MissingBoundError(
                    f"{labels[a]} and {labels[b]} have no join", witness=(labels[a], labels[b])
                )
            meet[a][b] = meet[b][a] = g
            join[a][b] = join[b][a] = l

    lattice = FiniteLattice(labels, up, down, meet, join, bottoms[0], tops[0] if tops else None)
    if check_distributive:
        witness = distributivity_violation(lattice)
        if witness is not None:
            names = tuple(labels[x] for x in witness)
            raise NotDistributiveError(
                f"meet({names[0]}, join({names[1]}, {names[2]})) differs from "
                f"join(meet({names[0]}, {names[1]}), meet({names[0]}, {names[2]}))",
                witness=names,
            )
    return lattice


def build_lattice(elements: Sequence[object], leq_pairs: Iterable[tuple[object, object]]) -> FiniteLattice:
    """Build a distributive lattice from labels and generating order pairs.

    The order is the reflexive-transitive closure of ``leq_pairs``; Hasse-style
    cover pairs are enough.

    >>> lat = build_lattice(["0", "U", "1"], [("0", "U"), ("U", "1")])
    >>> lat.label(lat.bottom), lat.label(lat.top)
    ('0', '1')
    """
    labels = [str(e) for e in elements]
    if not labels:
        raise LatticeError("a lattice needs at least one element")
    index = {}
    for i, label in enumerate(labels):
        if label in index:
            raise LatticeError(f"duplicate label {label!r}", witness=label)
        index[label] = i
    n = len(labels)
    up = [1 << i for i in range(n)]
    for a, b in leq_pairs:
        try:
            ia, ib = index[str(a)], index[str(b)]
        except KeyError as exc:
            raise LatticeError(f"order pair ({a}, {b}) uses undeclared label {exc.args[0]!r}",
                               witness=(str(a), str(b))) from None
        up[ia] |= 1 << ib
    return lattice_from_order(labels, _transitive_closure(n, up))


def distributivity_violation(lattice: FiniteLattice) -> tuple[int, int, int] | None:
    """First triple (a, b, c) with a∧(b∨c) ≠ (a∧b)∨(a∧c), or None."""
    m, j = lattice.meet, lattice.join
    for a, b, c in product(lattice.elements, repeat=3):
        if m(a, j(b, c)) != j(m(a, b), m(a, c)):
            return a, b, c
    return None


def chain_lattice(labels: Sequence[object]) -> FiniteLattice:
    labels = [str(x) for x in labels]
    return build_lattice(labels, zip(labels, labels[1:]))


def powerset_lattice(atoms: Sequence[object]) -> BooleanLattice:
    return BooleanLattice([str(a) for a in atoms])


def lattice_of_downsets(poset_labels: Sequence[str], poset_up: Sequence[int]) -> FiniteLattice:
    """Birkhoff's construction: the distributive lattice of downsets of a finite poset.

    ``poset_up[i]`` is the bitmask of points above point ``i`` (reflexive,
    transitive).  Each downset is labelled by the concatenated labels of its
    points, or ``"0"`` for the empty downset.
    """
    n = len(poset_labels)
    down = [0] * n
    for i in range(n):
        for j in bits(poset_up[i]):
            down[j] |= 1 << i
    downsets = []
    for mask in range(1 << n):
        if all(down[i] & ~mask == 0 for i in bits(mask)):
            downsets.append(mask)
    labels = ["".join(poset_labels[i] for i in bits(d)) or "0" for d in downsets]
    up = [to_mask(j for j, e in enumerate(downsets) if d & ~e == 0) for d in downsets]
    return lattice_from_order(labels, up, check_distributive=False)


# operations ---------------------------------------------------------------
def downset_closure(lattice: FiniteLattice, seed: Iterable[int]) -> frozenset[int]:
    """Smallest downward closed set containing ``seed``."""
    return to_set(lattice.downclose_mask(to_mask(seed)))


def join_all(lattice: FiniteLattice, subset: Iterable[int]) -> int:
    """Iterated binary join; the empty join is the bottom element."""
    return lattice.join_mask(to_mask(subset))


def meet_all(lattice: FiniteLattice, subset: Iterable[int]) -> int:
    """Iterated binary meet; the empty meet is the top element (NoTopError without one)."""
    return lattice.meet_mask(to_mask(subset))


@dataclass(frozen=True)
class LatticeHom:
    """A map between finite lattices given by its table ``source index -> target index``."""

    source: FiniteLattice
    target: FiniteLattice
    table: tuple[int, ...]

    def __call__(self, a: int) -> int:
        return self.table[a]

    def check(self) -> "LatticeHom":
        """Raise NotLatticeHom unless bottom, binary meets and binary joins are preserved."""
        s, t, f = self.source, self.target, self.table
        if len(f) != s.size:
            raise NotLatticeHom("table length does not match source size")
        if f[s.bottom] != t.bottom:
            raise NotLatticeHom("bottom is not preserved", witness=(s.label(s.bottom),))
        for a in s.elements:
            for b in s.elements:
                if f[s.meet(a, b)] != t.meet(f[a], f[b]):
                    raise NotLatticeHom("meet is not preserved", witness=(s.label(a), s.label(b)))
                if f[s.join(a, b)] != t.join(f[a], f[b]):
                    raise NotLatticeHom("join is not preserved", witness=(s.label(a), s.label(b)))
        return self

    @classmethod
    def from_mapping(cls, source: FiniteLattice, target: FiniteLattice,
                     mapping: Mapping[object, object]) -> "LatticeHom":
        table = [0] * source.size
        seen = set()
        for k, v in mapping.items():
            i = source.index(k)
            table[i] = target.index(v)
            seen.add(i)
        if len(seen) != source.size:
            missing = [source.label(i) for i in source.elements if i not in seen]
            raise NotLatticeHom(f"mapping is not total, missing {missing}", witness=missing)
        return cls(source, target, tuple(table))


# closure systems -----------------------------------------------------------
def next_closure(n: int, closure: Callable[[int], int]) -> Iterator[int]:
    """Enumerate every closed set of a closure operator on ``n`` points.

    Ganter's NextClosure in lectic order; ``closure`` maps bitmasks to
    bitmasks and must be extensive, monotone and idempotent.
    """
    if n > ENUMERATION_HARD_CAP:
        raise LatticeError(f"refusing to enumerate closed sets of {n} > {ENUMERATION_HARD_CAP} points")
    current = closure(0)
    yield current
    full = (1 << n) - 1
    while current != full:
        for i in reversed(range(n)):
            bit = 1 << i
            if current & bit:
                current &= ~bit
                continue
            candidate = closure(current | bit)
            if not (candidate & ~current) & (bit - 1):
                current = candidate
                break
        else:  # pragma: no cover - unreachable for a genuine closure operator
            return
        yield current


def find_isomorphism(a: FiniteLattice, b: FiniteLattice) -> tuple[int, ...] | None:
    """An order isomorphism ``a -> b`` as a table, or None.  Backtracking search."""
    if a.size != b.size:
        return None

    def signature(lat: FiniteLattice, x: int) -> tuple[int, int]:
        return popcount(lat.down(x)), popcount(lat.up(x))

    sig_b: dict[tuple[int, int], list[int]] = {}
    for y in b.elements:
        sig_b.setdefault(signature(b, y), []).append(y)
    order = a.linear_extension()
    if any(len(sig_b.get(signature(a, x), ())) == 0 for x in order):
        return None
    table = [-1] * a.size
    used = [False] * b.size

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        x = order[k]
        for y in sig_b[signature(a, x)]:
            if used[y]:
                continue
            if all(a.leq(z, x) == b.leq(table[z], y) and a.leq(x, z) == b.leq(y, table[z])
                   for z in order[:k]):
                table[x] = y
                used[y] = True
                if extend(k + 1):
                    return True
                used[y] = False
        table[x] = -1
        return False

    return tuple(table) if extend(0) else None
