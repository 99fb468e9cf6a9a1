"""Finite groups in additive notation.

Three kinds are supported: cyclic groups ``Z<v>``, direct products of cyclic
groups ``Z<a>xZ<b>...`` and groups given by an explicit Cayley table
(``cayley:<path>``).  Elements are plain hashable values: an ``int`` residue
for cyclic groups, a tuple of residues for products and an ``int`` index for
table groups.  Equal handles always denote equal elements.

Addition is never assumed to be commutative; ``add(a, b)`` means ``a + b``
in that order.  Only table groups can be non-abelian.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Hashable, Iterator, Optional, Sequence

import numpy as np

from .errors import ContextError, GroupAxiomError, ParseError

Element = Hashable

__all__ = [
    "Group",
    "CyclicGroup",
    "ProductGroup",
    "TableGroup",
    "CyclicView",
    "parse_group",
    "element_order",
    "multiple",
    "cyclic_subgroup",
    "dlog",
    "subgroup_intersection",
    "smallest_prime_divisor",
]

# Table groups up to this order get a full associativity check.
AXIOM_CHECK_LIMIT = 512


def smallest_prime_divisor(n: int) -> int:
    if n < 2:
        raise ValueError(f"no prime divides {n}")
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


class Group:
    """Common interface; subclasses provide the arithmetic."""

    kind: str
    spec: str

    @property
    def order(self) -> int:
        raise NotImplementedError

    @cached_property
    def smallest_prime_divisor(self) -> int:
        return smallest_prime_divisor(self.order)

    @property
    def is_abelian(self) -> bool:
        return True

    def zero(self) -> Element:
        raise NotImplementedError

    def elements(self) -> Iterator[Element]:
        """All elements in canonical order, identity first."""
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    def check(self, a) -> Element:
        if not self.contains(a):
            raise ContextError(f"{a!r} is not an element of {self.spec}")
        return a

    def add(self, a, b) -> Element:
        return self._add(self.check(a), self.check(b))

    def neg(self, a) -> Element:
        return self._neg(self.check(a))

    def sub(self, a, b) -> Element:
        """``-b + a``, the element ``x`` with ``b + x == a``."""
        return self._add(self._neg(self.check(b)), self.check(a))

    # unchecked arithmetic for inner loops over already-validated elements
    def _add(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    def sort_key(self, a):
        """Key realising the canonical element order."""
        return a

    def sorted(self, elems) -> list:
        return sorted(elems, key=self.sort_key)

    def parse_element(self, text: str) -> Element:
        raise NotImplementedError

    def format_element(self, a) -> str:
        return str(a)

    def to_json(self, a):
        return a

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec}>"

    def __eq__(self, other):
        return isinstance(other, Group) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (self.kind, self.spec)


def _parse_int(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ParseError(f"not an integer: {text!r}") from None


class CyclicGroup(Group):
    kind = "cyclic"

    def __init__(self, v: int):
        if v < 2:
            raise ParseError(f"cyclic group order must be at least 2, got {v}")
        self.v = v
        self.spec = f"Z{v}"

    @property
    def order(self):
        return self.v

    def zero(self):
        return 0

    def elements(self):
        return iter(range(self.v))

    def contains(self, a):
        return type(a) is int and 0 <= a < self.v

    def _add(self, a, b):
        return (a + b) % self.v

    def _neg(self, a):
        return -a % self.v

    def parse_element(self, text):
        return _parse_int(text) % self.v


class ProductGroup(Group):
    kind = "product"

    def __init__(self, orders: Sequence[int]):
        if len(orders) < 2 or any(v < 2 for v in orders):
            raise ParseError(f"bad product factor orders {list(orders)}")
        self.orders = tuple(orders)
        self.spec = "x".join(f"Z{v}" for v in self.orders)

    @property
    def order(self):
        return math.prod(self.orders)

    def zero(self):
        return (0,) * len(self.orders)

    def elements(self):
        def rec(i):
            if i == len(self.orders):
                yield ()
                return
            for x in range(self.orders[i]):
                for rest in rec(i + 1):
                    yield (x,) + rest

        return rec(0)

    def contains(self, a):
        return (
            type(a) is tuple
            and len(a) == len(self.orders)
            and all(type(x) is int and 0 <= x < v for x, v in zip(a, self.orders))
        )

    def _add(self, a, b):
        return tuple((x + y) % v for x, y, v in zip(a, b, self.orders))

    def _neg(self, a):
        return tuple(-x % v for x, v in zip(a, self.orders))

    def parse_element(self, text):
        m = re.fullmatch(r"\s*\((.*)\)\s*", text)
        if not m:
            raise ParseError(f"product element must look like (x,y,...): {text!r}")
        parts = m.group(1).split(",")
        if len(parts) != len(self.orders):
            raise ParseError(f"expected {len(self.orders)} components in {text!r}")
        return tuple(_parse_int(p) % v for p, v in zip(parts, self.orders))

    def format_element(self, a):
        return "(" + ",".join(map(str, a)) + ")"

    def to_json(self, a):
        return list(a)


class TableGroup(Group):
    """Group defined by a Cayley table; index 0 must be the identity."""

    kind = "table"

    def __init__(self, table, spec="table", check_axioms=True):
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] < 2:
            raise GroupAxiomError("Cayley table must be a square array of order >= 2")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise GroupAxiomError("Cayley table entries out of range")
        self.table = t
        self.spec = spec
        self._rows = t.tolist()
        if check_axioms:
            self._check_axioms()
        self._inv = [row.index(0) for row in self._rows]

    def _check_axioms(self):
        t, n = self.table, self.table.shape[0]
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise GroupAxiomError("index 0 is not a two-sided identity")
        # Latin square rows/columns give unique inverses on both sides
        for axis in (0, 1):
            if not np.all(np.sort(t, axis=axis) == (ar if axis == 1 else ar[:, None])):
                raise GroupAxiomError("table is not a Latin square; some element has no inverse")
        if n <= AXIOM_CHECK_LIMIT:
            for a in range(n):
                # (a+b)+c versus a+(b+c) over all b, c at once
                if not np.array_equal(t[t[a]], t[a][t]):
                    raise GroupAxiomError(f"operation is not associative (first failure at a={a})")

    @classmethod
    def from_file(cls, path):
        p = Path(path)
        try:
            lines = [ln for ln in p.read_text().splitlines() if ln.strip()]
        except OSError as exc:
            raise ParseError(f"cannot read Cayley table {path}: {exc}") from None
        if not lines:
            raise ParseError(f"empty Cayley table file {path}")
        n = _parse_int(lines[0])
        rows = [[_parse_int(x) for x in ln.split()] for ln in lines[1:]]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ParseError(f"Cayley table file {path} must hold {n} rows of {n} indices")
        return cls(rows, spec=f"cayley:{path}")

    @property
    def order(self):
        return self.table.shape[0]

    @cached_property
    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))

    def zero(self):
        return 0

    def elements(self):
        return iter(range(self.order))

    def contains(self, a):
        return type(a) is int and 0 <= a < self.order

    def _add(self, a, b):
        return self._rows[a][b]

    def _neg(self, a):
        return self._inv[a]

    def parse_element(self, text):
        a = _parse_int(text)
        if not self.contains(a):
            raise ParseError(f"table index {a} out of range for order {self.order}")
        return a

    def _key(self):
        return (self.kind, self.table.tobytes())


_CYCLIC = re.compile(r"Z(\d+)")


def parse_group(spec: str) -> Group:
    spec = spec.strip()
    if spec.startswith("cayley:"):
        return TableGroup.from_file(spec[len("cayley:"):])
    factors = spec.split("x")
    orders = []
    for f in factors:
        m = _CYCLIC.fullmatch(f.strip())
        if not m:
            raise ParseError(f"cannot parse group spec {spec!r}")
        orders.append(int(m.group(1)))
    if len(orders) == 1:
        return CyclicGroup(orders[0])
    return ProductGroup(orders)


def multiple(G: Group, k: int, a):
    """``k·a`` for ``k >= 0`` (left-to-right repeated addition)."""
    G.check(a)
    acc = G.zero()
    for _ in range(k):
        acc = G._add(acc, a)
    return acc


def element_order(G: Group, a) -> int:
    G.check(a)
    if isinstance(G, CyclicGroup):
        return G.v // math.gcd(a, G.v)
    if isinstance(G, ProductGroup):
        return math.lcm(*(v // math.gcd(x, v) for x, v in zip(a, G.orders)))
    k, acc, zero = 1, a, G.zero()
    while acc != zero:
        acc = G._add(acc, a)
        k += 1
    return k


@dataclass(frozen=True)
class CyclicView:
    """The subgroup generated by ``generator``, listed as ``i·generator``."""

    group: Group
    generator: Element
    elements: tuple

    @property
    def v(self) -> int:
        return len(self.elements)

    @cached_property
    def _index(self):
        return {x: i for i, x in enumerate(self.elements)}

    def __contains__(self, x):
        return x in self._index


def cyclic_subgroup(G: Group, a) -> CyclicView:
    G.check(a)
    return _cyclic_subgroup(G, a)


@lru_cache(maxsize=8192)
def _cyclic_subgroup(G, a):
    zero = G.zero()
    elems = [zero]
    x = a
    while x != zero:
        elems.append(x)
        x = G._add(x, a)
    return CyclicView(G, a, tuple(elems))


def dlog(view: CyclicView, x) -> Optional[int]:
    return view._index.get(x)


def subgroup_intersection(v1: CyclicView, v2: CyclicView):
    """Generator and size of the intersection of two cyclic subgroups.

    The generator is the common element with the smallest positive index in
    ``v1``; a subgroup of a cyclic group is generated by its least positive
    exponent.  Returns ``(zero, 1)`` for a trivial intersection.
    """
    if v1.group != v2.group:
        raise ContextError("views belong to different groups")
    common = [i for i, x in enumerate(v1.elements) if x in v2]
    if len(common) == 1:
        return v1.group.zero(), 1
    return v1.elements[common[1]], len(common)
