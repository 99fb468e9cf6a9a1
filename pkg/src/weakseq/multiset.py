"""Multisets of non-identity group elements and their text literals."""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable

from .errors import ParseError, PreconditionError
from .groups import Group


class Multiset:
    """``[a_1^l_1, ..., a_n^l_n]`` over a fixed group.

    Entries are kept in canonical element order so iteration, expansion and
    equality are deterministic.
    """

    __slots__ = ("group", "_counts")

    def __init__(self, group: Group, counts=()):
        c = Counter()
        items = counts.items() if hasattr(counts, "items") else ((x, 1) for x in counts)
        for x, k in items:
            group.check(x)
            if k < 0:
                raise ValueError(f"negative multiplicity for {x!r}")
            if k:
                c[x] += k
        zero = group.zero()
        if zero in c:
            raise PreconditionError("multisets may not contain the identity")
        self.group = group
        self._counts = {x: c[x] for x in group.sorted(c)}

    @classmethod
    def from_elements(cls, group: Group, elems: Iterable) -> "Multiset":
        return cls(group, Counter(elems))

    @property
    def size(self) -> int:
        return sum(self._counts.values())

    @property
    def n(self) -> int:
        """Size of the underlying set."""
        return len(self._counts)

    def __len__(self):
        return self.size

    def __getitem__(self, x) -> int:
        return self._counts.get(x, 0)

    def items(self):
        return self._counts.items()

    def support(self) -> list:
        return list(self._counts)

    def expand(self) -> list:
        return [x for x, k in self._counts.items() for _ in range(k)]

    def counter(self) -> Counter:
        return Counter(self._counts)

    def __eq__(self, other):
        return isinstance(other, Multiset) and self.group == other.group and self._counts == other._counts

    def __hash__(self):
        return hash(tuple(self._counts.items()))

    def __le__(self, other: "Multiset") -> bool:
        return all(k <= other[x] for x, k in self._counts.items())

    def __add__(self, other: "Multiset") -> "Multiset":
        return Multiset(self.group, self.counter() + other.counter())

    def __sub__(self, other: "Multiset") -> "Multiset":
        return Multiset(self.group, self.counter() - other.counter())

    def negated(self) -> "Multiset":
        G = self.group
        return Multiset(G, {G._neg(x): k for x, k in self._counts.items()})

    def __repr__(self):
        fmt = self.group.format_element
        return "[" + ", ".join(f"{fmt(x)}^{k}" for x, k in self._counts.items()) + "]"

    def to_literal(self) -> str:
        fmt = self.group.format_element
        return ",".join(fmt(x) if k == 1 else f"{fmt(x)}^{k}" for x, k in self._counts.items())


def split_terms(text: str) -> list[str]:
    """Split on commas that are not inside parentheses."""
    terms, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch == "," and depth == 0:
            terms.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    terms.append("".join(cur))
    terms = [t.strip() for t in terms]
    if terms == [""]:
        return []
    if any(not t for t in terms):
        raise ParseError(f"empty term in {text!r}")
    return terms


def parse_elements(group: Group, text: str) -> list:
    """Comma-separated element literals, e.g. ``1,2,-3`` or ``(1,0),(0,1)``."""
    return [group.parse_element(t) for t in split_terms(text)]


_TERM = re.compile(r"(.+?)(?:\^\s*(\d+))?")


def parse_multiset(group: Group, text: str) -> Multiset:
    """Parse ``elem^mult`` terms such as ``1^3,2^2,5``; repeated terms add up."""
    c = Counter()
    for term in split_terms(text):
        m = _TERM.fullmatch(term)
        if not m:
            raise ParseError(f"bad multiset term {term!r}")
        k = int(m.group(2)) if m.group(2) is not None else 1
        if k < 1:
            raise ParseError(f"multiplicity must be positive in {term!r}")
        c[group.parse_element(m.group(1))] += k
    return Multiset(group, c)
