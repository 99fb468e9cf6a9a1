"""Walk realizations of multisets in Cayley graphs.

A walk ``W = (w_0, ..., w_l)`` starting at the identity realizes ``M`` when
its step multiset ``Delta(W)`` equals ``M`` up to the sign of each step.  It
is a weak realization for window ``t`` when ``w_i != w_j`` for
``1 <= |i - j| <= t``.

Large multisets dominated by one element ``a1`` are realized by building a
walk for each pair ``[a1^k, a_i^l_i]`` that starts and ends with ``t`` steps
of ``a1``, then gluing the pair walks end to end.  Everything else goes
through the sequencing pipeline (a t-weak sequencing is a realization), with
brute force as the last resort for tiny inputs.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ConstructionError, PreconditionError, WeakSeqError
from .groups import Group, cyclic_subgroup, dlog, element_order, subgroup_intersection
from .multiset import Multiset
from .sequencing import (
    DEFAULT_BUDGET,
    OK,
    SearchResult,
    Verdict,
    _check_t,
    first_window_repeat,
    partial_sums,
    sequence_multiset,
)

BRUTE_FORCE_MAX = 10


class Direction(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


def delta(G: Group, walk: Sequence) -> list:
    """Steps ``-w_{i-1} + w_i`` of a walk, in walk order."""
    return [G.sub(b, a) for a, b in zip(walk, walk[1:])]


def _signed(G, counter):
    out = Counter(counter)
    for x, k in counter.items():
        out[G._neg(x)] += k
    return out


def verify_realization(G: Group, walk: Sequence, M: Multiset, t: int) -> Verdict:
    """Check ``Delta(W) + (-Delta(W)) == M + (-M)`` and the window condition."""
    _check_t(t)
    if not walk:
        return Verdict(False, "start", (0,))
    for w in walk:
        G.check(w)
    if walk[0] != G.zero():
        return Verdict(False, "start", (0,))
    if _signed(G, Counter(delta(G, walk))) != _signed(G, M.counter()):
        return Verdict(False, "delta", None)
    pair = first_window_repeat(walk, t)
    if pair is not None:
        return Verdict(False, "window", pair)
    return OK


def free_window_direction(v: int, a1: int, d: int, t: int) -> Direction:
    """Side of ``t*a1`` on which the walk ``0, a1, ..., t*a1`` in ``Z_v`` leaves room.

    POSITIVE means none of ``t*a1 + 1, ..., t*a1 + d*t`` is on the walk,
    NEGATIVE the same for ``t*a1 - 1, ..., t*a1 - d*t``.  Both sides are
    free only as a tie, and POSITIVE wins it.  When ``v >= d*t*(2t+1)`` one
    side is always free.
    """
    _check_t(t)
    if v < 2 or math.gcd(a1, v) != 1:
        raise PreconditionError(f"a1={a1} is not a unit modulo v={v}")
    if d < 1 or v % d:
        raise PreconditionError(f"d={d} does not divide v={v}")
    walk = {(i * a1) % v for i in range(t + 1)}
    end = (t * a1) % v
    if all((end + k) % v not in walk for k in range(1, d * t + 1)):
        return Direction.POSITIVE
    if all((end - k) % v not in walk for k in range(1, d * t + 1)):
        return Direction.NEGATIVE
    raise PreconditionError(
        f"both windows around t*a1 are blocked (v={v}, a1={a1}, d={d}, t={t}; "
        f"v >= d*t*(2t+1) = {d * t * (2 * t + 1)} is {v >= d * t * (2 * t + 1)})"
    )


def pair_conditions(G: Group, walk: Sequence, a1, t: int) -> dict:
    """Literal check of the three properties a pair walk must have."""
    steps = delta(G, walk)
    L = len(steps)
    return {
        "starts_with_a1": L >= t and all(s == a1 for s in steps[:t]),
        "ends_with_a1": L >= t and all(s == a1 for s in steps[L - t:]),
        "window": first_window_repeat(walk, t) is None,
    }


def _straight(G, start, step, count):
    out = [start]
    for _ in range(count):
        out.append(G._add(out[-1], step))
    return out


def _pair_walk(G, a1, lam1, a2, lam2, t, direction):
    mid = a2 if direction is Direction.POSITIVE else G._neg(a2)
    w = _straight(G, G.zero(), a1, t)
    w += _straight(G, w[-1], mid, lam2)[1:]
    w += _straight(G, w[-1], a1, lam1 - t)[1:]
    return w


def realize_pair(G: Group, a1, lam1: int, a2, lam2: int, t: int) -> list:
    """Weak realization of ``[a1^lam1, a2^lam2]`` opening and closing with ``t`` steps of ``a1``.

    With trivially intersecting cyclic subgroups the walk follows the
    ordering ``a1^(lam1-t), a2^lam2, a1^t``.  Otherwise it is ``t`` steps of
    ``a1``, then ``lam2`` steps of ``+a2`` or ``-a2``, then the rest of the
    ``a1`` steps.  The sign comes from the free side of ``t*a1`` inside
    ``<a1>``; if that walk fails verification the opposite sign is used.
    """
    _check_t(t)
    G.check(a1)
    G.check(a2)
    zero = G.zero()
    if a1 == zero or a2 == zero:
        raise PreconditionError("pair elements must be non-identity")
    if lam1 < 2 * t or lam2 < 1:
        raise PreconditionError(f"need lam1 >= 2t = {2 * t} and lam2 >= 1, got {lam1}, {lam2}")
    if G.smallest_prime_divisor <= t * (2 * t + 1):
        raise PreconditionError(
            f"smallest prime divisor {G.smallest_prime_divisor} of |G| must exceed t(2t+1) = {t * (2 * t + 1)}"
        )
    M = Multiset(G, Counter({a1: lam1}) + Counter({a2: lam2}))
    V1 = cyclic_subgroup(G, a1)
    d, size = subgroup_intersection(V1, cyclic_subgroup(G, a2))
    if size == 1:
        candidates = [partial_sums(G, [a1] * (lam1 - t) + [a2] * lam2 + [a1] * t)]
    else:
        # in dlog coordinates of <a1>, a1 is 1 and d is the divisor v/size
        first = free_window_direction(V1.v, 1, dlog(V1, d), t)
        other = Direction.NEGATIVE if first is Direction.POSITIVE else Direction.POSITIVE
        candidates = [_pair_walk(G, a1, lam1, a2, lam2, t, s) for s in (first, other)]
    for walk in candidates:
        if all(pair_conditions(G, walk, a1, t).values()) and verify_realization(G, walk, M, t):
            return walk
    raise ConstructionError(f"no verified pair walk for {M!r} with t={t}", "pair")


def glue(G: Group, first: Sequence, second: Sequence) -> list:
    """Append ``second`` translated to start at the endpoint of ``first``."""
    end = first[-1]
    return list(first) + [G._add(end, w) for w in second[1:]]


@dataclass(frozen=True)
class RealizationOutcome:
    walk: list
    route: str  # "glue" | "sequencing" | "brute-force"


def split_into_pairs(M: Multiset, t: int) -> list:
    """``(a1, share, a_i, l_i)`` for each pair walk of the glue route.

    ``a1`` is the element of largest multiplicity (first in canonical order
    on ties); every pair but the last gets ``2t`` copies of it and the last
    gets the remainder.
    """
    items = list(M.items())
    # items are in canonical order and max() keeps the first of equal keys
    a1, lam1 = max(items, key=lambda xk: xk[1])
    others = [(x, k) for x, k in items if x != a1]
    n = M.n
    shares = [2 * t] * (n - 2) + [lam1 - 2 * t * (n - 2)]
    return [(a1, share, x, k) for (x, k), share in zip(others, shares)]


def _glue_route(M: Multiset, t: int) -> list:
    G = M.group
    walk = [G.zero()]
    for a1, share, x, k in split_into_pairs(M, t):
        walk = glue(G, walk, realize_pair(G, a1, share, x, k, t))
        pair = first_window_repeat(walk, t)
        if pair is not None:
            raise ConstructionError(f"gluing created a window repeat at {pair}", "glue")
    return walk


def brute_force_realize(
    M: Multiset, t: int, budget: int = DEFAULT_BUDGET, max_size: int = BRUTE_FORCE_MAX
) -> SearchResult:
    """Backtracking over the next element of ``M`` and the sign of its step."""
    _check_t(t)
    if M.size > max_size:
        raise PreconditionError(f"brute force is limited to |M| <= {max_size}, got {M.size}")
    G = M.group
    counts = dict(M.items())
    moves = {x: list(dict.fromkeys([x, G._neg(x)])) for x in counts}
    walk = [G.zero()]
    nodes = 0
    out_of_budget = False

    def rec(remaining):
        nonlocal nodes, out_of_budget
        if not remaining:
            return True
        for x in counts:
            if not counts[x]:
                continue
            for step in moves[x]:
                nodes += 1
                if nodes > budget:
                    out_of_budget = True
                    return False
                w = G._add(walk[-1], step)
                if w in walk[-t:]:
                    continue
                counts[x] -= 1
                walk.append(w)
                if rec(remaining - 1):
                    return True
                counts[x] += 1
                walk.pop()
                if out_of_budget:
                    return False
        return False

    if rec(M.size):
        if not verify_realization(G, walk, M, t):
            raise ConstructionError("brute-force walk failed verification", "brute-force")
        return SearchResult(tuple(walk), True, nodes)
    return SearchResult(None, not out_of_budget, nodes)


def realize_multiset(
    M: Multiset,
    t: int,
    seed=0,
    max_attempts: int = 1000,
    brute_force_max: int = BRUTE_FORCE_MAX,
    budget: int = DEFAULT_BUDGET,
) -> RealizationOutcome:
    """Weak realization of ``M`` by gluing pair walks, sequencing, or brute force."""
    _check_t(t)
    G = M.group
    if M.size == 0:
        return RealizationOutcome([G.zero()], "sequencing")
    if M.n == 1:
        (a, lam), = M.items()
        if element_order(G, a) > t:
            return RealizationOutcome(_straight(G, G.zero(), a, lam), "sequencing")

    failures = []
    big = max(k for _, k in M.items())
    if M.n >= 2 and G.smallest_prime_divisor > t * (2 * t + 1) and big > 2 * M.n * t:
        try:
            walk = _glue_route(M, t)
            _final_check(G, walk, M, t, "glue")
            return RealizationOutcome(walk, "glue")
        except WeakSeqError as exc:
            failures.append(f"glue: {exc}")
    try:
        seq = sequence_multiset(M, t, seed=seed, max_attempts=max_attempts, budget=budget)
        walk = partial_sums(G, seq.ordering)
        _final_check(G, walk, M, t, "sequencing")
        return RealizationOutcome(walk, "sequencing")
    except WeakSeqError as exc:
        failures.append(f"sequencing: {exc}")
    if M.size <= brute_force_max:
        res = brute_force_realize(M, t, budget=budget, max_size=brute_force_max)
        if res.value is not None:
            return RealizationOutcome(list(res.value), "brute-force")
        what = "has no weak realization" if res.complete else "exhausted the brute-force budget"
        raise ConstructionError(f"{M!r} {what} for t={t}", "brute-force")
    raise ConstructionError("no route applies: " + "; ".join(failures), "route")


def _final_check(G, walk, M, t, route):
    v = verify_realization(G, walk, M, t)
    if not v:
        raise ConstructionError(f"{route} walk failed verification ({v.condition} at {v.where})", route)
