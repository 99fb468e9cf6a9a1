"""t-weak sequencings of multisets.

An ordering ``(y_1, ..., y_m)`` is t-weak when its partial sums
``s_0 = 0, s_i = s_{i-1} + y_i`` satisfy ``s_i != s_j`` whenever
``1 <= |i - j| <= t``.  This module checks that property, searches for such
orderings exhaustively at small sizes, and implements the constructive
pipeline that works for multisets with a large underlying set:

1. ``block_sequence`` lays out all but one copy of every element in
   consecutive blocks, using at most ``t^2`` separator elements;
2. ``greedy_extend`` appends most of the remaining distinct elements one at a
   time;
3. ``randomized_extend`` orders the last few elements together with a
   zero-sum-free block by rejection sampling.

Every constructor verifies its result before returning it.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    AttemptsExhausted,
    ConstructionError,
    PreconditionError,
    ZeroSumFreeNotFound,
)
from .groups import Group
from .multiset import Multiset

BRUTE_FORCE_MAX = 12
DEFAULT_BUDGET = 2_000_000
DEFAULT_MAX_ATTEMPTS = 1000


@dataclass(frozen=True)
class Verdict:
    ok: bool
    condition: Optional[str] = None
    where: Optional[tuple] = None

    def __bool__(self):
        return self.ok


OK = Verdict(True)


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a budgeted exhaustive search.

    ``complete`` is False only when the budget ran out before the search
    space was exhausted, in which case absence of a value proves nothing.
    """

    value: Optional[tuple]
    complete: bool
    nodes: int

    @property
    def status(self) -> str:
        if self.value is not None:
            return "found"
        return "none" if self.complete else "unknown"


def _check_t(t):
    if not isinstance(t, int) or t < 1:
        raise PreconditionError(f"window t must be a positive integer, got {t!r}")


def partial_sums(G: Group, ordering: Sequence) -> list:
    sums = [G.zero()]
    for y in ordering:
        sums.append(G.add(sums[-1], y))
    return sums


def first_window_repeat(vertices: Sequence, t: int) -> Optional[tuple]:
    """Lexicographically first ``(i, j)`` with ``0 < j - i <= t`` and equal entries."""
    n = len(vertices)
    for i in range(n):
        vi = vertices[i]
        for j in range(i + 1, min(n, i + t + 1)):
            if vertices[j] == vi:
                return (i, j)
    return None


def verify_t_weak(G: Group, ordering: Sequence, t: int) -> Verdict:
    _check_t(t)
    pair = first_window_repeat(partial_sums(G, ordering), t)
    if pair is None:
        return OK
    return Verdict(False, "window", pair)


def _extend_sums(G, sums, items, t):
    """Sums after appending ``items``, or None if a window repeat appears."""
    out = list(sums)
    for y in items:
        s = G._add(out[-1], y)
        if s in out[-t:]:
            return None
        out.append(s)
    return out


def _require_verified(G, ordering, t, stage):
    v = verify_t_weak(G, ordering, t)
    if not v:
        raise ConstructionError(f"{stage} produced an ordering with a window repeat at {v.where}", stage)


def brute_force_sequence(
    M: Multiset, t: int, budget: int = DEFAULT_BUDGET, max_size: int = BRUTE_FORCE_MAX
) -> SearchResult:
    """Backtracking search over orderings of ``M``, distinct choices per step."""
    _check_t(t)
    if M.size > max_size:
        raise PreconditionError(f"brute force is limited to |M| <= {max_size}, got {M.size}")
    G = M.group
    counts = dict(M.items())
    keys = list(counts)
    order, sums = [], [G.zero()]
    nodes = 0
    out_of_budget = False

    def rec():
        nonlocal nodes, out_of_budget
        if len(order) == M.size:
            return True
        for x in keys:
            if not counts[x]:
                continue
            nodes += 1
            if nodes > budget:
                out_of_budget = True
                return False
            s = G._add(sums[-1], x)
            if s in sums[-t:]:
                continue
            counts[x] -= 1
            order.append(x)
            sums.append(s)
            if rec():
                return True
            counts[x] += 1
            order.pop()
            sums.pop()
            if out_of_budget:
                return False
        return False

    if rec():
        _require_verified(G, order, t, "brute-force")
        return SearchResult(tuple(order), True, nodes)
    return SearchResult(None, not out_of_budget, nodes)


def _zero_sum_tester(G: Group, t: int):
    """Incremental test for "adding x creates a zero sum of size <= t"."""
    zero = G.zero()
    if G.is_abelian:
        # sums[g] holds the sums of all g-subsets of the chosen elements
        def start():
            return [{zero}] + [set() for _ in range(t - 1)]

        def admits(state, x):
            nx = G._neg(x)
            return all(nx not in level for level in state)

        def push(state, x):
            new = [set(level) for level in state]
            for g in range(len(state) - 1, 0, -1):
                new[g] |= {G._add(s, x) for s in state[g - 1]}
            return new

        return start, admits, push

    def start():
        return ()

    def admits(chosen, x):
        if x == zero:
            return False
        for g in range(1, t):
            for sub in itertools.combinations(chosen, g):
                for perm in itertools.permutations(sub + (x,)):
                    acc = zero
                    for y in perm:
                        acc = G._add(acc, y)
                    if acc == zero:
                        return False
        return True

    def push(chosen, x):
        return chosen + (x,)

    return start, admits, push


def find_zero_sum_free_subset(
    G: Group, S: Sequence, t: int, ell: int, budget: int = DEFAULT_BUDGET
) -> Optional[list]:
    """A subset ``T`` of ``S`` of size ``ell`` with no zero sum of size ``<= t``.

    For non-abelian groups every ordering of every small subset is checked.
    Returns None when no such subset exists; raises if the node budget runs
    out first.
    """
    _check_t(t)
    cands = G.sorted(set(S))
    if G.zero() in cands:
        raise PreconditionError("S must not contain the identity")
    if ell < 0:
        raise PreconditionError(f"ell must be non-negative, got {ell}")
    start, admits, push = _zero_sum_tester(G, t)
    chosen = []
    nodes = 0

    def rec(i, state):
        nonlocal nodes
        if len(chosen) == ell:
            return True
        for j in range(i, len(cands) - (ell - len(chosen)) + 1):
            nodes += 1
            if nodes > budget:
                raise ZeroSumFreeNotFound(
                    f"zero-sum-free search exceeded {budget} nodes", "zero-sum-free"
                )
            x = cands[j]
            if not admits(state, x):
                continue
            chosen.append(x)
            if rec(j + 1, push(state, x)):
                return True
            chosen.pop()
        return False

    return list(chosen) if rec(0, start()) else None


def block_sequence(M1: Multiset, M2: Multiset, t: int):
    """t-weak sequencing of ``M1`` plus at most ``t^2`` separators from ``M2``.

    Copies of each element of ``M1`` are placed as one consecutive block,
    largest multiplicity first.  At every step the first remaining block
    that can be appended directly is taken; when none fits, the first
    remaining block is preceded by the first element of ``M2`` (canonical
    order, multiplicity permitting) that makes it fit.

    Returns ``(M3, ordering)`` with ``M1 <= M3 <= M1 + M2``.
    """
    _check_t(t)
    G = M1.group
    if M2.group != G:
        raise PreconditionError("M1 and M2 live in different groups")
    if M2.n <= 2 * t * t:
        raise PreconditionError(f"underlying set of M2 must exceed 2t^2 = {2 * t * t}, got {M2.n}")
    if G.smallest_prime_divisor <= t:
        raise PreconditionError(
            f"smallest prime divisor {G.smallest_prime_divisor} of |G| must exceed t={t}"
        )
    blocks = sorted(M1.items(), key=lambda xk: (-xk[1], G.sort_key(xk[0])))
    spare = dict(M2.items())
    ordering, sums = [], [G.zero()]
    used = Counter()
    while blocks:
        for idx, (x, k) in enumerate(blocks):
            new = _extend_sums(G, sums, [x] * k, t)
            if new is not None:
                ordering += [x] * k
                sums = new
                del blocks[idx]
                break
        else:
            x, k = blocks[0]
            for sep, left in spare.items():
                if not left:
                    continue
                new = _extend_sums(G, sums, [sep] + [x] * k, t)
                if new is not None:
                    break
            else:
                raise ConstructionError(f"no separator from M2 fits before block {x!r}^{k}", "blocks")
            spare[sep] -= 1
            used[sep] += 1
            ordering += [sep] + [x] * k
            sums = new
            del blocks[0]
    if sum(used.values()) > t * t:
        raise ConstructionError(f"used {sum(used.values())} separators, more than t^2", "blocks")
    M3 = M1 + Multiset(G, used)
    _require_verified(G, ordering, t, "blocks")
    return M3, ordering


def greedy_extend(G: Group, ordering: Sequence, S: Sequence, h: int, t: int) -> list:
    """Append ``h`` distinct elements of ``S``, each the first one that fits."""
    _check_t(t)
    S = G.sorted(set(S))
    if h < 0 or h > len(S) - (t - 1):
        raise PreconditionError(f"need 0 <= h <= |S| - (t-1) = {len(S) - (t - 1)}, got h={h}")
    if G.zero() in S:
        raise PreconditionError("S must not contain the identity")
    sums = partial_sums(G, ordering)
    if first_window_repeat(sums, t) is not None:
        raise PreconditionError("the ordering to extend is not t-weak")
    out = list(ordering)
    unused = list(S)
    for _ in range(h):
        window = sums[-t:]
        for idx, x in enumerate(unused):
            s = G._add(sums[-1], x)
            if s not in window:
                break
        else:  # pragma: no cover - excluded by the h <= |S| - (t-1) bound
            raise ConstructionError("no element of S fits", "greedy")
        out.append(x)
        sums.append(s)
        del unused[idx]
    _require_verified(G, out, t, "greedy")
    return out


@dataclass(frozen=True)
class RandomizedExtension:
    ordering: list
    zero_sum_free: list
    greedy_part: list
    attempts: int


def randomized_extend(
    G: Group,
    ordering: Sequence,
    S: Sequence,
    t: int,
    ell: int,
    seed=0,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> RandomizedExtension:
    """Extend a t-weak ordering by every element of the set ``S``.

    A zero-sum-free block ``T`` of size ``ell`` is set aside, all but ``t-1``
    of the other elements are appended greedily, and the ``t-1+ell`` left
    over are shuffled uniformly until the whole ordering is t-weak.
    """
    _check_t(t)
    S = G.sorted(set(S))
    h = len(S) - ell - (t - 1)
    if ell < 1 or h < 0:
        raise PreconditionError(f"need ell >= 1 and |S| - ell - (t-1) >= 0, got |S|={len(S)}, ell={ell}")
    T = find_zero_sum_free_subset(G, S, t, ell)
    if T is None:
        raise ZeroSumFreeNotFound(f"S has no zero-sum-free subset of size {ell}", "zero-sum-free")
    in_T = set(T)
    U = [x for x in S if x not in in_T]
    head = greedy_extend(G, ordering, U, h, t)
    placed = set(head[len(ordering):])
    pool = [x for x in U if x not in placed] + T
    sums = partial_sums(G, head)
    rng = random.Random(seed)
    for attempt in range(1, max_attempts + 1):
        rng.shuffle(pool)
        if _extend_sums(G, sums, pool, t) is not None:
            out = head + pool
            _require_verified(G, out, t, "randomized")
            return RandomizedExtension(out, T, head[len(ordering):], attempt)
    raise AttemptsExhausted(f"no valid tail ordering in {max_attempts} attempts", "randomized")


@dataclass(frozen=True)
class SequencingOutcome:
    ordering: list
    stage: Optional[str]  # None when the constructive pipeline produced it


def sequence_multiset(
    M: Multiset,
    t: int,
    seed=0,
    ell: Optional[int] = None,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
    brute_force_max: int = BRUTE_FORCE_MAX,
    budget: int = DEFAULT_BUDGET,
) -> SequencingOutcome:
    """t-weak sequencing of ``M`` via blocks, greedy and randomized extension.

    The pipeline needs ``p > t`` and an underlying set larger than ``2t^2``.
    When those fail, or a stage fails, small multisets fall back to brute
    force; otherwise the failure is raised with its stage.
    """
    from .bounds import min_ell

    _check_t(t)
    G = M.group
    if M.size == 0:
        return SequencingOutcome([], None)
    if ell is None:
        ell = min_ell(t)

    failure: Exception
    if G.smallest_prime_divisor <= t:
        failure = PreconditionError(f"smallest prime divisor of |G| must exceed t={t}")
    elif M.n <= 2 * t * t:
        failure = PreconditionError(f"underlying set must exceed 2t^2 = {2 * t * t}, got {M.n}")
    else:
        try:
            ordering = _pipeline(M, t, seed, ell, max_attempts)
            return SequencingOutcome(ordering, None)
        except (ConstructionError, PreconditionError) as exc:
            failure = exc
    if M.size <= brute_force_max:
        res = brute_force_sequence(M, t, budget=budget, max_size=brute_force_max)
        if res.value is not None:
            return SequencingOutcome(list(res.value), "brute-force")
        if res.complete:
            raise ConstructionError(f"{M!r} has no {t}-weak sequencing", "brute-force")
        raise ConstructionError("brute-force budget exhausted", "brute-force")
    raise failure


def _pipeline(M: Multiset, t, seed, ell, max_attempts):
    G = M.group
    support = M.support()
    S = Multiset(G, support)
    M1 = M - S
    M3, head = block_sequence(M1, S, t)
    separators = M3 - M1
    U = [x for x in support if separators[x] == 0]
    try:
        ext = randomized_extend(G, head, U, t, ell, seed=seed, max_attempts=max_attempts)
    except PreconditionError as exc:
        raise ConstructionError(str(exc), "randomized") from exc
    ordering = ext.ordering
    if Counter(ordering) != M.counter():
        raise ConstructionError("pipeline output is not a permutation of M", "pipeline")
    _require_verified(G, ordering, t, "pipeline")
    return ordering
