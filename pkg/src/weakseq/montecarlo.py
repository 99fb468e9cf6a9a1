"""Monte Carlo estimate of the window-collision count for a random tail.

The experiment: a fixed t-weak head (a sequencing of ``M`` followed by the
greedily placed elements ``U'``) is extended by a uniformly random ordering
of ``tail_pool`` (the ``t-1`` unplaced elements plus a zero-sum-free block
``T``).  ``X`` is the number of pairs ``i < j <= i + t`` with ``s_i == s_j``.

Trials are split into fixed-size chunks, each with its own stream derived
from the master seed, so results do not depend on the number of workers.
"""

from __future__ import annotations

import math
import random
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .bounds import expectation_bound
from .errors import PreconditionError, ZeroSumFreeNotFound
from .groups import Group
from .sequencing import (
    _check_t,
    find_zero_sum_free_subset,
    first_window_repeat,
    greedy_extend,
    partial_sums,
)

CHUNK = 1000
CSV_COLUMNS = ("t", "ell", "bound_rational", "bound_float", "trials", "mean_X", "std_err")


@dataclass(frozen=True)
class MonteCarloReport:
    t: int
    ell: int
    trials: int
    mean_X: float
    std_err: float
    bound: Fraction

    @property
    def bound_float(self) -> float:
        return float(self.bound)

    def within_bound(self, z: float = 3.0) -> bool:
        return self.mean_X <= self.bound_float + z * self.std_err

    def csv_row(self) -> list:
        return [self.t, self.ell, str(self.bound), repr(self.bound_float), self.trials, repr(self.mean_X), repr(self.std_err)]

    def to_json(self) -> dict:
        row = [self.t, self.ell, str(self.bound), self.bound_float, self.trials, self.mean_X, self.std_err]
        return dict(zip(CSV_COLUMNS, row))


def count_collisions(G: Group, last_sums: Sequence, tail: Sequence, t: int) -> int:
    """Collisions involving at least one tail index, given the head's last ``t`` sums."""
    recent = deque(last_sums, maxlen=t)
    s = recent[-1]
    x = 0
    for y in tail:
        s = G._add(s, y)
        x += recent.count(s)
        recent.append(s)
    return x


def _chunk_stats(args):
    G, last_sums, pool, t, n, seed = args
    rng = random.Random(seed)
    pool = list(pool)
    total = total_sq = 0
    for _ in range(n):
        rng.shuffle(pool)
        x = count_collisions(G, last_sums, pool, t)
        total += x
        total_sq += x * x
    return total, total_sq


def _chunk_seeds(seed: int, count: int) -> list:
    return [int(s.generate_state(1, np.uint64)[0]) for s in np.random.SeedSequence(seed).spawn(count)]


def monte_carlo_expectation(
    G: Group,
    prefix: Sequence,
    tail_pool: Sequence,
    T: Sequence,
    t: int,
    trials: int,
    seed: int = 0,
    U_prime: Optional[Sequence] = None,
    workers: int = 1,
) -> MonteCarloReport:
    """Empirical mean and standard error of ``X`` over ``trials`` random tails.

    ``prefix`` is the whole fixed head; when ``U_prime`` is given it must be
    the set of the head's last ``len(U_prime)`` entries.
    """
    _check_t(t)
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    T = list(T)
    pool = list(tail_pool)
    if not T or not set(T) <= set(pool):
        raise PreconditionError("T must be a non-empty subset of the tail pool")
    if len(set(pool)) != len(pool) or len(pool) - len(T) != t - 1:
        raise PreconditionError(f"tail pool must be T plus t-1 = {t - 1} distinct leftovers")
    if U_prime is not None:
        k = len(U_prime)
        if Counter(prefix[len(prefix) - k:]) != Counter(U_prime):
            raise PreconditionError("U_prime is not the tail of the prefix")
    sums = partial_sums(G, prefix)
    if first_window_repeat(sums, t) is not None:
        raise PreconditionError("prefix is not t-weak")
    for x in pool:
        G.check(x)

    last = sums[-t:]
    sizes = [CHUNK] * (trials // CHUNK) + ([trials % CHUNK] if trials % CHUNK else [])
    jobs = [(G, last, pool, t, n, s) for n, s in zip(sizes, _chunk_seeds(seed, len(sizes)))]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_chunk_stats, jobs))
    else:
        parts = [_chunk_stats(j) for j in jobs]
    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mean = total / trials
    if trials > 1:
        var = (total_sq - total * total / trials) / (trials - 1)
        std_err = math.sqrt(max(var, 0.0) / trials)
    else:
        std_err = 0.0
    bound = expectation_bound(t, len(T)).bound
    return MonteCarloReport(t, len(T), trials, mean, std_err, bound)


@dataclass(frozen=True)
class Scenario:
    group: Group
    t: int
    prefix: list  # full fixed head, ends with the greedy part
    U_prime: list
    leftover: list
    T: list

    @property
    def tail_pool(self) -> list:
        return self.leftover + self.T


def build_scenario(
    G: Group, t: int, ell: int, seed: int = 0, head_len: int = 6, greedy: int = 8
) -> Scenario:
    """Random instance of the experiment: a t-weak head, a set ``S``, its split.

    ``S`` has ``ell + (t-1) + greedy`` random non-identity elements; the
    zero-sum-free block ``T`` is taken from it, ``greedy`` elements of the
    rest are appended to the head and ``t-1`` are left for the tail.
    """
    _check_t(t)
    rng = random.Random(seed)
    zero = G.zero()
    nonzero = [x for x in G.elements() if x != zero]
    k = ell + (t - 1) + greedy
    if k > len(nonzero):
        raise PreconditionError(f"group too small for a set of {k} non-identity elements")
    head, sums = [], [zero]
    tries = 0
    while len(head) < head_len:
        tries += 1
        if tries > 100 * head_len:
            raise PreconditionError("could not grow a random t-weak head")
        x = rng.choice(nonzero)
        s = G._add(sums[-1], x)
        if s not in sums[-t:]:
            head.append(x)
            sums.append(s)
    S = rng.sample(nonzero, k)
    T = find_zero_sum_free_subset(G, S, t, ell)
    if T is None:
        raise ZeroSumFreeNotFound(f"random set has no zero-sum-free subset of size {ell}", "zero-sum-free")
    in_T = set(T)
    U = [x for x in G.sorted(S) if x not in in_T]
    full = greedy_extend(G, head, U, greedy, t)
    placed = full[len(head):]
    leftover = [x for x in U if x not in set(placed)]
    return Scenario(G, t, full, placed, leftover, T)


def run_scenario(sc: Scenario, trials: int, seed: int = 0, workers: int = 1) -> MonteCarloReport:
    return monte_carlo_expectation(
        sc.group, sc.prefix, sc.tail_pool, sc.T, sc.t, trials, seed=seed, U_prime=sc.U_prime, workers=workers
    )
