import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from weakseq.errors import AttemptsExhausted, ConstructionError, PreconditionError, ZeroSumFreeNotFound
from weakseq.groups import parse_group
from weakseq.multiset import Multiset, parse_multiset
from weakseq.sequencing import (
    block_sequence,
    brute_force_sequence,
    find_zero_sum_free_subset,
    greedy_extend,
    partial_sums,
    randomized_extend,
    sequence_multiset,
    verify_t_weak,
)

Z4, Z5, Z7, Z11, Z101 = (parse_group(f"Z{v}") for v in (4, 5, 7, 11, 101))


def naive_t_weak(G, ordering, t):
    s = partial_sums(G, ordering)
    return all(s[i] != s[j] for i in range(len(s)) for j in range(len(s)) if 1 <= abs(i - j) <= t)


def exists_by_permutations(M, t):
    return any(naive_t_weak(M.group, p, t) for p in set(itertools.permutations(M.expand())))


def test_partial_sums_examples():
    assert partial_sums(Z5, [1, 1, 1]) == [0, 1, 2, 3]
    assert partial_sums(Z4, [2, 2]) == [0, 2, 0]
    assert partial_sums(Z7, [3, 5, 1]) == [0, 3, 1, 2]


def test_verify_examples():
    assert verify_t_weak(Z4, [2, 2], 1).ok
    v = verify_t_weak(Z4, [2, 2], 2)
    assert not v.ok and v.where == (0, 2)
    assert verify_t_weak(Z5, [1, 1, 2], 2).ok
    assert verify_t_weak(Z5, [], 3).ok


def test_verify_reports_first_pair():
    # sums 0,1,0,1: violations (0,2) and (1,3); lexicographic first is (0,2)
    assert verify_t_weak(Z5, [1, 4, 1], 3).where == (0, 2)


@given(st.integers(2, 13), st.lists(st.integers(1, 100), max_size=10), st.integers(1, 6))
def test_verify_agrees_with_double_loop(v, raw, t):
    G = parse_group(f"Z{v}")
    ordering = [x % v or 1 for x in raw]
    assert verify_t_weak(G, ordering, t).ok == naive_t_weak(G, ordering, t)


@given(st.lists(st.integers(1, 10), max_size=10), st.integers(1, 6))
def test_verify_monotone_in_t(ordering, t):
    Z11 = parse_group("Z11")
    if verify_t_weak(Z11, ordering, t):
        assert all(verify_t_weak(Z11, ordering, u) for u in range(1, t))


def test_brute_force_examples():
    r = brute_force_sequence(parse_multiset(Z5, "1^2,2"), 2)
    assert r.status == "found" and naive_t_weak(Z5, r.value, 2)
    assert brute_force_sequence(parse_multiset(Z4, "2^2"), 2).status == "none"
    assert brute_force_sequence(parse_multiset(Z7, "1^6"), 3).value == (1,) * 6


def test_brute_force_limits():
    with pytest.raises(PreconditionError):
        brute_force_sequence(parse_multiset(Z101, "1^13"), 1)
    r = brute_force_sequence(parse_multiset(Z4, "1^2,2^2,3^2"), 3, budget=2)
    assert r.status == "unknown" and not r.complete


def test_brute_force_matches_permutation_oracle():
    rng = random.Random(5)
    for _ in range(120):
        G = rng.choice([Z4, Z5, Z7, parse_group("Z6"), parse_group("Z2xZ4")])
        elems = [x for x in G.elements() if x != G.zero()]
        M = Multiset.from_elements(G, rng.choices(elems, k=rng.randint(1, 6)))
        t = rng.randint(1, 4)
        r = brute_force_sequence(M, t)
        assert (r.value is not None) == exists_by_permutations(M, t)
        if r.value is not None:
            assert Counter(r.value) == M.counter() and naive_t_weak(G, r.value, t)


def test_brute_force_nonabelian(s3):
    M = Multiset(s3, {1: 2, 2: 1, 3: 1})
    r = brute_force_sequence(M, 2)
    assert (r.value is not None) == exists_by_permutations(M, 2)


def _has_small_zero_sum(G, T, t):
    for g in range(1, t + 1):
        for sub in itertools.combinations(T, g):
            for perm in itertools.permutations(sub):
                acc = G.zero()
                for y in perm:
                    acc = G.add(acc, y)
                if acc == G.zero():
                    return True
    return False


def test_zero_sum_free_examples():
    assert find_zero_sum_free_subset(Z7, [1, 2, 3], 1, 3) == [1, 2, 3]
    T = find_zero_sum_free_subset(Z7, range(1, 7), 2, 3)
    assert len(T) == 3 and not _has_small_zero_sum(Z7, T, 2)
    assert find_zero_sum_free_subset(Z5, [1, 4], 2, 2) is None
    with pytest.raises(PreconditionError):
        find_zero_sum_free_subset(Z5, [0, 1], 1, 1)


def test_zero_sum_free_budget():
    with pytest.raises(ZeroSumFreeNotFound):
        find_zero_sum_free_subset(Z101, range(1, 101), 3, 60, budget=10)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([7, 11, 13, 16, 30]), st.integers(1, 3), st.integers(1, 6), st.data())
def test_zero_sum_free_exhaustive_check(v, t, ell, data):
    G = parse_group(f"Z{v}")
    S = data.draw(st.sets(st.integers(1, v - 1), min_size=1, max_size=10))
    T = find_zero_sum_free_subset(G, S, t, ell)
    if T is None:
        # oracle: no ell-subset of S is zero-sum-free
        assert all(_has_small_zero_sum(G, c, t) for c in itertools.combinations(sorted(S), ell))
    else:
        assert len(T) == ell and set(T) <= S and not _has_small_zero_sum(G, T, t)


def test_zero_sum_free_nonabelian(s3):
    S = list(range(1, 6))
    for ell in range(1, 6):
        T = find_zero_sum_free_subset(s3, S, 3, ell)
        brute = [c for c in itertools.combinations(S, ell) if not _has_small_zero_sum(s3, c, 3)]
        assert (T is None) == (not brute)
        if T is not None:
            assert not _has_small_zero_sum(s3, T, 3)


def test_block_sequence_examples():
    S7 = Multiset(Z7, range(1, 7))
    M3, seq = block_sequence(parse_multiset(Z7, "1^2"), S7, 1)
    assert M3 == parse_multiset(Z7, "1^2") and seq == [1, 1]
    M1 = parse_multiset(Z11, "1^3,2^2,3")
    M3, seq = block_sequence(M1, Multiset(Z11, range(1, 11)), 1)
    assert seq == [1, 1, 1, 2, 2, 3] and M3 == M1
    M3, seq = block_sequence(Multiset(Z7), S7, 1)
    assert M3.size == 0 and seq == []


def test_block_sequence_preconditions():
    with pytest.raises(PreconditionError):
        block_sequence(parse_multiset(Z7, "1"), Multiset(Z7, [1, 2]), 1)
    with pytest.raises(PreconditionError):
        # p = 2 is not larger than t = 2
        block_sequence(Multiset(parse_group("Z40")), Multiset(parse_group("Z40"), range(1, 40)), 2)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([11, 13, 31, 53]), st.integers(1, 3), st.data())
def test_block_sequence_inclusions(p, t, data):
    G = parse_group(f"Z{p}")
    support = data.draw(st.sets(st.integers(1, p - 1), min_size=1, max_size=p - 1))
    M1 = Multiset(G, {x: data.draw(st.integers(1, 4)) for x in support})
    M2set = data.draw(st.sets(st.integers(1, p - 1), min_size=min(2 * t * t + 1, p - 1), max_size=p - 1))
    if len(M2set) <= 2 * t * t or p <= t:
        return
    M2 = Multiset(G, M2set)
    M3, seq = block_sequence(M1, M2, t)
    assert M1 <= M3 <= M1 + M2
    assert (M3 - M1).size <= t * t
    assert Counter(seq) == M3.counter()
    assert naive_t_weak(G, seq, t)


def test_greedy_extend_examples():
    assert greedy_extend(Z7, [1], [2, 3, 4], 2, 1) == [1, 2, 3]
    assert greedy_extend(Z5, [], [1, 2], 1, 2) == [1]
    assert greedy_extend(Z7, [3, 5, 1], [1, 2, 6], 1, 1) == [3, 5, 1, 1]
    with pytest.raises(PreconditionError):
        greedy_extend(Z7, [], [1, 2], 2, 2)
    with pytest.raises(PreconditionError):
        greedy_extend(Z4, [2, 2], [1], 1, 2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([7, 11, 13]), st.integers(1, 4), st.data())
def test_greedy_extend_always_fits(p, t, data):
    G = parse_group(f"Z{p}")
    S = sorted(data.draw(st.sets(st.integers(1, p - 1), min_size=t, max_size=p - 1)))
    h = data.draw(st.integers(0, len(S) - (t - 1)))
    out = greedy_extend(G, [], S, h, t)
    assert len(out) == h and len(set(out)) == h and naive_t_weak(G, out, t)


def test_randomized_extend_examples():
    rng = random.Random(3)
    S = rng.sample(range(1, 101), 20)
    ext = randomized_extend(Z101, [], S, 1, 3, seed=11)
    assert sorted(ext.ordering) == sorted(S) and naive_t_weak(Z101, ext.ordering, 1)
    ext = randomized_extend(Z11, [1, 1], [2, 3, 4, 5, 6, 7], 1, 3, seed=0)
    assert ext.ordering[:2] == [1, 1] and sorted(ext.ordering[2:]) == [2, 3, 4, 5, 6, 7]
    assert naive_t_weak(Z11, ext.ordering, 1)
    # |S| - ell - (t-1) = 0 is allowed; one more element of T is not
    assert sorted(randomized_extend(Z7, [], [1, 2, 3], 1, 3).ordering) == [1, 2, 3]
    with pytest.raises(PreconditionError):
        randomized_extend(Z7, [], [1, 2, 3], 1, 4)


def test_randomized_extend_failures_are_distinguishable():
    with pytest.raises(ZeroSumFreeNotFound):
        randomized_extend(Z7, [], [1, 3, 4, 6], 2, 3)
    with pytest.raises(AttemptsExhausted):
        randomized_extend(Z101, [], range(1, 21), 2, 15, max_attempts=0)


def test_randomized_extend_deterministic():
    S = list(range(1, 40))
    a = randomized_extend(Z101, [5], S, 2, 15, seed=123)
    b = randomized_extend(Z101, [5], S, 2, 15, seed=123)
    assert a == b and naive_t_weak(Z101, a.ordering, 2)


def test_sequence_multiset_examples():
    rng = random.Random(8)
    M = Multiset(Z101, {x: 2 for x in rng.sample(range(1, 101), 12)})
    out = sequence_multiset(M, 1, seed=1)
    assert out.stage is None and len(out.ordering) == 24
    assert Counter(out.ordering) == M.counter() and naive_t_weak(Z101, out.ordering, 1)
    assert sequence_multiset(parse_multiset(Z7, "1"), 1).ordering == [1]
    out = sequence_multiset(parse_multiset(Z5, "1^2,2,3"), 2)
    assert naive_t_weak(Z5, out.ordering, 2) and exists_by_permutations(parse_multiset(Z5, "1^2,2,3"), 2)
    assert sequence_multiset(Multiset(Z7), 2).ordering == []


def test_sequence_multiset_failure_paths():
    with pytest.raises(ConstructionError) as exc:
        sequence_multiset(parse_multiset(Z4, "2^2"), 2)
    assert exc.value.stage == "brute-force"
    big = Multiset(parse_group("Z40"), {x: 1 for x in range(1, 20)})
    with pytest.raises(PreconditionError):
        sequence_multiset(big, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2), st.integers(0, 2**32), st.data())
def test_sequence_multiset_outputs_verify(t, seed, data):
    G = parse_group("Z211")
    n = data.draw(st.integers(2 * t * t + 1, 40))
    support = data.draw(st.lists(st.integers(1, 210), min_size=n, max_size=n, unique=True))
    M = Multiset(G, {x: data.draw(st.integers(1, 3)) for x in support})
    try:
        out = sequence_multiset(M, t, seed=seed)
    except ConstructionError:
        return
    assert Counter(out.ordering) == M.counter() and naive_t_weak(G, out.ordering, t)
    assert sequence_multiset(M, t, seed=seed) == out
