import itertools

import pytest

from coarray_codebook.bounds import (BoundsError, binomial, bounds_report, build_nested_pair,
                                     build_nonredundant_pair, build_ula_pair, exact_size_nonredundant,
                                     exact_size_ula, lower_bound_nested, upper_bound)
from coarray_codebook.codebook import ParameterTuple, admissible, enumerate_constrained
from coarray_codebook.geometry import ArrayGeometry, sum_set, uniform

from oracles import factorial_binomial

T = ParameterTuple


@pytest.mark.parametrize("n, k, v", [(18, 10, 43758), (2, 1, 2), (5, 7, 0), (4, -1, 0), (0, 0, 1)])
def test_binomial(n, k, v):
    assert binomial(n, k) == v


def test_binomial_matches_factorials():
    for n in range(40):
        for k in range(-2, n + 3):
            assert binomial(n, k) == factorial_binomial(n, k)
    assert binomial(200, 100) == factorial_binomial(200, 100)


def test_upper_bound_examples():
    assert upper_bound(T(3, 4, 4, 7)) == 2
    assert upper_bound(T(12, 20, 20, 39)) == 43758
    for n in range(2, 9):
        assert upper_bound(T(n, n, n, 2 * n - 1)) == 1


def test_upper_bound_inadmissible():
    with pytest.raises(BoundsError, match="inadmissible"):
        upper_bound(T(2, 4, 4, 12))


def test_upper_bound_q1():
    with pytest.warns(UserWarning):
        assert upper_bound(T(1, 3, 4, 6)) == 0
    assert upper_bound(T(1, 1, 4, 4)) == 1


def test_lower_bound_examples():
    assert lower_bound_nested(T(4, 5, 4, 12)) == 2
    assert lower_bound_nested(T(3, 3, 4, 12)) == 1
    assert lower_bound_nested(T(12, 20, 20, 240)) == 1
    assert lower_bound_nested(T(1, 1, 4, 4)) == 1


def test_lower_bound_needs_integer_L():
    with pytest.raises(BoundsError, match="integer L"):
        lower_bound_nested(T(3, 4, 4, 7))


def test_exact_size_ula():
    assert exact_size_ula(T(3, 4, 4, 7)) == 2
    assert exact_size_ula(T(2, 4, 4, 7)) == 1
    assert exact_size_ula(T(5, 5, 5, 9)) == 1
    with pytest.raises(BoundsError, match="ULA exactness conditions not met"):
        exact_size_ula(T(3, 6, 4, 9))  # N_tx > N_rx + 1
    with pytest.raises(BoundsError, match="ULA exactness conditions not met"):
        exact_size_ula(T(3, 4, 4, 8))


def test_exact_size_nonredundant():
    assert exact_size_nonredundant(T(3, 3, 4, 12)) == 1
    assert exact_size_nonredundant(T(4, 4, 3, 12)) == 1
    with pytest.raises(BoundsError, match="only full selection"):
        exact_size_nonredundant(T(2, 3, 4, 12))


def test_builders():
    assert build_ula_pair(3, 4) == (ArrayGeometry((0, 1, 2)), ArrayGeometry((0, 1, 2, 3)))
    assert build_ula_pair(1, 1) == (ArrayGeometry((0,)), ArrayGeometry((0,)))
    assert sum_set(*build_ula_pair(4, 4)) == uniform(7)
    tx, rx = build_nonredundant_pair(3, 4)
    assert (tx.positions, rx.positions) == ((0, 4, 8), (0, 1, 2, 3))
    assert sum_set(tx, rx) == uniform(12)
    assert build_nonredundant_pair(1, 5) == (ArrayGeometry((0,)), uniform(5))
    tx, rx = build_nonredundant_pair(4, 3)
    assert tx.positions == (0, 3, 6, 9) and len(sum_set(tx, rx)) == 12


def test_build_nested_pair():
    tx, rx, core = build_nested_pair(5, 4, 12)
    assert tx.positions == (0, 1, 2, 4, 8)
    assert rx.positions == (0, 1, 2, 3)
    assert core.positions == (0, 4, 8)
    tx, rx, core = build_nested_pair(3, 4, 12)
    assert tx == core == ArrayGeometry((0, 4, 8))
    with pytest.raises(BoundsError, match="integer L"):
        build_nested_pair(4, 4, 7)
    with pytest.raises(BoundsError):
        build_nested_pair(2, 4, 12)  # L = 3 > N_tx


def test_alternative_nested_filler_matches_bound():
    # a different filler choice, {1, 6}, gives the same guarantee
    tx = ArrayGeometry((0, 1, 4, 6, 8))
    rx = uniform(4)
    assert sum_set(tx, rx) == uniform(12)
    book = enumerate_constrained(4, tx, rx)
    assert len(book) >= lower_bound_nested(T(4, 5, 4, 12))


@pytest.mark.parametrize("seed", range(20))
def test_nested_pair_random_filler(seed):
    for n_tx, n_rx, n_sigma in [(5, 4, 12), (6, 3, 9), (7, 5, 15), (4, 2, 6)]:
        tx, rx, core = build_nested_pair(n_tx, n_rx, n_sigma, rng=seed)
        assert len(tx) == n_tx and core.issubset(tx)
        assert sum_set(tx, rx) == uniform(n_sigma)
        L = n_sigma // n_rx
        for Q in range(L, n_tx + 1):
            words = enumerate_constrained(Q, tx, rx)
            assert len(words) >= binomial(n_tx - L, Q - L)


def test_nested_pair_core_supersets_all_valid():
    for n_tx in range(1, 8):
        for n_rx in range(1, 6):
            for L in range(1, n_tx + 1):
                n_sigma = L * n_rx
                if n_sigma < n_tx + n_rx - 1:
                    continue
                tx, rx, core = build_nested_pair(n_tx, n_rx, n_sigma)
                assert sum_set(tx, rx) == uniform(n_sigma)
                for Q in range(L, n_tx + 1):
                    words = set(enumerate_constrained(Q, tx, rx).codewords)
                    supersets = [w for w in itertools.combinations(tx.positions, Q)
                                 if set(core.positions) <= set(w)]
                    assert all(ArrayGeometry(w) in words for w in supersets)


def test_lower_not_above_upper_sweep():
    for n_tx in range(1, 13):
        for n_rx in range(1, 13):
            for n_sigma in range(n_tx + n_rx - 1, n_tx * n_rx + 1):
                if n_sigma % n_rx:
                    continue
                for Q in range(1, n_tx + 1):
                    t = T(Q, n_tx, n_rx, n_sigma)
                    if admissible(t):
                        assert lower_bound_nested(t) <= upper_bound(t), t


def test_bounds_report():
    rep = bounds_report(T(4, 5, 4, 12))
    assert (rep.admissible, rep.L, rep.upper, rep.lower, rep.exact) == (True, 3, 3, 2, None)
    assert rep.to_dict()["exact"] == "unknown"
    rep = bounds_report(T(3, 4, 4, 7))
    assert rep.lower is None and rep.exact == 2
    assert rep.to_dict()["lower"] == "not-applicable"
    rep = bounds_report(T(12, 20, 20, 39))
    assert rep.to_dict()["upper"] == "43758"
    assert not bounds_report(T(2, 4, 4, 12)).admissible
