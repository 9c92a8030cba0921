import pytest

from freelocus.invariants import (
    det_generic_check,
    lyndon_words,
    same_orbit_closure,
    trace_fingerprint,
)
from freelocus.linalg import Matrix, direct_sum, inverse
from freelocus.pencil import MonicPencil
from freelocus.sampling import rand_int_tuple, rand_invertible, rng_for
from freelocus.scalars import Scalar

E12 = Matrix.unit(2, 2, 0, 1)
E21 = Matrix.unit(2, 2, 1, 0)


# -- lyndon words ------------------------------------------------------------------


def test_lyndon_single_letter():
    assert lyndon_words(1, 3) == [(1,)]


def test_lyndon_two_letters_len_two():
    assert lyndon_words(2, 2) == [(1,), (2,), (1, 2)]


def test_lyndon_two_letters_len_three():
    words = lyndon_words(2, 3)
    assert words == [(1,), (2,), (1, 2), (1, 1, 2), (1, 2, 2)]


def test_lyndon_counts_by_necklace_formula():
    # number of Lyndon words of length n over g letters: (1/n) sum mu(d) g^(n/d)
    words = lyndon_words(2, 8)
    by_len = {}
    for w in words:
        by_len[len(w)] = by_len.get(len(w), 0) + 1
    assert [by_len.get(n, 0) for n in range(1, 9)] == [2, 1, 2, 3, 6, 9, 18, 30]


def test_lyndon_words_are_primitive_minimal_rotations():
    for w in lyndon_words(3, 4):
        rotations = {w[k:] + w[:k] for k in range(len(w))}
        assert len(rotations) == len(w)  # primitive
        assert min(rotations) == w       # lexicographically least


def test_lyndon_rejects_bad_args():
    with pytest.raises(ValueError):
        lyndon_words(0, 3)


# -- fingerprints -------------------------------------------------------------------


def test_fingerprint_nilpotent_all_zero():
    fp = trace_fingerprint((E12,))
    assert all(not v for v in fp.entries.values())


def test_fingerprint_swap_pair():
    fp = trace_fingerprint((E12, E21))
    assert not fp.entries[(1,)]
    assert not fp.entries[(2,)]
    assert fp.entries[(1, 2)] == Scalar(1)


@pytest.mark.parametrize("seed", range(100))
def test_fingerprint_conjugation_invariance(seed):
    rng = rng_for(seed, "fp")
    d = rng.randint(2, 3)
    a = rand_int_tuple(rng, 2, d, 2)
    q = rand_invertible(rng, d)
    qinv = inverse(q)
    b = tuple(q @ m @ qinv for m in a)
    assert trace_fingerprint(a) == trace_fingerprint(b)


def test_fingerprint_of_direct_sum_is_sum():
    rng = rng_for(5, "fp-sum")
    a = rand_int_tuple(rng, 2, 2, 2)
    b = rand_int_tuple(rng, 2, 2, 2)
    ab = tuple(direct_sum(x, y) for x, y in zip(a, b))
    fa, fb, fab = trace_fingerprint(a), trace_fingerprint(b), trace_fingerprint(ab)
    for w, v in fa.entries.items():
        assert fab.entries[w] == v + fb.entries[w]


# -- orbit closure ------------------------------------------------------------------


def test_orbit_nilpotent_vs_zero():
    assert same_orbit_closure((E12,), (Matrix.zeros(2),))


def test_orbit_permutation_conjugates():
    a = (Matrix.from_rows([[1, 0], [0, 2]]),)
    b = (Matrix.from_rows([[2, 0], [0, 1]]),)
    assert same_orbit_closure(a, b)


def test_orbit_distinguishes_trace():
    a = (Matrix.from_rows([[1, 0], [0, 1]]),)
    b = (Matrix.from_rows([[1, 0], [0, 0]]),)
    assert not same_orbit_closure(a, b)


# -- determinant cross-check -----------------------------------------------------------


def test_det_check_nilpotent_vs_zero():
    la = MonicPencil((E12,))
    lb = MonicPencil((Matrix.zeros(2),))
    assert det_generic_check(la, lb, trials=40)


def test_det_check_conjugates_agree():
    rng = rng_for(3, "detchk")
    a = rand_int_tuple(rng, 2, 2, 2)
    q = rand_invertible(rng, 2)
    qinv = inverse(q)
    b = tuple(q @ m @ qinv for m in a)
    assert det_generic_check(MonicPencil(a), MonicPencil(b), trials=60)


def test_det_check_refutes_scalar_mismatch():
    la = MonicPencil((Matrix.from_rows([[1]]),))
    lb = MonicPencil((Matrix.from_rows([[2]]),))
    assert not det_generic_check(la, lb, trials=10)


def test_det_check_validates_shapes():
    with pytest.raises(ValueError):
        det_generic_check(MonicPencil((E12,)), MonicPencil((Matrix.zeros(3),)))
