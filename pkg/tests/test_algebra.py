import pytest

from freelocus.algebra import (
    conjugacy_witness,
    intertwiner_space,
    lambda_bound,
    malcev_complement,
    radical,
    wedderburn_components,
    word_span,
)
from freelocus.linalg import Matrix, SpanSieve, det
from freelocus.sampling import rand_int_tuple, rand_invertible, rng_for
from freelocus.scalars import Scalar

E11 = Matrix.unit(2, 2, 0, 0)
E12 = Matrix.unit(2, 2, 0, 1)
E21 = Matrix.unit(2, 2, 1, 0)
E22 = Matrix.unit(2, 2, 1, 1)


def conj_tuple(mats, p):
    pinv_cols = []
    from freelocus.linalg import inverse

    pinv = inverse(p)
    return tuple(p @ m @ pinv for m in mats)


# -- lambda bound ---------------------------------------------------------------


def test_lambda_bound_values():
    # exact ceilings of d*sqrt(2d^2/(d-1)+1/4)+d/2-2
    assert lambda_bound(1) == 1
    assert lambda_bound(2) == 5
    assert lambda_bound(3) == 9
    with pytest.raises(ValueError):
        lambda_bound(0)


def test_lambda_bound_monotone_window():
    vals = [lambda_bound(d) for d in range(1, 12)]
    assert vals == sorted(vals)


# -- word span --------------------------------------------------------------------


def test_word_span_full_matrix_algebra():
    basis = word_span((E12, E21))
    assert basis.dim == 4
    assert sorted(basis.words) == sorted([(1,), (2,), (1, 2), (2, 1)])
    assert basis.contains_identity
    assert basis.unit == Matrix.identity(2)
    assert basis.length <= lambda_bound(2)


def test_word_span_nilpotent_generator():
    basis = word_span((E12,))
    assert basis.dim == 1
    assert basis.unit is None
    assert not basis.contains_identity


def test_word_span_idempotent_generator():
    basis = word_span((Matrix.identity(2),))
    assert basis.dim == 1
    assert basis.unit == Matrix.identity(2)


def test_word_span_rejects_empty():
    with pytest.raises(ValueError):
        word_span(())


@pytest.mark.parametrize("seed", range(10))
def test_word_span_stabilization(seed):
    rng = rng_for(seed, "span")
    d = rng.randint(1, 4)
    g = rng.randint(1, 3)
    mats = rand_int_tuple(rng, g, d, 2)
    basis = word_span(mats)
    assert basis.length <= lambda_bound(d)
    # span at length l+1 equals recorded span: products of letters with basis
    sieve = SpanSieve(d * d)
    for m in basis.matrices:
        sieve.insert(m.vectorize())
    for gen in mats:
        for m in basis.matrices:
            assert sieve.coords((gen @ m).vectorize()) is not None


# -- radical -----------------------------------------------------------------------


def test_radical_of_nilpotent_algebra():
    basis = word_span((E12,))
    rad = radical(basis)
    assert rad.quotient_dim == 0
    assert len(rad.radical_basis) == 1


def test_radical_of_semisimple_diagonal():
    basis = word_span((Matrix.from_rows([[1, 0], [0, 2]]),))
    rad = radical(basis)
    assert rad.quotient_dim == 2
    assert rad.radical_basis == []


def test_radical_of_rank_one_idempotent():
    m = Matrix.from_rows([[1, 1], [0, 0]])
    basis = word_span((m,))
    rad = radical(basis)
    assert rad.quotient_dim == 1
    assert rad.radical_basis == []


@pytest.mark.parametrize("seed", range(8))
def test_radical_invariants(seed):
    rng = rng_for(seed, "radical")
    d = rng.randint(2, 4)
    mats = rand_int_tuple(rng, rng.randint(1, 2), d, 2)
    basis = word_span(mats)
    rad = radical(basis)
    assert rad.quotient_dim + len(rad.radical_basis) == basis.dim
    # trace pairing with every basis element vanishes
    for r in rad.radical_basis:
        for m in basis.matrices:
            assert not (r @ m).trace()
    # d-fold products of radical elements vanish
    if rad.radical_basis:
        probe = rad.radical_basis[0]
        acc = probe
        for _ in range(d - 1):
            acc = acc @ probe
        assert acc.is_zero()
    # products of radical elements with generators stay in the radical span
    if rad.radical_basis:
        sieve = SpanSieve(d * d)
        for r in rad.radical_basis:
            sieve.insert(r.vectorize())
        for r in rad.radical_basis:
            for gen in mats:
                assert sieve.coords((gen @ r).vectorize()) is not None
                assert sieve.coords((r @ gen).vectorize()) is not None


def test_quotient_is_semisimple_on_regular_representation():
    # rerun the radical on the left-regular representation of the quotient
    mats = (Matrix.from_rows([[1, 1], [0, 0]]), E12)
    basis = word_span(mats)
    rad = radical(basis)
    Q = rad.quotient
    regs = tuple(Q.left_mult_matrix(img) for img in Q.gen_images)
    if all(m.is_zero() for m in regs):
        pytest.skip("trivial quotient action")
    basis2 = word_span(regs)
    rad2 = radical(basis2)
    assert rad2.radical_basis == []


# -- wedderburn ---------------------------------------------------------------------


def test_wedderburn_two_scalar_components():
    basis = word_span((Matrix.from_rows([[1, 0], [0, 2]]),))
    rad = radical(basis)
    comps = wedderburn_components(basis, rad)
    assert len(comps) == 2
    assert sorted(c.dimension for c in comps) == [1, 1]
    # idempotent classes act as diag(1,0), diag(0,1) up to order
    reps = sorted(str(rad.class_representative(c.central_idempotent)) for c in comps)
    assert reps == sorted(
        [str(Matrix.from_rows([[1, 0], [0, 0]])), str(Matrix.from_rows([[0, 0], [0, 1]]))]
    )


def test_wedderburn_full_matrix_algebra_single_component():
    basis = word_span((E12, E21))
    rad = radical(basis)
    comps = wedderburn_components(basis, rad)
    assert len(comps) == 1
    assert comps[0].dimension == 4


def test_wedderburn_nilpotent_empty():
    basis = word_span((E12,))
    rad = radical(basis)
    assert wedderburn_components(basis, rad) == []


def test_wedderburn_idempotents_orthogonal_three_blocks():
    m = Matrix.from_rows([[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    basis = word_span((m,))
    rad = radical(basis)
    comps = wedderburn_components(basis, rad)
    assert len(comps) == 3
    assert sum(c.dimension for c in comps) == rad.quotient_dim


def test_wedderburn_irrational_center_stays_single():
    # companion of t^2-2: center is a quadratic field extension of QQ
    m = Matrix.from_rows([[0, 2], [1, 0]])
    basis = word_span((m,))
    rad = radical(basis)
    comps = wedderburn_components(basis, rad)
    assert len(comps) == 1
    assert comps[0].dimension == 2


# -- malcev complement ------------------------------------------------------------------


def complement_checks(basis, rad, comp):
    d = basis.size
    sieve = SpanSieve(d * d)
    for s in comp.s_basis:
        assert sieve.insert(s.vectorize()) is None
    for x in comp.s_basis:
        for y in comp.s_basis:
            assert sieve.coords((x @ y).vectorize()) is not None
    for r in rad.radical_basis:
        assert sieve.insert(r.vectorize()) is None
    assert len(comp.s_basis) + len(rad.radical_basis) == basis.dim


def test_malcev_semisimple_is_identity():
    basis = word_span((Matrix.from_rows([[1, 0], [0, 2]]),))
    rad = radical(basis)
    comp = malcev_complement(basis, rad)
    assert [m for m in comp.s_basis] == basis.matrices
    m = basis.matrices[0]
    assert comp.project(m) == m


def test_malcev_unit_plus_nilpotent():
    basis = word_span((Matrix.identity(2), E12))
    rad = radical(basis)
    comp = malcev_complement(basis, rad)
    complement_checks(basis, rad, comp)
    assert len(comp.s_basis) == 1
    assert comp.s_basis[0] == Matrix.identity(2)
    s, n = comp.split(Matrix.identity(2) + E12)
    assert s == Matrix.identity(2) and n == E12


def test_malcev_upper_triangular():
    basis = word_span((E11, E12, E22))
    rad = radical(basis)
    comp = malcev_complement(basis, rad)
    complement_checks(basis, rad, comp)
    span = sorted(str(m) for m in comp.s_basis)
    assert span == sorted([str(E11), str(E22)])


@pytest.mark.parametrize("seed", range(6))
def test_malcev_random_triangular_plants(seed):
    rng = rng_for(seed, "malcev")
    d = rng.randint(2, 3)
    mats = []
    for _ in range(2):
        rowdata = [
            [Scalar(rng.randint(-2, 2)) if j >= i else Scalar(0) for j in range(d)]
            for i in range(d)
        ]
        mats.append(Matrix.from_rows(rowdata))
    basis = word_span(tuple(mats))
    rad = radical(basis)
    if rad.quotient_dim == 0:
        pytest.skip("nilpotent plant")
    comp = malcev_complement(basis, rad)
    complement_checks(basis, rad, comp)


# -- conjugacy -------------------------------------------------------------------------


def test_conjugacy_witness_swap():
    p = conjugacy_witness((E12, E21), (E21, E12))
    assert p is not None
    assert det(p)
    assert p @ E12 == E21 @ p


def test_conjugacy_witness_identity():
    p = conjugacy_witness((E12, E21), (E12, E21))
    assert p == Matrix.identity(2)


def test_conjugacy_witness_definite_none():
    zero = Matrix.from_rows([[0]])
    one = Matrix.from_rows([[1]])
    assert conjugacy_witness((zero,), (one,)) is None


def test_conjugacy_witness_singular_span_is_none():
    a = (Matrix.from_rows([[1, 0], [0, 2]]),)
    b = (Matrix.from_rows([[1, 0], [0, 3]]),)
    assert conjugacy_witness(a, b) is None


@pytest.mark.parametrize("seed", range(50))
def test_conjugacy_witness_invariance(seed):
    rng = rng_for(seed, "conj")
    d = rng.randint(2, 3)
    a = rand_int_tuple(rng, 2, d, 2)
    q = rand_invertible(rng, d)
    b = conj_tuple(a, q)
    p = conjugacy_witness(a, b, seed=seed)
    assert p is not None
    for ai, bi in zip(a, b):
        assert p @ ai == bi @ p
    assert det(p)


def test_intertwiner_space_shape():
    space = intertwiner_space((E11,), (E22,))
    assert len(space) == 2  # E12- and E21-like directions
