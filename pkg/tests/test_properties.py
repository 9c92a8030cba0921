"""Cross-module property checks: chains, partial orders, agreement laws."""

import pytest

from support import conjugate_tuple, direct_sum_tuple, inclusion_plant

from freelocus.linalg import Matrix, det
from freelocus.ncrat import domain_compare, parse, realize_minimal
from freelocus.pencil import (
    MonicPencil,
    in_locus,
    locus_inclusion,
    real_locus_inclusion,
)
from freelocus.sampling import rand_int_tuple, rand_invertible, rng_for
from freelocus.scalars import Scalar


@pytest.mark.parametrize("seed", range(30))
def test_locus_inclusion_transitive_on_planted_chains(seed):
    rng = rng_for(seed, "chain")
    g = 2
    c = rand_int_tuple(rng, g, rng.randint(1, 2), 2)
    d = rand_int_tuple(rng, g, 1, 2)
    e = rand_int_tuple(rng, g, 1, 2)
    mid = direct_sum_tuple(c, d)
    top = direct_sum_tuple(mid, e)
    qa = rand_invertible(rng, c[0].rows)
    qb = rand_invertible(rng, mid[0].rows)
    qc = rand_invertible(rng, top[0].rows)
    la = MonicPencil(conjugate_tuple(c, qa))
    lb = MonicPencil(conjugate_tuple(mid, qb))
    lc = MonicPencil(conjugate_tuple(top, qc))
    assert locus_inclusion(la, lb, want_point=False).holds
    assert locus_inclusion(lb, lc, want_point=False).holds
    # composition along the chain
    assert locus_inclusion(la, lc, want_point=False).holds


def test_domain_compare_partial_order_sample():
    from freelocus.ncrat import minimize, realize

    h1 = minimize(realize(parse("inv(1-x1)"), nvars=2))
    h2 = realize_minimal(parse("inv(1-x1) + inv(1-x2)"))
    h3 = realize_minimal(parse("inv(1-x1) + inv(1-x2) + inv(1-x1-x2)"))
    # reflexive
    for h in (h1, h2, h3):
        assert domain_compare(h, h, want_point=False).relation == "="
    # chain: each later function has a smaller domain
    c21 = domain_compare(h2, h1, want_point=False)
    c32 = domain_compare(h3, h2, want_point=False)
    c31 = domain_compare(h3, h1, want_point=False)
    assert c21.relation == "<="
    assert c32.relation == "<="
    assert c31.relation == "<="  # transitivity
    # antisymmetry with respect to "="
    other = minimize(realize(parse("2*inv(1-x1) - inv(1-x1)"), nvars=2))
    assert domain_compare(h1, other, want_point=False).relation == "="


@pytest.mark.parametrize("seed", range(20))
def test_domain_compare_transitive_on_planted_chains(seed):
    rng = rng_for(seed, "dchain")
    pool = ["inv(1-x1)", "inv(1-x2)", "inv(1-x1-x2)", "inv(1+x1-x2)", "inv(2-x1)"]
    picks = rng.sample(pool, 3)
    from freelocus.ncrat import minimize, realize

    f1 = minimize(realize(parse(picks[0]), nvars=2))
    f12 = minimize(realize(parse(f"{picks[0]} + {picks[1]}"), nvars=2))
    f123 = minimize(realize(parse(f"{picks[0]} + {picks[1]} + {picks[2]}"), nvars=2))
    assert domain_compare(f123, f12, want_point=False).relation in ("<=", "=")
    assert domain_compare(f12, f1, want_point=False).relation in ("<=", "=")
    assert domain_compare(f123, f1, want_point=False).relation in ("<=", "=")


def symmetrize(m):
    return Matrix.from_rows(
        [[m.data[i][j] + m.data[j][i] for j in range(m.rows)] for i in range(m.rows)]
    )


@pytest.mark.parametrize("seed", range(12))
def test_real_locus_inclusion_agrees_with_plain_inclusion(seed):
    rng = rng_for(seed, "realcmp")
    a = tuple(symmetrize(m) for m in rand_int_tuple(rng, 2, 2, 1))
    b = tuple(symmetrize(m) for m in rand_int_tuple(rng, 2, rng.choice([1, 2]), 1))
    la, lb = MonicPencil(a), MonicPencil(b)
    plain = locus_inclusion(la, lb, want_point=False)
    starred = real_locus_inclusion(la, lb, seed=seed)
    assert plain.holds == starred.holds


def test_real_locus_separating_point_spectra():
    # symmetric coefficient with eigenvalues +1 and -1 against the scalar 1-x
    la = MonicPencil((Matrix.from_rows([[0, 1], [1, 0]]),))
    lb = MonicPencil((Matrix.from_rows([[1]]),))
    verdict = real_locus_inclusion(la, lb)
    assert not verdict.holds
    pt = verdict.separating_point
    assert pt is not None
    assert in_locus(la, pt.matrices) >= 1
    assert in_locus(lb, pt.matrices) == 0


@pytest.mark.parametrize("seed", range(10))
def test_inclusion_verdicts_are_locus_faithful(seed):
    # planted inclusions: sample points on the small locus stay on the big one
    a, b = inclusion_plant(seed)
    la, lb = MonicPencil(a), MonicPencil(b)
    assert locus_inclusion(la, lb, want_point=False).holds
    rng = rng_for(seed, "faithful")
    from freelocus.pencil import nonempty_locus_point
    from freelocus.algebra import radical, word_span

    if radical(word_span(a)).quotient_dim == 0:
        pytest.skip("empty locus plant")
    pt = nonempty_locus_point(la, seed=seed)
    assert in_locus(la, pt.matrices) >= 1
    assert in_locus(lb, pt.matrices) >= 1  # fl(L_A) <= fl(L_B) at the sample
