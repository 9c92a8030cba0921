"""Shared plant constructions for the acceptance suite."""

from freelocus.linalg import Matrix, direct_sum, inverse
from freelocus.sampling import rand_int_matrix, rand_int_tuple, rand_invertible, rng_for
from freelocus.scalars import Scalar


def conjugate_tuple(mats, q):
    qinv = inverse(q)
    return tuple(q @ m @ qinv for m in mats)


def counterexample_pair():
    """3x3 pair: every linear combination nilpotent, not jointly nilpotent."""
    a1 = Matrix.from_rows([[0, 1, 0], [0, 0, 0], [1, 0, 0]])
    a2 = Matrix.from_rows([[0, 0, -1], [1, 0, 0], [0, 0, 0]])
    return a1, a2


def block_triangular_tuple(rng, top, bottom, g, bound=2):
    """a_i = [[P_i, R_i], [0, Q_i]] with given diagonal block sizes."""
    mats = []
    for _ in range(g):
        p = rand_int_matrix(rng, top, top, bound)
        q = rand_int_matrix(rng, bottom, bottom, bound)
        r = rand_int_matrix(rng, top, bottom, bound)
        rows = [list(p.data[i]) + list(r.data[i]) for i in range(top)]
        rows += [[Scalar(0)] * top + list(q.data[i]) for i in range(bottom)]
        mats.append(Matrix.from_rows(rows))
    return tuple(mats)


def strictly_upper_block(rng, top, bottom, bound=2):
    """[[0, S], [0, 0]] against the same block split."""
    s = rand_int_matrix(rng, top, bottom, bound)
    rows = [[Scalar(0)] * top + list(s.data[i]) for i in range(top)]
    rows += [[Scalar(0)] * (top + bottom) for _ in range(bottom)]
    return Matrix.from_rows(rows)


def nilpotent_ideal_plant(seed):
    """(a, n) with the ideal generated by n nilpotent by construction."""
    rng = rng_for(seed, "nil-plant")
    top = rng.randint(1, 2)
    bottom = rng.randint(1, 2)
    g = rng.randint(1, 2)
    a = block_triangular_tuple(rng, top, bottom, g)
    n = tuple(strictly_upper_block(rng, top, bottom)
              for _ in range(rng.randint(1, 2)))
    q = rand_invertible(rng, top + bottom)
    return conjugate_tuple(a, q), conjugate_tuple(n, q)


def non_nilpotent_ideal_plant(seed):
    """(a, n) where some n has nonzero trace, so the ideal cannot be nilpotent."""
    rng = rng_for(seed, "nonnil-plant")
    d = rng.randint(2, 3)
    g = rng.randint(1, 2)
    a = rand_int_tuple(rng, g, d, 2)
    while True:
        n1 = rand_int_matrix(rng, d, d, 2)
        if n1.trace():
            break
    return a, (n1,)


def direct_sum_tuple(a, b):
    return tuple(direct_sum(x, y) for x, y in zip(a, b))


def inclusion_plant(seed):
    """(la_tuple, lb_tuple) with fl(L_A) <= fl(L_B) by construction."""
    rng = rng_for(seed, "inc-plant")
    g = 2
    dc = rng.randint(1, 2)
    dd = rng.randint(1, 2)
    c = rand_int_tuple(rng, g, dc, 2)
    d = rand_int_tuple(rng, g, dd, 2)
    b = direct_sum_tuple(c, d)
    a = c
    if rng.random() < 0.5 and dc <= 2:
        # dress A with a nilpotent congruence block: same semisimple quotient
        mats = []
        for m in a:
            r = rand_int_matrix(rng, dc, dc, 1)
            rows = [list(m.data[i]) + list(r.data[i]) for i in range(dc)]
            rows += [[Scalar(0)] * dc + list(m.data[i]) for i in range(dc)]
            mats.append(Matrix.from_rows(rows))
        a = tuple(mats)
    qa = rand_invertible(rng, a[0].rows)
    qb = rand_invertible(rng, b[0].rows)
    return conjugate_tuple(a, qa), conjugate_tuple(b, qb)


def non_inclusion_plant(seed):
    """(la_tuple, lb_tuple, point) with a scalar point separating by design."""
    from freelocus.pencil import MonicPencil
    from freelocus.linalg import det

    rng = rng_for(seed, "noninc-plant")
    g = 2
    while True:
        dc = rng.randint(1, 2)
        c = rand_int_tuple(rng, g, dc, 2)
        lam = [rng.randint(-3, 3) for _ in range(g)]
        if all(v == 0 for v in lam):
            continue
        # scalar point on the locus of the 1x1 pencil 1 - sum lam_i x_i
        idx = next(i for i, v in enumerate(lam) if v != 0)
        point = [Scalar(0)] * g
        point[idx] = Scalar(1) / Scalar(lam[idx])
        pt = tuple(Matrix.from_rows([[v]]) for v in point)
        if not det(MonicPencil(c).evaluate(pt)):
            continue
        extra = tuple(Matrix.from_rows([[Scalar(v)]]) for v in lam)
        a = direct_sum_tuple(c, extra)
        q = rand_invertible(rng, a[0].rows)
        return conjugate_tuple(a, q), c, pt


def semisimple_plant(seed, equal):
    """Pair of semisimple tuples, conjugate when equal else trace-separated."""
    rng = rng_for(seed, "ss-plant")
    d = rng.randint(2, 3)
    g = 2
    diag1 = [rng.randint(-3, 3) for _ in range(d)]
    diag2 = [rng.randint(-3, 3) for _ in range(d)]
    a = (
        Matrix.from_rows([[Scalar(diag1[i]) if i == j else Scalar(0)
                           for j in range(d)] for i in range(d)]),
        Matrix.from_rows([[Scalar(diag2[i]) if i == j else Scalar(0)
                           for j in range(d)] for i in range(d)]),
    )
    if equal:
        perm = list(range(d))
        rng.shuffle(perm)
        b = tuple(
            Matrix.from_rows([[m.data[perm[i]][perm[j]] for j in range(d)]
                              for i in range(d)])
            for m in a
        )
        q = rand_invertible(rng, d)
        return a, conjugate_tuple(b, q)
    # shift one diagonal entry so the trace of x1 differs
    shifted = [list(row) for row in a[0].data]
    shifted[0][0] = shifted[0][0] + Scalar(1)
    b = (Matrix.from_rows(shifted), a[1])
    q = rand_invertible(rng, d)
    return a, conjugate_tuple(b, q)


def generating_tuple(seed, d):
    """Random pair generating the full d x d matrix algebra."""
    from freelocus.algebra import word_span

    rng = rng_for(seed, "full-span")
    while True:
        mats = rand_int_tuple(rng, 2, d, 2)
        if word_span(mats).dim == d * d:
            return mats
