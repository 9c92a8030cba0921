"""Monic linear pencils and their free singular loci.

A monic pencil of size d in g variables is I - A_1 x_1 - ... - A_g x_g; it is
evaluated at matrix tuples through Kronecker products, and its free locus is
the set of tuples where the evaluation is singular.  This module decides
locus inclusion with certificates, constructs separating points and
kernel-dimension-one witnesses, splits loci into irreducible components, and
handles symmetric/hermitian variants.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    intertwiner_space,
    invertible_in_span,
    radical,
    wedderburn_components,
    word_span,
)
from .errors import InvariantViolation, NotFullMatrixAlgebra, SearchBudgetExceeded
from .linalg import (
    Matrix,
    det,
    direct_sum,
    kernel_dimension,
    kron,
    realify_matrix,
)
from .sampling import rand_int_tuple, rng_for
from .scalars import ONE, QQ, QQI, ZERO, Scalar, normalize_field
from .unipoly import interpolate
from .words import NcPolynomial, word_key, word_value


@dataclass(frozen=True)
class MonicPencil:
    """Identity-minus-linear-part pencil, carried by its coefficient tuple."""

    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if not coeffs:
            raise ValueError("a pencil needs at least one variable")
        d = coeffs[0].rows
        for m in coeffs:
            if not m.is_square() or m.rows != d:
                raise ValueError("pencil coefficients must be square of equal size")

    @property
    def size(self):
        return self.coefficients[0].rows

    @property
    def vars(self):
        return len(self.coefficients)

    def evaluate(self, point):
        """I (x) I - sum A_i (x) X_i at a tuple of n x n matrices."""
        point = tuple(point)
        if len(point) != self.vars:
            raise ValueError("point arity does not match the pencil")
        n = point[0].rows
        for x in point:
            if not x.is_square() or x.rows != n:
                raise ValueError("point matrices must be square of equal size")
        acc = Matrix.identity(self.size * n)
        for a, x in zip(self.coefficients, point):
            if a.is_zero() or x.is_zero():
                continue
            acc = acc - kron(a, x)
        return acc

    def direct_sum(self, other):
        if self.vars != other.vars:
            raise ValueError("pencils must share the variable count")
        return MonicPencil(tuple(
            direct_sum(a, b) for a, b in zip(self.coefficients, other.coefficients)
        ))

    def is_symmetric(self):
        return all(m.is_real() and m.is_symmetric() for m in self.coefficients)

    def is_hermitian(self):
        return all(m.is_hermitian() for m in self.coefficients)


def empty_pencil(g):
    """The size-0 pencil (det identically 1, empty locus)."""
    return MonicPencil(tuple(Matrix(0, 0, []) for _ in range(g)))


def in_locus(pencil, point):
    """dim ker L(X); membership in the free locus iff >= 1."""
    return kernel_dimension(pencil.evaluate(point))


@dataclass
class LocusPoint:
    """A matrix tuple with the kernel dimension of the pencil there."""

    matrices: tuple
    kernel_dim: int


@dataclass
class HomCertificate:
    """Images of the source quotient basis words, as a coordinate matrix."""

    source_words: list
    target_words: list
    matrix: list  # rows: source word classes, coords over target classes


@dataclass
class InclusionVerdict:
    holds: bool
    certificate: HomCertificate | None = None
    refutation: NcPolynomial | None = None
    separating_point: LocusPoint | None = None


# -- the algebraization trick ---------------------------------------------------


def lemma_poly_expand(f, point, rhs):
    """Absorb f(A) (x) Y into a pencil point, independently of A.

    Given a constant-free nc polynomial f and matrices X_i, Y of size n,
    returns X' such that dim ker(L_A(X) - f(A) (x) Y) = dim ker L_A(X') for
    every coefficient tuple A of every size.  Implements the kernel-preserving
    block doubling, sharing doublings across terms with a common prefix; the
    output size is n * 2^(number of distinct proper prefixes).
    """
    if f.is_zero():
        raise ValueError("zero polynomial cannot be expanded")
    if f.has_constant_term():
        raise ValueError("polynomial must have zero constant term")
    point = tuple(point)
    g = len(point)
    if any(letter > g for w in f.terms for letter in w):
        raise ValueError("polynomial uses more letters than the point tuple")
    n = point[0].rows
    if rhs.rows != n or rhs.cols != n:
        raise ValueError("right-hand matrix size must match the point size")

    def sparse(m):
        out = {}
        for r in range(m.rows):
            for c in range(m.cols):
                if m.data[r][c]:
                    out[(r, c)] = m.data[r][c]
        return out

    slots = [sparse(x) for x in point]
    pending = [(dict(f.terms), sparse(rhs))]
    size = n

    def absorb(idx, pt, coeff):
        slot = slots[idx]
        for key, val in pt.items():
            acc = slot.get(key, ZERO) + coeff * val
            if acc:
                slot[key] = acc
            elif key in slot:
                del slot[key]

    while pending:
        terms, pt = pending.pop()
        groups = {}
        for w, c in terms.items():
            if len(w) == 1:
                absorb(w[0] - 1, pt, c)
            else:
                groups.setdefault(w[0], {})[w[1:]] = c
        if not groups:
            continue
        letters = sorted(groups)
        j = letters[0]
        if len(letters) > 1:
            rest = {}
            for jj in letters[1:]:
                for w, c in groups[jj].items():
                    rest[(jj,) + w] = c
            pending.append((rest, pt))
        # kernel-preserving doubling step for the x_j * h group
        old = size
        slots = [{(r + old, c + old): v for (r, c), v in s.items()} for s in slots]
        pending = [
            (t, {(r + old, c + old): v for (r, c), v in p.items()})
            for t, p in pending
        ]
        lower = {(r + old, c): v for (r, c), v in pt.items()}
        for key, val in lower.items():
            acc = slots[j - 1].get(key, ZERO) + val
            if acc:
                slots[j - 1][key] = acc
            elif key in slots[j - 1]:
                del slots[j - 1][key]
        upper = {(r, r + old): ONE for r in range(old)}
        pending.append((groups[j], upper))
        size *= 2

    out = []
    for s in slots:
        data = [[ZERO] * size for _ in range(size)]
        for (r, c), v in s.items():
            data[r][c] = v
        out.append(Matrix(size, size, data))
    return tuple(out)


# -- nilpotency ---------------------------------------------------------------------


def nilpotent_ideal_test(a, n):
    """Is the ideal generated by the n-tuple nilpotent in the joint algebra?

    Returns (flag, witness) where the witness is a word over the joint
    alphabet (a-letters first) containing an n-letter whose value has nonzero
    trace; None when the ideal is nilpotent.
    """
    a, n = tuple(a), tuple(n)
    joint = a + n
    d = joint[0].rows
    for m in joint:
        if not m.is_square() or m.rows != d:
            raise ValueError("all matrices must be square of the same size")
    basis = word_span(joint)
    rad = radical(basis)
    g = len(a)
    nilpotent = True
    for k in range(len(n)):
        coords = rad.reduce_matrix(n[k])
        if coords is None:
            raise InvariantViolation("generator escaped the joint algebra")
        if any(coords):
            nilpotent = False
            break
    if nilpotent:
        return True, None
    candidates = [()] + list(basis.words)
    candidates.sort(key=word_key)
    for w in candidates:
        for k in range(len(n)):
            word = (g + k + 1,) + w
            if word_value(word, joint, d).trace():
                return False, word
    raise InvariantViolation("non-nilpotent ideal without a trace witness")


def determinant_identity_check(a, n, seed=0, trials=50, max_size=3, bound=3):
    """Differential cross-check: det(L_a(X) - sum N_j (x) Y_j) = det L_a(X).

    Samples seeded random (X, Y) tuples of sizes cycling 1..max_size; returns
    False as soon as the two exact determinants differ.
    """
    a, n = tuple(a), tuple(n)
    joint_pencil = MonicPencil(a + n)
    base_pencil = MonicPencil(a)
    rng = rng_for(seed, "nil-det")
    for t in range(trials):
        m = (t % max_size) + 1
        xs = rand_int_tuple(rng, len(a), m, bound)
        ys = rand_int_tuple(rng, len(n), m, bound)
        if det(joint_pencil.evaluate(xs + ys)) != det(base_pencil.evaluate(xs)):
            return False
    return True


def jointly_nilpotent(pencil):
    """True iff L(X) is invertible for every matrix tuple X."""
    basis = word_span(pencil.coefficients)
    return radical(basis).quotient_dim == 0


# -- locus inclusion ------------------------------------------------------------------


def _mat_vec(m, v):
    out = []
    for i in range(m.rows):
        acc = ZERO
        row = m.data[i]
        for j, x in enumerate(v):
            if x and row[j]:
                acc = acc + row[j] * x
        out.append(acc)
    return out


def locus_inclusion(la, lb, seed=0, budget=24, want_point=True):
    """Decide fl(la) <= fl(lb), with a certificate either way.

    The verdict holds iff sending the lb coefficients to the la coefficients
    induces a homomorphism of semisimple quotients.  The relation space is
    explored by a breadth-first pair span in the two quotients; the first
    source-side relation violated on the target side is returned as the
    refuting polynomial, together with a separating locus point.
    """
    if la.vars != lb.vars:
        raise ValueError("pencils must share the variable count")
    g = la.vars
    abasis = word_span(la.coefficients)
    arad = radical(abasis)
    bbasis = word_span(lb.coefficients)
    brad = radical(bbasis)
    qa, qb = arad.quotient, brad.quotient
    left_a = [qa.left_mult_matrix(img) for img in qa.gen_images]
    left_b = [qb.left_mult_matrix(img) for img in qb.gen_images]

    from .linalg import SpanSieve, inverse

    pair_sieve = SpanSieve(qb.dim + qa.dim)
    bside_sieve = SpanSieve(qb.dim)
    basis_words = []
    basis_pairs = []
    frontier = []
    refutation = None

    def consider(word, bu, av):
        nonlocal refutation
        pair = list(bu) + list(av)
        probe = pair_sieve.coords(pair)
        if probe is not None:
            return False
        bcoords = bside_sieve.coords(list(bu))
        if bcoords is not None:
            terms = [(word, ONE)]
            for k, c in enumerate(bcoords):
                if c:
                    terms.append((basis_words[k], -c))
            refutation = NcPolynomial(terms)
            return False
        pair_sieve.insert(pair)
        bside_sieve.insert(list(bu))
        basis_words.append(word)
        basis_pairs.append((list(bu), list(av)))
        frontier.append((word, list(bu), list(av)))
        return True

    for i in range(g):
        if refutation is None:
            consider((i + 1,), qb.gen_images[i], qa.gen_images[i])
    while frontier and refutation is None:
        level, frontier = frontier, []
        for i in range(g):
            if refutation is not None:
                break
            for word, bu, av in level:
                consider((i + 1,) + word, _mat_vec(left_b[i], bu),
                         _mat_vec(left_a[i], av))
                if refutation is not None:
                    break

    if refutation is not None:
        point = None
        if want_point:
            point = separating_point(la, lb, refutation, seed=seed, budget=budget)
        return InclusionVerdict(False, None, refutation, point)

    # assemble the certificate: phi(source rep word classes) in target coords
    if qb.dim == 0:
        cert = HomCertificate([], qa.rep_words, [])
        return InclusionVerdict(True, cert, None, None)
    cols_u = Matrix(qb.dim, qb.dim,
                    [[basis_pairs[k][0][i] for k in range(qb.dim)]
                     for i in range(qb.dim)])
    inv_u = inverse(cols_u)
    if inv_u is None:
        raise InvariantViolation("source classes of the pair basis are dependent")
    cert_rows = []
    for j in range(qb.dim):
        gamma = [inv_u.data[k][j] for k in range(qb.dim)]
        img = [ZERO] * qa.dim
        for k, c in enumerate(gamma):
            if c:
                for t in range(qa.dim):
                    if basis_pairs[k][1][t]:
                        img[t] = img[t] + c * basis_pairs[k][1][t]
        cert_rows.append(img)
    cert = HomCertificate(list(qb.rep_words), list(qa.rep_words), cert_rows)
    _verify_certificate(qa, qb, cert)
    return InclusionVerdict(True, cert, None, None)


def _apply_certificate(cert, qa, coords):
    img = [ZERO] * qa.dim
    for j, c in enumerate(coords):
        if c:
            row = cert.matrix[j]
            for t in range(qa.dim):
                if row[t]:
                    img[t] = img[t] + c * row[t]
    return img


def _verify_certificate(qa, qb, cert):
    """Exact self-checks: generators, identity, multiplicativity."""
    for i in range(len(qa.gen_images)):
        if _apply_certificate(cert, qa, qb.gen_images[i]) != qa.gen_images[i]:
            raise InvariantViolation("certificate misses a generator image")
    if qb.dim and qa.dim:
        if _apply_certificate(cert, qa, qb.unit) != list(qa.unit):
            raise InvariantViolation("certificate does not preserve the identity")
    for j in range(qb.dim):
        for l in range(qb.dim):
            lhs = _apply_certificate(cert, qa, qb.struct[j][l])
            rhs = qa.mult(cert.matrix[j], cert.matrix[l])
            if lhs != rhs:
                raise InvariantViolation("certificate is not multiplicative")


def locus_equal(la, lb, seed=0, budget=24, want_point=True):
    """Both inclusion verdicts."""
    forward = locus_inclusion(la, lb, seed=seed, budget=budget, want_point=want_point)
    backward = locus_inclusion(lb, la, seed=seed, budget=budget, want_point=want_point)
    return forward, backward


# -- separating points -------------------------------------------------------------------


def separating_point(la, lb, f, seed=0, max_size=6, budget=40):
    """A tuple X with det L_A(X) = 0 and det L_B(X) != 0.

    Requires f(B) in rad B and f(A) not in rad A.  Searches seeded random
    base points of growing size, recovers the determinant polynomial of a
    one-parameter deformation by exact interpolation, plugs in the companion
    matrix of that polynomial, and absorbs the deformation via
    lemma_poly_expand.
    """
    abasis = word_span(la.coefficients)
    arad = radical(abasis)
    bbasis = word_span(lb.coefficients)
    brad = radical(bbasis)
    fa = f.evaluate(la.coefficients, la.size)
    fb = f.evaluate(lb.coefficients, lb.size)
    ca = arad.reduce_matrix(fa)
    cb = brad.reduce_matrix(fb)
    if ca is None or cb is None:
        raise ValueError("polynomial evaluations escape the coefficient algebras")
    if any(cb):
        raise ValueError("f(B) must lie in the radical of B")
    if not any(ca):
        raise ValueError("f(A) must lie outside the radical of A")
    rng = rng_for(seed, "separating")
    d = la.size
    g = la.vars
    tries = 0
    for n in range(1, max_size + 1):
        for _ in range(6):
            tries += 1
            if tries > budget:
                raise SearchBudgetExceeded(
                    "separating point search exhausted", seed=seed, budget=budget)
            bound = 1 + tries // 4
            xs = rand_int_tuple(rng, g, n, bound)
            if not det(lb.evaluate(xs)):
                continue
            base = la.evaluate(xs)
            # deform one entry of Y at a time, over a few base offsets alpha
            offsets = [Matrix.zeros(n)]
            offsets += [rand_int_tuple(rng, 1, n, bound)[0] for _ in range(2)]
            best = None
            for alpha in offsets:
                shifted = base - kron(fa, alpha) if not alpha.is_zero() else base
                for i0 in range(n):
                    for j0 in range(n):
                        bump = kron(fa, Matrix.unit(n, n, i0, j0))
                        samples = []
                        for t in range(n * d + 1):
                            samples.append(
                                (Scalar(t), det(shifted - bump.scale(Scalar(t)))))
                        q = interpolate(samples)
                        if q.degree() >= 1 and (
                            best is None or q.degree() < best[0].degree()
                        ):
                            best = (q, i0, j0, alpha)
                if best is not None and best[0].degree() == 1:
                    break
            if best is None:
                continue
            q, i0, j0, alpha = best
            from .linalg import companion

            t_mat = companion(q.monic())
            m = q.degree()
            rhs = kron(Matrix.unit(n, n, i0, j0), t_mat) + kron(
                alpha, Matrix.identity(m))
            big = tuple(kron(x, Matrix.identity(m)) for x in xs)
            witness = lemma_poly_expand(f, big, rhs)
            ka = in_locus(la, witness)
            kb = in_locus(lb, witness)
            if ka < 1 or kb != 0:
                raise InvariantViolation("separating point failed its exact recheck")
            return LocusPoint(witness, ka)
    raise SearchBudgetExceeded(
        "separating point search exhausted", seed=seed, budget=budget)


def nonempty_locus_point(pencil, seed=0, max_size=6, budget=40):
    """An explicit locus point for a pencil with non-nilpotent coefficients."""
    basis = word_span(pencil.coefficients)
    rad = radical(basis)
    if rad.quotient_dim == 0:
        raise ValueError("locus is empty: coefficients are jointly nilpotent")
    word = rad.quotient.rep_words[0]
    f = NcPolynomial.from_word(word)
    return separating_point(pencil, empty_pencil(pencil.vars), f,
                            seed=seed, max_size=max_size, budget=budget)


# -- components and reduction ---------------------------------------------------------------


def locus_components(pencil, base_field=QQ, seed=0, budget=24):
    """One pencil per Wedderburn component of the semisimple quotient."""
    basis = word_span(pencil.coefficients)
    rad = radical(basis)
    comps = wedderburn_components(basis, rad, base_field, seed=seed, budget=budget)
    return [MonicPencil(c.regular_generators) for c in comps]


def pencil_reduce(pencil, base_field=QQ, seed=0, budget=24, verify=True):
    """Locus-equal pencil assembled from the component regular representations.

    Returns the size-0 pencil when the locus is empty.  Not guaranteed minimal
    over fields that do not split the components.
    """
    comps = locus_components(pencil, base_field, seed=seed, budget=budget)
    if not comps:
        return empty_pencil(pencil.vars)
    reduced = comps[0]
    for c in comps[1:]:
        reduced = reduced.direct_sum(c)
    if verify:
        fwd = locus_inclusion(pencil, reduced, seed=seed, want_point=False)
        bwd = locus_inclusion(reduced, pencil, seed=seed, want_point=False)
        if not (fwd.holds and bwd.holds):
            raise InvariantViolation("reduced pencil is not locus-equal to the input")
    return reduced


# -- symmetric / hermitian variants ------------------------------------------------------------


def real_locus_inclusion(la, lb, base_field=QQ, seed=0, budget=24):
    """Locus inclusion for symmetric (QQ) or hermitian (QQ(i)) pencils.

    The coefficient algebras are semisimple; this is asserted, the plain
    inclusion test runs, and on success the certificate is checked to respect
    the reversal involution on words.
    """
    base_field = normalize_field(base_field)
    for p in (la, lb):
        if base_field == QQ:
            if not p.is_symmetric():
                raise ValueError("pencil coefficients must be real symmetric over QQ")
        else:
            if not p.is_hermitian():
                raise ValueError("pencil coefficients must be hermitian over QQ(i)")
    abasis = word_span(la.coefficients)
    arad = radical(abasis)
    bbasis = word_span(lb.coefficients)
    brad = radical(bbasis)
    if arad.radical_basis or brad.radical_basis:
        raise InvariantViolation("a *-closed coefficient algebra must be semisimple")
    verdict = locus_inclusion(la, lb, seed=seed, budget=budget)
    if verdict.holds and brad.quotient_dim:
        cert = verdict.certificate
        for j, word in enumerate(cert.source_words):
            rev = tuple(reversed(word))
            rev_class = brad.reduce_matrix(word_value(rev, lb.coefficients, lb.size))
            img_rev = _apply_certificate(cert, arad.quotient, rev_class)
            lhs = arad.class_representative(img_rev)
            rhs = arad.class_representative(cert.matrix[j]).conj_transpose()
            if lhs != rhs:
                raise InvariantViolation("certificate does not respect the involution")
    return verdict


def orthogonal_conjugacy(a, b, seed=0, budget=24):
    """P with P a_i = b_i P, det P != 0 and P^t P = alpha I, alpha > 0.

    Exact avatar of an orthogonal conjugation between symmetric tuples; None
    when no conjugation exists at all.
    """
    a, b = tuple(a), tuple(b)
    for m in list(a) + list(b):
        if not (m.is_real() and m.is_symmetric()):
            raise ValueError("orthogonal conjugacy needs symmetric real tuples")
    d = a[0].rows
    if a == b:
        return Matrix.identity(d), ONE
    space = intertwiner_space(a, b)
    if not space:
        return None
    from .algebra import _span_determinant_vanishes

    if _span_determinant_vanishes(space):
        return None
    rng = rng_for(seed, "orthogonal")
    for round_no in range(budget):
        bound = 1 << (round_no // 4 + 1)
        for _ in range(8):
            cand = Matrix.zeros(d)
            for m in space:
                c = rng.randint(-bound, bound)
                if c:
                    cand = cand + m.scale(Scalar(c))
            if not det(cand):
                continue
            gram = cand.transpose() @ cand
            alpha = gram.data[0][0]
            if gram == Matrix.identity(d).scale(alpha):
                return cand, alpha
    raise SearchBudgetExceeded(
        "no orthogonal-avatar conjugator found", seed=seed, budget=budget)


def kippenhahn_witness(pencil):
    """A tuple X with dim ker L(X) exactly 1.

    Requires the coefficients to generate the full matrix algebra; solves for
    a constant-free polynomial hitting the (1,1) matrix unit and absorbs it
    via lemma_poly_expand.
    """
    d = pencil.size
    basis = word_span(pencil.coefficients)
    if basis.dim < d * d:
        raise NotFullMatrixAlgebra(
            f"coefficients span dimension {basis.dim} < {d * d}")
    coords = basis.coords(Matrix.unit(d, d, 0, 0))
    if coords is None:
        raise InvariantViolation("matrix unit missing from a full matrix algebra")
    f = NcPolynomial([(w, c) for w, c in zip(basis.words, coords) if c])
    zeros = tuple(Matrix.zeros(1) for _ in range(pencil.vars))
    witness = lemma_poly_expand(f, zeros, Matrix.identity(1))
    k = in_locus(pencil, witness)
    if k != 1:
        raise InvariantViolation(f"witness kernel dimension is {k}, not 1")
    return LocusPoint(witness, 1)


def realify_tuple(point):
    """Entrywise a+bi -> [[a,-b],[b,a]]; doubles sizes, hermitian -> symmetric."""
    return tuple(realify_matrix(x) for x in point)
