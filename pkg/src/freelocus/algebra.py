"""Structure theory of the matrix algebra generated by a tuple.

The algebra is the (possibly non-unital) span of all positive-length words in
the generators.  From a word-labeled basis we compute the nilradical through
the trace bilinear form, the semisimple quotient with its multiplication
table, primitive central idempotents by factoring the minimal polynomial of a
separating central element, Wedderburn-Malcev complements by multiplicative
correction along the radical filtration, and conjugacy witnesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InvariantViolation, SearchBudgetExceeded, SplittingBudgetExceeded
from .linalg import Matrix, SpanSieve, det, inverse, rank_kernel, solve
from .sampling import rng_for
from .scalars import ONE, QQ, ZERO, Scalar
from .unipoly import UniPoly, factor, xgcd_poly
from .words import word_key, word_value


def lambda_bound(d):
    """Universal bound on the generating length of a subalgebra of M_d.

    Evaluated exactly: the smallest integer m with
    m >= d*sqrt(2d^2/(d-1) + 1/4) + d/2 - 2 (and 1 for d = 1).
    """
    if d < 1:
        raise ValueError("matrix size must be at least 1")
    if d == 1:
        return 1
    inner = Fraction(2 * d * d, d - 1) + Fraction(1, 4)
    target = d * d * inner
    base = Fraction(d, 2) - 2
    m = 0
    while m < base or (Fraction(m) - base) ** 2 < target:
        m += 1
    return m


@dataclass
class AlgebraBasis:
    """Word-labeled basis of the algebra generated by a matrix tuple."""

    generators: tuple
    words: list
    matrices: list
    length: int
    unit: Matrix | None
    contains_identity: bool
    _sieve: SpanSieve = field(repr=False, default=None)

    @property
    def dim(self):
        return len(self.words)

    @property
    def size(self):
        return self.generators[0].rows

    def coords(self, m):
        """Coordinates of a matrix over the basis, or None if outside."""
        return self._sieve.coords(m.vectorize())

    def element(self, coords):
        n = self.size
        acc = Matrix.zeros(n)
        for c, m in zip(coords, self.matrices):
            if c:
                acc = acc + m.scale(c)
        return acc


def word_span(generators):
    """Greedy length-lexicographic word basis of the generated algebra."""
    generators = tuple(generators)
    if not generators:
        raise ValueError("empty generator tuple")
    d = generators[0].rows
    for m in generators:
        if not m.is_square() or m.rows != d:
            raise ValueError("generators must be square of equal size")
    g = len(generators)
    sieve = SpanSieve(d * d)
    words, mats = [], []
    frontier = []
    for i in range(g):
        w = (i + 1,)
        m = generators[i]
        if sieve.insert(m.vectorize()) is None:
            words.append(w)
            mats.append(m)
            frontier.append((w, m))
    length = 1
    level = 1
    while frontier:
        level += 1
        fresh = []
        for i in range(g):
            gen = generators[i]
            for w, m in frontier:
                cand = gen @ m
                if sieve.insert(cand.vectorize()) is None:
                    cw = (i + 1,) + w
                    words.append(cw)
                    mats.append(cand)
                    fresh.append((cw, cand))
        if fresh:
            length = level
        frontier = fresh
    if d > 0 and length > lambda_bound(d):
        raise InvariantViolation(
            f"stabilization length {length} exceeds the bound {lambda_bound(d)}"
        )
    unit = _find_unit(mats, d)
    contains_identity = d == 0 or sieve.coords(Matrix.identity(d).vectorize()) is not None
    order = sorted(range(len(words)), key=lambda k: word_key(words[k]))
    words = [words[k] for k in order]
    mats = [mats[k] for k in order]
    # rebuild the sieve in length-lex order so coordinates follow `words`
    sieve = SpanSieve(d * d)
    for m in mats:
        if sieve.insert(m.vectorize()) is not None:
            raise InvariantViolation("basis lost independence after reordering")
    return AlgebraBasis(generators, words, mats, length, unit, contains_identity, sieve)


def _find_unit(mats, d):
    """The idempotent acting as a two-sided identity on the span, if any."""
    nb = len(mats)
    if nb == 0:
        return None
    rows = []
    rhs = []
    for mj in mats:
        prods_left = [mk @ mj for mk in mats]
        prods_right = [mj @ mk for mk in mats]
        for pos in range(d * d):
            rows.append([p.vectorize()[pos] for p in prods_left])
            rhs.append([mj.vectorize()[pos]])
            rows.append([p.vectorize()[pos] for p in prods_right])
            rhs.append([mj.vectorize()[pos]])
    sol = solve(Matrix.from_rows(rows), Matrix.from_rows(rhs))
    if sol is None:
        return None
    acc = Matrix.zeros(d)
    for k in range(nb):
        if sol.data[k][0]:
            acc = acc + mats[k].scale(sol.data[k][0])
    return acc


@dataclass
class QuotientAlgebra:
    """The semisimple quotient as an abstract algebra in coordinates."""

    dim: int
    rep_words: list
    struct: list          # struct[i][j] = coords of b_i * b_j
    unit: list | None
    gen_images: list      # class coords of each generator

    def mult(self, u, v):
        out = [ZERO] * self.dim
        for i, ci in enumerate(u):
            if not ci:
                continue
            for j, cj in enumerate(v):
                if not cj:
                    continue
                f = ci * cj
                row = self.struct[i][j]
                for k in range(self.dim):
                    if row[k]:
                        out[k] = out[k] + f * row[k]
        return out

    def left_mult_matrix(self, u):
        cols = [self.mult(u, _unit_vec(self.dim, j)) for j in range(self.dim)]
        return Matrix(self.dim, self.dim,
                      [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)])


def _unit_vec(n, k):
    v = [ZERO] * n
    v[k] = ONE
    return v


@dataclass
class RadicalData:
    """Nilradical plus quotient data for an AlgebraBasis."""

    radical_basis: list
    radical_coords: list
    quotient_words: list      # (word, quotient coordinate vector)
    quotient_dim: int
    quotient: QuotientAlgebra
    _basis: AlgebraBasis = field(repr=False, default=None)
    _rep_indices: list = field(repr=False, default=None)
    _mix_inv: Matrix = field(repr=False, default=None)

    def reduce_coords(self, coords):
        """Map coordinates over the algebra basis to quotient coordinates."""
        r = len(self.radical_basis)
        col = Matrix.column(list(coords))
        y = self._mix_inv @ col
        return [y.data[r + k][0] for k in range(self.quotient_dim)]

    def reduce_matrix(self, m):
        coords = self._basis.coords(m)
        if coords is None:
            return None
        return self.reduce_coords(coords)

    def class_representative(self, qcoords):
        n = self._basis.size
        acc = Matrix.zeros(n)
        for c, idx in zip(qcoords, self._rep_indices):
            if c:
                acc = acc + self._basis.matrices[idx].scale(c)
        return acc


def radical(basis):
    """Nilradical via the trace bilinear form (valid in characteristic 0)."""
    n = basis.dim
    if n == 0:
        quotient = QuotientAlgebra(0, [], [], None, [[] for _ in basis.generators])
        return RadicalData([], [], [], 0, quotient, basis, [], Matrix(0, 0, []))
    gram = Matrix(
        n, n,
        [[(basis.matrices[i] @ basis.matrices[j]).trace() for j in range(n)]
         for i in range(n)],
    )
    _, rad_coords = rank_kernel(gram)
    r = len(rad_coords)
    rad_mats = [basis.element(v) for v in rad_coords]
    # choose basis words whose classes complete the radical to a basis of A
    sieve = SpanSieve(n)
    for v in rad_coords:
        sieve.insert(v)
    rep_indices = []
    for k in range(n):
        if sieve.insert(_unit_vec(n, k)) is None:
            rep_indices.append(k)
    q = len(rep_indices)
    cols = [list(v) for v in rad_coords] + [_unit_vec(n, k) for k in rep_indices]
    mix = Matrix(n, n, [[cols[j][i] for j in range(n)] for i in range(n)])
    mix_inv = inverse(mix)
    if mix_inv is None:
        raise InvariantViolation("radical/quotient mixing matrix is singular")
    data = RadicalData([], [], [], q, None, basis, rep_indices, mix_inv)
    data.radical_basis = rad_mats
    data.radical_coords = rad_coords
    struct = []
    for i in rep_indices:
        row = []
        for j in rep_indices:
            prod = basis.matrices[i] @ basis.matrices[j]
            coords = basis.coords(prod)
            if coords is None:
                raise InvariantViolation("algebra basis is not multiplicatively closed")
            row.append(data.reduce_coords(coords))
        struct.append(row)
    gen_images = []
    for gen in basis.generators:
        coords = basis.coords(gen)
        if coords is None:
            raise InvariantViolation("generator escapes its own algebra")
        gen_images.append(data.reduce_coords(coords))
    unit = _quotient_unit(q, struct) if q else None
    quotient = QuotientAlgebra(q, [basis.words[k] for k in rep_indices], struct,
                               unit, gen_images)
    data.quotient = quotient
    data.quotient_words = [
        (basis.words[k], _unit_vec(q, pos)) for pos, k in enumerate(rep_indices)
    ]
    return data


def _quotient_unit(q, struct):
    rows, rhs = [], []
    for j in range(q):
        for k in range(q):
            rows.append([struct[i][j][k] for i in range(q)])
            rhs.append([ONE if j == k else ZERO])
            rows.append([struct[j][i][k] for i in range(q)])
            rhs.append([ONE if j == k else ZERO])
    sol = solve(Matrix.from_rows(rows), Matrix.from_rows(rhs))
    if sol is None:
        raise InvariantViolation("semisimple quotient has no identity")
    return [sol.data[i][0] for i in range(q)]


@dataclass
class SimpleComponent:
    """One Wedderburn factor, carried by its left-regular representation."""

    index: int
    central_idempotent: list
    regular_generators: tuple
    dimension: int


def wedderburn_components(basis, rad, base_field=QQ, seed=0, budget=24):
    """Split the semisimple quotient into simple factors.

    Samples central elements with a seeded generator, factors their minimal
    polynomials, and forms primitive central idempotents per irreducible
    factor; retries with doubled coefficient ranges until a separating central
    element appears.
    """
    Q = rad.quotient
    q = Q.dim
    if q == 0:
        return []
    center = _center_basis(Q)
    c = len(center)
    rng = rng_for(seed, "wedderburn")
    idempotents = None
    if c == 1:
        idempotents = [list(Q.unit)]
    else:
        for round_no in range(budget):
            bound = 2 << round_no
            coeffs = [rng.randint(-bound, bound) for _ in center]
            z = [ZERO] * q
            for t, zc in zip(coeffs, center):
                for k in range(q):
                    if zc[k]:
                        z[k] = z[k] + Scalar(t) * zc[k]
            mp = _element_minpoly(Q, z)
            factors = factor(mp, base_field, seed=seed)
            if sum(f.degree() for f, _ in factors) != c or any(m > 1 for _, m in factors):
                continue
            idempotents = _central_idempotents(Q, z, mp, [f for f, _ in factors])
            break
        if idempotents is None:
            raise SplittingBudgetExceeded(
                "no separating central element found", seed=seed, budget=budget
            )
    _check_idempotents(Q, idempotents)
    comps = []
    for j, e in enumerate(idempotents):
        comp_sieve = SpanSieve(q)
        comp_basis = []
        for k in range(q):
            v = Q.mult(e, _unit_vec(q, k))
            if comp_sieve.insert(v) is None:
                comp_basis.append(v)
        dim_j = len(comp_basis)
        regs = []
        for img in Q.gen_images:
            y = Q.mult(e, img)
            cols = []
            for v in comp_basis:
                w = Q.mult(y, v)
                coords = comp_sieve.coords(w)
                if coords is None:
                    raise InvariantViolation("component is not closed under the action")
                cols.append(coords)
            regs.append(Matrix(dim_j, dim_j,
                               [[cols[b][a] for b in range(dim_j)] for a in range(dim_j)]))
        comps.append(SimpleComponent(j, e, tuple(regs), dim_j))
    if sum(cp.dimension for cp in comps) != q:
        raise InvariantViolation("component dimensions do not add up")
    return comps


def _center_basis(Q):
    q = Q.dim
    rows = []
    for j in range(q):
        for k in range(q):
            rows.append([Q.struct[i][j][k] - Q.struct[j][i][k] for i in range(q)])
    _, kernel = rank_kernel(Matrix.from_rows(rows))
    return kernel


def _element_minpoly(Q, z):
    from .linalg import minpoly as matrix_minpoly

    return matrix_minpoly(Q.left_mult_matrix(z))


def _central_idempotents(Q, z, mp, factors):
    q = Q.dim
    powers = [list(Q.unit)]
    for _ in range(mp.degree() - 1):
        powers.append(Q.mult(powers[-1], z))

    def eval_poly(p):
        out = [ZERO] * q
        for k, coeff in enumerate(p.coeffs):
            if coeff:
                for i in range(q):
                    if powers[k][i]:
                        out[i] = out[i] + coeff * powers[k][i]
        return out

    idems = []
    for h in factors:
        m_j = mp // h
        s, _, g = xgcd_poly(m_j, h)
        if g.degree() != 0:
            raise InvariantViolation("minimal polynomial factors are not coprime")
        e_poly = (m_j * s) % mp
        idems.append(eval_poly(e_poly))
    return idems


def _check_idempotents(Q, idems):
    q = Q.dim
    total = [ZERO] * q
    for j, e in enumerate(idems):
        for k, f in enumerate(idems):
            prod = Q.mult(e, f)
            expect = e if j == k else [ZERO] * q
            if prod != expect:
                raise InvariantViolation("central idempotents are not orthogonal")
        for i in range(q):
            total[i] = total[i] + e[i]
    if total != list(Q.unit):
        raise InvariantViolation("central idempotents do not sum to the identity")


class Complement:
    """A semisimple complement S with A = S (+) rad A, plus the projection."""

    def __init__(self, s_basis, rad_basis, size):
        self.s_basis = s_basis
        self.rad_basis = rad_basis
        self.size = size
        cols = [m.vectorize() for m in s_basis] + [m.vectorize() for m in rad_basis]
        self._stack = Matrix(
            size * size, len(cols),
            [[cols[j][i] for j in range(len(cols))] for i in range(size * size)],
        )

    def split(self, m):
        """Write m = s + n with s in S and n in rad A."""
        sol = solve(self._stack, Matrix.column(m.vectorize()))
        if sol is None:
            raise ValueError("matrix lies outside the algebra")
        ns = len(self.s_basis)
        s_part = Matrix.zeros(self.size)
        for k in range(ns):
            if sol.data[k][0]:
                s_part = s_part + self.s_basis[k].scale(sol.data[k][0])
        return s_part, m - s_part

    def project(self, m):
        return self.split(m)[0]


def malcev_complement(basis, rad):
    """Semisimple complement of the radical, by multiplicative correction.

    Lifts the quotient basis along rad >= rad^2 >= ... fixing the section to
    be multiplicative modulo ever higher radical powers; terminates because
    the radical is nilpotent.
    """
    if rad.quotient_dim == 0:
        raise ValueError("algebra is nilpotent; no complement to compute")
    d = basis.size
    Q = rad.quotient
    q = Q.dim
    sigma = [basis.matrices[k] for k in rad._rep_indices]
    if not rad.radical_basis:
        comp = Complement(sigma, [], d)
        return comp
    power_mats = list(rad.radical_basis)
    while True:
        defects = {}
        clean = True
        for a in range(q):
            for b in range(q):
                prod_vec = Q.struct[a][b]
                target = Matrix.zeros(d)
                for k in range(q):
                    if prod_vec[k]:
                        target = target + sigma[k].scale(prod_vec[k])
                dmat = sigma[a] @ sigma[b] - target
                if not dmat.is_zero():
                    clean = False
                defects[(a, b)] = dmat
        if clean:
            break
        power_sieve = SpanSieve(d * d)
        pw_basis = []
        for m in power_mats:
            if power_sieve.insert(m.vectorize()) is None:
                pw_basis.append(m)
        rk = len(pw_basis)
        if rk == 0:
            raise InvariantViolation("nonzero defect beyond the radical filtration")
        next_mats = [x @ y for x in pw_basis for y in pw_basis]
        next_sieve = SpanSieve(d * d)
        next_basis = []
        for m in next_mats:
            if next_sieve.insert(m.vectorize()) is None:
                next_basis.append(m)
        sub_coords = []
        for m in next_basis:
            coords = power_sieve.coords(m.vectorize())
            if coords is None:
                raise InvariantViolation("radical powers are not nested")
            sub_coords.append(coords)
        proj = _SubspaceProjection(rk, sub_coords)
        lcoef = [[power_sieve.coords((sigma[a] @ w).vectorize()) for w in pw_basis]
                 for a in range(q)]
        rcoef = [[power_sieve.coords((w @ sigma[b]).vectorize()) for w in pw_basis]
                 for b in range(q)]
        if any(v is None for row in lcoef for v in row) or any(
            v is None for row in rcoef for v in row
        ):
            raise InvariantViolation("radical power is not an ideal slice")
        unknowns = q * rk
        rows, rhs = [], []
        for a in range(q):
            for b in range(q):
                dcoords = power_sieve.coords(defects[(a, b)].vectorize())
                if dcoords is None:
                    raise InvariantViolation("defect escapes the radical power")
                block = [[ZERO] * unknowns for _ in range(rk)]
                for gmm in range(q):
                    f = Q.struct[a][b][gmm]
                    if f:
                        for s in range(rk):
                            block[s][gmm * rk + s] = block[s][gmm * rk + s] + f
                for s in range(rk):
                    vec = lcoef[a][s]
                    for t in range(rk):
                        if vec[t]:
                            block[t][b * rk + s] = block[t][b * rk + s] - vec[t]
                    vec = rcoef[b][s]
                    for t in range(rk):
                        if vec[t]:
                            block[t][a * rk + s] = block[t][a * rk + s] - vec[t]
                pblock = proj.rows(block)
                prhs = proj.rows([[dcoords[t]] for t in range(rk)])
                rows.extend(pblock)
                rhs.extend(prhs)
        sol = solve(Matrix.from_rows(rows), Matrix.from_rows(rhs))
        if sol is None:
            raise InvariantViolation("Wedderburn-Malcev correction system is unsolvable")
        for a in range(q):
            add = Matrix.zeros(d)
            for s in range(rk):
                c = sol.data[a * rk + s][0]
                if c:
                    add = add + pw_basis[s].scale(c)
            sigma[a] = sigma[a] + add
        power_mats = next_basis
    comp = Complement(sigma, rad.radical_basis, d)
    _verify_complement(basis, rad, comp)
    return comp


class _SubspaceProjection:
    """Quotient map k^n -> k^n / span(sub), in complement coordinates."""

    def __init__(self, n, sub_vectors):
        sieve = SpanSieve(n)
        indep = []
        for v in sub_vectors:
            if sieve.insert(v) is None:
                indep.append(list(v))
        self.rep = []
        for k in range(n):
            if sieve.insert(_unit_vec(n, k)) is None:
                self.rep.append(k)
        cols = indep + [_unit_vec(n, k) for k in self.rep]
        mix = Matrix(n, n, [[cols[j][i] for j in range(n)] for i in range(n)])
        inv = inverse(mix)
        if inv is None:
            raise InvariantViolation("subspace projection mix is singular")
        self.n = n
        self.sub_dim = len(indep)
        self._inv = inv

    def vec(self, v):
        y = self._inv @ Matrix.column(list(v))
        return [y.data[self.sub_dim + k][0] for k in range(self.n - self.sub_dim)]

    def rows(self, block_rows):
        """Project a list of coordinate rows (as a linear map on columns)."""
        ncols = len(block_rows[0]) if block_rows else 0
        out = [[ZERO] * ncols for _ in range(self.n - self.sub_dim)]
        for j in range(ncols):
            col = [block_rows[t][j] for t in range(self.n)]
            pc = self.vec(col)
            for t in range(self.n - self.sub_dim):
                out[t][j] = pc[t]
        return out


def _verify_complement(basis, rad, comp):
    d = basis.size
    sieve = SpanSieve(d * d)
    for m in comp.s_basis:
        if sieve.insert(m.vectorize()) is not None:
            raise InvariantViolation("complement basis is dependent")
    for x in comp.s_basis:
        for y in comp.s_basis:
            if sieve.coords((x @ y).vectorize()) is None:
                raise InvariantViolation("complement is not multiplicatively closed")
    for m in rad.radical_basis:
        if sieve.insert(m.vectorize()) is not None:
            raise InvariantViolation("complement meets the radical")


def intertwiner_space(a, b):
    """Basis of {P : P a_i = b_i P} as matrices."""
    d = a[0].rows
    rows = []
    for ai, bi in zip(a, b):
        for r in range(d):
            for c in range(d):
                row = [ZERO] * (d * d)
                for k in range(d):
                    row[r * d + k] = row[r * d + k] + ai.data[k][c]
                    row[k * d + c] = row[k * d + c] - bi.data[r][k]
                rows.append(row)
    _, kernel = rank_kernel(Matrix.from_rows(rows))
    out = []
    for v in kernel:
        out.append(Matrix(d, d, [[v[r * d + c] for c in range(d)] for r in range(d)]))
    return out


def _span_determinant_vanishes(mats):
    """True/False when decidable symbolically, None when too large to expand."""
    d = mats[0].rows
    m = len(mats)
    if d > 5 or m > 8:
        return None
    poly = {}
    for perm in itertools.permutations(range(d)):
        sign = _perm_sign(perm)
        term = {(): Scalar(sign)}
        for r in range(d):
            form = {}
            for k in range(m):
                e = mats[k].data[r][perm[r]]
                if e:
                    form[k] = e
            if not form:
                term = {}
                break
            new = {}
            for mono, coeff in term.items():
                for k, val in form.items():
                    key = tuple(sorted(mono + (k,)))
                    acc = new.get(key, ZERO) + coeff * val
                    if acc:
                        new[key] = acc
                    elif key in new:
                        del new[key]
            term = new
        for mono, coeff in term.items():
            acc = poly.get(mono, ZERO) + coeff
            if acc:
                poly[mono] = acc
            elif mono in poly:
                del poly[mono]
    return not poly


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def invertible_in_span(mats, seed, budget, tag="span-search"):
    """Seeded search for an invertible element of a matrix span.

    Returns None when provably no invertible element exists; raises
    SearchBudgetExceeded when the search is inconclusive.
    """
    if not mats or all(m.is_zero() for m in mats):
        return None
    vanishes = _span_determinant_vanishes(mats)
    if vanishes:
        return None
    rng = rng_for(seed, tag)
    d = mats[0].rows
    for round_no in range(budget):
        bound = 1 << (round_no // 4 + 1)
        for _ in range(8):
            cand = Matrix.zeros(d)
            for m in mats:
                c = rng.randint(-bound, bound)
                if c:
                    cand = cand + m.scale(Scalar(c))
            if det(cand):
                return cand
    raise SearchBudgetExceeded("no invertible span element found", seed=seed, budget=budget)


def conjugacy_witness(a, b, seed=0, budget=24):
    """Invertible P with P a_i P^{-1} = b_i, or None when provably impossible."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise ValueError("tuples must have the same number of matrices")
    d = a[0].rows
    for m in list(a) + list(b):
        if not m.is_square() or m.rows != d:
            raise ValueError("tuples must consist of square matrices of equal size")
    if a == b:
        return Matrix.identity(d)
    space = intertwiner_space(a, b)
    if not space:
        return None
    p = invertible_in_span(space, seed, budget, tag="conjugacy")
    if p is None:
        return None
    for ai, bi in zip(a, b):
        if p @ ai != bi @ p:
            raise InvariantViolation("intertwiner candidate fails the exact check")
    return p
