"""Exact matrices over the base field: arithmetic, kernels, determinants.

Small problems go through dense elimination on Scalar entries.  Large kernel
computations (pencil evaluations grow quickly) are routed through a sparse
integer elimination with minimum-fill pivoting; matrices with imaginary
entries are realified first, which exactly doubles kernel dimensions.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction

from .errors import InvariantViolation
from .scalars import ONE, ZERO, Scalar
from .unipoly import UniPoly

_DENSE_LIMIT = 44


class Matrix:
    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows, cols, data):
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "data", data)
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError("matrix shape mismatch")

    def __setattr__(self, *_):
        raise AttributeError("Matrix is immutable; build a new one")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_rows(cls, rows):
        data = [[e if type(e) is Scalar else Scalar(e) for e in row] for row in rows]
        return cls(len(data), len(data[0]) if data else 0, data)

    @classmethod
    def zeros(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls(rows, cols, [[ZERO] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n):
        data = [[ZERO] * n for _ in range(n)]
        for i in range(n):
            data[i][i] = ONE
        return cls(n, n, data)

    @classmethod
    def unit(cls, rows, cols, i, j, value=ONE):
        data = [[ZERO] * cols for _ in range(rows)]
        data[i][j] = value
        return cls(rows, cols, data)

    @classmethod
    def from_blocks(cls, grid):
        row_h = [grid[i][0].rows for i in range(len(grid))]
        col_w = [b.cols for b in grid[0]]
        data = []
        for i, brow in enumerate(grid):
            if [b.rows for b in brow] != [row_h[i]] * len(brow):
                raise ValueError("ragged block row")
            for r in range(row_h[i]):
                line = []
                for b in brow:
                    line.extend(b.data[r])
                data.append(line)
        return cls(sum(row_h), sum(col_w), data)

    @classmethod
    def column(cls, entries):
        return cls.from_rows([[e] for e in entries])

    # -- basics ---------------------------------------------------------------

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in addition")
        return Matrix(
            self.rows,
            self.cols,
            [
                [a + b for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Matrix(self.rows, self.cols, [[-e for e in row] for row in self.data])

    def scale(self, s):
        s = s if type(s) is Scalar else Scalar(s)
        return Matrix(self.rows, self.cols, [[e * s for e in row] for row in self.data])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        od = other.data
        out = [[ZERO] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            ri = self.data[i]
            oi = out[i]
            for k in range(self.cols):
                a = ri[k]
                if not a:
                    continue
                rk = od[k]
                for j in range(other.cols):
                    b = rk[j]
                    if b:
                        oi[j] = oi[j] + a * b
        return Matrix(self.rows, other.cols, out)

    def transpose(self):
        return Matrix(
            self.cols, self.rows,
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
        )

    def conj_transpose(self):
        return Matrix(
            self.cols, self.rows,
            [[self.data[i][j].conjugate() for i in range(self.rows)] for j in range(self.cols)],
        )

    def trace(self):
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        acc = ZERO
        for i in range(self.rows):
            acc = acc + self.data[i][i]
        return acc

    def vectorize(self):
        out = []
        for row in self.data:
            out.extend(row)
        return out

    def is_zero(self):
        return all(not e for row in self.data for e in row)

    def is_square(self):
        return self.rows == self.cols

    def is_real(self):
        return all(e.is_real() for row in self.data for e in row)

    def is_symmetric(self):
        return self.is_square() and self == self.transpose()

    def is_hermitian(self):
        return self.is_square() and self == self.conj_transpose()

    def __repr__(self):
        body = "; ".join(" ".join(str(e) for e in row) for row in self.data)
        return f"Matrix({self.rows}x{self.cols}: {body})"


def kron(a, b):
    """Kronecker product; satisfies the mixed-product law exactly."""
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    out = [[ZERO] * cols for _ in range(rows)]
    for i in range(a.rows):
        for j in range(a.cols):
            s = a.data[i][j]
            if not s:
                continue
            for k in range(b.rows):
                base = out[i * b.rows + k]
                brow = b.data[k]
                off = j * b.cols
                for l in range(b.cols):
                    if brow[l]:
                        base[off + l] = s * brow[l]
    return Matrix(rows, cols, out)


def direct_sum(a, b):
    data = [row + [ZERO] * b.cols for row in a.data]
    data += [[ZERO] * a.cols + row for row in b.data]
    return Matrix(a.rows + b.rows, a.cols + b.cols, data)


def realify_matrix(m):
    """Apply a+bi -> [[a,-b],[b,a]] entrywise; doubles both dimensions."""
    out = [[ZERO] * (2 * m.cols) for _ in range(2 * m.rows)]
    for i in range(m.rows):
        for j in range(m.cols):
            e = m.data[i][j]
            if not e:
                continue
            a, b = Scalar(e.re), Scalar(e.im)
            out[2 * i][2 * j] = a
            out[2 * i][2 * j + 1] = -b
            out[2 * i + 1][2 * j] = b
            out[2 * i + 1][2 * j + 1] = a
    return Matrix(2 * m.rows, 2 * m.cols, out)


# -- dense elimination --------------------------------------------------------


def _dense_rref(data, rows, cols):
    """In-place reduced row echelon form; returns pivot column list."""
    pivots = []
    r = 0
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if data[i][c]:
                piv = i
                break
        if piv is None:
            continue
        data[r], data[piv] = data[piv], data[r]
        inv = ONE / data[r][c]
        if inv != ONE:
            data[r] = [e * inv for e in data[r]]
        rr = data[r]
        for i in range(rows):
            if i != r and data[i][c]:
                f = data[i][c]
                di = data[i]
                for j in range(c, cols):
                    if rr[j]:
                        di[j] = di[j] - f * rr[j]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return pivots


def _dense_rank_kernel(m):
    data = [list(row) for row in m.data]
    pivots = _dense_rref(data, m.rows, m.cols)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    kernel = []
    for fc in free:
        v = [ZERO] * m.cols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -data[r][fc]
        kernel.append(v)
    return len(pivots), kernel


# -- sparse integer elimination ------------------------------------------------


def _rows_as_int_dicts(m):
    """Clear denominators per row; entries must be real."""
    rows = []
    for row in m.data:
        den = 1
        for e in row:
            d = e.re.denominator
            den = den * d // math.gcd(den, d)
        r = {}
        for j, e in enumerate(row):
            if e:
                r[j] = int(e.re * den)
        rows.append(r)
    return rows


def _sparse_eliminate(rows, strip_bits=192):
    """Fraction-free-ish sparse elimination with minimum-fill pivoting.

    Consumes `rows` (list of col->int dicts) and returns the pivot sequence
    [(col, frozen_row_dict), ...] in elimination order.
    """
    col_rows = {}
    for idx, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(idx)
    alive = {i for i, r in enumerate(rows) if r}
    heap = [(len(s), c) for c, s in col_rows.items()]
    heapq.heapify(heap)
    pivots = []
    while heap:
        cnt, c = heapq.heappop(heap)
        s = col_rows.get(c)
        if s is None:
            continue
        s = {i for i in s if i in alive and c in rows[i]}
        if not s:
            col_rows.pop(c, None)
            continue
        col_rows[c] = s
        if len(s) != cnt:
            heapq.heappush(heap, (len(s), c))
            continue
        r_idx = min(s, key=lambda i: (len(rows[i]), i))
        prow = rows[r_idx]
        alive.discard(r_idx)
        for cc in prow:
            sc = col_rows.get(cc)
            if sc is not None:
                sc.discard(r_idx)
        pivots.append((c, prow))
        a = prow[c]
        for i in list(s):
            if i not in alive:
                continue
            row = rows[i]
            b = row.pop(c, 0)
            if not b:
                continue
            g = math.gcd(a, b)
            fa = a // g
            fb = b // g
            if fa != 1:
                for cc in row:
                    row[cc] *= fa
            touched = False
            for cc, pv in prow.items():
                if cc == c:
                    continue
                cur = row.get(cc)
                if cur is None:
                    row[cc] = -fb * pv
                    col_rows.setdefault(cc, set()).add(i)
                    touched = True
                else:
                    val = cur - fb * pv
                    if val:
                        row[cc] = val
                    else:
                        del row[cc]
                        sc = col_rows.get(cc)
                        if sc is not None:
                            sc.discard(i)
            if not row:
                alive.discard(i)
                continue
            if touched or fa != 1:
                mx = max(row.values(), key=abs)
                if abs(mx).bit_length() > strip_bits:
                    g2 = 0
                    for v in row.values():
                        g2 = math.gcd(g2, v)
                        if g2 == 1:
                            break
                    if g2 > 1:
                        for cc in row:
                            row[cc] //= g2
    return pivots


def _sparse_kernel(rows, ncols, want_vectors):
    pivots = _sparse_eliminate(rows)
    rank = len(pivots)
    if not want_vectors:
        return rank, None
    pivot_cols = {c for c, _ in pivots}
    free = [c for c in range(ncols) if c not in pivot_cols]
    kernel = []
    for fc in free:
        v = {fc: Fraction(1)}
        for c, prow in reversed(pivots):
            acc = Fraction(0)
            for j, val in prow.items():
                if j != c and j in v:
                    acc += val * v[j]
            if acc:
                v[c] = -acc / prow[c]
        vec = [ZERO] * ncols
        for j, val in v.items():
            if val:
                vec[j] = Scalar(val)
        kernel.append(vec)
    return rank, kernel


def _complex_kernel_via_realification(m, want_vectors):
    big = realify_matrix(m)
    rows = _rows_as_int_dicts(big)
    rank2, kernel2 = _sparse_kernel(rows, big.cols, want_vectors)
    dim = (big.cols - rank2) // 2
    if not want_vectors:
        return m.cols - dim, None
    # reassemble complex vectors and prune to an independent set
    sieve = _VectorSieve(m.cols)
    kernel = []
    for w in kernel2 or []:
        z = [Scalar(w[2 * k].re, w[2 * k + 1].re) for k in range(m.cols)]
        if sieve.insert(z):
            kernel.append(z)
        if len(kernel) == dim:
            break
    if len(kernel) != dim:
        raise InvariantViolation("complex kernel reassembly lost vectors")
    return m.cols - dim, kernel


class _VectorSieve:
    """Minimal row-space membership filter (no coordinate tracking)."""

    def __init__(self, length):
        self.length = length
        self.rows = {}

    def insert(self, vec):
        v = list(vec)
        for piv in sorted(self.rows):
            if v[piv]:
                row = self.rows[piv]
                f = v[piv]
                for k in range(piv, self.length):
                    if row[k]:
                        v[k] = v[k] - f * row[k]
        piv = next((k for k, x in enumerate(v) if x), None)
        if piv is None:
            return False
        inv = ONE / v[piv]
        self.rows[piv] = [e * inv for e in v]
        return True


def rank_kernel(m):
    """Exact (rank, kernel basis); kernel vectors satisfy m @ v = 0."""
    if m.cols == 0:
        return 0, []
    if m.rows == 0:
        basis = [[ONE if j == k else ZERO for j in range(m.cols)] for k in range(m.cols)]
        return 0, basis
    if max(m.rows, m.cols) <= _DENSE_LIMIT:
        return _dense_rank_kernel(m)
    if m.is_real():
        rows = _rows_as_int_dicts(m)
        return _sparse_kernel(rows, m.cols, True)
    return _complex_kernel_via_realification(m, True)


def kernel_dimension(m):
    """dim ker m, without materializing kernel vectors."""
    if m.cols == 0:
        return 0
    if m.rows == 0:
        return m.cols
    if max(m.rows, m.cols) <= _DENSE_LIMIT:
        rank, _ = _dense_rank_kernel(m)
        return m.cols - rank
    if m.is_real():
        rows = _rows_as_int_dicts(m)
        rank, _ = _sparse_kernel(rows, m.cols, False)
        return m.cols - rank
    big = realify_matrix(m)
    rows = _rows_as_int_dicts(big)
    rank2, _ = _sparse_kernel(rows, big.cols, False)
    return (big.cols - rank2) // 2


# -- determinants ---------------------------------------------------------------


def _bareiss_int(rows):
    n = len(rows)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        piv = None
        for i in range(k, n):
            if rows[i][k]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        pk = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            rik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pk * ri[j] - rik * rk[j]) // prev
            ri[k] = 0
        prev = pk
    return sign * rows[n - 1][n - 1]


def _gauss_mul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _gauss_div_exact(x, y):
    n = y[0] * y[0] + y[1] * y[1]
    a = x[0] * y[0] + x[1] * y[1]
    b = x[1] * y[0] - x[0] * y[1]
    if a % n or b % n:
        raise InvariantViolation("inexact Gaussian division in Bareiss step")
    return (a // n, b // n)


def _bareiss_gauss(rows):
    n = len(rows)
    if n == 0:
        return (1, 0)
    sign = 1
    prev = (1, 0)
    for k in range(n - 1):
        piv = None
        for i in range(k, n):
            if rows[i][k] != (0, 0):
                piv = i
                break
        if piv is None:
            return (0, 0)
        if piv != k:
            rows[k], rows[piv] = rows[piv], rows[k]
            sign = -sign
        pk = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            rik = ri[k]
            for j in range(k + 1, n):
                num0 = _gauss_mul(pk, ri[j])
                num1 = _gauss_mul(rik, rk[j])
                ri[j] = _gauss_div_exact((num0[0] - num1[0], num0[1] - num1[1]), prev)
            ri[k] = (0, 0)
        prev = pk
    val = rows[n - 1][n - 1]
    return (sign * val[0], sign * val[1])


def det(m):
    """Exact determinant via fraction-free elimination; det of 0x0 is 1."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return ONE
    if m.is_real():
        scale = Fraction(1)
        rows = []
        for row in m.data:
            den = 1
            for e in row:
                d = e.re.denominator
                den = den * d // math.gcd(den, d)
            scale *= den
            rows.append([int(e.re * den) for e in row])
        val = _bareiss_int(rows)
        return Scalar(Fraction(val) / scale)
    scale = Fraction(1)
    rows = []
    for row in m.data:
        den = 1
        for e in row:
            for d in (e.re.denominator, e.im.denominator):
                den = den * d // math.gcd(den, d)
        scale *= den
        rows.append([(int(e.re * den), int(e.im * den)) for e in row])
    a, b = _bareiss_gauss(rows)
    return Scalar(Fraction(a) / scale, Fraction(b) / scale)


def det_cofactor(m):
    """Cofactor-expansion determinant; independent cross-check for tests."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return ONE
    if n == 1:
        return m.data[0][0]
    acc = ZERO
    for j in range(n):
        e = m.data[0][j]
        if not e:
            continue
        sub = Matrix(
            n - 1, n - 1,
            [[m.data[i][k] for k in range(n) if k != j] for i in range(1, n)],
        )
        term = e * det_cofactor(sub)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


# -- solving --------------------------------------------------------------------


def solve(a, b):
    """One exact solution x of a @ x = b (column matrix), or None."""
    if a.rows != b.rows:
        raise ValueError("shape mismatch in solve")
    aug = Matrix(a.rows, a.cols + b.cols, [ra + rb for ra, rb in zip(a.data, b.data)])
    data = [list(row) for row in aug.data]
    pivots = _dense_rref(data, aug.rows, aug.cols)
    for r, pc in enumerate(pivots):
        if pc >= a.cols:
            return None
    sol = [[ZERO] * b.cols for _ in range(a.cols)]
    for r, pc in enumerate(pivots):
        for j in range(b.cols):
            sol[pc][j] = data[r][a.cols + j]
    return Matrix(a.cols, b.cols, sol)


def inverse(m):
    """Exact inverse, or None when singular."""
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    if n == 0:
        return Matrix(0, 0, [])
    aug = [list(row) + list(Matrix.identity(n).data[i]) for i, row in enumerate(m.data)]
    pivots = _dense_rref(aug, n, 2 * n)
    if pivots != list(range(n)):
        return None
    return Matrix(n, n, [row[n:] for row in aug])


class SpanSieve:
    """Incremental span with exact coordinates over the inserted basis.

    Maintains a reduced echelon set of vectors; each reduced row remembers how
    it was produced from the inserted independent vectors, so membership tests
    also return coordinates.
    """

    def __init__(self, length):
        self.length = length
        self.rows = []     # reduced vectors, leading entry 1, mutually reduced
        self.pivots = []
        self.combos = []   # dicts basis-index -> Scalar
        self.count = 0

    def _reduce(self, vec):
        v = list(vec)
        combo = {}
        for row, piv, rcombo in zip(self.rows, self.pivots, self.combos):
            f = v[piv]
            if f:
                for k in range(self.length):
                    if row[k]:
                        v[k] = v[k] - f * row[k]
                for b, val in rcombo.items():
                    combo[b] = combo.get(b, ZERO) + f * val
        return v, combo

    def coords(self, vec):
        """Coordinates over the inserted basis, or None if not in the span."""
        v, combo = self._reduce(vec)
        if any(v):
            return None
        out = [ZERO] * self.count
        for b, val in combo.items():
            out[b] = val
        return out

    def insert(self, vec):
        """Insert a vector; returns None when added, else its coordinates."""
        v, combo = self._reduce(vec)
        piv = next((k for k, x in enumerate(v) if x), None)
        if piv is None:
            out = [ZERO] * self.count
            for b, val in combo.items():
                out[b] = val
            return out
        inv = ONE / v[piv]
        v = [e * inv for e in v]
        rcombo = {self.count: inv}
        for b, val in combo.items():
            if val:
                rcombo[b] = -val * inv
        # keep existing rows reduced against the new pivot
        for i, row in enumerate(self.rows):
            f = row[piv]
            if f:
                self.rows[i] = [a - f * b for a, b in zip(row, v)]
                cc = dict(self.combos[i])
                for b, val in rcombo.items():
                    cc[b] = cc.get(b, ZERO) - f * val
                self.combos[i] = {b: val for b, val in cc.items() if val}
        self.rows.append(v)
        self.pivots.append(piv)
        self.combos.append(rcombo)
        self.count += 1
        return None

    @property
    def dim(self):
        return self.count


# -- polynomial/matrix bridges ----------------------------------------------------


def poly_eval_matrix(p, m):
    """Evaluate a univariate polynomial at a square matrix (Horner)."""
    if not m.is_square():
        raise ValueError("polynomial evaluation needs a square matrix")
    n = m.rows
    acc = Matrix.zeros(n)
    for c in reversed(p.coeffs):
        acc = acc @ m
        if c:
            acc = acc + Matrix.identity(n).scale(c)
    return acc


def minpoly(m):
    """Monic least-degree annihilating polynomial of a square matrix."""
    if not m.is_square():
        raise ValueError("minimal polynomial of a non-square matrix")
    n = m.rows
    if n == 0:
        return UniPoly((ZERO, ONE))
    sieve = SpanSieve(n * n)
    power = Matrix.identity(n)
    while True:
        coords = sieve.insert(power.vectorize())
        if coords is not None:
            return UniPoly([-c for c in coords] + [ONE])
        power = power @ m


def companion(p):
    """Companion matrix of a monic polynomial of degree >= 1."""
    if not p.is_monic():
        raise ValueError("companion matrix needs a monic polynomial")
    d = p.degree()
    if d < 1:
        raise ValueError("companion matrix needs degree >= 1")
    out = [[ZERO] * d for _ in range(d)]
    for i in range(d):
        out[i][d - 1] = -p.coeffs[i]
    for i in range(1, d):
        out[i][i - 1] = ONE
    return Matrix(d, d, out)
