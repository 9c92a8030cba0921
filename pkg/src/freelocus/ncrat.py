"""Noncommutative rational expressions, realizations, and domains.

Expressions regular at the origin are compiled into realizations
(c, I - sum A_i x_i, b); minimization restricts to the reachable subspace and
quotients by the unobservable one.  Domain questions (inclusion, equality,
polynomiality, decomposition into co-irreducible factors, rewriting in terms
of irreducible atom functions) reduce to free-locus computations on the
minimal pencil.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import malcev_complement, radical, word_span
from .errors import (
    InvariantViolation,
    NotRegularAtZero,
    NotSameFunction,
    ParseError,
    SearchBudgetExceeded,
)
from .linalg import Matrix, SpanSieve, det, inverse, kron, rank_kernel
from .pencil import (
    MonicPencil,
    empty_pencil,
    in_locus,
    locus_components,
    locus_inclusion,
    nonempty_locus_point,
)
from .sampling import rng_for
from .scalars import ONE, QQ, ZERO, Scalar
from .words import NcPolynomial, word_key

# -- expression trees -------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Scalar
    span: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Var:
    index: int
    span: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Sum:
    children: tuple
    span: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Prod:
    children: tuple
    span: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    child: object
    span: tuple = field(default=None, compare=False)


@dataclass(frozen=True)
class Inv:
    child: object
    span: tuple = field(default=None, compare=False)


def max_var(ast):
    if isinstance(ast, Var):
        return ast.index
    if isinstance(ast, (Sum, Prod)):
        return max((max_var(c) for c in ast.children), default=0)
    if isinstance(ast, (Neg, Inv)):
        return max_var(ast.child)
    return 0


# -- parsing ------------------------------------------------------------------------


class _Tokens:
    def __init__(self, text):
        self.text = text
        self.items = []
        i = 0
        n = len(text)
        while i < n:
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if ch.isdigit():
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                self.items.append(("num", text[i:j], i))
                i = j
                continue
            if ch.isalpha():
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                word = text[i:j]
                if word == "inv":
                    self.items.append(("inv", word, i))
                elif word[0] == "x" and word[1:].isdigit():
                    self.items.append(("var", word, i))
                else:
                    raise ParseError(f"unexpected name {word!r}", i)
                i = j
                continue
            if ch == "^":
                if text[i : i + 3] == "^-1":
                    self.items.append(("powinv", "^-1", i))
                    i += 3
                    continue
                raise ParseError("only '^-1' powers are supported", i)
            if ch in "+-*/()":
                self.items.append((ch, ch, i))
                i += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", i)
        self.pos = 0

    def peek(self):
        if self.pos < len(self.items):
            return self.items[self.pos]
        return ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok


def parse(text):
    """Parse an nc rational expression.

    Grammar: sums of products of optionally inverted atoms, with `inv(e)` and
    postfix `^-1` both denoting inversion; products need an explicit `*`.
    """
    toks = _Tokens(text)
    ast = _parse_expr(toks)
    tok = toks.peek()
    if tok[0] != "eof":
        raise ParseError(f"trailing input {tok[1]!r}", tok[2])
    return ast


def _parse_expr(toks):
    start = toks.peek()[2]
    parts = [_parse_term(toks)]
    while toks.peek()[0] in ("+", "-"):
        op = toks.next()
        rhs = _parse_term(toks)
        parts.append(Neg(rhs, span=rhs.span) if op[0] == "-" else rhs)
    if len(parts) == 1:
        return parts[0]
    return Sum(tuple(parts), span=(start, toks.peek()[2]))


def _parse_term(toks):
    start = toks.peek()[2]
    parts = [_parse_factor(toks)]
    while toks.peek()[0] == "*":
        toks.next()
        parts.append(_parse_factor(toks))
    if len(parts) == 1:
        return parts[0]
    return Prod(tuple(parts), span=(start, toks.peek()[2]))


def _parse_factor(toks):
    tok = toks.peek()
    if tok[0] == "-":
        toks.next()
        child = _parse_factor(toks)
        return Neg(child, span=(tok[2], toks.peek()[2]))
    return _parse_base(toks)


def _parse_base(toks):
    atom = _parse_atom(toks)
    if toks.peek()[0] == "powinv":
        tok = toks.next()
        return Inv(atom, span=(atom.span[0] if atom.span else tok[2], tok[2] + 3))
    return atom


def _parse_atom(toks):
    tok = toks.next()
    if tok[0] == "num":
        num = int(tok[1])
        if toks.peek()[0] == "/":
            toks.next()
            den_tok = toks.expect("num")
            den = int(den_tok[1])
            if den == 0:
                raise ParseError("zero denominator", den_tok[2])
            return Const(Scalar(Fraction(num, den)), span=(tok[2], den_tok[2]))
        return Const(Scalar(num), span=(tok[2], tok[2] + len(tok[1])))
    if tok[0] == "var":
        index = int(tok[1][1:])
        if index == 0:
            raise ParseError("variable indices start at 1", tok[2])
        return Var(index, span=(tok[2], tok[2] + len(tok[1])))
    if tok[0] == "(":
        inner = _parse_expr(toks)
        toks.expect(")")
        return inner
    if tok[0] == "inv":
        toks.expect("(")
        inner = _parse_expr(toks)
        close = toks.expect(")")
        return Inv(inner, span=(tok[2], close[2] + 1))
    raise ParseError(f"unexpected token {tok[1]!r}", tok[2])


# -- evaluation ----------------------------------------------------------------------


def eval_ast(ast, point):
    """Evaluate at a matrix tuple; None when an intermediate inverse fails."""
    point = tuple(point)
    if max_var(ast) > len(point):
        raise ValueError("expression uses more variables than the point provides")
    n = point[0].rows if point else 1
    return _eval(ast, point, n)


def _eval(ast, point, n):
    if isinstance(ast, Const):
        return Matrix.identity(n).scale(ast.value)
    if isinstance(ast, Var):
        return point[ast.index - 1]
    if isinstance(ast, Neg):
        inner = _eval(ast.child, point, n)
        return None if inner is None else -inner
    if isinstance(ast, Sum):
        acc = Matrix.zeros(n)
        for child in ast.children:
            inner = _eval(child, point, n)
            if inner is None:
                return None
            acc = acc + inner
        return acc
    if isinstance(ast, Prod):
        acc = Matrix.identity(n)
        for child in ast.children:
            inner = _eval(child, point, n)
            if inner is None:
                return None
            acc = acc @ inner
        return acc
    if isinstance(ast, Inv):
        inner = _eval(ast.child, point, n)
        if inner is None:
            return None
        return inverse(inner)
    raise TypeError(f"not an expression node: {ast!r}")


def value_at_zero(ast):
    """Exact value at the origin; raises NotRegularAtZero on a bad inverse."""
    if isinstance(ast, Const):
        return ast.value
    if isinstance(ast, Var):
        return ZERO
    if isinstance(ast, Neg):
        return -value_at_zero(ast.child)
    if isinstance(ast, Sum):
        acc = ZERO
        for child in ast.children:
            acc = acc + value_at_zero(child)
        return acc
    if isinstance(ast, Prod):
        acc = ONE
        for child in ast.children:
            acc = acc * value_at_zero(child)
        return acc
    if isinstance(ast, Inv):
        val = value_at_zero(ast.child)
        if not val:
            span = ast.span or (0, 0)
            raise NotRegularAtZero(
                f"inverse argument vanishes at the origin (near position {span[0]})"
            )
        return ONE / val
    raise TypeError(f"not an expression node: {ast!r}")


# -- realizations ----------------------------------------------------------------------


@dataclass(frozen=True)
class Realization:
    """r = c^t L^{-1} b for a function regular at the origin."""

    c: tuple
    pencil: MonicPencil
    b: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(self.c))
        object.__setattr__(self, "b", tuple(self.b))
        if len(self.c) != self.pencil.size or len(self.b) != self.pencil.size:
            raise ValueError("vector lengths must match the pencil size")

    @property
    def size(self):
        return self.pencil.size

    @property
    def vars(self):
        return self.pencil.vars

    def value_at_zero(self):
        acc = ZERO
        for x, y in zip(self.c, self.b):
            acc = acc + x * y
        return acc

    def series_coefficient(self, word):
        """Coefficient of a word in the power series expansion."""
        vec = list(self.b)
        for letter in reversed(word):
            a = self.pencil.coefficients[letter - 1]
            vec = [sum((a.data[i][j] * vec[j] for j in range(self.size)), ZERO)
                   for i in range(self.size)]
        acc = ZERO
        for x, y in zip(self.c, vec):
            acc = acc + x * y
        return acc

    def truncated_series(self, max_len):
        out = {}
        g = self.vars

        def rec(word, vec):
            if not any(vec):
                return
            acc = ZERO
            for x, y in zip(self.c, vec):
                acc = acc + x * y
            if acc:
                out[word] = acc
            if len(word) == max_len:
                return
            for i in range(g):
                a = self.pencil.coefficients[i]
                nxt = [sum((a.data[r][j] * vec[j] for j in range(self.size)), ZERO)
                       for r in range(self.size)]
                rec((i + 1,) + word, nxt)

        rec((), list(self.b))
        return out


def realize(ast, nvars=None):
    """Compile an expression regular at 0 into a realization.

    Sizes: constants 1, variables 2, sums and products add, inverses add 1.
    """
    g = max(1, max_var(ast)) if nvars is None else nvars
    if max_var(ast) > g:
        raise ValueError("expression uses more variables than nvars")
    c, mats, b = _realize(ast, g)
    return Realization(tuple(c), MonicPencil(tuple(mats)), tuple(b))


def _realize(ast, g):
    if isinstance(ast, Const):
        return [ast.value], [Matrix.zeros(1) for _ in range(g)], [ONE]
    if isinstance(ast, Var):
        mats = [Matrix.zeros(2) for _ in range(g)]
        mats[ast.index - 1] = Matrix.unit(2, 2, 0, 1)
        return [ONE, ZERO], mats, [ZERO, ONE]
    if isinstance(ast, Neg):
        c, mats, b = _realize(ast.child, g)
        return [-x for x in c], mats, b
    if isinstance(ast, Sum):
        c, mats, b = _realize(ast.children[0], g)
        for child in ast.children[1:]:
            c2, mats2, b2 = _realize(child, g)
            c = c + c2
            b = b + b2
            mats = [_block_diag(m1, m2) for m1, m2 in zip(mats, mats2)]
        return c, mats, b
    if isinstance(ast, Prod):
        c, mats, b = _realize(ast.children[0], g)
        for child in ast.children[1:]:
            c, mats, b = _realize_product(c, mats, b, *_realize(child, g))
        return c, mats, b
    if isinstance(ast, Inv):
        c, mats, b = _realize(ast.child, g)
        return _realize_inverse(ast, c, mats, b)
    raise TypeError(f"not an expression node: {ast!r}")


def _block_diag(m1, m2):
    from .linalg import direct_sum

    return direct_sum(m1, m2)


def _realize_product(c1, mats1, b1, c2, mats2, b2):
    d1, d2 = len(c1), len(c2)
    alpha = sum((x * y for x, y in zip(c1, b1)), ZERO)  # value of the left factor
    out_mats = []
    for m1, m2 in zip(mats1, mats2):
        top = []
        m1b1 = [sum((m1.data[i][j] * b1[j] for j in range(d1)), ZERO) for i in range(d1)]
        for i in range(d1):
            row = list(m1.data[i]) + [m1b1[i] * c2[j] for j in range(d2)]
            top.append(row)
        bottom = [[ZERO] * d1 + list(m2.data[i]) for i in range(d2)]
        out_mats.append(Matrix(d1 + d2, d1 + d2, top + bottom))
    c = list(c1) + [alpha * x for x in c2]
    b = [ZERO] * d1 + list(b2)
    return c, out_mats, b


def _realize_inverse(node, c, mats, b):
    d = len(c)
    alpha = sum((x * y for x, y in zip(c, b)), ZERO)
    if not alpha:
        span = node.span or (0, 0)
        raise NotRegularAtZero(
            f"inverse argument vanishes at the origin (near position {span[0]})"
        )
    ia = ONE / alpha
    out_mats = []
    for m in mats:
        # bordered-system inverse: size d+1
        ctm = [sum((c[k] * m.data[k][j] for k in range(d)), ZERO) for j in range(d)]
        rows = [[ZERO] + [ia * x for x in ctm]]
        bc = [[b[i] * c[j] for j in range(d)] for i in range(d)]
        for i in range(d):
            row = [ZERO]
            for j in range(d):
                acc = m.data[i][j] - ia * sum(
                    (bc[i][k] * m.data[k][j] for k in range(d)), ZERO
                )
                row.append(acc)
            rows.append(row)
        out_mats.append(Matrix(d + 1, d + 1, rows))
    new_c = [-ONE] + [ZERO] * d
    new_b = [-ia] + [ia * x for x in b]
    return new_c, out_mats, new_b


def eval_realization(r, point):
    """(c^t (x) I) L(X)^{-1} (b (x) I), or None when L(X) is singular."""
    point = tuple(point)
    if len(point) != r.vars:
        raise ValueError("point arity does not match the realization")
    n = point[0].rows
    if r.size == 0:
        return Matrix.zeros(n)
    lx = r.pencil.evaluate(point)
    lx_inv = inverse(lx)
    if lx_inv is None:
        return None
    cvec = Matrix(n, r.size * n, [
        [ (r.c[k] if rr == cc else ZERO) for k in range(r.size) for cc in range(n) ]
        for rr in range(n)
    ])
    bvec = Matrix(r.size * n, n, [
        [ (r.b[k] if rr == cc else ZERO) for cc in range(n) ]
        for k in range(r.size) for rr in range(n)
    ])
    return cvec @ lx_inv @ bvec


# -- minimization ------------------------------------------------------------------------


def _restrict_reachable(c, mats, b):
    d = len(c)
    sieve = SpanSieve(d)
    basis = []
    queue = []
    if sieve.insert(list(b)) is None:
        basis.append(list(b))
        queue.append(list(b))
    while queue:
        v = queue.pop(0)
        for m in mats:
            w = [sum((m.data[i][j] * v[j] for j in range(d)), ZERO) for i in range(d)]
            if sieve.insert(w) is None:
                basis.append(w)
                queue.append(w)
    r = len(basis)
    new_mats = []
    for m in mats:
        cols = []
        for v in basis:
            w = [sum((m.data[i][j] * v[j] for j in range(d)), ZERO) for i in range(d)]
            coords = sieve.coords(w)
            if coords is None:
                raise InvariantViolation("reachable space is not invariant")
            cols.append(coords)
        new_mats.append(Matrix(r, r, [[cols[j][i] for j in range(r)] for i in range(r)]))
    new_b = sieve.coords(list(b)) if r else []
    new_c = [sum((c[i] * v[i] for i in range(d)), ZERO) for v in basis]
    return new_c, new_mats, new_b


def minimize(r):
    """Minimal realization of the same function (reachable then observable)."""
    c, mats, b = list(r.c), list(r.pencil.coefficients), list(r.b)
    c, mats, b = _restrict_reachable(c, mats, b)
    # observability = reachability of the transposed realization
    c2, mats2, b2 = _restrict_reachable(b, [m.transpose() for m in mats], c)
    final_c, final_mats, final_b = b2, [m.transpose() for m in mats2], c2
    if not final_c:
        return Realization((), empty_pencil(r.vars), ())
    return Realization(tuple(final_c), MonicPencil(tuple(final_mats)), tuple(final_b))


def realize_minimal(ast, nvars=None):
    return minimize(realize(ast, nvars=nvars))


# -- domains -------------------------------------------------------------------------------


@dataclass
class DomainComparison:
    relation: str               # one of "=", "<=", ">=", "incomparable"
    left_in_right: object       # InclusionVerdict for dom r1 <= dom r2
    right_in_left: object


def domain_compare(r1, r2, seed=0, budget=24, want_point=True):
    """Compare domains of two minimal realizations.

    dom r1 <= dom r2 iff the free locus of r2's pencil is contained in the
    free locus of r1's pencil.
    """
    if r1.vars != r2.vars:
        raise ValueError("realizations must share the variable count")
    sub = locus_inclusion(_domain_pencil(r2), _domain_pencil(r1),
                          seed=seed, budget=budget, want_point=want_point)
    sup = locus_inclusion(_domain_pencil(r1), _domain_pencil(r2),
                          seed=seed, budget=budget, want_point=want_point)
    if sub.holds and sup.holds:
        rel = "="
    elif sub.holds:
        rel = "<="
    elif sup.holds:
        rel = ">="
    else:
        rel = "incomparable"
    return DomainComparison(rel, sub, sup)


def _domain_pencil(r):
    if r.size == 0:
        return empty_pencil(r.vars)
    return r.pencil


def to_polynomial(r, seed=0):
    """Expanded nc polynomial when the function is everywhere defined.

    Returns (polynomial, None) when the coefficient algebra is jointly
    nilpotent, else (None, explicit locus point of the pencil).
    """
    d = r.size
    if d == 0:
        return NcPolynomial(), None
    basis = word_span(r.pencil.coefficients)
    rad = radical(basis)
    if rad.quotient_dim:
        return None, nonempty_locus_point(r.pencil, seed=seed)
    terms = []
    g = r.vars

    def rec(word, vec):
        acc = ZERO
        for x, y in zip(r.c, vec):
            acc = acc + x * y
        if acc:
            terms.append((word, acc))
        if len(word) >= d - 1:
            return
        for i in range(g):
            a = r.pencil.coefficients[i]
            nxt = [sum((a.data[rr][j] * vec[j] for j in range(d)), ZERO)
                   for rr in range(d)]
            if any(nxt):
                rec((i + 1,) + word, nxt)

    rec((), list(r.b))
    return NcPolynomial(terms), None


@dataclass
class DomainDescriptor:
    """Co-irreducible factors of a domain with their atom functions."""

    component_pencils: list
    atoms: list  # atoms[j][i][k] = realization of e_i^t L_j^{-1} e_k


def domain_decompose(r, base_field=QQ, seed=0, budget=24):
    """Co-irreducible decomposition of the domain of a minimal realization."""
    if r.size == 0:
        return DomainDescriptor([], [])
    comps = locus_components(r.pencil, base_field, seed=seed, budget=budget)
    atoms = []
    for pencil in comps:
        dj = pencil.size
        table = []
        for i in range(dj):
            row = []
            for k in range(dj):
                c = tuple(ONE if t == i else ZERO for t in range(dj))
                b = tuple(ONE if t == k else ZERO for t in range(dj))
                row.append(Realization(c, pencil, b))
            table.append(row)
        atoms.append(table)
    return DomainDescriptor(comps, atoms)


# -- atom rewriting ----------------------------------------------------------------------------


@dataclass
class AtomPolynomial:
    """Polynomial over letters x_1..x_g and atoms u_(i,k).

    Atom (i, k) evaluates to the (i, k) block of (I - S(X))^{-1}, where the
    S_i are the semisimple parts of the pencil coefficients.  Letters are
    encoded 1..g, atom (i, k) as g + 1 + i*d + k.
    """

    nvars: int
    size: int
    terms: dict
    semisimple_parts: tuple

    def atom_letter(self, i, k):
        return self.nvars + 1 + i * self.size + k

    def decode_letter(self, letter):
        if letter <= self.nvars:
            return ("var", letter)
        idx = letter - self.nvars - 1
        return ("atom", (idx // self.size, idx % self.size))

    def letter_degree(self):
        return max(
            (sum(1 for l in w if l <= self.nvars) for w in self.terms), default=0)

    def atom_degree(self):
        return max(
            (sum(1 for l in w if l > self.nvars) for w in self.terms), default=0)

    def evaluate(self, point):
        """Evaluate at a matrix tuple in the domain; None off the S-domain."""
        point = tuple(point)
        n = point[0].rows
        d = self.size
        if d == 0:
            return Matrix.zeros(n)
        s_pencil = MonicPencil(self.semisimple_parts)
        u = inverse(s_pencil.evaluate(point))
        if u is None:
            return None
        blocks = {}
        for i in range(d):
            for k in range(d):
                blocks[(i, k)] = Matrix(
                    n, n,
                    [[u.data[i * n + rr][k * n + cc] for cc in range(n)]
                     for rr in range(n)],
                )
        acc = Matrix.zeros(n)
        for word, coeff in sorted(self.terms.items(), key=lambda t: word_key(t[0])):
            cur = Matrix.identity(n)
            for letter in word:
                kind, payload = self.decode_letter(letter)
                cur = cur @ (point[payload - 1] if kind == "var" else blocks[payload])
            acc = acc + cur.scale(coeff)
        return acc


def rewrite_in_atoms(r):
    """Write a minimal realization as a polynomial in letters and atoms.

    Splits each coefficient into semisimple + nilpotent parts along a
    Wedderburn-Malcev complement and expands
    c^t (I-S)^{-1} sum_j (N (I-S)^{-1})^j b.
    """
    d = r.size
    g = r.vars
    if d == 0:
        return AtomPolynomial(g, 0, {}, tuple())
    basis = word_span(r.pencil.coefficients)
    rad = radical(basis)
    if rad.quotient_dim == 0:
        s_parts = tuple(Matrix.zeros(d) for _ in range(g))
        n_parts = tuple(r.pencil.coefficients)
    else:
        comp = malcev_complement(basis, rad)
        split = [comp.split(a) for a in r.pencil.coefficients]
        s_parts = tuple(s for s, _ in split)
        n_parts = tuple(n for _, n in split)
    ap = AtomPolynomial(g, d, {}, s_parts)

    def u_step(state):
        out = {}
        for word, vec in state.items():
            for i in range(d):
                if not vec[i]:
                    continue
                for k in range(d):
                    key = word + (ap.atom_letter(i, k),)
                    tgt = out.setdefault(key, [ZERO] * d)
                    tgt[k] = tgt[k] + vec[i]
        return out

    def n_step(state):
        out = {}
        for word, vec in state.items():
            for i in range(g):
                nm = n_parts[i]
                if nm.is_zero():
                    continue
                nxt = [sum((vec[a] * nm.data[a][bb] for a in range(d)), ZERO)
                       for bb in range(d)]
                if any(nxt):
                    out.setdefault(word + (i + 1,), [ZERO] * d)
                    tgt = out[word + (i + 1,)]
                    for bb in range(d):
                        tgt[bb] = tgt[bb] + nxt[bb]
        return out

    terms = {}
    state = u_step({(): list(r.c)})
    for _ in range(d):
        for word, vec in state.items():
            coeff = sum((vec[k] * r.b[k] for k in range(d)), ZERO)
            if coeff:
                acc = terms.get(word, ZERO) + coeff
                if acc:
                    terms[word] = acc
                elif word in terms:
                    del terms[word]
        state = u_step(n_step(state))
    ap.terms = terms
    return ap


# -- similarity ----------------------------------------------------------------------------------


def realization_similarity(r1, r2, seed=0, budget=24):
    """Invertible P with c2 = P^{-t} c1, L2 = P L1 P^{-1}, b2 = P b1.

    Requires equal sizes and equal truncated series up to degree 2d.
    """
    d = r1.size
    if r2.size != d:
        raise NotSameFunction("realization sizes differ")
    if r1.vars != r2.vars:
        raise NotSameFunction("variable counts differ")
    if r1.truncated_series(2 * d) != r2.truncated_series(2 * d):
        raise NotSameFunction("truncated series differ")
    if d == 0:
        return Matrix(0, 0, [])
    g = r1.vars
    rows, rhs = [], []
    # A2_i P - P A1_i = 0
    for i in range(g):
        a1 = r1.pencil.coefficients[i]
        a2 = r2.pencil.coefficients[i]
        for rr in range(d):
            for cc in range(d):
                row = [ZERO] * (d * d)
                for k in range(d):
                    row[k * d + cc] = row[k * d + cc] + a2.data[rr][k]
                    row[rr * d + k] = row[rr * d + k] - a1.data[k][cc]
                rows.append(row)
                rhs.append([ZERO])
    # P b1 = b2
    for rr in range(d):
        row = [ZERO] * (d * d)
        for k in range(d):
            row[rr * d + k] = r1.b[k]
        rows.append(row)
        rhs.append([r2.b[rr]])
    # P^t c2 = c1
    for cc in range(d):
        row = [ZERO] * (d * d)
        for k in range(d):
            row[k * d + cc] = r2.c[k]
        rows.append(row)
        rhs.append([r1.c[cc]])
    from .linalg import solve

    sol = solve(Matrix.from_rows(rows), Matrix.from_rows(rhs))
    if sol is None:
        raise NotSameFunction("no intertwiner: realizations are not similar")
    p = Matrix(d, d, [[sol.data[rr * d + cc][0] for cc in range(d)] for rr in range(d)])
    if not det(p):
        # minimality forces a unique invertible solution; a singular one means
        # the inputs were not minimal
        raise SearchBudgetExceeded(
            "intertwiner is singular (inputs not minimal?)", seed=seed, budget=budget)
    for i in range(g):
        if r2.pencil.coefficients[i] @ p != p @ r1.pencil.coefficients[i]:
            raise InvariantViolation("similarity fails the exact transport check")
    return p
