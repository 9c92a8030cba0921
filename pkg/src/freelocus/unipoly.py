"""Univariate polynomials over the exact base field, with factorization.

Coefficients are stored lowest degree first with no trailing zeros; the zero
polynomial has an empty coefficient list.  Factorization over QQ runs through
squarefree decomposition, reduction modulo a prime, Hensel lifting and factor
recombination; factorization over QQ(i) descends to QQ through the norm.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

from .errors import InvariantViolation
from .scalars import QQ, QQI, ONE, ZERO, Scalar, normalize_field


class UniPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [c if type(c) is Scalar else Scalar(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *_):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def from_ints(cls, ints):
        return cls([Scalar(v) for v in ints])

    @classmethod
    def variable(cls):
        return cls((ZERO, ONE))

    # -- basic queries -------------------------------------------------------

    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        if not self.coeffs:
            return ZERO
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == ONE

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return UniPoly(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return UniPoly(out)

    def scale(self, s):
        s = s if type(s) is Scalar else Scalar(s)
        return UniPoly([c * s for c in self.coeffs])

    def monic(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no monic form")
        inv = ONE / self.coeffs[-1]
        return UniPoly([c * inv for c in self.coeffs])

    def divmod(self, other):
        """Exact field division with remainder; other must be nonzero."""
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dv = other.coeffs
        dd = len(dv) - 1
        lead_inv = ONE / dv[-1]
        if len(rem) <= dd:
            return UniPoly(), UniPoly(rem)
        quot = [ZERO] * (len(rem) - dd)
        for k in range(len(quot) - 1, -1, -1):
            c = rem[k + dd] * lead_inv
            if c:
                quot[k] = c
                for j, d in enumerate(dv):
                    rem[k + j] = rem[k + j] - c * d
        return UniPoly(quot), UniPoly(rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self):
        return UniPoly([self.coeffs[k] * Scalar(k) for k in range(1, len(self.coeffs))])

    def eval_scalar(self, x):
        x = x if type(x) is Scalar else Scalar(x)
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def taylor_shift(self, c):
        """Return p(t + c)."""
        c = c if type(c) is Scalar else Scalar(c)
        shift = UniPoly((c, ONE))
        acc = UniPoly()
        for coeff in reversed(self.coeffs):
            acc = acc * shift + UniPoly((coeff,))
        return acc

    def conj_coeffs(self):
        return UniPoly([c.conjugate() for c in self.coeffs])

    def all_real(self):
        return all(c.is_real() for c in self.coeffs)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*t" if c != ONE else "t")
            else:
                parts.append(f"{c}*t^{k}" if c != ONE else f"t^{k}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def gcd_monic(a, b):
    """Monic gcd over the coefficient field."""
    while b.coeffs:
        a, b = b, a % b
    if not a.coeffs:
        return UniPoly()
    return a.monic()


def xgcd_poly(a, b):
    """Extended gcd: (s, t, g) with s*a + t*b = g and g monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = UniPoly((ONE,)), UniPoly()
    t0, t1 = UniPoly(), UniPoly((ONE,))
    while r1.coeffs:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.coeffs:
        return s0, t0, r0
    inv = ONE / r0.lc()
    return s0.scale(inv), t0.scale(inv), r0.monic()


def interpolate(points):
    """Unique polynomial through (x, y) pairs with distinct x (Newton form)."""
    xs = [x if type(x) is Scalar else Scalar(x) for x, _ in points]
    dd = [y if type(y) is Scalar else Scalar(y) for _, y in points]
    n = len(points)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j])
    poly = UniPoly((dd[n - 1],))
    for k in range(n - 2, -1, -1):
        poly = poly * UniPoly((-xs[k], ONE)) + UniPoly((dd[k],))
    return poly


def squarefree_decomposition(p):
    """List of (squarefree part, multiplicity); valid in characteristic 0."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree() == 0:
        return []
    f = p.monic()
    parts = []
    g = gcd_monic(f, f.derivative())
    w = (f // g).monic()
    i = 1
    while w.degree() >= 1:
        y = gcd_monic(w, g)
        if not y.coeffs:
            y = UniPoly((ONE,))
        z = w // y
        if z.degree() >= 1:
            parts.append((z.monic(), i))
        w = y
        g = g // y
        i += 1
    return parts


def factor(p, field=QQ, seed=0):
    """Monic irreducible factors with multiplicities over the given field."""
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    field = normalize_field(field)
    if field == QQ and not p.all_real():
        raise ValueError("polynomial has imaginary coefficients but field is QQ")
    out = []
    for part, mult in squarefree_decomposition(p):
        if field == QQ:
            irs = _factor_squarefree_rational(part)
        else:
            irs = _factor_squarefree_gaussian(part, seed)
        out.extend((f, mult) for f in irs)
    out.sort(key=lambda fm: (fm[0].degree(), [str(c) for c in fm[0].coeffs]))
    return out


# -- factorization over QQ ---------------------------------------------------

_PRIMES = (
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139,
    149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211,
)


def _factor_squarefree_rational(p):
    """Irreducible monic factors of a squarefree rational polynomial."""
    pm = p.monic()
    n = pm.degree()
    if n <= 1:
        return [pm]
    den = 1
    for c in pm.coeffs:
        den = den * c.re.denominator // math.gcd(den, c.re.denominator)
    ints = [int(c.re * den) for c in pm.coeffs]
    cont = 0
    for v in ints:
        cont = math.gcd(cont, v)
    ints = [v // cont for v in ints]
    if ints[-1] < 0:
        ints = [-v for v in ints]
    lead = ints[-1]
    # substitute t -> t/lead and scale to a monic integer polynomial
    monic_ints = [ints[k] * lead ** (n - 1 - k) for k in range(n)] + [1]
    factors_int = _zassenhaus_monic(monic_ints)
    out = []
    for h in factors_int:
        coeffs = [Scalar(Fraction(h[k]) * Fraction(lead) ** k) for k in range(len(h))]
        out.append(UniPoly(coeffs).monic())
    return out


def _zassenhaus_monic(f):
    """Factor a monic squarefree integer polynomial given as an int list."""
    n = len(f) - 1
    if n <= 1:
        return [list(f)]
    prime = None
    for p in _PRIMES:
        fp = [c % p for c in f]
        dfp = _ptrim([(k * f[k]) % p for k in range(1, len(f))])
        if len(_ptrim(fp)) == len(f) and len(_pgcd(fp, dfp, p)) == 1:
            prime = p
            break
    if prime is None:  # squarefree integer polys have good small primes
        raise InvariantViolation(f"no usable prime for {f}")
    rng = random.Random(f"zassenhaus:{tuple(f)}")
    facs_p = _modp_factor([c % prime % prime for c in f], prime, rng)
    if len(facs_p) == 1:
        return [list(f)]
    # Mignotte-style bound on factor coefficients
    norm = math.isqrt(sum(c * c for c in f)) + 1
    bound = 2 * (norm << n) + 1
    modulus = prime
    while modulus < bound:
        modulus = modulus * modulus
    lifted = _hensel_lift_factors(f, facs_p, prime, modulus)
    return _recombine(f, lifted, modulus)


def _recombine(f, lifted, modulus):
    result = []
    idxs = list(range(len(lifted)))
    cur = list(f)
    r = 1
    while 2 * r <= len(idxs):
        hit = None
        for combo in combinations(idxs, r):
            cand = [1]
            for i in combo:
                cand = _zmul_mod(cand, lifted[i], modulus)
            cand = _center(cand, modulus)
            q = _zdiv_monic(cur, cand)
            if q is not None:
                result.append(cand)
                cur = q
                hit = set(combo)
                break
        if hit is None:
            r += 1
        else:
            idxs = [i for i in idxs if i not in hit]
    if len(cur) > 1:
        result.append(cur)
    return result


def _center(poly, m):
    half = m // 2
    return [((c % m) - m) if (c % m) > half else (c % m) for c in poly]


def _zmul_mod(a, b, m):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % m
    return out


def _zdiv_monic(num, den):
    """Exact division of integer polys by a monic divisor, or None."""
    if len(den) > len(num) or den[-1] != 1:
        return None
    rem = list(num)
    dd = len(den) - 1
    quot = [0] * (len(rem) - dd)
    for k in range(len(quot) - 1, -1, -1):
        c = rem[k + dd]
        quot[k] = c
        if c:
            for j in range(len(den)):
                rem[k + j] -= c * den[j]
    if any(rem[:dd]):
        return None
    return quot


# -- arithmetic mod a (possibly huge) modulus --------------------------------


def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(a, b, m):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % m
    for i in range(len(a)):
        out[i] %= m
    return _ptrim(out)


def _psub(a, b, m):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % m
    for i in range(len(a)):
        out[i] %= m
    return _ptrim(out)


def _pmul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % m
    return _ptrim(out)


def _pdivmod(a, b, m):
    """Division with remainder; leading coefficient of b must be a unit."""
    b = _ptrim(list(b))
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], -1, m)
    rem = [c % m for c in a]
    _ptrim(rem)
    dd = len(b) - 1
    if len(rem) <= dd:
        return [], rem
    quot = [0] * (len(rem) - dd)
    for k in range(len(quot) - 1, -1, -1):
        c = (rem[k + dd] * inv) % m
        quot[k] = c
        if c:
            for j in range(len(b)):
                rem[k + j] = (rem[k + j] - c * b[j]) % m
    return _ptrim(quot), _ptrim(rem)


def _pgcd(a, b, p):
    a = _ptrim([c % p for c in a])
    b = _ptrim([c % p for c in b])
    while b:
        _, r = _pdivmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _pxgcd(a, b, p):
    """Return (s, t, g) with s*a + t*b = g (monic) mod p."""
    r0, r1 = _ptrim([c % p for c in a]), _ptrim([c % p for c in b])
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return ([(c * inv) % p for c in s0], [(c * inv) % p for c in t0],
            [(c * inv) % p for c in r0])


def _ppow_mod(base, e, mod_poly, p):
    result = [1]
    b = _pdivmod(base, mod_poly, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, b, p), mod_poly, p)[1]
        e >>= 1
        if e:
            b = _pdivmod(_pmul(b, b, p), mod_poly, p)[1]
    return result


def _modp_factor(f, p, rng):
    """Monic irreducible factors of a monic squarefree polynomial mod p."""
    f = [c % p for c in f]
    inv = pow(f[-1], -1, p)
    f = [(c * inv) % p for c in f]
    out = []
    for block, d in _distinct_degree(f, p):
        out.extend(_equal_degree(block, d, p, rng))
    out.sort(key=lambda q: (len(q), q))
    return out


def _distinct_degree(f, p):
    blocks = []
    v = list(f)
    w = [0, 1]
    d = 0
    while len(v) - 1 >= 2 * (d + 1):
        d += 1
        w = _ppow_mod(w, p, v, p)
        g = _pgcd(_psub(w, [0, 1], p), v, p)
        if len(g) > 1:
            blocks.append((g, d))
            v = _pdivmod(v, g, p)[0]
            w = _pdivmod(w, v, p)[1]
    if len(v) > 1:
        blocks.append((v, len(v) - 1))
    return blocks


def _equal_degree(f, d, p, rng):
    """Cantor-Zassenhaus splitting; f is a product of degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    exp = (p ** d - 1) // 2
    while True:
        a = [rng.randrange(p) for _ in range(n)]
        a = _ptrim(a)
        if len(a) <= 1:
            continue
        g = _pgcd(a, f, p)
        if 1 < len(g) < len(f):
            left, right = g, _pdivmod(f, g, p)[0]
        else:
            b = _ppow_mod(a, exp, f, p)
            g = _pgcd(_psub(b, [1], p), f, p)
            if not 1 < len(g) < len(f):
                continue
            left, right = g, _pdivmod(f, g, p)[0]
        return _equal_degree(left, d, p, rng) + _equal_degree(right, d, p, rng)


def _hensel_step(f, g, h, s, t, m):
    """One quadratic Hensel step from modulus m to m*m (h monic)."""
    mm = m * m
    e = _psub(f, _pmul(g, h, mm), mm)
    q, r = _pdivmod(_pmul(s, e, mm), h, mm)
    g1 = _padd(g, _padd(_pmul(t, e, mm), _pmul(q, g, mm), mm), mm)
    h1 = _padd(h, r, mm)
    b = _psub(_padd(_pmul(s, g1, mm), _pmul(t, h1, mm), mm), [1], mm)
    c, d = _pdivmod(_pmul(s, b, mm), h1, mm)
    s1 = _psub(s, d, mm)
    t1 = _psub(t, _padd(_pmul(t, b, mm), _pmul(c, g1, mm), mm), mm)
    return g1, h1, s1, t1


def _hensel_lift_factors(f, facs, p, modulus):
    """Lift a mod-p factorization of monic integer f to the target modulus."""
    if len(facs) == 1:
        return [_center([c % modulus for c in f], modulus)]
    g = list(facs[0])
    h = [1]
    for other in facs[1:]:
        h = _pmul(h, other, p)
    s, t, one = _pxgcd(g, h, p)
    if one != [1]:
        raise InvariantViolation("modular factors are not coprime")
    m = p
    while m < modulus:
        g, h, s, t = _hensel_step([c % (m * m) for c in f], g, h, s, t, m)
        m = m * m
    g_int = _center(g, m)
    h_int = _center(h, m)
    return [g_int] + _hensel_lift_factors(h_int, facs[1:], p, modulus)


# -- factorization over QQ(i) -------------------------------------------------


def _factor_squarefree_gaussian(p, seed=0):
    """Trager norm descent: factor a squarefree polynomial over QQ(i)."""
    pm = p.monic()
    if pm.degree() <= 1:
        return [pm]
    shifts = [0]
    for k in range(1, 4 * pm.degree() * pm.degree() + 8):
        shifts.extend((k, -k))
    for s in shifts:
        shifted = pm.taylor_shift(Scalar(0, -s))
        norm = shifted * shifted.conj_coeffs()
        if not norm.all_real():
            raise InvariantViolation("norm polynomial has imaginary part")
        dn = norm.derivative()
        if gcd_monic(norm, dn).degree() != 0:
            continue
        out = []
        for h in _factor_squarefree_rational(norm):
            g = gcd_monic(shifted, h)
            if g.degree() >= 1:
                out.append(g.taylor_shift(Scalar(0, s)).monic())
        prod = UniPoly((ONE,))
        for f in out:
            prod = prod * f
        if prod != pm:
            raise InvariantViolation("Gaussian factorization does not multiply back")
        return out
    raise InvariantViolation("no squarefree norm shift found")
