"""Exact base-field arithmetic: rationals and Gaussian rationals.

Every scalar is a Gaussian rational ``re + im*i`` with reduced
arbitrary-precision fraction components.  Working over the plain rationals
simply means the imaginary part stays zero; which field is *intended* is a
runtime configuration carried by the operations that care (factorization,
Wedderburn splitting, hermitian checks).
"""

from __future__ import annotations

import re as _re
from fractions import Fraction

QQ = "QQ"
QQI = "QQ(i)"


def normalize_field(name):
    """Map user spellings of the base field to the canonical constants."""
    key = str(name).strip().lower().replace(" ", "")
    if key in ("qq", "q", "rational", "rationals"):
        return QQ
    if key in ("qq(i)", "qqi", "q(i)", "qi", "gaussian"):
        return QQI
    raise ValueError(f"unknown base field: {name!r}")


_FRAC_RE = _re.compile(r"^[+-]?\d+(?:/\d+)?$")


class Scalar:
    """Immutable Gaussian rational."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", re if type(re) is Fraction else Fraction(re))
        object.__setattr__(self, "im", im if type(im) is Fraction else Fraction(im))

    def __setattr__(self, *_):
        raise AttributeError("Scalar is immutable")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(other.re - self.re, other.im - self.im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.im and not other.im:
            return Scalar(self.re * other.re)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.re and not other.im:
            raise ZeroDivisionError("scalar division by zero")
        if not self.im and not other.im:
            return Scalar(self.re / other.re)
        nrm = other.re * other.re + other.im * other.im
        return Scalar(
            (self.re * other.re + self.im * other.im) / nrm,
            (self.im * other.re - self.re * other.im) / nrm,
        )

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def conjugate(self):
        return Scalar(self.re, -self.im)

    def inverse(self):
        return ONE / self

    # -- predicates ---------------------------------------------------------

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_real(self):
        return not self.im

    def is_integer(self):
        return not self.im and self.re.denominator == 1

    def in_field(self, field):
        return field == QQI or self.is_real()

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    # -- text ---------------------------------------------------------------

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"


def _coerce(value):
    if type(value) is Scalar:
        return value
    if isinstance(value, (int, Fraction)):
        return Scalar(value)
    return NotImplemented


ZERO = Scalar(0)
ONE = Scalar(1)
I_UNIT = Scalar(0, 1)


def _frac_str(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(s):
    """Canonical text form `a/b` with optional `+c/d*i` / `-c/d*i` part."""
    if not s.im:
        return _frac_str(s.re)
    sign = "+" if s.im > 0 else "-"
    return f"{_frac_str(s.re)}{sign}{_frac_str(abs(s.im))}*i"


def parse_scalar(text):
    """Parse the canonical scalar text form back into a Scalar."""
    from .errors import ParseError

    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty scalar", 0)
    re_part, im_part = s, None
    if s.endswith("*i"):
        body = s[:-2]
        # split at the last top-level sign that is not a leading sign
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        if cut == -1:
            re_part, im_part = "0", body
        else:
            re_part, im_part = body[:cut], body[cut:]
    if not _FRAC_RE.match(re_part):
        raise ParseError(f"bad scalar text {text!r}", 0)
    re_val = Fraction(re_part)
    im_val = Fraction(0)
    if im_part is not None:
        sign = 1
        if im_part[0] in "+-":
            sign = -1 if im_part[0] == "-" else 1
            im_part = im_part[1:]
        if not _FRAC_RE.match(im_part) or im_part.startswith(("+", "-")):
            raise ParseError(f"bad scalar text {text!r}", 0)
        im_val = sign * Fraction(im_part)
    return Scalar(re_val, im_val)
