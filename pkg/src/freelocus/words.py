"""Words in free noncommuting variables and nc polynomials.

A word is a tuple of 1-based letter indices; the empty tuple is the empty
word.  Polynomials are finite maps word -> scalar with no zero coefficients.
"""

from __future__ import annotations

from .linalg import Matrix
from .scalars import ONE, ZERO, Scalar

Word = tuple


def word_key(w):
    """Length-lexicographic sort key."""
    return (len(w), w)


def word_value(word, mats, size=None):
    """Evaluate a word at a matrix tuple; empty word -> identity."""
    if not word:
        n = size if size is not None else mats[0].rows
        return Matrix.identity(n)
    acc = mats[word[0] - 1]
    for letter in word[1:]:
        acc = acc @ mats[letter - 1]
    return acc


class NcPolynomial:
    """Noncommutative polynomial; terms maps Word -> Scalar."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        data = {}
        items = terms.items() if isinstance(terms, dict) else terms
        for word, coeff in items:
            coeff = coeff if type(coeff) is Scalar else Scalar(coeff)
            word = tuple(word)
            if coeff:
                acc = data.get(word)
                new = coeff if acc is None else acc + coeff
                if new:
                    data[word] = new
                elif word in data:
                    del data[word]
        object.__setattr__(self, "terms", data)

    def __setattr__(self, *_):
        raise AttributeError("NcPolynomial is immutable")

    @classmethod
    def from_word(cls, word, coeff=ONE):
        return cls([(tuple(word), coeff)])

    def is_zero(self):
        return not self.terms

    def has_constant_term(self):
        return () in self.terms

    def degree(self):
        return max((len(w) for w in self.terms), default=-1)

    def support(self):
        return sorted(self.terms, key=word_key)

    def __add__(self, other):
        items = list(self.terms.items()) + list(other.terms.items())
        return NcPolynomial(items)

    def __sub__(self, other):
        items = list(self.terms.items()) + [(w, -c) for w, c in other.terms.items()]
        return NcPolynomial(items)

    def __neg__(self):
        return NcPolynomial([(w, -c) for w, c in self.terms.items()])

    def scale(self, s):
        s = s if type(s) is Scalar else Scalar(s)
        return NcPolynomial([(w, c * s) for w, c in self.terms.items()])

    def __mul__(self, other):
        items = []
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                items.append((w1 + w2, c1 * c2))
        return NcPolynomial(items)

    def __eq__(self, other):
        return isinstance(other, NcPolynomial) and self.terms == other.terms

    def evaluate(self, mats, size=None):
        """Evaluate at a matrix tuple (empty word contributes coeff * I)."""
        n = size if size is not None else mats[0].rows
        acc = Matrix.zeros(n)
        for word, coeff in sorted(self.terms.items(), key=lambda t: word_key(t[0])):
            acc = acc + word_value(word, mats, n).scale(coeff)
        return acc

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for word in self.support():
            c = self.terms[word]
            name = "*".join(f"x{j}" for j in word) if word else "1"
            if c == ONE and word:
                parts.append(name)
            elif word:
                parts.append(f"{c}*{name}")
            else:
                parts.append(str(c))
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__
