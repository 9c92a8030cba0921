"""Trace-word fingerprints and orbit-closure comparison.

Two tuples of d x d matrices lie over the same point of the conjugation
quotient exactly when all trace words agree; traces of cyclic-class
representatives (Lyndon words) up to length d^2 generate the invariants, so
the fingerprint restricted to those words is a faithful key.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import det
from .pencil import MonicPencil
from .sampling import rand_int_tuple, rng_for
from .words import word_key, word_value


def lyndon_words(g, max_len):
    """All Lyndon words over g letters up to max_len, length-lex ordered.

    Duval's generation; one representative per cyclic class of primitive
    words.
    """
    if g < 1 or max_len < 1:
        raise ValueError("need at least one letter and positive length")
    out = []
    w = [0]
    while w:
        if len(w) <= max_len:
            out.append(tuple(v + 1 for v in w))
        # extend periodically to max_len, then increment the last letter
        ext = [w[i % len(w)] for i in range(max_len)]
        while ext and ext[-1] == g - 1:
            ext.pop()
        w = ext
        if w:
            w[-1] += 1
    return sorted(out, key=word_key)


@dataclass
class Fingerprint:
    """Traces of Lyndon representatives up to length size^2."""

    size: int
    nvars: int
    entries: dict

    def __eq__(self, other):
        return (
            isinstance(other, Fingerprint)
            and self.size == other.size
            and self.nvars == other.nvars
            and self.entries == other.entries
        )


def trace_fingerprint(mats):
    """Fingerprint of a matrix tuple: word -> trace on Lyndon words."""
    mats = tuple(mats)
    d = mats[0].rows
    for m in mats:
        if not m.is_square() or m.rows != d:
            raise ValueError("fingerprint needs square matrices of equal size")
    g = len(mats)
    entries = {}
    if d > 0:
        from .linalg import Matrix

        cache = {(): Matrix.identity(d)}

        def value(w):
            hit = cache.get(w)
            if hit is None:
                hit = value(w[:-1]) @ mats[w[-1] - 1]
                cache[w] = hit
            return hit

        for w in lyndon_words(g, d * d):
            entries[w] = value(w).trace()
    return Fingerprint(d, g, entries)


def same_orbit_closure(a, b):
    """True iff the tuples give the same conjugation-quotient point."""
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise ValueError("tuples must have the same arity")
    if a[0].rows != b[0].rows:
        raise ValueError("tuples must have the same matrix size")
    return trace_fingerprint(a) == trace_fingerprint(b)


def det_generic_check(la, lb, trials=100, seed=0, max_size=None, bound=3):
    """Probabilistic determinant comparison at seeded random tuples.

    Evaluates both pencils at random integer tuples of sizes cycling
    1..max_size (default d^2); returns False on the first exact mismatch,
    True if all trials agree.  A False answer is a sound refutation.
    """
    if la.size != lb.size:
        raise ValueError("pencils must have equal size")
    if la.vars != lb.vars:
        raise ValueError("pencils must share the variable count")
    d = max(la.size, 1)
    cap = d * d if max_size is None else max_size
    rng = rng_for(seed, "det-generic")
    for t in range(trials):
        n = (t % cap) + 1
        xs = rand_int_tuple(rng, la.vars, n, bound)
        if det(la.evaluate(xs)) != det(lb.evaluate(xs)):
            return False
    return True
