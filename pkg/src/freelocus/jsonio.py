"""JSON views of the domain objects.

All scalars travel in the canonical text form; every writer here is matched
by a reader that accepts its output unchanged.
"""

from __future__ import annotations

from .errors import ParseError
from .linalg import Matrix
from .ncrat import Realization
from .pencil import HomCertificate, InclusionVerdict, LocusPoint, MonicPencil
from .scalars import Scalar, format_scalar, parse_scalar
from .words import NcPolynomial, word_key


def matrix_to_json(m):
    return [[format_scalar(e) for e in row] for row in m.data]


def matrix_from_json(rows, field_check=None):
    data = []
    for row in rows:
        data.append([_scalar(e, field_check) for e in row])
    if not data:
        return Matrix(0, 0, [])
    return Matrix(len(data), len(data[0]), data)


def _scalar(text, field_check=None):
    s = parse_scalar(str(text))
    if field_check is not None and not s.in_field(field_check):
        raise ParseError(f"scalar {text!r} is not in the base field {field_check}")
    return s


def tuple_to_json(mats):
    mats = tuple(mats)
    return {
        "size": mats[0].rows if mats else 0,
        "vars": len(mats),
        "matrices": [matrix_to_json(m) for m in mats],
    }


def tuple_from_json(obj, field_check=None):
    try:
        size = int(obj["size"])
        nvars = int(obj["vars"])
        mats = tuple(matrix_from_json(m, field_check) for m in obj["matrices"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad matrix-tuple object: {exc}") from exc
    if len(mats) != nvars:
        raise ParseError("declared variable count does not match the matrix list")
    for m in mats:
        if m.rows != size or m.cols != size:
            raise ParseError("declared size does not match a matrix")
    return mats


def pencil_to_json(pencil):
    return {
        "size": pencil.size,
        "vars": pencil.vars,
        "coefficients": [matrix_to_json(m) for m in pencil.coefficients],
    }


def pencil_from_json(obj, field_check=None):
    try:
        size = int(obj["size"])
        nvars = int(obj["vars"])
        mats = tuple(matrix_from_json(m, field_check) for m in obj["coefficients"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad pencil object: {exc}") from exc
    if len(mats) != nvars:
        raise ParseError("declared variable count does not match the coefficients")
    for m in mats:
        if m.rows != size or m.cols != size:
            raise ParseError("declared size does not match a coefficient")
    return MonicPencil(mats)


def ncpoly_to_json(poly):
    return [
        {"word": list(w), "coeff": format_scalar(poly.terms[w])}
        for w in sorted(poly.terms, key=word_key)
    ]


def ncpoly_from_json(obj):
    try:
        return NcPolynomial(
            [(tuple(int(l) for l in item["word"]), _scalar(item["coeff"]))
             for item in obj]
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad nc polynomial object: {exc}") from exc


def point_to_json(point):
    return {
        "matrices": tuple_to_json(point.matrices),
        "kernel_dim": point.kernel_dim,
    }


def point_from_json(obj, field_check=None):
    return LocusPoint(tuple_from_json(obj["matrices"], field_check),
                      int(obj["kernel_dim"]))


def certificate_to_json(cert):
    return {
        "source_words": [list(w) for w in cert.source_words],
        "target_words": [list(w) for w in cert.target_words],
        "matrix": [[format_scalar(e) for e in row] for row in cert.matrix],
    }


def verdict_to_json(verdict):
    out = {"holds": verdict.holds}
    out["certificate"] = (
        certificate_to_json(verdict.certificate) if verdict.certificate else None
    )
    out["refutation"] = (
        ncpoly_to_json(verdict.refutation) if verdict.refutation else None
    )
    out["separating_point"] = (
        point_to_json(verdict.separating_point) if verdict.separating_point else None
    )
    return out


def realization_to_json(r):
    return {
        "c": [format_scalar(x) for x in r.c],
        "b": [format_scalar(x) for x in r.b],
        "pencil": pencil_to_json(r.pencil),
    }


def realization_from_json(obj, field_check=None):
    try:
        c = tuple(_scalar(x, field_check) for x in obj["c"])
        b = tuple(_scalar(x, field_check) for x in obj["b"])
        pencil = pencil_from_json(obj["pencil"], field_check)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad realization object: {exc}") from exc
    return Realization(c, pencil, b)


def fingerprint_to_json(fp):
    return {
        "size": fp.size,
        "vars": fp.nvars,
        "entries": [
            {"word": list(w), "trace": format_scalar(fp.entries[w])}
            for w in sorted(fp.entries, key=word_key)
        ],
    }
