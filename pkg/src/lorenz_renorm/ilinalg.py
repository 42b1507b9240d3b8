"""Dense linear algebra over interval entries, plus small list utilities.

Matrices are lists of rows.  Entries only need the arithmetic protocol of
:class:`~lorenz_renorm.scalar.Scalar` (``+ - * /`` and unary ``-``) and a
``magnitude_ub`` method, so the same elimination code serves real and
complex rectangles.

Shapes are not checked by default: ``dot`` pairs entries over the common
prefix.  Setting the module flag ``STRICT_SHAPES`` turns mismatched shapes
into assertion failures.
"""

from __future__ import annotations

from typing import Any, List, Sequence, Tuple

from .scalar import ZERO, CertificationError

Matrix = List[List[Any]]
Vector = List[Any]

__all__ = [
    "apply",
    "dot",
    "solve",
    "solve_many",
    "subtract_diag",
    "splits",
    "interleave",
    "uninterleave",
    "pairs",
    "STRICT_SHAPES",
]

# debug-time shape checking; the permissive zip semantics are kept otherwise
STRICT_SHAPES = False


def dot(a: Sequence, b: Sequence):
    """Sum of products over the common prefix of ``a`` and ``b``."""
    if STRICT_SHAPES:
        assert len(a) == len(b), f"dot product of lengths {len(a)} and {len(b)}"
    acc = ZERO
    for x, y in zip(a, b):
        acc = acc + x * y
    return acc


def apply(m: Sequence[Sequence], x: Sequence) -> Vector:
    """Matrix-vector product ``m x``."""
    return [dot(x, row) for row in m]


def _pivot_key(x) -> float:
    return x.magnitude_ub()


def _partial_pivot(rows: list) -> list:
    best = 0
    best_mag = _pivot_key(rows[0][0])
    for i in range(1, len(rows)):
        mag = _pivot_key(rows[i][0])
        if mag > best_mag:
            best, best_mag = i, mag
    if best == 0:
        return rows
    return [rows[best]] + rows[:best] + rows[best + 1 :]


def _eliminate(rows: list) -> list:
    """Zero the first column below the pivot; drop the pivot row and column."""
    top = rows[0]
    m11 = top[0]
    top_tail = top[1:]
    out = []
    for r in rows[1:]:
        s = -r[0] / m11
        out.append([s * a + b for a, b in zip(top_tail, r[1:])])
    return out


def _solve_augmented(rows: list, k: int) -> list[list]:
    """Solve ``[M | B]`` with ``k`` right-hand-side columns.

    Returns the solution as a list of rows (one per unknown, ``k`` entries
    each).  Every column sees exactly the operations a single augmented
    column would.
    """
    n = len(rows)
    if n == 0:
        return []
    rows = _partial_pivot(rows)
    x = _solve_augmented(_eliminate(rows), k)
    top = rows[0]
    m11 = top[0]
    coeffs = top[1:n]
    rhs = top[n:]
    first = []
    for j in range(k):
        col = [xi[j] for xi in x]
        first.append((rhs[j] - dot(coeffs, col)) / m11)
    return [first] + x


def solve(m: Sequence[Sequence], b: Sequence) -> Vector:
    """Enclose the solution of ``m x = b`` by Gaussian elimination with partial pivoting.

    For every real matrix and vector in the given rectangles, the exact
    solution lies in the returned rectangle.  Pivots are chosen by the upper
    bound of their magnitude; a pivot containing zero aborts.
    """
    if STRICT_SHAPES:
        assert len(m) == len(b) and all(len(r) == len(m) for r in m), "solve: shape mismatch"
    rows = [list(r) + [y] for r, y in zip(m, b)]
    return [xi[0] for xi in _solve_augmented(rows, 1)]


def solve_many(m: Sequence[Sequence], bs: Sequence[Sequence]) -> list[Vector]:
    """Solve ``m x = b`` for each ``b`` in ``bs``, sharing one elimination."""
    if not bs:
        return []
    n = len(m)
    rows = [list(m[i]) + [b[i] for b in bs] for i in range(n)]
    x = _solve_augmented(rows, len(bs))
    return [[xi[j] for xi in x] for j in range(len(bs))]


def subtract_diag(m: Sequence[Sequence], x) -> Matrix:
    """``m - x I``."""
    out = []
    for k, r in enumerate(m):
        r = list(r)
        r[k] = r[k] - x
        out.append(r)
    return out


def splits(xs: Sequence) -> list[Tuple[list, list]]:
    """All ``(prefix, suffix)`` cuts with a nonempty suffix."""
    xs = list(xs)
    return [(xs[:i], xs[i:]) for i in range(len(xs))]


def interleave(a: Sequence, b: Sequence) -> list:
    out = []
    for x, y in zip(a, b):
        out.append(x)
        out.append(y)
    return out


def pairs(xs: Sequence) -> list[tuple]:
    if len(xs) % 2:
        raise CertificationError("list must have even length")
    return [(xs[i], xs[i + 1]) for i in range(0, len(xs), 2)]


def uninterleave(xs: Sequence) -> Tuple[list, list]:
    ps = pairs(xs)
    return [p[0] for p in ps], [p[1] for p in ps]
