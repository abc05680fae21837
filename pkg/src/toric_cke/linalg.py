"""Exact rational and integer linear algebra.

Scalars are :class:`fractions.Fraction` (or plain ``int`` where the data is
integral). Matrices are lists of rows. Nothing in here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Matrix = list[list]
Vector = list

__all__ = [
    "DimensionError",
    "parse_rational",
    "format_rational",
    "identity",
    "transpose",
    "matmul",
    "matvec",
    "det",
    "solve_linear",
    "inverse",
    "rank",
    "nullspace",
    "smith_normal_form",
    "is_unimodular",
    "primitive_vector",
]


class DimensionError(ValueError):
    """Matrix or vector shapes do not fit the requested operation."""


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction.

    Accepts the unicode minus sign as well as ``-``.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise TypeError(f"expected a rational string, got {type(text).__name__}")
    s = text.strip().replace("−", "-")
    if not s:
        raise ValueError("empty rational")
    # Fraction() also accepts decimals and floats-as-strings; keep exact forms only.
    body = s[1:] if s[0] in "+-" else s
    parts = body.split("/")
    if len(parts) > 2 or not all(p.strip().isdigit() for p in parts):
        raise ValueError(f"not a rational number: {text!r}")
    value = Fraction(s)
    return value


def format_rational(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*m)]


def _shape(m: Sequence[Sequence]) -> tuple[int, int]:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if any(len(r) != cols for r in m):
        raise DimensionError("ragged matrix")
    return rows, cols


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    ra, ca = _shape(a)
    rb, cb = _shape(b)
    if ca != rb:
        raise DimensionError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> Vector:
    if a and len(a[0]) != len(v):
        raise DimensionError("matrix/vector size mismatch")
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def _is_integral(m: Iterable[Iterable]) -> bool:
    return all(isinstance(x, int) or Fraction(x).denominator == 1 for row in m for x in row)


def _clear_denominators(rows: Sequence[Sequence]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (row-wise, so det changes)."""
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in fr])
    return out


def _bareiss_det_int(m: list[list[int]]) -> int:
    n = len(m)
    a = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1


def det(m: Sequence[Sequence]):
    """Exact determinant by fraction-free (Bareiss) elimination.

    Returns an ``int`` for integer input and a ``Fraction`` otherwise.
    """
    rows, cols = _shape(m)
    if rows != cols:
        raise DimensionError(f"determinant of non-square {rows}x{cols} matrix")
    if rows == 0:
        return 1
    if _is_integral(m):
        return _bareiss_det_int([[int(x) for x in row] for row in m])
    scale = Fraction(1)
    for row in m:
        den = 1
        for x in row:
            d = Fraction(x).denominator
            den = den * d // gcd(den, d)
        scale /= den
    return _bareiss_det_int(_clear_denominators(m)) * scale


def solve_linear(m: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """Solve ``m x = rhs`` exactly; ``None`` when ``m`` is singular.

    Forward elimination is fraction-free on the integer-scaled augmented
    system; back substitution happens in Fractions.
    """
    rows, cols = _shape(m)
    if rows != cols:
        raise DimensionError("solve_linear needs a square matrix")
    if len(rhs) != rows:
        raise DimensionError("right-hand side has wrong length")
    n = rows
    a = _clear_denominators([list(r) + [b] for r, b in zip(m, rhs)])
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    break
            else:
                return None
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    x: list[Fraction] = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(a[i][n]) - sum(a[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / a[i][i]
    return x


def _rref(m: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    a = [[Fraction(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(_rref(m)[1])


def nullspace(m: Sequence[Sequence]) -> list[Vector]:
    """Basis of the rational right kernel of ``m``."""
    _, cols = _shape(m)
    a, pivots = _rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -a[i][f]
        basis.append(v)
    return basis


def inverse(m: Sequence[Sequence]) -> Matrix:
    rows, cols = _shape(m)
    if rows != cols:
        raise DimensionError("inverse of non-square matrix")
    aug = [list(r) + ident for r, ident in zip(m, identity(rows))]
    a, pivots = _rref(aug)
    if pivots[:rows] != list(range(rows)):
        raise ZeroDivisionError("singular matrix")
    return [row[rows:] for row in a]


def is_unimodular(m: Sequence[Sequence]) -> bool:
    rows, cols = _shape(m)
    return rows == cols and _is_integral(m) and abs(det(m)) == 1


def primitive_vector(v: Sequence) -> list[int]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return [x // g for x in ints]


# --- Smith normal form -------------------------------------------------------


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a / b."""
    q, r = divmod(a, b)
    return q + 1 if 2 * abs(r) > abs(b) else q


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U m V = D`` and ``U``, ``V`` unimodular.

    ``D`` is diagonal with non-negative entries and ``D[i][i] | D[i+1][i+1]``.
    """
    rows, cols = _shape(m) if m else (0, 0)
    d = [[int(x) for x in row] for row in m]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):  # row_dst += f * row_src
        d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for row in d:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(d[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if d[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            # smallest entry of the pivot row/column becomes the pivot; this
            # keeps the entries from exploding on dense inputs
            line = [(abs(d[i][t]), 0, i) for i in range(t, rows) if d[i][t]]
            line += [(abs(d[t][j]), 1, j) for j in range(t + 1, cols) if d[t][j]]
            _, axis, k = min(line)
            if axis == 0:
                swap_rows(t, k)
            else:
                swap_cols(t, k)
            p = d[t][t]
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(t, i, -_round_div(d[i][t], p))
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(t, j, -_round_div(d[t][j], p))
            if any(d[i][t] for i in range(t + 1, rows)) or any(d[t][j] for j in range(t + 1, cols)):
                continue
            # pivot must divide the rest of the block
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if d[i][j] % d[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, d, v
