"""Exact Laurent polynomials over the rationals, plus truncated series.

Polynomials are sparse maps exponent -> Fraction with no stored zeros;
order of the zero polynomial is +infinity.  TruncatedSeries adds a tracked
precision N: coefficients are certified for exponents < N only, and asking
past the certified range raises instead of silently truncating.

Also holds square matrices over these rings, exact determinants and
adjugates, the canonical generator lifts, and a bit-exact JSON matrix
format.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import inf
from typing import Any, Iterable, Mapping, Sequence, Union

from .affine_weyl import Word, _check_rank

Scalar = Union[int, Fraction]


class ZeroLeadingTerm(ZeroDivisionError):
    """Inversion of a series with no visible leading coefficient."""


class InsufficientPrecision(ArithmeticError):
    """A coefficient outside the certified range was requested."""


def _coerce(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"not a rational scalar: {c!r}")


class LaurentPoly:
    """A Laurent polynomial in one variable t with Fraction coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        c: dict[int, Fraction] = {}
        for e, v in (coeffs or {}).items():
            fv = _coerce(v)
            if fv:
                c[int(e)] = fv
        self._c = c

    @classmethod
    def zero(cls) -> LaurentPoly:
        return cls()

    @classmethod
    def one(cls) -> LaurentPoly:
        return cls({0: 1})

    @classmethod
    def const(cls, c: Scalar) -> LaurentPoly:
        return cls({0: _coerce(c)})

    @classmethod
    def t_power(cls, k: int, c: Scalar = 1) -> LaurentPoly:
        return cls({k: _coerce(c)})

    def items(self):
        return self._c.items()

    def coeff(self, k: int) -> Fraction:
        return self._c.get(k, Fraction(0))

    def order(self) -> int | float:
        """Smallest exponent with nonzero coefficient; +inf for zero."""
        return min(self._c) if self._c else inf

    def degree(self) -> int | float:
        return max(self._c) if self._c else -inf

    def span(self) -> int:
        """Degree minus order; 0 for zero or a monomial."""
        return int(max(self._c) - min(self._c)) if self._c else 0

    def shift(self, k: int) -> LaurentPoly:
        """Multiply by t**k."""
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def constant_term(self) -> Fraction:
        return self.coeff(0)

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __add__(self, other: LaurentPoly | Scalar) -> LaurentPoly:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        out = dict(self._c)
        for e, v in other._c.items():
            s = out.get(e, Fraction(0)) + v
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        res = LaurentPoly.__new__(LaurentPoly)
        res._c = out
        return res

    __radd__ = __add__

    def __sub__(self, other: LaurentPoly | Scalar) -> LaurentPoly:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> LaurentPoly:
        return LaurentPoly.const(other) - self

    def __mul__(self, other: LaurentPoly | Scalar) -> LaurentPoly:
        if isinstance(other, (int, Fraction)):
            c = _coerce(other)
            return LaurentPoly({e: v * c for e, v in self._c.items()})
        out: dict[int, Fraction] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                s = out.get(e, Fraction(0)) + v1 * v2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        res = LaurentPoly.__new__(LaurentPoly)
        res._c = out
        return res

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if k < 0:
            raise ValueError("negative powers need series inversion")
        out = LaurentPoly.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c):
            v = self._c[e]
            if e == 0:
                term = str(v)
            else:
                mag = "" if abs(v) == 1 else f"{abs(v)}*"
                term = f"{'-' if v < 0 else ''}{mag}t^{e}" if e != 1 else f"{'-' if v < 0 else ''}{mag}t"
            parts.append(term)
        out = parts[0]
        for p in parts[1:]:
            out += f" + {p}" if not p.startswith("-") else f" - {p[1:]}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()
T = LaurentPoly.t_power(1)
T_INV = LaurentPoly.t_power(-1)


# ---------------------------------------------------------------------------
# truncated series


class TruncatedSeries:
    """A Laurent series known exactly for exponents below ``precision``."""

    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs: Mapping[int, Scalar], precision: int | float):
        c: dict[int, Fraction] = {}
        for e, v in coeffs.items():
            fv = _coerce(v)
            if fv and e < precision:
                c[int(e)] = fv
        self.coeffs = c
        self.precision = precision

    def coeff(self, k: int) -> Fraction:
        if k >= self.precision:
            raise InsufficientPrecision(
                f"exponent {k} not certified (precision {self.precision})"
            )
        return self.coeffs.get(k, Fraction(0))

    def order_lower_bound(self) -> int | float:
        """Smallest visible nonzero exponent, or the precision if none."""
        return min(self.coeffs) if self.coeffs else self.precision

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coeffs == other.coeffs and self.precision == other.precision

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries({e: -v for e, v in self.coeffs.items()}, self.precision)

    def __add__(self, other: TruncatedSeries) -> TruncatedSeries:
        prec = min(self.precision, other.precision)
        out = dict(self.coeffs)
        for e, v in other.coeffs.items():
            s = out.get(e, Fraction(0)) + v
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return TruncatedSeries(out, prec)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        return self + (-other)

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        prec = min(
            self.precision + other.order_lower_bound(),
            other.precision + self.order_lower_bound(),
        )
        out: dict[int, Fraction] = {}
        for e1, v1 in self.coeffs.items():
            for e2, v2 in other.coeffs.items():
                e = e1 + e2
                if e >= prec:
                    continue
                s = out.get(e, Fraction(0)) + v1 * v2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return TruncatedSeries(out, prec)

    def mul_poly(self, p: LaurentPoly) -> TruncatedSeries:
        """Multiply by an exact polynomial; precision shifts by its order."""
        if p.is_zero():
            return TruncatedSeries({}, inf)
        prec = self.precision + p.order()
        out: dict[int, Fraction] = {}
        for e1, v1 in self.coeffs.items():
            for e2, v2 in p.items():
                e = e1 + e2
                if e >= prec:
                    continue
                s = out.get(e, Fraction(0)) + v1 * v2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return TruncatedSeries(out, prec)

    def __repr__(self) -> str:
        body = str(LaurentPoly(self.coeffs))
        return f"TruncatedSeries({body} + O(t^{self.precision}))"


def truncate(f: LaurentPoly, N: int) -> TruncatedSeries:
    """View an exact polynomial as a series certified below N."""
    return TruncatedSeries(dict(f.items()), N)


def as_series(f: LaurentPoly) -> TruncatedSeries:
    """View an exact polynomial as a series of infinite precision."""
    return TruncatedSeries(dict(f.items()), inf)


def series_inv(u: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse, certified below precision - 2 * order(u)."""
    if not u.coeffs:
        raise ZeroLeadingTerm("no visible leading coefficient to invert")
    if u.precision == inf:
        raise ValueError("truncate to finite precision before inverting")
    m = min(u.coeffs)
    c = u.coeffs[m]
    terms = int(u.precision - m)  # shifted series is certified below this
    if terms <= 0:
        raise InsufficientPrecision("no certified coefficients would remain")
    shifted = {e - m: v for e, v in u.coeffs.items()}
    inv0 = 1 / c
    w: dict[int, Fraction] = {0: inv0}
    for j in range(1, terms):
        s = Fraction(0)
        for i in range(1, j + 1):
            a = shifted.get(i)
            if a is None:
                continue
            b = w.get(j - i)
            if b is not None:
                s += a * b
        wj = -inv0 * s
        if wj:
            w[j] = wj
    return TruncatedSeries({e - m: v for e, v in w.items()}, u.precision - 2 * m)


def default_precision(n: int, spread: int) -> int:
    """Working precision for series arithmetic on rank-n matrices."""
    return 8 * n + spread


# ---------------------------------------------------------------------------
# matrices


class LaurentMatrix:
    """A square matrix of Laurent polynomials."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[LaurentPoly]]):
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        for r in self.rows:
            if len(r) != self.n:
                raise ValueError("matrix must be square")
            for entry in r:
                if not isinstance(entry, LaurentPoly):
                    raise TypeError(f"entry {entry!r} is not a LaurentPoly")

    @classmethod
    def identity(cls, n: int) -> LaurentMatrix:
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[LaurentPoly]) -> LaurentMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def from_scalars(cls, rows: Sequence[Sequence[Scalar]]) -> LaurentMatrix:
        return cls([[LaurentPoly.const(v) for v in r] for r in rows])

    def entry(self, i: int, j: int) -> LaurentPoly:
        return self.rows[i][j]

    def __matmul__(self, other: LaurentMatrix) -> LaurentMatrix:
        if self.n != other.n:
            raise ValueError(f"sizes {self.n} and {other.n} differ")
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = ZERO
                for k in range(n):
                    a = self.rows[i][k]
                    if a.is_zero():
                        continue
                    b = other.rows[k][j]
                    if b.is_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return LaurentMatrix(out)

    def __add__(self, other: LaurentMatrix) -> LaurentMatrix:
        if self.n != other.n:
            raise ValueError(f"sizes {self.n} and {other.n} differ")
        return LaurentMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: LaurentMatrix) -> LaurentMatrix:
        if self.n != other.n:
            raise ValueError(f"sizes {self.n} and {other.n} differ")
        return LaurentMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def scale(self, c: LaurentPoly | Scalar) -> LaurentMatrix:
        return LaurentMatrix([[e * c for e in r] for r in self.rows])

    def transpose(self) -> LaurentMatrix:
        return LaurentMatrix(list(zip(*self.rows)))

    def is_constant(self) -> bool:
        return all(e.is_zero() or (e.order() == 0 == e.degree()) for r in self.rows for e in r)

    def span(self) -> int:
        exps = [e for r in self.rows for entry in r for e in entry._c]
        return int(max(exps) - min(exps)) if exps else 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in r) for r in self.rows)
        return f"LaurentMatrix[{body}]"


def det(A: LaurentMatrix) -> LaurentPoly:
    """Exact determinant by subset dynamic programming over columns."""
    n = A.n
    prev: dict[int, LaurentPoly] = {0: ONE}
    for row in range(n):
        cur: dict[int, LaurentPoly] = {}
        for mask, val in prev.items():
            if val.is_zero():
                continue
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                entry = A.rows[row][j]
                if entry.is_zero():
                    continue
                term = val * entry
                if bin(mask & (bit - 1)).count("1") & 1:
                    term = -term
                key = mask | bit
                cur[key] = cur.get(key, ZERO) + term
        prev = cur
    return prev.get((1 << n) - 1, ZERO)


def _minor(A: LaurentMatrix, drop_row: int, drop_col: int) -> LaurentMatrix:
    rows = [
        [e for j, e in enumerate(r) if j != drop_col]
        for i, r in enumerate(A.rows)
        if i != drop_row
    ]
    return LaurentMatrix(rows)


def adjugate(A: LaurentMatrix) -> LaurentMatrix:
    """Exact adjugate: A @ adjugate(A) == det(A) * identity."""
    n = A.n
    if n == 1:
        return LaurentMatrix([[ONE]])
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            c = det(_minor(A, j, i))
            out[i][j] = c if (i + j) % 2 == 0 else -c
    return LaurentMatrix(out)


# ---------------------------------------------------------------------------
# generator lifts


def lift_simple(n: int, i: int) -> LaurentMatrix:
    """Canonical matrix lift of the generator s_i.

    For i >= 1 the lift is the signed permutation with +1 above and -1
    below the diagonal in the (i, i+1) block.  For i = 0 the corner
    entries carry t**-1 and -t.
    """
    _check_rank(n)
    if not 0 <= i < n:
        raise ValueError(f"generator index {i} out of range for rank {n}")
    rows = [[ONE if a == b else ZERO for b in range(n)] for a in range(n)]
    if i == 0:
        rows[0][0] = ZERO
        rows[n - 1][n - 1] = ZERO
        rows[0][n - 1] = T_INV
        rows[n - 1][0] = LaurentPoly.t_power(1, -1)
    else:
        rows[i - 1][i - 1] = ZERO
        rows[i][i] = ZERO
        rows[i - 1][i] = ONE
        rows[i][i - 1] = LaurentPoly.const(-1)
    return LaurentMatrix(rows)


def lift_word(word: Word) -> LaurentMatrix:
    """Product of generator lifts, leftmost letter first."""
    M = LaurentMatrix.identity(word.n)
    for i in word.letters:
        M = M @ lift_simple(word.n, i)
    return M


# ---------------------------------------------------------------------------
# series matrices (lists of lists of TruncatedSeries)

SeriesMatrix = list  # list[list[TruncatedSeries]]


def series_matrix(A: LaurentMatrix) -> list[list[TruncatedSeries]]:
    return [[as_series(e) for e in r] for r in A.rows]


def series_matmul(
    A: Sequence[Sequence[TruncatedSeries]], B: Sequence[Sequence[TruncatedSeries]]
) -> list[list[TruncatedSeries]]:
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc: TruncatedSeries | None = None
            for k in range(n):
                term = A[i][k] * B[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        out.append(row)
    return out


def series_det(A: Sequence[Sequence[TruncatedSeries]]) -> TruncatedSeries:
    """Determinant in truncated arithmetic, same subset scheme as ``det``."""
    n = len(A)
    prev: dict[int, TruncatedSeries] = {0: as_series(ONE)}
    for row in range(n):
        cur: dict[int, TruncatedSeries] = {}
        for mask, val in prev.items():
            for j in range(n):
                bit = 1 << j
                if mask & bit:
                    continue
                term = val * A[row][j]
                if bin(mask & (bit - 1)).count("1") & 1:
                    term = -term
                key = mask | bit
                cur[key] = term if key not in cur else cur[key] + term
        prev = cur
    return prev[(1 << n) - 1]


# ---------------------------------------------------------------------------
# JSON matrix format


def poly_to_json(f: LaurentPoly) -> dict[str, str]:
    return {str(e): str(v) for e, v in sorted(f.items())}


def poly_from_json(d: Mapping[str, str]) -> LaurentPoly:
    return LaurentPoly({int(e): Fraction(v) for e, v in d.items()})


def matrix_to_json(A: LaurentMatrix) -> dict[str, Any]:
    return {"n": A.n, "entries": [[poly_to_json(e) for e in r] for r in A.rows]}


def matrix_from_json(data: Mapping[str, Any]) -> LaurentMatrix:
    n = int(data["n"])
    entries = data["entries"]
    if len(entries) != n or any(len(r) != n for r in entries):
        raise ValueError("entry grid does not match declared size")
    return LaurentMatrix([[poly_from_json(e) for e in r] for r in entries])
