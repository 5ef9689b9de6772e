"""Lattice calculus over the power-series ring inside Laurent-series space.

The columns of a nonsingular Laurent matrix span a full-rank module over
the ring of integral series; this module computes Smith reduction over
that ring, virtual dimension against the standard lattice, containment,
and the orbit cell of a point on the two-step partial flag chain.

All decisions are exact.  Series transforms (which genuinely live in the
completed ring) carry an explicit certified precision instead of being
silently truncated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .affine_weyl import AffinePermutation, GeneratorSet, min_coset_rep
from .laurent import (
    InsufficientPrecision,
    LaurentMatrix,
    LaurentPoly,
    TruncatedSeries,
    adjugate,
    default_precision,
    det,
    series_det,
    series_inv,
    truncate,
)


class SingularMatrix(ValueError):
    """Zero determinant where an invertible matrix is required."""


class NotUnimodular(ValueError):
    """Determinant fails a required unit condition."""


@dataclass(frozen=True)
class Lattice:
    """Full-rank integral span of the columns of a basis matrix."""

    basis: LaurentMatrix

    def __post_init__(self) -> None:
        if det(self.basis).is_zero():
            raise SingularMatrix("basis columns are dependent")

    @property
    def n(self) -> int:
        return self.basis.n

    @classmethod
    def standard(cls, n: int) -> Lattice:
        return cls(LaurentMatrix.identity(n))


def vdim(V: Lattice) -> int:
    """Virtual dimension of V against the standard lattice.

    Equals minus the determinant order of any basis; the definitional
    two-term difference is recovered by ``quotient_dimensions`` applied
    to the Smith exponents of the basis.
    """
    return -int(det(V.basis).order())


def quotient_dimensions(exponents: Sequence[int]) -> tuple[int, int]:
    """(dim V/V∩E, dim E/V∩E) read off the diagonal exponents of V."""
    above = sum(-a for a in exponents if a < 0)
    below = sum(a for a in exponents if a > 0)
    return above, below


def lattice_contains(outer: Lattice, inner: Lattice) -> bool:
    """Exact containment test via valuations of the transition matrix.

    inner ⊆ outer iff B_outer^{-1} B_inner is integral; each entry of
    that inverse has exact order ord(adj(B_outer) B_inner) - ord(det),
    so no series division is needed.
    """
    B, C = outer.basis, inner.basis
    if B.n != C.n:
        raise ValueError(f"sizes {B.n} and {C.n} differ")
    bound = det(B).order()
    prod = adjugate(B) @ C
    return all(e.order() >= bound for row in prod.rows for e in row)


def same_lattice(a: Lattice, b: Lattice) -> bool:
    return lattice_contains(a, b) and lattice_contains(b, a)


# ---------------------------------------------------------------------------
# Smith reduction


@dataclass(frozen=True)
class SmithForm:
    """A = U diag(t^exponents) V with U, V integral of unit determinant."""

    exponents: tuple[int, ...]
    U: tuple[tuple[TruncatedSeries, ...], ...]
    V: tuple[tuple[TruncatedSeries, ...], ...]
    precision: int

    def diagonal(self) -> LaurentMatrix:
        return LaurentMatrix.diagonal(
            [LaurentPoly.t_power(a) for a in self.exponents]
        )


def smith_over_dvr(A: LaurentMatrix, precision: int | None = None) -> SmithForm:
    """Diagonalize A over the valuation ring.

    Pivots of minimal order are cleared without dividing: the target row
    (or column) is first scaled by the unit pivot/t^mu, so intermediate
    entries stay polynomial and the diagonal exponents come out exact
    and ascending.  The transforms are inverted once at the end, as
    series certified below the working precision.
    """
    n = A.n
    work = [list(r) for r in A.rows]
    L = [list(r) for r in LaurentMatrix.identity(n).rows]
    R = [list(r) for r in LaurentMatrix.identity(n).rows]
    for k in range(n):
        pivot = None
        for i in range(k, n):
            for j in range(k, n):
                f = work[i][j]
                if f.is_zero():
                    continue
                key = (f.order(), i, j)
                if pivot is None or key < pivot:
                    pivot = key
        if pivot is None:
            raise SingularMatrix("rank deficit during reduction")
        mu, pi, pj = pivot
        mu = int(mu)
        if pi != k:
            work[k], work[pi] = work[pi], work[k]
            L[k], L[pi] = L[pi], L[k]
        if pj != k:
            for row in work:
                row[k], row[pj] = row[pj], row[k]
            for row in R:
                row[k], row[pj] = row[pj], row[k]
        u = work[k][k].shift(-mu)
        for i in range(k + 1, n):
            f = work[i][k]
            if f.is_zero():
                continue
            c = f.shift(-mu)
            for j in range(n):
                work[i][j] = u * work[i][j] - c * work[k][j]
                L[i][j] = u * L[i][j] - c * L[k][j]
        for j in range(k + 1, n):
            f = work[k][j]
            if f.is_zero():
                continue
            c = f.shift(-mu)
            for i in range(n):
                work[i][j] = u * work[i][j] - c * work[i][k]
                R[i][j] = u * R[i][j] - c * R[i][k]
    exponents = tuple(int(work[k][k].order()) for k in range(n))
    units = [work[k][k].shift(-exponents[k]) for k in range(n)]

    Lm, Rm = LaurentMatrix(L), LaurentMatrix(R)
    if precision is None:
        precision = default_precision(n, A.span() + Lm.span() + Rm.span())
    # det L and det R are units (order 0), so inversion keeps full precision
    inv_dl = series_inv(truncate(det(Lm), precision))
    inv_dr = series_inv(truncate(det(Rm), precision))
    adj_l, adj_r = adjugate(Lm), adjugate(Rm)
    U = tuple(
        tuple(inv_dl.mul_poly(adj_l.rows[i][j] * units[j]) for j in range(n))
        for i in range(n)
    )
    V = tuple(
        tuple(inv_dr.mul_poly(adj_r.rows[i][j]) for j in range(n))
        for i in range(n)
    )
    return SmithForm(exponents, U, V, precision)


# ---------------------------------------------------------------------------
# cell identification


@dataclass(frozen=True)
class ChainPoint:
    """A coset representative of a point on the partial flag chain.

    The block parameter d splits the coordinates into a leading group of
    size d and a trailing group of size n-d; the stabilized pair is the
    standard lattice together with its d-th chain neighbour.
    """

    n: int
    d: int
    M: LaurentMatrix

    def __post_init__(self) -> None:
        if self.M.n != self.n:
            raise ValueError(f"matrix size {self.M.n} does not match n={self.n}")
        if not 1 <= self.d <= self.n - 1:
            raise ValueError(f"block parameter {self.d} out of range for n={self.n}")
        dd = det(self.M)
        if dd.is_zero():
            raise SingularMatrix("chain point matrix is singular")
        if dd.order() != 0:
            raise NotUnimodular(f"determinant order {dd.order()}, need 0")


def quotient_generators(n: int, d: int) -> GeneratorSet:
    """Finite generator indices omitting d: the right stabilizer's letters."""
    return GeneratorSet(n, frozenset(i for i in range(1, n) if i != d))


def relative_position(p: ChainPoint) -> AffinePermutation:
    """Identify the orbit cell of a chain point, as a shortest coset word.

    Gaussian elimination restricted to the allowed operations: row
    combinations must stay integral and triangular at t=0, column
    combinations must keep the lower-left block divisible by t.  Each
    stage pivots on an entry of globally minimal order, preferring
    columns in the leading block and the bottom-most row in the pivot
    column; this makes every elimination coefficient legal.  What
    remains is one monomial per row and column, whose positions and
    orders spell out the window of the cell.
    """
    n, d = p.n, p.d
    work = [list(r) for r in p.M.rows]
    active_rows = set(range(n))
    active_cols = set(range(n))
    pivots = []
    for _ in range(n):
        best = None
        for i in active_rows:
            for j in active_cols:
                f = work[i][j]
                if f.is_zero():
                    continue
                o = f.order()
                if best is None or o < best:
                    best = o
        if best is None:
            raise SingularMatrix("rank deficit during cell elimination")
        mu = int(best)
        cands = [
            (i, j)
            for i in active_rows
            for j in active_cols
            if not work[i][j].is_zero() and work[i][j].order() == mu
        ]
        leading = [c for c in cands if c[1] < d]
        pool = leading or cands
        pj = min(j for _, j in pool)
        pi = max(i for i, j in pool if j == pj)
        u = work[pi][pj].shift(-mu)
        for i in range(n):
            # entries strictly below the pivot have order > mu (bottom-most
            # rule), which keeps the lower-triangular coefficient in tA
            if i == pi:
                continue
            f = work[i][pj]
            if f.is_zero():
                continue
            c = f.shift(-mu)
            for j in range(n):
                work[i][j] = u * work[i][j] - c * work[pi][j]
        for j in range(n):
            # leading-block targets only arise with order > mu (pivot
            # preference), which keeps the block coefficient in tA
            if j == pj:
                continue
            f = work[pi][j]
            if f.is_zero():
                continue
            c = f.shift(-mu)
            for i in range(n):
                work[i][j] = u * work[i][j] - c * work[i][pj]
        active_rows.discard(pi)
        active_cols.discard(pj)
        pivots.append((pi, pj, mu))
    window = [0] * n
    for r, j, lam in pivots:
        window[j] = (r + 1) - lam * n
    w = AffinePermutation(n, tuple(window))
    return min_coset_rep(w, quotient_generators(n, d))


# ---------------------------------------------------------------------------
# parahoric membership


def in_parahoric(h: LaurentMatrix, d: int) -> bool:
    """Integral entries, lower-left block divisible by t, unit determinant."""
    n = h.n
    if not 1 <= d <= n - 1:
        raise ValueError(f"block parameter {d} out of range for n={n}")
    for i in range(n):
        for j in range(n):
            need = 1 if (j < d <= i) else 0
            if h.rows[i][j].order() < need:
                return False
    return det(h).order() == 0


def in_parahoric_series(H: Sequence[Sequence[TruncatedSeries]], d: int) -> bool:
    """Same test on a truncated matrix; refuses to guess outside precision.

    A visible violating coefficient is a certified "no" at any precision.
    A clean-looking entry is only a certified "yes" when the certified
    range covers every exponent the test constrains.
    """
    n = len(H)
    if not 1 <= d <= n - 1:
        raise ValueError(f"block parameter {d} out of range for n={n}")
    for i in range(n):
        for j in range(n):
            s = H[i][j]
            need = 1 if (j < d <= i) else 0
            if any(e < need for e in s.coeffs):
                return False
            if s.precision < need:
                raise InsufficientPrecision(
                    f"entry ({i},{j}) certified below {s.precision}, need {need}"
                )
    dd = series_det(H)
    if any(e < 0 for e in dd.coeffs):
        return False
    if dd.precision < 1:
        raise InsufficientPrecision("determinant certified below 1")
    return 0 in dd.coeffs
