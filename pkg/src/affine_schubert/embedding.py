"""Embedding of nilpotent directions into the partial flag chain.

A nilpotent direction is a d x (n-d) rational block Y sitting in the
upper right corner of an n x n matrix; the attached loop-group point is
the unipotent matrix Id + t^{-1} Y.  This module factors that point
through the distinguished diagonal element (producing an integral frame
on the left and a stabilizer element on the right), embeds framed
directions as chain points, and verifies containment, equivariance, and
injectivity of the construction.

The factorization solver is deterministic.  It follows a fixed order
template: the leading columns and the middle top are free constants, the
middle bottom columns must lie in the kernel of the block, and the
trailing columns are forced by a linear system whose solvability needs
the block to have full rank d.  Rank-deficient directions are refused
with DegenerateInput; their containment is still verified cell by cell.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .affine_weyl import bruhat_leq
from .kappa import build_kappa
from .lattice import (
    ChainPoint,
    NotUnimodular,
    in_parahoric,
    in_parahoric_series,
    relative_position,
)
from .laurent import (
    ONE,
    LaurentMatrix,
    LaurentPoly,
    adjugate,
    default_precision,
    det,
    series_inv,
    truncate,
)
from .reports import FAIL, PASS, VACUOUS, CheckReport


class DegenerateInput(ValueError):
    """The direction is too degenerate for the factorization template."""


class NotConstant(ValueError):
    """A frame matrix must have constant entries."""


# ---------------------------------------------------------------------------
# rational linear algebra on small dense blocks


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    m = [row[:] for row in rows]
    nr = len(m)
    nc = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        pr = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(nr):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def _rank(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    return len(_rref(rows)[1])


def _inverse_rational(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    k = len(rows)
    aug = [list(rows[i]) + [Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    red, pivots = _rref(aug)
    if pivots != list(range(k)):
        raise ValueError("matrix is not invertible")
    return [row[k:] for row in red]


# ---------------------------------------------------------------------------
# nilpotent directions


@dataclass(frozen=True)
class NilpotentBlock:
    """A rational d x (n-d) block in the upper right corner.

    The full matrix is strictly block upper triangular, so its square
    vanishes and Id + t^{-1} Y inverts to Id - t^{-1} Y.
    """

    n: int
    d: int
    block: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if not 1 <= self.d <= self.n - 1:
            raise ValueError(f"block parameter {self.d} out of range for n={self.n}")
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.block)
        object.__setattr__(self, "block", rows)
        if len(rows) != self.d or any(len(r) != self.n - self.d for r in rows):
            raise ValueError(
                f"block shape must be {self.d} x {self.n - self.d}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> NilpotentBlock:
        """Derive (n, d) from the shape: d rows of width n - d."""
        d = len(rows)
        if d == 0 or len(rows[0]) == 0:
            raise ValueError("block must have at least one row and column")
        return cls(d + len(rows[0]), d, tuple(tuple(rows[i]) for i in range(d)))

    @classmethod
    def zero(cls, n: int, d: int) -> NilpotentBlock:
        return cls(n, d, tuple(tuple(Fraction(0) for _ in range(n - d)) for _ in range(d)))

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for row in self.block for v in row)

    def rank(self) -> int:
        return _rank([list(r) for r in self.block])

    def full(self) -> LaurentMatrix:
        """The n x n constant matrix carrying the block."""
        n, d = self.n, self.d
        rows = [[LaurentPoly.zero() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            rows[i][i] = ONE
        for i in range(d):
            for j in range(n - d):
                rows[i][d + j] = LaurentPoly.const(self.block[i][j]) - 0 * ONE
        for i in range(n):
            rows[i][i] = LaurentPoly.zero()
        return LaurentMatrix(rows)


def block_to_json(Y: NilpotentBlock) -> list[list[str]]:
    return [[str(v) for v in row] for row in Y.block]


def block_from_json(data: Sequence[Sequence[str]]) -> NilpotentBlock:
    return NilpotentBlock.from_rows([[Fraction(v) for v in row] for row in data])


def loop_unipotent(Y: NilpotentBlock) -> LaurentMatrix:
    """Id + t^{-1} Y, the loop-group point attached to a direction."""
    n, d = Y.n, Y.d
    rows = [
        [ONE if i == j else LaurentPoly.zero() for j in range(n)] for i in range(n)
    ]
    for i in range(d):
        for j in range(n - d):
            if Y.block[i][j]:
                rows[i][d + j] = LaurentPoly.t_power(-1, Y.block[i][j])
    return LaurentMatrix(rows)


def loop_unipotent_inverse(Y: NilpotentBlock) -> LaurentMatrix:
    """Id - t^{-1} Y; inverse of the loop point since Y squares to zero."""
    n, d = Y.n, Y.d
    rows = [
        [ONE if i == j else LaurentPoly.zero() for j in range(n)] for i in range(n)
    ]
    for i in range(d):
        for j in range(n - d):
            if Y.block[i][j]:
                rows[i][d + j] = LaurentPoly.t_power(-1, -Y.block[i][j])
    return LaurentMatrix(rows)


# ---------------------------------------------------------------------------
# factorization through the diagonal element


@dataclass(frozen=True)
class Factorization:
    """Frames with g . diag = (Id + t^{-1} Y) . h, h in the stabilizer."""

    g: LaurentMatrix
    h: LaurentMatrix
    certified: bool


def factorize(Y: NilpotentBlock) -> Factorization:
    """Factor the loop point of a full-rank direction through the diagonal.

    Assembles g column group by column group: leading columns are a
    standard-vector completion of the kernel, middle bottom columns are
    a kernel basis, and the trailing columns pair a right inverse of the
    block (scaled by t below) with the identity above.  The construction
    makes the constant term of g invertible by design, and the stabilizer
    membership of h is re-verified exactly before returning.

    Any direction of rank below d admits no integral frame at all: the
    trailing columns of the constant term are forced into the image of
    the block, so the determinant vanishes.  Those inputs raise
    DegenerateInput; containment of their chain point is still checkable
    cell by cell.
    """
    n, d = Y.n, Y.d
    if 2 * d > n:
        raise DegenerateInput(f"need 2d <= n for the diagonal element, got n={n}, d={d}")
    w = n - d
    a = [list(r) for r in Y.block]
    aug = [a[i] + [Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    red, pivots = _rref(aug)
    pivots = [p for p in pivots if p < w]
    if len(pivots) < d:
        raise DegenerateInput(
            f"direction has rank {len(pivots)} < {d}; no integral frame exists"
        )
    # right inverse: a @ G1 == Id_d
    G1 = [[Fraction(0)] * d for _ in range(w)]
    for j, p in enumerate(pivots):
        for k in range(d):
            G1[p][k] = red[j][w + k]
    # kernel basis of the block, one column per free coordinate
    free = [c for c in range(w) if c not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * w
        v[f] = Fraction(1)
        for j, p in enumerate(pivots):
            v[p] = -red[j][f]
        kernel.append(v)
    # complete the kernel to a basis of the bottom coordinates with
    # standard vectors; these become the bottom of the leading columns
    chosen: list[list[Fraction]] = []
    for i in range(w):
        cand = [Fraction(int(j == i)) for j in range(w)]
        if _rank(kernel + chosen + [cand]) > len(kernel) + len(chosen):
            chosen.append(cand)
        if len(chosen) == d:
            break

    Z = LaurentPoly.zero()
    g_rows = [[Z for _ in range(n)] for _ in range(n)]
    for j in range(d):
        g_rows[j][j] = ONE
        for m in range(w):
            if chosen[j][m]:
                g_rows[d + m][j] = LaurentPoly.const(chosen[j][m])
    for m, v in enumerate(kernel):
        for r in range(w):
            if v[r]:
                g_rows[d + r][d + m] = LaurentPoly.const(v[r])
    for k in range(d):
        g_rows[k][w + k] = ONE
        for r in range(w):
            if G1[r][k]:
                g_rows[d + r][w + k] = LaurentPoly.t_power(1, G1[r][k])
    g = LaurentMatrix(g_rows)

    kmat = build_kappa(n, d).matrix
    h = loop_unipotent_inverse(Y) @ g @ kmat
    if det(g).order() != 0 or not in_parahoric(h, d):
        raise RuntimeError("factorization template produced an invalid frame")
    if g @ kmat != loop_unipotent(Y) @ h:
        raise RuntimeError("factorization residual is nonzero")
    return Factorization(g, h, True)


# ---------------------------------------------------------------------------
# the embedding map


def embed(g0: LaurentMatrix, Y: NilpotentBlock) -> ChainPoint:
    """Chain point of a framed direction: g0 times the loop point."""
    if g0.n != Y.n:
        raise ValueError(f"frame size {g0.n} does not match n={Y.n}")
    if not g0.is_constant():
        raise NotConstant("frame must have constant entries")
    if det(g0) != ONE:
        raise NotUnimodular("frame determinant must be exactly 1")
    return ChainPoint(Y.n, Y.d, g0 @ loop_unipotent(Y))


def check_containment(Y: NilpotentBlock) -> CheckReport:
    """Cell of the bare loop point sits under the distinguished element."""
    n, d = Y.n, Y.d
    cell = relative_position(embed(LaurentMatrix.identity(n), Y))
    target = build_kappa(n, d).element
    if bruhat_leq(cell, target):
        return CheckReport("containment", n, d, PASS, {"cell": list(cell.window)})
    return CheckReport(
        "containment",
        n,
        d,
        FAIL,
        {"cell": list(cell.window), "target": list(target.window)},
    )


def coset_eq(
    M1: LaurentMatrix, M2: LaurentMatrix, d: int, precision: int | None = None
) -> bool:
    """Whether two unit-order points differ by a stabilizer factor.

    Expands M2^{-1} M1 as a series at tracked precision (adjugate over
    determinant) and tests stabilizer membership; an uncertain decision
    raises instead of guessing.
    """
    if M1.n != M2.n:
        raise ValueError(f"sizes {M1.n} and {M2.n} differ")
    n = M1.n
    d2 = det(M2)
    if d2.order() != 0 or det(M1).order() != 0:
        raise NotUnimodular("both points must have determinant order 0")
    B = adjugate(M2) @ M1
    if precision is None:
        precision = default_precision(n, B.span() + d2.span())
    inv = series_inv(truncate(d2, precision))
    H = [[inv.mul_poly(B.rows[i][j]) for j in range(n)] for i in range(n)]
    return in_parahoric_series(H, d)


def coset_eq_exact(M1: LaurentMatrix, M2: LaurentMatrix, d: int) -> bool:
    """Valuation-only variant of coset_eq, used as a cross-check.

    Every entry of M2^{-1} M1 has exact order ord((adj M2 . M1)_ij) minus
    ord(det M2), and the determinant of the quotient is automatically a
    unit, so the decision needs no series arithmetic at all.
    """
    if M1.n != M2.n:
        raise ValueError(f"sizes {M1.n} and {M2.n} differ")
    n = M1.n
    base = det(M2).order()
    if base != 0 or det(M1).order() != 0:
        raise NotUnimodular("both points must have determinant order 0")
    B = adjugate(M2) @ M1
    for i in range(n):
        for j in range(n):
            need = 1 if (j < d <= i) else 0
            if B.rows[i][j].order() - base < need:
                return False
    return True


def conjugate_block(Y: NilpotentBlock, p: LaurentMatrix) -> NilpotentBlock:
    """Direction transported by a block upper triangular constant frame.

    p^{-1} Y p keeps the corner shape, with new block A^{-1} a C for the
    diagonal blocks A, C of p.
    """
    n, d = Y.n, Y.d
    if p.n != n:
        raise ValueError(f"frame size {p.n} does not match n={n}")
    if not p.is_constant():
        raise NotConstant("frame must have constant entries")
    if any(not p.rows[i][j].is_zero() for j in range(d) for i in range(d, n)):
        raise ValueError("frame must be block upper triangular")
    A = [[p.rows[i][j].constant_term() for j in range(d)] for i in range(d)]
    C = [[p.rows[i][j].constant_term() for j in range(d, n)] for i in range(d, n)]
    Ainv = _inverse_rational(A)
    _inverse_rational(C)  # rejects a singular trailing block
    w = n - d
    aC = [
        [sum(Y.block[i][m] * C[m][j] for m in range(w)) for j in range(w)]
        for i in range(d)
    ]
    new = [
        [sum(Ainv[i][m] * aC[m][j] for m in range(d)) for j in range(w)]
        for i in range(d)
    ]
    return NilpotentBlock(n, d, tuple(tuple(row) for row in new))


def injectivity_witness(
    g1: LaurentMatrix,
    Y1: NilpotentBlock,
    g2: LaurentMatrix,
    Y2: NilpotentBlock,
) -> CheckReport:
    """Recover the relating frame when two embedded points share a coset.

    Unrelated inputs report vacuous.  Coset-equal inputs must satisfy
    two recovery identities: the frame quotient is block upper
    triangular, and it conjugates one direction to the other.  A failure
    here would be a genuine counterexample, so the witness carries the
    full frame quotient.
    """
    n, d = Y1.n, Y1.d
    if (Y2.n, Y2.d) != (n, d):
        raise ValueError("directions live in different cells")
    p1 = embed(g1, Y1)
    p2 = embed(g2, Y2)
    if not coset_eq(p1.M, p2.M, d):
        return CheckReport("injectivity", n, d, VACUOUS)
    h = adjugate(g2) @ g1  # g2^{-1} g1, exact since det g2 = 1
    frame = [[str(h.rows[i][j].constant_term()) for j in range(n)] for i in range(n)]
    if any(not h.rows[i][j].is_zero() for j in range(d) for i in range(d, n)):
        return CheckReport(
            "injectivity", n, d, FAIL, {"reason": "frame not block triangular", "frame": frame}
        )
    conj = adjugate(h) @ Y2.full() @ h  # det h = 1
    if conj != Y1.full():
        return CheckReport(
            "injectivity", n, d, FAIL, {"reason": "directions not conjugate", "frame": frame}
        )
    return CheckReport("injectivity", n, d, PASS, {"frame": frame})


# ---------------------------------------------------------------------------
# random data


def random_block(
    n: int, d: int, rng: random.Random, lo: int = -3, hi: int = 3
) -> NilpotentBlock:
    """Random direction with small integer entries."""
    return NilpotentBlock(
        n,
        d,
        tuple(
            tuple(Fraction(rng.randint(lo, hi)) for _ in range(n - d))
            for _ in range(d)
        ),
    )


def random_generic_block(n: int, d: int, rng: random.Random) -> NilpotentBlock:
    """Random direction of full rank d, resampled until generic."""
    while True:
        Y = random_block(n, d, rng)
        if Y.rank() == d:
            return Y


def _random_shear_product(k: int, rng: random.Random, ops: int) -> list[list[Fraction]]:
    m = [[Fraction(int(i == j)) for j in range(k)] for i in range(k)]
    for _ in range(ops):
        i, j = rng.sample(range(k), 2) if k > 1 else (0, 0)
        if i == j:
            continue
        c = Fraction(rng.randint(-2, 2))
        if c:
            m[i] = [x + c * y for x, y in zip(m[i], m[j])]
    return m


def random_special_constant(n: int, rng: random.Random) -> LaurentMatrix:
    """Random constant frame of determinant one (a product of shears)."""
    return LaurentMatrix.from_scalars(_random_shear_product(n, rng, 3 * n))


def random_parabolic(n: int, d: int, rng: random.Random) -> LaurentMatrix:
    """Random block upper triangular constant frame of determinant one."""
    A = _random_shear_product(d, rng, 3 * d)
    C = _random_shear_product(n - d, rng, 3 * (n - d))
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(d):
        for j in range(d):
            rows[i][j] = A[i][j]
        for j in range(n - d):
            rows[i][d + j] = Fraction(rng.randint(-2, 2))
    for i in range(n - d):
        for j in range(n - d):
            rows[d + i][d + j] = C[i][j]
    return LaurentMatrix.from_scalars(rows)


# ---------------------------------------------------------------------------
# randomized suites


def check_factorization_random(
    n: int, d: int, samples: int, rng: random.Random
) -> CheckReport:
    """Generic directions always factor, with the residual re-checked exactly."""
    kmat = build_kappa(n, d).matrix
    for idx in range(samples):
        Y = random_generic_block(n, d, rng)
        try:
            fac = factorize(Y)
        except DegenerateInput as exc:
            return CheckReport(
                "factorization_random",
                n,
                d,
                FAIL,
                {"sample": idx, "reason": str(exc), "block": block_to_json(Y)},
            )
        residual_ok = fac.g @ kmat == loop_unipotent(Y) @ fac.h
        if not (residual_ok and det(fac.g).order() == 0 and in_parahoric(fac.h, d)):
            return CheckReport(
                "factorization_random",
                n,
                d,
                FAIL,
                {"sample": idx, "residual_ok": residual_ok, "block": block_to_json(Y)},
            )
    return CheckReport("factorization_random", n, d, PASS, {"samples": samples})


def check_containment_random(
    n: int, d: int, samples: int, rng: random.Random
) -> CheckReport:
    for idx in range(samples):
        Y = random_block(n, d, rng)
        rep = check_containment(Y)
        if rep.status == FAIL:
            witness = dict(rep.witness or {})
            witness.update({"sample": idx, "block": block_to_json(Y)})
            return CheckReport("containment_random", n, d, FAIL, witness)
    return CheckReport("containment_random", n, d, PASS, {"samples": samples})


def check_containment_degenerate(
    n: int, d: int, samples: int, rng: random.Random
) -> CheckReport:
    """Containment for directions the factorization solver refuses."""
    specials = [NilpotentBlock.zero(n, d)]
    single = [[Fraction(int(i == 0 and j == 0)) for j in range(n - d)] for i in range(d)]
    specials.append(NilpotentBlock(n, d, tuple(tuple(r) for r in single)))
    cases: list[tuple[str, NilpotentBlock]] = [("special", Y) for Y in specials]
    for idx in range(samples):
        rows = [list(r) for r in random_block(n, d, rng).block]
        rows[idx % d] = [Fraction(0)] * (n - d)  # kill a row: rank < d
        cases.append(("random", NilpotentBlock(n, d, tuple(tuple(r) for r in rows))))
    for idx, (kind, Y) in enumerate(cases):
        rep = check_containment(Y)
        if rep.status == FAIL:
            witness = dict(rep.witness or {})
            witness.update({"sample": idx, "kind": kind, "block": block_to_json(Y)})
            return CheckReport("containment_degenerate", n, d, FAIL, witness)
    return CheckReport(
        "containment_degenerate", n, d, PASS, {"samples": len(cases)}
    )


def check_equivariance_random(
    n: int, d: int, samples: int, rng: random.Random
) -> CheckReport:
    """Moving the frame and conjugating the direction keeps the coset."""
    for idx in range(samples):
        Y = random_block(n, d, rng)
        g0 = random_special_constant(n, rng)
        p = random_parabolic(n, d, rng)
        moved = embed(g0 @ p, conjugate_block(Y, p))
        base = embed(g0, Y)
        if not coset_eq(moved.M, base.M, d):
            return CheckReport(
                "equivariance_random",
                n,
                d,
                FAIL,
                {"sample": idx, "block": block_to_json(Y)},
            )
    return CheckReport("equivariance_random", n, d, PASS, {"samples": samples})


def check_injectivity_related_random(
    n: int, d: int, samples: int, rng: random.Random
) -> CheckReport:
    for idx in range(samples):
        Y2 = random_block(n, d, rng)
        g2 = random_special_constant(n, rng)
        p = random_parabolic(n, d, rng)
        rep = injectivity_witness(g2 @ p, conjugate_block(Y2, p), g2, Y2)
        if rep.status != PASS:
            witness = dict(rep.witness or {})
            witness.update({"sample": idx, "status": rep.status})
            return CheckReport("injectivity_related_random", n, d, FAIL, witness)
    return CheckReport("injectivity_related_random", n, d, PASS, {"samples": samples})


def check_injectivity_unrelated_random(
    n: int, d: int, samples: int, rng: random.Random
) -> CheckReport:
    vacuous = 0
    coincident = 0
    for idx in range(samples):
        rep = injectivity_witness(
            random_special_constant(n, rng),
            random_block(n, d, rng),
            random_special_constant(n, rng),
            random_block(n, d, rng),
        )
        if rep.status == FAIL:
            witness = dict(rep.witness or {})
            witness["sample"] = idx
            return CheckReport("injectivity_unrelated_random", n, d, FAIL, witness)
        if rep.status == VACUOUS:
            vacuous += 1
        else:
            coincident += 1
    return CheckReport(
        "injectivity_unrelated_random",
        n,
        d,
        PASS,
        {"vacuous": vacuous, "coincident": coincident},
    )
