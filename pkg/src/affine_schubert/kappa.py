"""The distinguished translation element and its structural checks.

kappa(n, d) is the product of two factors: a finite block rotation
sending positions 1..d to the top values, and an affine factor whose
letters avoid d and therefore lie in a relabeled copy of the finite
subgroup.  The concatenated word is reduced, the length is 2d(n-d), and
the canonical matrix lift is diagonal with t on the first d entries and
t^{-1} on the last d, up to a recorded sign torus.

Each check_* function verifies one structural identity and returns a
CheckReport; the *_random variants drive the same identities over seeded
samples of the relevant coset quotients.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .affine_weyl import (
    AffinePermutation,
    GeneratorSet,
    Word,
    act_on_root,
    bruhat_leq,
    descent_right,
    from_word,
    identity,
    is_reduced,
    length,
    min_coset_rep,
    multiply,
    reduced_word,
    right_mul_simple,
    simple,
    simple_root,
)
from .laurent import ONE, T, T_INV, LaurentMatrix, lift_word
from .reports import FAIL, PASS, CheckReport


class InvalidParams(ValueError):
    """Block parameter out of range: need 1 <= d and 2d <= n."""


class PreconditionViolated(ValueError):
    """Input is not a minimal representative of the stated quotient."""


def _check_params(n: int, d: int) -> None:
    if not (isinstance(n, int) and isinstance(d, int) and 1 <= d and 2 * d <= n):
        raise InvalidParams(f"need 1 <= d <= n - d, got n={n}, d={d}")


def _standard_parabolic(n: int, d: int) -> GeneratorSet:
    # finite letters omitting d; the right stabilizer for both quotients
    return GeneratorSet(n, frozenset(i for i in range(1, n) if i != d))


def _relabeled_copy(n: int, d: int) -> GeneratorSet:
    # every generator of the relabeled finite copy
    return GeneratorSet(n, frozenset(i for i in range(n) if i != d))


def relabeled_letter(n: int, d: int, p: int) -> int:
    """Ambient index of the p-th generator of the relabeled finite copy.

    The relabeling walks the generator cycle the other way around d:
    p -> d - p below d, the affine letter 0 at d, and n + d - p above.
    It preserves adjacency, so it extends to an isomorphism of the two
    finite subgroups.
    """
    _check_params(n, d)
    if not 1 <= p <= n - 1:
        raise ValueError(f"index {p} out of range for rank {n}")
    if p < d:
        return d - p
    if p == d:
        return 0
    return n + d - p


# ---------------------------------------------------------------------------
# construction


def finite_factor_word(n: int, d: int) -> Word:
    """Word for the block rotation with window (n-d+1, ..., n, 1, ..., n-d)."""
    _check_params(n, d)
    letters: list[int] = []
    for k in range(1, d + 1):
        letters.extend(range(n - d + k - 1, k - 1, -1))
    return Word(n, tuple(letters))


def affine_factor_word(n: int, d: int) -> Word:
    """Word for the affine factor, d runs of length n-d each.

    Every run descends through the high letters, crosses 0, and climbs
    back; when 2d = n the first run's high segment is empty and the run
    starts at 0 directly.  No letter equals d.
    """
    _check_params(n, d)
    letters: list[int] = []
    for k in range(d - 1, -1, -1):
        letters.extend(range(d + k + 1, n))
        letters.append(0)
        letters.extend(range(1, k + 1))
    return Word(n, tuple(letters))


@dataclass(frozen=True)
class KappaData:
    """The distinguished element, both factors, and its diagonal lift."""

    n: int
    d: int
    finite_word: Word
    affine_word: Word
    word: Word
    finite_part: AffinePermutation
    affine_part: AffinePermutation
    element: AffinePermutation
    matrix: LaurentMatrix


def build_kappa(n: int, d: int) -> KappaData:
    fw = finite_factor_word(n, d)
    aw = affine_factor_word(n, d)
    word = Word(n, fw.letters + aw.letters)
    fp = from_word(fw)
    ap = from_word(aw)
    diag = [T] * d + [ONE] * (n - 2 * d) + [T_INV] * d
    return KappaData(
        n, d, fw, aw, word, fp, ap, multiply(fp, ap), LaurentMatrix.diagonal(diag)
    )


# ---------------------------------------------------------------------------
# deterministic checks


def check_dimension(n: int, d: int) -> CheckReport:
    """Length of the element equals 2d(n-d), as does its word."""
    data = build_kappa(n, d)
    expected = 2 * d * (n - d)
    ell = length(data.element)
    if ell == expected == len(data.word):
        return CheckReport("dimension", n, d, PASS)
    return CheckReport(
        "dimension",
        n,
        d,
        FAIL,
        {"length": ell, "word_length": len(data.word), "expected": expected},
    )


def check_reduced_expression(n: int, d: int) -> CheckReport:
    """The concatenated word is reduced, under both definitions."""
    data = build_kappa(n, d)
    scan = is_reduced(data.word)
    ell = length(from_word(data.word))
    if scan and ell == len(data.word):
        return CheckReport("reduced_expression", n, d, PASS)
    return CheckReport(
        "reduced_expression",
        n,
        d,
        FAIL,
        {"scan": scan, "length": ell, "word": list(data.word.letters)},
    )


def validate_quotient_pair(
    y1: AffinePermutation, y2: AffinePermutation, n: int, d: int
) -> None:
    """Require both factors to be minimal representatives of their quotients."""
    _check_params(n, d)
    if y1.n != n or y2.n != n:
        raise PreconditionViolated(f"ranks {y1.n}, {y2.n} do not match n={n}")
    J = _standard_parabolic(n, d)
    if not y1.is_finite:
        raise PreconditionViolated("left factor must be a finite permutation")
    if any(descent_right(y1, j) for j in J):
        raise PreconditionViolated("left factor has a descent inside its parabolic")
    if not min_coset_rep(y2, _relabeled_copy(n, d)).is_identity:
        raise PreconditionViolated("right factor lies outside the relabeled finite copy")
    if any(descent_right(y2, j) for j in J):
        raise PreconditionViolated("right factor has a descent inside its parabolic")


def check_reduced_concatenation(
    y1: AffinePermutation, y2: AffinePermutation, n: int, d: int
) -> CheckReport:
    """Concatenating reduced words of the two factors stays reduced.

    Equivalent to additivity of length on the product.  The scan keeps
    the offending prefix and root as the failure witness.
    """
    validate_quotient_pair(y1, y2, n, d)
    letters = reduced_word(y1).letters + reduced_word(y2).letters
    prefix = identity(n)
    for pos, letter in enumerate(letters):
        image = act_on_root(prefix, simple_root(n, letter))
        if not image.positive:
            witness = {
                "prefix": list(letters[:pos]),
                "letter": letter,
                "root": [image.a, image.b],
                "y1": list(y1.window),
                "y2": list(y2.window),
            }
            return CheckReport("reduced_concatenation", n, d, FAIL, witness)
        prefix = right_mul_simple(prefix, letter)
    return CheckReport("reduced_concatenation", n, d, PASS)


def check_minimal_in_quotient(
    y1: AffinePermutation, y2: AffinePermutation, n: int, d: int
) -> CheckReport:
    """The product has no descent in the two-step stabilizer's letters."""
    validate_quotient_pair(y1, y2, n, d)
    prod = multiply(y1, y2)
    bad = [j for j in _standard_parabolic(n, d) if descent_right(prod, j)]
    if bad:
        witness = {"descents": bad, "y1": list(y1.window), "y2": list(y2.window)}
        return CheckReport("minimal_in_quotient", n, d, FAIL, witness)
    return CheckReport("minimal_in_quotient", n, d, PASS)


def check_intertwining(n: int, d: int) -> CheckReport:
    """Left generators shift through each factor to shifted right generators.

    For the finite part the identities are in plain letters; for the
    affine part the same index pattern holds through the relabeling.
    """
    data = build_kappa(n, d)
    failures = []
    for k in range(1, n - d):
        lhs = multiply(simple(n, k), data.finite_part)
        rhs = multiply(data.finite_part, simple(n, d + k))
        if lhs != rhs:
            failures.append(["finite", k, d + k])
    for l in range(n + 1 - d, n):
        lhs = multiply(simple(n, l), data.finite_part)
        rhs = multiply(data.finite_part, simple(n, l - (n - d)))
        if lhs != rhs:
            failures.append(["finite", l, l - (n - d)])
    for k in range(1, n - d):
        lhs = multiply(simple(n, relabeled_letter(n, d, k)), data.affine_part)
        rhs = multiply(data.affine_part, simple(n, relabeled_letter(n, d, d + k)))
        if lhs != rhs:
            failures.append(["affine", k, d + k])
    for l in range(n + 1 - d, n):
        lhs = multiply(simple(n, relabeled_letter(n, d, l)), data.affine_part)
        rhs = multiply(data.affine_part, simple(n, relabeled_letter(n, d, l - (n - d))))
        if lhs != rhs:
            failures.append(["affine", l, l - (n - d)])
    if failures:
        return CheckReport("intertwining", n, d, FAIL, {"identities": failures})
    return CheckReport("intertwining", n, d, PASS)


def check_commutation(n: int, d: int) -> CheckReport:
    """Generators away from the two break letters commute with the element."""
    data = build_kappa(n, d)
    skip = {d, n - d}
    bad = [
        k
        for k in range(1, n)
        if k not in skip
        and multiply(simple(n, k), data.element)
        != multiply(data.element, simple(n, k))
    ]
    if bad:
        return CheckReport("commutation", n, d, FAIL, {"indices": bad})
    return CheckReport("commutation", n, d, PASS)


def check_left_stability(n: int, d: int) -> CheckReport:
    """Left multiplication by finite generators never leaves the down-set.

    Modulo the stabilizer, the two break letters drop the length
    strictly and every other finite generator fixes the element.
    """
    data = build_kappa(n, d)
    J = _standard_parabolic(n, d)
    ell = length(data.element)
    for k in range(1, n):
        u = min_coset_rep(multiply(simple(n, k), data.element), J)
        if not bruhat_leq(u, data.element):
            return CheckReport(
                "left_stability", n, d, FAIL, {"k": k, "minrep": list(u.window)}
            )
        if k in (d, n - d):
            if not length(u) < ell:
                return CheckReport(
                    "left_stability",
                    n,
                    d,
                    FAIL,
                    {"k": k, "expected": "strict drop", "minrep": list(u.window)},
                )
        elif u != data.element:
            return CheckReport(
                "left_stability",
                n,
                d,
                FAIL,
                {"k": k, "expected": "fixed", "minrep": list(u.window)},
            )
    return CheckReport("left_stability", n, d, PASS)


def check_matrix_lift(n: int, d: int) -> CheckReport:
    """The word's canonical lift is the diagonal matrix up to a sign torus.

    The quotient of the lift by the target diagonal must be constant,
    diagonal, with entries +-1; the signs are recorded in the report.
    """
    data = build_kappa(n, d)
    M = lift_word(data.word)
    inv_diag = [T_INV] * d + [ONE] * (n - 2 * d) + [T] * d
    D = M @ LaurentMatrix.diagonal(inv_diag)
    signs = []
    for i in range(n):
        for j in range(n):
            e = D.rows[i][j]
            if i == j:
                if e == 1:
                    signs.append(1)
                elif e == -1:
                    signs.append(-1)
                else:
                    return CheckReport(
                        "matrix_lift", n, d, FAIL, {"entry": [i, j], "value": str(e)}
                    )
            elif not e.is_zero():
                return CheckReport(
                    "matrix_lift", n, d, FAIL, {"entry": [i, j], "value": str(e)}
                )
    return CheckReport("matrix_lift", n, d, PASS, {"torus": signs})


# ---------------------------------------------------------------------------
# randomized suites


def sample_quotient(
    n: int, d: int, side: str, rng: random.Random
) -> AffinePermutation:
    """Uniform minimal representative for one factor's quotient.

    side "left": the block parabolic quotient of the standard finite
    subgroup, from a uniform shuffle.  side "right": the matching
    quotient of the relabeled copy, reached by rewriting a uniform
    finite permutation through the relabeling.  Fibers of the minimal
    representative map all have the parabolic's size, so both samples
    are uniform on their quotient.
    """
    _check_params(n, d)
    perm = list(range(1, n + 1))
    rng.shuffle(perm)
    w = AffinePermutation(n, tuple(perm))
    J = _standard_parabolic(n, d)
    if side == "left":
        return min_coset_rep(w, J)
    if side != "right":
        raise ValueError(f"unknown side {side!r}")
    letters = tuple(relabeled_letter(n, d, p) for p in reduced_word(w).letters)
    return min_coset_rep(from_word(Word(n, letters)), J)


def check_reduced_concatenation_random(
    n: int, d: int, samples: int, rng: random.Random
) -> CheckReport:
    for idx in range(samples):
        y1 = sample_quotient(n, d, "left", rng)
        y2 = sample_quotient(n, d, "right", rng)
        rep = check_reduced_concatenation(y1, y2, n, d)
        if rep.status == FAIL:
            witness = dict(rep.witness or {})
            witness["sample"] = idx
            return CheckReport("reduced_concatenation_random", n, d, FAIL, witness)
    return CheckReport("reduced_concatenation_random", n, d, PASS, {"samples": samples})


def check_minimal_in_quotient_random(
    n: int, d: int, samples: int, rng: random.Random
) -> CheckReport:
    for idx in range(samples):
        y1 = sample_quotient(n, d, "left", rng)
        y2 = sample_quotient(n, d, "right", rng)
        rep = check_minimal_in_quotient(y1, y2, n, d)
        if rep.status == FAIL:
            witness = dict(rep.witness or {})
            witness["sample"] = idx
            return CheckReport("minimal_in_quotient_random", n, d, FAIL, witness)
    return CheckReport("minimal_in_quotient_random", n, d, PASS, {"samples": samples})
