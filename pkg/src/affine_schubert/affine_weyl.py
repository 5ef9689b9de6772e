"""The affine symmetric group in window notation.

An affine permutation of rank n is a bijection w of the integers satisfying

    w(i + n) = w(i) + n   and   sum(w(i) - i for i in 1..n) = 0.

It is stored as the window ``(w(1), ..., w(n))``, which determines w
completely.  These bijections form a Coxeter group generated by reflections
s_0, ..., s_{n-1}, where s_i swaps every pair of integers congruent to
(i, i+1) mod n.  Finite permutations are the elements whose window is a
rearrangement of 1..n; they form the symmetric group generated by
s_1, ..., s_{n-1}.

Real roots are encoded as normalized integer pairs (a, b) with a in [1, n]
and b not congruent to a mod n.  The pair stands for the root pairing
position a with the translate class of b, and is positive exactly when
a < b.  Under this encoding the reflection action on roots is a
two-integer computation, and a word is reduced exactly when every prefix
image of the next letter's root stays positive.

>>> w = from_word(Word(2, (1, 0)))
>>> w.window
(-1, 4)
>>> length(w)
2
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class InvalidRank(ValueError):
    """Rank must be an integer at least 2."""


class InvalidElement(ValueError):
    """Window fails the bijectivity or zero-shift constraints."""


class RankMismatch(ValueError):
    """Operands live in affine groups of different ranks."""


def _check_rank(n: int) -> None:
    if not isinstance(n, int) or n < 2:
        raise InvalidRank(f"rank must be an integer >= 2, got {n!r}")


@dataclass(frozen=True)
class AffinePermutation:
    """An affine permutation, stored by its window ``(w(1), ..., w(n))``."""

    n: int
    window: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_rank(self.n)
        object.__setattr__(self, "window", tuple(self.window))
        n = self.n
        if len(self.window) != n:
            raise InvalidElement(f"window length {len(self.window)} != rank {n}")
        if sorted(v % n for v in self.window) != list(range(n)):
            raise InvalidElement(f"window {self.window} is not a residue system mod {n}")
        if sum(self.window) != n * (n + 1) // 2:
            raise InvalidElement(f"window {self.window} has nonzero total shift")

    def __call__(self, i: int) -> int:
        """Evaluate w at any integer via w(i + n) = w(i) + n."""
        r = (i - 1) % self.n
        return self.window[r] + (i - 1 - r)

    def inverse(self) -> AffinePermutation:
        n = self.n
        win = [0] * n
        for pos in range(1, n + 1):
            v = self.window[pos - 1]
            r = (v - 1) % n
            win[r] = pos - (v - 1 - r)
        return AffinePermutation(n, tuple(win))

    def __mul__(self, other: AffinePermutation) -> AffinePermutation:
        return multiply(self, other)

    @property
    def is_identity(self) -> bool:
        return all(self.window[i] == i + 1 for i in range(self.n))

    @property
    def is_finite(self) -> bool:
        """True when the window is a rearrangement of 1..n."""
        return all(1 <= v <= self.n for v in self.window)

    def __repr__(self) -> str:
        return f"AffinePermutation({self.n}, {self.window})"


@dataclass(frozen=True)
class Word:
    """A word in the generators s_0, ..., s_{n-1}."""

    n: int
    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_rank(self.n)
        object.__setattr__(self, "letters", tuple(self.letters))
        for i in self.letters:
            if not 0 <= i < self.n:
                raise ValueError(f"letter {i} out of range for rank {self.n}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)


@dataclass(frozen=True)
class GeneratorSet:
    """A subset of the generator indices {0, ..., n-1}."""

    n: int
    indices: frozenset[int]

    def __post_init__(self) -> None:
        _check_rank(self.n)
        object.__setattr__(self, "indices", frozenset(self.indices))
        for i in self.indices:
            if not 0 <= i < self.n:
                raise ValueError(f"generator index {i} out of range for rank {self.n}")

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.indices))


def identity(n: int) -> AffinePermutation:
    _check_rank(n)
    return AffinePermutation(n, tuple(range(1, n + 1)))


def simple(n: int, i: int) -> AffinePermutation:
    """The generator s_i.

    >>> simple(2, 0).window
    (0, 3)
    >>> simple(4, 2).window
    (1, 3, 2, 4)
    """
    _check_rank(n)
    if not 0 <= i < n:
        raise ValueError(f"generator index {i} out of range for rank {n}")
    win = list(range(1, n + 1))
    if i == 0:
        win[0] = 0
        win[n - 1] = n + 1
    else:
        win[i - 1], win[i] = win[i], win[i - 1]
    return AffinePermutation(n, tuple(win))


def multiply(u: AffinePermutation, v: AffinePermutation) -> AffinePermutation:
    """The composite i -> u(v(i))."""
    if u.n != v.n:
        raise RankMismatch(f"ranks {u.n} and {v.n} differ")
    return AffinePermutation(u.n, tuple(u(v(i)) for i in range(1, u.n + 1)))


def from_word(word: Word) -> AffinePermutation:
    """Product of the word's generators, leftmost factor applied last.

    >>> from_word(Word(4, (2, 1, 3, 2, 0, 1, 3, 0))).window
    (-3, -2, 7, 8)
    """
    w = identity(word.n)
    for i in word.letters:
        w = right_mul_simple(w, i)
    return w


def left_mul_simple(w: AffinePermutation, i: int) -> AffinePermutation:
    """s_i * w, computed by swapping values in the window."""
    n = w.n
    lo, hi = i % n, (i + 1) % n

    def act(v: int) -> int:
        if v % n == lo:
            return v + 1
        if v % n == hi:
            return v - 1
        return v

    return AffinePermutation(n, tuple(act(v) for v in w.window))


def right_mul_simple(w: AffinePermutation, i: int) -> AffinePermutation:
    """w * s_i, computed by swapping window positions."""
    n = w.n
    win = list(w.window)
    if i == 0:
        win[0], win[n - 1] = w.window[n - 1] - n, w.window[0] + n
    else:
        win[i - 1], win[i] = win[i], win[i - 1]
    return AffinePermutation(n, tuple(win))


# ---------------------------------------------------------------------------
# roots


@dataclass(frozen=True)
class AffineRoot:
    """A real root, normalized so the first index lies in [1, n].

    The pair (a, b) encodes the root displacing position a toward the
    integer b; writing b = j + q*n with j in [1, n], it is the q-th affine
    translate of the finite root moving a to j.  Positive iff a < b.
    """

    n: int
    a: int
    b: int

    def __post_init__(self) -> None:
        _check_rank(self.n)
        if not 1 <= self.a <= self.n:
            raise ValueError(f"first index {self.a} not in [1, {self.n}]")
        if (self.b - self.a) % self.n == 0:
            raise ValueError(f"indices {self.a}, {self.b} are congruent mod {self.n}")

    @property
    def positive(self) -> bool:
        return self.a < self.b

    def negated(self) -> AffineRoot:
        j = (self.b - 1) % self.n + 1
        shift = self.b - j
        return AffineRoot(self.n, j, self.a - shift)

    @property
    def level(self) -> int:
        """Coefficient of the null direction in this root."""
        j = (self.b - 1) % self.n + 1
        return (self.b - j) // self.n


def simple_root(n: int, i: int) -> AffineRoot:
    """The root of the generator s_i; s_0's root is the pair (n, n+1)."""
    _check_rank(n)
    if not 0 <= i < n:
        raise ValueError(f"generator index {i} out of range for rank {n}")
    if i == 0:
        return AffineRoot(n, n, n + 1)
    return AffineRoot(n, i, i + 1)


def act_on_root(w: AffinePermutation, r: AffineRoot) -> AffineRoot:
    """Image of a root, renormalized so the first index lies in [1, n].

    >>> act_on_root(simple(2, 1), AffineRoot(2, 2, 3))
    AffineRoot(n=2, a=1, b=4)
    """
    if w.n != r.n:
        raise RankMismatch(f"ranks {w.n} and {r.n} differ")
    a2, b2 = w(r.a), w(r.b)
    r0 = (a2 - 1) % w.n + 1
    shift = a2 - r0
    return AffineRoot(w.n, r0, b2 - shift)


# ---------------------------------------------------------------------------
# length, reduced words, descents


def length(w: AffinePermutation) -> int:
    """Number of inversions (a, b) with 1 <= a <= n, a < b, w(a) > w(b).

    Any inversion has b - a <= 2 * spread + 1 where spread bounds |w(i) - i|,
    so the scan below is exhaustive.
    """
    n = w.n
    spread = max(abs(w.window[i] - (i + 1)) for i in range(n))
    bound = n * (1 + spread)
    total = 0
    for a in range(1, n + 1):
        wa = w.window[a - 1]
        for b in range(a + 1, a + bound + 1):
            if w(b) < wa:
                total += 1
    return total


def descent_right(w: AffinePermutation, i: int) -> bool:
    """True iff w * s_i is shorter, i.e. w sends the root of s_i negative."""
    if not 0 <= i < w.n:
        raise ValueError(f"generator index {i} out of range for rank {w.n}")
    return w(i) > w(i + 1)


def descent_left(w: AffinePermutation, i: int) -> bool:
    """True iff s_i * w is shorter."""
    winv = w.inverse()
    return winv(i) > winv(i + 1)


def is_reduced(word: Word) -> bool:
    """Prefix-positivity test: each letter's root must stay positive.

    Agrees with ``length(from_word(word)) == len(word)``.
    """
    prefix = identity(word.n)
    for i in word.letters:
        if not act_on_root(prefix, simple_root(word.n, i)).positive:
            return False
        prefix = right_mul_simple(prefix, i)
    return True


def reduced_word(w: AffinePermutation) -> Word:
    """Some reduced word for w, by stripping the smallest right descent."""
    letters: list[int] = []
    x = w
    while not x.is_identity:
        i = next(i for i in range(x.n) if descent_right(x, i))
        x = right_mul_simple(x, i)
        letters.append(i)
    letters.reverse()
    return Word(w.n, tuple(letters))


def min_coset_rep(w: AffinePermutation, J: GeneratorSet) -> AffinePermutation:
    """Minimal representative of w modulo the subgroup generated by J.

    Strips right descents lying in J; the result has none, and is the unique
    shortest element of the right coset w * W_J.
    """
    if w.n != J.n:
        raise RankMismatch(f"ranks {w.n} and {J.n} differ")
    order = sorted(J.indices)
    x = w
    while True:
        j = next((j for j in order if descent_right(x, j)), None)
        if j is None:
            return x
        x = right_mul_simple(x, j)


def bruhat_leq(u: AffinePermutation, w: AffinePermutation) -> bool:
    """Bruhat order comparison via the lifting property.

    Repeatedly cancel a left descent of w, dragging u down with it whenever
    the same generator is a left descent of u.  After length(w) steps both
    sides reach the identity test.
    """
    if u.n != w.n:
        raise RankMismatch(f"ranks {u.n} and {w.n} differ")
    n = u.n
    lu, lw = length(u), length(w)
    while lw > 0:
        if lu > lw:
            return False
        if lu == 0:
            return True
        winv = w.inverse()
        i = next(i for i in range(n) if winv(i) > winv(i + 1))
        uinv = u.inverse()
        if uinv(i) > uinv(i + 1):
            u = left_mul_simple(u, i)
            lu -= 1
        w = left_mul_simple(w, i)
        lw -= 1
    return lu == 0


if __name__ == "__main__":
    import doctest

    doctest.testmod()
