"""Multi-indices and the two monomial orders used throughout the package.

A multi-index ``alpha`` stands for the monomial ``X_1**alpha[0] * ... *
X_n**alpha[n-1]``.  Two orders matter:

* GLex (graded lexicographic): degree first, ties broken like a dictionary
  with ``X_1`` as the first letter.  Moment matrices are indexed in this order.
* FG (divisibility): ``alpha <= beta`` componentwise, i.e. ``X^alpha`` divides
  ``X^beta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations_with_replacement
from math import comb
from typing import Iterable, Iterator, Sequence

LT, EQ, GT = -1, 0, 1


class MultiIndex(tuple):
    """Immutable exponent vector.

    Subclasses ``tuple`` so instances hash, index dicts and unpack like plain
    tuples.  Ordering operators are deliberately *not* overridden; use
    :func:`glex_compare` or :func:`fg_leq`.
    """

    __slots__ = ()

    def __new__(cls, exponents: Iterable[int] = ()):
        values = tuple(int(e) for e in exponents)
        if any(e < 0 for e in values):
            raise ValueError(f"negative exponent in {values}")
        return super().__new__(cls, values)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def degree(self) -> int:
        return sum(self)

    def __add__(self, other):  # type: ignore[override]
        _check_lengths(self, other)
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        _check_lengths(self, other)
        return MultiIndex(a - b for a, b in zip(self, other))

    def __repr__(self) -> str:
        return f"MultiIndex({format_multiindex(self)})"

    def monomial(self, names: Sequence[str] | None = None) -> str:
        """Render as a monomial, e.g. ``X1^2X2``; the zero index is ``1``."""
        if names is None:
            names = [f"X{i + 1}" for i in range(len(self))]
        parts = []
        for name, e in zip(names, self):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "".join(parts) or "1"

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, i: int) -> "MultiIndex":
        return cls(1 if j == i else 0 for j in range(n))


def _check_lengths(alpha: Sequence[int], beta: Sequence[int]) -> None:
    if len(alpha) != len(beta):
        raise ValueError(
            f"multi-index length mismatch: {len(alpha)} vs {len(beta)}"
        )


def degree(alpha: Sequence[int]) -> int:
    return sum(alpha)


def glex_key(alpha: Sequence[int]) -> tuple:
    """Sort key realising GLex: larger leading exponents come first in a degree."""
    return (sum(alpha), tuple(-a for a in alpha))


def glex_compare(alpha: Sequence[int], beta: Sequence[int]) -> int:
    """Return ``LT``, ``EQ`` or ``GT`` comparing ``alpha`` with ``beta`` in GLex."""
    _check_lengths(alpha, beta)
    ka, kb = glex_key(alpha), glex_key(beta)
    if ka < kb:
        return LT
    if ka > kb:
        return GT
    return EQ


def glex_lt(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    return glex_compare(alpha, beta) == LT


def glex_le(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    return glex_compare(alpha, beta) != GT


def fg_leq(alpha: Sequence[int], beta: Sequence[int]) -> bool:
    """True iff ``X^alpha`` divides ``X^beta``."""
    _check_lengths(alpha, beta)
    return all(a <= b for a, b in zip(alpha, beta))


def lcm_max(alpha: Sequence[int], beta: Sequence[int]) -> MultiIndex:
    """Componentwise maximum: the exponent of ``lcm(X^alpha, X^beta)``."""
    _check_lengths(alpha, beta)
    return MultiIndex(max(a, b) for a, b in zip(alpha, beta))


def indices_of_degree(n: int, k: int) -> Iterator[MultiIndex]:
    """All multi-indices of length ``n`` and degree exactly ``k``, in GLex order."""
    if n == 0:
        if k == 0:
            yield MultiIndex(())
        return
    # Each combination picks k variables with repetition; sorted ascending
    # variable ids give descending exponent of X_1 first, which is GLex.
    for combo in combinations_with_replacement(range(n), k):
        exps = [0] * n
        for var in combo:
            exps[var] += 1
        yield MultiIndex(exps)


@dataclass(frozen=True)
class GLexBasis:
    """All multi-indices of length ``n`` and degree ``<= d`` in GLex order."""

    n: int
    d: int

    @cached_property
    def indices(self) -> tuple[MultiIndex, ...]:
        out: list[MultiIndex] = []
        for k in range(self.d + 1):
            out.extend(indices_of_degree(self.n, k))
        return tuple(out)

    @cached_property
    def position(self) -> dict[MultiIndex, int]:
        return {alpha: i for i, alpha in enumerate(self.indices)}

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.indices)

    def __getitem__(self, i: int) -> MultiIndex:
        return self.indices[i]

    def __contains__(self, alpha: object) -> bool:
        return alpha in self.position

    def index(self, alpha: Sequence[int]) -> int:
        try:
            return self.position[MultiIndex(alpha)]
        except KeyError:
            raise KeyError(
                f"{format_multiindex(alpha)} not in GLex basis n={self.n} d={self.d}"
            ) from None

    def prefix_size(self, r: int) -> int:
        """Number of indices of degree ``<= r`` (they form a prefix)."""
        if r < 0:
            return 0
        return s(self.n, min(r, self.d))

    def truncate(self, r: int) -> "GLexBasis":
        if r > self.d:
            raise ValueError(f"cannot truncate degree {self.d} basis to {r}")
        return GLexBasis(self.n, r)


def s(n: int, d: int) -> int:
    """Dimension of the space of polynomials of degree ``<= d`` in ``n`` variables."""
    return comb(n + d, d)


def enumerate_glex(n: int, d: int) -> GLexBasis:
    return GLexBasis(n, d)


def format_multiindex(alpha: Sequence[int]) -> str:
    return "[" + ",".join(str(a) for a in alpha) + "]"


def parse_multiindex(text: str) -> MultiIndex:
    """Parse the bracketed form ``[2,0,1]``."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"multi-index must be bracketed: {text!r}")
    body = body[1:-1].strip()
    if not body:
        return MultiIndex(())
    try:
        return MultiIndex(int(part) for part in body.split(","))
    except ValueError as exc:
        raise ValueError(f"bad multi-index {text!r}: {exc}") from None
