"""Sparse exact polynomials and GLex-indexed truncated moment matrices."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exact import Matrix, format_rational, to_fraction
from .measures import MomentSequence
from .multiindex import GLexBasis, MultiIndex, format_multiindex, glex_key


class Polynomial:
    """Polynomial in ``n`` variables with rational coefficients.

    Stored as a dict ``MultiIndex -> Fraction`` without explicit zeros.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping | Iterable = ()):
        self.n = n
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        clean: dict[MultiIndex, Fraction] = {}
        for alpha, c in items:
            alpha = MultiIndex(alpha)
            if len(alpha) != n:
                raise ValueError(f"index {format_multiindex(alpha)} has wrong length for n={n}")
            c = to_fraction(c)
            total = clean.get(alpha, Fraction(0)) + c
            if total:
                clean[alpha] = total
            else:
                clean.pop(alpha, None)
        self.coeffs = clean

    @classmethod
    def constant(cls, n: int, c=1) -> "Polynomial":
        return cls(n, {MultiIndex.zero(n): c})

    @classmethod
    def monomial(cls, alpha: Sequence[int], c=1) -> "Polynomial":
        return cls(len(alpha), {MultiIndex(alpha): c})

    @classmethod
    def variable(cls, n: int, i: int) -> "Polynomial":
        return cls.monomial(MultiIndex.unit(n, i))

    @classmethod
    def from_row(cls, basis: GLexBasis, row: Sequence) -> "Polynomial":
        return cls(basis.n, zip(basis.indices, row))

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.n != self.n:
                raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")
            return other
        return Polynomial.constant(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        return Polynomial(self.n, list(self.coeffs.items()) + list(other.coeffs.items()))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.n, {a: -c for a, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = to_fraction(other)
            return Polynomial(self.n, {a: c * v for a, v in self.coeffs.items()})
        other = self._coerce(other)
        out: dict[MultiIndex, Fraction] = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                key = a + b
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return Polynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, c):
        return self * (1 / to_fraction(c))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.n == other.n and self.coeffs == other.coeffs
        try:
            return self == self._coerce(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.coeffs.items())))

    def __getitem__(self, alpha: Sequence[int]) -> Fraction:
        return self.coeffs.get(MultiIndex(alpha), Fraction(0))

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def degree(self) -> int:
        return max((a.degree for a in self.coeffs), default=-1)

    def support(self) -> list[MultiIndex]:
        return sorted(self.coeffs, key=glex_key)

    def leading(self) -> tuple[MultiIndex, Fraction]:
        """GLex-largest monomial and its coefficient."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading term")
        alpha = max(self.coeffs, key=glex_key)
        return alpha, self.coeffs[alpha]

    def monic(self) -> "Polynomial":
        return self / self.leading()[1]

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.n:
            raise ValueError(f"point has dimension {len(point)}, polynomial has {self.n} variables")
        x = [to_fraction(p) for p in point]
        total = Fraction(0)
        for alpha, c in self.coeffs.items():
            term = c
            for xi, e in zip(x, alpha):
                if e:
                    term *= xi**e
            total += term
        return total

    def row(self, basis: GLexBasis) -> list[Fraction]:
        """Coefficient vector in ``basis`` order; the support must fit."""
        extra = [a for a in self.coeffs if a not in basis]
        if extra:
            raise ValueError(f"terms {[format_multiindex(a) for a in extra]} outside basis")
        return [self[alpha] for alpha in basis]

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for alpha in self.support():
            c = self.coeffs[alpha]
            mono = alpha.monomial()
            terms.append(str(c) if mono == "1" else f"{c}*{mono}")
        return " + ".join(terms)


def evaluate(p: Polynomial, point: Sequence) -> Fraction:
    return p.evaluate(point)


@dataclass(frozen=True)
class MomentMatrix:
    """``M_d(y)(alpha, beta) = y_{alpha+beta}`` with GLex rows and columns."""

    d: int
    basis: GLexBasis
    entries: Matrix = field(repr=False)
    moments: MomentSequence = field(repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.basis)

    def entry(self, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
        return self.entries[self.basis.index(alpha)][self.basis.index(beta)]

    def truncate(self, r: int) -> "MomentMatrix":
        k = self.basis.prefix_size(r)
        return MomentMatrix(r, self.basis.truncate(r), [row[:k] for row in self.entries[:k]], self.moments)

    def to_dict(self) -> dict:
        return {
            "kind": "moment_matrix",
            "n": self.basis.n,
            "d": self.d,
            "indices": [format_multiindex(a) for a in self.basis],
            "rows": [[format_rational(x) for x in row] for row in self.entries],
        }

    def to_csv(self) -> str:
        return matrix_csv(self.basis, self.entries)


def matrix_csv(basis: GLexBasis, entries: Sequence[Sequence[Fraction]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    labels = [format_multiindex(a) for a in basis]
    writer.writerow([""] + labels)
    for label, row in zip(labels, entries):
        writer.writerow([label] + [format_rational(x) for x in row])
    return buf.getvalue()


def build_moment_matrix(y: MomentSequence, d: int) -> MomentMatrix:
    if y.order < 2 * d:
        raise ValueError(f"moment sequence of order {y.order} cannot fill M_{d} (needs {2 * d})")
    basis = GLexBasis(y.n, d)
    entries = [[y[a + b] for b in basis] for a in basis]
    return MomentMatrix(d, basis, entries, y)


def apply_functional(y: MomentSequence, p: Polynomial) -> Fraction:
    """``L_y(p) = sum_alpha p_alpha y_alpha``."""
    if p.n != y.n:
        raise ValueError(f"polynomial in {p.n} variables, moments in {y.n}")
    if p.degree > y.order:
        raise ValueError(f"degree {p.degree} exceeds moment order {y.order}")
    return sum((c * y[alpha] for alpha, c in p.coeffs.items()), Fraction(0))


def inner_product_y(f: Polynomial, h: Polynomial, M: MomentMatrix) -> Fraction:
    """``<f, M h>`` with ``f`` and ``h`` expanded in the matrix basis."""
    if f.degree > M.d or h.degree > M.d:
        raise ValueError(f"degree exceeds matrix order {M.d}")
    fr, hr = f.row(M.basis), h.row(M.basis)
    total = Fraction(0)
    for i, fi in enumerate(fr):
        if fi:
            total += fi * sum((m * hj for m, hj in zip(M.entries[i], hr) if hj), Fraction(0))
    return total


def ldl_pivots(entries: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Pivots of unpivoted symmetric elimination; stops after the first nonpositive one."""
    n = len(entries)
    work = [list(row) for row in entries]
    pivots: list[Fraction] = []
    for k in range(n):
        p = work[k][k]
        pivots.append(p)
        if p <= 0:
            break
        for i in range(k + 1, n):
            if work[i][k]:
                f = work[i][k] / p
                for j in range(k + 1, n):
                    work[i][j] -= f * work[k][j]
    return pivots


def is_positive_definite(M: MomentMatrix) -> bool:
    pivots = ldl_pivots(M.entries)
    return len(pivots) == M.size and all(p > 0 for p in pivots)
