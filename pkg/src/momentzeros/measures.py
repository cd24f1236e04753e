"""Exact moment sequences for the built-in measure families.

Every family is normalised to total mass one, so all values are rationals:

* Laguerre products: ``prod_i exp(-x_i) x_i**sigma_i dx_i`` on the orthant.
* The unit disk weighted by ``(1 - x**2 - y**2)**t``.
* Finitely supported (atomic) measures with rational atoms and weights.
* Products of the above across variable blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod
from typing import Iterable, Mapping, Sequence

from .exact import format_rational, parse_rational, rank, to_fraction
from .multiindex import (
    MultiIndex,
    format_multiindex,
    indices_of_degree,
    parse_multiindex,
)


def _all_indices(n: int, order: int):
    for k in range(order + 1):
        yield from indices_of_degree(n, k)


@dataclass(frozen=True)
class MomentSequence:
    """Table ``alpha -> y_alpha`` defined for every ``|alpha| <= order``."""

    n: int
    order: int
    values: Mapping[MultiIndex, Fraction] = field(repr=False)
    normalized: bool = True

    def __post_init__(self):
        clean = {}
        for alpha, v in self.values.items():
            alpha = MultiIndex(alpha)
            if len(alpha) != self.n:
                raise ValueError(f"index {format_multiindex(alpha)} has wrong length for n={self.n}")
            if alpha.degree <= self.order:
                clean[alpha] = to_fraction(v)
        for alpha in _all_indices(self.n, self.order):
            if alpha not in clean:
                raise ValueError(f"moment {format_multiindex(alpha)} missing (order {self.order})")
        if self.normalized and clean[MultiIndex.zero(self.n)] != 1:
            raise ValueError("normalized sequence must have y_0 = 1")
        object.__setattr__(self, "values", clean)

    def __getitem__(self, alpha: Sequence[int]) -> Fraction:
        alpha = MultiIndex(alpha)
        if len(alpha) != self.n:
            raise ValueError(f"index {format_multiindex(alpha)} has wrong length for n={self.n}")
        try:
            return self.values[alpha]
        except KeyError:
            raise KeyError(
                f"moment {format_multiindex(alpha)} beyond order {self.order}"
            ) from None

    def __eq__(self, other):
        if not isinstance(other, MomentSequence):
            return NotImplemented
        return (self.n, self.order, dict(self.values)) == (other.n, other.order, dict(other.values))

    def __hash__(self):
        return hash((self.n, self.order, frozenset(self.values.items())))

    def truncate(self, order: int) -> "MomentSequence":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return MomentSequence(self.n, order, self.values, self.normalized)

    def to_dict(self) -> dict:
        entries = [
            [format_multiindex(alpha), format_rational(self.values[alpha])]
            for alpha in _all_indices(self.n, self.order)
        ]
        return {
            "kind": "moment_sequence",
            "n": self.n,
            "order": self.order,
            "normalized": self.normalized,
            "entries": entries,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "MomentSequence":
        values = {parse_multiindex(k): parse_rational(v) for k, v in data["entries"]}
        return cls(int(data["n"]), int(data["order"]), values, bool(data.get("normalized", True)))


@dataclass(frozen=True)
class AtomicMeasure:
    """Probability measure on finitely many rational points."""

    points: tuple[tuple[Fraction, ...], ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        points = tuple(tuple(to_fraction(c) for c in p) for p in self.points)
        weights = tuple(to_fraction(w) for w in self.weights)
        if not points:
            raise ValueError("atomic measure needs at least one atom")
        if len(points) != len(weights):
            raise ValueError(f"{len(points)} points but {len(weights)} weights")
        if len({len(p) for p in points}) != 1:
            raise ValueError("all atoms must have the same dimension")
        if any(w <= 0 for w in weights):
            raise ValueError("weights must be positive")
        if sum(weights) != 1:
            raise ValueError(f"weights sum to {sum(weights)}, not 1")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return len(self.points[0])

    @classmethod
    def uniform(cls, points: Iterable[Sequence]) -> "AtomicMeasure":
        points = [tuple(p) for p in points]
        return cls(tuple(points), tuple(Fraction(1, len(points)) for _ in points))

    def to_dict(self) -> dict:
        return {
            "kind": "atomic_measure",
            "atoms": [
                {"point": [format_rational(c) for c in p], "weight": format_rational(w)}
                for p, w in zip(self.points, self.weights)
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "AtomicMeasure":
        atoms = data["atoms"]
        return cls(
            tuple(tuple(parse_rational(c) for c in a["point"]) for a in atoms),
            tuple(parse_rational(a["weight"]) for a in atoms),
        )


@dataclass(frozen=True)
class Grouping:
    """Ordered partition of the variable positions ``0..n-1`` into blocks."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        if any(not b for b in blocks):
            raise ValueError("grouping blocks must be nonempty")
        flat = [i for b in blocks for i in b]
        if sorted(flat) != list(range(len(flat))):
            raise ValueError(f"blocks {blocks} do not partition 0..{len(flat) - 1}")
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @classmethod
    def singletons(cls, n: int) -> "Grouping":
        return cls(tuple((i,) for i in range(n)))

    @classmethod
    def single(cls, n: int) -> "Grouping":
        return cls((tuple(range(n)),))

    @classmethod
    def parse(cls, text: str) -> "Grouping":
        """Parse ``1|2,3`` (1-based positions, blocks separated by ``|``)."""
        try:
            return cls(tuple(
                tuple(int(tok) - 1 for tok in part.split(","))
                for part in text.split("|")
            ))
        except ValueError as exc:
            raise ValueError(f"bad grouping {text!r}: {exc}") from None

    def format(self) -> str:
        return "|".join(",".join(str(i + 1) for i in b) for b in self.blocks)

    def split(self, alpha: Sequence[int]) -> tuple[MultiIndex, ...]:
        """Restrict ``alpha`` to each block, in block order."""
        if len(alpha) != self.n:
            raise ValueError(f"index length {len(alpha)} does not match grouping of {self.n}")
        return tuple(MultiIndex(alpha[i] for i in b) for b in self.blocks)

    def is_contiguous(self) -> bool:
        return [i for b in self.blocks for i in b] == list(range(self.n))


def laguerre_product_moments(sigma: Sequence[int], d: int) -> MomentSequence:
    """Normalised moments ``prod_i (alpha_i + sigma_i)! / sigma_i!`` up to order ``2d``."""
    sigma = [int(s) for s in sigma]
    if any(s < 0 for s in sigma):
        raise ValueError("sigma must be natural")
    values = {
        alpha: Fraction(prod(factorial(a + s) // factorial(s) for a, s in zip(alpha, sigma)))
        for alpha in _all_indices(len(sigma), 2 * d)
    }
    return MomentSequence(len(sigma), 2 * d, values)


def univariate(values: Sequence) -> MomentSequence:
    """One-variable sequence from ``[y_0, y_1, ..., y_order]``."""
    vals = [to_fraction(v) for v in values]
    return MomentSequence(
        1, len(vals) - 1, {MultiIndex((k,)): v for k, v in enumerate(vals)}, normalized=vals[0] == 1
    )


def grouped_product_moments(
    grouping: Grouping, blocks: Sequence[MomentSequence], order: int | None = None
) -> MomentSequence:
    """Moments of the product of independent blocks.

    ``blocks[j]`` describes the variables ``grouping.blocks[j]`` in the listed
    order.  ``order`` defaults to the smallest block order.
    """
    if len(blocks) != len(grouping.blocks):
        raise ValueError(f"{len(blocks)} block sequences for {len(grouping.blocks)} blocks")
    for seq, b in zip(blocks, grouping.blocks):
        if seq.n != len(b):
            raise ValueError(f"block {b} has {len(b)} variables but sequence has n={seq.n}")
    available = min(seq.order for seq in blocks)
    if order is None:
        order = available
    elif order > available:
        raise ValueError(f"requested order {order} exceeds block order {available}")
    values = {
        alpha: prod((seq[part] for seq, part in zip(blocks, grouping.split(alpha))), start=Fraction(1))
        for alpha in _all_indices(grouping.n, order)
    }
    return MomentSequence(grouping.n, order, values, all(seq.normalized for seq in blocks))


def product_moments(factors: Sequence[MomentSequence], order: int | None = None) -> MomentSequence:
    """Moments of a product of one-variable factors."""
    if any(f.n != 1 for f in factors):
        raise ValueError("product_moments takes one-variable factors")
    return grouped_product_moments(Grouping.singletons(len(factors)), factors, order)


def atomic_moments(measure: AtomicMeasure, d: int) -> MomentSequence:
    order = 2 * d
    values = {}
    for alpha in _all_indices(measure.n, order):
        values[alpha] = sum(
            (w * prod((c**a for c, a in zip(p, alpha)), start=Fraction(1))
             for p, w in zip(measure.points, measure.weights)),
            Fraction(0),
        )
    return MomentSequence(measure.n, order, values)


def _double_factorial(k: int) -> int:
    return prod(range(k, 0, -2), start=1)


def disk_moment(t: int, alpha: Sequence[int]) -> Fraction:
    """Normalised moment of ``(1 - x^2 - y^2)^t`` on the unit disk.

    In polar form the integral splits into an angular Wallis integral and a
    radial Beta integral; the common factor pi cancels against the mass.
    """
    a, b = alpha
    if a % 2 or b % 2:
        return Fraction(0)
    p, q = a // 2, b // 2
    # (1/2pi) * int cos^2p sin^2q dtheta
    angular = Fraction(_double_factorial(2 * p - 1) * _double_factorial(2 * q - 1),
                       _double_factorial(2 * p + 2 * q))
    # int_0^1 r^(2p+2q+1) (1-r^2)^t dr, divided by its value at p=q=0
    radial = Fraction(factorial(p + q) * factorial(t + 1), factorial(p + q + t + 1))
    return angular * radial


def disk_moments(t: int, d: int) -> MomentSequence:
    if int(t) != t or t < 0:
        # only natural t keeps the moments rational (and is all that is supported)
        raise ValueError(f"disk weight exponent must be a natural number, got {t}")
    values = {alpha: disk_moment(int(t), alpha) for alpha in _all_indices(2, 2 * d)}
    return MomentSequence(2, 2 * d, values)


def perturb_first_coordinate(measure: AtomicMeasure, eps: Sequence) -> AtomicMeasure:
    """Shift the first coordinate of atom ``l`` by ``eps[l]``; results must be distinct."""
    eps = [to_fraction(e) for e in eps]
    if len(eps) != len(measure.points):
        raise ValueError(f"{len(eps)} perturbations for {len(measure.points)} atoms")
    points = tuple((p[0] + e,) + tuple(p[1:]) for p, e in zip(measure.points, eps))
    firsts = [p[0] for p in points]
    if len(set(firsts)) != len(firsts):
        raise ValueError("perturbed first coordinates are not pairwise distinct")
    return AtomicMeasure(points, measure.weights)


def mix(measures: Sequence[AtomicMeasure], lambdas: Sequence) -> AtomicMeasure:
    """Convex combination of atomic measures (atoms are concatenated, not merged)."""
    lambdas = [to_fraction(l) for l in lambdas]
    points, weights = [], []
    for m, lam in zip(measures, lambdas):
        if lam == 0:
            continue
        points.extend(m.points)
        weights.extend(lam * w for w in m.weights)
    return AtomicMeasure(tuple(points), tuple(weights))


def permute_variables(y: MomentSequence, order: Sequence[int]) -> MomentSequence:
    """Reorder variables so that new variable ``k`` is old variable ``order[k]``."""
    if sorted(order) != list(range(y.n)):
        raise ValueError(f"{order} is not a permutation of 0..{y.n - 1}")
    values = {
        MultiIndex(alpha[i] for i in order): v for alpha, v in y.values.items()
    }
    return MomentSequence(y.n, y.order, values, y.normalized)


def is_product_rank_test(y: MomentSequence, d: int):
    """Decide whether ``y_(i,j) = u_i v_j`` for ``0 <= i, j <= d``.

    Returns ``(is_product, u, v)``; ``u`` and ``v`` are ``None`` when the grid
    has rank above one.
    """
    if y.n != 2:
        raise ValueError("rank test is implemented for two variables")
    try:
        grid = [[y[(i, j)] for j in range(d + 1)] for i in range(d + 1)]
    except KeyError as exc:
        raise KeyError(f"grid entries up to degree {2 * d} required: {exc}") from None
    if rank(grid) > 1:
        return False, None, None
    pivot = next(((i, j) for i in range(d + 1) for j in range(d + 1) if grid[i][j] != 0), None)
    if pivot is None:
        zero = [Fraction(0)] * (d + 1)
        return True, zero, list(zero)
    i0, j0 = pivot
    u = [grid[i][j0] for i in range(d + 1)]
    v = [grid[i0][j] / grid[i0][j0] for j in range(d + 1)]
    return True, u, v
