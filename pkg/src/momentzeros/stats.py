"""The degree-one case: covariance, partial covariance and conditional independence.

For a centred sequence ``M_1 = [[1, 0], [0, R]]`` with ``R`` the covariance
matrix, so the lower block of ``M_1^{-1}`` is the precision matrix ``R^{-1}``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod
from typing import Sequence

from .exact import Matrix, format_rational, inverse, matmul, transpose
from .inversepattern import check_zero_in_inverse, inverse_via_factorization
from .measures import (
    AtomicMeasure,
    Grouping,
    MomentSequence,
    atomic_moments,
    perturb_first_coordinate,
    permute_variables,
)
from .momentmatrix import MomentMatrix, build_moment_matrix, is_positive_definite
from .multiindex import MultiIndex, fg_leq, format_multiindex, indices_of_degree
from .orthopoly import gram_schmidt, is_conditionally_triangular


def means(y: MomentSequence) -> list[Fraction]:
    return [y[MultiIndex.unit(y.n, i)] / y[MultiIndex.zero(y.n)] for i in range(y.n)]


def is_centered(y: MomentSequence) -> bool:
    return all(m == 0 for m in means(y))


def center_moments(y: MomentSequence) -> MomentSequence:
    """Moments of ``X - E[X]`` by binomial expansion; the order is preserved."""
    if y.order < 2:
        raise ValueError("centering needs moments up to order 2")
    mu = means(y)
    values = {}
    for k in range(y.order + 1):
        for alpha in indices_of_degree(y.n, k):
            total = Fraction(0)
            for j in range(k + 1):
                for beta in indices_of_degree(y.n, j):
                    if not fg_leq(beta, alpha):
                        continue
                    coeff = prod(comb(a, b) * (-m) ** (a - b) for a, b, m in zip(alpha, beta, mu))
                    if coeff:
                        total += coeff * y[beta]
            values[alpha] = total
    return MomentSequence(y.n, y.order, values, y.normalized)


@dataclass(frozen=True)
class CovarianceView:
    names: tuple[str, ...]
    R: Matrix = field(repr=False)
    centered: bool = True

    @property
    def n(self) -> int:
        return len(self.names)

    def to_csv(self) -> str:
        lines = ["," + ",".join(self.names)]
        for name, row in zip(self.names, self.R):
            lines.append(name + "," + ",".join(format_rational(x) for x in row))
        return "\n".join(lines) + "\n"


def covariance_block(M1: MomentMatrix, names: Sequence[str] | None = None) -> CovarianceView:
    """Split ``M_1`` of a centred sequence into ``[[1, 0], [0, R]]`` and return ``R``."""
    if M1.d != 1:
        raise ValueError(f"covariance block needs M_1, got M_{M1.d}")
    n = M1.basis.n
    if M1.entries[0][0] != 1:
        raise ValueError("covariance block needs a normalized sequence (y_0 = 1)")
    if any(M1.entries[0][k] for k in range(1, n + 1)):
        raise ValueError("moment sequence is not centered; apply center_moments first")
    names = tuple(names) if names else tuple(f"X{i + 1}" for i in range(n))
    R = [row[1:] for row in M1.entries[1:]]
    return CovarianceView(names, R)


def partial_covariance(V: CovarianceView, i: int, j: int) -> Fraction:
    """``cov(Xi, Xj) - cov(Y, Xi)^T var(Y)^{-1} cov(Y, Xj)`` with ``Y`` the other variables."""
    if i == j:
        raise ValueError("partial covariance needs two distinct variables")
    rest = [k for k in range(V.n) if k not in (i, j)]
    base = V.R[i][j]
    if not rest:
        return base
    var_y = [[V.R[a][b] for b in rest] for a in rest]
    try:
        var_y_inv = inverse(var_y)
    except ZeroDivisionError:
        raise ZeroDivisionError("var(Y) is singular") from None
    cov_i = [[V.R[a][i]] for a in rest]
    cov_j = [[V.R[a][j]] for a in rest]
    correction = matmul(matmul(transpose(cov_i), var_y_inv), cov_j)[0][0]
    return base - correction


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def partial_correlation_report(V: CovarianceView) -> dict:
    """Per pair: precision entry, its vanishing, and the squared partial correlation.

    The partial correlation is ``-P_ij / sqrt(P_ii P_jj)`` with ``P = R^{-1}``;
    it is reported as its sign and exact square.
    """
    try:
        P = inverse(V.R)
    except ZeroDivisionError:
        raise ValueError("covariance matrix is singular") from None
    if not all(p > 0 for p in (P[k][k] for k in range(V.n))):
        raise ValueError("covariance matrix is not positive definite")
    pairs = []
    for i in range(V.n):
        for j in range(i + 1, V.n):
            pij = P[i][j]
            pairs.append({
                "pair": [V.names[i], V.names[j]],
                "precision": format_rational(pij),
                "zero": pij == 0,
                "partial_correlation_sign": -_sign(pij),
                "partial_correlation_squared": format_rational(pij * pij / (P[i][i] * P[j][j])),
            })
    return {"kind": "partial_correlation", "variables": list(V.names), "pairs": pairs}


def _split_for(n: int) -> Grouping:
    return Grouping((tuple(range(n - 2)), (n - 2, n - 1))) if n > 2 else None


def corollary62_check(y: MomentSequence, i: int, j: int) -> dict:
    """Compare ``R^{-1}(i, j) == 0`` with conditional triangularity at degree one.

    Variables are reordered as ``(others..., Xi, Xj)`` so that the pair forms
    the trailing Y block.
    """
    n = y.n
    if n < 2 or i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"bad variable pair ({i}, {j}) for n={n}")
    if not is_centered(y):
        raise ValueError("precision check needs a centered sequence")
    M1 = build_moment_matrix(y, 1)
    if not is_positive_definite(M1):
        raise ValueError("M_1 is not positive definite")
    P = inverse(covariance_block(M1).R)
    precision_zero = P[i][j] == 0

    order = [k for k in range(n) if k not in (i, j)] + [i, j]
    y_perm = permute_variables(y, order)
    B = gram_schmidt(build_moment_matrix(y_perm, 1))
    if n == 2:
        # empty X block: triangularity means P_(0,1) has no X_i term
        split_ok = B.coefficient((0, 1), (1, 0)) == 0
        witnesses = [] if split_ok else [[format_multiindex((0, 1)), format_multiindex((1, 0))]]
    else:
        split_ok, w = is_conditionally_triangular(B, _split_for(n))
        witnesses = [[format_multiindex(a), format_multiindex(b)] for a, b in w]
    return {
        "kind": "precision_check",
        "pair": [i + 1, j + 1],
        "variable_order": [k + 1 for k in order],
        "precision_entry": format_rational(P[i][j]),
        "precision_zero": precision_zero,
        "conditionally_triangular": split_ok,
        "agree": precision_zero == split_ok,
        "witnesses": witnesses,
    }


def zero_partial_covariance_measure(precision: Sequence[Sequence]) -> AtomicMeasure:
    """Centred atomic measure whose covariance is a multiple of ``precision^{-1}``.

    ``R = precision^{-1} = sum_k D_k l_k l_k^T`` (exact LDL^T).  Atoms
    ``+-l_k`` carry weight ``lam * D_k / 2`` and the origin the remainder, so the
    covariance is ``lam * R`` and the zeros of the precision matrix survive.
    """
    P = [[Fraction(x) for x in row] for row in precision]
    R = inverse(P)
    n = len(R)
    L, D = _ldl(R)
    lam = Fraction(1, 2) / sum(D)
    points, weights = [], []
    for k in range(n):
        col = tuple(L[r][k] for r in range(n))
        for s in (1, -1):
            points.append(tuple(s * c for c in col))
            weights.append(lam * D[k] / 2)
    points.append((Fraction(0),) * n)
    weights.append(1 - sum(weights))
    return AtomicMeasure(tuple(points), tuple(weights))


def _ldl(R: Matrix) -> tuple[Matrix, list[Fraction]]:
    n = len(R)
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    D: list[Fraction] = []
    for j in range(n):
        dj = R[j][j] - sum((L[j][k] ** 2 * D[k] for k in range(j)), Fraction(0))
        if dj <= 0:
            raise ValueError("covariance is not positive definite")
        D.append(dj)
        for i in range(j + 1, n):
            L[i][j] = (R[i][j] - sum((L[i][k] * L[j][k] * D[k] for k in range(j)), Fraction(0))) / dj
    return L, D


def ci_experiment(base: AtomicMeasure, d: int, eps: Sequence) -> dict:
    """Perturb the X coordinates apart and test the zero-in-the-inverse condition.

    With pairwise distinct X values each X-fibre is one atom, so ``Y1`` and
    ``Y2`` are conditionally independent given ``X`` by construction.
    """
    if base.n != 3:
        raise ValueError("the experiment works on (X, Y1, Y2)")
    phi = perturb_first_coordinate(base, eps)
    xs = [p[0] for p in phi.points]
    ci = len(set(xs)) == len(xs)
    y = atomic_moments(phi, d)
    M = build_moment_matrix(y, d)
    B = gram_schmidt(M)  # raises NotPositiveDefiniteError when atoms are too few
    Z = inverse_via_factorization(B, M)
    split = Grouping(((0,), (1, 2)))
    v_ok, bad = check_zero_in_inverse(Z, split, d)
    return {
        "kind": "ci_experiment",
        "d": d,
        "measure": phi.to_dict(),
        "conditionally_independent": ci,
        "zero_in_inverse": v_ok,
        "witnesses": [
            [format_multiindex(p), format_multiindex(q), format_rational(v)] for p, q, v in bad
        ],
    }


def random_atomic_measure(rng: random.Random, n: int, atoms: int, span: int = 6,
                          denominator: int = 4) -> AtomicMeasure:
    """Atoms with coordinates ``k / denominator``, ``|k| <= span * denominator``."""
    lim = span * denominator
    points = tuple(
        tuple(Fraction(rng.randint(-lim, lim), denominator) for _ in range(n)) for _ in range(atoms)
    )
    raw = [rng.randint(1, 9) for _ in range(atoms)]
    total = sum(raw)
    return AtomicMeasure(points, tuple(Fraction(w, total) for w in raw))


def centered_atomic(measure: AtomicMeasure) -> AtomicMeasure:
    """Translate the atoms so the measure has mean zero."""
    mu = [sum((w * p[i] for p, w in zip(measure.points, measure.weights)), Fraction(0))
          for i in range(measure.n)]
    return AtomicMeasure(
        tuple(tuple(c - m for c, m in zip(p, mu)) for p in measure.points), measure.weights
    )
