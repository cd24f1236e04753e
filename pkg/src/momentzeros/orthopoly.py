"""Exact orthogonal polynomials of a positive definite moment matrix.

The basis is held in monic form: row ``alpha`` of ``C`` holds the
coefficients of the monic orthogonal polynomial ``P_alpha`` (``c[alpha][alpha]
== 1``) and ``h[alpha] = <P_alpha, P_alpha>_y``.  The orthonormal polynomials
are ``P_alpha / sqrt(h[alpha])``, so their zero coefficients are exactly the
zeros of ``C``; working with ``(C, h)`` keeps everything rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .exact import Matrix, det_bareiss, format_rational, matmul, transpose
from .measures import Grouping, MomentSequence
from .momentmatrix import MomentMatrix, Polynomial
from .multiindex import GLexBasis, MultiIndex, fg_leq, format_multiindex


class NotPositiveDefiniteError(ValueError):
    """Raised when elimination meets a nonpositive pivot."""


@dataclass(frozen=True)
class OrthoBasis:
    d: int
    basis: GLexBasis
    C: Matrix = field(repr=False)
    h: list[Fraction] = field(repr=False)

    def coefficient(self, alpha: Sequence[int], gamma: Sequence[int]) -> Fraction:
        return self.C[self.basis.index(alpha)][self.basis.index(gamma)]

    def norm(self, alpha: Sequence[int]) -> Fraction:
        return self.h[self.basis.index(alpha)]

    def polynomial(self, alpha: Sequence[int]) -> Polynomial:
        return Polynomial.from_row(self.basis, self.C[self.basis.index(alpha)])

    def polynomials(self) -> list[Polynomial]:
        return [Polynomial.from_row(self.basis, row) for row in self.C]

    def truncate(self, r: int) -> "OrthoBasis":
        k = self.basis.prefix_size(r)
        return OrthoBasis(r, self.basis.truncate(r), [row[:k] for row in self.C[:k]], self.h[:k])

    def gram(self, entries: Sequence[Sequence[Fraction]]) -> Matrix:
        """``C M C^T`` for a matrix in the same basis."""
        return matmul(matmul(self.C, entries), transpose(self.C))

    def to_dict(self) -> dict:
        rows = []
        for i, alpha in enumerate(self.basis):
            rows.append({
                "index": format_multiindex(alpha),
                "norm": format_rational(self.h[i]),
                "coefficients": [
                    [format_multiindex(gamma), format_rational(c)]
                    for gamma, c in zip(self.basis, self.C[i]) if c
                ],
            })
        return {"kind": "ortho_basis", "n": self.basis.n, "d": self.d, "rows": rows}


def gram_schmidt(M: MomentMatrix) -> OrthoBasis:
    """Monic Gram-Schmidt on the monomials in GLex order.

    Each new row is ``X^alpha`` minus its projections on the earlier rows,
    which is an unpivoted LDL^T of ``M`` read backwards.
    """
    size = M.size
    rows: Matrix = []
    m_rows: list[list[Fraction]] = []  # M @ row, cached per row
    h: list[Fraction] = []
    for k in range(size):
        row = [Fraction(0)] * size
        row[k] = Fraction(1)
        for j in range(k):
            # <X^alpha_k, P_j>_y = (M P_j)[k]
            proj = m_rows[j][k]
            if proj:
                f = proj / h[j]
                rj = rows[j]
                for col in range(j + 1):
                    if rj[col]:
                        row[col] -= f * rj[col]
        m_row = [
            sum((mi[c] * row[c] for c in range(k + 1) if row[c]), Fraction(0))
            for mi in M.entries
        ]
        norm = sum((row[c] * m_row[c] for c in range(k + 1) if row[c]), Fraction(0))
        if norm <= 0:
            raise NotPositiveDefiniteError(
                f"nonpositive pivot {norm} at {format_multiindex(M.basis[k])}"
            )
        rows.append(row)
        m_rows.append(m_row)
        h.append(norm)
    return OrthoBasis(M.d, M.basis, rows, h)


def determinantal_polynomial(y: MomentSequence, sigma: Sequence[int]) -> Polynomial:
    """Orthogonal polynomial of index ``sigma`` as a determinant (not normalised).

    Rows are the moment rows ``alpha <gl sigma`` over columns ``beta <=gl
    sigma``; the last row is the monomials themselves.  Expanded along that
    last row with each cofactor computed by fraction-free elimination.
    """
    sigma = MultiIndex(sigma)
    full = GLexBasis(y.n, sigma.degree)
    k = full.index(sigma) + 1
    cols = full.indices[:k]
    numeric = [[y[a + b] for b in cols] for a in cols[:-1]]
    last = k - 1
    terms = {}
    for j, beta in enumerate(cols):
        minor = [row[:j] + row[j + 1:] for row in numeric]
        cof = (-1) ** (last + j) * det_bareiss(minor)
        if cof:
            terms[beta] = cof
    p = Polynomial(y.n, terms)
    if p[sigma] == 0:
        raise NotPositiveDefiniteError(f"singular principal minor below {format_multiindex(sigma)}")
    return p


def laguerre_closed_form(sigma: int, k: int) -> Polynomial:
    """``L_k^(sigma)(x) = sum_j binom(k+sigma, k-j) (-x)^j / j!``."""
    return Polynomial(1, {
        (j,): Fraction((-1) ** j * comb(k + sigma, k - j), factorial(j)) for j in range(k + 1)
    })


def laguerre_product_closed_form(sigma: Sequence[int], alpha: Sequence[int]) -> Polynomial:
    """``prod_j L_{alpha_j}^(sigma_j)(X_j)`` as an ``n``-variable polynomial."""
    if len(sigma) != len(alpha):
        raise ValueError("sigma and alpha lengths differ")
    n = len(alpha)
    out = Polynomial.constant(n)
    for i, (s, a) in enumerate(zip(sigma, alpha)):
        uni = laguerre_closed_form(int(s), int(a))
        lifted = Polynomial(n, {
            tuple(e if v == i else 0 for v in range(n)): c
            for (e,), c in uni.coeffs.items()
        })
        out = out * lifted
    return out


def coeff_sigma_degree(alpha: Sequence[int], beta: Sequence[int], i: int,
                       sigma: Sequence[int] | None = None) -> int:
    """Degree in ``sigma_i`` of the ``X^beta`` coefficient of the Laguerre product.

    The coefficient is sampled at ``sigma_i = 0, ..., alpha_i - beta_i + 2``
    (other entries of ``sigma`` fixed, default 0) and its degree read off the
    forward differences.
    """
    alpha, beta = MultiIndex(alpha), MultiIndex(beta)
    if not fg_leq(beta, alpha):
        raise ValueError(f"{format_multiindex(beta)} does not divide {format_multiindex(alpha)}")
    base = list(sigma) if sigma is not None else [0] * len(alpha)
    samples = []
    for s in range(alpha[i] - beta[i] + 3):
        base[i] = s
        samples.append(laguerre_product_closed_form(base, alpha)[beta])
    deg = _degree_from_differences(samples)
    if deg >= len(samples) - 1:
        raise ValueError("sampling grid too small to determine the degree")
    return deg


def _degree_from_differences(samples: Sequence[Fraction]) -> int:
    """Largest ``k`` with nonzero ``k``-th forward difference at 0, or -1."""
    deg = -1
    diffs = list(samples)
    k = 0
    while diffs:
        if diffs[0] != 0:
            deg = k
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        k += 1
    return deg


def is_fully_triangular(B: OrthoBasis):
    """``c[alpha][gamma] == 0`` whenever ``gamma`` does not divide ``alpha``.

    Returns ``(ok, witnesses)`` with witnesses as ``(alpha, gamma)`` pairs.
    """
    witnesses = []
    for i, alpha in enumerate(B.basis):
        for j in range(i):
            gamma = B.basis[j]
            if B.C[i][j] and not fg_leq(gamma, alpha):
                witnesses.append((alpha, gamma))
    return not witnesses, witnesses


def _check_split(split: Grouping, n: int) -> int:
    """Validate an ``X | Y`` split and return the size of the X block."""
    if len(split.blocks) != 2:
        raise ValueError("split must have exactly two blocks (X, Y)")
    if split.n != n:
        raise ValueError(f"split covers {split.n} variables, basis has {n}")
    if not split.is_contiguous():
        raise ValueError(
            "split blocks must list the variables in order with X first; "
            "permute the moment sequence first"
        )
    return len(split.blocks[0])


def is_conditionally_triangular(B: OrthoBasis, split: Grouping):
    """Triangularity in the Y variables with X treated as a parameter.

    Fails at ``(row, col)`` when ``col <gl row`` has a nonzero coefficient and
    the Y-part of ``col`` does not divide the Y-part of ``row``.
    """
    nx = _check_split(split, B.basis.n)
    witnesses = []
    for i, row_idx in enumerate(B.basis):
        beta = row_idx[nx:]
        for j in range(i):
            col_idx = B.basis[j]
            if B.C[i][j] and not fg_leq(col_idx[nx:], beta):
                witnesses.append((row_idx, col_idx))
    return not witnesses, witnesses
