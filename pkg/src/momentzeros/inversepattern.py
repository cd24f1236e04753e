"""Inverse moment matrices, their exact zero patterns, and the zero predicates.

The inverse is assembled from the monic factorisation ``C M C^T = diag(h)``
as ``Z = C^T diag(1/h) C``, so entry-wise

    z[a][b] = sum_{g >=gl a, b} c[g][a] c[g][b] / h[g].

Support conditions on ``C`` (full or conditional triangularity) therefore
translate into entries whose sum is empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import Matrix, format_rational, is_identity, matmul
from .measures import Grouping, MomentSequence
from .momentmatrix import MomentMatrix, build_moment_matrix
from .multiindex import (
    GLexBasis,
    MultiIndex,
    fg_leq,
    format_multiindex,
    glex_le,
    lcm_max,
)
from .orthopoly import (
    OrthoBasis,
    _check_split,
    gram_schmidt,
    is_conditionally_triangular,
    is_fully_triangular,
)


@dataclass(frozen=True)
class InverseMatrix:
    d: int
    basis: GLexBasis
    entries: Matrix = field(repr=False)
    factor: OrthoBasis | None = field(default=None, repr=False, compare=False)

    def entry(self, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
        return self.entries[self.basis.index(alpha)][self.basis.index(beta)]

    def nested(self, r: int) -> "InverseMatrix":
        """Inverse of ``M_r`` for ``r <= d`` from the truncated factorisation."""
        if r == self.d:
            return self
        if self.factor is None:
            raise ValueError("nested inverses need the factorisation; build via inverse_via_factorization")
        return inverse_via_factorization(self.factor.truncate(r))

    def to_dict(self) -> dict:
        return {
            "kind": "inverse_matrix",
            "n": self.basis.n,
            "d": self.d,
            "indices": [format_multiindex(a) for a in self.basis],
            "rows": [[format_rational(x) for x in row] for row in self.entries],
        }


def inverse_via_factorization(B: OrthoBasis, M: MomentMatrix | None = None) -> InverseMatrix:
    """``Z = C^T diag(1/h) C``; checks ``Z M = I`` when ``M`` is given."""
    size = len(B.basis)
    inv_h = [1 / h for h in B.h]
    Z = [[Fraction(0)] * size for _ in range(size)]
    for g in range(size):
        row = B.C[g]
        nz = [a for a in range(g + 1) if row[a]]
        w = inv_h[g]
        for a in nz:
            ca = row[a] * w
            for b in nz:
                Z[a][b] += ca * row[b]
    inv = InverseMatrix(B.d, B.basis, Z, B)
    if M is not None and not is_identity(matmul(Z, M.entries)):
        raise ArithmeticError("factorisation does not invert the moment matrix")
    return inv


def inverse_of(y: MomentSequence, d: int) -> InverseMatrix:
    M = build_moment_matrix(y, d)
    return inverse_via_factorization(gram_schmidt(M), M)


def expansion_entry(B: OrthoBasis, alpha: Sequence[int], beta: Sequence[int]) -> Fraction:
    """Entry of the inverse summed directly over ``gamma >=gl alpha, beta``."""
    a, b = B.basis.index(alpha), B.basis.index(beta)
    return sum(
        (B.C[g][a] * B.C[g][b] / B.h[g] for g in range(max(a, b), len(B.basis))),
        Fraction(0),
    )


def congenital_zero_predicate(alpha: Sequence[int], beta: Sequence[int], d: int) -> bool:
    """True iff ``lcm(X^alpha, X^beta)`` has degree above ``d``."""
    if sum(alpha) > d or sum(beta) > d:
        raise ValueError(f"indices must have degree <= {d}")
    return lcm_max(alpha, beta).degree > d


def _block_parts(alpha, beta, d, g: Grouping):
    if sum(alpha) > d or sum(beta) > d:
        raise ValueError(f"indices must have degree <= {d}")
    if g.n != len(alpha) or len(alpha) != len(beta):
        raise ValueError(f"grouping of {g.n} variables does not match indices")
    return g.split(alpha), g.split(beta)


def grouped_congenital_predicate(alpha: Sequence[int], beta: Sequence[int], d: int,
                                 g: Grouping) -> bool:
    """True iff no ``gamma`` with blockwise ``gamma_j >=gl alpha_j, beta_j`` has degree ``<= d``.

    The smallest admissible block is the GLex-larger of ``alpha_j`` and
    ``beta_j``, so the test reduces to a sum of blockwise maximum degrees.
    """
    pa, pb = _block_parts(alpha, beta, d, g)
    return sum(max(a.degree, b.degree) for a, b in zip(pa, pb)) > d


def grouped_congenital_bruteforce(alpha: Sequence[int], beta: Sequence[int], d: int,
                                  g: Grouping) -> bool:
    """Same predicate by enumerating every ``gamma`` with ``|gamma| <= d``."""
    pa, pb = _block_parts(alpha, beta, d, g)
    for gamma in GLexBasis(g.n, d):
        parts = g.split(gamma)
        if all(glex_le(a, c) and glex_le(b, c) for a, b, c in zip(pa, pb, parts)):
            return False
    return True


@dataclass(frozen=True)
class ZeroPattern:
    basis: GLexBasis
    zero: list[list[bool]] = field(repr=False)

    def is_zero(self, alpha: Sequence[int], beta: Sequence[int]) -> bool:
        return self.zero[self.basis.index(alpha)][self.basis.index(beta)]

    def pairs(self) -> list[tuple[MultiIndex, MultiIndex]]:
        """Ordered pairs ``(row, col)`` of zero entries."""
        return [
            (self.basis[i], self.basis[j])
            for i in range(len(self.basis)) for j in range(len(self.basis)) if self.zero[i][j]
        ]

    def render(self, names: Sequence[str] | None = None) -> str:
        """``*``/``0`` grid with monomial labels, rows and columns in GLex order."""
        labels = [a.monomial(names) for a in self.basis]
        width = max(len(l) for l in labels)
        head = " " * width + " | " + " ".join(l.rjust(width) for l in labels)
        lines = [head, "-" * len(head)]
        for label, row in zip(labels, self.zero):
            cells = " ".join(("0" if z else "*").rjust(width) for z in row)
            lines.append(f"{label.rjust(width)} | {cells}")
        return "\n".join(lines) + "\n"


def zero_pattern(Z: InverseMatrix) -> ZeroPattern:
    return ZeroPattern(Z.basis, [[x == 0 for x in row] for row in Z.entries])


def predicate_pattern(basis: GLexBasis, predicate) -> list[list[bool]]:
    return [[bool(predicate(a, b)) for b in basis] for a in basis]


def _yparts(basis: GLexBasis, nx: int) -> list[MultiIndex]:
    return [MultiIndex(a[nx:]) for a in basis]


def check_zero_in_inverse(Z: InverseMatrix, split: Grouping, r: int | None = None):
    """Zero-in-the-inverse condition at order ``r`` for the split ``X | Y``.

    For ``Q <=gl P`` with ``|P| <= r``: if every ``G >=gl P`` whose Y-part is
    divisible by ``lcm(Y(P), Y(Q))`` has degree above ``r``, the order-``r``
    inverse must vanish at ``(P, Q)``.  Returns ``(ok, counterexamples)`` where
    each counterexample is ``(P, Q, value)``.
    """
    r = Z.d if r is None else r
    if r > Z.d:
        raise ValueError(f"order {r} exceeds inverse order {Z.d}")
    nx = _check_split(split, Z.basis.n)
    Zr = Z.nested(r)
    basis = Zr.basis
    ys = _yparts(basis, nx)
    size = len(basis)
    bad = []
    for p in range(size):
        for q in range(p + 1):
            need = lcm_max(ys[p], ys[q])
            if any(fg_leq(need, ys[g]) for g in range(p, size)):
                continue
            value = Zr.entries[p][q]
            if value:
                bad.append((basis[p], basis[q], value))
    return not bad, bad


@dataclass
class Report:
    """Outcome of a verification suite, serialisable for the CLI."""

    suite: str
    passed: bool
    instances: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "instances": self.instances, "notes": self.notes}


def _pair(a, b) -> list[str]:
    return [format_multiindex(a), format_multiindex(b)]


def compare_pattern(pattern: ZeroPattern, predicate) -> list[tuple[MultiIndex, MultiIndex, bool]]:
    """Pairs where the zero pattern differs from ``predicate``; ``(a, b, predicted)``."""
    out = []
    for i, a in enumerate(pattern.basis):
        for j, b in enumerate(pattern.basis):
            predicted = bool(predicate(a, b))
            if pattern.zero[i][j] != predicted:
                out.append((a, b, predicted))
    return out


def product_pattern_mismatches(y: MomentSequence, d: int):
    Z = inverse_of(y, d)
    return compare_pattern(zero_pattern(Z), lambda a, b: congenital_zero_predicate(a, b, d))


def _laguerre_zero_table(sigma: tuple[int, ...], d: int) -> list[list[bool]]:
    from .measures import laguerre_product_moments

    return zero_pattern(inverse_of(laguerre_product_moments(sigma, d), d)).zero


def verify_product_pattern(n: int, d: int, sigmas: Iterable[Sequence[int]],
                           extra: Sequence[tuple[str, MomentSequence]] = (),
                           jobs: int = 1) -> Report:
    """Laguerre-product zero patterns against the lcm-degree predicate.

    ``extra`` holds additional labelled sequences (e.g. a tampered control)
    that go through the same comparison.  Pairs the predicate calls nonzero
    but that vanish for every Laguerre sample are reported as anomalies.
    """
    basis = GLexBasis(n, d)
    size = len(basis)
    sigmas = [tuple(int(s) for s in sig) for sig in sigmas]
    if any(len(sig) != n for sig in sigmas):
        raise ValueError(f"every sigma must have length {n}")
    if jobs > 1 and len(sigmas) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            tables = list(pool.map(_laguerre_zero_table, sigmas, [d] * len(sigmas)))
    else:
        tables = [_laguerre_zero_table(sig, d) for sig in sigmas]
    tables += [zero_pattern(inverse_of(y, d)).zero for _, y in extra]
    labels = [f"laguerre sigma={list(sig)}" for sig in sigmas] + [label for label, _ in extra]

    predicted = predicate_pattern(basis, lambda a, b: congenital_zero_predicate(a, b, d))
    instances = []
    passed = True
    for label, table in zip(labels, tables):
        mism = compare_pattern(ZeroPattern(basis, table), lambda a, b: predicted[basis.index(a)][basis.index(b)])
        passed &= not mism
        instances.append({
            "instance": label, "n": n, "d": d, "match": not mism,
            "mismatches": [_pair(a, b) + [("zero" if p else "nonzero") + " predicted"]
                           for a, b, p in mism],
        })
    notes = []
    if sigmas:
        for i in range(size):
            for j in range(size):
                if not predicted[i][j] and all(t[i][j] for t in tables[:len(sigmas)]):
                    notes.append(
                        f"anomaly: pair {format_multiindex(basis[i])}-{format_multiindex(basis[j])} "
                        "zero in every sample but not predicted"
                    )
    return Report("thm31", passed and not notes, instances, notes)


def lcm_side(Z: InverseMatrix) -> tuple[bool, list]:
    """Zero at every ``|max(a, b)| > r`` in every nested inverse, ``r <= d``."""
    bad = []
    for r in range(Z.d + 1):
        Zr = Z.nested(r)
        for i, a in enumerate(Zr.basis):
            for j, b in enumerate(Zr.basis):
                if lcm_max(a, b).degree > r and Zr.entries[i][j] != 0:
                    bad.append((r, a, b))
    return not bad, bad


def verify_full_triangularity_equiv(B: OrthoBasis, d: int | None = None, label: str = "") -> Report:
    d = B.d if d is None else d
    if d < B.d:
        B = B.truncate(d)
    Z = inverse_via_factorization(B)
    lhs, bad = lcm_side(Z)
    rhs, witnesses = is_fully_triangular(B)
    inst = {
        "instance": label, "d": d,
        "inverse_lcm_zeros": lhs, "fully_triangular": rhs, "equivalent": lhs == rhs,
        "nonzero_entries": [[r] + _pair(a, b) for r, a, b in bad],
        "witnesses": [_pair(a, g) for a, g in witnesses],
    }
    return Report("thm51", lhs == rhs, [inst])


def verify_conditional_equiv(B: OrthoBasis, split: Grouping, d: int | None = None,
                             label: str = "") -> Report:
    d = B.d if d is None else d
    if d < B.d:
        B = B.truncate(d)
    Z = inverse_via_factorization(B)
    v_all = True
    counter = []
    for r in range(d + 1):
        ok, bad = check_zero_in_inverse(Z, split, r)
        v_all &= ok
        counter.extend([r] + _pair(p, q) + [format_rational(v)] for p, q, v in bad)
    o_ok, witnesses = is_conditionally_triangular(B, split)
    inst = {
        "instance": label, "d": d, "split": split.format(),
        "zero_in_inverse": v_all, "conditionally_triangular": o_ok,
        "equivalent": v_all == o_ok,
        "counterexamples": counter,
        "witnesses": [_pair(a, g) for a, g in witnesses],
    }
    return Report("thm61", v_all == o_ok, [inst])


def verify_grouped_pattern(y: MomentSequence, d: int, grouping: Grouping,
                           label: str = "") -> Report:
    """Grouped-product zero pattern against the blockwise predicate.

    Also cross-checks the closed-form predicate with brute-force enumeration
    and records whether the predicted zeros are all present (the direction
    that holds for every partially independent functional).
    """
    Z = inverse_of(y, d)
    pat = zero_pattern(Z)
    pred = lambda a, b: grouped_congenital_predicate(a, b, d, grouping)
    mism = compare_pattern(pat, pred)
    brute_mismatch = [
        _pair(a, b) for a in Z.basis for b in Z.basis
        if pred(a, b) != grouped_congenital_bruteforce(a, b, d, grouping)
    ]
    missing_zeros = [(a, b) for a, b, p in mism if p]
    inst = {
        "instance": label, "d": d, "grouping": grouping.format(),
        "pattern_equals_predicate": not mism,
        "predicted_zeros_present": not missing_zeros,
        "closed_form_matches_bruteforce": not brute_mismatch,
        "mismatches": [_pair(a, b) + [("zero" if p else "nonzero") + " predicted"]
                       for a, b, p in mism],
        "bruteforce_disagreements": brute_mismatch,
    }
    return Report("thm41", not mism and not brute_mismatch, [inst])
