"""Seeded verification suites, one per equivalence being checked.

Each suite takes plain parameters (so it can be driven from a JSON config or
the command line) and returns a :class:`~momentzeros.inversepattern.Report`.
A suite "passes" when the equivalence it checks holds on every instance;
failures are reported, not raised.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Sequence

from .exact import format_rational, inverse, is_identity, matmul
from .inversepattern import (
    Report,
    expansion_entry,
    inverse_via_factorization,
    verify_conditional_equiv,
    verify_full_triangularity_equiv,
    verify_grouped_pattern,
    verify_product_pattern,
)
from .measures import (
    AtomicMeasure,
    Grouping,
    MomentSequence,
    atomic_moments,
    disk_moments,
    grouped_product_moments,
    laguerre_product_moments,
)
from .momentmatrix import build_moment_matrix, is_positive_definite
from .multiindex import GLexBasis, fg_leq, format_multiindex
from .orthopoly import (
    NotPositiveDefiniteError,
    coeff_sigma_degree,
    determinantal_polynomial,
    gram_schmidt,
    laguerre_product_closed_form,
)
from .stats import (
    centered_atomic,
    ci_experiment,
    corollary62_check,
    covariance_block,
    partial_covariance,
    random_atomic_measure,
    zero_partial_covariance_measure,
)


def random_sigmas(n: int, count: int, seed: int, top: int = 5) -> list[tuple[int, ...]]:
    rng = random.Random(seed)
    return [tuple(rng.randint(0, top) for _ in range(n)) for _ in range(count)]


def identity_checks(y: MomentSequence, d: int) -> list[str]:
    """Exact factorisation identities for one instance; returns failure messages.

    ``Z M = I``; ``C M C^T = diag(h)``; every ``Z`` entry equals its expansion
    over ``gamma >=gl alpha, beta``; every nested inverse equals the direct
    inverse of ``M_r``.
    """
    problems = []
    M = build_moment_matrix(y, d)
    B = gram_schmidt(M)
    Z = inverse_via_factorization(B)
    if not is_identity(matmul(Z.entries, M.entries)):
        problems.append("Z M != I")
    G = B.gram(M.entries)
    size = len(B.basis)
    if any(G[i][j] != (B.h[i] if i == j else 0) for i in range(size) for j in range(size)):
        problems.append("C M C^T != diag(h)")
    for i, a in enumerate(B.basis):
        for j, b in enumerate(B.basis):
            if expansion_entry(B, a, b) != Z.entries[i][j]:
                problems.append(f"expansion mismatch at {format_multiindex(a)},{format_multiindex(b)}")
    for r in range(d + 1):
        direct = inverse(M.truncate(r).entries)
        if Z.nested(r).entries != direct:
            problems.append(f"nested inverse mismatch at r={r}")
    return problems


def suite_thm31(n: int, d: int, samples: int = 10, seed: int = 0, jobs: int = 1,
                sigmas: Sequence[Sequence[int]] | None = None) -> Report:
    sigmas = [tuple(s) for s in sigmas] if sigmas else random_sigmas(n, samples, seed)
    rep = verify_product_pattern(n, d, sigmas, jobs=jobs)
    rep.notes.insert(0, f"n={n} d={d} seed={seed}")
    return rep


def suite_thm41(d: int = 3, grouping: str = "1|2,3", sigma: int = 2, t: int = 1) -> Report:
    """Laguerre(sigma) in the first block times the disk(t) on the second."""
    g = Grouping.parse(grouping)
    if [len(b) for b in g.blocks] != [1, 2]:
        raise ValueError("the built-in grouped instance needs blocks of sizes 1 and 2")
    y = grouped_product_moments(g, [laguerre_product_moments((sigma,), d), disk_moments(t, d)])
    return verify_grouped_pattern(y, d, g, label=f"laguerre({sigma}) x disk(t={t})")


def sequence_for(family: str, d: int, sigma: Sequence[int] = (), t: int = 0,
                 atoms: AtomicMeasure | None = None) -> MomentSequence:
    if family == "laguerre":
        return laguerre_product_moments(sigma, d)
    if family == "disk":
        return disk_moments(t, d)
    if family == "atoms":
        if atoms is None:
            raise ValueError("family 'atoms' needs an atomic measure")
        return atomic_moments(atoms, d)
    raise ValueError(f"unknown family {family!r}")


def suite_thm51(family: str, d: int, sigma: Sequence[int] = (), t: int = 0,
                atoms: AtomicMeasure | None = None, seed: int | None = None) -> Report:
    if family == "random":
        atoms = random_atomic_measure(random.Random(seed), 2, 10)
        family = "atoms"
    y = sequence_for(family, d, sigma, t, atoms)
    B = gram_schmidt(build_moment_matrix(y, d))
    label = {"laguerre": f"laguerre sigma={list(sigma)}", "disk": f"disk t={t}"}.get(family, family)
    return verify_full_triangularity_equiv(B, d, label=label)


def suite_thm61(y: MomentSequence, d: int, split: Grouping, label: str = "") -> Report:
    B = gram_schmidt(build_moment_matrix(y, d))
    return verify_conditional_equiv(B, split, d, label=label)


def suite_closed_forms(n_max: int = 2, d: int = 3,
                       sigmas: Sequence[Sequence[int]] = ((0, 0), (1, 2), (3, 5))) -> Report:
    """Monic Laguerre-product closed forms against Gram-Schmidt rows."""
    instances = []
    passed = True
    for n in range(1, n_max + 1):
        for sig in sigmas:
            sig = tuple(sig[:n])
            B = gram_schmidt(build_moment_matrix(laguerre_product_moments(sig, d), d))
            bad = [
                format_multiindex(alpha) for alpha in B.basis
                if laguerre_product_closed_form(sig, alpha).monic() != B.polynomial(alpha)
            ]
            passed &= not bad
            instances.append({"instance": f"n={n} sigma={list(sig)}", "d": d, "mismatches": bad})
    return Report("closed", passed, instances)


def suite_lemma32(n: int = 2, d: int = 3) -> Report:
    instances = []
    passed = True
    for alpha in GLexBasis(n, d):
        for beta in GLexBasis(n, d):
            if not fg_leq(beta, alpha):
                continue
            for i in range(n):
                got = coeff_sigma_degree(alpha, beta, i)
                want = alpha[i] - beta[i]
                if got != want:
                    passed = False
                    instances.append({"alpha": format_multiindex(alpha), "beta": format_multiindex(beta),
                                      "variable": i + 1, "degree": got, "expected": want})
    return Report("lemma32", passed, instances, [f"n={n} |alpha|<={d}"])


def pd_atomic_measures(count: int, seed: int, n: int = 2, d: int = 2, atoms: int = 8,
                       max_tries: int = 100) -> list[AtomicMeasure]:
    """Seeded random atomic measures whose ``M_d`` passes the PD gate."""
    rng = random.Random(seed)
    out = []
    for _ in range(max_tries):
        m = random_atomic_measure(rng, n, atoms)
        if is_positive_definite(build_moment_matrix(atomic_moments(m, d), d)):
            out.append(m)
            if len(out) == count:
                return out
    raise RuntimeError(f"only {len(out)} PD instances in {max_tries} tries")


def suite_determinantal(count: int = 5, seed: int = 0, n: int = 2, d: int = 2,
                        atoms: int = 8) -> Report:
    instances = []
    passed = True
    for k, m in enumerate(pd_atomic_measures(count, seed, n, d, atoms)):
        y = atomic_moments(m, d)
        B = gram_schmidt(build_moment_matrix(y, d))
        bad = [
            format_multiindex(sig) for sig in B.basis
            if determinantal_polynomial(y, sig).monic() != B.polynomial(sig)
        ]
        passed &= not bad
        instances.append({"instance": f"atomic #{k} seed={seed}", "atoms": len(m.points),
                          "mismatches": bad})
    return Report("det", passed, instances)


def engineered_precisions(count: int, seed: int, i: int = 1, j: int = 2, n: int = 3):
    """Random diagonally dominant precision matrices with a zero at ``(i, j)``."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        P = [[Fraction(0)] * n for _ in range(n)]
        for a in range(n):
            for b in range(a + 1, n):
                if (a, b) != (min(i, j), max(i, j)):
                    P[a][b] = P[b][a] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        for a in range(n):
            P[a][a] = sum(abs(x) for x in P[a]) + rng.randint(1, 4)
        out.append(P)
    return out


def suite_cor62(seed: int = 0, count: int = 20, i: int = 1, j: int = 2) -> Report:
    """Engineered zero-partial-covariance instances and generic ones, ``n = 3``.

    On every instance the degree-one triangularity check must agree with
    ``R^{-1}(i, j) == 0``, and the partial covariance must vanish exactly
    when that entry does.  Half the instances are engineered.
    """
    instances = []
    passed = True
    rng = random.Random(seed)
    engineered = engineered_precisions(count // 2, seed, i, j)
    measures = [("engineered", zero_partial_covariance_measure(P)) for P in engineered]
    while len(measures) < count:
        m = centered_atomic(random_atomic_measure(rng, 3, 6))
        if is_positive_definite(build_moment_matrix(atomic_moments(m, 1), 1)):
            measures.append(("generic", m))
    for k, (kind, m) in enumerate(measures):
        y = atomic_moments(m, 1)
        rep = corollary62_check(y, i, j)
        V = covariance_block(build_moment_matrix(y, 1))
        pc = partial_covariance(V, i, j)
        vanish_agree = (pc == 0) == rep["precision_zero"]
        expect = kind == "engineered"
        ok = rep["agree"] and vanish_agree and rep["precision_zero"] == expect
        passed &= ok
        instances.append({
            "instance": f"{kind} #{k}", "precision_zero": rep["precision_zero"],
            "conditionally_triangular": rep["conditionally_triangular"],
            "partial_covariance": format_rational(pc), "agree": rep["agree"],
            "vanishing_agree": vanish_agree, "ok": ok,
        })
    return Report("cor62", passed, instances, [f"seed={seed} pair=({i + 1},{j + 1})"])


def suite_ci(d: int = 1, seed: int = 0, trials: int = 20, atoms: int = 5) -> Report:
    """Look for a conditionally independent measure that violates the inverse condition."""
    rng = random.Random(seed)
    instances = []
    found = None
    for trial in range(trials):
        base = random_atomic_measure(rng, 3, atoms)
        # base coordinates are multiples of 1/4 and 0 < eps < 1/4, so distinct eps
        # cannot make two shifted coordinates collide
        eps = [Fraction(k + 1, 4 * (atoms + 1)) for k in range(atoms)]
        try:
            rep = ci_experiment(base, d, eps)
        except NotPositiveDefiniteError as exc:
            instances.append({"trial": trial, "skipped": str(exc)})
            continue
        entry = {"trial": trial, "conditionally_independent": rep["conditionally_independent"],
                 "zero_in_inverse": rep["zero_in_inverse"], "witnesses": rep["witnesses"],
                 "measure": rep["measure"]}
        instances.append(entry)
        if rep["conditionally_independent"] and not rep["zero_in_inverse"] and rep["witnesses"]:
            found = rep
            break
    notes = [f"d={d} seed={seed} trials={trials}"]
    if found:
        notes.append(f"witness found at trial {len(instances) - 1}")
    return Report("ci", found is not None, instances, notes)


def suite_identities(instances: Sequence[tuple[str, MomentSequence, int]]) -> Report:
    out = []
    passed = True
    for label, y, d in instances:
        problems = identity_checks(y, d)
        passed &= not problems
        out.append({"instance": label, "d": d, "problems": problems})
    return Report("identities", passed, out)


SUITES: dict[str, Callable[..., Report]] = {
    "thm31": suite_thm31,
    "thm41": suite_thm41,
    "thm51": suite_thm51,
    "closed": suite_closed_forms,
    "lemma32": suite_lemma32,
    "det": suite_determinantal,
    "cor62": suite_cor62,
    "ci": suite_ci,
}
