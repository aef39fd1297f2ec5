"""The release gate: ten end-to-end checks with fixed seeds.

Each criterion returns a :class:`CriterionResult`; ``run_all`` runs them in
order.  Exact checks compare rationals with ``==``; the numeric ones use
their own explicit tolerances.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import asymptotics as asy
from . import exact_poly
from .exact_poly import Poly
from .generalized import (
    MultiIndexSpec,
    SequencePair,
    gen_hermite,
    gen_hermite_expansion,
    multiple_hermite,
    multiple_hermite_phi,
    multiple_orthogonality_defects,
    perturb_term,
    remove_term,
)
from .hermite import (
    CombinationSpec,
    Normalization,
    combination,
    generating_series,
    hermite,
    hermite_explicit,
)
from .roots import analyze
from .zero_analysis import (
    beardon_driver_check,
    family_check,
    monotonicity_probe,
    sign_counts_check,
    threshold_appell,
    turan_appell,
    turan_generalized,
    turan_standard,
    verify_real_rooted_standard,
)

SEED = 20240531


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.number:2d}. {self.title}: {self.detail} ({self.seconds:.2f}s)"

    def to_json(self) -> dict:
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "detail": self.detail}


# --- random inputs ----------------------------------------------------------

def _rng(number: int) -> random.Random:
    return random.Random(SEED + number)


def rand_rational(rng: random.Random, lo: int = -3, hi: int = 3, dens=(1, 2, 3)) -> Fraction:
    d = rng.choice(dens)
    return Fraction(rng.randint(lo * d, hi * d), d)


def random_spec(rng: random.Random, k_max: int = 4) -> CombinationSpec:
    K = rng.randint(1, k_max)
    gamma = [Fraction(1)] + [rand_rational(rng) for _ in range(K - 1)]
    last = Fraction(0)
    while last == 0:
        last = rand_rational(rng)
    return CombinationSpec(gamma + [last])


def real_rooted_spec(rng: random.Random, k_max: int = 4) -> CombinationSpec:
    """P a product of distinct rational linear factors with nonzero roots."""
    K = rng.randint(1, k_max)
    roots: set = set()
    while len(roots) < K:
        r = rand_rational(rng)
        if r:
            roots.add(r)
    P = Poly.from_roots(sorted(roots))
    return CombinationSpec(list(reversed(P.coeffs)))


NONREAL_SPECS = (
    CombinationSpec([1, 0, 1]),               # x^2 + 1
    CombinationSpec([1, 1, 1]),               # x^2 + x + 1
    CombinationSpec([1, -2, 6, -2, 5]),       # (x^2 + 1)(x^2 - 2x + 5)
)


def random_phi(rng: random.Random, n: int) -> list:
    return [rand_rational(rng) for _ in range(n)]


def random_psi(rng: random.Random, n: int) -> list:
    # entries in (-2, 4]
    return [Fraction(rng.randint(-5, 12), 3) for _ in range(n)]


# --- criteria ---------------------------------------------------------------

def backward_shift_identity(n_max: int = 60, budget: float = 5.0) -> tuple[bool, str]:
    start = time.perf_counter()
    p = Poly([1])
    bad = []
    for n in range(n_max + 1):
        if n:
            p = exact_poly.apply_lambda(p)
        if p != hermite_explicit(n) or hermite(n) != hermite_explicit(n):
            bad.append(n)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < budget
    detail = f"n<= {n_max} identical" if not bad else f"mismatch at n={bad[:5]}"
    return ok, f"{detail}, {elapsed:.2f}s (budget {budget}s)"


def generating_function_oracle() -> tuple[bool, str]:
    rng = _rng(2)
    bad = []
    specs = [random_spec(rng) for _ in range(5)]
    for spec in specs:
        series = generating_series(spec, 25)
        if any(series[n] != combination(spec, Normalization.APPELL, n) for n in range(26)):
            bad.append(spec.to_json()["gamma"])
    return not bad, f"5 specs, n<=25, mismatches={bad}"


def standard_real_rooted() -> tuple[bool, str]:
    rng = _rng(3)
    fails = []
    for _ in range(10):
        spec = real_rooted_spec(rng)
        sweep = verify_real_rooted_standard(spec, spec.K, spec.K + 25)
        if not sweep.holds:
            fails.append(spec.to_json()["gamma"])
    sweep = verify_real_rooted_standard(CombinationSpec([1, 0, 1]), 2, 27)
    onset_ok = sweep.onset is not None and sweep.onset <= sweep.bound and sweep.holds
    ok = not fails and onset_ok
    return ok, (f"10 real-rooted specs, failures={fails}; "
                f"gamma=[1,0,1] onset={sweep.onset} bound={sweep.bound}")


def appell_threshold() -> tuple[bool, str]:
    res = threshold_appell(CombinationSpec([1, 0, 1]), 50)
    structure = res.n0 == 2 and res.holds and all(
        res.per_n_reports[n].n_nonreal == 2 and res.per_n_reports[n].n_real == n - 2
        for n in range(2, 51))
    rng = _rng(4)
    nondecreasing = []
    for _ in range(10):
        spec = random_spec(rng)
        z = [analyze(combination(spec, Normalization.APPELL, n), isolate=False).n_nonreal
             for n in range(51)]
        nondecreasing.append(all(b >= a for a, b in zip(z, z[1:])))
    ok = structure and all(nondecreasing)
    return ok, (f"gamma=[1,0,1]: n0={res.n0}, structure {'ok' if structure else res.failures[:2]}; "
                f"nondecreasing non-real counts {sum(nondecreasing)}/10")


def _multi_indices(total_max: int, r: int):
    for n in itertools.product(range(total_max + 1), repeat=r):
        if sum(n) <= total_max:
            yield n


def generalized_suite() -> tuple[bool, str]:
    rng = _rng(5)
    notes = []
    pep_ok = 0
    for _ in range(20):
        seq = SequencePair(random_phi(rng, 15), random_psi(rng, 15))
        rows = family_check(seq, 15)
        if all(r.real_rooted and r.simple and r.interlaces_previous in (None, True) for r in rows):
            pep_ok += 1
    notes.append(f"real-rooted families {pep_ok}/20")

    expansion = removal = perturbation = True
    for _ in range(5):
        phi = random_phi(rng, 13)
        seq = SequencePair(phi)
        for n in range(13):
            if gen_hermite(seq, n) != gen_hermite_expansion(phi, n):
                expansion = False
            for l in range(1, n + 2):
                h = gen_hermite(remove_term(seq, l), n)
                if gen_hermite(seq, n + 1) != exact_poly.apply_lambda(h) + h.scale(seq.phi_at(l)):
                    removal = False
            for l in range(1, n + 1):
                M = rand_rational(rng)
                lhs = gen_hermite(SequencePair(perturb_term(phi, l, M)), n)
                rhs = gen_hermite(seq, n) + gen_hermite(remove_term(seq, l), n - 1).scale(M)
                if lhs != rhs:
                    perturbation = False
    notes.append(f"expansion={expansion} removal={removal} perturbation={perturbation}")

    c_pool = [Fraction(1), Fraction(-1), Fraction(1, 2)]
    multi_bad = 0
    total = 0
    for r in (1, 2, 3):
        for n in _multi_indices(8, r):
            spec = MultiIndexSpec(n, c_pool[:r])
            total += 1
            H = multiple_hermite(spec)
            base = [k for k, n_k in enumerate(n) for _ in range(n_k)]
            same = (H == gen_hermite(SequencePair(multiple_hermite_phi(spec)), spec.total)
                    and H == multiple_hermite(spec, list(reversed(base)))
                    and not multiple_orthogonality_defects(spec, H))
            multi_bad += not same
    notes.append(f"multiple Hermite {total - multi_bad}/{total}")
    ok = pep_ok == 20 and expansion and removal and perturbation and multi_bad == 0
    return ok, "; ".join(notes)


def monotonicity() -> tuple[bool, str]:
    rng = _rng(6)
    ok_count = 0
    for _ in range(10):
        phi = random_phi(rng, 12)
        rho = [p + (rand_rational(rng, 0, 2) if rng.random() < 0.5 else 0) for p in phi]
        if rho == phi:
            rho[rng.randrange(12)] += Fraction(1, 2)
        ok_count += monotonicity_probe(phi, rho, 12, 64)
    return ok_count == 10, f"{ok_count}/10 pairs ordered at 64-bit refinement"


def turan_suite() -> tuple[bool, str]:
    rng = _rng(7)
    gen_ok = 0
    for _ in range(10):
        n = rng.randint(2, 12)
        phi, psi = random_phi(rng, n), random_psi(rng, n)
        phi[n - 1], psi[n - 1] = phi[n - 2], psi[n - 2]
        res = turan_generalized(SequencePair(phi, psi), n)
        gen_ok += res.hypothesis and res.holds and bool(res.prediction_matches)
    std_ok = app_ok = True
    for _ in range(3):
        spec = real_rooted_spec(rng)
        for n in range(spec.K, 21):
            r = turan_standard(spec, n)
            std_ok &= r.holds and bool(r.prediction_matches)
        for n in range(2, 21):
            r = turan_appell(spec, n)
            app_ok &= r.holds and bool(r.prediction_matches)
    fail_ok = 0
    for _ in range(5):
        n = rng.randint(3, 12)
        phi, psi = random_phi(rng, n), random_psi(rng, n)
        psi[n - 1] = psi[n - 2]
        if phi[n - 1] == phi[n - 2]:
            phi[n - 1] += 1
        r = turan_generalized(SequencePair(phi, psi), n)
        fail_ok += (not r.holds) and r.degree == 2 * n - 3 and bool(r.prediction_matches)
    ok = gen_ok == 10 and std_ok and app_ok and fail_ok == 5
    return ok, (f"generalized {gen_ok}/10, standard={std_ok}, appell={app_ok}, "
                f"odd-degree failure mode {fail_ok}/5")


def sign_counts() -> tuple[bool, str]:
    rng = _rng(8)
    onsets = []
    for _ in range(5):
        spec = real_rooted_spec(rng)
        res = sign_counts_check(spec, spec.K, 40)
        onsets.append(res.onset)
    evidence = []
    for spec in NONREAL_SPECS:
        res = sign_counts_check(spec, spec.K, 40)
        even = [r for r in res.rows.values() if r.parity == "even"]
        evidence.append(f"{sum(r.observed[0] == r.observed[1] for r in even)}/{len(even)}")
    ok = all(o is not None for o in onsets)
    return ok, f"onsets {onsets}; conjecture evidence (even n-K balanced) {evidence}"


def _decreasing(errs: Sequence[float]) -> bool:
    return all(b < a or (a <= 1e-30 and b <= 1e-30) for a, b in zip(errs, errs[1:]))


def asymptotics_suite(budget: float = 60.0) -> tuple[bool, str]:
    start = time.perf_counter()
    notes = []
    ok = True
    for x in (0.0, 1.0, math.pi / 2):
        for parity in ("even", "odd"):
            errs = [asy.mehler_heine(n, x, parity).abs_error for n in (10, 20, 40)]
            good = errs[-1] <= 0.05 and _decreasing(errs)
            ok &= good
            if not good:
                notes.append(f"Mehler-Heine x={x:.3f} {parity}: {errs}")
    c = asy.central_zero_check(CombinationSpec([1]), 40, 0, tolerance=0.05)
    e = asy.edge_zero_check(CombinationSpec([1, -1]), 60, tolerance=0.05)
    nr = asy.nonreal_zero_check(CombinationSpec([1, 0, 1]), 60, tolerance=0.05)
    sc = [asy.semicircle_statistic(CombinationSpec(g), 60, "x2", tolerance=0.03)
          for g in ([1], [1, 0, 1])]
    ok &= c.passes and all(x.passes for x in e) and len(nr) == 4 and all(x.passes for x in nr)
    ok &= all(s.passes for s in sc)
    elapsed = time.perf_counter() - start
    ok &= elapsed < budget
    notes.append(f"central err {c.abs_error:.4f}, edge err {e[0].abs_error:.4f}, "
                 f"non-real max err {max(x.abs_error for x in nr):.4f}, "
                 f"semicircle errs {[round(s.abs_error, 4) for s in sc]}, {elapsed:.1f}s")
    return ok, "; ".join(notes)


def beardon_driver() -> tuple[bool, str]:
    parts = []
    ok = True
    for g in ([1, -1], [1, 0, 1]):
        for n in (8, 12, 20):
            r = beardon_driver_check(CombinationSpec(g), n)
            ok &= r.holds
            parts.append(f"{g} n={n}: {r.hit}>={r.required}")
    return ok, ", ".join(parts)


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "backward-shift identity", backward_shift_identity),
    (2, "generating-function oracle", generating_function_oracle),
    (3, "standard combinations real-rooted", standard_real_rooted),
    (4, "Appell threshold structure", appell_threshold),
    (5, "generalized Hermite suite", generalized_suite),
    (6, "zero monotonicity", monotonicity),
    (7, "Turan suite", turan_suite),
    (8, "sign counts", sign_counts),
    (9, "asymptotics", asymptotics_suite),
    (10, "Beardon-Driver intervals", beardon_driver),
]


def run_criterion(number: int) -> CriterionResult:
    for num, title, fn in CRITERIA:
        if num == number:
            start = time.perf_counter()
            try:
                passed, detail = fn()
            except Exception as exc:  # a crash is a failure, reported as such
                passed, detail = False, f"error: {exc!r}"
            return CriterionResult(num, title, bool(passed), detail, time.perf_counter() - start)
    raise KeyError(number)


def run_all(only: Optional[Sequence[int]] = None) -> list[CriterionResult]:
    numbers = [n for n, _, _ in CRITERIA if only is None or n in only]
    return [run_criterion(n) for n in numbers]
