"""Executable checks for the zero-structure theorems: interlacing,
real-rootedness thresholds, Turan inequalities, sign counts."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact_poly import Poly, evaluate, format_rational, gcd, poly_divmod
from .generalized import (
    SequencePair,
    gen_hermite,
    gen_hermite_expansion,
    gen_hermite_family,
    perturb_term,
    remove_term,
)
from .hermite import CombinationSpec, Normalization, SpecError, combination, hermite
from .roots import (
    IsolatedRoot,
    ZeroReport,
    analyze,
    count_real,
    real_roots,
    separate,
    squarefree_roots,
    sturm_count,
)

DEFAULT_CEILING = 60
DEFAULT_THETAS = (Fraction(-10), Fraction(-1), Fraction(-1, 3), Fraction(1, 3), Fraction(1), Fraction(10))


class SharedZeroError(ValueError):
    pass


class CeilingExceeded(RuntimeError):
    pass


# --- interlacing -----------------------------------------------------------

@dataclass
class InterlaceVerdict:
    holds: bool
    witness: Optional[str] = None
    card_u: int = 0
    card_v: int = 0

    def to_json(self) -> dict:
        return {"holds": self.holds, "witness": self.witness,
                "card_u": self.card_u, "card_v": self.card_v}


def _verdict_from_labels(labels: Sequence[str], where: Sequence[str] = ()) -> InterlaceVerdict:
    """Evaluate the interlacing definition on a merged increasing sequence
    of labels 'U' / 'V' (distinct points)."""
    cu, cv = labels.count("U"), labels.count("V")
    if cv == 0:
        if cu <= 1:
            return InterlaceVerdict(True, None, cu, cv)
        return InterlaceVerdict(False, "missing element between consecutive pair: "
                                "V is empty but U has two or more points", cu, cv)
    if labels[0] != "U":
        return InterlaceVerdict(False, "min-ordering: min U is not below min V", cu, cv)
    for k in range(1, len(labels)):
        if labels[k] == labels[k - 1]:
            pos = f" near {where[k - 1]} and {where[k]}" if where else ""
            name = labels[k]
            return InterlaceVerdict(
                False, f"missing element between consecutive pair: two {name} points "
                       f"(ranks {k - 1}, {k}) with nothing of the other set between{pos}", cu, cv)
    if cu not in (cv, cv + 1):
        return InterlaceVerdict(False, f"count mismatch: card U = {cu}, card V = {cv}", cu, cv)
    return InterlaceVerdict(True, None, cu, cv)


def interlace_sets(U: Iterable, V: Iterable) -> InterlaceVerdict:
    """The definition on explicit finite sets of exactly comparable reals."""
    U, V = sorted(set(U)), sorted(set(V))
    if set(U) & set(V):
        raise SharedZeroError("sequences share a zero")
    merged = sorted([(u, "U") for u in U] + [(v, "V") for v in V])
    return _verdict_from_labels([lab for _, lab in merged], [str(x) for x, _ in merged])


def merged_real_roots(p: Poly, q: Poly) -> list[IsolatedRoot]:
    """Certified increasing order of the distinct real roots of p and q.

    Labels are 'p', 'q' or 'both' (common root).  Intervals are refined
    until pairwise disjoint."""
    sp, sq = squarefree_roots(p), squarefree_roots(q)
    if sp.degree < 1 or sq.degree < 1:
        groups = []
        if sp.degree >= 1:
            groups.append((sp, "p"))
        if sq.degree >= 1:
            groups.append((sq, "q"))
        return separate(groups)
    g = gcd(sp.poly, sq.poly)
    if g.is_constant():
        return separate([(sp, "p"), (sq, "q")])
    groups = [(squarefree_roots(g), "both")]
    rest_p = poly_divmod(sp.poly, g)[0]
    rest_q = poly_divmod(sq.poly, g)[0]
    if not rest_p.is_constant():
        groups.append((squarefree_roots(rest_p), "p"))
    if not rest_q.is_constant():
        groups.append((squarefree_roots(rest_q), "q"))
    return separate(groups)


def interlaces(u: Poly, v: Poly) -> InterlaceVerdict:
    """Do the real zeros of u strictly interlace the real zeros of v?"""
    merged = merged_real_roots(u, v)
    if any(r.label == "both" for r in merged):
        raise SharedZeroError("sequences share a zero")
    labels = ["U" if r.label == "p" else "V" for r in merged]
    return _verdict_from_labels(labels, [f"{float(r.approx()):.6g}" for r in merged])


# --- coefficient polynomial data ------------------------------------------

def nonreal_count(P: Poly) -> int:
    """Non-real zeros of P, with multiplicity."""
    return int(P.degree) - count_real(P)


def negative_count(P: Poly) -> int:
    return analyze(P, isolate=False).n_negative


def real_rooted_onset_bound(spec: CombinationSpec) -> int:
    """max{(K-1)^2 4^(K-2) max^2{|gamma_j|: 2<=j<=K}, 2K}, rounded up."""
    K = spec.K
    tail = [abs(g) for g in spec.gamma[2:]]
    m = max(tail, default=Fraction(0))
    first = Fraction((K - 1) ** 2) * Fraction(4) ** (K - 2) * m * m if K >= 1 else Fraction(0)
    return max(math.ceil(first), 2 * K)


# --- standard normalization -----------------------------------------------

@dataclass
class StandardSweep:
    spec: CombinationSpec
    n_range: tuple
    p_real_rooted: bool
    bound: int
    onset: Optional[int]
    holds: bool
    per_n: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "gamma": self.spec.to_json()["gamma"],
            "n_range": list(self.n_range),
            "p_real_rooted": self.p_real_rooted,
            "corollary_bound": self.bound,
            "onset": self.onset,
            "holds": self.holds,
            "per_n": {str(n): {"report": rep.to_json(),
                               "interlacing_vs_previous": (v.to_json() if v else None)}
                      for n, (rep, v) in self.per_n.items()},
        }


def _real_rooted_simple(rep: ZeroReport) -> bool:
    return rep.n_nonreal == 0 and rep.all_simple


def verify_real_rooted_standard(spec: CombinationSpec, n_lo: Optional[int] = None,
                                n_hi: int = DEFAULT_CEILING) -> StandardSweep:
    """Sweep the standard combinations q_n over [n_lo, n_hi].

    For real-rooted P every q_n must be real-rooted, simple and interlace its
    predecessor.  Otherwise the onset of real-rootedness is reported and the
    same properties must persist from there on."""
    K = spec.K
    n_lo = K if n_lo is None else n_lo
    if n_lo < K:
        raise ValueError("index underflow for standard normalization")
    P = spec.P
    p_real = nonreal_count(P) == 0
    per_n = {}
    prev = None
    for n in range(n_lo, n_hi + 1):
        q = combination(spec, Normalization.STANDARD, n)
        rep = analyze(q)
        verdict = None
        if prev is not None and _real_rooted_simple(rep) and _real_rooted_simple(per_n[n - 1][0]):
            verdict = interlaces(q, prev)
        per_n[n] = (rep, verdict)
        prev = q
    onset = next((n for n in per_n if per_n[n][0].n_nonreal == 0), None)
    if onset is None:
        holds = False
    else:
        holds = all(_real_rooted_simple(per_n[n][0]) for n in per_n if n >= onset) and all(
            per_n[n][1] is not None and per_n[n][1].holds for n in per_n if n > onset)
        if p_real:
            holds = holds and onset == n_lo
    return StandardSweep(spec, (n_lo, n_hi), p_real, real_rooted_onset_bound(spec), onset, holds, per_n)


# --- Appell normalization --------------------------------------------------

@dataclass
class ThresholdResult:
    n0: int
    nonreal_count: int
    per_n_reports: dict
    interlacing: dict = field(default_factory=dict)
    holds: bool = True
    failures: list = field(default_factory=list)

    def z_nonreal(self) -> dict:
        return {n: r.n_nonreal for n, r in self.per_n_reports.items()}

    def to_json(self) -> dict:
        return {
            "n0": self.n0,
            "nonreal_count": self.nonreal_count,
            "holds": self.holds,
            "failures": self.failures,
            "z_nonreal": {str(n): z for n, z in self.z_nonreal().items()},
            "per_n": {str(n): r.to_json() for n, r in self.per_n_reports.items()},
            "interlacing": {str(n): v.to_json() for n, v in self.interlacing.items()},
        }


def threshold_appell(spec: CombinationSpec, n_ceiling: int = DEFAULT_CEILING) -> ThresholdResult:
    """Smallest n0 with exactly N^nr non-real zeros, and the structure past it."""
    N = nonreal_count(spec.P)
    reports = {}
    polys = {}
    n0 = None
    for n in range(0, n_ceiling + 1):
        q = combination(spec, Normalization.APPELL, n)
        polys[n] = q
        reports[n] = analyze(q, isolate=n0 is not None or n == n_ceiling)
        if n0 is None and reports[n].n_nonreal == N:
            n0 = n
            reports[n] = analyze(q)
    if n0 is None:
        raise CeilingExceeded("ceiling exceeded")
    failures = []
    zs = [reports[n].n_nonreal for n in range(n_ceiling + 1)]
    if any(b < a for a, b in zip(zs, zs[1:])):
        failures.append("non-real count decreased")
    inter = {}
    for n in range(n0, n_ceiling + 1):
        rep = reports[n]
        if rep.n_real != n - N:
            failures.append(f"n={n}: {rep.n_real} real zeros, expected {n - N}")
        if not rep.real_simple:
            failures.append(f"n={n}: repeated real zero")
        if n < n_ceiling:
            v = interlaces(polys[n + 1], polys[n])
            inter[n] = v
            if not v.holds:
                failures.append(f"n={n}: {v.witness}")
    return ThresholdResult(n0, N, reports, inter, not failures, failures)


def lem2_transform(B: Sequence, theta) -> tuple:
    """A_0 = B_0, A_j = B_j - theta B_{j-1}, A_K = -theta B_{K-1}; so that
    sum A_j x^(K-j) = (x - theta) sum B_j x^(K-1-j)."""
    B = [Fraction(b) for b in B]
    theta = Fraction(theta)
    if not B or B[0] == 0 or B[-1] == 0:
        raise ValueError("need B_0 != 0 and B_{K-1} != 0")
    return tuple([B[0]] + [B[j] - theta * B[j - 1] for j in range(1, len(B))] + [-theta * B[-1]])


def lem2_inverse(A: Sequence, theta) -> tuple:
    """B_j = sum_{i<=j} theta^i A_{j-i}, 0 <= j <= K-1."""
    A = [Fraction(a) for a in A]
    theta = Fraction(theta)
    return tuple(sum((theta ** i * A[j - i] for i in range(j + 1)), Fraction(0))
                 for j in range(len(A) - 1))


def pencil(spec: CombinationSpec, theta, n: int) -> Poly:
    """q_n - theta q_{n-1} (Appell)."""
    q = combination(spec, Normalization.APPELL, n)
    if n >= 1:
        q = q - combination(spec, Normalization.APPELL, n - 1).scale(Fraction(theta))
    return q


@dataclass
class PencilResult:
    n_star: int
    nonreal_count: int
    per_theta: dict
    holds: bool

    def to_json(self) -> dict:
        return {
            "n_star": self.n_star,
            "nonreal_count": self.nonreal_count,
            "holds": self.holds,
            "per_theta": {format_rational(t): {"n0": r.n0, "holds": r.holds, "failures": r.failures}
                          for t, r in self.per_theta.items()},
        }


def pencil_threshold_appell(spec: CombinationSpec, thetas: Sequence = DEFAULT_THETAS,
                            n_ceiling: int = DEFAULT_CEILING) -> PencilResult:
    """Per-theta thresholds of q_n - theta q_{n-1}; n_* is their maximum."""
    N = nonreal_count(spec.P)
    if N == 0:
        raise ValueError("pencil thresholds need a coefficient polynomial with non-real zeros")
    per = {}
    for t in thetas:
        t = Fraction(t)
        sub = spec if t == 0 else CombinationSpec(lem2_transform(spec.gamma, t))
        per[t] = threshold_appell(sub, n_ceiling)
    holds = all(r.holds and r.nonreal_count == N for r in per.values())
    return PencilResult(max(r.n0 for r in per.values()), N, per, holds)


# --- Turan -----------------------------------------------------------------

@dataclass
class TuranResult:
    holds: bool
    degree: int
    leading: Fraction
    predicted_degree: Optional[int] = None
    predicted_leading: Optional[Fraction] = None
    hypothesis: Optional[bool] = None

    @property
    def prediction_matches(self) -> Optional[bool]:
        if self.predicted_degree is None:
            return None
        return self.degree == self.predicted_degree and self.leading == self.predicted_leading

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "degree": self.degree,
            "leading": format_rational(self.leading),
            "predicted_degree": self.predicted_degree,
            "predicted_leading": (format_rational(self.predicted_leading)
                                  if self.predicted_leading is not None else None),
            "hypothesis": self.hypothesis,
            "prediction_matches": self.prediction_matches,
        }


def positive_on_reals(r: Poly) -> bool:
    """r > 0 on all of R: no real zero and positive at one point."""
    if r.is_zero():
        return False
    if r.is_constant():
        return r.leading > 0
    return sturm_count(r) == 0 and evaluate(r, 0) > 0


def _turan(a: Poly, b: Poly, c: Poly) -> Poly:
    r = a * a - b * c
    if r.is_zero():
        raise ValueError("degenerate triple")
    return r


def turan_generalized(seq: SequencePair, n: int) -> TuranResult:
    """(h_{n-1})^2 - h_n h_{n-2} for the generalized family."""
    if n < 2:
        raise ValueError("n must be >= 2")
    h = gen_hermite_family(seq, n)
    r = _turan(h[n - 1], h[n], h[n - 2])
    phi_eq = seq.phi_at(n - 1) == seq.phi_at(n)
    psi_eq = seq.psi_at(n - 1) == seq.psi_at(n)
    admissible = all(seq.psi_at(i) > -2 for i in range(1, n + 1))
    sq = math.prod(((seq.psi_at(i) + 2) ** 2 for i in range(1, n - 1)), start=Fraction(1))
    pred_deg = pred_lead = None
    if psi_eq and phi_eq:
        pred_deg, pred_lead = 2 * n - 4, (seq.psi_at(n) + 2) * sq
    elif psi_eq:
        pred_deg = 2 * n - 3
        pred_lead = (seq.phi_at(n - 1) - seq.phi_at(n)) * (seq.psi_at(n) + 2) * sq
    return TuranResult(positive_on_reals(r), int(r.degree), r.leading, pred_deg, pred_lead,
                       phi_eq and psi_eq and admissible)


def turan_standard(spec: CombinationSpec, n: int) -> TuranResult:
    """q_{n+1}^2 - q_{n+2} q_n for the standard combination, n >= K."""
    if n < spec.K:
        raise ValueError("index underflow for standard normalization")
    q = [combination(spec, Normalization.STANDARD, m) for m in (n, n + 1, n + 2)]
    r = _turan(q[1], q[2], q[0])
    return TuranResult(positive_on_reals(r), int(r.degree), r.leading, 2 * n,
                       Fraction(2 * 4 ** n), nonreal_count(spec.P) == 0)


def turan_appell(spec: CombinationSpec, n: int) -> TuranResult:
    """q_{n-1}^2 - q_n q_{n-2} for the Appell combination, n >= 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    q = [combination(spec, Normalization.APPELL, m) for m in (n - 2, n - 1, n)]
    r = _turan(q[1], q[2], q[0])
    return TuranResult(positive_on_reals(r), int(r.degree), r.leading, 2 * n - 2,
                       Fraction(1, math.factorial(n - 1) * math.factorial(n)),
                       nonreal_count(spec.P) == 0)


# --- generalized family ----------------------------------------------------

@dataclass
class FamilyCheck:
    n: int
    real_rooted: bool
    simple: bool
    interlaces_previous: Optional[bool]


def family_check(seq: SequencePair, n_max: int) -> list[FamilyCheck]:
    """Real-rootedness, simplicity and consecutive interlacing of h_0..h_n_max."""
    fam = gen_hermite_family(seq, n_max)
    out = []
    for n, h in enumerate(fam):
        rep = analyze(h, isolate=False)
        inter = None
        if n >= 1:
            inter = interlaces(h, fam[n - 1]).holds
        out.append(FamilyCheck(n, rep.n_nonreal == 0, rep.all_simple, inter))
    return out


def monotonicity_probe(phi: Sequence, rho: Sequence, n: int, bits: int = 64) -> bool:
    """zeta_k(rho) <= zeta_k(phi) for all k when phi <= rho entrywise."""
    hp = gen_hermite_expansion(phi, n)
    hr = gen_hermite_expansion(rho, n)
    zp, zr = real_roots(hp, bits), real_roots(hr, bits)
    if len(zp) != n or len(zr) != n:
        raise ValueError("polynomials are not real-rooted with simple zeros")
    undecided = []
    for k, (a, b) in enumerate(zip(zp, zr)):
        if b.upper <= a.lower:
            continue
        if a.upper < b.lower:
            return False
        undecided.append(k)
    if not undecided:
        return True
    # exact fallback: certified merged order with ties for common roots
    merged = merged_real_roots(hp, hr)
    rank_p, rank_r = [], []
    for pos, r in enumerate(merged):
        if r.label in ("p", "both"):
            rank_p.append(pos)
        if r.label in ("q", "both"):
            rank_r.append(pos)
    return all(rank_r[k] <= rank_p[k] for k in undecided)


def perturbation_interlace(phi: Sequence, l: int, M, n: int) -> InterlaceVerdict:
    """M > 0: zeros of h_n^{phi^{l,M}} interlace those of h_n^phi; M < 0:
    the other way round."""
    M = Fraction(M)
    if M == 0:
        raise ValueError("M must be nonzero")
    base = gen_hermite_expansion(phi, n)
    moved = gen_hermite_expansion(perturb_term(phi, l, M), n)
    return interlaces(moved, base) if M > 0 else interlaces(base, moved)


def removal_interlace(phi: Sequence, l: int, n: int) -> InterlaceVerdict:
    """Zeros of h_{n+1}^phi interlace those of h_n^{phi^{{l}}}."""
    seq = SequencePair(phi)
    return interlaces(gen_hermite(seq, n + 1), gen_hermite(remove_term(seq, l), n))


def obreshkov_pencil_check(p: Poly, q: Poly, grid: Iterable[tuple]) -> bool:
    """Every sampled mu p + lambda q is real-rooted with simple zeros."""
    for mu, lam in grid:
        f = p.scale(mu) + q.scale(lam)
        if f.is_zero():
            continue
        rep = analyze(f, isolate=False)
        if rep.n_nonreal or not rep.all_simple:
            return False
    return True


# --- factored instances of the standard threshold --------------------------

@dataclass
class FactoredThreshold:
    n0: int
    n0_bound: int
    start: int
    holds: bool


def factored_threshold_standard(spec: CombinationSpec, p_real: Poly, p_nonreal: Poly,
                                n_ceiling: int = DEFAULT_CEILING) -> FactoredThreshold:
    """Threshold for standard q_n when P = p_real * p_nonreal over Q.

    n0 is the first index with sum tau_j H_{n0-j} real-rooted and simple
    (tau from the monic non-real factor); q_n must then be real-rooted and
    interlacing for n >= n0 + K - m."""
    P = spec.P
    if p_real * p_nonreal != P:
        raise SpecError("factorization does not reproduce P")
    p_real, p_nonreal = p_real.monic(), p_nonreal.monic()
    if nonreal_count(p_real) != 0 or count_real(p_nonreal) != 0:
        raise SpecError("factors do not split P into real and non-real zeros")
    two_m = int(p_nonreal.degree)
    m = two_m // 2
    K = spec.K
    tau = CombinationSpec(list(reversed(p_nonreal.coeffs)))
    tail = [abs(t) for t in tau.gamma[2:]]
    mx = max(tail, default=Fraction(0))
    bound = (max(math.ceil(Fraction((two_m - 1) ** 2) * Fraction(4) ** (two_m - 2) * mx * mx), 4 * m)
             if m else 0)
    n0 = 0
    if m:
        n0 = next((n for n in range(two_m, n_ceiling + 1)
                   if _real_rooted_simple(analyze(combination(tau, Normalization.STANDARD, n),
                                                  isolate=False))), None)
        if n0 is None:
            raise CeilingExceeded("ceiling exceeded")
    start = max(n0 + K - m, K)
    sweep = verify_real_rooted_standard(spec, start, max(n_ceiling, start + 1))
    ok = sweep.onset == start and sweep.holds and n0 <= max(bound, 0 if not m else bound)
    return FactoredThreshold(n0, bound, start, ok)


# --- sign counts -----------------------------------------------------------

@dataclass
class SignRow:
    predicted: tuple
    observed: tuple
    parity: str
    agrees: bool

    def to_json(self) -> dict:
        return {"predicted": list(self.predicted), "observed": list(self.observed),
                "parity": self.parity, "agrees": self.agrees}


@dataclass
class SignCounts:
    status: str  # "corollary" | "conjecture" | "conditional"
    n_negative_P: int
    n_nonreal_P: int
    rows: dict
    onset: Optional[int]

    @property
    def holds(self) -> bool:
        return self.onset is not None

    def to_json(self) -> dict:
        return {"status": self.status, "N_minus": self.n_negative_P, "N_nonreal": self.n_nonreal_P,
                "onset": self.onset, "agrees": self.holds,
                "rows": {str(n): r.to_json() for n, r in self.rows.items()}}


def predicted_sign_counts(K: int, n: int, n_minus: int, n_nonreal: int) -> tuple:
    """(negative, positive) prediction and parity; for odd n-K these are
    lower bounds."""
    half = (n - K) // 2
    return (half + n_minus, half + K - n_nonreal - n_minus), ("even" if (n - K) % 2 == 0 else "odd")


def sign_counts_check(spec: CombinationSpec, n_lo: Optional[int] = None,
                      n_hi: int = 40) -> SignCounts:
    """Observed negative/positive zero counts of Appell q_n against the
    predicted ones.  The onset is the first n from which every row agrees
    up to n_hi (None if the last row disagrees)."""
    K = spec.K
    n_lo = K if n_lo is None else max(n_lo, K)
    P = spec.P
    Nnr = nonreal_count(P)
    Nm = negative_count(P)
    status = "corollary" if Nnr == 0 else ("conjecture" if Nnr == K else "conditional")
    rows = {}
    for n in range(n_lo, n_hi + 1):
        rep = analyze(combination(spec, Normalization.APPELL, n), isolate=False)
        pred, parity = predicted_sign_counts(K, n, Nm, Nnr)
        obs = (rep.n_negative, rep.n_positive)
        if parity == "even":
            ok = obs == pred
        else:
            ok = obs[0] >= pred[0] and obs[1] >= pred[1]
        rows[n] = SignRow(pred, obs, parity, ok)
    onset = None
    for n in range(n_hi, n_lo - 1, -1):
        if not rows[n].agrees:
            break
        onset = n
    return SignCounts(status, Nm, Nnr, rows, onset)


# --- Beardon-Driver --------------------------------------------------------

@dataclass
class BeardonDriverResult:
    hit: int
    required: int
    holds: bool
    note: Optional[str] = None

    def to_json(self) -> dict:
        return {"hit": self.hit, "required": self.required, "holds": self.holds, "note": self.note}


def beardon_driver_check(spec: CombinationSpec, n: int) -> BeardonDriverResult:
    """Count gaps (xi_i, xi_{i+1}) between consecutive zeros of H_n holding a
    zero of the standard q_n; at least n - K are required."""
    K = spec.K
    if n < K:
        raise ValueError("index underflow for standard normalization")
    if K == 0:
        return BeardonDriverResult(n - 1, n, True, "K = 0: q_n = H_n, hypothesis 0 < r < n fails; vacuous")
    q = combination(spec, Normalization.STANDARD, n)
    merged = merged_real_roots(hermite(n), q)
    hit = 0
    inside = False
    seen_h = False
    for r in merged:
        if r.label in ("p", "both"):
            if seen_h and inside:
                hit += 1
            seen_h = True
            inside = False
        elif seen_h:
            inside = True
    return BeardonDriverResult(hit, n - K, hit >= n - K)
