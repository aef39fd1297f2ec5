"""Certified real-root counting and isolation; float complex roots.

Everything real is exact: Sturm chains over primitive integer forms and
sign evaluation at dyadic points.  Complex roots come from an Aberth
iteration in mpmath and are approximate by construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import mpmath
import numpy as np

from .exact_poly import (
    DyadicInterval,
    Poly,
    _int_derivative,
    _int_prem,
    _primitive,
    _strip,
    poly_divmod,
    primitive_ints,
    squarefree_decomposition,
)

Extended = Union[Fraction, int, float]  # float only for +/- inf

DEFAULT_REFINE_BITS = 53


class RootFindingError(RuntimeError):
    def __init__(self, message: str, residuals: Sequence[float] = ()):
        super().__init__(message)
        self.residuals = list(residuals)


# --- integer-polynomial kernels --------------------------------------------

def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def _sign_at(ints: Sequence[int], x: Extended) -> int:
    """Sign of the integer polynomial at a rational or at +/- infinity."""
    if not ints:
        return 0
    d = len(ints) - 1
    if isinstance(x, float):
        if x == math.inf:
            return _sign(ints[-1])
        if x == -math.inf:
            return _sign(ints[-1]) * (-1 if d % 2 else 1)
        raise ValueError("finite points must be exact rationals")
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    if den == 1:
        v = 0
        for a in reversed(ints):
            v = v * num + a
        return _sign(v)
    # den^d * p(num/den) by homogeneous Horner
    v = ints[-1]
    dpow = 1
    for i in range(d - 1, -1, -1):
        dpow *= den
        v = v * num + ints[i] * dpow
    return _sign(v)


def _sturm_chain(ints: list[int]) -> list[list[int]]:
    chain = [ints, _primitive(_int_derivative(ints))]
    while len(chain[-1]) > 1:
        r = _strip(_int_prem(chain[-2], chain[-1]))
        if not r:
            break
        chain.append(_primitive([-c for c in r]))
    return chain


def _variations(chain: Sequence[Sequence[int]], x: Extended) -> int:
    count, prev = 0, 0
    for f in chain:
        s = _sign_at(f, x)
        if s:
            if prev and s != prev:
                count += 1
            prev = s
    return count


def _dyadic_root_bound(ints: Sequence[int]) -> Fraction:
    """A power of two strictly exceeding every root modulus.

    Fujiwara: |z| <= 2 max_i |a_{d-i}/a_d|^(1/i).  We find the least integer
    t with |a_{d-i}| <= |a_d| 2^(t i) for all i and return 2^(t+2).
    """
    d = len(ints) - 1
    lead = abs(ints[-1])
    best = None
    for i in range(1, d + 1):
        a = abs(ints[d - i])
        if a == 0:
            continue
        t = (a.bit_length() - lead.bit_length()) // i - 1

        def ok(t):
            return a <= lead << (t * i) if t >= 0 else a << (-t * i) <= lead

        while not ok(t):
            t += 1
        while ok(t - 1):
            t -= 1
        best = t if best is None else max(best, t)
    if best is None:
        return Fraction(1)
    return Fraction(2) ** (best + 2)


class SquarefreeRoots:
    """Sturm machinery for one squarefree polynomial."""

    def __init__(self, poly: Poly, chain: Optional[list] = None):
        self.poly = poly
        self.ints = primitive_ints(poly)
        self.chain = chain if chain is not None else _sturm_chain(self.ints)
        self._bound = None

    @property
    def degree(self) -> int:
        return len(self.ints) - 1

    def sign(self, x: Extended) -> int:
        return _sign_at(self.ints, x)

    def variations(self, x: Extended) -> int:
        return _variations(self.chain, x)

    def count(self, a: Extended, b: Extended) -> int:
        """Distinct roots in (a, b]."""
        if self.degree < 1:
            return 0
        return self.variations(a) - self.variations(b)

    @property
    def bound(self) -> Fraction:
        if self._bound is None:
            self._bound = _dyadic_root_bound(self.ints)
        return self._bound

    def isolate(self) -> list[DyadicInterval]:
        if self.degree < 1:
            return []
        out: list[DyadicInterval] = []
        b = self.bound
        stack = [(-b, b, self.variations(-b), self.variations(b))]
        while stack:
            lo, hi, vlo, vhi = stack.pop()
            c = vlo - vhi
            if c == 0:
                continue
            if c == 1:
                if self.sign(hi) == 0:
                    out.append(DyadicInterval(hi, hi))
                else:
                    out.append(DyadicInterval(lo, hi))
                continue
            mid = (lo + hi) / 2
            vmid = self.variations(mid)
            stack.append((mid, hi, vmid, vhi))
            stack.append((lo, mid, vlo, vmid))
        out.sort(key=lambda iv: (iv.lower, iv.upper))
        return out

    def roots_in_closed(self, lo: Fraction, hi: Fraction) -> int:
        n = (1 if self.sign(lo) == 0 else 0)
        if hi > lo:
            n += self.count(lo, hi)
        return n

    def refine(self, iv: DyadicInterval, bits: int) -> DyadicInterval:
        lo, hi = iv.lower, iv.upper
        if lo == hi:
            if self.sign(lo) != 0:
                raise ValueError("interval not isolating")
            return iv
        inside = self.count(lo, hi) - (1 if self.sign(hi) == 0 else 0)
        if inside != 1:
            if inside == 0 and self.roots_in_closed(lo, hi) == 1:
                # the only root sits on an endpoint
                return DyadicInterval(lo, lo) if self.sign(lo) == 0 else DyadicInterval(hi, hi)
            raise ValueError("interval not isolating")
        width = Fraction(1, 2 ** bits) if bits >= 0 else Fraction(2 ** -bits)
        while not iv.is_point() and iv.upper - iv.lower > width:
            iv = self.halve(iv)
        return iv

    def halve(self, iv: DyadicInterval) -> DyadicInterval:
        """One bisection step on an isolating interval (root strictly inside)."""
        if iv.is_point():
            return iv
        lo, hi = iv.lower, iv.upper
        mid = (lo + hi) / 2
        sm = self.sign(mid)
        if sm == 0:
            return DyadicInterval(mid, mid)
        slo = self.sign(lo)
        if slo:
            left = sm != slo
        else:
            shi = self.sign(hi)
            left = (sm == shi) if shi else self.count(lo, mid) == 1
        return DyadicInterval(lo, mid) if left else DyadicInterval(mid, hi)


@lru_cache(maxsize=4096)
def squarefree_roots(p: Poly) -> SquarefreeRoots:
    """Sturm data for the squarefree part of p (cached per polynomial)."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    ints = primitive_ints(p)
    if len(ints) <= 1:
        return SquarefreeRoots(Poly([1]), [[1]])
    chain = _sturm_chain(ints)
    if len(chain[-1]) <= 1:
        return SquarefreeRoots(p.monic(), chain)
    sqf = poly_divmod(p, Poly(chain[-1]))[0].monic()
    return SquarefreeRoots(sqf)


def is_squarefree(p: Poly) -> bool:
    ints = primitive_ints(p)
    if len(ints) <= 1:
        return True
    return len(_sturm_chain(ints)[-1]) <= 1


def sturm_count(p: Poly, a: Extended = -math.inf, b: Extended = math.inf) -> int:
    """Number of distinct real roots of p in (a, b]."""
    if p.is_zero():
        raise ValueError("sturm_count of the zero polynomial")
    if not (a < b):
        raise ValueError("need a < b")
    return squarefree_roots(p).count(a, b)


def count_real(p: Poly) -> int:
    """Real roots counted with multiplicity."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    if is_squarefree(p):
        return squarefree_roots(p).count(-math.inf, math.inf)
    return sum(m * SquarefreeRoots(f).count(-math.inf, math.inf)
               for f, m in squarefree_decomposition(p))


@dataclass
class ZeroReport:
    degree: int
    real_intervals: list = field(default_factory=list)
    multiplicities: list = field(default_factory=list)
    n_real: int = 0
    n_nonreal: int = 0
    n_negative: int = 0
    n_positive: int = 0
    n_zero_at_origin: int = 0
    all_simple: bool = True

    @property
    def real_simple(self) -> bool:
        """Every real zero simple (non-real ones may repeat)."""
        return all(m == 1 for m in self.multiplicities)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "real_intervals": [iv.to_json() for iv in self.real_intervals],
            "multiplicities": list(self.multiplicities),
            "n_real": self.n_real,
            "n_nonreal": self.n_nonreal,
            "n_negative": self.n_negative,
            "n_positive": self.n_positive,
            "n_zero_at_origin": self.n_zero_at_origin,
            "all_simple": self.all_simple,
        }


def _factors(p: Poly) -> list[tuple[SquarefreeRoots, int]]:
    if is_squarefree(p):
        return [(squarefree_roots(p), 1)] if not p.is_constant() else []
    return [(SquarefreeRoots(f), m) for f, m in squarefree_decomposition(p)]


def analyze(p: Poly, isolate: bool = True) -> ZeroReport:
    """Full certified real-zero report for p.

    With ``isolate=False`` only the counts are computed (much cheaper).
    """
    if p.is_zero():
        raise ValueError("analyze of the zero polynomial")
    deg = int(p.degree)
    factors = _factors(p)
    zero_mult = 0
    while zero_mult < len(p.coeffs) and p.coeffs[zero_mult] == 0:
        zero_mult += 1
    n_real = n_neg = n_pos = 0
    for f, m in factors:
        n_real += m * f.count(-math.inf, math.inf)
        n_neg += m * (f.count(-math.inf, 0) - (1 if f.sign(0) == 0 else 0))
        n_pos += m * f.count(0, math.inf)
    report = ZeroReport(
        degree=deg,
        n_real=n_real,
        n_nonreal=deg - n_real,
        n_negative=n_neg,
        n_positive=n_pos,
        n_zero_at_origin=zero_mult,
        all_simple=all(m == 1 for _, m in factors),
    )
    if isolate:
        roots = separate([(f, m) for f, m in factors])
        report.real_intervals = [r.interval for r in roots]
        report.multiplicities = [r.label for r in roots]
    return report


@dataclass
class IsolatedRoot:
    """A root of ``owner`` certified to lie in ``interval``; ``label`` tags
    where it came from (multiplicity, set name, ...)."""

    owner: SquarefreeRoots
    interval: DyadicInterval
    label: object = None

    def overlaps(self, other: "IsolatedRoot") -> bool:
        a, b = self.interval, other.interval
        if a.is_point() and b.is_point():
            return a.lower == b.lower
        # an open interval may not end on another root either, so that
        # (lower, upper] still counts exactly one root
        if a.is_point():
            return b.lower < a.lower <= b.upper
        if b.is_point():
            return a.lower < b.lower <= a.upper
        return a.lower < b.upper and b.lower < a.upper

    def halve(self) -> None:
        self.interval = self.owner.halve(self.interval)

    def approx(self) -> Fraction:
        return self.interval.midpoint


def separate(groups: Sequence[tuple[SquarefreeRoots, object]]) -> list[IsolatedRoot]:
    """Isolate the roots of pairwise coprime squarefree polynomials and
    refine until all intervals are disjoint; returns them in increasing
    order.  Terminates because the roots are pairwise distinct."""
    roots = [IsolatedRoot(f, iv, label) for f, label in groups for iv in f.isolate()]
    while True:
        roots.sort(key=lambda r: (r.interval.lower, r.interval.upper))
        clash = False
        for a, b in zip(roots, roots[1:]):
            if a.overlaps(b):
                clash = True
                a.halve()
                b.halve()
        if not clash:
            # non-adjacent overlaps are impossible once neighbours are disjoint
            return roots


def isolate(p: Poly) -> list[DyadicInterval]:
    """Isolating intervals of the distinct real roots of p, increasing."""
    return squarefree_roots(p).isolate()


def refine(p: Poly, interval: DyadicInterval, bits: int = DEFAULT_REFINE_BITS) -> DyadicInterval:
    """Bisect until width <= 2^-bits."""
    return squarefree_roots(p).refine(interval, bits)


def real_roots(p: Poly, bits: int = DEFAULT_REFINE_BITS) -> list[DyadicInterval]:
    """Isolated and refined real roots (distinct), increasing."""
    sq = squarefree_roots(p)
    return [sq.refine(iv, bits) for iv in sq.isolate()]


def real_root_values(p: Poly, bits: int = DEFAULT_REFINE_BITS) -> list[float]:
    return [float(iv.midpoint) for iv in real_roots(p, bits)]


# --- complex roots ---------------------------------------------------------

@dataclass(frozen=True)
class ComplexRootEstimate:
    value: complex
    residual: float


def complex_roots(p: Poly, precision_bits: int = 256, max_iter: int = 500,
                  tol_bits: Optional[int] = None) -> list[ComplexRootEstimate]:
    """All roots of p by simultaneous Aberth iteration (approximate).

    Seeds sit on a circle whose radius is half the dyadic Fujiwara bound; a
    float64 pass gets close and an mpmath pass polishes.  The reported residual is the backward error |p(z)| / sum |a_i| |z|^i.
    Result is sorted by (real part, imaginary part), see :func:`lex_key`.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    ints = primitive_ints(p)
    zeros_at_origin = 0
    while ints[zeros_at_origin] == 0:
        zeros_at_origin += 1
    ints = ints[zeros_at_origin:]
    d = len(ints) - 1
    out = [ComplexRootEstimate(0j, 0.0)] * zeros_at_origin
    if d >= 1:
        with mpmath.workprec(precision_bits):
            zs, res = _aberth(ints, precision_bits, max_iter, tol_bits)
        out += [ComplexRootEstimate(complex(z), r) for z, r in zip(zs, res)]
    scale = max([abs(e.value) for e in out] + [1.0])
    out.sort(key=lambda e: lex_key(e.value, scale))
    return out


def lex_key(z: complex, scale: float = 1.0, digits: int = 12) -> tuple:
    """Lexicographic (real, imag) key that treats real parts equal below
    ``scale * 10^-digits``, so conjugate pairs with noisy real parts
    still order by imaginary part."""
    return (round(z.real / scale, digits), z.imag)


def _horner2(coeffs, z):
    p = coeffs[0]
    dp = mpmath.mpc(0)
    for c in coeffs[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _aberth_float(ints, bound: Fraction, max_iter: int = 400) -> np.ndarray:
    """Vectorized float64 Aberth on p(bound * y), whose roots lie in |y| < 1.

    Produces seeds only; accuracy comes from the mpmath polish."""
    d = len(ints) - 1
    lead = ints[-1]
    # b_i = a_i bound^(i-d) / a_d: well scaled by the choice of bound
    b = [float(Fraction(a, lead) * bound ** (i - d)) for i, a in enumerate(ints)]
    c = np.array(b[::-1], dtype=np.complex128)
    dc = np.polyder(c)
    y = 0.5 * np.exp(1j * (2 * np.pi * np.arange(d) / d + 0.4))
    eye = np.eye(d, dtype=bool)
    for _ in range(max_iter):
        pv = np.polyval(c, y)
        dpv = np.polyval(dc, y)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dpv != 0, pv / dpv, 0)
            diff = y[:, None] - y[None, :]
            diff[eye] = 1.0
            s = (1.0 / diff).sum(axis=1) - 1.0
            w = ratio / (1 - ratio * s)
        w = np.where(np.isfinite(w), w, 0)
        y = y - w
        if np.max(np.abs(w)) < 1e-14:
            break
    return y * float(bound)


def _aberth(ints, precision_bits, max_iter, tol_bits):
    d = len(ints) - 1
    coeffs = [mpmath.mpf(c) for c in reversed(ints)]  # highest first
    lead = coeffs[0]
    coeffs = [c / lead for c in coeffs]
    abs_coeffs = [abs(c) for c in coeffs]
    bound = _dyadic_root_bound(ints)
    z = [mpmath.mpc(complex(v)) for v in _aberth_float(ints, bound)]
    # a root is done once its step or its backward error hits working precision
    step_tol = mpmath.mpf(2) ** (-(tol_bits if tol_bits is not None else precision_bits - 16))
    resid_tol = mpmath.mpf(2) ** (-(precision_bits - 8 - 2 * d.bit_length()))
    done = [False] * d
    for _ in range(max_iter):
        for i in range(d):
            if done[i]:
                continue
            zi = z[i]
            pv, dpv = _horner2(coeffs, zi)
            if pv == 0 or abs(pv) <= resid_tol * mpmath.polyval(abs_coeffs, abs(zi)):
                done[i] = True
                continue
            ratio = pv / dpv if dpv != 0 else mpmath.mpf("1e-3")
            s = mpmath.fsum(1 / (zi - z[j]) for j in range(d) if j != i)
            w = ratio / (1 - ratio * s)
            z[i] = zi - w
            if abs(w) <= step_tol * max(mpmath.mpf(1), abs(z[i])):
                done[i] = True
        if all(done):
            break
    else:
        res = [_backward_error(coeffs, abs_coeffs, zi) for zi in z]
        raise RootFindingError("Aberth iteration did not converge", res)
    res = [_backward_error(coeffs, abs_coeffs, zi) for zi in z]
    return z, res


def _backward_error(coeffs, abs_coeffs, z) -> float:
    pv = mpmath.polyval(coeffs, z)
    scale = mpmath.polyval(abs_coeffs, abs(z))
    return float(abs(pv) / scale) if scale else float(abs(pv))


def conjugate_closed(roots: Sequence[ComplexRootEstimate], rel_tol: float = 1e-10) -> bool:
    """Is the multiset of estimates closed under conjugation?"""
    remaining = [r.value for r in roots]
    while remaining:
        z = remaining.pop()
        target = z.conjugate()
        scale = max(1.0, abs(z))
        best = min(range(len(remaining)), key=lambda k: abs(remaining[k] - target), default=None)
        if abs(z.imag) <= rel_tol * scale:
            continue
        if best is None or abs(remaining[best] - target) > rel_tol * scale:
            return False
        remaining.pop(best)
    return True
