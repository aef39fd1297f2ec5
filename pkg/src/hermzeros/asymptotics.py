"""Numerical checks of the scaling limits: Mehler-Heine, the Appell
generating-function scaling, central/edge/non-real zero asymptotics and the
semicircle statistic.

Exact rational data is only converted to floats at the last step, using
mpmath at ``DEFAULT_PRECISION_BITS`` or more.
"""
from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, TextIO, Union

import mpmath

from .hermite import CombinationSpec, Normalization, combination, hermite
from .roots import complex_roots, lex_key, real_roots
from .zero_analysis import negative_count, nonreal_count

DEFAULT_PRECISION_BITS = 128
# Tolerance schedule max(TOL_FLOOR, TOL_C / sqrt(n)); TOL_C is three times
# the largest pure-Hermite Mehler-Heine error seen on n in {10, 20, 40}.
TOL_FLOOR = 0.05
TOL_C = 0.3
ZERO_BITS = 64

Number = Union[float, complex]


def default_tolerance(n: int) -> float:
    return max(TOL_FLOOR, TOL_C / math.sqrt(n)) if n > 0 else math.inf


def working_precision(bits: Optional[int] = None) -> int:
    if bits is None:
        bits = int(os.environ.get("HERMZEROS_PRECISION", DEFAULT_PRECISION_BITS))
    return max(bits, DEFAULT_PRECISION_BITS)


@dataclass
class LimitCheck:
    n: int
    target: Number
    observed: Number
    abs_error: float
    tolerance: float
    passes: bool
    label: str = ""

    @classmethod
    def make(cls, n: int, target: Number, observed: Number, tolerance: Optional[float] = None,
             label: str = "") -> "LimitCheck":
        tol = default_tolerance(n) if tolerance is None else tolerance
        err = abs(observed - target)
        return cls(n, target, observed, float(err), tol, err <= tol, label)

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, complex):
                return {"re": v.real, "im": v.imag}
            return float(v)
        return {"n": self.n, "label": self.label, "target": enc(self.target),
                "observed": enc(self.observed), "abs_error": self.abs_error,
                "tolerance": self.tolerance, "passes": self.passes, "approximate": True}


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _horner(coeffs: Sequence[Fraction], x):
    acc = mpmath.mpf(0)
    for c in reversed(coeffs):
        acc = acc * x + _mpf(c)
    return acc


# --- Mehler-Heine ----------------------------------------------------------

def mehler_heine(n: int, x: float, parity: str = "even", tolerance: Optional[float] = None,
                 precision_bits: Optional[int] = None) -> LimitCheck:
    """Scaled H_{2n} (even) or H_{2n+1} (odd) at x/(2 sqrt n) vs cos x / sin x."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    with mpmath.workprec(working_precision(precision_bits)):
        y = mpmath.mpf(x) / (2 * mpmath.sqrt(n))
        sign = -1 if n % 2 else 1
        if parity == "even":
            scale = sign * mpmath.sqrt(n * mpmath.pi) / (mpmath.mpf(2) ** (2 * n) * mpmath.factorial(n))
            observed = scale * _horner(hermite(2 * n).coeffs, y)
            target = mpmath.cos(x)
        else:
            scale = sign * mpmath.sqrt(mpmath.pi) / (mpmath.mpf(2) ** (2 * n + 1) * mpmath.factorial(n))
            observed = scale * _horner(hermite(2 * n + 1).coeffs, y)
            target = mpmath.sin(x)
        return LimitCheck.make(n, float(target), float(observed), tolerance, f"mehler_heine/{parity}")


def mehler_heine_at_zero_exact(n: int) -> Fraction:
    """(2n)!/(4^n (n!)^2); the even check at x = 0 equals sqrt(n pi) times this."""
    return Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n) ** 2)


def combination_mehler_heine(spec: CombinationSpec, n: int, x: float,
                             tolerance: Optional[float] = None,
                             precision_bits: Optional[int] = None) -> LimitCheck:
    """The same local limit for the Appell combination q_n at x/sqrt(2(n-K));
    the target is gamma_K cos x (n-K even) or gamma_K sin x (n-K odd)."""
    m = n - spec.K
    if m < 1:
        raise ValueError("need n > K")
    gK = float(spec.gamma[-1])
    q = combination(spec, Normalization.APPELL, n)
    with mpmath.workprec(working_precision(precision_bits)):
        y = mpmath.mpf(x) / mpmath.sqrt(2 * m)
        val = _horner(q.coeffs, y)
        if m % 2 == 0:
            k = m // 2
            scale = mpmath.factorial(m) * mpmath.sqrt(mpmath.pi * m / 2) / ((-1) ** k * mpmath.factorial(k))
            target = gK * math.cos(x)
        else:
            k = (m - 1) // 2
            scale = (-1) ** k * mpmath.factorial(m) * mpmath.sqrt(mpmath.pi) / mpmath.factorial(k)
            target = gK * math.sin(x)
        return LimitCheck.make(n, target, float(scale * val), tolerance, "combination_mehler_heine")


# --- generating-function scaling --------------------------------------------

def appell_scaling(spec: CombinationSpec, n: int, z: complex, tolerance: Optional[float] = None,
                   precision_bits: Optional[int] = None) -> LimitCheck:
    """(z/(n+1))^n n! q_n((n+1)/z) against exp(-z^2/4) R(z).

    The left side is the polynomial sum_k n! c_k (n+1)^(k-n) z^(n-k) in z
    with exact coefficients (c_k those of q_n), evaluated at z."""
    if z == 0:
        raise ValueError("z must be nonzero")
    q = combination(spec, Normalization.APPELL, n)
    fact = math.factorial(n)
    zc = [Fraction(0)] * (n + 1)
    for k, c in enumerate(q.coeffs):
        if c:
            zc[n - k] = c * fact * Fraction(n + 1) ** (k - n)
    with mpmath.workprec(working_precision(precision_bits)):
        zz = mpmath.mpc(z)
        acc = mpmath.mpc(0)
        for c in reversed(zc):
            acc = acc * zz + _mpf(c)
        target = mpmath.exp(-zz * zz / 4) * sum(_mpf(g) * zz ** j for j, g in enumerate(spec.gamma))
        obs, tgt = complex(acc), complex(target)
    if complex(z).imag == 0:
        obs, tgt = obs.real, tgt.real
    return LimitCheck.make(n, tgt, obs, tolerance, "appell_scaling")


# --- zero asymptotics -------------------------------------------------------

def _real_zeros(spec: CombinationSpec, n: int) -> list[float]:
    q = combination(spec, Normalization.APPELL, n)
    return [float(iv.midpoint) for iv in real_roots(q, ZERO_BITS)]


def central_zero_index(spec: CombinationSpec, n: int, j: int) -> int:
    """1-based index j + floor((n-K)/2) + N^- + 1."""
    return j + (n - spec.K) // 2 + negative_count(spec.P) + 1


def central_zero_check(spec: CombinationSpec, n: int, j: int = 0,
                       tolerance: Optional[float] = None) -> LimitCheck:
    """sqrt(2n) times the indexed central zero against pi/2 + j pi (n-K even)
    or j pi (n-K odd)."""
    zeros = _real_zeros(spec, n)
    idx = central_zero_index(spec, n, j)
    if not 1 <= idx <= len(zeros):
        raise IndexError("index out of range")
    target = (math.pi / 2 + j * math.pi) if (n - spec.K) % 2 == 0 else j * math.pi
    return LimitCheck.make(n, target, math.sqrt(2 * n) * zeros[idx - 1], tolerance,
                           f"central_zero/j={j}")


def edge_zero_check(spec: CombinationSpec, n: int,
                    tolerance: Optional[float] = None) -> list[LimitCheck]:
    """Scaled leftmost N^- and rightmost K - N^nr - N^- real zeros against the
    real zeros of P."""
    P = spec.P
    K = spec.K
    if K == 0:
        return []
    theta = [float(iv.midpoint) for iv in real_roots(P, ZERO_BITS)]
    Nm = negative_count(P)
    zeros = _real_zeros(spec, n)
    if len(zeros) != n - nonreal_count(P):
        raise ValueError("n is below the real-zero threshold")
    out = []
    for j in range(1, len(theta) + 1):
        idx = j if j <= Nm else n - K + j
        out.append(LimitCheck.make(n, theta[j - 1], zeros[idx - 1] / (n + 1), tolerance,
                                   f"edge_zero/{idx}"))
    return out


def _nonreal(roots, count: int) -> list[complex]:
    picked = [r.value for r in sorted(roots, key=lambda r: -abs(r.value.imag))[:count]]
    scale = max([abs(z) for z in picked] + [1.0])
    return sorted(picked, key=lambda z: lex_key(z, scale))


def nonreal_zero_check(spec: CombinationSpec, n: int, tolerance: Optional[float] = None,
                       precision_bits: int = 256) -> list[LimitCheck]:
    """Scaled non-real zeros of q_n against those of P, matched in
    lexicographic order.  One check per component (real, imaginary)."""
    P = spec.P
    N = nonreal_count(P)
    if N == 0:
        return []
    q = combination(spec, Normalization.APPELL, n)
    zq = _nonreal(complex_roots(q, precision_bits), N)
    zp = _nonreal(complex_roots(P, precision_bits), N)
    out = []
    for j, (a, b) in enumerate(zip(zq, zp), start=1):
        s = a / (n + 1)
        out.append(LimitCheck.make(n, b.real, s.real, tolerance, f"nonreal_zero/{j}/re"))
        out.append(LimitCheck.make(n, b.imag, s.imag, tolerance, f"nonreal_zero/{j}/im"))
    return out


# --- semicircle -------------------------------------------------------------

def _bump(x: float) -> float:
    u = 2 * x
    return math.exp(-1 / (1 - u * u)) if abs(u) < 1 else 0.0


TEST_FUNCTIONS = {
    "one": (lambda x: 1.0, 1.0),
    "x2": (lambda x: x * x, 0.25),
    "abs": (abs, 4 / (3 * math.pi)),
    "bump": (_bump, None),
}


def semicircle_integral(f: str) -> float:
    """(2/pi) int_{-1}^{1} f(x) sqrt(1-x^2) dx."""
    if f not in TEST_FUNCTIONS:
        raise ValueError(f"unknown test function {f!r}")
    fn, closed = TEST_FUNCTIONS[f]
    if closed is not None:
        return closed
    val = mpmath.quad(lambda t: fn(float(t)) * mpmath.sqrt(1 - t * t), [-1, -0.5, 0, 0.5, 1])
    return float(2 / mpmath.pi * val)


def semicircle_statistic(spec: CombinationSpec, n: int, f: str = "x2",
                         tolerance: Optional[float] = None) -> LimitCheck:
    """(1/n) sum over real zeros of f(zeta/sqrt(2n)) against the semicircle
    integral of f."""
    if f not in TEST_FUNCTIONS:
        raise ValueError(f"unknown test function {f!r}")
    fn, _ = TEST_FUNCTIONS[f]
    zeros = _real_zeros(spec, n)
    s = math.sqrt(2 * n)
    stat = math.fsum(fn(z / s) for z in zeros) / n
    return LimitCheck.make(n, semicircle_integral(f), stat, tolerance, f"semicircle/{f}")


# --- series output ----------------------------------------------------------

CSV_COLUMNS = ("n", "observed", "target", "abs_error")


def _csv_value(v) -> str:
    if isinstance(v, complex):
        return f"{v.real!r}{v.imag:+}j"
    return repr(float(v))


def write_series_csv(checks: Iterable[LimitCheck], out: Optional[TextIO] = None) -> str:
    """CSV with fixed columns n, observed, target, abs_error."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for c in checks:
        w.writerow([c.n, _csv_value(c.observed), _csv_value(c.target), repr(c.abs_error)])
    text = buf.getvalue()
    if out is not None:
        out.write(text)
    return text


def errors_decreasing(checks: Sequence[LimitCheck], last: int = 3) -> bool:
    """Errors strictly decrease over the final ``last`` grid points."""
    tail = [c.abs_error for c in checks[-last:]]
    return all(b < a for a, b in zip(tail, tail[1:]))
