"""Hermite polynomials and finite linear combinations of them."""
from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_poly import Poly, apply_lambda, derivative, format_rational, parse_rational


class Normalization(str, enum.Enum):
    STANDARD = "standard"
    APPELL = "appell"


class SpecError(ValueError):
    """Invalid combination / sequence / multi-index input."""


@dataclass(frozen=True)
class CombinationSpec:
    """Coefficients gamma_0..gamma_K with gamma_0 = 1 and gamma_K != 0."""

    gamma: tuple

    def __init__(self, gamma: Sequence):
        g = tuple(parse_rational(v) if isinstance(v, str) else Fraction(v) for v in gamma)
        if not g:
            raise SpecError("gamma must be non-empty")
        if g[0] != 1:
            raise SpecError("gamma_0 must equal 1")
        if len(g) > 1 and g[-1] == 0:
            raise SpecError("gamma_K must be nonzero")
        object.__setattr__(self, "gamma", g)

    @property
    def K(self) -> int:
        return len(self.gamma) - 1

    @property
    def P(self) -> Poly:
        """sum_j gamma_j x^(K-j)."""
        return Poly(reversed(self.gamma))

    @property
    def R(self) -> Poly:
        """sum_j gamma_j x^j, the reversal of P."""
        return Poly(self.gamma)

    def to_json(self) -> dict:
        return {"gamma": [format_rational(g) for g in self.gamma]}

    @classmethod
    def parse(cls, text: str) -> "CombinationSpec":
        """From a comma-separated list such as ``"1,-1/2,3"``."""
        return cls([parse_rational(t) for t in text.split(",")])


class _HermiteTable:
    """Grow-only cache of H_0, H_1, ... built by repeated backward shifts."""

    def __init__(self):
        self._lock = threading.Lock()
        self._table = [Poly([1])]

    def get(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative Hermite index")
        table = self._table
        if n < len(table):
            return table[n]
        with self._lock:
            while len(self._table) <= n:
                self._table.append(apply_lambda(self._table[-1]))
            return self._table[n]

    def clear(self):
        with self._lock:
            self._table = [Poly([1])]


_HERMITE = _HermiteTable()


def hermite(n: int) -> Poly:
    """Physicists' Hermite polynomial H_n (leading coefficient 2^n)."""
    return _HERMITE.get(n)


def hermite_explicit(n: int) -> Poly:
    """H_n from the explicit sum n! sum_m (-1)^m (2x)^(n-2m) / (m! (n-2m)!).

    Independent of the backward-shift table; used as an oracle."""
    if n < 0:
        raise ValueError("negative Hermite index")
    c = [0] * (n + 1)
    for m in range(n // 2 + 1):
        k = n - 2 * m
        c[k] = (-1) ** m * math.factorial(n) // (math.factorial(m) * math.factorial(k)) * 2 ** k
    return Poly(c)


def clear_cache() -> None:
    _HERMITE.clear()


def hermite_normalized(n: int) -> Poly:
    """H_n / (2^n n!), leading coefficient 1/n!."""
    return hermite(n).scale(Fraction(1, 2**n * math.factorial(n)))


def hermite_at_zero(n: int) -> int:
    """H_n(0): zero for odd n, (-1)^m (2m)!/m! for n = 2m."""
    if n % 2:
        return 0
    m = n // 2
    return (-1) ** m * math.factorial(n) // math.factorial(m)


def combination(spec: CombinationSpec, norm: Normalization, n: int) -> Poly:
    """q_n = sum_j gamma_j Htilde_{n-j}.

    Standard normalization is only defined for n >= K; the Appell one
    treats negative indices as zero.
    """
    norm = Normalization(norm)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if norm is Normalization.STANDARD and n < spec.K:
        raise ValueError("index underflow for standard normalization")
    base = hermite if norm is Normalization.STANDARD else hermite_normalized
    acc = Poly()
    for j, g in enumerate(spec.gamma):
        if n - j < 0:
            break
        if g:
            acc = acc + base(n - j).scale(g)
    return acc


def appell_check(spec: CombinationSpec, n: int) -> bool:
    """q_n' == q_{n-1} for the Appell-normalized combination."""
    if n < 1:
        raise ValueError("n must be positive")
    q_n = combination(spec, Normalization.APPELL, n)
    return derivative(q_n) == combination(spec, Normalization.APPELL, n - 1)


def generating_series(spec: CombinationSpec, n_max: int) -> list[Poly]:
    """z-coefficients 0..n_max of exp(xz - z^2/4) * R(z).

    exp(xz - z^2/4) = sum_m (xz - z^2/4)^m / m!; the z^k coefficient of
    (xz - z^2/4)^m is C(m, k-m) x^(2m-k) (-1/4)^(k-m).  Built independently
    of the Hermite table, so it doubles as an oracle for ``combination``.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    exp_coeffs = []
    for k in range(n_max + 1):
        c = [Fraction(0)] * (k + 1)
        for m in range((k + 1) // 2, k + 1):
            power = 2 * m - k
            c[power] += Fraction(math.comb(m, k - m) * (-1) ** (k - m),
                                 4 ** (k - m) * math.factorial(m))
        exp_coeffs.append(Poly(c))
    out = []
    for k in range(n_max + 1):
        acc = Poly()
        for j, g in enumerate(spec.gamma):
            if j > k:
                break
            if g:
                acc = acc + exp_coeffs[k - j].scale(g)
        out.append(acc)
    return out
