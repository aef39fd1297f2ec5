"""Generalized Hermite polynomials h_n^{phi,psi} and multiple Hermite
polynomials built by one-step raising recurrences."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exact_poly import Poly, apply_lambda, compose_affine, format_rational, parse_rational
from .hermite import SpecError, hermite


def _rationals(values: Iterable) -> tuple:
    return tuple(parse_rational(v) if isinstance(v, str) else Fraction(v) for v in values)


@dataclass(frozen=True)
class SequencePair:
    """Finite prefixes of phi and psi; entries past the prefix are zero."""

    phi: tuple
    psi: tuple

    def __init__(self, phi: Sequence = (), psi: Optional[Sequence] = None):
        phi = _rationals(phi)
        psi = _rationals(psi) if psi is not None else ()
        width = max(len(phi), len(psi))
        phi = phi + (Fraction(0),) * (width - len(phi))
        psi = psi + (Fraction(0),) * (width - len(psi))
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)

    def phi_at(self, i: int) -> Fraction:
        """1-based access with zero continuation."""
        return self.phi[i - 1] if 1 <= i <= len(self.phi) else Fraction(0)

    def psi_at(self, i: int) -> Fraction:
        return self.psi[i - 1] if 1 <= i <= len(self.psi) else Fraction(0)

    def to_json(self) -> dict:
        return {"phi": [format_rational(v) for v in self.phi],
                "psi": [format_rational(v) for v in self.psi]}


@dataclass(frozen=True)
class MultiIndexSpec:
    n: tuple
    c: tuple

    def __init__(self, n: Sequence[int], c: Sequence):
        n = tuple(int(v) for v in n)
        c = _rationals(c)
        if len(n) != len(c):
            raise SpecError("multi-index and parameter vector differ in length")
        if any(v < 0 for v in n):
            raise SpecError("multi-index entries must be nonnegative")
        if len(set(c)) != len(c):
            raise SpecError("parameters must be distinct")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "c", c)

    @property
    def total(self) -> int:
        return sum(self.n)

    def to_json(self) -> dict:
        return {"n": list(self.n), "c": [format_rational(v) for v in self.c]}


def _step(h: Poly, phi_i: Fraction, psi_i: Fraction) -> Poly:
    return apply_lambda(h) + h * Poly([phi_i, psi_i])


def gen_hermite(seq: SequencePair, n: int) -> Poly:
    """h_{k+1} = Lambda h_k + (phi_{k+1} + x psi_{k+1}) h_k, h_0 = 1."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    h = Poly([1])
    for i in range(1, n + 1):
        h = _step(h, seq.phi_at(i), seq.psi_at(i))
    return h


def gen_hermite_family(seq: SequencePair, n_max: int) -> list[Poly]:
    """[h_0, ..., h_{n_max}] in one pass."""
    out = [Poly([1])]
    for i in range(1, n_max + 1):
        out.append(_step(out[-1], seq.phi_at(i), seq.psi_at(i)))
    return out


def closed_form_rs(r, s, n: int) -> Poly:
    """h_n for the constant sequences phi = r, psi = s.

    With t^2 = (s+2)/2 the closed form is t^n H_n(t (x + r/(s+2))).  H_n only
    carries powers x^(n-2k), so t^n * t^(n-2k) = ((s+2)/2)^(n-k) and the
    expansion is rational even when t is not.
    """
    r, s = Fraction(r), Fraction(s)
    if s == -2:
        raise ValueError("degenerate leading coefficient")
    half = (s + 2) / 2
    shift = Poly([r / (s + 2), 1])
    H = hermite(n)
    acc = Poly()
    for k in range(n + 1):
        c = H[k]
        if c and (n - k) % 2 == 0:
            acc = acc + (shift ** k).scale(c * half ** ((n + k) // 2))
    return acc


def closed_form_rs_rational(r, s, n: int, t) -> Poly:
    """Same as :func:`closed_form_rs` when a rational t with t^2 = (s+2)/2
    is known: evaluates t^n H_n(t x + t r/(s+2)) by affine composition."""
    r, s, t = Fraction(r), Fraction(s), Fraction(t)
    if s == -2:
        raise ValueError("degenerate leading coefficient")
    if t * t != (s + 2) / 2:
        raise ValueError("t^2 must equal (s+2)/2")
    return compose_affine(hermite(n), t, t * r / (s + 2)).scale(t ** n)


def elementary_symmetric(phi: Sequence, i: int, n: int) -> Fraction:
    """Sum of all i-fold products of phi_1..phi_n (zero continuation)."""
    if i < 0 or i > n:
        raise ValueError("index out of range")
    vals = list(_rationals(phi[:n])) + [Fraction(0)] * max(0, n - len(phi))
    # e[k] after processing a prefix; standard one-pass recurrence
    e = [Fraction(1)] + [Fraction(0)] * i
    for v in vals:
        for k in range(i, 0, -1):
            e[k] += v * e[k - 1]
    return e[i]


def gen_hermite_expansion(phi: Sequence, n: int) -> Poly:
    """h_n^phi (psi = 0) as sum_j Phi_{n-j}^n H_j."""
    acc = Poly()
    for j in range(n + 1):
        c = elementary_symmetric(phi, n - j, n)
        if c:
            acc = acc + hermite(j).scale(c)
    return acc


def remove_term(seq: SequencePair, l: int) -> SequencePair:
    """Drop entry l (1-based) from both phi and psi."""
    if l < 1:
        raise ValueError("l must be >= 1")
    if l > len(seq.phi):
        return seq
    return SequencePair(seq.phi[:l - 1] + seq.phi[l:], seq.psi[:l - 1] + seq.psi[l:])


def perturb_term(phi: Sequence, l: int, M) -> tuple:
    """phi with M added to entry l (1-based)."""
    if l < 1:
        raise ValueError("l must be >= 1")
    out = list(_rationals(phi))
    if len(out) < l:
        out += [Fraction(0)] * (l - len(out))
    out[l - 1] += Fraction(M)
    return tuple(out)


def multiple_hermite_phi(spec: MultiIndexSpec) -> tuple:
    """The phi sequence: n_1 copies of -c_1, then n_2 copies of -c_2, ..."""
    out = []
    for n_k, c_k in zip(spec.n, spec.c):
        out.extend([-c_k] * n_k)
    return tuple(out)


def multiple_hermite(spec: MultiIndexSpec, order: Optional[Sequence[int]] = None) -> Poly:
    """Type II multiple Hermite polynomial via H_{n+e_k} = 2xH - H' - c_k H.

    ``order`` lists the direction k (0-based) of each unit step; by default
    the steps run lexicographically (all of direction 0 first, ...).
    """
    if order is None:
        order = [k for k, n_k in enumerate(spec.n) for _ in range(n_k)]
    counts = [0] * len(spec.n)
    for k in order:
        counts[k] += 1
    if tuple(counts) != spec.n:
        raise ValueError("step order does not match the multi-index")
    h = Poly([1])
    for k in order:
        h = apply_lambda(h) - h.scale(spec.c[k])
    return h


def step_orders(spec: MultiIndexSpec) -> Iterable[tuple]:
    """All distinct orderings of the unit steps of a multi-index."""
    base = [k for k, n_k in enumerate(spec.n) for _ in range(n_k)]
    return sorted(set(itertools.permutations(base)))


def leading_coefficient_prediction(seq: SequencePair, n: int) -> Fraction:
    """prod_{i<=n} (psi_i + 2)."""
    return math.prod((seq.psi_at(i) + 2 for i in range(1, n + 1)), start=Fraction(1))



def gaussian_moment(c, k: int) -> Fraction:
    """int x^k exp(-x^2 + c x) dx divided by sqrt(pi) exp(c^2/4).

    The weight is a normal density with mean c/2 and variance 1/2, so the
    moment is sum_m C(k, 2m) (c/2)^(k-2m) (2m)! / (4^m m!)."""
    c = Fraction(c)
    half = c / 2
    return sum((math.comb(k, 2 * m) * half ** (k - 2 * m)
                * Fraction(math.factorial(2 * m), 4 ** m * math.factorial(m))
                for m in range(k // 2 + 1)), Fraction(0))


def multiple_orthogonality_defects(spec: MultiIndexSpec, p: Poly) -> list[tuple]:
    """(j, k, moment) for every nonzero int p x^k w_j with k < n_j.

    An empty list means p is a type II multiple orthogonal polynomial for
    the weights exp(-x^2 + c_j x); the moments are exact rationals."""
    out = []
    for j, (n_j, c_j) in enumerate(zip(spec.n, spec.c)):
        moments = [gaussian_moment(c_j, i) for i in range(int(p.degree) + n_j + 1)] if n_j else []
        for k in range(n_j):
            val = sum((a * moments[i + k] for i, a in enumerate(p.coeffs)), Fraction(0))
            if val:
                out.append((j, k, val))
    return out
