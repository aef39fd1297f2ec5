"""Exact univariate polynomials over the rationals.

Coefficients are stored densely as reduced :class:`fractions.Fraction`
values, lowest power first.  Hot loops (products, remainder sequences,
sign evaluation) drop to integer arithmetic on the primitive form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"`` or an integer shorthand ``"p"`` into a Fraction.

    Floats are rejected on purpose: exactness is the point.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"rationals must be given as strings, got {type(text).__name__}")
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    num, sep, den = s.partition("/")
    try:
        if sep:
            d = int(den)
            if d == 0:
                raise ValueError(f"zero denominator in {text!r}")
            return Fraction(int(num), d)
        return Fraction(int(num))
    except ValueError as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(x: Scalar) -> str:
    """Serialize as ``"p/q"`` (always with a denominator, q > 0, reduced)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def _content(ints: Sequence[int]) -> int:
    return reduce(math.gcd, ints, 0)


class Poly:
    """Immutable dense polynomial with exact rational coefficients.

    ``Poly([c0, c1, c2])`` is ``c0 + c1*x + c2*x**2``.  Trailing zeros are
    stripped, so the zero polynomial has no coefficients.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)
        self._hash = None

    @classmethod
    def _trusted(cls, coeffs: tuple) -> "Poly":
        obj = cls.__new__(cls)
        obj._c = coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_ints(cls, ints: Sequence[int], den: int = 1) -> "Poly":
        return cls(Fraction(a, den) for a in ints)

    @classmethod
    def constant(cls, value: Scalar) -> "Poly":
        return cls([value])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar]) -> "Poly":
        """Monic polynomial with the given (rational) roots."""
        p = cls([1])
        for r in roots:
            p = p * cls([-Fraction(r), 1])
        return p

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> Union[int, float]:
        """Degree; ``-inf`` for the zero polynomial."""
        return len(self._c) - 1 if self._c else -math.inf

    @property
    def leading(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == Poly([other])._c
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._c)
        return self._hash

    def __repr__(self) -> str:
        if not self._c:
            return "Poly(0)"
        terms = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{abs(c)}*{mono}"
            else:
                body = str(abs(c))
            terms.append(("-" if c < 0 else "+", body))
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return f"Poly({text})"

    def __neg__(self) -> "Poly":
        return Poly._trusted(tuple(-c for c in self._c))

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other) -> "Poly":
        other = _as_poly(other)
        if other is NotImplemented:
            return other
        return add(other, -self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Poly):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(1 / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        out, base = Poly([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x: Scalar) -> Fraction:
        return evaluate(self, x)

    def scale(self, s: Scalar) -> "Poly":
        s = Fraction(s)
        if s == 0:
            return Poly()
        return Poly._trusted(tuple(c * s for c in self._c))

    def derivative(self) -> "Poly":
        return derivative(self)

    def monic(self) -> "Poly":
        if not self._c:
            return self
        return self.scale(1 / self._c[-1])

    def to_json(self) -> list:
        return [format_rational(c) for c in self._c]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Poly":
        return cls(parse_rational(s) for s in data)


def _as_poly(v):
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)):
        return Poly([v])
    return NotImplemented


# --- integer forms --------------------------------------------------------

def integer_form(p: Poly) -> tuple[list[int], int]:
    """Return ``(ints, den)`` with ``p == Poly(ints) / den`` and den > 0."""
    den = reduce(_lcm, (c.denominator for c in p.coeffs), 1)
    return [c.numerator * (den // c.denominator) for c in p.coeffs], den


def primitive_ints(p: Poly) -> list[int]:
    """Integer polynomial proportional to ``p`` by a *positive* factor,
    with content 1.  Signs (and hence sign variations) are preserved."""
    ints, _ = integer_form(p)
    return _primitive(ints)


def _primitive(ints: list[int]) -> list[int]:
    g = _content(ints)
    if g > 1:
        return [a // g for a in ints]
    return list(ints)


def _strip(ints: list[int]) -> list[int]:
    while ints and ints[-1] == 0:
        ints.pop()
    return ints


def _int_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _int_prem(a: list[int], b: list[int]) -> list[int]:
    """Remainder of a by b times a *positive* integer (|lc(b)|**steps)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    steps = 0
    while r and len(r) - 1 >= db:
        la = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for j, bj in enumerate(b):
            r[shift + j] -= la * bj
        r.pop()
        _strip(r)
        steps += 1
    if lb < 0 and steps % 2 == 1:
        r = [-c for c in r]
    return r


def _int_derivative(a: Sequence[int]) -> list[int]:
    return [i * a[i] for i in range(1, len(a))]


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd (positive leading coefficient) of integer polynomials."""
    a, b = _primitive(_strip(list(a))), _primitive(_strip(list(b)))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _strip(_int_prem(a, b))
        a, b = b, _primitive(r)
    if a and a[-1] < 0:
        a = [-c for c in a]
    return a


# --- spec operations ------------------------------------------------------

def add(p: Poly, q: Poly) -> Poly:
    a, b = p.coeffs, q.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return Poly(out)


def mul(p: Poly, q: Poly) -> Poly:
    if p.is_zero() or q.is_zero():
        return Poly()
    a, da = integer_form(p)
    b, db = integer_form(q)
    den = da * db
    return Poly._trusted(tuple(Fraction(c, den) for c in _int_mul(a, b)))


def derivative(p: Poly) -> Poly:
    c = p.coeffs
    return Poly._trusted(tuple(i * c[i] for i in range(1, len(c))))


def apply_lambda(p: Poly) -> Poly:
    """The backward shift ``f -> 2x f - f'``; raises Hermite index by one."""
    c = p.coeffs
    if not c:
        return p
    out = [Fraction(0)] * (len(c) + 1)
    for i, ci in enumerate(c):
        out[i + 1] += 2 * ci
        if i:
            out[i - 1] -= i * ci
    return Poly._trusted(tuple(out))


def evaluate(p: Poly, x: Scalar) -> Fraction:
    """Exact Horner evaluation."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def compose_affine(p: Poly, a: Scalar, b: Scalar) -> Poly:
    """``p(a*x + b)``, exactly."""
    lin = Poly([b, a])
    acc = Poly()
    for c in reversed(p.coeffs):
        acc = acc * lin + c
    return acc


def poly_divmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Euclidean division over Q."""
    if q.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p.coeffs)
    dq = len(q.coeffs) - 1
    lq = q.leading
    if len(r) - 1 < dq:
        return Poly(), p
    quo = [Fraction(0)] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        t = r[k + dq] / lq
        quo[k] = t
        if t:
            for j, qj in enumerate(q.coeffs):
                r[k + j] -= t * qj
    return Poly(quo), Poly(r[:dq])


def gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd, via a primitive pseudo-remainder sequence."""
    if p.is_zero() and q.is_zero():
        raise ValueError("undefined gcd")
    g = _int_gcd(primitive_ints(p) if not p.is_zero() else [],
                 primitive_ints(q) if not q.is_zero() else [])
    return Poly(g).monic()


def divides(d: Poly, p: Poly) -> bool:
    return poly_divmod(p, d)[1].is_zero()


def squarefree_part(p: Poly) -> Poly:
    """``p / gcd(p, p')``, made monic."""
    if p.is_zero():
        raise ValueError("squarefree part of the zero polynomial")
    if p.is_constant():
        return Poly([1])
    g = gcd(p, derivative(p))
    return poly_divmod(p, g)[0].monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic coprime squarefree factors with multiplicities.

    Returns ``[(f_i, i), ...]`` for non-constant f_i, so that
    ``p = lc(p) * prod f_i**i``.
    """
    if p.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    if p.is_constant():
        return []
    p = p.monic()
    dp = derivative(p)
    a = gcd(p, dp)
    b = poly_divmod(p, a)[0]
    c = poly_divmod(dp, a)[0]
    d = c - derivative(b)
    out = []
    i = 1
    while not b.is_constant():
        a = gcd(b, d)
        if not a.is_constant():
            out.append((a, i))
        b = poly_divmod(b, a)[0]
        c = poly_divmod(d, a)[0]
        d = c - derivative(b)
        i += 1
    return out


# --- dyadic intervals -----------------------------------------------------

def _dyadic_parts(x: Fraction) -> tuple[int, int]:
    """Write a dyadic rational as m * 2**e with m odd (or m == 0, e == 0)."""
    x = Fraction(x)
    if x == 0:
        return 0, 0
    den = x.denominator
    if den & (den - 1):
        raise ValueError(f"{x} is not dyadic")
    m, e = x.numerator, -(den.bit_length() - 1)
    while m % 2 == 0:
        m //= 2
        e += 1
    return m, e


def format_dyadic(x: Fraction) -> str:
    m, e = _dyadic_parts(x)
    return f"{m}*2^{e}"


def parse_dyadic(text: str) -> Fraction:
    m, _, e = text.partition("*2^")
    m, e = int(m), int(e or 0)
    return Fraction(m) * (Fraction(2) ** e)


@dataclass(frozen=True)
class DyadicInterval:
    """Closed-endpoint dyadic interval.

    When ``lower < upper`` the isolated root lies strictly inside; when they
    are equal the root is that exact dyadic number.
    """

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower > upper")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def is_point(self) -> bool:
        return self.lower == self.upper

    def to_json(self) -> list:
        return [format_dyadic(self.lower), format_dyadic(self.upper)]

    @classmethod
    def from_json(cls, pair: Sequence[str]) -> "DyadicInterval":
        return cls(parse_dyadic(pair[0]), parse_dyadic(pair[1]))
