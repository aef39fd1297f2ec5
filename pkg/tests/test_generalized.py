import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rationals
from hermzeros.exact_poly import Poly, apply_lambda
from hermzeros.generalized import (
    MultiIndexSpec,
    SequencePair,
    closed_form_rs,
    closed_form_rs_rational,
    elementary_symmetric,
    gaussian_moment,
    gen_hermite,
    gen_hermite_expansion,
    leading_coefficient_prediction,
    multiple_hermite,
    multiple_hermite_phi,
    multiple_orthogonality_defects,
    perturb_term,
    remove_term,
    step_orders,
)
from hermzeros.hermite import SpecError, hermite

x = Poly.x()
psis = rationals(-2, 4, 6).filter(lambda v: v > -2)


def test_gen_hermite_examples():
    assert gen_hermite(SequencePair([0, 0, 0], [0, 0, 0]), 3) == 8 * x**3 - 12 * x
    assert gen_hermite(SequencePair([1, 1], [0, 0]), 2) == 4 * x**2 + 4 * x - 1
    a, b = F(2, 3), F(-1, 2)
    assert gen_hermite(SequencePair([a], [b]), 1) == (2 + b) * x + a


def test_closed_form_examples():
    assert closed_form_rs(0, 0, 2) == hermite(2)
    assert closed_form_rs(1, 0, 1) == 2 * x + 1
    # (s+2)/2 = 4: 4 H_2(2x) = 64x^2 - 8, matching two recurrence steps
    assert closed_form_rs(0, 6, 2) == 64 * x**2 - 8
    assert closed_form_rs(0, 6, 2) == gen_hermite(SequencePair([0, 0], [6, 6]), 2)
    assert closed_form_rs_rational(0, 6, 2, 2) == 64 * x**2 - 8
    with pytest.raises(ValueError, match="degenerate leading coefficient"):
        closed_form_rs(1, -2, 3)


@given(rationals(), rationals(-1, 4).filter(lambda s: s != -2), st.integers(0, 10))
def test_closed_form_matches_recurrence(r, s, n):
    seq = SequencePair([r] * n, [s] * n)
    assert closed_form_rs(r, s, n) == gen_hermite(seq, n)


def test_elementary_symmetric():
    phi = [1, 2, 3]
    assert [elementary_symmetric(phi, i, 3) for i in range(4)] == [1, 6, 11, 6]
    assert elementary_symmetric([5, 7], 0, 2) == 1
    expanded = Poly.from_roots([-1, -2, -3])
    assert all(expanded[3 - i] == elementary_symmetric(phi, i, 3) for i in range(4))
    with pytest.raises(ValueError, match="index out of range"):
        elementary_symmetric(phi, 4, 3)


def test_expansion_examples():
    assert gen_hermite_expansion([1, 1], 2) == 4 * x**2 + 4 * x - 1
    assert gen_hermite_expansion([0] * 6, 6) == hermite(6)
    assert gen_hermite_expansion([1, 2], 2) == gen_hermite_expansion([2, 1], 2)


def test_remove_and_perturb():
    a, b, c = F(1), F(2), F(3)
    assert remove_term(SequencePair([a, b, c]), 2).phi == (a, c)
    assert remove_term(SequencePair([a]), 1).phi == ()
    assert perturb_term([1, 2], 1, 3) == (4, 2)
    assert perturb_term([1, 2], 2, 0) == (1, 2)
    seq = SequencePair([1, 2, 3])
    h = gen_hermite(remove_term(seq, 2), 2)
    assert gen_hermite(seq, 3) == apply_lambda(h) + h.scale(seq.phi_at(2))
    M = F(1, 2)
    lhs = gen_hermite(SequencePair(perturb_term([1, 2], 1, M)), 2)
    rhs = gen_hermite(SequencePair([1, 2]), 2) + gen_hermite(remove_term(SequencePair([1, 2]), 1), 1).scale(M)
    assert lhs == rhs


def test_multiple_hermite_examples():
    c = F(3, 5)
    assert multiple_hermite(MultiIndexSpec([1], [c])) == 2 * x - c
    assert multiple_hermite(MultiIndexSpec([0, 0, 0], [1, 2, 3])) == Poly([1])
    spec = MultiIndexSpec([1, 1], [1, -1])
    assert multiple_hermite_phi(spec) == (-1, 1)
    assert multiple_hermite(spec) == gen_hermite_expansion([-1, 1], 2) == 4 * x**2 - 3
    with pytest.raises(SpecError, match="parameters must be distinct"):
        MultiIndexSpec([1, 1], [2, 2])


def test_multiple_hermite_is_multiple_orthogonal():
    spec = MultiIndexSpec([2, 3, 1], [1, -1, F(1, 2)])
    H = multiple_hermite(spec)
    assert multiple_orthogonality_defects(spec, H) == []
    # a perturbed polynomial is caught by the oracle
    assert multiple_orthogonality_defects(spec, H + Poly([1])) != []


def test_gaussian_moments():
    # weight exp(-x^2): moments 1, 0, 1/2, 0, 3/4
    assert [gaussian_moment(0, k) for k in range(5)] == [1, 0, F(1, 2), 0, F(3, 4)]
    assert gaussian_moment(2, 1) == 1


def test_step_order_independence():
    spec = MultiIndexSpec([2, 1, 1], [1, F(-1, 2), 3])
    values = {multiple_hermite(spec, list(o)) for o in step_orders(spec)}
    assert len(values) == 1
    with pytest.raises(ValueError):
        multiple_hermite(spec, [0, 0, 0, 1])


@given(st.lists(rationals(), min_size=0, max_size=12))
def test_expansion_matches_recurrence(phi):
    n = len(phi)
    assert gen_hermite_expansion(phi, n) == gen_hermite(SequencePair(phi), n)


@given(st.lists(rationals(), max_size=8), st.lists(psis, max_size=8), st.integers(0, 8))
def test_leading_coefficient(phi, psi, n):
    seq = SequencePair(phi, psi)
    h = gen_hermite(seq, n)
    assert h.degree == n and h.leading == leading_coefficient_prediction(seq, n)


@given(st.lists(rationals(), min_size=1, max_size=8), st.randoms(use_true_random=False))
def test_symmetric_in_phi(phi, rnd):
    perm = list(phi)
    rnd.shuffle(perm)
    assert gen_hermite(SequencePair(phi), len(phi)) == gen_hermite(SequencePair(perm), len(phi))


def test_removal_identity_all_l():
    rng = random.Random(11)
    phi = [F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(15)]
    seq = SequencePair(phi)
    for n in range(14):
        for l in range(1, n + 2):
            h = gen_hermite(remove_term(seq, l), n)
            assert gen_hermite(seq, n + 1) == apply_lambda(h) + h.scale(seq.phi_at(l))


def test_perturbation_identity_all_l():
    rng = random.Random(12)
    phi = [F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(15)]
    seq = SequencePair(phi)
    for n in range(1, 16):
        for l in range(1, n + 1):
            M = F(rng.randint(-5, 5), 3)
            lhs = gen_hermite(SequencePair(perturb_term(phi, l, M)), n)
            assert lhs == gen_hermite(seq, n) + gen_hermite(remove_term(seq, l), n - 1).scale(M)
