import csv
import io
import math
from fractions import Fraction as F

import mpmath
import pytest

from hermzeros.asymptotics import (
    LimitCheck,
    appell_scaling,
    central_zero_check,
    central_zero_index,
    combination_mehler_heine,
    default_tolerance,
    edge_zero_check,
    errors_decreasing,
    mehler_heine,
    mehler_heine_at_zero_exact,
    nonreal_zero_check,
    semicircle_integral,
    semicircle_statistic,
    write_series_csv,
)
from hermzeros.hermite import CombinationSpec as C


def test_limit_check_invariant():
    c = LimitCheck.make(10, 1.0, 1.04, 0.05)
    assert c.passes and abs(c.abs_error - 0.04) < 1e-15
    assert not LimitCheck.make(10, 1.0, 1.06, 0.05).passes
    assert default_tolerance(4) == 0.15 and default_tolerance(400) == 0.05


def test_mehler_heine_targets():
    assert mehler_heine(20, math.pi / 2, "even").target == pytest.approx(0, abs=1e-15)
    assert mehler_heine(20, math.pi / 2, "odd").target == 1.0
    c = mehler_heine(20, 0, "even")
    assert c.passes and abs(c.observed - 1) < 0.02


def test_mehler_heine_at_zero_is_wallis_ratio():
    for n in (1, 5, 20, 40):
        exact = float(mpmath.sqrt(n * mpmath.pi) * mpmath.mpf(mehler_heine_at_zero_exact(n).numerator)
                      / mehler_heine_at_zero_exact(n).denominator)
        assert mehler_heine(n, 0, "even").observed == pytest.approx(exact, rel=1e-14)


def test_mehler_heine_errors_shrink():
    for x in (0.3, 1.0, 2.0):
        for parity in ("even", "odd"):
            checks = [mehler_heine(n, x, parity) for n in (10, 20, 40, 80)]
            assert errors_decreasing(checks)
            assert checks[-1].abs_error < 0.03


def test_combination_mehler_heine():
    # at x = 0 with n - K even the limit is gamma_K
    spec = C([1, 2, F(-3, 2)])
    errs = [combination_mehler_heine(spec, n, 0.0).abs_error for n in (22, 42, 82)]
    assert errs[0] > errs[1] > errs[2]
    assert combination_mehler_heine(spec, 82, 0.0).target == -1.5
    assert combination_mehler_heine(C([1, -1]), 81, 1.0).target == pytest.approx(-math.cos(1.0))
    assert combination_mehler_heine(C([1, -1]), 82, 1.0).target == pytest.approx(-math.sin(1.0))


def test_appell_scaling():
    c = appell_scaling(C([1]), 80, 1)
    assert c.target == pytest.approx(math.exp(-0.25)) and c.passes
    c = appell_scaling(C([1, 0, 1]), 80, 1)
    assert c.target == pytest.approx(2 * math.exp(-0.25))
    errs = [appell_scaling(C([1, 0, 1]), n, 1).abs_error for n in (10, 20, 40, 80)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    errs = [appell_scaling(C([1, -2, 3]), n, 0.7 + 0.4j) for n in (30, 60, 120)]
    assert all(isinstance(c.observed, complex) for c in errs)
    assert errs[2].passes and errs[0].abs_error > errs[1].abs_error > errs[2].abs_error
    with pytest.raises(ValueError):
        appell_scaling(C([1]), 10, 0)


def test_central_zero():
    c = central_zero_check(C([1]), 40, 0, tolerance=0.05)
    assert c.passes and c.target == pytest.approx(math.pi / 2)
    assert central_zero_index(C([1]), 40, 0) == 21
    c = central_zero_check(C([1]), 41, 0)
    assert c.target == 0 and c.abs_error < 1e-12
    # gamma = [1, -1], n = 41: n - K = 40 even, so j = 1 targets 3 pi / 2
    errs = [central_zero_check(C([1, -1]), n, 1).abs_error for n in (41, 81, 161)]
    assert central_zero_check(C([1, -1]), 41, 1).target == pytest.approx(1.5 * math.pi)
    assert errs[0] > errs[1] > errs[2]
    with pytest.raises(IndexError):
        central_zero_check(C([1]), 10, 20)


def test_edge_zeros():
    (c,) = edge_zero_check(C([1, -1]), 60, tolerance=0.05)
    assert c.target == pytest.approx(1.0) and c.passes
    (c,) = edge_zero_check(C([1, 1]), 60, tolerance=0.05)
    assert c.target == pytest.approx(-1.0) and c.passes
    assert edge_zero_check(C([1]), 20) == []
    # P = (x + 2)(x - 1): one leftmost and one rightmost edge zero
    checks = edge_zero_check(C([1, 1, -2]), 60)
    assert [round(c.target) for c in checks] == [-2, 1]
    assert all(c.passes for c in checks)


def test_nonreal_zeros():
    checks = nonreal_zero_check(C([1, 0, 1]), 60, tolerance=0.05)
    assert len(checks) == 4 and all(c.passes for c in checks)
    assert [c.target for c in checks] == [0.0, -1.0, 0.0, 1.0]
    # conjugate pair: real parts agree, imaginary parts mirror
    assert checks[0].observed == pytest.approx(checks[2].observed, abs=1e-12)
    assert checks[1].observed == pytest.approx(-checks[3].observed)
    assert nonreal_zero_check(C([1, -1]), 30) == []


def test_semicircle():
    assert semicircle_integral("x2") == 0.25
    assert semicircle_integral("abs") == pytest.approx(4 / (3 * math.pi))
    bump = semicircle_integral("bump")
    assert 0 < bump < 0.5
    c = semicircle_statistic(C([1]), 60, "one")
    assert c.observed == 1.0
    c = semicircle_statistic(C([1, 0, 1]), 60, "one")
    assert c.observed == pytest.approx(58 / 60)
    a = semicircle_statistic(C([1]), 60, "x2", tolerance=0.03)
    b = semicircle_statistic(C([1, 0, 1]), 60, "x2", tolerance=0.03)
    assert a.passes and b.passes and abs(a.observed - b.observed) < 0.03
    # for pure Hermite the second moment is (n - 1) / (4n) exactly
    assert a.observed == pytest.approx(59 / 240, rel=1e-12)
    with pytest.raises(ValueError):
        semicircle_statistic(C([1]), 10, "cosine")


def test_csv_series():
    checks = [mehler_heine(n, 1.0, "odd") for n in (10, 20)]
    text = write_series_csv(checks)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["n", "observed", "target", "abs_error"]
    assert [int(r[0]) for r in rows[1:]] == [10, 20]
    assert float(rows[1][3]) == checks[0].abs_error
