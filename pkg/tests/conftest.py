from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hermzeros.exact_poly import Poly

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def rationals(lo=-5, hi=5, max_den=6):
    return st.builds(Fraction, st.integers(lo * max_den, hi * max_den), st.integers(1, max_den))


def polys(max_degree=6, nonzero=False):
    out = st.lists(rationals(), min_size=0, max_size=max_degree + 1).map(Poly)
    if nonzero:
        out = out.filter(lambda p: not p.is_zero())
    return out


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if rep.when != "call":
                continue
            lines += [v for k, v in rep.user_properties if k == "result"]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip("."))):
            terminalreporter.write_line(line)
