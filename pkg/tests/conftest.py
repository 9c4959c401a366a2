import os

from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from arithwron.arithfn import ArithFn
from arithwron.scalar import ZERO, LogPoly, make_scalar

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

PRIMES = (2, 3, 5, 7)

rationals = st.builds(
    mpq, st.integers(-20, 20), st.integers(1, 6)
)
nonzero_rationals = rationals.filter(bool)


@st.composite
def logpolys(draw, max_terms=3):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        code = 1
        for p in draw(st.lists(st.sampled_from(PRIMES), max_size=2)):
            code *= p
        terms[code] = terms.get(code, ZERO) + draw(rationals)
    out = LogPoly.const(0)
    for code, c in terms.items():
        mono = LogPoly.const(c)
        for p, e in _factor(code):
            for _ in range(e):
                mono = mono * LogPoly.symbol(p)
        out = out + mono
    return out


def _factor(code):
    from arithwron.ntheory import factorize

    return factorize(code) if code > 1 else ()


@st.composite
def scalars(draw):
    num = draw(logpolys())
    den = draw(logpolys(max_terms=2).filter(lambda d: not d.is_zero()))
    return make_scalar(num, den)


@st.composite
def arithfns(draw, precision=24, max_nonzeros=6, lo=1):
    idx = draw(st.lists(st.integers(lo, precision), max_size=max_nonzeros, unique=True))
    vals = [ZERO] * precision
    for n in idx:
        vals[n - 1] = draw(nonzero_rationals)
    return ArithFn._raw(vals)


# one line per acceptance criterion, shown after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
