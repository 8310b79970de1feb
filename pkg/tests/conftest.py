from fractions import Fraction

from hypothesis import strategies as st

from gccert.novikov import NovikovSeries


DENS = (1, 2, 3, 4, 6)


@st.composite
def rationals(draw, lo=-20, hi=20, nonzero=False):
    d = draw(st.sampled_from(DENS))
    n = draw(st.integers(lo * d, hi * d))
    if nonzero and n == 0:
        n = d
    return Fraction(n, d)


@st.composite
def series(draw, min_exp=0, unit=False, max_terms=5, cap=None):
    """Random truncated series; with ``unit`` the constant term is nonzero."""
    if cap is None:
        cap = Fraction(draw(st.integers(2, 12)), draw(st.sampled_from(DENS)))
    k = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(k):
        d = draw(st.sampled_from(DENS))
        e = Fraction(draw(st.integers(int(min_exp * d), int(cap * d))), d)
        terms[e] = draw(rationals(nonzero=True))
    if unit:
        terms = {e: c for e, c in terms.items() if e > 0}
        terms[Fraction(0)] = draw(rationals(nonzero=True))
    return NovikovSeries(terms, cap)


def square_units():
    """Units whose constant term is a positive rational square."""
    return st.tuples(series(unit=True), st.integers(1, 6), st.integers(1, 6)).map(
        lambda a: NovikovSeries({**dict(a[0].terms), 0: Fraction(a[1] ** 2, a[2] ** 2)}, a[0].cap))


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
