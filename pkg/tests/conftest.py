"""Shared (session-scoped) fixtures so the expensive evaluations run once."""

import pytest

from k3mahler import fixtures as fx
from k3mahler import lfunctions, mahler, mwsections as mw


@pytest.fixture(scope="session")
def quad():
    """Memoized Jensen-quadrature values keyed by (k, tol)."""
    cache = {}

    def get(k, tol=1e-8):
        key = (float(k), tol)
        if key not in cache:
            cache[key] = mahler.mahler_quadrature(k, tol=tol)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def hecke():
    cache = {}

    def get(disc, N=2_000_000):
        if (disc, N) not in cache:
            cache[(disc, N)] = lfunctions.hecke_lvalue(
                lfunctions.FORM_SERIES[disc], s=3, N=N)
        return cache[(disc, N)]

    return get


@pytest.fixture(scope="session")
def d3_value():
    return lfunctions.d3(prec=128)


@pytest.fixture(scope="session")
def k18():
    """The k=18 exact-section bundle: curve, sections, b-form, halving sum."""
    E = fx.y18_curve()
    ps = fx.infinite_section_k18()
    hd = fx.halving_data()
    Eb = mw.FunctionFieldCurve.from_coeffs(0, hd["bform_a"], 0, hd["bform_b"], 0)
    Pb = mw.to_completed_square(ps, E)
    Q = mw.ec_add(Pb, mw.to_completed_square(fx.torsion_multiples_k18()[2], E), Eb)
    return {"E": E, "ps": ps, "halving": hd, "Eb": Eb, "Pb": Pb, "Q": Q,
            "twist_curve": fx.y18_twist_curve(), "pm3": fx.twist_section()}


@pytest.fixture(scope="session")
def pm3_nontorsion(k18):
    return mw.verify_nontorsion(k18["pm3"], k18["twist_curve"])
