import os
from fractions import Fraction

import pytest

from dgwb.dgalg.algebra import DgAlgebra, koszul, polynomial_algebra
from dgwb.exactalg.base import BaseRing
from dgwb.io import load_algebra

FIXTURES = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "fixtures")

SAMPLE_XS = [Fraction(0), Fraction(1), Fraction(2), Fraction(1, 2), Fraction(-1)]


def fixture_path(*parts: str) -> str:
    return os.path.join(FIXTURES, *parts)


def twin_koszul() -> DgAlgebra:
    return DgAlgebra(BaseRing(("x",)), [("e1", -1), ("e2", -1)], {"e1": "x", "e2": "x"})


@pytest.fixture
def qx():
    return polynomial_algebra("x")


@pytest.fixture
def kx():
    return koszul()


@pytest.fixture
def twin():
    return twin_koszul()


@pytest.fixture
def sample_points():
    return [{"x": v} for v in SAMPLE_XS]


@pytest.fixture(params=["qx.json", "koszul.json", "twin.json", "pathx.json", "point.json"])
def fixture_algebra(request):
    return request.param, load_algebra(fixture_path(request.param))
