from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from efcert.efunction import augment_exp, catalog


def build_exp_pair():
    base, _ = catalog("exp", beta=1)
    return augment_exp(base, 2)


def build_j0():
    return catalog("bessel_j0")[0]


def build_kummer():
    return catalog("1f1", a=Fraction(1, 3), b=Fraction(1, 2))[0]


@pytest.fixture(scope="session")
def exp_pair():
    return build_exp_pair()


@pytest.fixture(scope="session")
def j0():
    return build_j0()


@pytest.fixture(scope="session")
def kummer():
    return build_kummer()
