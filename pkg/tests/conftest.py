"""Shared builders for the lattices used across the test suite."""

from fractions import Fraction

import pytest

from pss.lattice_core import build_discriminant_form, parse_gram


GRAM_TRIVIAL = ""
GRAM_ZX2 = "[[2]]"
GRAM_SPLIT = "[[2,0],[0,-2]]"
GRAM_OVERPARTITION = "[[2,0,0],[0,-2,0],[0,0,2]]"
GRAM_EIGHT = "[[0,0,2],[0,2,0],[2,0,0]]"
GRAM_NONSQUARE = "[[2,1],[1,-2]]"
GRAM_HYPERBOLIC = "[[0,1],[1,0]]"

ALL_GRAMS = (
    GRAM_TRIVIAL,
    GRAM_ZX2,
    GRAM_SPLIT,
    GRAM_OVERPARTITION,
    GRAM_EIGHT,
    GRAM_NONSQUARE,
    GRAM_HYPERBOLIC,
)


def form_of(text):
    return build_discriminant_form(parse_gram(text))


@pytest.fixture(scope="session")
def trivial_form():
    return form_of(GRAM_TRIVIAL)


@pytest.fixture(scope="session")
def zx2_form():
    return form_of(GRAM_ZX2)


@pytest.fixture(scope="session")
def split_form():
    return form_of(GRAM_SPLIT)


@pytest.fixture(scope="session")
def overpartition_form():
    return form_of(GRAM_OVERPARTITION)


@pytest.fixture(scope="session")
def nonsquare_form():
    return form_of(GRAM_NONSQUARE)


def frac(x) -> Fraction:
    return Fraction(x)
