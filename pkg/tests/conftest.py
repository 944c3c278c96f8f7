import numpy as np
import pytest
from fractions import Fraction

from arczeta.exact import QQi
from arczeta.fock import ExactCover
from arczeta.group import CoverElement, haar_unitary
from arczeta.weights import HCParameter


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def lam(*vals):
    return HCParameter.of(*[Fraction(v) for v in vals])


def random_cover(n, rng):
    """Haar unitary block pair with principal roots."""
    return CoverElement.from_blocks(haar_unitary(n, rng), np.exp(2j * np.pi * rng.uniform()))


def exact_unitary_2x2():
    """(1/5) [[3, 4i], [4i, 3]]: Gaussian-rational unitary with det 1."""
    f = Fraction(1, 5)
    return (
        (QQi(3 * f), QQi(0, 4 * f)),
        (QQi(0, 4 * f), QQi(3 * f)),
    )


def exact_phase_square():
    """y = ((3+4i)/5)^2 with its exact root (3+4i)/5."""
    zeta = QQi(Fraction(3, 5), Fraction(4, 5))
    return zeta * zeta, zeta


def exact_cover_2(kind="mix"):
    if kind == "mix":
        y, zy = exact_phase_square()
        return ExactCover(exact_unitary_2x2(), y, QQi(1) / zy)
    return ExactCover.identity(2)
