import itertools

import pytest
from sympy import Rational
from sympy.physics.wigner import clebsch_gordan as sym_cg
from sympy.physics.wigner import wigner_6j as sym_6j

from srsqueeze.dm.angular import clebsch_gordan, wigner_6j
from srsqueeze.errors import DomainError

HALF = [Rational(k, 2) for k in range(0, 7)]


def _mvals(j):
    return [j - k for k in range(int(2 * j) + 1)]


@pytest.mark.parametrize("j1,j2", [(Rational(1, 2), 1), (1, 1), (Rational(3, 2), 1),
                                   (2, 1), (Rational(3, 2), Rational(3, 2))])
def test_clebsch_gordan_matches_sympy(j1, j2):
    j1, j2 = Rational(j1), Rational(j2)
    J = abs(j1 - j2)
    while J <= j1 + j2:
        for m1, m2 in itertools.product(_mvals(j1), _mvals(j2)):
            M = m1 + m2
            if abs(M) > J:
                continue
            ref = float(sym_cg(j1, j2, J, m1, m2, M))
            assert clebsch_gordan(j1, m1, j2, m2, J, M) == pytest.approx(ref, abs=1e-13)
        J += 1


def test_sixj_matches_sympy():
    count = 0
    for args in itertools.product(HALF[:5], repeat=6):
        if sum(2 * a for a in args) > 20:
            continue
        try:
            ref = sym_6j(*args)
        except ValueError:  # sympy rejects non-integer triad sums
            ref = 0
        assert wigner_6j(*args) == pytest.approx(float(ref), abs=1e-12)
        count += ref != 0
    assert count > 100


def test_orthonormality():
    j1, j2 = 1.5, 1
    for J in (0.5, 1.5, 2.5):
        for M in _mvals(J):
            s = sum(clebsch_gordan(j1, m1, j2, M - m1, J, M) ** 2
                    for m1 in _mvals(j1) if abs(M - m1) <= j2)
            assert s == pytest.approx(1.0)


def test_selection_rules_give_zero():
    assert clebsch_gordan(0.5, 0.5, 1, 1, 0.5, 0.5) == 0.0
    assert clebsch_gordan(0.5, 0.5, 1, 0, 3.5, 0.5) == 0.0


def test_invalid_momenta():
    with pytest.raises(DomainError):
        clebsch_gordan(0.3, 0.3, 1, 0, 1, 0)
    with pytest.raises(DomainError):
        clebsch_gordan(1, 0.5, 1, 0, 1, 0.5)
