"""Clebsch-Gordan coefficients and 6j symbols (Condon-Shortley phase).

Angular momenta may be given as ints, floats or Fractions; half-integers are
handled by working with doubled integers internally.
"""

from functools import lru_cache
from math import factorial, sqrt

from ..errors import DomainError


def _twice(j):
    t = round(2 * float(j))
    if abs(2 * float(j) - t) > 1e-9:
        raise DomainError(f"{j!r} is not an integer or half-integer")
    return t


def _check_triad(a, b, c):
    # doubled values
    return (a + b - c) >= 0 and (a - b + c) >= 0 and (-a + b + c) >= 0 and (a + b + c) % 2 == 0


def _fact2(n2):
    # factorial of a doubled-integer argument that must be even
    return factorial(n2 // 2)


@lru_cache(maxsize=65536)
def _cg2(j1, m1, j2, m2, J, M):
    if m1 + m2 != M:
        return 0.0
    if abs(m1) > j1 or abs(m2) > j2 or abs(M) > J:
        return 0.0
    if not _check_triad(j1, j2, J):
        return 0.0
    pre = (J + 1) * _fact2(J + j1 - j2) * _fact2(J - j1 + j2) * _fact2(j1 + j2 - J)
    pre /= _fact2(j1 + j2 + J + 2)
    pre *= (_fact2(J + M) * _fact2(J - M) * _fact2(j1 - m1) * _fact2(j1 + m1)
            * _fact2(j2 - m2) * _fact2(j2 + m2))
    total = 0.0
    k = 0
    while True:
        d = [k,
             j1 + j2 - J - k,
             j1 - m1 - k,
             j2 + m2 - k,
             J - j2 + m1 + k,
             J - j1 - m2 + k]
        if d[1] < 0 or d[2] < 0 or d[3] < 0:
            break
        if d[4] >= 0 and d[5] >= 0:
            den = 1
            for x in d:
                den *= _fact2(x)
            total += (-1) ** (k // 2) / den
        k += 2
    return sqrt(pre) * total


def clebsch_gordan(j1, m1, j2, m2, J, M):
    """<j1 m1; j2 m2 | J M> by the Racah formula.

    Projections that are inconsistent (m1 + m2 != M, |m| > j) or a violated
    triangle rule give 0. Arguments that are not (half-)integers, or
    projections whose parity does not match their momentum, raise DomainError.
    """
    args = [_twice(x) for x in (j1, m1, j2, m2, J, M)]
    for j, m in ((args[0], args[1]), (args[2], args[3]), (args[4], args[5])):
        if j < 0:
            raise DomainError("negative angular momentum")
        if (j - m) % 2:
            raise DomainError("projection and momentum differ by a non-integer")
    return _cg2(*args)


def _delta2(a, b, c):
    return sqrt(_fact2(a + b - c) * _fact2(a - b + c) * _fact2(-a + b + c)
                / _fact2(a + b + c + 2))


@lru_cache(maxsize=65536)
def _sixj2(j1, j2, j3, j4, j5, j6):
    triads = ((j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3))
    if not all(_check_triad(*t) for t in triads):
        return 0.0
    pre = 1.0
    for t in triads:
        pre *= _delta2(*t)
    a = [sum(t) for t in triads]
    b = [j1 + j2 + j4 + j5, j2 + j3 + j5 + j6, j3 + j1 + j6 + j4]
    total = 0.0
    for t in range(max(a), min(b) + 1, 2):
        den = 1.0
        for x in a:
            den *= _fact2(t - x)
        for y in b:
            den *= _fact2(y - t)
        total += (-1) ** (t // 2) * _fact2(t + 2) / den
    return pre * total


def wigner_6j(j1, j2, j3, j4, j5, j6):
    """{j1 j2 j3; j4 j5 j6} by the Racah formula (0 if any triad fails)."""
    return _sixj2(*(_twice(x) for x in (j1, j2, j3, j4, j5, j6)))
