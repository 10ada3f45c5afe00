"""Shared test fixtures: an independent brute-force series oracle.

The oracle computes every term from scratch with scipy's Pochhammer and
exact factorials, summed over all multi-indices up to a total-degree
cap. It shares no code with the production kernels (which build terms
by neighbor recurrences), so agreement is meaningful.
"""

import itertools
import math

import numpy as np
from scipy.special import poch

from lauricella.series import Family


def _indices(r, cap):
    for m in itertools.product(range(cap + 1), repeat=r):
        if sum(m) <= cap:
            yield m


def brute_lauricella(family, alpha, beta, gamma, point, cap):
    """Direct term-by-term sum of one family to total degree `cap`."""
    fam = Family(family)
    r = len(point)
    total = 0.0
    for m in _indices(r, cap):
        s = sum(m)
        if fam is Family.A:
            num = poch(alpha[0], s) * np.prod(
                [poch(b, k) for b, k in zip(beta, m)])
            den = np.prod([poch(g, k) for g, k in zip(gamma, m)])
        elif fam is Family.B:
            num = np.prod([poch(a, k) * poch(b, k)
                           for a, b, k in zip(alpha, beta, m)])
            den = poch(gamma[0], s)
        elif fam is Family.C:
            num = poch(alpha[0], s) * poch(beta[0], s)
            den = np.prod([poch(g, k) for g, k in zip(gamma, m)])
        else:
            num = poch(alpha[0], s) * np.prod(
                [poch(b, k) for b, k in zip(beta, m)])
            den = poch(gamma[0], s)
        den *= np.prod([float(math.factorial(k)) for k in m])
        total += num / den * np.prod([x ** k for x, k in zip(point, m)])
    return float(total)


def brute_gauss_2f1(a, b, c, z, cap):
    return sum(poch(a, k) * poch(b, k) / (poch(c, k) * math.factorial(k))
               * z ** k for k in range(cap + 1))
