"""Truncated multivariate power series and the symbolic operator algebra.

The operators here (the Euler operator delta_j = x_j d/dx_j, its
Pochhammer shifts, the two-variable nabla/Delta pair, and the gamma-ratio
pair H / Hbar acting through a variable subset) all act diagonally on
monomials: each multiplies the coefficient at a multi-index by a factor
built from the index alone. That diagonal form is what the fast path
uses. Each operator also has an explicit multi-sum expansion, finite on
polynomials because (-m)_k vanishes for k > m; those expansions are kept
as independent oracles (`*_series` functions) and never used for real
work.

Variable indices are 1-based throughout.
"""

import itertools
import math
from types import MappingProxyType

from .errors import ParamError, SingularParamError
from .series import Family, LauricellaParams, _SHAPES, _is_nonpos_int, pochhammer

__all__ = [
    "TruncatedSeries",
    "build_series",
    "euler_delta",
    "pochhammer_shifted_delta",
    "pochhammer_neg_delta",
    "apply_H",
    "apply_Hbar",
    "apply_nabla",
    "apply_delta_bc",
    "apply_nabla_delta",
    "apply_H_superposition",
    "apply_Hbar_superposition",
    "apply_H_series",
    "apply_Hbar_series",
    "apply_nabla_series",
    "apply_delta_bc_series",
    "apply_nabla_delta_series",
    "apply_H_superposition_series",
    "apply_Hbar_superposition_series",
]


class TruncatedSeries:
    """Immutable sparse polynomial: multi-index -> coefficient, keys with
    total degree <= degree_cap, zero coefficients not stored."""

    __slots__ = ("arity", "degree_cap", "coeffs")

    def __init__(self, arity: int, degree_cap: int, coeffs: dict):
        if arity < 1:
            raise ValueError("arity must be >= 1")
        if degree_cap < 0:
            raise ValueError("degree_cap must be >= 0")
        clean = {}
        for m, c in coeffs.items():
            m = tuple(int(v) for v in m)
            if len(m) != arity or any(v < 0 for v in m):
                raise ValueError(f"bad multi-index {m}")
            if sum(m) > degree_cap:
                raise ValueError(f"key {m} exceeds degree cap {degree_cap}")
            c = float(c)
            if c != 0.0:
                clean[m] = c
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "degree_cap", degree_cap)
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    def coeff(self, m) -> float:
        return self.coeffs.get(tuple(m), 0.0)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if other.arity != self.arity:
            raise ValueError("arity mismatch")
        cap = max(self.degree_cap, other.degree_cap)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0.0) + c
        return TruncatedSeries(self.arity, cap, out)

    def __rmul__(self, c):
        c = float(c)
        return TruncatedSeries(self.arity, self.degree_cap,
                               {m: c * v for m, v in self.coeffs.items()})

    def __mul__(self, c):
        return self.__rmul__(c)

    def max_abs_diff(self, other) -> float:
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self.coeff(m) - other.coeff(m)) for m in keys),
                   default=0.0)

    def __repr__(self):
        return (f"TruncatedSeries(arity={self.arity}, cap={self.degree_cap}, "
                f"{len(self.coeffs)} coeffs)")


def _diagonal(s: TruncatedSeries, factor) -> TruncatedSeries:
    return TruncatedSeries(s.arity, s.degree_cap,
                           {m: c * factor(m) for m, c in s.coeffs.items()})


def _check_vars(s: TruncatedSeries, vars_):
    vs = tuple(vars_)
    if not vs:
        raise ParamError("empty variable subset")
    for j in vs:
        if not 1 <= j <= s.arity:
            raise IndexError(f"variable index {j} out of range 1..{s.arity}")
    if len(set(vs)) != len(vs):
        raise ParamError("repeated variable index")
    return vs


def _check_not_nonpos_int(**named):
    for name, v in named.items():
        if _is_nonpos_int(float(v)):
            raise ParamError(f"{name} = {v} is a non-positive integer")


def build_series(params: LauricellaParams, cap: int) -> TruncatedSeries:
    """Taylor coefficients of the family series through total degree cap."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    r = params.arity
    fam = params.family
    al, be, ga = params.alpha, params.beta, params.gamma
    coeffs = {}
    for m in itertools.product(range(cap + 1), repeat=r):
        t = sum(m)
        if t > cap:
            continue
        fct = 1.0
        for mi in m:
            fct *= pochhammer(1.0, mi)  # mi! as float, overflow-safe
        if fam is Family.A:
            num = pochhammer(al[0], t)
            den = fct
            for i in range(r):
                num *= pochhammer(be[i], m[i])
                den *= pochhammer(ga[i], m[i])
        elif fam is Family.B:
            num = 1.0
            for i in range(r):
                num *= pochhammer(al[i], m[i]) * pochhammer(be[i], m[i])
            den = pochhammer(ga[0], t) * fct
        elif fam is Family.C:
            num = pochhammer(al[0], t) * pochhammer(be[0], t)
            den = fct
            for i in range(r):
                den *= pochhammer(ga[i], m[i])
        else:
            num = pochhammer(al[0], t)
            for i in range(r):
                num *= pochhammer(be[i], m[i])
            den = pochhammer(ga[0], t) * fct
        coeffs[m] = num / den
    return TruncatedSeries(r, cap, coeffs)


# ---------------------------------------------------------------------------
# elementary Euler-operator actions
# ---------------------------------------------------------------------------

def euler_delta(s: TruncatedSeries, j: int) -> TruncatedSeries:
    """delta_j = x_j d/dx_j: multiplies the coefficient at m by m_j."""
    (j,) = _check_vars(s, (j,))
    return _diagonal(s, lambda m: float(m[j - 1]))


def pochhammer_shifted_delta(s: TruncatedSeries, j: int, alpha: float,
                             n: int) -> TruncatedSeries:
    """(delta_j + alpha)_n: multiplies the coefficient at m by (m_j + alpha)_n."""
    (j,) = _check_vars(s, (j,))
    if n < 0:
        raise ValueError("n must be >= 0")
    return _diagonal(s, lambda m: pochhammer(m[j - 1] + alpha, n))


def pochhammer_neg_delta(s: TruncatedSeries, j: int, n: int) -> TruncatedSeries:
    """(-delta_j)_n: multiplies by (-m_j)_n, killing every m with m_j < n."""
    (j,) = _check_vars(s, (j,))
    if n < 0:
        raise ValueError("n must be >= 0")
    return _diagonal(s, lambda m: pochhammer(float(-m[j - 1]), n))


# ---------------------------------------------------------------------------
# the gamma-ratio pair H / Hbar over a variable subset
# ---------------------------------------------------------------------------

def apply_H(s: TruncatedSeries, vars_, alpha: float, beta: float
            ) -> TruncatedSeries:
    """Diagonal action: coefficient at m gets (alpha)_t/(beta)_t,
    t the total of m over vars_."""
    vs = _check_vars(s, vars_)
    _check_not_nonpos_int(alpha=alpha, beta=beta)
    idx = [j - 1 for j in vs]

    def factor(m):
        t = sum(m[i] for i in idx)
        return pochhammer(alpha, t) / pochhammer(beta, t)

    return _diagonal(s, factor)


def apply_Hbar(s: TruncatedSeries, vars_, alpha: float, beta: float
               ) -> TruncatedSeries:
    """Inverse of apply_H at the same (alpha, beta): factor (beta)_t/(alpha)_t."""
    vs = _check_vars(s, vars_)
    _check_not_nonpos_int(alpha=alpha, beta=beta)
    idx = [j - 1 for j in vs]

    def factor(m):
        t = sum(m[i] for i in idx)
        return pochhammer(beta, t) / pochhammer(alpha, t)

    return _diagonal(s, factor)


def apply_H_series(s: TruncatedSeries, vars_, alpha: float, beta: float
                   ) -> TruncatedSeries:
    """Oracle path: the explicit expansion
    sum_k (beta-alpha)_K prod (-m_j)_{k_j} / ((beta)_K prod k_j!)."""
    vs = _check_vars(s, vars_)
    _check_not_nonpos_int(alpha=alpha, beta=beta)
    idx = [j - 1 for j in vs]

    def factor(m):
        tot = 0.0
        for ks in itertools.product(*(range(m[i] + 1) for i in idx)):
            K = sum(ks)
            num = pochhammer(beta - alpha, K)
            den = pochhammer(beta, K)
            for i, k in zip(idx, ks):
                num *= pochhammer(float(-m[i]), k)
                den *= pochhammer(1.0, k)
            tot += num / den
        return tot

    return _diagonal(s, factor)


def apply_Hbar_series(s: TruncatedSeries, vars_, alpha: float, beta: float
                      ) -> TruncatedSeries:
    """Oracle path: like apply_H_series but with (1 - alpha - t)_K in the
    denominator, t the monomial total over vars_; a zero denominator for a
    contributing term raises (the diagonal form stays finite there)."""
    vs = _check_vars(s, vars_)
    _check_not_nonpos_int(alpha=alpha, beta=beta)
    idx = [j - 1 for j in vs]

    def factor(m):
        t = sum(m[i] for i in idx)
        tot = 0.0
        for ks in itertools.product(*(range(m[i] + 1) for i in idx)):
            K = sum(ks)
            num = pochhammer(beta - alpha, K)
            for i, k in zip(idx, ks):
                num *= pochhammer(float(-m[i]), k)
            den = pochhammer(1.0 - alpha - t, K)
            if den == 0.0:
                if num == 0.0:
                    continue
                raise SingularParamError(
                    f"(1 - alpha - {t})_{K} = 0 in the expansion")
            for k in ks:
                den *= pochhammer(1.0, k)
            tot += num / den
        return tot

    return _diagonal(s, factor)


# ---------------------------------------------------------------------------
# the two-variable nabla / Delta pair
# ---------------------------------------------------------------------------

def _need_two_vars(s: TruncatedSeries):
    if s.arity != 2:
        raise ParamError("this operator acts on two-variable series")


def apply_nabla(s: TruncatedSeries, h: float) -> TruncatedSeries:
    """Coefficient at (i, j) gets (h)_{i+j} / ((h)_i (h)_j)."""
    _need_two_vars(s)
    _check_not_nonpos_int(h=h)
    return _diagonal(s, lambda m: pochhammer(h, m[0] + m[1])
                     / (pochhammer(h, m[0]) * pochhammer(h, m[1])))


def apply_delta_bc(s: TruncatedSeries, h: float) -> TruncatedSeries:
    """Coefficient at (i, j) gets (h)_i (h)_j / (h)_{i+j}; inverts apply_nabla."""
    _need_two_vars(s)
    _check_not_nonpos_int(h=h)
    return _diagonal(s, lambda m: pochhammer(h, m[0]) * pochhammer(h, m[1])
                     / pochhammer(h, m[0] + m[1]))


def apply_nabla_delta(s: TruncatedSeries, h: float, g: float) -> TruncatedSeries:
    return apply_nabla(apply_delta_bc(s, g), h)


def apply_nabla_series(s: TruncatedSeries, h: float) -> TruncatedSeries:
    """Oracle: sum_k (-i)_k (-j)_k / ((h)_k k!)."""
    _need_two_vars(s)
    _check_not_nonpos_int(h=h)

    def factor(m):
        i, j = m
        tot = 0.0
        for k in range(min(i, j) + 1):
            tot += (pochhammer(float(-i), k) * pochhammer(float(-j), k)
                    / (pochhammer(h, k) * pochhammer(1.0, k)))
        return tot

    return _diagonal(s, factor)


def apply_delta_bc_series(s: TruncatedSeries, h: float, variant: int = 1
                          ) -> TruncatedSeries:
    """Oracle for the Delta operator; the source gives two expansions:
    variant 1 uses (1-h-i-j)_k denominators, variant 2 the alternating
    (h)_{2k} / ((h+k-1)_k (h+i)_k (h+j)_k) form. Both agree."""
    _need_two_vars(s)
    _check_not_nonpos_int(h=h)

    def factor(m):
        i, j = m
        tot = 0.0
        for k in range(min(i, j) + 1):
            num = pochhammer(float(-i), k) * pochhammer(float(-j), k)
            if variant == 1:
                den = pochhammer(1.0 - h - i - j, k)
            else:
                num *= (-1.0) ** k * pochhammer(h, 2 * k)
                den = (pochhammer(h + k - 1.0, k) * pochhammer(h + i, k)
                       * pochhammer(h + j, k))
            if den == 0.0:
                if num == 0.0:
                    continue
                raise SingularParamError("expansion denominator pole")
            tot += num / (den * pochhammer(1.0, k))
        return tot

    return _diagonal(s, factor)


def apply_nabla_delta_series(s: TruncatedSeries, h: float, g: float,
                             variant: str = "second") -> TruncatedSeries:
    """Oracles for the composed nabla(h) Delta(g).

    variant "second": sum_k (h-g)_k (-i)_k (-j)_k / ((h)_k (1-g-i-j)_k k!),
    which matches the diagonal composition. variant "first-corrected" is
    the (g-h)_k (g)_{2k} form with an (h)_k factor inserted in the
    denominator; "first-verbatim" is that form exactly as printed, kept
    to document that it does NOT reproduce the composition.
    """
    _need_two_vars(s)
    _check_not_nonpos_int(h=h, g=g)

    def factor(m):
        i, j = m
        tot = 0.0
        for k in range(min(i, j) + 1):
            nk = pochhammer(float(-i), k) * pochhammer(float(-j), k)
            if variant == "second":
                num = pochhammer(h - g, k) * nk
                den = pochhammer(h, k) * pochhammer(1.0 - g - i - j, k)
            else:
                num = pochhammer(g - h, k) * pochhammer(g, 2 * k) * nk
                den = (pochhammer(g + k - 1.0, k) * pochhammer(g + i, k)
                       * pochhammer(g + j, k))
                if variant == "first-corrected":
                    den *= pochhammer(h, k)
            if den == 0.0:
                if num == 0.0:
                    continue
                raise SingularParamError("expansion denominator pole")
            tot += num / (den * pochhammer(1.0, k))
        return tot

    return _diagonal(s, factor)


# ---------------------------------------------------------------------------
# superpositions of two H (or two Hbar) over all variables
# ---------------------------------------------------------------------------

def apply_H_superposition(s: TruncatedSeries, alpha: float, eps1: float,
                          beta: float, eps2: float) -> TruncatedSeries:
    """H(alpha, eps1) then H(beta, eps2) over all variables:
    factor (alpha)_t (beta)_t / ((eps1)_t (eps2)_t)."""
    allv = tuple(range(1, s.arity + 1))
    return apply_H(apply_H(s, allv, beta, eps2), allv, alpha, eps1)


def apply_Hbar_superposition(s: TruncatedSeries, eps1: float, alpha: float,
                             eps2: float, beta: float) -> TruncatedSeries:
    """Hbar(eps1, alpha) then Hbar(eps2, beta) over all variables: inverse
    of the H superposition, factor (eps1)_t (eps2)_t / ((alpha)_t (beta)_t)."""
    allv = tuple(range(1, s.arity + 1))
    return apply_Hbar(apply_Hbar(s, allv, eps2, beta), allv, eps1, alpha)


def apply_H_superposition_series(s: TruncatedSeries, alpha: float, eps1: float,
                                 beta: float, eps2: float) -> TruncatedSeries:
    """Oracle: the printed double multi-sum for the H superposition,

      sum_{k,l} (eps1-alpha)_K (eps2-beta)_L (beta)_K prod (-m_i)_{k_i+l_i}
                / ((eps1)_K (eps2)_{K+L} prod k_i! l_i!)

    with K = sum k_i, L = sum l_i, over all variables."""
    _check_not_nonpos_int(alpha=alpha, beta=beta, eps1=eps1, eps2=eps2)
    r = s.arity

    def factor(m):
        tot = 0.0
        for ks in itertools.product(*(range(mi + 1) for mi in m)):
            rem = [mi - ki for mi, ki in zip(m, ks)]
            K = sum(ks)
            for ls in itertools.product(*(range(ri + 1) for ri in rem)):
                L = sum(ls)
                num = (pochhammer(eps1 - alpha, K) * pochhammer(eps2 - beta, L)
                       * pochhammer(beta, K))
                den = pochhammer(eps1, K) * pochhammer(eps2, K + L)
                for i in range(r):
                    num *= pochhammer(float(-m[i]), ks[i] + ls[i])
                    den *= pochhammer(1.0, ks[i]) * pochhammer(1.0, ls[i])
                tot += num / den
        return tot

    return _diagonal(s, factor)


def apply_Hbar_superposition_series(s: TruncatedSeries, eps1: float,
                                    alpha: float, eps2: float, beta: float
                                    ) -> TruncatedSeries:
    """Oracle: the printed double multi-sum for the Hbar superposition,

      sum_{k,l} (-1)^K (alpha-eps1)_K (beta-eps2)_{K+L} (beta)_K
                prod (-m_i)_{k_i+l_i}
                / ((beta-eps2)_K prod k_i! l_i!
                   (1-eps1-t)_K (1-eps2-t)_{K+L})

    t the monomial total. The quotient (beta-eps2)_{K+L}/(beta-eps2)_K is
    taken as (beta-eps2+K)_L so a terminating numerator does not produce
    0/0; genuine poles raise."""
    _check_not_nonpos_int(alpha=alpha, beta=beta, eps1=eps1, eps2=eps2)
    r = s.arity

    def factor(m):
        t = sum(m)
        tot = 0.0
        for ks in itertools.product(*(range(mi + 1) for mi in m)):
            rem = [mi - ki for mi, ki in zip(m, ks)]
            K = sum(ks)
            for ls in itertools.product(*(range(ri + 1) for ri in rem)):
                L = sum(ls)
                num = (pochhammer(alpha - eps1, K)
                       * pochhammer(beta - eps2 + K, L)
                       * pochhammer(beta, K))
                if K % 2:
                    num = -num
                den = (pochhammer(1.0 - eps1 - t, K)
                       * pochhammer(1.0 - eps2 - t, K + L))
                for i in range(r):
                    num *= pochhammer(float(-m[i]), ks[i] + ls[i])
                    den *= pochhammer(1.0, ks[i]) * pochhammer(1.0, ls[i])
                if den == 0.0:
                    if num == 0.0:
                        continue
                    raise SingularParamError("expansion denominator pole")
                tot += num / den
        return tot

    return _diagonal(s, factor)
