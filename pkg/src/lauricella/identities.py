"""Catalog of operational representations and their verification.

Each representation states that a family function equals a chain of
H / Hbar operators applied to an inner function (a family member with
auxiliary slots in place of some parameters, or an elementary product
like prod (1-x_i)^{-b_i}). Since every operator in a chain acts
diagonally on coefficients, verification is coefficient-level: build
the inner series, apply the chain, diff against the left side.

Four representations express the right side through a function of
composite arguments (y/(1-x) and the like). For those the check is
numeric and pointwise: the operator action is folded through the
x-degree slices of the inner function, which turns each identity into
an outer sum of parameter-shifted evaluations.

Chains are stored declaratively: (kind, variables, upper slot, lower
slot), variables being explicit 1-based indices or "all".
"""

import itertools
import math
from dataclasses import dataclass

from .errors import ParamError
from .report import VerifyReport
from .series import (EvalOptions, Family, LauricellaParams, eval_appell_f2,
                     eval_gauss_2f1, eval_lauricella, pochhammer)
from .taylor import TruncatedSeries, apply_H, apply_Hbar, build_series, \
    pochhammer_neg_delta

__all__ = [
    "OperatorIdentityDescriptor",
    "list_operator_identities",
    "operator_identity",
    "sample_bindings",
    "sample_delegated_points",
    "verify_operational_identity",
    "neg_delta_action_on_fd",
    "derivation_chain_closure",
]

_TINY = 5e-324


@dataclass(frozen=True)
class OperatorIdentityDescriptor:
    id: str
    family: Family
    arity: int | None          # None: holds for every r; bindings carry r
    lhs_kind: str              # "series" | "binomials" | "multinomial"
    chain: tuple               # steps (kind, vars, upper_slot, lower_slot)
    inner_kind: str            # "series" | "binomials" | "multinomial"
    inner_slots: tuple | None  # (alpha_spec, beta_spec, gamma_spec)
    free_slots: tuple
    delegated: bool = False

    def __post_init__(self):
        for kind, vs, _, _ in self.chain:
            if kind not in ("H", "Hbar"):
                raise ValueError(f"bad operator kind {kind}")
            if vs != "all" and self.arity is not None:
                if any(not 1 <= j <= self.arity for j in vs):
                    raise ValueError(f"chain variables {vs} out of range")


# parameter-template mini-language: a spec is a tuple of slot names; a
# name ending in "@" expands to name1..name<r>
def _expand(spec, r):
    out = []
    for name in spec:
        if name.endswith("@"):
            out.extend(f"{name[:-1]}{i}" for i in range(1, r + 1))
        else:
            out.append(name)
    return out


def _resolve_params(family, slots, binding, r) -> LauricellaParams:
    a, b, g = (tuple(binding[n] for n in _expand(s, r)) for s in slots)
    return LauricellaParams(family, r, a, b, g)


def _std_slots(family: Family):
    """The family's own parameter slots (the LHS of every identity)."""
    return {
        Family.A: (("alpha",), ("beta@",), ("gamma@",)),
        Family.B: (("alpha@",), ("beta@",), ("gamma",)),
        Family.C: (("alpha",), ("beta",), ("gamma@",)),
        Family.D: (("alpha",), ("beta@",), ("gamma",)),
    }[family]


def _rows():
    A, B, C, D = Family.A, Family.B, Family.C, Family.D
    rows = []

    def gen(id_, fam, chain, inner_slots, free, lhs="series", inner="series"):
        rows.append(OperatorIdentityDescriptor(
            id_, fam, None, lhs, chain, inner, inner_slots, free))

    def tri(id_, fam, chain, inner_slots, free, lhs="series", inner="series",
            delegated=False):
        rows.append(OperatorIdentityDescriptor(
            id_, fam, 3, lhs, chain, inner, inner_slots, free, delegated))

    # ---- every-r representations -------------------------------------
    gen("2.1", A, (("H", "all", "alpha", "eps"),),
        (("eps",), ("beta@",), ("gamma@",)), ("eps",))
    gen("2.2", A, (("Hbar", "all", "eps", "alpha"),),
        (("eps",), ("beta@",), ("gamma@",)), ("eps",))
    gen("2.3", B, (("Hbar", "all", "gamma", "eps"),),
        (("alpha@",), ("beta@",), ("eps",)), ("eps",))
    gen("2.4", C, (("H", "all", "alpha", "eps"),),
        (("eps",), ("beta",), ("gamma@",)), ("eps",))
    gen("2.5", C, (("Hbar", "all", "eps", "alpha"),),
        (("eps",), ("beta",), ("gamma@",)), ("eps",))
    gen("2.6", C, (("H", "all", "alpha", "eps1"), ("H", "all", "beta", "eps2")),
        (("eps1",), ("eps2",), ("gamma@",)), ("eps1", "eps2"))
    gen("2.7", C, (("Hbar", "all", "eps1", "alpha"),
                   ("Hbar", "all", "eps2", "beta")),
        (("eps1",), ("eps2",), ("gamma@",)), ("eps1", "eps2"))
    gen("2.8", D, (("H", "all", "alpha", "eps"),),
        (("eps",), ("beta@",), ("gamma",)), ("eps",))
    gen("2.9", D, (("Hbar", "all", "eps", "alpha"),),
        (("eps",), ("beta@",), ("gamma",)), ("eps",))
    gen("2.10", D, (("H", "all", "eps", "gamma"),),
        (("alpha",), ("beta@",), ("eps",)), ("eps",))
    gen("2.11", D, (("H", "all", "alpha", "gamma"),),
        None, (), inner="binomials")
    gen("2.12", D, (("Hbar", "all", "alpha", "gamma"),),
        _std_slots(D), (), lhs="binomials")

    # ---- three-variable representations ------------------------------
    hx = lambda u, l: ("H", (1,), u, l)
    hy = lambda u, l: ("H", (2,), u, l)
    hz = lambda u, l: ("H", (3,), u, l)
    bx = lambda u, l: ("Hbar", (1,), u, l)
    by = lambda u, l: ("Hbar", (2,), u, l)
    bz = lambda u, l: ("Hbar", (3,), u, l)

    a_slots = lambda b1, b2, b3: (("alpha",), (b1, b2, b3),
                                  ("gamma1", "gamma2", "gamma3"))
    tri("3.1", A, (hx("beta1", "eps1"),), a_slots("eps1", "beta2", "beta3"),
        ("eps1",))
    tri("3.2", A, (bx("eps1", "beta1"),), a_slots("eps1", "beta2", "beta3"),
        ("eps1",))
    tri("3.3", A, (hx("beta1", "eps1"), hy("beta2", "eps2")),
        a_slots("eps1", "eps2", "beta3"), ("eps1", "eps2"))
    tri("3.4", A, (bx("eps1", "beta1"), by("eps2", "beta2")),
        a_slots("eps1", "eps2", "beta3"), ("eps1", "eps2"))
    tri("3.5", A, (hx("beta1", "eps1"), hy("beta2", "eps2"),
                   hz("beta3", "eps3")),
        a_slots("eps1", "eps2", "eps3"), ("eps1", "eps2", "eps3"))
    tri("3.6", A, (bx("eps1", "beta1"), by("eps2", "beta2"),
                   bz("eps3", "beta3")),
        a_slots("eps1", "eps2", "eps3"), ("eps1", "eps2", "eps3"))
    tri("3.7", A, (hx("beta1", "gamma1"),), None, (), delegated=True)
    tri("3.8", A, (bx("beta1", "gamma1"),), None, (), delegated=True)
    tri("3.9", A, (hx("beta1", "gamma1"), hy("beta2", "gamma2")), None, (),
        delegated=True)
    tri("3.10", A, (bx("beta1", "gamma1"), by("beta2", "gamma2")), None, (),
        delegated=True)
    tri("3.11", A, (hx("beta1", "gamma1"), hy("beta2", "gamma2"),
                    hz("beta3", "gamma3")), None, (), inner="multinomial")
    tri("3.12", A, (bx("beta1", "gamma1"), by("beta2", "gamma2"),
                    bz("beta3", "gamma3")),
        (("alpha",), ("beta1", "beta2", "beta3"),
         ("gamma1", "gamma2", "gamma3")), (), lhs="multinomial")

    b_slots = lambda a1, a2, a3: ((a1, a2, a3), ("beta1", "beta2", "beta3"),
                                  ("gamma",))
    tri("3.13", B, (hx("alpha1", "eps1"),), b_slots("eps1", "alpha2", "alpha3"),
        ("eps1",))
    tri("3.14", B, (bx("eps1", "alpha1"),), b_slots("eps1", "alpha2", "alpha3"),
        ("eps1",))
    tri("3.15", B, (hx("alpha1", "eps1"), hy("alpha2", "eps2")),
        b_slots("eps1", "eps2", "alpha3"), ("eps1", "eps2"))
    tri("3.16", B, (bx("eps1", "alpha1"), by("eps2", "alpha2")),
        b_slots("eps1", "eps2", "alpha3"), ("eps1", "eps2"))
    tri("3.17", B, (hx("alpha1", "eps1"), hy("alpha2", "eps2"),
                    hz("alpha3", "eps3")),
        b_slots("eps1", "eps2", "eps3"), ("eps1", "eps2", "eps3"))
    tri("3.18", B, (bx("eps1", "alpha1"), by("eps2", "alpha2"),
                    bz("eps3", "alpha3")),
        b_slots("eps1", "eps2", "eps3"), ("eps1", "eps2", "eps3"))

    c_slots = lambda g1, g2, g3: (("alpha",), ("beta",), (g1, g2, g3))
    tri("3.19", C, (hx("eps1", "gamma1"),), c_slots("eps1", "gamma2", "gamma3"),
        ("eps1",))
    tri("3.20", C, (hx("eps1", "gamma1"), hy("eps2", "gamma2")),
        c_slots("eps1", "eps2", "gamma3"), ("eps1", "eps2"))
    tri("3.21", C, (hx("eps1", "gamma1"), hy("eps2", "gamma2"),
                    hz("eps3", "gamma3")),
        c_slots("eps1", "eps2", "eps3"), ("eps1", "eps2", "eps3"))

    d_slots = lambda b1, b2, b3: (("alpha",), (b1, b2, b3), ("gamma",))
    tri("3.22", D, (hx("beta1", "eps1"),), d_slots("eps1", "beta2", "beta3"),
        ("eps1",))
    tri("3.23", D, (bx("eps1", "beta1"),), d_slots("eps1", "beta2", "beta3"),
        ("eps1",))
    tri("3.24", D, (hx("beta1", "eps1"), hy("beta2", "eps2")),
        d_slots("eps1", "eps2", "beta3"), ("eps1", "eps2"))
    tri("3.25", D, (bx("eps1", "beta1"), by("eps2", "beta2")),
        d_slots("eps1", "eps2", "beta3"), ("eps1", "eps2"))
    tri("3.26", D, (hx("beta1", "eps1"), hy("beta2", "eps2"),
                    hz("beta3", "eps3")),
        d_slots("eps1", "eps2", "eps3"), ("eps1", "eps2", "eps3"))
    tri("3.27", D, (bx("eps1", "beta1"), by("eps2", "beta2"),
                    bz("eps3", "beta3")),
        d_slots("eps1", "eps2", "eps3"), ("eps1", "eps2", "eps3"))
    return tuple(rows)


_ROWS = _rows()
_BY_ID = {row.id: row for row in _ROWS}


def list_operator_identities():
    return _ROWS


def operator_identity(fid: str) -> OperatorIdentityDescriptor:
    try:
        return _BY_ID[fid]
    except KeyError:
        raise KeyError(f"no operator identity {fid!r}") from None


# ---------------------------------------------------------------------------
# elementary inner/outer series
# ---------------------------------------------------------------------------

def _binomial_product_series(exponents, cap) -> TruncatedSeries:
    """prod_i (1 - x_i)^(-e_i): coefficient (e_1)_{m_1}...(e_r)_{m_r}/m!."""
    r = len(exponents)
    coeffs = {}
    for m in itertools.product(range(cap + 1), repeat=r):
        if sum(m) > cap:
            continue
        c = 1.0
        for e, mi in zip(exponents, m):
            c *= pochhammer(e, mi) / pochhammer(1.0, mi)
        coeffs[m] = c
    return TruncatedSeries(r, cap, coeffs)


def _multinomial_series(alpha, r, cap) -> TruncatedSeries:
    """(1 - x_1 - ... - x_r)^(-alpha): coefficient (alpha)_{|m|}/prod m_i!."""
    coeffs = {}
    for m in itertools.product(range(cap + 1), repeat=r):
        t = sum(m)
        if t > cap:
            continue
        c = pochhammer(alpha, t)
        for mi in m:
            c /= pochhammer(1.0, mi)
        coeffs[m] = c
    return TruncatedSeries(r, cap, coeffs)


def _side_series(desc, kind, slots, binding, r, cap) -> TruncatedSeries:
    if kind == "series":
        return build_series(_resolve_params(desc.family, slots, binding, r),
                            cap)
    if kind == "binomials":
        expo = [binding[f"beta{i}"] for i in range(1, r + 1)]
        return _binomial_product_series(expo, cap)
    if kind == "multinomial":
        return _multinomial_series(binding["alpha"], r, cap)
    raise ValueError(kind)


def _apply_chain(s: TruncatedSeries, chain, binding, r) -> TruncatedSeries:
    # diagonal operators commute, so printed order need not be reversed
    for kind, vs, up, low in chain:
        vars_ = tuple(range(1, r + 1)) if vs == "all" else vs
        fn = apply_H if kind == "H" else apply_Hbar
        s = fn(s, vars_, binding[up], binding[low])
    return s


def verify_operational_identity(desc: OperatorIdentityDescriptor, binding,
                                cap: int, tol: float = 1e-10,
                                point=None, opts: EvalOptions | None = None,
                                point_index: int = 0) -> VerifyReport:
    """Coefficient-level check of one representation (or, for the four
    composite-argument rows, a numeric pointwise check at `point`).

    The reported error is max over multi-indices of
    |lhs_m - rhs_m| / max(1, |lhs_m|).
    """
    if desc.delegated:
        if point is None:
            raise ParamError(f"identity {desc.id} verifies numerically; "
                             "a point is required")
        return _verify_delegated(desc, binding, point, tol,
                                 opts or EvalOptions(), point_index)
    r = desc.arity if desc.arity is not None else int(binding["r"])
    lhs = _side_series(desc, desc.lhs_kind, _std_slots(desc.family),
                       binding, r, cap)
    inner = _side_series(desc, desc.inner_kind, desc.inner_slots, binding,
                         r, cap)
    rhs = _apply_chain(inner, desc.chain, binding, r)
    worst_err = 0.0
    worst = (0.0, 0.0)
    for m in set(lhs.coeffs) | set(rhs.coeffs):
        l, h = lhs.coeff(m), rhs.coeff(m)
        err = abs(l - h) / max(1.0, abs(l))
        if err > worst_err:
            worst_err, worst = err, (l, h)
    return VerifyReport(
        formula_id=desc.id, kind="operator", binding=dict(binding),
        point=None, lhs=worst[0], rhs=worst[1],
        abs_err=abs(worst[0] - worst[1]), rel_err=worst_err,
        outer_terms=len(set(lhs.coeffs) | set(rhs.coeffs)),
        passed=worst_err <= tol, point_index=point_index)


# ---------------------------------------------------------------------------
# the four composite-argument rows, verified numerically: the operator
# acts per x-degree slice of the inner function, giving an outer sum of
# parameter-shifted Appell/Gauss evaluations
# ---------------------------------------------------------------------------

def _outer_sum_1d(coef, inner_val, x, n_outer, rel_tol=1e-12):
    total = 0.0
    small = 0
    terms = 0
    for i in range(n_outer + 1):
        t = coef(i) * x ** i * inner_val(i)
        total += t
        terms += 1
        if abs(t) <= rel_tol * max(abs(total), _TINY):
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    return total, terms


def _outer_sum_2d(coef, inner_val, x, y, n_outer, rel_tol=1e-12):
    total = 0.0
    small = 0
    terms = 0
    for s in range(n_outer + 1):
        shell = 0.0
        for i in range(s + 1):
            j = s - i
            shell += coef(i, j) * x ** i * y ** j * inner_val(s)
        total += shell
        terms += s + 1
        if abs(shell) <= rel_tol * max(abs(total), _TINY):
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    return total, terms


def _verify_delegated(desc, binding, point, tol, opts, point_index):
    al = binding["alpha"]
    b1, b2, b3 = (binding[f"beta{i}"] for i in range(1, 4))
    g1, g2, g3 = (binding[f"gamma{i}"] for i in range(1, 4))
    x, y, z = point
    n_outer = 40
    fa = LauricellaParams(Family.A, 3, (al,), (b1, b2, b3), (g1, g2, g3))

    if desc.id in ("3.7", "3.8"):
        def inner_val(i):
            return eval_appell_f2(al + i, b2, b3, g2, g3, y, z, opts).value

        if desc.id == "3.7":
            lhs_res = eval_lauricella(fa, point, opts)
            lhs, lhs_tail = lhs_res.value, lhs_res.tail_estimate

            def coef(i):
                return (pochhammer(al, i) * pochhammer(b1, i)
                        / (pochhammer(g1, i) * pochhammer(1.0, i)))
        else:
            u = 1.0 - x
            lhs = u ** -al * eval_appell_f2(al, b2, b3, g2, g3,
                                            y / u, z / u, opts).value
            lhs_tail = 0.0

            def coef(i):
                return pochhammer(al, i) / pochhammer(1.0, i)

        rhs, terms = _outer_sum_1d(coef, inner_val, x, n_outer)
    else:
        def inner_val(s):
            return eval_gauss_2f1(al + s, b3, g3, z, opts).value

        if desc.id == "3.9":
            lhs_res = eval_lauricella(fa, point, opts)
            lhs, lhs_tail = lhs_res.value, lhs_res.tail_estimate

            def coef(i, j):
                return (pochhammer(al, i + j) * pochhammer(b1, i)
                        * pochhammer(b2, j)
                        / (pochhammer(g1, i) * pochhammer(g2, j)
                           * pochhammer(1.0, i) * pochhammer(1.0, j)))
        else:
            u = 1.0 - x - y
            lhs = u ** -al * eval_gauss_2f1(al, b3, g3, z / u, opts).value
            lhs_tail = 0.0

            def coef(i, j):
                return (pochhammer(al, i + j)
                        / (pochhammer(1.0, i) * pochhammer(1.0, j)))

        rhs, terms = _outer_sum_2d(coef, inner_val, x, y, n_outer)

    denom = max(abs(lhs), _TINY)
    rel = abs(lhs - rhs) / denom
    slack = min(lhs_tail / denom, tol)   # never widen the band beyond tol
    return VerifyReport(
        formula_id=desc.id, kind="operator", binding=dict(binding),
        point=tuple(point), lhs=lhs, rhs=rhs, abs_err=abs(lhs - rhs),
        rel_err=rel, lhs_tail=lhs_tail, outer_terms=terms,
        passed=rel <= tol + slack, point_index=point_index)


# ---------------------------------------------------------------------------
# deterministic binding / point sampling for verification runs
# ---------------------------------------------------------------------------

def sample_bindings(desc: OperatorIdentityDescriptor, n: int, seed: int):
    """n deterministic bindings; slots drawn in [0.35, 2.35], guaranteed
    at least 0.1 away from every non-positive integer (trivially true in
    that range). Every-r rows alternate r = 2 and r = 3 via the "r" key.
    """
    import numpy as np
    rng = np.random.default_rng(seed)
    out = []
    for idx in range(n):
        r = desc.arity if desc.arity is not None else 2 + idx % 2
        names = {"alpha", "gamma"}
        if desc.family is Family.B:
            names |= {f"alpha{i}" for i in range(1, r + 1)}
        names |= {f"beta{i}" for i in range(1, r + 1)}
        names.add("beta")
        names |= {f"gamma{i}" for i in range(1, r + 1)}
        names |= set(desc.free_slots)
        binding = {nm: round(float(rng.uniform(0.35, 2.35)), 6)
                   for nm in sorted(names)}
        if desc.arity is None:
            binding["r"] = r
        out.append(binding)
    return out


def sample_delegated_points(n: int, margin: float, seed: int):
    """Points with |x|+|y|+|z| <= 1 - margin (signs included)."""
    import numpy as np
    rng = np.random.default_rng(seed)
    pts = []
    for _ in range(n):
        w = rng.dirichlet((1.0, 1.0, 1.0)) * (1.0 - margin) \
            * rng.uniform(0.4, 1.0)
        sg = rng.choice((-1.0, 1.0), size=3)
        pts.append(tuple(round(float(v), 6) for v in w * sg))
    return pts


# ---------------------------------------------------------------------------
# the closing derivation: repeated (-delta)_n action on the family-D
# series and the resulting three-index expansion
# ---------------------------------------------------------------------------

def neg_delta_action_on_fd(i: int, j: int, k: int,
                           params: LauricellaParams, cap: int):
    """Dual paths for the (-delta_3)_k (-delta_2)_j (-delta_1)_i action
    on the family-D series (arity 3).

    Left: the diagonal operators applied to the built series. Right: the
    closed form (-1)^{i+j+k} x^i y^j z^k (a)_{i+j+k} (b_1)_i (b_2)_j
    (b_3)_k / (g)_{i+j+k} times the series with all parameters shifted.
    Returns (lhs, rhs) for diffing.
    """
    if params.family is not Family.D or params.arity != 3:
        raise ParamError("needs a family-D parameter set of arity 3")
    base = build_series(params, cap)
    lhs = pochhammer_neg_delta(base, 1, i)
    lhs = pochhammer_neg_delta(lhs, 2, j)
    lhs = pochhammer_neg_delta(lhs, 3, k)

    al, (e1, e2, e3), ga = params.alpha[0], params.beta, params.gamma[0]
    n = i + j + k
    pref = (pochhammer(al, n) * pochhammer(e1, i) * pochhammer(e2, j)
            * pochhammer(e3, k) / pochhammer(ga, n))
    if n % 2:
        pref = -pref
    shifted = LauricellaParams(Family.D, 3, (al + n,),
                               (e1 + i, e2 + j, e3 + k), (ga + n,))
    inner = build_series(shifted, cap)
    coeffs = {}
    for (a, b, c), v in inner.coeffs.items():
        if a + i + b + j + c + k <= cap:
            coeffs[(a + i, b + j, c + k)] = pref * v
    return lhs, TruncatedSeries(3, cap, coeffs)


def derivation_chain_closure(alpha, betas, eps, gamma, point,
                             n_outer: int = 24, cap: int = 48,
                             opts: EvalOptions | None = None):
    """Numeric closure of the derivation chain for the three-variable
    family-D decomposition.

    Route "operator": the three-index operator expansion, with each
    (-delta)-action evaluated by applying the diagonal operators to the
    auxiliary series and summing it at the point. Route "closed": the
    same expansion with the action replaced by its closed form, i.e. the
    final decomposition itself. Both must equal the direct evaluation
    ("direct"). Returns the three values.
    """
    opts = opts or EvalOptions()
    b1, b2, b3 = betas
    e1, e2, e3 = eps
    x, y, z = point
    aux = LauricellaParams(Family.D, 3, (alpha,), (e1, e2, e3), (gamma,))
    target = LauricellaParams(Family.D, 3, (alpha,), (b1, b2, b3), (gamma,))
    base = build_series(aux, cap)

    def op_route_term(i, j, k):
        acted = pochhammer_neg_delta(base, 1, i)
        acted = pochhammer_neg_delta(acted, 2, j)
        acted = pochhammer_neg_delta(acted, 3, k)
        return sum(c * x ** a * y ** b * z ** d
                   for (a, b, d), c in acted.coeffs.items())

    def closed_route_term(i, j, k):
        n = i + j + k
        pref = (pochhammer(alpha, n) * pochhammer(e1, i)
                * pochhammer(e2, j) * pochhammer(e3, k)
                / pochhammer(gamma, n))
        if n % 2:
            pref = -pref
        shifted = LauricellaParams(Family.D, 3, (alpha + n,),
                                   (e1 + i, e2 + j, e3 + k), (gamma + n,))
        return (pref * x ** i * y ** j * z ** k
                * eval_lauricella(shifted, point, opts).value)

    def weight(i, j, k):
        return (pochhammer(e1 - b1, i) * pochhammer(e2 - b2, j)
                * pochhammer(e3 - b3, k)
                / (pochhammer(e1, i) * pochhammer(e2, j) * pochhammer(e3, k)
                   * pochhammer(1.0, i) * pochhammer(1.0, j)
                   * pochhammer(1.0, k)))

    op_total = 0.0
    closed_total = 0.0
    for s in range(n_outer + 1):
        for i in range(s + 1):
            for j in range(s - i + 1):
                k = s - i - j
                w = weight(i, j, k)
                if w == 0.0:
                    continue
                op_total += w * op_route_term(i, j, k)
                closed_total += w * closed_route_term(i, j, k)
    direct = eval_lauricella(target, point, opts).value
    return {"direct": direct, "operator": op_total, "closed": closed_total}
