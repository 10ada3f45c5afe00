import numpy as np
import pytest

from lauricella.errors import ParamError
from lauricella.identities import (_apply_chain, _side_series, _std_slots,
                                   list_operator_identities,
                                   neg_delta_action_on_fd, operator_identity,
                                   sample_bindings, sample_delegated_points,
                                   derivation_chain_closure,
                                   verify_operational_identity)
from lauricella.series import EvalOptions, Family, LauricellaParams
from lauricella.taylor import apply_H, build_series

ALL_IDS = [d.id for d in list_operator_identities()]
COEFF_IDS = [d.id for d in list_operator_identities() if not d.delegated]
DELEGATED_IDS = [d.id for d in list_operator_identities() if d.delegated]


def _seed(fid: str) -> int:
    return int(fid.replace(".", ""))


class TestCatalog:
    def test_row_count(self):
        assert len(ALL_IDS) == 39
        assert len(DELEGATED_IDS) == 4

    def test_unknown_id(self):
        with pytest.raises(KeyError):
            operator_identity("9.99")

    def test_delegated_needs_point(self):
        desc = operator_identity(DELEGATED_IDS[0])
        binding = sample_bindings(desc, 1, 0)[0]
        with pytest.raises(ParamError):
            verify_operational_identity(desc, binding, cap=8)


class TestCoefficientLevel:
    @pytest.mark.parametrize("fid", COEFF_IDS)
    def test_ten_random_bindings(self, fid):
        desc = operator_identity(fid)
        for i, binding in enumerate(sample_bindings(desc, 10, _seed(fid))):
            rep = verify_operational_identity(desc, binding, cap=8,
                                              tol=1e-10, point_index=i)
            assert rep.passed, (fid, i, rep.rel_err)
            assert rep.rel_err <= 1e-10


class TestDelegatedNumeric:
    @pytest.mark.parametrize("fid", DELEGATED_IDS)
    def test_twenty_points(self, fid):
        desc = operator_identity(fid)
        bindings = sample_bindings(desc, 20, _seed(fid))
        points = sample_delegated_points(20, 0.7, _seed(fid) + 1)
        for i, (binding, pt) in enumerate(zip(bindings, points)):
            rep = verify_operational_identity(desc, binding, cap=8,
                                              tol=1e-8, point=pt,
                                              point_index=i)
            assert rep.passed, (fid, i, rep.rel_err)


class TestGeneralSpecializesToThreeVariables:
    """With r = 3 the every-r machinery and the fixed-arity machinery
    must walk through identical numbers, not merely close ones."""

    def test_side_series_matches_direct_build(self):
        binding = {"alpha": 0.7, "eps": 1.1, "beta1": 0.9, "beta2": 1.3,
                   "beta3": 0.5, "gamma1": 1.7, "gamma2": 2.1,
                   "gamma3": 1.2, "r": 3}
        desc = operator_identity("2.1")
        lhs = _side_series(desc, "series", _std_slots(Family.A), binding,
                           3, 8)
        params = LauricellaParams(Family.A, 3, (0.7,), (0.9, 1.3, 0.5),
                                  (1.7, 2.1, 1.2))
        direct = build_series(params, 8)
        assert lhs.coeffs == direct.coeffs

    def test_chain_all_equals_explicit_variables(self):
        rng = np.random.default_rng(42)
        coeffs = {}
        for _ in range(20):
            m = tuple(int(v) for v in rng.integers(0, 4, 3))
            coeffs[m] = float(rng.uniform(-1, 1))
        from lauricella.taylor import TruncatedSeries
        s = TruncatedSeries(3, 9, coeffs)
        binding = {"alpha": 0.8, "eps": 1.9}
        via_all = _apply_chain(s, (("H", "all", "alpha", "eps"),),
                               binding, 3)
        explicit = apply_H(s, (1, 2, 3), 0.8, 1.9)
        assert via_all.coeffs == explicit.coeffs

    def test_verification_agrees_across_paths(self):
        # the every-r rows at r = 3 verify with the same zero error the
        # fixed-arity rows report
        for fid in ("2.1", "2.3", "2.8", "2.11"):
            desc = operator_identity(fid)
            binding = sample_bindings(desc, 4, 5)[3]
            binding["r"] = 3
            rep = verify_operational_identity(desc, binding, cap=8,
                                              tol=1e-10)
            assert rep.passed and rep.rel_err <= 1e-12


class TestClosingDerivation:
    PARAMS = LauricellaParams(Family.D, 3, (0.9,), (0.6, 1.1, 0.8), (2.2,))

    def test_zero_action_is_identity(self):
        lhs, rhs = neg_delta_action_on_fd(0, 0, 0, self.PARAMS, 6)
        base = build_series(self.PARAMS, 6)
        assert lhs.coeffs == base.coeffs
        assert lhs.max_abs_diff(rhs) == 0.0

    @pytest.mark.parametrize("ijk", [(1, 0, 0), (0, 2, 0), (1, 1, 1),
                                     (2, 1, 0), (2, 2, 2)])
    def test_dual_paths_match(self, ijk):
        lhs, rhs = neg_delta_action_on_fd(*ijk, self.PARAMS, 6)
        keys = set(lhs.coeffs) | set(rhs.coeffs)
        worst = max((abs(lhs.coeff(m) - rhs.coeff(m))
                     / max(1.0, abs(lhs.coeff(m))) for m in keys),
                    default=0.0)
        assert worst <= 1e-13

    def test_family_guard(self):
        bad = LauricellaParams(Family.A, 3, (0.9,), (0.6, 1.1, 0.8),
                               (2.2, 1.5, 1.8))
        with pytest.raises(ParamError):
            neg_delta_action_on_fd(1, 0, 0, bad, 6)

    def test_three_route_closure(self):
        out = derivation_chain_closure(0.9, (0.6, 1.1, 0.8),
                                       (1.0, 1.6, 1.3), 2.2,
                                       (0.08, -0.05, 0.06), n_outer=24,
                                       cap=40,
                                       opts=EvalOptions(degree_cap=80))
        d = out["direct"]
        assert out["operator"] == pytest.approx(d, rel=1e-10)
        assert out["closed"] == pytest.approx(d, rel=1e-10)
