import math

import numpy as np
import pytest

from lauricella import kernels
from lauricella.series import Family, _step_arrays


def _arrays(fam, r, xs, cap, rng):
    alpha = tuple(rng.uniform(0.3, 1.5, r if fam is Family.B else 1))
    beta = tuple(rng.uniform(0.3, 1.5, 1 if fam is Family.C else r))
    gamma = tuple(rng.uniform(0.8, 2.0,
                              r if fam in (Family.A, Family.C) else 1))
    return _step_arrays(fam, alpha, beta, gamma, xs, cap)


class TestCompositions:
    @pytest.mark.parametrize("total,parts", [(0, 1), (5, 1), (0, 3), (4, 2),
                                             (6, 3), (5, 4)])
    def test_count_and_content(self, total, parts):
        out = list(kernels.compositions(total, parts))
        assert len(out) == math.comb(total + parts - 1, parts - 1)
        assert len(set(out)) == len(out)
        assert all(sum(m) == total and len(m) == parts for m in out)

    def test_single_part(self):
        assert list(kernels.compositions(7, 1)) == [(7,)]


class TestKernelParity:
    """The jit and plain-numpy paths must be interchangeable."""

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_shell_sum_agreement(self, r):
        rng = np.random.default_rng(100 + r)
        for fam in Family:
            xs = rng.uniform(-0.15, 0.15, r)
            AS, AU = _arrays(fam, r, xs, 200, rng)
            jit = kernels.shell_sum(r, AS, AU, 1e-14, 0.9, 199,
                                    use_numba=True)
            ref = kernels.shell_sum(r, AS, AU, 1e-14, 0.9, 199,
                                    use_numba=False)
            assert jit[0] == pytest.approx(ref[0], rel=1e-14)
            assert (jit[1], jit[4], jit[5]) == (ref[1], ref[4], ref[5])
            # magnitudes accumulate in different orders; ulp-level slack
            assert jit[2] == pytest.approx(ref[2], rel=1e-12)
            assert jit[3] == pytest.approx(ref[3], rel=1e-12)
            np.testing.assert_allclose(jit[6], ref[6], rtol=1e-12)

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_batch_agreement(self, r):
        rng = np.random.default_rng(200 + r)
        AS, P = _arrays(Family.A, r, np.ones(r), 80, rng)
        coords = rng.uniform(-0.2, 0.2, (r, 500)) / r
        jit = kernels.batch_shell_sum(r, AS, P, coords, 1e-13, 0.9, 79,
                                      use_numba=True)
        ref = kernels.batch_shell_sum(r, AS, P, coords, 1e-13, 0.9, 79,
                                      use_numba=False)
        assert bool(jit[1].all()) and bool(ref[1].all())
        np.testing.assert_allclose(jit[0], ref[0], rtol=1e-13)

    def test_generic_path_matches_specialized(self):
        # pad a 2-variable problem with two dead axes; the generic
        # dictionary walker must reproduce the specialized kernel
        rng = np.random.default_rng(300)
        xs = (0.1, -0.12)
        AS, AU = _arrays(Family.A, 2, xs, 120, rng)
        ref = kernels.shell_sum(2, AS, AU, 1e-14, 0.9, 119, use_numba=False)
        AU4 = np.vstack([AU, np.zeros((2, AU.shape[1]))])
        gen = kernels.shell_sum(4, AS, AU4, 1e-14, 0.9, 119)
        assert gen[0] == pytest.approx(ref[0], rel=1e-13)
        assert gen[5] == ref[5]
        np.testing.assert_allclose(gen[6], ref[6], rtol=1e-12)


class TestStatuses:
    def test_converged(self):
        rng = np.random.default_rng(7)
        AS, AU = _arrays(Family.D, 2, (0.1, 0.1), 100, rng)
        out = kernels.shell_sum(2, AS, AU, 1e-14, 0.9, 99)
        assert out[5] == kernels.CONVERGED

    def test_terminated(self):
        # numerator parameter a negative integer: the series is a polynomial
        AS, AU = _step_arrays(Family.A, (0.8,), (-3.0,), (1.5,), (0.4,), 50)
        out = kernels.shell_sum(1, AS, AU, 1e-14, 0.9, 49)
        assert out[5] == kernels.TERMINATED
        assert out[1] == 4          # first empty shell is degree 4

    def test_maxed(self):
        AS, AU = _step_arrays(Family.D, (0.9,), (1.1,), (1.0,), (0.95,), 10)
        out = kernels.shell_sum(1, AS, AU, 1e-14, 0.999, 9)
        assert out[5] == kernels.MAXED

    def test_batch_arity_guard(self):
        with pytest.raises(ValueError):
            kernels.batch_shell_sum(4, np.ones(4), np.ones((4, 4)),
                                    np.ones((4, 3)), 1e-12, 0.9, 3)

    def test_batch_unconverged_mask(self):
        rng = np.random.default_rng(9)
        AS, P = _arrays(Family.A, 1, np.ones(1), 12, rng)
        coords = np.array([[0.05, 0.97]])    # second point too close to 1
        vals, ok = kernels.batch_shell_sum(1, AS, P, coords, 1e-13, 0.999, 11)
        assert bool(ok[0]) and not bool(ok[1])
