import numpy as np
import pytest

from polylp import (
    BpConfig,
    ParityCheckMatrix,
    STATUS_CONVERGED,
    STATUS_MAX_ITERS,
    decode_bp,
    is_codeword,
    posterior_llrs,
)
from oracles import exact_marginals, random_tree_code


class TestBpDecoder:
    def test_zero_llrs_stay_at_symmetric_fixed_point(self):
        code = ParityCheckMatrix.from_dense([[1, 1, 0], [0, 1, 1]])
        out = decode_bp(np.zeros(3), code, BpConfig(t_max=9))
        assert out.status == STATUS_MAX_ITERS
        assert out.iterations == 9  # undecided bits never trigger the early exit
        assert not out.hard_decision.any()
        beliefs, _, _ = posterior_llrs(np.zeros(3), code, BpConfig(t_max=9))
        assert np.all(beliefs == 0.0)

    def test_single_check_one_iteration_is_exact(self):
        code = ParityCheckMatrix.from_dense([[1, 1, 1]])
        gamma = np.array([2.0, 2.0, -0.5])
        beliefs, _, _ = posterior_llrs(gamma, code, BpConfig(t_max=1, early_stop=False))
        assert np.abs(beliefs - exact_marginals(gamma, code)).max() <= 1e-10

    def test_tree_codes_are_exact(self):
        rng = np.random.default_rng(0)
        worst = 0.0
        for _ in range(25):
            code = random_tree_code(rng, n_max=12)
            gamma = rng.normal(0.0, 1.5, code.n_vars)
            beliefs, _, _ = posterior_llrs(
                gamma, code, BpConfig(t_max=40, llr_clip=500.0, early_stop=False)
            )
            worst = max(worst, float(np.abs(beliefs - exact_marginals(gamma, code)).max()))
        assert worst <= 1e-6

    def test_check_node_odd_symmetry(self):
        # Negating one input LLR of a single check negates the outgoing
        # extrinsic messages of the others.
        code = ParityCheckMatrix.from_dense([[1, 1, 1]])
        gamma = np.array([1.3, 0.8, 0.5])
        b_pos, _, _ = posterior_llrs(gamma, code, BpConfig(t_max=1, early_stop=False))
        flipped = gamma * np.array([1.0, 1.0, -1.0])
        b_neg, _, _ = posterior_llrs(flipped, code, BpConfig(t_max=1, early_stop=False))
        ext_pos = b_pos - gamma
        ext_neg = b_neg - flipped
        # The message toward the flipped bit ignores it and is unchanged;
        # messages toward the other bits flip sign with the odd input.
        assert ext_pos[2] == pytest.approx(ext_neg[2], abs=1e-12)
        assert ext_pos[0] == pytest.approx(-ext_neg[0], abs=1e-12)
        assert ext_pos[1] == pytest.approx(-ext_neg[1], abs=1e-12)

    def test_early_exit_output_is_codeword(self):
        rng = np.random.default_rng(1)
        code = random_tree_code(rng, n_max=10)
        for _ in range(50):
            gamma = rng.normal(0.5, 1.5, code.n_vars)
            out = decode_bp(gamma, code, BpConfig(t_max=50))
            if out.status == STATUS_CONVERGED:
                assert is_codeword(code, out.hard_decision)

    def test_messages_saturate(self):
        code = ParityCheckMatrix.from_dense([[1, 1]])
        gamma = np.array([200.0, 200.0])
        beliefs, _, _ = posterior_llrs(gamma, code, BpConfig(t_max=5, llr_clip=30.0))
        assert np.all(beliefs <= 200.0 + 30.0)

    def test_soft_output_convention(self):
        code = ParityCheckMatrix.from_dense([[1, 1, 1]])
        out = decode_bp(np.array([4.0, 4.0, -6.0]), code, BpConfig(t_max=3))
        # Positive channel LLR pushes the bit-1 probability below half.
        assert out.x[0] < 0.5
        assert (out.hard_decision == (out.x > 0.5)).all()

    def test_config_validation(self):
        with pytest.raises(ValueError):
            BpConfig(t_max=0)
        with pytest.raises(ValueError):
            BpConfig(llr_clip=0.0)

    def test_dimension_mismatch(self):
        code = ParityCheckMatrix.from_dense([[1, 1, 1]])
        with pytest.raises(ValueError):
            decode_bp(np.ones(2), code)
