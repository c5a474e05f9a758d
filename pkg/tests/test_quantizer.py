import numpy as np
import pytest

from haarcodec.errors import CorruptStreamError, ParameterError
from haarcodec.quantizer import QuantizerSpec, dequantize, quantize_subband


class TestQuantize:
    def test_four_level_example(self):
        m = np.array([[-10.0, 7.0], [10.0, 0.0]])
        indices, spec = quantize_subband(m, 4)
        assert spec.min == -10 and spec.step == 5 and spec.levels == 4
        assert indices.tolist() == [[0, 3], [3, 2]]

    def test_constant_matrix_degenerates_to_unit_step(self):
        indices, spec = quantize_subband(np.full((3, 3), 42.0), 16)
        assert spec.step == 1.0
        assert not indices.any()
        assert np.all(dequantize(indices, spec) == 42.5)

    def test_midpoint_example(self):
        spec = QuantizerSpec(min=-10, step=5, levels=4)
        assert dequantize(np.array([3]), spec)[0] == 7.5

    def test_error_bound_256_levels_on_bytes(self):
        rng = np.random.default_rng(0)
        m = rng.integers(0, 256, size=(64, 64)).astype(float)
        indices, spec = quantize_subband(m, 256)
        err = np.max(np.abs(dequantize(indices, spec) - m))
        assert err <= spec.step / 2 + 1e-12
        assert spec.step == pytest.approx(np.ptp(m) / 256)

    def test_roundtrip_error_bound_property(self):
        rng = np.random.default_rng(1)
        for levels in (2, 3, 8, 64, 255, 256):
            m = rng.uniform(-300, 300, size=(32, 32))
            indices, spec = quantize_subband(m, levels)
            assert np.max(np.abs(dequantize(indices, spec) - m)) <= spec.step / 2 + 1e-9

    def test_monotone_indices(self):
        x = np.linspace(-5, 5, 1001)
        indices, _ = quantize_subband(x, 17)
        assert np.all(np.diff(indices.astype(int)) >= 0)

    def test_distortion_decreases_with_levels(self):
        rng = np.random.default_rng(2)
        m = rng.normal(0, 50, size=(48, 48))
        errors = []
        for levels in (8, 16, 32, 64, 128, 256):
            indices, spec = quantize_subband(m, levels)
            errors.append(float(np.mean((dequantize(indices, spec) - m) ** 2)))
        assert all(a >= b for a, b in zip(errors, errors[1:]))

    def test_level_range_enforced(self):
        with pytest.raises(ParameterError):
            quantize_subband(np.zeros((2, 2)), 1)
        with pytest.raises(ParameterError):
            quantize_subband(np.zeros((2, 2)), 257)

    def test_out_of_range_index_rejected(self):
        spec = QuantizerSpec(min=0, step=1, levels=4)
        with pytest.raises(CorruptStreamError):
            dequantize(np.array([4]), spec)

    def test_spec_invariants(self):
        with pytest.raises(ParameterError):
            QuantizerSpec(min=0, step=0, levels=4)
        with pytest.raises(ParameterError):
            QuantizerSpec(min=0, step=1, levels=0)
