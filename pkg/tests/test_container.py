import numpy as np
import pytest

from haarcodec import container, entropy
from haarcodec.errors import (
    BadMagicError,
    ContainerError,
    CorruptStreamError,
    ParameterError,
    UnsupportedVersionError,
)
from haarcodec.quantizer import QuantizerSpec
from haarcodec.transform import MODE_FIXED, MODE_GLOBAL, MODE_PER_BLOCK, level_grid_dims


def random_model(rng, mode=MODE_PER_BLOCK, channels=1, width=10, height=6, levels=2):
    grids = level_grid_dims(width, height, levels)
    streams = []
    for _ in range(channels):
        if mode == MODE_PER_BLOCK:
            level_ids = tuple(rng.integers(0, 4, size=g).astype(np.uint8) for g in grids)
        elif mode == MODE_GLOBAL:
            level_ids = tuple(int(i) for i in rng.integers(0, 4, size=levels))
        else:
            level_ids = None
        specs = tuple(
            QuantizerSpec(
                min=container.f32(rng.uniform(-200, 0)),
                step=container.f32(rng.uniform(0.01, 4.0)),
                levels=int(rng.integers(2, 257)),
            )
            for _ in range(3 * levels + 1)
        )
        symbols = rng.integers(0, 8, size=int(rng.integers(1, 200))).tolist()
        table = entropy.build_code(np.bincount(symbols, minlength=256))
        payload, nbits = entropy.encode(symbols, table)
        streams.append(
            container.ChannelStream(
                level_ids=level_ids,
                quant_specs=specs,
                code_lengths=table.lengths,
                payload_bits=nbits,
                payload=payload,
            )
        )
    return container.CompressedImage(
        width=width,
        height=height,
        channels=channels,
        levels=levels,
        quant_levels=64,
        mode=mode,
        fixed_basis=rng.integers(0, 4) if mode == MODE_FIXED else 0,
        streams=tuple(streams),
    )


def models_equal(a, b):
    if (a.width, a.height, a.channels, a.levels, a.quant_levels, a.mode, a.fixed_basis) != (
        b.width, b.height, b.channels, b.levels, b.quant_levels, b.mode, b.fixed_basis
    ):
        return False
    for sa, sb in zip(a.streams, b.streams):
        if a.mode == MODE_PER_BLOCK:
            if any(not np.array_equal(ga, gb) for ga, gb in zip(sa.level_ids, sb.level_ids)):
                return False
        elif sa.level_ids != sb.level_ids:
            return False
        if (sa.quant_specs, sa.code_lengths, sa.payload_bits, sa.payload) != (
            sb.quant_specs, sb.code_lengths, sb.payload_bits, sb.payload
        ):
            return False
    return True


class TestRoundTrip:
    def test_randomized_structures(self):
        rng = np.random.default_rng(0)
        for trial in range(40):
            mode = (MODE_FIXED, MODE_PER_BLOCK, MODE_GLOBAL)[trial % 3]
            model = random_model(
                rng,
                mode=mode,
                channels=int(rng.choice([1, 3])),
                width=int(rng.integers(1, 40)),
                height=int(rng.integers(1, 40)),
                levels=int(rng.integers(1, 4)),
            )
            data = container.write(model)
            assert models_equal(container.read(data), model)
            assert container.write(container.read(data)) == data

    def test_minimal_stream(self):
        rng = np.random.default_rng(1)
        model = random_model(rng, mode=MODE_FIXED, width=2, height=2, levels=1)
        parsed = container.read(container.write(model))
        assert parsed.mode == MODE_FIXED
        assert (parsed.width, parsed.height, parsed.levels) == (2, 2, 1)

    def test_mode_byte_nibble(self):
        rng = np.random.default_rng(2)
        model = random_model(rng, mode=MODE_FIXED, width=4, height=4, levels=1)
        data = container.write(model)
        assert data[5] & 0x0F == 0
        assert data[5] >> 4 == model.fixed_basis


class TestValidationOnWrite:
    def test_grid_shape_mismatch(self):
        rng = np.random.default_rng(3)
        model = random_model(rng, mode=MODE_PER_BLOCK, width=10, height=6, levels=1)
        bad_stream = container.ChannelStream(
            level_ids=(np.zeros((2, 2), dtype=np.uint8),),
            quant_specs=model.streams[0].quant_specs,
            code_lengths=model.streams[0].code_lengths,
            payload_bits=model.streams[0].payload_bits,
            payload=model.streams[0].payload,
        )
        bad = container.CompressedImage(
            width=10, height=6, channels=1, levels=1, quant_levels=64,
            mode=MODE_PER_BLOCK, fixed_basis=0, streams=(bad_stream,),
        )
        with pytest.raises(ParameterError):
            container.write(bad)

    def test_non_f32_spec_rejected(self):
        rng = np.random.default_rng(4)
        model = random_model(rng, mode=MODE_FIXED, width=4, height=4, levels=1)
        specs = list(model.streams[0].quant_specs)
        specs[0] = QuantizerSpec(min=0.1, step=1.0, levels=4)  # 0.1 is not binary32-exact
        bad_stream = container.ChannelStream(
            level_ids=None,
            quant_specs=tuple(specs),
            code_lengths=model.streams[0].code_lengths,
            payload_bits=model.streams[0].payload_bits,
            payload=model.streams[0].payload,
        )
        bad = container.CompressedImage(
            width=4, height=4, channels=1, levels=1, quant_levels=64,
            mode=MODE_FIXED, fixed_basis=0, streams=(bad_stream,),
        )
        with pytest.raises(ParameterError):
            container.write(bad)


@pytest.fixture(scope="module")
def sample():
    return container.write(random_model(np.random.default_rng(5), channels=3, levels=2))


class TestParserTotality:
    def test_wrong_magic(self, sample):
        with pytest.raises(BadMagicError):
            container.read(b"XXXX" + sample[4:])

    def test_unsupported_version(self, sample):
        with pytest.raises(UnsupportedVersionError):
            container.read(sample[:4] + b"\x02" + sample[5:])

    def test_truncation_sweep(self, sample):
        for cut in range(len(sample)):
            with pytest.raises(ContainerError):
                container.read(sample[:cut])

    def test_trailing_garbage(self, sample):
        with pytest.raises(CorruptStreamError):
            container.read(sample + b"\x00")

    def test_bad_mode_code(self, sample):
        with pytest.raises(CorruptStreamError):
            container.read(sample[:5] + b"\x0f" + sample[6:])

    def test_nonzero_grid_padding_rejected(self):
        # 3x3 grid -> 9 ids -> 3 bytes with 3 padding slots in the last byte
        rng = np.random.default_rng(21)
        model = random_model(rng, mode=MODE_PER_BLOCK, width=6, height=6, levels=1)
        data = bytearray(container.write(model))
        grid_offset = 4 + struct_size_header()
        data[grid_offset + 2] |= 0x03
        with pytest.raises(CorruptStreamError):
            container.read(bytes(data))

    def test_kraft_violation(self):
        rng = np.random.default_rng(6)
        model = random_model(rng, mode=MODE_FIXED, width=4, height=4, levels=1)
        data = bytearray(container.write(model))
        # the code-length header starts right after the quantizer records
        offset = 4 + struct_size_header() + (3 * 1 + 1) * 10
        data[offset:offset + 3] = b"\x01\x01\x01"
        with pytest.raises(CorruptStreamError):
            container.read(bytes(data))

    def test_random_garbage_never_crashes(self):
        rng = np.random.default_rng(7)
        for size in (0, 1, 4, 17, 64, 256):
            blob = rng.integers(0, 256, size=size).astype(np.uint8).tobytes()
            with pytest.raises(ContainerError):
                container.read(blob)

    def test_mutated_valid_stream_errors_cleanly(self, sample):
        rng = np.random.default_rng(8)
        for _ in range(300):
            data = bytearray(sample)
            pos = int(rng.integers(0, len(data)))
            data[pos] = int(rng.integers(0, 256))
            try:
                container.read(bytes(data))
            except ContainerError:
                pass  # clean diagnostic is acceptable; crashes are not


def struct_size_header():
    # version u8 + mode u8 + width u32 + height u32 + channels u8 + levels u8 + quant u16
    return 1 + 1 + 4 + 4 + 1 + 1 + 2


class TestSubbandOrder:
    def test_documented_wire_order(self):
        assert container.subband_order(2) == [
            (1, "V"), (1, "H"), (1, "D"),
            (2, "V"), (2, "H"), (2, "D"),
            (2, "A"),
        ]

    def test_matches_spec_count(self):
        rng = np.random.default_rng(12)
        model = random_model(rng, levels=3)
        assert len(model.streams[0].quant_specs) == len(container.subband_order(3))


class TestInspect:
    def test_per_block_histogram(self):
        rng = np.random.default_rng(9)
        model = random_model(rng, mode=MODE_PER_BLOCK, width=16, height=16, levels=2)
        text = container.inspect(container.write(model))
        assert "mode=per-block" in text
        assert "level 1 basis usage" in text and "set1=" in text
        assert "payload_bits" in text

    def test_global_listing(self):
        rng = np.random.default_rng(10)
        model = random_model(rng, mode=MODE_GLOBAL, width=8, height=8, levels=3)
        text = container.inspect(container.write(model))
        assert "per-level bases" in text
