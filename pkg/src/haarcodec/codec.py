"""End-to-end pipeline: PNM I/O, channel separation, transform, quantization,
entropy coding, container assembly, decoding, and quality metrics.

Channels are coded independently in RGB order with no color transform.  The
transform stage uses the scaled coefficient variant, the coarsest
approximation band is always quantized at 256 levels, and one Huffman table
per channel covers all of its subband index streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import container, entropy
from .container import ChannelStream, CompressedImage, f32
from .errors import FormatError, ParameterError
from .quantizer import QuantizerSpec, dequantize, quantize_subband
from .transform import (
    MODE_FIXED,
    MODE_GLOBAL,
    MODE_PER_BLOCK,
    MODES,
    BasisIdMap,
    SubbandSet,
    level_grid_dims,
    pyramid_forward,
    pyramid_inverse,
    subband_inverse,
)

APPROX_QUANT_LEVELS = 256  # the A band dominates quality; always kept at full depth

BASIS_CHOICES = ("set1", "set2", "set3", "set4", "adaptive-block", "adaptive-global")


def parse_basis_choice(name: str) -> tuple[str, int]:
    """Map a CLI basis name to (mode, fixed basis index)."""
    if name in ("set1", "set2", "set3", "set4"):
        return MODE_FIXED, int(name[3]) - 1
    if name == "adaptive-block":
        return MODE_PER_BLOCK, 0
    if name == "adaptive-global":
        return MODE_GLOBAL, 0
    raise ParameterError(f"unknown basis choice {name!r}; expected one of {BASIS_CHOICES}")


def basis_choice_name(mode: str, fixed_basis: int) -> str:
    if mode == MODE_FIXED:
        return f"set{fixed_basis + 1}"
    return "adaptive-block" if mode == MODE_PER_BLOCK else "adaptive-global"


@dataclass(frozen=True)
class CodecParams:
    """Encoder knobs; defaults mirror the headline operating point."""

    levels: int = 2
    quant_levels: int = 64
    mode: str = MODE_PER_BLOCK
    fixed_basis: int = 0

    def __post_init__(self):
        if self.levels < 1:
            raise ParameterError("levels must be at least 1")
        if not 2 <= self.quant_levels <= 256:
            raise ParameterError(f"quant_levels {self.quant_levels} outside 2..256")
        if self.mode not in MODES:
            raise ParameterError(f"unknown mode {self.mode!r}")
        if not 0 <= self.fixed_basis <= 3:
            raise ParameterError("fixed basis index outside 0..3")


@dataclass(frozen=True)
class ImageBuffer:
    """8-bit image: samples shaped (height, width, channels), row-major."""

    width: int
    height: int
    channels: int
    samples: np.ndarray

    def __post_init__(self):
        s = self.samples
        if self.channels not in (1, 3):
            raise ParameterError("channels must be 1 or 3")
        if s.shape != (self.height, self.width, self.channels) or s.dtype != np.uint8:
            raise ParameterError("samples must be uint8 with shape (height, width, channels)")

    def channel_matrix(self, index: int) -> np.ndarray:
        return self.samples[:, :, index].astype(np.float64)


def image_from_array(array) -> ImageBuffer:
    """Wrap a (h, w) or (h, w, c) uint8-compatible array as an ImageBuffer."""
    a = np.asarray(array)
    if a.ndim == 2:
        a = a[:, :, None]
    if a.ndim != 3 or a.shape[2] not in (1, 3):
        raise ParameterError(f"cannot interpret shape {a.shape} as an image")
    if a.dtype != np.uint8:
        if a.min() < 0 or a.max() > 255:
            raise ParameterError("sample values outside 0..255")
        a = a.astype(np.uint8)
    return ImageBuffer(width=a.shape[1], height=a.shape[0], channels=a.shape[2], samples=a)


# ---------------------------------------------------------------------------
# PNM (binary PGM/PPM) input and output

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _skip_space_and_comments(data: bytes, pos: int) -> int:
    while pos < len(data):
        if data[pos] in _WHITESPACE:
            pos += 1
        elif data[pos:pos + 1] == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise FormatError("unterminated comment in PNM header")
            pos = nl + 1
        else:
            break
    return pos


def _read_token(data: bytes, pos: int) -> tuple[bytes, int]:
    pos = _skip_space_and_comments(data, pos)
    start = pos
    while pos < len(data) and data[pos] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise FormatError("truncated PNM header")
    return data[start:pos], pos


def load_image(data: bytes) -> ImageBuffer:
    """Parse a binary PGM (P5) or PPM (P6) with maxval 255."""
    magic, pos = _read_token(bytes(data), 0)
    if magic in (b"P2", b"P3"):
        raise FormatError("ASCII PNM variants (P2/P3) are not supported")
    if magic not in (b"P5", b"P6"):
        raise FormatError(f"not a binary PGM/PPM file (magic {magic!r})")
    channels = 1 if magic == b"P5" else 3
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _read_token(data, pos)
        try:
            value = int(token)
        except ValueError:
            raise FormatError(f"non-numeric {name} field {token!r}") from None
        fields.append(value)
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise FormatError("image dimensions must be positive")
    if maxval != 255:
        raise FormatError(f"only 8-bit images (maxval 255) are supported, got {maxval}")
    if pos >= len(data) or data[pos] not in _WHITESPACE:
        raise FormatError("missing whitespace before the raster")
    pos += 1
    expected = width * height * channels
    raster = data[pos:]
    if len(raster) < expected:
        raise FormatError(f"raster truncated: expected {expected} bytes, found {len(raster)}")
    if len(raster) > expected:
        raise FormatError(f"{len(raster) - expected} trailing bytes after the raster")
    samples = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, channels).copy()
    return ImageBuffer(width=width, height=height, channels=channels, samples=samples)


def save_image(img: ImageBuffer) -> bytes:
    """Serialize as binary PGM/PPM with a canonical header."""
    magic = "P5" if img.channels == 1 else "P6"
    header = f"{magic}\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.samples.tobytes()


# ---------------------------------------------------------------------------
# Encode / decode


def _subband_list(pyramid) -> list[np.ndarray]:
    bands = []
    for level in pyramid.levels:
        bands.extend((level.V, level.H, level.D))
    bands.append(pyramid.coarse_a)
    return bands


def encode_image(img: ImageBuffer, params: CodecParams = CodecParams()) -> CompressedImage:
    """Run the full pipeline on every channel and assemble the container model."""
    level_grid_dims(img.width, img.height, params.levels)
    streams = []
    for ci in range(img.channels):
        pyr = pyramid_forward(
            img.channel_matrix(ci),
            levels=params.levels,
            mode=params.mode,
            fixed_id=params.fixed_basis if params.mode == MODE_FIXED else None,
            scaled=True,
        )
        if params.mode == MODE_PER_BLOCK:
            level_ids = tuple(level.ids.ids for level in pyr.levels)
        elif params.mode == MODE_GLOBAL:
            level_ids = tuple(int(level.ids.ids) for level in pyr.levels)
        else:
            level_ids = None

        specs = []
        chunks = []
        bands = _subband_list(pyr)
        for band, is_coarse in zip(bands, [False] * (len(bands) - 1) + [True]):
            depth = APPROX_QUANT_LEVELS if is_coarse else params.quant_levels
            indices, spec = quantize_subband(band, depth)
            specs.append(QuantizerSpec(min=f32(spec.min), step=f32(spec.step), levels=spec.levels))
            chunks.append(indices.ravel())
        symbols = np.concatenate(chunks)
        table = entropy.build_code(np.bincount(symbols, minlength=256))
        payload, nbits = entropy.encode(symbols.tolist(), table)
        streams.append(
            ChannelStream(
                level_ids=level_ids,
                quant_specs=tuple(specs),
                code_lengths=table.lengths,
                payload_bits=nbits,
                payload=payload,
            )
        )
    return CompressedImage(
        width=img.width,
        height=img.height,
        channels=img.channels,
        levels=params.levels,
        quant_levels=params.quant_levels,
        mode=params.mode,
        fixed_basis=params.fixed_basis if params.mode == MODE_FIXED else 0,
        streams=tuple(streams),
    )


def _round_half_away(x: np.ndarray) -> np.ndarray:
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def _level_input_dims(c: CompressedImage) -> list[tuple[int, int]]:
    grids = level_grid_dims(c.width, c.height, c.levels)
    return [(c.height, c.width)] + grids[:-1]


def decode_image(c: CompressedImage) -> ImageBuffer:
    """Reverse every stage; samples are rounded half away from zero and clamped."""
    grids = level_grid_dims(c.width, c.height, c.levels)
    input_dims = _level_input_dims(c)
    band_shapes = [g for g in grids for _ in range(3)] + [grids[-1]]
    counts = [gh * gw for gh, gw in band_shapes]
    planes = []
    for stream in c.streams:
        table = entropy.CodeTable.from_lengths(stream.code_lengths)
        symbols = entropy.decode(stream.payload, table, sum(counts), stream.payload_bits)
        bands = []
        offset = 0
        for spec, shape, count in zip(stream.quant_specs, band_shapes, counts):
            bands.append(dequantize(symbols[offset:offset + count].reshape(shape), spec))
            offset += count
        coarse_a = bands[-1]

        def ids_for(level_index: int) -> BasisIdMap:
            if c.mode == MODE_PER_BLOCK:
                return BasisIdMap(MODE_PER_BLOCK, stream.level_ids[level_index])
            if c.mode == MODE_GLOBAL:
                return BasisIdMap(MODE_GLOBAL, stream.level_ids[level_index])
            return BasisIdMap(MODE_FIXED, c.fixed_basis)

        matrix = coarse_a
        for level_index in range(c.levels - 1, -1, -1):
            v, h, d = bands[3 * level_index: 3 * level_index + 3]
            level = SubbandSet(A=matrix, V=v, H=h, D=d, ids=ids_for(level_index))
            oh, ow = input_dims[level_index]
            matrix = subband_inverse(level, scaled=True)[:oh, :ow]
        planes.append(np.clip(_round_half_away(matrix), 0, 255).astype(np.uint8))
    samples = np.stack(planes, axis=-1)
    return ImageBuffer(width=c.width, height=c.height, channels=c.channels, samples=samples)


def encode_to_bytes(img: ImageBuffer, params: CodecParams = CodecParams()) -> bytes:
    return container.write(encode_image(img, params))


def decode_from_bytes(data: bytes) -> ImageBuffer:
    return decode_image(container.read(data))


def roundtrip_unquantized(img: ImageBuffer, params: CodecParams = CodecParams()) -> ImageBuffer:
    """Debug path: transform forward and back with quantization bypassed.

    On even dimensions (at every level the padding is cropped exactly) this is
    an identity for all modes, which isolates transform defects from
    quantization loss.
    """
    planes = []
    for ci in range(img.channels):
        pyr = pyramid_forward(
            img.channel_matrix(ci),
            levels=params.levels,
            mode=params.mode,
            fixed_id=params.fixed_basis if params.mode == MODE_FIXED else None,
            scaled=True,
        )
        matrix = pyramid_inverse(pyr, scaled=True)
        planes.append(np.clip(_round_half_away(matrix), 0, 255).astype(np.uint8))
    samples = np.stack(planes, axis=-1)
    return ImageBuffer(width=img.width, height=img.height, channels=img.channels, samples=samples)


# ---------------------------------------------------------------------------
# Metrics


@dataclass(frozen=True)
class Metrics:
    """Size and distortion summary; ``psnr_db`` is ``inf`` for a perfect match."""

    compressed_bytes: int
    raw_bytes: int
    compression_rate_pct: float
    mse_per_channel: tuple[float, ...]
    mse: float
    psnr_db: float


def compute_metrics(orig: ImageBuffer, recon: ImageBuffer, compressed_bytes: int) -> Metrics:
    """Compression rate (percent of raw size), per-channel and overall MSE, PSNR."""
    if (orig.width, orig.height, orig.channels) != (recon.width, recon.height, recon.channels):
        raise ParameterError("original and reconstruction dimensions disagree")
    diff = orig.samples.astype(np.float64) - recon.samples.astype(np.float64)
    per_channel = tuple(float(np.mean(diff[:, :, ci] ** 2)) for ci in range(orig.channels))
    mse = float(np.mean(diff**2))
    psnr = math.inf if mse == 0 else 10.0 * math.log10(255.0**2 / mse)
    raw = orig.width * orig.height * orig.channels
    return Metrics(
        compressed_bytes=compressed_bytes,
        raw_bytes=raw,
        compression_rate_pct=100.0 * compressed_bytes / raw,
        mse_per_channel=per_channel,
        mse=mse,
        psnr_db=psnr,
    )


def metrics_lines(m: Metrics) -> list[str]:
    """Line-oriented key=value rendering used by the CLI."""
    lines = [
        f"compressed_bytes={m.compressed_bytes}",
        f"raw_bytes={m.raw_bytes}",
        f"rate_pct={m.compression_rate_pct:.2f}",
        f"mse={m.mse:.6f}",
        f"psnr_db={'inf' if math.isinf(m.psnr_db) else f'{m.psnr_db:.2f}'}",
    ]
    return lines
