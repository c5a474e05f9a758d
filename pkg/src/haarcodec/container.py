"""Bit-exact binary container for compressed images (the ``.ahc`` format).

Layout, all multi-byte integers little-endian::

    magic   4 bytes  "AHC1"
    version u8       1
    mode    u8       low nibble: 0 fixed / 1 per-block / 2 global;
                     high nibble: basis id (fixed mode only, else 0)
    width   u32      pixels
    height  u32      pixels
    channels u8      1 or 3
    levels  u8       decomposition depth
    quant   u16      detail quantization level count
    per channel:
        per level, fine to coarse:
            per-block: 2-bit packed row-major basis-id grid, byte-aligned
            global:    one id byte
            fixed:     nothing
        per subband (level-1 V,H,D, ..., level-n V,H,D, coarse A):
            f32 min, f32 step, u16 levels
        code lengths  256 bytes
        payload bits  u64
        payload       ceil(bits / 8) bytes, zero-padded to the byte

Basis-id grids are stored raw (not entropy coded) so the adaptive scheme's
storage overhead stays measurable and auditable.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadMagicError,
    CorruptStreamError,
    ParameterError,
    TruncatedStreamError,
    UnsupportedVersionError,
)
from .quantizer import QuantizerSpec
from .transform import MODE_FIXED, MODE_GLOBAL, MODE_PER_BLOCK, level_grid_dims

MAGIC = b"AHC1"
VERSION = 1

_MODE_CODES = {MODE_FIXED: 0, MODE_PER_BLOCK: 1, MODE_GLOBAL: 2}
_CODE_MODES = {v: k for k, v in _MODE_CODES.items()}


def f32(value: float) -> float:
    """Round to the nearest IEEE-754 binary32, the container's float width."""
    return float(np.float32(value))


def subband_order(levels: int) -> list[tuple[int, str]]:
    """Serialized subband order: (level, band) fine to coarse, A last."""
    order = [(k, band) for k in range(1, levels + 1) for band in "VHD"]
    order.append((levels, "A"))
    return order


@dataclass(frozen=True)
class ChannelStream:
    """One color channel's serialized state."""

    level_ids: tuple | None          # per-block: uint8 grids; global: ints; fixed: None
    quant_specs: tuple               # QuantizerSpec, subband_order() order
    code_lengths: tuple[int, ...]    # 256 entries
    payload_bits: int
    payload: bytes


@dataclass(frozen=True)
class CompressedImage:
    """Decoded container model; ``write`` and ``read`` round-trip it bit-exactly."""

    width: int
    height: int
    channels: int
    levels: int
    quant_levels: int
    mode: str
    fixed_basis: int
    streams: tuple[ChannelStream, ...]


def _pack_id_grid(grid: np.ndarray) -> bytes:
    flat = np.asarray(grid, dtype=np.uint8).ravel()
    if flat.size and flat.max() > 3:
        raise ParameterError("basis id outside 0..3")
    padded = np.zeros(-flat.size % 4 + flat.size, dtype=np.uint8)
    padded[: flat.size] = flat
    quads = padded.reshape(-1, 4)
    packed = (quads[:, 0] << 6) | (quads[:, 1] << 4) | (quads[:, 2] << 2) | quads[:, 3]
    return packed.astype(np.uint8).tobytes()


def _unpack_id_grid(data: bytes, rows: int, cols: int) -> np.ndarray:
    packed = np.frombuffer(data, dtype=np.uint8)
    quads = np.empty((packed.size, 4), dtype=np.uint8)
    quads[:, 0] = packed >> 6
    quads[:, 1] = (packed >> 4) & 3
    quads[:, 2] = (packed >> 2) & 3
    quads[:, 3] = packed & 3
    flat = quads.ravel()
    if flat[rows * cols:].any():
        raise CorruptStreamError("nonzero padding slots in a basis-id grid")
    return flat[: rows * cols].reshape(rows, cols).copy()


def _validate_model(c: CompressedImage) -> list[tuple[int, int]]:
    if c.width < 1 or c.height < 1:
        raise ParameterError("dimensions must be positive")
    if c.channels not in (1, 3):
        raise ParameterError("channels must be 1 or 3")
    if c.mode not in _MODE_CODES:
        raise ParameterError(f"unknown mode {c.mode!r}")
    if not 0 <= c.fixed_basis <= 3:
        raise ParameterError("fixed basis id outside 0..3")
    if c.mode != MODE_FIXED and c.fixed_basis != 0:
        raise ParameterError("fixed_basis must be 0 outside fixed mode")
    if not 2 <= c.quant_levels <= 256:
        raise ParameterError("quant_levels outside 2..256")
    if len(c.streams) != c.channels:
        raise ParameterError("one stream per channel required")
    grids = level_grid_dims(c.width, c.height, c.levels)
    expected_specs = 3 * c.levels + 1
    for stream in c.streams:
        if c.mode == MODE_PER_BLOCK:
            if stream.level_ids is None or len(stream.level_ids) != c.levels:
                raise ParameterError("per-block mode needs one id grid per level")
            for grid, (gh, gw) in zip(stream.level_ids, grids):
                if np.asarray(grid).shape != (gh, gw):
                    raise ParameterError("id grid dimensions disagree with the header")
        elif c.mode == MODE_GLOBAL:
            if stream.level_ids is None or len(stream.level_ids) != c.levels:
                raise ParameterError("global mode needs one id per level")
            if any(not 0 <= int(i) <= 3 for i in stream.level_ids):
                raise ParameterError("basis id outside 0..3")
        elif stream.level_ids is not None:
            raise ParameterError("fixed mode carries no per-level ids")
        if len(stream.quant_specs) != expected_specs:
            raise ParameterError(f"expected {expected_specs} quantizer specs, got {len(stream.quant_specs)}")
        for spec in stream.quant_specs:
            if f32(spec.min) != spec.min or f32(spec.step) != spec.step:
                raise ParameterError("quantizer min/step must be binary32 values")
        if len(stream.code_lengths) != 256:
            raise ParameterError("code-length header must hold 256 entries")
        if len(stream.payload) != (stream.payload_bits + 7) // 8:
            raise ParameterError("payload byte count disagrees with the declared bit length")
    return grids


def write(c: CompressedImage) -> bytes:
    """Serialize a :class:`CompressedImage`; raises on structural inconsistency."""
    _validate_model(c)
    grids = level_grid_dims(c.width, c.height, c.levels)
    mode_byte = _MODE_CODES[c.mode] | (c.fixed_basis << 4 if c.mode == MODE_FIXED else 0)
    out = bytearray()
    out += MAGIC
    out += struct.pack("<BBIIBBH", VERSION, mode_byte, c.width, c.height,
                       c.channels, c.levels, c.quant_levels)
    for stream in c.streams:
        if c.mode == MODE_PER_BLOCK:
            for grid in stream.level_ids:
                out += _pack_id_grid(np.asarray(grid))
        elif c.mode == MODE_GLOBAL:
            out += bytes(int(i) for i in stream.level_ids)
        for spec in stream.quant_specs:
            out += struct.pack("<ffH", spec.min, spec.step, spec.levels)
        out += bytes(stream.code_lengths)
        out += struct.pack("<Q", stream.payload_bits)
        out += stream.payload
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int, what: str) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedStreamError(
                f"stream ends inside {what}: need {n} bytes at offset {self.pos}, "
                f"have {len(self.data) - self.pos}"
            )
        chunk = self.data[self.pos:self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str, what: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt), what))


def read(data: bytes) -> CompressedImage:
    """Parse container bytes with full validation.

    Arbitrary input is tolerated: truncation, bad magic, unsupported version,
    out-of-range ids, undecodable code-length headers and inconsistent sizes
    each raise their own :class:`~haarcodec.errors.ContainerError` subclass,
    and no field is trusted before it is bounds-checked.
    """
    r = _Reader(bytes(data))
    magic = r.take(4, "magic")
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r}; expected {MAGIC!r}")
    version, mode_byte, width, height, channels, levels, quant_levels = r.unpack(
        "<BBIIBBH", "header"
    )
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported container version {version}")
    mode_code = mode_byte & 0x0F
    fixed_basis = mode_byte >> 4
    if mode_code not in _CODE_MODES:
        raise CorruptStreamError(f"unknown mode code {mode_code}")
    mode = _CODE_MODES[mode_code]
    if fixed_basis > 3 or (mode != MODE_FIXED and fixed_basis != 0):
        raise CorruptStreamError("invalid basis id nibble in the mode byte")
    if width < 1 or height < 1:
        raise CorruptStreamError("zero image dimension")
    if channels not in (1, 3):
        raise CorruptStreamError(f"channels must be 1 or 3, got {channels}")
    if levels < 1:
        raise CorruptStreamError("levels must be at least 1")
    if not 2 <= quant_levels <= 256:
        raise CorruptStreamError(f"quant_levels {quant_levels} outside 2..256")
    try:
        grids = level_grid_dims(width, height, levels)
    except ParameterError as exc:
        raise CorruptStreamError(f"levels inconsistent with dimensions: {exc}") from None

    streams = []
    for _ in range(channels):
        level_ids = None
        if mode == MODE_PER_BLOCK:
            acc = []
            for gh, gw in grids:
                nbytes = (gh * gw + 3) // 4
                acc.append(_unpack_id_grid(r.take(nbytes, "basis-id grid"), gh, gw))
            level_ids = tuple(acc)
        elif mode == MODE_GLOBAL:
            raw = r.take(levels, "per-level basis ids")
            if any(b > 3 for b in raw):
                raise CorruptStreamError("global basis id outside 0..3")
            level_ids = tuple(int(b) for b in raw)
        specs = []
        for _ in range(3 * levels + 1):
            mn, step, spec_levels = r.unpack("<ffH", "quantizer spec")
            if not np.isfinite(mn) or not np.isfinite(step) or step <= 0:
                raise CorruptStreamError("quantizer spec carries a non-finite or non-positive value")
            if not 1 <= spec_levels <= 256:
                raise CorruptStreamError(f"quantizer level count {spec_levels} outside 1..256")
            specs.append(QuantizerSpec(min=float(mn), step=float(step), levels=spec_levels))
        lengths = tuple(r.take(256, "code-length header"))
        _check_kraft(lengths)
        (payload_bits,) = r.unpack("<Q", "payload bit length")
        nbytes = (payload_bits + 7) // 8
        payload = r.take(nbytes, "payload")
        pad = 8 * nbytes - payload_bits
        if pad and payload[-1] & ((1 << pad) - 1):
            raise CorruptStreamError("nonzero padding bits in the final payload byte")
        streams.append(
            ChannelStream(
                level_ids=level_ids,
                quant_specs=tuple(specs),
                code_lengths=lengths,
                payload_bits=payload_bits,
                payload=payload,
            )
        )
    if r.pos != len(r.data):
        raise CorruptStreamError(f"{len(r.data) - r.pos} trailing bytes after the last channel")
    return CompressedImage(
        width=width,
        height=height,
        channels=channels,
        levels=levels,
        quant_levels=quant_levels,
        mode=mode,
        fixed_basis=fixed_basis,
        streams=tuple(streams),
    )


def _check_kraft(lengths) -> None:
    present = [l for l in lengths if l > 0]
    if not present:
        return
    max_len = max(present)
    if sum(1 << (max_len - l) for l in present) > (1 << max_len):
        raise CorruptStreamError("code-length header violates the Kraft inequality")


def inspect(data: bytes) -> str:
    """Human-readable container summary; payloads are sized, never decoded."""
    c = read(data)
    lines = [
        f"magic=AHC1 version={VERSION}",
        f"mode={c.mode}" + (f" fixed_basis=set{c.fixed_basis + 1}" if c.mode == MODE_FIXED else ""),
        f"width={c.width} height={c.height} channels={c.channels}",
        f"levels={c.levels} quant_levels={c.quant_levels}",
        f"total_bytes={len(data)}",
    ]
    for ci, stream in enumerate(c.streams):
        lines.append(f"channel {ci}:")
        if c.mode == MODE_PER_BLOCK:
            for li, grid in enumerate(stream.level_ids, start=1):
                counts = np.bincount(np.asarray(grid).ravel(), minlength=4)
                total = counts.sum()
                usage = " ".join(
                    f"set{k + 1}={100.0 * counts[k] / total:.1f}%" for k in range(4)
                )
                lines.append(f"  level {li} basis usage: {usage}")
        elif c.mode == MODE_GLOBAL:
            ids = " ".join(f"set{i + 1}" for i in stream.level_ids)
            lines.append(f"  per-level bases: {ids}")
        lines.append(
            f"  payload_bits={stream.payload_bits} payload_bytes={len(stream.payload)}"
        )
    return "\n".join(lines)
