"""Canonical Huffman coding of quantization-index streams.

Code tables are fully described by 256 code lengths (0 marks an absent
symbol); canonical codewords are assigned in (length, symbol) order, shortest
first.  Bits are packed MSB-first and the final byte is zero-padded.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .errors import CorruptStreamError, ParameterError

ALPHABET = 256


def _canonical_codes(lengths) -> dict[int, tuple[int, int]]:
    """Assign canonical codewords; returns {symbol: (code, length)}."""
    order = sorted((l, s) for s, l in enumerate(lengths) if l > 0)
    codes = {}
    code = 0
    prev_len = order[0][0] if order else 0
    for length, symbol in order:
        code <<= length - prev_len
        codes[symbol] = (code, length)
        code += 1
        prev_len = length
    return codes


@dataclass(frozen=True)
class CodeTable:
    """Prefix code over the byte alphabet, reconstructible from lengths alone."""

    lengths: tuple[int, ...]
    codes: dict[int, tuple[int, int]] = field(compare=False)

    @classmethod
    def from_lengths(cls, lengths) -> "CodeTable":
        """Rebuild the canonical table from its 256 code lengths.

        Raises :class:`CorruptStreamError` when the lengths cannot describe a
        prefix code (Kraft sum above one).
        """
        lengths = tuple(int(l) for l in lengths)
        if len(lengths) != ALPHABET:
            raise ParameterError(f"expected {ALPHABET} code lengths, got {len(lengths)}")
        if any(l < 0 or l > 255 for l in lengths):
            raise CorruptStreamError("code length outside 0..255")
        present = [l for l in lengths if l > 0]
        if present:
            max_len = max(present)
            kraft = sum(1 << (max_len - l) for l in present)
            if kraft > (1 << max_len):
                raise CorruptStreamError("code lengths violate the Kraft inequality")
        return cls(lengths=lengths, codes=_canonical_codes(lengths))

    def bit_strings(self) -> dict[int, str]:
        return {s: format(code, f"0{length}b") for s, (code, length) in self.codes.items()}

    def expected_length(self, freqs) -> float:
        """Mean code length in bits under the given symbol frequencies."""
        freqs = np.asarray(freqs, dtype=np.float64)
        total = freqs.sum()
        return sum(freqs[s] * length for s, (_, length) in self.codes.items()) / total


def _huffman_lengths(freqs) -> list[int]:
    """Code lengths from a standard Huffman tree.

    Heap ties break on (frequency, symbol value) with internal nodes ordered
    after all leaves of equal frequency, so the table is deterministic.
    """
    nodes = [(int(f), s, None) for s, f in enumerate(freqs) if f > 0]
    if not nodes:
        raise ParameterError("at least one symbol frequency must be nonzero")
    lengths = [0] * ALPHABET
    if len(nodes) == 1:
        lengths[nodes[0][1]] = 1  # single-symbol alphabet still needs one bit
        return lengths
    heap = [(f, s, (s, None, None)) for f, s, _ in nodes]
    heapq.heapify(heap)
    counter = ALPHABET
    while len(heap) > 1:
        f1, _, left = heapq.heappop(heap)
        f2, _, right = heapq.heappop(heap)
        heapq.heappush(heap, (f1 + f2, counter, (None, left, right)))
        counter += 1
    stack = [(heap[0][2], 0)]
    while stack:
        (symbol, left, right), depth = stack.pop()
        if symbol is not None:
            lengths[symbol] = depth
        else:
            stack.append((left, depth + 1))
            stack.append((right, depth + 1))
    return lengths


def build_code(freqs) -> CodeTable:
    """Build the canonical Huffman table for 256 symbol counts."""
    freqs = list(freqs)
    if len(freqs) != ALPHABET:
        raise ParameterError(f"expected {ALPHABET} symbol counts, got {len(freqs)}")
    return CodeTable.from_lengths(_huffman_lengths(freqs))


def encode(symbols, table: CodeTable) -> tuple[bytes, int]:
    """Pack symbols MSB-first; returns (payload bytes, exact bit count)."""
    strings = table.bit_strings()
    try:
        bits = "".join([strings[int(s)] for s in symbols])
    except KeyError as exc:
        raise ParameterError(f"symbol {exc.args[0]} has no code in the table") from None
    nbits = len(bits)
    if nbits == 0:
        return b"", 0
    padded = bits + "0" * (-nbits % 8)
    return int(padded, 2).to_bytes(len(padded) // 8, "big"), nbits


def decode(data: bytes, table: CodeTable, count: int, bit_length: int | None = None) -> np.ndarray:
    """Read exactly ``count`` symbols from an MSB-first bit stream.

    Raises :class:`CorruptStreamError` on bit exhaustion, on a prefix matching
    no codeword, or when the declared ``bit_length`` is not consumed exactly.
    """
    if count == 0:
        if bit_length not in (None, 0):
            raise CorruptStreamError("empty stream declares a nonzero bit length")
        return np.zeros(0, dtype=np.uint8)
    if not table.codes:
        raise CorruptStreamError("empty code table cannot decode symbols")
    limit = 8 * len(data) if bit_length is None else bit_length
    if limit > 8 * len(data):
        raise CorruptStreamError("declared bit length exceeds the payload")

    by_length: dict[int, list[int]] = {}
    for symbol, (_, length) in sorted(table.codes.items()):
        by_length.setdefault(length, []).append(symbol)
    max_len = max(by_length)
    first_code = [0] * (max_len + 1)
    group_count = [0] * (max_len + 1)
    group_syms: list[list[int]] = [[] for _ in range(max_len + 1)]
    for length in sorted(by_length):
        syms = sorted(by_length[length])
        first_code[length] = table.codes[syms[0]][0]
        group_count[length] = len(syms)
        group_syms[length] = syms

    out = np.empty(count, dtype=np.uint8)
    pos = 0
    for i in range(count):
        code = 0
        length = 0
        while True:
            if pos >= limit:
                raise CorruptStreamError(f"bit stream exhausted after {i} of {count} symbols")
            code = (code << 1) | ((data[pos >> 3] >> (~pos & 7)) & 1)
            pos += 1
            length += 1
            if length > max_len:
                raise CorruptStreamError("bit prefix matches no codeword")
            offset = code - first_code[length]
            if 0 <= offset < group_count[length]:
                out[i] = group_syms[length][offset]
                break
    if bit_length is not None and pos != bit_length:
        raise CorruptStreamError(f"payload declares {bit_length} bits but {pos} were consumed")
    return out
