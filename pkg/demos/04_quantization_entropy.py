#!/usr/bin/env python3
"""The lossy stage (uniform quantization) and the lossless stage (canonical
Huffman coding) in isolation."""

import numpy as np

from haarcodec import entropy
from haarcodec.quantizer import dequantize, quantize_subband

rng = np.random.default_rng(0)

print("=" * 60)
print("Uniform quantization with midpoint reconstruction")
print("=" * 60)
values = np.array([[-10.0, 7.0], [10.0, 0.0]])
indices, spec = quantize_subband(values, 4)
print(f"values  =\n{values}")
print(f"4 levels over [{spec.min}, {spec.min + spec.levels * spec.step}]: "
      f"step {spec.step}")
print(f"indices =\n{indices}")
print(f"dequantized =\n{dequantize(indices, spec)}")

print("\nDistortion falls as the level count grows:")
coeffs = rng.normal(0, 40, size=(64, 64))
for levels in (8, 16, 32, 64, 128, 256):
    idx, spec = quantize_subband(coeffs, levels)
    mse = float(np.mean((dequantize(idx, spec) - coeffs) ** 2))
    print(f"  L={levels:3d}: step {spec.step:7.3f}  mse {mse:8.4f}  "
          f"worst error {np.max(np.abs(dequantize(idx, spec) - coeffs)):.3f} "
          f"(bound step/2 = {spec.step / 2:.3f})")

print()
print("=" * 60)
print("Canonical Huffman coding")
print("=" * 60)
freqs = [0] * 256
freqs[65], freqs[66], freqs[67] = 3, 1, 1
table = entropy.build_code(freqs)
print("frequencies A:3 B:1 C:1 ->")
for symbol in (65, 66, 67):
    code, length = table.codes[symbol]
    print(f"  {chr(symbol)}: length {length}, codeword {format(code, f'0{length}b')}")
print(f"mean code length: {table.expected_length(freqs):.2f} bits/symbol")

print("\nThe table is reconstructible from its 256 lengths alone, so the")
print("container stores one 256-byte header per channel:")
rebuilt = entropy.CodeTable.from_lengths(table.lengths)
print(f"  rebuilt equals original: {rebuilt.codes == table.codes}")

symbols = rng.choice([65, 66, 67], size=40, p=[0.6, 0.2, 0.2]).tolist()
payload, nbits = entropy.encode(symbols, table)
decoded = entropy.decode(payload, table, len(symbols), nbits)
print(f"\n40 symbols -> {nbits} bits ({len(payload)} bytes, MSB-first, "
      f"zero-padded); decode identity: {decoded.tolist() == symbols}")

print("\nMean code length stays within one bit of the source entropy:")
for _ in range(3):
    size = int(rng.integers(3, 40))
    f = np.zeros(256)
    f[rng.choice(256, size=size, replace=False)] = rng.integers(1, 1000, size=size)
    t = entropy.build_code(f)
    p = f[f > 0] / f.sum()
    h = float(-(p * np.log2(p)).sum())
    print(f"  {size:2d} symbols: H = {h:.3f} bits, mean length = "
          f"{t.expected_length(f):.3f} bits")
