#!/usr/bin/env python3
"""Regenerate the deterministic fixture corpus and golden container files.

Run from the repository root:

    python3 scripts/make_fixtures.py

The corpus mixes flat regions, smooth shading, oriented edges, and sparse
fine detail so the trend suites (rate vs quantization levels, rate vs
decomposition depth, adaptive overhead) see realistic index distributions.
Every fixture draws from its own seeded generator, so images can be retuned
independently and reruns are byte-identical.
"""

import pathlib
import sys

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from haarcodec import codec  # noqa: E402
from haarcodec.codec import CodecParams, image_from_array  # noqa: E402

ROOT = pathlib.Path(__file__).resolve().parents[1]
IMAGES = ROOT / "tests" / "fixtures" / "images"
GOLDEN = ROOT / "tests" / "fixtures" / "golden"


def value_noise(rng, height, width, octaves):
    """Bilinear value noise, normalized to [0, 1]."""
    field = np.zeros((height, width))
    for cells, amplitude in octaves:
        grid = rng.normal(0, 1, size=(cells, cells))
        ys = np.linspace(0, cells - 1, height)
        xs = np.linspace(0, cells - 1, width)
        y0 = np.clip(ys.astype(int), 0, cells - 2)
        x0 = np.clip(xs.astype(int), 0, cells - 2)
        fy = (ys - y0)[:, None]
        fx = (xs - x0)[None, :]
        field += amplitude * (
            grid[y0][:, x0] * (1 - fy) * (1 - fx)
            + grid[y0 + 1][:, x0] * fy * (1 - fx)
            + grid[y0][:, x0 + 1] * (1 - fy) * fx
            + grid[y0 + 1][:, x0 + 1] * fy * fx
        )
    field -= field.min()
    field /= max(field.max(), 1e-9)
    return field


def to_u8(a):
    return np.clip(np.round(a), 0, 255).astype(np.uint8)


def ramp_flat_blob():
    rng = np.random.default_rng(301)
    h, w = 96, 96
    y, x = np.mgrid[0:h, 0:w]
    img = 50 + 1.2 * x + 0.4 * y
    img[y > 60] = 160.0
    img += 60 * np.exp(-(((x - 30) ** 2 + (y - 70) ** 2) / 160))
    img += 6 * value_noise(rng, h, w, [(6, 1.0)])
    return to_u8(img)


def cartoon_rgb():
    rng = np.random.default_rng(302)
    h, w = 96, 128
    img = np.empty((h, w, 3))
    shade_field = 40 * value_noise(rng, h, w, [(4, 1.0), (8, 0.4)])
    img[:] = np.stack([165 + shade_field, 175 + shade_field, 160 + shade_field], axis=-1)
    for _ in range(10):
        y0, x0 = int(rng.integers(0, h - 14)), int(rng.integers(0, w - 14))
        dy = int(min(rng.integers(10, 34), h - y0))
        dx = int(min(rng.integers(10, 34), w - x0))
        color = rng.uniform(30, 220, 3)
        xx = np.mgrid[0:dy, 0:dx][1]
        shade = 1 - 0.25 * (xx / max(dx - 1, 1))
        img[y0:y0 + dy, x0:x0 + dx] = color[None, None, :] * shade[:, :, None]
    return to_u8(img)


def cloud_bands():
    rng = np.random.default_rng(305)
    h, w = 192, 192
    base = value_noise(rng, h, w, [(6, 1.0), (12, 0.4)])
    sky = np.clip(3 * (base - 0.45), 0, 1)
    return to_u8(60 + 170 * sky)


def damped_rings():
    rng = np.random.default_rng(304)
    h, w = 160, 160
    y, x = np.mgrid[0:h, 0:w]
    r = np.hypot(x - w / 2, y - h / 2)
    img = 130 + 60 * np.sin(r / 4) * np.exp(-r / 24)
    img += 10 * value_noise(rng, h, w, [(5, 1.0), (10, 0.3)])
    return to_u8(img)


def blobs_odd_rgb():
    rng = np.random.default_rng(105)
    h, w = 87, 123
    y, x = np.mgrid[0:h, 0:w]
    img = np.empty((h, w, 3))
    img[:] = [70, 90, 120]
    for _ in range(5):
        cy, cx = rng.uniform(0, h), rng.uniform(0, w)
        sigma = rng.uniform(8, 16)
        color = rng.uniform(80, 230, 3)
        mask = np.exp(-(((x - cx) ** 2 + (y - cy) ** 2) / (2 * sigma * sigma)))
        img += mask[:, :, None] * (color - img)
    strip = y >= int(h * 0.7)
    gradient = np.stack([50 + 30 * x / w, 60 + 30 * x / w, 70 + 30 * x / w], axis=-1)
    img = np.where(strip[:, :, None], gradient, img)
    img += 14 * value_noise(rng, h, w, [(4, 1.0), (8, 0.4)])[:, :, None]
    return to_u8(img)


def text_marks():
    rng = np.random.default_rng(201)
    h, w = 112, 160
    x = np.mgrid[0:h, 0:w][1]
    img = 200 + 25 * value_noise(rng, h, w, [(5, 1.0), (10, 0.5)]) - 0.15 * x
    for _ in range(240):
        ty, tx = rng.integers(4, h - 6), rng.integers(2, w - 6)
        length = rng.integers(2, 6)
        img[ty:ty + 2, tx:tx + length] = rng.uniform(20, 80)
    return to_u8(img)


def starfield():
    rng = np.random.default_rng(401)
    h, w = 128, 128
    y = np.mgrid[0:h, 0:w][0]
    img = 25 + 18 * value_noise(rng, h, w, [(4, 1.0), (8, 0.5)]) + 12 * y / h
    for _ in range(90):
        cy, cx = int(rng.integers(2, h - 2)), int(rng.integers(2, w - 2))
        brightness = rng.uniform(120, 255)
        img[cy, cx] = brightness
        img[cy - 1:cy + 2, cx - 1:cx + 2] = np.maximum(
            img[cy - 1:cy + 2, cx - 1:cx + 2], brightness * 0.45
        )
    return to_u8(img)


FIXTURES = {
    "ramp_flat_blob_96.pgm": ramp_flat_blob,
    "cartoon_rgb_128x96.ppm": cartoon_rgb,
    "clouds_192.pgm": cloud_bands,
    "rings_160.pgm": damped_rings,
    "blobs_rgb_123x87.ppm": blobs_odd_rgb,
    "textmarks_160x112.pgm": text_marks,
    "starfield_128.pgm": starfield,
}


def golden_gray():
    y, x = np.mgrid[0:20, 0:20]
    return to_u8(60 + 6 * x + 3 * y + 15 * np.sin(x / 2))


def golden_rgb():
    y, x = np.mgrid[0:16, 0:24]
    r = 30 + 8 * x
    g = 200 - 9 * y
    b = 60 + 5 * ((x + y) % 7)
    return np.stack([to_u8(r), to_u8(g), to_u8(b)], axis=-1)


def main():
    IMAGES.mkdir(parents=True, exist_ok=True)
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for old in list(IMAGES.glob("*")) + list(GOLDEN.glob("*")):
        old.unlink()
    for name, maker in FIXTURES.items():
        img = image_from_array(maker())
        (IMAGES / name).write_bytes(codec.save_image(img))
        print(f"wrote {name}: {img.width}x{img.height}x{img.channels}")

    for stem, maker, suffix in (("golden_gray", golden_gray, "pgm"), ("golden_rgb", golden_rgb, "ppm")):
        img = image_from_array(maker())
        (GOLDEN / f"{stem}.{suffix}").write_bytes(codec.save_image(img))
        data = codec.encode_to_bytes(img, CodecParams())
        (GOLDEN / f"{stem}.ahc").write_bytes(data)
        decoded = codec.decode_from_bytes(data)
        (GOLDEN / f"{stem}_decoded.{suffix}").write_bytes(codec.save_image(decoded))
        print(f"wrote {stem}: container {len(data)} bytes")


if __name__ == "__main__":
    main()
