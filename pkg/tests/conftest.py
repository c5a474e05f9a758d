import pathlib

import pytest

from haarcodec import codec
from haarcodec.codec import CodecParams

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus():
    """The checked-in PNM corpus as (name, ImageBuffer) pairs."""
    images = [
        (path.name, codec.load_image(path.read_bytes()))
        for path in sorted((FIXTURES / "images").glob("*"))
    ]
    assert len(images) >= 5, "fixture corpus must hold at least five images"
    return images


@pytest.fixture(scope="session")
def encode_cache():
    """Session-wide memoized encoder so trend suites share their runs."""
    cache = {}

    def encode(name, img, **params):
        key = (name, tuple(sorted(params.items())))
        if key not in cache:
            cache[key] = codec.encode_to_bytes(img, CodecParams(**params))
        return cache[key]

    return encode


@pytest.fixture(scope="session")
def golden_dir():
    return FIXTURES / "golden"
