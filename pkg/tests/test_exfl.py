import struct

import numpy as np
import pytest

from exflow import exfl
from exflow import spectral as sp


def test_round_trip_1d(tmp_path, rng):
    g = sp.GridSpec(dim=1, n=64)
    f = sp.random_band_limited(g, rng, 1, 20)
    path = tmp_path / "f.exfl"
    exfl.write_field(path, f)
    back = exfl.read_samples(path)
    np.testing.assert_allclose(back, sp.to_physical(f), rtol=0, atol=0)


def test_round_trip_2d(tmp_path, rng):
    g = sp.GridSpec(dim=2, n=32)
    f = sp.random_band_limited(g, rng, 1, 8)
    path = tmp_path / "f2.exfl"
    exfl.write_field(path, f)
    field = exfl.read_field(path)
    np.testing.assert_allclose(field.coeffs, f.coeffs, atol=1e-14)


def test_byte_layout(tmp_path):
    samples = np.arange(8.0 * 8).reshape(8, 8)
    path = tmp_path / "g.exfl"
    exfl.write_samples(path, samples)
    raw = path.read_bytes()
    assert raw[:4] == b"EXFL"
    version, dim, n0, n1 = struct.unpack_from("<IIII", raw, 4)
    assert (version, dim, n0, n1) == (1, 2, 8, 8)
    payload = np.frombuffer(raw, dtype="<f8", offset=20)
    np.testing.assert_array_equal(payload, samples.ravel())  # row-major


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "bad.exfl"
    path.write_bytes(b"NOPE" + b"\x00" * 32)
    with pytest.raises(ValueError, match="magic"):
        exfl.read_samples(path)
