"""Tensor container byte layout, round trips, and corruption handling."""

import struct

import numpy as np
import pytest

from radiosound import (
    CirFrameSeries,
    FormatError,
    RadarParams,
    load_cir,
    load_tensor,
    save_cir,
    save_tensor,
)


def test_file_layout_matches_header_arithmetic(tmp_path):
    """Byte-level oracle: magic, version, dtype code, dims, payload, metadata."""
    path = tmp_path / "t.rspg"
    save_tensor(np.zeros((2, 3), dtype=np.float32), path, metadata={"a": 1})
    raw = path.read_bytes()

    assert raw[0:4] == b"RSPG"
    version, dtype_code, ndim = struct.unpack_from("<HBB", raw, 4)
    assert (version, dtype_code, ndim) == (1, 0, 2)
    dims = struct.unpack_from("<2Q", raw, 8)
    assert dims == (2, 3)
    payload_start = 8 + 16
    payload_len = 2 * 3 * 4
    assert raw[payload_start : payload_start + payload_len] == bytes(payload_len)
    (meta_len,) = struct.unpack_from("<I", raw, payload_start + payload_len)
    meta = raw[payload_start + payload_len + 4 :]
    assert len(meta) == meta_len
    assert meta == b'{"a":1}'


def test_complex_round_trip_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    data = (rng.standard_normal((128, 128)) + 1j * rng.standard_normal((128, 128))).astype(
        np.complex64
    )
    path = tmp_path / "c.rspg"
    save_tensor(data, path)
    back, meta = load_tensor(path)
    assert back.dtype == np.complex64
    np.testing.assert_array_equal(back, data)
    assert meta == {}


def test_metadata_verbatim(tmp_path):
    meta_in = {"kind": "x", "nested": {"z": [1, 2.5, "s"]}, "flag": True}
    path = tmp_path / "m.rspg"
    save_tensor(np.ones(4, dtype=np.float32), path, metadata=meta_in)
    _, meta = load_tensor(path)
    assert meta == meta_in


@pytest.mark.parametrize(
    "data",
    [
        np.arange(6, dtype=np.float32).reshape(2, 3),
        np.arange(24, dtype=np.float64).reshape(2, 3, 4),
        (np.arange(8) + 1j * np.arange(8)).astype(np.complex64),
        np.float32(3.5),  # zero-rank promotes to shape (1,)
    ],
)
def test_round_trip_all_shapes(data, tmp_path):
    path = tmp_path / "r.rspg"
    save_tensor(data, path)
    back, _ = load_tensor(path)
    arr = np.asarray(data)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    expected = arr.astype(np.complex64 if np.iscomplexobj(arr) else np.float32)
    np.testing.assert_array_equal(back, expected)


def test_bad_magic_raises(tmp_path):
    path = tmp_path / "bad.rspg"
    save_tensor(np.zeros(4, dtype=np.float32), path)
    raw = bytearray(path.read_bytes())
    raw[0:4] = b"XXXX"
    path.write_bytes(bytes(raw))
    with pytest.raises(FormatError):
        load_tensor(path)


def test_truncation_raises(tmp_path):
    path = tmp_path / "t.rspg"
    save_tensor(np.zeros(100, dtype=np.float32), path)
    raw = path.read_bytes()
    for cut in (4, 10, 50, len(raw) - 2):
        path.write_bytes(raw[:cut])
        with pytest.raises(FormatError):
            load_tensor(path)


def test_unknown_dtype_code_raises(tmp_path):
    path = tmp_path / "d.rspg"
    save_tensor(np.zeros(2, dtype=np.float32), path)
    raw = bytearray(path.read_bytes())
    raw[6] = 9
    path.write_bytes(bytes(raw))
    with pytest.raises(FormatError):
        load_tensor(path)


def test_cir_round_trip_rebuilds_params(tmp_path):
    radar = RadarParams(num_range_bins=16, num_receivers=2, slow_time_rate=5000.0)
    rng = np.random.default_rng(1)
    data = rng.standard_normal((2, 16, 300)) + 1j * rng.standard_normal((2, 16, 300))
    cir = CirFrameSeries(data=data, params=radar)
    path = tmp_path / "cir.rspg"
    save_cir(cir, path, extra={"seed": 42})
    back = load_cir(path)
    assert back.params == radar
    # storage narrows to complex64
    np.testing.assert_allclose(back.data, data, rtol=1e-6, atol=1e-6)


def test_load_cir_rejects_wrong_kind(tmp_path):
    path = tmp_path / "notcir.rspg"
    save_tensor(np.zeros((1, 2, 3), dtype=np.complex64), path, metadata={"kind": "other"})
    with pytest.raises(FormatError):
        load_cir(path)
