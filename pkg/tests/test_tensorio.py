import numpy as np
import pytest

from seta.tensorio import TensorFormatError, load_tensor, save_tensor


def test_real_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    arr = rng.standard_normal((3, 4, 5)).astype(np.float32)
    path = tmp_path / "t.bin"
    save_tensor(path, arr)
    back = load_tensor(path)
    assert back.dtype == np.float32
    assert np.array_equal(back, arr)


def test_complex_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    arr = (rng.standard_normal((2, 6)) + 1j * rng.standard_normal((2, 6))).astype(
        np.complex64
    )
    path = tmp_path / "c.bin"
    save_tensor(path, arr)
    back = load_tensor(path)
    assert back.dtype == np.complex64
    assert np.array_equal(back, arr)


def test_interleaved_layout(tmp_path):
    arr = np.array([[1 + 2j, 3 + 4j]], dtype=np.complex64)
    path = tmp_path / "c.bin"
    save_tensor(path, arr)
    raw = path.read_bytes()
    # header: 8 magic + 4 rank + 8 dims
    payload = np.frombuffer(raw, dtype="<f4", offset=20)
    assert payload.tolist() == [1.0, 2.0, 3.0, 4.0]


def test_bad_magic(tmp_path):
    path = tmp_path / "bad.bin"
    path.write_bytes(b"NOTATENS" + b"\x00" * 8)
    with pytest.raises(TensorFormatError):
        load_tensor(path)


def test_truncated_payload(tmp_path):
    rng = np.random.default_rng(2)
    arr = rng.standard_normal((4, 4)).astype(np.float32)
    path = tmp_path / "t.bin"
    save_tensor(path, arr)
    path.write_bytes(path.read_bytes()[:-4])
    with pytest.raises(TensorFormatError):
        load_tensor(path)
