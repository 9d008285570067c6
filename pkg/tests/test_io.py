"""File formats, round trips, parse failures, and score serialization."""

import json
import struct

import numpy as np
import pytest

from prdc_eval import compute_prdc, load_embeddings, save_embeddings
from prdc_eval.errors import DataError
from prdc_eval.io import (FORMATS, detect_format, format_scores_csv,
                          format_scores_json, npy_bytes)


@pytest.fixture
def rng():
    return np.random.default_rng(20240812)


def test_csv_basic(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("0,0\n3,4\n")
    np.testing.assert_array_equal(load_embeddings(path), [[0.0, 0.0], [3.0, 4.0]])


def test_csv_tolerates_blank_lines_and_spaces(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("1 , 2\n\n3,4\n\n")
    np.testing.assert_array_equal(load_embeddings(path), [[1.0, 2.0], [3.0, 4.0]])


def test_raw_f64_matches_csv_case(tmp_path):
    path = tmp_path / "a.f64"
    path.write_bytes(struct.pack("<QQ", 2, 2) + struct.pack("<4d", 0, 0, 3, 4))
    np.testing.assert_array_equal(load_embeddings(path), [[0.0, 0.0], [3.0, 4.0]])


@pytest.mark.parametrize("suffix", [".csv", ".f64", ".npy"])
def test_round_trip_is_bit_identical(tmp_path, rng, suffix):
    arr = rng.standard_normal((100, 64))
    path = tmp_path / ("m" + suffix)
    save_embeddings(path, arr)
    np.testing.assert_array_equal(load_embeddings(path), arr)


def test_raw_f32_round_trip(tmp_path, rng):
    # exact only when the data is already single-precision representable
    arr = rng.standard_normal((20, 5)).astype(np.float32).astype(np.float64)
    path = tmp_path / "m.f32"
    save_embeddings(path, arr)
    loaded = load_embeddings(path)
    assert loaded.dtype == np.float64
    np.testing.assert_array_equal(loaded, arr)


def test_raw_f32_quantizes_doubles(tmp_path, rng):
    arr = rng.standard_normal((10, 3))
    path = tmp_path / "m.f32"
    save_embeddings(path, arr)
    np.testing.assert_allclose(load_embeddings(path), arr, rtol=1e-6, atol=1e-7)


def test_npy_interop_with_numpy(tmp_path, rng):
    arr = rng.standard_normal((17, 9))
    theirs = tmp_path / "theirs.npy"
    np.save(theirs, arr)
    np.testing.assert_array_equal(load_embeddings(theirs), arr)

    ours = tmp_path / "ours.npy"
    save_embeddings(ours, arr)
    np.testing.assert_array_equal(np.load(ours), arr)


def test_npy_float32_from_numpy(tmp_path, rng):
    arr = rng.standard_normal((8, 4)).astype(np.float32)
    path = tmp_path / "f32.npy"
    np.save(path, arr)
    loaded = load_embeddings(path)
    assert loaded.dtype == np.float64
    np.testing.assert_array_equal(loaded, arr.astype(np.float64))


def test_npy_bytes_header_is_aligned(rng):
    blob = npy_bytes(rng.standard_normal((3, 2)))
    data_start = 10 + struct.unpack("<H", blob[8:10])[0]
    assert data_start % 64 == 0


def test_cross_format_metrics_agree(tmp_path, rng):
    real = rng.standard_normal((60, 6))
    fake = rng.standard_normal((50, 6))
    records = []
    for suffix in (".csv", ".f64", ".npy"):
        rp, fp = tmp_path / ("r" + suffix), tmp_path / ("f" + suffix)
        save_embeddings(rp, real)
        save_embeddings(fp, fake)
        records.append(compute_prdc(load_embeddings(rp),
                                    load_embeddings(fp), 3, 5).as_record())
    assert records[0] == records[1] == records[2]


def test_detect_format():
    assert detect_format("x.csv") == "csv"
    assert detect_format("x.f32") == "raw_f32"
    assert detect_format("/tmp/deep/x.f64") == "raw_f64"
    assert detect_format("x.NPY") == "npy_subset"
    with pytest.raises(DataError, match="cannot detect format"):
        detect_format("x.parquet")


def test_explicit_format_overrides_extension(tmp_path, rng):
    arr = rng.standard_normal((4, 2))
    path = tmp_path / "data.bin"
    save_embeddings(path, arr, format="raw_f64")
    np.testing.assert_array_equal(load_embeddings(path, format="raw_f64"), arr)
    with pytest.raises(DataError, match="unknown format"):
        load_embeddings(path, format="feather")
    with pytest.raises(DataError, match="unknown format"):
        save_embeddings(path, arr, format="feather")


def test_missing_file_names_the_path(tmp_path):
    with pytest.raises(DataError, match="nowhere.csv: file not found"):
        load_embeddings(tmp_path / "nowhere.csv")


def test_save_into_missing_directory(tmp_path, rng):
    with pytest.raises(DataError):
        save_embeddings(tmp_path / "no" / "dir" / "x.csv",
                        rng.standard_normal((2, 2)))


def test_ragged_csv(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3,4,5\n")
    with pytest.raises(DataError, match="row 2 has 3 values, expected 2"):
        load_embeddings(path)


def test_non_numeric_csv_cell(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,two\n")
    with pytest.raises(DataError, match="row 1, column 2.*'two'"):
        load_embeddings(path)


def test_nan_csv_cell(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3,nan\n")
    with pytest.raises(DataError, match="non-finite value at row 2, column 2"):
        load_embeddings(path)


def test_empty_csv(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("\n\n")
    with pytest.raises(DataError, match="no data rows"):
        load_embeddings(path)


def test_non_utf8_csv(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_bytes(b"\xff\xfe1,2\n")
    with pytest.raises(DataError, match="not valid utf-8"):
        load_embeddings(path)


def test_raw_truncated_header(tmp_path):
    path = tmp_path / "bad.f64"
    path.write_bytes(b"\x00" * 8)
    with pytest.raises(DataError, match="truncated header, need 16 bytes, found 8"):
        load_embeddings(path)


def test_raw_empty_shape(tmp_path):
    path = tmp_path / "bad.f64"
    path.write_bytes(struct.pack("<QQ", 0, 5))
    with pytest.raises(DataError, match=r"empty shape \(0, 5\)"):
        load_embeddings(path)


def test_raw_payload_size_mismatch(tmp_path):
    path = tmp_path / "bad.f64"
    path.write_bytes(struct.pack("<QQ", 2, 2) + struct.pack("<3d", 0, 0, 3))
    with pytest.raises(DataError, match="header declares 2x2 float64 "
                                        r"\(32 payload bytes\), found 24"):
        load_embeddings(path)


def test_raw_non_finite_payload(tmp_path):
    path = tmp_path / "bad.f64"
    path.write_bytes(struct.pack("<QQ", 1, 2) + struct.pack("<2d", 1.0, float("inf")))
    with pytest.raises(DataError, match="non-finite value at row 1, column 2"):
        load_embeddings(path)


def test_npy_bad_magic(tmp_path):
    path = tmp_path / "bad.npy"
    path.write_bytes(b"NOTNPY" + b"\x00" * 64)
    with pytest.raises(DataError, match="bad magic"):
        load_embeddings(path)


def test_npy_unsupported_version(tmp_path, rng):
    blob = bytearray(npy_bytes(rng.standard_normal((2, 2))))
    blob[6:8] = bytes((2, 0))
    path = tmp_path / "bad.npy"
    path.write_bytes(bytes(blob))
    with pytest.raises(DataError, match="unsupported npy version 2.0"):
        load_embeddings(path)


def test_npy_fortran_order_rejected(tmp_path, rng):
    path = tmp_path / "f.npy"
    np.save(path, np.asfortranarray(rng.standard_normal((3, 2))))
    with pytest.raises(DataError, match="Fortran-order"):
        load_embeddings(path)


def test_npy_integer_dtype_rejected(tmp_path):
    path = tmp_path / "i.npy"
    np.save(path, np.arange(6).reshape(2, 3))
    with pytest.raises(DataError, match="unsupported npy dtype"):
        load_embeddings(path)


def test_npy_1d_shape_rejected(tmp_path):
    path = tmp_path / "v.npy"
    np.save(path, np.zeros(5))
    with pytest.raises(DataError, match=r"unsupported npy shape \(5,\)"):
        load_embeddings(path)


def test_npy_truncated_payload(tmp_path, rng):
    blob = npy_bytes(rng.standard_normal((4, 4)))
    path = tmp_path / "t.npy"
    path.write_bytes(blob[:-8])
    with pytest.raises(DataError, match="payload has 120 bytes, "):
        load_embeddings(path)


def test_npy_malformed_header_dict(tmp_path):
    head = b"{'descr': '<f8', 'fortran_order'"
    blob = b"\x93NUMPY" + bytes((1, 0)) + struct.pack("<H", len(head)) + head
    path = tmp_path / "m.npy"
    path.write_bytes(blob)
    with pytest.raises(DataError, match="malformed npy header"):
        load_embeddings(path)


def test_score_json_golden_line():
    scores = compute_prdc(np.array([[0.0], [1.0], [3.0]]),
                          np.array([[0.5], [10.0]]), 1, 1)
    line = format_scores_json(scores)
    assert line == ('{"precision": 0.500000, "recall": 1.000000, '
                    '"density": 1.000000, "coverage": 0.666667, '
                    '"k_pr": 1, "k_dc": 1, "n_real": 3, "n_fake": 2}')
    parsed = json.loads(line)
    assert parsed["precision"] == 0.5
    assert list(parsed) == ["precision", "recall", "density", "coverage",
                            "k_pr", "k_dc", "n_real", "n_fake"]


def test_score_csv_golden_lines():
    scores = compute_prdc(np.array([[0.0], [1.0], [3.0]]),
                          np.array([[0.5], [10.0]]), 1, 1)
    header, values = format_scores_csv(scores).split("\n")
    assert header == "precision,recall,density,coverage,k_pr,k_dc,n_real,n_fake"
    assert values == "0.500000,1.000000,1.000000,0.666667,1,1,3,2"


def test_formats_constant():
    assert FORMATS == ("csv", "raw_f32", "raw_f64", "npy_subset")
