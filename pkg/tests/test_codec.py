import numpy as np
import pytest

from extdelay import ExtremumMessage, OpCounter, decode_index, encode_max_index


def test_encode_examples():
    msg = encode_max_index([0.5, -1.2, 3.1, 0.0], 2)
    assert msg.bits == "10"
    assert decode_index(msg) == 2
    msg1 = encode_max_index([7.0], 1)
    assert msg1.bits == "0"
    assert decode_index(msg1) == 0


def test_encode_matches_linear_scan():
    rng = np.random.default_rng(2024)
    x = rng.standard_normal(2**10)
    # independent oracle: plain scan
    best = 0
    for i in range(1, x.size):
        if x[i] > x[best]:
            best = i
    assert decode_index(encode_max_index(x, 10)) == best


def test_encode_tie_breaks_to_smallest_index():
    assert decode_index(encode_max_index([1.0, 3.0, 3.0, 3.0], 2)) == 1
    assert decode_index(encode_max_index([2.0, 2.0], 1)) == 0


def test_decode_examples():
    assert decode_index(ExtremumMessage("10", 2)) == 2
    assert decode_index(ExtremumMessage("0" * 10, 10)) == 0
    assert decode_index(ExtremumMessage("1" * 12, 12)) == 2**12 - 1


def test_roundtrip_exhaustive_small_k():
    for k in range(1, 13):
        for j in range(2**k):
            msg = ExtremumMessage(format(j, f"0{k}b"), k)
            assert decode_index(msg) == j


def test_roundtrip_sampled_large_k():
    rng = np.random.default_rng(77)
    for k in (15, 22, 30):
        for j in rng.integers(0, 2**k, size=200):
            msg = ExtremumMessage(format(int(j), f"0{k}b"), k)
            assert decode_index(msg) == int(j)


def test_message_length_is_exactly_k():
    rng = np.random.default_rng(3)
    for k in (1, 4, 9, 16):
        n = min(2**k, 64)
        msg = encode_max_index(rng.standard_normal(n), k)
        assert len(msg.bits) == k  # the whole budget accounting rests on this


def test_encoded_index_is_maximal():
    rng = np.random.default_rng(4)
    for _ in range(300):
        n = int(rng.integers(1, 200))
        x = rng.standard_normal(n)
        j = decode_index(encode_max_index(x, 8))
        assert np.all(x[j] >= x)


def test_encode_rejects():
    with pytest.raises(ValueError):
        encode_max_index([1.0] * 5, 2)  # 5 samples don't fit in 2 bits
    with pytest.raises(ValueError):
        encode_max_index([], 3)
    with pytest.raises(ValueError):
        encode_max_index([1.0], 0)


def test_message_validation_rejects():
    with pytest.raises(ValueError):
        ExtremumMessage("10", 3)
    with pytest.raises(ValueError):
        ExtremumMessage("102", 3)
    with pytest.raises(ValueError):
        ExtremumMessage("", 0)


def test_encode_counts_scan_work():
    rng = np.random.default_rng(5)
    c1 = OpCounter()
    encode_max_index(rng.standard_normal(2**10), 10, counter=c1)
    c2 = OpCounter()
    encode_max_index(rng.standard_normal(2**12), 12, counter=c2)
    ratio = c2.total / c1.total
    assert 2 <= ratio <= 8  # linear in block length, 4x sweep
