import pytest
from hypothesis import given
from hypothesis import strategies as st

from tfnpkit.bits import (
    all_bitstrings,
    check_bits,
    complement,
    from_int,
    parity,
    splice,
    to_int,
    xor_bits,
    zeros,
)
from tfnpkit.errors import DimensionError


@given(st.integers(min_value=0, max_value=2**20 - 1), st.integers(min_value=20, max_value=24))
def test_int_roundtrip(value, width):
    assert to_int(from_int(value, width)) == value


@given(st.integers(min_value=1, max_value=10))
def test_lexicographic_order_matches_integer_order(width):
    strings = list(all_bitstrings(width))
    assert strings == sorted(strings)
    assert [to_int(s) for s in strings] == list(range(1 << width))


@given(st.text(alphabet="01", min_size=1, max_size=12), st.integers(0, 13), st.booleans())
def test_splice_inserts_at_position(s, pos, bit):
    if not 1 <= pos <= len(s) + 1:
        with pytest.raises(DimensionError):
            splice(s, pos, int(bit))
        return
    out = splice(s, pos, int(bit))
    assert len(out) == len(s) + 1
    assert out[pos - 1] == str(int(bit))
    assert out[: pos - 1] + out[pos:] == s


def test_helpers():
    assert complement("0110") == "1001"
    assert parity("01") == "1"
    assert parity("11") == "0"
    assert xor_bits("0110", "1100") == "1010"
    assert zeros(3) == "000"
    with pytest.raises(DimensionError):
        check_bits("012")
    with pytest.raises(DimensionError):
        from_int(8, 3)
