import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bpcs_video.bitplane import (
    BitPlaneStack,
    Coding,
    checkerboard,
    complexity,
    complexity_map,
    conjugate,
    decompose,
    extract_patch,
    from_gray,
    max_complexity,
    patch_complexities,
    patch_grid,
    recompose,
    to_gray,
    write_patch,
)
from bpcs_video.errors import DimensionError
from oracles import brute_checkerboard, brute_complexity

patches = arrays(np.uint8, (8, 8), elements=st.integers(0, 1))
channels = arrays(
    np.uint8,
    st.tuples(st.integers(1, 20), st.integers(1, 20)),
    elements=st.integers(0, 255),
)


def test_fig1_pixel_planes():
    channel = np.array([[0b01001110]], dtype=np.uint8)
    stack = decompose(channel, Coding.BINARY)
    assert stack.planes[:, 0, 0].tolist() == [0, 1, 1, 1, 0, 0, 1, 0]
    assert stack.planes[1, 0, 0] == 1
    assert stack.planes[2, 0, 0] == 1
    assert stack.planes[7, 0, 0] == 0


@pytest.mark.parametrize("coding", list(Coding))
def test_zero_channel_all_planes_zero(coding):
    stack = decompose(np.zeros((5, 7), dtype=np.uint8), coding)
    assert stack.planes.shape == (8, 5, 7)
    assert not stack.planes.any()


def test_gray_255_sets_only_top_plane():
    stack = decompose(np.full((2, 2), 255, dtype=np.uint8), Coding.GRAY)
    assert stack.planes[7].all()
    assert not stack.planes[:7].any()


def test_gray_exhaustive():
    for b in range(256):
        assert to_gray(b) == b ^ (b >> 1)
        assert from_gray(to_gray(b)) == b
    assert to_gray(0) == 0
    assert to_gray(255) == 128
    values = np.arange(256, dtype=np.uint8)
    assert np.array_equal(from_gray(to_gray(values)), values)


@given(channels, st.sampled_from(list(Coding)))
def test_decompose_recompose_roundtrip(channel, coding):
    stack = decompose(channel, coding)
    assert np.array_equal(recompose(stack), channel)


@given(channels)
def test_binary_planes_are_bits(channel):
    stack = decompose(channel, Coding.BINARY)
    for p in range(8):
        assert np.array_equal(stack.planes[p], (channel >> p) & 1)


def test_recompose_plane0_ones():
    planes = np.zeros((8, 3, 4), dtype=np.uint8)
    planes[0] = 1
    assert np.array_equal(recompose(BitPlaneStack(planes, Coding.BINARY)), np.ones((3, 4), dtype=np.uint8))


def test_decompose_rejects_empty():
    with pytest.raises(DimensionError):
        decompose(np.zeros((0, 4), dtype=np.uint8))


def test_complexity_examples():
    assert complexity(np.zeros((8, 8), dtype=np.uint8)) == 0
    assert complexity(checkerboard()) == 112
    halves = np.tile(np.array([0, 0, 0, 0, 1, 1, 1, 1], dtype=np.uint8), (8, 1))
    assert brute_complexity(halves) == 8
    assert complexity(halves) == 8


@settings(max_examples=300)
@given(patches)
def test_complexity_matches_oracle(patch):
    value = complexity(patch)
    assert value == brute_complexity(patch)
    assert 0 <= value <= 112
    assert (value == 0) == (patch.min() == patch.max())


@given(patches)
def test_conjugation_law(patch):
    conj = conjugate(patch)
    assert complexity(conj) == 112 - complexity(patch)
    assert np.array_equal(conjugate(conj), patch)


def test_conjugate_zero_is_checkerboard():
    assert np.array_equal(conjugate(np.zeros((8, 8), dtype=np.uint8)), checkerboard())


def test_checkerboard_definition():
    board = checkerboard()
    assert board[0, 0] == 1
    assert board[0, 1] == 0
    assert board.tolist() == brute_checkerboard(8)


@pytest.mark.parametrize("side", [1, 2, 4, 8, 16])
def test_max_complexity_matches_checkerboard(side):
    assert max_complexity(side) == brute_complexity(brute_checkerboard(side)) == 2 * side * (side - 1)


def test_max_complexity_values():
    assert max_complexity(8) == 112
    assert max_complexity(1) == 0
    assert max_complexity(4) == 24
    with pytest.raises(DimensionError):
        max_complexity(0)


def test_patch_complexities_vectorized(rng):
    batch = rng.integers(0, 2, (500, 8, 8), dtype=np.uint8)
    expected = [brute_complexity(p) for p in batch]
    assert patch_complexities(batch).tolist() == expected


def test_complexity_map_matches_oracle(rng):
    coded = rng.integers(0, 256, (2, 19, 27, 3), dtype=np.uint8)
    comp = complexity_map(coded)
    assert comp.shape == (2, 3, 8, 2, 3)
    for f in range(2):
        for c in range(3):
            for p in range(8):
                for py in range(2):
                    for px in range(3):
                        block = (coded[f, 8 * py : 8 * py + 8, 8 * px : 8 * px + 8, c] >> p) & 1
                        assert comp[f, c, p, py, px] == brute_complexity(block)


def test_patch_roundtrip_and_bounds(rng):
    plane = rng.integers(0, 2, (20, 20), dtype=np.uint8)
    assert patch_grid(20, 20) == (2, 2)
    before = plane.copy()
    patch = extract_patch(plane, 1, 1)
    write_patch(plane, 1, 1, patch)
    assert np.array_equal(plane, before)

    write_patch(plane, 0, 0, checkerboard())
    assert np.array_equal(extract_patch(plane, 0, 0), checkerboard())

    with pytest.raises(DimensionError):
        extract_patch(plane, 2, 0)
    with pytest.raises(DimensionError):
        write_patch(plane, 0, 2, checkerboard())
