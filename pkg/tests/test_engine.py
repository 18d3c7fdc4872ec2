import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import bpcs_video.engine as engine
from bpcs_video.bitplane import Coding, checkerboard, complexity_map, encode_values
from bpcs_video.container import blocks_needed, build_container
from bpcs_video.engine import EmbedConfig, capacity, embed, extract, plan_slots, select_frames, shuffle
from bpcs_video.errors import (
    CapacityError,
    ConfigError,
    CorruptionError,
    NoPayloadError,
    StegoError,
    TruncationError,
    VersionError,
)
from bpcs_video.frames import Frame, FrameSequence
from bpcs_video.synth import flat_frames, natural_frames
from oracles import count_complex_patches, lcg_fisher_yates


def test_select_full_range():
    assert select_frames(15, EmbedConfig(start_frame=0, end_frame=14)) == list(range(15))
    assert select_frames(15, EmbedConfig()) == list(range(15))


def test_select_stride():
    assert select_frames(15, EmbedConfig(start_frame=2, end_frame=10, stride=4)) == [2, 6, 10]


def test_select_shuffle_golden():
    cfg = EmbedConfig(start_frame=0, end_frame=4, shuffle_seed=1)
    assert lcg_fisher_yates(range(5), 1) == [0, 2, 1, 4, 3]
    assert select_frames(5, cfg) == [0, 2, 1, 4, 3]


@given(st.integers(0, 2**64 - 1), st.integers(0, 40))
def test_shuffle_matches_oracle(seed, n):
    out = shuffle(range(n), seed)
    assert out == lcg_fisher_yates(range(n), seed)
    assert sorted(out) == list(range(n))


def test_select_range_errors():
    with pytest.raises(ConfigError):
        select_frames(15, EmbedConfig(end_frame=15))
    with pytest.raises(ConfigError):
        select_frames(3, EmbedConfig(start_frame=3))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"threshold": 0},
        {"threshold": 57},
        {"stride": 0},
        {"plane_mask": ()},
        {"plane_mask": (8,)},
        {"start_frame": 4, "end_frame": 3},
        {"shuffle_seed": 2**64},
        {"start_frame": -1},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        EmbedConfig(**kwargs)


def test_flat_sequence_has_no_slots():
    seq = flat_frames()
    assert plan_slots(seq, EmbedConfig()).capacity_blocks == 0
    assert capacity(seq, EmbedConfig()) == (0, 0)


def test_single_checkerboard_slot():
    pixels = np.zeros((8, 8, 1), dtype=np.uint8)
    pixels[:, :, 0] = checkerboard()
    plan = plan_slots(FrameSequence([Frame(pixels)]), EmbedConfig(threshold=34, plane_mask=(0,)))
    assert plan.as_tuples() == [(0, 0, 0, 0, 0)]
    # one slot cannot hold even the bare 2-block header
    with pytest.raises(CapacityError, match="needs 2 blocks but only 1"):
        embed(FrameSequence([Frame(pixels)]), b"", EmbedConfig(threshold=34, plane_mask=(0,)))


@pytest.mark.parametrize("coding", list(Coding))
def test_slot_count_matches_full_scan(coding):
    rng = np.random.default_rng(11)
    frames = [Frame(rng.integers(0, 256, (64, 64, 1), dtype=np.uint8)) for _ in range(10)]
    # uniform noise is complex in every plane; mix in a smooth ramp so thresholds bite
    ramp = np.add.outer(np.arange(64), np.arange(64)).astype(np.uint8)[:, :, None]
    frames[3] = Frame(ramp)
    seq = FrameSequence(frames)
    nested = [f.pixels.tolist() for f in frames]
    for threshold in (1, 34, 56):
        cfg = EmbedConfig(threshold=threshold, coding=coding)
        expected = count_complex_patches(nested, range(8), threshold, gray=coding is Coding.GRAY)
        assert plan_slots(seq, cfg).capacity_blocks == expected


def test_plan_canonical_order(small_natural):
    cfg = EmbedConfig(start_frame=1, end_frame=3, shuffle_seed=5, plane_mask=(0, 2, 4))
    slots = plan_slots(small_natural, cfg).slots
    order = select_frames(len(small_natural), cfg)
    key = np.column_stack([
        [order.index(f) for f in slots[:, 0]], slots[:, 1], slots[:, 2], slots[:, 4], slots[:, 3]
    ])
    assert len(np.unique(key, axis=0)) == len(key)
    assert np.array_equal(np.lexsort(key.T[::-1]), np.arange(len(key)))
    assert set(slots[:, 2]) <= {0, 2, 4}


@pytest.mark.parametrize("coding", list(Coding))
def test_roundtrip_various(small_natural, rng, coding):
    cfg = EmbedConfig(coding=coding, start_frame=1, stride=2)
    _, cap = capacity(small_natural, cfg)
    for n in (0, 1, 100, cap):
        payload = rng.bytes(n)
        stego, report = embed(small_natural, payload, cfg)
        assert extract(stego, cfg) == payload
        assert report.blocks_conjugated <= report.blocks_written <= report.capacity_blocks


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(
    payload=st.binary(max_size=2000),
    threshold=st.integers(1, 56),
    planes=st.sets(st.integers(0, 7), min_size=1),
    coding=st.sampled_from(list(Coding)),
)
def test_roundtrip_property(small_natural, payload, threshold, planes, coding):
    cfg = EmbedConfig(threshold=threshold, plane_mask=tuple(planes), coding=coding)
    blocks, cap = capacity(small_natural, cfg)
    # cap == 0 also covers "under 2 blocks", where even b"" does not fit
    if blocks_needed(len(payload)) > blocks:
        assert len(payload) > cap or blocks < 2
        with pytest.raises(CapacityError):
            embed(small_natural, payload, cfg)
        return
    stego, _ = embed(small_natural, payload, cfg)
    assert extract(stego, cfg) == payload


def test_empty_payload_writes_two_blocks(small_natural):
    _, report = embed(small_natural, b"", EmbedConfig())
    assert report.blocks_written == 2
    assert report.frames_touched == 1


def test_capacity_error_is_atomic():
    seq = flat_frames()
    with pytest.raises(CapacityError) as info:
        embed(seq, b"x", EmbedConfig())
    assert (info.value.required, info.value.available) == (2, 0)


def test_capacity_error_reports_counts(small_natural):
    blocks, cap = capacity(small_natural, EmbedConfig(plane_mask=(7,)))
    with pytest.raises(CapacityError, match=f"only {blocks}"):
        embed(small_natural, bytes(cap + 64), EmbedConfig(plane_mask=(7,)))


def test_capacity_formula(small_natural):
    blocks, nbytes = capacity(small_natural, EmbedConfig())
    assert nbytes == max(0, 63 * blocks // 8 - 14)


def test_capacity_monotone_in_threshold(small_natural):
    caps = [capacity(small_natural, EmbedConfig(threshold=t))[0] for t in range(1, 57)]
    assert all(a >= b for a, b in zip(caps, caps[1:]))


def _changed_planes(cover: FrameSequence, stego: FrameSequence, coding):
    """Per (frame, channel, plane, py, px): did any bit in that patch change."""
    a = encode_values(cover.stack(), coding)
    b = encode_values(stego.stack(), coding)
    diff = a ^ b
    f, h, w, c = diff.shape
    rows, cols = h // 8, w // 8
    tiles = diff[:, : rows * 8, : cols * 8].reshape(f, rows, 8, cols, 8, c)
    out = np.zeros((f, c, 8, rows, cols), dtype=bool)
    for p in range(8):
        out[:, :, p] = ((tiles >> p) & 1).any(axis=(2, 4)).transpose(0, 3, 1, 2)
    outside = diff.copy()
    outside[:, : rows * 8, : cols * 8] = 0
    return out, not outside.any()


@pytest.mark.parametrize("coding", list(Coding))
def test_locality_and_detectability(small_natural, rng, coding):
    cfg = EmbedConfig(start_frame=1, end_frame=3, stride=2, plane_mask=(0, 1, 3), coding=coding, threshold=30)
    _, cap = capacity(small_natural, cfg)
    payload = rng.bytes(cap // 2)
    stego, report = embed(small_natural, payload, cfg)

    written = plan_slots(small_natural, cfg).slots[: report.blocks_written]
    allowed = np.zeros((4, 3, 8, 6, 8), dtype=bool)
    allowed[written[:, 0], written[:, 1], written[:, 2], written[:, 4], written[:, 3]] = True
    changed, edges_clean = _changed_planes(small_natural, stego, coding)
    assert edges_clean
    assert not (changed & ~allowed).any()
    assert stego[0] == small_natural[0] and stego[2] == small_natural[2]

    comp = complexity_map(encode_values(stego.stack(), coding))
    assert (comp[written[:, 0], written[:, 1], written[:, 2], written[:, 4], written[:, 3]] >= cfg.threshold).all()

    stego_plan = plan_slots(stego, cfg).slots[: report.blocks_written]
    assert np.array_equal(stego_plan, written)
    assert sum(report.per_plane_usage.values()) == report.blocks_written


def test_pixel_delta_bound(small_natural, rng):
    cfg = EmbedConfig(plane_mask=(0, 1))
    _, cap = capacity(small_natural, cfg)
    stego, _ = embed(small_natural, rng.bytes(cap), cfg)
    delta = np.abs(stego.stack().astype(int) - small_natural.stack().astype(int))
    assert delta.max() <= 3


def test_determinism(small_natural, rng):
    payload = rng.bytes(500)
    cfg = EmbedConfig(shuffle_seed=1, coding=Coding.GRAY)
    a, ra = embed(small_natural, payload, cfg)
    b, rb = embed(small_natural, payload, cfg)
    assert all(x == y for x, y in zip(a, b))
    assert ra == rb


def test_cover_is_not_modified(small_natural, rng):
    before = small_natural.stack()
    embed(small_natural, rng.bytes(3000), EmbedConfig())
    assert np.array_equal(small_natural.stack(), before)


def test_extract_on_cover_finds_nothing(small_natural):
    with pytest.raises(NoPayloadError):
        extract(small_natural, EmbedConfig())
    with pytest.raises(NoPayloadError):
        extract(flat_frames(), EmbedConfig())


def test_extract_coding_mismatch(small_natural):
    stego, _ = embed(small_natural, b"hello", EmbedConfig(coding=Coding.GRAY))
    with pytest.raises(StegoError):
        extract(stego, EmbedConfig(coding=Coding.BINARY))


def test_extract_truncated(rng):
    seq = natural_frames(count=3, height=48, width=64, seed=8)
    cfg = EmbedConfig(plane_mask=(0,))
    blocks, cap = capacity(seq, cfg)
    stego, report = embed(seq, rng.bytes(cap), cfg)
    assert report.frames_touched == 3
    cut = FrameSequence([stego[0], stego[1], flat_frames(1, 48, 64)[0]])
    with pytest.raises(TruncationError):
        extract(cut, cfg)


def test_extract_version_error(small_natural, monkeypatch):
    def future_container(payload, coding):
        data = bytearray(build_container(payload, coding))
        data[4] = 9
        return bytes(data)

    monkeypatch.setattr(engine, "build_container", future_container)
    stego, _ = embed(small_natural, b"abc", EmbedConfig())
    with pytest.raises(VersionError):
        extract(stego, EmbedConfig())


def test_extract_crc_error(small_natural, monkeypatch):
    def bad_crc(payload, coding):
        data = bytearray(build_container(payload, coding))
        data[13] ^= 0xFF
        return bytes(data)

    monkeypatch.setattr(engine, "build_container", bad_crc)
    stego, _ = embed(small_natural, b"abc" * 50, EmbedConfig())
    with pytest.raises(CorruptionError):
        extract(stego, EmbedConfig())


def test_mismatched_key_never_silent(small_natural, rng):
    payload = rng.bytes(800)
    cfg = EmbedConfig(start_frame=1, end_frame=3, threshold=34)
    stego, _ = embed(small_natural, payload, cfg)
    for wrong in (
        EmbedConfig(start_frame=0, end_frame=3, threshold=34),
        EmbedConfig(start_frame=2, end_frame=3, threshold=34),
        EmbedConfig(start_frame=1, end_frame=3, threshold=20),
        EmbedConfig(start_frame=1, end_frame=3, threshold=50),
        # seed 2 moves frame 3 to the front; a seed keeping frame 1 first would still extract correctly
        EmbedConfig(start_frame=1, end_frame=3, threshold=34, shuffle_seed=2),
        EmbedConfig(start_frame=1, end_frame=3, threshold=34, plane_mask=(1, 2)),
    ):
        with pytest.raises(StegoError):
            extract(stego, wrong)


def test_partial_edge_patches_untouched(rng):
    seq = natural_frames(count=2, height=45, width=50, seed=4)
    cfg = EmbedConfig()
    _, cap = capacity(seq, cfg)
    payload = rng.bytes(cap)
    stego, _ = embed(seq, payload, cfg)
    assert extract(stego, cfg) == payload
    for before, after in zip(seq, stego):
        assert np.array_equal(before.pixels[40:], after.pixels[40:])
        assert np.array_equal(before.pixels[:, 48:], after.pixels[:, 48:])
