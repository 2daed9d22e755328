import numpy as np

from boxball import (
    ComponentCursor,
    SlotComponents,
    components,
    excursions,
    format_config,
    identify_stream,
    n_slots_in_excursion,
    parse_config,
    reconstruct,
    reconstruct_config,
    reconstruct_excursion,
    strip_solitons,
)

from conftest import random_config


def random_zeta(rng, K=5, span=8):
    counts = {}
    for k in range(1, K + 1):
        per = {}
        for i in range(int(rng.integers(0, span))):
            if rng.random() < 0.4:
                per[i] = int(rng.integers(1, 3))
        if per:
            counts[k] = per
    return SlotComponents(counts=counts)


class TestSlotCounts:
    def test_empty_excursion(self):
        (empty, rec) = excursions(parse_config("00"))[:2]
        for k in (1, 2, 5):
            assert n_slots_in_excursion(empty, k) == 1

    def test_single_soliton_counts(self):
        (exc,) = excursions(parse_config("111000"))
        for k in (1, 2, 3, 4):
            expected = 1 + 2 * (3 - k) if k < 3 else 1
            assert n_slots_in_excursion(exc, k) == expected

    def test_nested_matches_slot_configuration(self, rng):
        for _ in range(50):
            cfg = random_config(rng, max_len=60, anchored=True)
            for exc in excursions(cfg):
                if exc.is_empty:
                    continue
                sols = identify_stream(exc.bits)
                for k in range(1, sols.max_size + 1):
                    from boxball import slot_configuration

                    interior = int(
                        np.count_nonzero(slot_configuration(exc.bits).order >= k)
                    )
                    assert n_slots_in_excursion(exc, k) == 1 + interior


class TestExcursionBuilder:
    def test_zero_field_empty(self):
        assert len(reconstruct_excursion(SlotComponents(counts={}))) == 0

    def test_single_soliton(self):
        z = SlotComponents(counts={2: {0: 1}})
        assert format_config(reconstruct_excursion(z)) == "1100"

    def test_nested_insertion_roundtrip(self):
        z = SlotComponents(counts={3: {0: 1}, 1: {1: 1}})
        eps = reconstruct_excursion(z)
        assert format_config(eps) == "11011000"
        bits, origin = reconstruct_config(z, n_right=1)
        assert components(bits, origin) == z

    def test_cursor_advances_by_slot_counts(self):
        z = SlotComponents(counts={2: {0: 1}})
        cursor = ComponentCursor()
        reconstruct_excursion(z, cursor)
        # the built "1100" has 3 one-slots (record + 2 interior) and 1 two-slot
        assert cursor.right[1] == 3
        assert cursor.right[2] == 1


class TestInverse:
    def test_zero_field_records(self):
        bits, origin = reconstruct_config(SlotComponents(counts={}), n_right=3)
        assert format_config(bits) == "000" and origin == 0

    def test_left_side_uses_negative_labels(self):
        z = SlotComponents(counts={1: {-1: 1}, 2: {-2: 1}})
        bits, origin = reconstruct_config(z, n_right=0, n_left=2)
        assert components(bits, origin) == z

    def test_decompose_then_rebuild(self, rng):
        for _ in range(1000):
            cfg = random_config(rng, max_len=150, anchored=True)
            comp = components(cfg, 0)
            n_right = len(excursions(cfg)) - 1
            bits, origin = reconstruct_config(comp, n_right=max(n_right, 1))
            assert origin == 0
            assert np.array_equal(np.trim_zeros(cfg, "b"), np.trim_zeros(bits, "b"))

    def test_rebuild_then_decompose(self, rng):
        for _ in range(1000):
            z = random_zeta(rng)
            bits, origin = reconstruct_config(z)
            assert components(bits, origin) == z

    def test_two_sided_rebuild_roundtrip(self, rng):
        for _ in range(100):
            counts = {}
            for k in range(1, 4):
                per = {}
                for i in range(-4, 4):
                    if rng.random() < 0.3:
                        per[i] = int(rng.integers(1, 3))
                if per:
                    counts[k] = per
            z = SlotComponents(counts=counts)
            bits, origin = reconstruct_config(z, n_right=6, n_left=6)
            assert components(bits, origin) == z

    def test_walk_anchored_at_origin(self):
        z = SlotComponents(counts={2: {0: 1, -1: 1}})
        walk = reconstruct(z, n_right=2, n_left=1)
        assert walk.values[-walk.start] == 0


class TestStripping:
    def test_strip_preserves_larger_components(self, rng):
        for _ in range(100):
            cfg = random_config(rng, max_len=100, anchored=True)
            full = components(cfg, 0)
            max_size = identify_stream(cfg).max_size
            for k in range(1, max_size + 1):
                thin, removed = strip_solitons(cfg, k)
                anchor = 0 - int(np.searchsorted(removed, 0))
                thin_comp = components(thin, anchor)
                for m in range(k + 1, max_size + 1):
                    assert thin_comp.counts.get(m, {}) == full.counts.get(m, {})

    def test_strip_everything_leaves_records(self):
        cfg = parse_config("0110100")
        thin, removed = strip_solitons(cfg, 2)
        assert thin.sum() == 0
        assert len(removed) == 6
