import numpy as np
import pytest

from boxball import (
    RECORD_ORDER,
    SlotComponents,
    SlotError,
    components,
    enumerate_slots,
    identify_stream,
    parse_config,
    records,
    slot_configuration,
    soliton_flow,
    strip_solitons,
    tagged_slot,
    verify_component_shift,
)

from conftest import random_config


class TestSlotConfiguration:
    def test_two_soliton_orders(self):
        order = slot_configuration(parse_config("1100")).order
        assert order.tolist() == [0, 1, 0, 1]

    def test_all_zero_is_records(self):
        order = slot_configuration(np.zeros(4, dtype=np.int8)).order
        assert (order == RECORD_ORDER).all()

    def test_one_soliton_orders(self):
        assert slot_configuration(parse_config("10")).order.tolist() == [0, 0]

    def test_slot_count_inside_soliton(self, rng):
        # an m-soliton holds exactly 2(m-k) interior k-slots
        for m in range(1, 7):
            block = parse_config("1" * m + "0" * m)
            sc = slot_configuration(block)
            for k in range(1, m + 2):
                expected = 2 * (m - k) if k < m else 0
                assert int(np.count_nonzero(sc.order >= k)) == expected


class TestEnumerate:
    def test_all_zero_labels(self):
        table = enumerate_slots(slot_configuration(np.zeros(3, dtype=np.int8)), 0)
        for k in table.per_k:
            assert table.per_k[k].tolist() == [0, 1, 2]
            assert [table.position(k, i) for i in range(3)] == [0, 1, 2]

    def test_record_then_soliton(self):
        table = enumerate_slots(slot_configuration(parse_config("011000")), 0)
        assert table.per_k[1].tolist() == [0, 2, 4, 5]

    def test_anchor_must_be_record(self):
        with pytest.raises(SlotError):
            enumerate_slots(slot_configuration(parse_config("011000")), 1)


class TestComponents:
    def test_single_soliton_first_slot(self):
        assert components(parse_config("011000"), 0).nonzero() == [(2, 0, 1)]

    def test_separated_singles(self):
        assert components(parse_config("0100100"), 0).nonzero() == [
            (1, 0, 1),
            (1, 1, 1),
        ]

    def test_adjacent_singles_share_slot(self):
        assert components(parse_config("01010"), 0).nonzero() == [(1, 0, 2)]

    def test_totals_match_counts(self, rng):
        for _ in range(100):
            cfg = random_config(rng, anchored=True)
            comp = components(cfg, 0)
            sols = identify_stream(cfg)
            for k, group in sols.by_size.items():
                assert comp.total(k) == len(group)

    def test_text_roundtrip(self):
        comp = SlotComponents(counts={1: {0: 2, 3: 1}, 4: {-2: 1}})
        text = comp.to_text()
        assert text.splitlines()[0] == "slots v1"
        assert SlotComponents.from_text(text) == comp

    def test_text_rejects_garbage(self):
        with pytest.raises(SlotError):
            SlotComponents.from_text("nope\n1 2 3\n")


class TestFlows:
    def test_no_material_left_of_anchor(self):
        flow = soliton_flow(parse_config("0110000"), 3, record_zero=0)
        assert all(v == 0 for v in flow.J.values())
        assert all(v == 0 for v in flow.o.values())

    def test_single_crossing(self):
        # 2-soliton left of a mid-window record crosses it within a few steps
        cfg = parse_config("0110000000000")
        anchor = 5
        assert cfg[anchor] == 0
        flow = soliton_flow(cfg, 4, record_zero=anchor)
        assert flow.J[(2, 4)] == 1
        assert flow.offset(1, 4) == 2  # 2(m-k) = 2 slots carried past
        assert flow.offset(2, 4) == 0

    def test_t_zero_like_start(self):
        cfg = parse_config("0110000000000")
        flow = soliton_flow(cfg, 1, record_zero=5)
        assert flow.J[(2, 1)] in (0, 1)


class TestComponentShift:
    def test_single_soliton_shift(self):
        report = verify_component_shift(parse_config("011000000000"), 1, 0)
        assert report.ok and report.checked > 0

    def test_all_zero_vacuous(self):
        report = verify_component_shift(np.zeros(10, dtype=np.int8), 3, 0)
        assert report.ok

    def test_random_mid_anchor(self, rng):
        for _ in range(60):
            cfg = random_config(rng, max_len=90, max_density=0.4, anchored=True)
            rec = records(cfg).positions
            anchor = int(rec[len(rec) // 2])
            report = verify_component_shift(cfg, 3, anchor)
            assert report.ok, report.failures[:3]

    def test_offset_determined_by_larger_components(self, rng):
        # strip sizes <= k and re-track: offsets must not change
        for _ in range(20):
            cfg = random_config(rng, max_len=80, max_density=0.4, anchored=True)
            rec = records(cfg).positions
            anchor = int(rec[len(rec) // 2])
            flow = soliton_flow(cfg, 3, anchor)
            max_size = identify_stream(cfg).max_size
            for k in range(1, max_size):
                thin, removed = strip_solitons(cfg, k)
                new_anchor = anchor - int(np.searchsorted(removed, anchor))
                flow_thin = soliton_flow(thin, 3, new_anchor)
                for s in (1, 2, 3):
                    assert flow.offset(k, s) == flow_thin.offset(k, s)


class TestRelabeledSlotFlow:
    def test_kt_slots_cross_each_tagged_soliton(self, rng):
        # count labels i with the i-th k-slot right of the soliton at time 0
        # and the relabeled i-th k-slot left of (or at) its image at time t
        from boxball import close_config, evolve, match_sets
        from boxball.config import apply_T_reflect, lift_anchored
        from boxball.slots import _evolved_anchor

        for _ in range(25):
            cfg = random_config(rng, max_len=70, max_density=0.35, anchored=True)
            # materialize right-padding records so every crossed slot is enumerable
            cfg = np.concatenate([cfg, np.zeros(60, dtype=np.int8)])
            rec = records(cfg).positions
            anchor = int(rec[len(rec) // 3])
            for t in (1, 2, 3):
                flow = soliton_flow(cfg, t, anchor)
                table0 = enumerate_slots(slot_configuration(cfg), anchor)
                walk = lift_anchored(cfg, anchor)
                sols = identify_stream(cfg)
                tracked = {s: s for s in sols.all()}
                for _step in range(t):
                    walk = apply_T_reflect(walk)
                    new_set = identify_stream(walk.project())
                    mapping = match_sets(sols, new_set)
                    tracked = {s0: mapping[img] for s0, img in tracked.items()}
                    sols = new_set
                out = close_config(walk.project())
                anchor_t = _evolved_anchor(walk)
                table_t = enumerate_slots(slot_configuration(out), anchor_t)
                for s0, st_ in tracked.items():
                    if max(st_.sites) >= len(cfg):
                        continue  # crossed slots would sit past the original window
                    k = s0.size
                    o = flow.offset(k, t)
                    lo0, hi0 = table0.label_range(k)
                    lo_t, hi_t = table_t.label_range(k)
                    crossed = 0
                    for i in range(max(lo0, lo_t - o), min(hi0, hi_t - o)):
                        right_of_start = table0.position(k, i) > max(s0.sites)
                        left_of_end = table_t.position(k, o + i) <= min(st_.sites)
                        crossed += int(right_of_start and left_of_end)
                    assert crossed == k * t, (k, t, crossed)


class TestTaggedSlot:
    def test_records_field_relabeling(self):
        cfg = np.zeros(30, dtype=np.int8)
        for k in (1, 2, 3):
            for t in (0, 1, 2):
                for j in (0, 2):
                    assert tagged_slot(cfg, k, j, t, record_zero=4) == 4 + k * t + j

    def test_t_zero_is_plain_enumeration(self):
        cfg = parse_config("011000")
        assert tagged_slot(cfg, 1, 1, 0, 0) == 2

    def test_appended_relation_preserved(self):
        cfg = parse_config("0011000000000000000000")
        comp = components(cfg, 0)
        (label,) = comp.counts[2]
        for t in (1, 2, 3):
            pos = tagged_slot(cfg, 2, label, t, record_zero=0)
            from boxball import close_config, evolve

            out = close_config(evolve(cfg, t))
            (sol,) = identify_stream(out).by_size[2]
            sites2 = slot_configuration(out).slot_sites(2)
            appended_to = int(sites2[np.searchsorted(sites2, sol.leftmost) - 1])
            assert appended_to == pos

    def test_label_out_of_range(self):
        with pytest.raises(SlotError):
            tagged_slot(np.zeros(5, dtype=np.int8), 1, 99, 0, record_zero=0)
