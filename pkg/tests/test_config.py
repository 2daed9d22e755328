import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxball import (
    NotRecordClosedError,
    ParseError,
    apply_T,
    apply_T_carrier,
    apply_T_reflect,
    ball_count,
    close_config,
    excursions,
    format_config,
    lift,
    parse_config,
    records,
)

from conftest import random_config

bit_lists = st.lists(st.integers(0, 1), max_size=60)


class TestParse:
    def test_transcription(self):
        assert parse_config("0 1 1 0").tolist() == [0, 1, 1, 0]

    def test_empty(self):
        assert parse_config("").tolist() == []

    def test_bad_character_position(self):
        with pytest.raises(ParseError) as exc:
            parse_config("012")
        assert exc.value.position == 2

    def test_roundtrip(self):
        text = "0010110000110100000"
        assert format_config(parse_config(text)) == text


class TestLift:
    def test_empty_walk(self):
        walk = lift([])
        assert len(walk) == 0 and walk.base == 0

    def test_step_rule(self):
        assert lift([1, 0]).values.tolist() == [1, 0]
        assert lift([0, 0, 1]).values.tolist() == [-1, -2, -1]

    @given(bit_lists)
    def test_project_roundtrip(self, bits):
        assert lift(bits).project().tolist() == bits


class TestRecords:
    def test_all_zero(self):
        assert records([0, 0, 0]).positions.tolist() == [0, 1, 2]

    def test_hand_traces(self):
        assert records([1, 0, 0]).positions.tolist() == [2]
        assert records([0, 1, 0, 0]).positions.tolist() == [0, 3]

    def test_levels_consecutive(self, rng):
        for _ in range(50):
            cfg = random_config(rng)
            idx = records(cfg)
            assert sorted(idx.levels) == list(range(1, len(idx.positions) + 1))

    def test_zero_suffix_grows_one_per_site(self):
        base = parse_config("110100")
        for pad in range(1, 6):
            cfg = np.concatenate([base, np.zeros(pad, dtype=np.int8)])
            assert len(records(cfg).positions) == pad


class TestApplyT:
    def test_paper_example(self):
        eta = parse_config("0010110000110100000")
        assert format_config(apply_T_carrier(eta)) == "0001001100001011000"
        assert format_config(apply_T(eta)) == "0001001100001011000"

    def test_fixed_point(self):
        zeros = np.zeros(7, dtype=np.int8)
        assert np.array_equal(apply_T(zeros), zeros)

    def test_single_soliton_advances(self):
        assert format_config(apply_T(parse_config("10"))) == "01"

    def test_reflection_formula(self):
        walk = lift(parse_config("110100"))
        out = apply_T_reflect(walk)
        run_min = np.minimum.accumulate(np.minimum(walk.values, walk.base))
        assert np.array_equal(out.values, 2 * run_min - walk.values)

    def test_growth_bounded_by_height(self, rng):
        for _ in range(50):
            cfg = (rng.random(40) < 0.45).astype(np.int8)
            out = apply_T(cfg)
            assert len(out) == len(cfg) + lift(cfg).final_height

    @given(bit_lists)
    @settings(max_examples=300, deadline=None)
    def test_carrier_reflect_equivalent(self, bits):
        assert np.array_equal(apply_T_carrier(bits), apply_T(np.asarray(bits, dtype=np.int8)))

    @given(bit_lists)
    def test_ball_conservation(self, bits):
        assert ball_count(apply_T_carrier(bits)) == sum(bits)

    def test_formulation_equivalence_random(self, rng):
        for _ in range(1000):
            cfg = random_config(rng, max_len=200, max_density=0.45)
            assert np.array_equal(apply_T_carrier(cfg), apply_T(cfg))


class TestExcursions:
    def test_two_empty(self):
        exc = excursions([0, 0])
        assert len(exc) == 2 and all(e.is_empty for e in exc)

    def test_single_excursion_then_records(self):
        exc = excursions([1, 0, 0])
        assert len(exc) == 1
        assert exc[0].height == 1 and list(exc[0].support) == [0, 1]

    def test_nested_pair_single_excursion(self):
        (exc,) = excursions(parse_config("110100"))
        assert exc.height == 2
        assert exc.right_record == 6  # terminal record at the window edge

    def test_open_tail_rejected(self):
        with pytest.raises(NotRecordClosedError):
            excursions(parse_config("0011"))
        excursions(close_config(parse_config("0011")))  # closing fixes it

    def test_lengths_tile_the_window(self, rng):
        for _ in range(100):
            cfg = random_config(rng)
            exc = excursions(cfg)
            last = max(e.right_record for e in exc)
            assert sum(e.length for e in exc) == last + 1
