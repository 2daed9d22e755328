import numpy as np
import pytest

from boxball import (
    OverlaySegment,
    RenderError,
    build_raster,
    parse_config,
    render,
)


class TestBuild:
    def test_rows_are_iterates(self):
        cfg = parse_config("0010110000110100000")
        raster = build_raster(cfg, 1)
        assert raster.height == 2 and raster.width == len(cfg)
        assert "".join(map(str, raster.cells[0])) == "0010110000110100000"
        assert "".join(map(str, raster.cells[1])) == "0001001100001011000"

    def test_growth_clipped(self):
        raster = build_raster(parse_config("1100"), 3)
        assert raster.width == 4
        assert raster.cells.shape == (4, 4)


class TestRender:
    def test_single_ball_pbm(self):
        raster = build_raster(parse_config("1"), 0)
        assert render(raster, "pbm") == b"P1\n1 1\n1\n"

    def test_empty_grid_payload(self):
        raster = build_raster(np.zeros(3, dtype=np.int8), 1)
        data = render(raster, "pbm").decode()
        assert data == "P1\n3 2\n0 0 0\n0 0 0\n"

    def test_pgm_levels(self):
        raster = build_raster(parse_config("10"), 0, overlays=[OverlaySegment(1, 0.0)])
        data = render(raster, "pgm").decode()
        assert data == "P2\n2 1\n255\n0 128\n"

    def test_overlay_does_not_cover_balls(self):
        raster = build_raster(parse_config("10"), 0, overlays=[OverlaySegment(0, 0.0)])
        assert render(raster, "pgm").decode().splitlines()[-1] == "0 255"

    def test_overlay_slope_steps(self):
        raster = build_raster(np.zeros(8, dtype=np.int8), 3, overlays=[OverlaySegment(0, 2.0)])
        rows = render(raster, "pgm").decode().splitlines()[3:]
        marks = [row.split().index("128") for row in rows]
        assert marks == [0, 2, 4, 6]

    def test_stretch_repeats_rows(self):
        raster = build_raster(parse_config("1"), 1)
        data = render(raster, "pbm", stretch=3).decode()
        assert data.splitlines()[1] == "1 6"
        assert data.splitlines()[2:] == ["1", "1", "1", "0", "0", "0"]

    def test_unknown_format(self):
        raster = build_raster(parse_config("1"), 0)
        with pytest.raises(RenderError):
            render(raster, "png")

    def test_deterministic_bytes(self):
        cfg = parse_config("101100100")
        a = render(build_raster(cfg, 5), "pgm")
        b = render(build_raster(cfg, 5), "pgm")
        assert a == b
