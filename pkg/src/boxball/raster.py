"""Space-time rasters of the dynamics and their PBM/PGM rendering.

Row t of a raster is the configuration after t updates, clipped to the
initial viewing window.  Rendering is byte-deterministic; the PGM variant
can draw predicted-slope overlay segments (background 255, ball 0, overlay
128), stepped one row at a time like a vertical-major midpoint line.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import BoxBallError, apply_T


class RenderError(BoxBallError):
    pass


@dataclass(frozen=True)
class OverlaySegment:
    """Line of slope ``speed`` (sites per step) anchored at ``x0`` in row 0."""

    x0: float
    speed: float


@dataclass
class SpaceTimeRaster:
    width: int
    height: int
    cells: np.ndarray  # uint8, shape (height, width), 1 = ball
    overlays: list[OverlaySegment] = field(default_factory=list)


def build_raster(bits, steps: int, overlays=None) -> SpaceTimeRaster:
    """Evolve ``steps`` times, collecting each row clipped to the start window."""
    bits = np.asarray(bits, dtype=np.int8)
    width = len(bits)
    rows = np.zeros((steps + 1, width), dtype=np.uint8)
    current = bits
    rows[0] = bits[:width]
    for t in range(1, steps + 1):
        current = apply_T(current)
        row = current[:width]
        rows[t, : len(row)] = row
    return SpaceTimeRaster(
        width=width,
        height=steps + 1,
        cells=rows,
        overlays=list(overlays) if overlays else [],
    )


def render(raster: SpaceTimeRaster, fmt: str = "pbm", stretch: int = 1) -> bytes:
    """Serialize to PBM (P1, balls black) or PGM (P2, with gray overlays).

    ``stretch`` repeats each row the given number of times.
    """
    if stretch < 1:
        raise RenderError("stretch must be a positive integer")
    if fmt == "pbm":
        lines = [f"P1\n{raster.width} {raster.height * stretch}"]
        for row in raster.cells:
            text = " ".join("1" if c else "0" for c in row)
            lines.extend([text] * stretch)
        return ("\n".join(lines) + "\n").encode()
    if fmt == "pgm":
        grid = np.where(raster.cells != 0, 0, 255).astype(np.int16)
        for seg in raster.overlays:
            for t in range(raster.height):
                x = int(round(seg.x0 + seg.speed * t))
                if 0 <= x < raster.width and grid[t, x] == 255:
                    grid[t, x] = 128
        lines = [f"P2\n{raster.width} {raster.height * stretch}\n255"]
        for row in grid:
            text = " ".join(str(int(c)) for c in row)
            lines.extend([text] * stretch)
        return ("\n".join(lines) + "\n").encode()
    raise RenderError(f"unknown format {fmt!r}; use pbm or pgm")
