"""Light plane: plans drawn paths and projects them as per-channel light fields.

A remote user draws a route with the mouse; the light plane validates the
waypoints, collapses consecutive duplicates, and rasterizes the polyline onto
a 640x480 occupancy grid, one grid per color channel. A robot bound to a
channel senses only that channel's cells, so the two routes never interfere.

Coordinates follow the screen convention: origin top-left, x grows rightward,
y grows downward. All mutation of a :class:`LightField` is expected to be
serialized by its owner; the plane itself holds no threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import CHANNEL_EMPTY, EMPTY_PATH, OUT_OF_BOUNDS, TOO_LONG, LabError

GRID_W = 640
GRID_H = 480

# One live route per robot color; capacity matches the classic 200-slot
# waypoint table of the original simulator.
MAX_WAYPOINTS = 200


class ColorChannel(Enum):
    """The two light frequencies a robot's sensor can lock onto."""

    RED = "RED"
    BLUE = "BLUE"


class Waypoint(NamedTuple):
    x: int
    y: int


def in_grid(w: Waypoint) -> bool:
    return 0 <= w.x < GRID_W and 0 <= w.y < GRID_H


@dataclass(frozen=True)
class Path:
    """An ordered waypoint list tagged with the channel that will carry it."""

    channel: ColorChannel
    waypoints: tuple[Waypoint, ...]

    def __len__(self) -> int:
        return len(self.waypoints)


def plan_path(channel: ColorChannel, points: Iterable[tuple[int, int]]) -> Path:
    """Validate raw drawn points into a Path.

    Consecutive duplicate points are collapsed (mouse-move events repeat
    coordinates freely); order is otherwise preserved. Raises EMPTY_PATH for
    no input, OUT_OF_BOUNDS for any off-grid point, and TOO_LONG when more
    than 200 waypoints survive the collapse.
    """
    pts = [Waypoint(int(x), int(y)) for x, y in points]
    if not pts:
        raise LabError(EMPTY_PATH, "a path needs at least one waypoint")
    for p in pts:
        if not in_grid(p):
            raise LabError(OUT_OF_BOUNDS, f"waypoint {tuple(p)} is outside the {GRID_W}x{GRID_H} grid")
    deduped = [pts[0]]
    for p in pts[1:]:
        if p != deduped[-1]:
            deduped.append(p)
    if len(deduped) > MAX_WAYPOINTS:
        raise LabError(TOO_LONG, f"{len(deduped)} waypoints exceed the {MAX_WAYPOINTS}-point capacity")
    return Path(channel, tuple(deduped))


def bresenham_line(a: Waypoint, b: Waypoint) -> Iterator[Waypoint]:
    """Integer line from a to b inclusive, one cell per step, all octants."""
    x0, y0 = a
    x1, y1 = b
    dx = abs(x1 - x0)
    dy = -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        yield Waypoint(x0, y0)
        if x0 == x1 and y0 == y1:
            return
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def segment_cells(a: Waypoint, b: Waypoint) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized twin of :func:`bresenham_line`: (xs, ys) column arrays.

    The error-accumulator loop above admits a closed form along the driving
    axis: after i major steps the minor axis has advanced
    floor((2*minor*i + major) / (2*major)) cells. Same cells, numpy speed.
    """
    dx, dy = abs(b.x - a.x), abs(b.y - a.y)
    sx = 1 if b.x >= a.x else -1
    sy = 1 if b.y >= a.y else -1
    if dx >= dy:
        i = np.arange(dx + 1)
        xs = a.x + sx * i
        ys = a.y + sy * ((2 * dy * i + dx) // (2 * dx)) if dx else np.array([a.y])
    else:
        i = np.arange(dy + 1)
        ys = a.y + sy * i
        xs = a.x + sx * ((2 * dx * i + dy) // (2 * dy))
    return xs, ys


class LightField:
    """Per-channel occupancy grid fed by one source path per channel.

    Applying a new path on a channel replaces the previous one; the other
    channel's cells are never touched.
    """

    def __init__(self) -> None:
        self._lit: dict[ColorChannel, np.ndarray] = {
            c: np.zeros((GRID_H, GRID_W), dtype=bool) for c in ColorChannel
        }
        self._source_paths: dict[ColorChannel, Path] = {}

    def lit_cells(self, channel: ColorChannel) -> set[Waypoint]:
        ys, xs = np.nonzero(self._lit[channel])
        return {Waypoint(int(x), int(y)) for x, y in zip(xs, ys)}

    def lit_count(self, channel: ColorChannel) -> int:
        return int(self._lit[channel].sum())

    def has_path(self, channel: ColorChannel) -> bool:
        return channel in self._source_paths


def rasterize_path(path: Path, field: LightField) -> LightField:
    """Project a path onto the field's grid in the path's channel.

    Consecutive waypoints are joined by integer line segments; every cell on
    a segment is lit. The channel's previous raster and source path are
    replaced. The input is re-validated so a hand-built Path cannot smuggle
    illegal waypoints in. Mutates and returns ``field``.
    """
    checked = plan_path(path.channel, path.waypoints)
    if checked.waypoints != path.waypoints:
        raise LabError(TOO_LONG, "path contains consecutive duplicate waypoints")
    mask = np.zeros((GRID_H, GRID_W), dtype=bool)
    prev = path.waypoints[0]
    mask[prev.y, prev.x] = True
    for nxt in path.waypoints[1:]:
        xs, ys = segment_cells(prev, nxt)
        mask[ys, xs] = True
        prev = nxt
    field._lit[path.channel] = mask
    field._source_paths[path.channel] = path
    return field


def clear_channel(channel: ColorChannel, field: LightField) -> LightField:
    """Unlight every cell of one channel and forget its source path."""
    field._lit[channel][:] = False
    field._source_paths.pop(channel, None)
    return field


def query_cell(field: LightField, w: Waypoint, channel: ColorChannel) -> bool:
    """True iff the cell is lit in the given channel. Pure query."""
    w = Waypoint(int(w[0]), int(w[1]))
    if not in_grid(w):
        raise LabError(OUT_OF_BOUNDS, f"cell {tuple(w)} is outside the grid")
    return bool(field._lit[channel][w.y, w.x])


def query_channel_path(field: LightField, channel: ColorChannel) -> Path:
    """The source path currently projected on a channel.

    This is the ordered waypoint list a robot on that channel will follow.
    Raises CHANNEL_EMPTY when no path has been applied.
    """
    try:
        return field._source_paths[channel]
    except KeyError:
        raise LabError(CHANNEL_EMPTY, f"no path projected on channel {channel.value}") from None
