"""Path planning and light-field rasterization on the 640x480 grid."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lumilab.errors import CHANNEL_EMPTY, EMPTY_PATH, OUT_OF_BOUNDS, TOO_LONG, LabError
from lumilab.lightplane import (
    GRID_H,
    GRID_W,
    MAX_WAYPOINTS,
    ColorChannel,
    LightField,
    Path,
    Waypoint,
    bresenham_line,
    clear_channel,
    in_grid,
    plan_path,
    query_cell,
    query_channel_path,
    rasterize_path,
    segment_cells,
)

xs = st.integers(0, GRID_W - 1)
ys = st.integers(0, GRID_H - 1)
grid_points = st.tuples(xs, ys)
channels = st.sampled_from(list(ColorChannel))


def cells_of(points):
    """Independent raster oracle: union of per-segment generator cells."""
    lit = set()
    prev = Waypoint(*points[0])
    lit.add(prev)
    for raw in points[1:]:
        nxt = Waypoint(*raw)
        lit.update(bresenham_line(prev, nxt))
        prev = nxt
    return lit


# -- plan_path ----------------------------------------------------------


def test_plan_path_keeps_order_and_channel():
    path = plan_path(ColorChannel.RED, [(0, 0), (10, 4), (3, 3)])
    assert path.channel is ColorChannel.RED
    assert path.waypoints == (Waypoint(0, 0), Waypoint(10, 4), Waypoint(3, 3))
    assert len(path) == 3


def test_plan_path_collapses_consecutive_duplicates():
    # mouse-move events repeat coordinates while the pointer rests
    path = plan_path(ColorChannel.BLUE, [(5, 5), (5, 5), (6, 5), (6, 5), (5, 5)])
    assert path.waypoints == (Waypoint(5, 5), Waypoint(6, 5), Waypoint(5, 5))


def test_plan_path_rejects_empty():
    with pytest.raises(LabError) as err:
        plan_path(ColorChannel.RED, [])
    assert err.value.code == EMPTY_PATH


@pytest.mark.parametrize("bad", [(GRID_W, 0), (0, GRID_H), (-1, 5), (5, -1), (10_000, 10_000)])
def test_plan_path_rejects_out_of_bounds(bad):
    with pytest.raises(LabError) as err:
        plan_path(ColorChannel.RED, [(1, 1), bad])
    assert err.value.code == OUT_OF_BOUNDS


def test_plan_path_accepts_grid_corners():
    path = plan_path(ColorChannel.RED, [(0, 0), (GRID_W - 1, GRID_H - 1)])
    assert all(in_grid(w) for w in path.waypoints)


def test_plan_path_capacity_boundary():
    just_fits = [(i, 0) for i in range(MAX_WAYPOINTS)]
    assert len(plan_path(ColorChannel.RED, just_fits)) == MAX_WAYPOINTS

    with pytest.raises(LabError) as err:
        plan_path(ColorChannel.RED, just_fits + [(0, 1)])
    assert err.value.code == TOO_LONG


def test_plan_path_capacity_counts_collapsed_points():
    # 400 raw samples collapsing to 200 are fine
    doubled = [p for i in range(MAX_WAYPOINTS) for p in ((i, 0), (i, 0))]
    assert len(plan_path(ColorChannel.RED, doubled)) == MAX_WAYPOINTS


# -- bresenham_line -----------------------------------------------------


def test_line_diagonal_3x3():
    cells = list(bresenham_line(Waypoint(0, 0), Waypoint(2, 2)))
    assert cells == [Waypoint(0, 0), Waypoint(1, 1), Waypoint(2, 2)]


def test_line_horizontal():
    cells = list(bresenham_line(Waypoint(0, 0), Waypoint(3, 0)))
    assert cells == [Waypoint(0, 0), Waypoint(1, 0), Waypoint(2, 0), Waypoint(3, 0)]


def test_line_shallow_slope():
    cells = list(bresenham_line(Waypoint(0, 0), Waypoint(5, 2)))
    assert cells == [
        Waypoint(0, 0),
        Waypoint(1, 0),
        Waypoint(2, 1),
        Waypoint(3, 1),
        Waypoint(4, 2),
        Waypoint(5, 2),
    ]


def test_line_negative_slope_octant():
    cells = list(bresenham_line(Waypoint(2, 7), Waypoint(9, 3)))
    assert cells == [
        Waypoint(2, 7),
        Waypoint(3, 6),
        Waypoint(4, 6),
        Waypoint(5, 5),
        Waypoint(6, 5),
        Waypoint(7, 4),
        Waypoint(8, 4),
        Waypoint(9, 3),
    ]


def test_line_single_point():
    assert list(bresenham_line(Waypoint(7, 7), Waypoint(7, 7))) == [Waypoint(7, 7)]


@given(grid_points, grid_points)
def test_line_shape_properties(a, b):
    a, b = Waypoint(*a), Waypoint(*b)
    cells = list(bresenham_line(a, b))
    assert cells[0] == a
    assert cells[-1] == b
    assert len(cells) == max(abs(a.x - b.x), abs(a.y - b.y)) + 1
    for prev, nxt in zip(cells, cells[1:]):
        # 8-connected: each step moves exactly one cell in Chebyshev distance
        assert max(abs(prev.x - nxt.x), abs(prev.y - nxt.y)) == 1
    lo_x, hi_x = sorted((a.x, b.x))
    lo_y, hi_y = sorted((a.y, b.y))
    assert all(lo_x <= c.x <= hi_x and lo_y <= c.y <= hi_y for c in cells)


@given(grid_points, grid_points)
def test_vectorized_segment_matches_generator(a, b):
    a, b = Waypoint(*a), Waypoint(*b)
    sx, sy = segment_cells(a, b)
    assert list(zip(sx.tolist(), sy.tolist())) == [tuple(c) for c in bresenham_line(a, b)]


# -- rasterize / query / clear ------------------------------------------


def test_rasterize_l_shaped_path():
    field = LightField()
    path = plan_path(ColorChannel.RED, [(0, 0), (3, 0), (3, 3)])
    rasterize_path(path, field)
    expected = {(0, 0), (1, 0), (2, 0), (3, 0), (3, 1), (3, 2), (3, 3)}
    assert {tuple(c) for c in field.lit_cells(ColorChannel.RED)} == expected
    assert field.lit_count(ColorChannel.RED) == 7
    assert field.lit_count(ColorChannel.BLUE) == 0


def test_rasterize_replaces_previous_raster():
    field = LightField()
    rasterize_path(plan_path(ColorChannel.RED, [(0, 0), (50, 0)]), field)
    second = plan_path(ColorChannel.RED, [(100, 100), (100, 110)])
    rasterize_path(second, field)

    fresh = LightField()
    rasterize_path(second, fresh)
    assert field.lit_cells(ColorChannel.RED) == fresh.lit_cells(ColorChannel.RED)
    assert query_channel_path(field, ColorChannel.RED) is second


def test_rasterize_rejects_handbuilt_duplicates():
    sneaky = Path(ColorChannel.RED, (Waypoint(1, 1), Waypoint(1, 1)))
    with pytest.raises(LabError) as err:
        rasterize_path(sneaky, LightField())
    assert err.value.code == TOO_LONG


def test_rasterize_rejects_handbuilt_out_of_grid():
    sneaky = Path(ColorChannel.RED, (Waypoint(0, 0), Waypoint(GRID_W, 0)))
    with pytest.raises(LabError) as err:
        rasterize_path(sneaky, LightField())
    assert err.value.code == OUT_OF_BOUNDS


def test_query_cell_is_channel_scoped():
    field = LightField()
    rasterize_path(plan_path(ColorChannel.RED, [(5, 5), (9, 5)]), field)
    assert query_cell(field, Waypoint(7, 5), ColorChannel.RED)
    assert not query_cell(field, Waypoint(7, 5), ColorChannel.BLUE)
    assert not query_cell(field, Waypoint(7, 6), ColorChannel.RED)


def test_query_cell_off_grid():
    with pytest.raises(LabError) as err:
        query_cell(LightField(), Waypoint(GRID_W, 0), ColorChannel.RED)
    assert err.value.code == OUT_OF_BOUNDS


def test_query_channel_path_empty_field():
    with pytest.raises(LabError) as err:
        query_channel_path(LightField(), ColorChannel.RED)
    assert err.value.code == CHANNEL_EMPTY


def test_clear_channel_only_touches_its_channel():
    field = LightField()
    rasterize_path(plan_path(ColorChannel.RED, [(0, 0), (10, 0)]), field)
    rasterize_path(plan_path(ColorChannel.BLUE, [(0, 5), (10, 5)]), field)
    clear_channel(ColorChannel.RED, field)

    assert field.lit_count(ColorChannel.RED) == 0
    assert not field.has_path(ColorChannel.RED)
    with pytest.raises(LabError):
        query_channel_path(field, ColorChannel.RED)
    assert field.lit_count(ColorChannel.BLUE) == 11
    assert query_channel_path(field, ColorChannel.BLUE).waypoints == (
        Waypoint(0, 5),
        Waypoint(10, 5),
    )


def test_clear_channel_idempotent():
    field = LightField()
    clear_channel(ColorChannel.BLUE, field)
    clear_channel(ColorChannel.BLUE, field)
    assert field.lit_count(ColorChannel.BLUE) == 0


@given(st.lists(grid_points, min_size=1, max_size=12), channels)
def test_raster_equals_segment_union(points, channel):
    field = LightField()
    path = plan_path(channel, points)
    rasterize_path(path, field)
    assert field.lit_cells(channel) == cells_of(path.waypoints)


@given(st.lists(grid_points, min_size=1, max_size=10))
@settings(max_examples=40)
def test_red_operations_never_touch_blue(points):
    field = LightField()
    blue = plan_path(ColorChannel.BLUE, [(0, 0), (639, 479)])
    rasterize_path(blue, field)
    before = field.lit_cells(ColorChannel.BLUE)

    rasterize_path(plan_path(ColorChannel.RED, points), field)
    clear_channel(ColorChannel.RED, field)
    rasterize_path(plan_path(ColorChannel.RED, points), field)

    assert field.lit_cells(ColorChannel.BLUE) == before
    assert query_channel_path(field, ColorChannel.BLUE) is blue


@given(st.lists(grid_points, min_size=1, max_size=10), channels)
@settings(max_examples=40)
def test_rasterize_idempotent(points, channel):
    field = LightField()
    path = plan_path(channel, points)
    rasterize_path(path, field)
    once = field.lit_cells(channel)
    rasterize_path(path, field)
    assert field.lit_cells(channel) == once
