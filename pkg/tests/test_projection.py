"""Tests for two-layer projection and plane choice."""

from __future__ import annotations

from collections import defaultdict

import numpy as np
import pytest

from xpcc.cloud.model import PointCloud
from xpcc.projection import (
    MapSet,
    PlaneChoice,
    best_choice,
    choose_plane,
    evaluate_planes,
    pixel_axes,
    project_section,
    unchanged_ratio,
)
from xpcc.segmentation import SignedAxis, candidate_planes
from xpcc.synthetic import random_cloud, whole_section
from xpcc.utils.errors import EmptySectionError


def _cloud(points: list[list[int]], colors: list[list[int]] | None = None) -> PointCloud:
    return PointCloud(np.array(points), np.array(colors) if colors else np.zeros((len(points), 3)))


def test_single_point_projection() -> None:
    cloud = _cloud([[5, 6, 7]], [[10, 20, 30]])
    m = project_section(cloud, whole_section(cloud), SignedAxis.POS_Z)
    assert (m.width, m.height) == (1, 1)
    assert m.origin == (5, 6, 7)
    assert m.occupancy.tolist() == [[1]]
    assert m.d0.tolist() == [[0]] and m.d1.tolist() == [[0]]
    assert m.a0[0, 0].tolist() == [10, 20, 30] and m.a1[0, 0].tolist() == [10, 20, 30]
    assert len(m.lost_ids) == 0
    assert m.layer_count == 1


def test_two_points_fill_both_layers() -> None:
    cloud = _cloud([[1, 1, 3], [1, 1, 9]], [[1, 1, 1], [2, 2, 2]])
    m = project_section(cloud, whole_section(cloud), SignedAxis.POS_Z)
    assert m.d0.tolist() == [[0]] and m.d1.tolist() == [[6]]
    assert m.a0[0, 0].tolist() == [1, 1, 1] and m.a1[0, 0].tolist() == [2, 2, 2]
    assert len(m.lost_ids) == 0
    assert m.captured_count == 2


def test_negative_plane_measures_depth_from_far_side() -> None:
    cloud = _cloud([[1, 1, 3], [1, 1, 9]], [[1, 1, 1], [2, 2, 2]])
    m = project_section(cloud, whole_section(cloud), SignedAxis.NEG_Z)
    assert m.origin == (1, 1, 9)
    assert m.d0.tolist() == [[0]] and m.d1.tolist() == [[6]]
    assert m.a0[0, 0].tolist() == [2, 2, 2]


def test_middle_points_are_lost() -> None:
    cloud = _cloud([[0, 0, 0], [0, 0, 4], [0, 0, 9], [0, 0, 20], [1, 0, 2]])
    m = project_section(cloud, whole_section(cloud), SignedAxis.POS_Z)
    assert m.lost_ids.tolist() == [1, 2]
    assert m.d0[0, 0] == 0 and m.d1[0, 0] == 20
    assert m.captured_count + len(m.lost_ids) == len(cloud)


@pytest.mark.parametrize("plane", list(SignedAxis))
def test_projection_matches_column_replay(rng: np.random.Generator, plane: SignedAxis) -> None:
    cloud = random_cloud(rng, 300, extent=10)
    m = project_section(cloud, whole_section(cloud), plane)
    col_axis, row_axis = pixel_axes(plane)
    columns: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for i, p in enumerate(cloud.points.tolist()):
        columns[(p[col_axis], p[row_axis])].append((plane.sign * p[plane.axis], i))
    expected_lost = sorted(i for members in columns.values() for _, i in sorted(members)[1:-1])
    assert m.lost_ids.tolist() == expected_lost
    assert m.occupied_pixels == len(columns)
    assert m.captured_count + len(m.lost_ids) == len(cloud)
    assert np.all(m.d1[m.occupancy == 1] >= m.d0[m.occupancy == 1])


def test_projection_is_tight(shell: PointCloud) -> None:
    m = project_section(shell, whole_section(shell), SignedAxis.POS_Z)
    assert (m.width, m.height) == (61, 84)
    assert m.occupancy[0].any() and m.occupancy[-1].any()
    assert m.occupancy[:, 0].any() and m.occupancy[:, -1].any()
    assert len(m.lost_ids) == 0
    assert m.layer_count == 2


def test_filling_an_empty_column_never_adds_loss(rng: np.random.Generator) -> None:
    cloud = random_cloud(rng, 200, extent=12)
    before = project_section(cloud, whole_section(cloud), SignedAxis.POS_Z)
    free = np.argwhere(before.occupancy == 0)
    assert len(free)
    row, col = (int(v) for v in free[0])
    u0, w0, _ = before.origin
    extra = PointCloud(
        np.concatenate([cloud.points, [[u0 + col, w0 + row, 5]]]),
        np.concatenate([cloud.colors, [[0, 0, 0]]]),
    )
    after = project_section(extra, whole_section(extra), SignedAxis.POS_Z)
    assert len(after.lost_ids) <= len(before.lost_ids)


def test_empty_section_is_rejected(shell: PointCloud) -> None:
    section = whole_section(shell)
    empty = type(section)(section.axis, section.slab, section.ellipse, np.zeros(0, np.int64))
    with pytest.raises(EmptySectionError):
        project_section(shell, empty, SignedAxis.POS_Z)


def _mapset_with_loss(lost: int) -> MapSet:
    blank = np.zeros((1, 1), np.uint8)
    return MapSet(
        section_id=0,
        plane=SignedAxis.POS_Z,
        origin=(0, 0, 0),
        occupancy=blank,
        d0=blank.astype(np.uint16),
        d1=blank.astype(np.uint16),
        a0=np.zeros((1, 1, 3), np.uint8),
        a1=np.zeros((1, 1, 3), np.uint8),
        lost_ids=np.arange(lost, dtype=np.int64),
    )


def test_unchanged_ratio() -> None:
    assert unchanged_ratio(_mapset_with_loss(0), 10) == 1.0
    assert unchanged_ratio(_mapset_with_loss(2), 10) == pytest.approx(0.8)
    with pytest.raises(ValueError):
        unchanged_ratio(_mapset_with_loss(0), 0)


def test_choose_plane_prefers_main_view_on_cylinder(shell: PointCloud) -> None:
    choice = choose_plane(shell, whole_section(shell))
    assert choice.plane == SignedAxis.POS_Z
    assert choice.unchanged_ratio == 1.0
    assert choice.lost_count == 0


def test_choose_plane_ties_follow_candidate_order(plate: PointCloud) -> None:
    section = whole_section(plate)
    assert choose_plane(plate, section, [SignedAxis.NEG_Z, SignedAxis.POS_Z]).plane == SignedAxis.NEG_Z
    assert choose_plane(plate, section, [SignedAxis.POS_X, SignedAxis.POS_Z]).plane == SignedAxis.POS_Z


def test_evaluate_planes_default_order(plate: PointCloud) -> None:
    choices = evaluate_planes(plate, whole_section(plate))
    assert [c.plane for c in choices] == candidate_planes(SignedAxis.POS_Z)
    by_plane = {c.plane: c for c in choices}
    assert by_plane[SignedAxis.POS_Z].lost_count == 0
    assert by_plane[SignedAxis.POS_X].lost_count == len(plate) - 2 * 24


def test_best_choice_tie_breaks() -> None:
    first = PlaneChoice(SignedAxis.POS_X, 0.5, 3)
    fewer_lost = PlaneChoice(SignedAxis.NEG_X, 0.5, 2)
    better = PlaneChoice(SignedAxis.POS_Y, 0.75, 9)
    assert best_choice([first, fewer_lost]) is fewer_lost
    assert best_choice([first, PlaneChoice(SignedAxis.NEG_Y, 0.5, 3)]) is first
    assert best_choice([first, fewer_lost, better]) is better
