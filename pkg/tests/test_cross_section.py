"""Tests for axis choice, ellipse fitting, layer profiles, segmentation and subdivision."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from itertools import combinations

import numpy as np
import pytest

from xpcc import synthetic
from xpcc.cloud.model import PointCloud
from xpcc.projection.projector import choose_plane
from xpcc.segmentation import (
    Axis,
    AxisName,
    CrossSection,
    EllipseParams,
    SegmentationConfig,
    SignedAxis,
    apply_layout,
    candidate_planes,
    ellipse_membership,
    fit_ellipse,
    layer_profile,
    renumber,
    ring_distance,
    section_center,
    segment,
    select_axis,
)
from xpcc.segmentation.subdivide import split_axis_for, subdivide
from xpcc.synthetic import random_cloud, whole_section
from xpcc.utils.errors import (
    EmptyCloudError,
    EmptySlabError,
    InvalidPartCountError,
    InvalidSectionCountError,
    TooManyPartsError,
    XpccError,
)


def _cloud(points: list[list[int]]) -> PointCloud:
    return PointCloud(np.array(points), np.zeros((len(points), 3)))


def _membership(sections: list[CrossSection], n: int) -> np.ndarray:
    counts = np.zeros(n, dtype=np.int64)
    for s in sections:
        counts[s.point_ids] += 1
    return counts


# --- axis choice ---


def test_select_axis_prefers_longest_remaining(shell: PointCloud) -> None:
    assert select_axis(shell, SignedAxis.POS_Z).cut == AxisName.Y


def test_select_axis_never_cuts_along_main_view(shell: PointCloud) -> None:
    assert select_axis(shell, SignedAxis.POS_Y).cut == AxisName.X
    assert select_axis(shell, SignedAxis.NEG_X).cut == AxisName.Y


def test_select_axis_cube_tie_goes_to_x() -> None:
    corners = [[x, y, z] for x in (0, 10) for y in (0, 10) for z in (0, 10)]
    axis = select_axis(_cloud(corners), SignedAxis.POS_Z)
    assert axis.cut == AxisName.X
    assert axis.main_view == SignedAxis.POS_Z


def test_select_axis_empty() -> None:
    with pytest.raises(EmptyCloudError):
        select_axis(PointCloud.empty(), SignedAxis.POS_Z)


# --- ellipse geometry ---


def test_section_center_is_extent_midpoint() -> None:
    cloud = _cloud([[0, 5, 2], [10, 5, 6], [4, 5, 3], [50, 9, 50]])
    assert section_center(cloud, AxisName.Y, (5, 5)) == (5.0, 4.0)


def test_section_center_single_point() -> None:
    assert section_center(_cloud([[3, 1, 7]]), AxisName.Y, (1, 1)) == (3.0, 7.0)


def test_section_center_empty_slab() -> None:
    with pytest.raises(EmptySlabError):
        section_center(_cloud([[3, 1, 7]]), AxisName.Y, (2, 4))


def test_section_center_random_matches_scan(rng: np.random.Generator) -> None:
    cloud = random_cloud(rng, 400, extent=32)
    for lo in range(0, 32, 5):
        mask = (cloud.points[:, 2] >= lo) & (cloud.points[:, 2] <= lo + 4)
        uw = cloud.points[mask][:, [0, 1]]
        expected = ((uw[:, 0].min() + uw[:, 0].max()) / 2, (uw[:, 1].min() + uw[:, 1].max()) / 2)
        assert section_center(cloud, AxisName.Z, (lo, lo + 4)) == expected


def test_ring_distance() -> None:
    assert ring_distance((5, 7), (2, 3)) == 5.0
    assert ring_distance((2.5, 3), (2.5, 3)) == 0.0
    assert ring_distance((1, 1), (0, 0)) == pytest.approx(math.sqrt(2))


def test_fit_ellipse_circle_and_ellipse() -> None:
    circle = synthetic.elliptic_shell(a=10, b=10, height=3)
    fitted = fit_ellipse(circle, AxisName.Y, (100, 102))
    assert (fitted.a, fitted.b) == (10.0, 10.0)
    assert fitted.center == (100.0, 100.0)

    wide = synthetic.elliptic_shell(a=20, b=5, height=1)
    fitted = fit_ellipse(wide, Axis(AxisName.Y), (100, 100))
    assert (fitted.a, fitted.b) == (20.0, 5.0)


def test_fit_ellipse_swaps_to_keep_a_major() -> None:
    cloud = _cloud([[0, 0, 0], [4, 0, 20]])
    fitted = fit_ellipse(cloud, AxisName.Y, (0, 0))
    assert (fitted.a, fitted.b) == (10.0, 2.0)


def test_ellipse_params_reject_minor_above_major() -> None:
    with pytest.raises(ValueError):
        EllipseParams((0, 0), a=1, b=2)


def test_ellipse_membership() -> None:
    ellipse = EllipseParams((0, 0), a=6, b=4)
    assert ellipse_membership(5, ellipse, 0)
    assert ellipse_membership(3.5, ellipse, 0.5)
    assert not ellipse_membership(3.4, ellipse, 0.5)
    assert ellipse_membership(6.5, ellipse, 0.5)
    assert not ellipse_membership(6.6, ellipse, 0.5)


def test_ellipse_membership_random(rng: np.random.Generator) -> None:
    for _ in range(200):
        b, extra, tol, d = rng.uniform(0, 20), rng.uniform(0, 10), rng.uniform(0, 3), rng.uniform(0, 40)
        ellipse = EllipseParams((0, 0), a=b + extra, b=b)
        assert ellipse_membership(d, ellipse, tol) == (b - tol <= d <= b + extra + tol)


# --- layer profiles ---


def _brute_layers(cloud: PointCloud, cut: AxisName, proj: SignedAxis, thickness: int) -> dict[int, int]:
    other = next(a for a in AxisName if a not in (cut, proj.axis))
    columns: dict[tuple[int, int], list[int]] = defaultdict(list)
    for p in cloud.points.tolist():
        columns[(p[cut], p[other])].append(p[proj.axis])
    best: dict[int, int] = defaultdict(int)
    for (slab, _), depths in columns.items():
        depths.sort()
        clusters = 1 + sum(1 for a, b in zip(depths, depths[1:]) if b - a > thickness)
        best[slab] = max(best[slab], clusters)
    return best


def test_layer_profile_cylinder_has_two_layers(shell: PointCloud) -> None:
    profile = layer_profile(shell, AxisName.Y, SignedAxis.POS_Z)
    assert profile.lo == 100
    assert len(profile) == 84
    assert set(profile.max_layers.tolist()) == {2}


def test_layer_profile_plate_has_one_layer(plate: PointCloud) -> None:
    profile = layer_profile(plate, AxisName.Y, SignedAxis.POS_Z)
    assert set(profile.max_layers.tolist()) == {1}


def test_layer_profile_nested_shells_have_four_layers() -> None:
    profile = layer_profile(synthetic.nested_shells(), AxisName.Y, SignedAxis.POS_Z)
    assert int(profile.max_layers.max()) == 4


def test_layer_profile_random_matches_brute_force(rng: np.random.Generator) -> None:
    cloud = random_cloud(rng, 500, extent=24)
    for cut, proj, thickness in ((AxisName.X, SignedAxis.POS_Z, 2), (AxisName.Z, SignedAxis.NEG_Y, 4)):
        profile = layer_profile(cloud, cut, proj, thickness)
        expected = _brute_layers(cloud, cut, proj, thickness)
        for slab in range(profile.lo, profile.lo + len(profile)):
            assert profile.at(slab) == expected.get(slab, 0)


def test_layer_profile_rejects_cut_axis_projection(shell: PointCloud) -> None:
    with pytest.raises(ValueError):
        layer_profile(shell, AxisName.Y, SignedAxis.NEG_Y)


# --- segmentation ---


def test_auto_segment_uniform_cylinder_is_one_section(shell: PointCloud) -> None:
    sections = segment(shell, SegmentationConfig())
    assert len(sections) == 1
    only = sections[0]
    assert only.slab == (100, 183)
    assert len(only) == len(shell)
    assert not only.overlap_lo and not only.overlap_hi
    assert (only.ellipse.a, only.ellipse.b) == (30.0, 20.0)


def test_auto_segment_stacked_cylinders_splits_at_radius_step(stacked: PointCloud) -> None:
    sections = segment(stacked, SegmentationConfig(overlap_width=1))
    assert [s.slab for s in sections] == [(100, 140), (140, 179)]
    assert sections[0].overlap_hi and sections[1].overlap_lo
    assert not sections[0].overlap_lo and not sections[1].overlap_hi

    counts = _membership(sections, len(stacked))
    y = stacked.points[:, 1]
    assert counts.min() == 1
    assert np.all(counts[y == 140] == 2)
    assert np.all(counts[y != 140] == 1)


def test_auto_segment_without_overlap(stacked: PointCloud) -> None:
    sections = segment(stacked, SegmentationConfig(overlap_width=0))
    assert [s.slab for s in sections] == [(100, 139), (140, 179)]
    assert np.all(_membership(sections, len(stacked)) == 1)


def test_auto_segment_any_rule_keeps_growing(stacked: PointCloud) -> None:
    sections = segment(stacked, SegmentationConfig(growth_rule="any"))
    assert len(sections) == 1


def test_auto_segment_keeps_multi_layer_run_whole() -> None:
    nested = synthetic.nested_shells(height=60)
    sections = segment(nested, SegmentationConfig())
    assert sections[0].axis.cut == AxisName.Y
    assert [s.slab for s in sections] == [(100, 159)]


def test_auto_segment_splits_where_layer_count_rises() -> None:
    thin = synthetic.elliptic_shell(a=20, b=20, height=30, y0=100)
    nested = synthetic.nested_shells(radii=(10, 20), height=30, y0=130)
    points = np.concatenate([thin.points, nested.points])
    cloud = PointCloud(points, np.concatenate([thin.colors, nested.colors]))
    sections = segment(cloud, SegmentationConfig(overlap_width=1))
    assert [s.slab for s in sections] == [(100, 130), (130, 159)]


def test_auto_segment_random_clouds_cover_every_point(rng: np.random.Generator) -> None:
    for _ in range(10):
        cloud = random_cloud(rng, int(rng.integers(50, 300)), extent=16)
        for rule in ("all", "any"):
            sections = segment(cloud, SegmentationConfig(growth_rule=rule))  # type: ignore[arg-type]
            counts = _membership(sections, len(cloud))
            assert counts.min() == 1
            assert counts.max() <= 2
            assert [s.section_id for s in sections] == list(range(len(sections)))
            for lower, upper in zip(sections, sections[1:]):
                assert lower.slab[0] < upper.slab[0] <= lower.slab[1] + 1
                assert lower.slab[1] - upper.slab[0] + 1 <= 1


def test_manual_segment_single_section(stacked: PointCloud) -> None:
    sections = segment(stacked, SegmentationConfig(target_sections=1))
    assert len(sections) == 1
    assert len(sections[0]) == len(stacked)
    assert not sections[0].overlap_lo and not sections[0].overlap_hi


def test_manual_segment_places_boundary_at_largest_step(stacked: PointCloud) -> None:
    sections = segment(stacked, SegmentationConfig(target_sections=2))
    assert [s.slab for s in sections] == [(100, 140), (140, 179)]


def test_manual_segment_returns_k_sections_and_covers(shell: PointCloud) -> None:
    for k in (1, 2, 3, 7):
        sections = segment(shell, SegmentationConfig(target_sections=k, overlap_width=2))
        assert len(sections) == k
        counts = _membership(sections, len(shell))
        assert counts.min() >= 1 and counts.max() <= 2
        los = [s.slab[0] for s in sections]
        his = [s.slab[1] for s in sections]
        assert los == sorted(los) and his == sorted(his)
        for s in sections:
            coord = shell.points[s.point_ids, 1]
            assert coord.min() >= s.slab[0] and coord.max() <= s.slab[1]


def test_manual_segment_too_many_sections(plate: PointCloud) -> None:
    assert len(segment(plate, SegmentationConfig(target_sections=24))) == 24
    with pytest.raises(InvalidSectionCountError):
        segment(plate, SegmentationConfig(target_sections=25))


def test_segment_empty_cloud() -> None:
    with pytest.raises(EmptyCloudError):
        segment(PointCloud.empty(), SegmentationConfig())


def test_segmentation_config_modes() -> None:
    assert SegmentationConfig(target_sections=3).auto is False
    assert SegmentationConfig(main_view="-x").main_view == SignedAxis.NEG_X
    with pytest.raises(ValueError):
        SegmentationConfig(target_sections=3, auto=True)


def test_segmentation_config_text_round_trip() -> None:
    config = SegmentationConfig(target_sections=4, main_view=SignedAxis.NEG_Y, growth_rule="any")
    text = config.to_config_text()
    assert "target_sections=4" in text
    assert "main_view=-Y" in text
    assert "auto=false" in text


def test_apply_layout_reuses_slabs_of_moved_frame(stacked: PointCloud) -> None:
    previous = segment(stacked, SegmentationConfig())
    moved = stacked.translated((2, 0, 1))
    reused = apply_layout(moved, previous)
    assert reused is not None
    assert [s.slab for s in reused] == [s.slab for s in previous]
    assert [len(s) for s in reused] == [len(s) for s in previous]


def test_apply_layout_rejects_uncovered_frame(stacked: PointCloud) -> None:
    previous = segment(stacked, SegmentationConfig())
    assert apply_layout(stacked.translated((0, 100, 0)), previous) is None
    assert apply_layout(stacked, []) is None


def test_renumber() -> None:
    section = CrossSection(Axis(AxisName.Y), (0, 0), EllipseParams((0, 0), 0, 0), np.zeros(0, np.int64), section_id=7)
    assert [s.section_id for s in renumber([section, section, section])] == [0, 1, 2]


# --- subdivision ---


def _kept(points: np.ndarray) -> int:
    """Points the best axis-aligned two-layer projection keeps."""
    best = 0
    for axis in range(3):
        columns = Counter(map(tuple, np.delete(points, axis, axis=1).tolist()))
        best = max(best, sum(min(c, 2) for c in columns.values()))
    return best


def test_subdivide_flat_plate_is_balanced(plate: PointCloud) -> None:
    section = segment(plate, SegmentationConfig())[0]
    bands = subdivide(section, plate, 2, candidate_planes(SignedAxis.POS_Z))
    assert [b.slab for b in bands] == [(50, 54), (55, 59)]
    assert all(b.axis.cut == AxisName.X for b in bands)
    assert sorted(np.concatenate([b.point_ids for b in bands]).tolist()) == list(range(len(plate)))


def test_subdivide_matches_exhaustive_search() -> None:
    cloud = synthetic.hemicylinder(radius=8, height=4)
    section = whole_section(cloud)
    planes = candidate_planes(SignedAxis.POS_Z)
    bands = subdivide(section, cloud, 3, planes)

    split = split_axis_for(cloud, section, choose_plane(cloud, section, planes).plane)
    coord = cloud.points[:, split]
    slabs = np.unique(coord)

    def total(edges: tuple[int, ...]) -> float:
        score = 0.0
        for a, b in zip(edges, edges[1:]):
            member = cloud.points[(coord >= slabs[a]) & (coord <= slabs[b - 1])]
            score += _kept(member) / len(member)
        return score

    best = max(total((0, *cuts, len(slabs))) for cuts in combinations(range(1, len(slabs)), 2))
    achieved = sum(_kept(cloud.points[b.point_ids]) / len(b) for b in bands)
    assert achieved == pytest.approx(best)
    assert len(bands) == 3
    assert sum(len(b) for b in bands) == len(cloud)


def test_subdivide_single_slab_section() -> None:
    thin = synthetic.flat_plate(width=1)
    with pytest.raises(TooManyPartsError):
        subdivide(whole_section(thin), thin, 2, candidate_planes(SignedAxis.POS_Z))


def test_subdivide_needs_two_parts(plate: PointCloud) -> None:
    with pytest.raises(InvalidPartCountError) as excinfo:
        subdivide(whole_section(plate), plate, 1, candidate_planes(SignedAxis.POS_Z))
    assert isinstance(excinfo.value, XpccError)
    assert excinfo.value.details == {"n_parts": 1}
