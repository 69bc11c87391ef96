"""Unit tests for lattice enumeration."""

import numpy as np
import pytest

from qpack_cli.enumeration import (
    box_scan,
    enumerate_packing,
    occupancy_histogram,
    occupancy_profile,
    unit_steps,
)
from qpack_cli.errors import InvariantViolation, LimitExceeded
from qpack_cli.models import EnumerationLimits
from qpack_cli.strip import in_strip


def complete_or_partial(cs, emb, limits, **kwargs):
    """Run the search and return the packing even when a limit was hit."""
    try:
        return enumerate_packing(cs, emb, limits, **kwargs)
    except LimitExceeded as e:
        return e.partial


class TestEnumeratePacking:
    """Tests for breadth-first enumeration."""

    def test_origin_included(self, decagonal_centered):
        """Test that the packing contains the origin at physical (0, 0)."""
        packing = enumerate_packing(
            decagonal_centered.cs, decagonal_centered.emb, EnumerationLimits(radius=3.0)
        )
        rows = [tuple(row) for row in packing.lattice.tolist()]
        origin = rows.index((0,) * 10)
        assert np.array_equal(packing.physical[origin], [0.0, 0.0])

    def test_fibonacci_gaps(self, fibonacci, tau):
        """Test that sorted projections have gaps exactly {1, tau}."""
        packing = enumerate_packing(fibonacci.cs, fibonacci.emb, EnumerationLimits(radius=30.0))
        positions = np.sort(packing.physical[:, 0])
        gaps = np.diff(positions)
        assert np.all(np.minimum(np.abs(gaps - 1.0), np.abs(gaps - tau)) <= 1e-9)
        assert np.any(np.abs(gaps - 1.0) <= 1e-9)
        assert np.any(np.abs(gaps - tau) <= 1e-9)

    def test_sorted_and_unique(self, decagon_single):
        """Test lexicographic order and absence of duplicates."""
        packing = enumerate_packing(
            decagon_single.cs, decagon_single.emb, EnumerationLimits(radius=5.0)
        )
        rows = [tuple(row) for row in packing.lattice.tolist()]
        assert rows == sorted(rows)
        assert len(set(rows)) == len(rows)

    def test_soundness_and_projection(self, decagon_single):
        """Test that every point is in the strip and physical = P(lattice)."""
        emb = decagon_single.emb
        packing = enumerate_packing(decagon_single.cs, emb, EnumerationLimits(radius=5.0))
        for index in range(packing.size):
            assert in_strip(decagon_single.cs, packing.lattice[index])
        assert np.max(np.abs(packing.physical - packing.lattice @ emb.w.T)) <= 1e-12

    def test_radius_respected(self, decagonal_centered):
        """Test that no kept point lies beyond the physical radius."""
        packing = enumerate_packing(
            decagonal_centered.cs, decagonal_centered.emb, EnumerationLimits(radius=6.0)
        )
        assert np.max(np.linalg.norm(packing.physical, axis=1)) <= 6.0

    def test_centered_packing_is_symmetric(self, decagonal_centered):
        """Test that x in the packing implies -x in the packing."""
        packing = enumerate_packing(
            decagonal_centered.cs, decagonal_centered.emb, EnumerationLimits(radius=6.0)
        )
        points = packing.lattice_set()
        assert all(tuple(-v for v in x) in points for x in points)

    def test_neighbor_property(self, decagonal_figure):
        """Test P(x + e_j) - P(x) = v_j within 1e-12 for adjacent packing points."""
        emb = decagonal_figure.emb
        packing = enumerate_packing(decagonal_figure.cs, emb, EnumerationLimits(radius=6.0))
        index = {tuple(row): i for i, row in enumerate(packing.lattice.tolist())}
        checked = 0
        for x, i in index.items():
            for j in range(emb.k):
                neighbour = list(x)
                neighbour[j] += 1
                other = index.get(tuple(neighbour))
                if other is None:
                    continue
                difference = packing.physical[other] - packing.physical[i]
                assert np.max(np.abs(difference - emb.w[:, j])) <= 1e-12
                checked += 1
        assert checked > 0

    def test_max_points_truncation(self, decagonal_centered):
        """Test that max_points raises LimitExceeded with exactly max_points points."""
        with pytest.raises(LimitExceeded) as excinfo:
            enumerate_packing(
                decagonal_centered.cs, decagonal_centered.emb, EnumerationLimits(max_points=50)
            )
        assert excinfo.value.partial.size == 50
        assert excinfo.value.exit_code == 2

    def test_thread_count_does_not_change_result(self, decagonal_centered):
        """Test identical packings for 1 and 4 worker threads, truncated or not."""
        cs, emb = decagonal_centered.cs, decagonal_centered.emb
        for limits in (EnumerationLimits(radius=7.0), EnumerationLimits(max_points=300)):
            one = complete_or_partial(cs, emb, limits, threads=1)
            four = complete_or_partial(cs, emb, limits, threads=4)
            assert np.array_equal(one.lattice, four.lattice)
            assert np.array_equal(one.physical, four.physical)
            assert np.array_equal(one.occupancy, four.occupancy)

    def test_coordinate_cap_raises_with_partial(self, fibonacci):
        """Test that strip points beyond max_coordinate raise LimitExceeded."""
        limits = EnumerationLimits(max_points=10_000, max_coordinate=5)
        with pytest.raises(LimitExceeded) as excinfo:
            enumerate_packing(fibonacci.cs, fibonacci.emb, limits)
        partial = excinfo.value.partial
        assert partial.size > 0
        assert np.max(np.abs(partial.lattice)) <= 5

    def test_level_callback(self, fibonacci):
        """Test that the level callback reports a running total equal to the packing size."""
        seen = []
        packing = enumerate_packing(
            fibonacci.cs,
            fibonacci.emb,
            EnumerationLimits(radius=10.0),
            on_level=lambda depth, accepted, total: seen.append((depth, accepted, total)),
        )
        assert seen[0][0] == 1
        assert seen[-1][2] == packing.size

    def test_mismatched_embedding(self, fibonacci, decagon_single):
        """Test that a constraint set from another embedding is rejected."""
        with pytest.raises(InvariantViolation):
            enumerate_packing(fibonacci.cs, decagon_single.emb, EnumerationLimits(radius=2.0))

    def test_fingerprint_recorded(self, fibonacci):
        """Test that the packing records the embedding fingerprint."""
        packing = enumerate_packing(fibonacci.cs, fibonacci.emb, EnumerationLimits(radius=5.0))
        assert packing.emb_fingerprint == fibonacci.emb.fingerprint


class TestOccupancy:
    """Tests for occupancy profiles."""

    def test_unit_steps_order(self):
        """Test that steps are ordered +e_1, -e_1, +e_2, -e_2."""
        assert unit_steps(2).tolist() == [[1, 0], [-1, 0], [0, 1], [0, -1]]

    def test_fibonacci_origin(self, fibonacci):
        """Test that at the origin only the +-e_2 neighbours are in the strip."""
        assert occupancy_profile(fibonacci.cs, [0, 0]) == (False, False, True, True)

    def test_packing_occupancy_matches_profile(self, decagon_single):
        """Test that stored occupancy equals occupancy_profile for every point."""
        cs = decagon_single.cs
        packing = enumerate_packing(cs, decagon_single.emb, EnumerationLimits(radius=4.0))
        for index in range(packing.size):
            expected = occupancy_profile(cs, packing.lattice[index])
            assert tuple(packing.occupancy[index].tolist()) == expected

    def test_point_view(self, fibonacci):
        """Test the PackingPoint view of a stored row."""
        packing = enumerate_packing(fibonacci.cs, fibonacci.emb, EnumerationLimits(radius=3.0))
        point = packing.points[0]
        assert len(point.lattice) == 2
        assert len(point.occupancy) == 4
        assert point.occupancy_count == int(packing.occupancy_counts[0])

    def test_histogram_totals(self, decagonal_centered):
        """Test that the histogram counts every point once."""
        packing = enumerate_packing(
            decagonal_centered.cs, decagonal_centered.emb, EnumerationLimits(radius=5.0)
        )
        histogram = occupancy_histogram(packing)
        assert sum(histogram.values()) == packing.size
        assert all(0 <= count <= 20 for count in histogram)


class TestBoxScan:
    """Tests for the exhaustive box scan."""

    def test_fibonacci_matches_bfs(self, fibonacci):
        """Test BFS equals the box scan for (n=1, k=2) with max_coordinate 30."""
        limits = EnumerationLimits(max_points=100_000, max_coordinate=30)
        bfs = complete_or_partial(fibonacci.cs, fibonacci.emb, limits)
        scan = box_scan(fibonacci.cs, fibonacci.emb, 30)
        assert bfs.lattice_set() == scan.lattice_set()
        assert np.array_equal(bfs.lattice, scan.lattice)

    def test_box_scan_points_in_strip(self, fibonacci_k3):
        """Test that every scanned point passes in_strip and nothing is missed."""
        cs = fibonacci_k3.cs
        scan = box_scan(cs, fibonacci_k3.emb, 4)
        found = scan.lattice_set()
        grid = np.array(np.meshgrid(*[np.arange(-4, 5)] * 3, indexing="ij")).reshape(3, -1).T
        expected = {tuple(int(v) for v in x) for x in grid if in_strip(cs, x)}
        assert found == expected

    def test_box_scan_rejects_negative_box(self, fibonacci):
        """Test that a negative box size is rejected."""
        with pytest.raises(ValueError):
            box_scan(fibonacci.cs, fibonacci.emb, -1)


class TestEnumerationLimits:
    """Tests for EnumerationLimits validation."""

    def test_needs_a_finite_bound(self):
        """Test that at least one of max_points and radius is required."""
        with pytest.raises(ValueError):
            EnumerationLimits()

    def test_positive_values(self):
        """Test that zero or negative limits are rejected."""
        with pytest.raises(ValueError):
            EnumerationLimits(max_points=0)
        with pytest.raises(ValueError):
            EnumerationLimits(radius=-1.0)

    def test_radius_alias(self):
        """Test that radius populates max_physical_radius."""
        assert EnumerationLimits(radius=2.5).max_physical_radius == 2.5
