"""Unit tests for cluster files and pipeline assembly."""

import json

import pytest

from qpack_cli.errors import ConfigParseError, ConfigValidationError
from qpack_cli.models import ClusterSpec, RenderView
from qpack_cli.pipeline import generators_for, load_config, parse_config, prepare
from tests.conftest import DECAGONAL_CENTERED, FIBONACCI, ICOSAHEDRAL_THREE_SHELL


class TestLoadConfig:
    """Tests for load_config and parse_config."""

    def test_icosahedral_three_shell(self, cluster_file):
        """Test that the three-shell icosahedral file builds a k=31 cluster."""
        spec = load_config(cluster_file(ICOSAHEDRAL_THREE_SHELL))
        assert spec.group_kind == "icosahedral"
        assert prepare(spec).cluster.k == 31

    def test_rounded_icosahedral_seeds(self, cluster_file):
        """Test that six-digit seeds still give orbits of 12, 20 and 30 points."""
        path = cluster_file(
            {
                "group": "icosahedral",
                "shells": [[0.525731, 0.850651, 0], [1.154701, 1.154701, 1.154701], [3, 0, 0]],
            }
        )
        prepared = prepare(load_config(path))
        assert [shell.size for shell in prepared.shells] == [12, 20, 30]
        assert prepared.cluster.k == 31
        assert prepared.cs.count + prepared.cs.dropped == 31465

    def test_decagonal_two_shell(self, cluster_file):
        """Test that the two-shell decagonal file builds a k=10 cluster."""
        spec = load_config(cluster_file(DECAGONAL_CENTERED))
        prepared = prepare(spec)
        assert prepared.cluster.k == 10
        assert prepared.cs.count == 120

    def test_missing_m(self, cluster_file):
        """Test that a dihedral group without m fails validation."""
        with pytest.raises(ConfigValidationError) as excinfo:
            load_config(cluster_file({"group": "dihedral", "shells": [[1, 0]]}))
        assert "m is required" in str(excinfo.value)

    def test_unknown_key_rejected(self, cluster_file):
        """Test that unknown keys are rejected and named."""
        with pytest.raises(ConfigValidationError) as excinfo:
            load_config(cluster_file({"group": "icosahedral", "shells": [[1, 0, 0]], "color": 1}))
        assert excinfo.value.field == "color"

    def test_bad_field_named(self, cluster_file):
        """Test that a bad value names its field."""
        with pytest.raises(ConfigValidationError) as excinfo:
            load_config(cluster_file({"group": "dihedral", "m": 1, "shells": [[1, 0]]}))
        assert excinfo.value.field == "m"

    def test_parse_error_has_position(self, cluster_file):
        """Test that invalid JSON reports line and column."""
        with pytest.raises(ConfigParseError) as excinfo:
            load_config(cluster_file('{\n  "group": "dihedral",\n  "m": 5,,\n}'))
        assert excinfo.value.line == 3
        assert excinfo.value.column is not None

    def test_missing_file(self, tmp_path):
        """Test that an unreadable file is a parse error naming the path."""
        with pytest.raises(ConfigParseError) as excinfo:
            load_config(tmp_path / "absent.json")
        assert "absent.json" in str(excinfo.value)

    def test_sample_cluster_files(self, clusters_dir):
        """Test that every shipped cluster file loads and prepares."""
        files = sorted(clusters_dir.glob("*.json"))
        assert len(files) == 4
        for path in files:
            prepare(load_config(path))


class TestClusterSpec:
    """Tests for ClusterSpec validation."""

    def test_zero_seed_rejected(self):
        """Test that a zero seed is rejected."""
        with pytest.raises(ConfigValidationError):
            parse_config(json.dumps({"group": "icosahedral", "shells": [[0, 0, 0]]}))

    def test_empty_shells_rejected(self):
        """Test that at least one shell is required."""
        with pytest.raises(ConfigValidationError):
            parse_config(json.dumps({"group": "icosahedral", "shells": []}))

    def test_seed_dimension_checked(self):
        """Test that seeds must match the group dimension."""
        with pytest.raises(ConfigValidationError):
            parse_config(json.dumps({"group": "dihedral", "m": 5, "shells": [[1, 0, 0]]}))

    def test_m_only_for_dihedral(self):
        """Test that m is rejected for non-dihedral groups."""
        with pytest.raises(ConfigValidationError):
            parse_config(json.dumps({"group": "icosahedral", "m": 5, "shells": [[1, 0, 0]]}))

    def test_alternate_rule_only_for_dihedral(self):
        """Test that the alternate half rule needs a dihedral group."""
        data = {"group": "icosahedral", "shells": [[1, 0, 0]], "half_rule": "alternate"}
        with pytest.raises(ConfigValidationError):
            parse_config(json.dumps(data))

    def test_default_limits(self):
        """Test that a file without limits gets the default point cap."""
        spec = ClusterSpec.model_validate(FIBONACCI | {"limits": {"max_points": 7}})
        assert spec.limits.max_points == 7
        default = ClusterSpec.model_validate({"group": "inversion", "shells": [[1.0]]})
        assert default.limits.max_points is not None
        assert default.n == 1

    def test_shift_wrong_length_is_validation_error(self):
        """Test that a shift with the wrong number of entries is reported as a field error."""
        spec = ClusterSpec.model_validate(FIBONACCI | {"shift": [0.1, 0.1, 0.1]})
        with pytest.raises(ConfigValidationError) as excinfo:
            prepare(spec)
        assert excinfo.value.field == "shift"

    def test_shift_override(self):
        """Test that prepare's shift argument overrides the file value."""
        spec = ClusterSpec.model_validate(FIBONACCI | {"shift": 0.2})
        assert prepare(spec).cs.shift.tolist() == [0.2, 0.2]
        assert prepare(spec, shift=-0.1).cs.shift.tolist() == [-0.1, -0.1]


class TestGeneratorsFor:
    """Tests for generators_for."""

    def test_known_groups(self):
        """Test that each group name maps to its family."""
        assert generators_for("dihedral", 5).group_kind == "dihedral"
        assert generators_for("icosahedral").n == 3
        assert generators_for("inversion").n == 1

    def test_errors(self):
        """Test that unknown names and a missing m are rejected."""
        with pytest.raises(ValueError):
            generators_for("octahedral")
        with pytest.raises(ValueError):
            generators_for("dihedral")


class TestRenderView:
    """Tests for RenderView validation."""

    def test_axis_must_be_unit(self):
        """Test that non-unit axes are rejected."""
        with pytest.raises(ValueError):
            RenderView(projection="axis", axis=(1.0, 1.0, 0.0))

    def test_axis_required(self):
        """Test that axis projection needs an axis."""
        with pytest.raises(ValueError):
            RenderView(projection="axis")

    def test_unit_axis_accepted(self):
        """Test a valid axis view."""
        view = RenderView(projection="axis", axis=(0.0, 0.0, 1.0))
        assert view.axis == (0.0, 0.0, 1.0)
