import json

import pytest
from click.testing import CliRunner

from plugins.module_utils.bench_cli import cli
from plugins.module_utils.mesh_io import read_mesh


@pytest.fixture
def runner():
    return CliRunner()


class TestEstimate:
    def test_octahedron_csv(self, runner, fixture_path):
        result = runner.invoke(cli, ["estimate", fixture_path("octahedron.off"), "--schemes", "G1,H1"])
        assert result.exit_code == 0, result.output
        lines = result.stdout.splitlines()
        assert lines[0] == "vertex,G1,H1,flags"
        assert len(lines) == 7

    def test_json_with_principal_curvatures(self, runner, fixture_path, tmp_path):
        out = tmp_path / "oct.json"
        result = runner.invoke(cli, ["estimate", fixture_path("octahedron.off"), "--schemes", "G5,H1",
                                     "--principal", "--format", "json", "--out", str(out)])
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        assert len(data["vertices"]) == 6
        assert "k_max" in data["vertices"][0]

    def test_quad_mesh_exit_code(self, runner, fixture_path):
        result = runner.invoke(cli, ["estimate", fixture_path("quad.obj")])
        assert result.exit_code == 2
        assert "only triangles" in result.output

    def test_boundary_vertices_warn(self, runner, fixture_path):
        result = runner.invoke(cli, ["estimate", fixture_path("open_fan.obj"), "--schemes", "G2"])
        assert result.exit_code == 0
        assert "warning" in result.output


class TestExperiments:
    def test_counterexample_json(self, runner):
        result = runner.invoke(cli, ["counterexample", "--schemes", "G2", "--levels", "1/8,1/16", "--format", "json"])
        assert result.exit_code == 0, result.output
        data = json.loads(result.stdout)
        assert data["coordinates_identical"] is True
        assert len(data["rows"]) == 4 * 2

    def test_table1_small(self, runner):
        result = runner.invoke(cli, ["table1", "--valences", "6", "--samples", "3", "--levels", "1/8,1/16",
                                     "--schemes", "G1"])
        assert result.exit_code == 0, result.output
        assert result.stdout.splitlines()[0] == "scheme,n_or_N,level,eta,eps,slope,flag"
        assert len(result.stdout.splitlines()) == 3

    def test_bad_levels_exit_code(self, runner):
        result = runner.invoke(cli, ["parallelogram", "--levels", "1/16,1/8"])
        assert result.exit_code == 3
        assert "strictly decreasing" in result.output

    def test_malformed_list_is_config_error(self, runner):
        result = runner.invoke(cli, ["table1", "--valences", "4,x", "--samples", "2"])
        assert result.exit_code == 3
        assert "malformed list '4,x'" in result.output

    def test_run_config(self, runner, tmp_path):
        config = tmp_path / "c.yml"
        config.write_text("kind: parallelogram\nsurfaces: [saddle]\nschemes: [G1]\nlevels: ['1/8', '1/16', '1/32']\n")
        result = runner.invoke(cli, ["run", str(config)])
        assert result.exit_code == 0, result.output
        assert len(result.stdout.splitlines()) == 4

    def test_run_invalid_config(self, runner, tmp_path):
        config = tmp_path / "c.yml"
        config.write_text("kind: table7\n")
        result = runner.invoke(cli, ["run", str(config)])
        assert result.exit_code == 3
        assert "kind" in result.output


class TestHull:
    def test_writes_mesh(self, runner, tmp_path):
        out = tmp_path / "s.off"
        result = runner.invoke(cli, ["-v", "hull", "--points", "40", "--seed", "2", "--out", str(out)])
        assert result.exit_code == 0, result.output
        mesh = read_mesh(str(out))
        assert (mesh.vertex_count, mesh.face_count) == (40, 76)

    def test_too_few_points(self, runner, tmp_path):
        result = runner.invoke(cli, ["hull", "--points", "3", "--out", str(tmp_path / "s.off")])
        assert result.exit_code == 2
