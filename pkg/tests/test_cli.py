import json
import shutil
import subprocess

import numpy as np
import pytest

from khjet import snapio
from khjet.cli import cli_dispatch
from khjet.fields import SnapshotMatrix


@pytest.fixture(scope="module")
def sim_outputs(tmp_path_factory):
    """One small simulate run shared by the pod/dmd/export tests."""
    root = tmp_path_factory.mktemp("cli_pipeline")
    config = root / "run.json"
    config.write_text(
        json.dumps({"n": 32, "collect_count": 6, "snapshot_interval": 2})
    )
    snaps = root / "snaps.khsnap"
    assert cli_dispatch(["simulate", "--config", str(config), "--out", str(snaps)]) == 0
    return root, snaps


class TestDispatchBasics:
    def test_no_arguments_prints_help(self, capsys):
        assert cli_dispatch([]) == 1
        assert "command" in capsys.readouterr().out

    def test_help_exits_zero(self, capsys):
        assert cli_dispatch(["--help"]) == 0
        assert "khjet" in capsys.readouterr().out

    def test_unknown_command(self, capsys):
        assert cli_dispatch(["frobnicate"]) == 1
        assert "usage" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert cli_dispatch(["gen-ic", "--bogus", "1"]) == 1
        assert "usage" in capsys.readouterr().err

    def test_missing_required_option(self, capsys):
        assert cli_dispatch(["gen-ic"]) == 1
        assert "--out" in capsys.readouterr().err


class TestGenIc:
    def test_writes_three_fields(self, tmp_path, capsys):
        out = tmp_path / "ic.khsnap"
        assert (
            cli_dispatch(["gen-ic", "--case", "1", "--n", "32", "--out", str(out)])
            == 0
        )
        assert "wrote case 1" in capsys.readouterr().out
        s = snapio.read_snapshots(out)
        assert s.n_snapshots == 3 and s.n_pixels == 32 * 32
        u, v, ps = s.data.T
        assert u.max() == 0.1
        assert ps.max() == 1.0
        assert np.abs(v).max() < 0.1 / 60.0

    def test_deterministic_for_seed(self, tmp_path):
        a = tmp_path / "a.khsnap"
        b = tmp_path / "b.khsnap"
        c = tmp_path / "c.khsnap"
        cli_dispatch(["gen-ic", "--n", "32", "--seed", "7", "--out", str(a)])
        cli_dispatch(["gen-ic", "--n", "32", "--seed", "7", "--out", str(b)])
        cli_dispatch(["gen-ic", "--n", "32", "--seed", "8", "--out", str(c)])
        assert a.read_bytes() == b.read_bytes()
        assert a.read_bytes() != c.read_bytes()

    def test_case_changes_fields(self, tmp_path):
        a = tmp_path / "a.khsnap"
        b = tmp_path / "b.khsnap"
        cli_dispatch(["gen-ic", "--case", "1", "--n", "32", "--out", str(a)])
        cli_dispatch(["gen-ic", "--case", "2", "--n", "32", "--out", str(b)])
        ua = snapio.read_snapshots(a).data[:, 0]
        ub = snapio.read_snapshots(b).data[:, 0]
        assert not np.array_equal(ua, ub)

    def test_rejects_invalid_grid(self, capsys):
        assert cli_dispatch(["gen-ic", "--n", "100", "--out", "x"]) == 1
        assert "power of two" in capsys.readouterr().err

    def test_unwritable_destination(self, tmp_path):
        dest = tmp_path / "no" / "such" / "dir" / "ic.khsnap"
        assert cli_dispatch(["gen-ic", "--n", "32", "--out", str(dest)]) == 2


class TestSimulate:
    def test_snapshot_schedule(self, sim_outputs):
        _, snaps = sim_outputs
        header = snapio.read_header(snaps)
        assert (header.nx, header.ny, header.n_snapshots) == (32, 32, 6)
        dt = 0.5 * (2.0 * np.pi / 32.0) / 0.1
        assert header.dt_snap == pytest.approx(2.0 * dt, rel=1e-15)

    def test_unknown_config_key(self, tmp_path, capsys):
        config = tmp_path / "bad.json"
        config.write_text(json.dumps({"n": 32, "bogus": 1}))
        code = cli_dispatch(
            ["simulate", "--config", str(config), "--out", str(tmp_path / "s")]
        )
        assert code == 2
        assert "bogus" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        config = tmp_path / "bad.json"
        config.write_text("{not json")
        code = cli_dispatch(
            ["simulate", "--config", str(config), "--out", str(tmp_path / "s")]
        )
        assert code == 2
        assert "JSON" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        code = cli_dispatch(
            [
                "simulate",
                "--config",
                str(tmp_path / "absent.json"),
                "--out",
                str(tmp_path / "s"),
            ]
        )
        assert code == 2
        assert "io error" in capsys.readouterr().err


class TestPod:
    def test_outputs(self, sim_outputs, capsys):
        root, snaps = sim_outputs
        out = root / "pod"
        code = cli_dispatch(
            [
                "pod",
                "--in",
                str(snaps),
                "--out-dir",
                str(out),
                "--lag-pair",
                "1",
                "2",
            ]
        )
        assert code == 0
        assert "pod: 6 modes" in capsys.readouterr().out
        for name in (
            "pod_result.npz",
            "pod_eigenvalues.csv",
            "pod_time_coefficients.csv",
            "pod_time_coefficients_lags.csv",
        ):
            assert (out / name).exists()
        stored = np.load(out / "pod_result.npz")
        lam = stored["eigenvalues"]
        assert np.all(np.diff(lam) <= 0.0) and np.all(lam >= 0.0)
        assert stored["modes"].shape == (32 * 32, 6)
        assert int(stored["grid_n"]) == 32
        header = (out / "pod_time_coefficients.csv").read_text().splitlines()[0]
        assert header.split(",") == ["snapshot", "t", "a1", "a2", "a3", "a4", "a5", "a6"]
        eig_lines = (out / "pod_eigenvalues.csv").read_text().splitlines()
        assert eig_lines[0] == "index,eigenvalue,energy_fraction,cumulative_fraction"
        assert len(eig_lines) == 7
        assert float(eig_lines[-1].split(",")[-1]) == pytest.approx(1.0, abs=1e-9)

    def test_missing_input(self, tmp_path, capsys):
        code = cli_dispatch(
            ["pod", "--in", str(tmp_path / "nope"), "--out-dir", str(tmp_path)]
        )
        assert code == 2
        assert "io error" in capsys.readouterr().err

    def test_corrupt_input(self, tmp_path, capsys):
        bad = tmp_path / "bad.khsnap"
        bad.write_bytes(b"NOTMAGIC" + b"\x00" * 64)
        code = cli_dispatch(["pod", "--in", str(bad), "--out-dir", str(tmp_path)])
        assert code == 2
        assert "offset 0" in capsys.readouterr().err


class TestDmd:
    def test_outputs(self, sim_outputs, capsys):
        root, snaps = sim_outputs
        out = root / "dmd"
        assert cli_dispatch(["dmd", "--in", str(snaps), "--out-dir", str(out)]) == 0
        assert "dmd: 5 modes" in capsys.readouterr().out
        stored = np.load(out / "dmd_result.npz")
        assert stored["companion"].shape == (5, 5)
        assert stored["modes"].shape == (32 * 32, 5)
        assert set(stored["stability"].tolist()) <= {"stable", "neutral", "unstable"}
        lines = (out / "dmd_spectrum.csv").read_text().splitlines()
        assert len(lines) == 6
        assert (out / "dmd_spectrum_unit_circle.csv").exists()

    def test_two_snapshots_rejected(self, tmp_path, rng, capsys):
        s = SnapshotMatrix(rng.standard_normal((16, 2)), dt_snap=1.0)
        path = snapio.write_snapshots(tmp_path / "two.khsnap", s)
        code = cli_dispatch(["dmd", "--in", str(path), "--out-dir", str(tmp_path)])
        assert code == 2
        assert "error:" in capsys.readouterr().err


class TestMeanProfile:
    def test_profile_csv(self, sim_outputs, capsys):
        root, snaps = sim_outputs
        out = root / "profile.csv"
        image = root / "mean.pgm"
        code = cli_dispatch(
            [
                "mean-profile",
                "--in",
                str(snaps),
                "--out",
                str(out),
                "--image",
                str(image),
            ]
        )
        assert code == 0
        capsys.readouterr()
        lines = out.read_text().splitlines()
        assert lines[0] == "row,y,mean_scalar"
        assert len(lines) == 33
        first = lines[1].split(",")
        second = lines[2].split(",")
        assert float(first[1]) == 0.0
        assert float(second[1]) == pytest.approx(2.0 * np.pi / 32.0, rel=1e-15)
        assert image.read_bytes().startswith(b"P5\n32 32\n255\n")
        # scalar mean profile peaks inside the jet bands, near the midline
        values = np.array([float(line.split(",")[2]) for line in lines[1:]])
        assert values.max() > 10.0 * values.min() + 1e-12


class TestExport:
    def test_requires_prior_decomposition(self, tmp_path, capsys):
        code = cli_dispatch(
            ["export", "--modes", "pod", "--out-dir", str(tmp_path)]
        )
        assert code == 2
        assert "run the pod subcommand first" in capsys.readouterr().err

    def test_pod_images(self, sim_outputs, capsys):
        root, snaps = sim_outputs
        out = root / "pod_export"
        assert cli_dispatch(["pod", "--in", str(snaps), "--out-dir", str(out)]) == 0
        code = cli_dispatch(
            ["export", "--modes", "pod", "--count", "2", "--out-dir", str(out)]
        )
        assert code == 0
        capsys.readouterr()
        for name in ("pod_mode_01.pgm", "pod_mode_02.pgm"):
            assert (out / name).read_bytes().startswith(b"P5\n32 32\n255\n")

    def test_count_clipped(self, sim_outputs, capsys):
        root, snaps = sim_outputs
        out = root / "pod_clip"
        cli_dispatch(["pod", "--in", str(snaps), "--out-dir", str(out)])
        capsys.readouterr()
        code = cli_dispatch(
            ["export", "--modes", "pod", "--count", "99", "--out-dir", str(out)]
        )
        assert code == 0
        captured = capsys.readouterr()
        assert "clipping" in captured.err
        usable = int((~np.load(out / "pod_result.npz")["degenerate"]).sum())
        assert len(list(out.glob("pod_mode_*.pgm"))) == usable

    def test_count_zero_is_usage_error(self, sim_outputs, capsys):
        root, snaps = sim_outputs
        out = root / "pod_zero"
        cli_dispatch(["pod", "--in", str(snaps), "--out-dir", str(out)])
        capsys.readouterr()
        code = cli_dispatch(
            ["export", "--modes", "pod", "--count", "0", "--out-dir", str(out)]
        )
        assert code == 1

    def test_dmd_images_come_in_pairs(self, sim_outputs, capsys):
        root, snaps = sim_outputs
        out = root / "dmd_export"
        assert cli_dispatch(["dmd", "--in", str(snaps), "--out-dir", str(out)]) == 0
        code = cli_dispatch(
            ["export", "--modes", "dmd", "--count", "1", "--out-dir", str(out)]
        )
        assert code == 0
        capsys.readouterr()
        assert (out / "dmd_mode_01_re.pgm").exists()
        assert (out / "dmd_mode_01_im.pgm").exists()


class TestConsoleScript:
    def test_entry_point_runs(self, tmp_path):
        exe = shutil.which("khjet")
        assert exe is not None, "console script not on PATH"
        out = tmp_path / "ic.khsnap"
        proc = subprocess.run(
            [exe, "gen-ic", "--n", "32", "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "wrote case 1" in proc.stdout
        assert snapio.read_header(out).nx == 32
