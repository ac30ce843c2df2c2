"""CLI subcommands: files, manifests, determinism, exit codes."""
import csv
import json
import math
import os

import numpy as np
import pytest

from chialvo import flip_point
from chialvo.cli import main, run_from_manifest


def run_cli(tmp_path, *args):
    out = tmp_path / "out.csv"
    code = main([*args, "--out", str(out)])
    return code, out


def read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


ALL_COMMANDS = [
    ["fixed-points", "--r", "2.436", "--k", "0"],
    ["core", "--r", "2.5", "--k", "0"],
    ["flip", "--k", "0"],
    ["fold", "--k", "0.1"],
    ["fold-k", "--r", "0.8"],
    ["bifurcate-numeric", "--k", "0", "--r-lo", "1.8", "--r-hi", "2.0", "--kind", "flip"],
    ["misiurewicz", "--k", "0", "--r-lo", "2.43", "--r-hi", "2.44"],
    ["gamma-table", "--k-min", "0", "--k-max", "0.05", "--k-step", "0.01"],
    ["chaos-scan", "--r-min", "2.5", "--r-max", "3.0", "--r-step", "0.1",
     "--k-min", "0", "--k-max", "0.1", "--k-step", "0.05"],
    ["kneading", "--r", "2.7", "--k", "0", "--n", "16"],
    ["attractor", "--r", "2.258", "--k", "0"],
    ["lyapunov", "--r", "2.7", "--k", "0", "--x0", "1.0", "--n", "5000"],
    ["histogram", "--r", "2.7", "--k", "0", "--x0", "1.0", "--n", "20000", "--bins", "32"],
    ["bifdiag", "--k", "0.05", "--r-min", "1.8", "--r-max", "1.9", "--r-step", "0.05",
     "--transient", "500", "--samples", "20"],
    ["cobweb", "--r", "2.0", "--k", "0", "--x0", "2.0", "--n", "10"],
    ["simulate2d", "--a", "0.876", "--b", "0.02", "--c", "0.28", "--k", "0",
     "--x0", "5", "--y0", "3", "--n", "80"],
    ["mmo", "--r", "2.45", "--k", "0.2", "--x0", "2.25", "--n", "50"],
]


class TestSubcommands:
    @pytest.mark.parametrize("args", ALL_COMMANDS, ids=lambda a: a[0])
    def test_writes_output_and_manifest(self, tmp_path, args):
        code, out = run_cli(tmp_path, *args)
        assert code == 0
        assert out.exists() and out.stat().st_size > 0
        manifest_path = tmp_path / (out.name + ".manifest.json")
        assert manifest_path.exists()
        manifest = json.loads(manifest_path.read_text())
        assert manifest["tool"] == "chialvo"
        assert manifest["command"] == args[0]
        assert "wall_time_s" in manifest
        header, rows = read_csv(out)
        assert header and rows

    @pytest.mark.parametrize("args", ALL_COMMANDS, ids=lambda a: a[0])
    def test_byte_determinism(self, tmp_path, args):
        _, out1 = run_cli(tmp_path / "a", *args)
        _, out2 = run_cli(tmp_path / "b", *args)
        assert out1.read_bytes() == out2.read_bytes()

    def test_manifest_round_trip(self, tmp_path):
        code, out = run_cli(
            tmp_path, "chaos-scan", "--r-min", "2.5", "--r-max", "2.8",
            "--r-step", "0.05", "--k-min", "0", "--k-max", "0.05", "--k-step", "0.05",
        )
        assert code == 0
        regen = run_from_manifest(
            tmp_path / "out.csv.manifest.json", out=tmp_path / "regen.csv"
        )
        assert regen.read_bytes() == out.read_bytes()

    def test_json_format(self, tmp_path):
        out = tmp_path / "flip.json"
        assert main(["flip", "--k", "0", "--format", "json", "--out", str(out)]) == 0
        records = json.loads(out.read_text())
        assert records[0]["x0"] == 3.0
        assert records[0]["criticality"] == "supercritical"

    def test_env_var_out_dir(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CHIALVO_OUT_DIR", str(tmp_path))
        assert main(["flip", "--k", "0"]) == 0
        assert (tmp_path / "flip.csv").exists()


class TestExitCodes:
    def test_domain_error_is_3(self, tmp_path):
        code, _ = run_cli(tmp_path, "fold", "--k", "0.3")
        assert code == 3

    def test_numeric_failure_is_4(self, tmp_path):
        code, _ = run_cli(tmp_path, "misiurewicz", "--k", "0", "--r-lo", "2.0", "--r-hi", "2.1")
        assert code == 4

    def test_bad_arguments_is_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["fixed-points"])  # missing --r
        assert exc.value.code == 2

    def test_bifdiag_axis_confusion_is_2(self, tmp_path):
        code, _ = run_cli(tmp_path, "bifdiag", "--k", "0.05")
        assert code == 2


class TestDatasets:
    def test_bifdiag_cluster_counts_across_flip(self, tmp_path):
        r0 = flip_point(0.05).param0

        def distinct_values(r):
            code, out = run_cli(
                tmp_path / f"r{r:.3f}", "bifdiag", "--k", "0.05",
                "--r-min", str(r), "--r-max", str(r), "--r-step", "1",
                "--transient", "2000", "--samples", "200",
            )
            assert code == 0
            _, rows = read_csv(out)
            xs = sorted(float(row[3]) for row in rows)
            clusters = 1
            for a, b in zip(xs, xs[1:]):
                if b - a > 1e-6:
                    clusters += 1
            return clusters

        assert distinct_values(r0 - 0.05) == 1
        assert distinct_values(r0 + 0.05) == 2

    def test_bifdiag_chaotic_column_has_many_values(self, tmp_path):
        code, out = run_cli(
            tmp_path, "bifdiag", "--r", "2.6", "--k-min", "0", "--k-max", "0",
            "--k-step", "1", "--transient", "1000", "--samples", "200",
        )
        assert code == 0
        _, rows = read_csv(out)
        xs = np.array(sorted(float(row[3]) for row in rows))
        clusters = 1 + int(np.sum(np.diff(xs) > 1e-6))
        assert clusters > 50

    def test_cobweb_segments_walk_the_orbit(self, tmp_path):
        code, out = run_cli(tmp_path, "cobweb", "--r", "2.436", "--k", "0",
                            "--x0", "2.0", "--n", "12")
        assert code == 0
        _, rows = read_csv(out)
        assert len(rows) == 24
        # verticals alternate with horizontals and chain continuously
        for v, h in zip(rows[0::2], rows[1::2]):
            assert v[1] == v[3]          # vertical segment: x constant
            assert h[2] == h[4]          # horizontal segment: y constant
            assert v[3] == h[1] and v[4] == h[2]
        # after three steps the orbit locks onto the fixed point
        ys = [float(row[4]) for row in rows[1::2]]
        assert abs(ys[-1] - ys[5]) <= 1e-5

    def test_cobweb_fixed_point_degenerate(self, tmp_path):
        code, out = run_cli(tmp_path, "cobweb", "--r", "1.8", "--k", "0",
                            "--x0", "0.0", "--n", "5")
        _, rows = read_csv(out)
        for row in rows:
            assert float(row[1]) == 0.0 and float(row[4]) == 0.0

    def test_simulate2d_columns(self, tmp_path):
        code, out = run_cli(
            tmp_path, "simulate2d", "--a", "0.876", "--b", "0", "--c", "0.28",
            "--k", "0", "--x0", "5", "--y0", "3", "--n", "80",
        )
        header, rows = read_csv(out)
        assert header == ["n", "x", "y"]
        assert len(rows) == 81
        ys = [float(row[2]) for row in rows[-20:]]
        assert max(ys) - min(ys) < 1e-3
        assert abs(sum(ys) / len(ys) - 2.258) < 1e-2

    def test_gamma_table_columns(self, tmp_path):
        code, out = run_cli(tmp_path, "gamma-table", "--k-min", "0",
                            "--k-max", "0.02", "--k-step", "0.01")
        header, rows = read_csv(out)
        assert header == ["k", "r_star", "z", "zeta", "zeta1", "dzeta_dr",
                          "df_dr_at_c", "gamma"]
        assert len(rows) == 3
        assert float(rows[0][1]) == pytest.approx(2.436, abs=2e-3)

    def test_chaos_scan_columns(self, tmp_path):
        code, out = run_cli(
            tmp_path, "chaos-scan", "--r-min", "2.6", "--r-max", "2.9",
            "--r-step", "0.1", "--k-min", "0", "--k-max", "0", "--k-step", "1",
        )
        header, rows = read_csv(out)
        assert header == ["r", "k", "satisfied", "margin_fc", "margin_f3c",
                          "margin_order", "margin_min"]
        assert all(row[2] == "1" for row in rows)

    def test_float_precision_round_trips(self, tmp_path):
        code, out = run_cli(tmp_path, "misiurewicz", "--k", "0",
                            "--r-lo", "2.43", "--r-hi", "2.44")
        _, rows = read_csv(out)
        from chialvo import misiurewicz_search
        ref = misiurewicz_search(0.0, (2.43, 2.44))
        assert float(rows[0][1]) == ref.r_star
        assert float(rows[0][7]) == ref.gamma

    def test_lyapunov_seeded_initial_condition(self, tmp_path):
        a = run_cli(tmp_path / "s0", "lyapunov", "--r", "2.7", "--n", "2000",
                    "--seed", "1")
        b = run_cli(tmp_path / "s1", "lyapunov", "--r", "2.7", "--n", "2000",
                    "--seed", "1")
        c = run_cli(tmp_path / "s2", "lyapunov", "--r", "2.7", "--n", "2000",
                    "--seed", "2")
        assert a[1].read_bytes() == b[1].read_bytes()
        assert a[1].read_bytes() != c[1].read_bytes()
