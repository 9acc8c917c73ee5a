"""Harness commands and the CLI surface: CSV schemas, exit codes, config."""

import csv
import os

import numpy as np
import pytest

from devqe.bench import (
    SUMMARY_HEADER,
    UsageError,
    cmd_compare,
    cmd_optimize,
    cmd_scan,
    cmd_single,
    parse_config,
    parse_seeds,
)
from devqe.cli import main
from tests.conftest import fixture_path


def write_config(tmp_path, **kwargs):
    path = tmp_path / "run.cfg"
    path.write_text("".join(f"{k}={v}\n" for k, v in kwargs.items()))
    return str(path)


def read_rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


class TestConfig:
    def test_unknown_key_is_an_error(self, tmp_path):
        path = write_config(tmp_path, optimizer="bfgs", warp_factor="9")
        with pytest.raises(UsageError):
            parse_config(path)

    def test_seeds_default_to_ten(self):
        assert parse_seeds(None) == list(range(10))

    def test_seed_list_parsing(self):
        assert parse_seeds("3, 1,2") == [3, 1, 2]


class TestOptimize:
    def test_sphere_bfgs_reference(self, tmp_path):
        config = {"function": "sphere", "dimension": "2", "optimizer": "bfgs",
                  "seeds": "0"}
        path = cmd_optimize(config, str(tmp_path))
        rows = read_rows(path)
        run_rows = [r for r in rows if r[0] == "run"]
        assert len(run_rows) == 1
        assert float(run_rows[0][3]) < 1e-10
        assert int(run_rows[0][4]) > 0

    def test_duplicate_seeds_give_identical_rows(self, tmp_path):
        config = {"function": "rastrigin", "dimension": "3",
                  "optimizer": "de_rand1_bin", "seeds": "1,1",
                  "max_generations": "25", "max_evals": "100000"}
        path = cmd_optimize(config, str(tmp_path))
        rows = [r for r in read_rows(path) if r[0] == "run"]
        assert rows[0][2:] == rows[1][2:]

    def test_unknown_function_rejected(self, tmp_path):
        with pytest.raises(UsageError):
            cmd_optimize({"function": "mystery"}, str(tmp_path))

    def test_unknown_optimizer_names_valid_set(self, tmp_path):
        with pytest.raises(UsageError) as excinfo:
            cmd_optimize(
                {"function": "sphere", "optimizer": "annealing"}, str(tmp_path)
            )
        assert "bfgs" in str(excinfo.value)
        assert "de_rand1_bin" in str(excinfo.value)

    def test_external_library_methods_flagged_unavailable(self, tmp_path):
        with pytest.raises(UsageError) as excinfo:
            cmd_optimize({"function": "sphere", "optimizer": "cobyla"}, str(tmp_path))
        assert "not available" in str(excinfo.value)


class TestCompare:
    def test_bfgs_three_seeds_collapse(self, tmp_path):
        config = {
            "molecule": fixture_path("h2_sto3g.fcidump"),
            "optimizer": "bfgs",
            "seeds": "0,1,2",
        }
        summary = cmd_compare(config, str(tmp_path))
        with open(summary) as fh:
            header = fh.readline().strip()
        assert header == SUMMARY_HEADER
        rows = read_rows(summary)[1:]
        assert len(rows) == 1
        method, evals_min, evals_max, evals_mean = rows[0][:4]
        assert method == "bfgs"
        assert evals_min == evals_max
        assert float(rows[0][4]) == float(rows[0][5])  # E_min == E_max

    def test_trace_files_and_schema(self, tmp_path):
        config = {
            "molecule": fixture_path("h2_sto3g.fcidump"),
            "optimizer": "bfgs",
            "seeds": "0",
        }
        cmd_compare(config, str(tmp_path))
        trace_path = os.path.join(str(tmp_path), "trace_bfgs_0.csv")
        rows = read_rows(trace_path)
        assert rows[0] == ["cum_evals", "scope", "macro_index", "e_sa", "e0", "e1"]
        scopes = {row[1] for row in rows[1:]}
        assert scopes == {"optimizer_step", "sa_oo_vqe_iteration"}
        # the three plot perspectives rebuild by filtering on scope alone
        macro_rows = [r for r in rows[1:] if r[1] == "sa_oo_vqe_iteration"]
        step_rows = [r for r in rows[1:] if r[1] == "optimizer_step"]
        assert macro_rows and step_rows
        assert [int(r[2]) for r in macro_rows] == list(range(1, len(macro_rows) + 1))
        cums = [int(r[0]) for r in rows[1:]]
        assert cums == sorted(cums)

    def test_summary_recomputes_from_per_seed_rows(self, tmp_path):
        config = {
            "molecule": fixture_path("h2_sto3g.fcidump"),
            "optimizer": "bfgs,de_rand1_bin",
            "seeds": "0,1",
            "max_evals": "400",
        }
        summary = cmd_compare(config, str(tmp_path))
        runs = read_rows(os.path.join(str(tmp_path), "runs.csv"))[1:]
        summaries = read_rows(summary)[1:]
        for row in summaries:
            method = row[0]
            seeds_rows = [r for r in runs if r[0] == method]
            evals = [int(r[5]) for r in seeds_rows]
            energies = [float(r[4]) for r in seeds_rows]
            assert int(row[1]) == min(evals)
            assert int(row[2]) == max(evals)
            assert float(row[3]) == pytest.approx(np.mean(evals))
            assert float(row[4]) == pytest.approx(min(energies))
            assert float(row[5]) == pytest.approx(max(energies))
            assert float(row[6]) == pytest.approx(np.mean(energies))

    def test_manifest_written(self, tmp_path):
        config = {
            "molecule": fixture_path("h2_sto3g.fcidump"),
            "optimizer": "bfgs",
            "seeds": "0",
        }
        cmd_compare(config, str(tmp_path))
        manifest = read_rows(os.path.join(str(tmp_path), "manifest.csv"))
        keys = {row[0] for row in manifest[1:]}
        assert {"mode", "methods", "seeds", "molecule"} <= keys

    def test_per_run_failures_recorded_and_rest_continue(self, tmp_path):
        # np=4 is too small for rand/2 index draws, so every de_rand2_bin run
        # fails while bfgs still completes and reaches the summary
        config = {
            "molecule": fixture_path("h2_sto3g.fcidump"),
            "optimizer": "bfgs,de_rand2_bin",
            "seeds": "0,1",
            "np": "4",
        }
        summary = cmd_compare(config, str(tmp_path))
        rows = read_rows(summary)[1:]
        assert [r[0] for r in rows] == ["bfgs"]
        failures = read_rows(os.path.join(str(tmp_path), "failures.csv"))
        assert failures[0] == ["method", "seed", "error"]
        assert {(r[0], r[1]) for r in failures[1:]} == {
            ("de_rand2_bin", "0"),
            ("de_rand2_bin", "1"),
        }


class TestScan:
    def test_savqe_weight_arithmetic(self, tmp_path, h2_scan_dir):
        config = {"molecule": h2_scan_dir, "optimizer": "bfgs"}
        path = cmd_scan(config, str(tmp_path), "savqe")
        rows = read_rows(path)[1:]
        assert len(rows) == 3
        for label, e0, e1, e_sa, mode, status in rows:
            assert status == "ok"
            assert mode == "savqe"
            assert float(e_sa) == pytest.approx(0.5 * (float(e0) + float(e1)))

    def test_saoo_not_above_savqe(self, tmp_path, h2_scan_dir):
        config = {"molecule": h2_scan_dir, "optimizer": "bfgs"}
        fixed = read_rows(cmd_scan(config, str(tmp_path), "savqe"))[1:]
        relaxed = read_rows(cmd_scan(config, str(tmp_path), "saoo"))[1:]
        for fixed_row, relaxed_row in zip(fixed, relaxed):
            assert relaxed_row[0] == fixed_row[0]
            assert float(relaxed_row[1]) <= float(fixed_row[1]) + 1e-8  # E0
            assert float(relaxed_row[3]) <= float(fixed_row[3]) + 1e-8  # E_SA

    def test_empty_directory_is_usage_error(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        with pytest.raises(UsageError):
            cmd_scan({"molecule": str(empty)}, str(tmp_path), "savqe")


class TestSingleCommands:
    def test_vqe_result_csv(self, tmp_path):
        config = {
            "molecule": fixture_path("h2_sto3g.fcidump"),
            "optimizer": "bfgs",
            "seeds": "0",
        }
        path = cmd_single(config, str(tmp_path), "savqe")
        rows = read_rows(path)
        assert rows[0] == [
            "method", "seed", "e0", "e1", "e_lo", "e_hi", "e_sa", "evaluations", "mode",
        ]
        assert rows[1][8] == "savqe"
        # lineage and sorted energies coincide here: no root flip on H2
        assert rows[1][2] == rows[1][4]


class TestCliExitCodes:
    def test_success_exit_zero(self, tmp_path):
        config = write_config(
            tmp_path,
            function="sphere",
            dimension="2",
            optimizer="bfgs",
            seeds="0",
        )
        assert main(["optimize", "--config", config, "--out", str(tmp_path)]) == 0

    def test_usage_error_exit_two(self, tmp_path):
        config = write_config(tmp_path, function="sphere", optimizer="nonsense")
        assert main(["optimize", "--config", config, "--out", str(tmp_path)]) == 2

    def test_unknown_config_key_exit_two(self, tmp_path):
        config = write_config(tmp_path, function="sphere", bogus="1")
        assert main(["optimize", "--config", config, "--out", str(tmp_path)]) == 2

    def test_missing_config_file_exit_two(self, tmp_path):
        assert main(["optimize", "--config", "/nonexistent.cfg"]) == 2

    def test_scan_mode_flag(self, tmp_path, h2_scan_dir):
        config = write_config(tmp_path, molecule=h2_scan_dir, optimizer="bfgs")
        code = main(
            ["scan", "--config", config, "--out", str(tmp_path), "--mode", "savqe"]
        )
        assert code == 0
        assert os.path.exists(os.path.join(str(tmp_path), "scan_savqe.csv"))

    def test_seeds_flag_overrides_config(self, tmp_path):
        config = write_config(
            tmp_path,
            function="sphere",
            dimension="2",
            optimizer="bfgs",
            seeds="0,1,2,3",
        )
        out = tmp_path / "out"
        assert (
            main(
                ["optimize", "--config", config, "--out", str(out), "--seeds", "5"]
            )
            == 0
        )
        rows = read_rows(os.path.join(str(out), "optimize.csv"))
        run_rows = [r for r in rows if r[0] == "run"]
        assert len(run_rows) == 1
        assert run_rows[0][2] == "5"
