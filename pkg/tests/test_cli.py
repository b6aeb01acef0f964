import json
import os

import pytest

from denselab.cli import main


def run_cli(args):
    return main(args)


def read_out(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestBoundsTable:
    def test_header_and_rows(self, tmp_path):
        out = tmp_path / "b.csv"
        rc = run_cli([
            "bounds-table", "--out", str(out), "--k-grid", "256,1024",
            "--bounds", "thm1,thm3", "--links", "2", "--success-prob", "0.8",
            "--seed", "7",
        ])
        assert rc == 0
        text = read_out(out).decode()
        lines = text.splitlines()
        assert lines[0].startswith("# denselab ")
        assert lines[1] == "# seed 7"
        assert lines[2].startswith("# config ")
        header = lines[3].split(",")
        assert header[0] == "bound_id" and "value" in header
        assert sum(1 for ln in lines[4:] if ln.startswith("thm1")) == 2

    def test_monotone_in_k(self, tmp_path):
        out = tmp_path / "b.csv"
        run_cli(["bounds-table", "--out", str(out), "--k-grid", "256,512,1024,2048",
                 "--bounds", "thm3", "--links", "2", "--success-prob", "0.8"])
        rows = [ln.split(",") for ln in read_out(out).decode().splitlines()[4:]]
        vals = [float(r[10]) for r in rows]
        assert vals == sorted(vals)

    def test_lemma_rows(self, tmp_path):
        out = tmp_path / "b.csv"
        rc = run_cli(["bounds-table", "--out", str(out),
                      "--bounds", "lemma5,lemma9,lemma10,lemma11",
                      "--links", "2", "--horizon", "4096", "--success-prob", "0.8"])
        assert rc == 0
        body = read_out(out).decode()
        for lemma in ("lemma5", "lemma9", "lemma10", "lemma11"):
            assert lemma in body

    def test_unknown_bound_errors(self, tmp_path):
        rc = run_cli(["bounds-table", "--out", str(tmp_path / "x.csv"), "--bounds", "thm7"])
        assert rc == 2


class TestValidateLemmas:
    def test_quick_grid_passes(self, tmp_path):
        out = tmp_path / "v.csv"
        rc = run_cli(["validate-lemmas", "--preset", "quick", "--trials", "3000",
                      "--seed", "5", "--out", str(out)])
        assert rc == 0
        lines = read_out(out).decode().splitlines()
        rows = [ln.split(",") for ln in lines[4:]]
        assert all(r[-1] == "pass" for r in rows)
        # exact oracle column filled for these tiny specs
        assert all(r[6] != "-" for r in rows)

    def test_trials_zero_rejected(self, tmp_path):
        rc = run_cli(["validate-lemmas", "--preset", "quick", "--trials", "0",
                      "--out", str(tmp_path / "v.csv")])
        assert rc == 2

    def test_byte_identical_across_workers(self, tmp_path):
        outs = []
        for i, workers in enumerate((1, 2)):
            out = tmp_path / f"v{i}.csv"
            rc = run_cli(["validate-lemmas", "--preset", "quick", "--trials", "2000",
                          "--seed", "11", "--workers", str(workers), "--out", str(out)])
            assert rc == 0
            outs.append(read_out(out))
        assert outs[0] == outs[1]


class TestSimulate:
    def test_lossless_cell_passes_thm1(self, tmp_path):
        out = tmp_path / "s.csv"
        rc = run_cli(["simulate", "--links", "2", "--messages", "32", "--epsilon", "0.1",
                      "--trials", "300", "--seed", "3", "--out", str(out)])
        assert rc == 0
        lines = read_out(out).decode().splitlines()
        header = lines[3].split(",")
        assert header == ["k", "L", "schedule", "loss", "p_or_lambda", "epsilon", "mode",
                          "samples", "point", "upper_ci", "timeouts", "bound_id",
                          "bound_value", "slack", "verdict"]
        row = dict(zip(header, lines[4].split(",")))
        assert row["bound_id"] == "thm1" and row["verdict"] == "pass"
        assert float(row["point"]) <= float(row["bound_value"])

    def test_invalid_cell_fails_in_assert_mode(self, tmp_path):
        rc = run_cli(["simulate", "--links", "2", "--messages", "64", "--horizon", "10",
                      "--epsilon", "0.1", "--trials", "100", "--out", str(tmp_path / "s.csv")])
        assert rc == 1
        rc = run_cli(["simulate", "--links", "2", "--messages", "64", "--horizon", "10",
                      "--epsilon", "0.1", "--trials", "100", "--report-only",
                      "--out", str(tmp_path / "s2.csv")])
        assert rc == 0

    def test_record_then_replay_identical(self, tmp_path):
        rec = tmp_path / "sidecars"
        args = ["simulate", "--links", "2", "--messages", "16", "--loss", "bernoulli",
                "--success-prob", "0.8", "--epsilon", "0.1", "--trials", "120",
                "--seed", "21"]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run_cli(args + ["--record-traffic", str(rec), "--out", str(out1)]) == 0
        assert len(list(rec.iterdir())) == 120
        assert run_cli(args + ["--replay-traffic", str(rec), "--out", str(out2)]) == 0
        assert read_out(out1) == read_out(out2)

    def test_byte_identical_across_workers(self, tmp_path):
        outs = []
        for i, workers in enumerate(("1", "4")):
            out = tmp_path / f"s{i}.csv"
            rc = run_cli(["simulate", "--links", "2", "--messages", "24", "--loss",
                          "bernoulli", "--success-prob", "0.7", "--epsilon", "0.1",
                          "--trials", "150", "--seed", "13", "--workers", workers,
                          "--mode", "both", "--codes", "50", "--traffics-per-code", "3",
                          "--out", str(out)])
            assert rc == 0
            outs.append(read_out(out))
        assert outs[0] == outs[1]

    def test_export_trace(self, tmp_path):
        out = tmp_path / "s.csv"
        trace_path = tmp_path / "trace.csv"
        rc = run_cli(["simulate", "--links", "2", "--messages", "8", "--epsilon", "0.25",
                      "--trials", "40", "--export-trace", str(trace_path), "--out", str(out)])
        assert rc == 0
        lines = read_out(trace_path).decode().splitlines()
        assert lines[3].split(",") == ["time", "link", "sink_rank", "density_1", "density_2"]
        assert len(lines) > 4

    def test_poisson_mode(self, tmp_path):
        out = tmp_path / "p.csv"
        rc = run_cli(["simulate", "--links", "2", "--messages", "16", "--schedule", "poisson",
                      "--rate", "0.5,0.8", "--epsilon", "0.1", "--trials", "120",
                      "--report-only", "--out", str(out)])
        assert rc == 0
        body = read_out(out).decode()
        assert "lambda=0.5;0.8" in body


class TestCompareCommand:
    def test_all_applicable_bounds_reported(self, tmp_path):
        out = tmp_path / "c.csv"
        rc = run_cli(["compare", "--links", "2", "--messages", "24", "--loss", "bernoulli",
                      "--success-prob", "0.8", "--epsilon", "0.1", "--trials", "120",
                      "--codes", "40", "--traffics-per-code", "3", "--out", str(out)])
        assert rc == 0
        body = read_out(out).decode()
        assert "thm2" in body and "thm3" in body
        rows = [ln.split(",") for ln in body.splitlines()[4:]]
        assert all(r[-1] == "report" for r in rows)

    def test_assert_bounds_selected(self, tmp_path):
        out = tmp_path / "c.csv"
        rc = run_cli(["compare", "--links", "2", "--messages", "24", "--loss", "bernoulli",
                      "--success-prob", "0.8", "--epsilon", "0.1", "--trials", "120",
                      "--codes", "40", "--traffics-per-code", "3",
                      "--assert-bounds", "thm3", "--bound-scale", "1.2", "--out", str(out)])
        assert rc == 0
        rows = [ln.split(",") for ln in read_out(out).decode().splitlines()[4:]]
        verdicts = {r[11]: r[14] for r in rows}
        assert verdicts["thm3"] == "pass"
        assert verdicts["thm2"] == "report"


class TestConfigResolution:
    def test_file_env_flag_precedence(self, tmp_path, monkeypatch):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps({
            "command": "bounds-table", "k_grid": "128", "links": 4, "epsilon": 0.5,
        }))
        out = tmp_path / "o.csv"
        monkeypatch.setenv("DENSELAB_EPSILON", "0.25")
        rc = run_cli(["bounds-table", "--config", str(cfg_file), "--bounds", "thm1",
                      "--links", "3", "--out", str(out)])
        assert rc == 0
        header_cfg = json.loads(read_out(out).decode().splitlines()[2][len("# config "):])
        assert header_cfg["links"] == 3        # flag beats file
        assert header_cfg["epsilon"] == 0.25   # env beats file
        assert header_cfg["k_grid"] == "128"   # file beats default

    def test_wrong_command_in_file(self, tmp_path):
        cfg_file = tmp_path / "cfg.json"
        cfg_file.write_text(json.dumps({"command": "simulate"}))
        rc = run_cli(["bounds-table", "--config", str(cfg_file), "--out", "-"])
        assert rc == 2

    def test_workers_not_in_header(self, tmp_path):
        out = tmp_path / "o.csv"
        run_cli(["bounds-table", "--bounds", "thm1", "--workers", "4", "--out", str(out)])
        header_cfg = json.loads(read_out(out).decode().splitlines()[2][len("# config "):])
        assert "workers" not in header_cfg and "out" not in header_cfg
