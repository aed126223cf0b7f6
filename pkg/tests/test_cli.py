import json

import pytest

from siegelsums import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    assert code == 0, out
    return json.loads(out)


class TestSubcommands:
    def test_kloosterman_pinned(self, capsys):
        rec = run_json(capsys, "kloosterman", "--q", "1,0,1", "--t", "1,0,1",
                       "--c", "3,0;0,3")
        assert abs(rec["value"]["re"] - 15.0) < 1e-9
        assert abs(rec["value"]["im"]) < 1e-9
        assert rec["terms"] == 18 and rec["method"] == "brute"
        assert rec["params"] == {"q": [1, 0, 1], "t": [1, 0, 1],
                                 "c": [3, 0, 0, 3]}

    def test_twisted(self, capsys):
        rec = run_json(capsys, "twisted", "--c", "1,1;-1,1",
                       "--q1", "1", "--q2", "1")
        assert abs(rec["value"]["re"] - 4.0) < 1e-9

    def test_salie(self, capsys):
        rec = run_json(capsys, "salie", "--p", "1,0,1", "--s", "1,0,2",
                       "--c", "3", "--sign", "+")
        assert rec["value"] == {"re": 0.0, "im": 0.0} and rec["terms"] == 0

    def test_gauss(self, capsys):
        rec = run_json(capsys, "gauss", "--a", "1", "--b", "0", "--c", "3")
        assert abs(rec["value"]["im"] - 3 ** 0.5) < 1e-12

    def test_count(self, capsys):
        rec = run_json(capsys, "count", "--n", "3", "--c1", "1", "--c2", "0",
                       "--c4", "1", "--h1", "0", "--h2", "0")
        assert rec["value"]["re"] == 8.0  # N^2 - 1 for N = 3

    def test_weight_and_kernel(self, capsys):
        rec = run_json(capsys, "weight", "--x", "100", "--k", "10")
        assert abs(rec["value"]["re"]) < 1e-6
        rec = run_json(capsys, "besselkernel", "--ell", "8.5",
                       "--eig1", "1", "--eig2", "1")
        assert rec["method"] == "quadrature"

    def test_rcoeff_lvalue(self, capsys):
        rec = run_json(capsys, "rcoeff", "--q", "1", "--n", "5")
        assert abs(rec["value"]["re"] - 2 / 5 ** 0.5) < 1e-12
        rec = run_json(capsys, "lvalue", "--s", "1", "--q", "-4")
        assert abs(rec["value"]["re"] - 0.7853981633974483) < 1e-12

    def test_mainterm_and_fit(self, capsys):
        rec = run_json(capsys, "mainterm", "--q1", "5", "--q2", "13",
                       "--bign", "1000", "--k", "10")
        assert rec["method"] == "contour"
        rec = run_json(capsys, "fit", "--q1", "1", "--q2", "1", "--k", "10")
        assert abs(rec["value"]["re"] - 0.8224670334) < 1e-6
        assert len(rec["coefficients"]) == 4

    def test_fit_csv(self, capsys):
        code, out = run_cli(capsys, "--format", "csv", "fit", "--q1", "5",
                            "--q2", "13", "--k", "10", "--ns", "100,1000")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "N,residue" and len(lines) == 3

    def test_hqt(self, capsys):
        rec = run_json(capsys, "hqt", "--q", "1,0,1", "--t", "1,0,1",
                       "--n", "3", "--k", "10")
        assert abs(rec["value"]["re"] - 8.0) < 1.0
        assert "tail_bound" in rec and rec["tail_bound"] >= 0

    def test_verify_ok(self, capsys):
        code, out = run_cli(capsys, "verify", "--module", "expsums")
        assert code == 0
        rec = json.loads(out)
        assert rec["failures"] == []


class TestErrors:
    def test_malformed_matrix_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["kloosterman", "--q", "1,0,1", "--t", "1,0,1",
                      "--c", "garbage"])
        assert exc.value.code == 2

    def test_unknown_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == 2

    def test_runtime_error_exits_1(self, capsys):
        code = cli.main(["twisted", "--c", "1,2;3,4", "--q1", "1", "--q2", "1"])
        assert code == 1
        assert "error" in capsys.readouterr().err


class TestDeterminism:
    def test_byte_identical_across_threads(self, capsys):
        outs = []
        for threads in ("1", "8"):
            _, out = run_cli(capsys, "--threads", threads, "kloosterman",
                             "--q", "2,1,3", "--t", "1,-1,2", "--c", "5,0;0,5")
            outs.append(out)
        assert outs[0] == outs[1]

    def test_repeat_run_stable(self, capsys):
        args = ("mainterm", "--q1", "1", "--q2", "1", "--bign", "1000",
                "--k", "10")
        _, out1 = run_cli(capsys, *args)
        _, out2 = run_cli(capsys, *args)
        assert out1 == out2
