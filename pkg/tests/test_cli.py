"""CLI surface: subcommand output schema, determinism, exit codes, caching
and configuration handling."""

import json

import pytest

from k3mahler.cli import main

SUBCOMMAND_KEYS = {"input", "value", "error_bound", "provenance"}


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestSchemas:
    def test_subcommand_schema(self, capsys):
        for argv in (["lattice", "--k", "18", "--json"],
                     ["ap", "--k", "6", "--pmax", "13", "--json",
                      "--cache-dir", ""],
                     ["coeffs", "--k", "6", "--nmax", "8", "--json"],
                     ["lvalue", "--k", "3", "--n-terms", "50000", "--json"],
                     ["mahler", "--k", "6", "--method", "mc",
                      "--samples", "2000", "--seed", "1", "--json"]):
            code, out = run(capsys, argv)
            assert code == 0
            doc = json.loads(out)
            assert set(doc) == SUBCOMMAND_KEYS, argv

    def test_verify_report_schema(self, capsys):
        code, out = run(capsys, ["verify", "--k", "0", "--json"])
        assert code == 0
        doc = json.loads(out)
        assert {"identity", "lhs", "rhs", "abs_diff", "tolerance", "pass",
                "subchecks", "k", "prec", "runtime_seconds"} <= set(doc)
        assert {"value", "method", "error_bound"} <= set(doc["lhs"])
        assert doc["pass"] is True

    def test_verify_subchecks_schema(self, capsys):
        code, out = run(capsys, ["verify", "--k", "6", "--json",
                                 "--pmax", "13", "--n-terms", "200000",
                                 "--cache-dir", ""])
        assert code == 0
        doc = json.loads(out)
        assert doc["pass"] is True
        names = [c["name"] for c in doc["subchecks"]]
        assert "eisenstein-kronecker-series" in names
        assert "A_p-vs-newform-level-24" in names
        for c in doc["subchecks"]:
            assert {"name", "pass", "provenance"} <= set(c)


class TestDeterminism:
    def test_byte_identical_reruns(self, capsys):
        argv = ["mahler", "--k", "6", "--method", "mc", "--samples", "5000",
                "--seed", "42", "--json"]
        _, out1 = run(capsys, argv)
        _, out2 = run(capsys, argv)
        assert out1 == out2

    def test_ap_deterministic_with_workers(self, capsys):
        _, a = run(capsys, ["ap", "--k", "18", "--pmax", "31", "--json",
                            "--cache-dir", "", "--workers", "1"])
        _, b = run(capsys, ["ap", "--k", "18", "--pmax", "31", "--json",
                            "--cache-dir", "", "--workers", "4"])
        assert a == b


class TestExitCodes:
    def test_usage_error_is_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["mahler", "--method", "nosuch", "--k", "6"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["verify"])  # --k missing
        assert exc.value.code == 2

    def test_pass_is_zero(self, capsys):
        code, _ = run(capsys, ["verify", "--k", "0"])
        assert code == 0

    def test_verification_failure_is_one(self, capsys):
        # an unreachable tolerance fails the run (quadrature cannot certify it)
        code = main(["verify", "--k", "0", "--tol", "1e-30"])
        capsys.readouterr()
        assert code == 1


class TestCacheAndConfig:
    def test_warm_cache_identical(self, capsys, tmp_path):
        argv = ["ap", "--k", "6", "--pmax", "31", "--json",
                "--cache-dir", str(tmp_path)]
        _, cold = run(capsys, argv)
        assert list(tmp_path.glob("ap_*.txt"))
        _, warm = run(capsys, argv)
        assert cold == warm

    def test_config_file_sets_cache_dir(self, capsys, tmp_path, monkeypatch):
        monkeypatch.delenv("K3MAHLER_CACHE_DIR", raising=False)
        cfg = tmp_path / "my.cfg"
        cache = tmp_path / "cachehere"
        cfg.write_text(f"# comment\ncache_dir = {cache}\nprec = 96\n")
        code, _ = run(capsys, ["--config", str(cfg), "ap", "--k", "6",
                               "--pmax", "7"])
        assert code == 0
        assert list(cache.glob("ap_*.txt"))

    def test_env_overrides_config(self, capsys, tmp_path, monkeypatch):
        cfg = tmp_path / "my.cfg"
        cfg.write_text(f"cache_dir = {tmp_path / 'fromcfg'}\n")
        envdir = tmp_path / "fromenv"
        monkeypatch.setenv("K3MAHLER_CACHE_DIR", str(envdir))
        code, _ = run(capsys, ["--config", str(cfg), "ap", "--k", "6",
                               "--pmax", "7"])
        assert code == 0
        assert list(envdir.glob("ap_*.txt"))
        assert not (tmp_path / "fromcfg").exists()


class TestHumanOutput:
    def test_lattice_text(self, capsys):
        code, out = run(capsys, ["lattice", "--k", "18"])
        assert code == 0
        assert "120" in out and "rank = 1" in out

    def test_height_text(self, capsys):
        code, out = run(capsys, ["height"])
        assert code == 0
        assert "h(p_sigma) = 10" in out

    def test_mc_text(self, capsys):
        code, out = run(capsys, ["mahler", "--k", "6", "--method", "mc",
                                 "--samples", "2000", "--seed", "7"])
        assert code == 0
        assert "+-" in out
