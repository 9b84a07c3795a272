"""Command-line interface: subcommands, exit codes, JSON mode, determinism."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from hadperm.cli import main
from hadperm.torus import format_phm, fourier

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCheck:
    def test_fourier_passes(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "f4.phm")
        assert code == 0
        assert "partial_hadamard: true" in out

    def test_not_orthogonal_fails_naming_pair(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "not_orthogonal.phm")
        assert code == 1
        assert "partial_hadamard: false" in out
        assert "worst_pair: [1, 2]" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "f2.phm", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["ok"] is True
        assert payload["rows"] == 2


class TestCount:
    def test_count_four(self, capsys):
        code, out, _ = run(capsys, "count", "4")
        assert code == 0
        assert out.strip() == "209"

    def test_count_json(self, capsys):
        code, out, _ = run(capsys, "count", "6", "--json")
        assert json.loads(out)["count"] == 13327


class TestEnumerate:
    def test_two(self, capsys):
        code, out, _ = run(capsys, "enumerate", "2")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 7
        assert lines[0] == "2: _ _"

    def test_limit(self, capsys):
        code, _, err = run(capsys, "enumerate", "9")
        assert code == 2
        assert "limit" in err


class TestFourierAndTensor:
    def test_fourier_output(self, capsys):
        code, out, _ = run(capsys, "fourier", "2", "2")
        assert code == 0
        assert out == format_phm(fourier([2, 2]))

    def test_tensor_matches_fourier(self, capsys, tmp_path):
        code, out_f, _ = run(capsys, "tensor", DATA / "f2.phm", DATA / "f3.phm")
        assert code == 0
        assert out_f == format_phm(fourier([2, 3]))


class TestCompleteRow:
    def test_f3_top2(self, capsys):
        code, out, _ = run(capsys, "complete-row", DATA / "f3_top2.phm")
        assert code == 0
        assert out.startswith("phm v1\n3 3\n")
        # first two rows preserved exactly
        assert "1 1/3 2/3" in out

    def test_not_completable_exit_code(self, capsys, tmp_path):
        # perturb one phase of the shipped instance
        import numpy as np

        from hadperm.torus import TorusMatrix, read_phm, write_phm

        h = read_phm(DATA / "f3_top2.phm")
        a = h.to_complex().copy()
        a[1, 1] *= np.exp(0.05j)
        bad = tmp_path / "bad.phm"
        write_phm(bad, TorusMatrix.from_complex(a))
        code, _, err = run(capsys, "complete-row", bad, "--tol", "1e-8")
        assert code == 1
        assert "constant" in err


class TestGrid:
    def test_m2_family_reports_semigroup(self, capsys):
        code, out, _ = run(capsys, "grid", DATA / "m2_family.phm")
        assert code == 0
        assert "commuting: true" in out
        assert "semigroup_order: 6" in out
        assert "pre_latin:" in out

    def test_non_commuting_grid_has_no_square(self, capsys, tmp_path):
        import numpy as np

        from hadperm.torus import TorusMatrix, write_phm

        values = np.array([1, np.exp(0.7j), -1, -np.exp(0.7j)])
        h = TorusMatrix.from_complex(np.vstack([np.ones(4), values]))
        path = tmp_path / "noncomm.phm"
        write_phm(path, h)
        code, out, _ = run(capsys, "grid", path)
        assert code == 0
        assert "commuting: false" in out
        assert "pre_latin" not in out

    def test_not_hadamard_exit_code(self, capsys):
        code, _, err = run(capsys, "grid", DATA / "not_orthogonal.phm")
        assert code == 1


class TestCompleteGrid:
    def test_pq_counterexample_to_three_fails(self, capsys):
        code, _, err = run(capsys, "complete-grid", DATA / "pq_counterexample.pgrid")
        assert code == 1
        assert "projection" in err

    def test_pq_counterexample_to_four(self, capsys):
        code, out, _ = run(
            capsys, "complete-grid", DATA / "pq_counterexample.pgrid", "--target", "4"
        )
        assert code == 0
        assert out.startswith("pgrid v1\n4 2\n")

    def test_phm_input_border_completion(self, capsys):
        code, out, _ = run(capsys, "complete-grid", DATA / "f3_top2.phm")
        assert code == 0
        assert out.startswith("pgrid v1\n3 3\n")

    def test_commuting_completion(self, capsys):
        code, out, _ = run(
            capsys, "complete-grid", DATA / "m2_family.phm", "--target", "4"
        )
        assert code == 0
        assert out.startswith("pgrid v1\n4 4\n")


class TestCriteria:
    def test_f3_top2_all_pass(self, capsys):
        code, out, _ = run(capsys, "criteria", DATA / "f3_top2.phm")
        assert code == 0
        assert "agree: true" in out
        assert "complete_last: true" in out

    def test_json_keys(self, capsys):
        code, out, _ = run(capsys, "criteria", DATA / "f3_top2.phm", "--json")
        payload = json.loads(out)
        assert payload["modulus_constant"] is True
        assert payload["gram_criterion"] is True
        assert payload["weighted_criterion"] is True
        assert payload["complete_last"] is True
        assert payload["agree"] is True


class TestSemigroup:
    def test_from_pls(self, capsys, tmp_path):
        path = tmp_path / "square.pls"
        path.write_text("pls v1\n2 3\n1 2\n3 1\n")
        code, out, _ = run(capsys, "semigroup", path)
        assert code == 0
        assert out.splitlines()[0] == "semigroup 2 6"


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ("grid", str(DATA / "m2_family.phm"), "--json"),
            ("criteria", str(DATA / "f3_top2.phm"), "--json"),
            ("enumerate", "3"),
        ],
    )
    def test_byte_identical_reports(self, capsys, argv):
        code_a, out_a, _ = run(capsys, *argv)
        code_b, out_b, _ = run(capsys, *argv)
        assert code_a == code_b
        assert out_a == out_b


class TestUsage:
    def test_unknown_flag_rejected(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["count", "4", "--bogus"])
        assert exc.value.code == 2

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "check", "no-such-file.phm")
        assert code == 2

    def test_bad_format(self, capsys, tmp_path):
        path = tmp_path / "bad.phm"
        path.write_text("not a phm file\n")
        code, _, err = run(capsys, "check", path)
        assert code == 2


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "hadperm.cli", "count", "3"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.strip() == "34"
