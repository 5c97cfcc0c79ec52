"""Command-line behaviors: outputs, exit codes, determinism."""

import pytest

from gausslaw import lattice
from gausslaw.circuit import from_text
from gausslaw.cli import main
from gausslaw.lattice import GaugeGroup, assignment_to_text, make_spec, uniform_assignment


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestBuild:
    def test_writes_parseable_circuit(self, tmp_path, capsys):
        path = tmp_path / "oracle.txt"
        code, out, _ = run(capsys, "build", "--dim", "1", "--n", "2",
                           "--group", "u1", "--matter", "dirac", "--out", str(path))
        assert code == 0
        assert "wires:" in out
        circ = from_text(path.read_text())
        names = [name for name, _ in circ.registers]
        assert "h" in names and "q" in names
        kinds = {g.kind for g in circ.gates}
        assert "MULTICZ" in kinds and "TOFFOLI" in kinds and "MEASURE" in kinds

    def test_z2n_has_no_overflow_wires(self, tmp_path, capsys):
        path = tmp_path / "oracle.txt"
        code, _, _ = run(capsys, "build", "--dim", "2", "--n", "1",
                         "--group", "z2n", "--matter", "none", "--out", str(path))
        assert code == 0
        names = [name for name, _ in from_text(path.read_text()).registers]
        assert not any(name.startswith("h") for name in names)

    def test_unsupported_dimension_is_usage_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            run(capsys, "build", "--dim", "4", "--n", "1", "--out", str(tmp_path / "x"))
        assert exc.value.code == 1

    def test_byte_identical_reruns(self, tmp_path, capsys):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        run(capsys, "build", "--dim", "2", "--n", "2", "--out", str(a))
        run(capsys, "build", "--dim", "2", "--n", "2", "--out", str(b))
        assert a.read_bytes() == b.read_bytes()


class TestCheck:
    def test_exhaustive_summary(self, capsys):
        code, out, _ = run(capsys, "check", "--dim", "1", "--n", "2", "--exhaustive")
        assert code == 0
        assert "64/64 verdicts correct" in out
        assert "restoration: ok" in out

    def test_budget_guard(self, capsys):
        code, _, err = run(capsys, "check", "--dim", "3", "--n", "4", "--exhaustive")
        assert code == 2
        assert "budget" in err

    def test_physical_state_file(self, tmp_path, capsys):
        spec = make_spec(1, 2, extent=(4,))
        path = tmp_path / "state.txt"
        path.write_text(assignment_to_text(uniform_assignment(spec, 2)))
        code, out, _ = run(capsys, "check", "--state", str(path))
        assert code == 0
        assert "verdict: physical" in out

    def test_flipped_link_goes_unphysical(self, tmp_path, capsys):
        spec = make_spec(1, 2, extent=(4,))
        a = uniform_assignment(spec, 2)
        a.links[(1, 1)] += 1
        path = tmp_path / "state.txt"
        path.write_text(assignment_to_text(a))
        code, out, _ = run(capsys, "check", "--state", str(path))
        assert code == 0
        assert "verdict: unphysical" in out
        assert "site 1: unphysical" in out and "site 2: unphysical" in out

    def test_pair_with_flux_string_physical(self, tmp_path, capsys):
        spec = make_spec(1, 2, extent=(4,))
        a = uniform_assignment(spec, 2)
        a.occ[(1, "p")] = 1
        a.occ[(3, "nu")] = 1
        a.links[(1, 1)] += 1
        a.links[(2, 1)] += 1
        path = tmp_path / "state.txt"
        path.write_text(assignment_to_text(a))
        code, out, _ = run(capsys, "check", "--state", str(path))
        assert code == 0 and "verdict: physical" in out

    def test_needs_a_mode(self, capsys):
        code, _, err = run(capsys, "check", "--dim", "1", "--n", "1")
        assert code == 2 and "exhaustive" in err


class TestSimulate:
    def test_physical_file_flips(self, tmp_path, capsys):
        spec = make_spec(1, 1, extent=(3,))
        path = tmp_path / "state.txt"
        path.write_text(assignment_to_text(uniform_assignment(spec, 1)))
        code, out, _ = run(capsys, "simulate", "--dim", "1", "--n", "1",
                           "--state", str(path), "--site", "1", "--seed", "3")
        assert code == 0
        assert "flipped (physical)" in out
        assert "seed: 3" in out

    def test_dump_written(self, tmp_path, capsys):
        dump = tmp_path / "post.txt"
        code, _, _ = run(capsys, "simulate", "--dim", "1", "--n", "1", "--dump", str(dump))
        assert code == 0
        text = dump.read_text().strip()
        assert len(text.splitlines()) == 1  # a basis state stays a basis state


class TestResources:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "resources", "--dim", "1", "--n", "2")
        assert code == 0
        assert "T count (MultiCZ excluded): 32" in out

    @pytest.mark.parametrize("dim,slope", [(1, 16), (2, 32), (3, 64)])
    def test_sweep_slopes(self, capsys, dim, slope):
        code, out, _ = run(capsys, "resources", "--dim", str(dim), "--n", "1",
                           "--sweep", "1..4")
        assert code == 0
        assert f"= {slope}*n +" in out

    def test_bad_sweep(self, capsys):
        code, _, err = run(capsys, "resources", "--dim", "1", "--n", "1", "--sweep", "x")
        assert code == 2 and "sweep" in err


class TestTrotter:
    def test_n1_csv_gauge_safe(self, tmp_path, capsys):
        out_csv = tmp_path / "leak.csv"
        code, out, _ = run(capsys, "trotter", "--nph", "1", "--n", "1",
                           "--dt-list", "0.01,0.1", "--steps", "2", "--out", str(out_csv))
        assert code == 0
        lines = out_csv.read_text().strip().splitlines()
        assert lines[0] == "dt,steps,leakage"
        assert len(lines) == 3
        for line in lines[1:]:
            assert float(line.split(",")[2]) <= 1e-12

    def test_zero_steps(self, tmp_path, capsys):
        out_csv = tmp_path / "leak.csv"
        code, _, _ = run(capsys, "trotter", "--nph", "1", "--n", "2",
                         "--dt-list", "0.1", "--steps", "0", "--out", str(out_csv))
        assert code == 0
        assert out_csv.read_text().strip().splitlines()[1].split(",")[2] == "0"

    def test_n2_slope_printed(self, tmp_path, capsys):
        out_csv = tmp_path / "leak.csv"
        code, out, _ = run(capsys, "trotter", "--nph", "1", "--n", "2",
                           "--dt-list", "0.001,0.01,0.1", "--steps", "1",
                           "--out", str(out_csv))
        assert code == 0
        slope_line = [ln for ln in out.splitlines() if ln.startswith("log-log slope")][0]
        assert abs(float(slope_line.split(":")[1]) - 4.0) < 0.3

    def test_byte_identical_reruns(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            run(capsys, "trotter", "--nph", "1", "--n", "2",
                "--dt-list", "0.02,0.2", "--steps", "1", "--out", str(path))
        assert a.read_bytes() == b.read_bytes()

    def test_budget_guard(self, tmp_path, capsys):
        code, _, err = run(capsys, "trotter", "--nph", "5", "--n", "2",
                           "--dt-list", "0.1", "--steps", "1",
                           "--out", str(tmp_path / "x.csv"))
        assert code == 2 and "budget" in err


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
