"""Command line behavior: output schemas, exit codes, format equivalence."""
import json
import math

import pytest

from axxz.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out.rstrip("\n"), out.err


class TestEd:
    def test_two_sites_sum_to_zero(self, capsys):
        code, out, _ = run(capsys, "ed", "--n", "2")
        assert code == 0
        rows = [line.split(",") for line in out.splitlines()]
        assert len(rows) == 4
        assert abs(sum(float(r[1]) for r in rows)) < 1e-10

    def test_six_sites_ground_first(self, capsys):
        code, out, _ = run(capsys, "ed", "--n", "6")
        assert code == 0
        first = out.splitlines()[0].split(",")
        assert first[0] == "1"
        assert abs(float(first[1]) - (-6.4785)) < 1e-3
        assert first[2] in ("1", "-1")

    def test_formats_agree_exactly(self, capsys):
        _, csv_out, _ = run(capsys, "ed", "--n", "4")
        _, json_out, _ = run(capsys, "ed", "--n", "4", "--format", "json")
        doc = json.loads(json_out)
        csv_rows = [line.split(",") for line in csv_out.splitlines()]
        assert len(doc["levels"]) == len(csv_rows) == 16
        for rec, row in zip(doc["levels"], csv_rows):
            # repr round-trips, so both forms must parse to identical floats
            assert rec["energy"] == float(row[1])
            assert rec["parity"] == int(row[2])

    def test_capacity_exit_code(self, capsys):
        code, _, err = run(capsys, "ed", "--n", "20")
        assert code == 2
        assert "error" in err


class TestBae:
    def test_ground_energy(self, capsys, ed6):
        code, out, _ = run(capsys, "bae", "--n", "6", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["energy"] - ed6.eigenvalues[0]) < 1e-10
        assert doc["classified"] == "ground-like"
        assert len(doc["zeros"]) == 5

    def test_type_two_csv(self, capsys, ed6):
        code, out, _ = run(capsys, "bae", "--n", "6", "--pattern", "type_II",
                           "--position", "1")
        assert code == 0
        tail = dict(line.split(",", 1) for line in out.splitlines()[-4:])
        assert min(abs(ed6.eigenvalues - float(tail["energy"]))) < 1e-8
        assert tail["classified"] == "type_II"

    def test_type_one_needs_number(self, capsys):
        code, _, err = run(capsys, "bae", "--n", "6", "--pattern", "type_I")
        assert code == 2 and "--number" in err

    def test_odd_size_rejected(self, capsys):
        code, _, _ = run(capsys, "bae", "--n", "5")
        assert code == 2


class TestVerify:
    def test_homogeneous_all_ok(self, capsys):
        code, out, _ = run(capsys, "verify", "--n", "4")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 8
        assert all(line.endswith(",ok") for line in lines)

    def test_seeded_json(self, capsys):
        code, out, _ = run(capsys, "verify", "--n", "4", "--seed", "9",
                           "--levels", "3", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["ok"] and doc["seed"] == 9
        names = {c["name"] for c in doc["checks"]}
        assert "bilinear_identity" in names and "cubic_identity" in names

    def test_size_cap(self, capsys):
        code, _, _ = run(capsys, "verify", "--n", "10")
        assert code == 2


class TestThermo:
    def test_ground_energy_value(self, capsys):
        code, out, _ = run(capsys, "thermo", "--quantity", "eg")
        assert code == 0
        assert abs(float(out) - (3 - 3 * math.sqrt(3)) / 2) < 1e-12

    def test_dispersion_values(self, capsys):
        _, out1, _ = run(capsys, "thermo", "--quantity", "de1", "--alpha", "0")
        assert abs(float(out1) - 1.5 * math.sqrt(3)) < 1e-12
        _, out2, _ = run(capsys, "thermo", "--quantity", "de2", "--alpha", "0")
        assert abs(float(out2) - 3 * math.sqrt(6)) < 1e-12

    def test_density_grid(self, capsys):
        code, out, _ = run(capsys, "thermo", "--quantity", "rho")
        assert code == 0
        rows = [line.split(",") for line in out.splitlines()]
        assert len(rows) == 201
        mid = rows[100]
        assert abs(float(mid[0])) < 1e-12
        assert abs(float(mid[1]) - 3 * math.sqrt(2) / (2 * math.pi)) < 1e-12

    def test_drho2_atoms(self, capsys):
        code, out, _ = run(capsys, "thermo", "--quantity", "drho2",
                           "--alpha", "0.5", "--n", "32", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["atoms"] == [{"position": 0.5, "weight": -1 / 32}]

    def test_finite_size_needs_n(self, capsys):
        code, _, _ = run(capsys, "thermo", "--quantity", "drho1")
        assert code == 2


class TestScatter:
    def test_equal_rapidity_string(self, capsys):
        code, out, _ = run(capsys, "scatter", "--process", "I_I",
                           "--a1", "0", "--a2", "0")
        assert code == 0 and out == "1+0i"

    def test_json_value_unimodular(self, capsys):
        _, out, _ = run(capsys, "scatter", "--process", "I_II",
                        "--a1", "0.9", "--a2", "-0.4", "--format", "json")
        v = json.loads(out)["value"]
        assert abs(complex(v["re"], v["im"])) == pytest.approx(1.0, abs=1e-12)


class TestTable1:
    def test_bundled_fixture_passes(self, capsys):
        code, out, _ = run(capsys, "table1")
        assert code == 0
        lines = out.splitlines()
        assert lines[-1] == "summary,rows,32,failed,0"
        assert all(line.endswith(",OK") for line in lines[:-1])

    def test_threaded_run_matches(self, capsys, monkeypatch):
        _, serial, _ = run(capsys, "table1")
        monkeypatch.setenv("AXXZ_THREADS", "4")
        _, threaded, _ = run(capsys, "table1")
        assert serial == threaded

    def test_value_corruption_flagged(self, capsys, tmp_path, table_rows):
        import csv as csvmod

        from axxz.cli import _bundled_fixture

        src = list(csvmod.reader(open(_bundled_fixture())))
        src[3][11] = "-4.8000"  # recorded energy no longer matches its roots
        bad = tmp_path / "t.csv"
        with open(bad, "w", newline="") as fh:
            csvmod.writer(fh).writerows(src)
        code, out, _ = run(capsys, "table1", "--fixture", str(bad))
        assert code == 2
        assert any("FAIL" in line for line in out.splitlines())

    def test_structural_corruption_flagged(self, capsys, tmp_path):
        bad = tmp_path / "t.csv"
        bad.write_text("level,junk\n1,abc\n")
        code, out, _ = run(capsys, "table1", "--fixture", str(bad))
        assert code == 2
        assert "corrupted fixture" in out

    def test_missing_fixture_is_io_error(self, capsys, tmp_path):
        code, _, _ = run(capsys, "table1", "--fixture", str(tmp_path / "nope.csv"))
        assert code == 4


class TestOutput:
    def test_out_file_matches_stdout(self, capsys, tmp_path):
        _, stdout_text, _ = run(capsys, "thermo", "--quantity", "eg")
        dest = tmp_path / "eg.txt"
        code = main(["thermo", "--quantity", "eg", "--out", str(dest)])
        capsys.readouterr()
        assert code == 0
        assert dest.read_text().rstrip("\n") == stdout_text

    def test_unwritable_out_is_io_error(self, capsys, tmp_path):
        code, _, _ = run(capsys, "ed", "--n", "2", "--out",
                         str(tmp_path / "no" / "dir" / "x.csv"))
        assert code == 4

    def test_bad_thread_env(self, capsys, monkeypatch):
        monkeypatch.setenv("AXXZ_THREADS", "lots")
        code, _, err = run(capsys, "table1")
        assert code == 2 and "AXXZ_THREADS" in err

    def test_json_round_trip_is_exact(self, capsys):
        _, out, _ = run(capsys, "bae", "--n", "6", "--format", "json")
        doc = json.loads(out)
        assert json.loads(json.dumps(doc)) == doc
