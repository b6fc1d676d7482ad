"""Census report assembly, emission formats, and the command line surface.

Every CLI test drives graycensus.cli.main in process so exit codes,
stdout, and stderr stay observable without subprocesses.
"""

import json

import pytest

from graycensus import cli as cli_mod
from graycensus import cube
from graycensus.cli import (
    EXIT_CONSISTENCY,
    EXIT_OK,
    EXIT_RESOURCE,
    EXIT_USAGE,
    PROVENANCE_COMPUTED,
    PROVENANCE_PAPER,
    census_table,
    emit,
    run_census,
)

from oracles import find_two_cycle_decomposition_q4

H4_FACTORIZATION = "2^6 * 3 * 7"
H6_FACTORIZATION = "2^8 * 3^2 * 5 * 217199 * 1085989 * 5429923"
H6_REFERENCE = 14754666508334433250560


@pytest.fixture(scope="session")
def report4():
    return run_census(4)


@pytest.fixture(scope="session")
def report2():
    return run_census(2)


@pytest.fixture(scope="session")
def report6():
    # Non-extended: the 6-dimensional counts come from stored references.
    return run_census(6)


class TestRunCensus:
    def test_four_dimensional_values(self, report4):
        assert report4.n == 4
        assert report4.field("H").value == 1344
        assert report4.field("OH").value == 2688
        assert report4.field("EH").value == 112
        assert report4.field("M").value == 272
        assert report4.field("M2").value == 272 * 272
        assert report4.field("Aut").value == 9
        assert report4.field("Weight").value == 4

    def test_four_dimensional_all_computed(self, report4):
        assert all(f.provenance == PROVENANCE_COMPUTED for f in report4.fields)
        assert report4.h_factorization == H4_FACTORIZATION

    def test_four_dimensional_checks_pass(self, report4):
        assert report4.all_checks_pass
        names = [name for name, _, _ in report4.checks]
        # Every cross-check applies at this scale.
        assert names == [
            "directed_count",
            "relabeled_count",
            "half_factorial_divisibility",
            "factorization_recombines",
            "odd_prime_divisors",
            "matching_square",
            "cycle_matching_bound",
            "class_count_monotonicity",
            "orbit_sizes_sum",
        ]

    def test_bound_rows(self, report4):
        names = [b.name for b in report4.bound_rows]
        assert names == ["a_n", "b_n", "knuth"]
        assert all(b.o_term == 0.0 for b in report4.bound_rows)

    def test_two_dimensional_values(self, report2):
        assert report2.field("H").value == 1
        assert report2.field("OH").value == 2
        assert report2.field("EH").value == 1
        assert report2.field("M").value == 2
        assert report2.field("M2").value == 4
        assert report2.field("Aut").value == 1
        assert report2.field("Weight").value == 1
        assert report2.all_checks_pass
        # The odd-prime-divisor identity starts at n = 3.
        assert "odd_prime_divisors" not in [n for n, _, _ in report2.checks]

    def test_six_dimensional_reference_values(self, report6):
        assert report6.field("H").value == H6_REFERENCE
        assert report6.field("H").provenance == PROVENANCE_PAPER
        assert report6.field("M").value is None
        assert report6.field("M2").value == pytest.approx(2.667e26)
        assert report6.field("M2").provenance == PROVENANCE_PAPER
        assert report6.field("Aut").value == 147365405634413085
        assert report6.field("Weight").value == 550
        assert report6.field("Aut").provenance == PROVENANCE_PAPER
        assert report6.h_factorization == H6_FACTORIZATION
        assert report6.all_checks_pass

    def test_six_dimensional_derived_counts_still_computed(self, report6):
        # Directed and relabeled variants derive from the stored count.
        assert report6.field("OH").value == 2 * H6_REFERENCE
        assert report6.field("EH").value == H6_REFERENCE // 360

    def test_unknown_field_raises(self, report4):
        with pytest.raises(KeyError):
            report4.field("Z")

    def test_rejects_out_of_range_dimension(self):
        with pytest.raises(ValueError):
            run_census(1)
        with pytest.raises(ValueError):
            run_census(7)


class TestEmission:
    def test_json_fields(self, report4):
        doc = json.loads(emit(report4, "json"))
        assert doc["n"] == 4
        assert doc["values"]["H"] == "1344"
        assert doc["values"]["M2"] == "73984"
        assert doc["provenance"]["H"] == "computed"
        assert doc["H_factorization"] == H4_FACTORIZATION
        assert all(entry["ok"] for entry in doc["checks"])
        assert [b["name"] for b in doc["bounds"]] == ["a_n", "b_n", "knuth"]

    def test_json_counts_are_decimal_strings(self, report6):
        # Exact counts overflow 64-bit JSON consumers; emit as strings.
        raw = emit(report6, "json")
        assert b'"H":"14754666508334433250560"' in raw
        doc = json.loads(raw)
        assert isinstance(doc["values"]["H"], str)
        assert doc["values"]["M"] is None
        assert isinstance(doc["values"]["M2"], float)

    def test_json_deterministic(self, report4):
        assert emit(report4, "json") == emit(report4, "json")

    def test_csv_layout(self, report4):
        lines = emit(report4, "csv").decode().splitlines()
        assert lines[0] == "name,value,provenance"
        assert "H,1344,computed" in lines
        assert "M2,73984,computed" in lines
        assert f"H_factorization,{H4_FACTORIZATION},computed" in lines
        assert "check:directed_count,pass,computed" in lines
        assert any(line.startswith("bound:a_n,") for line in lines)

    def test_table_layout(self, report4):
        text = emit(report4, "table").decode()
        lines = text.splitlines()
        assert lines[0].split() == ["n", "H_n", "M_n^2", "M_n^2_rounded",
                                    "Aut_n", "Weight_n"]
        assert lines[1].split() == ["4", "1344", "73984", "7.398e+04", "9", "4"]
        assert any(line.startswith("provenance: ") for line in lines)
        assert "checks: all pass" in lines

    def test_table_six_dimensional_rounding(self, report6):
        lines = emit(report6, "table").decode().splitlines()
        row = lines[1].split()
        assert row[0] == "6"
        assert row[1] == str(H6_REFERENCE)
        # No exact square at this scale, only the stored rounding.
        assert row[2] == "-"
        assert row[3] == "2.667e+26"

    def test_unknown_format_rejected(self, report4):
        with pytest.raises(ValueError):
            emit(report4, "yaml")

    def test_multi_row_table(self, report2, report4):
        report3 = run_census(3)
        text = census_table([report2, report3, report4])
        lines = text.splitlines()
        assert lines[0].split() == ["n", "H_n", "M_n^2", "M_n^2_rounded",
                                    "Aut_n", "Weight_n"]
        assert lines[1].split() == ["2", "1", "4", "4.000e+00", "1", "1"]
        assert lines[2].split() == ["3", "6", "81", "8.100e+01", "1", "1"]
        assert lines[3].split() == ["4", "1344", "73984", "7.398e+04", "9", "4"]


class TestCliExitCodes:
    def test_census_success(self, capsys):
        assert cli_mod.main(["census", "4"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "1344" in out
        assert "checks: all pass" in out

    def test_usage_error_on_bad_dimension(self, capsys):
        assert cli_mod.main(["census", "9"]) == EXIT_USAGE
        assert "error" in capsys.readouterr().err

    def test_usage_error_on_missing_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli_mod.main([])
        assert exc.value.code == EXIT_USAGE

    def test_extended_gate_on_large_count(self, capsys):
        assert cli_mod.main(["count", "6"]) == EXIT_USAGE
        assert "--extended" in capsys.readouterr().err

    def test_extended_gate_on_large_classification(self, capsys):
        assert cli_mod.main(["classify", "5"]) == EXIT_USAGE
        assert cli_mod.main(["weights", "5"]) == EXIT_USAGE

    def test_resource_abort_writes_checkpoint(self, tmp_path, capsys):
        code = cli_mod.main([
            "--memory-limit", "200", "--checkpoint-dir", str(tmp_path),
            "count", "4",
        ])
        assert code == EXIT_RESOURCE
        err = capsys.readouterr().err
        assert "resource abort" in err
        line = next(l for l in err.splitlines() if l.startswith("checkpoint: "))
        path = line.split(": ", 1)[1]
        assert path.startswith(str(tmp_path))
        # The written checkpoint resumes to the exact count.
        assert cli_mod.main(["resume", path]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "1344"

    def test_checkpoint_dir_env_fallback(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("GRAYCENSUS_CHECKPOINT_DIR", str(tmp_path))
        code = cli_mod.main(["--memory-limit", "200", "count", "4"])
        assert code == EXIT_RESOURCE
        err = capsys.readouterr().err
        assert str(tmp_path) in err
        assert list(tmp_path.glob("*.gckp"))

    def test_consistency_failure_exits_two(self, capsys, monkeypatch):
        # A corrupted stored reference must fail the cross-checks loudly.
        monkeypatch.setattr(cli_mod, "H6_REFERENCE", 7 * H6_REFERENCE)
        assert cli_mod.main(["--format", "csv", "census", "6"]) == EXIT_CONSISTENCY
        out = capsys.readouterr().out
        assert "check:odd_prime_divisors,FAIL,computed" in out


class TestCliCommands:
    def test_count_plain(self, capsys):
        assert cli_mod.main(["count", "4"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "1344"

    def test_count_direction_major(self, capsys):
        assert cli_mod.main(["count", "3", "--order", "direction-major"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "6"

    def test_count_json(self, capsys):
        assert cli_mod.main(["--format", "json", "count", "4"]) == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc == {"n": 4, "H": "1344"}

    def test_matchings_csv(self, capsys):
        assert cli_mod.main(["--format", "csv", "matchings", "4"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "n,M\n4,272"

    def test_classify_output(self, capsys):
        assert cli_mod.main(["classify", "3"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "1,2,1,3,1,2,1,3 6 2+2+4"
        summary = json.loads(lines[-1])
        assert summary["aut_count"] == 1
        assert summary["total_cycles"] == 6

    def test_weights_output(self, capsys):
        assert cli_mod.main(["weights", "4"]) == EXIT_OK
        parsed = {}
        for line in capsys.readouterr().out.splitlines():
            spectrum, count = line.rsplit(" ", 1)
            parsed[spectrum] = int(count)
        assert set(parsed) == {"2+2+4+8", "2+2+6+6", "2+4+4+6", "4+4+4+4"}
        assert sum(parsed.values()) == 1344

    def test_bounds_csv(self, capsys):
        assert cli_mod.main(["bounds", "6"]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("name,o_term,log10_value,display,asymptotic_flag")
        assert "a_n,0.0," in out
        assert "knuth" in out

    def test_bounds_historical(self, capsys):
        assert cli_mod.main(["bounds", "6", "--historical"]) == EXIT_OK
        out = capsys.readouterr().out.splitlines()
        # Header, three bound rows, then the seven published upper bounds.
        historical = out[4:]
        assert len(historical) == 7
        assert historical[0] == "Dixon and Goodman, 1975,1.5e+40"
        assert historical[-1] == "obtained value of H_6,1.4e+22"
        assert any(l.endswith("e+26") for l in historical)

    def test_factor_command(self, capsys):
        assert cli_mod.main(["factor", "5040"]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "2^4 * 3^2 * 5 * 7"

    def test_verify_partition_accepts_decomposition(self, tmp_path, capsys):
        deltas = find_two_cycle_decomposition_q4()
        path = tmp_path / "partition.txt"
        path.write_text("\n".join(
            cube.delta_to_edge_set(cube.DeltaSequence(4, d)).to_string()
            for d in deltas) + "\n")
        assert cli_mod.main(["verify-partition", "4", str(path)]) == EXIT_OK
        assert capsys.readouterr().out.strip() == "partition OK"

    def test_verify_partition_rejects_overlap(self, tmp_path, capsys):
        d0 = find_two_cycle_decomposition_q4()[0]
        text = cube.delta_to_edge_set(cube.DeltaSequence(4, d0)).to_string()
        path = tmp_path / "overlap.txt"
        path.write_text(text + "\n" + text + "\n")
        assert cli_mod.main(["verify-partition", "4", str(path)]) == EXIT_CONSISTENCY
        assert "partition invalid" in capsys.readouterr().out
