"""Tests for array files, report files and the command-line driver."""

import importlib
import json

import numpy as np
import pytest

from cli.array_io import ArrayFormatError, load_array, read_array, save_array, write_array
from cli.main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from cli.report_io import format_report, load_report, parse_report_text
from cli.settings import load_settings
from torus.array import Modulo, ToroidalArray, WindowSpec
from verifier.census import census_affine
from verifier.perfectness import is_nested_perfect, is_perfect

from tests.conftest import A1_ROWS, SAMPLE_DIR

PERFECT_4X4 = str(SAMPLE_DIR / "perfect_2211_4x4.txt")
NOT_NESTED_8X8 = str(SAMPLE_DIR / "not_nested_2222_8x8.txt")
NESTED_8X8 = str(SAMPLE_DIR / "nested_2222_8x8.txt")


@pytest.fixture(autouse=True)
def single_thread(monkeypatch):
    """Pin the thread count and clear log settings from the environment."""
    monkeypatch.setenv("TORUS_THREADS", "1")
    monkeypatch.delenv("TORUS_LOG_LEVEL", raising=False)
    monkeypatch.delenv("TORUS_LOG_JSON", raising=False)


class TestArrayFiles:
    """Test text grid and PBM array files."""

    def test_text_grid_of_pascal_array(self, pascal_a1):
        """A_1 as a text grid."""
        assert write_array(pascal_a1, "text").splitlines() == A1_ROWS

    def test_round_trips(self, pascal_a1):
        """Write then read gives the same array in both formats."""
        rng = np.random.default_rng(8)
        arrays = [ToroidalArray(np.zeros((1, 1), dtype=np.uint8)), pascal_a1]
        arrays += [ToroidalArray(rng.integers(0, 2, size=(side, side)).astype(np.uint8)) for side in (3, 36, 71)]
        for a in arrays:
            for fmt in ("text", "pbm"):
                assert read_array(write_array(a, fmt)) == a

    def test_pbm_layout(self, pascal_a2):
        """PBM lines stay within 70 characters."""
        text = write_array(pascal_a2, "pbm")
        lines = text.splitlines()
        assert lines[:2] == ["P1", "1024 1024"]
        assert max(len(line) for line in lines) <= 70

    def test_pbm_comments_and_packed_pixels(self):
        """Comments are skipped and unseparated pixels are read."""
        a = read_array("P1\n# a comment\n2 2 # trailing\n0110\n")
        assert a.to_strings() == ["01", "10"]

    def test_save_and_load(self, tmp_path, not_nested_8x8):
        """Test writing and reading a PBM file."""
        path = tmp_path / "not_nested_8x8.pbm"
        save_array(not_nested_8x8, path, "pbm")
        assert path.read_text().startswith("P1")
        assert load_array(path) == not_nested_8x8

    def test_illegal_character_location(self):
        """Errors carry line and column."""
        with pytest.raises(ArrayFormatError, match="line 2, column 3") as info:
            read_array("010\n01x\n000\n")
        assert (info.value.line, info.value.column) == (2, 3)

    def test_text_grid_errors(self):
        """Test malformed text grids."""
        with pytest.raises(ArrayFormatError, match="not square"):
            read_array("01\n10\n11\n")
        with pytest.raises(ArrayFormatError, match="line 2"):
            read_array("01\n1\n")
        with pytest.raises(ArrayFormatError, match="empty"):
            read_array("\n")

    def test_leading_blank_lines(self, perfect_4x4):
        """Blank lines before the grid are skipped and errors keep file line numbers."""
        assert read_array("\n\n" + write_array(perfect_4x4, "text")) == perfect_4x4
        with pytest.raises(ArrayFormatError, match="line 3, column 2") as info:
            read_array("\n0101\n0x01\n")
        assert info.value.line == 3
        with pytest.raises(ArrayFormatError, match="line 3: row has 3 cells, expected 4"):
            read_array("\n0101\n010\n")

    def test_pbm_errors(self):
        """Test malformed PBM headers and pixel counts."""
        with pytest.raises(ArrayFormatError, match="not square"):
            read_array("P1\n2 3\n000000\n")
        with pytest.raises(ArrayFormatError, match="3 pixels"):
            read_array("P1\n2 2\n0 1 0\n")
        with pytest.raises(ArrayFormatError, match="line 3, column 3"):
            read_array("P1\n2 2\n0 2 0 1\n")
        with pytest.raises(ArrayFormatError, match="width"):
            read_array("P1\nx 2\n")

    def test_unknown_format(self, pascal_a1):
        """Test unsupported output format."""
        with pytest.raises(ValueError):
            write_array(pascal_a1, "png")


class TestReports:
    """Test text and JSON report files."""

    def test_text_and_json_round_trip(self, perfect_4x4, not_nested_8x8):
        """Reports parse back to equal models."""
        reports = [
            is_perfect(perfect_4x4, WindowSpec(s=2, t=2), Modulo(p=1, q=1)),
            is_perfect(perfect_4x4, WindowSpec(s=3, t=3), Modulo(p=1, q=1)),
            is_nested_perfect(not_nested_8x8, 2),
            census_affine(2, mode="sample", sample_size=3, seed=5),
        ]
        for report in reports:
            for fmt in ("text", "json"):
                assert load_report(format_report(report, fmt)) == report

    def test_text_lines(self, not_nested_8x8):
        """Text reports use dotted keys with JSON values."""
        text = format_report(is_nested_perfect(not_nested_8x8, 2), "text")
        assert "report: \"nested\"\n" in text
        assert "nested: false\n" in text
        assert "levels.0.failures.0.report.witness.pattern: [[0, 0]]\n" in text
        document = parse_report_text(text)
        assert document["levels"][0]["failures"][0]["position"] == [0, 0]

    def test_rejects_unknown_report(self):
        """Unknown report tags and malformed lines are rejected."""
        with pytest.raises(ValueError):
            load_report('report: "bogus"\n')
        with pytest.raises(ValueError):
            load_report("no separator here\n")


class TestSettings:
    """Test settings from the environment."""

    def test_environment(self, monkeypatch):
        """TORUS_* variables are read and normalized."""
        monkeypatch.setenv("TORUS_THREADS", "3")
        monkeypatch.setenv("TORUS_LOG_LEVEL", "INFO")
        settings = load_settings()
        assert settings.threads == 3
        assert settings.log_level == "info"
        assert settings.max_array_exponent == 2

    def test_invalid_threads(self, monkeypatch):
        """Zero threads is rejected."""
        monkeypatch.setenv("TORUS_THREADS", "0")
        with pytest.raises(ValueError):
            load_settings()


class TestGenerate:
    """Test the generate command."""

    def test_default_is_pascal_array(self, capsys):
        """Default flags print A_1."""
        assert main(["generate", "--n", "2"]) == EXIT_OK
        assert capsys.readouterr().out.splitlines() == A1_ROWS

    def test_variant_is_distinct_and_nested(self, tmp_path, capsys):
        """A rotated variant with Z gives another nested array."""
        out = tmp_path / "variant.txt"
        assert main(["generate", "--n", "2", "--profile", "1,0", "--z", "f", "--out", str(out)]) == EXIT_OK
        assert load_array(out).to_strings() != A1_ROWS
        assert main(["verify-nested", str(out), "--n", "2"]) == EXIT_OK

    def test_pbm_output(self, capsys):
        """Test PBM output on stdout."""
        assert main(["generate", "--n", "2", "--format", "pbm"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("P1\n8 8\n")

    @pytest.mark.parametrize(
        "flags",
        [
            ["--n", "8"],
            ["--n", "3"],
            ["--n", "2", "--profile", "1,1"],
            ["--n", "2", "--profile", "0,0,0,0"],
            ["--n", "2", "--z", "xyz"],
            ["--n", "2", "--z", "1ffff"],
        ],
    )
    def test_usage_errors(self, flags, capsys):
        """Bad flag values exit with status 2."""
        assert main(["generate", *flags]) == EXIT_USAGE
        assert "error:" in capsys.readouterr().err


class TestVerify:
    """Test the verify and verify-nested commands."""

    def test_4x4_is_perfect(self, capsys):
        """The 4x4 sample verifies as (2,2,1,1)-perfect."""
        assert main(["verify", PERFECT_4X4, "--window", "2,2", "--modulo", "1,1"]) == EXIT_OK
        assert 'verdict: "perfect"' in capsys.readouterr().out

    def test_unnested_8x8_is_perfect(self):
        """The non-nested 8x8 sample is still (2,2,2,2)-perfect."""
        assert main(["verify", NOT_NESTED_8X8, "--window", "2,2", "--modulo", "2,2"]) == EXIT_OK

    def test_infeasible_parameters_fail_with_witness(self, capsys):
        """A counting failure exits 1 with a witness."""
        assert main(["verify", NESTED_8X8, "--window", "2,2", "--modulo", "1,1"]) == EXIT_FAILED
        report = load_report(capsys.readouterr().out)
        assert report.reason.startswith("infeasible")
        assert report.witness is not None

    def test_unnested_8x8_not_nested(self, capsys):
        """The non-nested 8x8 sample exits 1 with a duplicate witness."""
        assert main(["verify-nested", NOT_NESTED_8X8, "--n", "2", "--format", "json"]) == EXIT_FAILED
        report = load_report(capsys.readouterr().out)
        assert not report.nested
        assert report.levels[0].failures[0].report.witness.kind == "duplicate"

    def test_nested_8x8(self):
        """The nested 8x8 sample exits 0."""
        assert main(["verify-nested", NESTED_8X8, "--n", "2"]) == EXIT_OK

    def test_general_nested_form(self, capsys):
        """Window and modulo flags select the general nested form."""
        assert main(["verify-nested", PERFECT_4X4, "--window", "2,2", "--modulo", "1,1"]) == EXIT_FAILED
        report = load_report(capsys.readouterr().out)
        assert report.n is None
        assert not report.nested
        assert report.levels[0].part_side == 2

    def test_report_to_file(self, tmp_path, capsys):
        """Test --out writes the report instead of stdout."""
        out = tmp_path / "report.txt"
        assert main(["verify", PERFECT_4X4, "--window", "2,2", "--modulo", "1,1", "--out", str(out)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert load_report(out.read_text()).perfect

    def test_errors(self, tmp_path):
        """Bad files and flags exit with status 2."""
        bad = tmp_path / "bad.txt"
        bad.write_text("01\n0x\n")
        assert main(["verify", str(bad), "--window", "2,2", "--modulo", "1,1"]) == EXIT_USAGE
        assert main(["verify", str(tmp_path / "missing.txt"), "--window", "2,2", "--modulo", "1,1"]) == EXIT_USAGE
        assert main(["verify", PERFECT_4X4, "--window", "2", "--modulo", "1,1"]) == EXIT_USAGE
        assert main(["verify", PERFECT_4X4, "--window", "2,2", "--modulo", "3,3"]) == EXIT_USAGE
        assert main(["verify-nested", PERFECT_4X4]) == EXIT_USAGE
        assert main(["verify-nested", PERFECT_4X4, "--n", "2"]) == EXIT_USAGE


class TestCensus:
    """Test the census command."""

    def test_exhaustive_n2(self, capsys):
        """Exhaustive n = 2 census reports 32/32/32."""
        assert main(["census", "--n", "2", "--exhaustive"]) == EXIT_OK
        report = load_report(capsys.readouterr().out)
        assert (report.generated, report.distinct, report.nested) == (32, 32, 32)

    def test_empty_sample(self, capsys):
        """Test a zero-size sample."""
        assert main(["census", "--n", "2", "--sample", "0"]) == EXIT_OK
        assert "generated: 0\n" in capsys.readouterr().out

    def test_exhaustive_n4_rejected(self, capsys):
        """Exhaustive n = 4 exits 2 with a size estimate."""
        assert main(["census", "--n", "4", "--exhaustive"]) == EXIT_USAGE
        assert "bytes" in capsys.readouterr().err

    def test_json_logs_on_stderr(self, capsys):
        """Test JSON log lines on stderr."""
        assert main(["--log-json", "--log-level", "info", "census", "--n", "2", "--sample", "1"]) == EXIT_OK
        err = capsys.readouterr().err
        events = [json.loads(line)["event"] for line in err.splitlines() if line.startswith("{")]
        assert "Census finished" in events

    @pytest.mark.slow
    def test_sample_n4(self, capsys):
        """Sampled n = 4 members are nested."""
        assert main(["--threads", "2", "census", "--n", "4", "--sample", "5", "--seed", "7"]) == EXIT_OK
        report = load_report(capsys.readouterr().out)
        assert (report.generated, report.nested) == (5, 5)


class TestDecode:
    """Test the decode command."""

    def test_zero_tile(self, capsys):
        """The zero pattern decodes to the origin."""
        assert main(["decode", "--n", "2", "--pattern", "00/00", "--class", "0,0"]) == EXIT_OK
        assert "position: [0, 0]\n" in capsys.readouterr().out

    def test_pascal_tile_with_check(self, capsys):
        """Decoded position agrees with the scan."""
        assert main(["decode", "--n", "2", "--pattern", "01/01", "--class", "0,0", "--check"]) == EXIT_OK
        report = load_report(capsys.readouterr().out)
        assert report.position == (0, 2)
        assert report.scan_positions == [(0, 2)]

    def test_part_and_global_position(self, capsys):
        """Part-local position and array position for a level-1 part."""
        args = ["decode", "--n", "2", "--pattern", "01", "--class", "1,0", "--part", "1,1", "--check", "--global-position"]
        assert main(args) == EXIT_OK
        captured = capsys.readouterr()
        report = load_report(captured.out)
        assert report.level == 1
        assert report.agrees_with_scan
        row, col = report.position
        assert f"array position: ({row + 4}, {col + 4})" in captured.err

    def test_n4_with_check(self, capsys):
        """An n = 4 variant query agrees with the scan."""
        args = ["decode", "--n", "4", "--profile", "2,1,1,0", "--z", "beef", "--pattern", "1011/0110", "--class", "1,3", "--check"]
        assert main(args) == EXIT_OK
        assert load_report(capsys.readouterr().out).scan_count == 1

    def test_usage_errors(self):
        """Bad flag values exit with status 2."""
        assert main(["decode", "--n", "2", "--pattern", "012", "--class", "0,0"]) == EXIT_USAGE
        assert main(["decode", "--n", "2", "--pattern", "01/1", "--class", "0,0"]) == EXIT_USAGE
        assert main(["decode", "--n", "2", "--pattern", "010/010", "--class", "0,0"]) == EXIT_USAGE
        assert main(["decode", "--n", "2", "--pattern", "01/01", "--class", "2,0"]) == EXIT_USAGE


def test_matrix_printout(capsys):
    """The matrix command prints borders and tau of the 8x8 variant."""
    assert main(["matrix", "--n", "8", "--profile", "3,3,2,1,1,1,0,0"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "tau: [3, 4, 2, 1, 5, 6, 0, 7]" in out
    assert "upper: [3, 3, 2, 1, 1, 1, 0, 0]" in out
    assert out.splitlines()[0].startswith("00000011")


@pytest.mark.parametrize(
    "module,names",
    [
        ("torus.builder", ["build_affine_array", "build_pascal_array", "check_array_exponent", "array_side", "affine_family_size", "place_tile"]),
        ("verifier.perfectness", ["is_perfect", "count_occurrences", "pattern_key", "key_to_rows", "window_keys", "nested_report", "is_nested_perfect"]),
        ("pascal.matrices", ["build_pascal", "build_variant", "enumerate_profiles", "upper_border", "lower_border", "tau"]),
        ("gf2.bitmatrix", ["mat_mul", "mat_xor", "invert", "rank", "solve", "rotate_column", "submatrix"]),
        ("verifier.decoder", ["locate_pattern", "parts_per_side", "part_side", "part_of", "global_position"]),
        ("verifier.reports", ["Witness", "PerfectnessReport", "NestedReport", "CensusReport", "DecodeReport"]),
        ("cli.array_io", ["read_array", "write_array", "save_array", "load_array"]),
        ("cli.main", ["cmd_generate", "cmd_verify", "cmd_verify_nested", "cmd_census", "cmd_decode", "cmd_matrix", "main"]),
    ],
)
def test_public_operations_are_documented(module, names):
    """Every public operation carries a docstring."""
    loaded = importlib.import_module(module)
    assert [name for name in names if not (getattr(loaded, name).__doc__ or "").strip()] == []
