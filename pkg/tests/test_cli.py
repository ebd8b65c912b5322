"""
Tests for the ribbon command-line interface.
"""

import json

import pytest
from click.testing import CliRunner

from ribbon.cli import cli
from ribbon.models import load_document
from ribbon.moves import TripleVerification, random_move_corpus


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def doc(corpus_dir):
    def path(stem: str) -> str:
        return str(corpus_dir / f"{stem}.json")

    return path


def write_doc(directory, name, kind, payload):
    path = directory / f"{name}.json"
    path.write_text(
        json.dumps({"format_version": 1, "name": name, "kind": kind, "payload": payload}),
        encoding="utf-8",
    )
    return str(path)


class TestInvariants:
    """Test the invariants command."""

    def test_z3(self, runner, doc):
        result = runner.invoke(cli, ["invariants", doc("z3-example")])
        assert result.exit_code == 0, result.output
        assert "knot: z3-example" in result.output
        assert "Tor = Z/3; τ = -1; λ(g,g) = 1/3" in result.output
        assert "τ order: 2" in result.output
        assert "τ-invariant pairing: yes" in result.output

    def test_trivial(self, runner, doc):
        result = runner.invoke(cli, ["invariants", doc("trivial")])
        assert result.exit_code == 0
        assert "Tor = 0; pairing trivial" in result.output

    def test_wrong_kind(self, runner, doc):
        result = runner.invoke(cli, ["invariants", doc("z3-tau-plus")])
        assert result.exit_code == 2

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["invariants", str(tmp_path / "nope.json")])
        assert result.exit_code == 2

    def test_precondition(self, runner, tmp_path):
        path = write_doc(
            tmp_path,
            "degenerate",
            "seifert_bundle",
            {
                "h1_v": {"free_rank": 1},
                "h1_y": {"free_rank": 1},
                "pushoff_pos": [[1]],
                "pushoff_neg": [[1]],
                "linking_matrix": [],
            },
        )
        result = runner.invoke(cli, ["invariants", path])
        assert result.exit_code == 3


class TestCompare:
    """Test the compare command and its exit codes."""

    def test_bundle_against_structure(self, runner, doc):
        result = runner.invoke(cli, ["compare", doc("z3-example"), doc("z3-structure")])
        assert result.exit_code == 0, result.output
        assert "EQUIVALENT" in result.output
        assert "witness: [[1]]" in result.output

    def test_modules_differ(self, runner, doc):
        result = runner.invoke(cli, ["compare", doc("z3-tau-plus"), doc("z3-tau-minus")])
        assert result.exit_code == 1
        assert "NOT ISOMORPHIC" in result.output

    def test_module_against_bundle(self, runner, doc):
        result = runner.invoke(cli, ["compare", doc("z3-tau-minus"), doc("z3-example")])
        assert result.exit_code == 0
        assert "ISOMORPHIC" in result.output

    def test_nonsquare_pairing(self, runner, doc):
        result = runner.invoke(cli, ["compare", doc("z5-example"), doc("z5-nonsquare")])
        assert result.exit_code == 1
        assert "NOT EQUIVALENT" in result.output

    def test_too_large(self, runner, tmp_path):
        payload = {"group": {"torsion": [1024]}, "tau": [[1]]}
        path = write_doc(tmp_path, "big", "laurent_module", payload)
        result = runner.invoke(cli, ["--max-aut", "512", "compare", path, path])
        assert result.exit_code == 4

    def test_max_aut_must_be_positive(self, runner, doc):
        result = runner.invoke(cli, ["--max-aut", "0", "compare", doc("z3-example"), doc("z3-example")])
        assert result.exit_code == 2


class TestTorsionSquare:
    """Test the G ⊕ G criterion on Seifert hypersurfaces."""

    def test_same_knot(self, runner, doc):
        result = runner.invoke(cli, ["torsion-square", doc("z5-example"), doc("z5-nonsquare")])
        assert result.exit_code == 0, result.output
        assert "sum: Z/5 ⊕ Z/5" in result.output
        assert "G ⊕ G with G = Z/5" in result.output

    def test_z3_against_trivial(self, runner, doc):
        result = runner.invoke(cli, ["torsion-square", doc("z3-example"), doc("trivial")])
        assert result.exit_code == 1
        assert "NOT OF THE FORM G ⊕ G" in result.output
        assert "z3-example is not ribbon-move equivalent to trivial" in result.output

    def test_wrong_kind(self, runner, doc):
        result = runner.invoke(cli, ["torsion-square", doc("z3-tau-plus"), doc("trivial")])
        assert result.exit_code == 2


class TestEta:
    """Test the eta command."""

    def test_z3_obstruction(self, runner, doc):
        result = runner.invoke(
            cli,
            [
                "eta",
                doc("z3-example"),
                "--character",
                "3:1",
                "--bounding",
                doc("z3-bounding"),
                "--obstruction",
            ],
        )
        assert result.exit_code == 0, result.output
        assert "1/3" in result.output
        assert "obstruction: FAIL" in result.output
        assert "z3-example is not ribbon-move equivalent to trivial" in result.output

    def test_trivial_without_bounding(self, runner, doc):
        result = runner.invoke(cli, ["eta", doc("trivial"), "--character", "3:", "--obstruction"])
        assert result.exit_code == 0, result.output
        assert "obstruction: PASS (all values vanish)" in result.output

    def test_torsion_character_needs_bounding(self, runner, doc):
        result = runner.invoke(cli, ["eta", doc("z3-example"), "--character", "3:1"])
        assert result.exit_code == 3

    def test_bad_character_spec(self, runner, doc):
        result = runner.invoke(cli, ["eta", doc("z3-example"), "--character", "three"])
        assert result.exit_code == 2

    def test_ill_defined_character(self, runner, doc):
        result = runner.invoke(cli, ["eta", doc("z3-example"), "--character", "2:1"])
        assert result.exit_code == 3


class TestMoveCheck:
    """Test the move-check command."""

    def test_z3_move(self, runner, doc):
        result = runner.invoke(cli, ["move-check", doc("z3-move"), "--window", "3"])
        assert result.exit_code == 0, result.output
        assert "triple: z3-move" in result.output
        assert "module witness: [[1]]" in result.output
        assert result.output.strip().endswith("PASS")

    def test_wrong_kind(self, runner, doc):
        result = runner.invoke(cli, ["move-check", doc("z3-example")])
        assert result.exit_code == 2


class TestCocycle:
    """Test the cocycle command."""

    def test_torus(self, runner, doc):
        result = runner.invoke(cli, ["cocycle", doc("torus"), "--degrees", "2,-1"])
        assert result.exit_code == 0, result.output
        assert "φ = [2, -1]" in result.output
        assert "2-cell boundaries: all degree 0" in result.output

    def test_default_degrees(self, runner, doc):
        result = runner.invoke(cli, ["cocycle", doc("circle")])
        assert result.exit_code == 0
        assert "φ = [0]" in result.output

    def test_projective_plane(self, runner, doc):
        result = runner.invoke(cli, ["cocycle", doc("projective-plane"), "--degrees", "1"])
        assert result.exit_code == 3

    def test_bad_degrees(self, runner, doc):
        result = runner.invoke(cli, ["cocycle", doc("torus"), "--degrees", "a,b"])
        assert result.exit_code == 2


class TestSelftest:
    """Test corpus verification from the command line."""

    def test_small_corpus(self, runner, tmp_path):
        args = ["selftest", "--seed", "0", "--count", "3", "--out-dir", str(tmp_path)]
        first = runner.invoke(cli, args)
        assert first.exit_code == 0, first.output
        assert "passed: 3/3" in first.output
        assert list(tmp_path.iterdir()) == []
        second = runner.invoke(cli, args)
        assert second.output == first.output

    def test_negative_count(self, runner):
        result = runner.invoke(cli, ["selftest", "--count", "-1"])
        assert result.exit_code == 2

    def test_failures_written(self, runner, tmp_path, mocker):
        (triple,) = random_move_corpus(0, 1)
        failing = TripleVerification(triple, error="NotStabilizedError: no stable window")
        mocker.patch("ribbon.cli.verify_corpus", return_value=[failing])

        result = runner.invoke(cli, ["selftest", "--count", "1", "--out-dir", str(tmp_path)])

        assert result.exit_code == 1
        assert "passed: 0/1" in result.output
        doc = load_document(tmp_path / "corpus-0-0.json")
        assert doc.kind == "move_triple"
        assert "NotStabilizedError" in doc.description
