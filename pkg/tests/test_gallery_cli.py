"""Gallery entries and the command-line front end: instance grammar,
subcommands, exit codes, and output determinism."""

import json
from fractions import Fraction

import pytest

from posmon.cli import (
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_REFUTED,
    EXIT_USAGE,
    main,
    parse_instance,
)
from posmon.elements import Z, Z2, lexvec
from posmon.gallery import by_id, gallery_list, run_entry
from posmon.monoids import (
    AlphaBeta,
    Conductive,
    FIRST_POSITIVE,
    FULL_CONE,
    GeometricPuiseux,
    LexCone,
    NearlyAtomicAlpha,
    PrimeReciprocal,
    UnionShift,
    numerical,
)


class TestGallery:
    def test_at_least_eleven_entries(self):
        assert len(gallery_list()) >= 11

    def test_ids_unique_and_deterministic(self):
        ids = [e.id for e in gallery_list()]
        assert len(set(ids)) == len(ids)
        assert ids == [e.id for e in gallery_list()]

    def test_required_instances_present(self):
        ids = {e.id for e in gallery_list()}
        assert {
            "antimatter-QxQ",
            "nonatomic-ZxZ",
            "malphabeta",
            "mq-2/3",
            "m0",
            "conductive-Z2-C1",
            "conductive-Z2-C2",
            "nearly-not-atomic",
            "almost-not-nearly",
            "quasi-not-almost",
            "hfm-NxZ",
        } <= ids

    def test_entries_self_describing(self):
        for e in gallery_list():
            assert e.headline
            assert e.expected
            assert e.descriptor is not None

    @pytest.mark.parametrize("entry_id", [e.id for e in gallery_list()])
    def test_recipes_reproduce_expected(self, entry_id):
        result = run_entry(by_id(entry_id), 12)
        failures = [(n, d) for n, ok, d in result.checks if not ok]
        assert result.ok, failures


class TestInstanceGrammar:
    def test_families(self):
        assert parse_instance("nm:3,5") == numerical(3, 5)
        assert parse_instance("mq:2/3") == GeometricPuiseux(Fraction(2, 3))
        assert parse_instance("m0") == PrimeReciprocal()
        assert parse_instance("conductive:Z:a=3") == Conductive(lexvec(Z, 3))

    def test_conductive_plane(self):
        m = parse_instance("conductive:Z2:a=(1,0)")
        assert m == Conductive(lexvec(Z2, 1, 0))

    def test_cones(self):
        assert parse_instance("cone:NxZ") == LexCone(Z2, FIRST_POSITIVE)
        assert parse_instance("cone:ZxZ") == LexCone(Z2, FULL_CONE)

    def test_special_instances(self):
        assert isinstance(parse_instance("nearly"), NearlyAtomicAlpha)
        assert isinstance(parse_instance("quasi"), UnionShift)
        assert isinstance(parse_instance("almost"), UnionShift)
        assert parse_instance("malphabeta:2/3") == AlphaBeta(Fraction(2, 3))

    def test_gallery_ids_resolve(self):
        assert parse_instance("hfm-NxZ") == LexCone(Z2, FIRST_POSITIVE)

    def test_unknown(self):
        from posmon.cli import InstanceError

        with pytest.raises(InstanceError):
            parse_instance("wat:1,2")


class TestCliCommands:
    def test_classify_plane_json(self, capsys):
        code = main(["classify", "conductive:Z2:a=(1,0)", "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert out["verdicts"]["BFM"]["status"] == "Proved"
        assert out["verdicts"]["FFM"]["status"] == "Refuted"
        assert out["chain_ok"] is True

    def test_atoms_command(self, capsys):
        code = main(["atoms", "conductive:Z:a=3", "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert out["atoms"] == ["(3)@prio=0", "(4)@prio=0", "(5)@prio=0"]
        assert out["complete"] is True

    def test_factorize_command(self, capsys):
        code = main(["factorize", "nm:3,5", "15", "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert len(out["factorizations"]) == 2
        assert sorted(f["length"] for f in out["factorizations"]) == [3, 5]

    def test_lengths_command(self, capsys):
        code = main(["lengths", "m0", "1", "--depth", "6", "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == EXIT_OK
        assert out["lengths"] == [2, 3, 5, 7, 11, 13]
        assert out["complete"] is False

    def test_probe_refuted_exit_one(self, capsys):
        code = main(["probe", "conductive:Z:a=3", "HFM", "--bound", "60", "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == EXIT_REFUTED
        assert out["verdict"] == "refuted"

    def test_probe_consistent_exit_zero(self, capsys):
        code = main(["probe", "conductive:Z:a=2", "LFM", "--bound", "60"])
        capsys.readouterr()
        assert code == EXIT_OK

    def test_probe_box_bound(self, capsys):
        code = main(["probe", "hfm-NxZ", "HFM", "--bound", "3,10"])
        capsys.readouterr()
        assert code == EXIT_OK

    def test_chain_writes_verifiable_certificate(self, capsys, tmp_path):
        path = tmp_path / "chain.json"
        code = main(["chain", "mq:2/3", "--depth", "10", "-o", str(path), "--json"])
        out = json.loads(capsys.readouterr().out)
        assert code == EXIT_REFUTED
        assert len(out["differences"]) == 10
        code = main(["verify", str(path)])
        assert code == EXIT_OK
        assert "OK" in capsys.readouterr().out

    def test_break_command(self, capsys, tmp_path):
        path = tmp_path / "break.json"
        code = main(["break", "mq:2/3", "--steps", "2", "-o", str(path)])
        capsys.readouterr()
        assert code == EXIT_REFUTED
        assert main(["verify", str(path)]) == EXIT_OK
        capsys.readouterr()

    def test_verify_tampered_exit_two(self, capsys, tmp_path):
        path = tmp_path / "chain.json"
        main(["chain", "mq:2/3", "--depth", "4", "-o", str(path), "--json"])
        capsys.readouterr()
        blob = json.loads(path.read_text())
        blob["differences"][0] = "1/7"
        path.write_text(json.dumps(blob))
        code = main(["verify", str(path)])
        assert code == EXIT_MISMATCH
        assert "FAIL" in capsys.readouterr().out

    def test_unknown_instance_exit_usage(self, capsys):
        code = main(["atoms", "mystery:9"])
        capsys.readouterr()
        assert code == EXIT_USAGE

    def test_chain_on_wrong_family(self, capsys):
        code = main(["chain", "nm:3,5"])
        capsys.readouterr()
        assert code == EXIT_USAGE

    def test_gallery_listing(self, capsys):
        code = main(["gallery"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "antimatter-QxQ" in out and "hfm-NxZ" in out

    def test_gallery_json_deterministic(self, capsys):
        main(["gallery", "--json"])
        first = capsys.readouterr().out
        main(["gallery", "--json"])
        second = capsys.readouterr().out
        assert first == second

    def test_gallery_run_all_byte_identical(self, capsys):
        code = main(["gallery", "--run-all", "--json", "--depth", "6"])
        first = capsys.readouterr().out
        assert code == EXIT_OK
        code = main(["gallery", "--run-all", "--json", "--depth", "6"])
        second = capsys.readouterr().out
        assert code == EXIT_OK
        assert first == second

    def test_gallery_jobs_flag(self, capsys):
        code = main(["gallery", "--run-all", "--jobs", "4", "--depth", "6"])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert "FAIL" not in out

    def test_gallery_mismatch_exits_two(self, capsys, monkeypatch):
        import posmon.cli as cli_mod
        from posmon.gallery import GalleryEntry, RecipeResult, gallery_list

        broken = GalleryEntry(
            "broken-entry",
            gallery_list()[0].descriptor,
            "deliberately failing entry",
            (("QAM", "Proved"),),
            lambda depth: RecipeResult(None, (("forced failure", False, ""),)),
        )
        monkeypatch.setattr(cli_mod, "gallery_list", lambda: (broken,))
        code = main(["gallery", "--run-all"])
        out = capsys.readouterr().out
        assert code == EXIT_MISMATCH
        assert "FAIL" in out and "MISMATCH" in out

    def test_element_parse_failure_exits_usage(self, capsys):
        code = main(["factorize", "nm:3,5", "x/y"])
        capsys.readouterr()
        assert code == EXIT_USAGE
