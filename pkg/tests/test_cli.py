"""The command-line interface: reports, exit codes, and determinism."""

import json

import pytest

from jgamma.cli import RunConfig, config_from_argv, main, run
from jgamma.errors import InputError
from jgamma.gl1 import GradedUnitGroup
from jgamma.jmonoid import free_monoid
from jgamma.permcat import JObject


def ku_ring_file(tmp_path):
    G = GradedUnitGroup(generators=(("u", 2, 0), ("t", 0, 2)), sign=(0, 1))
    path = tmp_path / "ku.json"
    path.write_text(G.to_json())
    return str(path)


# -- running configurations directly -----------------------------------------


def test_every_report_carries_schema_and_window():
    report = run(RunConfig("jcat", {"action": "homs", "cat": "j", "src": "1,1", "dst": "2,2"}))
    assert report["schema"] == "jgamma/report/v1"
    assert report["command"] == "jcat"
    assert report["config"]["seed"] == 0
    assert report["window"]["category"] == "J"


def test_jcat_homs_counts_match_formula():
    report = run(RunConfig("jcat", {"action": "homs", "cat": "j", "src": "1,1", "dst": "2,2"}))
    assert report["count"] == report["count_formula"] == 4
    assert len(report["morphisms"]) == 4


def test_jcat_homs_symmetric_groups():
    report = run(RunConfig("jcat", {"action": "homs", "cat": "sigma", "src": "3", "dst": "3"}))
    assert report["count"] == 6
    empty = run(RunConfig("jcat", {"action": "homs", "cat": "sigma", "src": "2", "dst": "3"}))
    assert empty["count"] == 0


def test_jcat_compose_identities():
    ident = json.dumps([[1], [1], []])
    report = run(
        RunConfig(
            "jcat",
            {
                "action": "compose",
                "cat": "j",
                "src": "1,1",
                "mid": "1,1",
                "dst": "1,1",
                "first": ident,
                "second": ident,
            },
        )
    )
    assert report["composite"] == [[1], [1], []]


def test_jcat_compose_rejects_non_morphism():
    with pytest.raises(InputError):
        run(
            RunConfig(
                "jcat",
                {
                    "action": "compose",
                    "cat": "j",
                    "src": "0,0",
                    "mid": "1,1",
                    "dst": "1,1",
                    "first": json.dumps([[1], [1], []]),
                    "second": json.dumps([[1], [1], []]),
                },
            )
        )


def test_nerve_report():
    report = run(RunConfig("nerve", {"cat": "j", "max": 2, "dim": 2}))
    assert report["objects"] == 9
    assert report["morphisms"] == 27
    assert report["cells"] == {"0": 9, "1": 18, "2": 39}
    assert report["components"] == 5


def test_homology_of_degree_zero_component():
    report = run(
        RunConfig("homology", {"cat": "j", "max": 3, "component": "deg=0", "degree": 1})
    )
    assert report["homology"] == "Z/2"
    assert report["rank"] == 0 and report["torsion"] == [2]


def test_pi1_matches_homology_abelianization():
    report = run(RunConfig("pi1", {"cat": "j", "max": 3, "component": "deg=0"}))
    assert report["abelianization"] == "Z/2"


def test_freemonoid_report_validates():
    report = run(RunConfig("freemonoid", {"generator": "1,2", "bound": 3}))
    assert report["objects"] == 16
    assert report["validation"] == []
    assert report["value_counts"]["0,0"] == 1


def test_pi0_report_with_degrees():
    report = run(
        RunConfig("pi0", {"generator": "1,2", "terminal": False, "monoid": None, "bound": 3})
    )
    assert report["classes"] == 2
    assert report["unit_class"] == 0
    assert report["degrees"] == {"0": 0, "1": 1}


def test_units_and_grouplike_of_terminal():
    base = {"terminal": True, "generator": None, "monoid": None, "bound": 2}
    units = run(RunConfig("units", dict(base)))
    assert all(v == "yes" for v in units["units"]["classes"].values())
    gl = run(RunConfig("grouplike", dict(base)))
    assert gl["grouplike"] is True
    assert gl["certificate"]["shear_injective"] is True


def test_monoid_source_must_be_unique():
    with pytest.raises(InputError):
        run(RunConfig("pi0", {"generator": "1,1", "terminal": True, "monoid": None, "bound": 2}))
    with pytest.raises(InputError):
        run(RunConfig("pi0", {"generator": None, "terminal": False, "monoid": None, "bound": 2}))


def test_monoid_file_round_trip(tmp_path):
    A = free_monoid(JObject(1, 1), 2)
    path = tmp_path / "monoid.json"
    path.write_text(A.to_json())
    report = run(
        RunConfig(
            "pi0",
            {"generator": None, "terminal": False, "monoid": str(path), "bound": 2},
        )
    )
    assert report["classes"] == 3
    assert report["window"]["monoid_file"] == "monoid.json"


def test_gamma_report_of_terminal():
    report = run(
        RunConfig(
            "gamma",
            {
                "terminal": True,
                "generator": None,
                "monoid": None,
                "bound": 2,
                "s": 1,
                "dim": 1,
                "sigma_mode": "canonical",
            },
        )
    )
    assert report["cells"] == {"0": 9, "1": 18}
    assert report["components"] == 5


def test_gamma_circle_compares_diagonal_and_bar():
    report = run(
        RunConfig(
            "gamma",
            {
                "generator": "1,1",
                "terminal": False,
                "monoid": None,
                "bound": 2,
                "s": 1,
                "dim": 2,
                "sigma_mode": "canonical",
                "circle_levels": 2,
                "circle_bound": None,
            },
        )
    )
    assert report["diagonal_h1"] == "Z"
    assert report["bar_h1"] == "Z"


def test_gl1_report_from_ring_file(tmp_path):
    report = run(RunConfig("gl1", {"ring": ku_ring_file(tmp_path), "table": False}))
    assert report["periodicity"] == 2
    assert report["k_invariant"]["operation"] == "Sq^2"
    assert report["hopf_image"]["pretty"] == "t"


def test_unknown_subcommand():
    with pytest.raises(InputError):
        run(RunConfig("frobnicate", {}))


# -- configuration validation ------------------------------------------------


def test_config_rejects_zero_bound():
    with pytest.raises(InputError):
        RunConfig("freemonoid", {"generator": "1,1", "bound": 0})


def test_config_rejects_underdimensioned_homology():
    with pytest.raises(InputError):
        RunConfig("homology", {"degree": 2, "dim": 2})


def test_config_from_argv_parses_long_flags():
    config = config_from_argv(
        ["nerve", "--cat", "j", "--max", "2", "--dim", "1", "--seed", "7"]
    )
    assert config.subcommand == "nerve"
    assert config.options["max"] == 2
    assert config.seed == 7


# -- the executable entry point ----------------------------------------------


def test_main_success_writes_report(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(
        ["jcat", "--src", "1,1", "--dst", "2,2", "--output", str(out)]
    )
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["count"] == 4


def test_main_stdout_when_no_output(capsys):
    assert main(["jcat", "--src", "1,1", "--dst", "1,1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["schema"] == "jgamma/report/v1"


def test_main_reports_are_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["homology", "--cat", "j", "--max", "2", "--component", "deg=0"]
    assert main(argv + ["--output", str(a)]) == 0
    assert main(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_main_exit_code_for_input_errors(tmp_path, capsys):
    assert main(["gl1", "--ring", str(tmp_path / "missing.json")]) == 2
    assert main(["homology", "--cat", "j", "--max", "2", "--degree", "2", "--dim", "2"]) == 2
    assert main(["jcat", "--src", "1", "--dst", "2,2"]) == 2


def test_main_exit_code_for_window_exhaustion(capsys):
    code = main(["homology", "--cat", "j", "--max", "2", "--component", "deg=5"])
    assert code == 3


def test_gl1_table_goes_to_stderr(tmp_path, capsys):
    assert main(["gl1", "--ring", ku_ring_file(tmp_path), "--table"]) == 0
    captured = capsys.readouterr()
    assert "Sq^2" in captured.err
    json.loads(captured.out)
