import json
from importlib import resources

import jsonschema

from pittslab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def schema(name):
    path = resources.files("pittslab") / "data" / "schemas" / name
    return json.loads(path.read_text(encoding="utf-8"))


def validate(payload, schema_name):
    jsonschema.validate(payload, schema(schema_name))


def test_prove_exit_codes(capsys):
    code, out, _ = run(capsys, "prove", "|- P -> P")
    assert code == 0 and out.startswith("provable")
    code, out, _ = run(capsys, "prove", "|- P \\/ ~P")
    assert code == 1 and out.startswith("refuted")


def test_prove_json_validates(capsys):
    code, out, _ = run(capsys, "prove", "--format", "json", "|- P \\/ ~P")
    assert code == 1
    payload = json.loads(out)
    validate(payload, "prove_result.schema.json")
    assert payload["countermodel"]["worlds"] == [0, 1]


def test_usage_error_is_exit_two(capsys):
    code, _, err = run(capsys, "prove", "P ->")
    assert code == 2 and "error" in err


def test_interpolate_matches_reference_value(capsys):
    code, out, _ = run(
        capsys, "interpolate", "--exists", "--var", "Y", "(~Y -> X1) /\\ (~~Y -> X2)"
    )
    assert code == 0
    from pittslab.parser import parse_formula
    from pittslab.prover import equivalent

    got = parse_formula(out.strip().splitlines()[0])
    assert equivalent(got, parse_formula("(~X1 -> X2) /\\ (~X2 -> X1)"))


def test_interpolate_json_and_validation_gate(capsys):
    code, out, _ = run(
        capsys,
        "interpolate", "--exists", "--var", "Y", "--validate", "--probe-budget", "4",
        "--format", "json", "(Y \\/ ~Y) -> (P /\\ Q)",
    )
    assert code == 0
    payload = json.loads(out)
    validate(payload, "interpolate_result.schema.json")
    assert payload["validated"] is True


def test_interpolate_forall(capsys):
    code, out, _ = run(capsys, "interpolate", "--forall", "--var", "Y", "X \\/ Y")
    assert code == 0
    assert out.strip() == "X"


def test_replay_text_and_json(capsys):
    code, out, _ = run(capsys, "replay", "tara")
    assert code == 0
    assert out.strip().splitlines()[-1] == "  derived: ~~P |- P"
    code, out, _ = run(capsys, "replay", "kreisel", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    validate(payload, "replay_report.schema.json")


def test_check_bundled_script(capsys, tmp_path):
    from pittslab.replays import script_root

    root = script_root()
    code, out, _ = run(
        capsys,
        "check", str(root / "polacik" / "three_in_one.pfs"),
        "--theory", "polacik/theory.thy",
    )
    assert code == 0 and out.startswith("accepted")
    bad = tmp_path / "broken.pfs"
    bad.write_text("1 | |- bot | ipc\n")
    code, out, _ = run(capsys, "check", str(bad), "--format", "json")
    assert code == 1
    payload = json.loads(out)
    validate(payload, "check_result.schema.json")
    assert payload["failure"]["line"] == 1


def test_check_malformed_is_exit_two(capsys, tmp_path):
    bad = tmp_path / "malformed.pfs"
    bad.write_text("not a script at all\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "error" in err


def test_extract_aux_command(capsys):
    from pittslab.replays import script_root

    tree = script_root().parent / "trees" / "witness_first.tree"
    code, out, _ = run(
        capsys,
        "extract-aux", str(tree),
        "--body", "(Y \\/ ~Y) -> (P /\\ Q)", "--var", "Y",
        "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    validate(payload, "extract_result.schema.json")
    assert payload["witness"] == "P /\\ Q"
    assert payload["auxiliary"] is True


def test_rn_classify_command(capsys):
    code, out, _ = run(capsys, "rn-classify", "~~~X", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    validate(payload, "rn_class.schema.json")
    assert payload["representative"] == "~X"


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--quick", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    validate(payload, "selftest_report.schema.json")
    assert payload["ok"] is True


def test_byte_identical_output_across_runs(capsys):
    first = run(capsys, "prove", "--format", "json", "|- ~P \\/ ~~P")
    second = run(capsys, "prove", "--format", "json", "|- ~P \\/ ~~P")
    assert first == second
    a = run(capsys, "interpolate", "--exists", "--var", "Y", "P <-> (~Y \\/ ~~Y)")
    b = run(capsys, "interpolate", "--exists", "--var", "Y", "P <-> (~Y \\/ ~~Y)")
    assert a == b


def test_interpolate_forall_with_probe_gate(capsys):
    code, out, _ = run(
        capsys,
        "interpolate", "--forall", "--var", "Y", "--validate",
        "--probe-budget", "6", "--format", "json", "X \\/ Y",
    )
    assert code == 0
    payload = json.loads(out)
    validate(payload, "interpolate_result.schema.json")
    assert payload["validated"] is True and payload["interpolant"] == "X"
