"""Tests for the command-line front end."""

import json
import math

import pytest

from cuspapprox.cli.main import build_parser, config_from_args, load_artifact, main
from cuspapprox.cli.models import RunConfig
from cuspapprox.engine.approx import good_sequence
from cuspapprox.engine.ford import build_complex
from cuspapprox.engine.groups import GroupSpec
from cuspapprox.engine.hurwitz import hurwitz_estimate

GOLDEN = "1.6180339887498948482045868343656381177"


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def diagnostic(err):
    return json.loads(err.strip().splitlines()[-1])


def test_hurwitz_modular(capsys):
    status, out, _ = run(capsys, "hurwitz", "--ring", "0")
    assert status == 0
    payload = json.loads(out)
    assert payload["K"] == pytest.approx(0.4472135954999579, abs=1e-15)
    assert payload["achieving"] == {"tr": "3", "c": "1"}
    assert payload["certified"] is True
    assert payload["config"]["command"] == "hurwitz"


def test_torus_h2_at_the_modular_torus(capsys):
    status, out, _ = run(capsys, "torus", "h2", "--ell", "1.9248473002384139", "--theta", "3.141592653589793")
    assert status == 0
    payload = json.loads(out)
    assert payload["K"] == pytest.approx(0.4472135955, abs=1e-10)
    assert payload["pentagon"]["f"] == pytest.approx(2.58885438, abs=1e-6)


def test_enum_gaussian_single_row(capsys):
    status, out, _ = run(capsys, "enum", "--ring", "1", "--c-max", "1")
    assert status == 0
    rows = json.loads(out)["rows"]
    assert len(rows) == 1
    assert set(rows[0]) >= {"a", "b", "c", "d", "depth", "endpoint_re", "endpoint_im"}


def test_unsupported_ring_is_a_usage_error(capsys):
    status, out, err = run(capsys, "enum", "--ring", "5")
    assert status == 2
    assert out == ""
    assert diagnostic(err)["error"] == "ValidationError"


def test_approx_needs_a_point(capsys):
    status, _, err = run(capsys, "approx", "--ring", "0")
    assert status == 2
    assert "xi" in diagnostic(err)["message"]


def test_certification_failure_exits_with_one(capsys):
    status, _, err = run(capsys, "approx", "--ring", "0", "--xi", GOLDEN, "--steps", "10", "--c-max", "4")
    assert status == 1
    report = diagnostic(err)
    assert report["error"] == "InsufficientBoundError"
    assert report["certified_prefix"] == 3


def test_curve_change_is_a_usage_error(capsys):
    status, _, err = run(capsys, "torus", "oracle", "--ell", "2.0", "--theta", "1.0")
    assert status == 2
    assert diagnostic(err)["error"] == "RequiresCurveChangeError"


def test_svg_only_for_diagrams(capsys):
    status, _, _ = run(capsys, "hurwitz", "--ring", "0", "--emit", "svg")
    assert status == 2


def test_approx_json_embeds_config_and_is_deterministic(capsys):
    argv = ("approx", "--ring", "0", "--xi", GOLDEN, "--steps", "8")
    status, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert status == 0
    assert first == second
    payload = json.loads(first)
    assert [s["z"] for s in payload["steps"][:3]] == ["2", "3/2", "5/3"]
    assert set(payload["steps"][0]) >= {"n", "gamma", "z", "depth", "dist", "a", "delta", "crossing_t"}
    rebuilt = RunConfig(**payload["config"])
    assert rebuilt == config_from_args(build_parser().parse_args(list(argv)))


def test_random_point_is_seeded(capsys):
    argv = ("approx", "--ring", "1", "--xi", "random", "--seed", "3", "--steps", "5")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert json.loads(first)["config"]["seed"] == 3


def test_yaml_config_with_flag_override(capsys, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("ring: 0\nc_max: 3\ntrace_max: 6\nword_len: 6\n", encoding="utf-8")
    status, out, _ = run(capsys, "hurwitz", "--config", str(path), "--word-len", "4")
    assert status == 0
    assert json.loads(out)["bounds"] == {"ring": 0, "c_max": 3.0, "trace_max": 6.0, "word_len": 4}


def test_bad_config_file(capsys, tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("- just\n- a list\n", encoding="utf-8")
    status, _, err = run(capsys, "hurwitz", "--config", str(path))
    assert status == 2
    assert diagnostic(err)["error"] == "InvalidArgumentError"


def test_torus_grid_csv(capsys):
    status, out, _ = run(capsys, "torus", "grid", "--n", "3", "--emit", "csv")
    assert status == 0
    lines = out.strip().splitlines()
    assert lines[0] == "ell,theta,h2,K,f,t"
    assert len(lines) == 10
    last = lines[-1].split(",")
    assert float(last[0]) == pytest.approx(2 * math.log((3 + math.sqrt(5)) / 2))
    assert float(last[3]) == pytest.approx(1 / math.sqrt(5))


def test_ford_svg_is_reproducible(capsys):
    status, first, _ = run(capsys, "ford", "--ring", "1", "--emit", "svg")
    _, second, _ = run(capsys, "ford", "--ring", "1", "--emit", "svg")
    assert status == 0
    assert first.startswith("<?xml")
    assert "<svg" in first
    assert first == second


def test_approx_svg(capsys):
    status, out, _ = run(capsys, "approx", "--ring", "0", "--xi", GOLDEN, "--steps", "5", "--emit", "svg")
    assert status == 0
    assert "<svg" in out


def test_out_path(capsys, tmp_path):
    target = tmp_path / "ford.json"
    status, out, _ = run(capsys, "ford", "--ring", "3", "--out", str(target))
    assert status == 0
    assert out == ""
    payload = json.loads(target.read_text(encoding="utf-8"))
    assert len(payload["cells"][0]["vertices"]) == 6


def test_spectrum_csv(capsys):
    status, out, _ = run(capsys, "hurwitz", "--ring", "0", "--spectrum", "--c-max", "5", "--trace-max", "3", "--emit", "csv")
    assert status == 0
    lines = out.strip().splitlines()
    assert lines[0] == "height,depth,tr,multiplicity"
    assert float(lines[1].split(",")[0]) <= float(lines[-1].split(",")[0])


GAUSSIAN_XI = "0.3141592653589793+0.2718281828459045i"


def test_approx_artifact_reparses_without_loss(capsys):
    status, out, _ = run(capsys, "approx", "--ring", "1", "--xi", GAUSSIAN_XI, "--steps", "6")
    assert status == 0
    cfg, seq = load_artifact(out)
    assert cfg == RunConfig(command="approx", ring=1, xi=GAUSSIAN_XI, steps=6)
    assert seq == good_sequence(GroupSpec.of(1), GAUSSIAN_XI, 6)
    payload = json.loads(out)
    assert seq.to_dict() == {k: payload[k] for k in seq.to_dict()}


@pytest.mark.parametrize("ring", ["0", "3", "7"])
def test_ford_artifact_reparses_without_loss(capsys, ring):
    status, out, _ = run(capsys, "ford", "--ring", ring)
    assert status == 0
    _, complex_ = load_artifact(out)
    assert complex_ == build_complex(GroupSpec.of(int(ring)), 1.0)


def test_hurwitz_artifact_reparses_without_loss(capsys):
    status, out, _ = run(capsys, "hurwitz", "--ring", "0")
    assert status == 0
    _, result = load_artifact(out)
    assert result == hurwitz_estimate(GroupSpec.of(0), 3.0, 6.0, 6)
    assert result.certified


@pytest.mark.parametrize(
    "argv",
    [
        ("ford", "--ring", "1"),
        ("ford", "--ring", "2", "--c-max", "2"),
        ("approx", "--ring", "0", "--xi", GOLDEN, "--steps", "6"),
        ("approx", "--ring", "3", "--xi", GAUSSIAN_XI, "--steps", "5"),
    ],
)
def test_svg_redrawn_from_json_is_identical(capsys, tmp_path, argv):
    artifact = tmp_path / "artifact.json"
    assert run(capsys, *argv, "--out", str(artifact))[0] == 0
    status, direct, _ = run(capsys, *argv, "--emit", "svg")
    assert status == 0
    status, redrawn, _ = run(capsys, argv[0], "--from-json", str(artifact))
    assert status == 0
    assert redrawn == direct


def test_redraw_rejects_foreign_artifacts(capsys, tmp_path):
    artifact = tmp_path / "hurwitz.json"
    assert run(capsys, "hurwitz", "--ring", "0", "--out", str(artifact))[0] == 0
    status, _, err = run(capsys, "hurwitz", "--from-json", str(artifact))
    assert status == 2
    assert diagnostic(err)["error"] == "InvalidArgumentError"
    status, _, _ = run(capsys, "ford", "--from-json", str(artifact))
    assert status == 2
    status, _, _ = run(capsys, "ford", "--from-json", str(tmp_path / "missing.json"))
    assert status == 2
