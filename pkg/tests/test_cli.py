import io
import json

import jsonschema
import pytest

from blochlab.cli import OUTPUT_SCHEMA, parse_vector, run

FAST = ["--samples", "300", "--schedule", "0.5,0.9"]


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def doc_of(argv):
    code, out, err = call(argv)
    assert code == 0, err
    doc = json.loads(out)
    jsonschema.validate(doc, OUTPUT_SCHEMA)
    return doc


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, doc in {
        "rot": {"kind": "mobius_disk", "a": 0, "rotation": "1/6"},
        "half": {"kind": "expr", "n": 1, "components": ["z1/2"]},
        "diag": {"kind": "diagonal", "n": 2},
        "dup": {"kind": "expr", "n": 2, "components": ["z1", "z1"]},
        "sym": {"lambdas": ["1/3"], "tau": [1], "class": "automorphism"},
        "unknown": {"lambdas": ["1/3"], "tau": [1], "class": "unknown"},
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    return paths


def test_parse_vector():
    assert list(parse_vector("[0.5,0;0,-1]")) == [0.5, -1j]


def test_domain_info():
    doc = doc_of(["domain", "info", "cartan3:5"])
    assert doc["value"] == pytest.approx(0.5)
    assert doc["extra"]["dimension"] == 10 and doc["extra"]["rank"] == 2


def test_seminorm_example():
    doc = doc_of(["seminorm", "--domain", "disk", "--function", "z1^2", "--samples", "2000"])
    assert doc["value"] == pytest.approx(0.769800, abs=1e-4)
    assert doc["seed"] == 42 and doc["config"]["samples"] == 2000
    assert len(doc["witness"]) == 1


def test_spectrum_example(files):
    doc = doc_of(["spectrum", "--symbol", files["sym"]])
    assert doc["extra"]["elements"] == ["0/3", "1/3", "2/3"]


def test_inline_documents():
    doc = doc_of(["spectrum", "--symbol", '{"lambdas": ["1/2", "0/1"], "tau": [2, 1]}'])
    assert doc["extra"]["elements"] == ["0/2", "1/2"]


def test_metric_and_distance():
    doc = doc_of(["metric", "--domain", "ball:2", "--point", "[0,0;0,0]", "--u", "[1,0;0,0]"])
    assert doc["value"] == pytest.approx(1.5)
    doc = doc_of(["distance", "--domain", "ball:2", "--from", "[0,0;0,0]", "--to", "[0.5,0;0,0]", "--normalization", "zhu"])
    assert doc["value"] == pytest.approx(0.549306, abs=1e-6)


def test_map_commands(files):
    doc = doc_of(["dilation", "--domain", "polydisk:2", "--map", files["diag"], "--point", "[0.3,0;0,0.2]"])
    assert doc["value"] == pytest.approx(2**0.5, abs=1e-10)
    doc = doc_of(["bergman-constant", "--domain", "disk", "--map", files["rot"], *FAST])
    assert doc["value"] == pytest.approx(1.0, abs=1e-9)
    doc = doc_of(["norm-bounds", "--domain", "disk", "--map", files["rot"], *FAST])
    assert doc["extra"]["lower"] == 1.0
    doc = doc_of(["isometry-check", "--domain", "disk", "--map", files["half"], *FAST])
    assert doc["extra"]["verdict"] == "FailsNecessaryCondition"
    doc = doc_of(["neccond", "--domain", "polydisk:2", "--map", files["dup"], *FAST])
    assert doc["extra"]["verdict"] == "FailsNecessaryCondition"
    assert doc["config"]["tol"] == 1e-6


def test_output_is_deterministic():
    argv = ["seminorm", "--domain", "ball:2", "--function", "z1*z2 + z1^2", *FAST, "--seed", "5"]
    assert call(argv)[1] == call(argv)[1]


def test_table_renders_same_fields():
    argv = ["domain", "info", "ball:3"]
    doc = doc_of(argv)
    code, out, _ = call(argv + ["--format", "table"])
    assert code == 0
    keys = {line.split()[0] for line in out.splitlines()}
    assert {"command", "value", "seed", "extra.rank", "config.samples", "warnings"} <= keys
    assert len(keys) >= len(doc) + len(doc["extra"]) - 1


def test_dump_samples(tmp_path):
    target = tmp_path / "pts.json"
    doc_of(["seminorm", "--domain", "disk", "--function", "z1", *FAST, "--dump-samples", str(target)])
    pts = json.loads(target.read_text())
    assert len(pts) == 1 + 300 and all(len(p) == 1 for p in pts)


@pytest.mark.parametrize(
    "argv,code",
    [
        ([], 2),
        (["frobnicate"], 2),
        (["seminorm", "--domain", "disk"], 2),
        (["domain", "info", "torus:2"], 3),
        (["metric", "--domain", "disk", "--point", "[1,0]", "--u", "[1,0]"], 3),
        (["seminorm", "--domain", "disk", "--function", "z2"], 3),
        (["seminorm", "--domain", "disk", "--function", "z1", "--samples", "0"], 3),
        (["seminorm", "--domain", "disk", "--function", "z1", "--schedule", "0.9,0.5"], 3),
        (["distance", "--domain", "cartan4:5", "--from", "[0,0;0,0;0,0;0,0;0,0]", "--to", "[0,0;0,0;0,0;0,0;0,0]"], 3),
        (["dilation", "--domain", "disk", "--map", '{"kind": "expr", "n": 1, "components": ["1/(z1-0.5)"]}', "--point", "[0.5,0]"], 4),
    ],
)
def test_exit_codes(argv, code):
    assert call(argv)[0] == code


def test_exit_code_for_unclassified_symbol(files):
    code, _, err = call(["spectrum", "--symbol", files["unknown"]])
    assert code == 3 and "classified" in err
