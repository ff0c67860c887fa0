import json

import pytest

from adeliceis.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_orbit_commands(capsys):
    code, d = run(capsys, "orbit", "reduce", "--v", "4,6")
    assert code == 0 and d["alpha"] == 2 and d["format"] == 1
    W = d["witness"]
    assert [W[0][0] * 4 + W[0][1] * 6, W[1][0] * 4 + W[1][1] * 6] == [2, 0]
    _, g = run(capsys, "orbit", "global", "--v", "1,0", "--M", "1", "--N", "3")
    _, o = run(capsys, "orbit", "oracle", "--v", "1,0", "--N", "3", "--group", "full")
    assert len(g["residues"]) == 8 and g["residues"] == o["residues"]
    _, loc = run(capsys, "orbit", "local", "--v", "3,0", "--ell", "3", "--i", "0", "--j", "2")
    assert loc["kind"] == "sphere" and len(loc["residues"]) == 8


def test_eis_parametrize(capsys):
    code, d = run(capsys, "eis", "parametrize", "--phi", "basis:1,0@3", "--k", "2")
    assert code == 0
    assert d["class"]["terms"] == [{"residue": [1, 0], "coeff": "9"}]
    code, d = run(capsys, "eis", "parametrize", "--phi", "sphere:3@9", "--k", "1", "--path", "all",
                  "--group", "full:9")
    assert code == 0 and d["agree"]
    assert len(d["class"]["terms"]) == 72 and {t["coeff"] for t in d["class"]["terms"]} == {"27"}


def test_eis_normal_form_roundtrip(capsys):
    _, d = run(capsys, "eis", "normal-form", "--class", "eps:3,0@9", "--k", "1")
    assert len(d["class"]["terms"]) == 9
    assert {t["coeff"] for t in d["class"]["terms"]} == {"3"}
    _, again = run(capsys, "eis", "normal-form", "--class", json.dumps(d["class"]))
    assert again == d


def test_schwartz_commands(capsys):
    _, d = run(capsys, "schwartz", "act", "--phi", "basis:1,0@3", "--g", "diag:1,1/3")
    assert [c["residue"] for c in d["function"]["coeffs"]] == [[1, 0], [1, 1], [1, 2]]
    _, d = run(capsys, "schwartz", "check", "--phi", "basis:1,0@3", "--group", "full:3")
    assert d["invariant"] is False
    _, d = run(capsys, "schwartz", "induce", "--phi", "basis:1,0@9", "--sub", "principal:9",
               "--group", "principal:3")
    assert d["function"]["coeffs"] == [{"residue": [1, 0], "value": "9"}]
    _, back = run(capsys, "schwartz", "canonical", "--phi", json.dumps(d["function"]))
    assert back["function"] == d["function"]


def test_sums_and_products(capsys):
    _, d = run(capsys, "schwartz", "canonical", "--phi", "2*basis:1,0@3 - basis:0,1@3")
    assert {c["value"] for c in d["function"]["coeffs"]} == {"2", "-1"}
    _, d = run(capsys, "eis", "act", "--class", "eps:1,0@3", "--k", "2", "--g", "z:3")
    assert d["class"]["terms"] == [{"residue": [1, 0], "coeff": "9"}]


@pytest.mark.parametrize("argv,code", [
    (("orbit", "reduce", "--v", "4,x"), 1),
    (("orbit", "global", "--v", "1,0"), 1),
    (("eis", "parametrize", "--phi", "blob:1@3", "--k", "0"), 1),
    (("eis", "normal-form", "--class", "{not json"), 1),
    (("nonsense",), 1),
    (("eis", "parametrize", "--phi", "basis:1,0@9", "--k", "1", "--group", "full:9"), 2),
    (("eis", "parametrize", "--phi", "basis:1,0@5", "--k", "1"), 2),
    (("orbit", "global", "--v", "1,0", "--M", "1", "--N", "10"), 2),
])
def test_exit_codes(capsys, argv, code):
    assert main(list(argv)) == code


def test_env_config(capsys, tmp_path, monkeypatch):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"c": 3}))
    monkeypatch.setenv("ENGINE_CONFIG", str(path))
    # with c = 3 the level 3 is no longer admissible
    assert main(["eis", "parametrize", "--phi", "basis:1,0@3", "--k", "0"]) == 2
    assert main(["--c", "2", "eis", "parametrize", "--phi", "basis:1,0@3", "--k", "0"]) == 0


def test_axioms_command(capsys):
    code, d = run(capsys, "axioms", "check", "--functor", "schwartz", "--levels", "3")
    assert code == 0 and d["passed"]
    code, d = run(capsys, "axioms", "check", "--functor", "schwartz", "--levels", "3",
                  "--fault", "drop-coset")
    assert code == 3
    assert {r["axiom"]: r["status"] for r in d["reports"]}["Co"] == "falsified"


def test_selftest_subset(capsys):
    code, d = run(capsys, "selftest", "--criteria", "11")
    assert code == 0 and d["passed"]
    code, d = run(capsys, "selftest", "--criteria", "1,11", "--inject-fault", "orbit-coset")
    assert code == 3 and d["failed"] == ["1: orbit closed form equals breadth-first orbit"]


def test_selftest_genus2(capsys):
    code, d = run(capsys, "--genus", "2", "selftest", "--levels", "3")
    assert code == 0 and [r["criterion"] for r in d["results"]] == [1, 2, 4, 11]


def test_selftest_is_deterministic(capsys):
    main(["selftest", "--criteria", "10,11"])
    a = capsys.readouterr().out
    main(["selftest", "--criteria", "10,11"])
    assert capsys.readouterr().out == a
