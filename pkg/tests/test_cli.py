import json

import pytest

from neronpair import formats
from neronpair.cli import main
from neronpair.fgab import FpAbGroup


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def test_snf(capsys, files):
    path = files("m.txt", "2 2\n2 0\n0 3\n")
    code, out, _ = run(capsys, "snf", path)
    assert code == 0
    assert "chain: 1,6" in out and "cokernel: Z/6" in out and "U*A*V == S: yes" in out


def test_compgroup(capsys, files):
    path = files("u.txt", "1\n5\n")
    code, out, _ = run(capsys, "compgroup", path, "--pairing", "--verify-perfect", "--n", "5")
    assert code == 0
    assert "phi_A = Z/5" in out and "<1,1> = 1/5" in out and "perfect: yes" in out
    code, out, _ = run(capsys, "compgroup", files("id.txt", "2\n1 0\n0 1\n"))
    assert "trivial, trivial" in out


def test_compgroup_singular_is_precondition(capsys, files):
    code, _, err = run(capsys, "compgroup", files("s.txt", "2\n1 2\n2 4\n"))
    assert code == 3 and "degenerate" in err


def test_graph(capsys, files):
    k4 = "4\n" + "".join(f"{a} {b}\n" for a in range(4) for b in range(a + 1, 4))
    code, out, _ = run(capsys, "graph", files("k4.txt", k4), "--pairing")
    assert code == 0
    assert "critical group: Z/4 x Z/4" in out and "trees = 16" in out and "perfect: yes" in out
    code, _, err = run(capsys, "graph", files("d.txt", "3\n0 1\n"))
    assert code == 3


def test_duality(capsys, files):
    code, out, _ = run(capsys, "duality", files("mod.txt", "0; 8\n3\n"))
    assert code == 0
    assert "H0 = Z/2" in out and "H1(dual) = Z/2" in out and "perfect: yes" in out


def test_cech(capsys, files):
    text = "index 0 1 2\n" + "".join(f"group {s} = 1;\n" for s in ("0", "1", "2", "0 1", "1 2", "0 2"))
    code, out, _ = run(capsys, "cech", files("circle.txt", text))
    assert code == 0 and "H0 = Z" in out and "H1 = Z" in out


def test_evaldiag(capsys):
    code, out, _ = run(capsys, "evaldiag", "--q", "8")
    assert code == 0 and "diagram commutes: yes (all 136 cases)" in out
    code, _, _ = run(capsys, "evaldiag", "--q", "1")
    assert code == 3


def test_complex_and_kunneth(capsys, files):
    x = files("x.txt", "term 0 = 1;\nterm 1 = 1;\ndiff 0\n2\n")
    y = files("y.txt", "term 0 = 0; 2\n")
    code, out, _ = run(capsys, "complex", x, "--kunneth", y)
    assert code == 0
    assert "H1 = Z/2" in out and "exact: no" not in out


def test_json_is_deterministic(capsys, files):
    path = files("u.txt", "2\n2 1\n1 3\n")
    outs = [run(capsys, "--format", "json", "compgroup", path, "--pairing")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert data["results"]["phi"]["order"] == 5 and data["status"] == "ok"
    sub = run(capsys, "compgroup", path, "--format", "json")[1]
    assert json.loads(sub)["results"]["det"] == 5


def test_input_errors(capsys, files):
    code, _, err = run(capsys, "snf", files("bad.txt", "2 2\n1 x\n0 1\n"))
    assert code == 2 and "line 2, column 3" in err
    code, _, err = run(capsys, "snf", files("short.txt", "2 2\n1 0\n"))
    assert code == 2 and "unexpected end of input" in err
    code, _, _ = run(capsys, "snf", "/nonexistent/file")
    assert code == 2
    code, _, err = run(capsys, "duality", files("nonaut.txt", "0; 4\n2\n"))
    assert code == 2


def test_parsers():
    assert formats.parse_group("1; 2,4") == FpAbGroup(1, (2, 4))
    with pytest.raises(formats.InputError):
        formats.parse_group("2,4")
    with pytest.raises(formats.InputError) as exc:
        formats.parse_graph("3\n0 7\n")
    assert exc.value.line == 2 and exc.value.column == 3
    F = formats.parse_presheaf("index 0 1\ngroup 0 = 1;\ngroup 1 = 1;\ngroup 0 1 = 0; 2\nmap 0 -> 0 1\n1\nmap 1 -> 0 1\n1\n")
    assert F.value({0, 1}) == FpAbGroup.cyclic(2)
    with pytest.raises(formats.InputError):
        formats.parse_presheaf("index 0 1\ngroup 0 5 = 1;\n")
    X = formats.parse_complex("# comment\nterm -1 = 1;\nterm 0 = 0; 6\ndiff -1\n6\n")
    assert X.cohomology(0) == FpAbGroup.cyclic(6) and X.cohomology(-1) == FpAbGroup.free(1)
    with pytest.raises(formats.InputError):
        formats.parse_complex("term 0 = 1;\nterm 2 = 1;\n")
    M = formats.parse_module("0; 2,2\n1 1\n0 1\n")
    assert M.order == 2
