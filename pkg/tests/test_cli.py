import json

import numpy as np
import pytest

from lapsep import formats
from lapsep.cli import main
from lapsep.engine import separable_decomposition
from lapsep.errors import ParseError
from lapsep.generators import generate, make_rng, random_graph
from lapsep.tensor import TensorShape

E1_GRAPH = "# single entangled edge\ngraph 2 2 1\n1 1 2 2 1\n"
E2_GRAPH = "graph 2 2 2\n1 1 2 1 1\n1 2 2 2 1.0\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def test_matrix_round_trip(rng):
    a = rng.normal(size=(6, 6)) * 10.0 ** rng.integers(-20, 20, size=(6, 6))
    text = formats.write_matrix(a, TensorShape(2, 3))
    b, shape = formats.read_matrix(text)
    np.testing.assert_array_equal(a, b)
    assert shape == TensorShape(2, 3)
    assert formats.write_matrix(b, shape) == text


def test_graph_round_trip():
    g = random_graph((3, 4), make_rng(1))
    assert formats.read_graph(formats.write_graph(g)) == g


def test_decomposition_round_trip():
    a = generate("v1", 3, 2, 4, "separable")
    d = separable_decomposition(a, (3, 2), "V")
    d2 = formats.read_decomposition(formats.write_decomposition(d))
    assert d2.shape == d.shape and len(d2) == len(d)
    for t1, t2 in zip(d.terms, d2.terms):
        assert t1.weight == t2.weight
        np.testing.assert_array_equal(t1.a, t2.a)
        np.testing.assert_array_equal(t1.b, t2.b)


@pytest.mark.parametrize("text,line", [
    ("4 2 2\n1 0 0 0\n", None),
    ("4 2 3\n", 1),
    ("2 1 2\n1 x\n0 1\n", 2),
    ("graph 2 2 1\n1 1 3 1 1\n", 2),
    ("graph 2 2 1\n1 1 2 2 -1\n", None),
    ("decomp 1 1 1\n1\n1 0\n", None),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        kind = formats.detect_format(text)
        {"matrix": formats.read_matrix, "graph": formats.read_graph, "decomp": formats.read_decomposition}[kind](text)
    if line is not None:
        assert info.value.line == line


def test_classify_e1(write, capsys):
    assert main(["classify", write("e1.txt", E1_GRAPH)]) == 1
    assert capsys.readouterr().out.strip() == "Entangled (rule R2), witness eigenvalue -0.5"


def test_classify_e2(write, capsys):
    assert main(["classify", write("e2.txt", E2_GRAPH)]) == 0
    assert capsys.readouterr().out.strip() == "Separable (rule R4), 2 terms"


def test_classify_json(write, capsys):
    assert main(["classify", "--json", write("e1.txt", E1_GRAPH)]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "Entangled" and report["rule"] == "R2"
    assert report["witness"]["eigenvalue"] == pytest.approx(-0.5, abs=1e-12)
    assert report["tol"] == 1e-9 and "classify_s" in report["timings"]


def test_classify_bad_header(write):
    assert main(["classify", write("bad.txt", "4 2 x\n")]) == 3
    assert main(["classify", write("bad2.txt", "graph 2 2\n")]) == 3
    assert main(["classify", "/nonexistent/file"]) == 3


def test_classify_unknown_exit_code(write):
    x = np.kron([0.6, 0.8, 0.0], np.array([1.0, 2.0, -2.0]) / 3)
    path = write("m.txt", formats.write_matrix(np.outer(x, x), TensorShape(3, 3)))
    assert main(["classify", path]) == 2


def test_classify_batch(write, capsys):
    paths = [write("e1.txt", E1_GRAPH), write("e2.txt", E2_GRAPH)]
    assert main(["classify", "--jobs", "2", *paths]) == 1
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith(paths[0]) and "Entangled" in out[0]
    assert out[1].startswith(paths[1]) and "Separable" in out[1]


def test_decompose_and_verify(write, tmp_path):
    out = tmp_path / "e2.decomp"
    e2 = write("e2.txt", E2_GRAPH)
    assert main(["decompose", e2, str(out)]) == 0
    d = formats.read_decomposition(out.read_text())
    assert len(d) == 2 and [t.weight for t in d.terms] == [0.5, 0.5]
    assert main(["verify", e2, str(out)]) == 0

    text = out.read_text().splitlines()
    text[1] = "0.4"
    typo = write("typo.decomp", "\n".join(text) + "\n")
    assert main(["verify", e2, typo]) == 1
    assert main(["verify", e2, write("empty.decomp", "decomp 2 2 0\n")]) == 1
    assert main(["verify", e2, write("wrong.decomp", "decomp 1 4 0\n")]) == 3


def test_decompose_entangled(write, tmp_path):
    out = tmp_path / "e1.decomp"
    assert main(["decompose", write("e1.txt", E1_GRAPH), str(out)]) == 1
    assert not out.exists()


def test_decompose_identity(write, tmp_path):
    path = write("id.txt", formats.write_matrix(np.eye(4) / 4, TensorShape(2, 2)))
    out = tmp_path / "id.decomp"
    assert main(["decompose", path, str(out)]) == 0
    assert len(formats.read_decomposition(out.read_text())) == 4


def test_ptranspose(write, tmp_path):
    d = np.diag([0.1, 0.2, 0.3, 0.4])
    text = formats.write_matrix(d, TensorShape(2, 2))
    out = tmp_path / "pt.txt"
    assert main(["ptranspose", write("d.txt", text), str(out)]) == 0
    assert out.read_text() == text


def test_witness(write, capsys):
    assert main(["witness", write("e1.txt", E1_GRAPH)]) == 1
    assert capsys.readouterr().out.splitlines()[0] == "witness eigenvalue -0.5"
    assert main(["witness", write("e2.txt", E2_GRAPH)]) == 0
    assert capsys.readouterr().out.strip() == "none"


def test_gen_entangled(tmp_path):
    out = tmp_path / "ent.txt"
    assert main(["gen", "s10", "2", "2", "--seed", "1", "--kind", "entangled", "-o", str(out)]) == 0
    assert main(["classify", str(out)]) == 1


def test_gen_separable(tmp_path):
    out = tmp_path / "sep.txt"
    assert main(["gen", "s1", "2", "3", "--seed", "7", "--kind", "separable", "-o", str(out)]) == 0
    assert main(["classify", str(out)]) == 0
    assert main(["verify", str(out), str(out) + ".decomp"]) == 0


def test_gen_random_v1(tmp_path):
    out = tmp_path / "v1.txt"
    assert main(["gen", "v1", "3", "3", "--seed", "2", "--kind", "random", "-o", str(out)]) == 0
    from lapsep.classes import classify_membership
    a, _ = formats.read_matrix(out.read_text())
    assert classify_membership(a).in_V1


def test_gen_infeasible(tmp_path):
    out = tmp_path / "x.txt"
    assert main(["gen", "s10", "2", "1", "--kind", "entangled", "-o", str(out)]) == 3
    assert main(["gen", "s10", "0", "2", "-o", str(out)]) == 3
    assert not out.exists()


def test_gen_is_byte_identical(tmp_path):
    paths = [tmp_path / "a.txt", tmp_path / "b.txt"]
    for p in paths:
        assert main(["gen", "s1", "3", "2", "--seed", "42", "--kind", "separable", "-o", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert (tmp_path / "a.txt.decomp").read_bytes() == (tmp_path / "b.txt.decomp").read_bytes()


def test_bad_arguments():
    assert main(["classify"]) == 3
    assert main(["frobnicate"]) == 3
