import json

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hilbert90.cli import main
from hilbert90.errors import ParseError
from hilbert90.linalg import Matrix, rank_exact, rank_specialized
from hilbert90.rng import SEED_ENV, SeededSource, default_seed
from hilbert90.samples import random_rational_matrix
from hilbert90.serialize import KINDS, corpus_files, corpus_path, dump, dumps, load

from strategies import seeds

X = sympy.symbols("x1:5")


def M(rows, n):
    return Matrix.from_strings(rows, n)


def sym(m):
    loc = {f"x{i + 1}": X[i] for i in range(4)}
    return sympy.Matrix([[sympy.sympify(e.replace("^", "**"), locals=loc) for e in r] for r in m.to_strings()])


# -- ranks ----------------------------------------------------------------------------

def test_rank_examples():
    assert rank_exact(Matrix.identity(3, 1)) == 3
    assert rank_exact(M([["1", "x1"], ["1", "x2"]], 2)) == 2
    assert rank_exact(M([["x1", "x2"], ["2*x1", "2*x2"]], 2)) == 1
    assert rank_exact(Matrix.zeros(2, 3, 2)) == 0


def test_specialized_rank_examples():
    assert rank_specialized(Matrix.identity(3, 2), SeededSource(1)) == 3
    assert rank_specialized(M([["1", "x1"], ["1", "x2"]], 2), SeededSource(42)) == 2
    assert rank_specialized(Matrix.zeros(3, 3, 2), SeededSource(0)) == 0


@settings(max_examples=20)
@given(seeds, st.integers(1, 4), st.integers(1, 4), st.integers(1, 3))
def test_exact_rank_matches_sympy(seed, r, c, n):
    src = SeededSource(seed)
    k = src.randint(0, min(r, c))
    A = random_rational_matrix(r, c, n, src, rank=k)
    assert rank_exact(A) == sym(A).rank(simplify=True)


def test_specialized_rank_never_exceeds_exact_rank():
    src = SeededSource(2024)
    for _ in range(500):
        r, c, n = src.randint(1, 6), src.randint(1, 6), src.randint(1, 4)
        k = src.randint(0, min(r, c))
        A = random_rational_matrix(r, c, n, src, rank=k)
        assert rank_specialized(A, src) <= rank_exact(A) <= k


def test_determinant_and_inverse_agree_with_sympy():
    A = M([["x1", "1", "0"], ["x2", "x1 - 1", "2"], ["1", "0", "x3"]], 3)
    assert sympy.expand(sym(A).det() - sym(Matrix([[A.det()]], 3))[0]) == 0
    assert (A * A.inverse()).is_identity()


# -- randomness ------------------------------------------------------------------------

@given(seeds)
def test_seeded_source_is_reproducible(seed):
    a, b = SeededSource(seed), SeededSource(seed)
    assert [a.randint(-9, 9) for _ in range(20)] == [b.randint(-9, 9) for _ in range(20)]
    assert a.rational() == b.rational()
    assert a.counter == b.counter == 22
    assert a.spawn(3).randint(0, 10 ** 9) == b.spawn(3).randint(0, 10 ** 9)


def test_rational_bounds():
    src = SeededSource(7)
    for _ in range(200):
        q = src.rational()
        assert abs(q.numerator) <= 997 and 1 <= q.denominator <= 97


def test_default_seed_reads_the_environment(monkeypatch):
    monkeypatch.setenv(SEED_ENV, "1234")
    assert default_seed() == 1234
    monkeypatch.delenv(SEED_ENV)
    assert default_seed() == 0


# -- serialization ----------------------------------------------------------------------

def test_corpus_covers_every_kind():
    kinds = {doc["kind"] for _, doc in corpus_files()}
    assert kinds == set(KINDS)


@pytest.mark.parametrize("name,doc", corpus_files(), ids=[n for n, _ in corpus_files()])
def test_corpus_round_trip(name, doc):
    kind = doc["kind"]
    for item in doc["items"]:
        value = load(kind, item)
        again = load(kind, json.loads(dumps(dump(kind, value))))
        assert again == value
        assert dumps(dump(kind, again)) == dumps(dump(kind, value))


def test_unknown_kind_and_malformed_items():
    with pytest.raises(ParseError):
        load("nope", {})
    with pytest.raises(ParseError):
        load("matrix", {"rows": [["1"]]})


def test_dumps_sorts_keys():
    assert dumps({"b": 1, "a": 2}) == '{"a": 2, "b": 1}'


# -- CLI ----------------------------------------------------------------------------------

def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cli_growth(capsys):
    assert run(capsys, "growth", "--q", "1", "--n", "2", "--N", "4")[:2] == (0, "12\n")


def test_cli_tensor_power(capsys):
    code, out, _ = run(capsys, "decompose", "tensor-power", "3", "--level", "5")
    assert code == 0
    assert out.splitlines()[0] == "a = [0, 1, 6, 6]"
    assert "exact rank" in out and "NOT" not in out


def test_cli_product(capsys):
    code, out, _ = run(capsys, "decompose", "product", "1", "2", "--json")
    assert code == 0 and json.loads(out) == {"kappa": {"2": 2, "3": 3}}


def test_cli_grade(capsys):
    assert run(capsys, "grade", "1/(1+x1)", "--degree", "-2")[:2] == (0, "-1/x1^2\n")


def test_cli_split_squares(capsys):
    code, out, _ = run(capsys, "split-squares", "x1 + x2^2")
    assert code == 0 and json.loads(out) == {"[1]": "1", "[]": "x2^2"}


def test_cli_subgroup_from_corpus(capsys):
    code, out, _ = run(capsys, "subgroup", "canon", str(corpus_path("subgroup_specs.json")),
                       "--index", "2", "--level", "6")
    assert code == 0
    assert json.loads(out) == {"T": [1, 2, 3], "H": [[1, 2, 3], [2, 3, 1], [3, 1, 2]]}


def test_cli_trivialize_and_classify(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"level": 3, "rank": 2,
                                "gens": [{"swap": 1, "matrix": [["1", "x2-x1"], ["0", "1"]]}]}))
    code, out, _ = run(capsys, "trivialize", str(path), "--seed", "3")
    assert code == 0 and "phi" in json.loads(out)
    code, out, _ = run(capsys, "classify", str(path))
    assert code == 0 and json.loads(out)["jordan"] == [2]


def test_cli_is_deterministic(capsys):
    path = str(corpus_path("modules.json"))
    first = run(capsys, "trivialize", path, "--index", "1", "--seed", "11")
    second = run(capsys, "trivialize", path, "--index", "1", "--seed", "11")
    assert first == second and first[0] == 0


def test_cli_check_subset(capsys):
    code, out, _ = run(capsys, "check", "all", "--only", "4", "7")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2 and all(line.startswith("[PASS]") for line in lines)


def test_cli_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 64
    assert main([]) == 64


def test_cli_domain_error(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"level": 2, "rank": 1, "gens": [{"swap": 1, "matrix": [["x1"]]}]}))
    code, _, err = run(capsys, "trivialize", str(path))
    assert code == 1 and "not a cocycle" in err


def test_cli_resource_error(capsys):
    den = "+".join(f"x{i}" for i in range(1, 14))
    code, _, err = run(capsys, "split-squares", f"1/({den})")
    assert code == 2 and "resource limit" in err
