"""JSON encoding for every domain type.

Files are UTF-8 JSON with sorted keys; rational functions are stored as
strings in the ``exactfield`` grammar.  ``KINDS`` maps a kind name to its
``(load, dump)`` pair, which the corpus round-trip check iterates over.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Callable

from hilbert90.errors import ParseError
from hilbert90.exactfield import FinPermutation, RatFunc
from hilbert90.grading import GradedSlice
from hilbert90.linalg import Matrix
from hilbert90.permgroup import CanonicalOpenSubgroup, OpenSubgroupSpec
from hilbert90.permmod import PermModuleExpr
from hilbert90.semilin import CocycleModule, TrivializationWitness


def dumps(data: Any) -> str:
    if hasattr(data, "to_json"):
        data = data.to_json()
    return json.dumps(data, sort_keys=True, ensure_ascii=False)


def read_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{p}: invalid JSON ({exc})") from exc


def write_json(path: str | Path, data: Any) -> None:
    Path(path).write_text(dumps(data) + "\n", encoding="utf-8")


def _load_ratfunc(data) -> RatFunc:
    if isinstance(data, dict):
        return RatFunc.parse(data["value"], data.get("nvars"))
    return RatFunc.parse(data)


def _dump_ratfunc(f: RatFunc):
    return {"value": str(f), "nvars": f.nvars}


def _load_matrix(data) -> Matrix:
    return Matrix.from_strings(data["rows"], data["nvars"])


def _dump_matrix(M: Matrix):
    return {"rows": M.to_strings(), "nvars": M.nvars}


def _load_perm(data) -> FinPermutation:
    if isinstance(data, dict):
        return FinPermutation.parse(data["cycles"], data["n"])
    return FinPermutation(data)


def _dump_perm(p: FinPermutation):
    return {"cycles": str(p), "n": p.n}


def _load_witness(data) -> TrivializationWitness:
    return TrivializationWitness.from_json(data, data["level"])


def _dump_witness(w: TrivializationWitness):
    d = w.to_json()
    d["level"] = w.phi.nvars
    return d


def _load_slice(data) -> GradedSlice:
    return GradedSlice(int(data["degree"]), RatFunc.parse(data["value"], data.get("nvars")))


def _dump_slice(s: GradedSlice):
    d = s.to_json()
    d["nvars"] = s.value.nvars
    return d


KINDS: dict[str, tuple[Callable[[Any], Any], Callable[[Any], Any]]] = {
    "ratfunc": (_load_ratfunc, _dump_ratfunc),
    "matrix": (_load_matrix, _dump_matrix),
    "permutation": (_load_perm, _dump_perm),
    "module": (CocycleModule.from_json, lambda m: m.to_json()),
    "witness": (_load_witness, _dump_witness),
    "subgroup_spec": (OpenSubgroupSpec.from_json, lambda s: s.to_json()),
    "canonical_subgroup": (CanonicalOpenSubgroup.from_json, lambda c: c.to_json()),
    "kappa": (PermModuleExpr.from_json, lambda k: k.to_json()),
    "slice": (_load_slice, _dump_slice),
}


def load(kind: str, data: Any):
    try:
        loader = KINDS[kind][0]
    except KeyError:
        raise ParseError(f"unknown kind {kind!r}") from None
    try:
        return loader(data)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed {kind}: {exc}") from exc


def dump(kind: str, value: Any):
    return KINDS[kind][1](value)


def corpus_files() -> list[tuple[str, Any]]:
    """``(name, document)`` for every bundled corpus file, sorted by name.

    Each document is ``{"kind": ..., "items": [...]}``.
    """
    root = resources.files("hilbert90") / "corpus"
    out = []
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            out.append((entry.name, json.loads(entry.read_text(encoding="utf-8"))))
    return out


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("hilbert90") / "corpus" / name))
