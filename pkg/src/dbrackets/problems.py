"""Problem-file parsing and report assembly for the command-line front end.

One JSON file describes one problem; all scalars are exact ("p" or "p/q"
strings, plain integers also accepted).  Reports are canonical: identical
input bytes produce identical output bytes (timing never enters a report).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .assoc import AssocPresentation
from .bialg import BialgebraPresentation
from .graded import GradedSpace
from .lie import LiePresentation, SubalgebraSplit
from .linf import AInfPresentation, LInfPresentation, LInfMorphismProblem
from .multilinear import MultilinearMap
from .scalars import scalar_from_string, scalar_to_string

SCHEMA = "dbrackets/1"

KINDS = ("lie", "lie-morphism", "subalgebra", "bialgebra", "assoc",
         "assoc-morphism", "linf", "linf-morphism", "ainf")


class ProblemError(ValueError):
    """Malformed problem file (exit code 2 territory)."""


def _scalar(v) -> Fraction:
    if isinstance(v, bool):
        raise ProblemError(f"not a scalar: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return scalar_from_string(v)
        except (ValueError, ZeroDivisionError) as e:
            raise ProblemError(f"bad scalar {v!r}: {e}") from None
    raise ProblemError(f"scalars must be exact strings, got {v!r}")


def _pair_key(s: str) -> tuple[int, int]:
    try:
        i, j = (int(t) for t in s.split(","))
    except ValueError:
        raise ProblemError(f"bad index pair {s!r}; expected 'i,j'") from None
    return i, j


def parse_lie_table(doc: Mapping, what: str = "algebra") -> LiePresentation:
    try:
        dim = int(doc["dim"])
    except (KeyError, TypeError, ValueError):
        raise ProblemError(f"{what}: missing or bad 'dim'") from None
    brackets = {}
    for key, val in (doc.get("brackets") or {}).items():
        i, j = _pair_key(key)
        if not (0 <= i < dim and 0 <= j < dim):
            raise ProblemError(f"{what}: bracket index {key!r} out of range")
        brackets[(i, j)] = {int(k): _scalar(c) for k, c in val.items()}
    return LiePresentation.from_brackets(doc.get("name", what), dim, brackets)


def parse_bialgebra_table(doc: Mapping, what: str = "algebra") -> BialgebraPresentation:
    lie = parse_lie_table(doc, what)
    brackets = {}
    for i in range(lie.dim):
        for j in range(i + 1, lie.dim):
            val = {k: lie.c[i][j][k] for k in range(lie.dim) if lie.c[i][j][k]}
            if val:
                brackets[(i, j)] = val
    cob = {}
    for key, val in (doc.get("cobrackets") or {}).items():
        k = int(key)
        if not 0 <= k < lie.dim:
            raise ProblemError(f"{what}: cobracket index {key!r} out of range")
        cob[k] = {_pair_key(pk): _scalar(c) for pk, c in val.items()}
    return BialgebraPresentation.build(doc.get("name", what), lie.dim,
                                       brackets, cob)


def parse_assoc_table(doc: Mapping, what: str = "algebra") -> AssocPresentation:
    try:
        dim = int(doc["dim"])
    except (KeyError, TypeError, ValueError):
        raise ProblemError(f"{what}: missing or bad 'dim'") from None
    products = {}
    for key, val in (doc.get("products") or {}).items():
        i, j = _pair_key(key)
        if not (0 <= i < dim and 0 <= j < dim):
            raise ProblemError(f"{what}: product index {key!r} out of range")
        products[(i, j)] = {int(k): _scalar(c) for k, c in val.items()}
    return AssocPresentation.build(doc.get("name", what), dim, products)


def parse_matrix(doc, rows: int, cols: int, what: str = "matrix") -> list[list[Fraction]]:
    if not isinstance(doc, list) or len(doc) != rows or \
            any(not isinstance(r, list) or len(r) != cols for r in doc):
        raise ProblemError(f"{what}: expected a {rows}x{cols} matrix")
    return [[_scalar(v) for v in row] for row in doc]


def parse_space(doc: Mapping, what: str = "space") -> GradedSpace:
    degrees = doc.get("degrees")
    if not isinstance(degrees, list) or not degrees:
        raise ProblemError(f"{what}: missing 'degrees'")
    labels = doc.get("labels") or [f"w{i+1}" for i in range(len(degrees))]
    return GradedSpace(doc.get("name", what), tuple(labels),
                       tuple(int(d) for d in degrees))


def parse_maps(space: GradedSpace, docs, degree: int, symmetric: bool,
               what: str, target: GradedSpace | None = None) -> list[MultilinearMap]:
    tgt = target if target is not None else space
    out = []
    if not isinstance(docs, list):
        raise ProblemError(f"{what}: expected a list of per-arity tables")
    for entry in docs:
        try:
            arity = int(entry["arity"])
            rows = entry["entries"]
        except (KeyError, TypeError, ValueError):
            raise ProblemError(f"{what}: bad per-arity table") from None
        items = []
        for r in rows:
            ins = tuple(int(i) for i in r["inputs"])
            if len(ins) != arity:
                raise ProblemError(f"{what}: entry arity mismatch")
            items.append((ins, int(r["output"]), _scalar(r["coeff"])))
        try:
            out.append(MultilinearMap.build(space, tgt, arity, degree, items,
                                            symmetric=symmetric and arity >= 2))
        except ValueError as e:
            raise ProblemError(f"{what}: {e}") from None
    return out


@dataclass
class Problem:
    kind: str
    raw: dict
    payload: dict = field(default_factory=dict)

    @property
    def solver(self) -> dict:
        return self.raw.get("solver") or {}

    @property
    def cutoff(self) -> int | None:
        c = self.raw.get("cutoff")
        return int(c) if c is not None else None


def load_problem(text: str) -> Problem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemError(f"JSON parse error at line {e.lineno}, column {e.colno}: {e.msg}")
    if not isinstance(doc, dict):
        raise ProblemError("top level must be an object")
    schema = doc.get("schema")
    if schema != SCHEMA:
        raise ProblemError(f"unsupported schema {schema!r}; expected {SCHEMA!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ProblemError(f"unknown kind {kind!r}; expected one of {KINDS}")
    p = Problem(kind, doc)
    parse_payload(p)
    return p


def parse_payload(p: Problem) -> None:
    doc, kind = p.raw, p.kind
    pay = p.payload
    if kind == "lie":
        pay["algebra"] = parse_lie_table(_need(doc, "algebra"))
    elif kind == "lie-morphism":
        src = parse_lie_table(_need(doc, "source"), "source")
        tgt = parse_lie_table(_need(doc, "target"), "target")
        pay["source"], pay["target"] = src, tgt
        pay["matrix"] = parse_matrix(_need(doc, "matrix"), tgt.dim, src.dim)
        if "deformation" in doc:
            d = doc["deformation"] or {}
            pay["deformation"] = {
                "source": parse_lie_table({"dim": src.dim, **d.get("source", {})},
                                          "deformation.source"),
                "target": parse_lie_table({"dim": tgt.dim, **d.get("target", {})},
                                          "deformation.target"),
                "matrix": parse_matrix(d.get("matrix",
                                             [["0"] * src.dim] * tgt.dim),
                                       tgt.dim, src.dim, "deformation.matrix"),
            }
    elif kind == "subalgebra":
        g = parse_lie_table(_need(doc, "algebra"))
        ui = tuple(int(i) for i in _need(doc, "u_indices"))
        vi = tuple(int(i) for i in _need(doc, "v_indices"))
        try:
            split = SubalgebraSplit(g, ui, vi)
        except ValueError as e:
            raise ProblemError(str(e)) from None
        pay["split"] = split
        if "matrix" in doc:
            pay["matrix"] = parse_matrix(doc["matrix"], len(vi), len(ui))
    elif kind == "bialgebra":
        if "source" in doc:
            src = parse_bialgebra_table(_need(doc, "source"), "source")
            tgt = parse_bialgebra_table(_need(doc, "target"), "target")
            pay["source"], pay["target"] = src, tgt
            if "matrix" in doc:
                pay["matrix"] = parse_matrix(doc["matrix"], tgt.dim, src.dim)
        else:
            pay["algebra"] = parse_bialgebra_table(_need(doc, "algebra"))
    elif kind == "assoc":
        pay["algebra"] = parse_assoc_table(_need(doc, "algebra"))
    elif kind == "assoc-morphism":
        src = parse_assoc_table(_need(doc, "source"), "source")
        tgt = parse_assoc_table(_need(doc, "target"), "target")
        pay["source"], pay["target"] = src, tgt
        pay["matrix"] = parse_matrix(_need(doc, "matrix"), tgt.dim, src.dim)
    elif kind in ("linf", "ainf"):
        space = parse_space(_need(doc, "space"))
        maps = parse_maps(space, _need(doc, "brackets" if kind == "linf" else "ops"),
                          1, kind == "linf", "brackets")
        if kind == "linf":
            try:
                pay["presentation"] = LInfPresentation(
                    doc.get("name", "linf"), space, tuple(maps))
            except ValueError as e:
                raise ProblemError(str(e)) from None
        else:
            pay["presentation"] = AInfPresentation(
                doc.get("name", "ainf"), space, tuple(maps))
        if "candidate" in doc:
            pay["candidate"] = {int(k): _scalar(v)
                                for k, v in doc["candidate"].items()}
    elif kind == "linf-morphism":
        sdoc, tdoc = _need(doc, "source"), _need(doc, "target")
        ssp = parse_space(_need(sdoc, "space"), "source.space")
        tsp = parse_space(_need(tdoc, "space"), "target.space")
        su = LInfPresentation(sdoc.get("name", "U"), ssp,
                              tuple(parse_maps(ssp, sdoc.get("brackets", []),
                                               1, True, "source.brackets")))
        tv = LInfPresentation(tdoc.get("name", "V"), tsp,
                              tuple(parse_maps(tsp, tdoc.get("brackets", []),
                                               1, True, "target.brackets")))
        entries: dict[int, list] = {}
        for m in _need(doc, "maps"):
            arity = int(m["arity"])
            rows = [(tuple(int(i) for i in r["inputs"]), int(r["output"]),
                     _scalar(r["coeff"])) for r in m["entries"]]
            entries[arity] = rows
        try:
            pay["problem"] = LInfMorphismProblem.build(su, tv, entries)
        except ValueError as e:
            raise ProblemError(str(e)) from None


def _need(doc: Mapping, key: str):
    if key not in doc or doc[key] is None:
        raise ProblemError(f"missing required field {key!r}")
    return doc[key]


# ---------------------------------------------------------------------------
# reports


def serialize_element(elem) -> dict[str, str]:
    from .newton import flatten_terms

    out = {}
    for k, v in flatten_terms(elem).items():
        out[str(k)] = scalar_to_string(v)
    return dict(sorted(out.items()))


def report_json(report: dict, pretty: bool = False) -> str:
    return json.dumps(report, sort_keys=True,
                      indent=2 if pretty else None,
                      separators=None if pretty else (",", ":")) + "\n"
