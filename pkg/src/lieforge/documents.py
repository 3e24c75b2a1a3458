"""JSON documents for algebras, morphisms, representations, deformations and functor suites.

Every document is a UTF-8 JSON object with a ``"kind"`` key.  References to
other documents are either relative file paths (resolved against the
referring file) or inline objects of the expected kind.  Parse errors carry
the JSON path of the offending value, e.g. ``$.brackets[2].value[0]``.

Unknown keys are rejected unless ``lax=True``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .artin import (
    AlgebraMorphism,
    AlgExtension,
    ArtinError,
    ArtinLocalAlgebra,
    extension_from_surjection,
    validate_artin,
)
from .coeff import CoeffError, CoeffRing, Mat
from .deformation import DeformationError, LieDeformation
from .graded_lie import (
    GradedLieAlgebra,
    GradedMorphism,
    LieError,
    reduce_mod_l,
    validate,
    validate_morphism,
)
from .rep_deform import GradedRep, RepError

KINDS = ("lie", "artin", "morphism", "rep", "deformation", "extension", "functor-suite")


class DocumentError(ValueError):
    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


# ------------------------------------------------------------ primitives


class _Ctx:
    def __init__(self, base_dir: str, lax: bool, cache: dict | None = None, stack: tuple = ()):
        self.base_dir = base_dir
        self.lax = lax
        self.cache = {} if cache is None else cache
        self.stack = stack


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _reject_constant(name):
    raise ValueError(f"non-standard JSON constant {name}")


def loads(text: str) -> Any:
    try:
        return json.loads(text, object_pairs_hook=_no_duplicates, parse_constant=_reject_constant)
    except json.JSONDecodeError as e:
        raise DocumentError("$", f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    except ValueError as e:
        raise DocumentError("$", f"invalid JSON: {e}") from None


def _obj(v, path: str, ctx: _Ctx, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict:
    if not isinstance(v, dict):
        raise DocumentError(path, "expected an object")
    for k in required:
        if k not in v:
            raise DocumentError(path, f"missing key {k!r}")
    if not ctx.lax:
        allowed = set(required) | set(optional)
        for k in v:
            if k not in allowed:
                raise DocumentError(f"{path}.{k}", "unknown key")
    return v


def _int(v, path: str, lo: int | None = None, hi: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise DocumentError(path, "expected an integer")
    if lo is not None and v < lo:
        raise DocumentError(path, f"must be >= {lo}")
    if hi is not None and v > hi:
        raise DocumentError(path, f"must be <= {hi}")
    return v


def _list(v, path: str, length: int | None = None) -> list:
    if not isinstance(v, list):
        raise DocumentError(path, "expected an array")
    if length is not None and len(v) != length:
        raise DocumentError(path, f"expected {length} entries, got {len(v)}")
    return v


def _str(v, path: str) -> str:
    if not isinstance(v, str):
        raise DocumentError(path, "expected a string")
    return v


def _ring(v, path: str, ctx: _Ctx) -> CoeffRing:
    o = _obj(v, path, ctx, ("l", "N"))
    l = _int(o["l"], f"{path}.l", 2)
    N = _int(o["N"], f"{path}.N", 1)
    try:
        return CoeffRing(l, N)
    except CoeffError as e:
        raise DocumentError(path, str(e)) from None


def _sparse(v, path: str, size: int, q: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for n, entry in enumerate(_list(v, path)):
        p = f"{path}[{n}]"
        e = _list(entry, p, 2)
        idx = _int(e[0], f"{p}[0]", 0)
        if idx >= size:
            raise DocumentError(f"{p}[0]", f"index {idx} out of range (size {size})")
        if idx in out:
            raise DocumentError(f"{p}[0]", f"index {idx} listed twice")
        out[idx] = _int(e[1], f"{p}[1]") % q
    return out


def _reference(v, path: str, ctx: _Ctx, kind: str):
    """A referenced document: relative path string or inline object."""
    if isinstance(v, str):
        full = os.path.normpath(os.path.join(ctx.base_dir, v))
        key = (full, kind)
        if key in ctx.cache:
            return ctx.cache[key]
        if full in ctx.stack:
            raise DocumentError(path, f"circular reference to {v}")
        try:
            with open(full, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise DocumentError(path, f"cannot read {v}: {e.strerror}") from None
        sub = _Ctx(os.path.dirname(full), ctx.lax, ctx.cache, ctx.stack + (full,))
        try:
            obj = _parse_value(loads(text), "$", sub, kind)
        except DocumentError as e:
            raise DocumentError(path, f"in {v}: {e}") from None
        ctx.cache[key] = obj
        return obj
    if isinstance(v, dict):
        return _parse_value(v, path, ctx, kind)
    raise DocumentError(path, "expected a file reference or an inline document")


# ------------------------------------------------------------- lie algebras


def _parse_lie(o: dict, path: str, ctx: _Ctx) -> GradedLieAlgebra:
    _obj(o, path, ctx, ("kind", "ring", "degrees", "basis", "brackets"))
    ring = _ring(o["ring"], f"{path}.ring", ctx)
    q = ring.modulus
    ranks = [_int(x, f"{path}.degrees[{i}]", 0) for i, x in enumerate(_list(o["degrees"], f"{path}.degrees"))]
    d = len(ranks)
    basis = _list(o["basis"], f"{path}.basis", d)
    labels: list[str] = []
    for i, piece in enumerate(basis):
        p = f"{path}.basis[{i}]"
        for j, lab in enumerate(_list(piece, p, ranks[i])):
            lab = _str(lab, f"{p}[{j}]")
            if not lab or lab in labels:
                raise DocumentError(f"{p}[{j}]", f"label {lab!r} is empty or repeated")
            labels.append(lab)
    offsets = [0]
    for r in ranks:
        offsets.append(offsets[-1] + r)

    def position(v, p: str) -> tuple[int, int]:
        e = _list(v, p, 2)
        deg = _int(e[0], f"{p}[0]", 1, d)
        idx = _int(e[1], f"{p}[1]", 0)
        if idx >= ranks[deg - 1]:
            raise DocumentError(f"{p}[1]", f"degree {deg} has {ranks[deg - 1]} basis elements")
        return deg, idx

    given: dict[tuple[int, int], tuple[str, dict[int, int]]] = {}
    brackets: dict[tuple[int, int], dict[int, int]] = {}
    for n, b in enumerate(_list(o["brackets"], f"{path}.brackets")):
        p = f"{path}.brackets[{n}]"
        _obj(b, p, ctx, ("left", "right", "value"))
        ld, li = position(b["left"], f"{p}.left")
        rd, ri = position(b["right"], f"{p}.right")
        i, j = offsets[ld - 1] + li, offsets[rd - 1] + ri
        if i == j:
            raise DocumentError(p, f"bracket [{labels[i]},{labels[i]}] of an element with itself")
        s = ld + rd
        vals: dict[int, int] = {}
        for m, entry in enumerate(_list(b["value"], f"{p}.value")):
            pe = f"{p}.value[{m}]"
            e = _list(entry, pe)
            if len(e) == 3:
                deg = _int(e[0], f"{pe}[0]")
                if deg != s:
                    raise DocumentError(pe, f"grading violation: [{labels[i]},{labels[j]}] lies in degree {s}, value given in degree {deg}")
                e = e[1:]
            elif len(e) != 2:
                raise DocumentError(pe, "expected [idx, coeff] or [deg, idx, coeff]")
            idx = _int(e[0], f"{pe}[0]", 0)
            c = _int(e[1], f"{pe}[1]") % q
            if s > d:
                if c:
                    raise DocumentError(pe, f"grading violation: [{labels[i]},{labels[j]}] has degree {s} above the truncation {d}")
                continue
            if idx >= ranks[s - 1]:
                raise DocumentError(f"{pe}[0]", f"grading violation: degree {s} has {ranks[s - 1]} basis elements")
            if offsets[s - 1] + idx in vals:
                raise DocumentError(f"{pe}[0]", f"index {idx} listed twice")
            vals[offsets[s - 1] + idx] = c
        key = (min(i, j), max(i, j))
        if i > j:
            vals = {k: (-c) % q for k, c in vals.items()}
        if key in given:
            other, before = given[key]
            same = {k: c for k, c in before.items() if c} == {k: c for k, c in vals.items() if c}
            what = "bracket given twice" if same else "antisymmetry violation"
            raise DocumentError(p, f"{what}: {other} and {p} both define [{labels[key[0]]},{labels[key[1]]}]")
        given[key] = (p, vals)
        brackets[key] = vals
    try:
        L = GradedLieAlgebra.from_brackets(ring, ranks, brackets, labels)
    except LieError as e:
        raise DocumentError(path, str(e)) from None
    report = validate(L)
    if not report.ok:
        issue = report.issues[0]
        names = ", ".join(labels[k] for k in issue.indices)
        if issue.kind == "jacobi":
            raise DocumentError(f"{path}.brackets", f"Jacobi identity fails on ({names}): residual {list(issue.residual)}")
        raise DocumentError(f"{path}.brackets", issue.describe(labels))
    return L


def dump_lie(L: GradedLieAlgebra) -> dict:
    brackets = []
    for (i, j), vec in sorted(L.table.items()):
        if i >= j:
            continue
        s = L.degrees[i] + L.degrees[j]
        off = L.offsets[s - 1]
        brackets.append(
            {
                "left": [L.degrees[i], i - L.offsets[L.degrees[i] - 1]],
                "right": [L.degrees[j], j - L.offsets[L.degrees[j] - 1]],
                "value": [[k - off, c] for k, c in vec],
            }
        )
    return {
        "kind": "lie",
        "ring": {"l": L.ring.l, "N": L.ring.N},
        "degrees": list(L.ranks),
        "basis": [[L.labels[k] for k in L.piece(d)] for d in range(1, L.truncation + 1)],
        "brackets": brackets,
    }


# ------------------------------------------------------------ artin algebras


def _parse_artin(o: dict, path: str, ctx: _Ctx) -> ArtinLocalAlgebra:
    _obj(o, path, ctx, ("kind", "ring", "rank", "unit", "table", "maximal"), ("labels",))
    ring = _ring(o["ring"], f"{path}.ring", ctx)
    q = ring.modulus
    r = _int(o["rank"], f"{path}.rank", 1)
    unit = _int(o["unit"], f"{path}.unit", 0, r - 1)
    if "labels" in o:
        labels = [_str(x, f"{path}.labels[{i}]") for i, x in enumerate(_list(o["labels"], f"{path}.labels", r))]
        if len(set(labels)) != r:
            raise DocumentError(f"{path}.labels", "labels must be distinct")
    else:
        labels = ["1" if i == unit else f"e{i}" for i in range(r)]
    t = np.zeros((r, r, r), dtype=np.int64)
    rows = _list(o["table"], f"{path}.table", r)
    for a, row in enumerate(rows):
        for b, entry in enumerate(_list(row, f"{path}.table[{a}]", r)):
            for c, v in _sparse(entry, f"{path}.table[{a}][{b}]", r, q).items():
                t[a, b, c] = v
    maximal = [_int(x, f"{path}.maximal[{i}]", 0, r - 1) for i, x in enumerate(_list(o["maximal"], f"{path}.maximal"))]
    if sorted(maximal) != [i for i in range(r) if i != unit]:
        raise DocumentError(f"{path}.maximal", "must list exactly the non-unit basis indices")
    A = ArtinLocalAlgebra(ring, tuple(labels), unit, t)
    problems = validate_artin(A)
    if problems:
        raise DocumentError(f"{path}.table", "; ".join(problems))
    return A


def dump_artin(A: ArtinLocalAlgebra) -> dict:
    table = [[[[c, int(A.table[a, b, c])] for c in range(A.rank) if A.table[a, b, c]] for b in range(A.rank)] for a in range(A.rank)]
    return {
        "kind": "artin",
        "ring": {"l": A.ring.l, "N": A.ring.N},
        "rank": A.rank,
        "labels": list(A.labels),
        "unit": A.unit,
        "table": table,
        "maximal": list(A.maximal),
    }


# ----------------------------------------------------- morphisms and reps


def _block_matrix(v, path: str, source: GradedLieAlgebra, target: GradedLieAlgebra, q: int) -> np.ndarray:
    blocks = _list(v, path, source.truncation)
    m = np.zeros((source.dim, target.dim), dtype=np.int64)
    for d, block in enumerate(blocks, start=1):
        p = f"{path}[{d - 1}]"
        rows = list(source.piece(d))
        cols = list(target.piece(d))
        for a, row in enumerate(_list(block, p, len(rows))):
            for b, x in enumerate(_list(row, f"{p}[{a}]", len(cols))):
                m[rows[a], cols[b]] = _int(x, f"{p}[{a}][{b}]") % q
    return m


def _dump_blocks(f: GradedMorphism) -> list:
    S, T = f.source, f.target
    m = f.matrix.data
    return [[[int(m[i, k]) for k in T.piece(d)] for i in S.piece(d)] for d in range(1, S.truncation + 1)]


def _source_target(o: dict, path: str, ctx: _Ctx) -> tuple[GradedLieAlgebra, GradedLieAlgebra]:
    S = _reference(o["source"], f"{path}.source", ctx, "lie")
    T = _reference(o["target"], f"{path}.target", ctx, "lie")
    if "ring" in o:
        ring = _ring(o["ring"], f"{path}.ring", ctx)
        if ring != S.ring:
            raise DocumentError(f"{path}.ring", f"source is over {S.ring}, document says {ring}")
    if S.ring != T.ring:
        raise DocumentError(path, f"source is over {S.ring}, target over {T.ring}")
    return S, T


def _parse_morphism(o: dict, path: str, ctx: _Ctx) -> GradedMorphism:
    _obj(o, path, ctx, ("kind", "source", "target", "matrices"), ("ring",))
    S, T = _source_target(o, path, ctx)
    if T.truncation > S.truncation:
        raise DocumentError(f"{path}.target", "target truncation exceeds source truncation")
    m = _block_matrix(o["matrices"], f"{path}.matrices", S, T, S.ring.modulus)
    f = GradedMorphism(S, T, Mat(S.ring, m, ncols=T.dim))
    report = validate_morphism(f)
    if not report.ok:
        raise DocumentError(f"{path}.matrices", "not a Lie morphism: " + report.issues[0].describe(S.labels))
    return f


def _parse_rep(o: dict, path: str, ctx: _Ctx) -> GradedRep:
    _obj(o, path, ctx, ("kind", "source", "target", "matrices"), ("ring",))
    S, T = _source_target(o, path, ctx)
    if S.truncation != T.truncation:
        raise DocumentError(f"{path}.target", "source and target must have the same truncation")
    Sb, Tb = reduce_mod_l(S), reduce_mod_l(T)
    m = _block_matrix(o["matrices"], f"{path}.matrices", Sb, Tb, S.ring.l)
    f = GradedMorphism(Sb, Tb, Mat(Sb.ring, m, ncols=Tb.dim))
    report = validate_morphism(f)
    if not report.ok:
        raise DocumentError(f"{path}.matrices", "not a Lie morphism mod l: " + report.issues[0].describe(S.labels))
    try:
        return GradedRep(S, T, f)
    except RepError as e:
        raise DocumentError(path, str(e)) from None


def dump_morphism(f: GradedMorphism, source: Any, target: Any) -> dict:
    """``source`` and ``target`` are file references or inline documents."""
    return {"kind": "morphism", "source": source, "target": target, "matrices": _dump_blocks(f)}


def dump_rep(rep: GradedRep, source: Any, target: Any) -> dict:
    return {"kind": "rep", "source": source, "target": target, "matrices": _dump_blocks(rep.rho_bar)}


# ------------------------------------------------- deformations and extensions


def _parse_deformation(o: dict, path: str, ctx: _Ctx) -> LieDeformation:
    _obj(o, path, ctx, ("kind", "lie", "base", "brackets"))
    L = _reference(o["lie"], f"{path}.lie", ctx, "lie")
    A = _reference(o["base"], f"{path}.base", ctx, "artin")
    if L.ring != A.ring.residue_field:
        raise DocumentError(f"{path}.lie", f"reduction must be over {A.ring.residue_field}, got {L.ring}")
    n, r, q = L.dim, A.rank, A.ring.modulus
    c = np.zeros((n, n, n, r), dtype=np.int64)
    seen: dict[tuple[int, int], str] = {}
    for k, b in enumerate(_list(o["brackets"], f"{path}.brackets")):
        p = f"{path}.brackets[{k}]"
        _obj(b, p, ctx, ("left", "right", "value"))
        i = L.index(_str(b["left"], f"{p}.left")) if b["left"] in L.labels else None
        j = L.index(_str(b["right"], f"{p}.right")) if b["right"] in L.labels else None
        if i is None:
            raise DocumentError(f"{p}.left", f"unknown basis label {b['left']!r}")
        if j is None:
            raise DocumentError(f"{p}.right", f"unknown basis label {b['right']!r}")
        if i == j:
            raise DocumentError(p, "bracket of an element with itself")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DocumentError(p, f"{seen[key]} and {p} both define [{L.labels[key[0]]},{L.labels[key[1]]}]")
        seen[key] = p
        sign = 1 if i < j else -1
        for m, entry in enumerate(_list(b["value"], f"{p}.value")):
            pe = f"{p}.value[{m}]"
            e = _list(entry, pe, 2)
            lab = _str(e[0], f"{pe}[0]")
            if lab not in L.labels:
                raise DocumentError(f"{pe}[0]", f"unknown basis label {lab!r}")
            t = L.index(lab)
            coeff = _list(e[1], f"{pe}[1]", r)
            for a, x in enumerate(coeff):
                v = _int(x, f"{pe}[1][{a}]") * sign % q
                c[key[0], key[1], t, a] = (c[key[0], key[1], t, a] + v) % q
                c[key[1], key[0], t, a] = (c[key[1], key[0], t, a] - v) % q
    try:
        d = LieDeformation(L, A, c)
    except DeformationError as e:
        raise DocumentError(path, str(e)) from None
    problems = d.problems()
    if problems:
        raise DocumentError(f"{path}.brackets", "; ".join(problems))
    return d


def dump_deformation(d: LieDeformation, lie: Any = None, base: Any = None) -> dict:
    L, A = d.reduction, d.base
    brackets = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            vals = [[L.labels[k], [int(x) for x in d.consts[i, j, k]]] for k in range(L.dim) if d.consts[i, j, k].any()]
            if vals:
                brackets.append({"left": L.labels[i], "right": L.labels[j], "value": vals})
    return {
        "kind": "deformation",
        "lie": dump_lie(L) if lie is None else lie,
        "base": dump_artin(A) if base is None else base,
        "brackets": brackets,
    }


def _parse_extension(o: dict, path: str, ctx: _Ctx) -> AlgExtension:
    _obj(o, path, ctx, ("kind", "total", "base", "projection"))
    B = _reference(o["total"], f"{path}.total", ctx, "artin")
    A = _reference(o["base"], f"{path}.base", ctx, "artin")
    if A.ring.l != B.ring.l:
        raise DocumentError(path, "total and base have different residue fields")
    rows = _list(o["projection"], f"{path}.projection", B.rank)
    m = np.zeros((B.rank, A.rank), dtype=np.int64)
    for i, row in enumerate(rows):
        for k, x in enumerate(_list(row, f"{path}.projection[{i}]", A.rank)):
            m[i, k] = _int(x, f"{path}.projection[{i}][{k}]") % A.ring.modulus
    try:
        f = AlgebraMorphism(B, A, m)
        problems = f.problems()
        if problems:
            raise DocumentError(f"{path}.projection", "; ".join(problems))
        return extension_from_surjection(f)
    except ArtinError as e:
        raise DocumentError(f"{path}.projection", str(e)) from None


def dump_extension(ext: AlgExtension, total: Any = None, base: Any = None) -> dict:
    return {
        "kind": "extension",
        "total": dump_artin(ext.total) if total is None else total,
        "base": dump_artin(ext.base) if base is None else base,
        "projection": [[int(x) for x in row] for row in np.asarray(ext.projection.matrix)],
    }


# ----------------------------------------------------------- functor suites


@dataclass
class FunctorSpec:
    kind: str
    object: Any = None
    bound: int = 1
    points: int = 1
    rep: GradedRep | None = None


@dataclass
class FunctorSuite:
    ring: CoeffRing
    truncation: int
    functors: list[FunctorSpec] = field(default_factory=list)
    fiber_products: bool = True


FUNCTOR_KINDS = ("representable", "rank-bounded", "constant", "deformation-transport")


def _parse_suite(o: dict, path: str, ctx: _Ctx) -> FunctorSuite:
    _obj(o, path, ctx, ("kind", "ring", "functors"), ("truncation", "category", "fiber-products"))
    ring = _ring(o["ring"], f"{path}.ring", ctx)
    if not ring.is_field:
        raise DocumentError(f"{path}.ring", "functor suites are evaluated over F_l")
    d = _int(o.get("truncation", 2), f"{path}.truncation", 2)
    if o.get("category", "standard") != "standard":
        raise DocumentError(f"{path}.category", "only the 'standard' test category is available")
    fibers = o.get("fiber-products", True)
    if not isinstance(fibers, bool):
        raise DocumentError(f"{path}.fiber-products", "expected true or false")
    suite = FunctorSuite(ring, d, fiber_products=fibers)
    for n, f in enumerate(_list(o["functors"], f"{path}.functors")):
        p = f"{path}.functors[{n}]"
        if not isinstance(f, dict):
            raise DocumentError(p, "expected an object")
        kind = f.get("kind")
        if kind == "representable":
            _obj(f, p, ctx, ("kind", "object"))
            suite.functors.append(FunctorSpec(kind, _suite_object(f["object"], f"{p}.object", ctx, ring, d)))
        elif kind == "rank-bounded":
            _obj(f, p, ctx, ("kind", "object"), ("bound",))
            bound = _int(f.get("bound", 1), f"{p}.bound", 0)
            suite.functors.append(FunctorSpec(kind, _suite_object(f["object"], f"{p}.object", ctx, ring, d), bound=bound))
        elif kind == "constant":
            _obj(f, p, ctx, ("kind", "points"))
            suite.functors.append(FunctorSpec(kind, points=_int(f["points"], f"{p}.points", 1)))
        elif kind == "deformation-transport":
            _obj(f, p, ctx, ("kind", "rep"))
            rep = _reference(f["rep"], f"{p}.rep", ctx, "rep")
            if rep.source.ring.l != ring.l or rep.source.truncation != d:
                raise DocumentError(f"{p}.rep", f"representation must be over F_{ring.l} with truncation {d}")
            suite.functors.append(FunctorSpec(kind, rep=rep))
        else:
            raise DocumentError(f"{p}.kind", f"unknown functor kind {kind!r}; expected one of {', '.join(FUNCTOR_KINDS)}")
    return suite


def _suite_object(v, path: str, ctx: _Ctx, ring: CoeffRing, d: int):
    """A standard-category object name, or a Lie algebra document."""
    if isinstance(v, str) and not v.endswith(".json"):
        return v
    L = _reference(v, path, ctx, "lie")
    if L.ring != ring:
        raise DocumentError(path, f"object is over {L.ring}, suite is over {ring}")
    return L


# ------------------------------------------------------------------ entry


_PARSERS: dict[str, Callable] = {
    "lie": _parse_lie,
    "artin": _parse_artin,
    "morphism": _parse_morphism,
    "rep": _parse_rep,
    "deformation": _parse_deformation,
    "extension": _parse_extension,
    "functor-suite": _parse_suite,
}


def _parse_value(o: Any, path: str, ctx: _Ctx, expected: str | None = None):
    if not isinstance(o, dict):
        raise DocumentError(path, "expected an object")
    kind = o.get("kind")
    if kind not in _PARSERS:
        raise DocumentError(f"{path}.kind", f"unknown document kind {kind!r}; expected one of {', '.join(KINDS)}")
    if expected is not None and kind != expected:
        raise DocumentError(f"{path}.kind", f"expected kind {expected!r}, got {kind!r}")
    return _PARSERS[kind](o, path, ctx)


def parse_document(text: str, base_dir: str = ".", lax: bool = False, expected: str | None = None):
    """Typed object for a document; referenced files are resolved against ``base_dir``."""
    return _parse_value(loads(text), "$", _Ctx(base_dir, lax), expected)


def load_document(path: str, lax: bool = False, expected: str | None = None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError("$", f"cannot read {path}: {e.strerror}") from None
    except UnicodeDecodeError:
        raise DocumentError("$", f"{path} is not valid UTF-8") from None
    return parse_document(text, os.path.dirname(os.path.abspath(path)), lax, expected)


def document_kind(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        o = loads(fh.read())
    return o.get("kind") if isinstance(o, dict) else None


def _format(v: Any, indent: int) -> str:
    # arrays without nested containers stay on one line
    if isinstance(v, list) and not any(isinstance(x, (list, dict)) for x in v):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, list) and all(isinstance(x, list) and not any(isinstance(y, (list, dict)) for y in x) for x in v) and len(v) <= 8:
        return "[" + ", ".join(json.dumps(x) for x in v) + "]"
    pad = " " * (indent + 2)
    if isinstance(v, list):
        if not v:
            return "[]"
        return "[\n" + ",\n".join(pad + _format(x, indent + 2) for x in v) + "\n" + " " * indent + "]"
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [pad + json.dumps(k, ensure_ascii=False) + ": " + _format(x, indent + 2) for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    return json.dumps(v, ensure_ascii=False)


def dumps(doc: Any) -> str:
    """Deterministic, diff-friendly JSON text."""
    return _format(doc, 0) + "\n"
