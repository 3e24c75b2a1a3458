"""Command-line interface.

Exit codes: 0 on success, 1 when the answer is a mathematical negative
(e.g. an obstructed lift), 2 on usage or document errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import __version__
from .artin import (
    ArtinError,
    ArtinLocalAlgebra,
    extension_from_surjection,
    square_zero_algebra,
    truncated_polynomial,
    truncation_map,
)
from .ce_cohomology import cohomology_space, nonempty_grades
from .coeff import CoeffError, CoeffRing
from .deformation import (
    DeformationError,
    LieDeformation,
    ObstructionWitness,
    eta_zero,
    extend_deformation,
    miniversal_tower,
    obstruction_class,
    quadratic_map,
)
from .documents import (
    DocumentError,
    FunctorSuite,
    dump_deformation,
    dump_lie,
    dumps,
    load_document,
    loads,
    parse_document,
)
from .graded_lie import GradedLieAlgebra, LieError, free_lie_truncated, reduce_mod_l
from .harrison import HarrisonError, harrison_cohomology
from .rep_deform import (
    GradedRep,
    ObstructionCertificate,
    RepDeformation,
    RepError,
    SearchSpaceTooLarge,
    add_cochain,
    enumerate_lifts,
    lift_representation,
    quadratic_relations,
    search_space_size,
    tangent_space,
)
from .schlessinger import (
    ConstantFunctor,
    DeformationTransport,
    RankBounded,
    Representable,
    SchlessingerError,
    check_criteria,
    check_universal_property,
    fiber_product,
    standard_category,
)


class UsageError(Exception):
    pass


@dataclass
class Outcome:
    payload: dict[str, Any]
    lines: list[str] = field(default_factory=list)
    code: int = 0


def thread_count() -> int:
    raw = os.environ.get("LIEFORGE_THREADS")
    if raw is None or raw == "":
        return 1
    if not raw.isdigit() or int(raw) < 1:
        raise UsageError(f"LIEFORGE_THREADS must be a positive integer, got {raw!r}")
    return int(raw)


# ---------------------------------------------------------------- helpers


def _load(path: str, args, kind: str | tuple[str, ...]):
    kinds = (kind,) if isinstance(kind, str) else kind
    obj = load_document(path, lax=args.lax)
    names = {
        GradedLieAlgebra: "lie",
        ArtinLocalAlgebra: "artin",
        GradedRep: "rep",
        LieDeformation: "deformation",
        FunctorSuite: "functor-suite",
    }
    got = next((v for k, v in names.items() if isinstance(obj, k)), None)
    if got not in kinds:
        raise UsageError(f"{path}: expected a {' or '.join(kinds)} document")
    return obj


def _field_lie(L: GradedLieAlgebra) -> GradedLieAlgebra:
    return L if L.ring.is_field else reduce_mod_l(L)


def _element(labels: Sequence[str], v: Sequence[int]) -> str:
    terms = []
    for lab, c in zip(labels, v):
        if c:
            terms.append(lab if c == 1 else f"{c}*{lab}")
    return " + ".join(terms) if terms else "0"


def _quadratic_form(rel: dict[tuple[int, int], int], names: Sequence[str]) -> str:
    terms = []
    for (a, b), c in sorted(rel.items()):
        mono = f"{names[a]}^2" if a == b else f"{names[a]}*{names[b]}"
        terms.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(terms) if terms else "0"


def _presentation(A: ArtinLocalAlgebra) -> str:
    from .artin import truncated_polynomial_order

    k = str(A.ring)
    if A.rank == 1:
        return k
    n = truncated_polynomial_order(A)
    if n is not None:
        return f"{k}[t]/(t^{n})"
    return f"{k}-algebra of rank {A.rank}, embedding dimension {A.cotangent_dim()}"


def _products(A: ArtinLocalAlgebra) -> list[str]:
    out = []
    for a in A.maximal:
        for b in A.maximal:
            if b < a:
                continue
            p = A.mul(A.basis_vector(a), A.basis_vector(b))
            if any(p):
                out.append(f"{A.labels[a]}*{A.labels[b]} = {_element(A.labels, p)}")
    return out


def _parse_base(spec: str, ring: CoeffRing, args) -> ArtinLocalAlgebra:
    """``trunc:n`` (k[t]/t^n), ``sqzero:k`` (k + k^k, square zero) or an artin document."""
    m = re.fullmatch(r"trunc:(\d+)", spec)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise UsageError("--base trunc:n needs n >= 1")
        return truncated_polynomial(ring, n)
    m = re.fullmatch(r"sqzero:(\d+)", spec)
    if m:
        k = int(m.group(1))
        return square_zero_algebra(ring, ["t"] if k == 1 else [f"t{i + 1}" for i in range(k)])
    if not os.path.exists(spec):
        raise UsageError(f"--base: {spec!r} is neither trunc:n, sqzero:k nor a file")
    return _load(spec, args, "artin")


def _rep(args) -> GradedRep:
    if args.source or args.target:
        if not (args.source and args.target):
            raise UsageError("--source and --target must be given together")
        try:
            with open(args.map, encoding="utf-8") as fh:
                doc = loads(fh.read())
        except OSError as e:
            raise UsageError(f"--map: cannot read {args.map}: {e.strerror}") from None
        if not isinstance(doc, dict):
            raise DocumentError("$", "expected an object")
        doc = dict(doc)
        doc.setdefault("kind", "rep")
        doc["source"] = os.path.abspath(args.source)
        doc["target"] = os.path.abspath(args.target)
        return parse_document(json.dumps(doc), os.path.dirname(os.path.abspath(args.map)), args.lax, "rep")
    return _load(args.map, args, "rep")


# --------------------------------------------------------------- commands


def cmd_validate(args) -> Outcome:
    obj = load_document(args.file, lax=args.lax)
    info: dict[str, Any] = {"file": args.file, "valid": True}
    lines = []
    if isinstance(obj, GradedLieAlgebra):
        info.update(kind="lie", ring=str(obj.ring), truncation=obj.truncation, ranks=list(obj.ranks), dim=obj.dim)
        lines = [
            f"lie algebra over {obj.ring}, truncation {obj.truncation}",
            f"ranks {','.join(map(str, obj.ranks))}",
        ]
    elif isinstance(obj, ArtinLocalAlgebra):
        info.update(kind="artin", ring=str(obj.ring), rank=obj.rank, labels=list(obj.labels), cotangent_dim=obj.cotangent_dim())
        lines = [f"local algebra over {obj.ring}, rank {obj.rank}", f"basis {', '.join(obj.labels)}", *_products(obj)]
    elif isinstance(obj, GradedRep):
        info.update(kind="rep", source_ranks=list(obj.source.ranks), target_ranks=list(obj.target.ranks))
        lines = [f"representation over {obj.source.ring}: ranks {','.join(map(str, obj.source.ranks))} -> {','.join(map(str, obj.target.ranks))}"]
    elif isinstance(obj, LieDeformation):
        info.update(kind="deformation", base=list(obj.base.labels), brackets=obj.describe())
        lines = [f"deformation over {_presentation(obj.base)} (basis {', '.join(obj.base.labels)})", *obj.describe()]
    elif isinstance(obj, FunctorSuite):
        info.update(kind="functor-suite", functors=len(obj.functors))
        lines = [f"functor suite over {obj.ring}, truncation {obj.truncation}, {len(obj.functors)} functors"]
    else:
        from .artin import AlgExtension
        from .graded_lie import GradedMorphism

        if isinstance(obj, AlgExtension):
            info.update(kind="extension", kernel_dim=obj.kernel_dim, total_rank=obj.total.rank)
            lines = [f"extension of {_presentation(obj.base)} with kernel of dimension {obj.kernel_dim}"]
        elif isinstance(obj, GradedMorphism):
            info.update(kind="morphism", source_ranks=list(obj.source.ranks), target_ranks=list(obj.target.ranks))
            lines = [f"morphism over {obj.source.ring}: ranks {','.join(map(str, obj.source.ranks))} -> {','.join(map(str, obj.target.ranks))}"]
    lines.append("valid")
    return Outcome(info, lines)


def cmd_cohomology(args) -> Outcome:
    L = _load(args.file, args, "lie")
    if args.q < 0:
        raise UsageError("--q must be non-negative")
    M = None
    coeff_name = "L"
    if args.coeffs != "adjoint":
        rep = _load(args.coeffs, args, "rep")
        if rep.source != L and rep.reduced_source != L:
            raise UsageError("--coeffs: representation source differs from the algebra")
        L, M, coeff_name = rep.reduced_source, rep.module, "M"
    grades = [args.grade] if args.grade is not None else nonempty_grades(L, M, args.q)
    rows = []
    lines = []
    for m in grades:
        H = cohomology_space(L, M, args.q, m)
        factors = list(H.space.invariant_factors)
        rows.append({"q": args.q, "grade": m, "dim": H.dim, "invariant_factors": factors})
        line = f"dim H^{args.q}(L,{coeff_name})({m}) = {H.dim}"
        if not L.ring.is_field and factors:
            line += "  (" + " + ".join(f"Z/{f}" for f in factors) + ")"
        lines.append(line)
    return Outcome({"ring": str(L.ring), "coefficients": args.coeffs, "cohomology": rows}, lines)


def cmd_harrison(args) -> Outcome:
    A = _load(args.file, args, "artin")
    H = harrison_cohomology(A, None, args.i)
    payload = {"i": args.i, "dim": H.dim}
    lines = [f"dim H^{args.i}_Harr(A,k) = {H.dim}"]
    if args.i == 1:
        payload["cotangent_dim"] = A.cotangent_dim()
        lines.append(f"dim m/(m^2 + lA) = {A.cotangent_dim()}")
    return Outcome(payload, lines)


def _generators(spec: str) -> list[tuple[str, int]]:
    gens = []
    for part in spec.split(","):
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*):(\d+)\s*", part)
        if not m or int(m.group(2)) < 1:
            raise UsageError(f"--gens: expected name:degree with degree >= 1, got {part!r}")
        gens.append((m.group(1), int(m.group(2))))
    if len({g for g, _ in gens}) != len(gens):
        raise UsageError("--gens: generator names must be distinct")
    return gens


def cmd_free(args) -> Outcome:
    ring = CoeffRing(args.l, args.N)
    if args.degree < 1:
        raise UsageError("--degree must be >= 1")
    L = free_lie_truncated(_generators(args.gens), args.degree, ring)
    doc = dump_lie(L)
    payload = {"ranks": list(L.ranks), "labels": list(L.labels)}
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(doc))
        payload["output"] = args.output
        return Outcome(payload, [f"ranks {','.join(map(str, L.ranks))}", f"wrote {args.output}"])
    payload["document"] = doc
    return Outcome(payload, dumps(doc).rstrip("\n").split("\n"))


def cmd_eta(args) -> Outcome:
    L = _field_lie(_load(args.file, args, "lie"))
    eta = eta_zero(L)
    h = eta.base.rank - 1
    lines = [
        f"dim H^2(L,L)(0) = {h}",
        f"D_1 = {_presentation(eta.base) if h <= 1 else f'{L.ring} + {L.ring}^{h} (square zero)'}",
        f"basis {', '.join(eta.base.labels)}",
        *eta.describe(),
    ]
    payload = {"h2": h, "base": list(eta.base.labels), "brackets": eta.describe()}
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(dump_deformation(eta)))
        lines.append(f"wrote {args.output}")
    return Outcome(payload, lines)


def _deformation_and_extension(args):
    d = _load(args.file, args, "deformation")
    from .artin import AlgExtension

    ext = load_document(args.ext, lax=args.lax)
    if not isinstance(ext, AlgExtension):
        raise UsageError(f"{args.ext}: expected an extension document")
    if ext.base != d.base:
        raise UsageError("--ext: the extension's base differs from the deformation's base")
    return d, ext


def cmd_obstruct(args) -> Outcome:
    d, ext = _deformation_and_extension(args)
    obs = obstruction_class(d, ext)
    coords = [list(c) for c in obs.coords]
    if obs.is_zero:
        return Outcome({"obstructed": False, "class": coords}, ["obstruction class = 0", "unobstructed"])
    lines = [f"obstruction class on kernel vector {i + 1}: {list(c)}" for i, c in enumerate(obs.coords)]
    lines.append("obstructed")
    return Outcome({"obstructed": True, "class": coords}, lines, 1)


def cmd_extend(args) -> Outcome:
    d, ext = _deformation_and_extension(args)
    result = extend_deformation(d, ext)
    if isinstance(result, ObstructionWitness):
        coords = [list(c) for c in result.obstruction.coords]
        return Outcome({"extended": False, "class": coords}, [f"obstruction class: {coords}", "obstructed"], 1)
    lines = [f"extended over {_presentation(result.base)} (basis {', '.join(result.base.labels)})", *result.describe()]
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps(dump_deformation(result)))
        lines.append(f"wrote {args.output}")
    return Outcome({"extended": True, "base": list(result.base.labels), "brackets": result.describe()}, lines)


def cmd_tower(args) -> Outcome:
    if args.stages < 1:
        raise UsageError("--stages must be >= 1")
    L = _field_lie(_load(args.file, args, "lie"))
    tower = miniversal_tower(L, args.stages)
    lines = []
    stages = []
    for st in tower:
        A = st.algebra
        pres = _presentation(A)
        lines.append(f"D_{st.stage} ≅ {pres}")
        lines.append(f"  basis {', '.join(A.labels)}; kernel rank {st.kernel_rank}")
        lines.extend(f"  {p}" for p in _products(A))
        stages.append(
            {
                "stage": st.stage,
                "rank": A.rank,
                "presentation": pres,
                "basis": list(A.labels),
                "kernel_rank": st.kernel_rank,
                "products": _products(A),
            }
        )
    last = tower[-1].deformation
    lines.append(f"eta_{tower[-1].stage}:")
    lines.extend(f"  {b}" for b in last.describe())
    return Outcome({"stages": stages, "eta": last.describe()}, lines)


def cmd_rep_tangent(args) -> Outcome:
    rep = _rep(args)
    T1 = tangent_space(rep)
    G, T = rep.reduced_source, rep.reduced_target
    l = rep.l
    lines = [f"dim H^1(G,Ad)(0) = {T1.dim}", f"first-order lifts: {l}^{T1.dim} = {l ** T1.dim}"]
    cocycles = []
    for a, c in enumerate(T1.representatives):
        vals = {G.labels[i]: _element(T.labels, c.value((i,))) for i in range(G.dim)}
        cocycles.append(vals)
        lines.append(f"c{a + 1}: " + ", ".join(f"{k} -> {v}" for k, v in vals.items()))
    return Outcome({"h1": T1.dim, "first_order_lifts": l**T1.dim, "cocycles": cocycles}, lines)


def cmd_rep_lift(args) -> Outcome:
    rep = _rep(args)
    T1 = tangent_space(rep)
    if args.tangent:
        try:
            coords = [int(x) for x in args.tangent.split(",")]
        except ValueError:
            raise UsageError("--tangent: expected comma-separated integers") from None
        if len(coords) != T1.dim:
            raise UsageError(f"--tangent: expected {T1.dim} coordinates")
    else:
        coords = [0] * T1.dim
    if args.order < 2:
        raise UsageError("--order must be >= 2")
    k = rep.reduced_source.ring
    A2 = truncated_polynomial(k, 2)
    rho = RepDeformation.trivial(rep, A2)
    c = T1.space.cocycle(coords) if T1.dim else None
    if c is not None:
        rho = add_cochain(rho, c, A2.basis_vector(1))
    lines = [f"start: rho_bar + t*c over {_presentation(A2)}, c = {coords}"]
    reached = 2
    for n in range(3, args.order + 1):
        ext = extension_from_surjection(truncation_map(k, n, n - 1))
        result = lift_representation(rho, ext)
        if isinstance(result, ObstructionCertificate):
            cls = [list(x) for x in result.coords]
            lines.append(f"obstructed at {_presentation(ext.total)}: class {cls}")
            return Outcome({"lifted_to": reached, "obstructed_at": n, "class": cls}, lines, 1)
        rho = result
        reached = n
        lines.append(f"lifted to {_presentation(ext.total)}")
    G, T = rep.source, rep.target
    for i in range(G.dim):
        parts = []
        for kk in range(T.dim):
            v = rho.images[i, kk]
            if v.any():
                parts.append(f"({_element(rho.base.labels, v)})*{T.labels[kk]}")
        lines.append(f"  rho({G.labels[i]}) = {' + '.join(parts) if parts else '0'}")
    return Outcome({"lifted_to": reached, "obstructed_at": None}, lines)


def cmd_rep_enumerate(args) -> Outcome:
    rep = _rep(args)
    A = _parse_base(args.base, rep.reduced_source.ring if args.base.startswith(("trunc:", "sqzero:")) else rep.source.ring, args)
    size = search_space_size(rep, A)
    try:
        lifts = enumerate_lifts(rep, A, bound=args.bound)
    except SearchSpaceTooLarge as e:
        raise UsageError(f"--bound: search space {e.size} exceeds {e.bound}") from None
    lines = [f"base {_presentation(A)} (basis {', '.join(A.labels)})", f"search space: {size}", f"lifts: {len(lifts)}", f"classes: {len(lifts.classes)}"]
    return Outcome({"search_space": size, "lifts": len(lifts), "classes": len(lifts.classes)}, lines)


def cmd_quadratic(args) -> Outcome:
    if bool(args.lie) == bool(args.rep):
        raise UsageError("give exactly one of --lie or --rep")
    if args.lie:
        L = _field_lie(_load(args.lie, args, "lie"))
        Q = quadratic_map(L)
        names = [f"x{a + 1}" for a in range(Q.source_dim)]
        rels = Q.relations()
        head = [f"dim H^2(L,L)(0) = {Q.source_dim}", f"dim H^3(L,L)(0) = {Q.target_dim}"]
        l = Q.l
    else:
        rep = _rep_from_path(args.rep, args)
        P = quadratic_relations(rep)
        names = [f"x{a + 1}" for a in range(P.h1)]
        rels = P.relations()
        head = [f"dim H^1(G,Ad)(0) = {P.h1}", f"dim H^2(G,Ad)(0) = {P.h2}", f"pairing symmetric: {'yes' if P.is_symmetric() else 'no'}"]
        l = P.l
    if l == 2:
        head.append("note: over F_2 only the cross terms x_a*x_b are determined")
    lines = head + [f"r{k + 1} = {_quadratic_form(rel, names)}" for k, rel in enumerate(rels)]
    payload = {"relations": [{f"{names[a]}*{names[b]}": c for (a, b), c in sorted(rel.items())} for rel in rels]}
    return Outcome(payload, lines)


def _rep_from_path(path: str, args) -> GradedRep:
    return _load(path, args, "rep")


def _oracle(spec, cat):
    if spec.kind == "constant":
        return ConstantFunctor(list(range(spec.points)))
    if spec.kind == "deformation-transport":
        return DeformationTransport(spec.rep)
    if isinstance(spec.object, str):
        if spec.object not in cat.names:
            raise UsageError(f"unknown object {spec.object!r}; the standard category has {', '.join(cat.names)}")
        L, name = cat.names[spec.object], spec.object
    else:
        L, name = spec.object, "L(" + ",".join(map(str, spec.object.ranks)) + ")"
    if spec.kind == "representable":
        return Representable(L, f"h_{name}")
    F = RankBounded(L, spec.bound)
    F.name = f"rank<={spec.bound} maps from {name}"
    return F


def cmd_schlessinger(args) -> Outcome:
    suite = _load(args.suite, args, "functor-suite")
    cat = standard_category(suite.ring, suite.truncation)
    oracles = [_oracle(s, cat) for s in suite.functors]

    def run(F):
        try:
            return check_criteria(F, cat)
        except SchlessingerError as e:
            return e

    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        reports = list(pool.map(run, oracles))
    lines = []
    out = []
    for F, rep in zip(oracles, reports):
        if isinstance(rep, SchlessingerError):
            lines += [f"functor: {F.name}", f"rejected: {rep}"]
            out.append({"functor": F.name, "rejected": str(rep)})
            continue
        lines += rep.lines()
        out.append(
            {
                "functor": rep.functor,
                "criteria": {k: {"passed": r.passed, "checked": r.checked, "failures": r.failures} for k, r in rep.results.items()},
                "tangent_size": rep.tangent_size,
                "tangent_dim": rep.tangent_dim,
                "has_hull": rep.has_hull,
                "pro_representable": rep.pro_representable,
            }
        )
    payload: dict[str, Any] = {"functors": out}
    if suite.fiber_products:
        checked, failures = 0, []
        for g in cat.small_sections():
            for f in cat.morphisms:
                if f.target != g.target or f is g:
                    continue
                fp = fiber_product(f, g)
                checked += 1
                problems = check_universal_property(fp, cat.objects)
                failures += [f"{cat.name_of(f.source)} x {cat.name_of(g.source)}: {p}" for p in problems]
        lines.append(f"fiber products: {checked} checked, universal property {'holds' if not failures else 'FAILS'}")
        lines.extend(f"  {p}" for p in failures[:5])
        payload["fiber_products"] = {"checked": checked, "failures": failures}
    return Outcome(payload, lines)


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--lax", action="store_true", help="ignore unknown document keys")

    p = argparse.ArgumentParser(prog="lieforge", description="Deformation theory of truncated graded Lie algebras.")
    p.add_argument("--version", action="version", version=f"lieforge {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help):
        s = sub.add_parser(name, parents=[common], help=help, description=help)
        s.set_defaults(func=func)
        return s

    s = add("validate", cmd_validate, "parse and validate a document")
    s.add_argument("file")

    s = add("cohomology", cmd_cohomology, "Chevalley-Eilenberg cohomology dimensions")
    s.add_argument("file")
    s.add_argument("--q", type=int, required=True, help="cohomological degree")
    s.add_argument("--grade", type=int, help="internal grade (default: all nonempty grades)")
    s.add_argument("--coeffs", default="adjoint", help="'adjoint' or a rep document giving Ad o rho_bar")

    s = add("harrison", cmd_harrison, "Harrison cohomology of a local algebra with residue-field coefficients")
    s.add_argument("file")
    s.add_argument("--i", type=int, choices=(1, 2), default=1)

    s = add("free", cmd_free, "truncated free Lie algebra on a Lyndon basis")
    s.add_argument("--gens", required=True, help="generators as name:degree, comma separated")
    s.add_argument("--degree", type=int, required=True, help="truncation degree")
    s.add_argument("--l", type=int, default=5, help="residue characteristic (default 5)")
    s.add_argument("--N", type=int, default=1, help="precision, coefficients in Z/l^N (default 1)")
    s.add_argument("-o", "--output")

    s = add("eta", cmd_eta, "universal infinitesimal deformation")
    s.add_argument("file")
    s.add_argument("-o", "--output", help="write the deformation document")

    for name, func, help in (
        ("obstruct", cmd_obstruct, "obstruction class of a deformation along an extension"),
        ("extend", cmd_extend, "extend a deformation along an extension"),
    ):
        s = add(name, func, help)
        s.add_argument("file", help="deformation document")
        s.add_argument("--ext", required=True, help="extension document")
        if name == "extend":
            s.add_argument("-o", "--output", help="write the extended deformation")

    s = add("tower", cmd_tower, "stages of the miniversal deformation tower")
    s.add_argument("file")
    s.add_argument("--stages", type=int, default=2)

    for name, func, help in (
        ("rep-tangent", cmd_rep_tangent, "tangent space of a representation's deformations"),
        ("rep-lift", cmd_rep_lift, "lift a first-order deformation along k[t]/t^n"),
        ("rep-enumerate", cmd_rep_enumerate, "enumerate lifts over a local algebra"),
    ):
        s = add(name, func, help)
        s.add_argument("--map", required=True, help="rep document (or bare matrices with --source/--target)")
        s.add_argument("--source", help="source Lie algebra document")
        s.add_argument("--target", help="target Lie algebra document")
        if name == "rep-lift":
            s.add_argument("--tangent", help="tangent coordinates, comma separated (default zero)")
            s.add_argument("--order", type=int, default=3, help="lift up to k[t]/t^order")
        if name == "rep-enumerate":
            s.add_argument("--base", required=True, help="trunc:n, sqzero:k or an artin document")
            s.add_argument("--bound", type=int, default=1 << 16)

    s = add("quadratic", cmd_quadratic, "order-two obstruction relations")
    s.add_argument("--lie")
    s.add_argument("--rep")

    s = add("schlessinger", cmd_schlessinger, "check the Schlessinger criteria on a functor suite")
    s.add_argument("--suite", required=True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        sys.stdout.reconfigure(encoding="utf-8")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        thread_count()
        outcome = args.func(args)
    except (UsageError, DocumentError) as e:
        print(f"lieforge {args.command}: error: {e}", file=sys.stderr)
        return 2
    except (LieError, ArtinError, CoeffError, HarrisonError, DeformationError, RepError, SchlessingerError) as e:
        print(f"lieforge {args.command}: error: {e}", file=sys.stderr)
        return 2
    if args.json:
        payload = dict(outcome.payload)
        payload["command"] = args.command
        payload["exit_code"] = outcome.code
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for line in outcome.lines:
            print(line)
    return outcome.code


if __name__ == "__main__":
    sys.exit(main())
