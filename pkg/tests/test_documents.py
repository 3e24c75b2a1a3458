import copy
import json
import os
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from instances import random_free_rep, random_small_lie
from lieforge.artin import extension_from_surjection, truncation_map
from lieforge.coeff import CoeffRing
from lieforge.deformation import eta_zero
from lieforge.documents import (
    DocumentError,
    FunctorSuite,
    dump_artin,
    dump_deformation,
    dump_extension,
    dump_lie,
    dump_morphism,
    dump_rep,
    dumps,
    load_document,
    loads,
    parse_document,
)
from lieforge.graded_lie import GradedMorphism, free_lie_truncated
from lieforge.suites import abelian_21, artin_suite, heisenberg

CORPUS = os.path.join(os.path.dirname(__file__), os.pardir, "corpus")
F2, F3, F5 = CoeffRing(2), CoeffRing(3), CoeffRing(5)

HEIS = {
    "kind": "lie",
    "ring": {"l": 5, "N": 1},
    "degrees": [2, 1],
    "basis": [["x", "y"], ["z"]],
    "brackets": [{"left": [1, 0], "right": [1, 1], "value": [[0, 1]]}],
}


def parse(doc, **kw):
    return parse_document(json.dumps(doc), **kw)


def error_of(doc, **kw) -> DocumentError:
    with pytest.raises(DocumentError) as err:
        parse(doc, **kw)
    return err.value


# ---------------------------------------------------------------- round trips


@given(st.integers(0, 10**6))
def test_lie_round_trip(seed):
    rng = random.Random(seed)
    L = random_small_lie(rng, rng.choice([F2, F3, F5]))
    assert parse_document(dumps(dump_lie(L))) == L


@pytest.mark.parametrize("ring", [F2, F5, CoeffRing(3, 2)])
def test_lie_round_trip_named(ring):
    for L in (heisenberg(ring), abelian_21(ring), free_lie_truncated([("x", 1), ("y", 2)], 4, ring)):
        assert parse_document(dumps(dump_lie(L))) == L


@pytest.mark.parametrize("A", artin_suite(F3, 4) + artin_suite(CoeffRing(2, 2), 3), ids=repr)
def test_artin_round_trip(A):
    assert parse_document(dumps(dump_artin(A))) == A


@given(st.integers(0, 10**6))
def test_rep_and_morphism_round_trip(seed):
    rng = random.Random(seed)
    rep = random_free_rep(rng, rng.choice([F2, F3]))
    doc = dump_rep(rep, dump_lie(rep.source), dump_lie(rep.target))
    back = parse_document(dumps(doc))
    assert back.rho_bar == rep.rho_bar and back.source == rep.source
    f = GradedMorphism.identity(rep.target)
    assert parse_document(dumps(dump_morphism(f, dump_lie(rep.target), dump_lie(rep.target)))) == f


def test_deformation_and_extension_round_trip():
    eta = eta_zero(abelian_21(F5))
    assert parse_document(dumps(dump_deformation(eta))) == eta
    ext = extension_from_surjection(truncation_map(F5, 3, 2))
    back = parse_document(dumps(dump_extension(ext)))
    assert back.total == ext.total and back.base == ext.base
    assert (back.projection.matrix == ext.projection.matrix).all()


def test_dumps_is_deterministic_and_compact():
    text = dumps(dump_lie(heisenberg()))
    assert text == dumps(dump_lie(heisenberg()))
    assert '"degrees": [2, 1]' in text
    assert text.endswith("}\n")


# ---------------------------------------------------------------- rejections


def test_unknown_keys_are_rejected_unless_lax():
    doc = dict(HEIS, colour="red")
    err = error_of(doc)
    assert err.path == "$.colour" and err.message == "unknown key"
    assert parse(doc, lax=True) == heisenberg()
    nested = copy.deepcopy(HEIS)
    nested["brackets"][0]["note"] = 1
    assert error_of(nested).path == "$.brackets[0].note"


def test_missing_key():
    doc = {k: v for k, v in HEIS.items() if k != "brackets"}
    err = error_of(doc)
    assert err.path == "$" and "brackets" in err.message


def test_grading_violation():
    doc = copy.deepcopy(HEIS)
    doc["brackets"][0]["value"] = [[1, 0, 1]]
    err = error_of(doc)
    assert err.path == "$.brackets[0].value[0]"
    assert err.message == "grading violation: [x,y] lies in degree 2, value given in degree 1"


def test_antisymmetry_violation():
    doc = copy.deepcopy(HEIS)
    doc["brackets"].append({"left": [1, 1], "right": [1, 0], "value": [[0, 1]]})
    err = error_of(doc)
    assert err.path == "$.brackets[1]"
    assert err.message.startswith("antisymmetry violation: $.brackets[0] and $.brackets[1] both define [x,y]")
    # the consistent reversed entry is a plain duplicate
    doc["brackets"][1]["value"] = [[0, 4]]
    assert "given twice" in error_of(doc).message


def test_reversed_entry_is_negated():
    doc = copy.deepcopy(HEIS)
    doc["brackets"][0].update(left=[1, 1], right=[1, 0], value=[[0, 4]])
    assert parse(doc) == heisenberg()


def test_jacobi_failure_names_the_triple():
    doc = {
        "kind": "lie",
        "ring": {"l": 5, "N": 1},
        "degrees": [3, 1, 1],
        "basis": [["x", "y", "z"], ["u"], ["w"]],
        "brackets": [
            {"left": [1, 0], "right": [1, 1], "value": [[0, 1]]},
            {"left": [1, 1], "right": [1, 2], "value": [[0, 1]]},
            {"left": [1, 0], "right": [2, 0], "value": [[0, 1]]},
        ],
    }
    err = error_of(doc)
    assert err.path == "$.brackets"
    assert err.message.startswith("Jacobi identity fails on (x, y, z)")


def test_json_level_errors():
    with pytest.raises(DocumentError):
        loads('{"a": 1, "a": 2}')
    with pytest.raises(DocumentError):
        loads('{"a": NaN}')
    with pytest.raises(DocumentError) as err:
        loads("{")
    assert "line 1" in err.value.message


def test_kind_checks():
    assert error_of({"kind": "banana"}).path == "$.kind"
    assert "expected kind 'artin'" in error_of(HEIS, expected="artin").message


def test_bad_artin_tables():
    doc = dump_artin(artin_suite(F3, 3)[2])
    doc["maximal"] = [2]
    assert error_of(doc).path == "$.maximal"
    doc = dump_artin(artin_suite(F3, 3)[2])
    doc["table"][1][1] = [[0, 1]]  # t*t = 1 is not local
    assert error_of(doc).path == "$.table"


def test_morphism_must_preserve_brackets():
    doc = {"kind": "morphism", "source": HEIS, "target": HEIS, "matrices": [[[1, 0], [0, 1]], [[2]]]}
    err = error_of(doc)
    assert err.path == "$.matrices" and "not a Lie morphism" in err.message


def test_references_resolve_relative_to_the_document(tmp_path):
    (tmp_path / "sub").mkdir()
    (tmp_path / "sub" / "h.json").write_text(json.dumps(HEIS))
    (tmp_path / "m.json").write_text(json.dumps({"kind": "morphism", "source": "sub/h.json", "target": "sub/h.json", "matrices": [[[1, 0], [0, 1]], [[1]]]}))
    f = load_document(str(tmp_path / "m.json"))
    assert f == GradedMorphism.identity(heisenberg())
    (tmp_path / "bad.json").write_text(json.dumps({"kind": "morphism", "source": "nope.json", "target": HEIS, "matrices": []}))
    with pytest.raises(DocumentError) as err:
        load_document(str(tmp_path / "bad.json"))
    assert err.value.path == "$.source"


def test_self_reference_is_rejected(tmp_path):
    (tmp_path / "a.json").write_text(json.dumps({"kind": "extension", "total": "a.json", "base": "a.json", "projection": []}))
    with pytest.raises(DocumentError) as err:
        load_document(str(tmp_path / "a.json"))
    assert err.value.path == "$.total"


def test_functor_suite():
    suite = load_document(os.path.join(CORPUS, "suite_f2.json"))
    assert isinstance(suite, FunctorSuite)
    assert [f.kind for f in suite.functors] == ["representable", "representable", "rank-bounded", "constant"]
    doc = loads(open(os.path.join(CORPUS, "suite_f2.json")).read())
    doc["functors"][0]["kind"] = "mystery"
    err = error_of(doc, base_dir=CORPUS)
    assert err.path == "$.functors[0].kind"


@pytest.mark.parametrize("name", sorted(f for f in os.listdir(CORPUS) if f.endswith(".json") and f != "cases.json"))
def test_corpus_documents_load(name):
    load_document(os.path.join(CORPUS, name))
