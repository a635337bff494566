"""Law suites and the classification of the shipped algebras."""

from __future__ import annotations

import json

import pytest

from gkat_workbench import (
    Exhaustive,
    FiniteAlgebra,
    classify,
    make_builtin,
    run_law_suite,
)
from gkat_workbench.instances import STANDARD_FINITE
from gkat_workbench.laws import SUITES


def _names(suite: str) -> list[str]:
    return [law.name for law in SUITES[suite]]


def test_suite_layering():
    kleene, gkat, igkat, kat = (_names(s) for s in ("kleene", "gkat", "igkat", "kat"))
    assert set(kleene) < set(gkat) < set(igkat) < set(kat)
    assert "residuation-fwd" in gkat and "residuation-fwd" not in kleene
    assert "test-idem" in igkat and "test-idem" not in gkat
    assert "excluded-middle" in kat and "excluded-middle" not in igkat


def test_unknown_suite_is_rejected():
    with pytest.raises(ValueError, match="unknown suite"):
        run_law_suite(make_builtin("bool2"), "boolean")


@pytest.mark.parametrize("spec", STANDARD_FINITE)
def test_every_shipped_algebra_is_graded(spec):
    rep = run_law_suite(make_builtin(spec), "gkat", Exhaustive())
    assert rep.ok, [law.name for law, _ in rep.failing()]


@pytest.mark.parametrize("spec", STANDARD_FINITE)
def test_derived_laws_follow_on_every_shipped_algebra(spec):
    assert run_law_suite(make_builtin(spec), "derived", Exhaustive()).ok


# Strongest true class and its discriminating witness, per algebra.
CLASSIFICATION = {
    "bool2": ("KAT", None, None),
    "chain3": ("IGKAT-not-KAT", "excluded-middle", {"a": "u"}),
    "powerset:xy": ("KAT", None, None),
    "luka:5": ("GKAT-not-IGKAT", "test-idem", {"a": "1/5"}),
    "godel:5": ("IGKAT-not-KAT", "excluded-middle", {"a": "1/5"}),
    "wajsberg:4": ("GKAT-not-IGKAT", "test-idem", {"a": "a^1"}),
    "ex9": ("GKAT-not-IGKAT", "test-idem", {"a": "m"}),
    "lemma4": ("IGKAT-not-KAT", "excluded-middle", {"a": "m"}),
    "lemma6": ("GKAT-not-IGKAT", "test-idem", {"a": "n"}),
}


@pytest.mark.parametrize("spec", sorted(CLASSIFICATION))
def test_classification_with_witness(spec):
    want_class, want_law, want_vals = CLASSIFICATION[spec]
    cls = classify(make_builtin(spec), Exhaustive())
    assert cls.class_name == want_class
    assert cls.witness_law == want_law
    if want_vals is None:
        assert cls.witness is None
    else:
        assert cls.witness.counterexample == want_vals


def test_classification_of_non_graded_tables():
    # A two-element carrier whose composition forgets its unit entirely.
    alg = FiniteAlgebra(
        name="unitless",
        element_names=("0", "1"),
        test_indices=(0, 1),
        zero=0,
        one=1,
        plus_table=((0, 1), (1, 1)),
        seq_table=((0, 0), (0, 0)),
        arrow_table=((1, 1), (0, 1)),
        star_table=(1, 1),
    )
    cls = classify(alg, Exhaustive())
    assert cls.class_name == "NotGKAT"
    assert cls.witness_law == "seq-unit-right"
    assert cls.witness.counterexample == {"p": "1"}


def test_specific_witness_values():
    ex9 = classify(make_builtin("ex9"), Exhaustive())
    assert (ex9.witness.lhs_value, ex9.witness.rhs_value) == ("0", "m")
    chain3 = classify(make_builtin("chain3"), Exhaustive())
    assert (chain3.witness.lhs_value, chain3.witness.rhs_value) == ("u", "1")


def test_igkat_report_carries_both_extra_laws():
    rep = run_law_suite(make_builtin("godel:5"), "igkat", Exhaustive())
    names = [law.name for law, _ in rep.entries]
    assert names.index("test-idem") > names.index("test-comm")
    assert rep.ok


def test_demorgan_suite_results():
    assert run_law_suite(make_builtin("bool2"), "demorgan", Exhaustive()).ok
    assert run_law_suite(make_builtin("godel:4"), "demorgan", Exhaustive()).ok
    rep = run_law_suite(make_builtin("ex9"), "demorgan", Exhaustive())
    assert not rep.ok
    _, verdict = rep.failing()[0]
    assert verdict.counterexample == {"a": "m", "b": "m"}


def test_report_dict_is_json_serialisable():
    rep = run_law_suite(make_builtin("bool2"), "gkat", Exhaustive())
    blob = json.loads(json.dumps(rep.to_dict()))
    assert blob["algebra"] == "bool2"
    assert blob["fingerprint"].startswith("sha256:")
    assert blob["ok"] is True
    assert {law["status"] for law in blob["laws"]} == {"holds"}
    assert blob["strategy"] == {"mode": "exhaustive", "cap": 10**8}


def test_custom_law_list_runs():
    from gkat_workbench.laws import TEST_IDEM_LAW

    rep = run_law_suite(make_builtin("luka:5"), (TEST_IDEM_LAW,), Exhaustive())
    assert rep.suite == "custom"
    assert not rep.ok
