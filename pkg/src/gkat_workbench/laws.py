"""Law catalogue, suite runner, and algebra classification.

The suites form a chain: ``kleene`` (idempotent-semiring plus iteration
laws) is contained in ``gkat`` (adds the test laws: residuation of ; by ->
on tests, boundedness, commutation), which is contained in ``igkat``
(adds test idempotence a;a = a), which is contained in ``kat`` (adds the
excluded-middle law a + !a = 1).  ``derived`` collects consequences that
any algebra passing ``gkat`` must also satisfy, and ``demorgan`` is the
negation-of-join law used as a side condition by loop denesting.

Nothing is ever assumed: every law is model-checked over the given
algebra.  ``classify`` places an algebra in the strongest class whose
suite fully passes, strongest first, and reports the discriminating
counterexample for the first class that failed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .algebra import Algebra
from .semantics import (
    Auto,
    Equation,
    Exhaustive,
    Strategy,
    Verdict,
    check_quasi_equation,
    describe_strategy,
)
from .terms import Sort, Term, Var, parse_term

_SORTS = {
    "p": Sort.PROGRAM,
    "q": Sort.PROGRAM,
    "r": Sort.PROGRAM,
    "s": Sort.PROGRAM,
    "a": Sort.TEST,
    "b": Sort.TEST,
    "c": Sort.TEST,
    "d": Sort.TEST,
}


def _eqn(text: str) -> Equation:
    """Parse "lhs = rhs" or "lhs <= rhs" over the stock variable names."""
    if "<=" in text:
        lhs, rhs = text.split("<=", 1)
        rel = "leq"
    else:
        lhs, rhs = text.split("=", 1)
        rel = "eq"
    return Equation(parse_term(lhs, _SORTS), parse_term(rhs, _SORTS), rel)


@dataclass(frozen=True)
class Law:
    """A named (quasi-)equation with a fixed variable order."""

    name: str
    variables: tuple[Var, ...]
    hypotheses: tuple[Equation, ...]
    conclusion: Equation

    def render(self) -> str:
        concl = self.conclusion.render()
        if not self.hypotheses:
            return concl
        return " & ".join(h.render() for h in self.hypotheses) + "  =>  " + concl


def _law(name: str, var_names: str, conclusion: str, *hypotheses: str) -> Law:
    variables = tuple(Var(v, _SORTS[v]) for v in var_names.split())
    return Law(name, variables, tuple(_eqn(h) for h in hypotheses), _eqn(conclusion))


KLEENE_LAWS: tuple[Law, ...] = (
    _law("plus-assoc", "p q r", "p+(q+r) = (p+q)+r"),
    _law("plus-comm", "p q", "p+q = q+p"),
    _law("seq-assoc", "p q r", "p;(q;r) = (p;q);r"),
    _law("seq-unit-right", "p", "p;1 = p"),
    _law("seq-unit-left", "p", "1;p = p"),
    _law("left-distrib", "p q r", "p;(q+r) = p;q+p;r"),
    _law("right-distrib", "p q r", "(p+q);r = p;r+q;r"),
    _law("seq-zero-right", "p", "p;0 = 0"),
    _law("seq-zero-left", "p", "0;p = 0"),
    _law("star-unfold", "p", "1+p;p* = p*"),
    _law("star-ind-left", "p q r", "p*;q <= r", "q+p;r <= r"),
    _law("star-ind-right", "p q r", "q;p* <= r", "q+r;p <= r"),
)

TEST_LAWS: tuple[Law, ...] = (
    _law("residuation-fwd", "a b c", "b <= a->c", "a;b <= c"),
    _law("residuation-bwd", "a b c", "a;b <= c", "b <= a->c"),
    _law("test-bound", "a", "a <= 1"),
    _law("test-comm", "a b", "a;b = b;a"),
)

TEST_IDEM_LAW = _law("test-idem", "a", "a;a = a")
EXCLUDED_MIDDLE_LAW = _law("excluded-middle", "a", "a+!a = 1")

DERIVED_LAWS: tuple[Law, ...] = (
    _law("plus-idem", "p", "p+p = p"),
    _law("plus-zero", "p", "p+0 = p"),
    _law("star-unfold-right", "p", "1+p*;p = p*"),
    _law("plus-monotone", "p q r s", "p+r <= q+s", "p <= q", "r <= s"),
    _law("test-contradiction", "a", "a;!a = 0"),
)

DEMORGAN_LAW = _law("de-morgan", "a b", "!(a+b) = !a;!b")

SUITES: dict[str, tuple[Law, ...]] = {
    "kleene": KLEENE_LAWS,
    "gkat": KLEENE_LAWS + TEST_LAWS,
    "igkat": KLEENE_LAWS + TEST_LAWS + (TEST_IDEM_LAW,),
    "kat": KLEENE_LAWS + TEST_LAWS + (TEST_IDEM_LAW, EXCLUDED_MIDDLE_LAW),
    "derived": DERIVED_LAWS,
    "demorgan": (DEMORGAN_LAW,),
}

LAW_STATUS = {"valid": "holds", "refuted": "fails", "sampled-valid": "sampled-holds"}


@dataclass(frozen=True)
class LawReport:
    algebra_name: str
    fingerprint: str
    suite: str
    strategy: dict
    entries: tuple[tuple[Law, Verdict], ...]
    elapsed_ms: int

    @property
    def ok(self) -> bool:
        return all(v.ok for _, v in self.entries)

    def failing(self) -> tuple[tuple[Law, Verdict], ...]:
        return tuple((law, v) for law, v in self.entries if not v.ok)

    def to_dict(self) -> dict:
        return {
            "algebra": self.algebra_name,
            "fingerprint": self.fingerprint,
            "suite": self.suite,
            "strategy": self.strategy,
            "laws": [
                {
                    "name": law.name,
                    "statement": law.render(),
                    "status": LAW_STATUS[v.status],
                    **{k: val for k, val in v.to_dict().items() if k != "status"},
                }
                for law, v in self.entries
            ],
            "ok": self.ok,
            "elapsed_ms": self.elapsed_ms,
        }


def check_law(alg: Algebra, law: Law, strategy: Strategy = Exhaustive(), jobs: int = 1) -> Verdict:
    return check_quasi_equation(
        alg, law.hypotheses, law.conclusion, strategy, jobs, variables=law.variables
    )


def run_law_suite(
    alg: Algebra,
    suite: Union[str, Sequence[Law]],
    strategy: Strategy = Exhaustive(),
    jobs: int = 1,
) -> LawReport:
    """Check every law of a suite against ``alg`` and report per-law verdicts."""
    if isinstance(suite, str):
        try:
            laws: Sequence[Law] = SUITES[suite]
        except KeyError:
            raise ValueError(
                f"unknown suite {suite!r}; expected one of {', '.join(sorted(SUITES))}"
            ) from None
        suite_name = suite
    else:
        laws = tuple(suite)
        suite_name = "custom"
    start = time.perf_counter()
    entries = tuple((law, check_law(alg, law, strategy, jobs)) for law in laws)
    elapsed = int((time.perf_counter() - start) * 1000)
    return LawReport(
        alg.name, alg.fingerprint(), suite_name, describe_strategy(strategy), entries, elapsed
    )


CLASS_NAMES = ("KAT", "IGKAT-not-KAT", "GKAT-not-IGKAT", "NotGKAT")


@dataclass(frozen=True)
class Classification:
    algebra_name: str
    class_name: str
    witness_law: Optional[str]
    witness: Optional[Verdict]
    base_report: LawReport

    def to_dict(self) -> dict:
        out: dict = {
            "algebra": self.algebra_name,
            "class": self.class_name,
        }
        if self.witness_law is not None and self.witness is not None:
            out["witness"] = {"law": self.witness_law, **self.witness.to_dict()}
        return out


def classify(alg: Algebra, strategy: Strategy = Auto(), jobs: int = 1) -> Classification:
    """Place ``alg`` in the strongest class whose laws all pass.

    Classes are tried strongest first (kat, then igkat, then gkat); the
    witness records the first failing law of the first class that did not
    pass, e.g. the test-idempotence counterexample for an algebra that is
    graded but not idempotent.
    """
    base = run_law_suite(alg, "gkat", strategy, jobs)
    if not base.ok:
        law, verdict = base.failing()[0]
        return Classification(alg.name, "NotGKAT", law.name, verdict, base)
    idem = check_law(alg, TEST_IDEM_LAW, strategy, jobs)
    if not idem.ok:
        return Classification(alg.name, "GKAT-not-IGKAT", TEST_IDEM_LAW.name, idem, base)
    excl = check_law(alg, EXCLUDED_MIDDLE_LAW, strategy, jobs)
    if not excl.ok:
        return Classification(alg.name, "IGKAT-not-KAT", EXCLUDED_MIDDLE_LAW.name, excl, base)
    return Classification(alg.name, "KAT", None, None, base)
