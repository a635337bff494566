"""Evaluation of terms in an algebra and (quasi-)equation checking.

Checking enumerates valuations of the free variables -- tests range over
the test carrier, programs over the whole carrier -- and reports the first
failing valuation in lexicographic order (variable order, then element
index).  Three strategies exist:

* ``Exhaustive`` -- every valuation, finite algebras only, guarded by an
  evaluation cap.
* ``Sampled(samples, seed)`` -- a fixed number of seeded draws.  The
  candidate pool always contains 0, 1 and every declared sample element;
  procedural algebras may extend it with generated elements.
* ``Auto(cap, samples, seed)`` -- per check: exhaustive when the valuation
  space fits under ``cap``, sampled otherwise.

Sampled valuations are generated up front from the seed, so results are
identical for any worker count; with ``jobs > 1`` the valuation space is
partitioned into contiguous chunks and the failure with the smallest
global index wins.  Terms are evaluated by structural recursion memoised
on (subterm, restriction of the valuation to its free variables).
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product as iproduct
from typing import Iterable, Mapping, Optional, Sequence, Union

from .algebra import Algebra, AlgebraError, Element, SizeError, SortError
from .terms import Arrow, One, Plus, Seq, Sort, Star, Term, Var, Zero, free_vars, pretty

REL_SYMBOL = {"eq": "=", "leq": "<="}


@dataclass(frozen=True)
class Equation:
    """A term pair related by ``=`` or ``<=`` (rel: "eq" | "leq")."""

    lhs: Term
    rhs: Term
    rel: str = "eq"

    def __post_init__(self) -> None:
        if self.rel not in REL_SYMBOL:
            raise ValueError(f"unknown relation {self.rel!r}")

    def render(self) -> str:
        return f"{pretty(self.lhs)} {REL_SYMBOL[self.rel]} {pretty(self.rhs)}"


@dataclass(frozen=True)
class Exhaustive:
    cap: int = 10**8


@dataclass(frozen=True)
class Sampled:
    samples: int = 100_000
    seed: int = 0


@dataclass(frozen=True)
class Auto:
    cap: int = 100_000
    samples: int = 100_000
    seed: int = 0


Strategy = Union[Exhaustive, Sampled, Auto]


def describe_strategy(strategy: Strategy) -> dict:
    match strategy:
        case Exhaustive(cap):
            return {"mode": "exhaustive", "cap": cap}
        case Sampled(samples, seed):
            return {"mode": "sample", "samples": samples, "seed": seed}
        case Auto(cap, samples, seed):
            return {"mode": "auto", "cap": cap, "samples": samples, "seed": seed}
    raise TypeError(f"not a strategy: {strategy!r}")


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check.

    ``checked`` counts valuations examined up to and including the
    counterexample (so it is reproducible for any worker count); on a pass
    it equals the number of valuations visited.  ``space`` is the full
    valuation-space size when enumerable, else None.
    """

    status: str  # "valid" | "refuted" | "sampled-valid"
    mode: str  # "exhaustive" | "sampled"
    checked: int
    space: Optional[int]
    counterexample: Optional[dict[str, str]] = None
    lhs_value: Optional[str] = None
    rhs_value: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status != "refuted"

    def to_dict(self) -> dict:
        out: dict = {
            "status": self.status,
            "mode": self.mode,
            "checked": self.checked,
            "space": self.space,
        }
        if self.counterexample is not None:
            out["counterexample"] = dict(self.counterexample)
            out["lhs_value"] = self.lhs_value
            out["rhs_value"] = self.rhs_value
        return out


_MISS = object()


class _Evaluator:
    """Structural-recursion evaluator with per-run memoisation."""

    __slots__ = ("alg", "cache", "_fv", "unchecked_arrow")

    def __init__(self, alg: Algebra, unchecked_arrow: bool = False):
        self.alg = alg
        self.cache: dict = {}
        self._fv: dict[int, tuple[str, ...]] = {}
        self.unchecked_arrow = unchecked_arrow

    def fv(self, t: Term) -> tuple[str, ...]:
        names = self._fv.get(id(t))
        if names is None:
            names = tuple(v.name for v in free_vars(t))
            self._fv[id(t)] = names
        return names

    def run(self, t: Term, val: Mapping[str, Element]) -> Element:
        key = (id(t), tuple(val[n] for n in self.fv(t)))
        hit = self.cache.get(key, _MISS)
        if hit is not _MISS:
            return hit
        alg = self.alg
        match t:
            case Var(name, _):
                out = val[name]
            case Zero():
                out = alg.zero
            case One():
                out = alg.one
            case Plus(l, r):
                out = alg.plus(self.run(l, val), self.run(r, val))
            case Seq(l, r):
                out = alg.seq(self.run(l, val), self.run(r, val))
            case Star(inner):
                out = alg.star(self.run(inner, val))
            case Arrow(l, r):
                a = self.run(l, val)
                b = self.run(r, val)
                if self.unchecked_arrow and alg.finite:
                    out = alg.arrow_unchecked(a, b)
                else:
                    out = alg.arrow(a, b)
            case _:
                raise TypeError(f"not a term: {t!r}")
        self.cache[key] = out
        return out

    def holds(self, eqn: Equation, val: Mapping[str, Element]) -> bool:
        l = self.run(eqn.lhs, val)
        r = self.run(eqn.rhs, val)
        if eqn.rel == "eq":
            return l == r
        return self.alg.plus(l, r) == r


def eval_term(
    alg: Algebra,
    t: Term,
    valuation: Mapping[str, Element],
    unchecked_arrow: bool = False,
) -> Element:
    """Evaluate ``t`` under ``valuation`` (variable name -> element)."""
    for v in free_vars(t):
        if v.name not in valuation:
            raise AlgebraError(f"no binding for variable {v.name!r}")
        el = valuation[v.name]
        alg.check_member(el)
        if v.sort is Sort.TEST and not unchecked_arrow and not alg.is_test(el):
            raise SortError(
                f"variable {v.name!r} is test-sorted but {alg.el_name(el)!r}"
                f" is not a test of {alg.name!r}"
            )
    return _Evaluator(alg, unchecked_arrow).run(t, valuation)


# -- valuation enumeration --------------------------------------------------


def _collect_variables(eqns: Sequence[Equation]) -> tuple[Var, ...]:
    seen: dict[str, Var] = {}
    for eqn in eqns:
        for term in (eqn.lhs, eqn.rhs):
            for v in free_vars(term):
                prev = seen.get(v.name)
                if prev is None:
                    seen[v.name] = v
                elif prev.sort is not v.sort:
                    raise SortError(f"variable {v.name!r} is used at two different sorts")
    return tuple(seen.values())


def _finite_domains(alg: Algebra, variables: Sequence[Var]) -> list[Sequence[Element]]:
    return [
        alg.tests() if v.sort is Sort.TEST else alg.elements()  # type: ignore[union-attr]
        for v in variables
    ]


def _sample_pools(alg: Algebra, rng: random.Random, pool_extra: int = 48):
    if alg.finite:
        progs: Sequence[Element] = list(alg.elements())
        tests: Sequence[Element] = list(alg.tests())
        return progs, tests
    pool = list(alg.samples)
    if alg.draw is not None:
        pool.extend(alg.draw(rng) for _ in range(pool_extra))
    uniq: list[Element] = []
    seen = set()
    for el in pool:
        if el not in seen:
            seen.add(el)
            uniq.append(el)
    tests = [el for el in uniq if alg.is_test(el)]
    return uniq, tests


def _space_size(domains: Sequence[Sequence[Element]]) -> int:
    size = 1
    for dom in domains:
        size *= len(dom)
    return size


@dataclass
class _Check:
    """One (quasi-)equation check bound to an algebra and strategy."""

    alg: Algebra
    hypotheses: tuple[Equation, ...]
    conclusion: Equation
    variables: tuple[Var, ...]
    unchecked_arrow: bool = False

    def _chunk(self, valuations: Iterable[tuple], base_rank: int):
        """Scan one chunk; return (fail_rank, vals) or (None, count)."""
        ev = _Evaluator(self.alg, self.unchecked_arrow)
        names = tuple(v.name for v in self.variables)
        count = 0
        for vals in valuations:
            val = dict(zip(names, vals))
            ok = True
            for hyp in self.hypotheses:
                if not ev.holds(hyp, val):
                    ok = False
                    break
            if ok and not ev.holds(self.conclusion, val):
                return base_rank + count, vals
            count += 1
        return None, count

    def _verdict_for_failure(self, rank: int, vals: tuple, mode: str, space) -> Verdict:
        alg = self.alg
        val = {v.name: el for v, el in zip(self.variables, vals)}
        ev = _Evaluator(alg, self.unchecked_arrow)
        lhs_val = ev.run(self.conclusion.lhs, val)
        rhs_val = ev.run(self.conclusion.rhs, val)
        return Verdict(
            status="refuted",
            mode=mode,
            checked=rank + 1,
            space=space,
            counterexample={name: alg.el_name(el) for name, el in val.items()},
            lhs_value=alg.el_name(lhs_val),
            rhs_value=alg.el_name(rhs_val),
        )

    def _run_chunks(self, chunks, mode: str, space, passed_status: str, total: int, jobs: int) -> Verdict:
        # chunks: list of (base_rank, iterable-of-valuation-tuples)
        results = []
        if jobs > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                futures = [pool.submit(self._chunk, it, base) for base, it in chunks]
                results = [f.result() for f in futures]
        else:
            for base, it in chunks:
                res = self._chunk(it, base)
                results.append(res)
                if res[0] is not None:
                    break
        failures = [(rank, vals) for rank, vals in results if rank is not None]
        if failures:
            rank, vals = min(failures, key=lambda rv: rv[0])
            return self._verdict_for_failure(rank, vals, mode, space)
        return Verdict(status=passed_status, mode=mode, checked=total, space=space)

    def run_exhaustive(self, cap: int, jobs: int) -> Verdict:
        alg = self.alg
        if not alg.finite:
            raise AlgebraError(
                f"exhaustive checking requires a finite algebra, and {alg.name!r} is procedural"
            )
        domains = _finite_domains(alg, self.variables)
        space = _space_size(domains)
        if space > cap:
            raise SizeError(
                f"valuation space of size {space} exceeds the exhaustive cap {cap};"
                " use a sampled strategy"
            )
        if not domains:
            chunks = [(0, iter([()]))]
            return self._run_chunks(chunks, "exhaustive", space, "valid", space, 1)
        first = list(domains[0])
        rest = [list(d) for d in domains[1:]]
        rest_size = _space_size(rest)
        njobs = max(1, min(jobs, len(first)))
        per = (len(first) + njobs - 1) // njobs
        chunks = []
        for w in range(njobs):
            lo, hi = w * per, min((w + 1) * per, len(first))
            if lo >= hi:
                continue
            chunks.append((lo * rest_size, iproduct(first[lo:hi], *rest)))
        return self._run_chunks(chunks, "exhaustive", space, "valid", space, jobs)

    def run_sampled(self, samples: int, seed: int, jobs: int) -> Verdict:
        alg = self.alg
        rng = random.Random(seed)
        prog_pool, test_pool = _sample_pools(alg, rng)
        if not test_pool:
            raise AlgebraError(f"algebra {alg.name!r} offers no test samples")
        domains = [test_pool if v.sort is Sort.TEST else prog_pool for v in self.variables]
        space = _space_size(_finite_domains(alg, self.variables)) if alg.finite else None
        valuations = [tuple(rng.choice(dom) for dom in domains) for _ in range(samples)]
        njobs = max(1, min(jobs, samples)) if samples else 1
        per = (samples + njobs - 1) // njobs if samples else 1
        chunks = []
        for w in range(njobs):
            lo, hi = w * per, min((w + 1) * per, samples)
            if lo >= hi:
                continue
            chunks.append((lo, iter(valuations[lo:hi])))
        if not chunks:
            chunks = [(0, iter([]))]
        return self._run_chunks(chunks, "sampled", space, "sampled-valid", samples, jobs)

    def run(self, strategy: Strategy, jobs: int = 1) -> Verdict:
        match strategy:
            case Exhaustive(cap):
                return self.run_exhaustive(cap, jobs)
            case Sampled(samples, seed):
                return self.run_sampled(samples, seed, jobs)
            case Auto(cap, samples, seed):
                if self.alg.finite:
                    domains = _finite_domains(self.alg, self.variables)
                    if _space_size(domains) <= cap:
                        return self.run_exhaustive(cap, jobs)
                return self.run_sampled(samples, seed, jobs)
        raise TypeError(f"not a strategy: {strategy!r}")


def check_equation(
    alg: Algebra,
    equation: Equation,
    strategy: Strategy = Exhaustive(),
    jobs: int = 1,
    variables: Optional[Sequence[Var]] = None,
    unchecked_arrow: bool = False,
) -> Verdict:
    """Check one equation (or inequation) over all/sampled valuations."""
    return check_quasi_equation(alg, (), equation, strategy, jobs, variables, unchecked_arrow)


def check_quasi_equation(
    alg: Algebra,
    hypotheses: Sequence[Equation],
    conclusion: Equation,
    strategy: Strategy = Exhaustive(),
    jobs: int = 1,
    variables: Optional[Sequence[Var]] = None,
    unchecked_arrow: bool = False,
) -> Verdict:
    """Check hypotheses => conclusion; vacuous valuations count as passes."""
    hyps = tuple(hypotheses)
    if variables is None:
        variables = _collect_variables(list(hyps) + [conclusion])
    chk = _Check(alg, hyps, conclusion, tuple(variables), unchecked_arrow)
    return chk.run(strategy, jobs)
