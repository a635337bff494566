"""Carriers for graded algebras of programs and tests.

An algebra here is a two-sorted structure: a carrier K of programs with
+ (choice), ; (composition), * (iteration), and the constants 0 and 1,
together with a sub-carrier T of tests that is closed under +, ; and the
residual arrow ->.  Nothing in this module assumes any equational laws
beyond well-formedness; which laws actually hold is established by running
law suites (see laws.py), never assumed.

Two realisations are provided:

* ``FiniteAlgebra`` -- explicit operation tables over an indexed carrier.
  Elements are plain integer indices into the declared element list.
  The arrow table is stored full-size (|K| x |K|) so printed tables can be
  transcribed verbatim, but only the tests x tests region is validated and
  reachable through ``arrow``; the rest is inert data.

* ``ProceduralAlgebra`` -- operations given as functions over arbitrary
  hashable values, with a declared sample list (always containing 0 and 1)
  and an optional seeded generator for drawing further elements.  These
  support sampled checking only.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterator, Optional, Union

Element = Hashable


class AlgebraError(Exception):
    """Base class for errors raised by algebra construction or use."""


class DomainError(AlgebraError):
    """An element does not belong to the algebra it was used with."""


class SortError(AlgebraError):
    """An operation or binding was applied outside its sort.

    The main offender is the arrow, which is defined only between tests.
    """


class ClosureError(AlgebraError):
    """A table is malformed or the test region is not closed."""


class DivergenceError(AlgebraError):
    """An iteration did not stabilise within its step bound."""


class SizeError(AlgebraError):
    """A valuation space exceeds the configured exhaustive cap."""


@dataclass(frozen=True)
class FiniteAlgebra:
    """A finite algebra given by explicit operation tables.

    ``element_names`` fixes the element order; all tables are indexed by
    position in that list (row = left operand, column = right operand).
    ``test_indices`` must be ascending and must contain ``zero`` and
    ``one``.  Construction validates shape and test-region closure and
    raises ``ClosureError`` with a cell-precise message otherwise.
    """

    name: str
    element_names: tuple[str, ...]
    test_indices: tuple[int, ...]
    zero: int
    one: int
    plus_table: tuple[tuple[int, ...], ...]
    seq_table: tuple[tuple[int, ...], ...]
    arrow_table: tuple[tuple[int, ...], ...]
    star_table: tuple[int, ...]

    finite = True

    def __post_init__(self) -> None:
        n = len(self.element_names)
        if n == 0:
            raise ClosureError(f"algebra {self.name!r} has no elements")
        if len(set(self.element_names)) != n:
            raise ClosureError(f"algebra {self.name!r} has duplicate element names")
        for i in self.test_indices:
            if not 0 <= i < n:
                raise ClosureError(f"test index {i} out of range in {self.name!r}")
        if tuple(sorted(set(self.test_indices))) != self.test_indices:
            raise ClosureError(f"test indices of {self.name!r} must be ascending and distinct")
        test_set = set(self.test_indices)
        for label, idx in (("zero", self.zero), ("one", self.one)):
            if not 0 <= idx < n:
                raise ClosureError(f"{label} index {idx} out of range in {self.name!r}")
            if idx not in test_set:
                raise ClosureError(
                    f"{label} element {self.element_names[idx]!r} of {self.name!r} is not a test"
                )
        for tname, table in (
            ("plus", self.plus_table),
            ("seq", self.seq_table),
            ("arrow", self.arrow_table),
        ):
            if len(table) != n:
                raise ClosureError(f"table {tname} of {self.name!r} has {len(table)} rows, expected {n}")
            for i, row in enumerate(table):
                if len(row) != n:
                    raise ClosureError(
                        f"table {tname} of {self.name!r}, row {self.element_names[i]!r}:"
                        f" {len(row)} entries, expected {n}"
                    )
                for j, v in enumerate(row):
                    if not 0 <= v < n:
                        raise ClosureError(
                            f"table {tname} of {self.name!r}, row {self.element_names[i]!r},"
                            f" column {self.element_names[j]!r}: index {v} out of range"
                        )
        if len(self.star_table) != n:
            raise ClosureError(f"table star of {self.name!r} has {len(self.star_table)} entries, expected {n}")
        for i, v in enumerate(self.star_table):
            if not 0 <= v < n:
                raise ClosureError(
                    f"table star of {self.name!r}, column {self.element_names[i]!r}: index {v} out of range"
                )
        # The test region must be a sub-carrier: closed under plus, seq and arrow.
        for tname, table in (
            ("plus", self.plus_table),
            ("seq", self.seq_table),
            ("arrow", self.arrow_table),
        ):
            for i in self.test_indices:
                for j in self.test_indices:
                    v = table[i][j]
                    if v not in test_set:
                        raise ClosureError(
                            f"table {tname} of {self.name!r}, row {self.element_names[i]!r},"
                            f" column {self.element_names[j]!r}: result"
                            f" {self.element_names[v]!r} is not a test"
                        )
        object.__setattr__(self, "_index", {nm: i for i, nm in enumerate(self.element_names)})
        object.__setattr__(self, "_test_set", frozenset(self.test_indices))

    # -- basic queries ------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.element_names)

    def elements(self) -> range:
        return range(self.size)

    def tests(self) -> tuple[int, ...]:
        return self.test_indices

    def is_test(self, a: int) -> bool:
        self.check_member(a)
        return a in self._test_set  # type: ignore[attr-defined]

    def el_name(self, a: int) -> str:
        self.check_member(a)
        return self.element_names[a]

    def resolve(self, name: str) -> int:
        try:
            return self._index[name]  # type: ignore[attr-defined]
        except KeyError:
            raise DomainError(f"algebra {self.name!r} has no element named {name!r}") from None

    def check_member(self, a: Element) -> None:
        if type(a) is not int or not 0 <= a < self.size:
            raise DomainError(f"{a!r} is not an element of algebra {self.name!r}")

    # -- operations ---------------------------------------------------------

    def plus(self, a: int, b: int) -> int:
        return self.plus_table[a][b]

    def seq(self, a: int, b: int) -> int:
        return self.seq_table[a][b]

    def star(self, a: int) -> int:
        return self.star_table[a]

    def arrow(self, a: int, b: int) -> int:
        if a not in self._test_set or b not in self._test_set:  # type: ignore[attr-defined]
            self.check_member(a)
            self.check_member(b)
            bad = a if a not in self._test_set else b  # type: ignore[attr-defined]
            raise SortError(
                f"arrow is defined only between tests; {self.element_names[bad]!r}"
                f" is not a test of {self.name!r}"
            )
        return self.arrow_table[a][b]

    def arrow_unchecked(self, a: int, b: int) -> int:
        """Read the stored arrow table without the test-sort guard.

        Only for deliberately ranging over the full printed table, e.g. when
        reproducing counterexamples whose witness lies outside the tests.
        """
        self.check_member(a)
        self.check_member(b)
        return self.arrow_table[a][b]

    # -- serialisation ------------------------------------------------------

    def canonical_text(self) -> str:
        """Render the algebra in the text table format (see algfile.py)."""
        names = self.element_names
        lines = [
            f"algebra {self.name}",
            "elements " + " ".join(names),
            "tests " + " ".join(names[i] for i in self.test_indices),
            f"zero {names[self.zero]}",
            f"one {names[self.one]}",
        ]
        for tname, table in (
            ("plus", self.plus_table),
            ("seq", self.seq_table),
            ("arrow", self.arrow_table),
        ):
            lines.append(f"table {tname}")
            for row in table:
                lines.append(" ".join(names[v] for v in row))
        lines.append("table star")
        lines.append(" ".join(names[v] for v in self.star_table))
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return "sha256:" + hashlib.sha256(self.canonical_text().encode()).hexdigest()


@dataclass(frozen=True)
class ProceduralAlgebra:
    """An algebra given by operation functions over hashable values.

    ``samples`` is the declared candidate pool for sampled checking and must
    contain ``zero`` and ``one``.  ``draw``, when present, generates further
    elements from a seeded ``random.Random``.  ``test_pred`` decides test
    membership; the arrow function is only ever applied between tests.
    """

    name: str
    zero: Element
    one: Element
    plus_fn: Callable[[Element, Element], Element]
    seq_fn: Callable[[Element, Element], Element]
    star_fn: Callable[[Element], Element]
    arrow_fn: Callable[[Element, Element], Element]
    test_pred: Callable[[Element], bool]
    samples: tuple[Element, ...]
    draw: Optional[Callable[[Any], Element]] = None
    fmt: Optional[Callable[[Element], str]] = None
    member_pred: Optional[Callable[[Element], bool]] = None

    finite = False

    def __post_init__(self) -> None:
        if self.zero not in self.samples or self.one not in self.samples:
            raise ClosureError(f"sample list of {self.name!r} must contain both constants")
        if not any(self.test_pred(s) for s in self.samples):
            raise ClosureError(f"sample list of {self.name!r} contains no tests")

    def is_test(self, a: Element) -> bool:
        return self.test_pred(a)

    def el_name(self, a: Element) -> str:
        return self.fmt(a) if self.fmt is not None else str(a)

    def check_member(self, a: Element) -> None:
        if self.member_pred is not None and not self.member_pred(a):
            raise DomainError(f"{self.el_name(a)!r} is not an element of algebra {self.name!r}")

    def test_samples(self) -> tuple[Element, ...]:
        return tuple(s for s in self.samples if self.test_pred(s))

    def plus(self, a: Element, b: Element) -> Element:
        return self.plus_fn(a, b)

    def seq(self, a: Element, b: Element) -> Element:
        return self.seq_fn(a, b)

    def star(self, a: Element) -> Element:
        return self.star_fn(a)

    def arrow(self, a: Element, b: Element) -> Element:
        if not self.test_pred(a) or not self.test_pred(b):
            bad = a if not self.test_pred(a) else b
            raise SortError(
                f"arrow is defined only between tests; {self.el_name(bad)!r}"
                f" is not a test of {self.name!r}"
            )
        return self.arrow_fn(a, b)

    def fingerprint(self) -> str:
        ident = self.name + "|" + "|".join(self.el_name(s) for s in self.samples)
        return "sha256:" + hashlib.sha256(ident.encode()).hexdigest()


Algebra = Union[FiniteAlgebra, ProceduralAlgebra]


def derived_leq(alg: Algebra, a: Element, b: Element) -> bool:
    """The natural order: a <= b iff a + b = b."""
    alg.check_member(a)
    alg.check_member(b)
    return alg.plus(a, b) == b


def star_lfp(alg: Algebra, a: Element, max_steps: Optional[int] = None) -> Element:
    """Least-fixpoint iterate of iteration: s0 = 1, s_{k+1} = 1 + a;s_k.

    Stops at the first stabilised iterate and returns it.  On a finite
    algebra the bound defaults to |K| + 1 steps; a procedural algebra needs
    an explicit ``max_steps``.  Raises ``DivergenceError`` if the iteration
    has not stabilised within the bound.
    """
    alg.check_member(a)
    if max_steps is None:
        if not alg.finite:
            raise DivergenceError(
                f"star_lfp on procedural algebra {alg.name!r} needs an explicit max_steps"
            )
        max_steps = alg.size + 1
    s = alg.one
    for _ in range(max_steps):
        nxt = alg.plus(alg.one, alg.seq(a, s))
        if nxt == s:
            return s
        s = nxt
    raise DivergenceError(
        f"iteration of {alg.el_name(a)!r} in {alg.name!r} did not stabilise"
        f" within {max_steps} steps"
    )
