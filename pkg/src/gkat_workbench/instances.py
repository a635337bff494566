"""Built-in algebra instances.

Two families live here.  The finite ones — the two- and three-element
chains, powersets, the Łukasiewicz/Gödel subchains {0, 1/n, …, 1}, the
Wajsberg chains, and the three four-element counterexample algebras —
are materialised as explicit tables and checked exhaustively.  The
product ([0,1] under max/multiplication) and tropical (min/plus over
nonnegative rationals with infinity) algebras have carriers that are not
finitely closed under the residual, so they are procedural: operations
as functions, checked by sampling from a declared pool plus seeded
draws.

Every instance is addressable by a spec string (``make_builtin``), e.g.
``bool2``, ``powerset:xy``, ``luka:5``, ``wajsberg:4``, ``tropical``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Union

from .algebra import Algebra, FiniteAlgebra, ProceduralAlgebra

INF = float("inf")


def _tbl(rows: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row) for row in rows)


def _chain(
    name: str,
    names: list[str],
    plus: Callable[[int, int], int],
    seq: Callable[[int, int], int],
    arrow: Callable[[int, int], int],
    star_to: int,
    zero: int,
    one: int,
) -> FiniteAlgebra:
    """Build a totally-test finite algebra from index-level operation maps."""
    n = len(names)
    rng = range(n)
    return FiniteAlgebra(
        name=name,
        element_names=tuple(names),
        test_indices=tuple(rng),
        zero=zero,
        one=one,
        plus_table=_tbl([[plus(i, j) for j in rng] for i in rng]),
        seq_table=_tbl([[seq(i, j) for j in rng] for i in rng]),
        arrow_table=_tbl([[arrow(i, j) for j in rng] for i in rng]),
        star_table=tuple(star_to for _ in rng),
    )


# --- instance specs -------------------------------------------------------


@dataclass(frozen=True)
class Bool2:
    """The two-element Boolean algebra {0, 1}."""


@dataclass(frozen=True)
class Chain3:
    """The three-element chain 0 < u < 1 with meet composition."""


@dataclass(frozen=True)
class Powerset:
    """Subsets of a finite ground set under union/intersection."""

    ground: str = "xy"


@dataclass(frozen=True)
class LukaChain:
    """Łukasiewicz operations on the subchain {0, 1/n, ..., 1}."""

    n: int


@dataclass(frozen=True)
class GodelChain:
    """Gödel (min) operations on the subchain {0, 1/n, ..., 1}."""

    n: int


@dataclass(frozen=True)
class Wajsberg:
    """The k-element Wajsberg chain a^0 > a^1 > ... > a^(k-1)."""

    k: int


@dataclass(frozen=True)
class Ex9:
    """Four-element algebra where the test m is not multiplicatively idempotent."""


@dataclass(frozen=True)
class Lemma4Cx:
    """Four-element algebra separating the two one-sided commutation conditions."""


@dataclass(frozen=True)
class Lemma6Cx:
    """Four-element algebra where the symmetric-annihilation condition implies neither."""


@dataclass(frozen=True)
class ProductSampled:
    """Product (Goguen) operations on rational points of [0, 1], sampled."""

    samples: tuple[Fraction, ...] = (
        Fraction(0),
        Fraction(1),
        Fraction(1, 2),
        Fraction(1, 3),
        Fraction(2, 3),
        Fraction(1, 4),
        Fraction(3, 4),
        Fraction(2, 5),
        Fraction(5, 7),
        Fraction(9, 10),
    )


@dataclass(frozen=True)
class TropicalSampled:
    """Min/plus over nonnegative rationals with infinity, sampled up to ``cap``."""

    cap: int = 100
    samples: tuple[object, ...] = field(
        default=(
            INF,
            Fraction(0),
            Fraction(1),
            Fraction(1, 2),
            Fraction(2),
            Fraction(5),
            Fraction(7, 3),
        )
    )


InstanceSpec = Union[
    Bool2,
    Chain3,
    Powerset,
    LukaChain,
    GodelChain,
    Wajsberg,
    Ex9,
    Lemma4Cx,
    Lemma6Cx,
    ProductSampled,
    TropicalSampled,
]

BUILTIN_FORMS = (
    "bool2",
    "chain3",
    "powerset:<chars>",
    "luka:<n>",
    "godel:<n>",
    "wajsberg:<k>",
    "product",
    "tropical",
    "ex9",
    "lemma4",
    "lemma6",
)

#: The finite builtins exercised by the default acceptance runs.
STANDARD_FINITE = (
    "bool2",
    "chain3",
    "powerset:xy",
    "luka:5",
    "godel:5",
    "wajsberg:4",
    "ex9",
    "lemma4",
    "lemma6",
)


def parse_instance_spec(text: str) -> InstanceSpec:
    """Parse a builtin spec string such as "luka:5" or "powerset:xyz"."""
    head, sep, arg = text.strip().partition(":")
    try:
        match head:
            case "bool2" if not arg:
                return Bool2()
            case "chain3" if not arg:
                return Chain3()
            case "powerset":
                return Powerset(arg if sep else "xy")
            case "luka" if arg:
                return LukaChain(int(arg))
            case "godel" if arg:
                return GodelChain(int(arg))
            case "wajsberg" if arg:
                return Wajsberg(int(arg))
            case "product" if not arg:
                return ProductSampled()
            case "tropical" if not arg:
                return TropicalSampled()
            case "ex9" if not arg:
                return Ex9()
            case "lemma4" if not arg:
                return Lemma4Cx()
            case "lemma6" if not arg:
                return Lemma6Cx()
    except ValueError:
        raise ValueError(f"bad numeric parameter in builtin spec {text!r}") from None
    raise ValueError(
        f"unknown builtin spec {text!r}; expected one of: " + ", ".join(BUILTIN_FORMS)
    )


# --- finite tables --------------------------------------------------------

_BOOL2 = FiniteAlgebra(
    name="bool2",
    element_names=("0", "1"),
    test_indices=(0, 1),
    zero=0,
    one=1,
    plus_table=_tbl([[0, 1], [1, 1]]),
    seq_table=_tbl([[0, 0], [0, 1]]),
    arrow_table=_tbl([[1, 1], [0, 1]]),
    star_table=(1, 1),
)

_CHAIN3 = FiniteAlgebra(
    name="chain3",
    element_names=("0", "u", "1"),
    test_indices=(0, 1, 2),
    zero=0,
    one=2,
    plus_table=_tbl([[0, 1, 2], [1, 1, 2], [2, 2, 2]]),
    seq_table=_tbl([[0, 0, 0], [0, 1, 1], [0, 1, 2]]),
    arrow_table=_tbl([[2, 2, 2], [0, 2, 2], [0, 1, 2]]),
    star_table=(2, 2, 2),
)

# Elements 0 < n < m < 1; tests are {0, m, 1}.  Join is the chain maximum.
# Composition is neither meet nor idempotent on m (m;m = 0), which is what
# separates the graded class from the idempotent one.
_EX9 = FiniteAlgebra(
    name="ex9",
    element_names=("0", "n", "m", "1"),
    test_indices=(0, 2, 3),
    zero=0,
    one=3,
    plus_table=_tbl([[0, 1, 2, 3], [1, 1, 2, 3], [2, 2, 2, 3], [3, 3, 3, 3]]),
    seq_table=_tbl([[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 2], [0, 1, 2, 3]]),
    arrow_table=_tbl([[3, 0, 3, 3], [0, 0, 0, 0], [2, 0, 3, 3], [0, 0, 2, 3]]),
    star_table=(3, 3, 3, 3),
)

# Same chain as ex9 but with m idempotent and m absorbing n on the left
# (m;n = n while n;m = 0): composition commutes with the negation of a test
# without commuting with the test itself.
_LEMMA4 = FiniteAlgebra(
    name="lemma4",
    element_names=("0", "n", "m", "1"),
    test_indices=(0, 2, 3),
    zero=0,
    one=3,
    plus_table=_tbl([[0, 1, 2, 3], [1, 1, 2, 3], [2, 2, 2, 3], [3, 3, 3, 3]]),
    seq_table=_tbl([[0, 0, 0, 0], [0, 0, 0, 1], [0, 1, 2, 2], [0, 1, 2, 3]]),
    arrow_table=_tbl([[3, 0, 3, 3], [0, 0, 0, 0], [0, 0, 3, 3], [0, 0, 2, 3]]),
    star_table=(3, 3, 3, 3),
)

# Tests are {0, n, 1}; both products n;m and m;n vanish in one direction only,
# so the symmetric annihilation n;m;!n + !n;m;n = 0 holds while neither
# one-sided commutation does.
_LEMMA6 = FiniteAlgebra(
    name="lemma6",
    element_names=("0", "n", "m", "1"),
    test_indices=(0, 1, 3),
    zero=0,
    one=3,
    plus_table=_tbl([[0, 1, 2, 3], [1, 1, 2, 3], [2, 2, 2, 3], [3, 3, 3, 3]]),
    seq_table=_tbl([[0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 2, 2], [0, 1, 2, 3]]),
    arrow_table=_tbl([[3, 3, 0, 3], [1, 3, 0, 3], [0, 0, 0, 0], [0, 1, 0, 3]]),
    star_table=(3, 3, 3, 3),
)


def _powerset(ground: str) -> FiniteAlgebra:
    if not ground:
        raise ValueError("powerset ground set must be nonempty")
    if len(set(ground)) != len(ground):
        raise ValueError(f"powerset ground set has repeated characters: {ground!r}")
    if len(ground) > 8:
        raise ValueError("powerset ground set capped at 8 characters")
    size = 1 << len(ground)
    full = size - 1

    def name(mask: int) -> str:
        return "{" + ",".join(c for j, c in enumerate(ground) if mask >> j & 1) + "}"

    return FiniteAlgebra(
        name=f"powerset:{ground}",
        element_names=tuple(name(m) for m in range(size)),
        test_indices=tuple(range(size)),
        zero=0,
        one=full,
        plus_table=_tbl([[i | j for j in range(size)] for i in range(size)]),
        seq_table=_tbl([[i & j for j in range(size)] for i in range(size)]),
        arrow_table=_tbl([[(full & ~i) | j for j in range(size)] for i in range(size)]),
        star_table=tuple(full for _ in range(size)),
    )


def _luka(n: int) -> FiniteAlgebra:
    if n < 1:
        raise ValueError("luka chain needs n >= 1")
    names = [str(Fraction(i, n)) for i in range(n + 1)]
    return _chain(
        f"luka:{n}",
        names,
        plus=max,
        seq=lambda i, j: max(0, i + j - n),
        arrow=lambda i, j: min(n, n - i + j),
        star_to=n,
        zero=0,
        one=n,
    )


def _godel(n: int) -> FiniteAlgebra:
    if n < 1:
        raise ValueError("godel chain needs n >= 1")
    names = [str(Fraction(i, n)) for i in range(n + 1)]
    return _chain(
        f"godel:{n}",
        names,
        plus=max,
        seq=min,
        arrow=lambda i, j: n if i <= j else j,
        star_to=n,
        zero=0,
        one=n,
    )


def _wajsberg(k: int) -> FiniteAlgebra:
    if not 2 <= k <= 64:
        raise ValueError("wajsberg chain needs 2 <= k <= 64")
    names = [f"a^{i}" for i in range(k)]
    return _chain(
        f"wajsberg:{k}",
        names,
        plus=min,  # a^i + a^j = a^min(i,j): larger exponents sit lower
        seq=lambda i, j: min(i + j, k - 1),
        arrow=lambda i, j: max(j - i, 0),
        star_to=0,
        zero=k - 1,
        one=0,
    )


# --- procedural instances -------------------------------------------------


def _product_algebra(spec: ProductSampled) -> ProceduralAlgebra:
    one = Fraction(1)
    zero = Fraction(0)

    def arrow(x: Fraction, y: Fraction) -> Fraction:
        return one if x <= y else y / x

    def draw(rng: random.Random) -> Fraction:
        d = rng.randint(1, 30)
        return Fraction(rng.randint(0, d), d)

    return ProceduralAlgebra(
        name="product",
        zero=zero,
        one=one,
        plus_fn=max,
        seq_fn=lambda x, y: x * y,
        star_fn=lambda x: one,
        arrow_fn=arrow,
        test_pred=lambda v: True,
        samples=tuple(spec.samples),
        draw=draw,
        fmt=str,
        member_pred=lambda v: isinstance(v, Fraction) and zero <= v <= one,
    )


def _tropical_algebra(spec: TropicalSampled) -> ProceduralAlgebra:
    one = Fraction(0)

    def seq(x, y):
        if x == INF or y == INF:
            return INF
        return x + y

    def arrow(x, y):
        # Largest z (in the min-order, i.e. numerically smallest cost) with
        # x + z below y; infinite x residuates to the unit.
        if x == INF:
            return one
        if y == INF:
            return INF
        return max(y - x, one)

    def draw(rng: random.Random):
        if rng.random() < 0.125:
            return INF
        d = rng.randint(1, 12)
        return Fraction(rng.randint(0, spec.cap * d), d)

    return ProceduralAlgebra(
        name="tropical",
        zero=INF,
        one=one,
        plus_fn=min,
        seq_fn=seq,
        star_fn=lambda x: one,
        arrow_fn=arrow,
        test_pred=lambda v: True,
        samples=tuple(spec.samples),
        draw=draw,
        fmt=lambda v: "inf" if v == INF else str(v),
        member_pred=lambda v: v == INF or (isinstance(v, Fraction) and v >= 0),
    )


def build_instance(spec: InstanceSpec) -> Algebra:
    match spec:
        case Bool2():
            return _BOOL2
        case Chain3():
            return _CHAIN3
        case Powerset(ground):
            return _powerset(ground)
        case LukaChain(n):
            return _luka(n)
        case GodelChain(n):
            return _godel(n)
        case Wajsberg(k):
            return _wajsberg(k)
        case Ex9():
            return _EX9
        case Lemma4Cx():
            return _LEMMA4
        case Lemma6Cx():
            return _LEMMA6
        case ProductSampled():
            return _product_algebra(spec)
        case TropicalSampled():
            return _tropical_algebra(spec)
    raise TypeError(f"not an instance spec: {spec!r}")


def make_builtin(text: str) -> Algebra:
    """Resolve a builtin spec string to a ready algebra."""
    return build_instance(parse_instance_spec(text))
