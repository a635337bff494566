"""Derived algebras: graded sets, graded relations, graded languages, matrices.

Each construction is given by a small kernel of value-level operations over
a finite base algebra.  When the derived carrier is small enough (``cap``)
the kernel is enumerated into an ordinary ``FiniteAlgebra`` with full
tables, so every law can be checked exhaustively; otherwise the kernel is
wrapped as a ``ProceduralAlgebra`` with seeded random draws (opt in via
``sampled=True`` — without it an oversized carrier raises ``SizeError``).

Carriers and operations:

* graded sets over points X: vectors in T^X, everything pointwise, star
  taken pointwise as the least fixpoint of s = 1 + t;s in the base;
* graded relations over X: matrices in K^(X×X); composition is the
  sum-of-products relational product, tests are diagonal T-valued
  relations, the residual acts on the diagonal, star is the least
  fixpoint of S = Id ∪ (M ∘ S);
* graded languages over an alphabet: finitely-supported maps from words
  to K, concatenation summing over every factorisation of a word
  (including the empty prefix and suffix); observation is cut off at
  words of length ``maxlen``; always procedural;
* n×n matrices over K: ring-style addition/multiplication, star by
  two-by-two block recursion, with an independent iterative fixpoint
  (``mat_star_iter``) kept as an oracle.

Relations and matrices share the value representation: a tuple of row
tuples of base element indices.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Optional

from .algebra import (
    Algebra,
    DivergenceError,
    FiniteAlgebra,
    ProceduralAlgebra,
    SizeError,
    star_lfp,
)

DEFAULT_CAP = 4096

Matrix = tuple[tuple[int, ...], ...]


# --- test-sort resolution -------------------------------------------------


def _resolve_test_sort(
    kalg: FiniteAlgebra, talg: FiniteAlgebra
) -> tuple[tuple[int, ...], Callable[[int, int], int]]:
    """Embed ``talg``'s tests into ``kalg`` by element name.

    Returns the K-indices of the embedded tests and the residual computed
    in T but expressed on K-indices.  The two algebras coincide in the
    common case (one algebra playing both roles); distinct algebras must
    agree on element names for zero and one.
    """
    if talg is kalg:
        return kalg.test_indices, kalg.arrow
    try:
        t_to_k = tuple(kalg.resolve(talg.el_name(t)) for t in talg.elements())
    except KeyError as exc:
        raise ValueError(
            f"test algebra {talg.name!r} has element {exc.args[0]!r} "
            f"with no namesake in {kalg.name!r}"
        ) from None
    if t_to_k[talg.zero] != kalg.zero or t_to_k[talg.one] != kalg.one:
        raise ValueError(
            f"test algebra {talg.name!r} must share zero/one names with {kalg.name!r}"
        )
    k_to_t = {k: t for t, k in enumerate(t_to_k)}
    t_tests = tuple(t_to_k[t] for t in talg.tests())

    def arrow(a: int, b: int) -> int:
        return t_to_k[talg.arrow(k_to_t[a], k_to_t[b])]

    return t_tests, arrow


# --- finite enumeration ---------------------------------------------------


def _enumerate_finite(
    name: str,
    values: list,
    el_name: Callable,
    is_test: Callable,
    zero,
    one,
    plus: Callable,
    seq: Callable,
    arrow: Callable,
    star: Callable,
) -> FiniteAlgebra:
    index = {v: i for i, v in enumerate(values)}
    tests = tuple(i for i, v in enumerate(values) if is_test(v))
    test_set = frozenset(tests)
    zero_i = index[zero]

    def tab(op: Callable) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(index[op(v, w)] for w in values) for v in values)

    # The residual is only meaningful between tests; remaining cells hold
    # the zero index and are never reachable through the checked API.
    arrow_table = tuple(
        tuple(
            index[arrow(v, w)] if i in test_set and j in test_set else zero_i
            for j, w in enumerate(values)
        )
        for i, v in enumerate(values)
    )
    return FiniteAlgebra(
        name=name,
        element_names=tuple(el_name(v) for v in values),
        test_indices=tests,
        zero=zero_i,
        one=index[one],
        plus_table=tab(plus),
        seq_table=tab(seq),
        arrow_table=arrow_table,
        star_table=tuple(index[star(v)] for v in values),
    )


def _require_finite(base: Algebra, what: str) -> FiniteAlgebra:
    if not base.finite:
        raise ValueError(f"{what} needs a finite base algebra, got {base.name!r}")
    return base


# --- graded sets ----------------------------------------------------------


def fset_algebra(
    base: Algebra, points: int, cap: int = DEFAULT_CAP, sampled: bool = False
) -> Algebra:
    """Vectors of base tests over ``points`` coordinates, pointwise."""
    base = _require_finite(base, "fset")
    if points < 1:
        raise ValueError("fset needs at least one point")
    tests = base.tests()
    name = f"fset:{base.name}:{points}"
    zero = (base.zero,) * points
    one = (base.one,) * points

    def plus(v, w):
        return tuple(base.plus(a, b) for a, b in zip(v, w))

    def seq(v, w):
        return tuple(base.seq(a, b) for a, b in zip(v, w))

    def arrow(v, w):
        return tuple(base.arrow(a, b) for a, b in zip(v, w))

    def star(v):
        return tuple(star_lfp(base, a) for a in v)

    def el_name(v):
        return "(" + ",".join(base.el_name(a) for a in v) + ")"

    size = len(tests) ** points
    if size <= cap:
        values = [tuple(v) for v in itertools.product(tests, repeat=points)]
        return _enumerate_finite(
            name, values, el_name, lambda v: True, zero, one, plus, seq, arrow, star
        )
    if not sampled:
        raise SizeError(f"{name}: carrier size {size} exceeds cap {cap}")

    def draw(rng: random.Random):
        return tuple(rng.choice(tests) for _ in range(points))

    return ProceduralAlgebra(
        name=name,
        zero=zero,
        one=one,
        plus_fn=plus,
        seq_fn=seq,
        star_fn=star,
        arrow_fn=arrow,
        test_pred=lambda v: True,
        samples=(zero, one),
        draw=draw,
        fmt=el_name,
        member_pred=lambda v: isinstance(v, tuple)
        and len(v) == points
        and all(a in tests for a in v),
    )


# --- shared matrix arithmetic --------------------------------------------


def _msum(base: Algebra, items) -> int:
    acc = base.zero
    for x in items:
        acc = base.plus(acc, x)
    return acc


def mat_zero(base: Algebra, n: int) -> Matrix:
    return tuple((base.zero,) * n for _ in range(n))


def mat_identity(base: Algebra, n: int) -> Matrix:
    return tuple(
        tuple(base.one if i == j else base.zero for j in range(n)) for i in range(n)
    )


def mat_add(base: Algebra, a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(base.plus(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
    )


def mat_mul(base: Algebra, a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    m = len(b[0]) if b else 0
    k = len(b)
    return tuple(
        tuple(_msum(base, (base.seq(a[i][z], b[z][j]) for z in range(k))) for j in range(m))
        for i in range(n)
    )


def _mat_name(base: Algebra, m: Matrix) -> str:
    return "[" + ";".join(",".join(base.el_name(x) for x in row) for row in m) + "]"


def mat_star_iter(base: Algebra, m: Matrix, max_steps: Optional[int] = None) -> Matrix:
    """Star as the stabilised partial-sum iteration S = I + M·S.

    Independent of the block recursion; kept as an oracle for it.
    """
    n = len(m)
    if max_steps is None:
        max_steps = n * n * base.size + 2 if base.finite else 10_000
    ident = mat_identity(base, n)
    cur = ident
    for _ in range(max_steps):
        nxt = mat_add(base, ident, mat_mul(base, m, cur))
        if nxt == cur:
            return cur
        cur = nxt
    raise DivergenceError(
        f"matrix star did not stabilise within {max_steps} steps over {base.name}"
    )


def _block(m: Matrix, r0: int, r1: int, c0: int, c1: int) -> Matrix:
    return tuple(row[c0:c1] for row in m[r0:r1])


def _assemble(tl: Matrix, tr: Matrix, bl: Matrix, br: Matrix) -> Matrix:
    top = tuple(a + b for a, b in zip(tl, tr))
    bottom = tuple(a + b for a, b in zip(bl, br))
    return top + bottom


def mat_star(base: Algebra, m: Matrix) -> Matrix:
    """Star by two-by-two block recursion.

    For M = [[A, B], [C, D]] with F = (A + B·D*·C)*:
    M* = [[F, F·B·D*], [D*·C·F, D* + D*·C·F·B·D*]].
    """
    n = len(m)
    if n == 0:
        return ()
    if n == 1:
        return ((base.star(m[0][0]),),)
    k = n // 2
    a = _block(m, 0, k, 0, k)
    b = _block(m, 0, k, k, n)
    c = _block(m, k, n, 0, k)
    d = _block(m, k, n, k, n)
    ds = mat_star(base, d)
    bds = mat_mul(base, b, ds)
    f = mat_star(base, mat_add(base, a, mat_mul(base, bds, c)))
    tr = mat_mul(base, f, bds)
    dscf = mat_mul(base, mat_mul(base, ds, c), f)
    br = mat_add(base, ds, mat_mul(base, dscf, bds))
    return _assemble(f, tr, dscf, br)


# --- graded relations -----------------------------------------------------


def frel_compose(base: Algebra, mu: Matrix, nu: Matrix) -> Matrix:
    """Relational product: (mu∘nu)(x,y) = Σ_z mu(x,z);nu(z,y)."""
    return mat_mul(base, mu, nu)


def frel_star(base: Algebra, mu: Matrix, max_steps: Optional[int] = None) -> Matrix:
    """Least fixpoint of S = Id ∪ (mu ∘ S)."""
    return mat_star_iter(base, mu, max_steps)


def frel_algebra(
    kalg: Algebra,
    talg: Optional[Algebra] = None,
    points: int = 2,
    cap: int = DEFAULT_CAP,
    sampled: bool = False,
) -> Algebra:
    """Relations X×X → K with diagonal T-valued tests."""
    kalg = _require_finite(kalg, "frel")
    talg = kalg if talg is None else _require_finite(talg, "frel")
    if points < 1:
        raise ValueError("frel needs at least one point")
    t_tests, t_arrow = _resolve_test_sort(kalg, talg)
    t_test_set = frozenset(t_tests)
    name = f"frel:{kalg.name}:{talg.name}:{points}"
    zero = mat_zero(kalg, points)
    one = mat_identity(kalg, points)

    def is_test(m: Matrix) -> bool:
        return all(
            (m[i][j] in t_test_set) if i == j else (m[i][j] == kalg.zero)
            for i in range(points)
            for j in range(points)
        )

    def arrow(s: Matrix, e: Matrix) -> Matrix:
        return tuple(
            tuple(
                t_arrow(s[i][i], e[i][i]) if i == j else kalg.zero
                for j in range(points)
            )
            for i in range(points)
        )

    def plus(a: Matrix, b: Matrix) -> Matrix:
        return mat_add(kalg, a, b)

    def seq(a: Matrix, b: Matrix) -> Matrix:
        return frel_compose(kalg, a, b)

    def star(m: Matrix) -> Matrix:
        return frel_star(kalg, m)

    def el_name(m: Matrix) -> str:
        return _mat_name(kalg, m)

    size = kalg.size ** (points * points)
    if size <= cap:
        rows = itertools.product(kalg.elements(), repeat=points)
        values = [tuple(v) for v in itertools.product(list(rows), repeat=points)]
        return _enumerate_finite(
            name, values, el_name, is_test, zero, one, plus, seq, arrow, star
        )
    if not sampled:
        raise SizeError(f"{name}: carrier size {size} exceeds cap {cap}")

    def draw(rng: random.Random):
        els = range(kalg.size)
        if rng.random() < 0.25:  # keep tests in the pool
            return tuple(
                tuple(rng.choice(t_tests) if i == j else kalg.zero for j in range(points))
                for i in range(points)
            )
        return tuple(
            tuple(rng.choice(els) for _ in range(points)) for _ in range(points)
        )

    return ProceduralAlgebra(
        name=name,
        zero=zero,
        one=one,
        plus_fn=plus,
        seq_fn=seq,
        star_fn=star,
        arrow_fn=arrow,
        test_pred=is_test,
        samples=(zero, one),
        draw=draw,
        fmt=el_name,
        member_pred=lambda m: isinstance(m, tuple)
        and len(m) == points
        and all(
            isinstance(r, tuple)
            and len(r) == points
            and all(isinstance(x, int) and 0 <= x < kalg.size for x in r)
            for r in m
        ),
    )


# --- graded languages -----------------------------------------------------

Language = tuple[tuple[str, int], ...]


def _lang_norm(base: Algebra, items: dict, maxlen: int) -> Language:
    return tuple(
        sorted(
            ((w, v) for w, v in items.items() if v != base.zero and len(w) <= maxlen),
            key=lambda wv: (len(wv[0]), wv[0]),
        )
    )


def flang_union(base: Algebra, l1: Language, l2: Language, maxlen: int) -> Language:
    acc = dict(l1)
    for w, v in l2:
        acc[w] = base.plus(acc[w], v) if w in acc else v
    return _lang_norm(base, acc, maxlen)


def flang_concat(base: Algebra, l1: Language, l2: Language, maxlen: int) -> Language:
    """(l1·l2)(w) sums l1(u);l2(v) over every split w = uv, ε splits included."""
    acc: dict = {}
    for u, a in l1:
        for v, b in l2:
            w = u + v
            if len(w) > maxlen:
                continue
            piece = base.seq(a, b)
            acc[w] = base.plus(acc[w], piece) if w in acc else piece
    return _lang_norm(base, acc, maxlen)


def flang_star(
    base: Algebra, lang: Language, maxlen: int, max_steps: Optional[int] = None
) -> Language:
    """Least fixpoint of S = ε ∪ l·S, observed up to ``maxlen``."""
    if max_steps is None:
        words = sum(len(base_alphabet(lang)) ** k for k in range(maxlen + 1))
        max_steps = words * (base.size if base.finite else 64) + 2
    eps: Language = ((("", base.one),) if base.one != base.zero else ())
    cur = eps
    for _ in range(max_steps):
        nxt = flang_union(base, eps, flang_concat(base, lang, cur, maxlen), maxlen)
        if nxt == cur:
            return cur
        cur = nxt
    raise DivergenceError(f"language star did not stabilise within {max_steps} steps")


def base_alphabet(lang: Language) -> set[str]:
    return {c for w, _ in lang for c in w}


def flang_algebra(
    kalg: Algebra,
    talg: Optional[Algebra] = None,
    alphabet: str = "ab",
    maxlen: int = 4,
    pool: int = 12,
) -> ProceduralAlgebra:
    """Finitely-supported word-weighted languages, observed up to ``maxlen``.

    Always procedural: equality means agreement on every word of length at
    most ``maxlen``, which the canonical support representation makes a
    plain tuple comparison.  ``pool`` seeded random languages join the
    declared sample pool.
    """
    kalg = _require_finite(kalg, "flang")
    talg = kalg if talg is None else _require_finite(talg, "flang")
    if not alphabet or len(set(alphabet)) != len(alphabet):
        raise ValueError(f"flang alphabet must be nonempty distinct characters: {alphabet!r}")
    if maxlen < 1:
        raise ValueError("flang needs maxlen >= 1")
    t_tests, t_arrow = _resolve_test_sort(kalg, talg)
    t_test_set = frozenset(t_tests)
    name = f"flang:{kalg.name}:{talg.name}:{alphabet}:{maxlen}"
    zero: Language = ()
    one: Language = (("", kalg.one),)

    def is_test(lang: Language) -> bool:
        return all(w == "" and v in t_test_set for w, v in lang)

    def arrow(l1: Language, l2: Language) -> Language:
        a = dict(l1).get("", kalg.zero)
        b = dict(l2).get("", kalg.zero)
        r = t_arrow(a, b)
        return ((("", r),) if r != kalg.zero else ())

    def star(lang: Language) -> Language:
        return flang_star(kalg, lang, maxlen)

    def el_name(lang: Language) -> str:
        return "{" + ",".join(f"{w or 'eps'}:{kalg.el_name(v)}" for w, v in lang) + "}"

    nonzero = [e for e in kalg.elements() if e != kalg.zero]
    samples: list[Language] = [zero, one]
    samples += [((c, kalg.one),) for c in alphabet]
    samples += [(("", t),) for t in t_tests if t not in (kalg.zero, kalg.one)]
    rng = random.Random(0xF1A)
    while len(samples) < 2 + len(alphabet) + len(t_tests) + pool:
        samples.append(_draw_lang(rng, kalg, alphabet, maxlen, nonzero))

    def draw(r: random.Random) -> Language:
        return _draw_lang(r, kalg, alphabet, maxlen, nonzero)

    def member(lang) -> bool:
        if not isinstance(lang, tuple):
            return False
        seen = dict.fromkeys((w for w, _ in lang))
        ok = all(
            isinstance(w, str)
            and len(w) <= maxlen
            and all(c in alphabet for c in w)
            and isinstance(v, int)
            and 0 <= v < kalg.size
            and v != kalg.zero
            for w, v in lang
        )
        return ok and len(seen) == len(lang) and lang == tuple(
            sorted(lang, key=lambda wv: (len(wv[0]), wv[0]))
        )

    return ProceduralAlgebra(
        name=name,
        zero=zero,
        one=one,
        plus_fn=lambda a, b: flang_union(kalg, a, b, maxlen),
        seq_fn=lambda a, b: flang_concat(kalg, a, b, maxlen),
        star_fn=star,
        arrow_fn=arrow,
        test_pred=is_test,
        samples=tuple(dict.fromkeys(samples)),
        draw=draw,
        fmt=el_name,
        member_pred=member,
    )


def _draw_lang(
    rng: random.Random, base: FiniteAlgebra, alphabet: str, maxlen: int, nonzero: list
) -> Language:
    items: dict = {}
    for _ in range(rng.randint(0, 4)):
        length = rng.randint(0, maxlen)
        word = "".join(rng.choice(alphabet) for _ in range(length))
        items[word] = rng.choice(nonzero)
    return _lang_norm(base, items, maxlen)


# --- matrices -------------------------------------------------------------


def mat_algebra(
    base: Algebra, n: int, cap: int = DEFAULT_CAP, sampled: bool = False
) -> Algebra:
    """n×n matrices over the base, star by block recursion."""
    base = _require_finite(base, "mat")
    if n < 1:
        raise ValueError("mat needs n >= 1")
    name = f"mat:{base.name}:{n}"
    zero = mat_zero(base, n)
    one = mat_identity(base, n)
    test_set = frozenset(base.tests())

    def is_test(m: Matrix) -> bool:
        return all(
            (m[i][j] in test_set) if i == j else (m[i][j] == base.zero)
            for i in range(n)
            for j in range(n)
        )

    def arrow(s: Matrix, e: Matrix) -> Matrix:
        return tuple(
            tuple(base.arrow(s[i][i], e[i][i]) if i == j else base.zero for j in range(n))
            for i in range(n)
        )

    size = base.size ** (n * n)
    if size <= cap:
        rows = itertools.product(base.elements(), repeat=n)
        values = [tuple(v) for v in itertools.product(list(rows), repeat=n)]
        return _enumerate_finite(
            name,
            values,
            lambda m: _mat_name(base, m),
            is_test,
            zero,
            one,
            lambda a, b: mat_add(base, a, b),
            lambda a, b: mat_mul(base, a, b),
            arrow,
            lambda m: mat_star(base, m),
        )
    if not sampled:
        raise SizeError(f"{name}: carrier size {size} exceeds cap {cap}")

    def draw(rng: random.Random) -> Matrix:
        if rng.random() < 0.25:
            return tuple(
                tuple(rng.choice(base.test_indices) if i == j else base.zero for j in range(n))
                for i in range(n)
            )
        return tuple(
            tuple(rng.randrange(base.size) for _ in range(n)) for _ in range(n)
        )

    return ProceduralAlgebra(
        name=name,
        zero=zero,
        one=one,
        plus_fn=lambda a, b: mat_add(base, a, b),
        seq_fn=lambda a, b: mat_mul(base, a, b),
        star_fn=lambda m: mat_star(base, m),
        arrow_fn=arrow,
        test_pred=is_test,
        samples=(zero, one),
        draw=draw,
        fmt=lambda m: _mat_name(base, m),
        member_pred=lambda m: isinstance(m, tuple)
        and len(m) == n
        and all(
            isinstance(r, tuple)
            and len(r) == n
            and all(isinstance(x, int) and 0 <= x < base.size for x in r)
            for r in m
        ),
    )
