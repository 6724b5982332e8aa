"""A finite commutative dioid of polynomial-like terms.

Terms are idempotent sums of monomials over a finite variable set.  Each
variable is classified, and the classification induces a rewriting axiom on
powers:

* ``Bounded(base)``       s^base = 0          (too many copies kill the term)
* ``Periodic(period)``    s^period = 1        (copies wrap around)
* ``Threshold(theta)``    s^theta = s^(theta-1)   (copies saturate)

A monomial is *reduced* when no axiom applies: bounded exponents stay below
the base, periodic exponents below the period, threshold exponents at most
theta - 1.  A normal form (``TermNF``) is a finite set of distinct reduced
monomials; the empty set is 0 and the singleton empty monomial is 1.  Sum is
set union, product distributes and re-reduces -- both stay inside the finite
space, which is what makes the recognizer algebra finite.

The cut-off results are exposed as ``weighted_card`` (how long a product of
linear sums can stay "interesting") and ``cutoff_bound`` (the general bound
mixing bounded and periodic variables).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union


@dataclass(frozen=True)
class Bounded:
    base: int  # >= 2

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be >= 2")


@dataclass(frozen=True)
class Periodic:
    period: int  # >= 1

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be >= 1")


@dataclass(frozen=True)
class Threshold:
    theta: int  # >= 2

    def __post_init__(self):
        if self.theta < 2:
            raise ValueError("threshold must be >= 2")


VarClass = Union[Bounded, Periodic, Threshold]
NfContext = Mapping[str, VarClass]


@dataclass(frozen=True)
class Monomial:
    """A product of variable powers, kept sorted by variable name."""

    exps: tuple[tuple[str, int], ...]

    @staticmethod
    def of(pairs: Iterable[tuple[str, int]] | Mapping[str, int]) -> "Monomial":
        if isinstance(pairs, Mapping):
            pairs = pairs.items()
        merged: dict[str, int] = {}
        for v, e in pairs:
            if e < 0:
                raise ValueError("negative exponent")
            if e:
                merged[v] = merged.get(v, 0) + e
        return Monomial(tuple(sorted(merged.items())))

    def degree(self, var: str) -> int:
        for v, e in self.exps:
            if v == var:
                return e
        return 0

    @property
    def total_degree(self) -> int:
        return sum(e for _, e in self.exps)

    @property
    def vars(self) -> frozenset:
        return frozenset(v for v, _ in self.exps)

    def __str__(self):
        if not self.exps:
            return "1"
        return "*".join(v if e == 1 else f"{v}^{e}" for v, e in self.exps)

    def sort_key(self):
        return (self.total_degree, self.exps)


MONO_ONE = Monomial(())


def nf_monomial(exps, ctx: NfContext) -> Optional[Monomial]:
    """Reduce a raw exponent map; ``None`` is the zero monomial."""
    if isinstance(exps, Monomial):
        exps = exps.exps
    elif isinstance(exps, Mapping):
        exps = exps.items()
    reduced = []
    for v, e in sorted(exps):
        if e == 0:
            continue
        cls = ctx.get(v)
        if cls is None:
            raise ValueError(f"variable {v!r} not in context")
        if isinstance(cls, Bounded):
            if e >= cls.base:
                return None
        elif isinstance(cls, Periodic):
            e %= cls.period
            if e == 0:
                continue
        else:
            e = min(e, cls.theta - 1)
        reduced.append((v, e))
    return Monomial(tuple(reduced))


def mono_mul(m1: Monomial, m2: Monomial, ctx: NfContext) -> Optional[Monomial]:
    acc = dict(m1.exps)
    for v, e in m2.exps:
        acc[v] = acc.get(v, 0) + e
    return nf_monomial(acc, ctx)


@dataclass(frozen=True)
class TermNF:
    """An idempotent sum of distinct reduced monomials."""

    monomials: frozenset

    @staticmethod
    def of(monos: Iterable[Optional[Monomial]]) -> "TermNF":
        return TermNF(frozenset(m for m in monos if m is not None))

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    def sorted(self) -> list[Monomial]:
        return sorted(self.monomials, key=Monomial.sort_key)

    def __str__(self):
        if not self.monomials:
            return "0"
        return " + ".join(str(m) for m in self.sorted())

    def __iter__(self):
        return iter(self.monomials)

    def __len__(self):
        return len(self.monomials)


ZERO = TermNF(frozenset())
ONE = TermNF(frozenset({MONO_ONE}))


def term_add(t1: TermNF, t2: TermNF) -> TermNF:
    return TermNF(t1.monomials | t2.monomials)


def term_mul(t1: TermNF, t2: TermNF, ctx: NfContext) -> TermNF:
    out = set()
    for m1 in t1.monomials:
        for m2 in t2.monomials:
            m = mono_mul(m1, m2, ctx)
            if m is not None:
                out.add(m)
    return TermNF(frozenset(out))


def term_sum(terms: Iterable[TermNF]) -> TermNF:
    acc = frozenset()
    for t in terms:
        acc |= t.monomials
    return TermNF(acc)


@dataclass(frozen=True)
class LinearTerm:
    """A sum of distinct variables, optionally with the unit: ``1 + s1 + s2``."""

    vars: frozenset
    one: bool = False

    @staticmethod
    def of(vars: Iterable[str], one: bool = False) -> "LinearTerm":
        return LinearTerm(frozenset(vars), one)

    def __str__(self):
        parts = (["1"] if self.one else []) + sorted(self.vars)
        return " + ".join(parts) if parts else "0"


def linear_to_nf(lin: LinearTerm, ctx: NfContext) -> TermNF:
    monos = [nf_monomial({v: 1}, ctx) for v in lin.vars]
    if lin.one:
        monos.append(MONO_ONE)
    return TermNF.of(monos)


def nf_linear_product(factors: Iterable[LinearTerm], ctx: NfContext) -> TermNF:
    """Normal form of a product of linear sums (the workhorse of the
    parallel-composition law).  An empty product is 1."""
    acc = ONE
    for lin in factors:
        acc = term_mul(acc, linear_to_nf(lin, ctx), ctx)
    return acc


def mono_leq(m1: Monomial, m2: Monomial) -> bool:
    """Componentwise exponent order (m1 divides m2, as var multisets)."""
    return all(m2.degree(v) >= e for v, e in m1.exps)


def sup_monomials(t: TermNF) -> TermNF:
    """The maximal monomials of ``t`` under the componentwise order."""
    monos = list(t.monomials)
    keep = []
    for m in monos:
        if not any(m2 != m and mono_leq(m, m2) for m2 in monos):
            keep.append(m)
    return TermNF(frozenset(keep))


def weighted_card(vars: Iterable[str], ctx: NfContext) -> int:
    """Weighted size of a variable set: each variable contributes its number
    of non-unit reduced powers (base-1, period-1 or theta-1)."""
    total = 0
    for v in set(vars):
        cls = ctx.get(v)
        if cls is None:
            raise ValueError(f"variable {v!r} not in context")
        if isinstance(cls, Bounded):
            total += cls.base - 1
        elif isinstance(cls, Periodic):
            total += cls.period - 1
        else:
            total += cls.theta - 1
    return total


def cutoff_bound(bounded: Iterable[str], periodic: Iterable[str], ctx: NfContext) -> int:
    """Length bound past which products of linear sums over the given
    variables stop producing genuinely new normal forms.

    Requires every periodic period to be >= 2 (a period-1 variable reduces
    to the unit and should be dropped by the caller first).
    """
    bounded = sorted(set(bounded))
    periodic = sorted(set(periodic))
    for v in bounded:
        if not isinstance(ctx.get(v), Bounded):
            raise ValueError(f"{v!r} is not bounded in the context")
    periods = []
    for v in periodic:
        cls = ctx.get(v)
        if not isinstance(cls, Periodic):
            raise ValueError(f"{v!r} is not periodic in the context")
        if cls.period < 2:
            raise ValueError("cutoff bound requires periods >= 2")
        periods.append(cls.period)
    k = len(periods)
    b = weighted_card(bounded, ctx) * (k + 1)
    b += sum(
        math.lcm(periods[i], periods[j])
        for i in range(k)
        for j in range(i, k)
    )
    b -= k * (k + 1) // 2
    return b


def expand_product(factors: Iterable[LinearTerm], ctx: NfContext) -> TermNF:
    """Brute-force reference for ``nf_linear_product``: expand every choice of
    one summand per factor, reduce each resulting monomial, deduplicate.
    Exponential; only sensible on small inputs (used by tests)."""
    choice_lists = []
    for lin in factors:
        choices: list[Optional[str]] = sorted(lin.vars)
        if lin.one:
            choices.append(None)
        choice_lists.append(choices)
    out = set()
    for picks in itertools.product(*choice_lists):
        exps: dict[str, int] = {}
        for v in picks:
            if v is not None:
                exps[v] = exps.get(v, 0) + 1
        m = nf_monomial(exps, ctx)
        if m is not None:
            out.add(m)
    return TermNF(frozenset(out))
