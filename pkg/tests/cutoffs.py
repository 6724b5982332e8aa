"""Shared helpers for the cut-off property tests.

The cut-off properties all quantify over products of linear sums; these
helpers enumerate variable configurations and factor multisets, and run the
two brute-force searches the properties call for: "some strict subproduct has
the same normal form" and the stronger "some strict subproduct t' works for
every product between t' and t".
"""

from __future__ import annotations

import itertools

from spr.termalg import Bounded, LinearTerm, Periodic, nf_linear_product


def bounded_configs(max_vars=3, bases=(2, 3)):
    """All contexts of 1..max_vars bounded variables with the given bases
    (up to renaming: base assignments are non-decreasing)."""
    for n in range(1, max_vars + 1):
        for combo in itertools.combinations_with_replacement(bases, n):
            yield {f"s{i}": Bounded(b) for i, b in enumerate(combo, start=1)}


def mixed_configs(max_vars=3, bases=(2, 3), periods=(2, 3)):
    """Contexts mixing bounded and periodic variables, 1..max_vars total."""
    for n in range(1, max_vars + 1):
        for nb in range(n + 1):
            carts = itertools.product(
                itertools.combinations_with_replacement(bases, nb),
                itertools.combinations_with_replacement(periods, n - nb),
            )
            for bs, ps in carts:
                ctx = {f"s{i}": Bounded(b) for i, b in enumerate(bs, start=1)}
                ctx.update(
                    {f"t{i}": Periodic(p) for i, p in enumerate(ps, start=1)}
                )
                yield ctx


def linear_sums(ctx, with_one=False):
    """Every linear sum over the context's variables (nonempty variable part;
    optionally also the variants containing the unit)."""
    vars_ = sorted(ctx)
    out = []
    for k in range(1, len(vars_) + 1):
        for combo in itertools.combinations(vars_, k):
            out.append(LinearTerm.of(combo))
            if with_one:
                out.append(LinearTerm.of(combo, one=True))
    return out


def one_sums(ctx):
    """The 1-sums: linear terms 1 + (nonempty subset of variables)."""
    vars_ = sorted(ctx)
    return [
        LinearTerm.of(combo, one=True)
        for k in range(1, len(vars_) + 1)
        for combo in itertools.combinations(vars_, k)
    ]


def products_of_length(factors, length):
    """All products of the given length, up to factor order (the product is
    commutative, so multisets of factors are enough)."""
    return itertools.combinations_with_replacement(factors, length)


def strict_subproducts(n):
    """Index sets of the strict subproducts of a length-n product, largest
    first (dropping a single factor usually already works, so trying those
    first keeps the searches fast)."""
    for size in range(n - 1, -1, -1):
        yield from itertools.combinations(range(n), size)


def exists_equal_subproduct(factors, ctx):
    """Does some strict subproduct have the same normal form as the whole
    product?  (The existential cut-off shape.)"""
    factors = tuple(factors)
    target = nf_linear_product(factors, ctx)
    for keep in strict_subproducts(len(factors)):
        sub = [factors[i] for i in keep]
        if nf_linear_product(sub, ctx) == target:
            return True
    return False


def exists_interval_subproduct(factors, ctx):
    """Does some strict subproduct t' satisfy nf(t'') = nf(t) for *every* t''
    between t' and t?  (The 1-sums cut-off shape.)"""
    factors = tuple(factors)
    n = len(factors)
    target = nf_linear_product(factors, ctx)
    for keep in strict_subproducts(n):
        dropped = [i for i in range(n) if i not in keep]
        ok = True
        for r in range(len(dropped) + 1):
            for add in itertools.combinations(dropped, r):
                sub = [factors[i] for i in sorted(set(keep) | set(add))]
                if nf_linear_product(sub, ctx) != target:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False
