import pytest

from spr.decision import (
    CapExceeded,
    DecisionResult,
    bound_cardinality,
    derivable_values,
    emptiness_witness,
    filter_grammar,
    inclusion,
    intersection_empty,
    is_empty,
    minimal_graphs,
    productive_nonterminals,
)
from spr.grammar import GrammarError, validate_regular
from spr.oracle import language_upto
from spr.recognizer import accepts, build_ctx, member, reachable_profiles
from spr.spgraph import format_graph

# ---------------------------------------------------------------------------
# emptiness
# ---------------------------------------------------------------------------


def test_emptiness(univ, empty_grammar):
    assert is_empty(empty_grammar)
    assert emptiness_witness(empty_grammar) is None
    assert not is_empty(univ)
    assert format_graph(emptiness_witness(univ)) == "a"


def test_productive_nonterminals(empty_grammar, chain):
    # p -> a is productive, but the axiom s never terminates
    assert productive_nonterminals(empty_grammar) == {"p"}
    assert productive_nonterminals(chain) == {"p", "s"}


def test_minimal_graphs_per_nonterminal(chain):
    got = {x: format_graph(w) for x, w in minimal_graphs(chain).items()}
    assert got == {"p": "a", "s": "a . a"}
    assert format_graph(emptiness_witness(chain)) == "a . a"


# ---------------------------------------------------------------------------
# the result protocol
# ---------------------------------------------------------------------------


def test_decision_result_protocol(ga, gab):
    res = inclusion(ga, gab)
    holds, witness = res
    assert (holds, witness) == (True, None)
    assert bool(res)
    assert set(res.stats) == {"profiles_explored", "iterations", "wall_ms"}
    assert res.stats["profiles_explored"] >= 1
    assert not DecisionResult(False)


# ---------------------------------------------------------------------------
# inclusion
# ---------------------------------------------------------------------------


def test_inclusion_is_reflexive(univ, ga, gab, chain, bundle, even_bundle, empty_grammar):
    for g in (univ, ga, gab, chain, bundle, even_bundle, empty_grammar):
        assert inclusion(g, g).holds


def test_inclusions_that_hold(ga, gab, univ, chain, bundle, even_bundle, empty_grammar):
    assert inclusion(ga, gab).holds
    assert inclusion(gab, univ).holds
    assert inclusion(even_bundle, bundle).holds
    assert inclusion(empty_grammar, chain).holds


@pytest.mark.parametrize(
    "left,right,witness",
    [
        ("gab", "ga", "b"),
        ("bundle", "even_bundle", "a || a || a"),
        ("bundle", "chain", "a || a"),
        ("chain", "bundle", "a . a"),
    ],
)
def test_inclusion_counterexamples_are_minimal(request, left, right, witness):
    g1 = request.getfixturevalue(left)
    g2 = request.getfixturevalue(right)
    res = inclusion(g1, g2)
    assert not res.holds
    assert format_graph(res.witness) == witness
    # the counterexample really separates the languages
    assert member(res.witness, g1)
    assert not member(res.witness, g2)
    assert res.witness in language_upto(g1, res.witness.edges)


def test_inclusion_needs_a_covering_alphabet(univ, chain):
    with pytest.raises(GrammarError, match="alphabet mismatch"):
        inclusion(univ, chain)


def test_inclusion_agrees_with_enumeration(ga, gab, chain, bundle, even_bundle):
    fixtures = [ga, gab, chain, bundle, even_bundle]
    for g1 in fixtures:
        for g2 in fixtures:
            if set(g1.alphabet) - set(g2.alphabet):
                continue
            res = inclusion(g1, g2)
            enumerated = language_upto(g1, 4) <= language_upto(g2, 4)
            if not enumerated:
                assert not res.holds
            if res.holds:
                assert enumerated


# ---------------------------------------------------------------------------
# intersection
# ---------------------------------------------------------------------------


def test_intersection_witnesses(univ, ga, gab, bundle, even_bundle):
    for grammars, witness in [
        ([bundle, even_bundle], "a || a"),
        ([ga, gab], "a"),
        ([univ, gab], "a"),
    ]:
        res = intersection_empty(grammars)
        assert not res.holds
        assert format_graph(res.witness) == witness
        for g in grammars:
            assert member(res.witness, g)


def test_empty_intersections(univ, chain, bundle, empty_grammar):
    assert intersection_empty([chain, bundle]).holds
    assert intersection_empty([empty_grammar, univ]).holds
    # ... and enumeration confirms there is no small common graph
    assert not (language_upto(chain, 5) & language_upto(bundle, 5))


def test_intersection_of_one_grammar_is_its_language(chain):
    res = intersection_empty([chain])
    assert not res.holds
    assert format_graph(res.witness) == "a . a"


def test_intersection_requires_a_grammar():
    with pytest.raises(ValueError, match="at least one grammar"):
        intersection_empty([])


# ---------------------------------------------------------------------------
# caps
# ---------------------------------------------------------------------------


def test_caps_abort_saturation(chain, bundle, even_bundle):
    with pytest.raises(CapExceeded) as exc:
        intersection_empty([chain, bundle], cap=2)
    assert exc.value.cap == 2
    with pytest.raises(CapExceeded):
        inclusion(bundle, even_bundle, cap=1)


# ---------------------------------------------------------------------------
# derivable values
# ---------------------------------------------------------------------------


def test_derivable_values_settle_minimal_witnesses(ga, univ):
    ctx = build_ctx(univ)
    values = derivable_values(ga, ctx)
    assert set(values) == {"p", "s"}
    assert values["s"] == {}
    ((value, witness),) = values["p"].items()
    assert format_graph(witness) == "a"
    assert accepts(value, ctx)


def test_derivable_values_reject_foreign_labels(univ, chain):
    with pytest.raises(GrammarError, match="alphabet mismatch"):
        derivable_values(univ, build_ctx(chain))


# ---------------------------------------------------------------------------
# filtering
# ---------------------------------------------------------------------------


def test_filter_grammar_splits_by_acceptance(bundle, even_bundle):
    kept = filter_grammar(bundle, even_bundle, mode="accept")
    dropped = filter_grammar(bundle, even_bundle, mode="reject")
    whole = language_upto(bundle, 5)
    assert language_upto(kept, 5) == {g for g in whole if member(g, even_bundle)}
    assert language_upto(dropped, 5) == {g for g in whole if not member(g, even_bundle)}
    # profile-indexed copies; the output is free-form, not regular
    assert all("$v" in n for n in kept.pnames + kept.snames)
    assert not validate_regular(kept).ok


def test_filter_grammar_modes(bundle, even_bundle, chain):
    with pytest.raises(ValueError, match="mode must be"):
        filter_grammar(bundle, even_bundle, mode="both")
    # nothing in bundle is a chain, so the accept filter is empty ...
    assert is_empty(filter_grammar(bundle, chain, mode="accept"))
    # ... and the reject filter keeps the whole language
    rej = filter_grammar(bundle, chain, mode="reject")
    assert language_upto(rej, 4) == language_upto(bundle, 4)


def test_filter_agrees_with_intersection(ga, gab, chain, bundle, even_bundle):
    pairs = [(ga, gab), (bundle, even_bundle), (bundle, chain), (chain, bundle)]
    for g1, g2 in pairs:
        empty = intersection_empty([g1, g2]).holds
        assert is_empty(filter_grammar(g1, g2, mode="accept")) == empty


# ---------------------------------------------------------------------------
# cardinality bound
# ---------------------------------------------------------------------------


def test_bound_cardinality_values(univ, chain):
    assert bound_cardinality(chain) == 512
    assert bound_cardinality(univ) == 2**96 + 2**24


def test_saturation_stays_below_the_bound(univ, ga, gab, chain, bundle, even_bundle):
    for g in (univ, ga, gab, chain, bundle, even_bundle):
        ctx = build_ctx(g)
        out = reachable_profiles(ctx)
        assert out.saturated
        assert len(out.profiles) <= bound_cardinality(g, ctx)
