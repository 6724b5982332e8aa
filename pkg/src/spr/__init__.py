"""Series-parallel graph languages: recognizers and decision procedures."""

from .decision import (
    CapExceeded,
    DecisionResult,
    bound_cardinality,
    derivable_values,
    emptiness_witness,
    filter_grammar,
    inclusion,
    intersection_empty,
    is_empty,
)
from .grammar import (
    Grammar,
    GrammarError,
    compute_base_period,
    format_grammar,
    is_alternative,
    is_normalized,
    normalize,
    parse_grammar,
    to_alternative,
    validate_regular,
)
from .oracle import (
    enumerate_p_views,
    enumerate_s_views,
    gen_random_grammar,
    gen_worstcase,
    lang_from,
    language_upto,
)
from .recognizer import (
    PProfile,
    RecognizerCtx,
    SProfile,
    accepts,
    bridge_profile,
    build_ctx,
    eval_graph,
    member,
    op_parallel,
    op_serial,
    par_map,
    profile_to_json,
    reachable_profiles,
    seq_map,
)
from .spgraph import (
    Bridge,
    edge_count,
    ParseError,
    PNode,
    SNode,
    SPGraph,
    canonicalize,
    compose_parallel,
    compose_serial,
    enumerate_graphs,
    format_graph,
    parse_graph,
    parse_term,
    random_graph,
)
from .termalg import (
    Bounded,
    LinearTerm,
    Monomial,
    Periodic,
    TermNF,
    Threshold,
    cutoff_bound,
    nf_monomial,
    sup_monomials,
    term_add,
    term_mul,
)

__version__ = "0.1.0"

__all__ = [
    "accepts",
    "bound_cardinality",
    "Bounded",
    "Bridge",
    "bridge_profile",
    "build_ctx",
    "canonicalize",
    "CapExceeded",
    "compose_parallel",
    "compose_serial",
    "compute_base_period",
    "cutoff_bound",
    "DecisionResult",
    "derivable_values",
    "edge_count",
    "emptiness_witness",
    "enumerate_graphs",
    "enumerate_p_views",
    "enumerate_s_views",
    "eval_graph",
    "filter_grammar",
    "format_grammar",
    "format_graph",
    "gen_random_grammar",
    "gen_worstcase",
    "Grammar",
    "GrammarError",
    "inclusion",
    "intersection_empty",
    "is_alternative",
    "is_empty",
    "is_normalized",
    "lang_from",
    "language_upto",
    "LinearTerm",
    "member",
    "Monomial",
    "nf_monomial",
    "normalize",
    "op_parallel",
    "op_serial",
    "par_map",
    "parse_grammar",
    "parse_graph",
    "parse_term",
    "ParseError",
    "Periodic",
    "PNode",
    "PProfile",
    "profile_to_json",
    "random_graph",
    "reachable_profiles",
    "RecognizerCtx",
    "seq_map",
    "SNode",
    "SPGraph",
    "SProfile",
    "sup_monomials",
    "term_add",
    "term_mul",
    "TermNF",
    "Threshold",
    "to_alternative",
    "validate_regular",
]
