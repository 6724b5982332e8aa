"""Series-parallel graphs.

A series-parallel (SP) graph is what you get from single labelled edges
("bridges") by composing graphs in series (gluing target to source) and in
parallel (gluing sources together and targets together).  Every SP graph has a
unique decomposition tree in which serial and parallel layers alternate; this
module stores graphs directly in that canonical shape, so structural equality
coincides with graph isomorphism:

* ``Bridge(a)``          -- a single edge labelled ``a``;
* ``SNode(children)``    -- serial composition of >= 2 parts, each a bridge or
  a parallel node (never a serial node), in left-to-right order;
* ``PNode(children)``    -- parallel composition of >= 2 parts, each a bridge
  or a serial node, kept as a sorted multiset.

Parallel children are ordered bridges-first (by label), then serial nodes
lexicographically by their child sequence.  The order is realised by a
canonical key string carried by every node; equality and hashing go through
that key, which keeps deep graphs free of recursive ``__eq__`` calls.

Terms (the textual syntax ``a.(b||c)``) are a separate free AST; parsing and
canonicalisation are split so grammar rule right-hand sides can reuse the
term reader with nonterminal leaves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

LABEL_RE = re.compile(r"[a-z][a-z0-9_]*\Z")
# Nonterminal names may additionally contain '$' (reserved for generated
# names, e.g. normalisation copies), but must not start with a digit.
NAME_RE = re.compile(r"[a-z$][a-z0-9_$]*\Z")


class ParseError(ValueError):
    """Malformed term or grammar text; carries a 1-based line/column."""

    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# Free terms (parse trees)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    """A single edge labelled ``label``."""

    label: str


@dataclass(frozen=True)
class Ref:
    """A nonterminal occurrence inside a grammar rule right-hand side."""

    name: str


@dataclass(frozen=True)
class Serial:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Parallel:
    left: "Term"
    right: "Term"


Term = Union[Atom, Ref, Serial, Parallel]


# ---------------------------------------------------------------------------
# Canonical graphs
# ---------------------------------------------------------------------------


class SPGraph:
    """Base class for canonical decomposition-tree nodes."""

    __slots__ = ("key", "edges", "_hash")

    key: str
    edges: int

    def __eq__(self, other):
        return self is other or (isinstance(other, SPGraph) and self.key == other.key)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"<sp {format_graph(self)}>"

    def __str__(self):
        return format_graph(self)


class Bridge(SPGraph):
    __slots__ = ("label",)

    def __init__(self, label: str):
        if not LABEL_RE.match(label):
            raise ValueError(f"bad edge label {label!r}")
        self.label = label
        self.key = "b:" + label + ";"
        self.edges = 1
        self._hash = hash(self.key)


class SNode(SPGraph):
    __slots__ = ("children",)

    def __init__(self, children: tuple):
        if len(children) < 2:
            raise ValueError("serial node needs at least two parts")
        for c in children:
            if isinstance(c, SNode) or not isinstance(c, SPGraph):
                raise ValueError("serial children must be bridges or parallel nodes")
        self.children = children
        self.key = "s(" + "".join(c.key for c in children) + ")"
        self.edges = sum(c.edges for c in children)
        self._hash = hash(self.key)


class PNode(SPGraph):
    __slots__ = ("children",)

    def __init__(self, children: tuple):
        if len(children) < 2:
            raise ValueError("parallel node needs at least two parts")
        for c in children:
            if isinstance(c, PNode) or not isinstance(c, SPGraph):
                raise ValueError("parallel children must be bridges or serial nodes")
        self.children = tuple(sorted(children, key=lambda c: c.key))
        self.key = "p(" + "".join(c.key for c in self.children) + ")"
        self.edges = sum(c.edges for c in children)
        self._hash = hash(self.key)


def compose_serial(a: SPGraph, b: SPGraph) -> SPGraph:
    """Serial composition; flattens nested serial layers."""
    parts = (a.children if isinstance(a, SNode) else (a,)) + (
        b.children if isinstance(b, SNode) else (b,)
    )
    return SNode(parts)


def compose_parallel(a: SPGraph, b: SPGraph) -> SPGraph:
    """Parallel composition; flattens nested parallel layers and re-sorts."""
    parts = (a.children if isinstance(a, PNode) else (a,)) + (
        b.children if isinstance(b, PNode) else (b,)
    )
    return PNode(parts)


def edge_count(g: SPGraph) -> int:
    return g.edges


def canonicalize(t: Term) -> SPGraph:
    """Turn a ground term into its canonical decomposition tree.

    Iterative post-order so arbitrarily deep terms do not hit the Python
    recursion limit.  Rejects terms with nonterminal leaves.
    """
    out: list[SPGraph] = []
    stack: list[tuple[Term, bool]] = [(t, False)]
    while stack:
        node, seen = stack.pop()
        if isinstance(node, Atom):
            out.append(Bridge(node.label))
        elif isinstance(node, Ref):
            raise ValueError(f"term is not ground: nonterminal {node.name!r}")
        elif not seen:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
        else:
            b = out.pop()
            a = out.pop()
            out.append(
                compose_serial(a, b) if isinstance(node, Serial) else compose_parallel(a, b)
            )
    return out[0]


# ---------------------------------------------------------------------------
# Text form
#
# atoms            [a-z][a-z0-9_]*
# serial           t1 . t2        (binds tighter)
# parallel         t1 || t2
# grouping         ( t )
# comments         # to end of line
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"[a-z$][a-z0-9_$]*|\|\||[().^]|[0-9]+")


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """Split ``text`` into (token, line, col) triples, dropping comments."""
    toks = []
    for lno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if not m:
                raise ParseError(f"unexpected character {line[pos]!r}", lno, pos + 1)
            toks.append((m.group(), lno, pos + 1))
            pos = m.end()
    return toks


class _TermParser:
    """Recursive-descent reader for the term syntax.

    ``names`` maps known nonterminal names to their kind; when given, bare
    identifiers found in it become ``Ref`` leaves and exponents ``x^k`` are
    accepted (expanded into k parallel copies) -- that extension exists only
    for grammar rule bodies, never for ground graph terms.
    """

    def __init__(self, toks, names=None, exponents=False):
        self.toks = toks
        self.i = 0
        self.names = names
        self.exponents = exponents
        self.saw_exponent = False

    def error(self, msg):
        if self.i < len(self.toks):
            _, ln, col = self.toks[self.i]
        elif self.toks:
            _, ln, col = self.toks[-1]
        else:
            ln, col = 1, 1
        raise ParseError(msg, ln, col)

    def peek(self) -> Optional[str]:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def take(self) -> str:
        if self.i >= len(self.toks):
            self.error("unexpected end of input")
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def parse(self) -> Term:
        t = self.parallel()
        if self.i < len(self.toks):
            self.error(f"trailing input {self.peek()!r}")
        return t

    def parallel(self) -> Term:
        t = self.serial()
        while self.peek() == "||":
            self.take()
            t = Parallel(t, self.serial())
        return t

    def serial(self) -> Term:
        t = self.factor()
        while self.peek() == ".":
            self.take()
            t = Serial(t, self.factor())
        return t

    def factor(self) -> Term:
        tok = self.peek()
        if tok == "(":
            self.take()
            t = self.parallel()
            if self.peek() != ")":
                self.error("expected ')'")
            self.take()
            return t
        if tok is None:
            self.error("unexpected end of input")
        if not NAME_RE.match(tok):
            self.error(f"expected a name, got {tok!r}")
        self.take()
        if self.names is not None and tok in self.names:
            leaf: Term = Ref(tok)
        else:
            if not LABEL_RE.match(tok):
                self.error(f"unknown name {tok!r}")
            leaf = Atom(tok)
        t = leaf
        if self.peek() == "^":
            if not self.exponents:
                self.error("exponents are not valid in graph terms")
            self.take()
            count = self.take()
            if not count.isdigit() or int(count) < 1:
                self.error("exponent must be a positive integer")
            self.saw_exponent = True
            for _ in range(int(count) - 1):
                t = Parallel(t, leaf)
        return t


def parse_term(text: str) -> Term:
    """Parse a ground graph term (labels, ``.``, ``||``, parentheses)."""
    toks = tokenize(text)
    if not toks:
        raise ParseError("empty term", 1, 1)
    return _TermParser(toks).parse()


def parse_graph(text: str) -> SPGraph:
    return canonicalize(parse_term(text))


def format_graph(g: SPGraph) -> str:
    """Render a canonical graph in the term syntax (parse/format round-trips)."""
    out: dict[str, str] = {}
    stack = [g]
    while stack:
        node = stack.pop()
        if node.key in out:
            continue
        if isinstance(node, Bridge):
            out[node.key] = node.label
            continue
        pending = [c for c in node.children if c.key not in out]
        if pending:
            stack.append(node)
            stack.extend(pending)
            continue
        if isinstance(node, SNode):
            parts = [
                "(" + out[c.key] + ")" if isinstance(c, PNode) else out[c.key]
                for c in node.children
            ]
            out[node.key] = " . ".join(parts)
        else:
            out[node.key] = " || ".join(out[c.key] for c in node.children)
    return out[g.key]


def format_term(t: Term) -> str:
    """Render a free term; used for grammar rule bodies."""
    if isinstance(t, Atom):
        return t.label
    if isinstance(t, Ref):
        return t.name
    if isinstance(t, Serial):
        sides = []
        for side in (t.left, t.right):
            s = format_term(side)
            sides.append("(" + s + ")" if isinstance(side, Parallel) else s)
        return f"{sides[0]} . {sides[1]}"
    return f"{format_term(t.left)} || {format_term(t.right)}"


# ---------------------------------------------------------------------------
# Enumeration and random sampling
# ---------------------------------------------------------------------------


def enumerate_graphs(labels: Iterable[str], max_edges: int) -> list[SPGraph]:
    """All canonical SP graphs over ``labels`` with at most ``max_edges``
    edges, sorted by (edge count, canonical key).

    Dynamic programming over the alternating decomposition: a serial node of
    size n is an ordered sequence (length >= 2) of bridges/parallel nodes,
    a parallel node is a multiset (length >= 2) of bridges/serial nodes.
    """
    labels = sorted(set(labels))
    if not labels:
        raise ValueError("need at least one label")
    if max_edges < 1:
        return []
    bridges = [Bridge(a) for a in labels]
    snodes: dict[int, list[SPGraph]] = {1: []}
    pnodes: dict[int, list[SPGraph]] = {1: []}

    def s_atoms(j):  # what may appear under a serial node
        return (bridges if j == 1 else []) + pnodes.get(j, [])

    def p_atoms(j):
        return (bridges if j == 1 else []) + snodes.get(j, [])

    for n in range(2, max_edges + 1):
        # ordered sequences summing to n, length >= 2
        def sequences(total):
            if total == 0:
                yield ()
                return
            for j in range(1, total + 1):
                for atom in s_atoms(j):
                    for rest in sequences(total - j):
                        yield (atom,) + rest

        snodes[n] = [SNode(seq) for seq in sequences(n) if len(seq) >= 2]

        atoms = [(a, a.edges) for j in range(1, n) for a in p_atoms(j)]
        atoms.sort(key=lambda pair: pair[0].key)

        def multisets(start, remaining, picked):
            if remaining == 0:
                if len(picked) >= 2:
                    yield tuple(picked)
                return
            for idx in range(start, len(atoms)):
                g, e = atoms[idx]
                if e <= remaining:
                    picked.append(g)
                    yield from multisets(idx, remaining - e, picked)
                    picked.pop()

        pnodes[n] = [PNode(ms) for ms in multisets(0, n, [])]

    result = list(bridges)
    for n in range(2, max_edges + 1):
        result.extend(snodes[n])
        result.extend(pnodes[n])
    result.sort(key=lambda g: (g.edges, g.key))
    return result


def random_graph(rng, n_edges: int, labels) -> SPGraph:
    """A uniformly-split random SP graph with exactly ``n_edges`` edges.

    Not uniform over graphs; intended for stress and performance tests.
    Iterative so very large graphs are safe to build.
    """
    if n_edges < 1:
        raise ValueError("need at least one edge")
    labels = list(labels)
    out: list[SPGraph] = []
    tasks: list[tuple] = [("gen", n_edges)]
    while tasks:
        task = tasks.pop()
        if task[0] == "gen":
            m = task[1]
            if m == 1:
                out.append(Bridge(rng.choice(labels)))
            else:
                i = rng.randint(1, m - 1)
                op = rng.choice(("s", "p"))
                tasks.append(("mk", op))
                tasks.append(("gen", m - i))
                tasks.append(("gen", i))
        else:
            b = out.pop()
            a = out.pop()
            out.append(compose_serial(a, b) if task[1] == "s" else compose_parallel(a, b))
    return out[0]
