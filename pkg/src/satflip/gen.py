"""Instance generators: graph reductions and seeded random fuzz inputs.

The vertex-cover and independent-set builders produce formulas whose
shortest flip sequences encode minimum covers, giving concrete instances
of the NP-complete class; the random builders rejection-sample inputs
for the polynomial solvers so they can be fuzzed against the exact
search.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .errors import GenerationError, ParseError, PreconditionError, TheoryError
from .formula import Clause, Formula
from .recon import sat_mask
from .relation import Relation, is_dual_horn_free, is_nand_free


@dataclass(frozen=True)
class SimpleGraph:
    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not isinstance(self.num_vertices, int) or self.num_vertices < 1:
            raise PreconditionError(
                f"graph needs at least one vertex, got {self.num_vertices!r}"
            )
        normalized = []
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.num_vertices and 1 <= v <= self.num_vertices):
                raise PreconditionError(f"edge ({u}, {v}) out of range")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise PreconditionError(f"duplicate edge ({e[0]}, {e[1]})")
            seen.add(e)
            normalized.append(e)
        object.__setattr__(self, "edges", tuple(normalized))


def parse_graph(text: str) -> SimpleGraph:
    """Read `graph <num_vertices>` followed by `edge <u> <v>` lines."""
    num_vertices = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "graph":
            if num_vertices is not None:
                raise ParseError("duplicate 'graph' line", lineno)
            if len(parts) != 2:
                raise ParseError("expected 'graph <num_vertices>'", lineno)
            try:
                num_vertices = int(parts[1])
            except ValueError:
                raise ParseError(f"bad vertex count {parts[1]!r}", lineno) from None
        elif parts[0] == "edge":
            if num_vertices is None:
                raise ParseError("'graph' must come before 'edge'", lineno)
            if len(parts) != 3:
                raise ParseError("expected 'edge <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("edge endpoints must be integers", lineno) from None
            edges.append((u, v))
        else:
            raise ParseError(f"unknown directive {parts[0]!r}", lineno)
    if num_vertices is None:
        raise ParseError("missing 'graph' line")
    try:
        return SimpleGraph(num_vertices, tuple(edges))
    except PreconditionError as exc:
        raise ParseError(str(exc)) from None


# Satisfying sets of (a | !b | c) and (a | !b | !c), used with argument
# orders (y_e, z_e, x_u) / (z_e, y_e, x_v) to build both clauses per edge.
VC_CLAUSE_RELATION = Relation(3, frozenset(range(8)) - {0b010})
IS_CLAUSE_RELATION = Relation(3, frozenset(range(8)) - {0b011})


def _edge_clauses(graph: SimpleGraph, name: str):
    nv = graph.num_vertices
    clauses = []
    for i, (u, v) in enumerate(graph.edges, 1):
        y = nv + 2 * i - 1
        z = y + 1
        clauses.append(Clause(name, (y, z, u)))
        clauses.append(Clause(name, (z, y, v)))
    return tuple(clauses)


def gen_vertex_cover_instance(graph: SimpleGraph):
    """Formula with |V| + 2|E| variables and 2|E| clauses whose shortest
    flip sequence from all-zeros to edge-variables-one pays two flips per
    edge variable plus two per vertex of a minimum vertex cover."""
    ne = len(graph.edges)
    n = graph.num_vertices + 2 * ne
    phi = Formula(n, (("vc3", VC_CLAUSE_RELATION),), _edge_clauses(graph, "vc3"))
    s = 0
    t = (1 << (2 * ne)) - 1  # edge variables occupy the low bits
    return phi, s, t


def gen_independent_set_instance(graph: SimpleGraph):
    """Mirror construction: all relations OR-free but not Horn-free, with
    endpoints all-ones and vertex-variables-one."""
    ne = len(graph.edges)
    n = graph.num_vertices + 2 * ne
    phi = Formula(n, (("is3", IS_CLAUSE_RELATION),), _edge_clauses(graph, "is3"))
    s = (1 << n) - 1
    t = ((1 << graph.num_vertices) - 1) << (2 * ne)
    return phi, s, t


def min_vertex_cover_size(graph: SimpleGraph) -> int:
    """Brute force over vertex subsets, smallest first."""
    vertices = range(1, graph.num_vertices + 1)
    for size in range(graph.num_vertices + 1):
        for subset in itertools.combinations(vertices, size):
            chosen = set(subset)
            if all(u in chosen or v in chosen for u, v in graph.edges):
                return size
    raise TheoryError("the full vertex set always covers")  # pragma: no cover


def random_navigable_relation(arity: int, seed: int, max_tries: int = 1000) -> Relation:
    """Rejection-sample a NAND-free and dual-Horn-free relation."""
    if not 1 <= arity <= 4:
        raise PreconditionError(f"arity must be in 1..4, got {arity}")
    rng = random.Random(seed)
    for _ in range(max_tries):
        size = rng.randint(1, 1 << arity)
        rel = Relation(arity, frozenset(rng.sample(range(1 << arity), size)))
        if is_nand_free(rel) and is_dual_horn_free(rel):
            return rel
    raise GenerationError(
        f"no NAND-free and dual-Horn-free relation of arity {arity} "
        f"after {max_tries} draws"
    )


def random_formula(relations, num_vars: int, num_clauses: int, seed: int,
                   max_tries: int = 200):
    """Random clauses over the given relations, plus two satisfying
    endpoints sampled from the explicit solution set.

    Clause arguments are uniform random variables (repeats allowed, no
    constants). Unsatisfiable draws are resampled up to `max_tries`.
    """
    if not 1 <= num_vars <= 16:
        raise PreconditionError(
            f"num_vars must be in 1..16 for explicit endpoint sampling, got {num_vars}"
        )
    named = tuple((f"r{i}", rel) for i, rel in enumerate(relations, 1))
    if not named:
        raise PreconditionError("need at least one relation")
    rng = random.Random(seed)
    for _ in range(max_tries):
        clauses = []
        for _ in range(num_clauses):
            name, rel = named[rng.randrange(len(named))]
            args = tuple(rng.randint(1, num_vars) for _ in range(rel.arity))
            clauses.append(Clause(name, args))
        phi = Formula(num_vars, named, tuple(clauses))
        sats = np.flatnonzero(sat_mask(phi))
        if sats.size:
            s = int(sats[rng.randrange(sats.size)])
            t = int(sats[rng.randrange(sats.size)])
            return phi, s, t
    raise GenerationError(f"no satisfiable draw after {max_tries} tries")
