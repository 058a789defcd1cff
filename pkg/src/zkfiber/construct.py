"""Joins plus star deletions, and the two explicit infinite families.

Given factors K^1..K^n on disjoint vertex sets, with a set of support
simplices S_i and partner simplices P_i per factor, the construction deletes
the star of every union s ∪ t with s in S_i, t in P_k, over all pairs
i < k except (1, n).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from math import comb
from typing import Mapping

from .complex import (
    ComplexError,
    SimplicialComplex,
    boundary_simplex,
    card,
    join,
    lex_key,
    members,
    star_delete,
    vset,
)

log = logging.getLogger(__name__)

LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class ConstructionSpec:
    factors: tuple[SimplicialComplex, ...]
    supports: tuple[tuple[int, ...], ...]
    partners: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.factors)
        if len(self.supports) != n or len(self.partners) != n:
            raise ComplexError("need one support set and one partner set per factor")
        for k, sup, par in zip(self.factors, self.supports, self.partners):
            for s in sup + par:
                if not k.is_face(s):
                    raise ComplexError(f"{k.format_set(s)} is not a face of its factor")
            if len({card(s) for s in sup + par}) > 1:
                raise ComplexError("support and partner simplices of a factor must have equal size")

    @property
    def excluded_pair(self) -> tuple[int, int]:
        return (1, len(self.factors))

    def deletion_schedule(self) -> list[int]:
        n = len(self.factors)
        out = set()
        for i in range(n):
            for k in range(i + 1, n):
                if (i, k) == (0, n - 1):
                    continue
                for s in self.supports[i]:
                    for t in self.partners[k]:
                        out.add(s | t)
        return sorted(out, key=lex_key)


@dataclass(frozen=True)
class FamilySpec:
    q: int
    n: int = 3

    def __post_init__(self):
        if self.q < 1 or self.n < 3:
            raise ComplexError("family needs q >= 1 and n >= 3")
        if self.n != 3 and self.q != 2:
            raise ComplexError("only (n = 3, q >= 1) and (q = 2, n >= 3) are supported")

    @property
    def k(self) -> int:
        return self.q - 1

    @property
    def m(self) -> int:
        return self.n * (self.q + 1)

    @property
    def expected_r(self) -> int:
        if self.n == 3:
            return 3 + 2 * self.q
        return self.n + 2 * (comb(self.n, 2) - 1)

    def blocks(self) -> list[int]:
        b = self.q + 1
        return [vset(range(i * b, (i + 1) * b)) for i in range(self.n)]


def run_construction(spec: ConstructionSpec) -> SimplicialComplex:
    k = spec.factors[0]
    for f in spec.factors[1:]:
        k = join(k, f)
    for face in spec.deletion_schedule():
        if not k.is_face(face):
            raise ComplexError(f"scheduled deletion {k.format_set(face)} is not a face")
        before = set(k.minimal_nonfaces)
        k = star_delete(k, face)
        log.debug("sd %s: +%s", k.format_set(face),
                  [k.format_set(x) for x in set(k.minimal_nonfaces) - before])
    return k


def family_labels(m: int) -> dict[int, str]:
    if m <= len(LETTERS):
        return {v: LETTERS[v] for v in range(m)}
    return {v: f"x{v + 1}" for v in range(m)}


def family_factors(spec: FamilySpec) -> list[SimplicialComplex]:
    b = spec.q + 1
    labels = family_labels(spec.m)
    return [boundary_simplex(spec.q, i * b, [labels[v] for v in range(i * b, (i + 1) * b)])
            for i in range(spec.n)]


def distinguished_vertex(block: int) -> int:
    """Second-lowest vertex of a factor block."""
    return members(block)[1]


def family_construction(spec: FamilySpec) -> ConstructionSpec:
    """Supports: facets through w_i; partners: the facet omitting w_i.

    In each factor every facet containing the distinguished vertex w_i is a
    support, and the single facet avoiding w_i is the partner, so a pair
    (i, k) contributes the q faces F ∪ G with w_i ∈ F and w_k ∉ G.
    """
    factors = family_factors(spec)
    supports, partners = [], []
    for f in factors:
        w = distinguished_vertex(f.vertices)
        supports.append(tuple(sorted((x for x in f.facets if x >> w & 1), key=lex_key)))
        partners.append(tuple(x for x in f.facets if not x >> w & 1))
    return ConstructionSpec(tuple(factors), tuple(supports), tuple(partners))


def family_complex(spec: FamilySpec) -> SimplicialComplex:
    k = run_construction(family_construction(spec))
    if len(k.minimal_nonfaces) != spec.expected_r:
        raise AssertionError(f"family {spec}: got {len(k.minimal_nonfaces)} generators, "
                             f"expected {spec.expected_r}")
    return k


def massey_degree(n: int, k: int) -> int:
    """Degree of the n-fold product built from boundaries of (k+1)-simplices."""
    if n < 3 or k < 0:
        raise ValueError("need n >= 3 and k >= 0")
    deg = 2 * n * (k + 1) + 2
    # p_i = k, |J_i| = k + 2
    assert deg == n * k + n * (k + 2) + 2
    return deg


def ds_graph() -> SimplicialComplex:
    """The k = 0 case: three copies of S^0, supports {a_i}, partners {b_i}.

    Its minimal non-faces are the three factor pairs plus {a1,b2}, {a2,b3},
    six edges of a 6-vertex obstruction graph.
    """
    labels = {0: "a1", 1: "b1", 2: "a2", 3: "b2", 4: "a3", 5: "b3"}
    factors = tuple(boundary_simplex(1, 2 * i, [labels[2 * i], labels[2 * i + 1]]) for i in range(3))
    supports = tuple((1 << (2 * i),) for i in range(3))
    partners = tuple((1 << (2 * i + 1),) for i in range(3))
    return run_construction(ConstructionSpec(factors, supports, partners))


def fdb_complex() -> SimplicialComplex:
    """Flag complex on 1..6 whose minimal non-faces are the consecutive pairs."""
    labels = {v: str(v + 1) for v in range(6)}
    return SimplicialComplex.from_nonfaces(vset(range(6)), [vset((i, i + 1)) for i in range(5)], labels)


# -- text documents ------------------------------------------------------------


def spec_from_document(doc: Mapping) -> ConstructionSpec | FamilySpec:
    """Parse ``{"q": .., "n": ..}`` or a full construction document.

    A construction document has ``factors`` (complex documents in the core
    interchange format, shifted onto disjoint vertex ranges in order) and
    per-factor ``supports`` / ``partners`` given as vertex lists local to
    each factor.
    """
    from .complex import from_document

    if "q" in doc:
        return FamilySpec(int(doc["q"]), int(doc.get("n", 3)))
    factors, supports, partners = [], [], []
    offset = 0
    for i, fdoc in enumerate(doc["factors"]):
        f = from_document(fdoc)
        shift = {v: v + offset for v in f.vertex_list()}
        factors.append(f.relabeled(shift))
        supports.append(tuple(vset(v + offset for v in s) for s in doc["supports"][i]))
        partners.append(tuple(vset(v + offset for v in s) for s in doc["partners"][i]))
        offset += f.m
    return ConstructionSpec(tuple(factors), tuple(supports), tuple(partners))


def spec_to_document(spec: ConstructionSpec | FamilySpec) -> dict:
    from .complex import to_document

    if isinstance(spec, FamilySpec):
        return {"q": spec.q, "n": spec.n}
    docs, sups, pars = [], [], []
    for f, s, p in zip(spec.factors, spec.supports, spec.partners):
        base = min(f.vertex_list())
        docs.append(to_document(f))
        sups.append([[v - base for v in members(x)] for x in s])
        pars.append([[v - base for v in members(x)] for x in p])
    return {"factors": docs, "supports": sups, "partners": pars}


def loads_spec(text: str) -> ConstructionSpec | FamilySpec:
    return spec_from_document(json.loads(text))
