"""Finite simplicial complexes on labeled vertices.

Vertex sets are plain ``int`` bitmasks over a 64-vertex universe: bit ``i``
set means vertex ``i`` belongs to the set.  Iteration is always in ascending
vertex order, which is also the orientation order used for every sign in the
cochain complexes built on top of this module.

A :class:`SimplicialComplex` keeps both its facets and its minimal non-faces.
Either one determines the other (they are dual minimal-transversal
hypergraphs), and both are rebuilt eagerly after every surgery.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

CAPACITY = 64
INFINITY = float("inf")


class ComplexError(ValueError):
    """Raised for invalid complexes or surgery requests."""


# -- vertex sets ---------------------------------------------------------


def vset(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        if not 0 <= v < CAPACITY:
            raise ComplexError(f"vertex {v} outside universe of capacity {CAPACITY}")
        mask |= 1 << v
    return mask


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def card(mask: int) -> int:
    return mask.bit_count()


def lex_key(mask: int) -> tuple[int, ...]:
    return tuple(members(mask))


def minimal_sets(sets: Iterable[int]) -> list[int]:
    """Inclusion-minimal elements, sorted by (size, lex)."""
    ordered = sorted(set(sets), key=lambda s: (card(s), lex_key(s)))
    out: list[int] = []
    for s in ordered:
        if not any(o & s == o for o in out):
            out.append(s)
    return out


def maximal_sets(sets: Iterable[int]) -> list[int]:
    ordered = sorted(set(sets), key=lambda s: (-card(s), lex_key(s)))
    out: list[int] = []
    for s in ordered:
        if not any(o & s == s for o in out):
            out.append(s)
    return sorted(out, key=lex_key)


def minimal_transversals(edges: Sequence[int]) -> list[int]:
    """All inclusion-minimal sets meeting every edge (Berge's algorithm)."""
    trans = [0]
    for e in sorted(set(edges), key=card):
        if e == 0:
            return []
        hit = [t for t in trans if t & e]
        miss = [t for t in trans if not t & e]
        grown = [t | (1 << v) for t in miss for v in members(e)]
        trans = minimal_sets(hit + grown)
    return trans


# -- complexes -----------------------------------------------------------


def _facets_from_nonfaces(vertices: int, nonfaces: Sequence[int]) -> list[int]:
    # F is a face iff V \ F meets every non-face; facets are the complements
    # of the minimal transversals.
    return sorted((vertices & ~t for t in minimal_transversals(nonfaces)), key=lex_key)


def _nonfaces_from_facets(vertices: int, facets: Sequence[int]) -> list[int]:
    return minimal_sets(minimal_transversals([vertices & ~f for f in facets]))


@dataclass(frozen=True)
class SimplicialComplex:
    """Immutable simplicial complex on the vertex set ``vertices`` (a bitmask).

    Every vertex of the ground set is a face.  Build instances through
    :meth:`from_facets` or :meth:`from_nonfaces`; the raw constructor trusts
    its arguments.
    """

    vertices: int
    facets: tuple[int, ...]
    minimal_nonfaces: tuple[int, ...]
    labels: Mapping[int, str] = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_facets(
        cls, facets: Iterable[Iterable[int] | int], vertices: int | None = None,
        labels: Mapping[int, str] | None = None,
    ) -> "SimplicialComplex":
        masks = [f if isinstance(f, int) else vset(f) for f in facets]
        covered = 0
        for f in masks:
            covered |= f
        if vertices is None:
            vertices = covered
        if covered & ~vertices:
            raise ComplexError("facet uses a vertex outside the ground set")
        if covered != vertices:
            raise ComplexError("every ground-set vertex must lie in some facet")
        top = maximal_sets(masks) or [0]
        return cls(vertices, tuple(top), tuple(_nonfaces_from_facets(vertices, top)),
                   dict(labels or {}))

    @classmethod
    def from_nonfaces(
        cls, vertices: int | Iterable[int], nonfaces: Iterable[Iterable[int] | int],
        labels: Mapping[int, str] | None = None,
    ) -> "SimplicialComplex":
        if not isinstance(vertices, int):
            vertices = vset(vertices)
        masks = [n if isinstance(n, int) else vset(n) for n in nonfaces]
        for n in masks:
            if n & ~vertices:
                raise ComplexError("non-face uses a vertex outside the ground set")
            if card(n) < 2:
                raise ComplexError("every vertex must be a face; singleton or empty non-face given")
        mins = minimal_sets(masks)
        return cls(vertices, tuple(_facets_from_nonfaces(vertices, mins)), tuple(mins),
                   dict(labels or {}))

    # -- basic queries --

    @property
    def m(self) -> int:
        return card(self.vertices)

    @property
    def dim(self) -> int:
        return max(card(f) for f in self.facets) - 1

    def vertex_list(self) -> list[int]:
        return members(self.vertices)

    def label(self, v: int) -> str:
        return self.labels.get(v, str(v))

    def is_face(self, s: int) -> bool:
        if s & ~self.vertices:
            return False
        return not any(n & s == n for n in self.minimal_nonfaces)

    def nu(self) -> float:
        """Smallest minimal non-face size; ``INFINITY`` for a full simplex."""
        if not self.minimal_nonfaces:
            return INFINITY
        return min(card(n) for n in self.minimal_nonfaces)

    def is_pure_ideal(self) -> bool:
        return len({card(n) for n in self.minimal_nonfaces}) <= 1

    def faces(self, within: int | None = None, max_size: int | None = None) -> Iterator[int]:
        """All faces inside ``within`` (default: everything), DFS order."""
        ground = self.vertices if within is None else within & self.vertices
        verts = members(ground)
        cap = len(verts) if max_size is None else max_size
        # s is a face, so s + v is one unless a non-face through v fits
        through = [[n for n in self.minimal_nonfaces if n & ground == n and n >> v & 1] for v in verts]
        stack = [(0, 0, 0)]
        while stack:
            s, start, size = stack.pop()
            yield s
            if size == cap:
                continue
            for k in range(start, len(verts)):
                t = s | (1 << verts[k])
                for n in through[k]:
                    if n & t == n:
                        break
                else:
                    stack.append((t, k + 1, size + 1))

    def faces_by_size(self, within: int | None = None, max_size: int | None = None) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for f in self.faces(within, max_size):
            out.setdefault(card(f), []).append(f)
        for v in out.values():
            v.sort()
        return out

    def f_vector(self) -> list[int]:
        by = self.faces_by_size()
        return [len(by.get(k, [])) for k in range(0, self.dim + 2)]

    def link(self, sigma: int) -> "SimplicialComplex":
        """Link of the face ``sigma`` as a complex on its own vertex set."""
        if not self.is_face(sigma):
            raise ComplexError("link of a non-face")
        tops = [f & ~sigma for f in self.facets if f & sigma == sigma]
        ground = 0
        for t in tops:
            ground |= t
        return SimplicialComplex.from_facets(tops, ground, self.labels)

    def relabeled(self, mapping: Mapping[int, int]) -> "SimplicialComplex":
        def move(s: int) -> int:
            return vset(mapping[v] for v in members(s))
        labels = {mapping[v]: self.label(v) for v in self.vertex_list()}
        return SimplicialComplex.from_nonfaces(
            move(self.vertices), [move(n) for n in self.minimal_nonfaces], labels)

    def compacted(self) -> "SimplicialComplex":
        """Same complex with vertices renumbered ``0..m-1`` in ascending order."""
        return self.relabeled({v: i for i, v in enumerate(self.vertex_list())})

    def format_set(self, s: int) -> str:
        return "{" + ",".join(self.label(v) for v in members(s)) + "}"

    def __repr__(self) -> str:
        nf = ", ".join(self.format_set(n) for n in self.minimal_nonfaces)
        return f"SimplicialComplex(m={self.m}, minimal_nonfaces=[{nf}])"


# -- constructors and surgery ----------------------------------------------


def boundary_simplex(q: int, offset: int = 0, labels: Sequence[str] | None = None) -> SimplicialComplex:
    """Boundary of the q-simplex on vertices ``offset .. offset+q``."""
    if q < 1:
        raise ComplexError("q must be >= 1")
    if offset < 0 or offset + q + 1 > CAPACITY:
        raise ComplexError("boundary simplex does not fit in the vertex universe")
    full = vset(range(offset, offset + q + 1))
    lab = dict(zip(range(offset, offset + q + 1), labels)) if labels else {}
    return SimplicialComplex.from_nonfaces(full, [full], lab)


def simplex(vertices: Iterable[int], labels: Mapping[int, str] | None = None) -> SimplicialComplex:
    mask = vset(vertices)
    return SimplicialComplex(mask, (mask,), (), dict(labels or {}))


def cycle(n: int, offset: int = 0) -> SimplicialComplex:
    """The n-cycle C_n on ``offset+0 .. offset+n-1`` (vertex i adjacent to i±1)."""
    if n < 3:
        raise ComplexError("a cycle needs at least 3 vertices")
    vs = [offset + i for i in range(n)]
    return SimplicialComplex.from_facets([{vs[i], vs[(i + 1) % n]} for i in range(n)])


def join(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    if k1.vertices & k2.vertices:
        raise ComplexError("join requires disjoint vertex sets")
    labels = {**k1.labels, **k2.labels}
    facets = sorted({f1 | f2 for f1 in k1.facets for f2 in k2.facets}, key=lex_key)
    nonfaces = minimal_sets(k1.minimal_nonfaces + k2.minimal_nonfaces)
    return SimplicialComplex(k1.vertices | k2.vertices, tuple(facets), tuple(nonfaces), labels)


def star_delete(k: SimplicialComplex, face: int) -> SimplicialComplex:
    """sd_I K: drop every face containing ``face``.

    Deleting at a single vertex removes that vertex from the ground set.
    """
    if face == 0 or not k.is_face(face):
        raise ComplexError(f"star deletion target {k.format_set(face)} is not a nonempty face")
    if card(face) == 1:
        return full_subcomplex(k, k.vertices & ~face)
    return SimplicialComplex.from_nonfaces(k.vertices, list(k.minimal_nonfaces) + [face], k.labels)


def full_subcomplex(k: SimplicialComplex, j: int) -> SimplicialComplex:
    j &= k.vertices
    nonfaces = [n for n in k.minimal_nonfaces if n & j == n]
    labels = {v: k.label(v) for v in members(j)} if k.labels else {}
    return SimplicialComplex(j, tuple(_facets_from_nonfaces(j, nonfaces)), tuple(nonfaces), labels)


def link_condition(k: SimplicialComplex, u: int, v: int) -> bool:
    """lk{u} ∩ lk{v} == lk{u,v}, compared face by face."""
    bu, bv = 1 << u, 1 << v
    for tau in k.faces(k.vertices & ~(bu | bv)):
        if k.is_face(tau | bu) and k.is_face(tau | bv) and not k.is_face(tau | bu | bv):
            return False
    return True


def edge_contract(k: SimplicialComplex, u: int, v: int) -> tuple[SimplicialComplex, bool]:
    """Merge vertex ``v`` into ``u``; also report whether the link condition held."""
    edge = (1 << u) | (1 << v)
    if u == v or not k.is_face(edge):
        raise ComplexError(f"{{{k.label(u)},{k.label(v)}}} is not an edge")
    held = link_condition(k, u, v)
    bv = 1 << v
    images = [(f & ~bv) | (1 << u) if f & bv else f for f in k.facets]
    labels = {w: k.label(w) for w in k.vertex_list() if w != v} if k.labels else {}
    return SimplicialComplex.from_facets(images, k.vertices & ~bv, labels), held


def _part_faces(lk: SimplicialComplex, part) -> set[int]:
    if isinstance(part, SimplicialComplex):
        faces = set(part.faces())
        if not all(lk.is_face(f) for f in faces):
            raise ComplexError("partition part is not a subcomplex of the link")
        return faces
    mask = part if isinstance(part, int) else vset(part)
    return set(lk.faces(mask))


def edge_stretch(
    k: SimplicialComplex, w: int, part_u, part_v, new_vertex: int | None = None,
) -> SimplicialComplex:
    """Split vertex ``w`` into the edge {w, new_vertex}.

    ``part_u`` and ``part_v`` describe the two subcomplexes A, B of lk(w) kept
    by ``w`` and by the new vertex: either explicit subcomplexes or vertex
    sets (meaning the faces of lk(w) spanned by those vertices).  Their union
    must be all of lk(w).  The result is
    (K minus the open star of w) ∪ w*A ∪ v*B ∪ wv*(A∩B), so contracting the
    new edge recovers K and always satisfies the link condition.
    """
    bw = 1 << w
    if not k.vertices & bw:
        raise ComplexError(f"{w} is not a vertex")
    if new_vertex is None:
        new_vertex = next(i for i in range(CAPACITY) if not k.vertices >> i & 1)
    bn = 1 << new_vertex
    if k.vertices & bn or new_vertex >= CAPACITY:
        raise ComplexError(f"new vertex {new_vertex} already used or out of range")
    lk = k.link(bw)
    a, b = _part_faces(lk, part_u), _part_faces(lk, part_v)
    a.add(0)
    b.add(0)
    if set(lk.faces()) - (a | b):
        raise ComplexError("partition does not cover the link")
    tops = [f for f in k.facets if not f & bw]
    tops += [t | bw for t in a] + [t | bn for t in b] + [t | bw | bn for t in a & b]
    labels = dict(k.labels)
    if labels:
        labels[new_vertex] = f"{k.label(w)}'"
    return SimplicialComplex.from_facets(tops, k.vertices | bn, labels)


def induced_partition(k: SimplicialComplex, u: int, v: int) -> tuple[SimplicialComplex, SimplicialComplex]:
    """The two link pieces of an edge {u, v}, as fed back into :func:`edge_stretch`."""
    bu, bv = 1 << u, 1 << v
    rest = k.vertices & ~(bu | bv)
    a = [t for t in k.faces(rest) if k.is_face(t | bu)]
    b = [t for t in k.faces(rest) if k.is_face(t | bv)]

    def as_complex(faces: list[int]) -> SimplicialComplex:
        ground = 0
        for f in faces:
            ground |= f
        return SimplicialComplex.from_facets(maximal_sets(faces), ground)

    return as_complex(a), as_complex(b)


# -- canonical keys ------------------------------------------------------


def canonical_key(k: SimplicialComplex) -> tuple:
    """Cheap isomorphism-invariant-ish key: relabel by (degree data, index).

    Equal keys imply isomorphic complexes (the key *is* a relabeled copy of the
    non-face list); isomorphic complexes may still get different keys.
    """
    verts = k.vertex_list()
    score = {v: (sum(1 for n in k.minimal_nonfaces if n >> v & 1),
                 sum(1 for f in k.facets if f >> v & 1)) for v in verts}
    order = sorted(verts, key=lambda v: (score[v], v))
    pos = {v: i for i, v in enumerate(order)}
    nf = sorted(tuple(sorted(pos[v] for v in members(n))) for n in k.minimal_nonfaces)
    return (len(verts), tuple(nf))


def isomorphic(k1: SimplicialComplex, k2: SimplicialComplex) -> bool:
    """Exact isomorphism test on the vertex / minimal non-face incidence graph."""
    import networkx as nx
    from networkx.algorithms.isomorphism import GraphMatcher, categorical_node_match

    if canonical_key(k1) == canonical_key(k2):
        return True
    if k1.m != k2.m or sorted(map(card, k1.minimal_nonfaces)) != sorted(map(card, k2.minimal_nonfaces)):
        return False

    def incidence(k: SimplicialComplex):
        g = nx.Graph()
        g.add_nodes_from((("v", v) for v in k.vertex_list()), kind=0)
        for i, n in enumerate(k.minimal_nonfaces):
            g.add_node(("n", i), kind=1)
            g.add_edges_from((("n", i), ("v", v)) for v in members(n))
        return g

    return GraphMatcher(incidence(k1), incidence(k2),
                        node_match=categorical_node_match("kind", 0)).is_isomorphic()


# -- interchange format -----------------------------------------------------


def to_document(k: SimplicialComplex, use: str = "facets") -> dict:
    """Serialize on compacted 0-based vertices; sets sorted lexicographically."""
    c = k.compacted()
    doc: dict = {"m": c.m}
    if k.labels:
        doc["labels"] = [k.label(v) for v in k.vertex_list()]
    sets = c.facets if use == "facets" else c.minimal_nonfaces
    doc[use] = sorted(list(members(s)) for s in sets)
    return doc


def dumps(k: SimplicialComplex, use: str = "facets") -> str:
    return json.dumps(to_document(k, use), sort_keys=True)


def from_document(doc: Mapping) -> SimplicialComplex:
    if not isinstance(doc, Mapping) or "m" not in doc:
        raise ComplexError("complex document needs an integer field 'm'")
    m = doc["m"]
    if not isinstance(m, int) or not 0 <= m <= CAPACITY:
        raise ComplexError(f"'m' must be an integer in [0, {CAPACITY}]")
    has_f, has_n = "facets" in doc, "minimal_nonfaces" in doc
    if not (has_f or has_n):
        raise ComplexError("give 'facets' or 'minimal_nonfaces'")
    labels = doc.get("labels")
    if labels is not None:
        if len(labels) != m or not all(isinstance(s, str) for s in labels):
            raise ComplexError("'labels' must be m strings")
        labels = dict(enumerate(labels))
    ground = (1 << m) - 1

    def read(key: str) -> list[int]:
        masks = []
        for i, s in enumerate(doc[key]):
            if not isinstance(s, list) or not all(isinstance(v, int) and 0 <= v < m for v in s):
                raise ComplexError(f"{key}[{i}] = {s!r}: vertices must be integers in 0..{m - 1}")
            masks.append(vset(s))
        return masks

    if has_f:
        k = SimplicialComplex.from_facets(read("facets"), ground, labels)
        if has_n:
            # both given: they must describe the same complex
            for i, n in enumerate(read("minimal_nonfaces")):
                if k.is_face(n):
                    raise ComplexError(
                        f"minimal_nonfaces[{i}] = {members(n)} is contained in a facet")
            if set(read("minimal_nonfaces")) != set(k.minimal_nonfaces):
                raise ComplexError("facets and minimal_nonfaces describe different complexes")
        return k
    return SimplicialComplex.from_nonfaces(ground, read("minimal_nonfaces"), labels)


def loads(text: str) -> SimplicialComplex:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexError(f"parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return from_document(doc)
