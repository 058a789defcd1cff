"""Rational cochain model of Z_K and triple Massey products.

The model is Λ[u_1..u_m] ⊗ Q[K] / (u_i v_i, v_i^2) with deg u_i = 1,
deg v_i = 2 and d u_i = v_i.  A basis element u_σ v_τ has σ ∩ τ = ∅ and
τ a face; it is homogeneous of multidegree σ ∪ τ, and d preserves
multidegree, so the model splits into finite components (J, degree).
The cohomology of component (J, n) is H~^{n-|J|-1}(K_J).

Massey convention: ⟨a, b, c⟩ = [ā·y + x̄·c] with ā = (-1)^{deg a} a,
dx = ā·b and dy = b̄·c.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .complex import INFINITY, SimplicialComplex, card, full_subcomplex, lex_key, members
from .hochster import hochster_summary
from .linalg import Span, axpy, scale

log = logging.getLogger(__name__)

Basis = tuple[int, int]  # (sigma, tau)


class ModelError(ValueError):
    pass


def _sign_before(mask: int, i: int) -> int:
    """(-1)^{number of elements of mask below i}."""
    return -1 if card(mask & ((1 << i) - 1)) & 1 else 1


def basis_degree(e: Basis) -> int:
    return card(e[0]) + 2 * card(e[1])


def format_basis(k: SimplicialComplex, e: Basis) -> str:
    sigma, tau = e
    parts = []
    if sigma:
        parts.append("u" + k.format_set(sigma))
    if tau:
        parts.append("v" + k.format_set(tau))
    return "".join(parts) or "1"


@dataclass(frozen=True)
class MultigradedCochain:
    """Element of the model of one total degree: basis element -> rational."""

    degree: int
    terms: Mapping[Basis, Fraction | int] = field(default_factory=dict)

    def __post_init__(self):
        for e, c in self.terms.items():
            if basis_degree(e) != self.degree:
                raise ModelError(f"term of degree {basis_degree(e)} in a degree-{self.degree} cochain")

    @property
    def multidegrees(self) -> set[int]:
        return {s | t for s, t in self.terms}

    @property
    def multidegree(self) -> int:
        md = self.multidegrees
        if len(md) > 1:
            raise ModelError("cochain is not multidegree-homogeneous")
        return next(iter(md)) if md else 0

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MultigradedCochain") -> "MultigradedCochain":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.degree != self.degree:
            raise ModelError("adding cochains of different degrees")
        out = dict(self.terms)
        axpy(out, 1, other.terms)
        return MultigradedCochain(self.degree, out)

    def __neg__(self) -> "MultigradedCochain":
        return self.scaled(-1)

    def __sub__(self, other: "MultigradedCochain") -> "MultigradedCochain":
        return self + (-other)

    def scaled(self, c) -> "MultigradedCochain":
        return MultigradedCochain(self.degree, scale(self.terms, c))

    def bar(self) -> "MultigradedCochain":
        return self.scaled(-1) if self.degree & 1 else self

    def term_list(self, k: SimplicialComplex) -> list[list[str]]:
        return [[format_basis(k, e), str(c)] for e, c in sorted(self.terms.items(), key=_term_order)]


def _term_order(item):
    (s, t), _ = item
    return (lex_key(s | t), lex_key(t), lex_key(s))


def zero(degree: int) -> MultigradedCochain:
    return MultigradedCochain(degree, {})


def d(k: SimplicialComplex, a: MultigradedCochain) -> MultigradedCochain:
    out: dict = {}
    for (sigma, tau), c in a.terms.items():
        for i in members(sigma):
            t = tau | (1 << i)
            if k.is_face(t):
                axpy(out, c * _sign_before(sigma, i), {(sigma & ~(1 << i), t): 1})
    return MultigradedCochain(a.degree + 1, out)


def cup_basis(k: SimplicialComplex, e: Basis, f: Basis) -> tuple[int, Basis | None]:
    (s1, t1), (s2, t2) = e, f
    if (s1 | t1) & (s2 | t2):
        return 0, None
    tau = t1 | t2
    if not k.is_face(tau):
        return 0, None
    sign = 1
    for j in members(s2):
        if card(s1 >> (j + 1)) & 1:
            sign = -sign
    return sign, (s1 | s2, tau)


def cup(k: SimplicialComplex, a: MultigradedCochain, b: MultigradedCochain) -> MultigradedCochain:
    out: dict = {}
    for e, c in a.terms.items():
        for f, c2 in b.terms.items():
            sign, g = cup_basis(k, e, f)
            if sign:
                axpy(out, sign * c * c2, {g: 1})
    return MultigradedCochain(a.degree + b.degree, out)


# -- components ------------------------------------------------------------------


class Component:
    """The (J, degree) summand of the model with its differentials.

    ``basis`` lists the elements u_σ v_τ with σ ⊔ τ = J and |τ| = degree - |J|;
    cohomology representatives are chosen greedily from a cocycle basis.
    """

    def __init__(self, model: "KoszulModel", J: int, degree: int):
        self.model = model
        self.J = J
        self.degree = degree
        self.basis = model.basis(J, degree)
        self.index = {e: i for i, e in enumerate(self.basis)}
        k = model.k
        self.d_out = [self._vector(d(k, MultigradedCochain(degree, {e: 1})), model.basis(J, degree + 1))
                      for e in self.basis]
        self.source = model.basis(J, degree - 1)
        self.d_in = [self._vector(d(k, MultigradedCochain(degree - 1, {e: 1})), self.basis)
                     for e in self.source]
        cocycles = Span()
        for i, col in enumerate(self.d_out):
            cocycles.add(col, i)
        self._span = Span()
        for i, col in enumerate(self.d_in):
            self._span.add(col, ("b", i))
        self.coboundary_rank = self._span.rank
        self.cohomology_basis: list[MultigradedCochain] = []
        for z in cocycles.kernel:
            if self._span.add(z, ("h", len(self.cohomology_basis))):
                self.cohomology_basis.append(self.cochain(z))

    @staticmethod
    def _vector(c: MultigradedCochain, target: list[Basis]) -> dict:
        idx = {e: i for i, e in enumerate(target)}
        return {idx[e]: v for e, v in c.terms.items()}

    @property
    def rank(self) -> int:
        return len(self.cohomology_basis)

    def vector(self, c: MultigradedCochain) -> dict:
        try:
            return {self.index[e]: v for e, v in c.terms.items()}
        except KeyError as exc:
            raise ModelError("cochain has terms outside this component") from exc

    def cochain(self, vec: Mapping[int, Fraction | int]) -> MultigradedCochain:
        return MultigradedCochain(self.degree, {self.basis[i]: v for i, v in vec.items() if v})

    def is_cocycle(self, c: MultigradedCochain) -> bool:
        return d(self.model.k, c).is_zero()

    def coordinates(self, c: MultigradedCochain) -> list[Fraction]:
        """Coordinates of the class of a cocycle in ``cohomology_basis``."""
        res, combo = self._span.reduce(self.vector(c))
        if res:
            raise ModelError("not a cocycle")
        out = [Fraction(0)] * self.rank
        for tag, v in combo.items():
            if tag[0] == "h":
                out[tag[1]] = Fraction(v)
        return out

    def solve_coboundary(self, c: MultigradedCochain) -> MultigradedCochain | None:
        """Some x of degree - 1 with dx = c, or None if c is not a coboundary."""
        res, combo = self._span.reduce(self.vector(c))
        if res or any(tag[0] == "h" and v for tag, v in combo.items()):
            return None
        return MultigradedCochain(self.degree - 1, {self.source[tag[1]]: v for tag, v in combo.items() if v})


class KoszulModel:
    """Component cache for one complex."""

    def __init__(self, k: SimplicialComplex):
        self.k = k
        self._components: dict[tuple[int, int], Component] = {}
        self._bases: dict[tuple[int, int], list[Basis]] = {}

    def basis(self, J: int, degree: int) -> list[Basis]:
        key = (J, degree)
        if key not in self._bases:
            t = degree - card(J)
            if t < 0 or t > card(J) or J & ~self.k.vertices:
                out = []
            else:
                out = sorted(((J & ~tau, tau) for tau in self.k.faces(within=J, max_size=t) if card(tau) == t),
                             key=lambda e: lex_key(e[1]))
            self._bases[key] = out
        return self._bases[key]

    def component(self, J: int, degree: int) -> Component:
        key = (J, degree)
        if key not in self._components:
            self._components[key] = Component(self, J, degree)
        return self._components[key]

    def component_of(self, c: MultigradedCochain) -> Component:
        return self.component(c.multidegree, c.degree)

    def classes(self, J: int, degree: int) -> list[MultigradedCochain]:
        """Cocycle representatives of a basis of H(J, degree)."""
        return list(self.component(J, degree).cohomology_basis)

    def random_cochain(self, J: int, degree: int, rng: random.Random, span: int = 5) -> MultigradedCochain:
        return MultigradedCochain(degree, {e: rng.randint(-span, span) for e in self.basis(J, degree)
                                           if rng.random() < 0.7})

    def random_coboundary(self, J: int, degree: int, rng: random.Random) -> MultigradedCochain:
        return d(self.k, self.random_cochain(J, degree - 1, rng))


def model_component(k: SimplicialComplex, J: int, degree: int) -> Component:
    return KoszulModel(k).component(J, degree)


# -- Massey products -------------------------------------------------------------


@dataclass
class MasseyReport:
    classes: list[dict]
    defined: bool
    target_degree: int
    target_multidegree: int
    failing_pair: tuple[int, int] | None = None
    offset: list[Fraction] = field(default_factory=list)
    directions: list[list[Fraction]] = field(default_factory=list)
    target_rank: int = 0
    indeterminacy_dim: int = 0
    contains_zero: bool = True
    x: MultigradedCochain | None = None
    y: MultigradedCochain | None = None
    representative: MultigradedCochain | None = None
    target_label: str = ""

    @property
    def nontrivial(self) -> bool:
        return self.defined and not self.contains_zero

    @property
    def representative_subspace(self) -> tuple[list[Fraction], list[list[Fraction]]]:
        return self.offset, self.directions

    def to_document(self, k: SimplicialComplex) -> dict:
        doc = {
            "classes": self.classes,
            "defined": self.defined,
            "target_degree": self.target_degree,
            "target_multidegree": self.target_label,
            "nontrivial": self.nontrivial,
        }
        if not self.defined:
            doc["failing_pair"] = list(self.failing_pair or ())
            return doc
        doc.update({
            "contains_zero": self.contains_zero,
            "indeterminacy_dim": self.indeterminacy_dim,
            "target_component_rank": self.target_rank,
            "offset": [str(v) for v in self.offset],
            "directions": [[str(v) for v in row] for row in self.directions],
            "defining_x": self.x.term_list(k) if self.x else [],
            "defining_y": self.y.term_list(k) if self.y else [],
            "representative": self.representative.term_list(k) if self.representative else [],
        })
        return doc


def _class_document(model: KoszulModel, c: MultigradedCochain) -> dict:
    comp = model.component_of(c)
    return {
        "J": model.k.format_set(comp.J),
        "degree": c.degree,
        "basis": [format_basis(model.k, e) for e in comp.basis],
        "coefficients": [str(c.terms.get(e, 0)) for e in comp.basis],
    }


def _solve(model: KoszulModel, c: MultigradedCochain, degree: int) -> MultigradedCochain | None:
    """Solve dx = c; a product of overlapping classes is identically zero."""
    if c.is_zero():
        return zero(degree)
    return model.component_of(c).solve_coboundary(c)


def _partner_multidegrees(model: KoszulModel, degree: int, avoid: int) -> list[int]:
    """Multidegrees L disjoint from ``avoid`` with H(L, degree) != 0 rationally."""
    k = model.k
    rest = k.vertices & ~avoid
    if not rest:
        return [0] if degree == 0 else []
    sub = full_subcomplex(k, rest)
    summary = hochster_summary(sub, (degree, degree))
    return sorted({s.J for s in summary.summands if s.rank}, key=lex_key)


def triple_massey(
    k: SimplicialComplex, a1: MultigradedCochain, a2: MultigradedCochain, a3: MultigradedCochain,
    model: KoszulModel | None = None, full_indeterminacy: bool = True,
) -> MasseyReport:
    """⟨a1, a2, a3⟩ for multidegree-homogeneous cocycles, over Q.

    The product set is offset + span(directions) in H of the target
    component; it contains zero iff the offset lies in that span.  The
    indeterminacy dimension counts a1·H + H·a3 over every multidegree.
    """
    model = model or KoszulModel(k)
    for c in (a1, a2, a3):
        c.multidegree  # raises on mixed input
        if not d(k, c).is_zero():
            raise ModelError("Massey inputs must be cocycles")
    J1, J2, J3 = a1.multidegree, a2.multidegree, a3.multidegree
    n1, n2, n3 = a1.degree, a2.degree, a3.degree
    target = n1 + n2 + n3 - 1
    J = J1 | J2 | J3
    report = MasseyReport(
        classes=[_class_document(model, c) for c in (a1, a2, a3)],
        defined=False, target_degree=target, target_multidegree=J, target_label=k.format_set(J),
    )
    x = _solve(model, cup(k, a1.bar(), a2), n1 + n2 - 1)
    if x is None:
        report.failing_pair = (1, 2)
        return report
    y = _solve(model, cup(k, a2.bar(), a3), n2 + n3 - 1)
    if y is None:
        report.failing_pair = (2, 3)
        return report
    report.defined = True
    report.x, report.y = x, y
    rep = cup(k, a1.bar(), y) + cup(k, x.bar(), a3)
    report.representative = rep

    # directions: x -> x + z, y -> y + w over cohomology classes z, w
    nx, ny = n1 + n2 - 1, n2 + n3 - 1
    if full_indeterminacy:
        x_mds = _partner_multidegrees(model, nx, J3)
        y_mds = _partner_multidegrees(model, ny, J1)
    else:
        x_mds = [J1 | J2] if not (J1 & J2) else []
        y_mds = [J2 | J3] if not (J2 & J3) else []
    moves: list[MultigradedCochain] = []
    for L in x_mds:
        moves += [cup(k, z.bar(), a3) for z in model.classes(L, nx)]
    for L in y_mds:
        moves += [cup(k, a1.bar(), w) for w in model.classes(L, ny)]

    # global coordinates: (target multidegree, basis index) -> one integer key
    keys: dict[tuple[int, int], int] = {}

    def coords(c: MultigradedCochain) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        by: dict[int, dict] = {}
        for e, v in c.terms.items():
            by.setdefault(e[0] | e[1], {})[e] = v
        for T, terms in sorted(by.items()):
            comp = model.component(T, target)
            for i, v in enumerate(comp.coordinates(MultigradedCochain(target, terms))):
                if v:
                    out[keys.setdefault((T, i), len(keys))] = v
        return out

    target_comp = model.component(J, target)
    for i in range(target_comp.rank):
        keys[(J, i)] = i
    report.target_rank = target_comp.rank
    span = Span()
    local = Span()
    for n, mv in enumerate(moves):
        vec = coords(mv)
        span.add(vec, n)
        in_target = {key: v for key, v in vec.items() if key < target_comp.rank}
        if len(in_target) == len(vec) and in_target and local.add(in_target, n):
            report.directions.append([in_target.get(i, Fraction(0)) for i in range(target_comp.rank)])
    off = coords(rep)
    report.offset = [Fraction(off.get(i, 0)) for i in range(target_comp.rank)]
    report.indeterminacy_dim = span.rank
    report.contains_zero = span.contains(off)
    return report


def shifted(model: KoszulModel, c: MultigradedCochain, rng: random.Random) -> MultigradedCochain:
    """Same class, representative moved by a random coboundary."""
    return c + model.random_coboundary(c.multidegree, c.degree, rng)


# -- formality ---------------------------------------------------------------------


def first_rational_class_degree(k: SimplicialComplex) -> float:
    """Lowest degree >= 1 with a nonzero rational Betti number of Z_K."""
    top = k.m + k.dim + 1
    lo = 1
    while lo <= top:
        hi = min(top, lo + 3)
        summary = hochster_summary(k, (lo, hi))
        for i in range(lo, hi + 1):
            if summary.betti.get(i, 0):
                return i
        lo = hi + 1
    return INFINITY


def formality_bounds(
    k: SimplicialComplex, reports: Iterable[MasseyReport] = (), first_degree: float | None = None,
) -> tuple[float, float]:
    """(lower, upper) bounds on the formality degree of Z_K.

    lower: vanishing rational cohomology in degrees 1..q gives q-formality.
    upper: one less than the lowest class degree in a nontrivial triple
    product among ``reports``; INFINITY when none is known.
    """
    first = first_rational_class_degree(k) if first_degree is None else first_degree
    lower = first - 1 if first != INFINITY else INFINITY
    degs = [min(c["degree"] for c in r.classes) for r in reports if r.nontrivial]
    upper = min(degs) - 1 if degs else INFINITY
    return lower, upper


def search_nontrivial_triples(
    k: SimplicialComplex, degrees: Sequence[int], model: KoszulModel | None = None, limit: int | None = None,
) -> tuple[list[MasseyReport], int]:
    """Run every triple of basis classes drawn from the given degrees.

    Returns the nontrivial reports and the number of triples examined.
    """
    model = model or KoszulModel(k)
    pool = []
    for n in degrees:
        for s in hochster_summary(k, (n, n)).summands:
            if s.rank:
                pool += model.classes(s.J, n)
    found, seen = [], 0
    for a1, a2, a3 in product(pool, repeat=3):
        if limit is not None and seen >= limit:
            break
        seen += 1
        rep = triple_massey(k, a1, a2, a3, model)
        if rep.nontrivial:
            found.append(rep)
    return found, seen
