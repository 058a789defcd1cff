"""The bilinear polynomial of a Stanley-Reisner ideal and its singular locus.

For minimal non-faces f_1..f_r of K on m vertices the polynomial is
Phi_K = sum_i y_i * prod_{j in f_i} x_j on C^{m+r}.  With x-weights 1 and
y-weights d - |f_i| it is weighted homogeneous of degree d.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .complex import INFINITY, SimplicialComplex, card, lex_key, members

# largest prime below 2^62
DEFAULT_PRIME = 4611686018427387847

ANNOTATIONS = (
    "Milnor fiber Phi^-1(1) is homotopy equivalent to Z_K (stated, not computed)",
    "geometric monodromy is trivial (stated, not computed)",
)


class PolynomialError(ValueError):
    pass


@dataclass(frozen=True)
class MilnorPolynomial:
    m: int
    generators: tuple[int, ...]
    y_weights: tuple[int, ...]
    degree: int
    vertex_labels: tuple[str, ...]  # label of each x variable, ascending vertex order
    vertex_index: tuple[int, ...]  # vertex id of each x variable
    annotations: tuple[str, ...] = field(default=ANNOTATIONS)

    def __post_init__(self):
        for g, w in zip(self.generators, self.y_weights):
            if w < 1 or w + card(g) != self.degree:
                raise AssertionError("term is not weighted homogeneous of the recorded degree")

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def N(self) -> int:
        return self.m + self.r

    @property
    def x_weights(self) -> tuple[int, ...]:
        return (1,) * self.m

    @property
    def homogeneous(self) -> bool:
        return all(w == 1 for w in self.y_weights)

    def x_name(self, v: int) -> str:
        return "x_" + self.vertex_labels[self.vertex_index.index(v)]

    def terms(self) -> list[tuple[int, list[int]]]:
        """(y index from 1, x vertices) per term."""
        return [(i + 1, members(g)) for i, g in enumerate(self.generators)]

    def text(self) -> str:
        return " + ".join(
            "*".join([f"y{i}"] + [self.x_name(v) for v in vs]) for i, vs in self.terms())

    def weights_summary(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, w in enumerate(self.y_weights):
            out.setdefault(w, []).append(i + 1)
        return out

    def to_document(self) -> dict:
        return {
            "polynomial": self.text(),
            "m": self.m,
            "r": self.r,
            "N": self.N,
            "degree": self.degree,
            "homogeneous": self.homogeneous,
            "y_weights": list(self.y_weights),
            "annotations": list(self.annotations),
        }


def build_phi(k: SimplicialComplex) -> MilnorPolynomial:
    gens = k.minimal_nonfaces
    if not gens:
        raise PolynomialError("a full simplex has no minimal non-faces, so Phi_K is zero")
    if any(card(g) < 2 for g in gens):
        raise PolynomialError("a singleton non-face makes Phi_K nonsingular in that pair of variables")
    d = 1 + max(card(g) for g in gens)
    verts = k.vertex_list()
    return MilnorPolynomial(
        m=k.m,
        generators=tuple(gens),
        y_weights=tuple(d - card(g) for g in gens),
        degree=d,
        vertex_labels=tuple(k.label(v) for v in verts),
        vertex_index=tuple(verts),
    )


# -- singular locus --------------------------------------------------------------


def stratum_rank(generators, face: int) -> int:
    """Rank of the x-gradient system on the stratum supp(x) = face.

    A generator contributes a nonzero derivative in direction j exactly when
    it misses the face in the single vertex j; each y variable appears in one
    equation at most, so the rank is the number of such j.
    """
    hit = 0
    for g in generators:
        rest = g & ~face
        if rest and rest & (rest - 1) == 0:
            hit |= rest
    return card(hit)


@dataclass
class SingularLocusReport:
    s: int
    witness_stratum: int
    rank_hypothesis_holds: bool
    rank_formula_value: int  # m + r - 2 nu, the value the rank hypothesis predicts
    km_bound: int
    true_connectivity: float | None = None
    witness_label: str = ""

    def to_document(self) -> dict:
        conn = self.true_connectivity
        return {
            "s": self.s,
            "witness_stratum": self.witness_label,
            "rank_hypothesis_holds": self.rank_hypothesis_holds,
            "rank_formula_value": self.rank_formula_value,
            "km_bound": self.km_bound,
            "true_connectivity": None if conn is None or conn == INFINITY else conn,
        }


def sing_dim(phi: MilnorPolynomial, k: SimplicialComplex, true_connectivity: float | None = None) -> SingularLocusReport:
    """Dimension of Sing V(Phi_K) by stratifying on the support of x.

    On the stratum supp(x) = S the y-gradient vanishes iff S is a face, and
    the x-gradient is a linear system in y of rank ``stratum_rank``; the
    stratum contributes |S| + r - rank(S).
    """
    if tuple(phi.generators) != tuple(k.minimal_nonfaces):
        raise ValueError("polynomial was not built from this complex")
    r = phi.r
    best, witness = -1, 0
    top_size, top_ranks = -1, set()
    for face in k.faces():
        rk = stratum_rank(phi.generators, face)
        dim = card(face) + r - rk
        # ties go to the largest stratum, then the lexicographically first
        if dim > best or (dim == best and (-card(face), lex_key(face)) < (-card(witness), lex_key(witness))):
            best, witness = dim, face
        size = card(face)
        if size > top_size:
            top_size, top_ranks = size, {rk}
        elif size == top_size:
            top_ranks.add(rk)
    nu = int(k.nu())
    return SingularLocusReport(
        s=best,
        witness_stratum=witness,
        rank_hypothesis_holds=top_ranks == {nu},
        rank_formula_value=phi.m + r - 2 * nu,
        km_bound=phi.N - best - 2,
        true_connectivity=true_connectivity,
        witness_label=k.format_set(witness),
    )


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [list(r) for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], p - 2, p)
        prow = [x * inv % p for x in rows[rank]]
        rows[rank] = prow
        for i in range(len(rows)):
            if i != rank and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], prow)]
        rank += 1
    return rank


def rank_oracle(
    phi: MilnorPolynomial, k: SimplicialComplex, face: int, trials: int = 8,
    prime: int = DEFAULT_PRIME, seed: int | None = 0,
) -> int:
    """Generic rank of (d f_i / d x_j) at random points supported on ``face``.

    Evaluated over GF(prime) with fresh nonzero coordinates per trial; the
    maximum over trials is returned since bad luck can only lower the rank.
    """
    if not k.is_face(face):
        raise ValueError("stratum must be a face")
    rng = random.Random(seed)
    verts = k.vertex_list()
    best = 0
    for _ in range(trials):
        x = {v: (rng.randrange(1, prime) if face >> v & 1 else 0) for v in verts}
        rows = []
        for g in phi.generators:
            row = []
            for j in verts:
                if not g >> j & 1:
                    row.append(0)
                    continue
                val = 1
                for v in members(g & ~(1 << j)):
                    val = val * x[v] % prime
                row.append(val)
            rows.append(row)
        best = max(best, _rank_mod_p(rows, prime))
    return best


# -- external scripts --------------------------------------------------------------


def _indexed_terms(phi: MilnorPolynomial, xname, yname) -> str:
    pos = {v: i + 1 for i, v in enumerate(phi.vertex_index)}
    return " + ".join(
        "*".join([yname(i)] + [xname(pos[v]) for v in vs]) for i, vs in phi.terms())


def _label_comment(phi: MilnorPolynomial, prefix: str) -> list[str]:
    pairs = ", ".join(f"{i + 1}={lab}" for i, lab in enumerate(phi.vertex_labels))
    return [f"{prefix} x indices to vertex labels: {pairs}"]


def export_m2(phi: MilnorPolynomial) -> str:
    xs = ", ".join(f"x_{i + 1}" for i in range(phi.m))
    ys = ", ".join(f"y_{i + 1}" for i in range(phi.r))
    degs = ", ".join(["1"] * phi.m + [str(w) for w in phi.y_weights])
    poly = _indexed_terms(phi, lambda i: f"x_{i}", lambda i: f"y_{i}")
    gens = ", ".join("*".join(f"x_{i}" for i in _positions(phi, g)) for g in phi.generators)
    lines = [
        f"-- Phi_K: m = {phi.m}, r = {phi.r}, N = {phi.N}, weighted degree {phi.degree}",
        *_label_comment(phi, "--"),
        f"R = QQ[{xs}, {ys}, Degrees => {{{degs}}}];",
        f"Phi = {poly};",
        "Jsing = ideal(Phi) + ideal jacobian ideal(Phi);",
        'print("dim Sing = " | toString dim Jsing);',
        f"S = QQ[{xs}];",
        f"I = monomialIdeal({gens});",
        "print betti res I;",
        "",
    ]
    return "\n".join(lines)


def export_singular(phi: MilnorPolynomial) -> str:
    poly = _indexed_terms(phi, lambda i: f"x({i})", lambda i: f"y({i})")
    gens = ", ".join("*".join(f"x({i})" for i in _positions(phi, g)) for g in phi.generators)
    lines = [
        f"// Phi_K: m = {phi.m}, r = {phi.r}, N = {phi.N}, weighted degree {phi.degree}",
        *_label_comment(phi, "//"),
        f"ring R = 0, (x(1..{phi.m}), y(1..{phi.r})), dp;",
        f"poly Phi = {poly};",
        "ideal Jsing = Phi, jacob(Phi);",
        "Jsing = std(Jsing);",
        'print("dim Sing = " + string(dim(Jsing)));',
        f"ring S = 0, (x(1..{phi.m})), dp;",
        f"ideal I = {gens};",
        "resolution F = mres(I, 0);",
        'print(betti(F), "betti");',
        "",
    ]
    return "\n".join(lines)


def _positions(phi: MilnorPolynomial, g: int) -> list[int]:
    pos = {v: i + 1 for i, v in enumerate(phi.vertex_index)}
    return [pos[v] for v in members(g)]
