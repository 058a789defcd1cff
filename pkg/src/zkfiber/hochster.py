"""Integral cohomology of moment-angle complexes via Hochster's decomposition.

H^n(Z_K; Z) is the direct sum over vertex subsets J of the reduced simplicial
cohomology H~^p(K_J; Z) with n = p + |J| + 1.  Each summand is computed from
a Smith normal form of the integer coboundary matrices of the full
subcomplex K_J; only the cochain degrees a requested window needs are built.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .complex import (
    INFINITY,
    SimplicialComplex,
    canonical_key,
    card,
    full_subcomplex,
    members,
    vset,
)
from .linalg import elementary_divisors

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HochsterSummand:
    J: int
    p: int
    rank: int
    torsion: tuple[int, ...] = ()

    @property
    def total_degree(self) -> int:
        return self.p + card(self.J) + 1


@dataclass
class CohomologySummary:
    m: int
    summands: list[HochsterSummand]
    betti: dict[int, int]
    torsion: dict[int, list[int]]
    degrees: tuple[int, int]  # inclusive window that was computed
    connectivity: float = field(default=INFINITY)

    def poincare(self) -> list[int]:
        """Coefficient list of the Poincaré polynomial (index = degree)."""
        top = max((d for d, b in self.betti.items() if b), default=0)
        return [self.betti.get(d, 0) for d in range(top + 1)]

    def poincare_str(self) -> str:
        return format_poly(self.poincare())

    def group(self, degree: int) -> str:
        return format_group(self.betti.get(degree, 0), self.torsion.get(degree, []))

    def to_document(self) -> dict:
        lo, hi = self.degrees
        return {
            "window": [lo, hi],
            "groups": [
                {"degree": d, "rank": self.betti.get(d, 0), "torsion": self.torsion.get(d, [])}
                for d in range(lo, hi + 1)
                if self.betti.get(d, 0) or self.torsion.get(d)
            ],
            "poincare": self.poincare(),
            "connectivity": None if self.connectivity == INFINITY else self.connectivity,
        }


def format_poly(coeffs: list[int], var: str = "t") -> str:
    terms = []
    for d, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if d == 0 else (var if d == 1 else f"{var}^{d}")
        if d == 0:
            terms.append(str(c))
        else:
            terms.append((str(c) if c != 1 else "") + mono)
    return "+".join(terms) if terms else "0"


def format_group(rank: int, torsion: Iterable[int] = ()) -> str:
    parts = []
    if rank:
        parts.append("Z" if rank == 1 else f"Z^{rank}")
    parts += [f"Z/{t}" for t in torsion]
    return " + ".join(parts) if parts else "0"


# -- reduced simplicial cohomology -------------------------------------------


def _coboundary_rows(src: list[int], tgt: list[int]) -> list[dict[int, int]]:
    """Rows of δ: C(src) -> C(tgt) indexed by target faces (sizes k -> k+1).

    (δφ)(τ) = Σ_i (-1)^i φ(τ minus its i-th vertex), ascending vertex order.
    """
    index = {f: i for i, f in enumerate(src)}
    rows = []
    for t in tgt:
        row = {}
        for pos, v in enumerate(members(t)):
            face = t & ~(1 << v)
            j = index.get(face)
            if j is not None:
                row[j] = -1 if pos & 1 else 1
        rows.append(row)
    return rows


def reduced_cohomology(
    k: SimplicialComplex, degrees: Iterable[int] | None = None,
) -> list[tuple[int, int, tuple[int, ...]]]:
    """(p, rank, torsion) for the nonzero groups H~^p(K; Z).

    The empty complex (only the empty face) has H~^{-1} = Z.  ``degrees``
    restricts the computation; by default every p from -1 to dim K.
    """
    wanted = sorted(set(range(-1, k.dim + 1) if degrees is None else degrees))
    if not wanted:
        return []
    hi = max(wanted)
    by = k.faces_by_size(max_size=hi + 2)
    cochains = lambda p: by.get(p + 1, [])  # noqa: E731

    divisors: dict[int, list[int]] = {}

    def divs(p: int) -> list[int]:  # elementary divisors of δ_p: C^p -> C^{p+1}
        if p not in divisors:
            src, tgt = cochains(p), cochains(p + 1)
            divisors[p] = elementary_divisors(_coboundary_rows(src, tgt), len(src)) if src and tgt else []
        return divisors[p]

    out = []
    for p in wanted:
        n = len(cochains(p))
        if p < -1 or n == 0:
            continue
        rank = n - len(divs(p)) - (len(divs(p - 1)) if p > -1 else 0)
        torsion = tuple(sorted(d for d in (divs(p - 1) if p > -1 else []) if d > 1))
        if rank or torsion:
            out.append((p, rank, torsion))
    return out


# -- Hochster sweep ----------------------------------------------------------


def _summands_for(k: SimplicialComplex, j: int, ps: list[int], memo: dict) -> list[HochsterSummand]:
    sub = full_subcomplex(k, j)
    key = (canonical_key(sub), tuple(ps))
    if key not in memo:
        memo[key] = reduced_cohomology(sub, ps)
    return [HochsterSummand(j, p, r, t) for p, r, t in memo[key]]


def _useful_degrees(k: SimplicialComplex, j: int, lo: int, hi: int, nu: float) -> list[int]:
    """Reduced degrees p of K_J that can be nonzero and land in [lo, hi].

    K_J contains every subset of size < nu, so H~^p vanishes for p <= nu - 3;
    a nonempty J that is a face gives a simplex; p must not exceed |J| - 2
    once J itself is a non-face.
    """
    size = card(j)
    if size == 0:
        return [-1] if lo <= 0 <= hi else []
    if k.is_face(j):
        return []
    p_lo = max(lo - size - 1, 0, int(nu) - 2 if nu != INFINITY else 0)
    p_hi = min(hi - size - 1, size - 2, k.dim)
    return list(range(p_lo, p_hi + 1))


def _sweep_chunk(args) -> list[HochsterSummand]:
    k, subsets, lo, hi = args
    nu = k.nu()
    memo: dict = {}
    out = []
    for j in subsets:
        ps = _useful_degrees(k, j, lo, hi, nu)
        if ps:
            out.extend(_summands_for(k, j, ps, memo))
    return out


def candidate_sizes(k: SimplicialComplex, lo: int, hi: int) -> list[int]:
    """Subset sizes |J| that can contribute to total degrees in [lo, hi]."""
    nu = k.nu()
    sizes = []
    for s in range(0, k.m + 1):
        if s == 0:
            if lo <= 0 <= hi:
                sizes.append(0)
            continue
        p_lo = max(lo - s - 1, 0, int(nu) - 2 if nu != INFINITY else 0)
        p_hi = min(hi - s - 1, s - 2, k.dim)
        if p_lo <= p_hi:
            sizes.append(s)
    return sizes


def iter_subsets(k: SimplicialComplex, sizes: Iterable[int]):
    verts = k.vertex_list()
    for s in sizes:
        for combo in combinations(verts, s):
            yield vset(combo)


def hochster_summary(
    k: SimplicialComplex, degrees: tuple[int, int] | range | None = None, workers: int = 1,
) -> CohomologySummary:
    """H^*(Z_K; Z) in the total-degree window ``degrees`` (inclusive pair or range).

    Without a window every degree 0 .. m + dim K + 1 is computed.
    """
    top = k.m + k.dim + 1
    if degrees is None:
        lo, hi = 0, top
    elif isinstance(degrees, range):
        lo, hi = degrees.start, degrees.stop - 1
    else:
        lo, hi = degrees
    subsets = list(iter_subsets(k, candidate_sizes(k, lo, hi)))
    log.debug("hochster sweep: %d subsets for degrees %d..%d", len(subsets), lo, hi)
    if workers > 1 and len(subsets) > 256:
        chunks = [subsets[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_sweep_chunk, [(k, c, lo, hi) for c in chunks]))
        summands = [s for part in parts for s in part]
    else:
        summands = _sweep_chunk((k, subsets, lo, hi))
    summands = [s for s in summands if lo <= s.total_degree <= hi]
    summands.sort(key=lambda s: (s.total_degree, card(s.J), s.J))
    betti: dict[int, int] = {}
    torsion: dict[int, list[int]] = {}
    for s in summands:
        if s.rank:
            betti[s.total_degree] = betti.get(s.total_degree, 0) + s.rank
        if s.torsion:
            torsion.setdefault(s.total_degree, []).extend(s.torsion)
    for t in torsion.values():
        t.sort()
    summary = CohomologySummary(k.m, summands, betti, torsion, (lo, hi))
    summary.connectivity = _connectivity(summary)
    if lo <= 1:
        _check_connectivity_bounds(k, summary)
    return summary


def _connectivity(summary: CohomologySummary) -> float:
    """Largest c with H^i = 0 for 1 <= i <= c and H^{c+1} torsion-free.

    Z_K is simply connected, so by Hurewicz and universal coefficients this
    is its homotopy connectivity.  Only meaningful if the window starts at or
    below 1; reported up to the top of the window.
    """
    lo, hi = summary.degrees
    if lo > 1:
        return INFINITY
    for i in range(1, hi + 1):
        if summary.torsion.get(i):
            return i - 2
        if summary.betti.get(i, 0):
            return i - 1
    return INFINITY


def cohomological_connectivity(k: SimplicialComplex, workers: int = 1) -> float:
    """Connectivity of Z_K, sweeping windows upward from the guaranteed bound."""
    top = k.m + k.dim + 1
    hi = min(top, int(connectivity_lower_bound(k)) + 2) if k.minimal_nonfaces else top
    while True:
        summary = hochster_summary(k, (0, hi), workers)
        if summary.connectivity != INFINITY or hi >= top:
            return summary.connectivity
        hi = min(top, hi + 2)


def connectivity_lower_bound(k: SimplicialComplex) -> float:
    """Guaranteed connectivity: max(2, 2 nu(K) - 3)."""
    nu = k.nu()
    if nu == INFINITY:
        return INFINITY
    return max(2, 2 * int(nu) - 3)


def _check_connectivity_bounds(k: SimplicialComplex, summary: CohomologySummary) -> None:
    bound = connectivity_lower_bound(k)
    hi = summary.degrees[1]
    if summary.connectivity < min(bound, hi):
        raise AssertionError(
            f"connectivity {summary.connectivity} below the guaranteed {bound}: inconsistent computation")


# -- family rows ---------------------------------------------------------------


@dataclass
class FamilyCohomologyRow:
    q: int
    h_2q: str
    h_2q1: str
    h_top: str
    betti_2q: int
    betti_2q1: int
    torsion_2q1: list[int]
    betti_top: int
    torsion_top: list[int]
    connectivity: int  # guaranteed by the non-face bound, the column the table reports
    cohomological_connectivity: int
    two_case_argument_holds: bool
    first_class_degree: float = INFINITY  # lowest degree >= 1 with a rational class


def two_case_vanishing(k: SimplicialComplex, blocks: list[int], q: int) -> bool:
    """Check the combinatorial reason for H^{2q}(Z_K) = 0 on every small J.

    For 1 <= |J| <= 2q-1 either J sits inside one factor block, so K_J is a
    simplex or the whole boundary sphere S^{q-1} (whose class lands in degree
    2q+1, not 2q); or J contains no minimal non-face of size 2q and some
    nonempty block part of J is a face, so K_J is a join with a contractible
    factor.
    """
    big = [n for n in k.minimal_nonfaces if card(n) == 2 * q]
    for j in iter_subsets(k, range(1, 2 * q)):
        parts = [j & b for b in blocks if j & b]
        if len(parts) == 1:
            if not (k.is_face(j) or j in blocks):
                return False
            continue
        if any(n & j == n for n in big):
            return False
        if not any(k.is_face(part) for part in parts):
            return False
    return True


def family_cohomology_row(k: SimplicialComplex, q: int, blocks: list[int], workers: int = 1) -> FamilyCohomologyRow:
    """Degrees 2q, 2q+1 and 6q+2 of Z_K for the n = 3 family, via filtered sweeps."""
    if q > 5:
        log.warning("q = %d is beyond the tabulated range; the sweep may take a long time", q)
    low = hochster_summary(k, (0, 2 * q + 1), workers)
    top = 6 * q + 2
    high = hochster_summary(k, (top, top), workers)
    return FamilyCohomologyRow(
        q=q,
        h_2q=low.group(2 * q),
        h_2q1=low.group(2 * q + 1),
        h_top=high.group(top),
        betti_2q=low.betti.get(2 * q, 0),
        betti_2q1=low.betti.get(2 * q + 1, 0),
        torsion_2q1=low.torsion.get(2 * q + 1, []),
        betti_top=high.betti.get(top, 0),
        torsion_top=high.torsion.get(top, []),
        connectivity=int(connectivity_lower_bound(k)),
        cohomological_connectivity=int(low.connectivity),
        two_case_argument_holds=two_case_vanishing(k, blocks, q),
        first_class_degree=next((i for i in range(1, 2 * q + 2) if low.betti.get(i, 0)), INFINITY),
    )
