"""Acceptance checks; each test records one PASS/FAIL line for the summary."""

from __future__ import annotations

import random
import time
from itertools import product

from zkfiber.complex import (
    SimplicialComplex,
    card,
    cycle,
    edge_contract,
    edge_stretch,
    full_subcomplex,
    join,
    link_condition,
    maximal_sets,
    members,
    vset,
)
from zkfiber.construct import FamilySpec, family_complex, fdb_complex
from zkfiber.hochster import family_cohomology_row, hochster_summary, reduced_cohomology
from zkfiber.koszul import KoszulModel, cup, d, formality_bounds, shifted, triple_massey
from zkfiber.milnor import build_phi, rank_oracle, sing_dim, stratum_rank
from zkfiber.report import _matches_listing

from conftest import ACCEPTANCE_LINES

TABLE = {
    2: dict(m=9, r=7, N=16, nu=3, top="Z^3", conn=3, s=10, km=4),
    3: dict(m=12, r=9, N=21, nu=4, top="Z^5", conn=5, s=15, km=4),
    4: dict(m=15, r=11, N=26, nu=5, top="Z^7", conn=7, s=20, km=4),
    5: dict(m=18, r=13, N=31, nu=6, top="Z^9", conn=9, s=29, km=0),
}


def record(number: int, title: str, failures: list[str], seconds: float) -> None:
    verdict = "PASS" if not failures else "FAIL"
    line = f"criterion {number} [{verdict}] {title} ({seconds:.2f}s)"
    if failures:
        line += ": " + "; ".join(failures)
    ACCEPTANCE_LINES.append(line)
    print(line)


def expect(failures: list[str], label: str, got, want) -> None:
    if got != want:
        failures.append(f"{label}: got {got!r}, expected {want!r}")


def test_criterion_1_path_complex():
    t0 = time.perf_counter()
    fails: list[str] = []
    k = fdb_complex()
    expect(fails, "non-faces", [[k.label(v) for v in members(n)] for n in k.minimal_nonfaces],
           [["1", "2"], ["2", "3"], ["3", "4"], ["4", "5"], ["5", "6"]])
    phi = build_phi(k)
    expect(fails, "homogeneous", phi.homogeneous, True)
    expect(fails, "degree", phi.degree, 3)
    expect(fails, "N", phi.N, 11)
    summary = hochster_summary(k)
    expect(fails, "Poincare", summary.poincare_str(), "1+5t^3+4t^4+3t^6+4t^7+t^8")
    sing = sing_dim(phi, k, summary.connectivity)
    expect(fails, "s", sing.s, 5)
    expect(fails, "KM bound", sing.km_bound, 4)
    expect(fails, "true connectivity", summary.connectivity, 2)
    model = KoszulModel(k)
    classes = [model.classes(vset(p), 3)[0] for p in ((0, 1), (2, 3), (4, 5))]
    rep = triple_massey(k, *classes, model=model)
    expect(fails, "Massey nontrivial", rep.nontrivial, True)
    expect(fails, "Massey degree", rep.target_degree, 8)
    expect(fails, "indeterminacy", rep.indeterminacy_dim, 0)
    elapsed = time.perf_counter() - t0
    if elapsed >= 5:
        fails.append(f"runtime {elapsed:.1f}s exceeds 5s")
    record(1, "path complex on six vertices", fails, elapsed)
    assert not fails


def test_criterion_2_q2_family_complex():
    t0 = time.perf_counter()
    fails: list[str] = []
    spec = FamilySpec(2)
    k = family_complex(spec)
    listed = [list(w) for w in ("abc", "def", "ghi", "abdf", "bcdf", "degi", "efgi")]
    expect(fails, "ideal up to relabeling", _matches_listing(k, listed), True)
    phi = build_phi(k)
    expect(fails, "weights", phi.weights_summary(), {2: [1, 2, 3], 1: [4, 5, 6, 7]})
    expect(fails, "degree", phi.degree, 5)
    expect(fails, "N", phi.N, 16)
    summary = hochster_summary(k)
    expect(fails, "Poincare", summary.poincare_str(), "1+3t^5+4t^7+8t^8+2t^9+t^10+4t^12+8t^13+3t^14")
    expect(fails, "H4", summary.group(4), "0")
    expect(fails, "H5", summary.group(5), "Z^3")
    sing = sing_dim(phi, k, summary.connectivity)
    expect(fails, "s", sing.s, 10)
    expect(fails, "rank-formula value", sing.rank_formula_value, 10)
    expect(fails, "rank hypothesis", sing.rank_hypothesis_holds, True)
    model = KoszulModel(k)
    rep = triple_massey(k, *(model.classes(b, 5)[0] for b in spec.blocks()), model=model)
    expect(fails, "Massey nontrivial", rep.nontrivial, True)
    expect(fails, "Massey degree", rep.target_degree, 14)
    expect(fails, "formality", formality_bounds(k, [rep]), (4, 4))
    elapsed = time.perf_counter() - t0
    if elapsed >= 60:
        fails.append(f"runtime {elapsed:.1f}s exceeds 60s")
    record(2, "q = 2 family complex", fails, elapsed)
    assert not fails


def test_criterion_3_family_table():
    t0 = time.perf_counter()
    fails: list[str] = []
    for q, row in TABLE.items():
        spec = FamilySpec(q)
        k = family_complex(spec)
        phi = build_phi(k)
        coh = family_cohomology_row(k, q, spec.blocks())
        sing = sing_dim(phi, k)
        got = dict(m=k.m, r=len(k.minimal_nonfaces), N=phi.N, nu=int(k.nu()), top=coh.h_top,
                   conn=coh.connectivity, s=sing.s, km=sing.km_bound)
        for key, want in row.items():
            expect(fails, f"q={q} {key}", got[key], want)
        expect(fails, f"q={q} H^2q", coh.h_2q, "0")
        expect(fails, f"q={q} H^2q+1", coh.h_2q1, "Z^3")
    elapsed = time.perf_counter() - t0
    if elapsed >= 1800:
        fails.append(f"runtime {elapsed:.1f}s exceeds 30 min")
    record(3, "family table q = 2..5", fails, elapsed)
    assert not fails


def random_complex(rng: random.Random, m: int, offset: int = 0) -> SimplicialComplex:
    raw = [vset(offset + v for v in range(m) if rng.random() < 0.5) for _ in range(rng.randint(0, 5))]
    singles = [1 << (offset + v) for v in range(m)]
    return SimplicialComplex.from_facets(maximal_sets([r for r in raw if r] + singles),
                                         vset(range(offset, offset + m)))


def poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def test_criterion_4_property_suite():
    t0 = time.perf_counter()
    fails: list[str] = []
    rng = random.Random(2024)

    for trial in range(50):
        k1 = random_complex(rng, rng.randint(1, 6))
        k2 = random_complex(rng, rng.randint(1, 6), offset=6)
        p = hochster_summary(join(k1, k2)).poincare()
        if p != poly_mul(hochster_summary(k1).poincare(), hochster_summary(k2).poincare()):
            fails.append(f"join multiplicativity, pair {trial}")

    for trial in range(60):
        k = random_complex(rng, rng.randint(2, 6))
        model = KoszulModel(k)
        verts = k.vertex_list()
        J1 = vset(v for v in verts if rng.random() < 0.5)
        J2 = vset(v for v in verts if not J1 >> v & 1 and rng.random() < 0.6)
        a = model.random_cochain(J1, card(J1) + rng.randint(0, card(J1)), rng)
        b = model.random_cochain(J2, card(J2) + rng.randint(0, card(J2)), rng)
        if not d(k, d(k, a)).is_zero():
            fails.append(f"d∘d on cochain {trial}")
        lhs = d(k, cup(k, a, b))
        rhs = cup(k, d(k, a), b) + cup(k, a, d(k, b)).scaled(-1 if a.degree & 1 else 1)
        if not (lhs - rhs).is_zero():
            fails.append(f"Leibniz on pair {trial}")

    k = family_complex(FamilySpec(2))
    model = KoszulModel(k)
    for J in range(1 << k.m):
        if card(J) > 9:
            continue
        ranks = {p: r for p, r, _ in (reduced_cohomology(full_subcomplex(k, J)) if J else [(-1, 1, ())])}
        for deg in range(card(J), 3 * card(J) + 1):
            if model.component(J, deg).rank != ranks.get(deg - card(J) - 1, 0):
                fails.append(f"model vs Hochster at J={k.format_set(J)}, degree {deg}")

    for kk, picks in [
        (fdb_complex(), [(vset(p), 3) for p in ((0, 1), (2, 3), (4, 5))]),
        (k, [(b, 5) for b in FamilySpec(2).blocks()]),
    ]:
        m = KoszulModel(kk)
        classes = [m.classes(J, n)[0] for J, n in picks]
        base = triple_massey(kk, *classes, model=m).nontrivial
        for _ in range(20):
            if triple_massey(kk, *(shifted(m, c, rng) for c in classes), model=m).nontrivial != base:
                fails.append("Massey verdict changed under a representative shift")

    instances = [fdb_complex(), cycle(5), family_complex(FamilySpec(2)), family_complex(FamilySpec(3))]
    instances += [random_complex(rng, rng.randint(2, 12)) for _ in range(20)]
    faces_checked = 0
    for inst in instances:
        if not inst.minimal_nonfaces:
            continue
        phi = build_phi(inst)
        for face in inst.faces():
            faces_checked += 1
            if rank_oracle(phi, inst, face, seed=face) != stratum_rank(phi.generators, face):
                fails.append(f"oracle rank differs at {inst.format_set(face)}")
    elapsed = time.perf_counter() - t0
    record(4, f"property suite ({faces_checked} faces against the oracle)", fails, elapsed)
    assert not fails


def test_criterion_5_cycles_negative_control():
    t0 = time.perf_counter()
    fails: list[str] = []
    counts = []
    for n in (4, 5):
        k = cycle(n)
        model = KoszulModel(k)
        pool = []
        for s in hochster_summary(k, (3, 3)).summands:
            pool += model.classes(s.J, 3)
        defined = 0
        for triple in product(pool, repeat=3):
            rep = triple_massey(k, *triple, model=model)
            if rep.defined:
                defined += 1
                if not rep.contains_zero:
                    fails.append(f"C{n}: nontrivial product found")
        counts.append(f"C{n}: {defined} defined")
    elapsed = time.perf_counter() - t0
    record(5, "4- and 5-cycles carry no triple Massey obstruction (" + ", ".join(counts) + ")", fails, elapsed)
    assert not fails


def test_criterion_6_edge_surgery():
    t0 = time.perf_counter()
    fails: list[str] = []
    labels = {v: str(v) for v in range(1, 6)}
    c5 = SimplicialComplex.from_facets([{1, 5}, {5, 2}, {2, 3}, {3, 4}, {4, 1}], labels=labels)
    lk1 = c5.link(1 << 1).vertices & ~(1 << 5)
    lk5 = c5.link(1 << 5).vertices & ~(1 << 1)
    expect(fails, "links", (c5.format_set(lk1), c5.format_set(lk5)), ("{4}", "{2}"))
    expect(fails, "link of the edge", c5.link(vset([1, 5])).vertices, 0)
    c4, held = edge_contract(c5, 1, 5)
    expect(fails, "link condition", held, True)
    expect(fails, "contraction", sorted(map(members, c4.facets)), [[1, 2], [1, 4], [2, 3], [3, 4]])

    spec = FamilySpec(2)
    k = family_complex(spec)
    a, b, c, new = 0, 1, 2, 9
    lk = k.link(1 << a).vertices
    stretched = edge_stretch(k, a, lk & ~(1 << c), lk & ~(1 << b), new_vertex=new)
    expect(fails, "stretched edge satisfies link condition", link_condition(stretched, a, new), True)
    expect(fails, "contracts back", edge_contract(stretched, a, new)[0] == k, True)
    model = KoszulModel(stretched)
    J1 = vset([a, new, b, c])  # now a 4-cycle carrying a degree-6 class
    blocks = spec.blocks()
    picks = [model.classes(J1, 6), model.classes(blocks[1], 5), model.classes(blocks[2], 5)]
    if not all(picks):
        fails.append("expected classes missing after stretching")
    else:
        rep = triple_massey(stretched, *(p[0] for p in picks), model=model)
        expect(fails, "stretched Massey nontrivial", rep.nontrivial, True)
    elapsed = time.perf_counter() - t0
    record(6, "edge contraction and stretching keep the obstruction", fails, elapsed)
    assert not fails


if __name__ == "__main__":
    import pytest

    raise SystemExit(pytest.main([__file__, "-q"]))
