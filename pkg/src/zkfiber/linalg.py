"""Exact sparse linear algebra over Q and Z.

Vectors are ``dict[int, Fraction | int]`` with no zero entries.  Everything
here is exact; unit pivots keep entries integral where possible.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from sympy import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

Vector = dict


def _div(a, b):
    if b == 1:
        return a
    if b == -1:
        return -a
    return Fraction(a) / b


def axpy(y: Vector, a, x: Mapping) -> None:
    """y += a * x, in place."""
    if not a:
        return
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


def scale(x: Mapping, a) -> Vector:
    return {k: a * v for k, v in x.items()} if a else {}


def add(x: Mapping, y: Mapping) -> Vector:
    out = dict(x)
    axpy(out, 1, y)
    return out


class Span:
    """Incrementally built subspace of Q^n with preimage bookkeeping.

    Each generator added carries a hashable tag.  Reducing a vector against the
    span returns the residual and the combination of generator tags that was
    subtracted, so ``v = residual + sum(c[t] * generator[t])``.  Pivots are the
    largest coordinate of each stored vector.
    """

    def __init__(self) -> None:
        self._rows: dict[int, tuple[Vector, Vector]] = {}
        self.kernel: list[Vector] = []  # tag combinations of dependent generators

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: Mapping) -> tuple[Vector, Vector]:
        res = dict(v)
        combo: Vector = {}
        while res:
            p = max(res)
            row = self._rows.get(p)
            if row is None:
                # largest coordinate has no pivot; lower ones might
                lower = [k for k in res if k in self._rows]
                if not lower:
                    break
                p = max(lower)
                row = self._rows[p]
            vec, pre = row
            c = res[p]
            axpy(res, -c, vec)
            axpy(combo, c, pre)
        return res, combo

    def add(self, v: Mapping, tag: Hashable) -> bool:
        """Insert a generator; False (and a kernel relation) if dependent."""
        res, combo = self.reduce(v)
        pre = scale(combo, -1)
        pre[tag] = pre.get(tag, 0) + 1
        if not res:
            self.kernel.append(pre)
            return False
        p = max(res)
        c = res[p]
        if c != 1:
            res = {k: _div(x, c) for k, x in res.items()}
            pre = {k: _div(x, c) for k, x in pre.items()}
        self._rows[p] = (res, pre)
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)[0]

    def solve(self, v: Mapping) -> Vector | None:
        """Tag combination hitting ``v`` exactly, or None if ``v`` is outside."""
        res, combo = self.reduce(v)
        return None if res else combo


def rank(columns: Iterable[Mapping]) -> int:
    s = Span()
    for i, c in enumerate(columns):
        s.add(c, i)
    return s.rank


def nullspace(columns: Sequence[Mapping]) -> list[Vector]:
    """Basis of {x : sum x_i * columns[i] = 0}, as sparse vectors over column indices."""
    s = Span()
    for i, c in enumerate(columns):
        s.add(c, i)
    return s.kernel


# -- integer Smith normal form ----------------------------------------------


def elementary_divisors(rows: Sequence[Mapping[int, int]], ncols: int) -> list[int]:
    """Nonzero elementary divisors of an integer matrix given as sparse rows.

    Unit pivots are eliminated sparsely first, shortest rows first (each
    contributes a divisor 1); whatever is left is handed to a dense Smith
    normal form.
    """
    work = [dict(r) for r in rows]
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(work):
        for c in r:
            cols.setdefault(c, set()).add(i)
    heap = [(len(r), i) for i, r in enumerate(work) if r]
    heapq.heapify(heap)
    done = [False] * len(work)
    ones = 0
    while heap:
        n, pi = heapq.heappop(heap)
        prow = work[pi]
        if done[pi] or not prow:
            continue
        if n != len(prow):
            heapq.heappush(heap, (len(prow), pi))
            continue
        units = [c for c, v in prow.items() if v == 1 or v == -1]
        if not units:
            continue  # re-queued if a later update touches this row
        pc = min(units, key=lambda c: len(cols[c]))
        pv = prow[pc]
        for i in list(cols[pc]):
            if i == pi:
                continue
            r = work[i]
            f = r[pc] * pv  # pv is ±1 so 1/pv == pv
            for c, v in prow.items():
                nv = r.get(c, 0) - f * v
                if nv:
                    if c not in r:
                        cols[c].add(i)
                    r[c] = nv
                elif c in r:
                    del r[c]
                    cols[c].discard(i)
            if r:
                heapq.heappush(heap, (len(r), i))
        for c in prow:
            cols[c].discard(pi)
        done[pi] = True
        work[pi] = {}
        ones += 1
    rest = [r for r in work if r]
    if not rest:
        return [1] * ones
    keys = sorted({c for r in rest for c in r})
    idx = {c: j for j, c in enumerate(keys)}
    dense = [[ZZ(0)] * len(keys) for _ in rest]
    for i, r in enumerate(rest):
        for c, v in r.items():
            dense[i][idx[c]] = ZZ(v)
    factors = invariant_factors(DomainMatrix(dense, (len(rest), len(keys)), ZZ))
    return [1] * ones + [abs(int(f)) for f in factors if f]
