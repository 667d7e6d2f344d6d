"""Finite free cochain complexes over Q[hbar] and their homology.

Homology is read off from Smith normal forms computed over the principal
ideal domain Q[hbar].  Matrices are lists of rows of ``Scalar``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .scalars import Scalar


class NotAComplex(ValueError):
    pass


def _mat(rows: Sequence[Sequence], nrows: int, ncols: int) -> list[list[Scalar]]:
    out = [[Scalar.coerce(x) for x in row] for row in rows]
    if len(out) != nrows or any(len(r) != ncols for r in out):
        raise ValueError(f"matrix shape mismatch, expected {nrows}x{ncols}")
    return out


def matmul(a: list, b: list) -> list:
    if not a or not b:
        ncols = len(b[0]) if b else 0
        return [[Scalar() for _ in range(ncols)] for _ in range(len(a))]
    n, m, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for k in range(p):
            acc = Scalar()
            for j in range(m):
                if a[i][j] and b[j][k]:
                    acc = acc + a[i][j] * b[j][k]
            row.append(acc)
        out.append(row)
    return out


@dataclass
class FreeComplex:
    """Cochain complex with free modules of the given ranks starting at ``start``.

    ``diffs[k]`` is the matrix of d: C^{start+k} -> C^{start+k+1}, of shape
    (ranks[k+1], ranks[k]).
    """

    ranks: list[int]
    diffs: list
    start: int = 0
    labels: Optional[list] = None

    def __post_init__(self):
        if len(self.diffs) != max(len(self.ranks) - 1, 0):
            raise ValueError("need one differential between each pair of consecutive degrees")
        self.diffs = [_mat(d, self.ranks[k + 1], self.ranks[k]) for k, d in enumerate(self.diffs)]
        for k in range(len(self.diffs) - 1):
            comp = matmul(self.diffs[k + 1], self.diffs[k])
            for row in comp:
                if any(row):
                    raise NotAComplex(f"d∘d != 0 at degree {self.start + k}")

    def degrees(self) -> range:
        return range(self.start, self.start + len(self.ranks))


def smith_normal_form(mat: list) -> list[Scalar]:
    """Monic invariant factors (nonzero diagonal entries) of a matrix over Q[hbar]."""
    a = [[Scalar.coerce(x) for x in row] for row in mat]
    if not a or not a[0]:
        return []
    nr, nc = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(nr, nc):
        # pivot: nonzero entry of least degree in the remaining block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or a[i][j].degree < a[best[0]][best[1]].degree):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    q, r = a[i][t].divmod(piv)
                    for j in range(t, nc):
                        a[i][j] = a[i][j] - q * a[t][j]
                    if r:
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j]:
                    q, r = a[t][j].divmod(piv)
                    for i in range(t, nr):
                        a[i][j] = a[i][j] - q * a[i][t]
                    if r:
                        dirty = True
            if not dirty:
                # divisibility of the rest of the block by the pivot
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if a[i][j] and a[i][j].divmod(piv)[1]:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                for j in range(t, nc):
                    a[t][j] = a[t][j] + a[bad][j]
                continue
            # move a smaller remainder into the pivot position
            best = None
            for i in range(t, nr):
                if a[i][t] and (best is None or a[i][t].degree < best[2].degree):
                    best = (i, t, a[i][t])
            for j in range(t, nc):
                if a[t][j] and (best is None or a[t][j].degree < best[2].degree):
                    best = (t, j, a[t][j])
            i, j, _ = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(a[t][t].monic())
        t += 1
    return diag


@dataclass
class HomologyGroup:
    degree: int
    free_rank: int
    torsion: list = field(default_factory=list)

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def to_json(self) -> dict:
        return {"degree": self.degree, "free_rank": self.free_rank,
                "torsion": [t.to_json() for t in self.torsion]}

    def describe(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Q[hbar]" if self.free_rank == 1 else f"Q[hbar]^{self.free_rank}")
        for t in self.torsion:
            parts.append(f"Q[hbar]/({t})")
        return " + ".join(parts) if parts else "0"


def homology(c: FreeComplex) -> list[HomologyGroup]:
    """Per-degree free rank and torsion invariant factors."""
    factors = [smith_normal_form(d) for d in c.diffs]
    out = []
    for k, rank in enumerate(c.ranks):
        out_rank = len(factors[k]) if k < len(factors) else 0
        in_factors = factors[k - 1] if k >= 1 else []
        free = rank - out_rank - len(in_factors)
        torsion = [f for f in in_factors if not f.is_unit()]
        out.append(HomologyGroup(c.start + k, free, torsion))
    return out


def specialize(c: FreeComplex, value) -> list:
    """Differentials evaluated at hbar = value, as rational matrices."""
    return [[[x.evaluate(value) for x in row] for row in d] for d in c.diffs]
