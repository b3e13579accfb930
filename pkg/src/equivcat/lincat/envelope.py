"""Additive envelope: formal direct sums of base objects."""
from __future__ import annotations

from bisect import bisect_right
from typing import Sequence

from . import linalg
from .category import DirectSum, LinearCategory, Mor


class AdditiveEnvelope(LinearCategory):
    """Objects are tuples of base objects; ``()`` is the zero object.

    Coordinates of a morphism (X_1..X_m) -> (Y_1..Y_n) are the
    concatenation of the blocks Hom(X_i, Y_j), ordered by target index j
    first and source index i second.
    """

    def __init__(self, base: LinearCategory, objects: Sequence[tuple] | None = None, name: str | None = None):
        self.base = base
        self.field = base.field
        self.name = name or f"Add({base.name})"
        if objects is None:
            objects = [(X,) for X in base.objects]
        self.objects = tuple(tuple(o) for o in objects)
        self._offsets = {}

    def __repr__(self):
        return f"AdditiveEnvelope({self.base!r})"

    def zero_object(self) -> tuple:
        return ()

    def embed(self, X) -> tuple:
        return (X,)

    def embed_mor(self, f: Mor) -> Mor:
        return Mor((f.source,), (f.target,), f.coords)

    def offsets(self, X: tuple, Y: tuple) -> dict:
        key = (X, Y)
        off = self._offsets.get(key)
        if off is None:
            off, pos = {}, 0
            for j, Yj in enumerate(Y):
                for i, Xi in enumerate(X):
                    d = self.base.hom_dim(Xi, Yj)
                    off[(i, j)] = (pos, d)
                    pos += d
            off["total"] = pos
            self._offsets[key] = off
        return off

    def hom_dim(self, X, Y) -> int:
        return self.offsets(X, Y)["total"]

    def block(self, f: Mor, i: int, j: int) -> Mor:
        """Component Hom(X_i, Y_j) of f as a base morphism."""
        pos, d = self.offsets(f.source, f.target)[(i, j)]
        return Mor(f.source[i], f.target[j], f.coords[pos:pos + d])

    def from_blocks(self, X: tuple, Y: tuple, blocks: dict) -> Mor:
        """Assemble a morphism from ``{(i, j): base morphism}``; missing blocks are zero."""
        off = self.offsets(X, Y)
        coords = [self.field.zero] * off["total"]
        for (i, j), b in blocks.items():
            pos, d = off[(i, j)]
            coords[pos:pos + d] = b.coords
        return Mor(X, Y, tuple(coords))

    def _identity(self, X):
        base = self.base
        blocks = {(i, i): base.identity(Xi) for i, Xi in enumerate(X)}
        return self.from_blocks(X, X, blocks).coords

    def _blocks(self, X, Y, coords) -> list:
        """Nonzero blocks of a morphism as (i, j, block coords)."""
        key = ("items", X, Y)
        items = self._offsets.get(key)
        if items is None:
            off = self.offsets(X, Y)
            its = sorted((pos, d, i, j) for (i, j), (pos, d) in
                         ((k, v) for k, v in off.items() if k != "total") if d)
            items = self._offsets[key] = ([t[0] for t in its], its)
        starts, its = items
        out, last = [], -1
        for k, c in enumerate(coords):
            if c and k >= last:
                pos, d, i, j = its[bisect_right(starts, k) - 1]
                out.append((i, j, coords[pos:pos + d]))
                last = pos + d
        return out

    def _compose(self, X, Y, Z, g, f):
        base, F = self.base, self.field
        by_source = {}
        for j, k, gb in self._blocks(Y, Z, g):
            by_source.setdefault(j, []).append((k, gb))
        acc = {}
        for i, j, fb in self._blocks(X, Y, f):
            for k, gb in by_source.get(j, ()):
                c = base._compose(X[i], Y[j], Z[k], gb, fb)
                prev = acc.get((i, k))
                acc[(i, k)] = c if prev is None else linalg.vadd(F, prev, c)
        offh = self.offsets(X, Z)
        out = [F.zero] * offh["total"]
        for (i, k), c in acc.items():
            pos, d = offh[(i, k)]
            out[pos:pos + d] = c
        return tuple(out)

    def direct_sum(self, objs) -> DirectSum:
        objs = [tuple(o) for o in objs]
        total = tuple(x for o in objs for x in o)
        inj, proj = [], []
        start = 0
        for o in objs:
            blocks_in = {(a, start + a): self.base.identity(x) for a, x in enumerate(o)}
            blocks_out = {(start + a, a): self.base.identity(x) for a, x in enumerate(o)}
            inj.append(self.from_blocks(o, total, blocks_in))
            proj.append(self.from_blocks(total, o, blocks_out))
            start += len(o)
        return DirectSum(total, tuple(objs), tuple(inj), tuple(proj))


def additive_envelope(pres: LinearCategory, objects=None) -> AdditiveEnvelope:
    return AdditiveEnvelope(pres, objects)
