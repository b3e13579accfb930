"""Budgeted searches: isomorphisms, idempotent splittings, enumeration of subspaces.

Over F_p a search whose candidate space fits in the budget is exhaustive,
so "none" is a proof.  Otherwise candidates are sampled with a seeded RNG
and an unsuccessful search ends as "budget" unless a dimension argument
rules the answer out.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from ..errors import BudgetExceeded, PreconditionError
from . import linalg
from .category import LinearCategory, Mor
from .field import Field

DEFAULT_BUDGET = 20000


def affine_points(F: Field, base: Sequence, directions: Sequence[Sequence], budget: int,
                  what: str = "enumeration") -> Iterator[list]:
    """Every point base + Σ c_i d_i over F_p, raising BudgetExceeded if too many."""
    n = len(base)
    count = F.count(len(directions))
    if count is None:
        raise ValueError("exhaustive enumeration needs a finite field")
    if count > budget:
        raise BudgetExceeded(what, count, budget)
    for cs in F.vectors(len(directions)):
        yield linalg.vadd(F, base, linalg.lincomb(F, cs, directions, n)) if directions else list(base)


def sample_points(F: Field, base, directions, tries: int, rng: random.Random) -> Iterator[list]:
    n = len(base)
    for _ in range(tries):
        cs = [F.random_element(rng) for _ in directions]
        yield linalg.vadd(F, base, linalg.lincomb(F, cs, directions, n))


@dataclass
class IsoResult:
    status: str  # "found" | "none" | "budget"
    forward: Mor | None = None
    backward: Mor | None = None
    reason: str = ""
    tried: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


def iso_obstruction(cat: LinearCategory, X, Y, probes: Sequence = ()) -> str | None:
    """A dimension/span argument proving X and Y are not isomorphic, if one applies."""
    zx, zy = cat.is_zero_object(X), cat.is_zero_object(Y)
    if zx != zy:
        return "exactly one side is a zero object"
    if cat.hom_dim(X, X) != cat.hom_dim(Y, Y):
        return f"dim End differs: {cat.hom_dim(X, X)} vs {cat.hom_dim(Y, Y)}"
    for Z in probes:
        if cat.hom_dim(Z, X) != cat.hom_dim(Z, Y):
            return f"dim Hom({Z!r}, -) differs"
        if cat.hom_dim(X, Z) != cat.hom_dim(Y, Z):
            return f"dim Hom(-, {Z!r}) differs"
    F = cat.field
    for A, B in ((X, Y), (Y, X)):
        prods = [cat.compose(c, b).coords for b in cat.basis(A, B) for c in cat.basis(B, A)]
        span = linalg.Subspace(F, [prods[i] for i in linalg.independent_subset(F, prods)], cat.hom_dim(A, A)) \
            if prods else linalg.Subspace(F, [], cat.hom_dim(A, A))
        if not span.contains(cat._identity(A)):
            return f"id_{A!r} is not a sum of composites through {B!r}"
    return None


def find_iso(cat: LinearCategory, X, Y, budget: int = DEFAULT_BUDGET, seed: int = 0,
             probes: Sequence = ()) -> IsoResult:
    """Search for an isomorphism X -> Y with a verified two-sided inverse."""
    if X == Y:
        return IsoResult("found", cat.identity(X), cat.identity(X), "identical objects")
    if cat.is_zero_object(X) and cat.is_zero_object(Y):
        return IsoResult("found", cat.zero(X, Y), cat.zero(Y, X), "zero objects")
    obs = iso_obstruction(cat, X, Y, probes)
    if obs:
        return IsoResult("none", reason=obs)
    F = cat.field
    B, C = cat.basis(X, Y), cat.basis(Y, X)
    idX, idY = list(cat._identity(X)), list(cat._identity(Y))
    gf = [[cat.compose(c, b).coords for c in C] for b in B]
    fg = [[cat.compose(b, c).coords for c in C] for b in B]
    nX, nY = len(idX), len(idY)

    def attempt(a):
        cols = []
        for j in range(len(C)):
            top = linalg.lincomb(F, a, [gf[i][j] for i in range(len(B))], nX)
            bot = linalg.lincomb(F, a, [fg[i][j] for i in range(len(B))], nY)
            cols.append(top + bot)
        A = linalg.from_columns(cols, nX + nY)
        g = linalg.solve(F, A, idX + idY, len(C))
        return g

    zero = [F.zero] * len(B)
    tried = 0
    count = F.count(len(B))
    if count is not None and count <= budget:
        for a in F.vectors(len(B)):
            if not any(a):
                continue
            tried += 1
            g = attempt(a)
            if g is not None:
                return _verified(cat, X, Y, a, g, tried)
        return IsoResult("none", reason=f"exhaustive over {count} candidates", tried=tried)
    rng = random.Random(seed)
    for a in sample_points(F, zero, [[F.one if i == j else F.zero for i in range(len(B))] for j in range(len(B))],
                           budget, rng):
        tried += 1
        g = attempt(a)
        if g is not None:
            return _verified(cat, X, Y, a, g, tried)
    return IsoResult("budget", reason=f"{tried} sampled candidates, no obstruction found", tried=tried)


def _verified(cat, X, Y, a, g, tried) -> IsoResult:
    f = Mor(X, Y, tuple(a))
    gm = Mor(Y, X, tuple(g))
    assert cat.is_identity(cat.compose(gm, f)) and cat.is_identity(cat.compose(f, gm))
    return IsoResult("found", f, gm, "verified two-sided inverse", tried)


@dataclass
class SplitResult:
    status: str  # "split" | "none" | "budget"
    retract: object = None
    inclusion: Mor | None = None
    projection: Mor | None = None
    idempotent: Mor | None = None
    tried: int = 0

    @property
    def split(self) -> bool:
        return self.status == "split"


def is_idempotent(cat: LinearCategory, p: Mor) -> bool:
    return p.source == p.target and cat.compose(p, p) == p


def split_idempotent(cat: LinearCategory, X, p: Mor, budget: int = DEFAULT_BUDGET,
                     candidates: Sequence | None = None, seed: int = 0) -> SplitResult:
    """Find a retract X' among ``candidates`` with s∘i = 1 and i∘s = p."""
    if p.source != X or not is_idempotent(cat, p):
        raise PreconditionError("split_idempotent needs an idempotent endomorphism of X")
    if cat.is_identity(p):
        return SplitResult("split", X, cat.identity(X), cat.identity(X), p)
    cands = list(cat.objects if candidates is None else candidates)
    F = cat.field
    if cat.is_zero(p):
        zero_obj = getattr(cat, "zero_object", None)
        for Z in cands + ([zero_obj()] if zero_obj else []):
            if cat.is_zero_object(Z):
                return SplitResult("split", Z, cat.zero(Z, X), cat.zero(X, Z), p)
        return SplitResult("none", idempotent=p)
    corner = [cat.compose(p, f, p).coords for f in cat.basis(X, X)]
    corner_dim = linalg.rank(F, corner) if corner else 0
    tried = 0
    budget_hit = False
    rng = random.Random(seed)
    for Xp in cands:
        if cat.hom_dim(Xp, Xp) != corner_dim or cat.is_zero_object(Xp):
            continue
        # i ranges over {i : p∘i = i}
        post = cat.postcompose_matrix(p, Xp)
        n = cat.hom_dim(Xp, X)
        if n == 0:
            continue
        shifted = [[F.sub(post[r][c], F.one if r == c else F.zero) for c in range(n)] for r in range(n)]
        sub = linalg.nullspace(F, shifted, n)
        if not sub:
            continue
        idXp = list(cat._identity(Xp))
        remaining = budget - tried
        count = F.count(len(sub))
        if count is not None and count <= remaining:
            points = affine_points(F, [F.zero] * n, sub, remaining)
        else:
            budget_hit = True
            points = sample_points(F, [F.zero] * n, sub, max(remaining, 0), rng)
        for ivec in points:
            if not any(ivec):
                continue
            tried += 1
            i = Mor(Xp, X, tuple(ivec))
            A1 = cat.precompose_matrix(i, Xp)   # s ↦ s∘i
            A2 = cat.postcompose_matrix(i, X)   # s ↦ i∘s
            s = linalg.solve(F, list(A1) + list(A2), idXp + list(p.coords), cat.hom_dim(X, Xp))
            if s is not None:
                sm = Mor(X, Xp, tuple(s))
                assert cat.is_identity(cat.compose(sm, i)) and cat.compose(i, sm) == p
                return SplitResult("split", Xp, i, sm, p, tried)
    return SplitResult("budget" if budget_hit else "none", idempotent=p, tried=tried)


def enumerate_idempotents(cat: LinearCategory, X, budget: int = DEFAULT_BUDGET) -> list[Mor]:
    """All idempotents of End(X) over F_p (exhaustive, budgeted)."""
    F = cat.field
    n = cat.hom_dim(X, X)
    basis = [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    out = []
    for v in affine_points(F, [F.zero] * n, basis, budget, what=f"idempotents of End({X!r})"):
        e = Mor(X, X, tuple(v))
        if cat.compose(e, e) == e:
            out.append(e)
    return out
