"""Idempotent completion and extension of functors, monads and actions to it."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable

from .action import GroupAction
from .errors import BudgetExceeded, PreconditionError, StructuralError
from .lincat import linalg
from .lincat.category import DirectSum, LinearCategory, Mor
from .lincat.functor import Functor, LambdaFunctor, NatTrans, compose_functors
from .lincat.search import DEFAULT_BUDGET, SplitResult, enumerate_idempotents, is_idempotent, split_idempotent
from .lincat.subcat import SubspaceCategory
from .monadic import Monad


@dataclass(frozen=True)
class KaroubiObject:
    obj: Hashable
    idem: Mor
    label: str | None = field(default=None, compare=False)

    def __repr__(self):
        return self.label or f"({self.obj!r}, {list(self.idem.coords)})"


class KaroubiCategory(SubspaceCategory):
    """Objects (X, p) with p idempotent; Hom((X,p),(Y,q)) = q∘Hom(X,Y)∘p.

    The Hom basis is the greedy independent subset of {q∘b∘p} over the
    parent basis b, so (X, id) carries exactly the parent basis.
    """

    def __init__(self, parent: LinearCategory, objects=(), name: str | None = None):
        super().__init__(parent, objects, name or f"Kar({parent.name})")

    def underlying(self, A):
        return A.obj

    def _subspace_basis(self, A, B):
        C = self.parent
        vecs = [C.compose(B.idem, b, A.idem).coords for b in C.basis(A.obj, B.obj)]
        return [list(vecs[i]) for i in linalg.independent_subset(self.field, vecs)] if vecs else []

    def _parent_identity(self, A):
        return A.idem.coords

    def make(self, X, p: Mor, label: str | None = None) -> KaroubiObject:
        if p.source != X or not is_idempotent(self.parent, p):
            raise PreconditionError(f"{p!r} is not an idempotent on {X!r}")
        return KaroubiObject(X, p, label)

    def embed(self, X) -> KaroubiObject:
        return KaroubiObject(X, self.parent.identity(X))

    def embedding(self) -> LambdaFunctor:
        C = self.parent
        return LambdaFunctor(C, self, self.embed,
                             lambda f: Mor(self.embed(f.source), self.embed(f.target), f.coords), name="i")

    def direct_sum(self, objs) -> DirectSum:
        C = self.parent
        ds = C.direct_sum([A.obj for A in objs])
        e = C.sum([C.compose(i, A.idem, p) for A, i, p in zip(objs, ds.injections, ds.projections)],
                  ds.obj, ds.obj)
        S = KaroubiObject(ds.obj, e)
        inj = tuple(self.from_parent(A, S, C.compose(i, A.idem)) for A, i in zip(objs, ds.injections))
        proj = tuple(self.from_parent(S, A, C.compose(A.idem, p)) for A, p in zip(objs, ds.projections))
        return DirectSum(S, tuple(objs), inj, proj)

    def formal_split(self, A: KaroubiObject, e: Mor) -> SplitResult:
        """Every idempotent e of (X,p) splits through (X, e)."""
        ep = self.to_parent(e)
        R = KaroubiObject(A.obj, ep)
        i = self.from_parent(R, A, ep)
        s = self.from_parent(A, R, ep)
        assert self.is_identity(self.compose(s, i)) and self.compose(i, s) == e
        return SplitResult("split", R, i, s, e)


def karoubi_envelope(C: LinearCategory, budget: int = DEFAULT_BUDGET, objects=None) -> KaroubiCategory:
    """Kar(C) with designated objects (X, e) for every idempotent e that could be enumerated.

    Objects whose End is too large to enumerate within the budget (or any
    object over ℚ) contribute only (X, id) and (X, 0).
    """
    K = KaroubiCategory(C)
    if objects is not None:
        K.objects = tuple(objects)
        return K
    out = []
    for X in C.objects:
        idems = None
        if C.field.is_finite:
            try:
                idems = enumerate_idempotents(C, X, budget)
            except BudgetExceeded:
                idems = None
        if idems is None:
            idems = [C.identity(X)] + ([C.zero(X, X)] if C.hom_dim(X, X) else [])
        idems.sort(key=lambda e: (e != C.identity(X), e.coords))
        out += [KaroubiObject(X, e) for e in idems]
    K.objects = tuple(out)
    return K


@dataclass
class CompletenessVerdict:
    status: str  # "yes" | "no" | "budget"
    witness: tuple | None = None  # (X, p) that does not split
    idempotents_checked: int = 0
    skipped: list = field(default_factory=list)

    @property
    def complete(self) -> bool | None:
        return {"yes": True, "no": False}.get(self.status)


def is_idempotent_complete(C: LinearCategory, budget: int = DEFAULT_BUDGET, objects=None) -> CompletenessVerdict:
    """Enumerate idempotents of each listed object (F_p) and split each among C.objects."""
    objs = list(C.objects if objects is None else objects)
    cands = list(dict.fromkeys(list(C.objects) + objs))
    checked, skipped = 0, []
    formal = getattr(C, "formal_split", None)
    for X in objs:
        try:
            idems = enumerate_idempotents(C, X, budget)
        except BudgetExceeded:
            skipped.append(X)
            continue
        for p in idems:
            checked += 1
            res = formal(X, p) if formal else split_idempotent(C, X, p, budget=budget, candidates=cands)
            if res.status == "none":
                return CompletenessVerdict("no", (X, p), checked, skipped)
            if res.status == "budget":
                skipped.append((X, p))
    return CompletenessVerdict("budget" if skipped else "yes", None, checked, skipped)


# -- extensions -------------------------------------------------------------------------

def _split_in(D: LinearCategory, X, e: Mor, budget: int) -> SplitResult:
    formal = getattr(D, "formal_split", None)
    if formal is not None:
        return formal(X, e)
    res = split_idempotent(D, X, e, budget=budget)
    if not res.split:
        raise StructuralError(f"idempotent {list(e.coords)} on {X!r} does not split in {D.name}")
    return res


def extend_functor(Fn: Functor, K: KaroubiCategory, budget: int = DEFAULT_BUDGET) -> LambdaFunctor:
    """F̄(X, p) = the splitting of F(p); F̄(f) = s∘F(f)∘i."""
    D = Fn.target
    cache = {}

    def split(A):
        r = cache.get(A)
        if r is None:
            r = cache[A] = _split_in(D, Fn(A.obj), Fn(A.idem), budget)
        return r

    def on_mor(f):
        sa, sb = split(f.source), split(f.target)
        return D.compose(sb.projection, Fn(K.to_parent(f)), sa.inclusion)

    return LambdaFunctor(K, D, lambda A: split(A).retract, on_mor, name=f"{Fn.name}~")


def _endo_extension(S: Functor, K: KaroubiCategory, name: str) -> LambdaFunctor:
    def on_obj(A):
        return KaroubiObject(S(A.obj), S(A.idem))

    return LambdaFunctor(K, K, on_obj,
                         lambda f: K.from_parent(on_obj(f.source), on_obj(f.target), S(K.to_parent(f))), name=name)


def extend_monad(M: Monad, K: KaroubiCategory) -> Monad:
    """S̄(X,p) = (SX, Sp), η̄ = η_X∘p, μ̄ = μ_X∘SS(p)."""
    C, S = M.category, M.functor
    Sb = _endo_extension(S, K, f"{M.name}~")
    SSb = compose_functors(Sb, Sb)

    def eta(A):
        return K.from_parent(A, Sb(A), C.compose(M.unit.at(A.obj), A.idem))

    def mu(A):
        return K.from_parent(SSb(A), Sb(A), C.compose(M.mult.at(A.obj), S(S(A.idem))))

    from .lincat.functor import IdentityFunctor
    return Monad(K, Sb, NatTrans(IdentityFunctor(K), Sb, eta, name="eta~"),
                 NatTrans(SSb, Sb, mu, name="mu~"), name=f"{M.name}~")


def extend_action(a: GroupAction, K: KaroubiCategory) -> GroupAction:
    """φ̄_g(X,p) = (φ_gX, φ_g p), ε̄_{g,h}(X,p) = ε_{g,h}(X)∘φ_gφ_h(p)."""
    G = a.group
    functors = {g: _endo_extension(a.phi(g), K, f"phi_{g}~") for g in G.elements}

    def eps(g, h, A):
        C = a.category
        src = functors[g](functors[h](A))
        tgt = functors[G.mul(h, g)](A)
        return K.from_parent(src, tgt, C.compose(a.eps(g, h, A.obj), a.act(g, a.act(h, A.idem))))

    return GroupAction(K, G, functors, eps, name=f"{a.name}~")


def restriction_failures(K: KaroubiCategory, original: Functor, extended: Functor, objects) -> list:
    """Where extended∘embed differs from embed∘original (or original, for a non-endo target)."""
    emb = K.embedding()
    C = K.parent
    endo = extended.target is K
    bad = []
    for X in objects:
        want = emb(original(X)) if endo else original(X)
        if extended(emb(X)) != want:
            bad.append(("object", X))
        for Y in objects:
            for f in C.basis(X, Y):
                got = extended(emb(f))
                exp = emb(original(f)) if endo else original(f)
                if got != exp:
                    bad.append(("morphism", X, Y, f.coords))
    return bad
