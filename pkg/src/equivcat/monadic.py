"""Adjunctions, (co)monads, (co)module categories and comparison functors."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .errors import BudgetExceeded, ConsistencyError, MalformedInputError, PreconditionError
from .lincat import linalg
from .lincat.category import LinearCategory, Mor
from .lincat.functor import (Functor, IdentityFunctor, LambdaFunctor, NatTrans, check_naturality,
                             compose_functors)
from .lincat.search import DEFAULT_BUDGET, affine_points, find_iso
from .lincat.subcat import SubspaceCategory


class Adjunction:
    """left ⊣ right with unit: Id_A → right∘left and counit: left∘right → Id_B."""

    def __init__(self, left: Functor, right: Functor, unit: NatTrans, counit: NatTrans, name: str = "adj"):
        self.left, self.right, self.unit, self.counit, self.name = left, right, unit, counit, name

    @property
    def source(self) -> LinearCategory:
        return self.left.source

    @property
    def target(self) -> LinearCategory:
        return self.left.target

    def triangle_failures(self, a_objects, b_objects) -> list:
        """ε_{La}∘L(η_a) = 1 and R(ε_b)∘η_{Rb} = 1."""
        L, R, eta, eps = self.left, self.right, self.unit, self.counit
        A, B = self.source, self.target
        bad = []
        for a in a_objects:
            if not B.is_identity(B.compose(eps.at(L(a)), L(eta.at(a)))):
                bad.append(("triangle on left", a))
        for b in b_objects:
            if not A.is_identity(A.compose(R(eps.at(b)), eta.at(R(b)))):
                bad.append(("triangle on right", b))
        return bad


@dataclass
class LawReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class Comonad:
    def __init__(self, category: LinearCategory, functor: Functor, counit: NatTrans, comult: NatTrans,
                 name: str = "T"):
        self.category, self.functor, self.counit, self.comult, self.name = category, functor, counit, comult, name

    def __call__(self, x):
        return self.functor(x)

    def check(self, objects) -> LawReport:
        C, T, eps, delta = self.category, self.functor, self.counit, self.comult
        bad = []
        for X in objects:
            d = delta.at(X)
            if not C.is_identity(C.compose(eps.at(T(X)), d)):
                bad.append(("counit (εT)∘δ", X))
            if not C.is_identity(C.compose(T(eps.at(X)), d)):
                bad.append(("counit T(ε)∘δ", X))
            if C.compose(delta.at(T(X)), d) != C.compose(T(d), d):
                bad.append(("coassociativity", X))
        for nt in (eps, delta):
            rep = check_naturality(nt, objects)
            bad += [("naturality of " + nt.name,) + v for v in rep.violations]
        return LawReport(not bad, bad)


class Monad:
    def __init__(self, category: LinearCategory, functor: Functor, unit: NatTrans, mult: NatTrans,
                 name: str = "S"):
        self.category, self.functor, self.unit, self.mult, self.name = category, functor, unit, mult, name

    def __call__(self, x):
        return self.functor(x)

    def check(self, objects) -> LawReport:
        C, S, eta, mu = self.category, self.functor, self.unit, self.mult
        bad = []
        for X in objects:
            m = mu.at(X)
            if not C.is_identity(C.compose(m, eta.at(S(X)))):
                bad.append(("unit μ∘(ηS)", X))
            if not C.is_identity(C.compose(m, S(eta.at(X)))):
                bad.append(("unit μ∘S(η)", X))
            if C.compose(m, mu.at(S(X))) != C.compose(m, S(m)):
                bad.append(("associativity", X))
        for nt in (eta, mu):
            rep = check_naturality(nt, objects)
            bad += [("naturality of " + nt.name,) + v for v in rep.violations]
        return LawReport(not bad, bad)


def comonad_of_adjunction(adj: Adjunction, a_objects=None, b_objects=None) -> Comonad:
    """T(L, R) = (LR, ε, LηR) on the target of L."""
    if a_objects is not None or b_objects is not None:
        bad = adj.triangle_failures(a_objects or (), b_objects or ())
        if bad:
            raise PreconditionError(f"{adj.name}: triangle identities fail: {bad[:3]!r}")
    L, R = adj.left, adj.right
    T = compose_functors(L, R)
    delta = NatTrans(T, compose_functors(T, T), lambda b: L(adj.unit.at(R(b))), name="delta")
    return Comonad(adj.target, T, adj.counit, delta, name=f"T({L.name},{R.name})")


def monad_of_adjunction(adj: Adjunction, a_objects=None, b_objects=None) -> Monad:
    """S = (RL, η, RεL) on the source of L."""
    if a_objects is not None or b_objects is not None:
        bad = adj.triangle_failures(a_objects or (), b_objects or ())
        if bad:
            raise PreconditionError(f"{adj.name}: triangle identities fail: {bad[:3]!r}")
    L, R = adj.left, adj.right
    S = compose_functors(R, L)
    mu = NatTrans(compose_functors(S, S), S, lambda a: R(adj.counit.at(L(a))), name="mu")
    return Monad(adj.source, S, adj.unit, mu, name=f"S({L.name},{R.name})")


def identity_comonad(cat: LinearCategory) -> Comonad:
    I = IdentityFunctor(cat)
    one = NatTrans(I, I, cat.identity, name="1")
    return Comonad(cat, I, one, NatTrans(I, compose_functors(I, I), cat.identity, name="1"), name="Id")


def identity_monad(cat: LinearCategory) -> Monad:
    I = IdentityFunctor(cat)
    one = NatTrans(I, I, cat.identity, name="1")
    return Monad(cat, I, one, NatTrans(compose_functors(I, I), I, cat.identity, name="1"), name="Id")


# -- (co)modules ---------------------------------------------------------------

@dataclass(frozen=True)
class Comodule:
    obj: Hashable
    coaction: Mor  # obj → T(obj)
    label: str | None = field(default=None, compare=False)

    def __repr__(self):
        return self.label or f"Comod({self.obj!r}, {list(self.coaction.coords)})"


@dataclass(frozen=True)
class Module:
    obj: Hashable
    action: Mor  # S(obj) → obj
    label: str | None = field(default=None, compare=False)

    def __repr__(self):
        return self.label or f"Mod({self.obj!r}, {list(self.action.coords)})"


class ComoduleCategory(SubspaceCategory):
    """C_T: morphisms f with k∘f = T(f)∘h."""

    def __init__(self, comonad: Comonad, objects: Sequence = (), name: str | None = None):
        super().__init__(comonad.category, objects, name or f"{comonad.category.name}_{comonad.name}")
        self.comonad = comonad

    def underlying(self, M):
        return M.obj

    def constraint_rows(self, M, N):
        C, T = self.parent, self.comonad
        return C.linear_map_matrix(M.obj, N.obj,
                                   lambda f: C.sub(C.compose(N.coaction, f), C.compose(T(f), M.coaction)))

    def validate(self, M: Comodule) -> LawReport:
        C, T = self.parent, self.comonad
        h = M.coaction
        if (h.source, h.target) != (M.obj, T(M.obj)):
            return LawReport(False, [("coaction endpoints",)])
        bad = []
        if not C.is_identity(C.compose(T.counit.at(M.obj), h)):
            bad.append(("counit", M.obj))
        if C.compose(T.comult.at(M.obj), h) != C.compose(T(h), h):
            bad.append(("coassociativity", M.obj))
        return LawReport(not bad, bad)

    def free(self, X) -> Comodule:
        """Q_*(X) = (TX, δ_X)."""
        return Comodule(self.comonad(X), self.comonad.comult.at(X))

    def cofree_functor(self) -> LambdaFunctor:
        T = self.comonad
        return LambdaFunctor(self.parent, self, self.free,
                             lambda f: self.from_parent(self.free(f.source), self.free(f.target), T(f)), name="Q_*")

    def forget(self) -> LambdaFunctor:
        return LambdaFunctor(self, self.parent, lambda M: M.obj, self.to_parent, name="Q*")


class ModuleCategory(SubspaceCategory):
    """C^S: morphisms f with f∘h = k∘S(f)."""

    def __init__(self, monad: Monad, objects: Sequence = (), name: str | None = None):
        super().__init__(monad.category, objects, name or f"{monad.category.name}^{monad.name}")
        self.monad = monad

    def underlying(self, M):
        return M.obj

    def constraint_rows(self, M, N):
        C, S = self.parent, self.monad
        return C.linear_map_matrix(M.obj, N.obj,
                                   lambda f: C.sub(C.compose(f, M.action), C.compose(N.action, S(f))))

    def validate(self, M: Module) -> LawReport:
        C, S = self.parent, self.monad
        h = M.action
        if (h.source, h.target) != (S(M.obj), M.obj):
            return LawReport(False, [("action endpoints",)])
        bad = []
        if not C.is_identity(C.compose(h, S.unit.at(M.obj))):
            bad.append(("unit", M.obj))
        if C.compose(h, S.mult.at(M.obj)) != C.compose(h, S(h)):
            bad.append(("associativity", M.obj))
        return LawReport(not bad, bad)

    def free(self, X) -> Module:
        return Module(self.monad(X), self.monad.mult.at(X))

    def forget(self) -> LambdaFunctor:
        return LambdaFunctor(self, self.parent, lambda M: M.obj, self.to_parent, name="Q*")


@dataclass
class EnumerationCount:
    obj: Hashable
    counit_solutions: int
    found: int


def comodules_over(T: Comonad, objects, budget: int = DEFAULT_BUDGET) -> tuple[ComoduleCategory, list]:
    """All coactions on each listed object (exhaustive over F_p within budget).

    The counit law ε_F∘h = 1 is affine-linear in h, so its solution set is
    enumerated and filtered through coassociativity.
    """
    C = T.category
    F = C.field
    Cat = ComoduleCategory(T)
    found, counts = [], []
    for X in objects:
        TX = T(X)
        n = C.hom_dim(X, TX)
        A = C.postcompose_matrix(T.counit.at(X), X) if n else []
        sol = linalg.solve_affine(F, A, list(C._identity(X)), n) if n else (
            ([], []) if C.is_zero_object(X) else None)
        if sol is None:
            counts.append(EnumerationCount(X, 0, 0))
            continue
        part, null = sol
        num = 0
        hits = 0
        for v in affine_points(F, part, null, budget, what=f"coactions on {X!r}"):
            num += 1
            M = Comodule(X, Mor(X, TX, tuple(v)))
            if Cat.validate(M):
                found.append(M)
                hits += 1
        counts.append(EnumerationCount(X, num, hits))
    Cat.objects = tuple(found)
    return Cat, counts


def modules_over(S: Monad, objects, budget: int = DEFAULT_BUDGET) -> tuple[ModuleCategory, list]:
    C = S.category
    F = C.field
    Cat = ModuleCategory(S)
    found, counts = [], []
    for X in objects:
        SX = S(X)
        n = C.hom_dim(SX, X)
        A = C.precompose_matrix(S.unit.at(X), X) if n else []
        sol = linalg.solve_affine(F, A, list(C._identity(X)), n) if n else (
            ([], []) if C.is_zero_object(X) else None)
        if sol is None:
            counts.append(EnumerationCount(X, 0, 0))
            continue
        part, null = sol
        num = hits = 0
        for v in affine_points(F, part, null, budget, what=f"actions on {X!r}"):
            num += 1
            M = Module(X, Mor(SX, X, tuple(v)))
            if Cat.validate(M):
                found.append(M)
                hits += 1
        counts.append(EnumerationCount(X, num, hits))
    Cat.objects = tuple(found)
    return Cat, counts


# -- comparison functors -------------------------------------------------------------

@dataclass
class Comparison:
    functor: LambdaFunctor
    category: SubspaceCategory
    comonad: Comonad | None = None
    monad: Monad | None = None

    def identity_failures(self, a_objects, b_objects) -> list:
        """Q*∘Φ = P* and Φ∘P_* = Q_* (checked as equalities on objects and basis morphisms)."""
        return self._failures(a_objects, b_objects)

    _failures = None


def comparison_functor(adj: Adjunction, comonad: Comonad | None = None) -> Comparison:
    """Φ: A → B_T with Φ(a) = (L a, L(η_a)) for T = T(L, R)."""
    T = comonad or comonad_of_adjunction(adj)
    L, R = adj.left, adj.right
    Cat = ComoduleCategory(T)

    def on_obj(a):
        return Comodule(L(a), L(adj.unit.at(a)))

    Phi = LambdaFunctor(adj.source, Cat, on_obj,
                        lambda f: Cat.from_parent(on_obj(f.source), on_obj(f.target), L(f)), name="Phi")
    out = Comparison(Phi, Cat, comonad=T)

    def failures(a_objects, b_objects):
        bad = []
        A, B = adj.source, adj.target
        for a in a_objects:
            if not Cat.validate(Phi(a)):
                bad.append(("Phi(a) not a comodule", a))
            if Phi(a).obj != L(a):
                bad.append(("Q*Phi != P* on objects", a))
            for a2 in a_objects:
                for f in A.basis(a, a2):
                    if Cat.to_parent(Phi(f)) != L(f):
                        bad.append(("Q*Phi != P* on morphisms", (a, a2)))
        for b in b_objects:
            if Phi(R(b)) != Cat.free(b):
                bad.append(("Phi P_* != Q_*", b))
            for b2 in b_objects:
                for f in B.basis(b, b2):
                    if Cat.to_parent(Phi(R(f))) != T(f):
                        bad.append(("Phi P_* != Q_* on morphisms", (b, b2)))
        return bad

    out._failures = failures
    return out


def monad_comparison_functor(adj: Adjunction, monad: Monad | None = None) -> Comparison:
    """Φ: B → A^S with Φ(b) = (R b, R(ε_b)) for S = S(L, R)."""
    S = monad or monad_of_adjunction(adj)
    L, R = adj.left, adj.right
    Cat = ModuleCategory(S)

    def on_obj(b):
        return Module(R(b), R(adj.counit.at(b)))

    Phi = LambdaFunctor(adj.target, Cat, on_obj,
                        lambda f: Cat.from_parent(on_obj(f.source), on_obj(f.target), R(f)), name="Phi")
    out = Comparison(Phi, Cat, monad=S)

    def failures(b_objects, a_objects):
        bad = []
        for b in b_objects:
            if not Cat.validate(Phi(b)):
                bad.append(("Phi(b) not a module", b))
            if Phi(b).obj != R(b):
                bad.append(("Q*Phi != P_*", b))
        for a in a_objects:
            if Phi(L(a)) != Cat.free(a):
                bad.append(("Phi P* != Q*free", a))
        return bad

    out._failures = failures
    return out


# -- split monomorphism criterion --------------------------------------------------------

@dataclass
class SplitMonoResult:
    ok: bool
    retraction: NatTrans | None = None
    method: str = ""
    failures: list = field(default_factory=list)


def split_mono_check(eta: NatTrans, objects, candidate: NatTrans | None = None) -> SplitMonoResult:
    """A natural ρ with ρ∘η = 1 on ``objects``: the candidate first, then a joint linear solve."""
    C = eta.category
    src = eta.source.source
    if candidate is not None:
        bad = [X for X in objects if not C.is_identity(C.compose(candidate.at(X), eta.at(X)))]
        nat = check_naturality(candidate, objects)
        if not bad and nat:
            return SplitMonoResult(True, candidate, "candidate")
    # unknowns: ρ_X ∈ Hom(target X, X) for each X, stacked
    objs = list(objects)
    F = C.field
    T = eta.target
    offs, pos = {}, 0
    for X in objs:
        n = C.hom_dim(T(X), X)
        offs[X] = (pos, n)
        pos += n
    rows, rhs = [], []

    def embed(X, M):
        p, n = offs[X]
        return [[F.zero] * p + list(r) + [F.zero] * (pos - p - n) for r in M]

    for X in objs:
        M = C.precompose_matrix(eta.at(X), X)
        rows += embed(X, M)
        rhs += list(C._identity(X))
    for X in objs:
        for Y in objs:
            for f in src.basis(X, Y):
                Tf, ff = T(f), eta.source(f)
                A1 = embed(Y, C.precompose_matrix(Tf, Y))          # ρ_Y∘T(f)
                A2 = embed(X, C.postcompose_matrix(ff, T(X)))       # f∘ρ_X
                rows += [linalg.vsub(F, r1, r2) for r1, r2 in zip(A1, A2)]
                rhs += [F.zero] * len(A1)
    sol = linalg.solve(F, rows, rhs, pos) if pos else None
    if sol is None:
        return SplitMonoResult(False, method="linear solve", failures=["no natural left inverse"])
    comps = {X: Mor(T(X), X, tuple(sol[offs[X][0]:offs[X][0] + offs[X][1]])) for X in objs}
    rho = NatTrans(T, eta.source, lambda X: comps[X], name="rho")
    return SplitMonoResult(True, rho, "linear solve")


# -- equivalence certification -----------------------------------------------------------

@dataclass
class EquivalenceVerdict:
    fully_faithful: bool
    essentially_surjective: bool | None  # None when the budget ran out
    ranks: list = field(default_factory=list)
    ff_witness: object = None
    hits: dict = field(default_factory=dict)
    es_witness: object = None
    budget_exhausted: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if not self.fully_faithful or self.essentially_surjective is False:
            return "not-equivalence"
        if self.essentially_surjective is None:
            return "budget"
        return "equivalence"

    @property
    def is_equivalence(self) -> bool:
        return self.status == "equivalence"


def check_equivalence(Phi: Functor, source_objects, target_objects, budget: int = DEFAULT_BUDGET,
                      seed: int = 0) -> EquivalenceVerdict:
    A, B = Phi.source, Phi.target
    F = A.field
    ranks, ff_wit = [], None
    for X in source_objects:
        for Y in source_objects:
            n = A.hom_dim(X, Y)
            m = B.hom_dim(Phi(X), Phi(Y))
            r = linalg.rank(F, Phi.hom_matrix(X, Y)) if n else 0
            ranks.append((X, Y, n, m, r))
            if not (r == n == m) and ff_wit is None:
                ff_wit = (X, Y, n, m, r)
    images = [(X, Phi(X)) for X in source_objects]
    hits, miss, exhausted = {}, None, []
    for T in target_objects:
        hit = None
        ran_out = False
        for X, PX in images:
            res = find_iso(B, PX, T, budget=budget, seed=seed)
            if res.found:
                hit = (X, res.forward, res.backward)
                break
            if res.status == "budget":
                ran_out = True
        if hit:
            hits[T] = hit
        elif ran_out:
            exhausted.append(T)
        elif miss is None:
            miss = T
    es = False if miss is not None else (None if exhausted else True)
    return EquivalenceVerdict(ff_wit is None, es, ranks, ff_wit, hits, miss, exhausted)


# -- transport along comonad isomorphisms -----------------------------------------------

def comonad_iso_failures(alpha: NatTrans, T: Comonad, T2: Comonad, objects) -> list:
    """Failures of ε′∘α = ε and δ′∘α = (α⋆α)∘δ, plus invertibility and naturality."""
    C = T.category
    bad = []
    for X in objects:
        a = alpha.at(X)
        if not C.is_iso(a):
            bad.append(("not invertible", X))
        if C.compose(T2.counit.at(X), a) != T.counit.at(X):
            bad.append(("counit compatibility", X))
        aa = C.compose(alpha.at(T2(X)), T(a))
        if C.compose(T2.comult.at(X), a) != C.compose(aa, T.comult.at(X)):
            bad.append(("comultiplication compatibility", X))
    bad += [("naturality",) + v for v in check_naturality(alpha, objects).violations]
    return bad


def transport_comodules(alpha: NatTrans, T: Comonad, T2: Comonad, objects=None,
                        target: ComoduleCategory | None = None, source: ComoduleCategory | None = None
                        ) -> LambdaFunctor:
    """C_T → C_{T′}, (F, h) ↦ (F, α_F∘h); morphisms keep their underlying map."""
    if objects is not None:
        bad = comonad_iso_failures(alpha, T, T2, objects)
        if bad:
            raise ConsistencyError(f"not a comonad isomorphism: {bad[:3]!r}")
    C = T.category
    src = source or ComoduleCategory(T)
    tgt = target or ComoduleCategory(T2)

    def on_obj(M):
        return Comodule(M.obj, C.compose(alpha.at(M.obj), M.coaction), M.label)

    return LambdaFunctor(src, tgt, on_obj,
                         lambda f: tgt.from_parent(on_obj(f.source), on_obj(f.target), src.to_parent(f)),
                         name="transport")
