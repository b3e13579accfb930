"""Equivariant objects, the category C^G, and the adjunctions p* ⊣ p_* ⊣ p*."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .action import GroupAction
from .errors import BudgetExceeded, ConsistencyError, MalformedInputError, PreconditionError
from .lincat import linalg
from .lincat.category import DirectSum, Mor
from .lincat.functor import (IdentityFunctor, LambdaFunctor, NatTrans, compose_functors)
from .lincat.subcat import SubspaceCategory
from .lincat.search import DEFAULT_BUDGET


@dataclass(frozen=True)
class EquivariantObject:
    obj: Hashable
    theta: tuple  # ((g, θ_g), ...) in group element order
    label: str | None = field(default=None, compare=False)

    def theta_of(self, g) -> Mor:
        for h, t in self.theta:
            if h == g:
                return t
        raise KeyError(g)

    def __repr__(self):
        if self.label:
            return self.label
        return f"({self.obj!r}, θ={[list(t.coords) for _, t in self.theta]})"


@dataclass
class EquivariantReport:
    ok: bool
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


class EquivariantCategory(SubspaceCategory):
    """C^G: Hom(A, B) = {f : φ_g(f)∘θ^A_g = θ^B_g∘f for all g}."""

    def __init__(self, action: GroupAction, objects: Sequence = (), name: str | None = None):
        super().__init__(action.category, (), name or f"{action.category.name}^{action.group.name}")
        self.action = action
        self.group = action.group
        self._sums: dict = {}
        self._induced: dict = {}
        self._gens = self.group.generators()
        for A in objects:
            self.require_valid(A)
        self.objects = tuple(objects)

    def underlying(self, A):
        return A.obj

    def constraint_rows(self, A, B):
        # generators suffice: θ_{hg} is built from θ_g, θ_h and the natural ε_{g,h}
        a, C = self.action, self.parent
        rows = []
        for g in self._gens:
            tA, tB = A.theta_of(g), B.theta_of(g)
            M = C.linear_map_matrix(A.obj, B.obj,
                                    lambda f: C.sub(C.compose(a.act(g, f), tA), C.compose(tB, f)))
            rows += M
        return rows

    # -- objects -------------------------------------------------------------

    def make(self, F, thetas: dict, label: str | None = None) -> EquivariantObject:
        A = EquivariantObject(F, tuple((g, thetas[g]) for g in self.group.elements), label)
        self.require_valid(A)
        return A

    def validate(self, A: EquivariantObject) -> EquivariantReport:
        a, C, G = self.action, self.parent, self.group
        bad = []
        F = A.obj
        if [g for g, _ in A.theta] != list(G.elements):
            return EquivariantReport(False, [("theta family does not match the group elements",)])
        for g, t in A.theta:
            if (t.source, t.target) != (F, a.act(g, F)):
                return EquivariantReport(False, [("theta endpoints", g)])
            if not C.is_iso(t):
                bad.append(("theta not invertible", g))
            if self.is_dg and (any(C.differential(t).coords) or any(
                    d != 0 for d, c in zip(C.degrees(t.source, t.target), t.coords) if c)):
                bad.append(("theta not closed of degree 0", g))
        if A.theta_of(G.identity) != a.unit(F):
            bad.append(("theta_e differs from u(F)",))
        for g in G.elements:
            for h in G.elements:
                lhs = C.compose(a.eps(g, h, F), a.act(g, A.theta_of(h)), A.theta_of(g))
                if lhs != A.theta_of(G.mul(h, g)):
                    bad.append(("compatibility", (g, h)))
        return EquivariantReport(not bad, bad)

    def require_valid(self, A):
        rep = self.validate(A)
        if not rep:
            raise MalformedInputError(f"{A!r} is not an equivariant object: {rep.violations[:3]!r}")

    def direct_sum(self, objs) -> DirectSum:
        a, C = self.action, self.parent
        ds = C.direct_sum([A.obj for A in objs])
        thetas = {}
        for g in self.group.elements:
            terms = [C.compose(a.act(g, i), A.theta_of(g), p)
                     for A, i, p in zip(objs, ds.injections, ds.projections)]
            thetas[g] = C.sum(terms, ds.obj, a.act(g, ds.obj))
        S = EquivariantObject(ds.obj, tuple((g, thetas[g]) for g in self.group.elements))
        inj = tuple(self.from_parent(A, S, i) for A, i in zip(objs, ds.injections))
        proj = tuple(self.from_parent(S, A, p) for A, p in zip(objs, ds.projections))
        return DirectSum(S, tuple(objs), inj, proj)

    # -- functors --------------------------------------------------------------

    def forget(self) -> LambdaFunctor:
        """p*: C^G → C."""
        return LambdaFunctor(self, self.parent, lambda A: A.obj, self.to_parent, name="p*")

    def induced_object(self, F) -> EquivariantObject:
        """p_*(F) = (⊕_h φ_h F, ξ) with ξ_g = Σ_h φ_g(inj_h)∘ε_{g,h}(F)⁻¹∘pr_{hg}."""
        if F in self._induced:
            return self._induced[F]
        a, C, G = self.action, self.parent, self.group
        ds = self._induced_sum(F)
        idx = {h: n for n, h in enumerate(G.elements)}
        thetas = []
        for g in G.elements:
            terms = [C.compose(a.act(g, ds.injections[idx[h]]), a.eps_inv(g, h, F),
                               ds.projections[idx[G.mul(h, g)]]) for h in G.elements]
            thetas.append((g, C.sum(terms, ds.obj, a.act(g, ds.obj))))
        out = self._induced[F] = EquivariantObject(ds.obj, tuple(thetas))
        return out

    def _induced_sum(self, F) -> DirectSum:
        ds = self._sums.get(F)
        if ds is None:
            ds = self.parent.direct_sum([self.action.act(h, F) for h in self.group.elements])
            self._sums[F] = ds
        return ds

    def induce(self) -> LambdaFunctor:
        """p_*: C → C^G, blockwise φ_h on morphisms."""
        a, C, G = self.action, self.parent, self.group

        def on_mor(f):
            dX, dY = self._induced_sum(f.source), self._induced_sum(f.target)
            terms = [C.compose(iY, a.act(h, f), pX)
                     for h, iY, pX in zip(G.elements, dY.injections, dX.projections)]
            g = C.sum(terms, dX.obj, dY.obj)
            return self.from_parent(self.induced_object(f.source), self.induced_object(f.target), g)

        return LambdaFunctor(C, self, self.induced_object, on_mor, name="p_*")

    def adjunction_data(self) -> "AdjunctionData":
        return adjunction_data(self)


@dataclass
class AdjunctionData:
    category: EquivariantCategory
    forget: LambdaFunctor
    induce: LambdaFunctor
    eta: NatTrans        # Id_{C^G} → p_*p*
    eps: NatTrans        # p*p_* → Id_C
    eta_prime: NatTrans  # Id_C → p*p_*
    eps_prime: NatTrans  # p_*p* → Id_{C^G}

    def left_adjunction(self):
        """p* ⊣ p_* with unit η and counit ε."""
        from .monadic import Adjunction
        return Adjunction(self.forget, self.induce, self.eta, self.eps, name="p* -| p_*")

    def right_adjunction(self):
        """p_* ⊣ p* with unit η′ and counit ε′."""
        from .monadic import Adjunction
        return Adjunction(self.induce, self.forget, self.eta_prime, self.eps_prime, name="p_* -| p*")


def adjunction_data(CG: EquivariantCategory) -> AdjunctionData:
    a, C, G = CG.action, CG.parent, CG.group
    e = G.identity
    pstar, plow = CG.forget(), CG.induce()
    pos = {h: n for n, h in enumerate(G.elements)}

    def eta(A):
        ds = CG._induced_sum(A.obj)
        g = C.sum([C.compose(ds.injections[pos[h]], A.theta_of(h)) for h in G.elements], A.obj, ds.obj)
        return CG.from_parent(A, CG.induced_object(A.obj), g)

    def eps(F):
        ds = CG._induced_sum(F)
        return C.compose(a.unit_inv(F), ds.projections[pos[e]])

    def eta_prime(F):
        ds = CG._induced_sum(F)
        return C.compose(ds.injections[pos[e]], a.unit(F))

    def eps_prime(A):
        ds = CG._induced_sum(A.obj)
        terms = [C.compose(C.inverse(A.theta_of(h)), ds.projections[pos[h]]) for h in G.elements]
        return CG.from_parent(CG.induced_object(A.obj), A, C.sum(terms, ds.obj, A.obj))

    idCG, idC = IdentityFunctor(CG), IdentityFunctor(C)
    pp = compose_functors(plow, pstar)   # p_*p* on C^G
    qq = compose_functors(pstar, plow)   # p*p_* on C
    return AdjunctionData(
        CG, pstar, plow,
        NatTrans(idCG, pp, eta, name="eta"),
        NatTrans(qq, idC, eps, name="eps"),
        NatTrans(idC, qq, eta_prime, name="eta'"),
        NatTrans(pp, idCG, eps_prime, name="eps'"),
    )


def check_adjunction_identities(data: AdjunctionData, c_objects, cg_objects) -> list:
    """Triangle identities for both adjunctions plus ε∘η′ = 1 and ε′∘η = |G|."""
    CG, C = data.category, data.category.parent
    n = CG.group.order
    bad = []
    left, right = data.left_adjunction(), data.right_adjunction()
    bad += [("p* -| p_*",) + v for v in left.triangle_failures(cg_objects, c_objects)]
    bad += [("p_* -| p*",) + v for v in right.triangle_failures(c_objects, cg_objects)]
    for F in c_objects:
        if not C.is_identity(C.compose(data.eps.at(F), data.eta_prime.at(F))):
            bad.append(("eps∘eta' != 1", F))
    for A in cg_objects:
        if CG.compose(data.eps_prime.at(A), data.eta.at(A)) != CG.scale(n, CG.identity(A)):
            bad.append(("eps'∘eta != |G|", A))
    return bad


def hom_equivariant(CG: EquivariantCategory, A, B) -> list[Mor]:
    """Basis of the equivariant Hom space, as morphisms of the underlying category."""
    if not (CG.validate(A) and CG.validate(B)):
        raise PreconditionError("hom_equivariant needs validated equivariant objects")
    return [CG.to_parent(b) for b in CG.basis(A, B)]


def equivariant_structures(CG: EquivariantCategory, F, budget: int = DEFAULT_BUDGET,
                           degree_zero_closed: bool | None = None) -> list[EquivariantObject]:
    """Every θ-family on F (exhaustive over F_p within budget).

    θ is determined by its values on a generating set through
    θ_{hg} = ε_{g,h}(F)∘φ_g(θ_h)∘θ_g, so only those values are enumerated;
    each propagated family is then validated in full.  For DG categories
    the candidates are restricted to closed degree-0 morphisms.
    """
    a, C, G = CG.action, CG.parent, CG.group
    Fld = C.field
    if not Fld.is_finite:
        raise PreconditionError("exhaustive enumeration needs a finite field")
    gens = G.generators()
    dg = CG.is_dg if degree_zero_closed is None else degree_zero_closed
    spaces = []
    for s in gens:
        sF = a.act(s, F)
        n = C.hom_dim(F, sF)
        if dg:
            degs = C.degrees(F, sF)
            cols = [i for i in range(n) if degs[i] == 0]
            dmat = C.linear_map_matrix(F, sF, C.differential)
            sub = linalg.nullspace(Fld, [[r[i] for i in cols] for r in dmat], len(cols)) if cols else []
            basis = []
            for v in sub:
                full = [Fld.zero] * n
                for i, x in zip(cols, v):
                    full[i] = x
                basis.append(full)
        else:
            basis = linalg.identity(Fld, n)
        spaces.append((s, sF, n, basis))
    total = 1
    for _, _, _, b in spaces:
        total *= Fld.count(len(b))
    if total > budget:
        raise BudgetExceeded(f"θ-families on {F!r}", total, budget)
    out = []
    for combo in _product_points(Fld, spaces):
        thetas = {G.identity: a.unit(F)}
        for (s, sF, n, _), v in zip(spaces, combo):
            thetas[s] = Mor(F, sF, tuple(v))
        # propagation rejects most candidates with a few compositions, so it runs first
        full = _propagate(a, F, thetas, gens)
        if full is None or not all(C.is_iso(thetas[s]) for s in gens):
            continue
        A = EquivariantObject(F, tuple((g, full[g]) for g in G.elements))
        if CG.validate(A):
            out.append(A)
    return out


def _product_points(Fld, spaces):
    def rec(i):
        if i == len(spaces):
            yield []
            return
        _, _, n, basis = spaces[i]
        for cs in Fld.vectors(len(basis)):
            v = linalg.lincomb(Fld, cs, basis, n)
            for rest in rec(i + 1):
                yield [v] + rest
    yield from rec(0)


def _propagate(a: GroupAction, F, thetas: dict, gens) -> dict | None:
    C, G = a.category, a.group
    known = dict(thetas)
    queue = deque(known)
    while queue:
        h = queue.popleft()
        for g in gens:
            hg = G.mul(h, g)
            t = C.compose(a.eps(g, h, F), a.act(g, known[h]), known[g])
            if hg in known:
                if known[hg] != t:
                    return None
            else:
                known[hg] = t
                queue.append(hg)
    return known if len(known) == G.order else None


def equivariantize(action: GroupAction, objects: Sequence[EquivariantObject], name: str | None = None
                   ) -> EquivariantCategory:
    """C^G on an explicit list of equivariant objects (each validated)."""
    CG = EquivariantCategory(action, (), name)
    for A in objects:
        rep = CG.validate(A)
        if not rep:
            raise MalformedInputError(f"listed object {A!r} is invalid: {rep.violations[:3]!r}")
    CG.objects = tuple(objects)
    return CG


def check_induce_functorial(CG: EquivariantCategory, objects) -> list:
    ind = CG.induce()
    C = CG.parent
    bad = []
    for X in objects:
        for Y in objects:
            for Z in objects:
                for g in C.basis(Y, Z):
                    for f in C.basis(X, Y):
                        if ind(C.compose(g, f)) != CG.compose(ind(g), ind(f)):
                            bad.append((X, Y, Z))
    return bad
