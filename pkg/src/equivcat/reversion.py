"""Characters, the twist action on C^G, the regular comonad, and the reversion (C^G)^{G∨} → C."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .action import Group, GroupAction, check_action
from .equivar import (AdjunctionData, EquivariantCategory, EquivariantObject, adjunction_data)
from .errors import (BudgetExceeded, ConsistencyError, PreconditionError, RootsOfUnityError,
                     StructuralError)
from .karoubi import is_idempotent_complete
from .lincat import linalg
from .lincat.category import Mor
from .lincat.field import Field
from .lincat.functor import IdentityFunctor, LambdaFunctor, NatTrans, compose_functors, inverse_nat
from .lincat.search import DEFAULT_BUDGET, find_iso
from .monadic import (Comodule, ComoduleCategory, Comonad, EquivalenceVerdict, comonad_iso_failures,
                      comonad_of_adjunction, comparison_functor, transport_comodules)


@dataclass(frozen=True)
class Character:
    values: tuple  # ((g, χ(g)), ...) in group element order
    name: str = field(default="chi", compare=False)

    def __call__(self, g):
        for h, v in self.values:
            if h == g:
                return v
        raise KeyError(g)

    def __repr__(self):
        return self.name


class DualGroup(Group):
    def __init__(self, group: Group, fld: Field, characters: Sequence[Character]):
        self.base_group, self.field = group, fld
        chars = list(characters)
        triv = next(c for c in chars if all(v == fld.one for _, v in c.values))
        index = {c: c for c in chars}

        def prod(a, b):
            vals = tuple((g, fld.mul(a(g), b(g))) for g in group.elements)
            return index[Character(vals)]

        table = {(a, b): prod(a, b) for a in chars for b in chars}
        super().__init__(chars, table, triv, name=f"{group.name}^v")


def dual_group(G: Group, fld: Field) -> DualGroup:
    """All homomorphisms G → k*, found by assigning roots of unity to generators."""
    if not G.is_abelian:
        raise PreconditionError("the dual group is only used for abelian G")
    for n in sorted(set(G.orders.values())):
        if len(fld.roots_of_unity(n)) < n:
            raise RootsOfUnityError(n, fld)
    gens = G.generators()
    choices = [fld.roots_of_unity(G.element_order(s)) for s in gens]
    found = []

    def rec(i, assign):
        if i == len(gens):
            vals = _extend_character(G, fld, gens, assign)
            if vals is not None:
                found.append(vals)
            return
        for r in choices[i]:
            rec(i + 1, assign + [r])

    rec(0, [])
    found = sorted(set(found), key=lambda vs: [fld.format(v) for _, v in vs] != ["1"] * len(vs))
    chars = [Character(vs, name="chi0" if n == 0 else f"chi{n}") for n, vs in enumerate(found)]
    if len(chars) != G.order:
        raise RootsOfUnityError(G.exponent, fld)
    return DualGroup(G, fld, chars)


def _extend_character(G, fld, gens, assign):
    val = {G.identity: fld.one}
    frontier = [G.identity]
    while frontier:
        x = frontier.pop()
        for s, r in zip(gens, assign):
            y = G.mul(x, s)
            v = fld.mul(val[x], r)
            if y in val:
                if val[y] != v:
                    return None
            else:
                val[y] = v
                frontier.append(y)
    for g in G.elements:
        for h in G.elements:
            if val[G.mul(g, h)] != fld.mul(val[g], val[h]):
                return None
    return tuple((g, val[g]) for g in G.elements)


# -- twist action -------------------------------------------------------------------

def twist_action(CG: EquivariantCategory, dual: DualGroup) -> GroupAction:
    """φ_χ(F, θ) = (F, θ_h·χ(h)); strict, with identity ε."""
    C, G = CG.parent, CG.group

    def on_obj(chi):
        def f(A):
            return EquivariantObject(A.obj, tuple((h, C.scale(chi(h), t)) for h, t in A.theta))
        return f

    functors = {}
    for chi in dual.elements:
        obj = on_obj(chi)
        functors[chi] = LambdaFunctor(CG, CG, obj,
                                      (lambda o: lambda f: CG.from_parent(o(f.source), o(f.target), CG.to_parent(f)))(obj),
                                      name=f"phi_{chi.name}")
    return GroupAction(CG, dual, functors,
                       lambda a, b, A: CG.identity(functors[a](functors[b](A))), name="twist")


# -- regular comonad ----------------------------------------------------------------

class RegularComonad(Comonad):
    """R(F, θ) = k[G] ⊗ (F, θ): underlying ⊕_x F, θ^R_g sending summand x to gx."""

    def __init__(self, CG: EquivariantCategory):
        self.CG = CG
        C, G, a = CG.parent, CG.group, CG.action
        self._pos = {x: n for n, x in enumerate(G.elements)}
        self._cache = {}

        def on_obj(A):
            return self.apply(A)

        def on_mor(f):
            A, B = f.source, f.target
            dA, dB = self._sum(A.obj), self._sum(B.obj)
            pf = CG.to_parent(f)
            g = C.sum([C.compose(i, pf, p) for i, p in zip(dB.injections, dA.projections)], dA.obj, dB.obj)
            return CG.from_parent(self.apply(A), self.apply(B), g)

        R = LambdaFunctor(CG, CG, on_obj, on_mor, name="R")
        RR = compose_functors(R, R)

        def counit(A):
            d = self._sum(A.obj)
            return CG.from_parent(self.apply(A), A, C.sum(list(d.projections), d.obj, A.obj))

        def comult(A):
            RA = self.apply(A)
            d = self._sum(A.obj)
            dd = self._sum(RA.obj)
            terms = [C.compose(dd.injections[n], d.injections[n], d.projections[n]) for n in range(G.order)]
            return CG.from_parent(RA, self.apply(RA), C.sum(terms, d.obj, dd.obj))

        super().__init__(CG, R, NatTrans(R, IdentityFunctor(CG), counit, name="eps_R"),
                         NatTrans(R, RR, comult, name="delta_R"), name="R")

    def _sum(self, F):
        return self.CG.parent.direct_sum([F] * self.CG.group.order)

    def apply(self, A: EquivariantObject) -> EquivariantObject:
        out = self._cache.get(A)
        if out is None:
            CG = self.CG
            C, G, a = CG.parent, CG.group, CG.action
            d = self._sum(A.obj)
            thetas = []
            for g in G.elements:
                terms = [C.compose(a.act(g, d.injections[self._pos[G.mul(g, x)]]), A.theta_of(g),
                                   d.projections[self._pos[x]]) for x in G.elements]
                thetas.append((g, C.sum(terms, d.obj, a.act(g, d.obj))))
            out = self._cache[A] = EquivariantObject(d.obj, tuple(thetas))
        return out


def regular_comonad(CG: EquivariantCategory) -> RegularComonad:
    return RegularComonad(CG)


# -- β: T(p_*, p*) → R -----------------------------------------------------------

def beta_iso(CG: EquivariantCategory, data: AdjunctionData | None = None, R: RegularComonad | None = None
             ) -> tuple[NatTrans, Comonad, RegularComonad]:
    """β(F, θ) sends the summand φ_h F to e_{h⁻¹}⊗F by θ_h⁻¹."""
    data = data or adjunction_data(CG)
    T = comonad_of_adjunction(data.right_adjunction())
    R = R or RegularComonad(CG)
    C, G = CG.parent, CG.group
    pos = {x: n for n, x in enumerate(G.elements)}

    def comp(A):
        src, tgt = T(A), R(A)
        dT = CG._induced_sum(A.obj)
        dR = R._sum(A.obj)
        terms = [C.compose(dR.injections[pos[G.inv(h)]], C.inverse(A.theta_of(h)), dT.projections[pos[h]])
                 for h in G.elements]
        return CG.from_parent(src, tgt, C.sum(terms, dT.obj, dR.obj))

    return NatTrans(T.functor, R.functor, comp, name="beta"), T, R


# -- γ: ⊕_χ χ → k[G] -------------------------------------------------------------

@dataclass
class GammaIso:
    group: Group
    dual: DualGroup
    coeffs: dict  # (x, χ) -> c_{x,χ}: γ(1_χ) = Σ_x c_{x,χ} e_x

    def oracle(self) -> dict:
        """Character orthogonality: c_{x,χ} = χ(x)⁻¹/|G|."""
        F = self.dual.field
        n_inv = F.inv(F(self.group.order))
        return {(x, chi): F.mul(F.inv(chi(x)), n_inv) for x in self.group.elements for chi in self.dual.elements}


def gamma_iso(G: Group, dual: DualGroup) -> GammaIso:
    """Solve χ(g)·c_{x,χ} = c_{g⁻¹x,χ} together with Σ_χ c_{x,χ} = δ_{x,e}."""
    F = dual.field
    xs, chis = list(G.elements), list(dual.elements)
    idx = {(x, c): n for n, (x, c) in enumerate((x, c) for x in xs for c in chis)}
    N = len(idx)
    rows, rhs = [], []
    for g in xs:
        for x in xs:
            for c in chis:
                r = [F.zero] * N
                r[idx[(x, c)]] = F.add(r[idx[(x, c)]], c(g))
                r[idx[(G.mul(G.inv(g), x), c)]] = F.sub(r[idx[(G.mul(G.inv(g), x), c)]], F.one)
                rows.append(r)
                rhs.append(F.zero)
    for x in xs:
        r = [F.zero] * N
        for c in chis:
            r[idx[(x, c)]] = F.one
        rows.append(r)
        rhs.append(F.one if x == G.identity else F.zero)
    sol = linalg.solve_affine(F, rows, rhs, N)
    if sol is None:
        raise StructuralError("γ: equivariance and normalization have no common solution")
    if sol[1]:
        raise StructuralError("γ: equivariance and normalization do not determine γ")
    return GammaIso(G, dual, {k: sol[0][n] for k, n in idx.items()})


def gamma_comonad_iso(CG2: EquivariantCategory, data_q: AdjunctionData, R: RegularComonad, gamma: GammaIso
                      ) -> tuple[NatTrans, Comonad]:
    """γ⊗1: T(q*, q_*) = q*q_* → R, with components c_{x,χ}·id_F."""
    CG = R.CG
    C = CG.parent
    T = comonad_of_adjunction(data_q.left_adjunction())
    chis = list(gamma.dual.elements)
    xs = list(gamma.group.elements)

    def comp(A):
        dq = CG2._induced_sum(A)          # direct sum in C^G of φ_χ A
        dR = R._sum(A.obj)
        src = T(A)
        terms = []
        for n, chi in enumerate(chis):
            pj = CG.to_parent(dq.projections[n])
            for m, x in enumerate(xs):
                c = gamma.coeffs[(x, chi)]
                if c:
                    terms.append(C.scale(c, C.compose(dR.injections[m], pj)))
        return CG.from_parent(src, R(A), C.sum(terms, src.obj, dR.obj))

    return NatTrans(T.functor, R.functor, comp, name="gamma"), T


# -- the reversion equivalence ------------------------------------------------------------

@dataclass
class ReversionResult:
    functor: LambdaFunctor
    source_objects: list
    verdict: EquivalenceVerdict
    round_trip: dict = field(default_factory=dict)   # V -> (Ψ(𝔄_V), iso, inverse)
    stage_failures: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return (self.verdict.is_equivalence and not self.stage_failures
                and all(v is not None for v in self.round_trip.values()))


class Reversion:
    """All stages of (C^G)^{G∨} → (C^G)_{T(q*,q_*)} → (C^G)_R → (C^G)_{T(p_*,p*)} → C."""

    def __init__(self, action: GroupAction, c_objects: Sequence, budget: int = DEFAULT_BUDGET, seed: int = 0,
                 check_complete: bool = True):
        C, G = action.category, action.group
        self.action, self.budget, self.seed = action, budget, seed
        self.c_objects = list(c_objects)
        if check_complete:
            v = is_idempotent_complete(C, budget, objects=self.c_objects)
            if v.status == "no":
                raise PreconditionError(f"{C.name} is not idempotent complete: {v.witness!r} does not split")
            if v.status == "budget":
                raise BudgetExceeded("idempotent completeness check", v.skipped, budget)
        self.dual = dual_group(G, C.field)
        self.CG = EquivariantCategory(action)
        self.data_p = adjunction_data(self.CG)
        self.tw = twist_action(self.CG, self.dual)
        self.CG2 = EquivariantCategory(self.tw)
        self.data_q = adjunction_data(self.CG2)
        self.R = RegularComonad(self.CG)
        self.beta, self.Tp, _ = beta_iso(self.CG, self.data_p, self.R)
        self.gamma = gamma_iso(G, self.dual)
        self.alpha, self.Tq = gamma_comonad_iso(self.CG2, self.data_q, self.R, self.gamma)
        self.beta_inv = inverse_nat(self.beta)
        self.phi_q = comparison_functor(self.data_q.left_adjunction(), self.Tq)
        self.phi_p = comparison_functor(self.data_p.right_adjunction(), self.Tp)
        self.cat_R = ComoduleCategory(self.R)
        self.cat_p = self.phi_p.category
        self.to_R = transport_comodules(self.alpha, self.Tq, self.R, source=self.phi_q.category, target=self.cat_R)
        self.to_p = transport_comodules(self.beta_inv, self.R, self.Tp, source=self.cat_R, target=self.cat_p)
        self._preimage = {}

    # canonical objects of (C^G)^{G∨}

    def canonical_object(self, V) -> EquivariantObject:
        """𝔄_V = (p_*V, ψ) with ψ_χ = ⊕_h χ(h)⁻¹ on the summand φ_h V."""
        CG, C, G = self.CG, self.CG.parent, self.action.group
        A = CG.induced_object(V)
        d = CG._induced_sum(V)
        F = C.field
        thetas = {}
        for chi in self.dual.elements:
            terms = [C.scale(F.inv(chi(h)), C.compose(i, p)) for h, i, p in zip(G.elements, d.injections, d.projections)]
            psi = C.sum(terms, d.obj, d.obj)
            thetas[chi] = CG.from_parent(A, self.tw.act(chi, A), psi)
        return self.CG2.make(A, thetas, label=f"A[{V!r}]")

    def stage_failures(self, cg_objects, cg2_objects) -> list:
        bad = []
        bad += [("action",) + tuple(v) for v in check_action(self.tw, cg_objects).violations]
        bad += [("beta",) + v for v in comonad_iso_failures(self.beta, self.Tp, self.R, cg_objects)]
        bad += [("gamma",) + v for v in comonad_iso_failures(self.alpha, self.Tq, self.R, cg_objects)]
        bad += [("R",) + v for v in self.R.check(cg_objects).violations]
        bad += [("Phi_q",) + v for v in self.phi_q.identity_failures(cg2_objects, cg_objects)]
        bad += [("Phi_p",) + v for v in self.phi_p.identity_failures(self.c_objects, cg_objects)]
        return bad

    def to_comodule(self, A) -> Comodule:
        """Image of 𝔄 in (C^G)_{T(p_*,p*)} after the three comonad stages."""
        return self.to_p(self.to_R(self.phi_q.functor(A)))

    def preimage(self, A):
        """(V, iso Φ_p(V) → M, inverse) for M the image of 𝔄, by certified search over listed V."""
        hit = self._preimage.get(A)
        if hit is None:
            M = self.to_comodule(A)
            ran_out = False
            for V in self.c_objects:
                res = find_iso(self.cat_p, self.phi_p.functor(V), M, budget=self.budget, seed=self.seed)
                if res.found:
                    hit = (V, res.forward, res.backward)
                    break
                ran_out |= res.status == "budget"
            if hit is None:
                if ran_out:
                    raise BudgetExceeded(f"preimage of {A!r}", "unknown", self.budget)
                raise StructuralError(f"no listed object maps to {A!r}")
            self._preimage[A] = hit
        return hit

    def functor(self) -> LambdaFunctor:
        C = self.action.category
        cat_p, Phi = self.cat_p, self.phi_p.functor

        def on_mor(f):
            VA, iA, _ = self.preimage(f.source)
            VB, _, sB = self.preimage(f.target)
            # the image morphism in (C^G)_{T(p_*,p*)}, conjugated back onto Φ(V_A) → Φ(V_B)
            fm = self.to_p(self.to_R(self.phi_q.functor(f)))
            g = cat_p.compose(sB, fm, iA)
            M = Phi.hom_matrix(VA, VB)
            x = linalg.solve(C.field, M, list(g.coords), C.hom_dim(VA, VB)) if C.hom_dim(VA, VB) else []
            if x is None:
                raise ConsistencyError("comparison functor is not full on this pair")
            return Mor(VA, VB, tuple(x))

        return LambdaFunctor(self.CG2, C, lambda A: self.preimage(A)[0], on_mor, name="Psi")


def reversion_equivalence(action: GroupAction, c_objects: Sequence, extra_cg: Sequence = (),
                          budget: int = DEFAULT_BUDGET, seed: int = 0) -> ReversionResult:
    """Build Ψ: (C^G)^{G∨} → C on canonical objects 𝔄_V (and q_*𝔉 for listed 𝔉) and certify it."""
    from .monadic import check_equivalence
    rev = Reversion(action, c_objects, budget, seed)
    C = action.category
    sources = [rev.canonical_object(V) for V in rev.c_objects]
    ind_q = rev.CG2.induce()
    sources += [ind_q(A) for A in extra_cg]
    Psi = rev.functor()
    verdict = check_equivalence(Psi, sources, rev.c_objects, budget=budget, seed=seed)
    cg_objects = [A.obj for A in sources]
    failures = rev.stage_failures(cg_objects, sources)
    trip = {}
    for V, A in zip(rev.c_objects, sources):
        res = find_iso(C, Psi(A), V, budget=budget, seed=seed)
        trip[V] = (Psi(A), res.forward, res.backward) if res.found else None
    out = ReversionResult(Psi, sources, verdict, trip, failures)
    out.reversion = rev
    return out
