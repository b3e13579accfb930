"""Equivariant objects of DG categories, perfect objects at the H⁰ level, and the Q_G test."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..action import GroupAction
from ..equivar import EquivariantCategory, EquivariantObject, adjunction_data, equivariant_structures
from ..errors import PreconditionError
from ..karoubi import KaroubiCategory, KaroubiObject, extend_action, karoubi_envelope
from ..lincat.category import Mor
from ..lincat.functor import LambdaFunctor
from ..lincat.search import DEFAULT_BUDGET, enumerate_idempotents, find_iso
from ..monadic import EquivalenceVerdict, check_equivalence
from .dgcat import H0Category, check_dg_action, h0_action, is_closed_degree_zero
from .twisted import TwistedCategory, pretr


def dg_equivariant_structures(action: GroupAction, F, budget: int = DEFAULT_BUDGET,
                              CG: EquivariantCategory | None = None) -> list[EquivariantObject]:
    """Every family of closed degree-0 isomorphisms θ_g: F → φ_g F satisfying the
    compatibility conditions, exhaustive over F_p within the budget."""
    bad = check_dg_action(action, [F])
    if bad:
        raise PreconditionError(f"not a DG action at {F!r}: {bad[:3]!r}")
    CG = CG or EquivariantCategory(action)
    return equivariant_structures(CG, F, budget, degree_zero_closed=True)


def hom_dg_equivariant(CG: EquivariantCategory, A, B) -> list[Mor]:
    """Basis of the equivariant Hom complex Hom_{A^G}(A, B) ⊆ Hom_A(A, B).

    Raises PreconditionError if either object does not belong to this action,
    and ConsistencyError if the subspace were not closed under d.
    """
    for X in (A, B):
        rep = CG.validate(X)
        if not rep:
            raise PreconditionError(f"{X!r} is not equivariant for {CG.action!r}: {rep.violations[:2]!r}")
    basis = CG.basis(A, B)
    for b in basis:
        CG.differential(b)
    return [CG.to_parent(b) for b in basis]


def equivariant_shift(CG: EquivariantCategory, A: EquivariantObject, n: int) -> EquivariantObject:
    """(F, θ)[n] for an action lifted blockwise to twisted complexes."""
    Tw = CG.parent
    S = Tw.shift(A.obj, n)
    thetas = {g: Mor(S, CG.action.act(g, S), t.coords) for g, t in A.theta}
    return CG.make(S, thetas, label=f"{A!r}[{n}]")


def equivariant_cone(CG: EquivariantCategory, f: Mor) -> EquivariantObject:
    """Cone of a closed degree-0 equivariant morphism, with θ = θ_A[1] ⊕ θ_B."""
    Tw, a = CG.parent, CG.action
    A, B = f.source, f.target
    g0 = CG.to_parent(f)
    C = Tw.cone(g0)
    m = len(A.obj.items)
    thetas = {}
    for g in CG.group.elements:
        gC = a.act(g, C)
        blocks = {}
        for src, shift in ((A, 0), (B, m)):
            t = src.theta_of(g)
            for i, j, b in Tw.env._blocks(t.source.objs, t.target.objs, t.coords):
                blocks[(shift + i, shift + j)] = Mor(C.objs[shift + i], gC.objs[shift + j], b)
        thetas[g] = Tw.from_blocks(C, gC, blocks)
    return CG.make(C, thetas, label=f"Cone({A!r}->{B!r})")


def perf_h0(tw: TwistedCategory, generators, depth: int = 1, budget: int = DEFAULT_BUDGET,
            hull_budget: int = 200) -> KaroubiCategory:
    """Karoubi envelope of H⁰ of the twisted-complex hull of the generators."""
    P = pretr(tw, generators, depth, hull_budget)
    H = H0Category(P)
    return karoubi_envelope(H, budget)


@dataclass
class QGResult:
    member: bool | None
    witness: object = None
    forward: Mor | None = None   # class p*M -> witness in H⁰(Perf A)
    backward: Mor | None = None
    tried: list = field(default_factory=list)


class EquivariantPerf:
    """The categories around a DG action on twisted complexes.

    ``HG`` = H⁰(A^G) and ``KG`` its idempotent completion stand for
    H⁰(Perf(A^G)); ``H`` = H⁰(A), ``K`` its completion, and ``T`` the
    equivariant category of the induced action on ``K``.
    """

    def __init__(self, action: GroupAction):
        tw = action.category
        if not isinstance(tw, TwistedCategory):
            raise PreconditionError("expected an action on a category of twisted complexes")
        self.action, self.tw, self.group = action, tw, action.group
        self.CG = EquivariantCategory(action)
        self.HG = H0Category(self.CG)
        self.KG = KaroubiCategory(self.HG)
        self.H = H0Category(tw)
        self.K = KaroubiCategory(self.H)
        self.aH = h0_action(action, self.H)
        self.aK = extend_action(self.aH, self.K)
        self.T = EquivariantCategory(self.aK)

    # -- objects of H⁰(Perf(A^G)) ------------------------------------------------

    def perf_object(self, E: EquivariantObject, e: Mor | None = None) -> KaroubiObject:
        """(E, e) for an idempotent class e of End_{H⁰(A^G)}(E); e defaults to id."""
        return KaroubiObject(E, self.HG.identity(E) if e is None else e)

    def summands(self, E: EquivariantObject, budget: int = DEFAULT_BUDGET) -> list[KaroubiObject]:
        """(E, e) for every nonzero idempotent class e, identity first."""
        idems = enumerate_idempotents(self.HG, E, budget)
        idems.sort(key=lambda e: (not self.HG.is_identity(e), e.coords))
        return [KaroubiObject(E, e) for e in idems if not self.HG.is_zero(e)]

    def forget(self, M: KaroubiObject) -> KaroubiObject:
        """p*: H⁰(Perf(A^G)) → H⁰(Perf(A))."""
        return KaroubiObject(M.obj.obj, self._down(M.idem))

    def _down(self, f: Mor) -> Mor:
        return self.H.cls(self.CG.to_parent(self.HG.rep(f)))

    # -- the comparison functor ----------------------------------------------

    def psi_object(self, M: KaroubiObject) -> EquivariantObject:
        E = M.obj
        KN = self.forget(M)
        thetas = []
        for g, t in E.theta:
            tgt = self.aK.act(g, KN)
            thetas.append((g, self.K.from_parent(KN, tgt, self.H.compose(self.H.cls(t), KN.idem))))
        return EquivariantObject(KN, tuple(thetas), label=f"Psi({E!r})")

    def psi(self) -> LambdaFunctor:
        """Ψ: H⁰(Perf(A^G)) → H⁰(Perf(A))^G on (E, e) ↦ ((E, ē), [θ]∘ē)."""
        cache: dict = {}

        def on_obj(M):
            out = cache.get(M)
            if out is None:
                out = cache[M] = self.psi_object(M)
            return out

        def on_mor(f):
            A, B = on_obj(f.source), on_obj(f.target)
            k = self.K.from_parent(A.obj, B.obj, self._down(self.KG.to_parent(f)))
            return self.T.from_parent(A, B, k)

        return LambdaFunctor(self.KG, self.T, on_obj, on_mor, name="Psi")

    # -- membership in Q_G ------------------------------------------------------

    def qg_membership(self, M, a_objects, budget: int = DEFAULT_BUDGET, seed: int = 0) -> QGResult:
        """Is p*M quasi-isomorphic (isomorphic in H⁰(Perf A)) to a listed object of A?

        An affirmative answer carries two verified mutually inverse classes;
        a negative one is exhaustive over the list within the budget.
        """
        if isinstance(M, EquivariantObject):
            M = self.perf_object(M)
        PM = self.forget(M)
        tried = []
        for X in a_objects:
            res = find_iso(self.K, PM, self.K.embed(X), budget=budget, seed=seed)
            tried.append((X, res.status))
            if res.found:
                return QGResult(True, X, self.K.to_parent(res.forward), self.K.to_parent(res.backward), tried)
        return QGResult(None if any(s == "budget" for _, s in tried) else False, None, None, None, tried)


def qg_membership(ctx: EquivariantPerf, M, a_objects, budget: int = DEFAULT_BUDGET, seed: int = 0) -> QGResult:
    return ctx.qg_membership(M, a_objects, budget, seed)


@dataclass
class SplitUnitCertificate:
    verdict: EquivalenceVerdict             # Ψ on the completed source
    unsplit_verdict: EquivalenceVerdict     # Ψ restricted to H⁰(A^G) itself
    split_unit_failures: list               # where ε′/|G| fails to be a closed left inverse of η
    source_objects: list
    targets: list
    missed_without_completion: list

    @property
    def certified(self) -> bool:
        return not self.split_unit_failures and self.verdict.is_equivalence


def split_unit_equivalence_check(ctx: EquivariantPerf, source: list, target_underlying: list,
                     budget: int = DEFAULT_BUDGET, seed: int = 0) -> SplitUnitCertificate:
    """Certify Ψ: H⁰(Perf(A^G)) → H⁰(Perf(A))^G on lists.

    ``source`` are equivariant objects of A; the source side uses every
    summand cut out by an idempotent class.  Targets are all equivariant
    structures on the listed objects of A inside H⁰(Perf(A)).  The unit
    η: Id → p_*p* is checked to have the closed left inverse ε′/|G|.
    """
    CG, G = ctx.CG, ctx.group
    Fld = CG.field
    data = adjunction_data(CG)
    inv = Fld.inv(Fld(G.order))
    bad = []
    for A in source:
        eta, epsp = data.eta.at(A), data.eps_prime.at(A)
        for name, m in (("eta", eta), ("eps'", epsp)):
            if not is_closed_degree_zero(CG, m):
                bad.append((name + " not closed of degree 0", A))
        if not CG.is_identity(CG.compose(CG.scale(inv, epsp), eta)):
            bad.append(("eps'/|G| is not a left inverse of eta", A))
    src = [M for A in source for M in ctx.summands(A, budget)]
    targets = []
    for X in target_underlying:
        targets += equivariant_structures(ctx.T, ctx.K.embed(X), budget)
    Psi = ctx.psi()
    verdict = check_equivalence(Psi, src, targets, budget, seed)
    plain = [ctx.perf_object(A) for A in source]
    unsplit = check_equivalence(Psi, plain, targets, budget, seed)
    missed = [t for t in targets if t not in unsplit.hits]
    return SplitUnitCertificate(verdict, unsplit, bad, src, targets, missed)
