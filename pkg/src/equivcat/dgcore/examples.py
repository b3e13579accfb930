"""The swap action on complexes of ℤ/3-graded vector spaces.

V0, V1, V2 are the simple graded spaces (a discrete DG category in degree
0); complexes of graded spaces are twisted complexes over them.  The
element g of ℤ/2 swaps V1 and V2.  M_i = V0 ⊕ [V_i → V_i] sits in
degrees −1 and 0, so M_i ≅ V0 in H⁰ while φ_g(M_1) = M_2.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..action import Group, permutation_action
from ..equivar import EquivariantObject
from ..errors import BudgetExceeded, PreconditionError
from ..lincat.category import discrete_category
from ..lincat.field import Field
from ..lincat.search import DEFAULT_BUDGET, find_iso
from .dgcat import DGPresentation, closed_degree_zero_basis, cohomology_dims, dg_from_linear
from .equivariant import EquivariantPerf, dg_equivariant_structures, equivariant_cone, equivariant_shift
from .twisted import TwistedCategory, TwistedComplex

GRADES = {"V0": (1, 0, 0), "V1": (0, 1, 0), "V2": (0, 0, 1)}


@dataclass
class SwapInstance:
    field: Field
    group: Group
    base: DGPresentation
    tw: TwistedCategory
    action: object
    ctx: EquivariantPerf
    objects: dict                      # name -> TwistedComplex
    lists: dict = field(default_factory=dict)       # name -> [TwistedComplex]
    equivariant: dict = field(default_factory=dict)  # name -> EquivariantObject

    @property
    def CG(self):
        return self.ctx.CG


def _swap_instance(p: int = 5) -> SwapInstance:
    F = Field.prime(p)
    base = dg_from_linear(discrete_category(F, ["V0", "V1", "V2"], name="gr3"), name="gr3")
    G = Group.cyclic(2)
    perms = {0: {"V0": "V0", "V1": "V1", "V2": "V2"}, 1: {"V0": "V0", "V1": "V2", "V2": "V1"}}
    base_action = permutation_action(base, G, perms)
    tw = TwistedCategory(base, name="C_dg(gr3)")
    action = tw.lift_action(base_action)
    V = {c: tw.base_object(c) for c in ("V0", "V1", "V2")}

    def M(i):
        Vi = f"V{i}"
        return tw.make([("V0", 0), (Vi, 1), (Vi, 0)], {(1, 2): base.identity(Vi)}, label=f"M{i}")

    objects = dict(V)
    objects["M1"], objects["M2"] = M(1), M(2)
    ctx = EquivariantPerf(action)
    inst = SwapInstance(F, G, base, tw, action, ctx, objects)
    CG = ctx.CG
    minus = F(-1)
    V0 = V["V0"]
    inst.equivariant["V0+"] = CG.make(V0, {0: tw.identity(V0), 1: tw.identity(V0)}, label="(V0,1)")
    inst.equivariant["V0-"] = CG.make(V0, {0: tw.identity(V0), 1: tw.scale(minus, tw.identity(V0))},
                                      label="(V0,sign)")
    ind = CG.induced_object(objects["M1"])
    inst.equivariant["pM1"] = EquivariantObject(ind.obj, ind.theta, label="p_*(M1)")
    return inst


def swap_structures_instance(p: int = 5) -> SwapInstance:
    """Swap instance with a finite designated stand-in for A₀.

    A₀ keeps every object of A not quasi-isomorphic to V0, plus M1 and M2;
    the list below is the part of it the checks run over.
    """
    inst = _swap_instance(p)
    tw, o = inst.tw, inst.objects
    V0, V1, V2, M1, M2 = (o[k] for k in ("V0", "V1", "V2", "M1", "M2"))
    s = lambda *xs: tw.direct_sum(xs).obj  # noqa: E731
    inst.lists["A0"] = [
        tw.zero_object(), V1, V2, s(V1, V2), M1, M2, s(M1, M2),
        tw.shift(V0, -1), tw.shift(V0, 1), s(V0, V0), tw.shift(V1, 1), tw.shift(s(V1, V2), 1),
        tw.cone(tw.zero(V1, V2)),
    ]
    inst.lists["A"] = [V0, V1, V2, M1, M2]
    V0m = tw.shift(V0, -1)
    CG = inst.CG
    inst.equivariant["V0+[-1]"] = CG.make(V0m, {0: tw.identity(V0m), 1: tw.identity(V0m)}, label="(V0,1)[-1]")
    return inst


def swap_complexes_instance(p: int = 5) -> SwapInstance:
    """Swap instance with generator sets for A₁ = ⟨M1, M2⟩ and A₂ = ⟨M1, M2, V0⟩."""
    inst = _swap_instance(p)
    o = inst.objects
    inst.lists["A1_generators"] = [o["M1"], o["M2"]]
    inst.lists["A2_generators"] = [o["M1"], o["M2"], o["V0"]]
    return inst


# -- graded dimensions ------------------------------------------------------

def graded_dimensions(N: TwistedComplex) -> dict:
    """{cohomological degree i: (dim₀, dim₁, dim₂) of Nⁱ}; item (E, r) sits in degree −r."""
    out: dict = {}
    for E, r in N.items:
        if E not in GRADES:
            raise PreconditionError(f"{E!r} is not a simple graded space")
        cur = out.get(-r, (0, 0, 0))
        out[-r] = tuple(a + b for a, b in zip(cur, GRADES[E]))
    return dict(sorted(out.items()))


@dataclass
class ParityReport:
    dims: dict                  # degree -> (dim0, dim1, dim2)
    relation_failures: list     # degrees where dim1+dim2 != dim0(i) + dim0(i+1)
    h_dim0: dict                # degree -> dim₀ Hⁱ(N)
    euler_dim0: int
    balanced: bool              # dim1(Nⁱ) = dim2(Nⁱ) in every degree
    invariant: bool | None      # has a DG-equivariant structure (None: not decided)
    parity_ok: bool | None      # Euler characteristic of dim₀ H* even, when balanced

    @property
    def ok(self) -> bool:
        return not self.relation_failures and self.parity_ok is not False


def parity_report(inst: SwapInstance, N: TwistedComplex, invariant: bool | None = None,
                  generators=("M1", "M2")) -> ParityReport:
    """Dimension bookkeeping for a twisted complex built from M1, M2 by shifts and cones.

    The construction history is replayed from the named generators and must
    reproduce N exactly.
    """
    gens = {k: inst.objects[k] for k in generators}
    functors = {f.name: f for f in inst.action.functors.values()}
    if N.origin is None or inst.tw.rebuild(N.origin, gens, functors) != N:
        raise PreconditionError(f"{N!r} is not built from {list(generators)} by shifts and cones")
    dims = graded_dimensions(N)
    degrees = sorted(set(dims) | {i - 1 for i in dims})
    d = lambda i: dims.get(i, (0, 0, 0))  # noqa: E731
    failures = [i for i in degrees if d(i)[1] + d(i)[2] != d(i)[0] + d(i + 1)[0]]
    h = cohomology_dims(inst.tw, inst.objects["V0"], N)
    # Hom(V0, N) in degree n is the V0-part of Nⁿ, so these are dim₀ Hⁿ(N)
    euler = sum((-1) ** (i % 2) * k for i, k in h.items())
    balanced = all(v[1] == v[2] for v in dims.values())
    parity = (euler % 2 == 0) if (balanced or invariant) else None
    return ParityReport(dims, failures, h, euler, balanced, invariant, parity)


# -- sampling twisted complexes over M1, M2 ----------------------------------

@dataclass
class Sample:
    complexes: list                   # TwistedComplex, all built from the generators
    equivariant: list                 # EquivariantObject over some of them
    seed: int


def sample_complexes(inst: SwapInstance, count: int = 100, seed: int = 0, max_items: int = 9,
                     generators=("M1", "M2")) -> Sample:
    """Seeded random shifts, cones of random closed degree-0 maps, and sums.

    Every third step also builds an equivariant object: the induced object
    p_*p*N, or an equivariant shift or cone of earlier ones.
    """
    rng = random.Random(seed)
    tw, F, CG = inst.tw, inst.field, inst.CG
    pool = [inst.objects[k] for k in generators]
    seen = set(pool)
    out = list(pool)
    eq: list = []
    closed: dict = {}

    def closed_basis(S, T):
        if (S, T) not in closed:
            closed[(S, T)] = closed_degree_zero_basis(tw, S, T)
        return closed[(S, T)]

    def random_map(S, T):
        b = closed_basis(S, T)
        z = tw.zero(S, T)
        return tw.add(z, *[tw.scale(F.random_element(rng), x) for x in b]) if b else z

    steps = 0
    while len(out) < count:
        steps += 1
        if steps > 50 * count:
            raise BudgetExceeded("twisted complex sampling", steps, 50 * count)
        op = rng.choice(("shift", "cone", "cone", "sum"))
        S = rng.choice(pool)
        if op == "shift":
            N = tw.shift(S, rng.choice((-2, -1, 1, 2)))
        elif op == "cone":
            T = rng.choice(pool)
            if len(S.items) + len(T.items) > max_items:
                continue
            N = tw.cone(random_map(S, T))
        else:
            T = rng.choice(pool)
            if len(S.items) + len(T.items) > max_items:
                continue
            N = tw.direct_sum([S, T]).obj
        if N in seen:
            continue
        seen.add(N)
        out.append(N)
        pool.append(N)
        if len(out) % 3 == 0:
            eq.append(_equivariant_step(inst, rng, N, eq, max_items))
    return Sample(out, eq, seed)


def _equivariant_step(inst, rng, N, eq, max_items):
    CG, F = inst.CG, inst.field
    if eq and rng.random() < 0.5:
        A = rng.choice(eq)
        if rng.random() < 0.5 or len(A.obj.items) * 2 > 2 * max_items:
            return equivariant_shift(CG, A, rng.choice((-1, 1)))
        B = rng.choice(eq)
        if len(A.obj.items) + len(B.obj.items) <= 2 * max_items:
            closed = closed_degree_zero_basis(CG, A, B)
            f = CG.add(CG.zero(A, B), *[CG.scale(F.random_element(rng), b) for b in closed]) if closed \
                else CG.zero(A, B)
            return equivariant_cone(CG, f)
    ind = CG.induced_object(N)
    return EquivariantObject(ind.obj, ind.theta, label=f"p_*({N!r})")


# -- the scoped report for A₀ -------------------------------------------------

@dataclass
class NotPretriangulatedReport:
    structures: dict            # listed object -> number of DG-equivariant structures
    quasi_iso_to_v0: list       # (object, structure) quasi-isomorphic to (V0,(1)); empty when affirmative
    m_structures: dict          # "M1"/"M2" -> count (expected 0)
    v0_structures: int
    shifted_present: bool       # (V0,(1))[-1] is an object of A₀^G

    @property
    def affirmative(self) -> bool:
        return not self.quasi_iso_to_v0 and not any(self.m_structures.values()) and self.shifted_present


def not_pretriangulated_report(inst: SwapInstance, budget: int = DEFAULT_BUDGET, seed: int = 0
                               ) -> NotPretriangulatedReport:
    """No listed object of A₀^G is quasi-isomorphic to (V0, (1)), though (V0,(1))[-1] is in A₀^G."""
    a, ctx = inst.action, inst.ctx
    target = inst.equivariant["V0+"]
    counts, hits = {}, []
    for X in inst.lists["A0"]:
        structs = dg_equivariant_structures(a, X, budget, CG=ctx.CG)
        counts[X] = len(structs)
        # an isomorphism in H⁰(A^G) forgets to one in H⁰(A), so test the underlying object first
        if structs and find_iso(ctx.H, X, target.obj, budget=budget, seed=seed).status == "none":
            continue
        for A in structs:
            res = find_iso(ctx.HG, A, target, budget=budget, seed=seed)
            if res.status != "none":
                hits.append((X, A, res.status))
    o = inst.objects
    m = {k: len(dg_equivariant_structures(a, o[k], budget, CG=ctx.CG)) for k in ("M1", "M2")}
    v0 = len(dg_equivariant_structures(a, o["V0"], budget, CG=ctx.CG))
    shifted = inst.tw.shift(o["V0"], -1) in inst.lists["A0"] and counts.get(inst.tw.shift(o["V0"], -1), 0) > 0
    return NotPretriangulatedReport(counts, hits, m, v0, shifted)
