"""Packaged instances and end-to-end jobs.

Every job returns a :class:`JobResult`: a verdict, a JSON-ready
certificate (field elements written as strings, objects by their repr)
and the in-memory objects behind it.  The command line and the acceptance
tests both go through these functions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .action import Group, GroupAction, check_action, permutation_action, trivial_action
from .equivar import EquivariantCategory, adjunction_data, check_adjunction_identities, equivariant_structures
from .errors import BudgetExceeded
from .karoubi import (extend_action, extend_monad, is_idempotent_complete, karoubi_envelope,
                      restriction_failures)
from .lincat.category import LinearCategory, Mor, discrete_category, matrix_category, validate_category
from .lincat.envelope import AdditiveEnvelope
from .lincat.field import Field
from .lincat.search import DEFAULT_BUDGET
from .monadic import (check_equivalence, comodules_over, comonad_iso_failures, comonad_of_adjunction,
                      comparison_functor, monad_of_adjunction)

AFFIRMATIVE, NEGATIVE, BUDGET = "affirmative", "negative", "budget"


@dataclass
class JobResult:
    job: str
    verdict: str
    certificate: dict
    details: dict = field(default_factory=dict, repr=False)

    @property
    def affirmative(self) -> bool:
        return self.verdict == AFFIRMATIVE


# -- serialization helpers ---------------------------------------------------------

def coords(F: Field, f: Mor | None) -> list | None:
    return None if f is None else [F.format(c) for c in f.coords]


def mor_record(F: Field, f: Mor) -> dict:
    return {"source": repr(f.source), "target": repr(f.target), "coords": coords(F, f)}


def theta_record(F: Field, A) -> dict:
    return {str(g): coords(F, t) for g, t in A.theta}


def verdict_record(F: Field, v) -> dict:
    return {
        "status": v.status,
        "fully_faithful": v.fully_faithful,
        "essentially_surjective": v.essentially_surjective,
        "ranks": [[repr(X), repr(Y), n, m, r] for X, Y, n, m, r in v.ranks],
        "hits": [{"target": repr(T), "source": repr(h[0]), "forward": coords(F, h[1]), "backward": coords(F, h[2])}
                 for T, h in v.hits.items()],
        "missed": None if v.es_witness is None else repr(v.es_witness),
        "budget_exhausted": [repr(T) for T in v.budget_exhausted],
    }


# -- instances --------------------------------------------------------------------

@dataclass
class Instance:
    """A group action on the additive envelope of a finite category, with designated objects."""
    name: str
    field: Field
    base: LinearCategory
    envelope: AdditiveEnvelope
    group: Group
    action: GroupAction
    objects: list          # designated envelope objects (tuples of base objects)


def _on_envelope(name, F, base, G, base_action, objects=None) -> Instance:
    objs = [tuple(o) for o in (objects if objects is not None else [(X,) for X in base.objects])]
    E = AdditiveEnvelope(base, objs)
    return Instance(name, F, base, E, G, base_action.on_envelope(E), objs)


def trivial_group_instance(p: int = 5) -> Instance:
    F = Field.prime(p)
    M = matrix_category(F, (0, 1, 2))
    G = Group.trivial()
    return _on_envelope("trivial-group", F, M, G, trivial_action(M, G))


def trivial_z2_instance(p: int = 5, dims=(0, 1, 2)) -> Instance:
    """ℤ/2 acting trivially on the spaces k^n, n in dims."""
    F = Field.prime(p)
    M = matrix_category(F, dims)
    G = Group.cyclic(2)
    return _on_envelope("trivial-z2", F, M, G, trivial_action(M, G))


def swap_instance(p: int = 5) -> Instance:
    """ℤ/2 exchanging two objects X, Y with End = k."""
    F = Field.prime(p)
    D = discrete_category(F, ["X", "Y"], name="XY")
    G = Group.cyclic(2)
    perms = {0: {"X": "X", "Y": "Y"}, 1: {"X": "Y", "Y": "X"}}
    return _on_envelope("swap", F, D, G, permutation_action(D, G, perms), [("X",), ("Y",), ("X", "Y")])


def cyclic3_instance(p: int = 7) -> Instance:
    """ℤ/3 rotating three objects X0 → X1 → X2 with End = k, over F_7 (which has cube roots of unity)."""
    F = Field.prime(p)
    D = discrete_category(F, ["X0", "X1", "X2"], name="X3")
    G = Group.cyclic(3)
    perms = {g: {f"X{i}": f"X{(i + g) % 3}" for i in range(3)} for g in G.elements}
    return _on_envelope("cyclic3", F, D, G, permutation_action(D, G, perms),
                        [(), ("X0",), ("X1",), ("X2",)])


def even_instance(p: int = 5) -> Instance:
    """Trivial ℤ/2 on even-dimensional spaces only (k^0 and k^2)."""
    return trivial_z2_instance(p, dims=(0, 2))


INSTANCES = {
    "trivial-group": trivial_group_instance,
    "trivial-z2": trivial_z2_instance,
    "swap": swap_instance,
    "cyclic3": cyclic3_instance,
    "even": even_instance,
}


def all_structures(inst: Instance, budget: int = DEFAULT_BUDGET, CG: EquivariantCategory | None = None) -> list:
    CG = CG or EquivariantCategory(inst.action)
    out = []
    for X in inst.objects:
        out += equivariant_structures(CG, X, budget)
    return out


# -- jobs on an instance -------------------------------------------------------------

def job_validate(inst: Instance, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    rep = validate_category(inst.base)
    act = check_action(inst.action, inst.objects)
    ok = rep.ok and act.ok
    cert = {
        "category": inst.base.name, "checked": rep.checked,
        "violations": [repr(v) for v in rep.violations[:10]],
        "action_checked": act.checked, "action_violations": [repr(v) for v in act.violations[:10]],
    }
    return JobResult("validate", AFFIRMATIVE if ok else NEGATIVE, cert, {"report": rep, "action": act})


def job_envelope(inst: Instance, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    E = inst.envelope
    objs = list(inst.objects)
    nonzero = [X for X in objs if X]
    if len(nonzero) >= 2:
        objs.append(E.direct_sum(nonzero[:2]).obj)
    rep = validate_category(E, objs)
    dims = [[repr(X), repr(Y), E.hom_dim(X, Y)] for X in objs for Y in objs]
    cert = {"objects": [repr(X) for X in objs], "hom_dims": dims, "checked": rep.checked,
            "violations": [repr(v) for v in rep.violations[:10]]}
    return JobResult("envelope", AFFIRMATIVE if rep.ok else NEGATIVE, cert, {"report": rep})


def job_equivariantize(inst: Instance, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    CG = EquivariantCategory(inst.action)
    F = inst.field
    per = []
    total = 0
    for X in inst.objects:
        S = equivariant_structures(CG, X, budget)
        total += len(S)
        per.append({"object": repr(X), "count": len(S), "structures": [theta_record(F, A) for A in S]})
    cert = {"structures": per, "total": total}
    return JobResult("equivariantize", AFFIRMATIVE if total else NEGATIVE, cert, {"category": CG})


def job_adjunction(inst: Instance, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    """Both triangle identities for p* ⊣ p_* and p_* ⊣ p*, ε∘η′ = 1 and ε′∘η = |G|."""
    CG = EquivariantCategory(inst.action)
    cg = all_structures(inst, budget, CG)
    data = adjunction_data(CG)
    bad = check_adjunction_identities(data, inst.objects, cg)
    cert = {"c_objects": [repr(X) for X in inst.objects], "cg_objects": len(cg),
            "group_order": inst.group.order, "failures": [repr(b) for b in bad[:10]]}
    return JobResult("adjunction", NEGATIVE if bad else AFFIRMATIVE, cert, {"data": data, "cg": cg})


def job_comparison(inst: Instance, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    """C^G → C_T for T = p*p_*: enumerate every coaction on the listed objects and certify Φ."""
    F = inst.field
    CG = EquivariantCategory(inst.action)
    cg = all_structures(inst, budget, CG)
    data = adjunction_data(CG)
    adj = data.left_adjunction()
    T = comonad_of_adjunction(adj)
    Cat, counts = comodules_over(T, inst.objects, budget)
    comp = comparison_functor(adj, T)
    v = check_equivalence(comp.functor, cg, list(Cat.objects), budget, seed)
    bad = comp.identity_failures(cg, inst.objects)
    cert = {
        "coaction_counts": [[repr(c.obj), c.counit_solutions, c.found] for c in counts],
        "source_objects": len(cg), "comodules": len(Cat.objects),
        "verdict": verdict_record(F, v), "identity_failures": [repr(b) for b in bad[:10]],
    }
    status = v.status
    verdict = AFFIRMATIVE if status == "equivalence" and not bad else (BUDGET if status == "budget" else NEGATIVE)
    return JobResult("comparison", verdict, cert, {"verdict": v, "comodules": Cat, "counts": counts, "cg": cg})


def job_karoubi(inst: Instance, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    """Idempotent completeness of the envelope on the designated objects; extensions of the monad p*p_* and of the action to Kar."""
    F = inst.field
    # completeness is asked of the additive envelope, so the zero idempotent always splits
    base_objs = list(dict.fromkeys([()] + list(inst.objects)))
    v = is_idempotent_complete(inst.envelope, budget, objects=base_objs)
    K = karoubi_envelope(inst.envelope, budget, objects=[])
    K.objects = tuple(K.embed(X) for X in inst.objects)
    CG = EquivariantCategory(inst.action)
    data = adjunction_data(CG)
    S = monad_of_adjunction(data.right_adjunction())   # p*p_* on C
    Sbar = extend_monad(S, K)
    abar = extend_action(inst.action, K)
    bad_monad = restriction_failures(K, S.functor, Sbar.functor, inst.objects)
    bad_action = []
    for g in inst.group.elements:
        bad_action += [(g,) + tuple(b) for b in restriction_failures(K, inst.action.phi(g), abar.phi(g), inst.objects)]
    laws = Sbar.check(list(K.objects))
    cert = {
        "complete": v.status, "idempotents_checked": v.idempotents_checked,
        "witness": None if v.witness is None else {"object": repr(v.witness[0]), "idempotent": coords(F, v.witness[1])},
        "monad_restriction_failures": [repr(b) for b in bad_monad[:10]],
        "action_restriction_failures": [repr(b) for b in bad_action[:10]],
        "extended_monad_laws": laws.ok,
        "checked_objects": [repr(X) for X in base_objs],
    }
    # affirmative: the base is idempotent complete and both extensions restrict exactly
    ok = v.status == "yes" and not bad_monad and not bad_action and laws.ok
    verdict = BUDGET if v.status == "budget" else (AFFIRMATIVE if ok else NEGATIVE)
    return JobResult("karoubi", verdict, cert, {"completeness": v, "karoubi": K, "monad": Sbar, "action": abar})


def job_reversion(inst: Instance, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    from .reversion import reversion_equivalence
    F = inst.field
    c_objs = [X for X in inst.objects if X]
    res = reversion_equivalence(inst.action, c_objs, budget=budget, seed=seed)
    rev = res.reversion
    gamma = rev.gamma
    oracle = gamma.oracle()
    cert = {
        "dual_group": [c.name for c in rev.dual.elements],
        "characters": [[c.name, [F.format(v) for _, v in c.values]] for c in rev.dual.elements],
        "gamma": [[repr(x), chi.name, F.format(c)] for (x, chi), c in gamma.coeffs.items()],
        "gamma_matches_oracle": gamma.coeffs == oracle,
        "verdict": verdict_record(F, res.verdict),
        "stage_failures": [repr(b) for b in res.stage_failures[:10]],
        "round_trip": [{"object": repr(V), "image": repr(t[0]) if t else None,
                        "forward": coords(F, t[1]) if t else None, "backward": coords(F, t[2]) if t else None}
                       for V, t in res.round_trip.items()],
    }
    ok = res.certified and gamma.coeffs == oracle
    return JobResult("reversion", AFFIRMATIVE if ok else NEGATIVE, cert, {"result": res})


JOBS = {
    "validate": job_validate,
    "envelope": job_envelope,
    "equivariantize": job_equivariantize,
    "adjunction": job_adjunction,
    "comparison": job_comparison,
    "karoubi": job_karoubi,
    "reversion": job_reversion,
}


def run(job: str, inst: Instance, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    try:
        return JOBS[job](inst, budget, seed)
    except BudgetExceeded as e:
        return JobResult(job, BUDGET, {"budget_exceeded": str(e)})


# -- packaged checks on specific constructions -----------------------------------------

def beta_check(p: int = 5, budget: int = DEFAULT_BUDGET) -> JobResult:
    """β: T(p_*, p*) → R on the trivial ℤ/2 instance: natural, invertible, compatible with both comonad maps."""
    from .reversion import beta_iso
    inst = trivial_z2_instance(p)
    CG = EquivariantCategory(inst.action)
    cg = all_structures(inst, budget, CG)
    beta, Tp, R = beta_iso(CG)
    bad = comonad_iso_failures(beta, Tp, R, cg)
    kinds = ["not invertible", "counit compatibility", "comultiplication compatibility", "naturality"]
    cert = {"objects": len(cg), "failures": [repr(b) for b in bad[:10]],
            "checked": {k: not any(b[0] == k for b in bad) for k in kinds}}
    return JobResult("beta", NEGATIVE if bad else AFFIRMATIVE, cert, {"beta": beta, "objects": cg})


def even_dimension_check(p: int = 5, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    """Comparison C₀ → (C₀^G)_{T(p_*,p*)} for even-dimensional spaces, before and after idempotent completion.

    Over C₀ = {k^0, k^2} the comparison is fully faithful but misses a
    comodule on (k^2, swap) whose endomorphism algebra is one-dimensional,
    while every image has End of dimension 4n².  In Kar(C₀) the missing
    comodule is the image of (k^2, diag(1,0)) and the comparison is an
    equivalence on the listed objects.
    """
    inst = even_instance(p)
    F, E, G = inst.field, inst.envelope, inst.group
    X = ("k2",)
    CG = EquivariantCategory(inst.action)
    swap = CG.make(X, {0: E.identity(X), 1: E.mor(X, X, [0, 1, 1, 0])}, label="(k2,swap)")
    data = adjunction_data(CG)
    adj = data.right_adjunction()
    T = comonad_of_adjunction(adj)
    Cat, counts = comodules_over(T, [swap], budget)
    comp = comparison_functor(adj, T)
    sources = [(), X, (X[0], X[0])]
    before = check_equivalence(comp.functor, sources, list(Cat.objects), budget, seed)
    wit = before.es_witness
    wit_end = Cat.hom_dim(wit, wit) if wit is not None else None
    src_ends = [E.hom_dim(S, S) for S in sources]
    # repair in the idempotent completion
    K = karoubi_envelope(E, budget, objects=[])
    emb = K.embedding()
    half = K.make(X, E.mor(X, X, [1, 0, 0, 0]), label="(k2,diag(1,0))")
    K.objects = (emb(()), emb(X), half)
    aK = extend_action(inst.action, K)
    CGK = EquivariantCategory(aK)
    swK = CGK.make(emb(X), {0: K.identity(emb(X)), 1: K.mor(emb(X), emb(X), [0, 1, 1, 0])}, label="(k2,swap)")
    dK = adjunction_data(CGK)
    adjK = dK.right_adjunction()
    TK = comonad_of_adjunction(adjK)
    CatK, countsK = comodules_over(TK, [swK], budget)
    compK = comparison_functor(adjK, TK)
    after = check_equivalence(compK.functor, list(K.objects), list(CatK.objects), budget, seed)
    completeness = is_idempotent_complete(inst.base, budget)
    cert = {
        "coactions": len(Cat.objects),
        "before": verdict_record(F, before),
        "witness": None if wit is None else {"comodule": repr(wit), "coaction": coords(F, wit.coaction),
                                             "end_dim": wit_end},
        "source_end_dims": src_ends,
        "after": verdict_record(F, after),
        "base_complete": completeness.status,
        "base_witness": None if completeness.witness is None else coords(F, completeness.witness[1]),
    }
    negative_ok = before.fully_faithful and before.essentially_surjective is False and wit_end is not None \
        and wit_end % 2 == 1 and all(d % 4 == 0 for d in src_ends)
    ok = negative_ok and after.is_equivalence
    return JobResult("even-dimension", AFFIRMATIVE if ok else NEGATIVE, cert,
                     {"before": before, "after": after, "witness": wit, "karoubi": K, "half": half,
                      "completeness": completeness, "comodules": Cat})


def reversion_check(which: str = "trivial-z2", budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    inst = INSTANCES[which]()
    out = job_reversion(inst, budget, seed)
    out.job = f"reversion:{which}"
    return out


# -- DG jobs on the swap action on complexes of ℤ/3-graded spaces ---------------------------

def dg_structures_check(p: int = 5, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    """No DG-equivariant structure on M1 or M2, two on V0, and no listed object of
    A₀^G quasi-isomorphic to (V0, (1))."""
    from .dgcore import not_pretriangulated_report, swap_structures_instance
    inst = swap_structures_instance(p)
    o = inst.objects
    rep = not_pretriangulated_report(inst, budget, seed)
    counts = dict(rep.m_structures, V0=rep.v0_structures)
    qg = inst.ctx.qg_membership(inst.equivariant["V0+"], inst.lists["A0"], budget, seed)
    cert = {
        "structures": counts,
        "listed_structures": [[repr(X), n] for X, n in rep.structures.items()],
        "quasi_isomorphic_to_V0_plus": [repr(h[1]) for h in rep.quasi_iso_to_v0],
        "shifted_object_present": rep.shifted_present,
        "underlying_in_A0": {"member": qg.member, "witness": repr(qg.witness)},
        "phi_M1_is_M2": inst.action.act(1, o["M1"]) == o["M2"],
    }
    ok = counts["M1"] == 0 and counts["M2"] == 0 and counts["V0"] == 2 and rep.affirmative
    return JobResult("swap-not-pretriangulated", AFFIRMATIVE if ok else NEGATIVE, cert, {"instance": inst, "report": rep})


def dg_parity_check(p: int = 5, count: int = 100, seed: int = 0, budget: int = DEFAULT_BUDGET) -> JobResult:
    """Dimension relation and dim₀ Euler parity over sampled complexes built from M1, M2;
    no sampled equivariant object is isomorphic to (V0,(1)) in H⁰(A^G); the comparison
    from the completed H⁰ of A₂^G (and of A₁^G) into the equivariant category is an equivalence."""
    from .dgcore import swap_complexes_instance, split_unit_equivalence_check, parity_report, sample_complexes
    from .lincat.search import find_iso
    inst = swap_complexes_instance(p)
    sample = sample_complexes(inst, count, seed)
    relation_bad, parity_bad, balanced = [], [], 0
    for N in sample.complexes:
        r = parity_report(inst, N)
        balanced += r.balanced
        if r.relation_failures:
            relation_bad.append(repr(N))
        if r.parity_ok is False:
            parity_bad.append(repr(N))
    target = inst.equivariant["V0+"]
    eq_bad, iso_hits = [], []
    for A in sample.equivariant:
        r = parity_report(inst, A.obj, invariant=True)
        if not r.ok or not r.balanced:
            eq_bad.append(repr(A))
        res = find_iso(inst.ctx.HG, A, target, budget=budget, seed=seed)
        if res.status != "none":
            iso_hits.append([repr(A), res.status])
    o, eq = inst.objects, inst.equivariant
    a2 = split_unit_equivalence_check(inst.ctx, [eq["V0+"], eq["V0-"], eq["pM1"]], [o["V0"], o["M1"]], budget, seed)
    a1 = split_unit_equivalence_check(inst.ctx, [eq["pM1"]], [o["M1"]], budget, seed)
    # which A₁ targets correspond to (V0,(1)): compare with the image of the honest (V0,(1))
    v0plus = inst.ctx.psi()(inst.ctx.perf_object(target))
    missed_v0plus = [t for t in a1.missed_without_completion
                     if find_iso(inst.ctx.T, t, v0plus, budget=budget, seed=seed).found]
    hit_plus = [t for t in a2.verdict.hits if find_iso(inst.ctx.T, t, v0plus, budget=budget, seed=seed).found]
    F = inst.field
    cert = {
        "sampled": len(sample.complexes), "balanced": balanced, "equivariant_sampled": len(sample.equivariant),
        "relation_failures": relation_bad, "parity_failures": parity_bad,
        "equivariant_failures": eq_bad, "isomorphic_to_V0_plus": iso_hits,
        "A2": {"certified": a2.certified, "verdict": verdict_record(F, a2.verdict),
               "split_unit_failures": [repr(b) for b in a2.split_unit_failures], "targets": len(a2.targets)},
        "A1": {"certified": a1.certified, "verdict": verdict_record(F, a1.verdict),
               "missed_without_completion": [repr(t) for t in a1.missed_without_completion],
               "V0_plus_missed_without_completion": bool(missed_v0plus)},
        "A2_hits_V0_plus": bool(hit_plus), "seed": seed,
    }
    ok = (len(sample.complexes) >= count and not relation_bad and not parity_bad and not eq_bad
          and not iso_hits and a2.certified and len(a2.verdict.hits) == len(a2.targets) and hit_plus
          and a1.certified and missed_v0plus)
    return JobResult("swap-parity", AFFIRMATIVE if ok else NEGATIVE, cert,
                     {"instance": inst, "sample": sample, "A2": a2, "A1": a1})


PACKAGED_JOBS = {
    "beta": lambda budget, seed: beta_check(budget=budget),
    "even-dimension": lambda budget, seed: even_dimension_check(budget=budget, seed=seed),
    "reversion-z2": lambda budget, seed: reversion_check("trivial-z2", budget, seed),
    "reversion-z3": lambda budget, seed: reversion_check("cyclic3", budget, seed),
    "swap-not-pretriangulated": lambda budget, seed: dg_structures_check(budget=budget, seed=seed),
    "swap-parity": lambda budget, seed: dg_parity_check(seed=seed, budget=budget),
}


def run_packaged(name: str, budget: int = DEFAULT_BUDGET, seed: int = 0) -> JobResult:
    try:
        return PACKAGED_JOBS[name](budget, seed)
    except BudgetExceeded as e:
        return JobResult(name, BUDGET, {"budget_exceeded": str(e)})


def designated(inst: Instance, objects: Sequence) -> Instance:
    inst.objects = [tuple(o) for o in objects]
    inst.envelope.objects = tuple(inst.objects)
    return inst
