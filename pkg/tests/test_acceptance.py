"""One test per acceptance criterion.  Each prints a PASS/FAIL line and the
session summary repeats them in order."""
import time

from conftest import CRITERIA
from equivcat import cli, pipelines
from equivcat.karoubi import is_idempotent_complete
from equivcat.lincat import Field, matrix_category

from test_action import brute_involutions

LIMIT = 60.0
F5 = Field.prime(5)

# first-run results and reports, so each job runs once before the determinism rerun
RESULTS: dict[str, pipelines.JobResult] = {}
FIRST_RUN: dict[str, bytes] = {}


def report_bytes(result: pipelines.JobResult, seed: int = 0) -> bytes:
    return cli.emit_report(cli.make_report(result, seed, pipelines.DEFAULT_BUDGET), "json")


def remember(key: str, result: pipelines.JobResult) -> pipelines.JobResult:
    FIRST_RUN.setdefault(key, report_bytes(result))
    return result


def record(n: int, label: str, ok: bool, started: float):
    elapsed = time.perf_counter() - started
    ok = ok and elapsed < LIMIT
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {label} ({elapsed:.1f}s)"
    CRITERIA[n] = line
    print(line)
    assert ok, line


INSTANCE_JOBS = {
    "adjunction:trivial-group": lambda: pipelines.job_adjunction(pipelines.trivial_group_instance()),
    "adjunction:trivial-z2": lambda: pipelines.job_adjunction(pipelines.trivial_z2_instance()),
    "adjunction:swap": lambda: pipelines.job_adjunction(pipelines.swap_instance()),
    "comparison:trivial-z2": lambda: pipelines.job_comparison(pipelines.trivial_z2_instance()),
    "karoubi:trivial-z2": lambda: pipelines.job_karoubi(pipelines.trivial_z2_instance()),
    "karoubi:even": lambda: pipelines.job_karoubi(pipelines.even_instance()),
}
PACKAGED = {f"examples:{name}": (lambda name=name: pipelines.run_packaged(name)) for name in sorted(pipelines.PACKAGED_JOBS)}
ALL_JOBS = {**INSTANCE_JOBS, **PACKAGED}


def run_job(key: str) -> pipelines.JobResult:
    if key not in RESULTS:
        RESULTS[key] = remember(key, ALL_JOBS[key]())
    return RESULTS[key]


def test_criterion_01_adjunction_identities():
    t = time.perf_counter()
    ok = True
    for key in ("adjunction:trivial-group", "adjunction:trivial-z2", "adjunction:swap"):
        r = run_job(key)
        ok &= r.affirmative and r.certificate["failures"] == [] and r.certificate["cg_objects"] > 0
    record(1, "triangle identities, eps∘eta' = 1 and eps'∘eta = |G| on three instances", ok, t)


def test_criterion_02_comparison_equivalence_trivial_z2():
    t = time.perf_counter()
    r = run_job("comparison:trivial-z2")
    v = r.details["verdict"]
    found = {c.obj: c.found for c in r.details["counts"]}
    # coactions on k^n under the trivial action are the involutions of k^n
    oracle = all(found[(f"k{n}",)] == brute_involutions(n, 5) for n in (1, 2))
    ok = (r.affirmative and v.status == "equivalence" and oracle
          and all(n == m == rk for _, _, n, m, rk in v.ranks)
          and set(v.hits) == set(r.details["comodules"].objects)
          and not v.budget_exhausted)
    record(2, "comparison into comodules is an equivalence on trivial Z/2 over F_5", ok, t)


def test_criterion_03_even_dimension_negative_control():
    t = time.perf_counter()
    r = run_job("examples:even-dimension")
    before, after = r.details["before"], r.details["after"]
    wit = r.certificate["witness"]
    ok = (before.fully_faithful and before.essentially_surjective is False and wit is not None
          and wit["end_dim"] % 2 == 1 and all(d % 2 == 0 for d in r.certificate["source_end_dims"])
          and after.is_equivalence and r.affirmative)
    record(3, "even-dimensional comparison misses an odd comodule, repaired by the Karoubi envelope", ok, t)


def test_criterion_04_beta_is_a_comonad_isomorphism():
    t = time.perf_counter()
    r = run_job("examples:beta")
    ok = r.affirmative and r.certificate["failures"] == [] and all(r.certificate["checked"].values())
    record(4, "beta natural, invertible, compatible with counit and comultiplication", ok, t)


def _round_trip_ok(r: pipelines.JobResult) -> bool:
    res = r.details["result"]
    C = res.reversion.action.category
    ok = res.certified and bool(res.round_trip)
    for V, (image, fwd, bwd) in res.round_trip.items():
        # fwd: Ψ(𝔄_V) → V, checked independently of the search that found it
        ok &= (fwd.source == image and fwd.target == V
               and C.is_identity(C.compose(bwd, fwd)) and C.is_identity(C.compose(fwd, bwd)))
    return ok


def test_criterion_05_reversion_equivalence():
    t = time.perf_counter()
    ok = True
    for key in ("examples:reversion-z2", "examples:reversion-z3"):
        r = run_job(key)
        ok &= r.affirmative and r.certificate["stage_failures"] == [] and _round_trip_ok(r)
    record(5, "reversion is a certified equivalence for Z/2 over F_5 and Z/3 over F_7", ok, t)


def test_criterion_06_gamma_matches_character_orthogonality():
    t = time.perf_counter()
    ok = True
    for key in ("examples:reversion-z2", "examples:reversion-z3"):
        r = run_job(key)
        rev = r.details["result"].reversion
        p, n = rev.dual.field.p, len(rev.dual.elements)
        for (x, chi), c in rev.gamma.coeffs.items():
            ok &= c == pow(chi(x), p - 2, p) * pow(n, p - 2, p) % p
        ok &= r.certificate["gamma_matches_oracle"]
    record(6, "gamma coefficients equal chi(g)^-1 |G|^-1 on both instances", ok, t)


def test_criterion_07_swap_structures_and_scoped_report():
    t = time.perf_counter()
    r = run_job("examples:swap-not-pretriangulated")
    c = r.certificate
    ok = (r.affirmative and c["structures"] == {"M1": 0, "M2": 0, "V0": 2}
          and c["quasi_isomorphic_to_V0_plus"] == [] and c["phi_M1_is_M2"])
    record(7, "no structures on M1, M2, two on V0, no listed object quasi-isomorphic to (V0,(1))", ok, t)


def test_criterion_08_parity_over_sampled_complexes():
    t = time.perf_counter()
    r = run_job("examples:swap-parity")
    c = r.certificate
    ok = (r.affirmative and c["sampled"] >= 100 and c["relation_failures"] == [] and c["parity_failures"] == []
          and c["equivariant_failures"] == [] and c["isomorphic_to_V0_plus"] == []
          and c["A2"]["certified"] and c["A2"]["split_unit_failures"] == [] and c["A2_hits_V0_plus"])
    record(8, "dimension relation and Euler parity on >= 100 complexes, both simples hit over A2", ok, t)


def test_criterion_09_karoubi_suite():
    t = time.perf_counter()
    ok = True
    # every dimension up to the largest, so the zero idempotent splits too
    for ds in [(0,), (0, 1), (0, 1, 2), (2, 1, 0)]:
        ok &= is_idempotent_complete(matrix_category(F5, ds)).status == "yes"
    C0 = matrix_category(F5, (0, 2))
    v = is_idempotent_complete(C0)
    X, e = v.witness if v.witness else (None, None)
    ok &= (v.status == "no" and e is not None and C0.compose(e, e) == e
           and not C0.is_identity(e) and not C0.is_zero(e))
    for key in ("karoubi:trivial-z2", "karoubi:even"):
        c = run_job(key).certificate
        ok &= (c["monad_restriction_failures"] == [] and c["action_restriction_failures"] == []
               and c["extended_monad_laws"])
    ok &= run_job("karoubi:trivial-z2").affirmative
    record(9, "matrix categories complete, C0 not complete with witness, extensions restrict exactly", ok, t)


def test_criterion_10_reports_are_byte_identical():
    t = time.perf_counter()
    differing = []
    for key, make in ALL_JOBS.items():
        first = FIRST_RUN.get(key) or report_bytes(make())
        if report_bytes(make()) != first:
            differing.append(key)
    record(10, f"{len(ALL_JOBS)} jobs rerun with the same seed give identical JSON reports", not differing, t)
