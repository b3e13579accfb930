"""Command line front end: instance documents in, reports out.

An instance document is UTF-8 JSON.  Field scalars are written as decimal
strings ("3", "-1/2"); plain integers are accepted too.  Keys:

    name        free text
    field       {"prime": "5"} or {"rational": true}
    category    {"kind": "matrix", "dims": [0, 1, 2]}
                {"kind": "discrete", "objects": ["X", "Y"]}
                {"kind": "matrices", "objects": {"A": 2},
                 "homs": [{"source": "A", "target": "A", "basis": [matrix, ...]}]}
                {"kind": "constants", "objects": ["X"],
                 "homs": [{"source": "X", "target": "X", "dim": 1}],
                 "identities": {"X": ["1"]},
                 "constants": [{"triple": ["X", "X", "X"], "values": [[["1"]]]}]}
    group       {"cyclic": 2} or {"elements": [...], "identity": e, "table": [[g, h, gh], ...]}
    action      {"kind": "trivial"} or {"kind": "permutation", "perms": {g: {X: Y}}}
    objects     designated objects of the additive envelope, e.g. [["k1"], ["k1", "k2"]]
    dg          optional: {"degrees": [{"source", "target", "degrees"}],
                           "differentials": [{"source", "target", "matrix"}],
                           "twisted": {name: {"items": [[E, shift], ...],
                                              "delta": [{"from": i, "to": j, "coords": [...]}]}}}
    budget      enumeration budget (default: $EQUIVCAT_BUDGET, else 20000)
    seed        default seed for randomized searches

Exit statuses: 0 affirmative, 1 negative, 2 budget exceeded, 3 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import pipelines
from .action import Group, GroupAction, permutation_action, trivial_action
from .errors import BudgetExceeded, EquivcatError
from .lincat.category import LinearCategory, Presentation, discrete_category, matrix_category
from .lincat.field import Field, is_prime
from .lincat.search import DEFAULT_BUDGET

EXIT = {pipelines.AFFIRMATIVE: 0, pipelines.NEGATIVE: 1, pipelines.BUDGET: 2}
INPUT_ERROR = 3
FIXTURES = ("trivial-group", "trivial-z2", "swap", "cyclic3", "even", "swap-dg")
SUBCOMMANDS = ("validate", "envelope", "equivariantize", "adjunction", "comparison", "karoubi", "reversion",
               "dg", "examples")


class DocumentError(EquivcatError, ValueError):
    """An instance document that does not parse; carries a line:column position."""

    def __init__(self, message: str, path: str = "<input>", line: int | None = None, col: int | None = None):
        where = path if line is None else f"{path}:{line}:{col}"
        super().__init__(f"{where}: {message}")
        self.path, self.line, self.col = path, line, col


def default_budget() -> int:
    env = os.environ.get("EQUIVCAT_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise DocumentError(f"EQUIVCAT_BUDGET={env!r} is not an integer", "environment") from None
    return DEFAULT_BUDGET


# -- instance documents ---------------------------------------------------------------

@dataclass
class InstanceDocument:
    name: str
    field: Field
    category: LinearCategory
    group: Group
    action: GroupAction
    objects: list
    budget: int
    seed: int = 0
    twisted: dict = field(default_factory=dict)   # name -> (items, delta entries), DG documents only
    raw: dict = field(default_factory=dict, repr=False)
    path: str = "<input>"

    @property
    def is_dg(self) -> bool:
        return bool(getattr(self.category, "is_dg", False))

    def instance(self) -> pipelines.Instance:
        return pipelines._on_envelope(self.name, self.field, self.category, self.group, self.action,
                                      self.objects)


class _Locator:
    """Finds the line of a key path in the raw text, for semantic diagnostics."""

    def __init__(self, text: str, path: str):
        self.text, self.path = text, path

    def error(self, message: str, *keys) -> DocumentError:
        pos = 0
        found = None
        for k in keys:
            if not isinstance(k, str):
                continue
            i = self.text.find(json.dumps(k), pos)
            if i >= 0:
                found = pos = i
        if found is None:
            return DocumentError(message, self.path)
        line = self.text.count("\n", 0, found) + 1
        col = found - (self.text.rfind("\n", 0, found) + 1) + 1
        return DocumentError(message, self.path, line, col)


def fixture_text(name: str) -> str:
    return resources.files("equivcat").joinpath("fixtures", f"{name}.json").read_text(encoding="utf-8")


def parse_instance(source: str | os.PathLike, budget: int | None = None) -> InstanceDocument:
    """Parse a document from a path, or a built-in fixture by name."""
    src = str(source)
    if src in FIXTURES:
        text, path = fixture_text(src), f"fixture:{src}"
    else:
        p = Path(src)
        if not p.is_file():
            raise DocumentError(f"no such file or fixture (fixtures: {', '.join(FIXTURES)})", src)
        text, path = p.read_text(encoding="utf-8"), src
    return parse_document(text, path, budget)


def parse_document(text: str, path: str = "<input>", budget: int | None = None) -> InstanceDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(e.msg, path, e.lineno, e.colno) from None
    loc = _Locator(text, path)
    if not isinstance(raw, dict):
        raise DocumentError("top level must be an object", path, 1, 1)
    for key in ("field", "category", "group", "action"):
        if key not in raw:
            raise DocumentError(f"missing required key {key!r}", path)
    try:
        return _build(raw, loc, path, budget)
    except DocumentError:
        raise
    except EquivcatError as e:
        raise loc.error(str(e), "category") from None
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise loc.error(f"malformed document: {type(e).__name__}: {e}") from None


def _scalar(F: Field, x, loc: _Locator, *keys):
    try:
        return F.parse(str(x))
    except EquivcatError as e:
        raise loc.error(str(e), *keys) from None


def _parse_field(spec, loc: _Locator) -> Field:
    if not isinstance(spec, dict):
        raise loc.error("field must be {\"prime\": p} or {\"rational\": true}", "field")
    if spec.get("rational"):
        return Field.rationals()
    if "prime" not in spec:
        raise loc.error("field must be {\"prime\": p} or {\"rational\": true}", "field")
    try:
        p = int(str(spec["prime"]))
    except ValueError:
        raise loc.error(f"prime {spec['prime']!r} is not an integer", "field", "prime") from None
    if not is_prime(p):
        raise loc.error(f"{p} is not prime", "field", "prime")
    return Field.prime(p)


def _parse_category(spec, F: Field, loc: _Locator, dg) -> LinearCategory:
    kind = spec.get("kind") if isinstance(spec, dict) else None
    name = spec.get("name") if isinstance(spec, dict) else None
    if kind == "matrix":
        pres = matrix_category(F, tuple(int(n) for n in spec.get("dims", (0, 1, 2))), name=name)
    elif kind == "discrete":
        pres = discrete_category(F, list(spec["objects"]), name=name or "D")
    elif kind == "matrices":
        objs = {str(k): int(v) for k, v in spec["objects"].items()}
        bases = {}
        for h in spec.get("homs", []):
            X, Y = _known(h, objs, loc)
            bases[(X, Y)] = [[[_scalar(F, x, loc, "homs") for x in row] for row in m] for m in h["basis"]]
        pres = Presentation.from_matrices(F, objs, bases, name=name or "C")
    elif kind == "constants":
        objs = [str(X) for X in spec["objects"]]
        dims = {}
        for h in spec.get("homs", []):
            dims[_known(h, objs, loc)] = int(h["dim"])
        ids = {X: [_scalar(F, x, loc, "identities", X) for x in v] for X, v in spec.get("identities", {}).items()}
        consts = {}
        for c in spec.get("constants", []):
            t = tuple(c["triple"])
            if len(t) != 3 or any(X not in objs for X in t):
                raise loc.error(f"triple {list(t)!r} names an unknown object", "constants")
            consts[t] = [[[_scalar(F, x, loc, "constants") for x in r] for r in k] for k in c["values"]]
        pres = Presentation(F, objs, dims, consts, ids, name=name or "C")
    else:
        raise loc.error(f"unknown category kind {kind!r} (matrix, discrete, matrices, constants)", "category")
    if dg is None:
        return pres
    from .dgcore import DGPresentation
    degrees, diffs = {}, {}
    for d in dg.get("degrees", []):
        degrees[_known(d, pres.objects, loc)] = tuple(int(x) for x in d["degrees"])
    for d in dg.get("differentials", []):
        diffs[_known(d, pres.objects, loc)] = [[_scalar(F, x, loc, "differentials") for x in r] for r in d["matrix"]]
    return DGPresentation(F, pres.objects, pres.dims, pres.constants, pres.identities, degrees, diffs,
                          labels=pres.labels, name=pres.name)


def _known(entry: dict, objs, loc: _Locator):
    X, Y = entry.get("source"), entry.get("target")
    for Z in (X, Y):
        if Z not in objs:
            raise loc.error(f"unknown object {Z!r}", Z if isinstance(Z, str) else "source")
    return X, Y


def _parse_group(spec, loc: _Locator) -> Group:
    if isinstance(spec, dict) and "cyclic" in spec:
        n = int(spec["cyclic"])
        if n < 1:
            raise loc.error("cyclic group order must be positive", "group", "cyclic")
        return Group.cyclic(n)
    try:
        els = list(spec["elements"])
        table = {(g, h): gh for g, h, gh in spec["table"]}
        return Group(els, table, spec["identity"], name=spec.get("name", "G"))
    except (KeyError, TypeError, ValueError) as e:
        raise loc.error(f"bad group table: {e}", "group") from None


def _element(G: Group, key, loc: _Locator):
    for g in G.elements:
        if str(g) == str(key):
            return g
    raise loc.error(f"{key!r} is not a group element", "action", str(key))


def _parse_action(spec, cat: LinearCategory, G: Group, loc: _Locator) -> GroupAction:
    kind = spec.get("kind") if isinstance(spec, dict) else None
    if kind == "trivial":
        return trivial_action(cat, G)
    if kind == "permutation":
        perms = {g: {X: X for X in cat.objects} for g in G.elements}
        for key, m in spec.get("perms", {}).items():
            g = _element(G, key, loc)
            for X, Y in m.items():
                if X not in cat.objects or Y not in cat.objects:
                    raise loc.error(f"permutation mentions unknown object {X if X not in cat.objects else Y!r}",
                                    "action", "perms", key)
                perms[g][X] = Y
        return permutation_action(cat, G, perms)
    raise loc.error(f"unknown action kind {kind!r} (trivial, permutation)", "action")


def _build(raw: dict, loc: _Locator, path: str, budget: int | None) -> InstanceDocument:
    F = _parse_field(raw["field"], loc)
    dg = raw.get("dg")
    cat = _parse_category(raw["category"], F, loc, dg)
    G = _parse_group(raw["group"], loc)
    action = _parse_action(raw["action"], cat, G, loc)
    objs = raw.get("objects")
    if objs is None:
        objects = [(X,) for X in cat.objects]
    else:
        objects = []
        for o in objs:
            o = tuple(o) if isinstance(o, list) else (o,)
            for X in o:
                if X not in cat.objects:
                    raise loc.error(f"designated object mentions unknown {X!r}", "objects", X)
            objects.append(o)
    b = budget if budget is not None else raw.get("budget")
    b = default_budget() if b is None else int(b)
    twisted = {}
    if dg is not None:
        for name, t in dg.get("twisted", {}).items():
            items = [(str(E), int(r)) for E, r in t["items"]]
            for E, _ in items:
                if E not in cat.objects:
                    raise loc.error(f"twisted complex {name!r} mentions unknown {E!r}", "twisted", name)
            delta = [(int(d["from"]), int(d["to"]), tuple(_scalar(F, x, loc, "twisted", name) for x in d["coords"]))
                     for d in t.get("delta", [])]
            twisted[name] = (items, delta)
    return InstanceDocument(str(raw.get("name", Path(path).stem)), F, cat, G, action, objects, b,
                            int(raw.get("seed", 0)), twisted, raw, path)


# -- jobs --------------------------------------------------------------------------

def job_dg(doc: InstanceDocument, budget: int, seed: int) -> pipelines.JobResult:
    """DG axioms, Maurer-Cartan for the named twisted complexes, the lifted
    action, and the number of DG-equivariant structures on each."""
    from .dgcore import TwistedCategory, check_dg_action, check_dg_category, dg_equivariant_structures
    from .equivar import EquivariantCategory
    from .errors import MalformedInputError
    if not doc.is_dg:
        raise DocumentError("the dg job needs a document with a \"dg\" section", doc.path)
    F = doc.field
    rep = check_dg_category(doc.category)
    tw = TwistedCategory(doc.category, name=f"Tw({doc.category.name})")
    complexes, bad_mc = {}, []
    for name, (items, delta) in doc.twisted.items():
        objs = [E for E, _ in items]
        blocks = {}
        for i, j, c in delta:
            if not (0 <= i < len(objs) and 0 <= j < len(objs)):
                raise DocumentError(f"twisted complex {name!r}: block ({i},{j}) out of range", doc.path)
            blocks[(i, j)] = doc.category.mor(objs[i], objs[j], c)
        try:
            complexes[name] = tw.make(items, blocks, label=name)
        except MalformedInputError as e:
            bad_mc.append([name, str(e)])
    action = tw.lift_action(doc.action)
    listed = list(complexes.values())
    act_bad = check_dg_action(action, listed)
    CG = EquivariantCategory(action)
    counts, thetas = {}, {}
    if not act_bad:
        for name, T in complexes.items():
            S = dg_equivariant_structures(action, T, budget, CG=CG)
            counts[name] = len(S)
            thetas[name] = [pipelines.theta_record(F, A) for A in S]
    cert = {
        "dg_checked": rep.checked, "dg_violations": [repr(v) for v in rep.violations[:10]],
        "maurer_cartan_failures": bad_mc, "action_violations": [repr(v) for v in act_bad[:10]],
        "structure_counts": counts, "structures": thetas,
    }
    ok = rep.ok and not bad_mc and not act_bad
    return pipelines.JobResult("dg", pipelines.AFFIRMATIVE if ok else pipelines.NEGATIVE, cert,
                               {"twisted": tw, "complexes": complexes})


def run_job(doc: InstanceDocument | None, job: str, budget: int, seed: int) -> pipelines.JobResult:
    try:
        if job == "dg":
            return job_dg(doc, budget, seed)
        if job in pipelines.JOBS:
            return pipelines.JOBS[job](doc.instance(), budget, seed)
        if job in pipelines.PACKAGED_JOBS:
            return pipelines.PACKAGED_JOBS[job](budget, seed)
    except BudgetExceeded as e:
        return pipelines.JobResult(job, pipelines.BUDGET, {"budget_exceeded": str(e)})
    raise DocumentError(f"unknown job {job!r}", "command line")


# -- reports -----------------------------------------------------------------------

def make_report(result: pipelines.JobResult, seed: int, budget: int, doc: InstanceDocument | None = None,
                elapsed: float | None = None) -> dict:
    rep = {
        "job": result.job,
        "verdict": result.verdict,
        "seed": seed,
        "budget": budget,
        "certificate": result.certificate,
    }
    if doc is not None:
        rep["instance"] = doc.raw
    if elapsed is not None:
        rep["timing_seconds"] = elapsed
    return rep


def emit_report(report: dict, fmt: str = "json") -> bytes:
    """``json``: sorted keys, no timing, byte-stable for a fixed seed.  ``text``: for people."""
    if fmt == "json":
        body = {k: v for k, v in report.items() if k != "timing_seconds"}
        return (json.dumps(body, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "text":
        lines = [f"job: {report['job']}", f"verdict: {report['verdict']}",
                 f"seed: {report['seed']}", f"budget: {report['budget']}"]
        if "timing_seconds" in report:
            lines.append(f"time: {report['timing_seconds']:.2f}s")
        lines.append("certificate:")
        for k in sorted(report["certificate"]):
            lines.append(f"  {k}: {json.dumps(report['certificate'][k], sort_keys=True, ensure_ascii=False)}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r} (json, text)")


def parse_report(data: bytes | str) -> dict:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return json.loads(data)


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="equivcat", description="Exact checks for group actions on linear and DG categories.")
    ap.add_argument("command", choices=SUBCOMMANDS)
    ap.add_argument("--input", help=f"instance document path or fixture name ({', '.join(FIXTURES)})")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--budget", type=int, default=None, help=f"enumeration budget (default $EQUIVCAT_BUDGET or {DEFAULT_BUDGET})")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--job", help=f"for 'examples': one of {', '.join(pipelines.PACKAGED_JOBS)}")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = None
        if args.command == "examples":
            if args.job not in pipelines.PACKAGED_JOBS:
                raise DocumentError(f"--job must be one of {', '.join(pipelines.PACKAGED_JOBS)}", "command line")
            job = args.job
            budget = args.budget if args.budget is not None else default_budget()
        else:
            if not args.input:
                raise DocumentError("--input is required", "command line")
            doc = parse_instance(args.input, args.budget)
            job, budget = args.command, doc.budget
        seed = args.seed if args.seed is not None else (doc.seed if doc else 0)
        t0 = time.perf_counter()
        result = run_job(doc, job, budget, seed)
        elapsed = time.perf_counter() - t0
    except EquivcatError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    sys.stdout.buffer.write(emit_report(make_report(result, seed, budget, doc, elapsed), args.format))
    sys.stdout.flush()
    return EXIT[result.verdict]


if __name__ == "__main__":
    sys.exit(main())
