"""One-sided twisted complexes over a DG category: shifts, cones and sums.

A twisted complex is a list of items (E_i, r_i), read as ⊕ E_i[r_i], with a
degree-1 endomorphism δ that is strictly lower triangular (δ only maps an
item to later items) and satisfies D(δ) + δ∘δ = 0.

Morphism coordinates reuse the additive-envelope block layout on the
underlying base objects.  A block b ∈ Hom(E_i, E'_j) of base degree |b|
has degree |b| − s_j + r_i, where r_i, s_j are the source and target
shifts.  Composition is the plain block product; the differential is

    𝔇(f) = D(f) + δ_T∘f − (−1)^{|f|} f∘δ_S,  D(f)_{ij} = (−1)^{s_j} d(f_{ij})

for f: S → T.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Sequence

from ..action import GroupAction
from ..errors import BudgetExceeded, ConsistencyError, MalformedInputError, PreconditionError
from ..lincat import linalg
from ..lincat.category import DirectSum, LinearCategory, Mor
from ..lincat.envelope import AdditiveEnvelope
from ..lincat.functor import Functor
from .dgcat import closed_degree_zero_basis, is_closed_degree_zero


@dataclass(frozen=True)
class TwistedComplex:
    items: tuple  # ((base object, shift), ...)
    delta: tuple  # coordinates of δ in End
    label: str | None = field(default=None, compare=False)
    origin: tuple | None = field(default=None, compare=False)
    objs: tuple = field(init=False, compare=False, repr=False)
    shifts: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "objs", tuple(E for E, _ in self.items))
        object.__setattr__(self, "shifts", tuple(r for _, r in self.items))

    def __repr__(self):
        if self.label:
            return self.label
        return "Tw[" + ", ".join(f"{E}[{r}]" if r else str(E) for E, r in self.items) + "]"


class TwistedCategory(LinearCategory):
    is_dg = True

    def __init__(self, base: LinearCategory, objects: Sequence = (), name: str | None = None):
        if not getattr(base, "is_dg", False):
            raise PreconditionError(f"{base.name} is not a DG category")
        self.base = base
        self.field = base.field
        self.env = AdditiveEnvelope(base)
        self.objects = tuple(objects)
        self.name = name or f"Tw({base.name})"
        self._degs: dict = {}

    # -- linear structure ----------------------------------------------------

    def hom_dim(self, S, T) -> int:
        return self.env.hom_dim(S.objs, T.objs)

    def _compose(self, S, T, U, g, f):
        return self.env._compose(S.objs, T.objs, U.objs, g, f)

    def _identity(self, S):
        return self.env._identity(S.objs)

    def zero_object(self) -> TwistedComplex:
        return TwistedComplex((), (), "0", ("zero",))

    def block(self, f: Mor, i: int, j: int) -> Mor:
        return self.env.block(Mor(f.source.objs, f.target.objs, f.coords), i, j)

    def from_blocks(self, S, T, blocks: dict) -> Mor:
        m = self.env.from_blocks(S.objs, T.objs, blocks)
        return Mor(S, T, m.coords)

    # -- grading and differential --------------------------------------------

    def degrees(self, S, T) -> tuple:
        key = (S.items, T.items)
        out = self._degs.get(key)
        if out is None:
            off = self.env.offsets(S.objs, T.objs)
            out = [0] * off["total"]
            for (i, j), (pos, d) in ((k, v) for k, v in off.items() if k != "total"):
                bd = self.base.degrees(S.objs[i], T.objs[j])
                for a in range(d):
                    out[pos + a] = bd[a] - T.shifts[j] + S.shifts[i]
            out = self._degs[key] = tuple(out)
        return out

    def _inner_d(self, S, T, coords) -> list:
        F = self.field
        out = [F.zero] * len(coords)
        off = self.env.offsets(S.objs, T.objs)
        for i, j, b in self.env._blocks(S.objs, T.objs, coords):
            db = self.base._differential(S.objs[i], T.objs[j], tuple(b))
            if T.shifts[j] % 2:
                db = linalg.vscale(F, F(-1), db)
            pos, d = off[(i, j)]
            out[pos:pos + d] = db
        return out

    def _differential(self, S, T, coords) -> tuple:
        F = self.field
        degs = self.degrees(S, T)
        total = self._inner_d(S, T, coords)
        parts = {}
        for i, c in enumerate(coords):
            if c:
                parts.setdefault(degs[i], [F.zero] * len(coords))[i] = c
        for n, part in parts.items():
            part = tuple(part)
            left = self._compose(S, T, T, T.delta, part)
            right = self._compose(S, S, T, part, S.delta)
            if n % 2 == 0:
                right = linalg.vscale(F, F(-1), right)
            total = linalg.vadd(F, total, linalg.vadd(F, left, right))
        return tuple(total)

    def differential(self, f: Mor) -> Mor:
        return Mor(f.source, f.target, self._differential(f.source, f.target, f.coords))

    # -- objects ---------------------------------------------------------------

    def maurer_cartan(self, T) -> tuple:
        """D(δ) + δ∘δ, which vanishes exactly for a twisted complex."""
        F = self.field
        dd = self._inner_d(T, T, T.delta)
        return tuple(linalg.vadd(F, dd, self._compose(T, T, T, T.delta, T.delta)))

    def violations(self, T) -> list:
        n = self.env.hom_dim(T.objs, T.objs)
        if len(T.delta) != n:
            return [f"δ has {len(T.delta)} coordinates, End has {n}"]
        bad = []
        degs = self.degrees(T, T)
        if any(c and d != 1 for d, c in zip(degs, T.delta)):
            bad.append("δ is not homogeneous of degree 1")
        if any(j <= i for i, j, _ in self.env._blocks(T.objs, T.objs, T.delta)):
            bad.append("δ is not strictly lower triangular")
        if any(self.maurer_cartan(T)):
            bad.append("Maurer-Cartan equation fails")
        return bad

    def make(self, items, delta_blocks: dict | None = None, label: str | None = None,
             origin: tuple | None = None) -> TwistedComplex:
        """Build from items and ``{(i, j): base morphism}`` blocks of δ (item i → item j)."""
        items = tuple((E, int(r)) for E, r in items)
        objs = tuple(E for E, _ in items)
        delta = self.env.from_blocks(objs, objs, delta_blocks or {}).coords
        T = TwistedComplex(items, delta, label, origin or ("generator", label))
        bad = self.violations(T)
        if bad:
            raise MalformedInputError(f"not a twisted complex: {bad}")
        return T

    def base_object(self, E, shift: int = 0, label: str | None = None) -> TwistedComplex:
        T = self.make([(E, shift)], label=label or (f"{E}[{shift}]" if shift else str(E)))
        return TwistedComplex(T.items, T.delta, T.label, ("generator", T.label))

    def shift(self, T: TwistedComplex, n: int) -> TwistedComplex:
        """T[n]: every shift raised by n and δ multiplied by (−1)^n."""
        if n == 0:
            return T
        F = self.field
        delta = tuple(linalg.vscale(F, F(-1), T.delta)) if n % 2 else T.delta
        out = TwistedComplex(tuple((E, r + n) for E, r in T.items), delta,
                             f"{T!r}[{n}]", ("shift", T, n))
        self._require(out)
        return out

    def cone(self, f: Mor) -> TwistedComplex:
        """Cone(f: S → T) = S[1] ⊕ T with δ = [[−δ_S, 0], [f, δ_T]]."""
        S, T = f.source, f.target
        if not is_closed_degree_zero(self, f):
            raise PreconditionError("cone needs a closed morphism of degree 0")
        S1 = self.shift(S, 1)
        m = len(S.items)
        items = S1.items + T.items
        objs = tuple(E for E, _ in items)
        blocks = {}
        for i, j, b in self.env._blocks(S1.objs, S1.objs, S1.delta):
            blocks[(i, j)] = Mor(objs[i], objs[j], b)
        for i, j, b in self.env._blocks(T.objs, T.objs, T.delta):
            blocks[(m + i, m + j)] = Mor(objs[m + i], objs[m + j], b)
        for i, j, b in self.env._blocks(S.objs, T.objs, f.coords):
            blocks[(i, m + j)] = Mor(objs[i], objs[m + j], b)
        delta = self.env.from_blocks(objs, objs, blocks).coords
        out = TwistedComplex(items, delta, f"Cone({S!r}->{T!r})", ("cone", S, T, f.coords))
        self._require(out)
        return out

    def _require(self, T):
        bad = self.violations(T)
        if bad:
            raise ConsistencyError(f"construction produced an invalid twisted complex: {bad}")

    def direct_sum(self, objs) -> DirectSum:
        objs = list(objs)
        ds = self.env.direct_sum([T.objs for T in objs])
        items = tuple(it for T in objs for it in T.items)
        blocks, start = {}, 0
        for T in objs:
            for i, j, b in self.env._blocks(T.objs, T.objs, T.delta):
                blocks[(start + i, start + j)] = Mor(T.objs[i], T.objs[j], b)
            start += len(T.items)
        delta = self.env.from_blocks(ds.obj, ds.obj, blocks).coords
        label = " ⊕ ".join(repr(T) for T in objs) if objs else "0"
        S = TwistedComplex(items, delta, label, ("sum", tuple(objs)))
        inj = tuple(Mor(T, S, i.coords) for T, i in zip(objs, ds.injections))
        proj = tuple(Mor(S, T, p.coords) for T, p in zip(objs, ds.projections))
        return DirectSum(S, tuple(objs), inj, proj)

    def rebuild(self, origin, generators: dict, functors: dict | None = None) -> TwistedComplex:
        """Re-run a construction recorded in ``origin`` from named generators.

        ``functors`` (by name) may be applied along the way; each must map the
        generator set into itself, so the result stays in the generated hull.
        """
        kind = origin[0]
        functors = functors or {}
        if kind == "generator":
            if origin[1] not in generators:
                raise PreconditionError(f"{origin[1]!r} is not an allowed generator")
            return generators[origin[1]]
        if kind == "image":
            Fn = functors.get(origin[1])
            if Fn is None or any(Fn(X) not in generators.values() for X in generators.values()):
                raise PreconditionError(f"functor {origin[1]!r} is not allowed here")
            return Fn(self.rebuild(origin[2].origin, generators, functors))
        if kind == "zero":
            return self.zero_object()
        if kind == "shift":
            return self.shift(self.rebuild(origin[1].origin, generators, functors), origin[2])
        if kind == "cone":
            S = self.rebuild(origin[1].origin, generators, functors)
            T = self.rebuild(origin[2].origin, generators, functors)
            return self.cone(Mor(S, T, origin[3]))
        if kind == "sum":
            return self.direct_sum([self.rebuild(T.origin, generators, functors) for T in origin[1]]).obj
        raise PreconditionError(f"construction step {kind!r} is not a shift, cone or sum")

    # -- functors and actions ------------------------------------------------

    def lift_functor(self, Fn: Functor) -> "TwistedLift":
        return TwistedLift(Fn, self)

    def lift_action(self, a: GroupAction) -> GroupAction:
        """Blockwise action on twisted complexes from an action on the base."""
        if a.category is not self.base:
            raise PreconditionError("the action lives on a different base category")
        functors = {g: TwistedLift(a.phi(g), self) for g in a.group.elements}
        G = a.group

        def eps(g, h, T):
            src = functors[g](functors[h](T))
            tgt = functors[G.mul(h, g)](T)
            blocks = {(i, i): a.eps(g, h, E) for i, E in enumerate(T.objs)}
            return self.from_blocks(src, tgt, blocks)

        return GroupAction(self, G, functors, eps, name=a.name)


class TwistedLift(Functor):
    """A DG functor of the base applied item by item and block by block."""

    def __init__(self, Fn: Functor, cat: TwistedCategory):
        self.base_functor = Fn
        self.source = self.target = cat
        self.name = Fn.name
        self._objs: dict = {}

    def on_object(self, T):
        out = self._objs.get(T)
        if out is None:
            cat, Fn = self.source, self.base_functor
            objs = tuple(Fn(E) for E in T.objs)
            blocks = {(i, j): Fn(Mor(T.objs[i], T.objs[j], b))
                      for i, j, b in cat.env._blocks(T.objs, T.objs, T.delta)}
            delta = cat.env.from_blocks(objs, objs, blocks).coords
            items = tuple((E, r) for E, (_, r) in zip(objs, T.items))
            label = f"{Fn.name}({T!r})"
            out = self._objs[T] = TwistedComplex(items, delta, label, ("image", Fn.name, T))
        return out

    def on_morphism(self, f):
        cat, Fn = self.source, self.base_functor
        S, T = f.source, f.target
        blocks = {(i, j): Fn(Mor(S.objs[i], T.objs[j], b))
                  for i, j, b in cat.env._blocks(S.objs, T.objs, f.coords)}
        return cat.from_blocks(self.on_object(S), self.on_object(T), blocks)


def pretr(cat: TwistedCategory, generators: Sequence[TwistedComplex], depth: int = 1,
          budget: int = 200, shifts: Sequence[int] = (-1, 1)) -> TwistedCategory:
    """Close a generator list under shifts, cones and the zero object, ``depth`` rounds.

    Cones are taken of every scalar multiple of every closed degree-0 basis
    morphism between objects already present (scalars over F_p; 0 and 1
    over ℚ).  Exceeding ``budget`` objects raises BudgetExceeded.
    """
    F = cat.field
    scalars = list(F.elements()) if F.is_finite else [F.zero, F.one]
    found: dict = {}

    def add(T):
        if T not in found:
            found[T] = None
            if len(found) > budget:
                raise BudgetExceeded("pretriangulated hull", len(found), budget)

    add(cat.zero_object())
    for T in generators:
        add(T)
    for _ in range(depth):
        current = list(found)
        for T in current:
            for n in shifts:
                add(cat.shift(T, n))
        for S in current:
            for T in current:
                add(cat.cone(cat.zero(S, T)))
                for b in closed_degree_zero_basis(cat, S, T):
                    for c in scalars:
                        add(cat.cone(cat.scale(c, b)))
    return TwistedCategory(cat.base, list(found), name=f"Pretr({cat.name})")
