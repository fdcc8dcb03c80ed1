"""Fixpoints, minimality-based stable fixpoints and constructive stable fixpoints.

Signatures are finite, so the limit-ordinal clause of well-founded sequences
never applies: every sequence is a finite chain and breadth-first search over
the reachable sets decides reachability exactly.

Lower sequences run inside [∅, y]. Upper sequences run inside [x, ⊤] and start
at x, the bottom of that sublattice; for x ≠ ∅ the upper bound at any pair
(x, y') with y' ⊉ x is empty, so a sequence started at ∅ would never move.
"""
from __future__ import annotations

import enum
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .errors import AssumptionViolation, ResourceCapExceeded, UnsupportedProgram
from .evaluation import is_model, is_supported_model
from .lattice import AtomSet, AtomSetFamily, Pair, Signature, canonical_key, canonical_sort, iter_submasks
from .limits import current_limits
from .operators import OperatorKind, bounds_masks, engine
from .syntax import ChoiceProgram, is_monotone


class Flavor(str, enum.Enum):
    MINIMAL = "minimal"
    CONSTRUCTIVE = "constructive"


@dataclass(frozen=True)
class WfsTrace:
    steps: tuple[AtomSet, ...]

    @property
    def terminal(self) -> AtomSet:
        return self.steps[-1]

    def to_json(self):
        return [s.to_json() for s in self.steps]


@dataclass(frozen=True)
class StableResult:
    kind: OperatorKind
    flavor: Flavor
    pairs: tuple[Pair, ...]
    traces: dict | None = field(default=None, compare=False)

    def to_json(self):
        out = {
            "kind": self.kind.value,
            "flavor": self.flavor.value,
            "pairs": [p.to_json() for p in self.pairs],
        }
        if self.traces is not None:
            out["traces"] = [
                {"pair": p.to_json(), "lower": self.traces[p][0].to_json(),
                 "upper": self.traces[p][1].to_json()}
                for p in self.pairs
            ]
        return out


def _check_sweep(sig: Signature):
    cap = current_limits().max_sweep_atoms
    if len(sig) > cap:
        raise ResourceCapExceeded(f"signature has {len(sig)} atoms; exhaustive sweeps allow {cap}")


def _all_masks(sig):
    return canonical_sort(iter_submasks(sig.full_mask))


def _bounds(kind, p, x, y):
    lo, up = bounds_masks(kind, p, x, y)
    if x & ~y == 0 and (not lo or not up):
        sig = p.signature
        pair = Pair(AtomSet(x, sig), AtomSet(y, sig))
        raise AssumptionViolation(OperatorKind.parse(kind).name, pair, "lower" if not lo else "upper")
    return lo, up


def _pair_order(sig, pairs):
    return sorted(pairs, key=lambda xy: ((xy[1] & ~xy[0]).bit_count(),
                                          canonical_key(xy[0]), canonical_key(xy[1])))


def _consistent_pairs(sig, totals_only):
    masks = _all_masks(sig)
    if totals_only:
        return [(m, m) for m in masks]
    return _pair_order(sig, [(x, y) for y in masks for x in iter_submasks(y)])


def _to_pairs(sig, xys):
    return [Pair(AtomSet(x, sig), AtomSet(y, sig)) for x, y in xys]


def _map(fn, items, jobs):
    items = list(items)
    if jobs and jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))
    return [fn(i) for i in items]


class _FixpointTask:
    def __init__(self, kind, p):
        self.kind, self.p = kind, p

    def __call__(self, xy):
        x, y = xy
        lo, up = _bounds(self.kind, self.p, x, y)
        return x in lo and y in up


def fixpoints(kind, p: ChoiceProgram, totals_only: bool = False, jobs: int = 1) -> list[Pair]:
    kind = OperatorKind.parse(kind)
    _check_sweep(p.signature)
    cands = _consistent_pairs(p.signature, totals_only)
    keep = _map(_FixpointTask(kind, p), cands, jobs)
    return _to_pairs(p.signature, [xy for xy, ok in zip(cands, keep) if ok])


def supported_models(p: ChoiceProgram) -> list[AtomSet]:
    _check_sweep(p.signature)
    return [x for x in p.signature.subsets() if is_supported_model(x, p)]


# ---------------------------------------------------------------- well-founded sequences

def _reach(step: Callable[[int], Iterable[int]], start: int, within: Callable[[int], bool]):
    """BFS closure of ``start`` under ``t ∈ step(s)`` with s ⊆ t; returns parent links."""
    cap = current_limits().max_states
    parent = {start: None}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for t in step(s):
            if t in parent or s & ~t or not within(t):
                continue
            if len(parent) >= cap:
                raise ResourceCapExceeded(f"well-founded search visited more than {cap} states")
            parent[t] = s
            queue.append(t)
    return parent


def _trace(sig, parent, end) -> WfsTrace:
    chain = []
    cur = end
    while cur is not None:
        chain.append(AtomSet(cur, sig))
        cur = parent[cur]
    return WfsTrace(tuple(reversed(chain)))


def wfs_reach(op: Callable, sig: Signature, start: AtomSet | None = None):
    """Sets reachable from ``start`` (default ∅) along well-founded sequences of ``op``.

    ``op`` maps an AtomSet to an iterable of AtomSets. Returns the reachable
    family and one shortest trace per reachable set.
    """
    def step(m):
        return [z.mask if isinstance(z, AtomSet) else z for z in op(AtomSet(m, sig))]

    s0 = 0 if start is None else start.mask
    parent = _reach(step, s0, lambda t: True)
    fam = AtomSetFamily(tuple(parent), sig)
    return fam, {AtomSet(m, sig): _trace(sig, parent, m) for m in fam.masks}


def _lower_parents(kind, p, y):
    return _reach(lambda s: _bounds(kind, p, s, y)[0], 0, lambda t: t & ~y == 0)


def _upper_parents(kind, p, x):
    return _reach(lambda s: _bounds(kind, p, x, s)[1], x, lambda t: x & ~t == 0)


def _c_lower(kind, p, y):
    parent = _lower_parents(kind, p, y)
    return parent, {x for x in parent if x in _bounds(kind, p, x, y)[0]}


def _c_upper(kind, p, x):
    parent = _upper_parents(kind, p, x)
    return parent, {y for y in parent if y in _bounds(kind, p, x, y)[1]}


def c_complete_lower(kind, p: ChoiceProgram, y: AtomSet) -> AtomSetFamily:
    kind = OperatorKind.parse(kind)
    return AtomSetFamily(tuple(_c_lower(kind, p, y.mask)[1]), p.signature)


def c_complete_upper(kind, p: ChoiceProgram, x: AtomSet, totals_only: bool = False) -> AtomSetFamily:
    """Reachable fixpoints of the upper bound with x frozen.

    For GZ only total results are meaningful; pass ``totals_only=True`` to get
    ``{x}`` or ``{}`` depending on whether x is reachable and fixed.
    """
    kind = OperatorKind.parse(kind)
    if kind is OperatorKind.GZ and not totals_only:
        raise UnsupportedProgram("the GZ upper c-complete operator is only available for total pairs")
    ys = _c_upper(kind, p, x.mask)[1]
    if totals_only:
        ys = {y for y in ys if y == x.mask}
    return AtomSetFamily(tuple(ys), p.signature)


def minimal_lower(kind, p: ChoiceProgram, y: AtomSet) -> AtomSetFamily:
    """≤-minimal fixpoints of the lower bound with y frozen."""
    kind = OperatorKind.parse(kind)
    fps = [x for x in iter_submasks(y.mask) if x in _bounds(kind, p, x, y.mask)[0]]
    return AtomSetFamily(tuple(_minimal(fps)), p.signature)


def minimal_upper(kind, p: ChoiceProgram, x: AtomSet) -> AtomSetFamily:
    kind = OperatorKind.parse(kind)
    free = p.signature.full_mask & ~x.mask
    fps = [x.mask | s for s in iter_submasks(free)
           if (x.mask | s) in _bounds(kind, p, x.mask, x.mask | s)[1]]
    return AtomSetFamily(tuple(_minimal(fps)), p.signature)


def _minimal(masks):
    masks = sorted(masks, key=int.bit_count)
    out = []
    for m in masks:
        if not any(o & ~m == 0 for o in out):
            out.append(m)
    return out


class _CStableTask:
    def __init__(self, kind, p, upper):
        self.kind, self.p, self.upper = kind, p, upper

    def __call__(self, m):
        if self.upper:
            return _c_upper(self.kind, self.p, m)
        return _c_lower(self.kind, self.p, m)


def c_stable_fixpoints(kind, p: ChoiceProgram, totals_only: bool = False,
                       traces: bool = False, jobs: int = 1) -> StableResult:
    kind = OperatorKind.parse(kind)
    if kind is OperatorKind.GZ and not totals_only:
        raise UnsupportedProgram("c-stable fixpoints of GZ are only available for total pairs")
    sig = p.signature
    _check_sweep(sig)
    masks = _all_masks(sig)
    lowers = dict(zip(masks, _map(_CStableTask(kind, p, False), masks, jobs)))
    if totals_only:
        xys = [(m, m) for m in masks if m in lowers[m][1]
               and m in _bounds(kind, p, m, m)[1]]
        uppers = {m: ({m: None}, {m}) for m, _ in xys}
    else:
        uppers = dict(zip(masks, _map(_CStableTask(kind, p, True), masks, jobs)))
        xys = [(x, y) for y in masks for x in lowers[y][1]
               if y in uppers[x][1]]
    xys = _pair_order(sig, xys)
    pairs = tuple(_to_pairs(sig, xys))
    tr = None
    if traces:
        tr = {pair: (_trace(sig, lowers[y][0], x), _trace(sig, uppers[x][0], y))
              for pair, (x, y) in zip(pairs, xys)}
    return StableResult(kind, Flavor.CONSTRUCTIVE, pairs, tr)


def stable_fixpoints(kind, p: ChoiceProgram, totals_only: bool = False, jobs: int = 1) -> StableResult:
    """Pairs whose bounds are minimal fixpoints of the frozen-bound projections."""
    kind = OperatorKind.parse(kind)
    sig = p.signature
    _check_sweep(sig)
    masks = _all_masks(sig)
    low = {y: set(minimal_lower(kind, p, AtomSet(y, sig)).masks) for y in masks}
    if totals_only:
        xys = [(m, m) for m in masks if m in low[m]
               and m in minimal_upper(kind, p, AtomSet(m, sig)).masks]
    else:
        up = {x: set(minimal_upper(kind, p, AtomSet(x, sig)).masks) for x in masks}
        xys = [(x, y) for y in masks for x in low[y] if y in up[x]]
    return StableResult(kind, Flavor.MINIMAL, tuple(_to_pairs(sig, _pair_order(sig, xys))))


def stable(kind, p, flavor, totals_only=False, traces=False, jobs=1) -> StableResult:
    if Flavor(flavor) is Flavor.CONSTRUCTIVE:
        return c_stable_fixpoints(kind, p, totals_only, traces, jobs)
    return stable_fixpoints(kind, p, totals_only, jobs)


def prefixpoint_models(p: ChoiceProgram) -> list[AtomSet]:
    """Sets x with some member of IC_P(x) below x; requires monotone heads."""
    bad = [r.head for r in p.rules if not is_monotone(r.head)]
    if bad:
        raise UnsupportedProgram(f"head {bad[0]} is not monotone")
    _check_sweep(p.signature)
    eng = engine(p)
    return [x for x in p.signature.subsets() if any(z & ~x.mask == 0 for z in eng.ic_raw(x.mask))]


def verify_trace(trace: WfsTrace, op: Callable) -> bool:
    """Each step is a superset of its predecessor and a member of op applied to it."""
    for a, b in zip(trace.steps, trace.steps[1:]):
        if not a.issubset(b) or b not in op(a):
            return False
    return True


__all__ = [
    "Flavor", "WfsTrace", "StableResult", "fixpoints", "supported_models", "wfs_reach",
    "c_complete_lower", "c_complete_upper", "minimal_lower", "minimal_upper",
    "c_stable_fixpoints", "stable_fixpoints", "stable", "prefixpoint_models", "verify_trace",
    "is_model",
]
