"""Level-map groundedness notions for sets of atoms.

Each notion asks for a level map κ: x → ℕ such that every atom of x is
produced by some rule whose justification lives strictly below it. All
conditions are monotone in the set of lower-level atoms, so the least-level
saturation S_0 = ∅, S_{k+1} = {a ∈ x | a justified from S_k} decides them;
``grounded_bruteforce`` enumerates level maps directly instead.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .errors import ResourceCapExceeded, UnsupportedProgram
from .lattice import AtomSet, Pair, bit_indices, interval_masks, iter_submasks
from .limits import current_limits
from .operators import OperatorKind
from .syntax import ChoiceProgram, ChoiceRule, is_normal_lp, literal_shape


class Notion(str, enum.Enum):
    D = "d"
    S = "s"
    A = "a"
    ERDEM = "erdem"


@dataclass(frozen=True)
class LevelMap:
    kappa: tuple[tuple[str, int], ...]

    def __getitem__(self, name):
        return dict(self.kappa)[name]

    def to_json(self):
        return dict(self.kappa)


@dataclass(frozen=True)
class GroundednessReport:
    notion: Notion
    holds: bool
    witness: LevelMap | None = None
    blocking: AtomSet | None = None

    def to_json(self):
        out = {"notion": self.notion.value, "holds": self.holds}
        if self.witness is not None:
            out["levels"] = self.witness.to_json()
        if self.blocking is not None:
            out["blocking"] = self.blocking.to_json()
        return out


def _body_dom(r: ChoiceRule) -> int:
    d = 0
    for b in r.body:
        d |= b.dom.mask
    return d


def _trigger(z: int, upper: int, r: ChoiceRule) -> bool:
    # satisfaction of a body atom reads only its domain, so overlay per atom
    if z & ~upper:
        return False
    cap = current_limits().max_enumeration
    for b in r.body:
        d = b.dom.mask
        free = upper & ~z & d
        if free.bit_count() > cap:
            raise ResourceCapExceeded(f"trigger overlay too large: {free.bit_count()} atoms")
        base = z & d
        if not all(b.holds(base | s) for s in iter_submasks(free)):
            return False
    return True


def is_trigger(z: AtomSet, upper: AtomSet, r: ChoiceRule) -> bool:
    """Every set between z and upper satisfies the whole body of r."""
    return _trigger(z.mask, upper.mask, r)


def _justified(notion: Notion, a: int, x: int, low: int, p: ChoiceProgram) -> bool:
    bit = 1 << a
    for r in p.rules:
        if notion is Notion.ERDEM:
            shape = literal_shape(r.head)
            if shape is None or r.head.dom.mask != bit:
                continue
            pos = 0
            for b in r.body:
                name, positive = literal_shape(b)
                if positive:
                    pos |= b.dom.mask
            if pos & ~low == 0:
                return True
            continue
        if not r.head.dom.mask & bit:
            continue
        if notion is Notion.D:
            ok = (_body_dom(r) & x & ~low == 0) and all(b.holds(x) for b in r.body)
        elif notion is Notion.S:
            ok = _trigger(low, x, r)
        else:
            ok = all(any(b.holds(z) for z in iter_submasks(low & b.dom.mask)) for b in r.body)
        if ok:
            return True
    return False


def _saturate(notion: Notion, x: AtomSet, p: ChoiceProgram) -> GroundednessReport:
    sig = p.signature
    if notion is Notion.ERDEM and not is_normal_lp(p):
        raise UnsupportedProgram("Erdem-Lifschitz groundedness needs a normal logic program")
    levels = {}
    low = 0
    k = 0
    while True:
        new = 0
        for a in bit_indices(x.mask & ~low):
            if _justified(notion, a, x.mask, low, p):
                new |= 1 << a
        if not new:
            break
        for a in bit_indices(new):
            levels[sig.atoms[a]] = k
        low |= new
        k += 1
    if low == x.mask:
        return GroundednessReport(notion, True, LevelMap(tuple(sorted(levels.items()))))
    return GroundednessReport(notion, False, blocking=AtomSet(x.mask & ~low, sig))


def is_d_grounded(x: AtomSet, p: ChoiceProgram) -> GroundednessReport:
    return _saturate(Notion.D, x, p)


def is_s_grounded(x: AtomSet, p: ChoiceProgram) -> GroundednessReport:
    return _saturate(Notion.S, x, p)


def is_a_grounded(x: AtomSet, p: ChoiceProgram) -> GroundednessReport:
    return _saturate(Notion.A, x, p)


def erdem_grounded(x: AtomSet, p: ChoiceProgram) -> GroundednessReport:
    return _saturate(Notion.ERDEM, x, p)


def grounded(notion, x: AtomSet, p: ChoiceProgram) -> GroundednessReport:
    return _saturate(Notion(notion), x, p)


# ---------------------------------------------------------------- literal definitions

def _literal_ok(notion: Notion, r: ChoiceRule, a: int, x: int, kappa: dict) -> bool:
    """The defining condition for atom a via rule r, with lower atoms read from kappa."""
    if not r.head.dom.mask >> a & 1:
        return False
    below = 0
    for b, lvl in kappa.items():
        if lvl < kappa[a]:
            below |= 1 << b
    if notion is Notion.D:
        dom_levels = [kappa[b] for b in bit_indices(_body_dom(r) & x)]
        return all(b.holds(x) for b in r.body) and all(l < kappa[a] for l in dom_levels)
    if notion is Notion.S:
        # z ranges over subsets of the lower atoms; the whole interval [z, x] is checked
        for z in iter_submasks(below):
            if all(all(b.holds(w) for b in r.body) for w in interval_masks(z, x)):
                return True
        return False
    return all(any(b.holds(z) for z in iter_submasks(below)) for b in r.body)


def _erdem_ok(r: ChoiceRule, a: int, kappa: dict) -> bool:
    if r.head.dom.mask != 1 << a or not literal_shape(r.head)[1]:
        return False
    for b in r.body:
        if literal_shape(b)[1]:
            i = bit_indices(b.dom.mask)[0]
            if i not in kappa or kappa[i] >= kappa[a]:
                return False
    return True


def check_level_map(notion, x: AtomSet, p: ChoiceProgram, witness: LevelMap) -> bool:
    """Re-validate a level map against the literal definition."""
    notion = Notion(notion)
    sig = p.signature
    kappa = {sig.index[n]: lvl for n, lvl in witness.kappa}
    if set(kappa) != set(bit_indices(x.mask)):
        return False
    if notion is Notion.ERDEM:
        return all(any(_erdem_ok(r, a, kappa) for r in p.rules) for a in kappa)
    return all(any(_literal_ok(notion, r, a, x.mask, kappa) for r in p.rules) for a in kappa)


def grounded_bruteforce(notion, x: AtomSet, p: ChoiceProgram) -> GroundednessReport:
    """Search every κ: x → {0..|x|-1} for one meeting the literal definition."""
    notion = Notion(notion)
    if notion is Notion.ERDEM:
        raise ValueError("brute force covers the d, s and a notions")
    n = len(x)
    cap = current_limits().max_bruteforce
    if n > cap:
        raise ResourceCapExceeded(f"brute-force groundedness limited to |x| <= {cap}")
    sig = p.signature
    ids = bit_indices(x.mask)
    if n == 0:
        return GroundednessReport(notion, True, LevelMap(()))
    # Justification of a depends on κ only via the set of strictly lower atoms,
    # so the literal test is tabulated per (atom, lower set).
    table = {}
    for a in ids:
        rest = x.mask & ~(1 << a)
        for low in iter_submasks(rest):
            kappa = {b: (0 if low >> b & 1 else 1) for b in ids}
            kappa[a] = 1
            table[a, low] = any(_literal_ok(notion, r, a, x.mask, kappa) for r in p.rules)
    for levels in itertools.product(range(n), repeat=n):
        ok = True
        for a, la in zip(ids, levels):
            low = 0
            for b, lb in zip(ids, levels):
                if lb < la:
                    low |= 1 << b
            if not table[a, low]:
                ok = False
                break
        if ok:
            kappa = tuple(sorted((sig.atoms[a], l) for a, l in zip(ids, levels)))
            return GroundednessReport(notion, True, LevelMap(kappa))
    return GroundednessReport(notion, False)


def groundedness_of_cstable(kind, p: ChoiceProgram) -> list[dict]:
    """Evaluate d/s/a on both bounds of every c-stable fixpoint (GZ: totals only)."""
    from .semantics import c_stable_fixpoints

    kind = OperatorKind.parse(kind)
    res = c_stable_fixpoints(kind, p, totals_only=kind is OperatorKind.GZ)
    rows = []
    for pair in res.pairs:
        row = {"pair": pair}
        for side in ("lower", "upper"):
            s = getattr(pair, side)
            row[side] = {n.value: _saturate(n, s, p).holds for n in (Notion.D, Notion.S, Notion.A)}
        rows.append(row)
    return rows


__all__ = [
    "Notion", "LevelMap", "GroundednessReport", "is_trigger", "is_d_grounded",
    "is_s_grounded", "is_a_grounded", "erdem_grounded", "grounded", "grounded_bruteforce",
    "check_level_map", "groundedness_of_cstable", "Pair",
]
