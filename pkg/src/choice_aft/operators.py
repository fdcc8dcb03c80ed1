"""Immediate consequence operator and its four approximations.

Every operator maps a pair (x, y) to a pair of families. Internally all sets
are int masks; the public functions wrap results into lattice objects.

Conventions at inconsistent pairs (x ⊄ y), where the interval [x, y] is empty:

* union-based bounds (ULT lower, MR/LPST/ULT upper) are the empty family;
* the LPST interval quantifier is vacuous, so every rule fires;
* GZ is refused unless ``allow_inconsistent=True``.

The non-emptiness requirement is enforced on consistent pairs only.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AssumptionViolation, InconsistentPairError, ResourceCapExceeded
from .lattice import AtomSet, AtomSetFamily, Pair, canonical_sort, interval_masks, iter_submasks
from .limits import current_limits
from .syntax import (
    Cardinality, ChoiceAtom, ChoiceProgram, ChoiceRule, DisjunctiveProgram,
    NegLiteral, PosLiteral, compile_atoms,
)


class OperatorKind(str, enum.Enum):
    GZ = "gz"
    LPST = "lpst"
    MR = "mr"
    ULT = "ult"

    def __str__(self):
        return self.name

    @classmethod
    def parse(cls, s) -> "OperatorKind":
        if isinstance(s, cls):
            return s
        return cls(str(s).lower())


class HeadInconsistent(AssumptionViolation):
    def __init__(self, x):
        self.operator = "IC"
        self.pair = x
        self.bound = "total"
        Exception.__init__(self, f"head-inconsistent at {x}: no set satisfies every applicable head")


@dataclass(frozen=True)
class NdaoOutput:
    lower: AtomSetFamily
    upper: AtomSetFamily

    def contains(self, pair: Pair) -> bool:
        """Fixpoint membership: lower bound in the lower image, upper in the upper."""
        return pair.lower in self.lower and pair.upper in self.upper

    def to_json(self):
        return {"lower": self.lower.to_json(), "upper": self.upper.to_json()}


def _check_enum(bits, what):
    cap = current_limits().max_enumeration
    if bits > cap:
        raise ResourceCapExceeded(f"{what} too large: {bits} atoms (cap {cap})")


class _Engine:
    """Per-program compiled form plus memo tables."""

    def __init__(self, p: ChoiceProgram):
        self.program = p
        self.sig = p.signature
        atoms = list(p.atoms())
        ids = {a: i for i, a in enumerate(atoms)}
        self.atoms = atoms
        self.table = compile_atoms(atoms)
        self.rules = [(ids[r.head], tuple(ids[b] for b in r.body)) for r in p.rules]
        self.disjoint = []
        for _, body in self.rules:
            seen = 0
            ok = True
            for b in body:
                d = atoms[b].dom.mask
                ok = ok and not (seen & d)
                seen |= d
            self.disjoint.append((ok, seen))
        self._heads = {}
        self._ic = {}
        self._ops = {}

    # -- families

    def head_family(self, head_ids) -> tuple[int, ...]:
        key = frozenset(head_ids)
        out = self._heads.get(key)
        if out is None:
            which = np.asarray(sorted(key), dtype=np.int64)
            union = 0
            for h in which:
                union |= self.atoms[h].dom.mask
            _check_enum(union.bit_count(), "head-domain union")
            k = _kernels.active
            cands = k.submasks(union)
            keep = k.filter_all(cands, which, *self.table.args())
            out = canonical_sort(cands[keep].tolist())
            self._heads[key] = out
        return out

    def applicable(self, x: int) -> list[int]:
        atoms = self.atoms
        return [i for i, (_, body) in enumerate(self.rules)
                if all(atoms[b].holds(x) for b in body)]

    def ic_raw(self, x: int) -> tuple[int, ...]:
        out = self._ic.get(x)
        if out is None:
            out = self.head_family(self.rules[i][0] for i in self.applicable(x))
            self._ic[x] = out
        return out

    def union_ic(self, x: int, y: int) -> tuple[int, ...]:
        acc = set()
        for z in interval_masks(x, y):
            acc.update(self.ic_raw(z))
        return canonical_sort(acc)

    # -- head selection

    def _lpst_atom(self, c: ChoiceAtom, x: int, y: int) -> bool:
        d = c.dom.mask
        base = x & d
        free = y & ~x & d
        _check_enum(free.bit_count(), "interval overlay")
        return all(c.holds(base | s) for s in iter_submasks(free))

    def _mr_body(self, idx: int, x: int, y: int) -> bool:
        atoms = self.atoms
        body = self.rules[idx][1]
        if not all(atoms[b].holds(y) for b in body):
            return False
        if not body:
            return True
        disjoint, union = self.disjoint[idx]
        if disjoint:
            for b in body:
                c = atoms[b]
                free = x & c.dom.mask
                _check_enum(free.bit_count(), "witness search")
                if not any(c.holds(s) for s in iter_submasks(free)):
                    return False
            return True
        free = x & union
        _check_enum(free.bit_count(), "witness search")
        k = _kernels.active
        cands = k.submasks(free)
        return bool(k.filter_all(cands, np.asarray(body, dtype=np.int64), *self.table.args()).any())

    def hd(self, kind: OperatorKind, x: int, y: int) -> list[int]:
        atoms = self.atoms
        out = []
        for i, (_, body) in enumerate(self.rules):
            if kind is OperatorKind.GZ:
                ok = all((x & atoms[b].dom.mask) == (y & atoms[b].dom.mask)
                         and atoms[b].holds(x) for b in body)
            elif kind is OperatorKind.LPST:
                ok = bool(x & ~y) or all(self._lpst_atom(atoms[b], x, y) for b in body)
            elif kind is OperatorKind.MR:
                ok = self._mr_body(i, x, y)
            else:
                raise ValueError("the ultimate operator has no head-set form")
            if ok:
                out.append(i)
        return out

    def bounds(self, kind: OperatorKind, x: int, y: int):
        key = (kind, x, y)
        out = self._ops.get(key)
        if out is None:
            if kind is OperatorKind.ULT:
                lo = up = self.union_ic(x, y)
            else:
                lo = self.head_family(self.rules[i][0] for i in self.hd(kind, x, y))
                up = lo if kind is OperatorKind.GZ else self.union_ic(x, y)
            out = (lo, up)
            self._ops[key] = out
        return out


def engine(p: ChoiceProgram) -> _Engine:
    eng = p.memo.get("engine")
    if eng is None:
        eng = _Engine(p)
        p.memo["engine"] = eng
    return eng


def _family(sig, masks) -> AtomSetFamily:
    return AtomSetFamily(masks, sig)


def applicable(p: ChoiceProgram, x: AtomSet) -> list[ChoiceRule]:
    return [p.rules[i] for i in engine(p).applicable(x.mask)]


def ic(p: ChoiceProgram, x: AtomSet) -> AtomSetFamily:
    out = engine(p).ic_raw(x.mask)
    if not out:
        raise HeadInconsistent(x)
    return _family(p.signature, out)


def _prepare(kind, pair: Pair, allow_inconsistent: bool):
    kind = OperatorKind.parse(kind)
    if kind is OperatorKind.GZ and not pair.is_consistent and not allow_inconsistent:
        raise InconsistentPairError(f"GZ operator is only defined on consistent pairs, got {pair}")
    return kind


def hd_lower(kind, p: ChoiceProgram, pair: Pair, *, allow_inconsistent=False) -> list[ChoiceAtom]:
    kind = _prepare(kind, pair, allow_inconsistent)
    eng = engine(p)
    heads = [p.rules[i].head for i in eng.hd(kind, pair.lower.mask, pair.upper.mask)]
    return list(dict.fromkeys(heads))


def _checked(kind, pair, fam, bound):
    if not fam and pair.is_consistent:
        raise AssumptionViolation(kind.name, pair, bound)
    return fam


def ic_lower(kind, p: ChoiceProgram, pair: Pair, *, allow_inconsistent=False) -> AtomSetFamily:
    return apply_ndao(kind, p, pair, allow_inconsistent=allow_inconsistent).lower


def ic_upper(kind, p: ChoiceProgram, pair: Pair, *, allow_inconsistent=False) -> AtomSetFamily:
    return apply_ndao(kind, p, pair, allow_inconsistent=allow_inconsistent).upper


def apply_ndao(kind, p: ChoiceProgram, pair: Pair, *, allow_inconsistent=False) -> NdaoOutput:
    kind = _prepare(kind, pair, allow_inconsistent)
    if pair.signature != p.signature:
        from .errors import SignatureMismatch
        raise SignatureMismatch("pair and program use different signatures")
    lo, up = engine(p).bounds(kind, pair.lower.mask, pair.upper.mask)
    _checked(kind, pair, lo, "lower")
    _checked(kind, pair, up, "upper")
    return NdaoOutput(_family(p.signature, lo), _family(p.signature, up))


def bounds_masks(kind, p: ChoiceProgram, x: int, y: int):
    """Raw mask tuples of both bounds, without the non-emptiness check."""
    return engine(p).bounds(OperatorKind.parse(kind), x, y)


# ---------------------------------------------------------------- disjunctive programs

def d2c(d: DisjunctiveProgram) -> ChoiceProgram:
    sig = d.signature
    rules = []
    for r in d.rules:
        body = [ChoiceAtom(sig.set([a]), PosLiteral()) for a in r.pos]
        body += [ChoiceAtom(sig.set([a]), NegLiteral()) for a in r.neg]
        # a singleton head stays an atom, so normal rules pass through unchanged
        head = PosLiteral() if len(r.head) == 1 else Cardinality(1, None)
        rules.append(ChoiceRule(ChoiceAtom(r.head, head), tuple(body)))
    return ChoiceProgram(sig, tuple(rules))


def _hitting_sets(heads) -> tuple[int, ...]:
    union = 0
    for h in heads:
        union |= h
    _check_enum(union.bit_count(), "head union")
    k = _kernels.active
    cands = k.submasks(union)
    keep = k.hitting(cands, np.asarray(sorted(set(heads)), dtype=np.int64))
    return canonical_sort(cands[keep].tolist())


def ic_d(d: DisjunctiveProgram, pair: Pair) -> NdaoOutput:
    """Hitting-set operator: lower uses bodies ≥_t C, upper bodies ≥_t U."""
    x, y = pair.lower.mask, pair.upper.mask
    lo_heads, up_heads = [], []
    for r in d.rules:
        pos, neg = r.pos.mask, r.neg.mask
        # first component of the body value reads pos against x, neg against y
        if pos & ~x == 0 and neg & y == 0:
            lo_heads.append(r.head.mask)
        if pos & ~y == 0 and neg & x == 0:
            up_heads.append(r.head.mask)
    sig = d.signature
    return NdaoOutput(_family(sig, _hitting_sets(lo_heads)), _family(sig, _hitting_sets(up_heads)))
