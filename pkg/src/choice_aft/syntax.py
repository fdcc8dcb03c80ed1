"""Choice atoms, rules and programs; disjunctive programs; classification."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .errors import InvalidChoiceAtom, ResourceCapExceeded, SignatureMismatch
from .lattice import AtomSet, Signature, bit_indices, canonical_sort, iter_submasks
from .limits import current_limits


@dataclass(frozen=True)
class Extensional:
    sats: tuple[int, ...]  # masks over the signature, each inside dom


@dataclass(frozen=True)
class Cardinality:
    lo: int = 0
    hi: int | None = None


@dataclass(frozen=True)
class CountEq:
    k: int


@dataclass(frozen=True)
class CountNeq:
    k: int


@dataclass(frozen=True)
class PosLiteral:
    pass


@dataclass(frozen=True)
class NegLiteral:
    pass


SatForm = Union[Extensional, Cardinality, CountEq, CountNeq, PosLiteral, NegLiteral]


def _count_table(sat, n):
    if isinstance(sat, Cardinality):
        hi = n if sat.hi is None else sat.hi
        return tuple(sat.lo <= c <= hi for c in range(n + 1))
    if isinstance(sat, CountEq):
        return tuple(c == sat.k for c in range(n + 1))
    if isinstance(sat, CountNeq):
        return tuple(c != sat.k for c in range(n + 1))
    if isinstance(sat, PosLiteral):
        return (False, True)
    if isinstance(sat, NegLiteral):
        return (True, False)
    return None


@dataclass(frozen=True)
class ChoiceAtom:
    dom: AtomSet
    sat: SatForm
    _count_ok: tuple | None = field(init=False, repr=False, compare=False, hash=False)
    _ext: frozenset | None = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        n = len(self.dom)
        if n == 0:
            raise InvalidChoiceAtom("choice atom domain must be non-empty")
        sat = self.sat
        if isinstance(sat, (PosLiteral, NegLiteral)) and n != 1:
            raise InvalidChoiceAtom("literal atoms need a singleton domain")
        if isinstance(sat, Cardinality):
            if sat.lo < 0 or (sat.hi is not None and (sat.hi < 0 or sat.lo > sat.hi)):
                raise InvalidChoiceAtom(f"invalid cardinality bounds {sat.lo}..{sat.hi}")
        if isinstance(sat, CountEq) and not 0 <= sat.k <= n:
            raise InvalidChoiceAtom(f"count {sat.k} exceeds domain size {n}")
        if isinstance(sat, CountNeq) and sat.k < 0:
            raise InvalidChoiceAtom("count must be a natural number")
        ext = None
        if isinstance(sat, Extensional):
            d = self.dom.mask
            if any(m & ~d for m in sat.sats):
                raise InvalidChoiceAtom("satisfier outside the domain")
            object.__setattr__(self, "sat", Extensional(canonical_sort(sat.sats)))
            ext = frozenset(sat.sats)
        object.__setattr__(self, "_count_ok", _count_table(sat, n))
        object.__setattr__(self, "_ext", ext)

    @property
    def signature(self) -> Signature:
        return self.dom.signature

    def holds(self, mask: int) -> bool:
        v = mask & self.dom.mask
        if self._ext is not None:
            return v in self._ext
        return self._count_ok[v.bit_count()]

    def satisfier_masks(self) -> tuple[int, ...]:
        """All satisfiers (subsets of dom) in canonical order."""
        if self._ext is not None:
            return self.sat.sats
        _check_ext_cap(len(self.dom))
        return canonical_sort(m for m in iter_submasks(self.dom.mask) if self.holds(m))

    def __str__(self):
        return format_atom(self)


def _check_ext_cap(n):
    cap = current_limits().max_extensional
    if n > cap:
        raise ResourceCapExceeded(f"domain too large: {n} atoms (cap {cap})")


def _as_set(sig, dom) -> AtomSet:
    if isinstance(dom, AtomSet):
        return dom
    if isinstance(dom, str):
        dom = [dom]
    return sig.set(dom)


def mk_cardinality(dom: AtomSet, lo: int = 0, hi: int | None = None) -> ChoiceAtom:
    return ChoiceAtom(dom, Cardinality(lo, hi))


def mk_count_eq(dom: AtomSet, k: int) -> ChoiceAtom:
    return ChoiceAtom(dom, CountEq(k))


def mk_count_neq(dom: AtomSet, k: int) -> ChoiceAtom:
    return ChoiceAtom(dom, CountNeq(k))


def mk_literal(sig: Signature, atom: str, positive: bool = True) -> ChoiceAtom:
    return ChoiceAtom(sig.set([atom]), PosLiteral() if positive else NegLiteral())


def mk_extensional(dom: AtomSet, sats: Iterable) -> ChoiceAtom:
    sig = dom.signature
    masks = tuple(s.mask if isinstance(s, AtomSet) else sig.mask_of(s) for s in sats)
    return ChoiceAtom(dom, Extensional(masks))


def extensionalize(c: ChoiceAtom) -> ChoiceAtom:
    _check_ext_cap(len(c.dom))
    return ChoiceAtom(c.dom, Extensional(c.satisfier_masks()))


def literal_shape(c: ChoiceAtom):
    """``(name, positive)`` if c is extensionally a literal, else None."""
    if isinstance(c.sat, PosLiteral):
        return c.dom.names[0], True
    if isinstance(c.sat, NegLiteral):
        return c.dom.names[0], False
    if len(c.dom) != 1:
        return None
    sats = c.satisfier_masks()
    if sats == (c.dom.mask,):
        return c.dom.names[0], True
    if sats == (0,):
        return c.dom.names[0], False
    return None


def is_monotone(c: ChoiceAtom) -> bool:
    """Upward closed within dom (equivalent to the signature-wide test)."""
    sats = set(c.satisfier_masks())
    d = c.dom.mask
    # closure under adding one domain atom suffices
    return all((s | (1 << i)) in sats for s in sats for i in bit_indices(d & ~s))


def is_convex(c: ChoiceAtom) -> bool:
    """Every set between two satisfiers is a satisfier."""
    sats = c.satisfier_masks()
    sset = set(sats)
    for lo in sats:
        for hi in sats:
            if lo & ~hi == 0:
                free = hi & ~lo
                if any((lo | s) not in sset for s in iter_submasks(free)):
                    return False
    return True


@dataclass(frozen=True)
class ChoiceRule:
    head: ChoiceAtom
    body: tuple[ChoiceAtom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))
        sig = self.head.signature
        if any(b.signature != sig for b in self.body):
            raise SignatureMismatch("rule mixes signatures")

    def __str__(self):
        return format_rule(self)


def _dedup(rules):
    seen = set()
    out = []
    for r in rules:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class ChoiceProgram:
    """Choice rules over a shared signature.

    Equality is structural on (signature, rules). ``memo`` is a private cache
    used by the operator layer; it never changes observable behaviour.
    """

    signature: Signature
    rules: tuple[ChoiceRule, ...]
    memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        rules = _dedup(self.rules)
        if any(r.head.signature != self.signature for r in rules):
            raise SignatureMismatch("rule outside the program signature")
        object.__setattr__(self, "rules", rules)

    def __eq__(self, other):
        return (isinstance(other, ChoiceProgram) and self.signature == other.signature
                and self.rules == other.rules)

    def __hash__(self):
        return hash((self.signature, self.rules))

    def __getstate__(self):
        # the memo is rebuilt lazily in each process
        return {"signature": self.signature, "rules": self.rules}

    def __setstate__(self, state):
        object.__setattr__(self, "signature", state["signature"])
        object.__setattr__(self, "rules", state["rules"])
        object.__setattr__(self, "memo", {})

    def atoms(self) -> tuple[ChoiceAtom, ...]:
        out = []
        for r in self.rules:
            out.append(r.head)
            out.extend(r.body)
        return _dedup(out)

    def __str__(self):
        return format_program(self)


@dataclass(frozen=True)
class DisjunctiveRule:
    head: AtomSet
    pos: AtomSet
    neg: AtomSet

    def __post_init__(self):
        if len(self.head) == 0:
            raise InvalidChoiceAtom("disjunctive head must be non-empty")
        sig = self.head.signature
        if self.pos.signature != sig or self.neg.signature != sig:
            raise SignatureMismatch("rule mixes signatures")

    def __str__(self):
        return format_disjunctive_rule(self)


@dataclass(frozen=True, eq=False)
class DisjunctiveProgram:
    signature: Signature
    rules: tuple[DisjunctiveRule, ...]
    memo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        rules = _dedup(self.rules)
        if any(r.head.signature != self.signature for r in rules):
            raise SignatureMismatch("rule outside the program signature")
        object.__setattr__(self, "rules", rules)

    def __eq__(self, other):
        return (isinstance(other, DisjunctiveProgram) and self.signature == other.signature
                and self.rules == other.rules)

    def __hash__(self):
        return hash((self.signature, self.rules))

    def __str__(self):
        return "\n".join(format_disjunctive_rule(r) for r in self.rules)


def is_normal(p: ChoiceProgram) -> bool:
    return all(literal_shape(b) is not None for r in p.rules for b in r.body)


def is_aggregate(p: ChoiceProgram) -> bool:
    return all(_is_atom_head(r.head) for r in p.rules)


def _is_atom_head(c: ChoiceAtom) -> bool:
    shape = literal_shape(c)
    return shape is not None and shape[1]


def is_normal_lp(p: ChoiceProgram) -> bool:
    """Normal logic program: atom heads and literal bodies."""
    return is_normal(p) and is_aggregate(p)


# ---------------------------------------------------------------- printing

def _atoms_text(sig, mask, sep="; "):
    return sep.join(sig.names_of(mask))


def format_atom(c: ChoiceAtom) -> str:
    sig = c.signature
    d = _atoms_text(sig, c.dom.mask)
    s = c.sat
    if isinstance(s, PosLiteral):
        return d
    if isinstance(s, NegLiteral):
        return "not " + d
    if isinstance(s, Cardinality):
        lo = f"{s.lo} " if s.lo else ""
        hi = f" {s.hi}" if s.hi is not None else ""
        return f"{lo}{{{d}}}{hi}"
    if isinstance(s, CountEq):
        return f"{{{d}}} = {s.k}"
    if isinstance(s, CountNeq):
        return f"{{{d}}} != {s.k}"
    subsets = ", ".join("[" + _atoms_text(sig, m) + "]" for m in s.sats)
    return f"choice([{d}], [{subsets}])"


def format_rule(r: ChoiceRule) -> str:
    head = format_atom(r.head)
    if not r.body:
        return head + "."
    return head + " :- " + ", ".join(format_atom(b) for b in r.body) + "."


def format_program(p) -> str:
    if isinstance(p, DisjunctiveProgram):
        return str(p)
    return "\n".join(format_rule(r) for r in p.rules)


def format_disjunctive_rule(r: DisjunctiveRule) -> str:
    head = " | ".join(r.head.names)
    body = list(r.pos.names) + ["not " + n for n in r.neg.names]
    if not body:
        return head + "."
    return head + " :- " + ", ".join(body) + "."


# ---------------------------------------------------------------- kernel tables

@dataclass(frozen=True)
class AtomTable:
    doms: np.ndarray
    modes: np.ndarray
    cnt_off: np.ndarray
    cnt_tab: np.ndarray
    ext_off: np.ndarray
    ext_masks: np.ndarray

    def args(self):
        return (self.doms, self.modes, self.cnt_off, self.cnt_tab, self.ext_off, self.ext_masks)


def compile_atoms(atoms) -> AtomTable:
    doms, modes, cnt_off, cnt_tab, ext_off, ext_masks = [], [], [], [], [0], []
    for c in atoms:
        doms.append(c.dom.mask)
        cnt_off.append(len(cnt_tab))
        if c._ext is not None:
            modes.append(1)
            ext_masks.extend(sorted(c._ext))
        else:
            modes.append(0)
            cnt_tab.extend(c._count_ok)
        ext_off.append(len(ext_masks))
    return AtomTable(
        np.asarray(doms, dtype=np.int64),
        np.asarray(modes, dtype=np.int8),
        np.asarray(cnt_off, dtype=np.int64),
        np.asarray(cnt_tab or [False], dtype=np.bool_),
        np.asarray(ext_off, dtype=np.int64),
        np.asarray(ext_masks, dtype=np.int64),
    )
