"""Two- and four-valued evaluation of choice atoms and literal conjunctions."""
from __future__ import annotations

import enum

from .errors import InconsistentPairError, UnsupportedProgram
from .lattice import AtomSet, Pair
from .syntax import ChoiceAtom, ChoiceProgram, DisjunctiveRule, is_normal, literal_shape


class FourValue(enum.Enum):
    """Encoded as (lower satisfies, upper satisfies)."""

    F = (False, False)
    U = (False, True)
    C = (True, False)
    T = (True, True)

    @classmethod
    def of(cls, lo: bool, up: bool) -> "FourValue":
        return cls((bool(lo), bool(up)))

    def __str__(self):
        return self.name

    def neg(self) -> "FourValue":
        lo, up = self.value
        return FourValue.of(not up, not lo)

    def meet_t(self, other) -> "FourValue":
        return FourValue.of(self.value[0] and other.value[0], self.value[1] and other.value[1])

    def join_t(self, other) -> "FourValue":
        return FourValue.of(self.value[0] or other.value[0], self.value[1] or other.value[1])

    def leq_t(self, other) -> bool:
        return all(a <= b for a, b in zip(self.value, other.value))

    def leq_i(self, other) -> bool:
        (a0, a1), (b0, b1) = self.value, other.value
        return a0 <= b0 and a1 >= b1


def satisfies(x: AtomSet, c: ChoiceAtom) -> bool:
    return c.holds(x.mask)


def eval4(pair: Pair, c: ChoiceAtom) -> FourValue:
    """Lower/upper satisfaction, except that a negative literal is the involution of its atom."""
    shape = literal_shape(c)
    if shape is not None and not shape[1]:
        return _literal_value(pair, shape[0], False)
    return FourValue.of(c.holds(pair.lower.mask), c.holds(pair.upper.mask))


def _literal_value(pair: Pair, name: str, positive: bool) -> FourValue:
    v = FourValue.of(name in pair.lower, name in pair.upper)
    return v if positive else v.neg()


def eval_formula4(pair: Pair, body) -> FourValue:
    """≤_t-meet over a conjunction of literals.

    ``body`` is a DisjunctiveRule (its pos/neg parts) or an iterable of
    ``(atom, positive)`` literals.
    """
    if isinstance(body, DisjunctiveRule):
        lits = [(a, True) for a in body.pos] + [(a, False) for a in body.neg]
    else:
        lits = list(body)
    out = FourValue.T
    for name, positive in lits:
        out = out.meet_t(_literal_value(pair, name, positive))
    return out


def _body_holds(mask, rule) -> bool:
    return all(b.holds(mask) for b in rule.body)


def is_model(x: AtomSet, p: ChoiceProgram) -> bool:
    m = x.mask
    return all(r.head.holds(m) or not _body_holds(m, r) for r in p.rules)


def is_supported_model(x: AtomSet, p: ChoiceProgram) -> bool:
    if not is_model(x, p):
        return False
    m = x.mask
    support = 0
    for r in p.rules:
        if _body_holds(m, r):
            support |= r.head.dom.mask
    return m & ~support == 0


def _require_3v(pair: Pair, p: ChoiceProgram):
    if not pair.is_consistent:
        raise InconsistentPairError(f"three-valued models need a consistent pair, got {pair}")
    if not is_normal(p):
        raise UnsupportedProgram("three-valued models are defined for normal choice programs")


def _body_value(pair, rule) -> FourValue:
    out = FourValue.T
    for b in rule.body:
        out = out.meet_t(eval4(pair, b))
    return out


def _head_value(pair, rule) -> FourValue:
    # heads are read by plain membership of each bound, as the operators do
    return FourValue.of(rule.head.holds(pair.lower.mask), rule.head.holds(pair.upper.mask))


def is_3v_model(pair: Pair, p: ChoiceProgram) -> bool:
    _require_3v(pair, p)
    return all(_body_value(pair, r).leq_t(_head_value(pair, r)) for r in p.rules)


def is_3v_supported(pair: Pair, p: ChoiceProgram) -> bool:
    """Three-valued model where every atom of the upper bound is supported."""
    if not is_3v_model(pair, p):
        return False
    for name in pair.upper:
        v = _literal_value(pair, name, True)
        if not any(name in r.head.dom and v.leq_t(_body_value(pair, r)) for r in p.rules):
            return False
    return True


__all__ = [
    "FourValue", "satisfies", "eval4", "eval_formula4", "is_model",
    "is_supported_model", "is_3v_model", "is_3v_supported", "literal_shape",
]
