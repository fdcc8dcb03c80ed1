"""Seeded random programs for property sweeps and benchmarks."""
from __future__ import annotations

import numpy as np

from .errors import AssumptionViolation
from .lattice import Signature, iter_submasks
from .operators import engine
from .syntax import (
    Cardinality, ChoiceAtom, ChoiceProgram, ChoiceRule, CountEq, CountNeq,
    DisjunctiveProgram, DisjunctiveRule, Extensional, NegLiteral, PosLiteral,
)

ATOM_NAMES = "abcdefghijklmnopqrstuvwxyz"


def signature(n: int) -> Signature:
    return Signature(tuple(ATOM_NAMES[:n]))


def _dom(rng, sig, max_dom):
    n = len(sig)
    size = int(rng.integers(1, min(max_dom, n) + 1))
    ids = rng.choice(n, size=size, replace=False)
    return sig.set(sig.atoms[i] for i in ids)


def random_atom(rng, sig, *, literal=False, head=False, max_dom=3) -> ChoiceAtom:
    if literal:
        name = sig.atoms[int(rng.integers(len(sig)))]
        sat = PosLiteral() if head or rng.random() < 0.5 else NegLiteral()
        return ChoiceAtom(sig.set([name]), sat)
    dom = _dom(rng, sig, max_dom)
    n = len(dom)
    kind = rng.choice(["pos", "neg", "card", "eq", "neq", "ext"])
    if n == 1 and kind in ("pos", "neg"):
        return ChoiceAtom(dom, PosLiteral() if kind == "pos" else NegLiteral())
    if kind in ("card", "pos", "neg"):
        lo = int(rng.integers(0, n + 1))
        hi = None if rng.random() < 0.4 else int(rng.integers(lo, n + 1))
        return ChoiceAtom(dom, Cardinality(lo, hi))
    if kind == "eq":
        return ChoiceAtom(dom, CountEq(int(rng.integers(0, n + 1))))
    if kind == "neq":
        return ChoiceAtom(dom, CountNeq(int(rng.integers(0, n + 1))))
    subs = list(iter_submasks(dom.mask))
    pick = rng.random(len(subs)) < 0.5
    sats = tuple(m for m, keep in zip(subs, pick) if keep) or (subs[int(rng.integers(len(subs)))],)
    return ChoiceAtom(dom, Extensional(sats))


def random_choice_program(rng, n_atoms=3, max_rules=3, max_body=2, *, normal=False,
                          aggregate=False, max_dom=3) -> ChoiceProgram:
    sig = signature(n_atoms)
    rules = []
    for _ in range(int(rng.integers(1, max_rules + 1))):
        head = random_atom(rng, sig, literal=aggregate, head=True, max_dom=max_dom)
        body = tuple(random_atom(rng, sig, literal=normal, max_dom=max_dom)
                     for _ in range(int(rng.integers(0, max_body + 1))))
        rules.append(ChoiceRule(head, body))
    return ChoiceProgram(sig, tuple(rules))


def random_normal_lp(rng, n_atoms=3, max_rules=4, max_body=2) -> ChoiceProgram:
    return random_choice_program(rng, n_atoms, max_rules, max_body, normal=True, aggregate=True)


def random_dlp(rng, n_atoms=3, max_rules=3, max_body=2) -> DisjunctiveProgram:
    sig = signature(n_atoms)
    rules = []
    for _ in range(int(rng.integers(1, max_rules + 1))):
        head = _dom(rng, sig, 3)
        pos, neg = [], []
        for _ in range(int(rng.integers(0, max_body + 1))):
            name = sig.atoms[int(rng.integers(n_atoms))]
            (pos if rng.random() < 0.5 else neg).append(name)
        rules.append(DisjunctiveRule(head, sig.set(pos), sig.set(neg)))
    return DisjunctiveProgram(sig, tuple(rules))


def satisfies_assumption(p: ChoiceProgram) -> bool:
    """Every operator image at a consistent pair is non-empty.

    All four lower bounds at (x, y) contain the family IC_P(y) restricted to a
    subset of its heads, and the unions contain IC_P(y); a head subset of a
    satisfiable head set is satisfiable. So it suffices that IC_P(z) ≠ ∅ for all z.
    """
    eng = engine(p)
    return all(eng.ic_raw(z) for z in iter_submasks(p.signature.full_mask))


def assumption_safe_programs(seed, count, **kwargs):
    """``count`` random choice programs satisfying the non-emptiness requirement."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        p = random_choice_program(rng, **kwargs)
        if satisfies_assumption(p):
            out.append(p)
    return out


__all__ = [
    "signature", "random_atom", "random_choice_program", "random_normal_lp", "random_dlp",
    "satisfies_assumption", "assumption_safe_programs", "AssumptionViolation",
]
