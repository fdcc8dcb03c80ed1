"""Reference implementations for differential testing.

Nothing here touches the operator module. Sets are frozensets of atom names
and choice atoms are read through their explicit satisfier lists, so the
code paths share only the parser and the atom primitives.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations

from .errors import ResourceCapExceeded, UnsupportedProgram
from .lattice import AtomSet, Pair
from .limits import current_limits
from .syntax import ChoiceAtom, ChoiceProgram, literal_shape


def powerset(items):
    items = sorted(items)
    return [frozenset(c) for c in chain.from_iterable(combinations(items, k) for k in range(len(items) + 1))]


@dataclass(frozen=True)
class _Atom:
    dom: frozenset
    sat: frozenset  # of frozensets

    def ok(self, s) -> bool:
        return frozenset(s) & self.dom in self.sat


def _explicit(c: ChoiceAtom) -> _Atom:
    sig = c.signature
    return _Atom(frozenset(c.dom.names),
                 frozenset(frozenset(sig.names_of(m)) for m in c.satisfier_masks()))


def _rules(p: ChoiceProgram):
    return [(_explicit(r.head), [_explicit(b) for b in r.body]) for r in p.rules]


def _names(x):
    return frozenset(x.names) if isinstance(x, AtomSet) else frozenset(x)


def _model(rules, y) -> bool:
    return all(h.ok(y) or not all(b.ok(y) for b in body) for h, body in rules)


def all_subsets(p: ChoiceProgram):
    n = len(p.signature)
    if n > current_limits().max_sweep_atoms:
        raise ResourceCapExceeded("signature too large for exhaustive enumeration")
    return powerset(p.signature.atoms)


# ---------------------------------------------------------------- NSS construction

@dataclass(frozen=True)
class NssProgram:
    rules: tuple  # (head atom name, tuple of _Atom bodies)


def _closure_atom(c: _Atom, y) -> _Atom:
    # satisfiers of the derived atom: w ∩ dom for z ⊆ w ⊆ y, z ∈ sat, z ⊆ y
    y = frozenset(y)
    out = set()
    for z in c.sat:
        if z <= y:
            for extra in powerset((y - z) & c.dom):
                out.add(z | extra)
    return _Atom(c.dom, frozenset(out))


def nss_build(p: ChoiceProgram, y) -> NssProgram:
    y = _names(y)
    rules = []
    for head, body in _rules(p):
        if not all(b.ok(y) for b in body):
            continue
        new_body = tuple(_closure_atom(b, y) for b in body)
        for alpha in sorted(head.dom & y):
            rules.append((alpha, new_body))
    return NssProgram(tuple(rules))


def nss_least_model(p: ChoiceProgram, y) -> frozenset:
    prog = nss_build(p, y)
    z = frozenset()
    while True:
        nxt = frozenset(a for a, body in prog.rules if all(b.ok(z) for b in body))
        if nxt == z:
            return z
        z = nxt


def mr_stable_via_nss(p: ChoiceProgram) -> list[frozenset]:
    rules = _rules(p)
    return [y for y in all_subsets(p) if _model(rules, y) and nss_least_model(p, y) == y]


# ---------------------------------------------------------------- reduct-based oracles

def _normal_rules(p: ChoiceProgram):
    out = []
    for r in p.rules:
        head = literal_shape(r.head)
        if head is None or not head[1]:
            raise UnsupportedProgram("the reduct oracle needs atom heads")
        pos, neg = set(), set()
        for b in r.body:
            shape = literal_shape(b)
            if shape is None:
                raise UnsupportedProgram("the reduct oracle needs literal bodies")
            (pos if shape[1] else neg).add(shape[0])
        out.append((head[0], frozenset(pos), frozenset(neg)))
    return out


def _least(definite):
    m = set()
    changed = True
    while changed:
        changed = False
        for h, pos in definite:
            if h not in m and pos <= m:
                m.add(h)
                changed = True
    return frozenset(m)


def gamma(p: ChoiceProgram, x) -> frozenset:
    """Least model of the reduct of p by x."""
    x = _names(x)
    return _least([(h, pos) for h, pos, neg in _normal_rules(p) if not neg & x])


def gl_stable_models(p: ChoiceProgram) -> list[frozenset]:
    _normal_rules(p)
    return [x for x in all_subsets(p) if gamma(p, x) == x]


def gl_partial_stable(p: ChoiceProgram) -> list[tuple[frozenset, frozenset]]:
    """Pairs (x, y), x ⊆ y, with x = Γ(y) and y = Γ(x)."""
    _normal_rules(p)
    out = []
    for y in all_subsets(p):
        x = gamma(p, y)
        if x <= y and gamma(p, x) == y:
            out.append((x, y))
    return out


def fitting_operator(p: ChoiceProgram, pair) -> tuple[frozenset, frozenset]:
    """Three-valued immediate consequence on a normal logic program."""
    x, y = (_names(pair.lower), _names(pair.upper)) if isinstance(pair, Pair) else map(_names, pair)
    lo, up = set(), set()
    for h, pos, neg in _normal_rules(p):
        if pos <= x and not neg & y:
            lo.add(h)
        if pos <= y and not neg & x:
            up.add(h)
    return frozenset(lo), frozenset(up)


# ---------------------------------------------------------------- naive operator pieces

def naive_lpst_hd(p: ChoiceProgram, pair: Pair) -> list[ChoiceAtom]:
    """LPST head selection by enumerating the whole interval [x, y]."""
    x, y = _names(pair.lower), _names(pair.upper)
    if len(y - x) > current_limits().max_interval:
        raise ResourceCapExceeded("interval too large")
    interval = [x | e for e in powerset(y - x)] if x <= y else []
    heads = []
    for r, (h, body) in zip(p.rules, _rules(p)):
        if all(all(b.ok(z) for b in body) for z in interval):
            heads.append(r.head)
    return list(dict.fromkeys(heads))


def naive_ic(p: ChoiceProgram, x) -> list[frozenset]:
    x = _names(x)
    heads = [h for h, body in _rules(p) if all(b.ok(x) for b in body)]
    union = frozenset().union(*(h.dom for h in heads)) if heads else frozenset()
    return [z for z in powerset(union) if all(h.ok(z) for h in heads)]


def gz_stable_models(p: ChoiceProgram) -> list[frozenset]:
    """x equal to the least model of its domain reduct.

    Rules whose body x satisfies become definite rules deriving each head
    atom of x from the x-part of every body domain.
    """
    rules = _rules(p)
    out = []
    for x in all_subsets(p):
        if not _model(rules, x):
            continue
        definite = []
        for h, body in rules:
            if all(b.ok(x) for b in body):
                need = frozenset().union(*(b.dom & x for b in body)) if body else frozenset()
                definite.extend((a, need) for a in h.dom & x)
        if _least(definite) == x:
            out.append(x)
    return out
