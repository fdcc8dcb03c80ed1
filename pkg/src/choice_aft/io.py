"""JSON encoding of programs.

A choice program::

    {"kind": "choice", "atoms": ["p", "q"],
     "rules": [{"head": {"kind": "card", "dom": ["p", "q"], "lo": 1, "hi": 2},
                "body": [{"kind": "neq", "dom": ["p", "q"], "k": 1}]}]}

Atom kinds: ``pos``/``neg`` (``dom`` of one atom), ``card`` (``lo``, ``hi`` or
null), ``eq``/``neq`` (``k``), ``ext`` (``sat``: list of atom lists).
A disjunctive program uses ``"kind": "disjunctive"`` with rules
``{"head": [...], "pos": [...], "neg": [...]}``.
"""
from __future__ import annotations

import json

from .lattice import Signature
from .syntax import (
    Cardinality, ChoiceAtom, ChoiceProgram, ChoiceRule, CountEq, CountNeq,
    DisjunctiveProgram, DisjunctiveRule, Extensional, NegLiteral, PosLiteral,
)


def atom_to_json(c: ChoiceAtom) -> dict:
    sig = c.signature
    out = {"dom": list(c.dom.names)}
    s = c.sat
    if isinstance(s, PosLiteral):
        out["kind"] = "pos"
    elif isinstance(s, NegLiteral):
        out["kind"] = "neg"
    elif isinstance(s, Cardinality):
        out.update(kind="card", lo=s.lo, hi=s.hi)
    elif isinstance(s, CountEq):
        out.update(kind="eq", k=s.k)
    elif isinstance(s, CountNeq):
        out.update(kind="neq", k=s.k)
    else:
        out.update(kind="ext", sat=[list(sig.names_of(m)) for m in s.sats])
    return out


def atom_from_json(sig: Signature, d: dict) -> ChoiceAtom:
    dom = sig.set(d["dom"])
    kind = d["kind"]
    if kind == "pos":
        return ChoiceAtom(dom, PosLiteral())
    if kind == "neg":
        return ChoiceAtom(dom, NegLiteral())
    if kind == "card":
        return ChoiceAtom(dom, Cardinality(d.get("lo", 0), d.get("hi")))
    if kind == "eq":
        return ChoiceAtom(dom, CountEq(d["k"]))
    if kind == "neq":
        return ChoiceAtom(dom, CountNeq(d["k"]))
    if kind == "ext":
        return ChoiceAtom(dom, Extensional(tuple(sig.mask_of(s) for s in d["sat"])))
    raise ValueError(f"unknown atom kind {kind!r}")


def program_to_json(p) -> dict:
    if isinstance(p, DisjunctiveProgram):
        return {
            "kind": "disjunctive",
            "atoms": list(p.signature.atoms),
            "rules": [{"head": list(r.head.names), "pos": list(r.pos.names),
                       "neg": list(r.neg.names)} for r in p.rules],
        }
    return {
        "kind": "choice",
        "atoms": list(p.signature.atoms),
        "rules": [{"head": atom_to_json(r.head), "body": [atom_to_json(b) for b in r.body]}
                  for r in p.rules],
    }


def program_from_json(d: dict):
    sig = Signature.of(d["atoms"])
    if d.get("kind") == "disjunctive":
        rules = tuple(DisjunctiveRule(sig.set(r["head"]), sig.set(r.get("pos", [])),
                                      sig.set(r.get("neg", []))) for r in d["rules"])
        return DisjunctiveProgram(sig, rules)
    rules = tuple(ChoiceRule(atom_from_json(sig, r["head"]),
                             tuple(atom_from_json(sig, b) for b in r.get("body", [])))
                  for r in d["rules"])
    return ChoiceProgram(sig, rules)


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
