import numpy as np
import pytest

from choice_aft.errors import ResourceCapExceeded, UnsupportedProgram
from choice_aft.generate import random_choice_program, random_normal_lp
from choice_aft.groundedness import (
    GroundednessReport, LevelMap, Notion, check_level_map, erdem_grounded, grounded,
    grounded_bruteforce, groundedness_of_cstable, is_a_grounded, is_d_grounded,
    is_s_grounded, is_trigger,
)
from choice_aft.operators import OperatorKind

from _util import prog, s, safe_programs

DOMAIN_EX = "b :- 1 {a; b}. a."
CHAIN_EX = "a :- {a; b} != 1. b :- {a; b} != 1."
NEQ_EX = "{p; q} = 2 :- {p; q} != 1."
ULT_EX = "{p; q} = 2 :- {p; q} = 2."


def test_trigger_examples():
    p = prog(DOMAIN_EX)
    sig = p.signature
    rule = p.rules[0]
    assert is_trigger(s(sig, "a"), s(sig, "ab"), rule)
    assert not is_trigger(s(sig, ""), s(sig, "ab"), rule)
    chain = prog(CHAIN_EX)
    for z in ("", "b"):
        assert not is_trigger(s(chain.signature, z), s(chain.signature, "ab"), chain.rules[0])


def test_trigger_empty_body_and_outside():
    p = prog("a. b :- a.")
    sig = p.signature
    for z in sig.subsets():
        assert is_trigger(z, s(sig, "ab"), p.rules[0])
    assert not is_trigger(s(sig, "b"), s(sig, "a"), p.rules[0])


def test_domain_example():
    p = prog(DOMAIN_EX)
    x = s(p.signature, "ab")
    assert not is_d_grounded(x, p).holds
    rep = is_s_grounded(x, p)
    assert rep.holds and rep.witness == LevelMap((("a", 0), ("b", 1)))


def test_chain_example():
    p = prog(CHAIN_EX)
    x = s(p.signature, "ab")
    rep = is_s_grounded(x, p)
    assert not rep.holds and rep.blocking == x
    assert is_a_grounded(x, p).holds


def test_neq_example():
    p = prog(NEQ_EX)
    x = s(p.signature, "pq")
    assert is_a_grounded(x, p).holds
    assert not is_s_grounded(x, p).holds


@pytest.mark.parametrize("notion", list(Notion))
def test_trivial_cases(notion):
    p = prog("a.")
    assert grounded(notion, s(p.signature, "a"), p).holds
    assert grounded(notion, s(p.signature, ""), p).holds


def test_erdem():
    p = prog("b :- not c. c :- not b.")
    x = s(p.signature, "bc")
    assert erdem_grounded(x, p).holds
    loop = prog("a :- a.")
    assert not erdem_grounded(s(loop.signature, "a"), loop).holds
    with pytest.raises(UnsupportedProgram):
        erdem_grounded(s(prog(DOMAIN_EX).signature, "ab"), prog(DOMAIN_EX))


def test_a_grounded_with_negative_bodies():
    # the empty set satisfies "not c", so b and c are justified at level 0
    p = prog("b :- not c. c :- not b.")
    rep = is_a_grounded(s(p.signature, "bc"), p)
    assert rep.holds and rep.witness == LevelMap((("b", 0), ("c", 0)))


def test_report_json():
    p = prog(CHAIN_EX)
    bad = is_s_grounded(s(p.signature, "ab"), p).to_json()
    assert bad == {"notion": "s", "holds": False, "blocking": ["a", "b"]}
    good = is_a_grounded(s(p.signature, "ab"), p).to_json()
    assert good["levels"] == {"a": 0, "b": 0}


@pytest.mark.parametrize("text", [DOMAIN_EX, CHAIN_EX, NEQ_EX, ULT_EX])
def test_saturation_matches_bruteforce_on_examples(text):
    p = prog(text)
    for x in p.signature.subsets():
        for n in (Notion.D, Notion.S, Notion.A):
            assert grounded(n, x, p).holds == grounded_bruteforce(n, x, p).holds


def test_saturation_matches_bruteforce_random():
    rng = np.random.default_rng(41)
    for _ in range(40):
        p = random_choice_program(rng, n_atoms=5, max_rules=3)
        for x in p.signature.subsets():
            got = {}
            for n in (Notion.D, Notion.S, Notion.A):
                rep = grounded(n, x, p)
                assert rep.holds == grounded_bruteforce(n, x, p).holds
                if rep.holds:
                    assert check_level_map(n, x, p, rep.witness)
                got[n] = rep.holds
            assert not got[Notion.D] or got[Notion.S]
            assert not got[Notion.S] or got[Notion.A]


def test_a_grounded_implies_erdem():
    rng = np.random.default_rng(42)
    for _ in range(80):
        p = random_normal_lp(rng, n_atoms=4)
        for x in p.signature.subsets():
            if is_a_grounded(x, p).holds:
                rep = erdem_grounded(x, p)
                assert rep.holds and check_level_map(Notion.ERDEM, x, p, rep.witness)


def test_bruteforce_cap():
    p = prog(" ".join(f"a{i}." for i in range(7)))
    with pytest.raises(ResourceCapExceeded):
        grounded_bruteforce("a", p.signature.set(p.signature.atoms), p)


def test_check_level_map_rejects_bad_witness():
    p = prog(DOMAIN_EX)
    x = s(p.signature, "ab")
    assert not check_level_map(Notion.S, x, p, LevelMap((("a", 1), ("b", 0))))
    assert not check_level_map(Notion.S, x, p, LevelMap((("a", 0),)))


def test_ult_counterexample():
    p = prog(ULT_EX)
    rows = groundedness_of_cstable(OperatorKind.ULT, p)
    full = [r for r in rows if str(r["pair"]) == "({p,q}, {p,q})"]
    assert full and not full[0]["lower"]["a"] and not full[0]["upper"]["a"]


def test_operator_guarantees_random():
    for p in safe_programs(43, 40):
        for kind in (OperatorKind.GZ, OperatorKind.LPST, OperatorKind.MR):
            for row in groundedness_of_cstable(kind, p):
                assert row["lower"]["a"] and row["upper"]["a"]
                if kind is not OperatorKind.MR:
                    assert row["lower"]["s"]
                if kind is OperatorKind.GZ:
                    assert row["lower"]["d"] and row["upper"]["d"]
