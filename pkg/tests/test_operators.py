import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from choice_aft import oracles
from choice_aft.errors import AssumptionViolation, InconsistentPairError
from choice_aft.generate import random_dlp, random_normal_lp, signature
from choice_aft.lattice import AtomSet, Pair, hoare_leq, iter_submasks, smyth_leq
from choice_aft.operators import (
    HeadInconsistent, OperatorKind, applicable, apply_ndao, bounds_masks, d2c, hd_lower, ic,
    ic_d, ic_lower, ic_upper,
)
from choice_aft.syntax import format_program

from _util import COUNT_CHOICE, PQ, fam, masks, pair, prog, s, safe_programs

GZ, LPST, MR, ULT = OperatorKind.GZ, OperatorKind.LPST, OperatorKind.MR, OperatorKind.ULT
ALL4 = fam(PQ, "", "p", "q", "pq")


@pytest.fixture
def cc():
    return prog(COUNT_CHOICE)


def test_kind_parse():
    assert OperatorKind.parse("LPST") is LPST
    assert OperatorKind.parse(ULT) is ULT
    with pytest.raises(ValueError):
        OperatorKind.parse("fitting")


def test_applicable(cc):
    assert len(applicable(cc, s(PQ))) == 1
    assert applicable(cc, s(PQ, "p")) == []
    facts = prog("a. b :- a.")
    assert len(applicable(facts, facts.signature.set([]))) == 1


@pytest.mark.parametrize("x, expected", [
    ("", ("p", "q", "pq")),
    ("pq", ("p", "q", "pq")),
    ("p", ("",)),
    ("q", ("",)),
])
def test_ic_example(cc, x, expected):
    assert ic(cc, s(PQ, x)) == fam(PQ, *expected)


def test_ic_no_rules():
    p = prog("")
    assert masks(ic(p, p.signature.set([]))) == (0,)


def test_hd_lower_example(cc):
    pr = pair(PQ, "p", "pq")
    assert hd_lower(LPST, cc, pr) == []
    assert hd_lower(GZ, cc, pr) == []
    assert [str(c) for c in hd_lower(MR, cc, pr)] == ["1 {p; q} 2"]


def test_operator_example(cc):
    pr = pair(PQ, "p", "pq")
    assert ic_lower(MR, cc, pr) == fam(PQ, "p", "q", "pq")
    assert ic_lower(LPST, cc, pr) == fam(PQ, "")
    assert ic_lower(GZ, cc, pr) == ic_upper(GZ, cc, pr) == fam(PQ, "")
    assert ic_lower(ULT, cc, pr) == ic_upper(ULT, cc, pr) == ALL4
    assert ic_upper(MR, cc, pr) == ic_upper(LPST, cc, pr) == ALL4
    assert apply_ndao(MR, cc, pr).contains(pr)
    assert apply_ndao(ULT, cc, pr).contains(pr)
    assert not apply_ndao(LPST, cc, pr).contains(pr)
    assert not apply_ndao(GZ, cc, pr).contains(pr)


def test_gz_counterexample_needs_override():
    p = prog("p :- {p; q} != 0.")
    bad = pair(p.signature, "pq", "p")
    with pytest.raises(InconsistentPairError):
        apply_ndao(GZ, p, bad)
    low_total = ic_lower(GZ, p, pair(p.signature, "p", "p"))
    low_bad = ic_lower(GZ, p, bad, allow_inconsistent=True)
    assert low_total == fam(p.signature, "p")
    assert low_bad == fam(p.signature, "")
    assert not smyth_leq(low_total, low_bad)


def test_upper_bounds_coincide():
    for p in safe_programs(3, 30, max_atoms=3):
        full = p.signature.full_mask
        for x, y in itertools.product(iter_submasks(full), repeat=2):
            mr, lp, ult = (bounds_masks(k, p, x, y) for k in (MR, LPST, ULT))
            assert mr[1] == lp[1] == ult[0] == ult[1]


def test_assumption_violation():
    p = prog("{p; q} != 2. {p; q} = 2.")
    with pytest.raises(HeadInconsistent):
        ic(p, p.signature.set([]))
    with pytest.raises(AssumptionViolation, match="outside the supported fragment"):
        apply_ndao(LPST, p, pair(p.signature, "", "pq"))


def test_exactness_sweep():
    for p in safe_programs(21, 60):
        for x in p.signature.subsets():
            want = ic(p, x)
            for k in OperatorKind:
                out = apply_ndao(k, p, Pair(x, x))
                assert out.lower == want and out.upper == want


def _steps(x, y, full):
    """Single-atom ≤_i successors; the orders are transitive, so these suffice."""
    for i in range(full.bit_length()):
        b = 1 << i
        if not x & b:
            yield x | b, y
        if y & b:
            yield x, y & ~b


def test_lpst_ult_monotone_everywhere():
    for p in safe_programs(22, 80):
        full = p.signature.full_mask
        for k in (LPST, ULT):
            for x, y in itertools.product(iter_submasks(full), repeat=2):
                lo1, up1 = bounds_masks(k, p, x, y)
                for x2, y2 in _steps(x, y, full):
                    lo2, up2 = bounds_masks(k, p, x2, y2)
                    assert smyth_leq(lo1, lo2) and hoare_leq(up2, up1), (format_program(p), x, y, x2, y2)


def test_gz_lower_monotone_on_consistent_pairs():
    for p in safe_programs(23, 80):
        full = p.signature.full_mask
        for x, y in itertools.product(iter_submasks(full), repeat=2):
            if x & ~y:
                continue
            lo1 = bounds_masks(GZ, p, x, y)[0]
            for x2, y2 in _steps(x, y, full):
                if x2 & ~y2 == 0:
                    assert smyth_leq(lo1, bounds_masks(GZ, p, x2, y2)[0])


def test_gz_upper_not_hoare_monotone():
    p = prog("2 {b; c} :- 2 {a; b; c}, {b; c} = 2. {b} != 0.")
    sig = p.signature
    a, b = apply_ndao(GZ, p, pair(sig, "", "bc")), apply_ndao(GZ, p, pair(sig, "bc", "bc"))
    assert smyth_leq(a.lower, b.lower)
    assert not hoare_leq(b.upper, a.upper)


def test_mr_semi_ndao():
    for p in safe_programs(24, 80):
        full = p.signature.full_mask
        for x, y in itertools.product(iter_submasks(full), repeat=2):
            lo, up = bounds_masks(MR, p, x, y)
            for i in range(full.bit_length()):
                bit = 1 << i
                if not x & bit:
                    assert smyth_leq(lo, bounds_masks(MR, p, x | bit, y)[0])
                if y & bit:
                    assert hoare_leq(bounds_masks(MR, p, x, y & ~bit)[1], up)


def test_mr_equals_lpst_on_normal_programs_consistent():
    rng = np.random.default_rng(25)
    checked = 0
    while checked < 80:
        p = random_normal_lp(rng, n_atoms=4) if checked % 2 else \
            safe_programs(int(rng.integers(1 << 30)), 1, normal=True)[0]
        full = p.signature.full_mask
        try:
            for x, y in itertools.product(iter_submasks(full), repeat=2):
                if x & ~y == 0:
                    assert bounds_masks(MR, p, x, y) == bounds_masks(LPST, p, x, y)
        except AssumptionViolation:
            continue
        checked += 1


def test_mr_lpst_differ_on_inconsistent_pair():
    p = prog("{d} = 0. choice([a], [[], [a]]) :- not c, not b.")
    # x = {a}, y = {b}: the LPST interval is empty so every rule fires
    mr, lp = bounds_masks(MR, p, 1, 2), bounds_masks(LPST, p, 1, 2)
    assert mr != lp


def test_lpst_heads_match_naive_interval():
    for p in safe_programs(26, 60):
        sig = p.signature
        for x, y in itertools.product(sig.subsets(), repeat=2):
            pr = Pair(x, y)
            want = oracles.naive_lpst_hd(p, pr)
            got = hd_lower(LPST, p, pr, allow_inconsistent=True)
            assert set(got) == set(want)


def test_ic_matches_naive():
    for p in safe_programs(27, 60):
        for x in p.signature.subsets():
            assert sorted(ic(p, x).masks) == sorted(p.signature.mask_of(z) for z in oracles.naive_ic(p, x))


def test_lpst_against_three_valued_operator():
    rng = np.random.default_rng(28)
    for _ in range(80):
        p = random_normal_lp(rng, n_atoms=4)
        sig = p.signature
        for x, y in itertools.product(sig.subsets(), repeat=2):
            if not x <= y:
                continue
            lo, up = oracles.fitting_operator(p, (x, y))
            out = apply_ndao(LPST, p, Pair(x, y))
            assert masks(out.lower) == (sig.mask_of(lo),)
            assert hoare_leq(out.upper, (sig.mask_of(up),))


# ---------------------------------------------------------------- disjunctive programs

def test_d2c_examples():
    assert format_program(d2c(prog("p | q."))) == "1 {p; q}."
    assert format_program(d2c(prog("p | q :- a, not b."))) == "1 {p; q} :- a, not b."
    d = prog("a | b. c :- not a.")
    assert format_program(d2c(d)).splitlines()[1] == "c :- not a."


def test_ic_d_examples():
    d = prog("p | q.")
    out = ic_d(d, pair(d.signature, "", ""))
    assert out.lower == fam(d.signature, "p", "q", "pq")
    empty = prog("")
    e = ic_d(empty, pair(empty.signature, "", ""))
    assert masks(e.lower) == masks(e.upper) == (0,)


def test_dlp_bridge_lower_bounds():
    rng = np.random.default_rng(29)
    for _ in range(60):
        d = random_dlp(rng, 4)
        c = d2c(d)
        full = d.signature.full_mask
        for x, y in itertools.product(iter_submasks(full), repeat=2):
            if x & ~y:
                continue
            pr = Pair(AtomSet(x, d.signature), AtomSet(y, d.signature))
            lo = ic_d(d, pr).lower.masks
            assert lo == bounds_masks(MR, c, x, y)[0] == bounds_masks(LPST, c, x, y)[0]


def test_dlp_bridge_upper_differs():
    d = prog("a. d :- b, c. a | d :- a, not a.")
    sig = d.signature
    pr = pair(sig, "", "a")
    assert ic_d(d, pr).upper != apply_ndao(MR, d2c(d), pr).upper
    # the union-of-interval upper bound stays Hoare-below the hitting-set one
    assert hoare_leq(apply_ndao(MR, d2c(d), pr).upper, ic_d(d, pr).upper)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_outputs_canonical(seed):
    (p,) = safe_programs(seed, 1, max_atoms=3)
    for x, y in itertools.product(p.signature.subsets(), repeat=2):
        for k in (LPST, MR, ULT):
            out = apply_ndao(k, p, Pair(x, y))
            for f in (out.lower, out.upper):
                assert list(f.masks) == sorted(set(f.masks), key=lambda m: (bin(m).count("1"), [i for i in range(8) if m >> i & 1]))
