import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from choice_aft.errors import ResourceCapExceeded, SignatureMismatch
from choice_aft.lattice import (
    AtomSet, AtomSetFamily, Pair, Signature, ai_leq, canonical_sort, hoare_leq, interval,
    iter_submasks, leq_i, leq_t, smyth_leq,
)
from choice_aft.limits import using_limits

from _util import PQ, fam, pair, s


def test_signature_sorted_and_masks():
    sig = Signature.of(["q", "p", "q"])
    assert sig.atoms == ("p", "q")
    assert sig.mask_of(["q"]) == 2
    assert sig.names_of(3) == ("p", "q")
    with pytest.raises(SignatureMismatch):
        sig.mask_of(["r"])


def test_signature_cap():
    with pytest.raises(ResourceCapExceeded):
        Signature.of([f"a{i:02d}" for i in range(63)])


def test_subsets_canonical_order():
    assert [str(x) for x in PQ.subsets()] == ["{}", "{p}", "{q}", "{p,q}"]


def test_atomset_ops():
    p, q = s(PQ, "p"), s(PQ, "q")
    assert str(p | q) == "{p,q}"
    assert (p & q).mask == 0
    assert p <= p | q and p < p | q
    assert "p" in p and "q" not in p
    assert list(p | q) == ["p", "q"]
    other = Signature.of("pr").set(["p"])
    with pytest.raises(SignatureMismatch):
        p | other


def test_family_dedup_and_order():
    f = fam(PQ, "pq", "", "q", "p", "q")
    assert str(f) == "{{}, {p}, {q}, {p,q}}"
    assert len(f) == 4
    assert s(PQ, "pq") in f
    assert f.to_json() == [[], ["p"], ["q"], ["p", "q"]]


@pytest.mark.parametrize("a, b, expected", [
    (("", "pq"), ("p", "pq"), True),
    (("p", "p"), ("pq", "p"), True),
    (("p", "q"), ("", "pq"), False),
])
def test_leq_i(a, b, expected):
    assert leq_i(pair(PQ, *a), pair(PQ, *b)) is expected


@pytest.mark.parametrize("a, b, expected", [
    (("", ""), ("p", "p"), True),
    (("p", "p"), ("", "p"), False),
    (("p", "pq"), ("pq", "pq"), True),
])
def test_leq_t(a, b, expected):
    assert leq_t(pair(PQ, *a), pair(PQ, *b)) is expected


def test_pair_flags():
    assert pair(PQ, "p", "pq").is_consistent
    assert not pair(PQ, "pq", "p").is_consistent
    assert pair(PQ, "p", "p").is_total
    assert str(pair(PQ, "", "pq")) == "({}, {p,q})"


@pytest.mark.parametrize("X, Y, expected", [
    (("p",), ("p", "pq"), True),
    (("p",), ("",), False),
    (("",), ("p", "q", "pq"), True),
    (("",), (), True),
])
def test_smyth(X, Y, expected):
    assert smyth_leq(fam(PQ, *X), fam(PQ, *Y)) is expected


@pytest.mark.parametrize("X, Y, expected", [
    (("p", "q"), ("pq",), True),
    (("pq",), ("p",), False),
    ((), ("p",), True),
])
def test_hoare(X, Y, expected):
    assert hoare_leq(fam(PQ, *X), fam(PQ, *Y)) is expected


@pytest.mark.parametrize("A, B, expected", [
    (((""), ("", "p")), ((""), ("",)), True),
    ((("p",), ("",)), ((""), ("",)), False),
])
def test_ai_leq(A, B, expected):
    def mk(t):
        lo, up = t
        lo = (lo,) if isinstance(lo, str) else lo
        return fam(PQ, *lo), fam(PQ, *up)
    assert ai_leq(mk(A), mk(B)) is expected
    assert ai_leq(mk(A), mk(A))


def test_orders_accept_plain_masks():
    assert smyth_leq((1,), np.array([3], dtype=np.int64))
    assert hoare_leq([s(PQ, "p")], [s(PQ, "pq")])


@pytest.mark.parametrize("lo, up, expected", [
    ("", "pq", ["{}", "{p}", "{q}", "{p,q}"]),
    ("p", "p", ["{p}"]),
    ("q", "p", []),
])
def test_interval(lo, up, expected):
    assert [str(z) for z in interval(s(PQ, lo), s(PQ, up))] == expected


def test_interval_cap():
    sig = Signature.of([f"a{i}" for i in range(6)])
    with using_limits(max_interval=5):
        with pytest.raises(ResourceCapExceeded, match="interval too large"):
            list(interval(sig.set([]), sig.set(sig.atoms)))


def test_iter_submasks_ascending():
    assert list(iter_submasks(0b1010)) == [0, 2, 8, 10]
    assert list(iter_submasks(0)) == [0]


families = st.lists(st.integers(0, 15), max_size=5)


@settings(max_examples=400, deadline=None)
@given(families, families, families)
def test_family_orders_are_preorders(a, b, c):
    for leq in (smyth_leq, hoare_leq):
        assert leq(a, a)
        if leq(a, b) and leq(b, c):
            assert leq(a, c)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_leq_i_antisymmetric(x1, y1, x2, y2):
    sig = Signature.of("abcd")
    a = Pair(AtomSet(x1, sig), AtomSet(y1, sig))
    b = Pair(AtomSet(x2, sig), AtomSet(y2, sig))
    if leq_i(a, b) and leq_i(b, a):
        assert a == b


def test_interval_size_exhaustive():
    sig = Signature.of("abc")
    for x, y in itertools.product(sig.subsets(), repeat=2):
        zs = list(interval(x, y))
        if x <= y:
            assert len(zs) == 2 ** len(y - x)
            assert all(x <= z <= y for z in zs)
        else:
            assert zs == []


def test_canonical_sort():
    assert canonical_sort([3, 0, 2, 1, 2]) == (0, 1, 2, 3)
    assert canonical_sort([4, 3]) == (4, 3)
