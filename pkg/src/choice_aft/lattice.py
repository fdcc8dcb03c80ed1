"""Powerset lattice over a finite signature, pairs, families and their orders."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from . import _kernels
from .errors import ResourceCapExceeded, SignatureMismatch
from .limits import current_limits


def bit_indices(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def canonical_key(mask: int):
    """Order by cardinality, then lexicographically on member ids."""
    return (mask.bit_count(), bit_indices(mask))


def canonical_sort(masks: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(masks), key=canonical_key))


def iter_submasks(universe: int) -> Iterator[int]:
    """Submasks of ``universe`` in ascending numeric order."""
    s = 0
    while True:
        yield s
        s = (s - universe) & universe
        if s == 0:
            return


@dataclass(frozen=True)
class Signature:
    atoms: tuple[str, ...]
    index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        atoms = tuple(self.atoms)
        if list(atoms) != sorted(set(atoms)):
            raise ValueError("signature atoms must be unique and sorted")
        if len(atoms) > _kernels.MAX_SIGNATURE:
            raise ResourceCapExceeded(
                f"signature has {len(atoms)} atoms; at most {_kernels.MAX_SIGNATURE} supported")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "index", {a: i for i, a in enumerate(atoms)})

    @classmethod
    def of(cls, names: Iterable[str]) -> "Signature":
        return cls(tuple(sorted(set(names))))

    def __len__(self):
        return len(self.atoms)

    def __contains__(self, name):
        return name in self.index

    @property
    def full_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    def mask_of(self, names: Iterable[str]) -> int:
        m = 0
        for n in names:
            try:
                m |= 1 << self.index[n]
            except KeyError:
                raise SignatureMismatch(f"unknown atom {n!r}") from None
        return m

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.atoms[i] for i in bit_indices(mask))

    def set(self, names: Iterable[str] = ()) -> "AtomSet":
        return AtomSet(self.mask_of(names), self)

    def subsets(self) -> Iterator["AtomSet"]:
        """Every subset of the signature in canonical order."""
        for m in canonical_sort(iter_submasks(self.full_mask)):
            yield AtomSet(m, self)


def _check_sig(a, b):
    if a.signature != b.signature:
        raise SignatureMismatch("operands belong to different signatures")


@dataclass(frozen=True)
class AtomSet:
    mask: int
    signature: Signature

    def __post_init__(self):
        if self.mask < 0 or self.mask >> len(self.signature):
            raise SignatureMismatch("atom set has members outside the signature")

    @property
    def names(self) -> tuple[str, ...]:
        return self.signature.names_of(self.mask)

    def __iter__(self):
        return iter(self.names)

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, name):
        i = self.signature.index.get(name)
        return i is not None and bool(self.mask >> i & 1)

    def issubset(self, other: "AtomSet") -> bool:
        _check_sig(self, other)
        return self.mask & ~other.mask == 0

    __le__ = issubset

    def __lt__(self, other):
        return self.issubset(other) and self.mask != other.mask

    def __or__(self, other):
        _check_sig(self, other)
        return AtomSet(self.mask | other.mask, self.signature)

    def __and__(self, other):
        _check_sig(self, other)
        return AtomSet(self.mask & other.mask, self.signature)

    def __sub__(self, other):
        _check_sig(self, other)
        return AtomSet(self.mask & ~other.mask, self.signature)

    def to_json(self):
        return list(self.names)

    def __str__(self):
        return "{" + ",".join(self.names) + "}"


@dataclass(frozen=True)
class Pair:
    lower: AtomSet
    upper: AtomSet

    def __post_init__(self):
        _check_sig(self.lower, self.upper)

    @classmethod
    def of(cls, sig: Signature, lower: Iterable[str], upper: Iterable[str]) -> "Pair":
        return cls(sig.set(lower), sig.set(upper))

    @classmethod
    def total(cls, x: AtomSet) -> "Pair":
        return cls(x, x)

    @property
    def signature(self):
        return self.lower.signature

    @property
    def is_consistent(self) -> bool:
        return self.lower.mask & ~self.upper.mask == 0

    @property
    def is_total(self) -> bool:
        return self.lower.mask == self.upper.mask

    def to_json(self):
        return {"lower": self.lower.to_json(), "upper": self.upper.to_json()}

    def __str__(self):
        return f"({self.lower}, {self.upper})"


@dataclass(frozen=True)
class AtomSetFamily:
    """Finite family of atom sets, deduplicated and canonically ordered."""

    masks: tuple[int, ...]
    signature: Signature

    def __post_init__(self):
        object.__setattr__(self, "masks", canonical_sort(self.masks))

    @classmethod
    def of(cls, sig: Signature, sets: Iterable[Iterable[str]]) -> "AtomSetFamily":
        return cls(tuple(sig.mask_of(s) for s in sets), sig)

    def __iter__(self) -> Iterator[AtomSet]:
        return (AtomSet(m, self.signature) for m in self.masks)

    def __len__(self):
        return len(self.masks)

    def __contains__(self, item):
        if isinstance(item, AtomSet):
            _check_sig(item, self)
            item = item.mask
        return item in self.masks

    def as_array(self) -> np.ndarray:
        return np.asarray(self.masks, dtype=np.int64)

    def to_json(self):
        return [list(self.signature.names_of(m)) for m in self.masks]

    def __str__(self):
        return "{" + ", ".join(str(s) for s in self) + "}"


def leq_i(a: Pair, b: Pair) -> bool:
    """Information order: the lower bound grows and the upper bound shrinks."""
    _check_sig(a.lower, b.lower)
    return (a.lower.mask & ~b.lower.mask == 0) and (b.upper.mask & ~a.upper.mask == 0)


def leq_t(a: Pair, b: Pair) -> bool:
    _check_sig(a.lower, b.lower)
    return (a.lower.mask & ~b.lower.mask == 0) and (a.upper.mask & ~b.upper.mask == 0)


def _masks(fam) -> np.ndarray:
    if isinstance(fam, AtomSetFamily):
        return fam.as_array()
    return np.asarray([s.mask if isinstance(s, AtomSet) else s for s in fam], dtype=np.int64)


def smyth_leq(X, Y) -> bool:
    """Every member of Y is above some member of X."""
    return bool(_kernels.active.smyth(_masks(X), _masks(Y)))


def hoare_leq(X, Y) -> bool:
    """Every member of X is below some member of Y."""
    return bool(_kernels.active.hoare(_masks(X), _masks(Y)))


def _bounds(A):
    if hasattr(A, "lower"):
        return A.lower, A.upper
    lo, up = A
    return lo, up


def ai_leq(A, B) -> bool:
    """Information order on pairs of families: Smyth below, Hoare reversed above."""
    a_lo, a_up = _bounds(A)
    b_lo, b_up = _bounds(B)
    return smyth_leq(a_lo, b_lo) and hoare_leq(b_up, a_up)


def check_interval(free_bits: int):
    cap = current_limits().max_interval
    if free_bits > cap:
        raise ResourceCapExceeded(f"interval too large: {free_bits} free atoms (cap {cap})")


def interval_masks(x: int, y: int) -> Iterator[int]:
    """Masks z with x ⊆ z ⊆ y, ascending numerically; empty when x ⊄ y."""
    if x & ~y:
        return
    free = y & ~x
    check_interval(free.bit_count())
    for s in iter_submasks(free):
        yield x | s


def interval(x: AtomSet, y: AtomSet) -> Iterator[AtomSet]:
    """All z with x ⊆ z ⊆ y in canonical order."""
    _check_sig(x, y)
    if x.mask & ~y.mask:
        return iter(())
    sig = x.signature
    return (AtomSet(m, sig) for m in canonical_sort(interval_masks(x.mask, y.mask)))
