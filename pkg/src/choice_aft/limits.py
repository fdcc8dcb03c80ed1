"""Resource caps for the exponential enumerations.

Caps live in a context variable so concurrent callers can override them
independently::

    with using_limits(max_interval=10):
        ...
"""
import contextlib
import contextvars
import dataclasses
import os
from dataclasses import dataclass


def _env_states():
    raw = os.environ.get("CHOICE_AFT_MAX_STATES")
    return int(raw) if raw else 1 << 20


@dataclass(frozen=True)
class Limits:
    max_interval: int = 24        # free atoms in an interval [x, y]
    max_extensional: int = 20     # domain size for extensionalize
    max_enumeration: int = 24     # head-domain unions and witness searches
    max_sweep_atoms: int = 12     # signature size for exhaustive pair sweeps
    max_states: int = dataclasses.field(default_factory=_env_states)
    max_bruteforce: int = 6       # |x| for brute-force level maps


_current = contextvars.ContextVar("choice_aft_limits", default=None)


def current_limits() -> Limits:
    lim = _current.get()
    if lim is None:
        lim = Limits()
        _current.set(lim)
    return lim


@contextlib.contextmanager
def using_limits(**overrides):
    token = _current.set(dataclasses.replace(current_limits(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
