"""Clusters and brute-force adaptation oracles.

The oracles enumerate cluster members up to a copy bound and search their
reduction graphs; they are ground truth for the decision procedures on small
fixtures, not decision procedures themselves.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .core import Term, canonicalize, par
from .semantics import DYNAMIC, bounded_barb_k, bounded_barb_omega
from .syntax import render


@dataclass
class Cluster:
    initial: Term
    mods: list = field(default_factory=list)

    def __post_init__(self):
        self.initial = canonicalize(self.initial)
        self.mods = [canonicalize(m) for m in self.mods]

    def members(self) -> list[Term]:
        return [self.initial, *self.mods]


@dataclass
class Verdict:
    status: str                 # "holds", "violated" or "inconclusive"
    counts: list | None = None  # copies of each modification in the witness
    trace: list | None = None   # canonical states of the witness run
    reason: str = ""
    exact: bool = True

    @property
    def violated(self) -> bool:
        return self.status == "violated"

    def to_json(self) -> dict:
        out = {"verdict": self.status}
        if self.counts is not None:
            out["counts"] = list(self.counts)
        if self.trace is not None:
            out["trace"] = [render(t) for t in self.trace]
        if self.reason:
            out["reason"] = self.reason
        return out


def instantiate(c: Cluster, counts) -> Term:
    counts = list(counts)
    if len(counts) != len(c.mods):
        raise ValueError(f"expected {len(c.mods)} counts, got {len(counts)}")
    parts = [c.initial]
    for m, n in zip(c.mods, counts):
        if n < 0:
            raise ValueError("copy counts must be non-negative")
        parts.extend([m] * n)
    return par(parts)


def count_vectors(n_mods: int, bound: int):
    """All vectors in [0, bound]^n, smallest total first."""
    vecs = itertools.product(range(bound + 1), repeat=n_mods)
    return sorted(vecs, key=lambda v: (sum(v), v))


def workers() -> int:
    try:
        return max(1, int(os.environ.get("ADAPT_WORKERS", "1")))
    except ValueError:
        return 1


def _fan_out(fn, jobs):
    n = workers()
    if n == 1 or len(jobs) < 2:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(n) as pool:
        return list(pool.map(fn, *zip(*jobs)))


def _ba_instance(c, counts, alpha, k, depth, mode):
    return bounded_barb_k(instantiate(c, counts), alpha, k, depth, mode)


def ba_oracle(c: Cluster, alpha, k: int, copy_bound: int, depth: int,
              mode: str = DYNAMIC) -> Verdict:
    vecs = count_vectors(len(c.mods), copy_bound)
    results = _fan_out(_ba_instance, [(c, v, alpha, k, depth, mode) for v in vecs])
    closed = True
    for v, res in zip(vecs, results):
        if res.found:
            return Verdict("violated", list(v), res.trace)
        closed &= res.exact
    reason = "" if closed else f"some graph not closed within depth {depth}"
    return Verdict("holds", exact=closed, reason=reason)


def _ea_instance(c, counts, alpha, state_limit, mode):
    return bounded_barb_omega(instantiate(c, counts), alpha, state_limit, mode)


def ea_oracle(c: Cluster, alpha, copy_bound: int, state_limit: int,
              mode: str = DYNAMIC) -> Verdict:
    vecs = count_vectors(len(c.mods), copy_bound)
    results = _fan_out(_ea_instance, [(c, v, alpha, state_limit, mode) for v in vecs])
    closed = True
    for v, res in zip(vecs, results):
        if res.found:
            return Verdict("violated", list(v), res.trace)
        closed &= res.exact
    reason = "" if closed else f"state limit {state_limit} reached"
    return Verdict("holds", exact=closed, reason=reason)
