"""Adaptable processes: parsing, semantics and adaptation checks."""

from .cluster import Cluster, Verdict, ba_oracle, ea_oracle
from .core import canonicalize, classify, counts, cstr, cstrs, fill
from .semantics import DYNAMIC, STATIC, explore, successors
from .syntax import parse_pattern, parse_process, render

__all__ = [
    "Cluster", "Verdict", "ba_oracle", "ea_oracle",
    "canonicalize", "classify", "counts", "cstr", "cstrs", "fill",
    "DYNAMIC", "STATIC", "explore", "successors",
    "parse_pattern", "parse_process", "render",
]
