"""A coarser tree order used to analyse strong compatibility.

Nodes keep their labels and the ancestor relation is both preserved and
reflected, but siblings may land deeper than their parent's image.
"""

import itertools
from functools import lru_cache

from adaptable.core import Loc, canonicalize, components


@lru_cache(maxsize=None)
def _emb(x, y):
    if isinstance(x, Loc):
        return (isinstance(y, Loc) and x.name == y.name
                and _forest(components(x.body), components(y.body)))
    return x == y


@lru_cache(maxsize=None)
def _sub(x, y):
    return _emb(x, y) or (isinstance(y, Loc) and any(_sub(x, c) for c in components(y.body)))


@lru_cache(maxsize=None)
def _forest(xs, ys):
    if not xs:
        return True
    options = [[j for j, y in enumerate(ys) if _sub(x, y)] for x in xs]
    for choice in itertools.product(*options):
        if all(_fits(tuple(x for x, c in zip(xs, choice) if c == j), y)
               for j, y in enumerate(ys)):
            return True
    return False


def _fits(part, y):
    if not part:
        return True
    if len(part) == 1 and _emb(part[0], y):
        return True
    return isinstance(y, Loc) and _forest(part, components(y.body))


def ancestral(p, q) -> bool:
    return _forest(components(canonicalize(p)), components(canonicalize(q)))
