"""Seeded random terms for tests.

Kinds: "any" (holes anywhere inside update patterns), "static" (static
topology), "s3" (static with hole-preserving updates) and "d2" (holes never
under prefixes).
"""

from __future__ import annotations

import random

from adaptable.core import (HOLE, NIL, In, Loc, Out, Repl, Sum, Update, canonicalize, classify,
                            par)

CHANNELS = ("a", "b", "e")
LOCS = ("l", "m")


class TermGen:
    def __init__(self, seed=0, channels=CHANNELS, locs=LOCS, depth=3):
        self.rng = random.Random(seed)
        self.channels = channels
        self.locs = locs
        self.depth = depth

    # -- generic terms ------------------------------------------------------

    def _prefix(self, d, kind):
        r = self.rng.random()
        if r < 0.4:
            return In(self.rng.choice(self.channels))
        if r < 0.8 or d <= 0:
            return Out(self.rng.choice(self.channels))
        a = self.rng.choice(self.locs)
        if kind == "any":
            return Update(a, self.any(d - 1, holes=True))
        if kind == "d2":
            return Update(a, self.d2_pattern(d - 1))
        if kind == "static":
            return Update(a, par(Loc(a, self.static(d - 1, holes=True)), self.seq(d - 1, kind)))
        return Update(a, par(Loc(a, self.s3_hole(d - 1)), self.seq(d - 1, kind)))

    def _branches(self, d, kind, cont):
        n = 1 if self.rng.random() < 0.75 else 2
        return [(self._prefix(d, kind), cont(d - 1)) for _ in range(n)]

    def any(self, d=None, holes=False):
        d = self.depth if d is None else d
        r = self.rng.random()
        if d <= 0 or r < 0.15:
            return HOLE if holes and self.rng.random() < 0.5 else NIL
        if holes and r < 0.25:
            return HOLE
        if r < 0.45:
            return Loc(self.rng.choice(self.locs), self.any(d - 1, holes))
        if r < 0.65:
            return par(self.any(d - 1, holes), self.any(d - 1, holes))
        if r < 0.9:
            return Sum(self._branches(d, "any", lambda k: self.any(k, holes)))
        return Repl(self._prefix(d, "any"), self.any(d - 1, holes))

    # -- static fragment ----------------------------------------------------

    def seq(self, d, kind):
        """Location-free parallel of sequential terms."""
        r = self.rng.random()
        if d <= 0 or r < 0.25:
            return NIL
        if r < 0.4:
            return par(self.seq(d - 1, kind), self.seq(d - 1, kind))
        if r < 0.85:
            return Sum(self._branches(d, kind, lambda k: self.seq(k, kind)))
        return Repl(self._prefix(d, kind), self.seq(d - 1, kind))

    def static(self, d=None, holes=False, kind="static"):
        d = self.depth if d is None else d
        r = self.rng.random()
        if holes and r < 0.2:
            return HOLE
        if d > 0 and r < 0.45:
            return Loc(self.rng.choice(self.locs), self.static(d - 1, holes, kind))
        if d > 0 and r < 0.65:
            return par(self.static(d - 1, holes, kind), self.static(d - 1, holes, kind))
        return self.seq(d, kind)

    def s3_hole(self, d):
        r = self.rng.random()
        if d <= 0 or r < 0.4:
            return HOLE
        if r < 0.7:
            return Loc(self.rng.choice(self.locs), self.s3_hole(d - 1))
        return par(self.s3_hole(d - 1), self.static(d - 1, kind="s3"))

    def s3(self, d=None):
        return self.static(d, kind="s3")

    # -- holes not under prefixes -------------------------------------------

    def d2_pattern(self, d):
        r = self.rng.random()
        if d <= 0 or r < 0.3:
            return HOLE if r < 0.2 else NIL
        if r < 0.6:
            return Loc(self.rng.choice(self.locs), self.d2_pattern(d - 1))
        if r < 0.8:
            return par(self.d2_pattern(d - 1), self.d2_pattern(d - 1))
        return self.d2(d - 1)

    def d2(self, d=None):
        d = self.depth if d is None else d
        r = self.rng.random()
        if d <= 0 or r < 0.15:
            return NIL
        if r < 0.4:
            return Loc(self.rng.choice(self.locs), self.d2(d - 1))
        if r < 0.6:
            return par(self.d2(d - 1), self.d2(d - 1))
        if r < 0.9:
            return Sum(self._branches(d, "d2", self.d2))
        return Repl(self._prefix(d, "d2"), self.d2(d - 1))

    # -- drawing with a class filter -----------------------------------------

    def draw(self, kind, d=None):
        make = {"any": self.any, "static": self.static, "s3": self.s3, "d2": self.d2}[kind]
        while True:
            t = canonicalize(make(d))
            c = classify(t)
            if kind == "any":
                return t
            if kind == "static" and c.topology == "static":
                return t
            if kind == "s3" and c.topology == "static" and c.pattern == 3:
                return t
            if kind == "d2" and c.pattern in (2, 3):
                return t

    # -- interacting processes ----------------------------------------------

    def _update(self, d, kind):
        a = self.rng.choice(self.locs)
        extra = self.blocks_seq(d - 1, kind)
        if kind == "s3":
            body = "@" if self.rng.random() < 0.5 else f"@ | {extra}"
        else:
            body = self.rng.choice(["@", "@ | @", f"@ | {extra}", extra, f"{a}[@]"])
            if body == f"{a}[@]" and self.rng.random() < 0.5:
                body = "@ | " + body
        return f"{a}{{{a}[{body}]}}"

    def blocks_seq(self, d, kind):
        r = self.rng.random()
        if d <= 0 or r < 0.15:
            return "0"
        bang = "!" if self.rng.random() < 0.3 else ""
        if r < 0.3 and d > 1:
            return f"{bang}{self._update(d, kind)}.{self.blocks_seq(d - 1, kind)}"
        io = self.rng.choice(["", "!"])
        first = f"{self.rng.choice(self.channels)}{io}.{self.blocks_seq(d - 1, kind)}"
        if not bang and self.rng.random() < 0.2:
            other = f"{self.rng.choice(self.channels)}{io}.{self.blocks_seq(d - 1, kind)}"
            return f"({first} + {other})"
        return bang + first

    def blocks(self, kind="s3", parts=(1, 4)):
        """Text of a parallel of sequential blocks, some of them located."""
        comps = []
        for _ in range(self.rng.randint(*parts)):
            c = self.blocks_seq(2, kind)
            for _ in range(2):
                if self.rng.random() < 0.4:
                    c = f"{self.rng.choice(self.locs)}[{c}]"
            comps.append(c)
        return " | ".join(comps)

    def draw_blocks(self, kind="s3", parts=(1, 4)):
        from adaptable.syntax import parse_process

        while True:
            t = parse_process(self.blocks(kind, parts))
            c = classify(t)
            if c.topology == "static" and (kind != "s3" or c.pattern == 3):
                return t
