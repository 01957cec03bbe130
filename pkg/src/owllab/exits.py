"""Exit-state analysis: which states a machine can leave a block in.

For a string y, the LR exit set collects the states hit right by left
computations on y over all entry states; the RL set is symmetric. Extending
y inside a property can only shrink these sets, which drives the bounded
genericity descent below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from . import matrix, owl, tdfa
from .matrix import BoolMatrix
from .owl import OwlString, OwlSymbol
from .tdfa import Computation, Tdfa

LR = "LR"
RL = "RL"


@dataclass(frozen=True)
class TraversalMap:
    """Per-state outcomes of left (LR) or right (RL) computations on a string."""

    machine: Tdfa
    y: OwlString
    side: str
    outcomes: dict[str, Computation]

    @property
    def exit_states(self) -> frozenset[str]:
        want = tdfa.HIT_RIGHT if self.side == LR else tdfa.HIT_LEFT
        return frozenset(c.state for c in self.outcomes.values() if c.outcome == want)

    @property
    def exit_size(self) -> int:
        return len(self.exit_states)


def traversal_map(m: Tdfa, y: OwlString, side: str) -> TraversalMap:
    if side not in (LR, RL):
        raise ValueError(f"bad side {side!r}")
    runner = tdfa.lcomp if side == LR else tdfa.rcomp
    outcomes = {p: runner(m, p, y) for p in m.states}
    return TraversalMap(m, y, side, outcomes)


def exit_size(m: Tdfa, y: OwlString, side: str) -> int:
    return traversal_map(m, y, side).exit_size


@dataclass(frozen=True)
class PartialMap:
    """Partially defined map on a finite state set."""

    domain: frozenset[str]
    mapping: dict[str, str]  # only the defined entries

    def __call__(self, q: str) -> Optional[str]:
        return self.mapping.get(q)

    @property
    def image(self) -> frozenset[str]:
        return frozenset(self.mapping.values())


def alpha(m: Tdfa, y: OwlString, z: OwlString, verify: bool = True) -> PartialMap:
    """How LR exit states of y continue across the extension z.

    Maps each exit state q of y to the state (if any) hit right by the run
    started just past y inside y+z. The image always equals the LR exit set
    of y+z; this is re-checked on every call.
    """
    dom = traversal_map(m, y, LR).exit_states
    yz = y + z
    mapping = {}
    for q in sorted(dom):
        c = tdfa.comp(m, q, len(y) + 1, yz)
        if c.outcome == tdfa.HIT_RIGHT:
            mapping[q] = c.state
    pm = PartialMap(dom, mapping)
    if verify and pm.image != traversal_map(m, yz, LR).exit_states:
        raise AssertionError("alpha image does not match the extended exit set")
    return pm


def beta(m: Tdfa, z: OwlString, y: OwlString, verify: bool = True) -> PartialMap:
    """RL counterpart of alpha: exit states of y continued left across the
    prepended z inside z+y."""
    dom = traversal_map(m, y, RL).exit_states
    zy = z + y
    mapping = {}
    for q in sorted(dom):
        c = tdfa.comp(m, q, len(z), zy)
        if c.outcome == tdfa.HIT_LEFT:
            mapping[q] = c.state
    pm = PartialMap(dom, mapping)
    if verify and pm.image != traversal_map(m, zy, RL).exit_states:
        raise AssertionError("beta image does not match the extended exit set")
    return pm


def is_permutation(pm: PartialMap, states: frozenset[str]) -> bool:
    """Total on the given set, injective, and image equal to it."""
    if not states <= pm.domain:
        return False
    values = [pm(q) for q in states]
    if None in values:
        return False
    return len(set(values)) == len(values) and set(values) == set(states)


def permutation_order(pm: PartialMap, states: frozenset[str]) -> int:
    """Least power at which the permutation becomes the identity: the lcm
    of its cycle lengths. The empty permutation has order 1."""
    if not is_permutation(pm, states):
        raise ValueError("map is not a permutation of the given set")
    order = 1
    seen = set()
    for q in states:
        if q in seen:
            continue
        length = 0
        cur = q
        while cur not in seen:
            seen.add(cur)
            cur = pm(cur)
            length += 1
        order = math.lcm(order, length)
    return order


@dataclass(frozen=True)
class GenericCertificate:
    """A property member whose exit size no searched extension could shrink.

    Genericity proper quantifies over all in-property extensions, which is
    not searchable; the certificate is only as strong as its recorded
    bounds.
    """

    y: OwlString
    target: BoolMatrix
    side: str
    exit_size: int
    size_history: tuple[int, ...]
    generator_count: int
    max_ext_len: int
    rounds_searched: int

    def to_json(self) -> dict:
        return {
            "string": self.y.to_json(),
            "target": self.target.row_hex(),
            "side": self.side,
            "exit_size": self.exit_size,
            "size_history": list(self.size_history),
            "generator_count": self.generator_count,
            "max_ext_len": self.max_ext_len,
            "rounds_searched": self.rounds_searched,
        }


def default_generators(h: int) -> tuple[OwlSymbol, ...]:
    """Whole alphabet for h <= 3; chain representatives plus identity and
    all-edges symbols above that."""
    if h <= 3:
        return owl.all_symbols(h)
    from . import sequence  # local import to avoid a cycle

    seq = sequence.build_sequence(h)
    syms = {owl.representative_symbol(c) for c in seq.matrices}
    syms.add(owl.identity_symbol(h))
    syms.add(owl.full_symbol(h))
    return tuple(sorted(syms, key=OwlSymbol.sort_key))


def _extensions(generators, max_ext_len: int, h: int):
    """Extension words by length, then lexicographically in canonical order."""
    gens = sorted(generators, key=OwlSymbol.sort_key)
    frontier = [()]
    for _ in range(max_ext_len):
        nxt = []
        for word in frontier:
            for g in gens:
                grown = word + (g,)
                nxt.append(grown)
                yield OwlString.make(h, grown)
        frontier = nxt


def descend_generic(
    m: Tdfa,
    target: BoolMatrix,
    generators=None,
    max_ext_len: int = 1,
    max_rounds: Optional[int] = None,
    side: str = LR,
    start: Optional[OwlString] = None,
) -> GenericCertificate:
    """Greedy exit-size descent inside the property of `target`.

    Starting from the representative (or `start`), repeatedly adopt the
    first searched extension that stays in the property and strictly
    shrinks the exit set; stop when a full scan finds no decrease or the
    round budget runs out. LR extends on the right, RL on the left.
    """
    if side not in (LR, RL):
        raise ValueError(f"bad side {side!r}")
    h = target.h
    if generators is None:
        generators = default_generators(h)
    generators = tuple(generators)
    if max_rounds is None:
        max_rounds = len(m.states)
    y = start if start is not None else owl.representative(target)
    if owl.connectivity(y) != target:
        raise ValueError("start string is not in the target property")
    size = exit_size(m, y, side)
    history = [size]
    rounds = 0
    while rounds < max_rounds and size > 0:
        cy = owl.connectivity(y)
        improved = False
        for ext in _extensions(generators, max_ext_len, h):
            ce = owl.connectivity(ext)
            conn = matrix.multiply(cy, ce) if side == LR else matrix.multiply(ce, cy)
            if conn != target:
                continue
            cand = y + ext if side == LR else ext + y
            cand_size = exit_size(m, cand, side)
            if cand_size < size:
                y, size = cand, cand_size
                history.append(size)
                improved = True
                break
        rounds += 1
        if not improved:
            break
    return GenericCertificate(
        y=y,
        target=target,
        side=side,
        exit_size=size,
        size_history=tuple(history),
        generator_count=len(generators),
        max_ext_len=max_ext_len,
        rounds_searched=rounds,
    )
