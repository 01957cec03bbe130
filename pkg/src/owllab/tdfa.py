"""Two-way deterministic finite automata over the two-column-graph alphabet.

A machine reads its input between endmarkers and halts only by falling off
the right endmarker into its accept or reject state. Computations on bare
infixes (no endmarkers) exit past either boundary or loop; looping is
detected exactly by a pigeonhole step budget.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .owl import OwlString, OwlSymbol, empty_symbol, full_symbol, identity_symbol, symbol_matrix

LEND = "LEND"
REND = "REND"

TapeSymbol = Union[OwlSymbol, str]  # an alphabet symbol, or LEND/REND

HIT_LEFT = "hit_left"
HIT_RIGHT = "hit_right"
LOOP = "loop"

ACCEPT = "accept"
REJECT = "reject"

# Full traces are kept only for runs at most this many steps long.
DEFAULT_TRACE_LIMIT = 10**5


@dataclass(frozen=True)
class Computation:
    """Result of running a machine on a bare string from a given configuration."""

    outcome: str  # HIT_LEFT | HIT_RIGHT | LOOP
    state: Optional[str]  # exit state; None when looping
    steps: int
    trace: Optional[tuple[tuple[str, int], ...]] = None

    def hits_right(self) -> bool:
        return self.outcome == HIT_RIGHT

    def hits_left(self) -> bool:
        return self.outcome == HIT_LEFT


class Tdfa:
    """2DFA with named states and a total transition function.

    The transition function is supplied either as an explicit table over a
    declared symbol subset (with a required per-state default, since the
    alphabet is far too large to enumerate) or programmatically.
    """

    def __init__(
        self,
        states,
        h: int,
        start: str,
        accept: str,
        reject: str,
        table: Optional[dict] = None,
        delta_fn: Optional[Callable[[str, TapeSymbol], tuple[str, str]]] = None,
        name: str = "tdfa",
    ):
        if (table is None) == (delta_fn is None):
            raise ValueError("supply exactly one of table, delta_fn")
        self.states = tuple(states)
        self.h = h
        self.start = start
        self.accept = accept
        self.reject = reject
        self.table = table
        self.delta_fn = delta_fn
        self.name = name
        self._state_set = frozenset(self.states)

    def step(self, state: str, sym: TapeSymbol) -> tuple[str, str]:
        """Next (state, direction) for the current state and tape symbol."""
        if self.delta_fn is not None:
            return self.delta_fn(state, sym)
        entries = self.table.get(state)
        if entries is None:
            raise KeyError(f"state {state!r} has no transition entries")
        key = sym if isinstance(sym, str) else sym.to_hex()
        hit = entries.get(key)
        if hit is None:
            hit = entries.get("default")
        if hit is None:
            raise KeyError(f"no transition for ({state!r}, {key!r}) and no default")
        return tuple(hit)

    def to_json(self) -> dict:
        if self.table is None:
            raise ValueError("programmatic machine has no serializable table")
        return {
            "h": self.h,
            "states": list(self.states),
            "start": self.start,
            "accept": self.accept,
            "reject": self.reject,
            "delta": {q: {k: list(v) for k, v in entries.items()} for q, entries in self.table.items()},
        }

    @classmethod
    def from_json(cls, obj: dict, name: str = "tdfa") -> "Tdfa":
        for field in ("h", "states", "start", "accept", "reject", "delta"):
            if field not in obj:
                raise ValueError(f"machine JSON missing field {field!r}")
        table = {
            q: {k: (v[0], v[1]) for k, v in entries.items()}
            for q, entries in obj["delta"].items()
        }
        return cls(
            states=obj["states"],
            h=obj["h"],
            start=obj["start"],
            accept=obj["accept"],
            reject=obj["reject"],
            table=table,
            name=name,
        )

    @classmethod
    def load(cls, path: str) -> "Tdfa":
        with open(path) as f:
            return cls.from_json(json.load(f), name=path)


def validate(m: Tdfa) -> list[str]:
    """Machine invariants; empty list means ok.

    Endmarker discipline: every state moves right off the left endmarker,
    and moves left on the right endmarker unless it steps right into the
    accept or reject state (the only way to halt).
    """
    errs = []
    for special, label in ((m.start, "start"), (m.accept, "accept"), (m.reject, "reject")):
        if special not in m._state_set:
            errs.append(f"{label} state {special!r} not in state set")
    if errs:
        return errs

    def check_result(q, symname, res):
        if not (isinstance(res, tuple) and len(res) == 2):
            errs.append(f"delta({q!r}, {symname}) is not a (state, direction) pair")
            return None
        nq, d = res
        if nq not in m._state_set:
            errs.append(f"delta({q!r}, {symname}) targets unknown state {nq!r}")
            return None
        if d not in ("L", "R"):
            errs.append(f"delta({q!r}, {symname}) has bad direction {d!r}")
            return None
        return nq, d

    for q in m.states:
        for symname, sym in ((LEND, LEND), (REND, REND)):
            try:
                res = check_result(q, symname, m.step(q, sym))
            except Exception as exc:  # table gaps, bad callables
                errs.append(f"delta({q!r}, {symname}) failed: {exc}")
                continue
            if res is None:
                continue
            nq, d = res
            if sym == LEND and d != "R":
                errs.append(f"delta({q!r}, LEND) moves left off the left endmarker")
            if sym == REND and d == "R" and nq not in (m.accept, m.reject):
                errs.append(
                    f"delta({q!r}, REND) moves right into {nq!r}, "
                    "which is neither accept nor reject"
                )
    if m.table is not None:
        for q in m.states:
            entries = m.table.get(q)
            if entries is None:
                errs.append(f"state {q!r} has no transition entries")
                continue
            if "default" not in entries:
                errs.append(f"state {q!r} has no default rule")
            for key, res in entries.items():
                if key not in (LEND, REND, "default"):
                    try:
                        OwlSymbol.from_hex(m.h, key)
                    except ValueError as exc:
                        errs.append(f"state {q!r}: bad symbol key {key!r}: {exc}")
                check_result(q, key, tuple(res))
    else:
        # Programmatic delta: probe a few symbols for well-formed results.
        for sym in (empty_symbol(m.h), identity_symbol(m.h), full_symbol(m.h)):
            for q in m.states:
                try:
                    check_result(q, sym.to_hex(), m.step(q, sym))
                except Exception as exc:
                    errs.append(f"delta({q!r}, {sym.to_hex()}) failed: {exc}")
    return errs


def _simulate(m, tape, state, pos, lo, hi, trace_limit):
    """Run until the head leaves [lo, hi]; positions index `tape` 1-based.

    Exceeding the pigeonhole budget |Q| * len(tape) + 1 means some
    configuration repeated, i.e. the run loops.
    """
    budget = len(m.states) * len(tape) + 1 if tape else 1
    trace = [(state, pos)]
    steps = 0
    while lo <= pos <= hi:
        if steps >= budget:
            return Computation(LOOP, None, steps, _clip(trace, trace_limit))
        state, d = m.step(state, tape[pos - 1])
        pos += 1 if d == "R" else -1
        steps += 1
        if len(trace) <= trace_limit:
            trace.append((state, pos))
    outcome = HIT_LEFT if pos < lo else HIT_RIGHT
    return Computation(outcome, state, steps, _clip(trace, trace_limit))


def _clip(trace, limit):
    return tuple(trace) if len(trace) <= limit else None


def comp(m: Tdfa, p: str, j: int, z: OwlString, trace_limit: int = DEFAULT_TRACE_LIMIT) -> Computation:
    """Deterministic run on bare z from state p at position j (1-based)."""
    n = len(z)
    if j == 0:
        return Computation(HIT_LEFT, p, 0, ((p, 0),))
    if j == n + 1:
        return Computation(HIT_RIGHT, p, 0, ((p, n + 1),))
    if not 1 <= j <= n:
        raise ValueError(f"start position {j} out of range for |z|={n}")
    return _simulate(m, z.symbols, p, j, 1, n, trace_limit)


def lcomp(m: Tdfa, p: str, z: OwlString, trace_limit: int = DEFAULT_TRACE_LIMIT) -> Computation:
    """Left computation: enter z at its first symbol. Empty z exits right."""
    if not len(z):
        return Computation(HIT_RIGHT, p, 0, ((p, 1),))
    return comp(m, p, 1, z, trace_limit)


def rcomp(m: Tdfa, p: str, z: OwlString, trace_limit: int = DEFAULT_TRACE_LIMIT) -> Computation:
    """Right computation: enter z at its last symbol. Empty z exits left."""
    if not len(z):
        return Computation(HIT_LEFT, p, 0, ((p, 0),))
    return comp(m, p, len(z), z, trace_limit)


def decide(m: Tdfa, z: OwlString, trace_limit: int = DEFAULT_TRACE_LIMIT) -> str:
    """Accept/reject/loop verdict of the full endmarked run."""
    res = run_on_tape(m, z, trace_limit)
    if res.outcome == HIT_RIGHT and res.state == m.accept:
        return ACCEPT
    if res.outcome == HIT_RIGHT and res.state == m.reject:
        return REJECT
    return LOOP


def run_on_tape(m: Tdfa, z: OwlString, trace_limit: int = DEFAULT_TRACE_LIMIT) -> Computation:
    """Full run on LEND z REND from the start state; positions 1..|z|+2 on the tape."""
    tape = (LEND,) + z.symbols + (REND,)
    return _simulate(m, tape, m.start, 1, 1, len(tape), trace_limit)


def _image_mask(mask: int, sym: OwlSymbol) -> int:
    """Push a node set (bitmask) through a symbol's edge relation."""
    out = 0
    for i, j in sym.edges:
        if (mask >> (i - 1)) & 1:
            out |= 1 << (j - 1)
    return out


def _truncate_mask(mask: int, cap: int) -> int:
    """Keep only the cap lowest set bits."""
    out = 0
    for _ in range(cap):
        if not mask:
            break
        low = mask & -mask
        out |= low
        mask ^= low
    return out


def _subset_like(h: int, cap: int, name: str) -> Tdfa:
    full = (1 << h) - 1
    start_mask = _truncate_mask(full, cap)
    masks = [m for m in range(full + 1) if bin(m).count("1") <= cap]
    states = [f"s{m}" for m in masks] + [ACCEPT, REJECT]

    def delta(q: str, sym) -> tuple[str, str]:
        if sym == LEND:
            return f"s{start_mask}", "R"
        if q in (ACCEPT, REJECT):
            if sym == REND:
                return q, "R"
            return "s0", "R"
        mask = int(q[1:])
        if sym == REND:
            return (ACCEPT if mask else REJECT), "R"
        return f"s{_truncate_mask(_image_mask(mask, sym), cap)}", "R"

    return Tdfa(states, h, f"s{start_mask}", ACCEPT, REJECT, delta_fn=delta, name=name)


def build_subset_solver(h: int) -> Tdfa:
    """One-way machine tracking the exact reachable node set; correct but
    exponential (2^h subset states plus accept and reject)."""
    if h > 12:
        raise ValueError(f"subset solver for h={h} would need 2^{h} states")
    return _subset_like(h, h, f"subset:{h}")


def build_broken_solver(h: int, cap: int) -> Tdfa:
    """Subset solver whose tracked set is truncated to its cap smallest
    elements after every step; wrong for cap < h."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if h > 12:
        raise ValueError(f"broken solver for h={h} is too large")
    return _subset_like(h, min(cap, h), f"broken:{h}:{cap}")


def build_accept_all(h: int) -> Tdfa:
    """Sweeps right once and accepts everything (wrong on dead strings)."""
    states = ["go", ACCEPT, REJECT]

    def delta(q: str, sym) -> tuple[str, str]:
        if sym == REND:
            return (q, "R") if q in (ACCEPT, REJECT) else (ACCEPT, "R")
        return "go", "R"

    return Tdfa(states, h, "go", ACCEPT, REJECT, delta_fn=delta, name="accept_all")
