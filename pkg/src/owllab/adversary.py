"""Adversarial pipeline against claimed liveness solvers.

Walks the connectivity chain measuring how many exit states a machine
spends per step, and mounts the pumping construction: a (bounded-)generic
block, a forcing suffix, and a pump count at which the machine provably
cannot tell a live input from a dead one. For machines that genuinely pay
a state at a step, the pump premise fails and the outcome is an honest
NotFound with the reason. A differential fuzzer against the subset-NFA
oracle serves as fallback.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Union

from . import exits, owl, sequence, tdfa
from .exits import LR, RL, GenericCertificate
from .owl import OwlString, OwlSymbol
from .tdfa import Tdfa

DEFAULT_MAX_PUMPED_LEN = 10**6


@dataclass(frozen=True)
class NotFound:
    """Reasoned absence of a counterexample; expected for correct machines."""

    reason: str
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"found": False, "reason": self.reason, "detail": self.detail}


@dataclass(frozen=True)
class Counterexample:
    """A certified machine error.

    kind "pump": two inputs of different liveness that the machine decides
    identically. kind "fuzz": a single input where the decision contradicts
    the liveness oracle.
    """

    kind: str
    machine_name: str
    verdict: str
    inputs: tuple[OwlString, ...]
    decisions: tuple[str, ...]
    liveness: tuple[bool, ...]
    t: Optional[int] = None
    theta: Optional[OwlString] = None
    pump_symbol: Optional[OwlSymbol] = None
    t_star: Optional[int] = None
    context: Optional[tuple[OwlSymbol, OwlSymbol]] = None

    def to_json(self, max_listed_len: int = 1000) -> dict:
        obj = {
            "found": True,
            "kind": self.kind,
            "machine": self.machine_name,
            "verdict": self.verdict,
            "decisions": list(self.decisions),
            "liveness": list(self.liveness),
            "input_lengths": [len(z) for z in self.inputs],
        }
        obj["inputs"] = [
            z.to_json() if len(z) <= max_listed_len else None for z in self.inputs
        ]
        if self.t is not None:
            obj["t"] = self.t
            obj["t_star"] = self.t_star
            obj["theta"] = self.theta.to_json()
            obj["pump_symbol"] = list(map(list, self.pump_symbol.sorted_edges))
            obj["context"] = [list(map(list, s.sorted_edges)) for s in self.context]
        return obj


PumpResult = Union[Counterexample, NotFound]


def _verify_counterexample(m: Tdfa, cex: Counterexample) -> None:
    """Independent re-check before returning: liveness via both oracles and
    decisions via a fresh simulation."""
    for z, dec, live in zip(cex.inputs, cex.decisions, cex.liveness):
        if owl.is_live(z) != live or owl.nfa_live(z) != live:
            raise AssertionError("liveness oracle disagrees with recorded value")
        if tdfa.decide(m, z) != dec:
            raise AssertionError("re-simulation disagrees with recorded decision")
    if cex.kind == "pump":
        if cex.liveness[0] == cex.liveness[1]:
            raise AssertionError("pump inputs do not differ in liveness")
        if cex.decisions[0] != cex.decisions[1]:
            raise AssertionError("pump decisions are not identical")
    else:
        (z,), (dec,), (live,) = cex.inputs, cex.decisions, cex.liveness
        if (dec == tdfa.ACCEPT) == live:
            raise AssertionError("fuzz input is decided correctly")


def both_sides_generic(
    m: Tdfa,
    target,
    generators=None,
    max_ext_len: int = 1,
    max_rounds: Optional[int] = None,
    lr_start: Optional[OwlString] = None,
    rl_start: Optional[OwlString] = None,
) -> tuple[OwlString, GenericCertificate, GenericCertificate]:
    """Compose an LR-descended and an RL-descended member through the smooth
    infix; the result extends both, so it inherits both certificates."""
    lr_cert = exits.descend_generic(
        m, target, generators, max_ext_len, max_rounds, LR, start=lr_start
    )
    rl_cert = exits.descend_generic(
        m, target, generators, max_ext_len, max_rounds, RL, start=rl_start
    )
    infix = owl.smooth_infix_witness(target)
    if infix is None:
        raise ValueError("no constructive smoothness witness for the target")
    theta = lr_cert.y + infix + rl_cert.y
    if owl.connectivity(theta) != target:
        raise AssertionError("composed generic candidate left the property")
    return theta, lr_cert, rl_cert


def pump(
    m: Tdfa,
    t: int,
    generators=None,
    max_ext_len: int = 1,
    max_rounds: Optional[int] = None,
    max_pumped_len: int = DEFAULT_MAX_PUMPED_LEN,
) -> PumpResult:
    """Pumping attack at chain step t (1-based).

    Builds a bounded-generic block for the earlier property, the forcing
    suffix into the later one, and checks that the block's exit states
    continue as permutations across one pumped copy. If they do, pumping
    to the product of the permutation orders makes the machine blind to
    the copies, and the separation context turns that into two inputs of
    different liveness decided identically.
    """
    h = m.h
    seq = sequence.build_sequence(h)
    if not 1 <= t <= seq.N:
        raise ValueError(f"t={t} outside [1, {seq.N}] for h={h}")
    c_prev, c_next = seq[t - 1], seq[t]

    theta, _, _ = both_sides_generic(m, c_prev, generators, max_ext_len, max_rounds)
    x_sym = owl.suffix_of_choice_witness(c_prev, c_next)
    block = OwlString.make(h, [x_sym]) + theta  # the pumped unit x.theta

    a_states = exits.traversal_map(m, theta, LR).exit_states
    b_states = exits.traversal_map(m, theta, RL).exit_states
    al = exits.alpha(m, theta, block)
    be = exits.beta(m, theta + OwlString.make(h, [x_sym]), theta)
    if not exits.is_permutation(al, a_states):
        return NotFound(
            "alpha is not a permutation of the LR exit set",
            {"t": t, "exit_size": len(a_states), "image_size": len(al.image)},
        )
    if not exits.is_permutation(be, b_states):
        return NotFound(
            "beta is not a permutation of the RL exit set",
            {"t": t, "exit_size": len(b_states), "image_size": len(be.image)},
        )
    t_star = exits.permutation_order(al, a_states) * exits.permutation_order(be, b_states)

    u, v, _swapped = owl.separation_context(c_prev, c_next)
    ustr, vstr = OwlString.make(h, [u]), OwlString.make(h, [v])
    short = ustr + theta + vstr
    pumped_len = len(short) + t_star * len(block)
    if pumped_len > max_pumped_len:
        return NotFound(
            "pumped input exceeds the size cap",
            {"t": t, "t_star": t_star, "pumped_len": pumped_len, "cap": max_pumped_len},
        )
    pumped = ustr + theta + block.repeat(t_star) + vstr

    d_short = tdfa.decide(m, short)
    d_pumped = tdfa.decide(m, pumped)
    if d_short != d_pumped:
        return NotFound(
            "machine decides the two inputs differently",
            {"t": t, "t_star": t_star, "short": d_short, "pumped": d_pumped},
        )
    live_short, live_pumped = owl.is_live(short), owl.is_live(pumped)
    wrong = short if (d_short == tdfa.ACCEPT) != live_short else pumped
    cex = Counterexample(
        kind="pump",
        machine_name=m.name,
        verdict=f"machine errs on the {'short' if wrong is short else 'pumped'} input",
        inputs=(short, pumped),
        decisions=(d_short, d_pumped),
        liveness=(live_short, live_pumped),
        t=t,
        theta=theta,
        pump_symbol=x_sym,
        t_star=t_star,
        context=(u, v),
    )
    _verify_counterexample(m, cex)
    return cex


@dataclass
class ExitChainEntry:
    t: int
    a: int
    b: int
    lr_cert: GenericCertificate
    rl_cert: GenericCertificate

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "a": self.a,
            "b": self.b,
            "lr": self.lr_cert.to_json(),
            "rl": self.rl_cert.to_json(),
        }


@dataclass
class ExitChainReport:
    """Bounded exit-size estimates along the whole chain."""

    machine_name: str
    h: int
    entries: list[ExitChainEntry]
    max_ext_len: int

    @property
    def a_decrements(self) -> int:
        return sum(
            1 for p, n in itertools.pairwise(self.entries) if n.a < p.a
        )

    @property
    def b_decrements(self) -> int:
        return sum(
            1 for p, n in itertools.pairwise(self.entries) if n.b < p.b
        )

    @property
    def implied_bound(self) -> int:
        return max(self.a_decrements, self.b_decrements)

    def to_json(self) -> dict:
        return {
            "machine": self.machine_name,
            "h": self.h,
            "chain": [e.to_json() for e in self.entries],
            "a_sizes": [e.a for e in self.entries],
            "b_sizes": [e.b for e in self.entries],
            "a_decrements": self.a_decrements,
            "b_decrements": self.b_decrements,
            "implied_bound": self.implied_bound,
            "caveat": (
                "exit sizes are bounded-search estimates "
                f"(max_ext_len={self.max_ext_len})"
            ),
        }


def exit_chain(
    m: Tdfa,
    h: int,
    generators=None,
    max_ext_len: int = 1,
    max_rounds: Optional[int] = None,
) -> ExitChainReport:
    """Descend both exit sizes for every chain property.

    Each step seeds its descent with the previous step's string extended by
    the forcing suffix, so the estimates inherit the monotonicity the exact
    sizes have and cannot bounce upward from search noise.
    """
    if h > m.h:
        raise ValueError(f"chain height {h} exceeds machine height {m.h}")
    seq = sequence.build_sequence(h)
    entries: list[ExitChainEntry] = []
    prev: Optional[ExitChainEntry] = None
    for t in range(seq.N + 1):
        target = seq[t]
        lr_start = rl_start = None
        if prev is not None:
            suffix = OwlString.make(h, [owl.suffix_of_choice_witness(seq[t - 1], target)])
            lr_seed = prev.lr_cert.y + suffix
            rl_seed = suffix + prev.rl_cert.y
            if owl.connectivity(lr_seed) == target:
                lr_start = lr_seed
            if owl.connectivity(rl_seed) == target:
                rl_start = rl_seed
        lr_cert = exits.descend_generic(
            m, target, generators, max_ext_len, max_rounds, LR, start=lr_start
        )
        rl_cert = exits.descend_generic(
            m, target, generators, max_ext_len, max_rounds, RL, start=rl_start
        )
        entry = ExitChainEntry(t, lr_cert.exit_size, rl_cert.exit_size, lr_cert, rl_cert)
        entries.append(entry)
        prev = entry
    return ExitChainReport(m.name, h, entries, max_ext_len)


@dataclass
class TraversalDiagnostic:
    """Crucial points of a full endmarked run relative to a marked block."""

    crucial_points: list[tuple[str, int]]  # (state, tape position)
    full_traversals: int
    outcome: str
    truncated: bool

    def to_json(self) -> dict:
        return {
            "crucial_points": [list(p) for p in self.crucial_points],
            "full_traversals": self.full_traversals,
            "outcome": self.outcome,
            "truncated": self.truncated,
        }


def traversal_decomposition(
    m: Tdfa, u: OwlString, theta: OwlString, tail: OwlString, v: OwlString
) -> TraversalDiagnostic:
    """Simulate on LEND u theta tail v REND and locate the configurations
    ending each full traversal of the theta block (entered on one side,
    computed strictly inside, exited on the other)."""
    if len(theta) == 0:
        raise ValueError("the marked block must be nonempty")
    z = u + theta + tail + v
    res = tdfa.run_on_tape(m, z, trace_limit=10**7)
    truncated = res.trace is None
    # Tape positions: 1 = LEND, so symbol k of z sits at position k + 1.
    lo, hi = len(u) + 2, len(u) + len(theta) + 1
    points = []
    traversals = 0
    if not truncated:
        entry_side = None
        points.append(res.trace[0])
        for state, pos in res.trace[1:]:
            if lo <= pos <= hi:
                if entry_side is None:
                    entry_side = "L" if pos == lo else "R"
            elif entry_side is not None:
                exit_side = "L" if pos < lo else "R"
                if exit_side != entry_side:
                    traversals += 1
                    points.append((state, pos))
                entry_side = None
        if res.outcome != tdfa.LOOP:
            points.append(res.trace[-1])
    return TraversalDiagnostic(points, traversals, res.outcome, truncated)


def differential_fuzz(
    m: Tdfa,
    h: int,
    max_len: int = 4,
    exhaustive: bool = False,
    samples: int = 1000,
    seed: int = 0,
) -> PumpResult:
    """Compare the machine against the liveness oracle on many strings."""
    checked = 0
    for z in _fuzz_strings(h, max_len, exhaustive, samples, seed):
        checked += 1
        dec = tdfa.decide(m, z)
        live = owl.nfa_live(z)
        if (dec == tdfa.ACCEPT) != live:
            cex = Counterexample(
                kind="fuzz",
                machine_name=m.name,
                verdict="decision contradicts the liveness oracle",
                inputs=(z,),
                decisions=(dec,),
                liveness=(live,),
            )
            _verify_counterexample(m, cex)
            return cex
    return NotFound("no disagreement within budget", {"strings_checked": checked})


def _fuzz_strings(h: int, max_len: int, exhaustive: bool, samples: int, seed: int):
    if exhaustive:
        syms = owl.all_symbols(h)
        for n in range(max_len + 1):
            for combo in itertools.product(syms, repeat=n):
                yield OwlString.make(h, combo)
    else:
        rng = random.Random(seed)
        bits = h * h
        for _ in range(samples):
            n = rng.randint(0, max_len)
            yield OwlString.make(
                h, [OwlSymbol.from_mask(h, rng.getrandbits(bits)) for _ in range(n)]
            )
