"""Unit tests for the two-way automaton simulator and machine builders."""

import itertools
import json
import random

import pytest

from owllab import owl, tdfa
from owllab.owl import OwlString, OwlSymbol, all_symbols, full_symbol, identity_symbol
from owllab.tdfa import (
    ACCEPT,
    HIT_LEFT,
    HIT_RIGHT,
    LEND,
    LOOP,
    REJECT,
    REND,
    Tdfa,
    build_accept_all,
    build_broken_solver,
    build_subset_solver,
    comp,
    decide,
    lcomp,
    rcomp,
    run_on_tape,
    validate,
)


def pingpong_machine(h=2):
    """Loops on any nonempty bare string: p steps right, q steps back left."""

    def delta(state, sym):
        if sym == LEND:
            return "p", "R"
        if sym == REND:
            if state in (ACCEPT, REJECT):
                return state, "R"
            return ACCEPT, "R"
        return ("q", "R") if state == "p" else ("p", "L")

    return Tdfa(["p", "q", ACCEPT, REJECT], h, "p", ACCEPT, REJECT, delta_fn=delta)


def table_machine():
    """Two-state table machine over h=1 that accepts everything."""
    table = {
        "s": {LEND: ("s", "R"), REND: (ACCEPT, "R"), "default": ("s", "R")},
        ACCEPT: {LEND: (ACCEPT, "R"), REND: (ACCEPT, "R"), "default": (ACCEPT, "R")},
        REJECT: {LEND: (REJECT, "R"), REND: (REJECT, "L"), "default": (REJECT, "R")},
    }
    return Tdfa(["s", ACCEPT, REJECT], 1, "s", ACCEPT, REJECT, table=table)


def test_constructor_requires_one_delta():
    with pytest.raises(ValueError):
        Tdfa(["s"], 1, "s", "s", "s")
    with pytest.raises(ValueError):
        Tdfa(["s"], 1, "s", "s", "s", table={}, delta_fn=lambda q, s: (q, "R"))


def test_validate_builtins_clean():
    for m in (
        build_accept_all(2),
        build_subset_solver(2),
        build_subset_solver(3),
        build_broken_solver(3, 1),
        table_machine(),
        pingpong_machine(),
    ):
        assert validate(m) == []


def test_validate_catches_unknown_special_states():
    m = Tdfa(["s"], 1, "s", "missing", "s", delta_fn=lambda q, sym: ("s", "R"))
    assert any("accept" in e for e in validate(m))


def test_validate_catches_endmarker_violations():
    def bad_left(q, sym):
        if sym == LEND:
            return "s", "L"
        return "s", "R"

    m = Tdfa(["s"], 1, "s", "s", "s", delta_fn=bad_left)
    assert any("left endmarker" in e for e in validate(m))

    def bad_right(q, sym):
        if sym == REND:
            return "s", "R"  # falls off the right but not into accept/reject
        return "s", "R"

    m2 = Tdfa(["s", ACCEPT, REJECT], 1, "s", ACCEPT, REJECT, delta_fn=bad_right)
    assert any("neither accept nor reject" in e for e in validate(m2))


def test_validate_catches_table_gaps():
    table = {
        "s": {LEND: ("s", "R"), REND: (ACCEPT, "R")},  # no default
        ACCEPT: {LEND: (ACCEPT, "R"), REND: (ACCEPT, "R"), "default": (ACCEPT, "R")},
        REJECT: {LEND: (REJECT, "R"), REND: (REJECT, "L"), "default": (REJECT, "R")},
    }
    m = Tdfa(["s", ACCEPT, REJECT], 1, "s", ACCEPT, REJECT, table=table)
    assert any("no default" in e for e in validate(m))


def test_validate_catches_bad_targets_and_directions():
    table = {
        "s": {LEND: ("s", "R"), REND: (ACCEPT, "R"), "default": ("ghost", "X")},
        ACCEPT: {LEND: (ACCEPT, "R"), REND: (ACCEPT, "R"), "default": (ACCEPT, "R")},
        REJECT: {LEND: (REJECT, "R"), REND: (REJECT, "L"), "default": (REJECT, "R")},
    }
    m = Tdfa(["s", ACCEPT, REJECT], 1, "s", ACCEPT, REJECT, table=table)
    errs = validate(m)
    assert any("unknown state" in e for e in errs)


def test_comp_boundary_positions():
    m = build_accept_all(2)
    z = OwlString.make(2, [identity_symbol(2)] * 2)
    left = comp(m, "go", 0, z)
    assert left.outcome == HIT_LEFT and left.state == "go" and left.steps == 0
    right = comp(m, "go", 3, z)
    assert right.outcome == HIT_RIGHT and right.state == "go" and right.steps == 0
    with pytest.raises(ValueError):
        comp(m, "go", 4, z)
    with pytest.raises(ValueError):
        comp(m, "go", -1, z)


def test_lcomp_rcomp_empty_string():
    m = build_accept_all(2)
    z = OwlString.make(2)
    assert lcomp(m, "go", z).outcome == HIT_RIGHT
    assert lcomp(m, "go", z).steps == 0
    assert rcomp(m, "go", z).outcome == HIT_LEFT


def test_one_way_machine_crosses_in_length_steps():
    m = build_accept_all(3)
    for n in range(5):
        z = OwlString.make(3, [full_symbol(3)] * n)
        c = lcomp(m, "go", z)
        assert c.outcome == HIT_RIGHT and c.steps == n
        full = run_on_tape(m, z)
        assert full.outcome == HIT_RIGHT and full.steps == n + 2
        assert full.state == ACCEPT


def test_trace_records_configurations():
    m = build_accept_all(2)
    z = OwlString.make(2, [identity_symbol(2)])
    res = run_on_tape(m, z)
    assert res.trace[0] == (m.start, 1)
    assert res.trace[-1] == (ACCEPT, 4)


def test_loop_detection_on_bare_string():
    m = pingpong_machine()
    z = OwlString.make(2, [identity_symbol(2)] * 3)
    c = lcomp(m, "p", z)
    assert c.outcome == LOOP and c.state is None
    # The pigeonhole budget caps the number of steps.
    assert c.steps <= len(m.states) * len(z) + 1


def test_loop_decide_verdict():
    def delta(q, sym):
        if sym == LEND:
            return "p", "R"
        if sym == REND:
            return "p", "L"
        return ("q", "R") if q == "p" else ("p", "L")

    m = Tdfa(["p", "q", ACCEPT, REJECT], 2, "p", ACCEPT, REJECT, delta_fn=delta)
    z = OwlString.make(2, [identity_symbol(2)])
    assert decide(m, z) == LOOP


def test_accept_all_accepts_everything():
    m = build_accept_all(2)
    rng = random.Random(0)
    for _ in range(50):
        n = rng.randint(0, 5)
        z = OwlString.make(
            2, [OwlSymbol.from_mask(2, rng.getrandbits(4)) for _ in range(n)]
        )
        assert decide(m, z) == ACCEPT


def test_subset_solver_matches_oracle_short_h2():
    m = build_subset_solver(2)
    syms = all_symbols(2)
    for n in range(3):
        for combo in itertools.product(syms, repeat=n):
            z = OwlString.make(2, combo)
            want = ACCEPT if owl.nfa_live(z) else REJECT
            assert decide(m, z) == want


def test_subset_solver_matches_oracle_random_h3():
    m = build_subset_solver(3)
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randint(0, 6)
        z = OwlString.make(
            3, [OwlSymbol.from_mask(3, rng.getrandbits(9)) for _ in range(n)]
        )
        want = ACCEPT if owl.nfa_live(z) else REJECT
        assert decide(m, z) == want


def test_subset_solver_size_cap():
    with pytest.raises(ValueError):
        build_subset_solver(13)


def test_broken_solver_specific_error():
    # With cap 1 only node 1 is tracked, so a path through node 2 is missed.
    m = build_broken_solver(3, 1)
    z = OwlString.make(3, [OwlSymbol.make(3, [(2, 2)])])
    assert owl.nfa_live(z)
    assert decide(m, z) == REJECT


def test_broken_solver_agrees_when_cap_is_h():
    a, b = build_broken_solver(2, 2), build_subset_solver(2)
    rng = random.Random(2)
    for _ in range(100):
        n = rng.randint(0, 4)
        z = OwlString.make(
            2, [OwlSymbol.from_mask(2, rng.getrandbits(4)) for _ in range(n)]
        )
        assert decide(a, z) == decide(b, z)


def test_broken_solver_validation():
    with pytest.raises(ValueError):
        build_broken_solver(3, 0)


def test_json_round_trip(tmp_path):
    m = table_machine()
    blob = m.to_json()
    m2 = Tdfa.from_json(blob)
    assert m2.states == m.states
    assert m2.step("s", LEND) == ("s", "R")
    path = tmp_path / "machine.json"
    path.write_text(json.dumps(blob))
    m3 = Tdfa.load(str(path))
    assert validate(m3) == []
    z = OwlString.make(1, [full_symbol(1)])
    assert decide(m3, z) == decide(m, z)


def test_from_json_missing_field():
    with pytest.raises(ValueError):
        Tdfa.from_json({"h": 1, "states": ["s"]})


def test_programmatic_machine_not_serializable():
    with pytest.raises(ValueError):
        build_accept_all(2).to_json()


def test_table_lookup_uses_hex_keys_and_default():
    ident = identity_symbol(1)
    table = {
        "s": {
            LEND: ("s", "R"),
            REND: (ACCEPT, "R"),
            ident.to_hex(): (REJECT, "R"),
            "default": ("s", "R"),
        },
        ACCEPT: {LEND: (ACCEPT, "R"), REND: (ACCEPT, "R"), "default": (ACCEPT, "R")},
        REJECT: {LEND: (REJECT, "R"), REND: (REJECT, "L"), "default": (REJECT, "R")},
    }
    m = Tdfa(["s", ACCEPT, REJECT], 1, "s", ACCEPT, REJECT, table=table)
    assert m.step("s", ident) == (REJECT, "R")
    assert m.step("s", owl.empty_symbol(1)) == ("s", "R")
