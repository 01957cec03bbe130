"""The two-column-graph alphabet, liveness, and connectivity-defined properties.

A symbol of height h is a set of edges between h left-column nodes and h
right-column nodes. A string of symbols is a layered graph; it is live when
some full-length left-to-right path exists, which is exactly when the Boolean
product of the per-symbol edge matrices is nonzero.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Iterable, Optional

from . import matrix
from .matrix import BoolMatrix


@dataclass(frozen=True)
class OwlSymbol:
    """One alphabet letter: an edge set between two columns of h nodes."""

    h: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        matrix._check_h(self.h)
        for i, j in self.edges:
            if not (1 <= i <= self.h and 1 <= j <= self.h):
                raise ValueError(f"edge ({i},{j}) out of range for h={self.h}")

    @classmethod
    def make(cls, h: int, edges: Iterable[tuple[int, int]]) -> "OwlSymbol":
        return cls(h, frozenset((int(i), int(j)) for i, j in edges))

    @property
    def sorted_edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    def sort_key(self):
        """Canonical order used wherever symbols are enumerated deterministically."""
        return self.sorted_edges

    def to_mask(self) -> int:
        """Row-major bitmask: edge (i,j) is bit (i-1)*h + (j-1)."""
        m = 0
        for i, j in self.edges:
            m |= 1 << ((i - 1) * self.h + (j - 1))
        return m

    @classmethod
    def from_mask(cls, h: int, mask: int) -> "OwlSymbol":
        if mask < 0 or mask >> (h * h):
            raise ValueError(f"mask out of range for h={h}")
        edges = []
        while mask:
            low = mask & -mask
            b = low.bit_length() - 1
            edges.append((b // h + 1, b % h + 1))
            mask ^= low
        return cls(h, frozenset(edges))

    def to_hex(self) -> str:
        width = (self.h * self.h + 3) // 4
        return f"{self.to_mask():0{width}x}"

    @classmethod
    def from_hex(cls, h: int, text: str) -> "OwlSymbol":
        return cls.from_mask(h, int(text, 16))


@dataclass(frozen=True)
class OwlString:
    """A finite word of symbols, all of the same height."""

    h: int
    symbols: tuple[OwlSymbol, ...]

    def __post_init__(self) -> None:
        matrix._check_h(self.h)
        for s in self.symbols:
            if s.h != self.h:
                raise ValueError(f"symbol of height {s.h} in string of height {self.h}")

    @classmethod
    def make(cls, h: int, symbols: Iterable[OwlSymbol] = ()) -> "OwlString":
        return cls(h, tuple(symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __add__(self, other: "OwlString") -> "OwlString":
        if self.h != other.h:
            raise ValueError("height mismatch in concatenation")
        return OwlString(self.h, self.symbols + other.symbols)

    def repeat(self, n: int) -> "OwlString":
        return OwlString(self.h, self.symbols * n)

    def to_json(self) -> dict:
        return {"h": self.h, "symbols": [list(map(list, s.sorted_edges)) for s in self.symbols]}

    @classmethod
    def from_json(cls, obj: dict) -> "OwlString":
        h = obj["h"]
        syms = []
        for entry in obj["symbols"]:
            if isinstance(entry, str):  # compact hex form
                syms.append(OwlSymbol.from_hex(h, entry))
            else:
                syms.append(OwlSymbol.make(h, [(p[0], p[1]) for p in entry]))
        return cls(h, tuple(syms))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "OwlString":
        return cls.from_json(json.loads(text))


def identity_symbol(h: int) -> OwlSymbol:
    return OwlSymbol.make(h, [(i, i) for i in range(1, h + 1)])


def empty_symbol(h: int) -> OwlSymbol:
    return OwlSymbol.make(h, [])


def full_symbol(h: int) -> OwlSymbol:
    return OwlSymbol.make(h, [(i, j) for i in range(1, h + 1) for j in range(1, h + 1)])


@functools.lru_cache(maxsize=8)
def all_symbols(h: int) -> tuple[OwlSymbol, ...]:
    """Every symbol of height h, in canonical order. Only sane for h <= 3."""
    if h > 3:
        raise ValueError(f"refusing to enumerate 2^{h * h} symbols")
    syms = [OwlSymbol.from_mask(h, m) for m in range(1 << (h * h))]
    syms.sort(key=OwlSymbol.sort_key)
    return tuple(syms)


@functools.lru_cache(maxsize=65536)
def symbol_matrix(a: OwlSymbol) -> BoolMatrix:
    """A one-symbol string's connectivity is its own edge relation."""
    return BoolMatrix.from_cells(a.h, a.edges)


def connectivity(z: OwlString) -> BoolMatrix:
    """End-to-end path-existence matrix; multiplicative under concatenation."""
    c = matrix.identity(z.h)
    for s in z.symbols:
        c = matrix.multiply(c, symbol_matrix(s))
    return c


def is_live(z: OwlString) -> bool:
    return not connectivity(z).is_zero()


def nfa_live(z: OwlString) -> bool:
    """Subset simulation of the h-state one-way NFA for liveness.

    Starts from the full node set and pushes it through each symbol's edge
    relation; the string is live iff the final set is nonempty. Independent
    of connectivity(); the two must agree on every input.
    """
    h = z.h
    reach = (1 << h) - 1
    for s in z.symbols:
        nxt = 0
        for i, j in s.edges:
            if (reach >> (i - 1)) & 1:
                nxt |= 1 << (j - 1)
        reach = nxt
        if not reach:
            return False
    return True


@dataclass(frozen=True)
class Property:
    """All strings whose connectivity equals a fixed target matrix."""

    h: int
    target: BoolMatrix

    def __post_init__(self) -> None:
        if self.target.h != self.h:
            raise ValueError("target dimension differs from property height")

    def contains(self, z: OwlString) -> bool:
        return z.h == self.h and connectivity(z) == self.target


@functools.lru_cache(maxsize=65536)
def representative_symbol(c: BoolMatrix) -> OwlSymbol:
    """The symbol whose edges are exactly the 1-cells of c."""
    return OwlSymbol.make(c.h, c.cells())


def representative(c: BoolMatrix) -> OwlString:
    """Canonical one-symbol member of the property defined by c."""
    return OwlString.make(c.h, [representative_symbol(c)])


def sample_member(c: BoolMatrix, rng, max_pad: int = 3) -> OwlString:
    """Random member of the property of c: its representative padded with
    identity symbols (connectivity-preserving)."""
    h = c.h
    ident = identity_symbol(h)
    pre = [ident] * rng.randint(0, max_pad)
    post = [ident] * rng.randint(0, max_pad)
    return OwlString.make(h, pre + [representative_symbol(c)] + post)


def separation_context(
    c: BoolMatrix, c_other: BoolMatrix
) -> tuple[OwlSymbol, OwlSymbol, bool]:
    """Context symbols (u, v) that make liveness tell the two matrices apart.

    Scans for the first differing cell (i, j) in row-major order. With
    swapped=False the cell is 0 in c and 1 in c_other, so u x v is dead for
    x with connectivity c and u z v is live for z with connectivity c_other;
    swapped=True means the roles of the two matrices are exchanged.
    """
    if c.h != c_other.h:
        raise ValueError("dimension mismatch")
    h = c.h
    for i in range(1, h + 1):
        diff = c.rows[i - 1] ^ c_other.rows[i - 1]
        if diff:
            j = (diff & -diff).bit_length()
            swapped = c.get(i, j) == 1
            u = OwlSymbol.make(h, [(1, i)])
            v = OwlSymbol.make(h, [(j, 1)])
            return u, v, swapped
    raise ValueError("matrices are equal; no separating cell")


def smooth_infix_witness(c: BoolMatrix) -> Optional[OwlString]:
    """Infix that keeps any concatenation of two members inside the property.

    For idempotent c the empty string works (c * I * c = c). For a matrix
    with a single 1-cell (i, j) the one-symbol infix {(j, i)} works. For
    anything else no constructive witness is attempted; returns None.
    """
    if matrix.is_idempotent(c):
        return OwlString.make(c.h)
    cells = c.cells()
    if len(cells) == 1:
        i, j = cells[0]
        return OwlString.make(c.h, [OwlSymbol.make(c.h, [(j, i)])])
    return None


def suffix_of_choice_witness(c_prev: BoolMatrix, c_next: BoolMatrix) -> OwlSymbol:
    """Symbol u such that x.u.v lands in the property of c_next for every
    x in either property and every v in the property of c_prev.

    Valid only when c_next absorbs c_prev on both sides and is idempotent,
    which holds along the connectivity chain; rejected otherwise.
    """
    if c_prev.h != c_next.h:
        raise ValueError("dimension mismatch")
    if matrix.multiply(c_next, c_prev) != c_next:
        raise ValueError("c_next * c_prev != c_next; witness invalid")
    if matrix.multiply(c_prev, c_next) != c_next:
        raise ValueError("c_prev * c_next != c_next; witness invalid")
    if not matrix.is_idempotent(c_next):
        raise ValueError("c_next is not idempotent; witness invalid")
    return representative_symbol(c_next)
