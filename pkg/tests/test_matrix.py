"""Unit tests for the Boolean matrix semiring."""

import random

import pytest

from owllab import matrix
from owllab.matrix import (
    BoolMatrix,
    BoolVector,
    add,
    all_ones,
    identity,
    inner,
    is_idempotent,
    leq,
    mat_vec,
    multiply,
    ones_col,
    outer,
    tail_row,
    unit_col,
    vec_mat,
    zero,
)


def random_matrix(rng, h):
    return BoolMatrix(h, tuple(rng.getrandbits(h) for _ in range(h)))


def brute_multiply(a, b):
    h = a.h
    return BoolMatrix.from_cells(
        h,
        [
            (i, j)
            for i in range(1, h + 1)
            for j in range(1, h + 1)
            if any(a.get(i, k) and b.get(k, j) for k in range(1, h + 1))
        ],
    )


def test_from_text_round_trip():
    text = "101\n010\n001\n"
    m = BoolMatrix.from_text(text)
    assert m.h == 3
    assert m.to_text() == text
    assert m.get(1, 1) == 1
    assert m.get(1, 2) == 0
    assert m.get(1, 3) == 1
    assert m.get(3, 3) == 1


def test_from_cells_and_cells_round_trip():
    cells = [(1, 2), (2, 1), (3, 3)]
    m = BoolMatrix.from_cells(3, cells)
    assert m.cells() == sorted(cells)


def test_cells_are_row_major():
    m = BoolMatrix.from_text("011\n000\n110\n")
    assert m.cells() == [(1, 2), (1, 3), (3, 1), (3, 2)]


def test_bad_dimension_rejected():
    with pytest.raises(ValueError):
        BoolMatrix(0, ())
    with pytest.raises(ValueError):
        BoolMatrix(65, (0,) * 65)
    with pytest.raises(ValueError):
        BoolMatrix(2, (0,))
    with pytest.raises(ValueError):
        BoolMatrix(2, (4, 0))  # bit outside the 2x2 square


def test_bad_text_rejected():
    with pytest.raises(ValueError):
        BoolMatrix.from_text("10\n1\n")
    with pytest.raises(ValueError):
        BoolMatrix.from_text("1x\n01\n")


def test_get_out_of_range():
    m = identity(2)
    with pytest.raises(IndexError):
        m.get(0, 1)
    with pytest.raises(IndexError):
        m.get(1, 3)


def test_constants():
    assert identity(3).to_text() == "100\n010\n001\n"
    assert zero(2).is_zero()
    assert not identity(1).is_zero()
    assert all_ones(2).to_text() == "11\n11\n"


def test_multiply_hand_example():
    a = BoolMatrix.from_text("110\n001\n000\n")
    b = BoolMatrix.from_text("010\n010\n100\n")
    assert multiply(a, b).to_text() == "010\n100\n000\n"


def test_multiply_matches_brute_force():
    rng = random.Random(0)
    for _ in range(200):
        h = rng.randint(1, 7)
        a, b = random_matrix(rng, h), random_matrix(rng, h)
        assert multiply(a, b) == brute_multiply(a, b)


def test_multiply_identity_and_zero():
    rng = random.Random(1)
    for h in (1, 3, 6):
        a = random_matrix(rng, h)
        assert multiply(a, identity(h)) == a
        assert multiply(identity(h), a) == a
        assert multiply(a, zero(h)) == zero(h)
        assert multiply(zero(h), a) == zero(h)


def test_multiply_associative():
    rng = random.Random(2)
    for _ in range(100):
        h = rng.randint(1, 6)
        a, b, c = (random_matrix(rng, h) for _ in range(3))
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


def test_multiply_repeated_calls_consistent():
    # The product-row cache on the right operand must not change results.
    rng = random.Random(3)
    a, b = random_matrix(rng, 5), random_matrix(rng, 5)
    first = multiply(a, b)
    assert multiply(a, b) == first
    assert multiply(identity(5), b) == b


def test_multiply_dimension_mismatch():
    with pytest.raises(ValueError):
        multiply(identity(2), identity(3))


def test_add_is_cellwise_or():
    a = BoolMatrix.from_text("10\n00\n")
    b = BoolMatrix.from_text("01\n01\n")
    assert add(a, b).to_text() == "11\n01\n"


def test_distributivity():
    rng = random.Random(4)
    for _ in range(100):
        h = rng.randint(1, 6)
        a, b, c = (random_matrix(rng, h) for _ in range(3))
        assert multiply(a, add(b, c)) == add(multiply(a, b), multiply(a, c))
        assert multiply(add(a, b), c) == add(multiply(a, c), multiply(b, c))


def test_leq():
    a = BoolMatrix.from_text("10\n00\n")
    b = BoolMatrix.from_text("11\n01\n")
    assert leq(a, b)
    assert not leq(b, a)
    assert leq(a, a)


def test_is_idempotent():
    assert is_idempotent(identity(4))
    assert is_idempotent(zero(3))
    assert is_idempotent(all_ones(3))
    swap = BoolMatrix.from_text("01\n10\n")
    assert not is_idempotent(swap)


def test_vectors_basic():
    u = unit_col(2, 4)
    assert [u.get(i) for i in range(1, 5)] == [0, 1, 0, 0]
    r = tail_row(3, 5)
    assert [r.get(i) for i in range(1, 6)] == [0, 0, 1, 1, 1]
    assert ones_col(3).bits == 0b111
    with pytest.raises(ValueError):
        unit_col(5, 4)
    with pytest.raises(ValueError):
        BoolVector(2, "diag", 0)
    with pytest.raises(ValueError):
        BoolVector(2, "row", 4)


def embed_col(u):
    """Column vector as the first column of an otherwise-zero matrix."""
    return BoolMatrix(u.h, tuple((u.bits >> i) & 1 for i in range(u.h)))


def embed_row(v):
    """Row vector as the first row of an otherwise-zero matrix."""
    return BoolMatrix(v.h, (v.bits,) + (0,) * (v.h - 1))


def test_outer_matches_matrix_product():
    rng = random.Random(5)
    for _ in range(100):
        h = rng.randint(1, 6)
        u = BoolVector(h, "col", rng.getrandbits(h))
        v = BoolVector(h, "row", rng.getrandbits(h))
        assert outer(u, v) == multiply(embed_col(u), embed_row(v))


def test_inner_matches_matrix_product():
    rng = random.Random(6)
    for _ in range(100):
        h = rng.randint(1, 6)
        v = BoolVector(h, "row", rng.getrandbits(h))
        u = BoolVector(h, "col", rng.getrandbits(h))
        prod = multiply(embed_row(v), embed_col(u))
        assert inner(v, u) == bool(prod.get(1, 1))


def test_mat_vec_and_vec_mat_match_matrix_product():
    rng = random.Random(7)
    for _ in range(100):
        h = rng.randint(1, 6)
        a = random_matrix(rng, h)
        u = BoolVector(h, "col", rng.getrandbits(h))
        v = BoolVector(h, "row", rng.getrandbits(h))
        assert embed_col(mat_vec(a, u)) == multiply(a, embed_col(u))
        assert embed_row(vec_mat(v, a)) == multiply(embed_row(v), a)


def test_vector_orientation_enforced():
    u, v = unit_col(1, 2), tail_row(1, 2)
    with pytest.raises(ValueError):
        outer(v, u)
    with pytest.raises(ValueError):
        inner(u, v)
    with pytest.raises(ValueError):
        mat_vec(identity(2), v)
    with pytest.raises(ValueError):
        vec_mat(u, identity(2))


def test_row_hex_round_trip():
    rng = random.Random(8)
    for h in (1, 4, 5, 17, 64):
        m = random_matrix(rng, h)
        assert BoolMatrix.from_row_hex(h, m.row_hex()) == m
        assert all(len(s) == (h + 3) // 4 for s in m.row_hex())
