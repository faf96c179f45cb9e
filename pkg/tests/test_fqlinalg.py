import itertools
import random

import pytest

from codegraph.errors import ParameterError
from codegraph.fqlinalg import (
    FieldSpec,
    Subspace,
    coordinate_hyperplane,
    enumerate_subspaces,
    format_subspace_blocks,
    full_space,
    gaussian_binomial,
    intersect,
    nullspace,
    parse_subspace,
    parse_subspace_blocks,
    rref,
    standard_basis_vector,
    subspace_sum,
    zero_subspace,
)


def brute_force_subspaces(n: int, k: int, q: int) -> set[Subspace]:
    """Oracle: span every k-tuple of vectors and deduplicate canonically."""
    vectors = [v for v in itertools.product(range(q), repeat=n) if any(v)]
    found = set()
    for combo in itertools.combinations(vectors, k):
        s = rref(combo, n, q)
        if s.k == k:
            found.add(s)
    if k == 0:
        found = {zero_subspace(n, q)}
    return found


def random_subspace(rng: random.Random, n: int, k: int, q: int = 2) -> Subspace:
    while True:
        rows = [tuple(rng.randrange(q) for _ in range(n)) for _ in range(k)]
        s = rref(rows, n, q)
        if s.k == k:
            return s


def test_field_spec_rejects_composites():
    FieldSpec(2)
    FieldSpec(13)
    with pytest.raises(ParameterError):
        FieldSpec(4)
    with pytest.raises(ParameterError):
        FieldSpec(1)


def test_rref_hand_example():
    # row1 + row2 eliminates the tail of the first row
    s = rref([(1, 1, 1, 1), (0, 1, 1, 1)])
    assert s.rows == ((1, 0, 0, 0), (0, 1, 1, 1))


def test_rref_already_canonical():
    s = rref([standard_basis_vector(1, 4)])
    assert s.rows == ((1, 0, 0, 0),)


def test_rref_duplicate_rows_collapse():
    s = rref([(1, 1), (1, 1)])
    assert s.k == 1 and s.rows == ((1, 1),)


def test_rref_dimension_mismatch():
    with pytest.raises(ValueError):
        rref([(1, 0), (1, 0, 0)])


def test_subspace_rejects_non_canonical_rows():
    with pytest.raises(ValueError):
        Subspace(3, 2, ((1, 1, 0), (0, 1, 0)))  # pivot column not cleared
    with pytest.raises(ValueError):
        Subspace(3, 2, ((0, 1, 0), (1, 0, 0)))  # pivots out of order
    with pytest.raises(ValueError):
        Subspace(3, 3, ((0, 2, 0),))  # pivot entry not 1


def test_sum_examples():
    e1 = rref([standard_basis_vector(1, 4)])
    e2 = rref([standard_basis_vector(2, 4)])
    assert subspace_sum(e1, e2) == rref([(1, 0, 0, 0), (0, 1, 0, 0)])
    # span of the complements of axes 1 and 4 has these three nonzero vectors
    p_up1 = rref([(0, 1, 1, 1)])
    p_up4 = rref([(1, 1, 1, 0)])
    s = subspace_sum(p_up1, p_up4)
    assert set(s.nonzero_vectors()) == {(0, 1, 1, 1), (1, 1, 1, 0), (1, 0, 0, 1)}
    assert subspace_sum(s, s) == s


def test_intersect_examples():
    x = rref([(0, 1, 1, 1), (1, 1, 1, 0)])
    xc = rref([(0, 1, 1, 1), (0, 0, 0, 1)])
    assert intersect(x, xc) == rref([(0, 1, 1, 1)])
    assert intersect(x, x) == x
    e12 = rref([(1, 0, 0, 0), (0, 1, 0, 0)])
    e34 = rref([(0, 0, 1, 0), (0, 0, 0, 1)])
    assert intersect(e12, e34).k == 0


def test_enumerate_against_brute_force_oracle():
    listed = enumerate_subspaces(4, 2, 2)
    assert len(listed) == 35
    assert set(listed) == brute_force_subspaces(4, 2, 2)
    # strictly sorted in the canonical order
    flat = [s.flat for s in listed]
    assert flat == sorted(flat)


def test_enumerate_oracle_q3():
    listed = enumerate_subspaces(3, 2, 3)
    assert set(listed) == brute_force_subspaces(3, 2, 3)


def test_enumerate_trivial_cases():
    assert enumerate_subspaces(4, 4, 2) == (full_space(4, 2),)
    assert len(enumerate_subspaces(4, 1, 2)) == 15
    assert enumerate_subspaces(3, 0, 2) == (zero_subspace(3, 2),)


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(5, 2, 2) == 155
    assert len(enumerate_subspaces(5, 2, 2)) == 155
    for n in range(0, 7):
        assert gaussian_binomial(n, 0, 2) == 1


def test_enumeration_length_matches_gaussian_binomial():
    for q in (2, 3):
        nmax = 8 if q == 2 else 5
        for n in range(1, nmax + 1):
            for k in range(0, n + 1):
                if gaussian_binomial(n, k, q) > 20000:
                    continue
                assert len(enumerate_subspaces(n, k, q)) == gaussian_binomial(n, k, q)


def test_coordinate_hyperplane():
    c1 = coordinate_hyperplane(1, 4)
    assert c1 == rref([standard_basis_vector(j, 4) for j in (2, 3, 4)])
    for i in range(1, 5):
        ci = coordinate_hyperplane(i, 4)
        assert ci.k == 3
        assert not ci.contains_vector(standard_basis_vector(i, 4))
    with pytest.raises(ParameterError):
        coordinate_hyperplane(5, 4)


def test_out_of_range_parameters():
    with pytest.raises(ParameterError):
        enumerate_subspaces(17, 2, 2)
    with pytest.raises(ParameterError):
        enumerate_subspaces(9, 2, 3)
    with pytest.raises(ParameterError):
        enumerate_subspaces(16, 2, 2)  # ambient fits, listing would not
    with pytest.raises(ParameterError):
        gaussian_binomial(3, 4, 2)


def test_canonicity_under_random_respanning():
    # every generating set of the same subspace produces the identical value
    rng = random.Random(0xC0DE)
    for trial in range(300):
        n = rng.randrange(2, 9)
        k = rng.randrange(1, n + 1)
        q = rng.choice((2, 3))
        s = random_subspace(rng, n, k, q)
        mixed = []
        for _ in range(k + rng.randrange(3)):
            coeffs = [rng.randrange(q) for _ in range(k)]
            acc = [0] * n
            for c, row in zip(coeffs, s.rows):
                acc = [(a + c * r) % q for a, r in zip(acc, row)]
            mixed.append(tuple(acc))
        respanned = rref(mixed + list(s.rows), n, q)
        assert respanned == s


def test_dimension_formula_random_pairs():
    rng = random.Random(7)
    for trial in range(300):
        n = rng.randrange(2, 9)
        q = rng.choice((2, 3)) if n <= 6 else 2
        x = random_subspace(rng, n, rng.randrange(1, n + 1), q)
        y = random_subspace(rng, n, rng.randrange(1, n + 1), q)
        assert subspace_sum(x, y).k + intersect(x, y).k == x.k + y.k


def test_membership_matches_rank_oracle():
    rng = random.Random(99)
    for trial in range(300):
        n = rng.randrange(2, 8)
        x = random_subspace(rng, n, rng.randrange(1, n + 1))
        v = tuple(rng.randrange(2) for _ in range(n))
        joined = rref(list(x.rows) + [v], n, 2)
        assert x.contains_vector(v) == (joined.k == x.k)


def test_nullspace_is_orthogonal_complement_dimension():
    rng = random.Random(5)
    for trial in range(100):
        n = rng.randrange(2, 8)
        x = random_subspace(rng, n, rng.randrange(1, n))
        ns = nullspace(x.rows, n, 2)
        assert ns.k == n - x.k
        for v in ns.rows:
            assert sum(a * b for a, b in zip(x.rows[0], v)) % 2 == 0


def test_text_format_round_trip():
    s = rref([(1, 1, 1, 1), (0, 1, 1, 1)])
    assert s.to_text() == "1000\n0111"
    assert parse_subspace(s.to_text()) == s
    # a matrix listing all nonzero vectors spans the same thing
    assert parse_subspace("1111\n0111\n1000") == s
    blocks = format_subspace_blocks(enumerate_subspaces(3, 1, 2))
    parsed = parse_subspace_blocks(blocks)
    assert tuple(parsed) == enumerate_subspaces(3, 1, 2)
