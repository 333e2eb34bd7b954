import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pitreduce.sat3 import (
    KIND_FORMULA,
    BitString,
    ClauseSetSpace,
    DecodeError,
    EncodingError,
    ThreeSatInstance,
    all_clauses,
    brute_force_sat,
    decode,
    encode,
    enumerate_instances,
    evaluate,
    is_valid_encoding,
    mini_profile,
    one_n,
    paper_profile,
    parse_dimacs,
    read_encodings,
    substitute,
    to_dimacs,
    validate_instance,
    write_encodings,
    zero_n,
)

F = ThreeSatInstance.from_ints


def naive_sat(f):
    """Oracle: try all 2^n assignments of x1..xn directly."""
    if f.body != "FORMULA":
        return f.body == "TRUE"
    for bits in itertools.product((0, 1), repeat=f.n):
        a = dict(enumerate(bits, 1))
        if all(any(a[i] == s for i, s in c) for c in f.clauses):
            return True
    return False


def test_validate_examples():
    assert "duplicate_variable" in validate_instance(F(2, [[1, -1, 2]]))
    assert "duplicate_clause" in validate_instance(ThreeSatInstance(1, "FORMULA", (((1, 1),), ((1, 1),))))
    assert validate_instance(F(5, [[1, -2, 3], [-1, -2, 3]])) == []


def test_validate_other_violations():
    assert "clause_width" in validate_instance(F(4, [[1, 2, 3, 4]]))
    assert "index_range" in validate_instance(F(2, [[3]]))
    assert "empty_formula" in validate_instance(ThreeSatInstance(2, "FORMULA", ()))
    assert "constant_with_clauses" in validate_instance(ThreeSatInstance(2, "TRUE", (((1, 1),),)))


def test_paper_profile_shape():
    pr = paper_profile(2)
    assert pr.total_length == 128
    assert pr.index_width == 2
    assert pr.clause_slots >= len(all_clauses(2)) == 8
    # the pad bit sits right after the last clause slot
    assert pr.padding_offset == 2 + pr.clause_slots * pr.clause_width
    assert len(all_clauses(3)) == 26


def test_encode_true_paper():
    s = encode(2, ThreeSatInstance.true(2), paper_profile(2))
    assert len(s) == 128
    assert s.bits[:2] == (0, 1)


def test_encode_mini():
    s = encode(1, F(1, [[1]]), mini_profile())
    assert str(s) == "001100"
    assert str(one_n(mini_profile())) == "010000"
    assert str(zero_n(mini_profile())) == "100000"


def test_decode_examples():
    pr = paper_profile(2)
    f = F(2, [[1, -2], [2]])
    assert decode(encode(2, f, pr)) == f
    assert decode(one_n(pr)).body == "TRUE"
    with pytest.raises(DecodeError) as exc:
        decode(BitString((0,) * 128, pr))
    assert exc.value.field == "padding"


def test_all_zero_mini_rejected():
    with pytest.raises(DecodeError) as exc:
        decode(BitString((0,) * 6, mini_profile()))
    assert exc.value.field == "clause[0]"


@pytest.mark.parametrize(
    "text,field",
    [
        ("110000", "tag"),
        ("000011", "clause[1]"),  # a clause after an empty slot
        ("001010", "clause[1]"),  # (x1) then (~x1) is out of order
        ("011100", "clause[0]"),  # TRUE with an active clause
        ("000110", "clause[0].literal[0]"),  # sign set on an inactive slot
    ],
)
def test_decode_names_field(text, field):
    with pytest.raises(DecodeError) as exc:
        decode(BitString.parse(text, mini_profile()))
    assert exc.value.field == field


@pytest.mark.parametrize("n", [0, 1, 2])
def test_enumerate_counts(n):
    expected = 2 + 2 ** len(all_clauses(n)) - 1
    insts = list(enumerate_instances(n))
    assert len(insts) == expected == {0: 2, 1: 5, 2: 257}[n]
    assert len(set(insts)) == len(insts)
    assert all(validate_instance(f) == [] for f in insts)


def test_enumerate_n1():
    got = {str(f) for f in enumerate_instances(1)}
    assert got == {"TRUE", "FALSE", "(x1)", "(~x1)", "(~x1) & (x1)"}


@pytest.mark.parametrize("profile", [mini_profile(), paper_profile(1), paper_profile(2)], ids=["mini", "p1", "p2"])
def test_roundtrip_full_enumeration(profile):
    for f in enumerate_instances(profile.n):
        s = encode(profile.n, f, profile)
        assert decode(s) == f
        assert is_valid_encoding(s)


def test_padding_flip_invalid():
    pr = paper_profile(2)
    s = encode(2, F(2, [[1, 2]]), pr)
    for i in range(pr.padding_offset, pr.total_length):
        bits = list(s.bits)
        bits[i] ^= 1
        assert not is_valid_encoding(BitString(tuple(bits), pr))


def test_random_strings_rarely_valid():
    pr = paper_profile(2)
    rng = np.random.default_rng(0)
    valid = 0
    for _ in range(500):
        s = BitString(tuple(int(b) for b in rng.integers(0, 2, 128)), pr)
        ok = is_valid_encoding(s)
        try:
            decode(s)
            decodes = True
        except DecodeError:
            decodes = False
        assert ok == decodes
        valid += ok
    assert valid == 0


def test_encode_errors():
    with pytest.raises(EncodingError):
        encode(2, F(2, [[1, -1]]), paper_profile(2))
    with pytest.raises(EncodingError):
        encode(1, F(2, [[2]]), mini_profile())
    with pytest.raises(EncodingError):
        encode(1, F(1, [[1]]), paper_profile(2))
    with pytest.raises(EncodingError):
        BitString((0, 1), mini_profile())


def test_substitute_examples():
    assert substitute(F(2, [[1, 2]]), 1).body == "TRUE"
    assert substitute(F(1, [[1]]), 0).body == "FALSE"
    assert substitute(F(2, [[1, -2], [2]]), 0) == F(2, [[-2], [2]])
    assert substitute(ThreeSatInstance.true(2), 0).body == "TRUE"


def test_substitute_drops_duplicates():
    # (x1 | x2) & (x2) with x1 := 0 leaves (x2) once
    assert substitute(F(2, [[1, 2], [2]]), 0) == F(2, [[2]])


@pytest.mark.parametrize("n", [1, 2])
def test_substitute_semantics(n):
    """Oracle: g agrees with f where the lowest variable is fixed."""
    for f in enumerate_instances(n):
        if f.body != "FORMULA":
            continue
        v = f.variables()[0]
        for value in (0, 1):
            g = substitute(f, value)
            assert validate_instance(g) == []
            assert v not in g.variables()
            for bits in itertools.product((0, 1), repeat=n):
                a = dict(enumerate(bits, 1))
                a[v] = value
                assert evaluate(f, a) == evaluate(g, a)


def test_brute_force_examples():
    assert not brute_force_sat(F(1, [[1], [-1]]))
    assert brute_force_sat(ThreeSatInstance.true(3))
    assert not brute_force_sat(ThreeSatInstance.false(3))
    assert not brute_force_sat(F(2, [[1, 2], [-1], [-2]]))


@pytest.mark.parametrize("n", [1, 2])
def test_brute_force_matches_naive(n):
    for f in enumerate_instances(n):
        assert brute_force_sat(f) == naive_sat(f)


@settings(max_examples=200, deadline=None)
@given(st.integers(3, 7), st.data())
def test_brute_force_matches_naive_random(n, data):
    pool = all_clauses(n)
    picks = data.draw(st.sets(st.integers(0, len(pool) - 1), min_size=1, max_size=12))
    f = ThreeSatInstance.formula(n, [pool[i] for i in picks])
    assert brute_force_sat(f) == naive_sat(f)


def test_brute_force_cap():
    f = F(21, [[i] for i in range(1, 22)])
    with pytest.raises(ValueError):
        brute_force_sat(f)


def test_dimacs_roundtrip():
    for f in enumerate_instances(2):
        assert parse_dimacs(to_dimacs(f)) == f
    f = parse_dimacs("c example\np cnf 3 2\n1 -2 3 0\n-1 -2 3 0\n")
    assert f == F(3, [[1, -2, 3], [-1, -2, 3]])


@pytest.mark.parametrize("text", ["1 2 0\n", "p cnf x 1\n", "p cnf 2 1\n1 a 0\n", "c CONST MAYBE\np cnf 1 0\n"])
def test_dimacs_errors(text):
    with pytest.raises(ValueError):
        parse_dimacs(text)


def test_encoding_file_roundtrip():
    pr = mini_profile()
    strings = [encode(1, f, pr) for f in enumerate_instances(1)]
    assert read_encodings(write_encodings(strings), pr) == strings


@pytest.mark.parametrize("n", [1, 2])
def test_clause_space_matches_scalar_exhaustive(n):
    space = ClauseSetSpace(n)
    masks = np.arange(1, space.size, dtype=np.uint64)
    sat = space.sat(masks)
    for value in (0, 1):
        kinds, out = space.substitute(masks, value)
        for m, s, k, o in zip(masks.tolist(), sat, kinds, out.tolist()):
            f = space.to_instance(KIND_FORMULA, m)
            assert space.to_mask(f) == m
            assert s == brute_force_sat(f)
            assert space.to_instance(int(k), o) == substitute(f, value)


def test_clause_space_matches_scalar_n3_sample():
    space = ClauseSetSpace(3)
    rng = np.random.default_rng(11)
    masks = rng.integers(1, space.size, size=3000, dtype=np.uint64)
    sat = space.sat(masks)
    for value in (0, 1):
        kinds, out = space.substitute(masks, value)
        for m, s, k, o in zip(masks.tolist(), sat, kinds, out.tolist()):
            f = space.to_instance(KIND_FORMULA, m)
            assert s == brute_force_sat(f)
            assert space.to_instance(int(k), o) == substitute(f, value)


def test_self_reduction_small_sample():
    rng = random.Random(0)
    pool = all_clauses(3)
    for _ in range(2000):
        f = ThreeSatInstance.formula(3, rng.sample(pool, rng.randint(1, 10)))
        assert brute_force_sat(f) == (brute_force_sat(substitute(f, 0)) or brute_force_sat(substitute(f, 1)))


@pytest.mark.slow
def test_self_reduction_n3_scalar_full():
    pool = all_clauses(3)
    for r in range(1, len(pool) + 1):
        for subset in itertools.combinations(pool, r):
            f = ThreeSatInstance(3, "FORMULA", subset)
            assert brute_force_sat(f) == (brute_force_sat(substitute(f, 0)) or brute_force_sat(substitute(f, 1)))
