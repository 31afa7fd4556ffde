import random

import pytest

from cklef.errors import EntryOutOfRange, MatrixMismatch, NonSquare, ZeroRowOrColumn
from cklef.sft_core import (
    clopen_equals,
    clopen_intersect,
    clopen_make,
    clopen_refine,
    clopen_union,
    clopen_whole_space,
    count_paths,
    enumerate_paths,
    is_allowable,
    is_partition,
    terminus,
    validate_matrix,
)


class TestValidateMatrix:
    def test_main_matrix_accepted_irreducible(self, main_matrix):
        assert main_matrix.n == 3
        assert main_matrix.irreducible

    def test_one_letter_full_shift(self):
        m = validate_matrix([[1]])
        assert m.n == 1 and m.irreducible

    def test_zero_column_rejected(self):
        with pytest.raises(ZeroRowOrColumn):
            validate_matrix([[1, 0], [1, 0]])

    def test_zero_row_rejected(self):
        with pytest.raises(ZeroRowOrColumn):
            validate_matrix([[0, 0], [1, 1]])

    def test_non_square_rejected(self):
        with pytest.raises(NonSquare):
            validate_matrix([[1, 1], [1, 1], [1, 1]])

    def test_entry_out_of_range_rejected(self):
        with pytest.raises(EntryOutOfRange):
            validate_matrix([[1, 2], [1, 1]])

    def test_reducible_flagged(self):
        m = validate_matrix([[1, 1], [0, 1]])
        assert not m.irreducible


class TestWords:
    def test_allowability(self, main_matrix):
        assert is_allowable(main_matrix, (1, 1, 2, 3))
        assert not is_allowable(main_matrix, (1, 3))
        assert is_allowable(main_matrix, ())

    def test_terminus(self):
        assert terminus((2, 3, 1)) == 1


class TestCountPaths:
    def test_main_1_1_len2(self, main_matrix):
        # (A^2)[1,1] = 2: the words 11, 21 follow letter 1
        assert count_paths(main_matrix, 1, 1, 2) == 2

    def test_main_3_2_len1(self, main_matrix):
        assert count_paths(main_matrix, 3, 2, 1) == 1

    def test_forbidden_transition(self, main_matrix):
        assert count_paths(main_matrix, 1, 3, 1) == 0

    def test_matches_enumeration_bruteforce(self):
        rng = random.Random(5)
        for _ in range(10):
            n = rng.randint(1, 4)
            while True:
                rows = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
                if all(any(r) for r in rows) and all(
                    any(rows[i][j] for i in range(n)) for j in range(n)
                ):
                    break
            m = validate_matrix(rows)
            for length in range(1, 6):
                words = enumerate_paths(m, length)
                for a in m.alphabet:
                    for b in m.alphabet:
                        brute = sum(
                            1
                            for w in words
                            if m.entry(a, w[0]) == 1 and terminus(w) == b
                        )
                        assert count_paths(m, a, b, length) == brute

    def test_empty_terminus_start(self, main_matrix):
        # paths from the empty word's terminus: every word counts
        for length in range(1, 5):
            total = sum(
                count_paths(main_matrix, None, b, length) for b in main_matrix.alphabet
            )
            assert total == len(enumerate_paths(main_matrix, length))


class TestEnumeratePaths:
    def test_length_one(self, main_matrix):
        assert enumerate_paths(main_matrix, 1) == [(1,), (2,), (3,)]

    def test_length_two(self, main_matrix):
        words = enumerate_paths(main_matrix, 2)
        assert words == [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 2), (3, 3)]

    def test_length_zero(self, main_matrix):
        assert enumerate_paths(main_matrix, 0) == [()]

    def test_lexicographic(self, main_matrix):
        for k in range(1, 5):
            words = enumerate_paths(main_matrix, k)
            assert list(words) == sorted(words)

    def test_count_identity(self, main_matrix):
        # |P_k| = sum over a,b of (A^{k-1})[a,b]
        for k in range(2, 7):
            matrix_total = sum(
                _power_entry(main_matrix, a, b, k - 1)
                for a in main_matrix.alphabet
                for b in main_matrix.alphabet
            )
            assert len(enumerate_paths(main_matrix, k)) == matrix_total


def _power_entry(m, a, b, p):
    rows = [list(r) for r in m.rows]
    acc = [[1 if i == j else 0 for j in range(m.n)] for i in range(m.n)]
    for _ in range(p):
        acc = [
            [sum(acc[i][t] * rows[t][j] for t in range(m.n)) for j in range(m.n)]
            for i in range(m.n)
        ]
    return acc[a - 1][b - 1]


class TestClopen:
    def test_refine_depth1_to_2(self, main_matrix):
        s = clopen_make(main_matrix, 1, {(1,)})
        r = clopen_refine(s, 2)
        assert r.members == frozenset({(1, 1), (1, 2)})

    def test_refine_same_depth_identity(self, main_matrix):
        s = clopen_make(main_matrix, 2, {(3, 2)})
        assert clopen_refine(s, 2).members == s.members

    def test_refine_whole_space(self, main_matrix):
        s = clopen_make(main_matrix, 0, {()})
        assert clopen_refine(s, 1).members == frozenset({(1,), (2,), (3,)})

    def test_partition_of_ranges(self, main_matrix):
        z1 = clopen_make(main_matrix, 1, {(1,), (2,)})
        z2 = clopen_make(main_matrix, 2, {(3, 2)})
        z3 = clopen_make(main_matrix, 2, {(3, 3)})
        assert is_partition([z1, z2, z3])

    def test_equality_survives_refinement(self, main_matrix):
        s = clopen_make(main_matrix, 1, {(1,), (3,)})
        assert clopen_equals(s, clopen_refine(s, 4))

    def test_union_idempotent(self, main_matrix):
        s = clopen_make(main_matrix, 1, {(1,)})
        assert clopen_equals(clopen_union(s, s), s)

    def test_union_canonicalizes_depth(self, main_matrix):
        # {11,12} at depth 2 is the depth-1 cylinder {1}
        a = clopen_make(main_matrix, 2, {(1, 1)})
        b = clopen_make(main_matrix, 2, {(1, 2)})
        u = clopen_union(a, b)
        assert clopen_equals(u, clopen_make(main_matrix, 1, {(1,)}))

    def test_intersect(self, main_matrix):
        a = clopen_make(main_matrix, 1, {(1,), (2,)})
        b = clopen_make(main_matrix, 2, {(1, 1), (2, 3)})
        i = clopen_intersect(a, b)
        assert clopen_equals(i, b)

    def test_whole_space_partition_by_letters(self, main_matrix):
        parts = [clopen_make(main_matrix, 1, {(i,)}) for i in main_matrix.alphabet]
        assert is_partition(parts)
        assert clopen_equals(
            clopen_union(clopen_union(parts[0], parts[1]), parts[2]),
            clopen_whole_space(main_matrix),
        )

    def test_matrix_mismatch(self, main_matrix):
        other = validate_matrix([[1]])
        with pytest.raises(MatrixMismatch):
            clopen_union(
                clopen_make(main_matrix, 1, {(1,)}), clopen_make(other, 1, {(1,)})
            )
