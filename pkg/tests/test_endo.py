import random

import pytest

from cklef.endo import (
    apply,
    build_endomorphism,
    compose,
    dot_apply,
    generator_equal,
    identity_endomorphism,
    path_map,
    power,
    represent_at_depth,
)
from cklef.errors import (
    DepthTooSmall,
    DuplicateMuAfterNormalization,
    InvalidEndomorphism,
    ZeroMonomialPair,
)
from cklef.sft_core import enumerate_paths, validate_matrix
from cklef.word_algebra import element, equals, generator, monomial
from tests.conftest import small_matrices


class TestValidation:
    def test_main_presentation_valid(self, main_endo):
        assert main_endo.valid
        assert main_endo.k == 2

    def test_identity_valid_everywhere(self):
        for matrix in small_matrices():
            e = identity_endomorphism(matrix)
            assert e.valid and e.k == 0

    def test_invalid_presentation_flagged(self, main_matrix):
        # s_1 -> s_1 s_2* breaks the range-sum relation
        pairs = [[((1,), (2,))], [((2,), ())], [((3,), ())]]
        e = build_endomorphism(main_matrix, pairs)
        assert not e.valid
        with pytest.raises(InvalidEndomorphism):
            e.require_valid()

    def test_zero_monomial_pair_rejected(self):
        m = validate_matrix([[0, 1], [1, 0]])
        # fol(1) = {2} and fol(2) = {1} are disjoint, so s_1 s_2* = 0
        with pytest.raises(ZeroMonomialPair):
            build_endomorphism(m, [[((1,), (2,))], [((2,), ())]])

    def test_duplicate_mu_after_normalization(self, main_matrix):
        # mu = () expands to mu = (1,) at depth 1, colliding with the second pair
        pairs = [
            [((1,), ()), ((2,), (1,))],
            [((2,), ())],
            [((3,), ())],
        ]
        with pytest.raises(DuplicateMuAfterNormalization):
            build_endomorphism(main_matrix, pairs)

    def test_requested_depth_too_small(self, main_matrix):
        with pytest.raises(DepthTooSmall):
            build_endomorphism(
                main_matrix, [[((i,), ())] for i in main_matrix.alphabet], k=-1
            )


class TestApply:
    def test_apply_generator_gives_image(self, main_endo, main_matrix):
        for i in main_matrix.alphabet:
            assert equals(
                apply(main_endo, generator(main_matrix, i)),
                main_endo.image_element(i),
            )

    def test_apply_word(self, main_endo, main_matrix):
        # t(s_33 s_3*) = t_3 t_3 t_3* = s_333 s_33* using t_3 = s_33 s_3*
        got = apply(main_endo, monomial(main_matrix, (3, 3), (3,)))
        assert equals(got, monomial(main_matrix, (3, 3, 3), (3, 3)))

    def test_identity_apply_fixes_everything(self, main_matrix, main_identity):
        rng = random.Random(7)
        for _ in range(10):
            words = enumerate_paths(main_matrix, 2)
            nu = rng.choice(words)
            mu = rng.choice(words)
            x = element(main_matrix, [(nu, mu, 1)])
            assert equals(apply(main_identity, x), x)


class TestCompose:
    def test_identity_neutral(self, main_endo, main_identity):
        assert generator_equal(compose(main_identity, main_endo), main_endo)
        assert generator_equal(compose(main_endo, main_identity), main_endo)

    def test_functoriality_on_elements(self, main_endo, main_matrix):
        square = compose(main_endo, main_endo)
        for i in main_matrix.alphabet:
            x = generator(main_matrix, i)
            assert equals(apply(square, x), apply(main_endo, apply(main_endo, x)))

    def test_power_matches_repeated_compose(self, main_endo):
        assert generator_equal(
            power(main_endo, 3), compose(main_endo, compose(main_endo, main_endo))
        )

    def test_power_depth_grows(self, main_endo):
        assert power(main_endo, 2).k == 5

    def test_power_requires_positive(self, main_endo):
        with pytest.raises(ValueError):
            power(main_endo, 0)

    def test_invalid_factor_rejected(self, main_matrix, main_identity):
        bad = build_endomorphism(
            main_matrix, [[((1,), (2,))], [((2,), ())], [((3,), ())]]
        )
        with pytest.raises(InvalidEndomorphism):
            compose(bad, main_identity)


class TestDotApply:
    def test_worked_values(self, main_endo):
        psi = path_map(main_endo)
        assert dot_apply(psi, (1, 1)) == (2,)
        assert dot_apply(psi, (1, 2)) == (3, 2, 1)
        assert dot_apply(psi, (2, 1, 1, 1)) == (1, 1, 1)
        assert dot_apply(psi, (3, 2, 1)) == (2, 3, 2)

    def test_short_words_undefined(self, main_endo):
        psi = path_map(main_endo)
        assert dot_apply(psi, ()) is None
        assert dot_apply(psi, (2,)) is None

    def test_unmatched_word_undefined(self, main_endo):
        # no mu-word of t_1 is a prefix of (2,)
        psi = path_map(main_endo)
        assert dot_apply(psi, (2, 1)) is None

    def test_identity_is_rotation(self, main_identity, main_matrix):
        psi = path_map(main_identity)
        for m in range(2, 6):
            for w in enumerate_paths(main_matrix, m):
                expected = (w[-1],) + w[:-1]
                got = dot_apply(psi, w)
                if got is not None:
                    assert got == expected

    def test_injective_per_length(self, main_endo, main_matrix):
        psi = path_map(main_endo)
        for m in range(2, main_endo.k + 7):
            seen = {}
            for w in enumerate_paths(main_matrix, m):
                r = dot_apply(psi, w)
                if r is not None:
                    assert r not in seen, (w, seen[r], r)
                    seen[r] = w

    def test_results_are_allowable(self, main_endo, main_matrix):
        from cklef.sft_core import is_allowable

        psi = path_map(main_endo)
        for m in range(2, 7):
            for w in enumerate_paths(main_matrix, m):
                r = dot_apply(psi, w)
                if r is not None:
                    assert is_allowable(main_matrix, r)


class TestRepresentAtDepth:
    def test_preserves_images(self, main_endo):
        deeper = represent_at_depth(main_endo, 4)
        assert deeper.k == 4
        assert generator_equal(deeper, main_endo)

    def test_all_mu_words_at_depth(self, main_endo):
        deeper = represent_at_depth(main_endo, 3)
        for pairs in deeper.raw_images:
            assert all(len(mu) == 3 for _, mu in pairs)

    def test_below_current_depth_rejected(self, main_endo):
        with pytest.raises(DepthTooSmall):
            represent_at_depth(main_endo, 1)
