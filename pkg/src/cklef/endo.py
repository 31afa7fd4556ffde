"""Geometric endomorphism presentations and the induced partial path map.

A geometric endomorphism of O_A is presented by listing, for each generator
``s_i``, the pairs (nu, mu) of its image ``t_i = sum s_nu s_mu*``.  Validity
is the purely algebraic statement that the ``t_i`` satisfy the same
Cuntz-Krieger relations as the ``s_i``; the universal property then makes
``s_i -> t_i`` an endomorphism.

The same pair data induces a partially defined self-map of the path set:
with ``i`` the last letter of ``w`` and ``p`` the rest, a pair (nu, mu) of
``t_i`` whose mu is a prefix of ``p`` sends ``w`` to nu followed by the rest
of ``p``.  Words of length < 2, unmatched words, and words whose result
would not be allowable are outside the domain; the index of the map is
insensitive to such short-word conventions.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .errors import (
    DepthTooSmall,
    DuplicateMuAfterNormalization,
    InvalidEndomorphism,
    ZeroMonomialPair,
)
from .sft_core import TransitionMatrix, Word, is_allowable, require_allowable, terminus
from .word_algebra import (
    Element,
    Pair,
    add,
    adjoint,
    element,
    equals,
    is_partial_isometry,
    monomial,
    monomial_is_zero,
    multiply,
    normalize,
    scale,
    unit,
    zero,
)


@dataclass(frozen=True)
class GeometricEndomorphism:
    """A validated presentation ``s_i -> t_i = sum s_nu s_mu*``.

    ``raw_images`` keeps the pairs as given (used by the path map); the
    normalization to the common mu-length ``k`` is available through
    :meth:`normalized_images` and is computed lazily because its size grows
    like the number of length-``k`` words.
    """

    matrix: TransitionMatrix
    raw_images: tuple[tuple[Pair, ...], ...]
    k: int
    valid: bool

    def image_element(self, i: int) -> Element:
        """The element t_i (1-based generator index)."""
        return element(self.matrix, [(nu, mu, 1) for nu, mu in self.raw_images[i - 1]])

    def normalized_images(self) -> tuple[tuple[Pair, ...], ...]:
        """Per-generator pairs with every mu-word expanded to length ``k``."""
        return _normalized_images(self)

    def require_valid(self):
        if not self.valid:
            raise InvalidEndomorphism("presentation fails the Cuntz-Krieger checks")


@functools.lru_cache(maxsize=None)
def _normalized_images(endo: GeometricEndomorphism) -> tuple[tuple[Pair, ...], ...]:
    images = []
    for i in endo.matrix.alphabet:
        norm = normalize(endo.image_element(i), endo.k)
        images.append(tuple(sorted(norm.terms)))
    return tuple(images)


def build_endomorphism(
    matrix: TransitionMatrix,
    raw_pairs: "list[list[tuple[Word, Word]]]",
    k: int | None = None,
    _valid_hint: bool | None = None,
) -> GeometricEndomorphism:
    """Validate and normalize a presentation given as per-generator pair lists.

    The common mu-length defaults to the maximal raw mu-length; a larger
    ``k`` may be requested.  Duplicate mu-words at the common length (which
    would make the path map ambiguous or non-injective) are rejected.
    """
    if len(raw_pairs) != matrix.n:
        raise InvalidEndomorphism(
            f"expected {matrix.n} generator image lists, got {len(raw_pairs)}"
        )
    raws: list[tuple[Pair, ...]] = []
    for i, pairs in enumerate(raw_pairs, start=1):
        if not pairs:
            raise InvalidEndomorphism(f"generator {i} has no presentation pairs")
        cleaned = []
        for nu, mu in pairs:
            nu, mu = tuple(nu), tuple(mu)
            require_allowable(matrix, nu)
            require_allowable(matrix, mu)
            if monomial_is_zero(matrix, nu, mu):
                raise ZeroMonomialPair(
                    f"pair {(nu, mu)} of generator {i} denotes the zero monomial"
                )
            cleaned.append((nu, mu))
        raws.append(tuple(cleaned))

    max_mu = max(len(mu) for pairs in raws for _, mu in pairs)
    if k is None:
        k = max_mu
    elif k < max_mu:
        raise DepthTooSmall(f"requested k={k} below maximal mu-length {max_mu}")

    for i, pairs in enumerate(raws, start=1):
        _check_mu_collisions(matrix, i, pairs)

    endo = GeometricEndomorphism(
        matrix=matrix,
        raw_images=tuple(raws),
        k=k,
        valid=False,
    )
    valid = _valid_hint if _valid_hint is not None else _ck_checks(endo)
    object.__setattr__(endo, "valid", valid)
    return endo


def _check_mu_collisions(matrix: TransitionMatrix, i: int, pairs) -> None:
    """Reject pair lists whose mu-words collide once expanded to a common length.

    Expanding (nu1, mu1) can reach the mu-word of another pair exactly when
    mu1 is a prefix of mu2 and the connecting tail may follow nu1; in that
    case the normalized presentation repeats a mu-word and the induced path
    map would be ambiguous.
    """
    for a, (nu1, mu1) in enumerate(pairs):
        for b, (nu2, mu2) in enumerate(pairs):
            if a == b or len(mu1) > len(mu2) or mu2[: len(mu1)] != mu1:
                continue
            if len(mu1) == len(mu2):
                raise DuplicateMuAfterNormalization(
                    f"generator {i}: mu-word {mu1} repeated"
                )
            tail = mu2[len(mu1):]
            if not nu1 or matrix.entry(terminus(nu1), tail[0]) == 1:
                raise DuplicateMuAfterNormalization(
                    f"generator {i}: mu-words {mu1} and {mu2} collide after normalization"
                )


def _ck_checks(endo: GeometricEndomorphism) -> bool:
    """The three Cuntz-Krieger checks defining the VALID flag."""
    matrix = endo.matrix
    ts = [endo.image_element(i) for i in matrix.alphabet]
    for t in ts:
        if not is_partial_isometry(t):
            return False
    ranges = [multiply(t, adjoint(t)) for t in ts]
    for i in matrix.alphabet:
        rhs = zero(matrix)
        for j in matrix.alphabet:
            if matrix.entry(i, j):
                rhs = add(rhs, ranges[j - 1])
        if not equals(multiply(adjoint(ts[i - 1]), ts[i - 1]), rhs):
            return False
    total = zero(matrix)
    for r in ranges:
        total = add(total, r)
    return equals(total, unit(matrix))


def identity_endomorphism(matrix: TransitionMatrix) -> GeometricEndomorphism:
    return build_endomorphism(matrix, [[((i,), ())] for i in matrix.alphabet])


def apply(endo: GeometricEndomorphism, x: Element) -> Element:
    """Substitute s_i -> t_i, s_i* -> t_i* in ``x`` and multiply out."""
    endo.require_valid()
    out = zero(endo.matrix)
    for (nu, mu), c in x.terms.items():
        term = _image_of_word(endo, nu)
        term = multiply(term, adjoint(_image_of_word(endo, mu)))
        out = add(out, scale(term, c))
    return out


def _image_of_word(endo: GeometricEndomorphism, w: Word) -> Element:
    result = unit(endo.matrix)
    for letter in w:
        result = multiply(result, endo.image_element(letter))
    return result


def compose(e: GeometricEndomorphism, f: GeometricEndomorphism) -> GeometricEndomorphism:
    """The endomorphism ``s_i -> apply(e, t_i^f)`` re-expressed in pairs."""
    e.require_valid()
    f.require_valid()
    if e.matrix != f.matrix:
        raise InvalidEndomorphism("cannot compose endomorphisms over different matrices")
    images = [apply(e, f.image_element(i)) for i in e.matrix.alphabet]
    pair_lists = []
    for i, elt in enumerate(images, start=1):
        if any(c != 1 for c in elt.terms.values()):
            # Merge overlapping monomials before giving up.
            elt = normalize(elt)
        if any(c != 1 for c in elt.terms.values()):
            raise InvalidEndomorphism(
                f"composite image of generator {i} is not a sum of distinct monomials"
            )
        pair_lists.append(sorted(elt.terms))
    # apply() is a unital *-homomorphism, so the composite images satisfy the
    # Cuntz-Krieger relations whenever both factors do; re-running the checks
    # would only repeat that argument at exponential cost.
    return build_endomorphism(e.matrix, pair_lists, _valid_hint=True)


def power(e: GeometricEndomorphism, n: int) -> GeometricEndomorphism:
    if n < 1:
        raise ValueError("power requires n >= 1")
    result = e
    for _ in range(n - 1):
        result = compose(e, result)
    return result


def generator_equal(e: GeometricEndomorphism, f: GeometricEndomorphism) -> bool:
    """Generator-wise equality of the presented images as algebra elements."""
    if e.matrix != f.matrix:
        return False
    return all(
        equals(e.image_element(i), f.image_element(i)) for i in e.matrix.alphabet
    )


def represent_at_depth(e: GeometricEndomorphism, k: int) -> GeometricEndomorphism:
    """The same endomorphism presented with all mu-words at length ``k``.

    Re-presenting deepens the path map's domain threshold, removing its
    shortest domain words; the invariance property of the index is exactly
    that this does not change the stabilized value.
    """
    if k < e.k:
        raise DepthTooSmall(f"cannot re-present at depth {k} below {e.k}")
    pair_lists = []
    for i in e.matrix.alphabet:
        norm = normalize(e.image_element(i), k)
        pair_lists.append(sorted(norm.terms))
    # The images are unchanged as algebra elements, so validity carries over.
    return build_endomorphism(e.matrix, pair_lists, k=k, _valid_hint=e.valid)


class PartialPathMap:
    """The partial self-map of the path set induced by a presentation.

    Evaluation matches the raw pairs: for ``w = p + (i,)`` with ``p``
    nonempty, the unique pair (nu, mu) of ``t_i`` with mu a prefix of ``p``
    (mu-words are prefix-free within a generator) sends ``w`` to
    ``nu + p[len(mu):]`` provided the result is allowable.
    """

    def __init__(self, endo: GeometricEndomorphism):
        endo.require_valid()
        self.endo = endo
        self.matrix = endo.matrix

    def dot_apply(self, w: Word) -> Word | None:
        """Evaluate the path map; None encodes Undefined."""
        if len(w) < 2:
            return None
        i = w[-1]
        p = w[:-1]
        for nu, mu in self.endo.raw_images[i - 1]:
            if p[: len(mu)] == mu:
                rest = p[len(mu):]
                if rest and nu and self.matrix.entry(terminus(nu), rest[0]) == 0:
                    continue  # result not allowable; another pair may match
                return nu + rest
        return None


def dot_apply(path_map: PartialPathMap, w: Word) -> Word | None:
    return path_map.dot_apply(tuple(w))


def path_map(endo: GeometricEndomorphism) -> PartialPathMap:
    return PartialPathMap(endo)
