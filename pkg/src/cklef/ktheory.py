"""K-theory of O_A by Smith normal form, induced maps, Lefschetz numbers, zeta.

K_0 is the cokernel of I - A^T acting on Z^n (generated by the classes of
the range projections e_i = [s_i s_i*]); K_1 is its kernel, free of the same
rank as the free part of K_0.  Traces are taken on the rationalized free
part; torsion is still tracked so that well-definedness of induced maps can
be verified on the full group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .endo import GeometricEndomorphism, compose
from .errors import (
    DimensionMismatch,
    ReconstructionInconsistent,
    WellDefinednessFailure,
)
from .index import index_series_counted
from .sft_core import TransitionMatrix, terminus

IntMatrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SmithDecomposition:
    """U · M · V = D with unimodular U, V and a nonnegative divisibility chain."""

    u: IntMatrix
    v: IntMatrix
    d: IntMatrix


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithDecomposition:
    rows = len(m)
    cols = len(m[0]) if rows else 0
    d = [list(map(int, row)) for row in m]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):
        # row dst += q * row src
        d[dst] = [a + q * b for a, b in zip(d[dst], d[src])]
        u[dst] = [a + q * b for a, b in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    for t in range(min(rows, cols)):
        while True:
            # Deterministic pivot: smallest nonzero magnitude, ties by (row, col).
            candidates = [
                (abs(d[i][j]), i, j)
                for i in range(t, rows)
                for j in range(t, cols)
                if d[i][j] != 0
            ]
            if not candidates:
                break
            _, pi, pj = min(candidates)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            pivot = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t] != 0:
                    q = d[i][t] // pivot
                    add_row(t, i, -q)
                    if d[i][t] != 0:
                        dirty = True
            for j in range(t + 1, cols):
                if d[t][j] != 0:
                    q = d[t][j] // pivot
                    add_col(t, j, -q)
                    if d[t][j] != 0:
                        dirty = True
            if dirty:
                continue
            # Enforce divisibility of the remaining block by the pivot.
            offender = next(
                (
                    (i, j)
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if d[i][j] % pivot != 0
                ),
                None,
            )
            if offender is None:
                break
            add_row(offender[0], t, 1)
        if t < rows and d[t][t] < 0:
            negate_row(t)

    return SmithDecomposition(
        u=tuple(tuple(r) for r in u),
        v=tuple(tuple(r) for r in v),
        d=tuple(tuple(r) for r in d),
    )


@dataclass(frozen=True)
class KTheoryData:
    matrix: TransitionMatrix
    presentation: IntMatrix  # I - A^T
    snf: SmithDecomposition
    invariant_factors: tuple[int, ...]
    torsion: tuple[int, ...]
    rank_k0_free: int
    rank_k1: int
    free_indices: tuple[int, ...]
    torsion_indices: tuple[int, ...]


@dataclass(frozen=True)
class KZeroClass:
    """A K_0 class: its Z^n vector and canonical quotient coordinates."""

    vector: tuple[int, ...]
    torsion: tuple[int, ...]
    free: tuple[int, ...]

    def same_class(self, other: "KZeroClass") -> bool:
        return self.torsion == other.torsion and self.free == other.free

    def negate(self, kt: "KTheoryData") -> "KZeroClass":
        return k0_reduce(kt, tuple(-x for x in self.vector))


def k_groups(matrix: TransitionMatrix) -> KTheoryData:
    n = matrix.n
    pres = tuple(
        tuple((1 if i == j else 0) - matrix.rows[j][i] for j in range(n))
        for i in range(n)
    )
    snf = smith_normal_form(pres)
    diag = tuple(snf.d[i][i] for i in range(n))
    free_idx = tuple(i for i, x in enumerate(diag) if x == 0)
    torsion_idx = tuple(i for i, x in enumerate(diag) if x > 1)
    return KTheoryData(
        matrix=matrix,
        presentation=pres,
        snf=snf,
        invariant_factors=diag,
        torsion=tuple(diag[i] for i in torsion_idx),
        rank_k0_free=len(free_idx),
        rank_k1=n - sum(1 for x in diag if x != 0),
        free_indices=free_idx,
        torsion_indices=torsion_idx,
    )


def k0_reduce(kt: KTheoryData, v: Sequence[int]) -> KZeroClass:
    """Canonical coordinates of a Z^n vector in K_0 = coker(I - A^T).

    In the SNF basis the quotient splits into Z/d_i summands and free Z
    summands; coordinates at invariant factor 1 vanish.
    """
    if len(v) != kt.matrix.n:
        raise DimensionMismatch(f"expected a vector of length {kt.matrix.n}")
    w = [sum(kt.snf.u[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
    return KZeroClass(
        vector=tuple(int(x) for x in v),
        torsion=tuple(w[i] % kt.invariant_factors[i] for i in kt.torsion_indices),
        free=tuple(w[i] for i in kt.free_indices),
    )


def generator_class(kt: KTheoryData, i: int) -> KZeroClass:
    """The class e_i = [s_i s_i*] (1-based)."""
    v = [0] * kt.matrix.n
    v[i - 1] = 1
    return k0_reduce(kt, v)


def _range_class_vector(matrix: TransitionMatrix, nu, mu) -> list[int]:
    """Z^n vector of the class of s_nu (s_mu* s_mu) s_nu*.

    s_mu* s_mu projects onto cylinders starting with a follower of t(mu);
    compressing by s_nu kills the followers not allowed after t(nu), and each
    surviving cylinder projection s_{nu j} s_{nu j}* has class e_j.  An empty
    word has every letter as a follower.
    """
    fol_nu = matrix.followers(terminus(nu)) if nu else set(matrix.alphabet)
    fol_mu = matrix.followers(terminus(mu)) if mu else set(matrix.alphabet)
    shared = fol_nu & fol_mu
    return [1 if j in shared else 0 for j in matrix.alphabet]


@dataclass(frozen=True)
class InducedK0:
    """The induced K_0 data of an endomorphism."""

    on_generators: IntMatrix  # columns are alpha_*(e_i) in Z^n
    free_part: IntMatrix  # matrix of the descended map on the free part
    ktheory: KTheoryData


def induced_k0(e: GeometricEndomorphism) -> InducedK0:
    """alpha_* on K_0 from the pair termini, checked well-defined on the quotient."""
    e.require_valid()
    matrix = e.matrix
    kt = k_groups(matrix)
    n = matrix.n
    columns = []
    for i in matrix.alphabet:
        acc = [0] * n
        for nu, mu in e.raw_images[i - 1]:
            for j, c in enumerate(_range_class_vector(matrix, nu, mu)):
                acc[j] += c
        columns.append(acc)
    t_rows = tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))

    # Relations must map into relations: T * (column of I - A^T) in im(I - A^T).
    for col in range(n):
        rel = [kt.presentation[row][col] for row in range(n)]
        image = [sum(t_rows[r][c] * rel[c] for c in range(n)) for r in range(n)]
        if not _in_image(kt, image):
            raise WellDefinednessFailure(
                f"induced map sends relation column {col + 1} outside the relation lattice"
            )

    free = _descend_free(kt, t_rows)
    return InducedK0(on_generators=t_rows, free_part=free, ktheory=kt)


def induced_k0_support_route(e: GeometricEndomorphism) -> IntMatrix:
    """alpha_*(e_i) computed from the range projections' cylinder supports.

    Independent of :func:`induced_k0`'s per-pair formula: the class of a sum
    of cylinder projections s_w s_w* is the sum of the e_{t(w)}.  Returns the
    matrix with these vectors as columns (they agree with induced_k0 only up
    to the relation lattice, so compare classes, not raw vectors).
    """
    from .word_algebra import adjoint, multiply, support

    e.require_valid()
    matrix = e.matrix
    n = matrix.n
    columns = []
    for i in matrix.alphabet:
        t = e.image_element(i)
        cyl = support(multiply(t, adjoint(t)))
        acc = [0] * n
        for w in cyl.members:
            acc[terminus(w) - 1] += 1
        columns.append(acc)
    return tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))


def _in_image(kt: KTheoryData, v: Sequence[int]) -> bool:
    w = [sum(kt.snf.u[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
    for i, d in enumerate(kt.invariant_factors):
        if d == 0:
            if w[i] != 0:
                return False
        elif w[i] % d != 0:
            return False
    return True


def _descend_free(kt: KTheoryData, t_rows: IntMatrix) -> IntMatrix:
    """Matrix of the descended map on the free part, in the SNF basis.

    The free summands are the SNF coordinates at zero invariant factors, so
    the descended matrix is (U T U^{-1}) restricted to those indices; U is
    unimodular, hence the restriction is integral.
    """
    u = linalg.to_matrix(kt.snf.u)
    conj = linalg.mat_mul(linalg.mat_mul(u, linalg.to_matrix(t_rows)), linalg.inverse(u))
    free = tuple(
        tuple(int(conj[i][j]) for j in kt.free_indices) for i in kt.free_indices
    )
    for i in kt.free_indices:
        for j in kt.free_indices:
            if conj[i][j].denominator != 1:
                raise WellDefinednessFailure("descended free-part matrix is not integral")
    return free


@dataclass(frozen=True)
class LefschetzResult:
    value: Fraction
    mode: str  # "supplied" | "derived"
    trace_k0: Fraction
    trace_k1: Fraction
    index: int | None = None

    @property
    def k1_is_derived(self) -> bool:
        return self.mode == "derived"


def lefschetz_number(
    e: GeometricEndomorphism, k1_action: Sequence[Sequence] | None = None
) -> LefschetzResult:
    """tr(M_0) - tr(M_1) on rationalized K-theory.

    With ``k1_action`` supplied this is an independent quantity to compare
    against the index.  Without it the K_1 trace is *derived* from the index
    via the Lefschetz identity and explicitly flagged as such (the paper
    gives no general algorithm for the K_1 action).
    """
    ind = induced_k0(e)
    kt = ind.ktheory
    tr0 = Fraction(sum(ind.free_part[i][i] for i in range(len(ind.free_part))))
    if k1_action is not None:
        m1 = linalg.to_matrix(k1_action)
        if len(m1) != kt.rank_k1 or any(len(r) != kt.rank_k1 for r in m1):
            raise DimensionMismatch(
                f"K_1 action must be {kt.rank_k1}x{kt.rank_k1}"
            )
        tr1 = linalg.trace(m1)
        return LefschetzResult(
            value=tr0 - tr1, mode="supplied", trace_k0=tr0, trace_k1=tr1
        )
    idx = index_series_counted(e).stabilized_value
    return LefschetzResult(
        value=Fraction(idx),
        mode="derived",
        trace_k0=tr0,
        trace_k1=tr0 - idx,
        index=idx,
    )


def zeta_coefficients(e: GeometricEndomorphism, n_max: int) -> list[int]:
    """Lefschetz indices of the powers of ``e``; coefficient 0 is the Euler term."""
    e.require_valid()
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    kt = k_groups(e.matrix)
    coeffs = [kt.rank_k0_free - kt.rank_k1]
    current = e
    for n in range(1, n_max + 1):
        coeffs.append(index_series_counted(current).stabilized_value)
        if n < n_max:
            current = compose(e, current)
    return coeffs


@dataclass(frozen=True)
class RationalFunction:
    """p(t) / q(t) with exact coefficients, normalized so q(0) = 1."""

    numerator: tuple[Fraction, ...]
    denominator: tuple[Fraction, ...]

    def expand(self, order: int) -> tuple[Fraction, ...]:
        return linalg.series_div(self.numerator, self.denominator, order)


def zeta_reconstruct(
    coeffs: Sequence[int], deg_num: int, deg_den: int
) -> RationalFunction:
    """Fit p/q with deg p <= deg_num, deg q <= deg_den to the series exactly.

    Uses the first deg_num + deg_den + 1 coefficients to solve the linear
    system and requires at least 2 held-out coefficients, all of which must
    be reproduced by the fitted function.
    """
    needed = deg_num + deg_den + 1
    if len(coeffs) < needed + 2:
        raise ReconstructionInconsistent(
            f"need at least {needed + 2} coefficients, got {len(coeffs)}"
        )
    # Unknowns: p_0..p_deg_num, q_1..q_deg_den with q_0 = 1.
    # Equation at t^r: sum_s q_s c_{r-s} = p_r (p_r = 0 beyond deg_num).
    unknowns = deg_num + 1 + deg_den
    rows = []
    rhs = []
    for r in range(needed):
        row = [Fraction(0)] * unknowns
        if r <= deg_num:
            row[r] = Fraction(-1)
        for s in range(1, deg_den + 1):
            if 0 <= r - s < len(coeffs):
                row[deg_num + s] = Fraction(coeffs[r - s])
        rows.append(tuple(row))
        rhs.append(-Fraction(coeffs[r]))
    solution = linalg.solve(tuple(rows), rhs)
    if solution is None:
        raise ReconstructionInconsistent("no rational function matches the series")
    p = linalg.poly_trim(tuple(solution[: deg_num + 1]))
    q = linalg.poly_trim((Fraction(1),) + tuple(solution[deg_num + 1:]))
    rf = RationalFunction(numerator=p, denominator=q)
    expanded = rf.expand(len(coeffs) - 1)
    for r, c in enumerate(coeffs):
        if expanded[r] != c:
            raise ReconstructionInconsistent(
                f"held-out coefficient {r} mismatch: {expanded[r]} != {c}"
            )
    return rf


def zeta(e: GeometricEndomorphism, n_max: int | None = None):
    """Coefficients plus reconstruction with the K-theory degree bounds."""
    kt = k_groups(e.matrix)
    deg_num, deg_den = kt.rank_k1, kt.rank_k0_free
    if n_max is None:
        n_max = max(2 * (kt.rank_k0_free + kt.rank_k1) + 1, deg_num + deg_den + 3)
    coeffs = zeta_coefficients(e, n_max)
    rf = zeta_reconstruct(coeffs, deg_num, deg_den)
    return coeffs, rf
