"""Exact rational correlators of the spectral-curve tau-function.

The two-point table comes from expanding

    (tr[Pi_a(z1) Pi_b(z2)] - delta_ab) / (z1 - z2)^2

and the N-point tables (N >= 3) from the cyclic permutation sum

    -(1/N) sum_s tr[Pi_{a_s1}(z_s1) ... Pi_{a_sN}(z_sN)] / prod_cyc (z_si - z_sj),

both read off in the variables u_i = 1/z_i with the coefficient of
prod u_i^(k_i+2) giving F^{a1..aN}_{k1..kN}.  All divisions by products of
(u_i - u_j) are exact sparse-polynomial divisions with a zero-remainder
requirement, so every emitted value carries a soundness certificate.

Internal truncation: with per-variable truncation K the quotient layers are
certified through total degree K - N, so K = N*(kmax+1) certifies the full
requested box of indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .curve import MatrixPolynomial, characteristic_data
from .multipoly import MultiPoly, multipoly_exact_divide
from .projectors import MatrixTailSeries, phi_coefficients, projector_series

IndexPair = tuple[int, int]  # (sheet, k)


@dataclass(frozen=True)
class CorrelatorTable:
    """Map from ((a1,k1),...,(aN,kN)) to exact rational values.

    Entries with every k_i <= trusted_order are exact; nothing else is stored.
    """

    n_points: int
    entries: Mapping[tuple[IndexPair, ...], Fraction]
    trusted_order: int

    def value(self, pairs: Sequence[IndexPair]) -> Fraction:
        key = tuple((int(a), int(k)) for a, k in pairs)
        if key not in self.entries:
            raise KeyError(f"no entry for {key}")
        return self.entries[key]

    def merged_with(self, other: "CorrelatorTable") -> "CorrelatorTable":
        if other.n_points != self.n_points:
            raise ValueError("cannot merge tables of different arity")
        entries = dict(self.entries)
        entries.update(other.entries)
        return CorrelatorTable(self.n_points, entries,
                               min(self.trusted_order, other.trusted_order))


class CorrelatorEngine:
    """Caches curve data and projector series for one matrix polynomial."""

    def __init__(self, w: MatrixPolynomial):
        self.w = w
        self.curve = characteristic_data(w, with_diagnostics=True)
        fatal = self.curve.fatal_diagnostics()
        if fatal:
            raise ValueError(f"invalid input: {fatal[0].detail or fatal[0].name}")
        self._phi = None
        self._projectors: dict[int, MatrixTailSeries] = {}
        self._proj_order = -1

    def projector(self, sheet: int, order: int) -> MatrixTailSeries:
        if order > self._proj_order:
            if self._phi is None:
                self._phi = phi_coefficients(self.curve, self.w)
            self._proj_order = order
            self._projectors = {
                a: projector_series(self.w, a, order, curve=self.curve, phi=self._phi)
                for a in range(1, self.w.n + 1)
            }
        return self._projectors[sheet]

    def slot_matrix(self, sheet: int, order: int):
        """Projector as an n x n grid of u-coefficient lists (length order+1)."""
        pi = self.projector(sheet, order)
        n = pi.n
        return [
            [[pi.entry(i, j).coefficient(-k) for k in range(order + 1)] for j in range(n)]
            for i in range(n)
        ]

    def difference_matrix(self, order: int):
        """Pi_1 - Pi_2 for n = 2 (the hyperelliptic difference convention)."""
        if self.w.n != 2:
            raise ValueError("difference matrix is a 2-sheet construction")
        p1 = self.projector(1, order)
        p2 = self.projector(2, order)
        d = p1 - p2
        return [
            [[d.entry(i, j).coefficient(-k) for k in range(order + 1)] for j in range(2)]
            for i in range(2)
        ]


# ---------------------------------------------------------------------------
# core expansions
# ---------------------------------------------------------------------------

def _pair_numerator(mat1, mat2, subtract: Fraction) -> MultiPoly:
    """tr[M1(u1) M2(u2)] - subtract, capped at total degree K (= len-1)."""
    n = len(mat1)
    K = len(mat1[0][0]) - 1
    num = MultiPoly.zero(2)
    for i in range(n):
        for j in range(n):
            f = MultiPoly.from_univariate(2, 0, mat1[i][j])
            g = MultiPoly.from_univariate(2, 1, mat2[j][i])
            num = num + f.mul(g, max_total_degree=K)
    if subtract:
        num = num - MultiPoly.constant(2, subtract)
    return num


def _pair_table_values(mat1, mat2, subtract: Fraction, kmax: int) -> dict:
    K = len(mat1[0][0]) - 1
    num = _pair_numerator(mat1, mat2, subtract)
    d = MultiPoly.pair_difference(2, 1, 0)
    q = multipoly_exact_divide(num, d, K)
    q = multipoly_exact_divide(q, d, K - 1)
    return {
        (k1, k2): q.coeff((k1, k2))
        for k1 in range(kmax + 1)
        for k2 in range(kmax + 1)
    }


def _cycle_sign_and_missing(perm: Sequence[int], npts: int):
    """Sign and complement pairs for the cyclic denominator of one permutation.

    Each step x -> y contributes (u_y - u_x); with the convention that the
    stored pair difference is u_min - u_max the step carries sign +1 when
    y < x.  Pairs of the full Vandermonde not visited by the cycle make up the
    complement multiplier.
    """
    sign = 1
    in_cycle = set()
    for idx in range(npts):
        x, y = perm[idx], perm[(idx + 1) % npts]
        if y > x:
            sign = -sign
        in_cycle.add(frozenset((x, y)))
    missing = [
        (p, q)
        for p in range(npts)
        for q in range(p + 1, npts)
        if frozenset((p, q)) not in in_cycle
    ]
    return sign, missing


def _npoint_values(slot_mats, kmax: int) -> dict:
    """F-values for fixed per-slot matrices; slot i expands in u_i.

    Returns {(k_1..k_N): Fraction} for the full box k_i <= kmax.
    """
    npts = len(slot_mats)
    if npts < 3:
        raise ValueError("n-point expansion needs at least 3 slots")
    n = len(slot_mats[0])
    K = npts * (kmax + 1)
    cap_tr = K
    n_missing = npts * (npts - 1) // 2 - npts
    cap_dividend = K + n_missing

    mp_slots = []
    for slot, mat in enumerate(slot_mats):
        if len(mat[0][0]) < K + 1:
            raise ValueError("slot matrices carry fewer trusted orders than required")
        mp_slots.append(
            [
                [MultiPoly.from_univariate(npts, slot, mat[i][j][: K + 1]) for j in range(n)]
                for i in range(n)
            ]
        )

    def chain_trace(order: Sequence[int]) -> MultiPoly:
        acc = mp_slots[order[0]]
        for idx in order[1:]:
            nxt = mp_slots[idx]
            out = []
            for i in range(n):
                row = []
                for j in range(n):
                    s = MultiPoly.zero(npts)
                    for k in range(n):
                        if acc[i][k].is_zero() or nxt[k][j].is_zero():
                            continue
                        s = s + acc[i][k].mul(nxt[k][j], max_total_degree=cap_tr)
                    row.append(s)
                out.append(row)
            acc = out
        tr = MultiPoly.zero(npts)
        for i in range(n):
            tr = tr + acc[i][i]
        return tr

    dividend = MultiPoly.zero(npts)
    # one representative per cyclic class (slot 0 first); trace and denominator
    # are invariant under cyclic shifts, which cancels the 1/N prefactor
    for rest in itertools.permutations(range(1, npts)):
        perm = (0,) + rest
        sign, missing = _cycle_sign_and_missing(perm, npts)
        term = chain_trace(perm)
        for (p, q) in missing:
            term = term.mul(MultiPoly.pair_difference(npts, p, q), max_total_degree=cap_dividend)
        dividend = dividend + (term if sign > 0 else -term)

    q = dividend
    trusted = cap_dividend
    for p in range(npts):
        for r in range(p + 1, npts):
            q = multipoly_exact_divide(q, MultiPoly.pair_difference(npts, p, r), trusted)
            trusted -= 1
    out = {}
    for ks in itertools.product(range(kmax + 1), repeat=npts):
        out[ks] = -q.coeff(ks)
    return out


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def correlator_pair(w: MatrixPolynomial, a1: int, a2: int, kmax: int,
                    engine: CorrelatorEngine | None = None) -> CorrelatorTable:
    """F^{a1 a2}_{k1 k2} for all k1, k2 <= kmax, exactly."""
    engine = engine or CorrelatorEngine(w)
    K = 2 * (kmax + 1)
    m1 = engine.slot_matrix(a1, K)
    m2 = engine.slot_matrix(a2, K)
    vals = _pair_table_values(m1, m2, Fraction(1 if a1 == a2 else 0), kmax)
    entries = {
        ((a1, k1), (a2, k2)): v for (k1, k2), v in vals.items()
    }
    return CorrelatorTable(2, entries, kmax)


def correlator_n(w: MatrixPolynomial, sheets: Sequence[int], kmax: int,
                 engine: CorrelatorEngine | None = None) -> CorrelatorTable:
    """F^{a1..aN}_{k1..kN} for N = len(sheets) >= 3 and all k_i <= kmax."""
    sheets = tuple(int(a) for a in sheets)
    if len(sheets) < 3:
        raise ValueError("correlator_n needs at least 3 sheet indices")
    engine = engine or CorrelatorEngine(w)
    npts = len(sheets)
    K = npts * (kmax + 1)
    slot_mats = [engine.slot_matrix(a, K) for a in sheets]
    vals = _npoint_values(slot_mats, kmax)
    entries = {
        tuple((sheets[i], ks[i]) for i in range(npts)): v for ks, v in vals.items()
    }
    return CorrelatorTable(npts, entries, kmax)


@dataclass(frozen=True)
class FreeEnergyPolynomial:
    """Truncated free energy as a polynomial in the formal labels t^a_k.

    ``coefficients`` maps a sorted monomial (tuple of (a, k) pairs, with
    multiplicity) to its coefficient; the 1/N! of the defining sum and the
    multinomial count of equal labels combine to F / prod(multiplicities!).
    """

    max_n: int
    kmax: int
    coefficients: Mapping[tuple[IndexPair, ...], Fraction]

    def coefficient(self, pairs: Sequence[IndexPair]) -> Fraction:
        key = tuple(sorted((int(a), int(k)) for a, k in pairs))
        return self.coefficients.get(key, Fraction(0))


def free_energy(w: MatrixPolynomial, max_n: int, kmax: int,
                engine: CorrelatorEngine | None = None) -> FreeEnergyPolynomial:
    """Assemble sum_{N=2}^{max_n} (1/N!) sum F t...t over the trusted box."""
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    engine = engine or CorrelatorEngine(w)
    n = w.n
    labels = [(a, k) for a in range(1, n + 1) for k in range(kmax + 1)]
    coeffs: dict[tuple[IndexPair, ...], Fraction] = {}
    table_cache: dict[tuple[int, ...], CorrelatorTable] = {}
    for npts in range(2, max_n + 1):
        for mono in itertools.combinations_with_replacement(labels, npts):
            a_tuple = tuple(a for a, _ in mono)
            k_tuple = tuple(k for _, k in mono)
            if a_tuple not in table_cache:
                if npts == 2:
                    table_cache[a_tuple] = correlator_pair(w, a_tuple[0], a_tuple[1], kmax, engine)
                else:
                    table_cache[a_tuple] = correlator_n(w, a_tuple, kmax, engine)
            f = table_cache[a_tuple].value(tuple(zip(a_tuple, k_tuple)))
            counts: dict[IndexPair, int] = {}
            for p in mono:
                counts[p] = counts.get(p, 0) + 1
            denom = 1
            for c in counts.values():
                for i in range(2, c + 1):
                    denom *= i
            val = f / denom
            if val:
                coeffs[mono] = val
    return FreeEnergyPolynomial(max_n, kmax, coeffs)


# ---------------------------------------------------------------------------
# hyperelliptic difference combination (n = 2)
# ---------------------------------------------------------------------------

def hyperelliptic_combination(w: MatrixPolynomial, n_points: int, kmax: int,
                              engine: CorrelatorEngine | None = None) -> dict:
    """Signed sheet sums sum_{a-tuples} prod_i s_{a_i} F^{a...}_{k...}.

    Sheet 1 (the branch with the monic leading coefficient) carries weight +1
    and sheet 2 weight -1, realizing the difference of the two time families.
    By linearity of the trace this equals one expansion with every projector
    slot replaced by Pi_1 - Pi_2.
    """
    if w.n != 2:
        raise ValueError("hyperelliptic combination needs n = 2")
    engine = engine or CorrelatorEngine(w)
    if n_points == 2:
        K = 2 * (kmax + 1)
        d = engine.difference_matrix(K)
        return _pair_table_values(d, d, Fraction(2), kmax)
    K = n_points * (kmax + 1)
    d = engine.difference_matrix(K)
    return _npoint_values([d] * n_points, kmax)


def hyperelliptic_combination_from_tables(w: MatrixPolynomial, n_points: int, kmax: int,
                                          engine: CorrelatorEngine | None = None) -> dict:
    """Same combination assembled literally from per-sheet tables (slow path)."""
    if w.n != 2:
        raise ValueError("hyperelliptic combination needs n = 2")
    engine = engine or CorrelatorEngine(w)
    out: dict = {}
    for a_tuple in itertools.product((1, 2), repeat=n_points):
        sign = 1
        for a in a_tuple:
            if a == 2:
                sign = -sign
        if n_points == 2:
            table = correlator_pair(w, a_tuple[0], a_tuple[1], kmax, engine)
        else:
            table = correlator_n(w, a_tuple, kmax, engine)
        for ks in itertools.product(range(kmax + 1), repeat=n_points):
            v = table.value(tuple(zip(a_tuple, ks)))
            out[ks] = out.get(ks, Fraction(0)) + (v if sign > 0 else -v)
    return out
