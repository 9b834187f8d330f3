"""Sparse multivariate polynomials over the rationals.

Used by the correlator engine for truncated numerators in the auxiliary
variables u_i = 1/z_i.  Exponents are nonnegative integer tuples; zero
coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple

Exponent = Tuple[int, ...]


class InexactDivisionError(Exception):
    """Raised when an exact multivariate division leaves a trusted remainder."""


class MultiPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exponent, Fraction] | None = None):
        self.nvars = nvars
        clean: Dict[Exponent, Fraction] = {}
        for e, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            if len(e) != nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent tuple {e} for {nvars} variables")
            clean[tuple(e)] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------
    @staticmethod
    def zero(nvars: int) -> "MultiPoly":
        return MultiPoly(nvars, {})

    @staticmethod
    def constant(nvars: int, c) -> "MultiPoly":
        return MultiPoly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def variable(nvars: int, idx: int, power: int = 1) -> "MultiPoly":
        e = [0] * nvars
        e[idx] = power
        return MultiPoly(nvars, {tuple(e): Fraction(1)})

    @staticmethod
    def pair_difference(nvars: int, i: int, j: int) -> "MultiPoly":
        """u_i - u_j."""
        return MultiPoly.variable(nvars, i) - MultiPoly.variable(nvars, j)

    @staticmethod
    def from_univariate(nvars: int, idx: int, coeffs: Iterable[Fraction]) -> "MultiPoly":
        """Embed sum_k coeffs[k] * u_idx**k."""
        terms: Dict[Exponent, Fraction] = {}
        for k, c in enumerate(coeffs):
            if c:
                e = [0] * nvars
                e[idx] = k
                terms[tuple(e)] = Fraction(c)
        return MultiPoly(nvars, terms)

    # -- basic ring ops -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exponent: Exponent) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(self.nvars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def scale(self, c) -> "MultiPoly":
        c = Fraction(c)
        return MultiPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def mul(self, other: "MultiPoly", max_total_degree: int | None = None) -> "MultiPoly":
        """Product, optionally dropping monomials above a total degree cap."""
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out: Dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if max_total_degree is not None and d1 + sum(e2) > max_total_degree:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(self.nvars, out)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        return self.mul(other)

    def truncate_total_degree(self, cap: int) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: c for e, c in self.terms.items() if sum(e) <= cap})

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        raise TypeError("MultiPoly is unhashable")

    def __repr__(self) -> str:
        if not self.terms:
            return "MultiPoly(0)"
        bits = []
        for e in sorted(self.terms, key=lambda t: (sum(t), t)):
            mono = "*".join(f"u{i}^{p}" for i, p in enumerate(e) if p) or "1"
            bits.append(f"{self.terms[e]}*{mono}")
        return "MultiPoly(" + " + ".join(bits) + ")"


def _grlex_key(e: Exponent) -> tuple:
    return (sum(e), e)


def multipoly_exact_divide(
    numerator: MultiPoly, divisor: MultiPoly, trusted_total_degree: int
) -> MultiPoly:
    """Divide exactly, tolerating junk only above the trusted total degree.

    Performs graded-lex reduction of ``numerator`` by ``divisor``.  Any
    remainder monomial at or below ``trusted_total_degree`` means the division
    was not exact where it had to be, which signals a truncation bug upstream,
    so it raises :class:`InexactDivisionError`.  Remainder monomials above the
    trusted degree are discarded (they live where the numerator was never
    trustworthy to begin with).
    """
    if divisor.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if numerator.nvars != divisor.nvars:
        raise ValueError("variable count mismatch")
    lt = max(divisor.terms, key=_grlex_key)
    lc = divisor.terms[lt]
    work = dict(numerator.terms)
    quotient: Dict[Exponent, Fraction] = {}
    # Monomials are consumed in descending graded-lex order; reduction only
    # creates monomials strictly below the one consumed, so one sorted pass
    # with a heap-free re-sort is enough.
    import heapq

    def heap_key(e):
        return (-sum(e), tuple(-x for x in e), e)

    heap = [heap_key(e) for e in work]
    heapq.heapify(heap)
    seen = set(work)
    while heap:
        e = heapq.heappop(heap)[-1]
        c = work.get(e, Fraction(0))
        if c == 0:
            continue
        del work[e]
        q = tuple(a - b for a, b in zip(e, lt))
        if any(x < 0 for x in q):
            if sum(e) <= trusted_total_degree:
                raise InexactDivisionError(
                    f"division not exact within trusted range: remainder at {e}"
                )
            continue
        factor = c / lc
        quotient[q] = quotient.get(q, Fraction(0)) + factor
        for de, dc in divisor.terms.items():
            if de == lt:
                continue
            t = tuple(a + b for a, b in zip(q, de))
            work[t] = work.get(t, Fraction(0)) - factor * dc
            if t not in seen:
                seen.add(t)
                heapq.heappush(heap, heap_key(t))
    return MultiPoly(numerator.nvars, quotient)
