"""Matrix polynomials and their spectral curves.

The root object is W(z) = B0*z^m + ... + Bm with a diagonal leading
coefficient whose entries are pairwise distinct.  The spectral curve is
det(w*1 - W(z)) = w^n + a_1(z) w^{n-1} + ... + a_n(z).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .polynomials import Poly, is_squarefree, resultant_w

PolyMatrix = tuple  # n x n tuple of tuples of Poly


@dataclass(frozen=True)
class Diagnostic:
    name: str
    passed: bool
    fatal: bool
    detail: str = ""


class InvalidMatrixPolynomial(ValueError):
    pass


@dataclass(frozen=True)
class MatrixPolynomial:
    """W(z) as an n x n matrix of Poly entries, degree at most m.

    ``matrix[i][j]`` is the full polynomial entry; ``coefficient_of_power(k)``
    recovers the matrix coefficient of z^k (so the paper-style B^i is the
    coefficient of z^(m-i)).
    """

    n: int
    m: int
    matrix: tuple

    @staticmethod
    def from_entries(entries: Sequence[Sequence[Poly]], m: int | None = None) -> "MatrixPolynomial":
        n = len(entries)
        if n < 2 or any(len(row) != n for row in entries):
            raise InvalidMatrixPolynomial("matrix must be square with n >= 2")
        mat = tuple(tuple(p if isinstance(p, Poly) else Poly.constant(p) for p in row) for row in entries)
        deg = max((p.degree() for row in mat for p in row), default=-1)
        if m is None:
            m = deg
        if m < 1:
            raise InvalidMatrixPolynomial("degree m must be at least 1")
        if deg > m:
            raise InvalidMatrixPolynomial(f"entry degree {deg} exceeds declared m={m}")
        return MatrixPolynomial(n, m, mat)

    @staticmethod
    def from_power_matrices(n: int, m: int, descending: Sequence) -> "MatrixPolynomial":
        """Build from matrices [B0, B1, ..., Bm] where B0 multiplies z^m."""
        if len(descending) != m + 1:
            raise InvalidMatrixPolynomial(f"need {m + 1} matrices, got {len(descending)}")
        entries = []
        for i in range(n):
            row = []
            for j in range(n):
                coeffs = [Fraction(descending[m - k][i][j]) for k in range(m + 1)]
                row.append(Poly(coeffs))
            entries.append(row)
        return MatrixPolynomial.from_entries(entries, m=m)

    def coefficient_of_power(self, k: int) -> tuple:
        return tuple(tuple(self.matrix[i][j].coeff(k) for j in range(self.n)) for i in range(self.n))

    def leading_diagonal(self) -> tuple[Fraction, ...]:
        lead = self.coefficient_of_power(self.m)
        return tuple(lead[i][i] for i in range(self.n))

    def leading_is_diagonal(self) -> bool:
        lead = self.coefficient_of_power(self.m)
        return all(lead[i][j] == 0 for i in range(self.n) for j in range(self.n) if i != j)

    def trace(self) -> Poly:
        t = Poly.zero()
        for i in range(self.n):
            t = t + self.matrix[i][i]
        return t

    def conjugate_diagonal(self, d: Sequence[Fraction]) -> "MatrixPolynomial":
        """D^-1 W D for diagonal D = diag(d)."""
        if len(d) != self.n or any(Fraction(x) == 0 for x in d):
            raise InvalidMatrixPolynomial("diagonal conjugation needs n nonzero entries")
        d = [Fraction(x) for x in d]
        entries = [
            [self.matrix[i][j] * (d[j] / d[i]) for j in range(self.n)]
            for i in range(self.n)
        ]
        return MatrixPolynomial.from_entries(entries, m=self.m)

    def power_matrices(self, kmax: int) -> list:
        """[W^0, W^1, ..., W^kmax] as Poly matrices."""
        n = self.n
        ident = tuple(
            tuple(Poly.one() if i == j else Poly.zero() for j in range(n)) for i in range(n)
        )
        out = [ident]
        for _ in range(kmax):
            prev = out[-1]
            nxt = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = Poly.zero()
                    for k in range(n):
                        acc = acc + prev[i][k] * self.matrix[k][j]
                    row.append(acc)
                nxt.append(tuple(row))
            out.append(tuple(nxt))
        return out


@dataclass(frozen=True)
class SpectralCurveData:
    n: int
    m: int
    char_coeffs: tuple  # (a_1, ..., a_n) as Poly
    genus: int
    diagnostics: tuple = field(default_factory=tuple)

    def a(self, i: int) -> Poly:
        """a_i(z) for i = 1..n; a_0 is the constant 1."""
        if i == 0:
            return Poly.one()
        return self.char_coeffs[i - 1]

    def r_at(self, z: complex, w: complex) -> complex:
        """Evaluate R(z, w) = w^n + a_1(z) w^{n-1} + ... + a_n(z) numerically."""
        acc = complex(1)
        for i in range(1, self.n + 1):
            acc = acc * w + self.a(i)(z)
        return acc

    def fatal_diagnostics(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.fatal and not d.passed]


def genus(m: int, n: int) -> int:
    """Genus of the spectral curve for leading degree m and size n."""
    if n < 2 or m < 1:
        raise ValueError("need n >= 2 and m >= 1")
    num = (n - 1) * (m * n - 2)
    assert num % 2 == 0, "genus formula must produce an integer"
    return num // 2


def characteristic_data(w: MatrixPolynomial, with_diagnostics: bool = True) -> SpectralCurveData:
    """Exact characteristic polynomial of W(z) by the trace recursion.

    Builds det(w*1 - W(z)) = w^n + a_1 w^{n-1} + ... + a_n using the
    Faddeev-LeVerrier iteration, which stays in Q[z] throughout.
    """
    n = w.n
    ident = [[Poly.one() if i == j else Poly.zero() for j in range(n)] for i in range(n)]
    mat = w.matrix

    def mat_mul(a, b):
        return [
            [sum((a[i][k] * b[k][j] for k in range(n)), Poly.zero()) for j in range(n)]
            for i in range(n)
        ]

    coeffs = []
    nk = ident
    for k in range(1, n + 1):
        wn = mat_mul(mat, nk)
        tr = sum((wn[i][i] for i in range(n)), Poly.zero())
        ak = tr * Fraction(-1, k)
        coeffs.append(ak)
        if k < n:
            nk = [
                [wn[i][j] + (ak if i == j else Poly.zero()) for j in range(n)]
                for i in range(n)
            ]
    data = SpectralCurveData(
        n=n, m=w.m, char_coeffs=tuple(coeffs), genus=genus(w.m, n), diagnostics=()
    )
    if with_diagnostics:
        data = SpectralCurveData(
            n=n, m=w.m, char_coeffs=tuple(coeffs), genus=data.genus,
            diagnostics=tuple(validate(w, data)),
        )
    return data


def validate(w: MatrixPolynomial, curve: SpectralCurveData | None = None) -> list[Diagnostic]:
    """Structural checks on W(z) and its curve.

    Distinctness of the leading diagonal is fatal (branch expansions at
    infinity collide without it).  Squarefreeness of the w-discriminant is a
    sufficient smoothness condition only, so its failure is a warning.
    Irreducibility is not checked; reducible inputs surface later as failed
    consistency identities.
    """
    diags: list[Diagnostic] = []
    lead_diag_ok = w.leading_is_diagonal()
    diags.append(
        Diagnostic(
            "leading_coefficient_diagonal", lead_diag_ok, fatal=True,
            detail="" if lead_diag_ok else "leading coefficient must be diagonal",
        )
    )
    entries = w.leading_diagonal()
    distinct = len(set(entries)) == len(entries)
    diags.append(
        Diagnostic(
            "leading_entries_distinct", distinct, fatal=True,
            detail="" if distinct else f"repeated leading entries {entries}",
        )
    )
    g_ok = genus(w.m, w.n) > 0
    diags.append(
        Diagnostic(
            "genus_positive", g_ok, fatal=False,
            detail="" if g_ok else f"genus {genus(w.m, w.n)} <= 0; theta machinery does not apply",
        )
    )
    if curve is None and distinct and lead_diag_ok:
        curve = characteristic_data(w, with_diagnostics=False)
    if curve is not None:
        deg_ok = all(curve.a(i).degree() <= w.m * i for i in range(1, w.n + 1))
        diags.append(
            Diagnostic(
                "char_coeff_degrees", deg_ok, fatal=True,
                detail="" if deg_ok else "deg a_i exceeds m*i",
            )
        )
        if distinct:
            # disc_w R as resultant of R and dR/dw, both polynomials in w over Q[z]
            pw = [Poly.one()] + [curve.a(i) for i in range(1, w.n + 1)]
            qw = [Fraction(w.n - i) * curve.a(i) for i in range(0, w.n)]
            disc = resultant_w(pw, qw)
            sf = (not disc.is_zero()) and is_squarefree(disc)
            diags.append(
                Diagnostic(
                    "smoothness_squarefree_discriminant", sf, fatal=False,
                    detail=""
                    if sf
                    else "disc_w R not squarefree; smoothness inconclusive (curve may be singular or reducible)",
                )
            )
    return diags
