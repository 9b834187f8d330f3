from fractions import Fraction

from spectral_tau import (
    CorrelatorEngine,
    MatrixPolynomial,
    correlator_n,
    correlator_pair,
    free_energy,
    hyperelliptic_combination,
)
from spectral_tau.correlators import hyperelliptic_combination_from_tables
from spectral_tau.polynomials import Poly
from spectral_tau.serialize import correlator_table_from_json, correlator_table_to_json

from conftest import hyper_coeff, random_hyperelliptic, random_matrix_polynomial


def diag_w(n=3, m=2):
    import random

    rng = random.Random(1)
    lead = rng.sample(range(-5, 6), n)
    mats = [[[Fraction(lead[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]]
    for _ in range(m):
        mats.append([[Fraction(rng.randint(-3, 3)) if i == j else Fraction(0)
                      for j in range(n)] for i in range(n)])
    return MatrixPolynomial.from_power_matrices(n, m, mats)


class TestPairTable:
    def test_diagonal_vanishes(self):
        w = diag_w()
        t = correlator_pair(w, 1, 2, 2)
        assert all(v == 0 for v in t.entries.values())
        t11 = correlator_pair(w, 1, 1, 1)
        assert all(v == 0 for v in t11.entries.values())

    def test_worked_pair_value(self, worked_instance):
        w, *_ = worked_instance
        t = correlator_pair(w, 1, 2, 0)
        assert t.value(((1, 0), (2, 0))) == Fraction(1, 2)

    def test_three_sheet_leading(self):
        b0 = [[0, 0, 0], [0, 1, 0], [0, 0, 3]]
        b1 = [[0, 2, 0], [5, 0, 0], [0, 0, 0]]
        w = MatrixPolynomial.from_power_matrices(3, 1, [b0, b1])
        t = correlator_pair(w, 1, 2, 0)
        assert t.value(((1, 0), (2, 0))) == 10

    def test_pair_symmetry(self):
        w = random_matrix_polynomial(7, 3, 2)
        eng = CorrelatorEngine(w)
        t12 = correlator_pair(w, 1, 2, 1, eng)
        t21 = correlator_pair(w, 2, 1, 1, eng)
        for k1 in range(2):
            for k2 in range(2):
                assert t12.value(((1, k1), (2, k2))) == t21.value(((2, k2), (1, k1)))


class TestNPoint:
    def test_diagonal_vanishes(self):
        w = diag_w()
        t = correlator_n(w, (1, 2, 3), 0)
        assert all(v == 0 for v in t.entries.values())

    def test_three_point_formula_random(self):
        for seed in range(3):
            w = random_matrix_polynomial(seed + 40, 3, 1)
            eng = CorrelatorEngine(w)
            b0 = w.leading_diagonal()
            b1 = w.coefficient_of_power(0)
            got = correlator_n(w, (1, 2, 3), 0, eng).value(((1, 0), (2, 0), (3, 0)))
            num = b1[0][1] * b1[1][2] * b1[2][0] - b1[0][2] * b1[2][1] * b1[1][0]
            den = (b0[0] - b0[1]) * (b0[1] - b0[2]) * (b0[2] - b0[0])
            assert got == num / den

    def test_slot_sums_vanish(self):
        w = random_matrix_polynomial(3, 3, 1)
        eng = CorrelatorEngine(w)
        n = w.n
        for b in range(1, n + 1):
            total = sum(
                correlator_pair(w, a, b, 1, eng).value(((a, 0), (b, 1)))
                for a in range(1, n + 1)
            )
            assert total == 0
        for b in range(1, n + 1):
            total = sum(
                correlator_n(w, (a, b, b), 0, eng).value(((a, 0), (b, 0), (b, 0)))
                for a in range(1, n + 1)
            )
            assert total == 0

    def test_permutation_symmetry(self):
        w = random_matrix_polynomial(9, 3, 1)
        eng = CorrelatorEngine(w)
        t1 = correlator_n(w, (1, 2, 3), 1, eng)
        t2 = correlator_n(w, (3, 1, 2), 1, eng)
        for k1 in range(2):
            for k2 in range(2):
                for k3 in range(2):
                    assert t1.value(((1, k1), (2, k2), (3, k3))) == t2.value(
                        ((3, k3), (1, k1), (2, k2))
                    )

    def test_conjugation_invariance(self):
        w = random_matrix_polynomial(13, 3, 1)
        w2 = w.conjugate_diagonal([Fraction(3), Fraction(-1, 2), Fraction(7, 3)])
        t1 = correlator_n(w, (1, 1, 2), 0)
        t2 = correlator_n(w2, (1, 1, 2), 0)
        assert t1.entries == t2.entries

    def test_stability_under_higher_internal_order(self):
        # recompute with a padded kmax and compare the shared box
        w = random_matrix_polynomial(17, 2, 2)
        eng = CorrelatorEngine(w)
        t1 = correlator_n(w, (1, 2, 2), 1, eng)
        t2 = correlator_n(w, (1, 2, 2), 2, eng)
        for key, v in t1.entries.items():
            assert t2.entries[key] == v


class TestHyperellipticCombination:
    def test_matches_per_sheet_sum(self, worked_instance):
        w, *_ = worked_instance
        eng = CorrelatorEngine(w)
        fast = hyperelliptic_combination(w, 3, 1, eng)
        slow = hyperelliptic_combination_from_tables(w, 3, 1, eng)
        assert fast == slow
        fast2 = hyperelliptic_combination(w, 2, 1, eng)
        slow2 = hyperelliptic_combination_from_tables(w, 2, 1, eng)
        assert fast2 == slow2

    def test_worked_golden_values(self, worked_instance):
        w, *_ = worked_instance
        eng = CorrelatorEngine(w)
        c2 = hyperelliptic_combination(w, 2, 1, eng)
        assert c2[(0, 0)] == -2
        assert c2[(0, 1)] == -2
        assert c2[(1, 1)] == 2
        c3 = hyperelliptic_combination(w, 3, 1, eng)
        assert c3[(0, 0, 0)] == -4
        assert c3[(0, 0, 1)] == 0
        c4 = hyperelliptic_combination(w, 4, 0, eng)
        assert c4[(0, 0, 0, 0)] == 0

    def test_golden_formulas_random_g2(self):
        w, a, b, c = random_hyperelliptic(101, 2)
        eng = CorrelatorEngine(w)
        g = 2
        a1, a2, a3 = (hyper_coeff(a, g, k) for k in (1, 2, 3))
        b1, b2, b3 = (hyper_coeff(b, g, k) for k in (1, 2, 3))
        c1, c2, c3 = (hyper_coeff(c, g, k) for k in (1, 2, 3))
        comb2 = hyperelliptic_combination(w, 2, 1, eng)
        assert comb2[(0, 0)] == -b1 * c1
        assert comb2[(0, 1)] == 2 * a1 * b1 * c1 - b2 * c1 - b1 * c2
        f11 = Fraction(1, 2) * (
            -8 * a1 ** 2 * b1 * c1 + 4 * a2 * b1 * c1 + 6 * a1 * b2 * c1
            - 2 * b3 * c1 + b1 ** 2 * c1 ** 2 + 6 * a1 * b1 * c2 - 4 * b2 * c2 - 2 * b1 * c3
        )
        assert comb2[(1, 1)] == f11


class TestFreeEnergy:
    def test_diagonal_zero(self):
        fe = free_energy(diag_w(), 3, 1)
        assert not fe.coefficients

    def test_coefficient_unwinding(self, worked_instance):
        w, *_ = worked_instance
        eng = CorrelatorEngine(w)
        fe = free_energy(w, 2, 1, eng)
        pair = correlator_pair(w, 1, 2, 1, eng)
        assert fe.coefficient(((1, 0), (2, 1))) == pair.value(((1, 0), (2, 1)))
        diag = correlator_pair(w, 1, 1, 0, eng)
        assert fe.coefficient(((1, 0), (1, 0))) == diag.value(((1, 0), (1, 0))) / 2


class TestSerialization:
    def test_table_round_trip(self, worked_instance):
        w, *_ = worked_instance
        t = correlator_pair(w, 1, 2, 1)
        data = correlator_table_to_json(t)
        back = correlator_table_from_json(data)
        assert back.entries == dict(t.entries)
        assert back.trusted_order == t.trusted_order
        for item in data["entries"]:
            assert isinstance(item["value"], str)
