"""
Tests for the central charge equation solver
"""

import os
import sys
import unittest
from fractions import Fraction

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ellk3_stab.cce import check_g, check_h, psi_z, solve_charge_equation, solve_simple, solve_todd
from ellk3_stab.charges import special_point
from ellk3_stab.errors import DegenerateTarget, HypothesisViolated, NotAmple
from ellk3_stab.lattice import K3, DivisorClass, RdvCoords, alpha_class, divisor_of_rdv, rdv_of


class TestSolveSimple(unittest.TestCase):
    """Test the B = lf case"""

    def test_swap(self):
        """Test D' = V, V' = D and B' = (l - 1)f on K3"""
        data = solve_simple(K3, RdvCoords.from_dv(3, Fraction(1, 2)), 0)
        self.assertEqual(data.omega_prime_rdv.d, Fraction(1, 2))
        self.assertEqual(data.omega_prime_rdv.v, 3)
        self.assertEqual(data.b_prime, DivisorClass(0, -1))
        self.assertEqual(data.a_prime, 3)
        self.assertIsNone(data.b_prime_rdv)
        self.assertTrue(data.within_tolerance(1e-9))

    def test_nonzero_l(self):
        """Test that l shifts B' and leaves ω' alone"""
        data = solve_simple(K3, RdvCoords.from_dv(2, 5), Fraction(7, 3))
        self.assertEqual((data.omega_prime_rdv.d, data.omega_prime_rdv.v), (5, 2))
        self.assertEqual(data.b_prime, DivisorClass(0, Fraction(4, 3)))
        self.assertGreater(data.det_T, 0)
        self.assertLess(data.residual, 1e-9)

    def test_not_ample(self):
        """Test that D_ω <= 0 is rejected"""
        with self.assertRaises(NotAmple):
            solve_simple(K3, RdvCoords.from_dv(Fraction(-1, 2), 1), 0)


class TestSolveTodd(unittest.TestCase):
    """Test the Todd-twisted target"""

    def test_matches_closed_form(self):
        """Test solve_todd at B = -α against psi_z"""
        data = solve_todd(K3, RdvCoords.from_dv(1, 1), -alpha_class(0))
        closed = psi_z(1, 1, 0)
        self.assertEqual(data.omega_prime_rdv.d, closed.d_omega_prime)
        self.assertEqual(data.omega_prime_rdv.v, closed.v_omega_prime)
        self.assertEqual(data.b_prime, closed.b_prime())
        self.assertTrue(data.within_tolerance(1e-9))

    def test_rdv_b_field(self):
        """Test that B may be passed in RDV form"""
        b_field = DivisorClass(2, 3)
        from_divisor = solve_todd(K3, RdvCoords.from_dv(2, 3), b_field)
        from_rdv = solve_todd(K3, RdvCoords.from_dv(2, 3), rdv_of(b_field))
        self.assertEqual(from_divisor.b_prime, from_rdv.b_prime)

    def test_degenerate_target(self):
        """Test that V_ω' = 0 is reported as degenerate"""
        with self.assertRaises(DegenerateTarget):
            solve_charge_equation(K3, RdvCoords.from_dv(1, 1), DivisorClass(1, 0), todd=False)

    def test_to_json(self):
        """Test the serialized transition data"""
        data = solve_todd(K3, RdvCoords.from_dv(1, 1), -alpha_class(0))
        payload = data.to_json(tolerance=1e-9)
        self.assertEqual(payload["omega_prime_rdv"]["D"], "3")
        self.assertEqual(payload["b_prime"], ["1/2", "-3/2"])
        self.assertTrue(payload["todd"])
        self.assertTrue(payload["within_tolerance"])
        self.assertEqual(len(payload["T"]), 2)


class TestPsiZ(unittest.TestCase):
    """Test the closed form at B = -α"""

    def test_value(self):
        """Test psi_z(1, 1, 0) = (3, 1/2, 1, -5/2)"""
        self.assertEqual(tuple(psi_z(1, 1, 0)), (3, Fraction(1, 2), 1, Fraction(-5, 2)))

    def test_special_point(self):
        """Test that the origin maps to ω'₀ = ½(Θ+3f), B'₀ = ½(Θ + (-2D_α-3)f)"""
        for d_alpha in range(4):
            target = psi_z(0, 0, d_alpha)
            omega0, b0 = special_point(d_alpha)
            self.assertEqual(divisor_of_rdv(target.omega_prime_rdv()), omega0)
            self.assertEqual(target.b_prime(), b0)

    def test_negative_input(self):
        """Test that negative D_ω or V_ω is rejected"""
        with self.assertRaises(HypothesisViolated):
            psi_z(-1, 1, 0)

    def test_to_json(self):
        """Test the serialized closed form"""
        payload = psi_z(1, 1, 0).to_json()
        self.assertEqual(payload["D_omega_prime"], "3")
        self.assertEqual(payload["b_prime"], ["1/2", "-3/2"])


class TestMatrixIdentities(unittest.TestCase):
    """Test the exact g and h relations"""

    def test_g(self):
        """Test Z'₀∘Ψ = g·Z_H"""
        for d_alpha in (-1, 0, 2, Fraction(1, 2)):
            self.assertEqual(check_g(d_alpha), 0)

    def test_h(self):
        """Test Z_D∘Υ = h·Z_(V,H) with D = V"""
        for v in (Fraction(1, 3), 1, 5):
            self.assertEqual(check_h(v), 0)


if __name__ == '__main__':
    # Change to project root directory
    os.chdir(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    unittest.main(verbosity=2)
