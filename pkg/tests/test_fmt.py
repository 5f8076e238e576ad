"""
Tests for the lattice-level Fourier-Mukai transforms
"""

import os
import sys
import unittest
from fractions import Fraction

import sympy

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ellk3_stab.errors import KThreeOnly
from ellk3_stab.fmt import (
    MAP_BUILDERS,
    LatticeMap,
    euler_invariance_sign,
    named_object_checks,
    phi,
    phi_hat,
    phi_hat_map,
    phi_map,
    psi_map,
    psi_prime_map,
    shift_map,
    twist_map,
    upsilon_map,
    upsilon_prime_map,
)
from ellk3_stab.lattice import K3, ChernVector, DivisorClass, SurfaceParams, line_bundle


class TestPhi(unittest.TestCase):
    """Test the transform Φ on named classes"""

    def test_structure_sheaf(self):
        """Test Φ(O_X) = (0, -Θ, 1)"""
        self.assertEqual(phi(K3, ChernVector(1, 0, 0, 0)), ChernVector(0, -1, 0, 1))

    def test_negative_section(self):
        """Test Φ(O(-Θ)) = (-1, -Θ, 1)"""
        v = line_bundle(-DivisorClass.theta())
        self.assertEqual(phi(K3, v), ChernVector(-1, -1, 0, 1))

    def test_point_and_fiber(self):
        """Test Φ(O_x) = O_f and Φ̂(O_x) = O_f"""
        point = ChernVector(0, 0, 0, 1)
        fiber = ChernVector(0, 0, 1, 0)
        self.assertEqual(phi(K3, point), fiber)
        self.assertEqual(phi_hat(K3, point), fiber)

    def test_rank_and_fiber_degree_swap(self):
        """Test ch₀(Φv) = f·ch₁(v) and f·ch₁(Φv) = -ch₀(v)"""
        for surface in (K3, SurfaceParams(1), SurfaceParams(3)):
            for v in (ChernVector(2, -1, 3, Fraction(1, 2)), ChernVector(-3, 4, 0, 7)):
                image = phi(surface, v)
                self.assertEqual(image.n, v.a)
                self.assertEqual(image.a, -v.n)


class TestComposites(unittest.TestCase):
    """Test composite maps and their inverses"""

    def test_quasi_inverse(self):
        """Test Φ̂Φ = ΦΦ̂ = -id for several e"""
        minus_id = -LatticeMap.identity()
        for surface in (K3, SurfaceParams(1), SurfaceParams(4)):
            self.assertEqual(phi_hat_map(surface) @ phi_map(surface), minus_id)
            self.assertEqual(phi_map(surface) @ phi_hat_map(surface), minus_id)

    def test_psi_and_upsilon_inverses(self):
        """Test ΨΨ' = Ψ'Ψ = -id and ΥΥ' = -id"""
        minus_id = -LatticeMap.identity()
        for d_alpha in (-2, 0, Fraction(3, 2)):
            self.assertEqual(psi_map(d_alpha) @ psi_prime_map(d_alpha), minus_id)
            self.assertEqual(psi_prime_map(d_alpha) @ psi_map(d_alpha), minus_id)
        self.assertEqual(upsilon_map() @ upsilon_prime_map(), minus_id)

    def test_twist_inverse(self):
        """Test ⊗O(M) ∘ ⊗O(-M) = id"""
        M = DivisorClass(2, -3)
        self.assertEqual(twist_map(M) @ twist_map(-M), LatticeMap.identity())
        self.assertEqual(twist_map(M).determinant(), 1)

    def test_shift(self):
        """Test that odd shifts negate and even shifts fix"""
        v = ChernVector(1, 2, 3, 4)
        self.assertEqual(shift_map(1)(v), -v)
        self.assertEqual(shift_map(2)(v), v)

    def test_singular_matrix_rejected(self):
        """Test that LatticeMap rejects singular and non-square matrices"""
        with self.assertRaises(ValueError):
            LatticeMap("zero", sympy.zeros(4, 4))
        with self.assertRaises(ValueError):
            LatticeMap("small", sympy.eye(3))

    def test_map_builders(self):
        """Test that every registered map builds for K3"""
        self.assertEqual(set(MAP_BUILDERS),
                         {"phi", "phi-hat", "psi", "psi-prime", "upsilon", "upsilon-prime"})
        for name, build in MAP_BUILDERS.items():
            self.assertIsInstance(build(K3, 0), LatticeMap, name)


class TestIdentities(unittest.TestCase):
    """Test named-object identities and pairing invariance"""

    def test_named_object_checks(self):
        """Test that every named identity holds for several D_α"""
        for d_alpha in (-3, 0, 1, 5):
            for check in named_object_checks(K3, d_alpha):
                self.assertTrue(check.passed, f"D_α={d_alpha}: {check.name} gave {check.actual}")

    def test_named_object_checks_k3_only(self):
        """Test that the identities need e = 2"""
        with self.assertRaises(KThreeOnly):
            named_object_checks(SurfaceParams(3), 0)

    def test_euler_sign(self):
        """Test that Φ preserves the Euler pairing"""
        self.assertEqual(euler_invariance_sign(K3), 1)


if __name__ == '__main__':
    # Change to project root directory
    os.chdir(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    unittest.main(verbosity=2)
