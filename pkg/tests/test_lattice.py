"""
Tests for exact lattice arithmetic
"""

import os
import sys
import unittest
from fractions import Fraction

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ellk3_stab.errors import (HypothesisViolated, KThreeOnly, ParseError, UnsupportedName, ZeroRank,
                               ZeroThetaComponent)
from ellk3_stab.lattice import (
    K3,
    ChernVector,
    DivisorClass,
    OmegaClass,
    RdvCoords,
    SurfaceParams,
    alpha_class,
    bg_classical,
    bg_k3_strong,
    chern_named,
    divisor_of_rdv,
    euler_pairing,
    exact_sqrt,
    format_rational,
    hodge_upper,
    intersect,
    is_ample,
    line_bundle,
    mukai_pairing,
    parse_divisor,
    parse_rational,
    rdv_of,
    self_intersection,
    twist,
)

THETA = DivisorClass.theta()
FIBER = DivisorClass.fiber()


class TestRationals(unittest.TestCase):
    """Test rational parsing and formatting"""

    def test_parse_rational(self):
        """Test parsing of p and p/q strings"""
        self.assertEqual(parse_rational("3"), Fraction(3))
        self.assertEqual(parse_rational("-7/2"), Fraction(-7, 2))
        self.assertEqual(parse_rational(" 1 / 4 "), Fraction(1, 4))

    def test_parse_rational_rejects_bad_input(self):
        """Test that malformed rationals and zero denominators raise ParseError"""
        for text in ("1/0", "0.5", "abc", "", "1/2/3"):
            with self.assertRaises(ParseError):
                parse_rational(text)

    def test_format_rational(self):
        """Test bit-exact serialization"""
        self.assertEqual(format_rational(Fraction(6, 4)), "3/2")
        self.assertEqual(format_rational(Fraction(-4, 2)), "-2")

    def test_exact_sqrt(self):
        """Test rational square roots"""
        self.assertEqual(exact_sqrt(Fraction(9, 4)), Fraction(3, 2))
        self.assertIsNone(exact_sqrt(Fraction(2)))
        self.assertIsNone(exact_sqrt(Fraction(-1)))


class TestIntersection(unittest.TestCase):
    """Test the intersection form on span(Θ, f)"""

    def test_basis_products(self):
        """Test Θ² = -e, Θ·f = 1 and f² = 0"""
        surface = SurfaceParams(3)
        self.assertEqual(intersect(THETA, THETA, surface), -3)
        self.assertEqual(intersect(THETA, FIBER, surface), 1)
        self.assertEqual(intersect(FIBER, FIBER, surface), 0)

    def test_symmetric_and_bilinear(self):
        """Test symmetry and linearity of the form"""
        M = DivisorClass(2, Fraction(7, 3))
        W = DivisorClass(-1, 5)
        U = DivisorClass(Fraction(1, 2), -4)
        self.assertEqual(intersect(M, W), intersect(W, M))
        self.assertEqual(intersect(M + U, W), intersect(M, W) + intersect(U, W))
        self.assertEqual(intersect(M * 3, W), 3 * intersect(M, W))

    def test_self_intersection_formula(self):
        """Test (aΘ + bf)² = a(2b - ea)"""
        M = DivisorClass(3, 8)
        self.assertEqual(self_intersection(M), 3 * (16 - 6))

    def test_ampleness(self):
        """Test the criterion a > 0 and b > ea"""
        self.assertTrue(is_ample(DivisorClass(1, 3)))
        self.assertFalse(is_ample(DivisorClass(1, 2)))
        self.assertFalse(is_ample(DivisorClass(-1, -3)))

    def test_non_integer_e_warns(self):
        """Test that a non-integer e is accepted with a warning"""
        with self.assertWarns(UserWarning):
            surface = SurfaceParams(Fraction(5, 2))
        self.assertEqual(surface.e, Fraction(5, 2))

    def test_non_positive_e_rejected(self):
        """Test that e <= 0 is rejected"""
        with self.assertRaises(HypothesisViolated):
            SurfaceParams(0)


class TestRdv(unittest.TestCase):
    """Test RDV coordinates"""

    def test_round_trip(self):
        """Test that rdv_of and divisor_of_rdv invert each other"""
        M = DivisorClass(2, 9)
        r = rdv_of(M)
        self.assertEqual(r.r, 2)
        self.assertEqual(r.d, Fraction(9, 2) - 2)
        self.assertEqual(r.v, self_intersection(M) / 2)
        self.assertEqual(divisor_of_rdv(r), M)

    def test_volume_identity(self):
        """Test V = R²(D + e/2)"""
        for surface in (K3, SurfaceParams(1), SurfaceParams(4)):
            r = rdv_of(DivisorClass(Fraction(3, 2), 11), surface)
            self.assertEqual(r.v, r.r_squared * (r.d + surface.half_e))

    def test_fiber_multiple_has_no_rdv(self):
        """Test that multiples of f raise ZeroThetaComponent"""
        with self.assertRaises(ZeroThetaComponent):
            rdv_of(DivisorClass(0, 5))

    def test_irrational_scale(self):
        """Test that an irrational R is kept exact through OmegaClass"""
        r = RdvCoords.from_dv(1, 1)
        self.assertEqual(r.r_squared, Fraction(1, 2))
        self.assertIsNone(r.r)
        with self.assertRaises(HypothesisViolated):
            divisor_of_rdv(r)
        omega = OmegaClass.from_rdv(r)
        self.assertEqual(omega.direction, DivisorClass(1, 3))
        self.assertEqual(omega.square(), 2 * r.v)
        self.assertIsNone(omega.exact_divisor())

    def test_from_dv_rejects_sign_mismatch(self):
        """Test that V/(D + e/2) <= 0 has no RDV view"""
        with self.assertRaises(HypothesisViolated):
            RdvCoords.from_dv(-2, 1)


class TestChernVector(unittest.TestCase):
    """Test Chern-character arithmetic"""

    def test_line_bundle(self):
        """Test ch O(M) = (1, M, M²/2)"""
        M = DivisorClass(1, 3)
        self.assertEqual(line_bundle(M), ChernVector(1, 1, 3, 2))

    def test_twist_matches_line_bundle(self):
        """Test that twisting O_X by M gives ch O(M)"""
        M = DivisorClass(-1, 4)
        self.assertEqual(twist(ChernVector(1, 0, 0, 0), M), line_bundle(M))

    def test_twist_composes(self):
        """Test (v·e^M)·e^N = v·e^(M+N)"""
        v = ChernVector(2, 1, -3, Fraction(1, 2))
        M, N = DivisorClass(1, 2), DivisorClass(0, -5)
        self.assertEqual(twist(twist(v, M), N), twist(v, M + N))

    def test_json_round_trip(self):
        """Test to_json keys and from_json"""
        v = ChernVector(1, -1, Fraction(5, 2), Fraction(-1, 3))
        data = v.to_json()
        self.assertEqual(data, {"n": "1", "theta": "-1", "fiber": "5/2", "ch2": "-1/3"})
        self.assertEqual(ChernVector.from_json(data), v)

    def test_json_missing_key(self):
        """Test that incomplete JSON raises ParseError"""
        with self.assertRaises(ParseError):
            ChernVector.from_json({"n": "1"})

    def test_genuine(self):
        """Test the integrality check"""
        self.assertTrue(line_bundle(DivisorClass(1, 2)).is_genuine())
        self.assertFalse(ChernVector(1, 0, 0, Fraction(1, 2)).is_genuine())
        self.assertFalse(ChernVector(Fraction(1, 2), 0, 0, 0).is_genuine())

    def test_named_objects(self):
        """Test the Chern characters of the named objects"""
        self.assertEqual(chern_named("O_X"), ChernVector(1, 0, 0, 0))
        self.assertEqual(chern_named("O_f"), ChernVector(0, 0, 1, 0))
        self.assertEqual(chern_named("O_x"), ChernVector(0, 0, 0, 1))
        self.assertEqual(chern_named("O_Theta", m=2), ChernVector(0, 1, 0, 3))
        self.assertEqual(chern_named("L0", d_alpha=-1), ChernVector(1, 0, 0, 0))
        self.assertEqual(chern_named("L1", d_alpha=0), line_bundle(DivisorClass(1, -2)))

    def test_named_object_errors(self):
        """Test unknown names, missing parameters and K3-only objects"""
        with self.assertRaises(UnsupportedName):
            chern_named("O_Y")
        with self.assertRaises(UnsupportedName):
            chern_named("L0")
        with self.assertRaises(KThreeOnly):
            chern_named("O_Theta", SurfaceParams(3), m=0)

    def test_alpha_class(self):
        """Test α = Θ + (D_α + e)f"""
        self.assertEqual(alpha_class(-1), DivisorClass(1, 1))


class TestPairingsAndBounds(unittest.TestCase):
    """Test Mukai pairing and Bogomolov-type inequalities"""

    def test_mukai_pairing_of_point(self):
        """Test (O_X, O_x) = -1 and χ(O_X, O_X) = 2"""
        O_X = chern_named("O_X")
        self.assertEqual(mukai_pairing(O_X, chern_named("O_x")), -1)
        self.assertEqual(euler_pairing(O_X, O_X), 2)

    def test_mukai_pairing_k3_only(self):
        """Test that the Mukai pairing needs e = 2"""
        with self.assertRaises(KThreeOnly):
            mukai_pairing(ChernVector(1, 0, 0, 0), ChernVector(1, 0, 0, 0), SurfaceParams(1))

    def test_bogomolov(self):
        """Test the classical and strong forms"""
        L = line_bundle(DivisorClass(1, 3))
        self.assertTrue(bg_classical(L))
        self.assertTrue(bg_k3_strong(L))
        self.assertFalse(bg_classical(ChernVector(1, 0, 0, 1)))
        self.assertFalse(bg_k3_strong(ChernVector(2, 0, 0, 0)))
        with self.assertRaises(ZeroRank):
            bg_classical(chern_named("O_f"))

    def test_hodge_upper(self):
        """Test the Hodge index bound for c₁ = f and ω = Θ + 3f"""
        v = ChernVector(0, 0, 1, 0)
        self.assertEqual(hodge_upper(v, DivisorClass(1, 3)), Fraction(1, 4))
        self.assertLessEqual(self_intersection(v.ch1), hodge_upper(v, DivisorClass(1, 3)))

    def test_parse_divisor(self):
        """Test parsing a,b into aΘ + bf"""
        self.assertEqual(parse_divisor("1,-3/2"), DivisorClass(1, Fraction(-3, 2)))
        with self.assertRaises(ParseError):
            parse_divisor("1")


if __name__ == '__main__':
    # Change to project root directory
    os.chdir(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    unittest.main(verbosity=2)
