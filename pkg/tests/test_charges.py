"""
Tests for central charges, phases and kernel tables
"""

import os
import random
import sys
import unittest
from fractions import Fraction

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from ellk3_stab.charges import (
    ChargeSpec,
    Family,
    LimitPath,
    PhaseKind,
    PhaseValue,
    ScaleNote,
    compare_phase,
    compare_phase_values,
    eval_charge,
    heart_necessary,
    in_kernel,
    kernel_basis,
    kernel_sum_slope,
    limit_phase,
    phase,
    slope,
    solve_special_kernel,
)
from ellk3_stab.errors import (HypothesisViolated, KernelWithoutTable, KThreeOnly, NotAmple,
                               NotWeakFamily, UnknownLimit)
from ellk3_stab.lattice import K3, ChernVector, DivisorClass, OmegaClass, SurfaceParams, chern_named, shift

H = DivisorClass(1, 3)
O_X = ChernVector(1, 0, 0, 0)
O_F = ChernVector(0, 0, 1, 0)
O_PT = ChernVector(0, 0, 0, 1)


def random_chern(rng):
    return ChernVector(*(Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(4)))


class TestChargeFamilies(unittest.TestCase):
    """Test evaluation of each charge family"""

    def test_standard_values(self):
        """Test Z_(H,0) on O_X, O_x and O_f for H = Θ + 3f"""
        spec = ChargeSpec.standard(H)
        self.assertEqual(eval_charge(spec, O_X).re, 2)
        self.assertEqual(eval_charge(spec, O_X).im, 0)
        self.assertEqual(eval_charge(spec, O_PT).re, -1)
        self.assertEqual(eval_charge(spec, O_F).im, 1)

    def test_todd_differs_by_rank(self):
        """Test Z^td - Z = -ch₀ on the real part and 0 on the imaginary part"""
        rng = random.Random(7)
        B = DivisorClass(Fraction(1, 2), -3)
        standard, todd = ChargeSpec.standard(H, B), ChargeSpec.todd(H, B)
        for _ in range(50):
            v = random_chern(rng)
            z, z_td = eval_charge(standard, v), eval_charge(todd, v)
            self.assertEqual(z_td.re - z.re, -v.n)
            self.assertEqual(z_td.im, z.im)

    def test_additive(self):
        """Test Z(v + w) = Z(v) + Z(w) for every family"""
        rng = random.Random(11)
        specs = [
            ChargeSpec.standard(H, DivisorClass(1, -2)),
            ChargeSpec.vd(Fraction(3, 2), 2),
            ChargeSpec.ray(DivisorClass(1, 4), DivisorClass(0, 1), Fraction(5, 2)),
            ChargeSpec.weak_h(),
            ChargeSpec.weak_vh(1),
            ChargeSpec.weak_d(Fraction(1, 3)),
            ChargeSpec.weak_special(1),
        ]
        for spec in specs:
            for _ in range(20):
                v, w = random_chern(rng), random_chern(rng)
                self.assertEqual(eval_charge(spec, v + w), eval_charge(spec, v) + eval_charge(spec, w))

    def test_vd_fixtures(self):
        """Test Z_(V,D)(O_X[1]) = -V and Z_(V,D)(O_Θ(-1)) = iD"""
        spec = ChargeSpec.vd(Fraction(1, 2), 3)
        z = eval_charge(spec, shift(O_X, 1))
        self.assertEqual((z.re, z.im), (Fraction(-1, 2), 0))
        z = eval_charge(spec, chern_named("O_Theta", m=-1))
        self.assertEqual((z.re, z.im), (0, 3))

    def test_special_fixture(self):
        """Test Z'₀(O_Θ(-2)) = -D_α - 3/2 + i/2"""
        z = eval_charge(ChargeSpec.weak_special(2), chern_named("O_Theta", m=-2))
        self.assertEqual((z.re, z.im), (Fraction(-7, 2), Fraction(1, 2)))

    def test_irrational_scale(self):
        """Test that an irrational R is factored out of the imaginary part"""
        spec = ChargeSpec.standard(OmegaClass.from_dv(1, 1))
        z = eval_charge(spec, O_F)
        self.assertEqual(z.im, 1)
        self.assertEqual(z.im_scale, Fraction(1, 2))
        self.assertEqual(z.scale_note, ScaleNote.SQRT_FACTORED)
        self.assertAlmostEqual(z.im_f, 0.5 ** 0.5)
        self.assertEqual(eval_charge(spec, O_X).re, 1)
        self.assertEqual(eval_charge(ChargeSpec.standard(H), O_F).scale_note, ScaleNote.EXACT)

    def test_hypotheses(self):
        """Test rejection of non-ample ω and non-positive parameters"""
        with self.assertRaises(NotAmple):
            ChargeSpec.standard(DivisorClass(1, 2))
        with self.assertRaises(NotAmple):
            ChargeSpec.ray(DivisorClass(1, 1), DivisorClass.zero(), 1)
        with self.assertRaises(HypothesisViolated):
            ChargeSpec.vd(0, 1)
        with self.assertRaises(HypothesisViolated):
            ChargeSpec.ray(H, DivisorClass.zero(), 0)
        with self.assertRaises(HypothesisViolated):
            ChargeSpec.weak_d(-1)
        with self.assertRaises(KThreeOnly):
            ChargeSpec.weak_special(0, SurfaceParams(3))


class TestPhases(unittest.TestCase):
    """Test exact phase computation and comparison"""

    def setUp(self):
        self.spec = ChargeSpec.standard(H)

    def test_real_axis(self):
        """Test φ(O_x) = 1 and φ(O_X) = 0"""
        self.assertEqual(phase(self.spec, O_PT).to_float(), 1.0)
        self.assertEqual(phase(self.spec, O_X).to_float(), 0.0)
        self.assertEqual(phase(self.spec, O_PT).kind, PhaseKind.INTERIOR)

    def test_half(self):
        """Test φ(O_f) = 1/2"""
        self.assertAlmostEqual(phase(self.spec, O_F).to_float(), 0.5)
        self.assertEqual(slope(self.spec, O_F), 0)
        self.assertIsNone(slope(self.spec, O_X))

    def test_compare(self):
        """Test exact phase comparison"""
        self.assertEqual(compare_phase(self.spec, O_F, O_PT), -1)
        self.assertEqual(compare_phase(self.spec, O_PT, O_F), 1)
        self.assertEqual(compare_phase(self.spec, O_F, O_F * 3), 0)
        self.assertEqual(compare_phase(self.spec, shift(O_X, 1), O_PT), 0)

    def test_heart_necessary(self):
        """Test the numerical heart condition"""
        self.assertTrue(heart_necessary(self.spec, O_PT))
        self.assertTrue(heart_necessary(self.spec, shift(O_X, 1)))
        self.assertFalse(heart_necessary(self.spec, O_X))

    def test_kernel_without_table(self):
        """Test that Z(v) = 0 for a non-weak family has no phase"""
        with self.assertRaises(KernelWithoutTable):
            phase(self.spec, ChernVector.zero())

    def test_untabulated_phase_is_rejected(self):
        """Test that a phase outside the exact tables cannot be compared"""
        odd = PhaseValue(PhaseKind.KERNEL_TABULATED, 0, None, phi=Fraction(1, 3))
        with self.assertRaises(KernelWithoutTable):
            compare_phase_values(odd, phase(self.spec, O_F))

    def test_tabulated_phase_ties_after_interior(self):
        """Test that φ = 1/2 from a table ties with O_f and sorts after it"""
        tabulated = PhaseValue(PhaseKind.KERNEL_TABULATED, 0, Fraction(0), phi=Fraction(1, 2))
        interior = phase(self.spec, O_F)
        self.assertEqual(compare_phase_values(tabulated, interior), 1)
        self.assertEqual(compare_phase_values(interior, tabulated), -1)
        shifted = PhaseValue(PhaseKind.KERNEL_TABULATED, 1, None, phi=Fraction(2))
        self.assertEqual(compare_phase_values(shifted, phase(self.spec, O_PT)), 1)


class TestPhaseOrder(unittest.TestCase):
    """Test that phase comparison is a total preorder on random classes"""

    SEED = 20240611

    def setUp(self):
        rng = random.Random(self.SEED)
        specs = [
            ChargeSpec.standard(H),
            ChargeSpec.standard(OmegaClass(H, 2)),
            ChargeSpec.vd(Fraction(1, 2), 3),
            ChargeSpec.ray(DivisorClass(1, 4), DivisorClass(0, 1), Fraction(3, 2)),
            ChargeSpec.weak_h(b=1),
            ChargeSpec.weak_special(0, b=Fraction(1, 2)),
        ]
        self.phases = []
        for spec in specs:
            for _ in range(12):
                v = random_chern(rng)
                if not in_kernel(spec, v):
                    self.phases.append(phase(spec, v))
        for spec in (ChargeSpec.weak_h(b=1), ChargeSpec.weak_special(0, b=Fraction(1, 2))):
            g0, g1 = (entry.vector for entry in kernel_basis(spec))
            for m0, m1 in ((1, 0), (0, 2), (1, 1), (2, 3), (-1, 0), (0, -1), (-2, -1)):
                self.phases.append(phase(spec, g0 * m0 + g1 * m1))
        self.assertTrue(any(p.kind is PhaseKind.KERNEL_TABULATED for p in self.phases))
        self.rng = rng

    def test_reflexive_and_antisymmetric(self):
        """Test compare(a, a) = 0 and compare(a, b) = -compare(b, a)"""
        for a in self.phases:
            self.assertEqual(compare_phase_values(a, a), 0)
            for b in self.phases:
                self.assertEqual(compare_phase_values(a, b), -compare_phase_values(b, a))

    def test_transitive(self):
        """Test a ≤ b ≤ c ⇒ a ≤ c on random triples"""
        for _ in range(4000):
            a, b, c = (self.rng.choice(self.phases) for _ in range(3))
            if compare_phase_values(a, b) <= 0 and compare_phase_values(b, c) <= 0:
                self.assertLessEqual(compare_phase_values(a, c), 0, (a, b, c))

    def test_agrees_with_float_phase(self):
        """Test that the exact order never contradicts the float phases"""
        for a in self.phases:
            for b in self.phases:
                if compare_phase_values(a, b) < 0:
                    self.assertLessEqual(a.to_float(), b.to_float() + 1e-9, (a, b))

    def test_interior_ties_only_on_equal_slope(self):
        """Test that interior values of one scale tie exactly when (band, ρ) agree"""
        interior = [p for p in self.phases if p.kind is PhaseKind.INTERIOR]
        for a in interior:
            for b in interior:
                if a.scale == b.scale:
                    same = (a.band, a.rho) == (b.band, b.rho)
                    self.assertEqual(compare_phase_values(a, b) == 0, same, (a, b))

    def test_kernel_sorts_after_equal_interior(self):
        """Test the kernel-last tie rule against an interior class of equal phase"""
        weak = ChargeSpec.weak_h(b=1)
        o_theta = ChernVector(0, 1, 0, 0)
        kernel = phase(weak, o_theta)
        interior = phase(ChargeSpec.standard(H), O_F)
        self.assertEqual(kernel.phi, Fraction(1, 2))
        self.assertEqual(compare_phase_values(kernel, interior), 1)
        self.assertEqual(compare_phase_values(interior, kernel), -1)


class TestKernels(unittest.TestCase):
    """Test weak-charge kernel tables"""

    def test_tables_are_kernels(self):
        """Test that every tabulated class lies in the kernel with its phase"""
        specs = [ChargeSpec.weak_h(), ChargeSpec.weak_vh(2), ChargeSpec.weak_d(3)]
        specs += [ChargeSpec.weak_special(d_alpha) for d_alpha in range(3)]
        for spec in specs:
            for entry in kernel_basis(spec):
                self.assertTrue(in_kernel(spec, entry.vector), entry.name)
                self.assertEqual(phase(spec, entry.vector).phi, entry.phi)

    def test_special_phases(self):
        """Test φ(L₀[1]) = 3/4 and φ(L₁) = 1/4"""
        spec = ChargeSpec.weak_special(0)
        l0 = chern_named("L0", d_alpha=0)
        l1 = chern_named("L1", d_alpha=0)
        self.assertEqual(phase(spec, shift(l0, 1)).phi, Fraction(3, 4))
        self.assertEqual(phase(spec, l1).phi, Fraction(1, 4))
        self.assertEqual(phase(spec, l1).rho, -1)

    def test_mixed_sum_needs_parameter(self):
        """Test that a mixed kernel sum needs kernel_phase_param"""
        mixed = shift(O_X, 1) + ChernVector(0, 1, 0, 0)
        with self.assertRaises(KernelWithoutTable):
            phase(ChargeSpec.weak_h(), mixed)
        ordered = phase(ChargeSpec.weak_h(b=1), mixed)
        self.assertEqual(ordered.rho, 1)
        self.assertAlmostEqual(ordered.to_float(), 0.75)

    def test_kernel_sum_slope(self):
        """Test the direct-sum slope formulas"""
        self.assertEqual(kernel_sum_slope(Family.WEAK_H, Fraction(2), Fraction(1), Fraction(3)), Fraction(3, 2))
        self.assertIsNone(kernel_sum_slope(Family.WEAK_H, Fraction(0), Fraction(1), Fraction(3)))
        self.assertEqual(kernel_sum_slope(Family.WEAK_SPECIAL, Fraction(1), Fraction(1), Fraction(1)), 0)
        with self.assertRaises(NotWeakFamily):
            kernel_sum_slope(Family.WEAK_VH, Fraction(1), Fraction(1), Fraction(1))

    def test_non_weak_family(self):
        """Test that kernel_basis rejects non-weak families"""
        with self.assertRaises(NotWeakFamily):
            kernel_basis(ChargeSpec.standard(H))

    def test_solve_special_kernel(self):
        """Test that the brute-force solver finds exactly L₀ and L₁"""
        for d_alpha in (0, 1, 2):
            solutions = solve_special_kernel(d_alpha, bound=12)
            self.assertEqual(sorted({s.fiber_degree for s in solutions}), [0, 1])
            expected = {chern_named("L0", d_alpha=d_alpha).ch1, chern_named("L1", d_alpha=d_alpha).ch1}
            self.assertEqual({s.ch1 for s in solutions}, expected)
            for s in solutions:
                self.assertEqual(s.theta_degree + 3 * s.fiber_degree, -d_alpha - 1)


class TestLimitPhases(unittest.TestCase):
    """Test limit phases of kernel classes"""

    def test_origin_limits(self):
        """Test the limits 3/4, 1/4 and 5/4 at the origin"""
        l0 = chern_named("L0", d_alpha=1)
        l1 = chern_named("L1", d_alpha=1)
        self.assertEqual(limit_phase(LimitPath.ORIGIN, shift(l0, 1), 1), Fraction(3, 4))
        self.assertEqual(limit_phase(LimitPath.ORIGIN, l1, 1), Fraction(1, 4))
        self.assertEqual(limit_phase(LimitPath.ORIGIN, shift(l1, 1), 1), Fraction(5, 4))

    def test_axis_limits(self):
        """Test the limits of O_X[1] and O_Θ(-1) along both axes"""
        o_theta = ChernVector(0, 1, 0, 0)
        for path in (LimitPath.D_TO_ZERO, LimitPath.V_TO_ZERO):
            self.assertEqual(limit_phase(path, shift(O_X, 1)), 1)
        self.assertEqual(limit_phase(LimitPath.V_TO_ZERO, o_theta), Fraction(1, 2))

    def test_unknown_limits(self):
        """Test that unsupported classes and paths raise UnknownLimit"""
        with self.assertRaises(UnknownLimit):
            limit_phase(LimitPath.ORIGIN, O_PT)
        with self.assertRaises(UnknownLimit):
            limit_phase(LimitPath.D_TO_ZERO, chern_named("L1", d_alpha=0))


if __name__ == '__main__':
    # Change to project root directory
    os.chdir(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    unittest.main(verbosity=2)
