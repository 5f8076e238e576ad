"""
Acceptance-suite orchestrator: re-derives every identity and fixture the
toolkit is built on and reports per-check status
"""

import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, TextIO, Tuple

from .cce import check_g, check_h, psi_z, solve_simple, solve_todd
from .charges import (
    ChargeSpec,
    LimitPath,
    eval_charge,
    in_kernel,
    kernel_basis,
    limit_phase,
    limit_phase_numeric,
    phase,
    solve_special_kernel,
    special_point,
)
from .errors import DegenerateTarget
from .fmt import LatticeMap, euler_invariance_sign, named_object_checks, phi_hat_map, phi_map
from .lattice import (
    K3,
    ChernVector,
    DivisorClass,
    NamedObject,
    RdvCoords,
    alpha_class,
    chern_named,
    divisor_of_rdv,
    euler_pairing,
    line_bundle,
    shift,
)
from .profiles import Config
from .regions import (
    RegionQuery,
    classify,
    going_up_consistent,
    positivity,
    tangency_data,
    twisted_ample,
    witness_stable_not_twisted_ample,
)
from .walls import (
    SearchBounds,
    Verdict,
    WallFrame,
    circles_nested,
    rank_bound,
    slice_circle,
    stability_certificate,
    wall_quadric,
)

SUITES = ("fmt", "cce", "charges", "regions", "walls")

# Sign of χ(Φv, Φw)/χ(v, w) found by the first brute-force run on the basis
EXPECTED_EULER_SIGN = 1

CERTIFICATE_BOUNDS = SearchBounds(5, 5, 5)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    suite: str = ""

    def to_json(self) -> Dict[str, object]:
        return {"suite": self.suite, "name": self.name, "passed": self.passed,
                "detail": self.detail}


@dataclass
class VerificationReport:
    suite: str
    results: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_json(self) -> Dict[str, object]:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "total": len(self.results),
            "failed": len(self.failures),
            "checks": [r.to_json() for r in self.results],
        }


def _random_rational(rng: random.Random, lo: int = -40, hi: int = 40, max_den: int = 8) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def _random_positive(rng: random.Random, hi: int = 64, max_den: int = 8) -> Fraction:
    return Fraction(rng.randint(1, hi), rng.randint(1, max_den))


def _random_chern(rng: random.Random) -> ChernVector:
    return ChernVector(*(_random_rational(rng) for _ in range(4)))


Check = Callable[[], Tuple[bool, str]]


class VerificationRunner:
    """Runs the acceptance checks of one suite or of all suites"""

    def __init__(self, config: Optional[Config] = None,
                 progress_callback: Optional[Callable[[int, int, str, Optional[str]], None]] = None,
                 stream: Optional[TextIO] = None):
        """
        Initialize the runner

        Args:
            config: Resolved settings; tolerance, seed, fuzz_samples and
                pair_samples are read from it
            progress_callback: Optional callback for progress updates
                (step, total_steps, message, error)
            stream: Where status lines go (default: standard error)
        """
        self.config = config or Config()
        self.progress_callback = progress_callback
        self.stream = stream or sys.stderr

    def _print(self, text: str = ""):
        print(text, file=self.stream)

    # fmt

    def check_named_objects(self) -> Tuple[bool, str]:
        failed, total = [], 0
        for d_alpha in range(4):
            for check in named_object_checks(K3, d_alpha):
                total += 1
                if not check.passed:
                    failed.append(f"D_α={d_alpha}: {check.name} gave {check.actual}")
        if failed:
            return False, "; ".join(failed)
        return True, f"{total} identities for D_α ∈ {{0, 1, 2, 3}}"

    def check_quasi_inverse(self) -> Tuple[bool, str]:
        forward, backward = phi_map(K3), phi_hat_map(K3)
        minus_id = -LatticeMap.identity()
        left = backward @ forward == minus_id
        right = forward @ backward == minus_id
        return left and right, f"Φ̂Φ = -id: {left}, ΦΦ̂ = -id: {right}"

    def check_euler_pairing(self) -> Tuple[bool, str]:
        sign = euler_invariance_sign(K3)
        if sign != EXPECTED_EULER_SIGN:
            return False, f"basis sign {sign}, expected {EXPECTED_EULER_SIGN}"
        rng = random.Random(self.config.seed)
        transform = phi_map(K3)
        for _ in range(self.config.pair_samples):
            v, w = _random_chern(rng), _random_chern(rng)
            if euler_pairing(transform(v), transform(w), K3) != sign * euler_pairing(v, w, K3):
                return False, f"χ changes on ({v}, {w})"
        return True, f"sign {sign} on the basis and on {self.config.pair_samples} random pairs"

    # cce

    def check_special_point(self) -> Tuple[bool, str]:
        for d_alpha in range(6):
            target = psi_z(0, 0, d_alpha)
            omega0, b0 = special_point(d_alpha)
            omega = divisor_of_rdv(target.omega_prime_rdv(), K3)
            if omega != omega0 or target.b_prime() != b0:
                return False, f"D_α={d_alpha}: got ω' = {omega}, B' = {target.b_prime()}"
        return True, "ω'₀ = ½(Θ+3f), B'₀ = ½(Θ+(-2D_α-3)f) for D_α ∈ {0, …, 5}"

    def check_charge_equation(self) -> Tuple[bool, str]:
        rng = random.Random(self.config.seed)
        tolerance = self.config.tolerance
        solved = skipped = 0
        worst = 0.0
        for i in range(self.config.fuzz_samples):
            omega_rdv = RdvCoords.from_dv(_random_positive(rng, 24, 4), _random_positive(rng, 24, 4), K3)
            try:
                if i % 2 == 0:
                    data = solve_simple(K3, omega_rdv, _random_rational(rng, -12, 12, 4))
                else:
                    b_field = DivisorClass(_random_rational(rng, -4, 4, 4), _random_rational(rng, -12, 12, 4))
                    data = solve_todd(K3, omega_rdv, b_field)
            except DegenerateTarget:
                skipped += 1
                continue
            solved += 1
            worst = max(worst, data.residual)
            if not data.within_tolerance(tolerance):
                return False, (f"residual {data.residual:.3e}, det T {data.det_T:.3e} "
                               f"at D={omega_rdv.d}, V={omega_rdv.v}")
        return True, f"{solved} solved, {skipped} degenerate skipped, worst residual {worst:.3e}"

    def check_g_and_h(self) -> Tuple[bool, str]:
        g_residuals = [check_g(d_alpha, K3) for d_alpha in range(4)]
        h_residuals = [check_h(v, K3) for v in (Fraction(1, 4), Fraction(1), Fraction(7, 2))]
        worst = max(g_residuals + h_residuals)
        return worst <= Fraction(1, 10 ** 12), f"max residual {worst}"

    # charges

    def check_charge_fixtures(self) -> Tuple[bool, str]:
        o_x_shift = shift(chern_named(NamedObject.STRUCTURE_SHEAF, K3), 1)
        o_theta = lambda m: chern_named(NamedObject.THETA_SHEAF, K3, m=m)
        for v, d in ((Fraction(1, 2), Fraction(3)), (Fraction(2), Fraction(5, 3)), (Fraction(7), Fraction(1))):
            spec = ChargeSpec.vd(v, d, K3)
            z_shift, z_theta = eval_charge(spec, o_x_shift), eval_charge(spec, o_theta(-1))
            if (z_shift.re, z_shift.im) != (-v, 0) or (z_theta.re, z_theta.im) != (0, d):
                return False, f"Z_(V,D) fixture fails at V={v}, D={d}"
        for d_alpha in range(4):
            z = eval_charge(ChargeSpec.weak_special(d_alpha, K3), o_theta(-2))
            if (z.re, z.im) != (-d_alpha - Fraction(3, 2), Fraction(1, 2)):
                return False, f"Z'₀(𝒪_Θ(-2)) = {z.re} + {z.im}i at D_α={d_alpha}"
        return True, "Z_(V,D)(𝒪_X[1]) = -V, Z_(V,D)(𝒪_Θ(-1)) = iD, Z'₀(𝒪_Θ(-2)) = -D_α-3/2 + i/2"

    def check_kernel_solver(self) -> Tuple[bool, str]:
        for d_alpha in range(3):
            solutions = solve_special_kernel(d_alpha, bound=20)
            degrees = sorted({s.fiber_degree for s in solutions})
            classes = {s.ch1 for s in solutions}
            expected = {chern_named(NamedObject.L0, K3, d_alpha=d_alpha).ch1,
                        chern_named(NamedObject.L1, K3, d_alpha=d_alpha).ch1}
            if degrees != [0, 1] or classes != expected:
                return False, f"D_α={d_alpha}: y ∈ {degrees}, ch₁ ∈ {sorted(map(str, classes))}"
        return True, "y ∈ {0, 1} with ch₁ of L₀, L₁ for D_α ∈ {0, 1, 2}"

    def check_limit_phases(self) -> Tuple[bool, str]:
        details = []
        for d_alpha in range(4):
            l0 = chern_named(NamedObject.L0, K3, d_alpha=d_alpha)
            l1 = chern_named(NamedObject.L1, K3, d_alpha=d_alpha)
            for v, expected in ((shift(l0, 1), Fraction(3, 4)), (l1, Fraction(1, 4))):
                numeric = limit_phase_numeric(LimitPath.ORIGIN, v, d_alpha, epsilon=1e-6, surface=K3)
                if abs(numeric - float(expected)) > 1e-3:
                    return False, f"D_α={d_alpha}: numeric phase {numeric:.6f}, expected {expected}"
                if limit_phase(LimitPath.ORIGIN, v, d_alpha, surface=K3) != expected:
                    return False, f"D_α={d_alpha}: closed-form limit differs from {expected}"
            details.append(d_alpha)

        specs = [ChargeSpec.weak_h(K3), ChargeSpec.weak_vh(1, K3), ChargeSpec.weak_d(1, K3)]
        specs += [ChargeSpec.weak_special(d_alpha, K3) for d_alpha in range(4)]
        for spec in specs:
            for entry in kernel_basis(spec):
                if not in_kernel(spec, entry.vector) or phase(spec, entry.vector).phi != entry.phi:
                    return False, f"{spec.family.value}: {entry.name} does not carry phase {entry.phi}"
        return True, f"limits 3/4 and 1/4 for D_α ∈ {details}; {len(specs)} kernel tables exact"

    # regions

    def check_reductions(self) -> Tuple[bool, str]:
        rng = random.Random(self.config.seed)
        for _ in range(self.config.pair_samples):
            d, v = _random_positive(rng, 80, 16), _random_positive(rng, 80, 16)
            if twisted_ample(RegionQuery(-1, d, v, K3)) != (v > 1 + 1 / d):
                return False, f"D_α=-1 reduction fails at ({d}, {v})"
            if twisted_ample(RegionQuery(-2, d, v, K3)) != (v > 1):
                return False, f"D_α=-2 reduction fails at ({d}, {v})"
        return True, f"V > 1 + 1/D and V > 1 on {self.config.pair_samples} random points"

    def check_tangency(self) -> Tuple[bool, str]:
        for d_alpha in (-3, -4, -5):
            data = tangency_data(K3, d_alpha)
            d0 = -(d_alpha + 2)
            ok = (data.point == (d0, 0)
                  and data.boundary_value_at(d0) == 0
                  and data.derivative_at(d0) == 0
                  and data.g_at_point == (d_alpha + 2) * (d_alpha + 1)
                  and data.g_at(*data.point) == data.g_at_point
                  and data.neighborhood_ok)
            if not ok:
                return False, f"tangency fails for D_α={d_alpha}"
        return True, "P = (-(D_α+2), 0), V'(P) = 0, g(P) > 0 for D_α ∈ {-3, -4, -5}"

    def check_witness(self) -> Tuple[bool, str]:
        d, v = witness_stable_not_twisted_ample(K3, 0)
        q = RegionQuery(0, d, v, K3)
        label = classify(q)
        ok = positivity(q) and not twisted_ample(q) and label.theorem_region_stable
        violations = []
        for d_alpha in (-3, -1, 0, 1):
            violations += going_up_consistent(K3, d_alpha, samples=self.config.fuzz_samples,
                                              seed=self.config.seed)
        if violations:
            first = violations[0]
            return False, f"{len(violations)} monotonicity violations, first {first.flag} at {first.base}"
        return ok, f"witness ({d}, {v}); monotonicity holds on {4 * self.config.fuzz_samples} samples"

    # walls

    def check_wall_nesting(self) -> Tuple[bool, str]:
        rng = random.Random(self.config.seed)
        frame = WallFrame(Fraction(1), K3)
        o_f = ChernVector.of(0, DivisorClass.fiber(), 0)
        records = []
        while len(records) < 10:
            n = rng.randint(-5, 5)
            if n == 0:
                continue
            v_e = ChernVector.of(n, DivisorClass(rng.randint(-4, 4), rng.randint(-4, 4)),
                                 _random_rational(rng, -10, 10, 2))
            records.append(wall_quadric(frame, v_e, o_f))
        circles = 0
        for _ in range(5):
            z = _random_rational(rng, -6, 6, 4)
            slices = [c for c in (slice_circle(r, z) for r in records) if c is not None]
            circles += len(slices)
            if any(c.center_y != -z for c in slices):
                return False, f"center off ỹ = -z̃ at z̃ = {z}"
            for i, first in enumerate(slices):
                for second in slices[i + 1:]:
                    if not circles_nested(first, second):
                        return False, f"circles not nested at z̃ = {z}"
        return True, f"{circles} slice circles centered at ỹ = -z̃ and pairwise nested"

    def check_rank_bound(self) -> Tuple[bool, str]:
        bound = rank_bound(K3, DivisorClass(1, 1), DivisorClass(1, 4))
        ok = bound.floor == 1 and bound.certified and bound.width < 1e-12
        return ok, f"enclosure [{bound.lower!r}, {bound.upper!r}], floor {bound.floor}"

    def check_certificates(self) -> Tuple[bool, str]:
        stable = stability_certificate(ChargeSpec.vd(2, 2, K3), line_bundle(alpha_class(-1, K3), K3),
                                       CERTIFICATE_BOUNDS, threads=self.config.threads)
        if stable.verdict is not Verdict.NO_NUMERICAL_WALL:
            return False, f"(2, 2), D_α=-1: {stable.verdict.value} ({stable.reason})"
        # regression fixture: empty search, but the cone argument fails
        fixture = stability_certificate(ChargeSpec.vd(Fraction(1, 2), 1, K3),
                                        line_bundle(alpha_class(0, K3), K3),
                                        CERTIFICATE_BOUNDS, threads=self.config.threads)
        reason = fixture.reason or ""
        if fixture.verdict is not Verdict.INCONCLUSIVE or "volume" not in reason or "twisted" not in reason:
            return False, f"(1, 1/2), D_α=0: {fixture.verdict.value} ({reason})"
        return True, "(2, 2): NoNumericalWall; (1, 1/2): Inconclusive"

    def checks_for(self, suite: str) -> List[Tuple[str, str, Check]]:
        """
        (suite, name, check) triples in run order

        Raises:
            ValueError: If the suite is unknown
        """
        table = {
            "fmt": [
                ("named object identities", self.check_named_objects),
                ("quasi-inverse", self.check_quasi_inverse),
                ("euler pairing", self.check_euler_pairing),
            ],
            "cce": [
                ("special point", self.check_special_point),
                ("charge equation residuals", self.check_charge_equation),
                ("g and h identities", self.check_g_and_h),
            ],
            "charges": [
                ("charge fixtures", self.check_charge_fixtures),
                ("kernel solver", self.check_kernel_solver),
                ("limit phases", self.check_limit_phases),
            ],
            "regions": [
                ("twisted ample reductions", self.check_reductions),
                ("tangency", self.check_tangency),
                ("witness and monotonicity", self.check_witness),
            ],
            "walls": [
                ("wall nesting", self.check_wall_nesting),
                ("rank bound", self.check_rank_bound),
                ("certificates", self.check_certificates),
            ],
        }
        if suite == "all":
            names = SUITES
        elif suite in table:
            names = (suite,)
        else:
            raise ValueError(f"Unknown suite: {suite}. Available suites: all, {', '.join(SUITES)}")
        return [(name, label, fn) for name in names for label, fn in table[name]]

    def run(self, suite: str = "all") -> VerificationReport:
        """
        Run every check of a suite

        Args:
            suite: all, fmt, cce, charges, regions or walls

        Returns:
            VerificationReport; a check that raises counts as failed
        """
        checks = self.checks_for(suite)
        total = len(checks)
        report = VerificationReport(suite)

        self._print("=" * 60)
        self._print(f"ELLK3-STAB VERIFY - suite: {suite}")
        self._print("=" * 60)
        if self.progress_callback:
            self.progress_callback(0, total, "Starting verification...", None)

        current = None
        for step, (suite_name, label, check) in enumerate(checks, start=1):
            if suite_name != current:
                current = suite_name
                self._print(f"Suite: {suite_name}")
                self._print("-" * 60)
            started = time.perf_counter()
            try:
                passed, detail = check()
                error = None
            except Exception as e:
                passed, detail, error = False, f"{type(e).__name__}: {e}", str(e)
            elapsed = time.perf_counter() - started
            report.results.append(CheckResult(label, passed, detail, suite_name))

            mark = "✓" if passed else "✗"
            self._print(f"{mark} {label}: {detail} ({elapsed:.2f}s)")
            if self.progress_callback:
                self.progress_callback(step, total, f"{suite_name}: {label}",
                                       None if passed else (error or detail))

        failed = len(report.failures)
        self._print("=" * 60)
        self._print(f"VERIFY COMPLETE: {total - failed}/{total} checks passed")
        self._print("=" * 60)
        if self.progress_callback:
            self.progress_callback(total, total, "Verification complete!", None)
        return report
