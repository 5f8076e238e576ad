"""
Central charges, exact phase comparison and weak-limit kernel phase tables

Every family is a linear functional Z(v) = Re(v) + i·√scale·Im(v) on the
Chern lattice with rational coefficient vectors; the positive scalar √scale
only appears when the polarization is given in RDV form with irrational R.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, NamedTuple, Optional, Tuple

from .errors import (
    HypothesisViolated,
    KernelWithoutTable,
    NotAmple,
    NotWeakFamily,
    UnknownLimit,
)
from .lattice import (
    K3,
    ChernVector,
    DivisorClass,
    NamedObject,
    OmegaClass,
    Rational,
    SurfaceParams,
    as_fraction,
    chern_named,
    intersect,
    is_ample,
    require_k3,
    self_intersection,
    shift,
)


class Family(str, Enum):
    STANDARD = "standard"
    TODD = "todd"
    VD = "vd"
    RAY = "ray"
    WEAK_H = "weak-h"
    WEAK_VH = "weak-vh"
    WEAK_D = "weak-d"
    WEAK_SPECIAL = "weak-special"


WEAK_FAMILIES = frozenset({Family.WEAK_H, Family.WEAK_VH, Family.WEAK_D, Family.WEAK_SPECIAL})


class ScaleNote(str, Enum):
    EXACT = "exact"
    SQRT_FACTORED = "sqrt-factored"


@dataclass(frozen=True)
class ChargeSpec:
    """
    One central charge: a family tag plus its parameters.

    Use the classmethod constructors; they validate the family's hypotheses.
    All families share the shape Z = -ch₂^B + a·ch₀ + i·ω·ch₁^B, stored as
    (omega, b_field, ch0_coefficient).
    """

    family: Family
    surface: SurfaceParams
    omega: OmegaClass
    b_field: DivisorClass
    ch0_coefficient: Fraction
    params: Tuple[Tuple[str, Fraction], ...] = ()
    kernel_phase_param: Optional[Fraction] = None

    def param(self, name: str) -> Optional[Fraction]:
        return dict(self.params).get(name)

    @classmethod
    def standard(cls, omega, b_field: DivisorClass = None, surface: SurfaceParams = K3) -> "ChargeSpec":
        """
        Z_{ω,B} = -ch₂^B + (ω²/2)ch₀ + iω·ch₁^B

        Raises:
            NotAmple: If ω is not ample
        """
        omega = OmegaClass.of(omega)
        if not omega.is_ample(surface):
            raise NotAmple(f"ω = {omega.direction} (scale {omega.scale}) is not ample")
        b_field = b_field or DivisorClass.zero()
        return cls(Family.STANDARD, surface, omega, b_field, omega.square(surface) / 2)

    @classmethod
    def todd(cls, omega, b_field: DivisorClass = None, surface: SurfaceParams = K3) -> "ChargeSpec":
        """Z^td_{ω,B}: the standard charge with ω²/2 replaced by ω²/2 - 1"""
        base = cls.standard(omega, b_field, surface)
        return cls(Family.TODD, surface, base.omega, base.b_field, base.ch0_coefficient - 1)

    @classmethod
    def vd(cls, v: Rational, d: Rational, surface: SurfaceParams = K3) -> "ChargeSpec":
        """Z_{V,D} = -ch₂ + V·ch₀ + i(Θ + (D+e)f)·ch₁"""
        v, d = as_fraction(v), as_fraction(d)
        if v <= 0 or d <= 0:
            raise HypothesisViolated(f"Z_(V,D) needs V > 0 and D > 0, got V = {v}, D = {d}")
        direction = DivisorClass(1, d + surface.e)
        return cls(Family.VD, surface, OmegaClass(direction), DivisorClass.zero(), v,
                   (("V", v), ("D", d)))

    @classmethod
    def ray(cls, h: DivisorClass, b_field: DivisorClass, t: Rational,
            surface: SurfaceParams = K3) -> "ChargeSpec":
        """Z_{H,B,t} = -ch₂^B + t·ch₀ + iH·ch₁^B"""
        t = as_fraction(t)
        if not is_ample(h, surface):
            raise NotAmple(f"H = {h} is not ample")
        if t <= 0:
            raise HypothesisViolated(f"Ray parameter t must be positive, got {t}")
        return cls(Family.RAY, surface, OmegaClass(h), b_field, t, (("t", t),))

    @classmethod
    def weak_h(cls, surface: SurfaceParams = K3, b: Optional[Rational] = None) -> "ChargeSpec":
        """Z_H = -ch₂ + iH·ch₁ with H = Θ + ef"""
        h = DivisorClass(1, surface.e)
        return cls(Family.WEAK_H, surface, OmegaClass(h), DivisorClass.zero(), Fraction(0),
                   kernel_phase_param=None if b is None else as_fraction(b))

    @classmethod
    def weak_vh(cls, v: Rational, surface: SurfaceParams = K3) -> "ChargeSpec":
        """Z_{V,H} = -ch₂ + V·ch₀ + iH·ch₁"""
        v = as_fraction(v)
        if v <= 0:
            raise HypothesisViolated(f"Z_(V,H) needs V > 0, got {v}")
        h = DivisorClass(1, surface.e)
        return cls(Family.WEAK_VH, surface, OmegaClass(h), DivisorClass.zero(), v, (("V", v),))

    @classmethod
    def weak_d(cls, d: Rational, surface: SurfaceParams = K3) -> "ChargeSpec":
        """Z_D = -ch₂ + i(Θ + (D+e)f)·ch₁"""
        d = as_fraction(d)
        if d <= 0:
            raise HypothesisViolated(f"Z_D needs D > 0, got {d}")
        direction = DivisorClass(1, d + surface.e)
        return cls(Family.WEAK_D, surface, OmegaClass(direction), DivisorClass.zero(), Fraction(0),
                   (("D", d),))

    @classmethod
    def weak_special(cls, d_alpha: Rational, surface: SurfaceParams = K3,
                     b: Optional[Rational] = None) -> "ChargeSpec":
        """
        Z'₀: the Todd charge at ω'₀ = ½(Θ+3f), B'₀ = ½(Θ + (-2D_α-3)f)

        Raises:
            KThreeOnly: If e != 2
        """
        require_k3(surface, "Z'₀")
        d_alpha = as_fraction(d_alpha)
        omega, b_field = special_point(d_alpha)
        a = self_intersection(omega, surface) / 2 - 1
        return cls(Family.WEAK_SPECIAL, surface, OmegaClass(omega), b_field, a,
                   (("D_alpha", d_alpha),),
                   kernel_phase_param=None if b is None else as_fraction(b))

    def linear_forms(self) -> Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...]]:
        """
        Coefficient vectors of Re Z and Im Z/√scale against (n, a, b, s)
        """
        s = self.surface
        B = self.b_field
        theta, fiber = DivisorClass.theta(), DivisorClass.fiber()
        w = self.omega.direction
        re = (self.ch0_coefficient - self_intersection(B, s) / 2,
              intersect(B, theta, s), intersect(B, fiber, s), Fraction(-1))
        im = (-intersect(w, B, s), intersect(w, theta, s), intersect(w, fiber, s), Fraction(0))
        return re, im


def special_point(d_alpha: Rational) -> Tuple[DivisorClass, DivisorClass]:
    """(ω'₀, B'₀) = (½(Θ+3f), ½(Θ + (-2D_α-3)f))"""
    d_alpha = as_fraction(d_alpha)
    half = Fraction(1, 2)
    return DivisorClass(half, Fraction(3, 2)), DivisorClass(half, (-2 * d_alpha - 3) / 2)


@dataclass(frozen=True)
class ChargeValue:
    """
    Z(v) with the positive scalar √im_scale factored out of the imaginary part
    """

    re: Fraction
    im: Fraction
    im_scale: Fraction = Fraction(1)

    @property
    def scale_note(self) -> ScaleNote:
        return ScaleNote.EXACT if self.im_scale == 1 else ScaleNote.SQRT_FACTORED

    @property
    def re_f(self) -> float:
        return float(self.re)

    @property
    def im_f(self) -> float:
        return math.sqrt(self.im_scale) * float(self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __add__(self, other: "ChargeValue") -> "ChargeValue":
        if self.im_scale != other.im_scale:
            raise ValueError("Cannot add charge values with different scales")
        return ChargeValue(self.re + other.re, self.im + other.im, self.im_scale)


def _dot(coefficients, v: ChernVector) -> Fraction:
    return sum((c * x for c, x in zip(coefficients, v.as_tuple())), Fraction(0))


def eval_charge(spec: ChargeSpec, v: ChernVector) -> ChargeValue:
    """
    Evaluate Z(v) exactly

    Args:
        spec: The central charge
        v: Chern vector

    Returns:
        ChargeValue with exact real part and scale-factored imaginary part
    """
    re, im = spec.linear_forms()
    return ChargeValue(_dot(re, v), _dot(im, v), spec.omega.scale)


class PhaseKind(str, Enum):
    INTERIOR = "interior"
    KERNEL_TABULATED = "kernel"


# Tabulated phases in (0, 1] with exact slopes ρ = -cot(πφ); None marks φ = 1.
_EXACT_SLOPES = {
    Fraction(1, 4): Fraction(-1),
    Fraction(1, 2): Fraction(0),
    Fraction(3, 4): Fraction(1),
    Fraction(1): None,
}


@dataclass(frozen=True)
class PhaseValue:
    """
    Phase φ ∈ (band, band + 1], encoded exactly.

    Inside a band φ increases with ρ = -Re/Im; rho = None marks the top of
    the band (Z on the negative real axis after rotation by the band).
    The true slope is rho/√scale.
    """

    kind: PhaseKind
    band: int
    rho: Optional[Fraction]
    scale: Fraction = Fraction(1)
    phi: Optional[Fraction] = None

    def to_float(self) -> float:
        if self.phi is not None:
            return float(self.phi)
        if self.rho is None:
            return float(self.band + 1)
        slope = float(self.rho) / math.sqrt(self.scale)
        return self.band + math.atan2(1.0, -slope) / math.pi


def _compare_scaled(r1: Fraction, s1: Fraction, r2: Fraction, s2: Fraction) -> int:
    """Sign of r1/√s1 - r2/√s2 without square roots"""
    if s1 == s2:
        return (r1 > r2) - (r1 < r2)
    sign1 = (r1 > 0) - (r1 < 0)
    sign2 = (r2 > 0) - (r2 < 0)
    if sign1 != sign2:
        return (sign1 > sign2) - (sign1 < sign2)
    lhs, rhs = r1 * r1 * s2, r2 * r2 * s1
    magnitude = (lhs > rhs) - (lhs < rhs)
    return magnitude if sign1 >= 0 else -magnitude


def _table_slope(phi: Fraction) -> Tuple[int, Optional[Fraction]]:
    band = math.ceil(phi) - 1
    reduced = phi - band
    if reduced not in _EXACT_SLOPES:
        raise KernelWithoutTable(f"No exact slope for the tabulated phase {phi}")
    return band, _EXACT_SLOPES[reduced]


def _phase_from_table(phi: Fraction) -> PhaseValue:
    band, rho = _table_slope(phi)
    return PhaseValue(PhaseKind.KERNEL_TABULATED, band, rho, phi=phi)


def _exact_key(p: PhaseValue) -> Tuple[int, Optional[Fraction], Fraction]:
    if p.phi is None:
        return p.band, p.rho, p.scale
    band, rho = _table_slope(p.phi)
    return band, rho, Fraction(1)


def _phase_key_compare(p: PhaseValue, q: PhaseValue) -> int:
    band_p, rho_p, scale_p = _exact_key(p)
    band_q, rho_q, scale_q = _exact_key(q)
    if band_p != band_q:
        return (band_p > band_q) - (band_p < band_q)
    if rho_p is None or rho_q is None:
        return (rho_p is None) - (rho_q is None)
    return _compare_scaled(rho_p, scale_p, rho_q, scale_q)


def compare_phase_values(p: PhaseValue, q: PhaseValue) -> int:
    """
    Total preorder on phases; equal phases order interior before kernel
    """
    result = _phase_key_compare(p, q)
    if result != 0:
        return result
    kernel_p = p.kind is PhaseKind.KERNEL_TABULATED
    kernel_q = q.kind is PhaseKind.KERNEL_TABULATED
    return kernel_p - kernel_q


class KernelEntry(NamedTuple):
    name: str
    vector: ChernVector
    phi: Fraction


def kernel_basis(spec: ChargeSpec) -> List[KernelEntry]:
    """
    Tabulated kernel generators of a weak charge

    Raises:
        NotWeakFamily: If the family has no kernel table
    """
    s = spec.surface
    o_x_shift = shift(chern_named(NamedObject.STRUCTURE_SHEAF, s), 1)
    o_theta_minus_one = ChernVector.of(0, DivisorClass.theta(), 0)
    if spec.family is Family.WEAK_H:
        return [KernelEntry("𝒪_X[1]", o_x_shift, Fraction(1)),
                KernelEntry("𝒪_Θ(-1)", o_theta_minus_one, Fraction(1, 2))]
    if spec.family is Family.WEAK_VH:
        return [KernelEntry("𝒪_Θ(-1)", o_theta_minus_one, Fraction(1, 2))]
    if spec.family is Family.WEAK_D:
        return [KernelEntry("𝒪_X[1]", o_x_shift, Fraction(1))]
    if spec.family is Family.WEAK_SPECIAL:
        d_alpha = spec.param("D_alpha")
        l0 = chern_named(NamedObject.L0, s, d_alpha=d_alpha)
        l1 = chern_named(NamedObject.L1, s, d_alpha=d_alpha)
        return [KernelEntry("L₀[1]", shift(l0, 1), Fraction(3, 4)),
                KernelEntry("L₁", l1, Fraction(1, 4))]
    raise NotWeakFamily(f"{spec.family.value} is not a weak family")


def in_kernel(spec: ChargeSpec, v: ChernVector) -> bool:
    return eval_charge(spec, v).is_zero()


def kernel_sum_slope(family: Family, m0: Fraction, m1: Fraction, b: Fraction) -> Optional[Fraction]:
    """
    Slope of a direct sum of kernel generators with multiplicities (m0, m1)

    For Z_H the generators are (𝒪_Θ(-1), 𝒪_X[1]) and ρ = b·m1/m0; for Z'₀
    they are (L₀[1], L₁) and ρ = (m0 - b·m1)/(m0 + b·m1). None means φ = 1.
    """
    if family is Family.WEAK_H:
        return None if m0 == 0 else b * m1 / m0
    if family is Family.WEAK_SPECIAL:
        return (m0 - b * m1) / (m0 + b * m1)
    raise NotWeakFamily(f"{family.value} has no kernel direct-sum slope")


def _kernel_coordinates(spec: ChargeSpec, v: ChernVector) -> Optional[Tuple[Fraction, ...]]:
    entries = kernel_basis(spec)
    if len(entries) == 1:
        g = entries[0].vector
        pivot = next(i for i, x in enumerate(g.as_tuple()) if x != 0)
        m = v.as_tuple()[pivot] / g.as_tuple()[pivot]
        return (m,) if g * m == v else None
    g0, g1 = entries[0].vector, entries[1].vector
    # n and a coordinates determine the combination for both 2-dimensional tables
    det = g0.n * g1.a - g1.n * g0.a
    m0 = (v.n * g1.a - g1.n * v.a) / det
    m1 = (g0.n * v.a - v.n * g0.a) / det
    return (m0, m1) if g0 * m0 + g1 * m1 == v else None


def _kernel_phase(spec: ChargeSpec, v: ChernVector) -> PhaseValue:
    if spec.family not in WEAK_FAMILIES:
        raise KernelWithoutTable(f"Z(v) = 0 for v = {v} and {spec.family.value} has no phase table")
    coords = _kernel_coordinates(spec, v)
    if coords is None:
        raise KernelWithoutTable(f"{v} is in the kernel but not spanned by the tabulated classes")
    if all(m >= 0 for m in coords):
        band = 0
    elif all(m <= 0 for m in coords):
        band, coords = -1, tuple(-m for m in coords)
    else:
        raise KernelWithoutTable(f"{v} mixes shifted and unshifted kernel generators")

    entries = kernel_basis(spec)
    present = [entry for entry, m in zip(entries, coords) if m != 0]
    if len(present) == 1:
        return _phase_from_table(present[0].phi + band)
    if spec.kernel_phase_param is None:
        raise KernelWithoutTable(
            f"{v} is a mixed kernel sum; set kernel_phase_param to order it"
        )
    # table order is (𝒪_X[1], 𝒪_Θ(-1)) for Z_H, (L₀[1], L₁) for Z'₀
    if spec.family is Family.WEAK_H:
        m1, m0 = coords
    else:
        m0, m1 = coords
    rho = kernel_sum_slope(spec.family, m0, m1, spec.kernel_phase_param)
    return PhaseValue(PhaseKind.KERNEL_TABULATED, band, rho)


def phase(spec: ChargeSpec, v: ChernVector) -> PhaseValue:
    """
    Exact phase of v under spec

    Raises:
        KernelWithoutTable: If Z(v) = 0 and no tabulated phase applies
    """
    value = eval_charge(spec, v)
    if value.is_zero():
        return _kernel_phase(spec, v)
    if value.im > 0 or (value.im == 0 and value.re < 0):
        band = 0
    else:
        band = -1
    rho = None if value.im == 0 else -value.re / value.im
    return PhaseValue(PhaseKind.INTERIOR, band, rho, value.im_scale)


def compare_phase(spec: ChargeSpec, v: ChernVector, w: ChernVector) -> int:
    """
    Compare φ(v) with φ(w) without floats

    Returns:
        -1, 0 or 1
    """
    return compare_phase_values(phase(spec, v), phase(spec, w))


def slope(spec: ChargeSpec, v: ChernVector) -> Optional[Fraction]:
    """ρ = -Re/Im with √scale factored out; None when Im = 0"""
    value = eval_charge(spec, v)
    return None if value.im == 0 else -value.re / value.im


def float_phase(spec: ChargeSpec, v: ChernVector) -> float:
    return phase(spec, v).to_float()


def heart_necessary(spec: ChargeSpec, v: ChernVector) -> bool:
    """
    Numerical shadow of heart membership: Im ≥ 0, and Re ≤ 0 when Im = 0

    Necessary only; a class passing this need not be realized in the heart.
    """
    value = eval_charge(spec, v)
    return value.im > 0 or (value.im == 0 and value.re <= 0)


class LimitPath(str, Enum):
    ORIGIN = "origin"
    D_TO_ZERO = "d-to-zero"
    V_TO_ZERO = "v-to-zero"


def _transported_charge(name: str, d: float, v: float) -> complex:
    # charge of L₀[1] and L₁ under the stability transported by Ψ, at (D, V)
    root = math.sqrt((d + 1) * (v + 1))
    denom = d + v + 2
    if name == "L₀[1]":
        return complex(-(d * v + d) / denom, d * root / denom)
    return complex((d * v + v) / denom, v * root / denom)


def _identify_limit_class(v: ChernVector, d_alpha: Fraction, surface: SurfaceParams) -> str:
    l0 = chern_named(NamedObject.L0, surface, d_alpha=d_alpha)
    l1 = chern_named(NamedObject.L1, surface, d_alpha=d_alpha)
    named = {
        "L₀[1]": shift(l0, 1),
        "L₁": l1,
        "L₁[1]": shift(l1, 1),
        "𝒪_X[1]": shift(chern_named(NamedObject.STRUCTURE_SHEAF, surface), 1),
        "𝒪_Θ(-1)": ChernVector.of(0, DivisorClass.theta(), 0),
    }
    for name, vector in named.items():
        if vector == v:
            return name
    raise UnknownLimit(f"No limit phase is known for {v}")


_LIMITS = {
    "L₀[1]": Fraction(3, 4),
    "L₁": Fraction(1, 4),
    "L₁[1]": Fraction(5, 4),
    "𝒪_X[1]": Fraction(1),
    "𝒪_Θ(-1)": Fraction(1, 2),
}


def limit_phase_numeric(path: LimitPath, v: ChernVector, d_alpha: Rational = 0,
                        epsilon: float = 1e-6, ratio: Rational = 1, fixed: float = 1.0,
                        surface: SurfaceParams = K3) -> float:
    """
    Phase of v evaluated at a small point of the path

    ORIGIN takes D = ε, V = ratio·ε; D_TO_ZERO takes D = ε, V = fixed;
    V_TO_ZERO takes D = fixed, V = ε.
    """
    require_k3(surface, "limit_phase")
    name = _identify_limit_class(v, as_fraction(d_alpha), surface)
    if path is LimitPath.ORIGIN:
        d, vv = epsilon, float(ratio) * epsilon
    elif path is LimitPath.D_TO_ZERO:
        d, vv = epsilon, fixed
    else:
        d, vv = fixed, epsilon

    if name in ("𝒪_X[1]", "𝒪_Θ(-1)"):
        value = eval_charge(ChargeSpec.vd(Fraction(vv), Fraction(d), surface), v)
        z = complex(value.re_f, value.im_f)
        return math.atan2(z.imag, z.real) / math.pi
    z = _transported_charge("L₁" if name == "L₁[1]" else name, d, vv)
    angle = math.atan2(z.imag, z.real) / math.pi
    return angle + 1 if name == "L₁[1]" else angle


def limit_phase(path: LimitPath, v: ChernVector, d_alpha: Rational = 0,
                ratio: Rational = 1, surface: SurfaceParams = K3,
                tolerance: float = 1e-3) -> Fraction:
    """
    Closed-form limit phase of a kernel class, cross-checked numerically

    Args:
        path: How (D, V) approaches the limit
        v: One of L₀[1], L₁, L₁[1], 𝒪_X[1], 𝒪_Θ(-1)
        d_alpha: D_α fixing L₀ and L₁
        ratio: V/D along the ORIGIN path
        surface: Must be K3
        tolerance: Allowed gap between the closed form and the numeric value

    Raises:
        UnknownLimit: If the class or the path has no known limit
    """
    name = _identify_limit_class(v, as_fraction(d_alpha), surface)
    if name.startswith("L") and path is not LimitPath.ORIGIN:
        raise UnknownLimit(f"{name} has no tabulated limit along {path.value}")
    expected = _LIMITS[name]
    numeric = limit_phase_numeric(path, v, d_alpha, ratio=ratio, surface=surface)
    if abs(numeric - float(expected)) > tolerance:
        raise UnknownLimit(f"{name}: numeric phase {numeric:.6f} does not approach {expected}")
    return expected


class KernelSolution(NamedTuple):
    theta_degree: int
    fiber_degree: int
    ch1: DivisorClass


def solve_special_kernel(d_alpha: int, bound: int = 20) -> List[KernelSolution]:
    """
    Brute-force the integral ch₁ of rank-1 kernel objects of Z'₀ on K3

    With x = Θ·ch₁, y = f·ch₁ the kernel conditions read
    x + 3y = -D_α - 1 and ch₁² = -(2D_α + 6)y, and the Hodge index family
    (2a+1)y ≥ -a² must hold for every integer a in [-bound, bound].
    """
    solutions = []
    for y in range(-bound, bound + 1):
        if any((2 * a + 1) * y < -a * a for a in range(-bound, bound + 1)):
            continue
        for x in range(-bound, bound + 1):
            if x + 3 * y != -d_alpha - 1:
                continue
            ch1 = DivisorClass(y, x + 2 * y)
            if self_intersection(ch1, K3) == -(2 * d_alpha + 6) * y:
                solutions.append(KernelSolution(x, y, ch1))
    return solutions
