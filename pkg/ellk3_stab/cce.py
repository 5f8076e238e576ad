"""
Solving the central charge equation Z'(Φ(-)) = T·Z(-) in RDV coordinates

Writing ω = R_ω(Θ + (D_ω+e)f) and normalizing Z_{ω,B} by
N(ω,B) = [[1, -R_B/R_ω], [0, 1/R_ω]] gives

    N·Z = -ch₂ + L·d + M·n + i(c + (D_ω+e)d + N·n)

with L, M, N rational in (D_ω, V_ω, B). Matching the normalized charges of
Φ(E) and E under the rotation [[0, 1], [-1, 0]] gives linear relations
for (D_ω', V_ω', B'), solved here in divisor coefficients so that a pure
fiber B needs no special case.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, NamedTuple, Optional, Union

import numpy as np

from .charges import ChargeSpec, Family, eval_charge
from .errors import DegenerateTarget, HypothesisViolated, NotAmple
from .fmt import phi_map, psi_map, upsilon_map
from .lattice import (
    K3,
    ChernVector,
    DivisorClass,
    OmegaClass,
    Rational,
    RdvCoords,
    SurfaceParams,
    as_fraction,
    divisor_of_rdv,
    format_rational,
    intersect,
    rdv_of,
    require_k3,
    self_intersection,
)

ROTATION = np.array([[0.0, 1.0], [-1.0, 0.0]])

G_MATRIX = ((Fraction(-1, 2), Fraction(1, 2)), (Fraction(-1, 2), Fraction(-1, 2)))
H_MATRIX = ((Fraction(0), Fraction(1)), (Fraction(-1), Fraction(0)))


def _rdv_json(r: RdvCoords) -> Dict[str, object]:
    return {"r_sign": r.r_sign, "r_squared": format_rational(r.r_squared),
            "D": format_rational(r.d), "V": format_rational(r.v)}


def _omega_json(omega: OmegaClass) -> Dict[str, object]:
    return {"direction": [format_rational(omega.direction.a), format_rational(omega.direction.b)],
            "scale": format_rational(omega.scale)}


class NormalizedCoefficients(NamedTuple):
    """L, M, N of the normalized charge N(ω,B)·Z_{ω,B}"""
    l: Fraction
    m: Fraction
    n: Fraction


class TargetParameters(NamedTuple):
    d_omega: Fraction
    v_omega: Fraction
    b_field: DivisorClass


@dataclass(frozen=True, eq=False)
class TransitionData:
    """
    Solution (ω', B', a', T) of Z_{a',ω',B'}(Φ(E)) = T·Z_{ω,B}(E)
    """

    omega_prime: OmegaClass
    omega_prime_rdv: RdvCoords
    b_prime: DivisorClass
    a_prime: Fraction
    T: np.ndarray
    det_T: float
    residual: float
    todd: bool
    surface: SurfaceParams = K3

    @property
    def b_prime_rdv(self) -> Optional[RdvCoords]:
        return None if self.b_prime.a == 0 else rdv_of(self.b_prime, self.surface)

    def within_tolerance(self, tolerance: float) -> bool:
        return self.det_T > 0 and self.residual <= tolerance

    def to_json(self, tolerance: Optional[float] = None) -> Dict[str, object]:
        data = {
            "omega_prime": _omega_json(self.omega_prime),
            "omega_prime_rdv": _rdv_json(self.omega_prime_rdv),
            "b_prime": [format_rational(self.b_prime.a), format_rational(self.b_prime.b)],
            "a_prime": format_rational(self.a_prime),
            "T": [[repr(float(x)) for x in row] for row in self.T],
            "det_T": repr(self.det_T),
            "residual": repr(self.residual),
            "todd": self.todd,
        }
        if tolerance is not None:
            data["within_tolerance"] = self.within_tolerance(tolerance)
        return data


def normalized_coefficients(surface: SurfaceParams, d_omega: Fraction, v_omega: Fraction,
                            b_field: DivisorClass) -> NormalizedCoefficients:
    """L, M, N for ω with RDV data (D_ω, V_ω) and an arbitrary rational B"""
    direction = DivisorClass(1, d_omega + surface.e)
    omega_b = intersect(direction, b_field, surface)
    l = b_field.b - b_field.a * (d_omega + surface.e)
    m = v_omega - self_intersection(b_field, surface) / 2 + b_field.a * omega_b
    return NormalizedCoefficients(l, m, -omega_b)


def target_parameters(surface: SurfaceParams, d_omega: Rational, v_omega: Rational,
                      b_field: DivisorClass, todd: bool) -> TargetParameters:
    """
    Exact (D_ω', V_ω', B') solving the normalized charge relations

        M' = D_ω,  D_ω' = M,  N' = e/2 - L,  N = -(e/2 + L')

    where primed quantities belong to the target charge (Todd-shifted when
    todd is set).

    Raises:
        DegenerateTarget: If 2D_ω' + e = 0
    """
    e = surface.e
    d_omega, v_omega = as_fraction(d_omega), as_fraction(v_omega)
    coeffs = normalized_coefficients(surface, d_omega, v_omega, b_field)
    d_prime = coeffs.m
    if 2 * d_prime + e == 0:
        raise DegenerateTarget("2D_ω' + e = 0")
    beta_theta = (coeffs.l + coeffs.n) / (2 * d_prime + e)
    beta_f = coeffs.l - e / 2 - beta_theta * d_prime
    b_prime = DivisorClass(beta_theta, beta_f)
    v_prime = d_omega - beta_theta * beta_theta * (d_prime + e / 2)
    if todd:
        v_prime += 1
    return TargetParameters(d_prime, v_prime, b_prime)


def normalizer(omega: OmegaClass, b_field: DivisorClass) -> np.ndarray:
    """N(ω,B) = [[1, -R_B/R_ω], [0, 1/R_ω]] as floats"""
    r_omega = float(np.sqrt(float(omega.scale))) * float(omega.direction.a)
    return np.array([[1.0, -float(b_field.a) / r_omega], [0.0, 1.0 / r_omega]])


def _standard_charge(surface: SurfaceParams, omega: OmegaClass, b_field: DivisorClass,
                     todd: bool) -> ChargeSpec:
    # built directly: the target polarization need not be ample
    a = omega.square(surface) / 2 - (1 if todd else 0)
    return ChargeSpec(Family.TODD if todd else Family.STANDARD, surface, omega, b_field, a)


def _as_vector(spec: ChargeSpec, v: ChernVector) -> np.ndarray:
    value = eval_charge(spec, v)
    return np.array([value.re_f, value.im_f])


def _require_ample(omega_rdv: RdvCoords):
    if omega_rdv.r_sign < 0 or omega_rdv.d <= 0:
        raise NotAmple(f"ω with R sign {omega_rdv.r_sign}, D = {omega_rdv.d} is not ample")


def solve_charge_equation(surface: SurfaceParams, omega_rdv: RdvCoords, b_field: DivisorClass,
                          todd: bool) -> TransitionData:
    """
    Solve the central charge equation and assemble T

    Args:
        surface: Surface parameters
        omega_rdv: Ample ω in RDV form
        b_field: Any rational B-field
        todd: Whether the target charge is the Todd-twisted one

    Returns:
        TransitionData with the basis residual of the charge identity

    Raises:
        NotAmple: If ω is not ample
        DegenerateTarget: If the target has no real polarization
    """
    _require_ample(omega_rdv)
    target = target_parameters(surface, omega_rdv.d, omega_rdv.v, b_field, todd)
    try:
        omega_prime_rdv = RdvCoords.from_dv(target.d_omega, target.v_omega, surface)
    except HypothesisViolated as e:
        raise DegenerateTarget(str(e))

    omega = OmegaClass.from_rdv(omega_rdv, surface)
    omega_prime = OmegaClass.from_rdv(omega_prime_rdv, surface)
    T = np.linalg.inv(normalizer(omega_prime, target.b_field)) @ ROTATION @ normalizer(omega, b_field)

    source = _standard_charge(surface, omega, b_field, todd=False)
    image = _standard_charge(surface, omega_prime, target.b_field, todd=todd)
    transform = phi_map(surface)
    residual = max(
        float(np.max(np.abs(_as_vector(image, transform(v)) - T @ _as_vector(source, v))))
        for v in ChernVector.basis()
    )
    return TransitionData(
        omega_prime=omega_prime,
        omega_prime_rdv=omega_prime_rdv,
        b_prime=target.b_field,
        a_prime=image.ch0_coefficient,
        T=T,
        det_T=float(np.linalg.det(T)),
        residual=residual,
        todd=todd,
        surface=surface,
    )


def solve_simple(surface: SurfaceParams, omega_rdv: RdvCoords, l: Rational) -> TransitionData:
    """
    B = lf: the target is D_ω' = V_ω, V_ω' = D_ω, B' = (l - e/2)f, a' = V_ω'

    Raises:
        NotAmple: If ω is not ample
    """
    return solve_charge_equation(surface, omega_rdv, DivisorClass(0, as_fraction(l)), todd=False)


def solve_todd(surface: SurfaceParams, omega_rdv: RdvCoords,
               b_field: Union[DivisorClass, RdvCoords]) -> TransitionData:
    """
    Todd-twisted target; B may be given in RDV form or as a divisor

    Raises:
        NotAmple: If ω is not ample
        DegenerateTarget: If 2D_ω' + e = 0 or V_ω'/(D_ω' + e/2) <= 0
    """
    if isinstance(b_field, RdvCoords):
        b_field = divisor_of_rdv(b_field, surface)
    return solve_charge_equation(surface, omega_rdv, b_field, todd=True)


class PsiZ(NamedTuple):
    d_omega_prime: Fraction
    r_b_prime: Fraction
    v_omega_prime: Fraction
    r_d_b_prime: Fraction

    def b_prime(self) -> DivisorClass:
        """B' = R_B'Θ + (R_B'D_B' + 2R_B')f"""
        return DivisorClass(self.r_b_prime, self.r_d_b_prime + 2 * self.r_b_prime)

    def omega_prime_rdv(self) -> RdvCoords:
        return RdvCoords.from_dv(self.d_omega_prime, self.v_omega_prime, K3)

    def to_json(self) -> Dict[str, object]:
        b_prime = self.b_prime()
        return {
            "D_omega_prime": format_rational(self.d_omega_prime),
            "R_B_prime": format_rational(self.r_b_prime),
            "V_omega_prime": format_rational(self.v_omega_prime),
            "R_B_prime_D_B_prime": format_rational(self.r_d_b_prime),
            "b_prime": [format_rational(b_prime.a), format_rational(b_prime.b)],
            "omega_prime_rdv": _rdv_json(self.omega_prime_rdv()),
        }


def psi_z(d_omega: Rational, v_omega: Rational, d_alpha: Rational) -> PsiZ:
    """
    Closed-form target of the Todd relations at B = -α on K3

    Raises:
        HypothesisViolated: If D_ω or V_ω is negative
    """
    d, v, da = as_fraction(d_omega), as_fraction(v_omega), as_fraction(d_alpha)
    if d < 0 or v < 0:
        raise HypothesisViolated(f"psi_z needs D_ω, V_ω ≥ 0, got ({d}, {v})")
    denom = d + v + 2
    return PsiZ(
        d_omega_prime=v + d + 1,
        r_b_prime=(d + 1) / denom,
        v_omega_prime=(d * v - 1) / denom + 1,
        r_d_b_prime=-(d + 1) / denom - (da + 2),
    )


def _apply(matrix, vec):
    return tuple(sum((matrix[i][j] * vec[j] for j in range(2)), Fraction(0)) for i in range(2))


def _charge_pair(spec: ChargeSpec, v: ChernVector):
    value = eval_charge(spec, v)
    if value.im_scale != 1:
        raise ValueError("exact matrix checks need rational charges")
    return (value.re, value.im)


def check_g(d_alpha: Rational, surface: SurfaceParams = K3) -> Fraction:
    """
    max over the basis of |Z'₀(Ψ eᵢ) - g·Z_H(eᵢ)|, g = [[-1/2, 1/2], [-1/2, -1/2]]

    Raises:
        KThreeOnly: If e != 2
    """
    require_k3(surface, "check_g")
    special = ChargeSpec.weak_special(d_alpha, surface)
    weak = ChargeSpec.weak_h(surface)
    transform = psi_map(d_alpha, surface)
    residual = Fraction(0)
    for v in ChernVector.basis():
        lhs = _charge_pair(special, transform(v))
        rhs = _apply(G_MATRIX, _charge_pair(weak, v))
        residual = max(residual, *(abs(x - y) for x, y in zip(lhs, rhs)))
    return residual


def check_h(v_omega: Rational, surface: SurfaceParams = K3) -> Fraction:
    """
    max over the basis of |Z_D(Υ eᵢ) - h·Z_{V,H}(eᵢ)| with D = V, h = [[0, 1], [-1, 0]]

    Raises:
        KThreeOnly: If e != 2
    """
    require_k3(surface, "check_h")
    v_omega = as_fraction(v_omega)
    target = ChargeSpec.weak_d(v_omega, surface)
    source = ChargeSpec.weak_vh(v_omega, surface)
    transform = upsilon_map(surface)
    residual = Fraction(0)
    for v in ChernVector.basis():
        lhs = _charge_pair(target, transform(v))
        rhs = _apply(H_MATRIX, _charge_pair(source, v))
        residual = max(residual, *(abs(x - y) for x, y in zip(lhs, rhs)))
    return residual
