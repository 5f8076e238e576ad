"""
Cohomological Fourier-Mukai transform of the elliptic fibration and the
composite autoequivalences built from it, as exact 4×4 maps on (n, a, b, s)
"""

from fractions import Fraction
from typing import Callable, List, NamedTuple

import sympy

from .lattice import (
    K3,
    ChernVector,
    DivisorClass,
    NamedObject,
    Rational,
    SurfaceParams,
    alpha_class,
    chern_named,
    euler_pairing,
    line_bundle,
    require_k3,
    shift,
    twist,
)


def to_sympy(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


class LatticeMap:
    """
    A named invertible linear map on Chern vectors.

    The matrix acts on column vectors (n, a, b, s).
    """

    def __init__(self, name: str, matrix: sympy.Matrix):
        if matrix.shape != (4, 4):
            raise ValueError(f"LatticeMap needs a 4×4 matrix, got {matrix.shape}")
        if matrix.det() == 0:
            raise ValueError(f"LatticeMap {name} is singular")
        self.name = name
        self.matrix = sympy.ImmutableMatrix(matrix)

    @classmethod
    def from_function(cls, name: str, fn: Callable[[ChernVector], ChernVector]) -> "LatticeMap":
        """Materialize a linear function by its images of the basis"""
        columns = [[to_sympy(x) for x in fn(v).as_tuple()] for v in ChernVector.basis()]
        return cls(name, sympy.Matrix(columns).T)

    @classmethod
    def identity(cls) -> "LatticeMap":
        return cls("id", sympy.eye(4))

    def apply(self, v: ChernVector) -> ChernVector:
        image = self.matrix * sympy.Matrix([to_sympy(x) for x in v.as_tuple()])
        return ChernVector(*(from_sympy(x) for x in image))

    __call__ = apply

    def __matmul__(self, other: "LatticeMap") -> "LatticeMap":
        return LatticeMap(f"{self.name}∘{other.name}", self.matrix * other.matrix)

    def __neg__(self) -> "LatticeMap":
        return LatticeMap(f"-{self.name}", -self.matrix)

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticeMap) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def inverse(self) -> "LatticeMap":
        return LatticeMap(f"{self.name}⁻¹", self.matrix.inv())

    def determinant(self) -> Fraction:
        return from_sympy(self.matrix.det())

    def entries(self) -> List[List[Fraction]]:
        return [[from_sympy(self.matrix[i, j]) for j in range(4)] for i in range(4)]

    def __repr__(self) -> str:
        return f"LatticeMap({self.name!r}, {self.entries()})"


def _phi_formula(surface: SurfaceParams, v: ChernVector) -> ChernVector:
    # ch₀ -> d, ch₁ -> -ch₁ + (d - n)Θ + (c + ed/2 + s)f, ch₂ -> -c - de + ne/2
    e = surface.e
    d = v.fiber_degree
    c = v.section_degree(surface)
    c1 = -v.ch1 + DivisorClass(d - v.n, c + e * d / 2 + v.s)
    return ChernVector.of(d, c1, -c - d * e + v.n * e / 2)


def twist_map(M: DivisorClass, surface: SurfaceParams = K3, name: str = "") -> LatticeMap:
    return LatticeMap.from_function(name or f"⊗𝒪({M})", lambda v: twist(v, M, surface))


def shift_map(k: int) -> LatticeMap:
    return LatticeMap.from_function(f"[{k}]", lambda v: shift(v, k))


def phi_map(surface: SurfaceParams = K3) -> LatticeMap:
    return LatticeMap.from_function("Φ", lambda v: _phi_formula(surface, v))


def phi_hat_map(surface: SurfaceParams = K3) -> LatticeMap:
    """Φ̂ = -Φ⁻¹, forced by Φ̂Φ ≅ id[-1]"""
    inverse = phi_map(surface).inverse()
    return LatticeMap("Φ̂", -inverse.matrix)


def psi_map(d_alpha: Rational, surface: SurfaceParams = K3) -> LatticeMap:
    """Ψ = Φ(_ ⊗ 𝒪(-α))"""
    alpha = alpha_class(d_alpha, surface)
    composite = phi_map(surface) @ twist_map(-alpha, surface, "⊗𝒪(-α)")
    return LatticeMap("Ψ", composite.matrix)


def psi_prime_map(d_alpha: Rational, surface: SurfaceParams = K3) -> LatticeMap:
    """Ψ' = 𝒪(α) ⊗ Φ⁻¹(_)[-1]"""
    alpha = alpha_class(d_alpha, surface)
    composite = twist_map(alpha, surface, "⊗𝒪(α)") @ phi_map(surface).inverse() @ shift_map(-1)
    return LatticeMap("Ψ'", composite.matrix)


def upsilon_map(surface: SurfaceParams = K3) -> LatticeMap:
    """Υ = Φ(_) ⊗ 𝒪(f)"""
    composite = twist_map(DivisorClass.fiber(), surface, "⊗𝒪(f)") @ phi_map(surface)
    return LatticeMap("Υ", composite.matrix)


def upsilon_prime_map(surface: SurfaceParams = K3) -> LatticeMap:
    """Υ' = Φ⁻¹(_ ⊗ 𝒪(-f))[-1]"""
    composite = (phi_map(surface).inverse()
                 @ twist_map(-DivisorClass.fiber(), surface, "⊗𝒪(-f)")
                 @ shift_map(-1))
    return LatticeMap("Υ'", composite.matrix)


def phi(surface: SurfaceParams, v: ChernVector) -> ChernVector:
    return phi_map(surface).apply(v)


def phi_hat(surface: SurfaceParams, v: ChernVector) -> ChernVector:
    return phi_hat_map(surface).apply(v)


def psi(surface: SurfaceParams, d_alpha: Rational, v: ChernVector) -> ChernVector:
    return psi_map(d_alpha, surface).apply(v)


def psi_prime(surface: SurfaceParams, d_alpha: Rational, v: ChernVector) -> ChernVector:
    return psi_prime_map(d_alpha, surface).apply(v)


def upsilon(surface: SurfaceParams, v: ChernVector) -> ChernVector:
    return upsilon_map(surface).apply(v)


def upsilon_prime(surface: SurfaceParams, v: ChernVector) -> ChernVector:
    return upsilon_prime_map(surface).apply(v)


MAP_BUILDERS = {
    "phi": lambda surface, d_alpha: phi_map(surface),
    "phi-hat": lambda surface, d_alpha: phi_hat_map(surface),
    "psi": lambda surface, d_alpha: psi_map(d_alpha, surface),
    "psi-prime": lambda surface, d_alpha: psi_prime_map(d_alpha, surface),
    "upsilon": lambda surface, d_alpha: upsilon_map(surface),
    "upsilon-prime": lambda surface, d_alpha: upsilon_prime_map(surface),
}


def euler_invariance_sign(surface: SurfaceParams = K3) -> int:
    """
    Compare χ(Φv, Φw) with χ(v, w) over all pairs of basis vectors

    Returns:
        1 if Φ preserves χ on the basis, -1 if it negates it, 0 otherwise
    """
    require_k3(surface, "euler_invariance_sign")
    transform = phi_map(surface)
    basis = ChernVector.basis()
    preserved = negated = True
    for v in basis:
        for w in basis:
            before = euler_pairing(v, w, surface)
            after = euler_pairing(transform(v), transform(w), surface)
            preserved &= after == before
            negated &= after == -before
    if preserved:
        return 1
    return -1 if negated else 0


class IdentityCheck(NamedTuple):
    name: str
    expected: ChernVector
    actual: ChernVector
    passed: bool


def _check(name: str, expected: ChernVector, actual: ChernVector) -> IdentityCheck:
    return IdentityCheck(name, expected, actual, expected == actual)


def named_object_checks(surface: SurfaceParams, d_alpha: Rational) -> List[IdentityCheck]:
    """
    Evaluate the named-object transform identities at lattice level

    Args:
        surface: Must be K3
        d_alpha: D_α of α = Θ + (D_α + 2)f

    Returns:
        One IdentityCheck per identity, in a fixed order

    Raises:
        KThreeOnly: If e != 2
    """
    require_k3(surface, "named_object_checks")
    o_x = chern_named(NamedObject.STRUCTURE_SHEAF, surface)
    o_theta = lambda m: chern_named(NamedObject.THETA_SHEAF, surface, m=m)
    l0 = chern_named(NamedObject.L0, surface, d_alpha=d_alpha)
    l1 = chern_named(NamedObject.L1, surface, d_alpha=d_alpha)
    theta = DivisorClass.theta()

    phi_m = phi_map(surface)
    psi_m = psi_map(d_alpha, surface)
    psi_p = psi_prime_map(d_alpha, surface)
    ups_m = upsilon_map(surface)
    ups_p = upsilon_prime_map(surface)
    phi_h = phi_hat_map(surface)

    checks = [
        _check("Φ(𝒪_X) = 𝒪_Θ(-2)[-1]", shift(o_theta(-2), -1), phi_m(o_x)),
        _check("Φ(𝒪(-Θ)) = 𝒪(Θ)[-1]", shift(line_bundle(theta, surface), -1),
               phi_m(line_bundle(-theta, surface))),
        _check("Ψ(𝒪_Θ(-1)[1]) = L₀[1]", shift(l0, 1), psi_m(shift(o_theta(-1), 1))),
        _check("Ψ(𝒪_X[1]) = L₁", l1, psi_m(shift(o_x, 1))),
        _check("Ψ'(𝒪_Θ(-2)) = 𝒪(α)", line_bundle(alpha_class(d_alpha, surface), surface),
               psi_p(o_theta(-2))),
        _check("Υ(𝒪_Θ(-1)) = 𝒪_X", o_x, ups_m(o_theta(-1))),
    ]
    for v in ChernVector.basis():
        checks.append(_check(f"Φ̂Φ{v} = -v", -v, phi_h(phi_m(v))))
        checks.append(_check(f"ΨΨ'{v} = -v", -v, psi_m(psi_p(v))))
        checks.append(_check(f"Ψ'Ψ{v} = -v", -v, psi_p(psi_m(v))))
        checks.append(_check(f"ΥΥ'{v} = -v", -v, ups_m(ups_p(v))))
    return checks
