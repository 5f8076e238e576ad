"""
Exact intersection theory and Chern-character arithmetic on a Weierstrass
elliptic surface, restricted to the sub-lattice spanned by {1, Θ, f, pt}.

Divisors are written M = aΘ + bf with Θ² = -e, Θ·f = 1, f² = 0. Chern
vectors are (n, a, b, s) with ch₁ = aΘ + bf and s = ch₂.
"""

import math
import re
import warnings
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from .errors import (
    HypothesisViolated,
    KThreeOnly,
    ParseError,
    UnsupportedName,
    ZeroRank,
    ZeroThetaComponent,
)

Rational = Union[int, Fraction]

_RATIONAL_PATTERN = re.compile(r"^\s*[+-]?\d+\s*(/\s*[+-]?\d+\s*)?$")


def as_fraction(value: Union[Rational, str]) -> Fraction:
    """
    Coerce an int, Fraction or "p/q" string to a Fraction

    Floats are rejected so that no rounded value enters the exact pipeline.

    Raises:
        ParseError: If the value is a float or a malformed string
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ParseError(f"Not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise ParseError(f"Not a rational: {value!r}")


def parse_rational(text: str) -> Fraction:
    """
    Parse a decimal-free rational such as "3", "-7/2" or " 1 / 4 "

    Raises:
        ParseError: If the text is malformed or the denominator is zero
    """
    if not isinstance(text, str) or not _RATIONAL_PATTERN.match(text):
        raise ParseError(f"Malformed rational: {text!r} (expected 'p' or 'p/q')")
    try:
        return Fraction(text.replace(" ", ""))
    except ZeroDivisionError:
        raise ParseError(f"Zero denominator in rational: {text!r}")


def format_rational(value: Rational) -> str:
    """Serialize a rational as a bit-exact "p/q" (or "p") string"""
    return str(Fraction(value))


def exact_sqrt(value: Fraction) -> Optional[Fraction]:
    """Return the rational square root of value, or None if it is irrational"""
    if value < 0:
        return None
    num = math.isqrt(value.numerator)
    den = math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


@dataclass(frozen=True)
class SurfaceParams:
    """
    Invariant e = -Θ² of the fibration; e = 2 selects a K3 surface
    """

    e: Fraction = Fraction(2)

    def __post_init__(self):
        e = as_fraction(self.e)
        if e <= 0:
            raise HypothesisViolated(f"e must be positive, got {e}")
        if e.denominator != 1:
            warnings.warn(f"e = {e} is not an integer; continuing with exact arithmetic")
        object.__setattr__(self, "e", e)

    @property
    def half_e(self) -> Fraction:
        return self.e / 2

    def is_k3(self) -> bool:
        return self.e == 2


K3 = SurfaceParams(Fraction(2))


def require_k3(surface: SurfaceParams, what: str):
    """
    Raises:
        KThreeOnly: If the surface is not K3
    """
    if not surface.is_k3():
        raise KThreeOnly(f"{what} is only defined for e = 2 (got e = {surface.e})")


@dataclass(frozen=True)
class DivisorClass:
    """A divisor aΘ + bf with exact rational coefficients"""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "b", as_fraction(self.b))

    @classmethod
    def theta(cls) -> "DivisorClass":
        return cls(Fraction(1), Fraction(0))

    @classmethod
    def fiber(cls) -> "DivisorClass":
        return cls(Fraction(0), Fraction(1))

    @classmethod
    def zero(cls) -> "DivisorClass":
        return cls(Fraction(0), Fraction(0))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(-self.a, -self.b)

    def __mul__(self, scalar: Rational) -> "DivisorClass":
        k = as_fraction(scalar)
        return DivisorClass(self.a * k, self.b * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"({self.a})Θ + ({self.b})f"


def intersect(M: DivisorClass, W: DivisorClass, surface: SurfaceParams = K3) -> Fraction:
    """
    Intersection number M·W under Θ² = -e, Θ·f = 1, f² = 0

    Args:
        M: First divisor
        W: Second divisor
        surface: Surface parameters (default K3)

    Returns:
        Exact rational M·W
    """
    return -surface.e * M.a * W.a + M.a * W.b + M.b * W.a


def self_intersection(M: DivisorClass, surface: SurfaceParams = K3) -> Fraction:
    return intersect(M, M, surface)


def is_ample(M: DivisorClass, surface: SurfaceParams = K3) -> bool:
    """
    Ampleness on the span of Θ and f: a > 0 and b/a > e
    """
    return M.a > 0 and M.b > surface.e * M.a


@dataclass(frozen=True)
class RdvCoords:
    """
    RDV view of a divisor M = R(Θ + (D + e)f) with V = M²/2

    R is stored as (sign, R²) so irrational scales never get rounded.
    """

    r_sign: int
    r_squared: Fraction
    d: Fraction
    v: Fraction

    def __post_init__(self):
        if self.r_sign not in (-1, 1):
            raise HypothesisViolated(f"R sign must be ±1, got {self.r_sign}")
        object.__setattr__(self, "r_squared", as_fraction(self.r_squared))
        object.__setattr__(self, "d", as_fraction(self.d))
        object.__setattr__(self, "v", as_fraction(self.v))
        if self.r_squared <= 0:
            raise HypothesisViolated("R must be nonzero")

    @classmethod
    def from_dv(cls, d: Rational, v: Rational, surface: SurfaceParams = K3,
                r_sign: int = 1) -> "RdvCoords":
        """
        Build the RDV view with prescribed D and V

        Raises:
            HypothesisViolated: If V/(D + e/2) is not positive
        """
        d = as_fraction(d)
        v = as_fraction(v)
        denom = d + surface.half_e
        if denom == 0 or v / denom <= 0:
            raise HypothesisViolated(
                f"No real R with V = R²(D + e/2) for D = {d}, V = {v}, e = {surface.e}"
            )
        return cls(r_sign, v / denom, d, v)

    @property
    def r(self) -> Optional[Fraction]:
        """Exact R when R² is a rational square, else None"""
        root = exact_sqrt(self.r_squared)
        return None if root is None else self.r_sign * root

    @property
    def r_float(self) -> float:
        return self.r_sign * math.sqrt(self.r_squared)

    def direction(self, surface: SurfaceParams = K3) -> DivisorClass:
        """The rational class Θ + (D + e)f"""
        return DivisorClass(Fraction(1), self.d + surface.e)


def rdv_of(M: DivisorClass, surface: SurfaceParams = K3) -> RdvCoords:
    """
    RDV coordinates of M

    Raises:
        ZeroThetaComponent: If M is a multiple of f
    """
    if M.a == 0:
        raise ZeroThetaComponent(f"{M} has no Θ-component and no RDV view")
    return RdvCoords(_sign(M.a), M.a * M.a, M.b / M.a - surface.e,
                     self_intersection(M, surface) / 2)


def divisor_of_rdv(r: RdvCoords, surface: SurfaceParams = K3) -> DivisorClass:
    """
    The divisor R(Θ + (D + e)f)

    Raises:
        HypothesisViolated: If R is irrational, since the divisor is then not rational
    """
    scale = r.r
    if scale is None:
        raise HypothesisViolated(f"R² = {r.r_squared} is not a rational square; use OmegaClass")
    return r.direction(surface) * scale


@dataclass(frozen=True)
class OmegaClass:
    """
    A positive multiple √scale·direction of a rational divisor.

    Used for polarizations given in RDV form, where R may be irrational.
    """

    direction: DivisorClass
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "scale", as_fraction(self.scale))
        if self.scale <= 0:
            raise HypothesisViolated("OmegaClass scale must be positive")

    @classmethod
    def of(cls, M: Union[DivisorClass, "OmegaClass"]) -> "OmegaClass":
        if isinstance(M, OmegaClass):
            return M
        return cls(M, Fraction(1))

    @classmethod
    def from_rdv(cls, r: RdvCoords, surface: SurfaceParams = K3) -> "OmegaClass":
        return cls(r.direction(surface) * r.r_sign, r.r_squared)

    @classmethod
    def from_dv(cls, d: Rational, v: Rational, surface: SurfaceParams = K3) -> "OmegaClass":
        return cls.from_rdv(RdvCoords.from_dv(d, v, surface), surface)

    def square(self, surface: SurfaceParams = K3) -> Fraction:
        return self.scale * self_intersection(self.direction, surface)

    def dot_direction(self, W: DivisorClass, surface: SurfaceParams = K3) -> Fraction:
        """direction·W; the true ω·W is √scale times this"""
        return intersect(self.direction, W, surface)

    def dot_float(self, W: DivisorClass, surface: SurfaceParams = K3) -> float:
        return math.sqrt(self.scale) * float(self.dot_direction(W, surface))

    def exact_divisor(self) -> Optional[DivisorClass]:
        root = exact_sqrt(self.scale)
        return None if root is None else self.direction * root

    def is_ample(self, surface: SurfaceParams = K3) -> bool:
        return is_ample(self.direction, surface)


@dataclass(frozen=True)
class ChernVector:
    """
    Chern character (n, a, b, s): rank, ch₁ = aΘ + bf, ch₂
    """

    n: Fraction
    a: Fraction
    b: Fraction
    s: Fraction

    def __post_init__(self):
        for name in ("n", "a", "b", "s"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))

    @classmethod
    def of(cls, n: Rational, c1: DivisorClass, s: Rational) -> "ChernVector":
        return cls(n, c1.a, c1.b, s)

    @classmethod
    def zero(cls) -> "ChernVector":
        return cls(0, 0, 0, 0)

    @classmethod
    def basis(cls) -> Tuple["ChernVector", ...]:
        return (cls(1, 0, 0, 0), cls(0, 1, 0, 0), cls(0, 0, 1, 0), cls(0, 0, 0, 1))

    @property
    def ch1(self) -> DivisorClass:
        return DivisorClass(self.a, self.b)

    @property
    def fiber_degree(self) -> Fraction:
        """d = f·ch₁"""
        return self.a

    def section_degree(self, surface: SurfaceParams = K3) -> Fraction:
        """c = Θ·ch₁"""
        return -surface.e * self.a + self.b

    def as_tuple(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.n, self.a, self.b, self.s)

    def is_zero(self) -> bool:
        return not any(self.as_tuple())

    def is_genuine(self, surface: SurfaceParams = K3) -> bool:
        """Integral rank and ch₁, and ch₂ - ch₁²/2 integral"""
        if any(x.denominator != 1 for x in (self.n, self.a, self.b)):
            return False
        return (self.s - self_intersection(self.ch1, surface) / 2).denominator == 1

    def __add__(self, other: "ChernVector") -> "ChernVector":
        return ChernVector(self.n + other.n, self.a + other.a, self.b + other.b, self.s + other.s)

    def __sub__(self, other: "ChernVector") -> "ChernVector":
        return ChernVector(self.n - other.n, self.a - other.a, self.b - other.b, self.s - other.s)

    def __neg__(self) -> "ChernVector":
        return ChernVector(-self.n, -self.a, -self.b, -self.s)

    def __mul__(self, scalar: Rational) -> "ChernVector":
        k = as_fraction(scalar)
        return ChernVector(self.n * k, self.a * k, self.b * k, self.s * k)

    __rmul__ = __mul__

    def to_json(self) -> Dict[str, str]:
        return {
            "n": format_rational(self.n),
            "theta": format_rational(self.a),
            "fiber": format_rational(self.b),
            "ch2": format_rational(self.s),
        }

    @classmethod
    def from_json(cls, data: Dict[str, str]) -> "ChernVector":
        """
        Raises:
            ParseError: If a key is missing or a value is not a "p/q" string
        """
        try:
            return cls(*(parse_rational(str(data[k])) for k in ("n", "theta", "fiber", "ch2")))
        except KeyError as e:
            raise ParseError(f"Chern vector JSON is missing key {e}")
        except TypeError:
            raise ParseError(f"Chern vector JSON must be an object, got {data!r}")

    def __str__(self) -> str:
        return f"({self.n}, {self.ch1}, {self.s})"


def line_bundle(M: DivisorClass, surface: SurfaceParams = K3) -> ChernVector:
    """ch 𝒪(M) = (1, M, M²/2)"""
    return ChernVector.of(1, M, self_intersection(M, surface) / 2)


def point_class() -> ChernVector:
    return ChernVector(0, 0, 0, 1)


def twist(v: ChernVector, M: DivisorClass, surface: SurfaceParams = K3) -> ChernVector:
    """
    ch(E ⊗ 𝒪(M)) = ch(E)·e^M = (n, c₁ + nM, s + M·c₁ + nM²/2)
    """
    c1 = v.ch1
    return ChernVector.of(
        v.n,
        c1 + M * v.n,
        v.s + intersect(M, c1, surface) + v.n * self_intersection(M, surface) / 2,
    )


def dual(v: ChernVector) -> ChernVector:
    return ChernVector(v.n, -v.a, -v.b, v.s)


def shift(v: ChernVector, k: int) -> ChernVector:
    return v if k % 2 == 0 else -v


def mukai_vector(v: ChernVector, surface: SurfaceParams = K3) -> Tuple[Fraction, DivisorClass, Fraction]:
    """
    Mukai vector ch·√td = (n, c₁, n + s) on a K3 surface

    Raises:
        KThreeOnly: If e != 2
    """
    require_k3(surface, "mukai_vector")
    return (v.n, v.ch1, v.n + v.s)


def mukai_pairing(v: ChernVector, w: ChernVector, surface: SurfaceParams = K3) -> Fraction:
    """
    (v, w) = c₁·c₁' - r·s' - r'·s on Mukai vectors (r, c₁, s)

    Raises:
        KThreeOnly: If e != 2
    """
    r1, c1, s1 = mukai_vector(v, surface)
    r2, c2, s2 = mukai_vector(w, surface)
    return intersect(c1, c2, surface) - r1 * s2 - r2 * s1


def euler_pairing(v: ChernVector, w: ChernVector, surface: SurfaceParams = K3) -> Fraction:
    """χ(v, w) = -(v, w)"""
    return -mukai_pairing(v, w, surface)


class NamedObject(str, Enum):
    """Objects whose Chern characters chern_named knows"""

    STRUCTURE_SHEAF = "O_X"
    FIBER_SHEAF = "O_f"
    POINT = "O_x"
    THETA_SHEAF = "O_Theta"
    LINE_BUNDLE = "O"
    L0 = "L0"
    L1 = "L1"


def alpha_class(d_alpha: Rational, surface: SurfaceParams = K3) -> DivisorClass:
    """α = Θ + (D_α + e)f"""
    return DivisorClass(Fraction(1), as_fraction(d_alpha) + surface.e)


def chern_named(name: Union[NamedObject, str], surface: SurfaceParams = K3, **params) -> ChernVector:
    """
    Chern character of a named object

    Args:
        name: A NamedObject or its string value
        surface: Surface parameters
        **params: m for O_Theta(m), divisor for O(M), d_alpha for L0/L1

    Returns:
        ChernVector of the object

    Raises:
        UnsupportedName: If the name is unknown or a parameter is missing
        KThreeOnly: For O_Theta(m) off a K3 surface
    """
    try:
        name = NamedObject(name)
    except ValueError:
        raise UnsupportedName(f"Unknown object name: {name}")

    try:
        if name is NamedObject.STRUCTURE_SHEAF:
            return ChernVector(1, 0, 0, 0)
        if name is NamedObject.FIBER_SHEAF:
            return ChernVector.of(0, DivisorClass.fiber(), 0)
        if name is NamedObject.POINT:
            return point_class()
        if name is NamedObject.THETA_SHEAF:
            require_k3(surface, "ch 𝒪_Θ(m)")
            return ChernVector.of(0, DivisorClass.theta(), as_fraction(params["m"]) + 1)
        if name is NamedObject.LINE_BUNDLE:
            return line_bundle(params["divisor"], surface)
        d_alpha = as_fraction(params["d_alpha"])
        if name is NamedObject.L0:
            return line_bundle(DivisorClass(0, -(d_alpha + 1)), surface)
        return line_bundle(DivisorClass(1, -(d_alpha + 2)), surface)
    except KeyError as e:
        raise UnsupportedName(f"{name.value} needs parameter {e}")


def bg_classical(v: ChernVector, surface: SurfaceParams = K3) -> bool:
    """
    Bogomolov-Gieseker: s <= c₁²/(2n)

    Raises:
        ZeroRank: If n = 0
    """
    if v.n == 0:
        raise ZeroRank("Bogomolov-Gieseker needs nonzero rank")
    return v.s <= self_intersection(v.ch1, surface) / (2 * v.n)


def bg_k3_strong(v: ChernVector, surface: SurfaceParams = K3) -> bool:
    """
    Strong K3 form: s <= c₁²/(2n) - n + 1/n

    Raises:
        ZeroRank: If n = 0
        KThreeOnly: If e != 2
    """
    require_k3(surface, "bg_k3_strong")
    if v.n == 0:
        raise ZeroRank("Bogomolov-Gieseker needs nonzero rank")
    return v.s <= self_intersection(v.ch1, surface) / (2 * v.n) - v.n + 1 / v.n


def hodge_upper(v: ChernVector, omega: Union[DivisorClass, OmegaClass],
                surface: SurfaceParams = K3) -> Fraction:
    """
    Hodge index bound c₁² <= (ω·c₁)²/ω²

    The bound is invariant under positive rescaling of ω, so an irrational
    OmegaClass is handled through its direction.

    Raises:
        HypothesisViolated: If ω² <= 0
    """
    direction = OmegaClass.of(omega).direction
    sq = self_intersection(direction, surface)
    if sq <= 0:
        raise HypothesisViolated(f"Hodge bound needs ω² > 0, got {sq}")
    return intersect(direction, v.ch1, surface) ** 2 / sq


def parse_divisor(text: str) -> DivisorClass:
    """
    Parse "a,b" into aΘ + bf

    Raises:
        ParseError: If the text is not two comma-separated rationals
    """
    parts = text.split(",") if isinstance(text, str) else []
    if len(parts) != 2:
        raise ParseError(f"Malformed divisor: {text!r} (expected 'a,b')")
    return DivisorClass(parse_rational(parts[0]), parse_rational(parts[1]))
