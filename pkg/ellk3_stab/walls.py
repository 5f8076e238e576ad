"""
Potential walls, mini-walls on volume rays, destabilizer search and
stability certificates for line-bundle classes

Walls live in the frame ω₀ = Θ + (D₀+e)f, H₀ = Θ - D₀f with N = 2D₀ + e,
using scaled coordinates (x̃, ỹ, z̃) = √N·(x, y, z): the stability
parameter is xω = x̃ω₀/N and B = (ỹω₀ + z̃H₀)/N, so every quadric
coefficient is rational.
"""

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple, Union

import sympy
from mpmath import iv
from tqdm import tqdm

from .charges import (
    ChargeSpec,
    Family,
    compare_phase,
    eval_charge,
    heart_necessary,
)
from .errors import HypothesisViolated, NotAmple, ParallelSlopes, ParseError, StabilityError
from .fmt import from_sympy, to_sympy
from .lattice import (
    K3,
    ChernVector,
    DivisorClass,
    OmegaClass,
    Rational,
    SurfaceParams,
    as_fraction,
    bg_classical,
    bg_k3_strong,
    exact_sqrt,
    format_rational,
    intersect,
    is_ample,
    parse_rational,
    point_class,
    self_intersection,
    twist,
)

_X, _Y, _Z = sympy.symbols("x y z")

MONOMIALS = ("xx", "yy", "zz", "xy", "xz", "yz", "x", "y", "z", "1")

_MONOMIAL_TERMS = {
    "xx": _X ** 2, "yy": _Y ** 2, "zz": _Z ** 2,
    "xy": _X * _Y, "xz": _X * _Z, "yz": _Y * _Z,
    "x": _X, "y": _Y, "z": _Z, "1": sympy.Integer(1),
}


@dataclass(frozen=True)
class WallFrame:
    """Orthogonal frame (ω₀, H₀) with ω₀² = -H₀² = N = 2D₀ + e"""

    d0: Fraction
    surface: SurfaceParams = K3

    def __post_init__(self):
        object.__setattr__(self, "d0", as_fraction(self.d0))
        if self.d0 <= 0:
            raise HypothesisViolated(f"Wall frame needs D₀ > 0 so that ω₀ is ample, got {self.d0}")

    @property
    def omega0(self) -> DivisorClass:
        return DivisorClass(1, self.d0 + self.surface.e)

    @property
    def h0(self) -> DivisorClass:
        return DivisorClass(1, -self.d0)

    @property
    def norm_sq(self) -> Fraction:
        return 2 * self.d0 + self.surface.e

    def normalized_coordinates(self, xt: Rational, yt: Rational, zt: Rational) -> Tuple[float, float, float]:
        """(x, y, z) in the unit frame ω = ω₀/√N, H = H₀/√N"""
        root = math.sqrt(self.norm_sq)
        return (float(xt) / root, float(yt) / root, float(zt) / root)

    def parameters(self, xt: Rational, yt: Rational, zt: Rational) -> Tuple[DivisorClass, DivisorClass]:
        """(xω, B) at a scaled point"""
        xt, yt, zt = as_fraction(xt), as_fraction(yt), as_fraction(zt)
        n = self.norm_sq
        return self.omega0 * (xt / n), (self.omega0 * yt + self.h0 * zt) * (1 / n)

    def charge_at(self, xt: Rational, yt: Rational, zt: Rational) -> ChargeSpec:
        """
        Raises:
            NotAmple: If x̃ <= 0
        """
        omega, b_field = self.parameters(xt, yt, zt)
        return ChargeSpec.standard(omega, b_field, self.surface)


class WallKind(str, Enum):
    ZERO = "zero"
    DEGENERATE = "degenerate"
    REGULAR = "regular"


class QuadricCoefficients(NamedTuple):
    xx: Fraction
    yy: Fraction
    zz: Fraction
    xy: Fraction
    xz: Fraction
    yz: Fraction
    x: Fraction
    y: Fraction
    z: Fraction
    c: Fraction

    def evaluate(self, xt: Rational, yt: Rational, zt: Rational) -> Fraction:
        x, y, z = as_fraction(xt), as_fraction(yt), as_fraction(zt)
        return (self.xx * x * x + self.yy * y * y + self.zz * z * z
                + self.xy * x * y + self.xz * x * z + self.yz * y * z
                + self.x * x + self.y * y + self.z * z + self.c)

    def is_zero(self) -> bool:
        return not any(self)

    def homogeneous_matrix(self) -> sympy.Matrix:
        """Symmetric 4×4 matrix of the quadric in (x̃, ỹ, z̃, 1)"""
        h = Fraction(1, 2)
        rows = [
            [self.xx, h * self.xy, h * self.xz, h * self.x],
            [h * self.xy, self.yy, h * self.yz, h * self.y],
            [h * self.xz, h * self.yz, self.zz, h * self.z],
            [h * self.x, h * self.y, h * self.z, self.c],
        ]
        return sympy.Matrix([[to_sympy(v) for v in row] for row in rows])

    def to_json(self) -> Dict[str, str]:
        return {name: format_rational(value) for name, value in zip(MONOMIALS, self)}


@dataclass(frozen=True)
class WallRecord:
    """
    W(v_e, v_f) = {Re Z(v_e)·Im Z(v_f) = Re Z(v_f)·Im Z(v_e)} in scaled coordinates

    The stored quadric is N²/x̃ times the difference of the two sides.
    """

    frame: WallFrame
    v_e: ChernVector
    v_f: ChernVector
    coefficients: QuadricCoefficients
    kind: WallKind

    def value_at(self, xt: Rational, yt: Rational, zt: Rational) -> Fraction:
        return self.coefficients.evaluate(xt, yt, zt)

    def relation_at(self, xt: Rational, yt: Rational, zt: Rational) -> Fraction:
        """
        N²/x̃·(Re Z(v_e)·Im Z(v_f) - Re Z(v_f)·Im Z(v_e)) from direct charge evaluation

        Raises:
            NotAmple: If x̃ <= 0
        """
        spec = self.frame.charge_at(xt, yt, zt)
        ze, zf = eval_charge(spec, self.v_e), eval_charge(spec, self.v_f)
        n = self.frame.norm_sq
        return n * n / as_fraction(xt) * (ze.re * zf.im - zf.re * ze.im)

    def to_json(self) -> Dict[str, object]:
        return {
            "D0": format_rational(self.frame.d0),
            "e": format_rational(self.frame.surface.e),
            "vE": self.v_e.to_json(),
            "vF": self.v_f.to_json(),
            "kind": self.kind.value,
            "coefficients": self.coefficients.to_json(),
        }


def _pair(u, w, e):
    return -e * u[0] * w[0] + u[0] * w[1] + u[1] * w[0]


def _symbolic_wall(frame: WallFrame, v_e: ChernVector, v_f: ChernVector) -> sympy.Expr:
    e = to_sympy(frame.surface.e)
    n_sq = to_sympy(frame.norm_sq)
    omega0 = (sympy.Integer(1), to_sympy(frame.omega0.b))
    h0 = (sympy.Integer(1), to_sympy(frame.h0.b))
    b_field = tuple((_Y * w + _Z * h) / n_sq for w, h in zip(omega0, h0))

    def re_and_im(v: ChernVector):
        n, s = to_sympy(v.n), to_sympy(v.s)
        c1 = (to_sympy(v.a), to_sympy(v.b))
        twisted = tuple(c - n * b for c, b in zip(c1, b_field))
        ch2_b = s - _pair(b_field, c1, e) + n * _pair(b_field, b_field, e) / 2
        re = -ch2_b + n * _X ** 2 / (2 * n_sq)
        return re, _pair(omega0, twisted, e)

    re_e, im_e = re_and_im(v_e)
    re_f, im_f = re_and_im(v_f)
    return sympy.expand(n_sq * (re_e * im_f - re_f * im_e))


def _coefficients(expr: sympy.Expr) -> QuadricCoefficients:
    poly = sympy.Poly(expr, _X, _Y, _Z)
    if poly.total_degree() > 2:
        raise ValueError(f"wall relation has degree {poly.total_degree()}")
    return QuadricCoefficients(*(from_sympy(poly.coeff_monomial(_MONOMIAL_TERMS[m])) for m in MONOMIALS))


def wall_quadric(frame: WallFrame, v_e: ChernVector, v_f: ChernVector) -> WallRecord:
    """
    Derive the potential wall of v_e against v_f from the defining relation

    Args:
        frame: Coordinate frame
        v_e: Chern vector of the candidate
        v_f: Chern vector of the reference object

    Returns:
        WallRecord; ZERO when every point is on the wall, DEGENERATE when
        the homogenized quadric is semidefinite (empty or lower-dimensional
        real locus)
    """
    coefficients = _coefficients(_symbolic_wall(frame, v_e, v_f))
    if coefficients.is_zero():
        kind = WallKind.ZERO
    else:
        matrix = coefficients.homogeneous_matrix()
        semidefinite = matrix.is_positive_semidefinite or (-matrix).is_positive_semidefinite
        kind = WallKind.DEGENERATE if semidefinite else WallKind.REGULAR
    return WallRecord(frame, v_e, v_f, coefficients, kind)


class SliceCircle(NamedTuple):
    center_y: Fraction
    radius_sq: Fraction
    z: Fraction

    def to_json(self) -> Dict[str, str]:
        return {"z": format_rational(self.z), "center_y": format_rational(self.center_y),
                "radius_sq": format_rational(self.radius_sq)}


def slice_circle(record: WallRecord, z: Rational) -> Optional[SliceCircle]:
    """
    Intersect the wall with the plane z̃ = z

    Returns:
        The circle x̃² + (ỹ - center_y)² = radius_sq, or None when the slice
        is not a circle centered on the ỹ-axis or has no real points
    """
    z = as_fraction(z)
    q = record.coefficients
    a = q.xx
    if a == 0 or q.yy != a or q.xy != 0 or q.x + q.xz * z != 0:
        return None
    linear_y = q.y + q.yz * z
    constant = q.zz * z * z + q.z * z + q.c
    center = -linear_y / (2 * a)
    radius_sq = center * center - constant / a
    if radius_sq < 0:
        return None
    return SliceCircle(center, radius_sq, z)


def circles_nested(first: SliceCircle, second: SliceCircle) -> bool:
    """
    True when one disk contains the other: |c₁ - c₂| <= |r₁ - r₂|, compared exactly
    """
    gap_sq = (first.center_y - second.center_y) ** 2
    # |r₁ - r₂|² = r₁² + r₂² - 2r₁r₂
    slack = first.radius_sq + second.radius_sq - gap_sq
    if slack < 0:
        return False
    return 4 * first.radius_sq * second.radius_sq <= slack * slack


class WallDiagnostic(NamedTuple):
    display: str
    matches: bool
    factor: str
    mismatched_terms: Tuple[str, ...]

    def to_json(self) -> Dict[str, object]:
        return {"display": self.display, "matches": self.matches, "factor": self.factor,
                "mismatched_terms": list(self.mismatched_terms)}


def _displayed_wall(frame: WallFrame, v_e: ChernVector, v_f: ChernVector) -> Optional[Tuple[str, sympy.Expr]]:
    e = to_sympy(frame.surface.e)
    root = sympy.sqrt(to_sympy(frame.norm_sq))
    x, y, z = _X / root, _Y / root, _Z / root
    omega0 = (sympy.Integer(1), to_sympy(frame.omega0.b))
    h0 = (sympy.Integer(1), to_sympy(frame.h0.b))

    def components(v: ChernVector):
        c1 = (to_sympy(v.a), to_sympy(v.b))
        return _pair(omega0, c1, e) / root, -_pair(h0, c1, e) / root

    r, d = to_sympy(v_e.n), to_sympy(v_e.s)
    e_omega, e_h = components(v_e)
    if v_f == ChernVector.of(0, DivisorClass.fiber(), 0):
        expr = (r * x ** 2 / 2 + r * y ** 2 / 2 + r * z ** 2 / 2 + r * y * z
                - e_omega * z - e_h * z - d)
        return "W(E, O_f)", sympy.expand(expr)
    if v_f.n == 1:
        l_omega, l_h = components(v_f)
        l2 = to_sympy(v_f.s)
        lead = r * l_omega - e_omega
        expr = (lead * (x ** 2 + y ** 2 + z ** 2) / 2 - y * z * (r * l_h - e_h)
                + y * (d - l2 * r) - z * (e_h * l_omega - l_h * e_omega) - (d * l_omega - l2 * e_omega))
        return "W(E, L)", sympy.expand(expr)
    return None


def displayed_wall_diagnostic(frame: WallFrame, v_e: ChernVector, v_f: ChernVector) -> Optional[WallDiagnostic]:
    """
    Compare the derived quadric with the closed-form expansion printed for
    walls against 𝒪_f and against a line bundle

    The two are compared up to a common factor after rescaling the display
    to (x̃, ỹ, z̃).

    Returns:
        None when no printed expansion applies to v_f
    """
    displayed = _displayed_wall(frame, v_e, v_f)
    if displayed is None:
        return None
    name, expr = displayed
    derived = wall_quadric(frame, v_e, v_f).coefficients
    poly = sympy.Poly(expr, _X, _Y, _Z)
    shown = [sympy.nsimplify(poly.coeff_monomial(_MONOMIAL_TERMS[m])) for m in MONOMIALS]
    ours = [to_sympy(v) for v in derived]

    pivot = next((i for i, v in enumerate(ours) if v != 0), None)
    if pivot is None:
        mismatched = tuple(m for m, v in zip(MONOMIALS, shown) if sympy.simplify(v) != 0)
        return WallDiagnostic(name, not mismatched, "0", mismatched)
    if sympy.simplify(shown[pivot]) == 0:
        return WallDiagnostic(name, False, "undefined", MONOMIALS)
    factor = sympy.simplify(ours[pivot] / shown[pivot])
    mismatched = tuple(m for m, a, b in zip(MONOMIALS, ours, shown)
                       if sympy.simplify(a - factor * b) != 0)
    return WallDiagnostic(name, not mismatched, str(factor), mismatched)


class RaySide(str, Enum):
    STABLE_ABOVE = "stable_above"
    UNSTABLE_ABOVE = "unstable_above"


@dataclass(frozen=True)
class RayMiniWall:
    t_root: Fraction
    candidate: ChernVector
    side: RaySide

    def to_json(self) -> Dict[str, object]:
        return {"t": format_rational(self.t_root), "candidate": self.candidate.to_json(),
                "side": self.side.value}


def _ray_data(h: DivisorClass, b_field: DivisorClass, v: ChernVector,
              surface: SurfaceParams) -> Tuple[Fraction, Fraction, Fraction]:
    # (n, ch₂^B, H·ch₁^B); g(t) = (ch₂^B - t·n)/(H·ch₁^B)
    twisted = twist(v, -b_field, surface)
    im = intersect(h, twisted.ch1, surface)
    if im == 0:
        raise HypothesisViolated(f"Im Z_(H,B,t)({v}) = 0 on the whole ray")
    return twisted.n, twisted.s, im


def ray_slope(h: DivisorClass, b_field: DivisorClass, v: ChernVector, t: Rational,
              surface: SurfaceParams = K3) -> Fraction:
    """g_v(t) = -Re Z_(H,B,t)(v)/Im Z_(H,B,t)(v)"""
    n, s, im = _ray_data(h, b_field, v, surface)
    return (s - as_fraction(t) * n) / im


def mini_wall_root(h: DivisorClass, b_field: DivisorClass, v_target: ChernVector,
                   candidate: ChernVector, surface: SurfaceParams = K3) -> Fraction:
    """
    Solve g_A(t) = g_E(t), i.e. t(n_E·h_A - n_A·h_E) = s_E·h_A - s_A·h_E

    Raises:
        ParallelSlopes: If the equation has no unique root
        HypothesisViolated: If an imaginary part vanishes on the ray
    """
    n_e, s_e, h_e = _ray_data(h, b_field, v_target, surface)
    n_a, s_a, h_a = _ray_data(h, b_field, candidate, surface)
    lead = n_e * h_a - n_a * h_e
    rhs = s_e * h_a - s_a * h_e
    if lead == 0:
        detail = "identical" if rhs == 0 else "parallel"
        raise ParallelSlopes(f"g-lines of {candidate} and {v_target} are {detail}")
    return rhs / lead


def mini_walls_on_ray(h: DivisorClass, b_field: DivisorClass, v_target: ChernVector,
                      candidates: Sequence[ChernVector], surface: SurfaceParams = K3) -> List[RayMiniWall]:
    """
    Positive mini-walls of v_target on the ray t ↦ Z_(H,B,t), outermost first

    Candidates whose g-line is parallel to the target's are skipped. Above
    the outermost root a twisted-Gieseker-stable target stays stable.

    Raises:
        NotAmple: If H is not ample
        HypothesisViolated: If an imaginary part vanishes on the ray
    """
    if not is_ample(h, surface):
        raise NotAmple(f"H = {h} is not ample")
    n_e, _, h_e = _ray_data(h, b_field, v_target, surface)
    walls = []
    for candidate in candidates:
        try:
            root = mini_wall_root(h, b_field, v_target, candidate, surface)
        except ParallelSlopes:
            continue
        if root <= 0:
            continue
        n_a, _, h_a = _ray_data(h, b_field, candidate, surface)
        # d/dt (g_A - g_E) = n_E/h_E - n_A/h_A
        drift = n_e / h_e - n_a / h_a
        side = RaySide.STABLE_ABOVE if drift < 0 else RaySide.UNSTABLE_ABOVE
        walls.append(RayMiniWall(root, candidate, side))
    walls.sort(key=lambda w: (-w.t_root, w.candidate.as_tuple()))
    return walls


_IV_LOCK = threading.Lock()
_IV_PRECISIONS = (53, 106, 212, 424, 848)
ENCLOSURE_WIDTH = 1e-12


@dataclass(frozen=True)
class RankBound:
    """
    ch₀(A) < ωα/(ω²(D + √(D² + 1))) with D = (α² - ω²)/(2ωα)

    lower/upper enclose the bound; exact is set when the bound is rational.
    """

    lower: float
    upper: float
    floor: int
    certified: bool
    exact: Optional[Fraction] = None

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_json(self) -> Dict[str, object]:
        return {
            "lower": repr(self.lower),
            "upper": repr(self.upper),
            "floor": self.floor,
            "certified": self.certified,
            "exact": None if self.exact is None else format_rational(self.exact),
        }


def _iv_rational(value: Fraction):
    return iv.mpf(value.numerator) / iv.mpf(value.denominator)


def _exact_rank_bound(omega: DivisorClass, alpha: DivisorClass, surface: SurfaceParams) -> Optional[Fraction]:
    omega_sq = self_intersection(omega, surface)
    omega_alpha = intersect(omega, alpha, surface)
    d = (self_intersection(alpha, surface) - omega_sq) / (2 * omega_alpha)
    root = exact_sqrt(d * d + 1)
    if root is None:
        return None
    return omega_alpha / (omega_sq * (d + root))


def rank_bound(surface: SurfaceParams, alpha: DivisorClass,
               omega: Union[DivisorClass, OmegaClass]) -> RankBound:
    """
    Upper bound on the rank of a destabilizing subobject of a line bundle
    with c₁ = α, enclosed by interval arithmetic

    Precision doubles until the enclosure is narrower than 1e-12 and pins
    down the integer floor.

    Raises:
        HypothesisViolated: If ω is not ample or ωα <= 0
    """
    omega = OmegaClass.of(omega)
    if not omega.is_ample(surface):
        raise HypothesisViolated(f"rank bound needs ample ω, got {omega.direction}")
    direction_alpha = omega.dot_direction(alpha, surface)
    if direction_alpha <= 0:
        raise HypothesisViolated(f"rank bound needs ωα > 0, got direction·α = {direction_alpha}")

    exact_omega = omega.exact_divisor()
    if exact_omega is not None:
        exact = _exact_rank_bound(exact_omega, alpha, surface)
        if exact is not None:
            value = float(exact)
            return RankBound(value, value, math.floor(exact), True, exact)

    direction_sq = self_intersection(omega.direction, surface)
    alpha_sq = self_intersection(alpha, surface)
    with _IV_LOCK:
        saved = iv.prec
        try:
            for bits in _IV_PRECISIONS:
                iv.prec = bits
                root_scale = iv.sqrt(_iv_rational(omega.scale))
                omega_sq = _iv_rational(omega.scale * direction_sq)
                omega_alpha = root_scale * _iv_rational(direction_alpha)
                d = (_iv_rational(alpha_sq) - omega_sq) / (2 * omega_alpha)
                bound = omega_alpha / (omega_sq * (d + iv.sqrt(d * d + 1)))
                lower, upper = float(bound.a), float(bound.b)
                certified = (upper - lower < ENCLOSURE_WIDTH
                             and math.floor(lower) == math.floor(upper))
                if certified:
                    break
        finally:
            iv.prec = saved
    # an uncertified floor takes the upper end so the search stays a superset
    return RankBound(lower, upper, math.floor(upper), certified)


class SearchBounds(NamedTuple):
    max_c_theta: int
    max_c_f: int
    max_points: int

    @classmethod
    def parse(cls, text: str) -> "SearchBounds":
        """
        Raises:
            ParseError: If the text is not three non-negative integers "a,b,c"
        """
        parts = text.split(",") if isinstance(text, str) else []
        if len(parts) != 3:
            raise ParseError(f"Malformed bounds: {text!r} (expected 'maxCTheta,maxCf,maxPoints')")
        values = [parse_rational(p) for p in parts]
        if any(v.denominator != 1 or v < 0 for v in values):
            raise ParseError(f"Bounds must be non-negative integers: {text!r}")
        return cls(*(int(v) for v in values))


@dataclass(frozen=True)
class Candidate:
    """A numerical destabilizer: a class A with φ(A) ≥ φ(L) passing the filters"""

    vector: ChernVector
    rank: int
    curve: Optional[DivisorClass]
    points: Optional[int]
    negative_curve: bool
    comparison: int

    def sort_key(self):
        return (self.rank,) + self.vector.as_tuple()

    def to_json(self) -> Dict[str, object]:
        return {
            "rank": self.rank,
            "chern": self.vector.to_json(),
            "curve": None if self.curve is None else [format_rational(self.curve.a),
                                                      format_rational(self.curve.b)],
            "points": self.points,
            "negative_curve": self.negative_curve,
            "phase_comparison": self.comparison,
        }


def geometric_omega(spec: ChargeSpec) -> OmegaClass:
    """
    The ample ω whose σ_ω orders phases like spec

    Z_(V,D) is σ_ω for ω = R(Θ + (D+e)f) with Im rescaled by 1/R; the ray
    charge Z_(H,B,t) has ω²/2 = t along H.

    Raises:
        NotAmple: For weak families
    """
    surface = spec.surface
    if spec.family in (Family.STANDARD, Family.TODD):
        return spec.omega
    if spec.family is Family.VD:
        return OmegaClass.from_dv(spec.param("D"), spec.param("V"), surface)
    if spec.family is Family.RAY:
        h = spec.omega.direction
        return OmegaClass(h, 2 * spec.param("t") / self_intersection(h, surface))
    raise NotAmple(f"{spec.family.value} has no ample polarization")


def _require_line_bundle(v: ChernVector, surface: SurfaceParams):
    if v.n != 1 or v.s != self_intersection(v.ch1, surface) / 2:
        raise HypothesisViolated(f"{v} is not the class of a line bundle")


def _accepts(spec: ChargeSpec, a: ChernVector, v_l: ChernVector) -> Optional[int]:
    if not heart_necessary(spec, a) or not heart_necessary(spec, v_l - a):
        return None
    try:
        comparison = compare_phase(spec, a, v_l)
    except StabilityError:
        # Z(A) = 0 with no tabulated phase: not a class of the heart
        return None
    return comparison if comparison >= 0 else None


def _rank_one_row(spec: ChargeSpec, v_l: ChernVector, p: int, bounds: SearchBounds) -> List[Candidate]:
    surface = spec.surface
    found = []
    for q in range(bounds.max_c_f + 1):
        if p == 0 and q == 0:
            continue
        curve = DivisorClass(p, q)
        twisted = twist(v_l, -curve, surface)
        negative = p > 0 and 2 * q < p * surface.e
        for n in range(bounds.max_points + 1):
            a = twisted - point_class() * n
            comparison = _accepts(spec, a, v_l)
            if comparison is not None:
                found.append(Candidate(a, 1, curve, n, negative, comparison))
    return found


def _higher_rank(spec: ChargeSpec, v_l: ChernVector, rank: int, bounds: SearchBounds,
                 strong_bg: bool) -> List[Candidate]:
    surface = spec.surface
    im_l = eval_charge(spec, v_l).im
    found = []
    for a in range(-bounds.max_c_theta, bounds.max_c_theta + 1):
        for b in range(-bounds.max_c_f, bounds.max_c_f + 1):
            c1 = DivisorClass(a, b)
            half_square = self_intersection(c1, surface) / 2
            im = eval_charge(spec, ChernVector.of(rank, c1, 0)).im
            if not 0 < im < im_l:
                continue
            threshold = self_intersection(c1, surface) / (2 * rank)
            if strong_bg and surface.is_k3():
                threshold += Fraction(1, rank) - rank
            # integrality: ch₂ - c₁²/2 ∈ ℤ
            top = half_square + math.floor(threshold - half_square)
            for k in range(bounds.max_points + 1):
                candidate = ChernVector.of(rank, c1, top - k)
                check = bg_k3_strong if strong_bg and surface.is_k3() else bg_classical
                if not check(candidate, surface):
                    continue
                comparison = _accepts(spec, candidate, v_l)
                if comparison is not None:
                    found.append(Candidate(candidate, rank, None, None, False, comparison))
    return found


def max_search_rank(spec: ChargeSpec, v_l: ChernVector) -> int:
    """Floor of the rank bound, or 1 when the bound does not apply"""
    try:
        bound = rank_bound(spec.surface, v_l.ch1, geometric_omega(spec))
    except StabilityError:
        return 1
    return max(1, bound.floor)


def enumerate_destabilizers(spec: ChargeSpec, v_l: ChernVector, bounds: SearchBounds,
                            strong_bg: bool = False, threads: int = 1,
                            progress: bool = False) -> List[Candidate]:
    """
    Search numerical destabilizers of a line-bundle class

    Rank one: A = L(-C) minus n points for effective C = pΘ + qf ≠ 0 in
    the box. Ranks 2 up to the rank-bound floor: c₁ in the box
    [-maxC_Θ, maxC_Θ] × [-maxC_f, maxC_f] with 0 < Im Z(A) < Im Z(L), and
    the maxPoints + 1 largest integral ch₂ allowed by Bogomolov-Gieseker.
    Every survivor lies in the heart numerically, has quotient L - A in the
    heart numerically, and has φ(A) ≥ φ(L).

    Args:
        spec: Central charge
        v_l: Line-bundle class
        bounds: Search box
        strong_bg: Use the strong K3 inequality for higher ranks
        threads: Worker threads; results are sorted afterwards
        progress: Show a tqdm bar over jobs

    Returns:
        Candidates sorted by (rank, n, a, b, s)

    Raises:
        HypothesisViolated: If v_l is not a line-bundle class
    """
    _require_line_bundle(v_l, spec.surface)
    jobs = [("rank-one", p) for p in range(bounds.max_c_theta + 1)]
    jobs += [("higher", r) for r in range(2, max_search_rank(spec, v_l) + 1)]

    def run(job):
        kind, value = job
        if kind == "rank-one":
            return _rank_one_row(spec, v_l, value, bounds)
        return _higher_rank(spec, v_l, value, bounds, strong_bg)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        chunks = list(tqdm(executor.map(run, jobs), total=len(jobs), desc="Destabilizer search",
                           disable=not progress))
    return sorted((c for chunk in chunks for c in chunk), key=Candidate.sort_key)


def twisted_ample_class(omega: Union[DivisorClass, OmegaClass], alpha: DivisorClass,
                        surface: SurfaceParams = K3) -> DivisorClass:
    """
    τ = ((ω² - α²)/(2ωα))·ω + α, rational even when ω = √s·ω̂ is not

    Raises:
        HypothesisViolated: If ωα = 0
    """
    omega = OmegaClass.of(omega)
    direction_alpha = omega.dot_direction(alpha, surface)
    if direction_alpha == 0:
        raise HypothesisViolated("twisted class needs ωα ≠ 0")
    omega_sq = omega.square(surface)
    coefficient = (omega_sq - self_intersection(alpha, surface)) / (2 * direction_alpha)
    return omega.direction * coefficient + alpha


class Verdict(str, Enum):
    NO_NUMERICAL_WALL = "NoNumericalWall"
    CANDIDATE_FOUND = "CandidateFound"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Certificate:
    """
    Finite numerical shadow of stability.

    NO_NUMERICAL_WALL is consistent with stability; CANDIDATE_FOUND lists
    numerical walls that need not be realized by objects.
    """

    verdict: Verdict
    candidates: Tuple[Candidate, ...] = ()
    reason: Optional[str] = None
    rank_floor: Optional[int] = None

    def to_json(self) -> Dict[str, object]:
        return {
            "verdict": self.verdict.value,
            "reason": self.reason,
            "rank_floor": self.rank_floor,
            "candidates": [c.to_json() for c in self.candidates],
        }


def _volume_holds(omega: OmegaClass, alpha: DivisorClass, surface: SurfaceParams) -> bool:
    # ω² ≥ ωα with ω = √s·ω̂ and ω̂α > 0: s(ω̂²)² ≥ (ω̂α)²
    direction_sq = self_intersection(omega.direction, surface)
    direction_alpha = omega.dot_direction(alpha, surface)
    return direction_sq > 0 and omega.scale * direction_sq ** 2 >= direction_alpha ** 2


def stability_certificate(spec: ChargeSpec, v_l: ChernVector, bounds: SearchBounds,
                          strong_bg: bool = False, threads: int = 1,
                          progress: bool = False) -> Certificate:
    """
    Certify the absence of numerical walls for a line-bundle class

    NO_NUMERICAL_WALL needs an empty finite search plus the sign argument
    excluding destabilizers outside the box: B = 0, ω² ≥ ωα, and the twisted
    class τ ample (τ·Θ > 0, τ·f > 0).

    Raises:
        HypothesisViolated: If v_l is not a line-bundle class
    """
    _require_line_bundle(v_l, spec.surface)
    surface = spec.surface
    if eval_charge(spec, v_l).im <= 0:
        return Certificate(Verdict.INCONCLUSIVE, reason="Im Z(L) ≤ 0: L not in heart")

    rank_floor = max_search_rank(spec, v_l)
    candidates = enumerate_destabilizers(spec, v_l, bounds, strong_bg, threads, progress)
    if candidates:
        return Certificate(Verdict.CANDIDATE_FOUND, tuple(candidates), rank_floor=rank_floor)

    try:
        omega = geometric_omega(spec)
    except NotAmple as e:
        return Certificate(Verdict.INCONCLUSIVE, reason=str(e), rank_floor=rank_floor)
    alpha = v_l.ch1
    failed = []
    if not spec.b_field.is_zero():
        failed.append("B ≠ 0: the cone argument needs B = 0")
    if not _volume_holds(omega, alpha, surface):
        failed.append("ω² < ωα: volume condition fails")
    if not is_ample(twisted_ample_class(omega, alpha, surface), surface):
        failed.append("twisted class not ample: L is not twisted ample")
    if failed:
        return Certificate(Verdict.INCONCLUSIVE, reason="; ".join(failed), rank_floor=rank_floor)
    return Certificate(Verdict.NO_NUMERICAL_WALL, rank_floor=rank_floor)
