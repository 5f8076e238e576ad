"""
Stability and twisted-ampleness regions in the (D_ω, V_ω) quadrant

For ω = R(Θ + (D+e)f) and α = Θ + (D_α+e)f every predicate here reduces to
the sign of a polynomial in (D, V, D_α, e), so classification is exact.
"""

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Tuple

from tqdm import tqdm

from .errors import HypothesisViolated, KThreeOnly, WindowEmpty
from .lattice import K3, Rational, SurfaceParams, as_fraction, format_rational

MAX_RASTER_SIDE = 4096


class Membership(str, Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def _membership(value: Fraction) -> Membership:
    if value > 0:
        return Membership.INSIDE
    if value == 0:
        return Membership.BOUNDARY
    return Membership.OUTSIDE


@dataclass(frozen=True)
class RegionQuery:
    """
    A point (D, V) of the quadrant together with α = Θ + (D_α + e)f

    Interior queries need D > 0 and V > 0; set allow_boundary to admit the
    closed quadrant.
    """

    d_alpha: Fraction
    d: Fraction
    v: Fraction
    surface: SurfaceParams = K3
    allow_boundary: bool = False

    def __post_init__(self):
        for name in ("d_alpha", "d", "v"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.allow_boundary:
            if self.d < 0 or self.v < 0:
                raise HypothesisViolated(f"({self.d}, {self.v}) is outside the closed quadrant")
        elif self.d <= 0 or self.v <= 0:
            raise HypothesisViolated(f"Interior query needs D > 0 and V > 0, got ({self.d}, {self.v})")

    def at(self, d: Rational, v: Rational) -> "RegionQuery":
        return RegionQuery(self.d_alpha, as_fraction(d), as_fraction(v), self.surface,
                           self.allow_boundary)


def omega_alpha(q: RegionQuery) -> Fraction:
    """ωα/R = D + D_α + e"""
    return q.d + q.d_alpha + q.surface.e


def volume_value(q: RegionQuery) -> Fraction:
    """4V(D + e/2) - (D + D_α + e)², a positive multiple of ω² - (ωα)²/ω²"""
    return 4 * q.v * (q.d + q.surface.half_e) - omega_alpha(q) ** 2


def twisted_value(q: RegionQuery) -> Fraction:
    """g(D, V) = D(V - e/2) + D_α(D_α + e)"""
    e = q.surface.e
    return q.d * (q.v - e / 2) + q.d_alpha * (q.d_alpha + e)


def positivity(q: RegionQuery) -> bool:
    return omega_alpha(q) > 0


def volume_ok(q: RegionQuery) -> bool:
    """ω² ≥ ωα, written as 4V(D + e/2) ≥ (D + D_α + e)²"""
    return volume_value(q) >= 0


def twisted_ample(q: RegionQuery) -> bool:
    """Twisted ampleness criterion; its reduction to g > 0 assumes ωα > 0"""
    return positivity(q) and twisted_value(q) > 0


def volume_membership(q: RegionQuery) -> Membership:
    return _membership(volume_value(q))


def twisted_membership(q: RegionQuery) -> Membership:
    if not positivity(q):
        return Membership.OUTSIDE
    return _membership(twisted_value(q))


class TransformedConditions(NamedTuple):
    """
    Conditions on (ω', α') after Φ swaps D and V and sends D_α to -D_α - 3e/2
    """

    positive: bool
    volume_ok: bool
    twisted_ample: bool

    def all(self) -> bool:
        return self.positive and self.volume_ok and self.twisted_ample


def transformed_conditions(q: RegionQuery) -> TransformedConditions:
    e = q.surface.e
    shifted = q.v - q.d_alpha - e / 2
    positive = shifted > 0
    volume = 4 * q.d * (q.v + e / 2) >= shifted ** 2
    twisted = positive and q.v * (q.d - e / 2) + (q.d_alpha + 3 * e / 2) * (q.d_alpha + e / 2) > 0
    return TransformedConditions(positive, volume, twisted)


def _twisted_ample_case(q: RegionQuery) -> Optional[str]:
    if not q.surface.is_k3():
        return None
    if q.d_alpha == -1:
        return "case D_α = -1"
    if q.d_alpha == -2:
        return "case D_α = -2"
    return None


def theorem_provenance(surface: SurfaceParams, d_alpha: Rational) -> Optional[str]:
    """
    Name of the main theorem giving stability on all of ωα > 0, or None

    On a K3 surface every integer D_α is covered: D_α < -2 by the negative
    theorem, D_α ≥ 0 and D_α ∈ {-1, -2} by the K3 theorem.
    """
    d_alpha = as_fraction(d_alpha)
    if d_alpha.denominator != 1:
        return None
    if d_alpha < -surface.e:
        return "negative D_α theorem (D_α < -e)"
    if not surface.is_k3():
        return None
    if d_alpha >= 0:
        return "K3 theorem, D_α ≥ 0"
    # integer with -2 ≤ D_α < 0
    return "K3 theorem, D_α ∈ {-1, -2}"


@dataclass(frozen=True)
class RegionLabel:
    d: Fraction
    v: Fraction
    positive: bool
    volume_ok: bool
    twisted_ample: bool
    thm1_stable: bool
    transform_case_stable: bool
    theorem_region_stable: bool
    volume: Membership
    twisted: Membership
    case_provenance: Optional[str] = None
    theorem_provenance: Optional[str] = None

    def to_row(self) -> Dict[str, str]:
        """One CSV row; booleans as 0/1"""
        return {
            "D": format_rational(self.d),
            "V": format_rational(self.v),
            "positive": str(int(self.positive)),
            "volume_ok": str(int(self.volume_ok)),
            "twisted_ample": str(int(self.twisted_ample)),
            "thm1": str(int(self.thm1_stable)),
            "case": str(int(self.transform_case_stable)),
            "theorem": str(int(self.theorem_region_stable)),
        }

    def to_json(self) -> Dict[str, object]:
        return {
            "D": format_rational(self.d),
            "V": format_rational(self.v),
            "positive": self.positive,
            "volume_ok": self.volume_ok,
            "twisted_ample": self.twisted_ample,
            "thm1_stable": self.thm1_stable,
            "transform_case_stable": self.transform_case_stable,
            "theorem_region_stable": self.theorem_region_stable,
            "volume": self.volume.value,
            "twisted": self.twisted.value,
            "case_provenance": self.case_provenance,
            "theorem_provenance": self.theorem_provenance,
        }


def classify(q: RegionQuery) -> RegionLabel:
    """
    Label a point with every region flag

    transform_case_stable holds when the transformed pair satisfies the three
    conditions, or, for e = 2 and D_α ∈ {-1, -2}, when L is twisted ample.
    theorem_region_stable is positivity alone wherever a main theorem covers
    (e, D_α); the theorem's name is kept in theorem_provenance.
    """
    positive = positivity(q)
    volume = volume_ok(q)
    twisted = twisted_ample(q)
    thm1 = positive and volume and twisted

    case = _twisted_ample_case(q)
    transformed = transformed_conditions(q).all()
    case_stable = transformed or (case is not None and twisted)
    if transformed:
        case_provenance = "transformed conditions"
    elif case_stable:
        case_provenance = case
    else:
        case_provenance = None

    provenance = theorem_provenance(q.surface, q.d_alpha)
    return RegionLabel(
        d=q.d,
        v=q.v,
        positive=positive,
        volume_ok=volume,
        twisted_ample=twisted,
        thm1_stable=thm1,
        transform_case_stable=case_stable,
        theorem_region_stable=provenance is not None and positive,
        volume=volume_membership(q),
        twisted=twisted_membership(q),
        case_provenance=case_provenance,
        theorem_provenance=provenance,
    )


@dataclass(frozen=True)
class TangencyData:
    """
    Geometry of the volume boundary V(D) = (D + D_α + e)²/(4(D + e/2))
    at its tangency with the D-axis
    """

    surface: SurfaceParams
    d_alpha: Fraction
    point: Tuple[Fraction, Fraction]
    g_at_point: Fraction

    @property
    def neighborhood_ok(self) -> bool:
        return self.g_at_point > 0

    def boundary_value_at(self, d: Rational) -> Fraction:
        d = as_fraction(d)
        e = self.surface.e
        return (d + self.d_alpha + e) ** 2 / (4 * (d + e / 2))

    def derivative_at(self, d: Rational) -> Fraction:
        """dV/dD = (D + D_α + e)(D - D_α)/(4(D + e/2)²)"""
        d = as_fraction(d)
        e = self.surface.e
        return (d + self.d_alpha + e) * (d - self.d_alpha) / (4 * (d + e / 2) ** 2)

    def g_at(self, d: Rational, v: Rational) -> Fraction:
        d, v = as_fraction(d), as_fraction(v)
        e = self.surface.e
        return d * (v - e / 2) + self.d_alpha * (self.d_alpha + e)


def tangency_data(surface: SurfaceParams, d_alpha: Rational) -> TangencyData:
    """
    Tangency point P = (-(D_α + e), 0) and g(P) = (D_α + e)(D_α + e/2)

    Raises:
        HypothesisViolated: If D_α is not an integer below -e
    """
    d_alpha = as_fraction(d_alpha)
    if d_alpha.denominator != 1 or d_alpha >= -surface.e:
        raise HypothesisViolated(f"tangency needs an integer D_α < -e, got {d_alpha}")
    e = surface.e
    point = (-(d_alpha + e), Fraction(0))
    return TangencyData(surface, d_alpha, point, (d_alpha + e) * (d_alpha + e / 2))


@dataclass(frozen=True)
class RasterWindow:
    d_min: Fraction
    v_min: Fraction
    d_max: Fraction
    v_max: Fraction

    def __post_init__(self):
        for name in ("d_min", "v_min", "d_max", "v_max"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.d_max <= self.d_min or self.v_max <= self.v_min:
            raise WindowEmpty(
                f"Window [{self.d_min}, {self.d_max}] × [{self.v_min}, {self.v_max}] is empty"
            )
        if self.d_min < 0 or self.v_min < 0:
            raise HypothesisViolated("Raster windows must lie in the closed quadrant")


def _grid(lo: Fraction, hi: Fraction, count: int) -> List[Fraction]:
    if count == 1:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


@dataclass(frozen=True)
class RegionRaster:
    """Grid of labels; rows run over V ascending, columns over D ascending"""

    surface: SurfaceParams
    d_alpha: Fraction
    window: RasterWindow
    nx: int
    ny: int
    rows: Tuple[Tuple[RegionLabel, ...], ...]

    def cells(self) -> List[RegionLabel]:
        return [label for row in self.rows for label in row]


def raster(surface: SurfaceParams, d_alpha: Rational, window: RasterWindow, nx: int, ny: int,
           threads: int = 1, progress: bool = False) -> RegionRaster:
    """
    Classify an nx × ny grid whose corners are the window corners

    Args:
        surface: Surface parameters
        d_alpha: D_α of α
        window: Closed window in the quadrant
        nx: Columns (D samples)
        ny: Rows (V samples)
        threads: Worker threads; rows are reassembled in order
        progress: Show a tqdm bar over rows

    Raises:
        HypothesisViolated: If nx or ny is outside [1, 4096]
    """
    for name, count in (("nx", nx), ("ny", ny)):
        if not 1 <= count <= MAX_RASTER_SIDE:
            raise HypothesisViolated(f"{name} must be in [1, {MAX_RASTER_SIDE}], got {count}")
    base = RegionQuery(as_fraction(d_alpha), window.d_min, window.v_min, surface,
                       allow_boundary=True)
    ds = _grid(window.d_min, window.d_max, nx)
    vs = _grid(window.v_min, window.v_max, ny)

    def classify_row(v: Fraction) -> Tuple[RegionLabel, ...]:
        return tuple(classify(base.at(d, v)) for d in ds)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        rows = tuple(tqdm(executor.map(classify_row, vs), total=ny, desc="Raster rows",
                          disable=not progress))
    return RegionRaster(surface, base.d_alpha, window, nx, ny, rows)


def witness_stable_not_twisted_ample(surface: SurfaceParams = K3,
                                     d_alpha: Rational = 0) -> Tuple[Fraction, Fraction]:
    """
    A point where L is stable by the K3 theorem but not twisted ample

    With V = e/4 the criterion g(D, V) = -De/4 + D_α(D_α + e) fails as soon
    as D > 4D_α(D_α + e)/e; V is halved further if needed.

    Raises:
        KThreeOnly: If e != 2
        HypothesisViolated: If D_α < 0
    """
    if not surface.is_k3():
        raise KThreeOnly(f"witness needs e = 2, got e = {surface.e}")
    d_alpha = as_fraction(d_alpha)
    if d_alpha < 0:
        raise HypothesisViolated(f"witness needs D_α ≥ 0, got {d_alpha}")
    e = surface.e
    k = d_alpha * (d_alpha + e)
    d = Fraction(int(4 * k / e) + 1)
    v = e / 4
    q = RegionQuery(d_alpha, d, v, surface)
    while twisted_ample(q):
        v /= 2
        q = q.at(d, v)
    return (q.d, q.v)


class GoingUpViolation(NamedTuple):
    flag: str
    base: Tuple[Fraction, Fraction]
    moved: Tuple[Fraction, Fraction]


def _random_rational(rng: random.Random, lo: int, hi: int, denominator: int = 16) -> Fraction:
    return Fraction(rng.randint(lo * denominator + 1, hi * denominator), denominator)


def going_up_consistent(surface: SurfaceParams, d_alpha: Rational, samples: int = 200,
                        seed: int = 0, extent: int = 10) -> List[GoingUpViolation]:
    """
    Sample the monotonicity the going-up argument relies on

    Checked moves: thm1_stable, positivity and twisted_ample persist as V
    grows; positivity persists as D grows; twisted_ample persists as D grows
    whenever V ≥ e/2.

    Returns:
        Violations found; an empty list means the sample is consistent
    """
    rng = random.Random(seed)
    d_alpha = as_fraction(d_alpha)
    violations = []
    for _ in range(samples):
        d = _random_rational(rng, 0, extent)
        v = _random_rational(rng, 0, extent)
        q = RegionQuery(d_alpha, d, v, surface)
        before = classify(q)
        up = q.at(d, v + _random_rational(rng, 0, extent))
        right = q.at(d + _random_rational(rng, 0, extent), v)
        after_up = classify(up)
        after_right = classify(right)

        checks = [
            ("thm1_stable", before.thm1_stable, after_up.thm1_stable, up),
            ("positive", before.positive, after_up.positive, up),
            ("twisted_ample", before.twisted_ample, after_up.twisted_ample, up),
            ("positive", before.positive, after_right.positive, right),
        ]
        if v >= surface.e / 2:
            checks.append(("twisted_ample", before.twisted_ample, after_right.twisted_ample, right))
        for flag, held, holds, moved in checks:
            if held and not holds:
                violations.append(GoingUpViolation(flag, (d, v), (moved.d, moved.v)))
    return violations
