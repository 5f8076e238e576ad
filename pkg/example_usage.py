"""
Example usage of the ellk3-stab Python API
"""

from fractions import Fraction

from dotenv import load_dotenv

from ellk3_stab import (
    K3,
    ChargeSpec,
    ChernVector,
    DivisorClass,
    RdvCoords,
    RegionQuery,
    WallFrame,
    classify,
    eval_charge,
    phase,
    phi,
    psi_z,
    rank_bound,
    slice_circle,
    solve_simple,
    stability_certificate,
    wall_quadric,
)
from ellk3_stab.lattice import NamedObject, alpha_class, chern_named, line_bundle
from ellk3_stab.profiles import get_profile
from ellk3_stab.regions import RasterWindow, raster
from ellk3_stab.render import write_raster
from ellk3_stab.walls import SearchBounds

# Load environment variables
load_dotenv()

o_x = chern_named(NamedObject.STRUCTURE_SHEAF, K3)

# Example 1: Central charges and phases
print("Example 1: Z_(V,D) on the structure sheaf and its shift")
print("-" * 60)

spec = ChargeSpec.vd(Fraction(1, 2), 3, K3)
for name, v in (("O_X", o_x), ("O_X[1]", -o_x)):
    z = eval_charge(spec, v)
    print(f"Z({name}) = {z.re} + {z.im}i, phase {phase(spec, v).to_float():.4f}")


# Example 2: The Fourier-Mukai transform
print("\n\nExample 2: Φ on the Chern lattice of a K3 surface")
print("-" * 60)

print(f"Φ(O_X) = {phi(K3, o_x)}")
print(f"Φ(O_x) = {phi(K3, ChernVector(0, 0, 0, 1))}")


# Example 3: Solving the central charge equation
print("\n\nExample 3: Target charge of Φ at D_ω = 3, V_ω = 1/2")
print("-" * 60)

data = solve_simple(K3, RdvCoords.from_dv(3, Fraction(1, 2), K3), 0)
print(f"ω' = {data.omega_prime}, B' = {data.b_prime}, residual {data.residual:.2e}")
print(f"Closed form at B = -α: {psi_z(1, 1, 0).to_json()}")


# Example 4: Classifying points of the (D, V) quadrant
print("\n\nExample 4: Region labels for D_α = -1")
print("-" * 60)

for d, v in ((2, 2), (3, 1), (Fraction(1, 2), Fraction(1, 2))):
    label = classify(RegionQuery(-1, d, v, K3))
    print(f"(D, V) = ({d}, {v}): {label.to_row()}")


# Example 5: A raster of the regions, written as SVG
print("\n\nExample 5: Region raster")
print("-" * 60)

grid = raster(K3, -1, RasterWindow(Fraction(1, 10), Fraction(1, 10), 6, 6), 60, 60)
print(f"Wrote {write_raster(grid, 'region.svg')}")


# Example 6: Walls in the scaled (x̃, ỹ, z̃) frame
print("\n\nExample 6: Wall of O_X against O_f")
print("-" * 60)

record = wall_quadric(WallFrame(1), o_x, chern_named(NamedObject.FIBER_SHEAF, K3))
print(f"Kind: {record.kind.value}")
print(f"Slice at z̃ = 3: {slice_circle(record, 3)}")


# Example 7: Rank bound and a stability certificate
print("\n\nExample 7: Certificate for L = O(Θ + f)")
print("-" * 60)

bound = rank_bound(K3, DivisorClass(1, 1), DivisorClass(1, 4))
print(f"Destabilizer rank < {bound.upper:.6f} (floor {bound.floor}, certified {bound.certified})")

desk = get_profile("desk")
certificate = stability_certificate(ChargeSpec.vd(2, 2, K3), line_bundle(alpha_class(-1, K3), K3),
                                    SearchBounds(*desk["bounds"]))
print(f"Verdict: {certificate.verdict.value}")

print("\n✓ All examples complete!")
