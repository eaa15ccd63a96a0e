"""Calabi-Yau style invariants and growth of Hilbert series."""

from fractions import Fraction

from fptheory import (
    DynkinType,
    FractionalCYModel,
    RationalSeries,
    catalog_lookup,
    cy_tensor_sum,
    fp_kodaira_gorenstein,
    fpcy_fractional,
    hilbert_growth,
    veronese_series,
)
from fptheory.cycat import ade_model, format_value

for t in (DynkinType("A", 2), DynkinType("D", 5), DynkinType("E", 8)):
    print(f"fpcy of {t}: {fpcy_fractional(ade_model(t))}")
print("fractional model a=2, b=6 reduces to", FractionalCYModel(2, 6).reduced)
print("sum of two 1/3 values:", cy_tensor_sum(Fraction(1, 3), Fraction(1, 3)))

print()
for ell in (3, 0, -1):
    kappa, kappa_inv = fp_kodaira_gorenstein(3, ell, 3)
    print(f"Gorenstein d=3 ell={ell:2d} gk=3 -> kappa {format_value(kappa)}, inverse {format_value(kappa_inv)}")

print()
for p in range(1, 5):
    H = RationalSeries.polynomial_ring(p)
    V = veronese_series(H, 3)
    print(f"p={p}: first terms {[int(c) for c in H.coefficients(6)]}, growth {hilbert_growth(H)}, third Veronese growth {hilbert_growth(V)}")

print()
for entry in catalog_lookup("piontkovski:n=3"):
    print(f"{entry.invariant:12s} {format_value(entry.value):5s} {entry.provenance}")
