"""Frobenius-Perron dimension of quivers via their adjacency matrices."""

from fptheory import DynkinType, classify_weights, coxeter_number, dynkin_quiver, fpdim_quiver, parse_quiver
from fptheory.quiver import cyclic_quiver, jordan_quiver, kronecker_quiver, loop_quiver

examples = {
    "Jordan quiver": jordan_quiver(),
    "two loops": loop_quiver(2),
    "oriented 5-cycle": cyclic_quiver(5),
    "Kronecker, 3 arrows": kronecker_quiver(3),
    "E8, some orientation": dynkin_quiver(DynkinType("E", 8)),
}
for name, Q in examples.items():
    print(f"{name:22s} fpdim = {fpdim_quiver(Q)}")

Q = parse_quiver("vertices: a b c\narrows: a->b b->c c->a a->a\n")
print("text quiver, 3-cycle with a loop:", fpdim_quiver(Q))

print()
for t in (DynkinType("A", 4), DynkinType("D", 6), DynkinType("E", 7)):
    print(f"Coxeter number of {t}: {coxeter_number(t)}")

print()
for w in [(2, 3, 5), (2, 3, 6), (2, 3, 7), (2, 2, 2, 2)]:
    print("weights", w, "->", classify_weights(w).value)
