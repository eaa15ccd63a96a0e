"""Certified spectral radii of nonnegative rational matrices.

The answer is always an interval [lo, hi] of exact fractions that is
guaranteed to contain the spectral radius, narrowed to a tolerance.
"""

from fractions import Fraction

from fptheory import ExtMatrix, extended_spectral_radius, parse_matrix, spectral_radius

fib = ExtMatrix([[1, 1], [1, 0]])
b = spectral_radius(fib)
print("golden ratio lies in", b)
print("  width", float(b.width))

# a coarse tolerance returns a wider but still certified interval
print("sqrt 2 to 1/100:", spectral_radius(ExtMatrix([[0, 1], [2, 0]]), tol=Fraction(1, 100)))

# reducible matrices are split into strongly connected pieces first
print("triangular [[2,0],[5,1]]:", spectral_radius(ExtMatrix([[2, 0], [5, 1]])))

# infinity is allowed as an entry; it only matters when it sits on a cycle
for text in ("0 inf\n0 0\n", "0 inf\n1 0\n", "2 inf\n0 1\n"):
    A = parse_matrix(text)
    print(text.replace("\n", " | ").strip(" |"), "->", extended_spectral_radius(A))
