"""Certified spectral radii of nonnegative matrices over the extended rationals.

Entries are exact :class:`fractions.Fraction` values or the sentinel
:data:`INF`. Floating point is used only to *find* a good positive test
vector; every returned bound is a Collatz-Wielandt quotient evaluated in
exact rational arithmetic, so the interval is rigorous regardless of how
the vector was obtained.

For an irreducible nonnegative matrix ``B`` and any strictly positive ``x``::

    min_i (Bx)_i / x_i  <=  rho(B)  <=  max_i (Bx)_i / x_i

A reducible matrix is split into strongly connected components and
``rho`` is the maximum over the diagonal blocks.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ConvergenceError, DomainError, InfinityNotAllowed, MatrixSyntaxError

INF = math.inf

ExtRational = Union[Fraction, float]

DEFAULT_TOL = Fraction(1, 10**9)
DEFAULT_MAX_ITER = 10**6

_RATIONAL_RE = re.compile(r"^[+]?\d+(/\d+)?$")


def as_ext(value) -> ExtRational:
    """Coerce ``value`` to an extended nonnegative rational.

    Accepts ints, Fractions, floats (converted exactly) and strings such as
    ``"3"``, ``"2/7"`` or ``"inf"``.
    """
    if isinstance(value, str):
        token = value.strip()
        if token.lower() in ("inf", "+inf", "∞"):
            return INF
        if token.lower() in ("-inf", "-∞"):
            raise DomainError("negative infinity is not a valid entry")
        if token.startswith("-"):
            raise DomainError(f"negative entry {token!r}")
        if not _RATIONAL_RE.match(token):
            raise MatrixSyntaxError(f"not a rational number: {token!r}")
        value = Fraction(token)
    elif isinstance(value, float):
        if math.isnan(value):
            raise DomainError("NaN entry")
        if math.isinf(value):
            if value < 0:
                raise DomainError("negative infinity is not a valid entry")
            return INF
        value = Fraction(value)
    elif isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        value = Fraction(value)
    else:
        raise TypeError(f"cannot interpret {value!r} as an extended rational")
    if value < 0:
        raise DomainError(f"negative entry {value}")
    return value


def as_tol(tol) -> Fraction:
    if isinstance(tol, float):
        tol = Fraction(repr(tol))
    tol = Fraction(tol)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    return tol


def format_ext(value: ExtRational) -> str:
    """Serialize as ``"p/q"``, ``"p"`` or ``"inf"``."""
    if value == INF:
        return "inf"
    if value == -INF:
        return "-inf"
    return str(Fraction(value))


@dataclass(frozen=True)
class SupportDigraph:
    """Directed graph with an edge ``i -> j`` iff entry ``(i, j)`` is nonzero."""

    n: int
    successors: tuple[tuple[int, ...], ...]

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.successors[i]


class ExtMatrix:
    """Immutable square matrix over the extended nonnegative rationals."""

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(as_ext(v) for v in row) for row in rows)
        n = len(rows)
        if n == 0:
            raise DomainError("matrix order must be positive")
        for k, row in enumerate(rows):
            if len(row) != n:
                raise DomainError(f"row {k} has length {len(row)}, expected {n}")
        self._rows = rows
        self._hash = None

    @classmethod
    def zeros(cls, n: int) -> "ExtMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "ExtMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[ExtRational, ...], ...]:
        return self._rows

    def __getitem__(self, index):
        i, j = index
        return self._rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, ExtMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(format_ext(v) for v in row) for row in self._rows)
        return f"ExtMatrix([{body}])"

    def is_finite(self) -> bool:
        return all(v != INF for row in self._rows for v in row)

    def transpose(self) -> "ExtMatrix":
        return ExtMatrix(zip(*self._rows))

    def submatrix(self, indices: Sequence[int]) -> "ExtMatrix":
        """Principal submatrix on ``indices`` (in the given order)."""
        return ExtMatrix([[self._rows[i][j] for j in indices] for i in indices])

    def replace_infinite(self, value) -> "ExtMatrix":
        value = as_ext(value)
        return ExtMatrix([[value if v == INF else v for v in row] for row in self._rows])

    def support(self) -> SupportDigraph:
        succ = tuple(tuple(j for j, v in enumerate(row) if v != 0) for row in self._rows)
        return SupportDigraph(self.n, succ)

    def to_strings(self) -> list[list[str]]:
        return [[format_ext(v) for v in row] for row in self._rows]

    def to_text(self) -> str:
        return "\n".join(" ".join(row) for row in self.to_strings()) + "\n"

    def to_float_array(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self._rows], dtype=float)


def parse_matrix(text: str) -> ExtMatrix:
    """Parse the whitespace-separated row-major matrix text format.

    Blank lines and ``#`` comments are ignored; ``inf`` denotes +infinity.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([as_ext(tok) for tok in line.split()])
        except (MatrixSyntaxError, DomainError) as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
    if not rows:
        raise MatrixSyntaxError("empty matrix")
    n = len(rows)
    for k, row in enumerate(rows):
        if len(row) != n:
            raise MatrixSyntaxError(f"matrix is not square: row {k + 1} has {len(row)} entries, expected {n}")
    return ExtMatrix(rows)


@dataclass(frozen=True)
class SpectralBounds:
    """Certified interval ``[lo, hi]`` containing a spectral radius.

    ``lo == hi == INF`` encodes an exactly infinite radius.
    """

    lo: ExtRational
    hi: ExtRational

    def __post_init__(self):
        if self.lo < 0:
            raise DomainError("lower bound must be nonnegative")
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value) -> "SpectralBounds":
        value = as_ext(value)
        return cls(value, value)

    @classmethod
    def infinite(cls) -> "SpectralBounds":
        return cls(INF, INF)

    @property
    def width(self) -> ExtRational:
        if self.hi == INF:
            return Fraction(0) if self.lo == INF else INF
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def is_infinite(self) -> bool:
        return self.hi == INF

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def midpoint(self) -> float:
        if self.is_infinite:
            return INF
        return float((self.lo + self.hi) / 2)

    def as_dict(self) -> dict:
        return {"lo": format_ext(self.lo), "hi": format_ext(self.hi)}

    def __str__(self):
        return f"[{format_ext(self.lo)}, {format_ext(self.hi)}]"


def scc_decompose(graph: SupportDigraph) -> list[tuple[int, ...]]:
    """Strongly connected components in reverse topological order (Tarjan).

    Each component is a sorted tuple of vertices. Iterative, so deep chains
    do not hit the recursion limit.
    """
    n = graph.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, k = work[-1]
            succ = graph.successors[v]
            if k < len(succ):
                work[-1] = (v, k + 1)
                w = succ[k]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                components.append(tuple(sorted(comp)))
    return components


def is_subpermutation(A: ExtMatrix) -> bool:
    """0/1 matrix with at most one 1 in every row and every column."""
    col_seen = [False] * A.n
    for row in A.rows:
        ones = 0
        for j, v in enumerate(row):
            if v == 0:
                continue
            if v != 1:
                return False
            ones += 1
            if ones > 1 or col_seen[j]:
                return False
            col_seen[j] = True
    return True


def _cw_bounds(B: list[list[Fraction]], x: list[Fraction]) -> tuple[Fraction, Fraction]:
    lo = hi = None
    for row, xi in zip(B, x):
        q = sum((b * xj for b, xj in zip(row, x) if b), Fraction(0)) / xi
        if lo is None or q < lo:
            lo = q
        if hi is None or q > hi:
            hi = q
    return lo, hi


def _round_out(lo: Fraction, hi: Fraction, tol: Fraction) -> tuple[Fraction, Fraction]:
    if lo == hi:
        return lo, hi
    k = max(1, math.ceil(math.log2(4 / tol)))
    denom = 1 << k
    lo_r = Fraction(math.floor(lo * denom), denom)
    hi_r = Fraction(math.ceil(hi * denom), denom)
    return max(lo_r, Fraction(0)), hi_r


def _to_positive_fractions(v: np.ndarray) -> list[Fraction] | None:
    v = np.abs(np.asarray(v, dtype=float))
    if not np.all(np.isfinite(v)) or v.max() <= 0:
        return None
    v = v / v.max()
    v = np.maximum(v, 1e-300)
    return [Fraction(float(t)) for t in v]


def _snap(x: list[Fraction]) -> list[Fraction]:
    return [max(t.limit_denominator(10**6), Fraction(1, 10**6)) for t in x]


def _irreducible_bounds(B: list[list[Fraction]], tol: Fraction, max_iter: int) -> tuple[Fraction, Fraction]:
    n = len(B)
    best = None

    def consider(x):
        nonlocal best
        lo, hi = _cw_bounds(B, x)
        if best is None or hi - lo < best[1] - best[0]:
            best = (lo, hi)
        return hi - lo

    # Constant row sums give an exact answer with the all-ones vector.
    if consider([Fraction(1)] * n) == 0:
        return best

    M = np.array([[float(b) for b in row] for row in B])
    shifted = M + np.eye(n)
    x = None
    try:
        vals, vecs = np.linalg.eig(M)
        x = _to_positive_fractions(vecs[:, int(np.argmax(vals.real))].real)
    except np.linalg.LinAlgError:
        pass
    xf = np.array([float(t) for t in x]) if x is not None else np.ones(n)

    iterations = 0
    stale = 0
    while iterations < max_iter:
        # A + I is primitive for irreducible A, so power iteration converges.
        for _ in range(8):
            xf = shifted @ xf
            xf = xf / xf.max()
        iterations += 8
        xq = _to_positive_fractions(xf)
        if xq is None:
            break
        before = best[1] - best[0]
        if consider(_snap(xq)) == 0:
            return best
        consider(xq)
        if best[1] - best[0] <= tol / 2:
            return _round_out(best[0], best[1], tol)
        stale = stale + 1 if best[1] - best[0] >= before else 0
        if stale >= 25:
            break

    # Float precision exhausted: continue in exact arithmetic, rounding the
    # iterate to dyadic rationals of growing precision.
    bits = 64
    x = [Fraction(t) for t in xf] if np.all(xf > 0) else [Fraction(1)] * n
    stale = 0
    while iterations < max_iter:
        y = [sum((b * xj for b, xj in zip(row, x) if b), Fraction(0)) + xi for row, xi in zip(B, x)]
        top = max(y)
        scale = 1 << bits
        x = [max(Fraction(round(t / top * scale), scale), Fraction(1, scale)) for t in y]
        iterations += 1
        before = best[1] - best[0]
        consider(x)
        if best[1] - best[0] <= tol / 2:
            return _round_out(best[0], best[1], tol)
        stale = stale + 1 if best[1] - best[0] >= before else 0
        if stale >= 10:
            bits *= 2
            stale = 0
    raise ConvergenceError(
        f"no certificate of width {tol} after {max_iter} iterations (best width {float(best[1] - best[0]):.3g})"
    )


def _check_finite(A: ExtMatrix):
    if not A.is_finite():
        raise InfinityNotAllowed("matrix has infinite entries; use extended_spectral_radius")


def spectral_radius(A: ExtMatrix, tol=DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralBounds:
    """Certified bounds on the Perron root of a finite nonnegative matrix.

    Returns ``[lo, hi]`` with ``hi - lo <= tol``; singleton components and
    vectors with exactly constant Collatz-Wielandt quotients yield exact
    (zero-width) results.
    """
    if not isinstance(A, ExtMatrix):
        A = ExtMatrix(A)
    _check_finite(A)
    tol = as_tol(tol)
    lo = hi = Fraction(0)
    for comp in scc_decompose(A.support()):
        if len(comp) == 1:
            i = comp[0]
            b_lo = b_hi = A[i, i]
        else:
            B = [[A[i, j] for j in comp] for i in comp]
            b_lo, b_hi = _irreducible_bounds(B, tol, max_iter)
        lo = max(lo, b_lo)
        hi = max(hi, b_hi)
    return SpectralBounds(lo, hi)


def infinite_entries_on_cycles(A: ExtMatrix) -> list[tuple[int, int]]:
    """Positions of infinite entries lying on a cycle of the support digraph."""
    where = {}
    for k, comp in enumerate(scc_decompose(A.support())):
        for v in comp:
            where[v] = k
    return [
        (i, j)
        for i, row in enumerate(A.rows)
        for j, v in enumerate(row)
        if v == INF and where[i] == where[j]
    ]


def extended_spectral_radius(A: ExtMatrix, tol=DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralBounds:
    """Spectral radius with infinite entries, as the limit over finite substitutions.

    ``rho`` is nondecreasing in every entry, so the limit is infinite exactly
    when some infinite entry lies on a cycle (an edge inside one strongly
    connected component). Otherwise infinite entries never enter a cycle
    product and may be replaced by 1 without changing the radius.
    """
    if not isinstance(A, ExtMatrix):
        A = ExtMatrix(A)
    if infinite_entries_on_cycles(A):
        return SpectralBounds.infinite()
    return spectral_radius(A.replace_infinite(1), tol, max_iter)
