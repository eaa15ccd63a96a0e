"""Finite quivers, their adjacency spectra, and Dynkin bookkeeping.

Quiver text format::

    # comment
    vertices: a b c
    arrows: a->b b->c b->c

Repeated arrow tokens encode multiplicity. Both keywords may appear on
several lines; the declarations accumulate.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, QuiverSyntaxError
from .specmat import DEFAULT_TOL, ExtMatrix, SpectralBounds, spectral_radius

_NAME_RE = re.compile(r"^[^\s#>-][^\s#]*?$")
_ARROW_RE = re.compile(r"^(?P<src>[^\s#]+?)->(?P<dst>[^\s#]+)$")


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "arrows", tuple((str(s), str(t)) for s, t in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            dupes = sorted(v for v, c in Counter(self.vertices).items() if c > 1)
            raise DomainError(f"duplicate vertex names: {dupes}")
        known = set(self.vertices)
        for s, t in self.arrows:
            for v in (s, t):
                if v not in known:
                    raise DomainError(f"arrow {s}->{t} names unknown vertex {v!r}")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_arrows(self) -> int:
        return len(self.arrows)

    def full_subquiver(self, keep: Iterable[str]) -> "Quiver":
        keep = set(keep)
        verts = tuple(v for v in self.vertices if v in keep)
        return Quiver(verts, tuple((s, t) for s, t in self.arrows if s in keep and t in keep))

    def relabel(self, order: Sequence[str]) -> "Quiver":
        """Same quiver with vertices listed in ``order``."""
        if sorted(order) != sorted(self.vertices):
            raise DomainError("order must be a permutation of the vertices")
        return Quiver(tuple(order), self.arrows)

    def with_arrow(self, source: str, target: str) -> "Quiver":
        return Quiver(self.vertices, self.arrows + ((source, target),))

    def to_text(self) -> str:
        arrows = " ".join(f"{s}->{t}" for s, t in self.arrows)
        return f"vertices: {' '.join(self.vertices)}\narrows: {arrows}\n".replace("arrows: \n", "arrows:\n")


def parse_quiver(text: str) -> Quiver:
    """Parse the quiver DSL; errors carry 1-based line and column numbers."""
    vertices: list[str] = []
    positions: dict[str, tuple[int, int]] = {}
    arrows: list[tuple[str, str, int, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        head, sep, rest = line.partition(":")
        if not sep:
            col = len(line) - len(line.lstrip()) + 1
            raise QuiverSyntaxError("expected 'vertices:' or 'arrows:'", lineno, col)
        keyword = head.strip()
        offset = len(head) + 1
        tokens = [(m.group(), offset + m.start() + 1) for m in re.finditer(r"\S+", rest)]
        if keyword == "vertices":
            for tok, col in tokens:
                if not _NAME_RE.match(tok) or "->" in tok:
                    raise QuiverSyntaxError(f"invalid vertex name {tok!r}", lineno, col)
                if tok in positions:
                    raise QuiverSyntaxError(f"duplicate vertex {tok!r}", lineno, col)
                positions[tok] = (lineno, col)
                vertices.append(tok)
        elif keyword == "arrows":
            for tok, col in tokens:
                m = _ARROW_RE.match(tok)
                if not m:
                    raise QuiverSyntaxError(f"malformed arrow {tok!r}, expected source->target", lineno, col)
                arrows.append((m.group("src"), m.group("dst"), lineno, col))
        else:
            col = len(head) - len(head.lstrip()) + 1
            raise QuiverSyntaxError(f"unknown keyword {keyword!r}", lineno, col)

    known = set(vertices)
    for src, dst, lineno, col in arrows:
        for name in (src, dst):
            if name not in known:
                raise QuiverSyntaxError(f"arrow refers to unknown vertex {name!r}", lineno, col)
    return Quiver(tuple(vertices), tuple((s, t) for s, t, _, _ in arrows))


def adjacency_matrix(Q: Quiver) -> ExtMatrix:
    """Entry ``(i, j)`` counts arrows from vertex ``i`` to vertex ``j``."""
    pos = {v: k for k, v in enumerate(Q.vertices)}
    n = len(Q.vertices)
    counts = [[0] * n for _ in range(n)]
    for s, t in Q.arrows:
        counts[pos[s]][pos[t]] += 1
    return ExtMatrix(counts)


def fpdim_quiver(Q: Quiver, tol=DEFAULT_TOL) -> SpectralBounds:
    if Q.n_vertices == 0:
        return SpectralBounds.exact(0)
    return spectral_radius(adjacency_matrix(Q), tol)


# -- standard quivers --------------------------------------------------------


def jordan_quiver() -> Quiver:
    return Quiver(("1",), (("1", "1"),))


def loop_quiver(loops: int) -> Quiver:
    return Quiver(("1",), (("1", "1"),) * loops)


def kronecker_quiver(n: int) -> Quiver:
    return Quiver(("1", "2"), (("1", "2"),) * n)


def cyclic_quiver(r: int) -> Quiver:
    """One oriented cycle through ``r`` vertices (``r = 1`` is the Jordan quiver)."""
    names = tuple(str(k) for k in range(1, r + 1))
    return Quiver(names, tuple((names[k], names[(k + 1) % r]) for k in range(r)))


# -- Dynkin diagrams -----------------------------------------------------------


@dataclass(frozen=True)
class DynkinType:
    family: str
    n: int

    def __post_init__(self):
        family = self.family.upper()
        object.__setattr__(self, "family", family)
        if family == "A" and self.n >= 1:
            return
        if family == "D" and self.n >= 4:
            return
        if family == "E" and self.n in (6, 7, 8):
            return
        raise DomainError(f"invalid Dynkin type {self.family}{self.n}")

    @classmethod
    def parse(cls, text: str) -> "DynkinType":
        m = re.fullmatch(r"\s*([ADEade])_?(\d+)\s*", text)
        if not m:
            raise DomainError(f"cannot parse Dynkin type {text!r}")
        return cls(m.group(1), int(m.group(2)))

    def __str__(self):
        return f"{self.family}{self.n}"

    def edges(self) -> list[tuple[int, int]]:
        """Edges of the Dynkin graph on vertices ``0..n-1``."""
        n = self.n
        if self.family == "A":
            return [(k, k + 1) for k in range(n - 1)]
        if self.family == "D":
            return [(k, k + 1) for k in range(n - 2)] + [(n - 3, n - 1)]
        # E_n: chain 0-1-...-(n-2) with vertex n-1 attached to vertex 2
        return [(k, k + 1) for k in range(n - 2)] + [(2, n - 1)]


def coxeter_number(t: DynkinType) -> int:
    if t.family == "A":
        return t.n + 1
    if t.family == "D":
        return 2 * t.n - 2
    return {6: 12, 7: 18, 8: 30}[t.n]


def dynkin_quiver(t: DynkinType, orientation: Sequence[bool] | None = None) -> Quiver:
    """Orient the Dynkin graph; ``orientation[k]`` flips edge ``k`` when true."""
    edges = t.edges()
    if orientation is None:
        orientation = [False] * len(edges)
    if len(orientation) != len(edges):
        raise DomainError(f"{t} has {len(edges)} edges, got {len(orientation)} orientation flags")
    names = tuple(str(k + 1) for k in range(t.n))
    arrows = tuple(
        (names[b], names[a]) if flip else (names[a], names[b]) for (a, b), flip in zip(edges, orientation)
    )
    return Quiver(names, arrows)


# -- weighted projective lines ------------------------------------------------------


class WeightClass(str, enum.Enum):
    DOMESTIC = "domestic"
    TUBULAR = "tubular"
    WILD = "wild"


_TUBULAR = {(2, 3, 6), (3, 3, 3), (2, 4, 4), (2, 2, 2, 2)}
_DOMESTIC_TRIPLES = {(2, 3, 3), (2, 3, 4), (2, 3, 5)}


def normalize_weights(weights: Iterable[int]) -> tuple[int, ...]:
    """Sort ascending after dropping weights equal to 1."""
    weights = tuple(int(p) for p in weights)
    if not weights:
        raise DomainError("empty weight sequence")
    if any(p < 1 for p in weights):
        raise DomainError(f"weights must be positive integers, got {weights}")
    return tuple(sorted(p for p in weights if p != 1))


def classify_weights(weights: Iterable[int]) -> WeightClass:
    p = normalize_weights(weights)
    if len(p) <= 2:
        return WeightClass.DOMESTIC
    if len(p) == 3 and (p[:2] == (2, 2) or p in _DOMESTIC_TRIPLES):
        return WeightClass.DOMESTIC
    if p in _TUBULAR:
        return WeightClass.TUBULAR
    return WeightClass.WILD
