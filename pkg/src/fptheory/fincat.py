"""Frobenius-Perron invariants of a finite table of Hom dimensions.

A :class:`CategoryData` records, for a finite list of objects ``X_0..X_{k-1}``,
the matrix ``hom[i][j] = dim Hom(X_i, X_j)`` and for each available power
``n`` of an endofunctor ``sigma`` the matrix
``sigma[n][i][j] = dim Hom(X_i, sigma^n(X_j))``.

All suprema here run over the *supplied* universe only. For a category
whose bricks are all listed (a standard stable tube, say) this is the
exact invariant; in general it is a lower bound.
"""

from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DegenerateSet, DomainError, InsufficientData, InvalidDecomposition, MissingData
from .specmat import DEFAULT_TOL, INF, ExtMatrix, SpectralBounds, spectral_radius

IntMatrix = tuple[tuple[int, ...], ...]


def _int_matrix(rows, order: int, what: str) -> IntMatrix:
    rows = tuple(tuple(rows_i) for rows_i in rows)
    if len(rows) != order or any(len(r) != order for r in rows):
        raise DomainError(f"{what} must be {order}x{order}")
    out = []
    for r in rows:
        for v in r:
            integral = isinstance(v, int) or (isinstance(v, Fraction) and v.denominator == 1)
            if isinstance(v, bool) or not integral or v < 0:
                raise DomainError(f"{what} entries must be nonnegative integers, got {v!r}")
        out.append(tuple(int(v) for v in r))
    return tuple(out)


@dataclass(frozen=True, eq=True)
class CategoryData:
    objects: tuple[str, ...]
    hom: IntMatrix
    sigma: Mapping[int, IntMatrix] = field(default_factory=dict)
    sigma0_identity: bool = False

    def __post_init__(self):
        objects = tuple(str(o) for o in self.objects)
        if not objects:
            raise DomainError("object list is empty")
        if len(set(objects)) != len(objects):
            raise DomainError("object names must be unique")
        k = len(objects)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "hom", _int_matrix(self.hom, k, "hom"))
        sigma = {int(n): _int_matrix(m, k, f"sigma[{n}]") for n, m in self.sigma.items()}
        if sigma:
            keys = sorted(sigma)
            if keys != list(range(keys[0], keys[-1] + 1)):
                raise DomainError(f"sigma powers must form a contiguous range, got {keys}")
        if self.sigma0_identity and 0 in sigma and sigma[0] != self.hom:
            raise DomainError("sigma[0] must equal hom when sigma^0 is the identity")
        object.__setattr__(self, "sigma", dict(sorted(sigma.items())))

    __hash__ = None

    @property
    def size(self) -> int:
        return len(self.objects)

    def powers(self) -> list[int]:
        powers = set(self.sigma)
        if self.sigma0_identity:
            powers.add(0)
        return sorted(powers)

    def sigma_matrix(self, n: int) -> IntMatrix:
        if n in self.sigma:
            return self.sigma[n]
        if n == 0 and self.sigma0_identity:
            return self.hom
        raise MissingData(f"no data for sigma power {n} (available: {self.powers()})")

    def is_brick(self, i: int) -> bool:
        return self.hom[i][i] == 1

    def has_negative_powers(self) -> bool:
        return any(n < 0 for n in self.sigma)

    def is_atomic(self, i: int) -> bool:
        """Brick with no maps into its negative shifts (where that data exists)."""
        return self.is_brick(i) and all(m[i][i] == 0 for n, m in self.sigma.items() if n < 0)

    def index(self, name: str) -> int:
        try:
            return self.objects.index(name)
        except ValueError:
            raise DomainError(f"unknown object {name!r}") from None

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        out = {
            "objects": list(self.objects),
            "hom": [list(r) for r in self.hom],
            "sigma": {str(n): [list(r) for r in m] for n, m in self.sigma.items()},
        }
        if self.sigma0_identity:
            out["sigma0_identity"] = True
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> "CategoryData":
        try:
            objects = d["objects"]
            hom = d["hom"]
        except (KeyError, TypeError) as exc:
            raise DomainError(f"category data needs 'objects' and 'hom': missing {exc}") from None
        sigma_raw = d.get("sigma", {})
        try:
            sigma = {int(k): v for k, v in sigma_raw.items()}
        except ValueError:
            raise DomainError(f"sigma keys must be integers, got {sorted(sigma_raw)}") from None
        return cls(tuple(objects), hom, sigma, bool(d.get("sigma0_identity", False)))

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_json(cls, text: str) -> "CategoryData":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"invalid JSON: {exc}") from None
        return cls.from_dict(d)


class Flavor(str, enum.Enum):
    BRICK = "brick"
    ATOMIC = "atomic"
    TRIANGULAR_BRICK = "triangular-brick"
    TRIANGULAR_ATOMIC = "triangular-atomic"
    RAW = "raw"


@dataclass(frozen=True)
class ObjectSet:
    indices: tuple[int, ...]
    flavor: Flavor = Flavor.RAW

    def __post_init__(self):
        idx = tuple(sorted(set(int(i) for i in self.indices)))
        if len(idx) != len(self.indices):
            raise DomainError(f"duplicate indices in {self.indices}")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "flavor", Flavor(self.flavor))

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def names(self, data: CategoryData) -> list[str]:
        return [data.objects[i] for i in self.indices]


def _indices(data: CategoryData, phi) -> tuple[int, ...]:
    idx = tuple(phi.indices if isinstance(phi, ObjectSet) else phi)
    for i in idx:
        if not 0 <= i < data.size:
            raise IndexError(f"object index {i} out of range 0..{data.size - 1}")
    if len(set(idx)) != len(idx):
        raise DomainError(f"duplicate indices in {idx}")
    return idx


def is_brick_set(data: CategoryData, phi) -> bool:
    idx = _indices(data, phi)
    return all(data.hom[i][j] == (1 if i == j else 0) for i in idx for j in idx)


def is_atomic_set(data: CategoryData, phi) -> bool:
    idx = _indices(data, phi)
    return is_brick_set(data, idx) and all(data.is_atomic(i) for i in idx)


def _hom_acyclic(data: CategoryData, idx: Sequence[int]) -> bool:
    # Kahn's algorithm on nonzero Hom between distinct members.
    indeg = {i: sum(1 for j in idx if j != i and data.hom[j][i]) for i in idx}
    ready = [i for i in idx if indeg[i] == 0]
    seen = 0
    while ready:
        i = ready.pop()
        seen += 1
        for j in idx:
            if j != i and data.hom[i][j]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
    return seen == len(idx)


def is_triangular_set(data: CategoryData, phi, atomic: bool = False) -> bool:
    """Members are bricks (atomic) and Hom between them is triangular up to reordering."""
    idx = _indices(data, phi)
    test = data.is_atomic if atomic else data.is_brick
    return all(test(i) for i in idx) and _hom_acyclic(data, idx)


def is_object_set(data: CategoryData, phi, flavor: Flavor | str) -> bool:
    flavor = Flavor(flavor)
    if flavor is Flavor.BRICK:
        return is_brick_set(data, phi)
    if flavor is Flavor.ATOMIC:
        return is_atomic_set(data, phi)
    if flavor is Flavor.TRIANGULAR_BRICK:
        return is_triangular_set(data, phi)
    if flavor is Flavor.TRIANGULAR_ATOMIC:
        return is_triangular_set(data, phi, atomic=True)
    return len(_indices(data, phi)) > 0


# -- enumeration ----------------------------------------------------------------


def _members(data: CategoryData, flavor: Flavor, within) -> list[int]:
    pool = range(data.size) if within is None else sorted(set(_indices(data, within)))
    if flavor in (Flavor.BRICK, Flavor.TRIANGULAR_BRICK):
        return [i for i in pool if data.is_brick(i)]
    if flavor in (Flavor.ATOMIC, Flavor.TRIANGULAR_ATOMIC):
        return [i for i in pool if data.is_atomic(i)]
    return list(pool)


def _compat_masks(data: CategoryData, flavor: Flavor, members: list[int]) -> dict[int, int]:
    masks = {}
    for i in members:
        m = 0
        for j in members:
            if j == i:
                continue
            if flavor in (Flavor.BRICK, Flavor.ATOMIC):
                ok = data.hom[i][j] == 0 and data.hom[j][i] == 0
            elif flavor is Flavor.RAW:
                ok = True
            else:
                ok = not (data.hom[i][j] and data.hom[j][i])
            if ok:
                m |= 1 << j
        masks[i] = m
    return masks


def _dfs(data, flavor, masks, prefix, candidates, max_size) -> Iterator[tuple[int, ...]]:
    triangular = flavor in (Flavor.TRIANGULAR_BRICK, Flavor.TRIANGULAR_ATOMIC)
    while candidates:
        low = candidates & -candidates
        v = low.bit_length() - 1
        candidates ^= low
        current = prefix + (v,)
        if triangular and len(current) > 2 and not _hom_acyclic(data, current):
            continue
        yield current
        if max_size is None or len(current) < max_size:
            yield from _dfs(data, flavor, masks, current, candidates & masks[v], max_size)


def _sets_from_lead(args) -> list[tuple[int, ...]]:
    data_dict, flavor, within, max_size, lead = args
    data = CategoryData.from_dict(data_dict)
    flavor = Flavor(flavor)
    members = _members(data, flavor, within)
    masks = _compat_masks(data, flavor, members)
    later = sum(1 << j for j in members if j > lead) & masks[lead]
    out = [(lead,)]
    if max_size is None or max_size > 1:
        out.extend(_dfs(data, flavor, masks, (lead,), later, max_size))
    return out


def enumerate_object_sets(
    data: CategoryData,
    flavor: Flavor | str = Flavor.BRICK,
    max_size: int | None = None,
    within: Iterable[int] | None = None,
    workers: int | None = None,
) -> Iterator[ObjectSet]:
    """Every nonempty set of the given flavor, each once, in lexicographic order.

    ``within`` restricts the universe; ``workers > 1`` splits the search by
    leading index across processes and merges in order, so the output is
    identical to the sequential run.
    """
    flavor = Flavor(flavor)
    if max_size is not None and max_size < 1:
        return
    within = None if within is None else tuple(within)
    members = _members(data, flavor, within)
    if workers and workers > 1 and len(members) > 1:
        jobs = [(data.to_dict(), flavor.value, within, max_size, lead) for lead in members]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_sets_from_lead, jobs):
                for idx in chunk:
                    yield ObjectSet(idx, flavor)
        return
    masks = _compat_masks(data, flavor, members)
    allowed = sum(1 << i for i in members)
    for idx in _dfs(data, flavor, masks, (), allowed, max_size):
        yield ObjectSet(idx, flavor)


def enumerate_brick_sets(data: CategoryData, max_size: int | None = None, **kwargs) -> Iterator[ObjectSet]:
    return enumerate_object_sets(data, Flavor.BRICK, max_size, **kwargs)


def maximal_object_sets(
    data: CategoryData, flavor: Flavor | str = Flavor.BRICK, within: Iterable[int] | None = None
) -> list[ObjectSet]:
    """Maximal sets under inclusion, sorted lexicographically.

    Brick and atomic sets are cliques of the orthogonality graph, found by
    Bron-Kerbosch with pivoting. Other flavors filter the full enumeration.
    """
    flavor = Flavor(flavor)
    members = _members(data, flavor, within)
    if flavor not in (Flavor.BRICK, Flavor.ATOMIC):
        sets = [s.indices for s in enumerate_object_sets(data, flavor, within=within)]
        as_sets = [frozenset(s) for s in sets]
        maximal = [s for s, fs in zip(sets, as_sets) if not any(fs < other for other in as_sets)]
        return [ObjectSet(s, flavor) for s in sorted(maximal)]

    masks = _compat_masks(data, flavor, members)
    found: list[tuple[int, ...]] = []

    def bits(x):
        while x:
            low = x & -x
            yield low.bit_length() - 1
            x ^= low

    def expand(clique: int, cand: int, excl: int):
        if not cand and not excl:
            found.append(tuple(bits(clique)))
            return
        pivot = max(bits(cand | excl), key=lambda u: bin(cand & masks[u]).count("1"))
        for v in list(bits(cand & ~masks[pivot])):
            expand(clique | (1 << v), cand & masks[v], excl & masks[v])
            cand &= ~(1 << v)
            excl |= 1 << v

    if members:
        expand(0, sum(1 << i for i in members), 0)
    return [ObjectSet(s, flavor) for s in sorted(found)]


# -- adjacency and fp-invariants ------------------------------------------------


def adjacency_of(data: CategoryData, phi, n: int = 1) -> ExtMatrix:
    """``A(phi, sigma^n)`` with entry ``(i, j) = dim Hom(X_i, sigma^n X_j)``."""
    idx = _indices(data, phi)
    if not idx:
        raise DomainError("object set is empty")
    S = data.sigma_matrix(n)
    return ExtMatrix([[S[i][j] for j in idx] for i in idx])


def _max_bounds(bounds: Iterable[SpectralBounds]) -> SpectralBounds:
    lo = hi = Fraction(0)
    for b in bounds:
        lo = max(lo, b.lo)
        hi = max(hi, b.hi)
    return SpectralBounds(lo, hi)


def fpdim_n(
    data: CategoryData,
    n_objects: int,
    tol=DEFAULT_TOL,
    *,
    power: int = 1,
    flavor: Flavor | str = Flavor.BRICK,
    within: Iterable[int] | None = None,
) -> SpectralBounds:
    """Sup of ``rho(A(phi, sigma^power))`` over sets of exactly ``n_objects`` objects.

    Zero when no such set exists.
    """
    data.sigma_matrix(power)
    sets = (
        s
        for s in enumerate_object_sets(data, flavor, max_size=n_objects, within=within)
        if len(s) == n_objects
    )
    return _max_bounds(spectral_radius(adjacency_of(data, s, power), tol) for s in sets)


def fpdim(
    data: CategoryData, tol=DEFAULT_TOL, *, power: int = 1, flavor: Flavor | str = Flavor.BRICK
) -> SpectralBounds:
    """Sup over all sets of the flavor.

    The spectral radius of a nonnegative matrix dominates that of each
    principal submatrix, so the maximal sets suffice.
    """
    data.sigma_matrix(power)
    return _max_bounds(
        spectral_radius(adjacency_of(data, s, power), tol) for s in maximal_object_sets(data, flavor)
    )


def realized_sizes(data: CategoryData, flavor: Flavor | str = Flavor.BRICK) -> list[int]:
    return sorted({len(s) for s in enumerate_object_sets(data, flavor)})


@dataclass(frozen=True)
class GrowthEstimate:
    """Finite-window estimate of a limsup/liminf over functor powers.

    ``value`` is the sup over object sets of the window statistic;
    ``witness`` is a set attaining it and ``sequence`` that set's
    per-power values over the window. ``trend`` describes the witness
    sequence: "constant", "nondecreasing", "nonincreasing" or "mixed".
    """

    value: float
    window: tuple[int, int]
    witness: tuple[int, ...] | None
    sequence: tuple[float, ...]
    trend: str

    def as_dict(self) -> dict:
        return {
            "value": _float_str(self.value),
            "window": list(self.window),
            "witness": None if self.witness is None else list(self.witness),
            "sequence": [_float_str(v) for v in self.sequence],
            "trend": self.trend,
        }


def _float_str(x: float) -> str:
    if x == INF:
        return "inf"
    if x == -INF:
        return "-inf"
    return repr(float(x))


def _trend(seq: Sequence[float]) -> str:
    pairs = list(zip(seq, seq[1:]))
    if all(a == b for a, b in pairs):
        return "constant"
    if all(a <= b for a, b in pairs):
        return "nondecreasing"
    if all(a >= b for a, b in pairs):
        return "nonincreasing"
    return "mixed"


def growth_window(data: CategoryData, minimum: int = 4) -> tuple[int, int]:
    """Tail window ``[max(2, ceil(N/2)), N]`` where ``1..N`` are all available."""
    N = 0
    while N + 1 in data.sigma:
        N += 1
    if N < minimum:
        raise InsufficientData(f"need sigma powers 1..{minimum} at least, have 1..{N}")
    return max(2, math.ceil(N / 2)), N


def _rho_value(b: SpectralBounds) -> float:
    if b.is_infinite:
        return INF
    return b.midpoint()


def _log_n(rho: float, n: int) -> float:
    if rho == 0:
        return -INF
    return math.log(rho) / math.log(n)


def _nth_root(rho: float, n: int) -> float:
    return rho ** (1.0 / n)


def _window_estimate(data, tol, flavor, transform, reduce) -> GrowthEstimate:
    lo, hi = growth_window(data)
    window = range(lo, hi + 1)
    best = None
    for s in enumerate_object_sets(data, flavor):
        seq = tuple(transform(_rho_value(spectral_radius(adjacency_of(data, s, n), tol)), n) for n in window)
        stat = reduce(seq)
        if best is None or stat > best[0]:
            best = (stat, s.indices, seq)
    if best is None:
        return GrowthEstimate(transform(0.0, hi), (lo, hi), None, (), "constant")
    return GrowthEstimate(best[0], (lo, hi), best[1], best[2], _trend(best[2]))


def fpg_estimate(data: CategoryData, tol=DEFAULT_TOL, flavor: Flavor | str = Flavor.BRICK) -> GrowthEstimate:
    """Window estimate of ``sup_phi limsup_n log_n rho(A(phi, sigma^n))``."""
    return _window_estimate(data, tol, flavor, _log_n, max)


def lower_fpg_estimate(data: CategoryData, tol=DEFAULT_TOL, flavor: Flavor | str = Flavor.BRICK) -> GrowthEstimate:
    """Window estimate of ``sup_phi liminf_n log_n rho(A(phi, sigma^n))``."""
    return _window_estimate(data, tol, flavor, _log_n, min)


def fpv_estimate(data: CategoryData, tol=DEFAULT_TOL, flavor: Flavor | str = Flavor.BRICK) -> GrowthEstimate:
    """Window estimate of ``sup_phi limsup_n rho(A(phi, sigma^n))^(1/n)``."""
    return _window_estimate(data, tol, flavor, _nth_root, max)


# -- sigma-decompositions -------------------------------------------------------


@dataclass(frozen=True)
class SigmaDecomposition:
    """Blocks listed in increasing label order."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(tuple(b) for b in self.blocks))

    def members(self) -> tuple[int, ...]:
        return tuple(sorted(i for b in self.blocks for i in b))


def _as_decomposition(data: CategoryData, D) -> SigmaDecomposition:
    if not isinstance(D, SigmaDecomposition):
        D = SigmaDecomposition(tuple(D))
    seen = set()
    for block in D.blocks:
        for i in _indices(data, block):
            if i in seen:
                raise InvalidDecomposition(f"object {i} appears in more than one block")
            if not data.is_brick(i):
                raise InvalidDecomposition(f"object {data.objects[i]} is not a brick")
            seen.add(i)
    return D


def verify_sigma_decomposition(data: CategoryData, D) -> bool:
    """True iff ``Hom(X, sigma Y) = 0`` whenever X's block precedes Y's."""
    D = _as_decomposition(data, D)
    S = data.sigma_matrix(1)
    for a, earlier in enumerate(D.blocks):
        for later in D.blocks[a + 1 :]:
            if any(S[x][y] for x in earlier for y in later):
                return False
    return True


def sigma_decomposition_bound(data: CategoryData, D, n: int, tol=DEFAULT_TOL) -> SpectralBounds:
    """``sup_{block, m <= n} fpdim^m`` restricted to a block, which bounds ``fpdim^n`` on the union."""
    D = _as_decomposition(data, D)
    if not verify_sigma_decomposition(data, D):
        raise InvalidDecomposition("vanishing condition fails between blocks")
    return _max_bounds(
        fpdim_n(data, m, tol, within=block) for block in D.blocks if block for m in range(1, n + 1)
    )


# -- ratio variant --------------------------------------------------------------------


def ratio_spectral_radius(data: CategoryData, phi, n: int = 1, tol=DEFAULT_TOL) -> SpectralBounds:
    """``rho(sigma^n block) / rho(Hom block)`` for an arbitrary object set.

    Agrees with ``rho(A(phi, sigma^n))`` on brick sets, where the Hom block
    is the identity.
    """
    idx = _indices(data, phi)
    num = spectral_radius(adjacency_of(data, idx, n), tol)
    den = spectral_radius(ExtMatrix([[data.hom[i][j] for j in idx] for i in idx]), tol)
    if den.lo == 0:
        raise DegenerateSet(f"Hom matrix on {list(idx)} has spectral radius 0")
    return SpectralBounds(num.lo / den.hi, num.hi / den.lo)
