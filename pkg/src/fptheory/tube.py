"""Standard stable tubes of rank r and their Hom/Ext¹ tables.

Objects are the uniserials ``E_i[j]`` (mouth index ``i`` modulo ``r``,
length ``j``). The bricks are exactly those with ``j <= r``, listed in
the order::

    E_1[1], ..., E_r[1]; E_1[2], ..., E_r[2]; ...; E_1[r], ..., E_r[r]

Matrix orientation: ``hom_matrix(r)[I][J] = dim Hom(X_J, X_I)`` (the
column is the source), and likewise for ``ext_matrix``. This is the
transpose of the usual (source = row) convention used by
:mod:`fptheory.fincat`; :func:`export_category_data` transposes. Spectral
radii are transpose-invariant.

Hom is built three independent ways and cross-checked:

* block formulas in powers of the cyclic permutation matrix ``P``;
* the index inequalities (elementwise, :func:`hom_dim`);
* counting common quotient/submodule lengths of uniserials
  (:func:`uniserial_hom_dim`, valid for every length ``j``).

Ext¹ follows from Serre duality ``Ext¹(X, Y) = D Hom(Y, tau X)`` with
``tau E_i[j] = E_{i-1}[j]``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConstructionMismatch, DomainError
from .fincat import CategoryData, adjacency_of, enumerate_brick_sets, is_brick_set
from .specmat import DEFAULT_TOL, ExtMatrix, SpectralBounds, as_tol, is_subpermutation, spectral_radius

Grid = list[list[int]]


@dataclass(frozen=True, order=True)
class TubeObject:
    i: int
    j: int

    def __post_init__(self):
        if self.i < 1 or self.j < 1:
            raise DomainError(f"invalid tube object E_{self.i}[{self.j}]")

    def index(self, r: int) -> int:
        """0-based position in the flattened brick order."""
        _check_object(r, self)
        if self.j > r:
            raise DomainError(f"{self} is not a brick of the rank-{r} tube")
        return (self.j - 1) * r + (self.i - 1)

    @classmethod
    def from_index(cls, r: int, k: int) -> "TubeObject":
        if not 0 <= k < r * r:
            raise DomainError(f"index {k} out of range for rank {r}")
        return cls(k % r + 1, k // r + 1)

    def tau(self, r: int) -> "TubeObject":
        return TubeObject((self.i - 2) % r + 1, self.j)

    def __str__(self):
        return f"E{self.i}[{self.j}]"


def _check_rank(r: int):
    if not isinstance(r, int) or r < 1:
        raise DomainError(f"tube rank must be a positive integer, got {r!r}")


def _check_object(r: int, X: TubeObject):
    _check_rank(r)
    if not 1 <= X.i <= r:
        raise DomainError(f"mouth index of {X} must lie in 1..{r}")


def brick_objects(r: int) -> list[TubeObject]:
    _check_rank(r)
    return [TubeObject.from_index(r, k) for k in range(r * r)]


def hom_dim(r: int, source: TubeObject, target: TubeObject) -> int:
    """``dim Hom(E_i[j], E_i'[j'])`` for bricks, from the index inequalities."""
    for X in (source, target):
        _check_object(r, X)
        if X.j > r:
            raise DomainError(f"{X} has length > r; use uniserial_hom_dim")
    i, j, i2, j2 = source.i, source.j, target.i, target.j
    direct = i <= i2 <= i + j - 1 and i + j <= i2 + j2
    wrapped = i + j - 1 - r >= 1 and i2 <= i + j - 1 - r and i + j <= i2 + j2 + r
    return int(direct or wrapped)


def ext_dim(r: int, source: TubeObject, target: TubeObject) -> int:
    """``dim Ext¹(source, target) = dim Hom(target, tau source)``."""
    _check_object(r, source)
    return hom_dim(r, target, source.tau(r))


def uniserial_hom_dim(r: int, source: TubeObject, target: TubeObject) -> int:
    """``dim Hom`` between arbitrary uniserials of the tube.

    ``E_i[j]`` has socle ``E_i`` and composition factors ``E_i, ..., E_{i+j-1}``
    upward. Each map factors through a common quotient of ``source`` and
    submodule of ``target`` of some length ``k``; these are isomorphic iff
    ``i + j - k = i'`` modulo ``r``, and each admissible ``k`` contributes one
    dimension.
    """
    _check_object(r, source)
    _check_object(r, target)
    i, j, i2, j2 = source.i, source.j, target.i, target.j
    return sum(1 for k in range(1, min(j, j2) + 1) if (i + j - k - i2) % r == 0)


def uniserial_ext_dim(r: int, source: TubeObject, target: TubeObject) -> int:
    return uniserial_hom_dim(r, target, source.tau(r))


# -- block formulas ---------------------------------------------------------------


def permutation_matrix(r: int) -> ExtMatrix:
    """Cyclic ``P`` with ones at ``(k+1, k)`` and ``(0, r-1)``."""
    return ExtMatrix(_perm_power(r, 1))


def _perm_power(r: int, e: int) -> Grid:
    # P sends basis vector k to k+1, so P^e has a one at (k + e, k).
    grid = [[0] * r for _ in range(r)]
    for k in range(r):
        grid[(k + e) % r][k] = 1
    return grid


def _assemble(r: int, block) -> ExtMatrix:
    n = r * r
    grid = [[0] * n for _ in range(n)]
    for a in range(r):
        for b in range(r):
            for e in block(a, b):
                P = _perm_power(r, e)
                for x in range(r):
                    for y in range(r):
                        grid[a * r + x][b * r + y] += P[x][y]
    return ExtMatrix(grid)


def hom_matrix(r: int) -> ExtMatrix:
    """Block ``(a, b)`` is ``P^{max(0, b-a)} + ... + P^b``."""
    _check_rank(r)
    return _assemble(r, lambda a, b: range(max(0, b - a), b + 1))


def ext_matrix(r: int) -> ExtMatrix:
    """Block ``(a, b)`` is ``P^{r-1-a} + ... + P^{min(r-1, r-1-a+b)}``."""
    _check_rank(r)
    return _assemble(r, lambda a, b: range(r - 1 - a, min(r - 1, r - 1 - a + b) + 1))


def build_FG(r: int) -> tuple[ExtMatrix, ExtMatrix]:
    """Auxiliary matrices with ``H^T + F = E + G``.

    ``F`` has constant block rows ``P^{r-1-a}``; ``G`` has ``P^r = I`` on and
    above the block diagonal and ``P^{r-(a-b)}`` below it.
    """
    _check_rank(r)
    F = _assemble(r, lambda a, b: (r - 1 - a,))
    G = _assemble(r, lambda a, b: (r,) if b >= a else (r - (a - b),))
    return F, G


def _elementwise(r: int, fn) -> ExtMatrix:
    objs = brick_objects(r)
    return ExtMatrix([[fn(r, src, tgt) for src in objs] for tgt in objs])


def hom_matrix_elementwise(r: int) -> ExtMatrix:
    return _elementwise(r, hom_dim)


def ext_matrix_elementwise(r: int) -> ExtMatrix:
    return _elementwise(r, ext_dim)


def hom_matrix_uniserial(r: int) -> ExtMatrix:
    return _elementwise(r, uniserial_hom_dim)


def ext_matrix_uniserial(r: int) -> ExtMatrix:
    return _elementwise(r, uniserial_ext_dim)


def _add(A: ExtMatrix, B: ExtMatrix) -> ExtMatrix:
    return ExtMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A.rows, B.rows)])


@dataclass(frozen=True)
class TubeModel:
    r: int
    hom: ExtMatrix
    ext: ExtMatrix
    F: ExtMatrix
    G: ExtMatrix

    @property
    def objects(self) -> list[TubeObject]:
        return brick_objects(self.r)

    def identity_holds(self) -> bool:
        return _add(self.hom.transpose(), self.F) == _add(self.ext, self.G)

    def with_ext(self, ext: ExtMatrix) -> "TubeModel":
        return TubeModel(self.r, self.hom, ext, self.F, self.G)


def build_tube_model(r: int, check: bool = True) -> TubeModel:
    """Assemble the block-formula model; with ``check``, insist all constructions agree."""
    F, G = build_FG(r)
    model = TubeModel(r, hom_matrix(r), ext_matrix(r), F, G)
    if check:
        mismatches = _construction_mismatches(model)
        if mismatches:
            raise ConstructionMismatch("; ".join(mismatches))
    return model


def _construction_mismatches(model: TubeModel) -> list[str]:
    r = model.r
    out = []
    for label, block, builders in (
        ("Hom", model.hom, (hom_matrix_elementwise, hom_matrix_uniserial)),
        ("Ext", model.ext, (ext_matrix_elementwise, ext_matrix_uniserial)),
    ):
        for build in builders:
            other = build(r)
            if other != block:
                bad = [
                    (str(TubeObject.from_index(r, J)), str(TubeObject.from_index(r, I)))
                    for I in range(r * r)
                    for J in range(r * r)
                    if other[I, J] != block[I, J]
                ]
                out.append(f"{label} block formula disagrees with {build.__name__} at (source, target) {bad[:5]}")
    return out


# -- verification -------------------------------------------------------------------


def export_category_data(r: int, model: TubeModel | None = None) -> CategoryData:
    """Brick universe of the tube with ``sigma = Ext¹``, in (source, target) orientation."""
    model = model or build_tube_model(r)
    return CategoryData(
        objects=tuple(str(X) for X in brick_objects(r)),
        hom=model.hom.transpose().rows,
        sigma={1: model.ext.transpose().rows},
        sigma0_identity=True,
    )


def naive_brick_sets(data: CategoryData) -> list[tuple[int, ...]]:
    """All-subsets filter; exponential, used as an enumeration oracle."""
    found = []
    for size in range(1, data.size + 1):
        for combo in itertools.combinations(range(data.size), size):
            if is_brick_set(data, combo):
                found.append(combo)
    return sorted(found)


@dataclass
class VerificationReport:
    r: int
    passed: bool = True
    brick_set_count: int = 0
    max_rho: SpectralBounds = field(default_factory=lambda: SpectralBounds.exact(0))
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def fail(self, clause: str, detail: str, phi=None):
        self.passed = False
        self.checks[clause] = False
        entry = {"clause": clause, "detail": detail}
        if phi is not None:
            entry["set"] = list(phi)
        self.failures.append(entry)

    def as_dict(self) -> dict:
        return {
            "r": self.r,
            "passed": self.passed,
            "brick_set_count": self.brick_set_count,
            "max_rho": self.max_rho.as_dict(),
            "checks": dict(self.checks),
            "failures": list(self.failures),
        }


def _row_col_ok(A: ExtMatrix, by_column: bool) -> bool:
    rows = A.transpose().rows if by_column else A.rows
    for row in rows:
        nonzero = [v for v in row if v != 0]
        if len(nonzero) > 1 or any(v != 1 for v in nonzero):
            return False
    return True


def verify_tube(
    r: int,
    tol=DEFAULT_TOL,
    model: TubeModel | None = None,
    naive_check: bool | None = None,
    workers: int | None = None,
) -> VerificationReport:
    """Check the brick-set properties of the rank-r tube exhaustively.

    Clauses: the identity ``H^T + F = E + G``; agreement of all Hom/Ext
    constructions; the self-extension boundary; and for every brick set
    ``phi`` with ``A = E|phi``:

    * ``ext-forces-f``: ``E_IJ != 0`` implies ``F_IJ = E_IJ = 1``;
    * ``row-sparsity`` / ``column-sparsity``: at most one nonzero entry, equal to 1,
      per row / per column of ``A``;
    * ``subpermutation``: ``A`` is a sub-permutation matrix;
    * ``rho-bound``: certified ``rho(A) <= 1``.

    With ``naive_check`` (default for ``r <= 4``) the clique enumeration is
    compared against the all-subsets filter.
    """
    _check_rank(r)
    tol = as_tol(tol)
    model = model or build_tube_model(r, check=False)
    report = VerificationReport(r)
    names = [str(X) for X in brick_objects(r)]
    for clause in ("hom-ext-identity", "constructions", "self-ext-boundary", "enumeration",
                   "ext-forces-f", "row-sparsity", "column-sparsity", "subpermutation", "rho-bound"):
        report.checks[clause] = True

    if not model.identity_holds():
        report.fail("hom-ext-identity", "H^T + F != E + G")
    for msg in _construction_mismatches(model):
        report.fail("constructions", msg)
    for k, X in enumerate(brick_objects(r)):
        self_ext = model.ext[k, k]
        if (self_ext == 0) != (X.j <= r - 1):
            report.fail("self-ext-boundary", f"dim Ext¹({X}, {X}) = {self_ext}")

    data = export_category_data(r, model)
    sets = [s.indices for s in enumerate_brick_sets(data, workers=workers)]
    report.brick_set_count = len(sets)
    if naive_check is None:
        naive_check = r <= 4
    if naive_check:
        naive = naive_brick_sets(data)
        if naive != sets:
            report.fail("enumeration", f"clique search found {len(sets)} sets, all-subsets filter {len(naive)}")
    else:
        report.checks.pop("enumeration")

    E, F = model.ext, model.F
    lo = hi = Fraction(0)
    rho_cache: dict[ExtMatrix, SpectralBounds] = {}
    for phi in sets:
        label = [names[k] for k in phi]
        for I in phi:
            for J in phi:
                if E[I, J] != 0 and not (F[I, J] == 1 and E[I, J] == 1):
                    report.fail("ext-forces-f", f"E[{names[I]},{names[J]}]={E[I, J]}, F={F[I, J]}", label)
        A = E.submatrix(phi)
        if not _row_col_ok(A, by_column=False):
            report.fail("row-sparsity", "row with two nonzero entries or an entry > 1", label)
        if not _row_col_ok(A, by_column=True):
            report.fail("column-sparsity", "column with two nonzero entries or an entry > 1", label)
        if not is_subpermutation(A):
            report.fail("subpermutation", "adjacency is not a sub-permutation matrix", label)
        rho = rho_cache.get(A)
        if rho is None:
            rho = rho_cache[A] = spectral_radius(A, tol)
        if rho.hi > 1:
            report.fail("rho-bound", f"rho(A) in {rho}", label)
        lo, hi = max(lo, rho.lo), max(hi, rho.hi)
    report.max_rho = SpectralBounds(lo, hi)
    return report


@functools.lru_cache(maxsize=None)
def _cached_report(r: int, tol: Fraction) -> VerificationReport:
    return verify_tube(r, tol)


def mouth_witness(r: int) -> ExtMatrix:
    """``A(phi)`` for the mouth ``{E_1[1], ..., E_r[1]}``; equals ``P^{r-1}``."""
    return ext_matrix(r).submatrix(range(r))


def tube_fpdim(r: int, tol=DEFAULT_TOL) -> SpectralBounds:
    """fpdim of the tube: the mouth witness gives the lower bound, the
    exhaustive brick-set check the upper one."""
    _check_rank(r)
    tol = as_tol(tol)
    report = _cached_report(r, tol)
    witness = spectral_radius(mouth_witness(r), tol)
    return SpectralBounds(witness.lo, max(report.max_rho.hi, witness.lo))


def matrix_power(A: ExtMatrix, e: int) -> ExtMatrix:
    if e < 0:
        raise DomainError("negative exponent")
    n = A.n
    result = ExtMatrix.identity(n)
    for _ in range(e):
        result = ExtMatrix(
            [[sum(result[i, k] * A[k, j] for k in range(n)) for j in range(n)] for i in range(n)]
        )
    return result


def mouth_adjacency(r: int, n: int = 1) -> ExtMatrix:
    """Mouth adjacency in the (source, target) orientation of the exported data."""
    return adjacency_of(export_category_data(r), range(r), n)
