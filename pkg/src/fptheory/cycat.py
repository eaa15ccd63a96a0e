"""Calabi-Yau and Kodaira type fp-invariants given by closed formulas.

Covers fractional Calabi-Yau models (``S^b = Sigma^a``), the AS-Gorenstein
Kodaira case table, Hilbert-series growth of graded algebras, and a
catalog of tabulated invariant values.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, Indeterminate, UnknownDescriptor
from .quiver import DynkinType, WeightClass, classify_weights, coxeter_number

INF = math.inf
NEG_INF = -math.inf

ExtValue = Union[Fraction, float]


def format_value(v: ExtValue) -> str:
    if v == INF:
        return "inf"
    if v == NEG_INF:
        return "-inf"
    return str(Fraction(v))


# -- fractional Calabi-Yau ----------------------------------------------------------


@dataclass(frozen=True)
class FractionalCYModel:
    """A category with ``S^b = Sigma^a``.

    ``w`` is the multiplier after which ``(b w t, a w t)`` lies in the
    spectrum for every integer ``t``; ``has_atomic`` records whether an
    atomic object exists, which that membership needs.
    """

    a: int
    b: int
    w: int = 1
    has_atomic: bool = True

    def __post_init__(self):
        if self.b <= 0:
            raise DomainError("b must be a positive integer")
        if self.w <= 0:
            raise DomainError("w must be a positive integer")

    @property
    def reduced(self) -> tuple[int, int]:
        g = math.gcd(self.a, self.b)
        return self.a // g, self.b // g


def fpcy_fractional(model: FractionalCYModel) -> Fraction:
    if not model.has_atomic:
        raise Indeterminate("fpcy is not determined without an atomic object")
    return Fraction(model.a, model.b)


def ade_model(t: DynkinType) -> FractionalCYModel:
    """Path algebra of a Dynkin quiver: ``S^h = Sigma^(h-2)``."""
    h = coxeter_number(t)
    return FractionalCYModel(h - 2, h)


class Membership(str, enum.Enum):
    MEMBER = "member"
    NON_MEMBER = "non_member"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SpectrumQuery:
    m: int
    n: int


def spectrum_membership(model: FractionalCYModel, q: SpectrumQuery) -> Membership:
    """Decide ``(m, n) in Sp`` where the fractional CY structure allows it.

    Points off the line through ``(b, a)`` are never in the spectrum;
    multiples of ``(b w, a w)`` are when an atomic object exists. Other
    rational points of the line are left undecided.
    """
    m, n = q.m, q.n
    if m * model.a != n * model.b:
        return Membership.NON_MEMBER
    step = model.b * model.w
    if model.has_atomic and m % step == 0 and n == model.a * model.w * (m // step):
        return Membership.MEMBER
    return Membership.UNKNOWN


def cy_tensor_sum(d1, d2) -> Fraction:
    """CY dimension of a tensor product of two fractional CY factors."""
    return Fraction(d1) + Fraction(d2)


def fp_kodaira_gorenstein(d: int, ell: int, gk) -> tuple[ExtValue, ExtValue]:
    """``(fp kappa, fp kappa^-1)`` of Proj of an AS-Gorenstein algebra.

    ``d`` is the injective dimension, ``ell`` the AS index, ``gk`` the
    GK dimension of the algebra.
    """
    if d < 2:
        raise DomainError("injective dimension must be at least 2")
    gk = Fraction(gk)
    if gk < 1:
        raise DomainError("GK dimension must be at least 1")
    if ell > 0:
        return NEG_INF, gk - 1
    if ell < 0:
        return gk - 1, NEG_INF
    return Fraction(0), Fraction(0)


def fpcy_gorenstein(d: int) -> Fraction:
    if d < 2:
        raise DomainError("injective dimension must be at least 2")
    return Fraction(d - 1)


# -- Hilbert series -------------------------------------------------------------------


class NegativeCoefficients(DomainError):
    pass


class ExponentialGrowth(DomainError):
    pass


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def _div_one_minus_t(p: Sequence[int]) -> tuple[tuple[int, ...], bool]:
    """Divide by ``1 - t``; returns (quotient, exact?)."""
    # p = (1 - t) q  <=>  q_k = p_0 + ... + p_k and total sum zero
    q, acc = [], 0
    for c in p[:-1]:
        acc += c
        q.append(acc)
    return tuple(q) if q else (0,), acc + p[-1] == 0


@dataclass(frozen=True)
class RationalSeries:
    """``numerator(t) / denominator(t)`` with integer coefficients, lowest degree first."""

    numerator: tuple[int, ...]
    denominator: tuple[int, ...]

    def __post_init__(self):
        num = _trim(tuple(int(c) for c in self.numerator) or (0,))
        den = _trim(tuple(int(c) for c in self.denominator) or (0,))
        if all(c == 0 for c in den):
            raise DomainError("denominator is zero")
        if den[0] == 0:
            raise DomainError("denominator must have a nonzero constant term")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @classmethod
    def parse(cls, num: str, den: str) -> "RationalSeries":
        return cls(parse_poly(num), parse_poly(den))

    @classmethod
    def polynomial_ring(cls, p: int) -> "RationalSeries":
        """``1 / (1 - t)^p``."""
        den = (1,)
        for _ in range(p):
            den = _poly_mul(den, (1, -1))
        return cls((1,), den)

    def coefficients(self, count: int) -> list[Fraction]:
        """First ``count`` power-series coefficients, exactly."""
        num, den = self.numerator, self.denominator
        c0 = Fraction(den[0])
        out: list[Fraction] = []
        for k in range(count):
            acc = Fraction(num[k]) if k < len(num) else Fraction(0)
            for m in range(1, min(k, len(den) - 1) + 1):
                acc -= den[m] * out[k - m]
            out.append(acc / c0)
        return out

    def pole_order_at_one(self) -> int:
        """Order of the pole at ``t = 1`` (zero if none)."""

        def multiplicity(p):
            if all(c == 0 for c in p):
                return None
            k = 0
            while True:
                q, exact = _div_one_minus_t(p)
                if not exact:
                    return k
                p, k = q, k + 1

        m_num = multiplicity(self.numerator)
        if m_num is None:
            return 0
        return max(0, multiplicity(self.denominator) - m_num)

    def is_polynomial(self) -> bool:
        """True when the series terminates."""
        num, den = list(self.numerator), list(self.denominator)
        # Long division of num by den in increasing degree is exact iff den | num.
        if len(num) < len(den):
            return all(c == 0 for c in num)
        rem = [Fraction(c) for c in num]
        for k in range(len(num) - len(den) + 1):
            f = rem[k] / den[0]
            for m, c in enumerate(den):
                rem[k + m] -= f * c
        return all(c == 0 for c in rem)

    def __str__(self):
        return f"({format_poly(self.numerator)}) / ({format_poly(self.denominator)})"


def _poly_mul(p: Sequence, q: Sequence) -> tuple:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return tuple(out)


_TERM_RE = re.compile(r"([+-]?)\s*(\d*)\s*(\*?\s*t(?:\s*\^\s*(\d+))?)?")


def parse_poly(text: str) -> tuple[int, ...]:
    """Parse ``"1 - 2t + t^2"`` or a coefficient list ``"1,-2,1"``."""
    text = text.strip()
    if not text:
        raise DomainError("empty polynomial")
    if "t" not in text:
        parts = [p for p in re.split(r"[,\s]+", text) if p]
        try:
            return tuple(int(p) for p in parts)
        except ValueError:
            raise DomainError(f"cannot parse polynomial {text!r}") from None
    coeffs: dict[int, int] = {}
    pos = 0
    compact = text.replace(" ", "")
    while pos < len(compact):
        m = _TERM_RE.match(compact, pos)
        if not m or m.end() == pos:
            raise DomainError(f"cannot parse polynomial {text!r} at position {pos}")
        sign, digits, tpart, exp = m.groups()
        if not digits and not tpart:
            raise DomainError(f"cannot parse polynomial {text!r} at position {pos}")
        c = int(digits) if digits else 1
        if sign == "-":
            c = -c
        degree = 0 if not tpart else int(exp) if exp else 1
        coeffs[degree] = coeffs.get(degree, 0) + c
        pos = m.end()
    return tuple(coeffs.get(k, 0) for k in range(max(coeffs) + 1))


def format_poly(p: Sequence[int]) -> str:
    terms = []
    for k, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if k == 0 else "t" if k == 1 else f"t^{k}"
        mag = abs(c)
        body = f"{mag}{mono}" if (mag != 1 or not mono) else mono
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _growth_fit(coeffs: Sequence[Fraction]) -> float:
    """Growth exponent of partial sums: ``log2(S_{2n} / S_n) - 1``."""
    partial, acc = [], Fraction(0)
    for c in coeffs:
        acc += c
        partial.append(acc)
    n = len(partial) // 2
    if partial[n - 1] == 0:
        return NEG_INF
    return math.log2(partial[2 * n - 1] / partial[n - 1]) - 1


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Euclidean division, coefficients lowest degree first."""
    a = list(a)
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for k, c in enumerate(b):
            a[shift + k] -= f * c
        a.pop()
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return q, a or [Fraction(0)]


def _poly_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while any(b):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return [c / a[-1] for c in a]


def _reduced_denominator_roots(H: "RationalSeries") -> np.ndarray:
    """Simple roots of the denominator after exact cancellation with the numerator."""
    num = [Fraction(c) for c in H.numerator]
    den = [Fraction(c) for c in H.denominator]
    if any(num):
        den, _ = _poly_divmod(den, _poly_gcd(den, num))
    if len(den) > 2:
        deriv = [k * c for k, c in enumerate(den)][1:]
        den, _ = _poly_divmod(den, _poly_gcd(den, deriv))
    if len(den) < 2:
        return np.array([])
    return np.roots([float(c) for c in reversed(den)])


def hilbert_growth(H: RationalSeries, n_check: int = 2000) -> ExtValue:
    """``limsup log_n(dim A_n)`` = pole order at 1 minus one (``GKdim - 1``).

    Finite-dimensional algebras (polynomial series) give ``-inf``. The
    pole order is cross-checked against a fit of the first ``n_check``
    coefficients.
    """
    coeffs = H.coefficients(n_check)
    neg = next((k for k, c in enumerate(coeffs) if c < 0), None)
    if neg is not None:
        raise NegativeCoefficients(f"coefficient {neg} is {coeffs[neg]}")
    if H.is_polynomial():
        return NEG_INF
    p = H.pole_order_at_one()
    for z in _reduced_denominator_roots(H):
        if abs(z) < 1 - 1e-9:
            raise ExponentialGrowth(f"denominator root {z:.6g} inside the unit disk")
    if p == 0:
        raise DomainError("series has no pole at t = 1 but does not terminate")
    fitted = _growth_fit(coeffs)
    if round(fitted) != p - 1:
        raise DomainError(f"pole order {p} disagrees with coefficient fit {fitted:.3f}")
    return p - 1


def _power_sums(den: Sequence[int], count: int) -> list[Fraction]:
    """Power sums of the reciprocal roots ``alpha`` of ``den = c0 prod (1 - alpha t)``."""
    c0 = Fraction(den[0])
    e = [Fraction((-1) ** k * c) / c0 for k, c in enumerate(den)]  # elementary symmetric
    deg = len(den) - 1
    p: list[Fraction] = [Fraction(deg)]
    for k in range(1, count + 1):
        acc = Fraction(0)
        for i in range(1, min(k, deg) + 1):
            term = e[i] * (p[k - i] if i < k else 0)
            acc += (-1) ** (i - 1) * term
        if k <= deg:
            acc += (-1) ** (k - 1) * k * e[k]
        p.append(acc)
    return p


def _from_power_sums(p: Sequence[Fraction], deg: int) -> list[Fraction]:
    """Coefficients of ``prod (1 - beta u)`` from power sums of ``beta``."""
    e = [Fraction(1)]
    for k in range(1, deg + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * p[i]
        e.append(acc / k)
    return [(-1) ** k * e[k] for k in range(deg + 1)]


def veronese_series(H: RationalSeries, s: int) -> RationalSeries:
    """Hilbert series of the ``s``-th Veronese, ``sum_n dim A_{sn} u^n``.

    With ``den = c0 prod (1 - alpha t)`` the new denominator is
    ``prod (1 - alpha^s u)``, computed through power sums; the numerator
    comes from the decimated coefficients times that denominator.
    """
    if s < 1:
        raise DomainError("Veronese degree must be positive")
    if s == 1:
        return H
    den = H.denominator
    deg = len(den) - 1
    p = _power_sums(den, s * deg)
    new_den = _from_power_sums([p[s * k] for k in range(deg + 1)], deg)
    num_deg = (len(H.numerator) - 1 + (s - 1) * deg) // s
    coeffs = H.coefficients(s * num_deg + 1)
    decimated = [coeffs[s * k] for k in range(num_deg + 1)]
    new_num = _poly_mul(decimated, new_den)[: num_deg + 1]
    scale = math.lcm(*(Fraction(c).denominator for c in list(new_num) + list(new_den)))
    num_int = [int(c * scale) for c in new_num]
    den_int = [int(c * scale) for c in new_den]
    g = math.gcd(*num_int, *den_int)
    if den_int[0] < 0:
        g = -g
    return RationalSeries(tuple(c // g for c in num_int), tuple(c // g for c in den_int))


# -- catalog ------------------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    descriptor: str
    invariant: str
    value: ExtValue
    provenance: str

    def as_dict(self) -> dict:
        return {
            "descriptor": self.descriptor,
            "invariant": self.invariant,
            "value": format_value(self.value),
            "provenance": self.provenance,
        }


def _entries(descriptor, provenance, **values) -> list[CatalogEntry]:
    return [CatalogEntry(descriptor, name, v, provenance) for name, v in values.items()]


_KEY_RE = re.compile(r"^(?P<kind>[a-z0-9\-]+)(?::(?P<args>.*))?$")


def _parse_args(args: str | None) -> dict[str, str]:
    out = {}
    if not args:
        return out
    last = None
    for part in args.split(","):
        key, sep, val = part.partition("=")
        if not sep and last is not None:
            # "weights=2,3,7" continues the previous list
            out[last] += ";" + key.strip()
            continue
        last = key.strip() if sep else None
        out[key.strip()] = val.strip() if sep else ""
    return out


def _int_arg(params, key, descriptor, minimum=None) -> int:
    try:
        v = int(params[key])
    except (KeyError, ValueError):
        raise UnknownDescriptor(f"{descriptor!r} needs an integer {key}=...") from None
    if minimum is not None and v < minimum:
        raise UnknownDescriptor(f"{descriptor!r}: {key} must be at least {minimum}")
    return v


CATALOG_KEYS = (
    "wpl:domestic",
    "wpl:tubular",
    "wpl:weights=P0;P1;... (or P0,P1,...)",
    "curve:P1",
    "curve:elliptic",
    "scheme:P1",
    "scheme:elliptic",
    "scheme:other",
    "piontkovski:n=N",
    "as-gorenstein:d=D",
    "smooth:dim=D[,kappa=K][,kappa_inv=K]",
    "fractional-cy:a=A,b=B",
    "ade:TYPE",
    "affine-ade",
    "kronecker:n=N",
)


def catalog_lookup(descriptor: str) -> list[CatalogEntry]:
    """Tabulated invariant values for named families of categories.

    Recognised descriptors are listed in :data:`CATALOG_KEYS`.
    """
    m = _KEY_RE.match(descriptor.strip())
    if not m:
        raise UnknownDescriptor(f"malformed descriptor {descriptor!r}")
    kind, args = m.group("kind"), m.group("args")
    params = _parse_args(args)
    d = descriptor.strip()

    if kind == "wpl":
        if args in ("domestic", "tubular"):
            cls = WeightClass(args)
        elif "weights" in params:
            try:
                cls = classify_weights(int(x) for x in params["weights"].split(";"))
            except ValueError:
                raise UnknownDescriptor(f"bad weight list in {descriptor!r}") from None
        else:
            raise UnknownDescriptor(f"unknown weighted projective line {descriptor!r}")
        if cls is WeightClass.WILD:
            raise UnknownDescriptor("fpdim of wild weighted projective lines is not tabulated")
        return _entries(d, "weighted projective lines of domestic or tubular type", fpdim=Fraction(1)) + _entries(
            d, "derived equivalence with an affine path algebra", fpcy=Fraction(1)
        )

    if kind in ("curve", "scheme") and args in ("P1", "elliptic"):
        return _entries(d, "projective curves and higher-dimensional schemes", fpdim=Fraction(1)) + _entries(d, "smooth projective varieties are Calabi-Yau of their dimension", fpcy=Fraction(1))
    if kind == "scheme" and args == "other":
        return _entries(d, "projective curves and higher-dimensional schemes", fpdim=INF)

    if kind == "piontkovski":
        n = _int_arg(params, "n", d, minimum=2)
        return _entries(
            d,
            "noncommutative projective lines of rank n",
            fpdim=Fraction(1),
            fpgldim=Fraction(1),
            fpc=Fraction(0),
            fpv=Fraction(0),
            fpcy=Fraction(1),
            fpkappa_inv=Fraction(1) if n == 2 else INF,
            fpkappa=NEG_INF,
        )

    if kind == "as-gorenstein":
        dd = _int_arg(params, "d", d, minimum=2)
        return _entries(d, "Proj of an AS-Gorenstein algebra", fpcy=fpcy_gorenstein(dd))

    if kind == "smooth":
        dim = _int_arg(params, "dim", d, minimum=0)
        out = _entries(d, "smooth projective varieties are Calabi-Yau of their dimension", fpcy=Fraction(dim))
        for key, name in (("kappa", "fpkappa"), ("kappa_inv", "fpkappa_inv")):
            if key in params:
                raw = params[key]
                val = NEG_INF if raw in ("-inf", "-oo") else Fraction(raw)
                out += _entries(d, "Kodaira dimension of a smooth projective variety", **{name: val})
        return out

    if kind == "fractional-cy":
        a = _int_arg(params, "a", d)
        b = _int_arg(params, "b", d, minimum=1)
        return _entries(d, "fractional Calabi-Yau category", fpcy=Fraction(a, b)) + _entries(
            d, "fractional Calabi-Yau category", fpkappa=Fraction(0), fpkappa_inv=Fraction(0)
        )

    if kind == "ade" and args:
        t = DynkinType.parse(args)
        return _entries(d, "path algebra of a Dynkin quiver", fpcy=fpcy_fractional(ade_model(t))) + _entries(
            d, "path algebra of a Dynkin quiver", fpkappa=Fraction(0), fpkappa_inv=Fraction(0)
        )
    if kind == "affine-ade" and not args:
        return _entries(d, "derived equivalence with an affine path algebra", fpcy=Fraction(1))

    if kind == "kronecker":
        n = _int_arg(params, "n", d, minimum=1)
        if n == 1:
            return [CatalogEntry(d, e.invariant, e.value, e.provenance) for e in catalog_lookup("ade:A2")]
        out = _entries(d, "generalized Kronecker quiver", fpcy=Fraction(1), fpkappa=NEG_INF)
        if n >= 3:
            out += _entries(d, "generalized Kronecker quiver", fpkappa_inv=INF)
        return out

    raise UnknownDescriptor(f"unknown descriptor {descriptor!r}; known forms: {', '.join(CATALOG_KEYS)}")
