"""Link spectra, growth rates, counting functions and stability indices.

A growth rate ``alpha`` of a cone over a link ``Sigma`` in C^m is a root of

    alpha * (alpha + m - 2) = lambda

for an eigenvalue ``lambda`` of the link Laplacian.  Each eigenvalue gives an
upper root (``alpha >= 0``) and a lower root (``alpha <= 2 - m``).  Roots are
generally irrational, so they are never stored as numbers: a rate is kept as
``(lambda, branch)`` and every comparison against a rational ``delta`` is
turned into a comparison of ``lambda`` against ``delta * (delta + m - 2)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Union

from .errors import SpectrumTruncatedError

__all__ = [
    "Rational",
    "as_rational",
    "parse_rational",
    "LinkSpectrum",
    "GrowthRate",
    "HarveyLawson",
    "ConeDescriptor",
    "StabilityReport",
    "BoundCheck",
    "RateBound",
    "rate_to_eigenvalue",
    "rates_of_eigenvalue",
    "is_growth_rate",
    "growth_rates",
    "mult_at_rate",
    "counting_N",
    "stability_index",
    "check_lower_bounds",
    "admissible_rate_sup",
]

Rational = Union[int, Fraction]
Branch = Literal["upper", "lower"]

_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?")


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer literal. Decimals are rejected."""
    match = _RATIONAL_RE.fullmatch(text)
    if match is None:
        raise ValueError(f"not an exact rational (use p/q or an integer): {text!r}")
    num, den = match.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``p/q`` strings; floats are refused."""
    if isinstance(x, bool):
        raise TypeError(f"expected a rational, got bool {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__} {x!r}")


def rate_to_eigenvalue(alpha: Rational, m: int) -> Fraction:
    """The eigenvalue ``alpha * (alpha + m - 2)`` belonging to order ``alpha``."""
    alpha = as_rational(alpha)
    return alpha * (alpha + m - 2)


@dataclass(frozen=True)
class LinkSpectrum:
    """Eigenvalues and multiplicities of a link Laplacian.

    ``entries`` is strictly increasing in the eigenvalue and lists every
    eigenvalue ``<= complete_up_to``; eigenvalues above the bound may be
    missing.
    """

    m: int
    entries: tuple[tuple[Fraction, int], ...]
    complete_up_to: Fraction
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 3:
            raise ValueError(f"m must be an integer >= 3, got {self.m!r}")
        bound = as_rational(self.complete_up_to)
        if bound < 0:
            raise ValueError(f"complete_up_to must be nonnegative, got {bound}")
        entries = []
        prev = None
        for lam, mult in self.entries:
            lam = as_rational(lam)
            if isinstance(mult, bool) or not isinstance(mult, int) or mult <= 0:
                raise ValueError(f"multiplicity of {lam} must be a positive integer")
            if lam < 0:
                raise ValueError(f"eigenvalues are nonnegative, got {lam}")
            if prev is not None and lam <= prev:
                raise ValueError("entries must be strictly increasing in lambda")
            prev = lam
            entries.append((lam, mult))
        if entries and entries[0][0] != 0:
            raise ValueError("the smallest eigenvalue must be 0 (constant functions)")
        if not entries:
            raise ValueError("a spectrum has at least the eigenvalue 0")
        object.__setattr__(self, "entries", tuple(entries))
        object.__setattr__(self, "complete_up_to", bound)
        object.__setattr__(self, "_index", dict(entries))

    def require(self, needed: Rational) -> None:
        """Raise unless every eigenvalue ``<= needed`` is known."""
        if needed > self.complete_up_to:
            raise SpectrumTruncatedError(needed, self.complete_up_to)

    def multiplicity(self, lam: Rational) -> int:
        lam = as_rational(lam)
        if lam >= 0:
            self.require(lam)
        return self._index.get(lam, 0)

    def eigenvalues(self) -> list[Fraction]:
        return [lam for lam, _ in self.entries]

    def restrict(self, bound: Rational) -> "LinkSpectrum":
        """Copy of this spectrum complete up to ``bound`` (which must not exceed ours)."""
        bound = as_rational(bound)
        self.require(bound)
        return LinkSpectrum(
            self.m,
            tuple((lam, k) for lam, k in self.entries if lam <= bound),
            bound,
        )

    def __len__(self):
        return len(self.entries)


def _frac_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


@dataclass(frozen=True, order=True)
class GrowthRate:
    """A root of ``alpha * (alpha + m - 2) = lam`` on one branch."""

    lam: Fraction
    branch: Branch
    m: int

    def __post_init__(self):
        if self.branch not in ("upper", "lower"):
            raise ValueError(f"branch must be 'upper' or 'lower', got {self.branch!r}")
        if self.lam < 0:
            raise ValueError(f"eigenvalue must be nonnegative, got {self.lam}")

    @property
    def discriminant(self) -> Fraction:
        return Fraction((self.m - 2) ** 2) + 4 * self.lam

    def exact(self) -> Fraction | None:
        """The rate as a Fraction when it is rational, else None."""
        root = _frac_sqrt(self.discriminant)
        if root is None:
            return None
        sign = 1 if self.branch == "upper" else -1
        return (-(self.m - 2) + sign * root) / 2

    def decimal(self, digits: int = 30) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = digits + 10
            disc = self.discriminant
            root = (Decimal(disc.numerator) / Decimal(disc.denominator)).sqrt()
            sign = 1 if self.branch == "upper" else -1
            return (-(self.m - 2) + sign * root) / 2

    def __float__(self):
        exact = self.exact()
        if exact is not None:
            return float(exact)
        return float(self.decimal(20))

    def __str__(self):
        exact = self.exact()
        if exact is not None:
            return str(exact)
        sign = "+" if self.branch == "upper" else "-"
        d = self.discriminant
        return f"({2 - self.m}{sign}sqrt({d}))/2"


def rates_of_eigenvalue(lam: Rational, m: int) -> tuple[GrowthRate, GrowthRate]:
    lam = as_rational(lam)
    return GrowthRate(lam, "lower", m), GrowthRate(lam, "upper", m)


@dataclass(frozen=True)
class HarveyLawson:
    """Built-in spectrum generator for the Harvey-Lawson cone in C^m."""

    m: int
    threads: int = 1
    max_points: int | None = None

    def spectrum(self, bound: Rational) -> LinkSpectrum:
        lam = max(math.ceil(as_rational(bound)), 0)
        return _hl_cached(self.m, lam, self.threads, self.max_points)


@lru_cache(maxsize=64)
def _hl_cached(m, lam, threads, max_points):
    from .lattice import DEFAULT_MAX_POINTS, hl_spectrum

    cap = DEFAULT_MAX_POINTS if max_points is None else max_points
    return hl_spectrum(m, lam, threads=threads, max_points=cap)


@dataclass(frozen=True)
class ConeDescriptor:
    """An SL cone in C^m with its link data.

    ``link_components`` is the number of connected components of the link and
    ``sym_dim`` the dimension of the subgroup of SU(m) preserving the cone.
    Agreement between ``link_components`` and the zero-eigenvalue multiplicity
    is not enforced here; :func:`check_lower_bounds` reports it.
    """

    m: int
    link_components: int
    sym_dim: int
    source: Union[LinkSpectrum, HarveyLawson]
    label: str = ""

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 3:
            raise ValueError(f"m must be an integer >= 3, got {self.m!r}")
        if not isinstance(self.link_components, int) or self.link_components < 1:
            raise ValueError("link_components must be a positive integer")
        if not isinstance(self.sym_dim, int) or not 0 <= self.sym_dim <= self.m**2 - 1:
            raise ValueError(f"sym_dim must lie in [0, {self.m**2 - 1}]")
        if self.source.m != self.m:
            raise ValueError(
                f"spectrum is for m={self.source.m} but the cone has m={self.m}"
            )

    @classmethod
    def harvey_lawson(
        cls, m: int, *, threads: int = 1, max_points: int | None = None
    ) -> "ConeDescriptor":
        """The Harvey-Lawson cone: connected torus link, symmetry group U(1)^(m-1)."""
        return cls(m, 1, m - 1, HarveyLawson(m, threads, max_points), f"HL m={m}")

    def spectrum(self, bound: Rational) -> LinkSpectrum:
        """A spectrum complete up to at least ``bound`` if the source can supply one.

        Stored spectra are returned as-is; operations needing more raise
        :class:`SpectrumTruncatedError`.
        """
        if isinstance(self.source, HarveyLawson):
            return self.source.spectrum(bound)
        return self.source


def is_growth_rate(spec: LinkSpectrum, alpha: Rational) -> bool:
    """Whether ``alpha`` lies in the set of growth rates of ``spec``."""
    return mult_at_rate(spec, alpha) > 0


def mult_at_rate(spec: LinkSpectrum, alpha: Rational) -> int:
    """Multiplicity of the rate ``alpha``: that of ``alpha*(alpha+m-2)``, or 0."""
    lam = rate_to_eigenvalue(alpha, spec.m)
    if lam < 0:
        return 0
    return spec.multiplicity(lam)


def counting_N(spec: LinkSpectrum, delta: Rational) -> int:
    """Signed cumulative multiplicity of growth rates.

    For ``delta >= 0`` this sums multiplicities of rates in ``[0, delta]``; for
    ``delta < 0`` it is minus the sum over rates in ``(delta, 0)``.
    """
    delta = as_rational(delta)
    m = spec.m
    lam = rate_to_eigenvalue(delta, m)
    if delta >= 0:
        spec.require(lam)
        return sum(k for ev, k in spec.entries if ev <= lam)
    if delta > 2 - m:
        return 0
    spec.require(lam)
    return -sum(k for ev, k in spec.entries if ev < lam)


def growth_rates(
    spec: LinkSpectrum, lo: Rational, hi: Rational
) -> list[tuple[GrowthRate, int]]:
    """Growth rates in the closed interval ``[lo, hi]`` with multiplicities.

    Ordered by eigenvalue, lower branch first on ties.
    """
    lo, hi = as_rational(lo), as_rational(hi)
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    m = spec.m
    out: list[tuple[GrowthRate, int]] = []
    # upper roots are >= 0 and increase with lambda
    if hi >= 0:
        top = rate_to_eigenvalue(hi, m)
        bottom = rate_to_eigenvalue(lo, m) if lo > 0 else Fraction(0)
        spec.require(top)
        out += [
            (GrowthRate(ev, "upper", m), k)
            for ev, k in spec.entries
            if bottom <= ev <= top
        ]
    # lower roots are <= 2-m and decrease with lambda
    if lo <= 2 - m:
        top = rate_to_eigenvalue(lo, m)
        bottom = rate_to_eigenvalue(hi, m) if hi < 2 - m else Fraction(0)
        spec.require(top)
        out += [
            (GrowthRate(ev, "lower", m), k)
            for ev, k in spec.entries
            if bottom <= ev <= top
        ]
    out.sort(key=lambda item: (item[0].lam, item[0].branch != "lower"))
    return out


@dataclass(frozen=True)
class BoundCheck:
    name: str
    holds: bool
    margin: int

    def __str__(self):
        status = "ok" if self.holds else "VIOLATED"
        return f"{self.name}: {status} (margin {self.margin})"


def _lower_bound_checks(cone: ConeDescriptor, spec: LinkSpectrum) -> list[BoundCheck]:
    m = cone.m
    m0 = spec.multiplicity(0)
    m1 = mult_at_rate(spec, 1)
    m2 = mult_at_rate(spec, 2)
    n2 = counting_N(spec, 2)
    rot = m * m - 1 - cone.sym_dim
    return [
        BoundCheck("m(0) = b0", m0 == cone.link_components, m0 - cone.link_components),
        BoundCheck("m(1) >= 2m", m1 >= 2 * m, m1 - 2 * m),
        BoundCheck("m(2) >= m^2-1-dim G", m2 >= rot, m2 - rot),
        BoundCheck("N(2) >= m(0)+m(1)+m(2)", n2 >= m0 + m1 + m2, n2 - (m0 + m1 + m2)),
    ]


def check_lower_bounds(cone: ConeDescriptor) -> list[BoundCheck]:
    """Evaluate the multiplicity bounds every SL cone must satisfy."""
    return _lower_bound_checks(cone, cone.spectrum(2 * cone.m))


@dataclass(frozen=True)
class StabilityReport:
    m: int
    N2: int
    m0: int
    m1: int
    m2: int
    s_ind: int
    stable: bool
    rigid: bool
    bound_violations: tuple[str, ...] = ()

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "N2": self.N2,
            "m0": self.m0,
            "m1": self.m1,
            "m2": self.m2,
            "s_ind": self.s_ind,
            "stable": self.stable,
            "rigid": self.rigid,
            "bound_violations": list(self.bound_violations),
        }


def stability_index(cone: ConeDescriptor) -> StabilityReport:
    m = cone.m
    spec = cone.spectrum(2 * m)
    spec.require(2 * m)
    n2 = counting_N(spec, 2)
    m2 = mult_at_rate(spec, 2)
    s_ind = n2 - cone.link_components - m * m - 2 * m + 1 + cone.sym_dim
    return StabilityReport(
        m=m,
        N2=n2,
        m0=spec.multiplicity(0),
        m1=mult_at_rate(spec, 1),
        m2=m2,
        s_ind=s_ind,
        stable=s_ind == 0,
        rigid=m2 == m * m - 1 - cone.sym_dim,
        bound_violations=tuple(
            str(c) for c in _lower_bound_checks(cone, spec) if not c.holds
        ),
    )


@dataclass(frozen=True)
class RateBound:
    """Supremum of admissible singularity rates in (2, 3).

    ``eigenvalue`` is the smallest eigenvalue above 2m whose upper rate is at
    most 3, or None when no such eigenvalue exists and the bound is 3 itself.
    ``exclusive`` is True when a growth rate sits exactly at the bound.
    """

    m: int
    eigenvalue: Fraction | None
    exclusive: bool

    @property
    def rate(self) -> GrowthRate | None:
        if self.eigenvalue is None:
            return None
        return GrowthRate(self.eigenvalue, "upper", self.m)

    def __float__(self):
        return 3.0 if self.rate is None else float(self.rate)

    def admits(self, mu: Rational) -> bool:
        """Whether ``mu`` is an admissible rate: ``2 < mu < 3``, no growth rate in (2, mu]."""
        mu = as_rational(mu)
        if not 2 < mu < 3:
            return False
        if self.eigenvalue is None:
            return True
        return rate_to_eigenvalue(mu, self.m) < self.eigenvalue

    def __str__(self):
        if self.rate is None:
            return "3"
        text = f"{self.rate} ~ {float(self):.6f}"
        return text + (" (exclusive)" if self.exclusive else "")


def admissible_rate_sup(spec: LinkSpectrum) -> RateBound:
    m = spec.m
    top = Fraction(3 * (m + 1))
    spec.require(top)
    above = [ev for ev in spec.eigenvalues() if 2 * m < ev <= top]
    if not above:
        return RateBound(m, None, False)
    return RateBound(m, above[0], True)
