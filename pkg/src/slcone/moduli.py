"""Dimension bookkeeping for moduli of SL m-folds with conical singularities.

A configuration is a list of singular points.  Each point carries either a
single cone (whose link may be disconnected) or, when the link components are
allowed to rotate independently, a :class:`MultiEndCone` whose components are
connected cones or SL planes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from .errors import ConfigError, InconsistencyError
from .spectrum import (
    ConeDescriptor,
    Rational,
    as_rational,
    counting_N,
    is_growth_rate,
    rate_to_eigenvalue,
    stability_index,
)

__all__ = [
    "Plane",
    "MultiEndCone",
    "TopologyData",
    "SingularConfig",
    "ModuliReport",
    "FredholmResult",
    "dim_E",
    "dim_K",
    "dim_I",
    "dim_O",
    "dim_O_multi_end",
    "dim_O_union",
    "expected_dim_moduli",
    "expected_dim_family",
    "fredholm_index",
    "stability_index_in_family",
    "mclean_dims",
]


@dataclass(frozen=True)
class Plane:
    """An SL plane R^m as one component of a multi-ended cone."""

    m: int

    # an SL plane enters the obstruction count with s-ind = -m
    @property
    def s_ind(self) -> int:
        return -self.m


@dataclass(frozen=True)
class MultiEndCone:
    """A singular point whose cone components move independently under SU(m).

    ``sym_dim`` is the symmetry dimension of the union cone; it only feeds
    ``dim_E`` and defaults to 0.
    """

    components: tuple[Union[ConeDescriptor, Plane], ...]
    sym_dim: int = 0

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a multi-ended cone needs at least one component")
        ms = {c.m for c in comps}
        if len(ms) != 1:
            raise ValueError(f"components disagree on m: {sorted(ms)}")
        object.__setattr__(self, "components", comps)

    @property
    def m(self) -> int:
        return self.components[0].m

    @property
    def link_components(self) -> int:
        return sum(
            1 if isinstance(c, Plane) else c.link_components for c in self.components
        )


Point = Union[ConeDescriptor, MultiEndCone]


@dataclass(frozen=True)
class TopologyData:
    """Betti number of X' and the rank of H^1(X') -> sum_i H^1(Sigma_i)."""

    b1_X_prime: int
    restriction_rank: int

    def __post_init__(self):
        for name in ("b1_X_prime", "restriction_rank"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ConfigError(f"{name} must be a nonnegative integer, got {value!r}")
        if self.restriction_rank > self.b1_X_prime:
            raise ConfigError(
                f"restriction_rank ({self.restriction_rank}) exceeds "
                f"b1_X_prime ({self.b1_X_prime})"
            )


@dataclass(frozen=True)
class SingularConfig:
    m: int
    points: tuple[Point, ...]
    topology: TopologyData = TopologyData(0, 0)
    family_dim: int = 0
    transverse: bool = False

    def __post_init__(self):
        points = tuple(self.points)
        if not points:
            raise ConfigError("a configuration needs at least one singular point")
        for i, p in enumerate(points):
            if p.m != self.m:
                raise ConfigError(f"points[{i}] has m={p.m}, configuration has m={self.m}")
        if isinstance(self.family_dim, bool) or not isinstance(self.family_dim, int) \
                or self.family_dim < 0:
            raise ConfigError(f"family_dim must be a nonnegative integer, got {self.family_dim!r}")
        object.__setattr__(self, "points", points)

    @property
    def n(self) -> int:
        return len(self.points)


def _sym_dim(p: Point) -> int:
    return p.sym_dim


def dim_E(config: SingularConfig) -> int:
    """Dimension of the space of singular points and tangent identifications."""
    m = config.m
    return config.n * (m * m + 2 * m - 1) - sum(_sym_dim(p) for p in config.points)


def dim_K(config: SingularConfig) -> int:
    return sum(p.link_components for p in config.points) - 1


def dim_I(config: SingularConfig) -> int:
    """Infinitesimal deformations: the kernel of H^1(X') -> sum_i H^1(Sigma_i)."""
    t = config.topology
    return t.b1_X_prime - t.restriction_rank


def _multi_end_contribution(point: MultiEndCone) -> int:
    m = point.m
    total = -2 * m
    for c in point.components:
        s = c.s_ind if isinstance(c, Plane) else stability_index(c).s_ind
        total += s + 2 * m
    return total


def _point_obstruction(point: Point) -> int:
    if isinstance(point, MultiEndCone):
        return _multi_end_contribution(point)
    return stability_index(point).s_ind


def dim_O(config: SingularConfig) -> int:
    """Obstruction dimension: the sum of the stability indices of the cones.

    When every point is a single cone the three equivalent expressions for
    the sum are evaluated and compared.
    """
    total = sum(_point_obstruction(p) for p in config.points)
    if all(isinstance(p, ConeDescriptor) for p in config.points):
        m = config.m
        n2 = [counting_N(p.spectrum(2 * m), 2) for p in config.points]
        via_spaces = sum(n2) - dim_E(config) - dim_K(config) - 1
        per_point = sum(
            n - p.link_components - m * m - 2 * m + 1 + p.sym_dim
            for n, p in zip(n2, config.points)
        )
        if not via_spaces == per_point == total:
            raise InconsistencyError(
                f"obstruction dimension disagrees: {via_spaces} (via dim E, dim K), "
                f"{per_point} (per point), {total} (stability indices)"
            )
    return total


def dim_O_multi_end(points: Sequence[MultiEndCone], m: int) -> int:
    """Obstruction dimension when link components rotate independently."""
    for i, p in enumerate(points):
        if p.m != m:
            raise ConfigError(f"points[{i}] has m={p.m}, expected m={m}")
    return sum(_multi_end_contribution(p) for p in points)


def dim_O_union(point: MultiEndCone) -> int:
    """Obstruction count for ``point`` treated as one rigidly moving cone.

    Uses the union link's counting function (the sum over components) with
    the union's ``sym_dim``.  Planes are not cones with an isolated
    singularity, so they are rejected.
    """
    m = point.m
    n2 = 0
    for c in point.components:
        if isinstance(c, Plane):
            raise ConfigError("plane components have no single-cone stability index")
        n2 += counting_N(c.spectrum(2 * m), 2)
    return n2 - point.link_components - m * m - 2 * m + 1 + point.sym_dim


@dataclass
class ModuliReport:
    dim_E: int
    dim_K: int
    dim_I: int
    dim_O: int
    expected_dim: int
    stable: bool
    family_dim: int = 0
    family_expected_dim: int | None = None
    fiber_dim: int | None = None
    family_case: str | None = None
    notes: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        out = {
            "dim_E": self.dim_E,
            "dim_K": self.dim_K,
            "dim_I": self.dim_I,
            "dim_O": self.dim_O,
            "expected_dim": self.expected_dim,
            "stable": self.stable,
        }
        if self.family_dim:
            out.update(
                family_dim=self.family_dim,
                family_expected_dim=self.family_expected_dim,
                fiber_dim=self.fiber_dim,
                family_case=self.family_case,
            )
        out["notes"] = list(self.notes)
        return out


def _base_report(config: SingularConfig) -> ModuliReport:
    obstructions = [_point_obstruction(p) for p in config.points]
    o = dim_O(config)
    i = dim_I(config)
    return ModuliReport(
        dim_E=dim_E(config),
        dim_K=dim_K(config),
        dim_I=i,
        dim_O=o,
        expected_dim=i - o,
        stable=all(s == 0 for s in obstructions),
    )


def expected_dim_moduli(config: SingularConfig) -> ModuliReport:
    """Expected dimension ``dim I - dim O`` of the moduli space near X."""
    report = _base_report(config)
    if report.stable:
        report.notes.append(
            f"manifold (stable singularities): smooth of dimension {report.dim_I}"
        )
    elif config.transverse:
        report.notes.append(
            f"transverse: smooth near X of dimension {report.expected_dim}"
        )
    if report.expected_dim < 0:
        report.notes.append(
            "negative expected dimension: generically empty for generic Kahler form"
        )
    return report


def expected_dim_family(config: SingularConfig) -> ModuliReport:
    """Expected dimension of the moduli space over a ``d``-parameter family."""
    d = config.family_dim
    if d < 1:
        raise ConfigError("family_dim must be >= 1; use expected_dim_moduli for d = 0")
    report = expected_dim_moduli(config)
    report.family_dim = d
    if report.stable:
        report.family_case = "stable"
        report.family_expected_dim = d + report.dim_I
        report.fiber_dim = report.dim_I
        report.notes.append(
            f"submersion onto the family with fibres of dimension {report.dim_I}"
        )
    else:
        report.family_expected_dim = d + report.dim_I - report.dim_O
        if config.transverse:
            report.family_case = "transverse"
            report.notes.append("transverse in family: smooth near (0, X)")
        else:
            report.family_case = "virtual"
            report.notes.append("neither stable nor transverse: virtual dimension only")
        if report.family_expected_dim < 0:
            report.notes.append("negative family expected dimension: generically empty")
    return report


@dataclass(frozen=True)
class FredholmResult:
    rates: tuple[Fraction, ...]
    fredholm: bool
    index: int | None
    injective: bool
    bad_points: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        return {
            "rates": [str(r) for r in self.rates],
            "fredholm": self.fredholm,
            "index": self.index,
            "injective": self.injective,
            "bad_points": list(self.bad_points),
        }


def _point_cones(point: Point) -> list[ConeDescriptor]:
    if isinstance(point, ConeDescriptor):
        return [point]
    if any(isinstance(c, Plane) for c in point.components):
        raise ConfigError("Fredholm index needs spectra; plane components carry none")
    return list(point.components)


def _needed(beta: Fraction, m: int) -> Fraction:
    return max(rate_to_eigenvalue(beta, m), Fraction(0))


def fredholm_index(config: SingularConfig, beta: Sequence[Rational]) -> FredholmResult:
    """Index of the weighted Laplacian with decay rates ``beta`` at the points.

    A rate that is itself a growth rate makes the operator non-Fredholm; this
    is reported in the result, not raised.
    """
    rates = tuple(as_rational(b) for b in beta)
    if len(rates) != config.n:
        raise ConfigError(f"need one rate per point: {config.n} points, {len(rates)} rates")
    m = config.m
    bad = []
    index = 0
    for i, (point, b) in enumerate(zip(config.points, rates)):
        need = _needed(b, m)
        for cone in _point_cones(point):
            spec = cone.spectrum(need)
            if is_growth_rate(spec, b):
                bad.append(i)
                break
            index -= counting_N(spec, b)
    fredholm = not bad
    return FredholmResult(
        rates=rates,
        fredholm=fredholm,
        index=index if fredholm else None,
        injective=all(b > 0 for b in rates),
        bad_points=tuple(bad),
    )


def stability_index_in_family(cone: ConeDescriptor, family_dim_C: int) -> int:
    """Stability index of a cone inside a family of cones of dimension ``family_dim_C``."""
    if family_dim_C < 0:
        raise ValueError("family_dim_C must be nonnegative")
    m = cone.m
    n2 = counting_N(cone.spectrum(2 * m), 2)
    return n2 - cone.link_components - 2 * m - family_dim_C


def mclean_dims(b1_N: int, d: int = 0) -> tuple[int, int]:
    """Moduli dimensions of a compact nonsingular SL m-fold: alone and over a family."""
    if b1_N < 0 or d < 0:
        raise ValueError("b1_N and d must be nonnegative")
    return b1_N, d + b1_N
