from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from slcone import moduli
from slcone.errors import ConfigError, InconsistencyError
from slcone.lattice import hl_spectrum
from slcone.moduli import (
    MultiEndCone,
    Plane,
    SingularConfig,
    TopologyData,
    dim_E,
    dim_I,
    dim_K,
    dim_O,
    dim_O_multi_end,
    dim_O_union,
    expected_dim_family,
    expected_dim_moduli,
    fredholm_index,
    mclean_dims,
    stability_index_in_family,
)
from slcone.spectrum import ConeDescriptor, LinkSpectrum, stability_index
from slcone.verify import HL_TABLE


def config(cones, b1=0, rank=0, d=0, transverse=False):
    return SingularConfig(cones[0].m, tuple(cones), TopologyData(b1, rank), d, transverse)


def disconnected_cone(m, b0):
    # union of b0 rotated copies of the HL link: multiplicities scale by b0
    base = hl_spectrum(m, 2 * m)
    spec = LinkSpectrum(m, tuple((lam, b0 * k) for lam, k in base.entries), base.complete_up_to)
    return ConeDescriptor(m, b0, 0, spec, f"{b0} x HL")


def test_dim_E(hl):
    assert dim_E(config([hl(3)])) == 12
    assert dim_E(config([hl(3), hl(3)])) == 24
    bare = ConeDescriptor(3, 1, 0, hl_spectrum(3, 6))
    assert dim_E(config([bare])) == 14


def test_dim_K(hl):
    assert dim_K(config([hl(3)])) == 0
    cones = [hl(3), disconnected_cone(3, 2), disconnected_cone(3, 3)]
    assert dim_K(config(cones)) == 5
    assert dim_K(config([hl(4)] * 5)) == 4


@pytest.mark.parametrize("b1, rank, expected", [(5, 2, 3), (0, 0, 0), (4, 0, 4)])
def test_dim_I(hl, b1, rank, expected):
    assert dim_I(config([hl(3)], b1, rank)) == expected


def test_topology_invariant():
    with pytest.raises(ConfigError):
        TopologyData(2, 3)
    with pytest.raises(ConfigError):
        TopologyData(-1, 0)


def test_dim_O_examples(hl):
    assert dim_O(config([hl(3)] * 3)) == 0
    assert dim_O(config([hl(4)] * 2)) == 12
    assert dim_O(config([hl(7)])) == 112


def test_dim_O_cross_check_fires(hl, monkeypatch):
    real = moduli.stability_index

    def off_by_one(cone):
        r = real(cone)
        return type(r)(**{**r.__dict__, "s_ind": r.s_ind + 1})

    monkeypatch.setattr(moduli, "stability_index", off_by_one)
    with pytest.raises(InconsistencyError):
        dim_O(config([hl(3)]))


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 8), st.lists(st.integers(1, 3), min_size=1, max_size=5))
def test_obstruction_expressions_agree(m, b0s):
    cones = [
        ConeDescriptor.harvey_lawson(m) if b0 == 1 else disconnected_cone(m, b0)
        for b0 in b0s
    ]
    c = config(cones)
    n2 = sum(stability_index(x).N2 for x in cones)
    via_spaces = n2 - dim_E(c) - dim_K(c) - 1
    assert dim_O(c) == via_spaces == sum(stability_index(x).s_ind for x in cones)
    assert dim_O(c) >= 0


def test_expected_dim_examples(hl):
    r = expected_dim_moduli(config([hl(3)] * 2, b1=5))
    assert r.expected_dim == 5 and r.stable
    assert any("manifold (stable singularities)" in n for n in r.notes)
    r = expected_dim_moduli(config([hl(4)], b1=4))
    assert (r.dim_I, r.dim_O, r.expected_dim) == (4, 6, -2)
    assert any("generically empty" in n for n in r.notes)
    r = expected_dim_moduli(config([hl(3)]))
    assert r.expected_dim == 0


def test_expected_dim_family_examples(hl):
    r = expected_dim_family(config([hl(3)], b1=2, d=3))
    assert (r.family_case, r.family_expected_dim, r.fiber_dim) == ("stable", 5, 2)
    r = expected_dim_family(config([hl(4)], b1=4, d=6, transverse=True))
    assert (r.family_case, r.family_expected_dim) == ("transverse", 4)
    r = expected_dim_family(config([hl(4)], b1=4, d=6))
    assert r.family_case == "virtual"
    with pytest.raises(ConfigError):
        expected_dim_family(config([hl(3)]))


def test_fredholm_examples(hl):
    r = fredholm_index(config([hl(3)]), [F(9, 4)])
    assert (r.fredholm, r.index, r.injective) == (True, -13, True)
    assert fredholm_index(config([hl(3)] * 2), ["9/4", "9/4"]).index == -26
    for beta in (1, 2, 0, -1):
        r = fredholm_index(config([hl(3)]), [beta])
        assert not r.fredholm and r.index is None and r.bad_points == (0,)


@settings(deadline=None)
@given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=1000), min_size=1, max_size=4))
def test_fredholm_small_positive_rates(betas):
    betas = [b for b in betas if 0 < b < 1]
    if not betas:
        return
    cones = [ConeDescriptor.harvey_lawson(3)] * len(betas)
    r = fredholm_index(config(cones), betas)
    assert r.fredholm and r.injective
    assert r.index == -sum(c.link_components for c in cones)


def test_fredholm_negative_rate_not_injective(hl):
    r = fredholm_index(config([hl(3)]), [F(-1, 2)])
    assert r.fredholm and r.index == 0 and not r.injective
    r = fredholm_index(config([hl(3)]), [F(-5, 2)])
    assert r.index == 7


def test_fredholm_rate_count_mismatch(hl):
    with pytest.raises(ConfigError):
        fredholm_index(config([hl(3)]), [1, 2])


def test_multi_end_examples(hl):
    assert dim_O_multi_end([MultiEndCone((Plane(3), Plane(3)))], 3) == 0
    single = MultiEndCone((hl(3),))
    assert dim_O_multi_end([single], 3) == 0 == dim_O(config([hl(3)]))
    assert dim_O_multi_end([MultiEndCone((hl(4), hl(4)))], 4) == 20


@pytest.mark.parametrize("m", range(3, 9))
def test_multi_end_single_component_matches_single_end(hl, m):
    point = MultiEndCone((hl(m),), sym_dim=m - 1)
    assert dim_O_multi_end([point], m) == dim_O(config([hl(m)])) == dim_O_union(point)


@pytest.mark.parametrize("m", range(3, 8))
@pytest.mark.parametrize("k", [2, 3])
def test_multi_end_strictly_reduces(hl, m, k):
    # sym_dim=0 makes the union count as small as it can be
    point = MultiEndCone((hl(m),) * k, sym_dim=0)
    assert dim_O_multi_end([point], m) < dim_O_union(point)


def test_multi_end_in_config(hl):
    c = SingularConfig(3, (hl(3), MultiEndCone((hl(3), Plane(3)))), TopologyData(3, 1))
    assert dim_O(c) == 0 + (-6 + 6 + 3)
    assert dim_K(c) == 1 + 2 - 1
    r = expected_dim_moduli(c)
    assert r.expected_dim == 2 - 3 and not r.stable


def test_multi_end_rejects_mixed_m(hl):
    with pytest.raises(ValueError):
        MultiEndCone((hl(3), Plane(4)))
    with pytest.raises(ConfigError):
        dim_O_multi_end([MultiEndCone((hl(3),))], 4)


def test_stability_in_family_examples(hl):
    assert stability_index_in_family(hl(3), 6) == 0
    assert stability_index_in_family(hl(3), 7) == -1


@pytest.mark.parametrize("m", range(3, 13))
def test_stability_in_family_orbit_identity(hl, m):
    cone = hl(m)
    orbit = m * m - 1 - cone.sym_dim
    assert stability_index_in_family(cone, orbit) == stability_index(cone).s_ind == HL_TABLE[m][2]


@pytest.mark.parametrize("b1, d, expected", [(3, 0, (3, 3)), (0, 5, (0, 5)), (2, 4, (2, 6))])
def test_mclean_dims(b1, d, expected):
    assert mclean_dims(b1, d) == expected
