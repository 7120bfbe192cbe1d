import numpy as np
import pytest

from projlens import fingeo as FG
from projlens.fingeo import GeometryError, HyperbolicQuadric, ProjectiveGeometry, make_geometry


@pytest.mark.parametrize("geom,count", [
    (ProjectiveGeometry(2, 2), 21),
    (ProjectiveGeometry(2, 3), 52),
    (ProjectiveGeometry(3, 2), 315),
    (ProjectiveGeometry(3, 3), 2080),
    (HyperbolicQuadric(4, 2), 42525),
])
def test_chamber_counts_and_thickness(geom, count):
    assert geom.estimated_chambers() == count
    cs = FG.chamber_graph(geom)
    assert len(cs) == count
    assert cs.panel_sizes() == {geom.q + 1}


def test_generator_families():
    g = HyperbolicQuadric(4, 3)
    rng = np.random.default_rng(0)
    C = g.random_chamber(rng)
    V = g.chamber_flag(C)
    assert V.types == {1, 2, 3, 4}
    assert g.family_of(V[3]) == 3 and g.family_of(V[4]) == 4
    assert (V[3] & V[4]).dim == 3


def test_opposition_basics(rng):
    g = ProjectiveGeometry(3, 3)
    F = g.random_flag({1, 2}, rng)
    G = g.random_opposite([F], rng)
    assert G.types == {2, 3}
    assert g.is_opposite(F, G)
    with pytest.raises(GeometryError):
        g.is_opposite(F, F)
    P = g.perspectivity(F, G)
    C = g.random_chamber(rng, F)
    assert g.contains_flag(P(C), G)
    # back again is the inverse
    assert g.perspectivity(G, F)(P(C)) == C


def test_exhaustive_oracle_pg22():
    rep = FG.exhaustive_oracle_check(ProjectiveGeometry(2, 2))
    assert rep.checked == 336 and rep.mismatches == 0


@pytest.mark.parametrize("tag,q", [("A2", 3), ("A3", 2), ("D4", 2)])
def test_sampled_oracle(tag, q):
    rep = FG.oracle_check(make_geometry(tag, q), 150, seed=5)
    assert rep.mismatches == 0


def test_guard_and_unknown():
    with pytest.raises(FG.SizeGuardError):
        ProjectiveGeometry(7, 3).guard()
    with pytest.raises((GeometryError, ValueError)):
        make_geometry("E6", 2)


def test_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("PROJLENS_CACHE_DIR", str(tmp_path))
    g = ProjectiveGeometry(2, 3)
    path = FG._cache_path(g)
    chambers = g.residue_chambers()
    FG._save_chambers(path, g, chambers)
    assert FG._load_chambers(path, g) == chambers


def test_odd_witt_index_swaps_families(rng):
    g = HyperbolicQuadric(5, 2)
    assert g.op[4] == 5 and g.op[5] == 4
    for J in ({4}, {5}, {1, 4}, {2, 4, 5}):
        F = g.random_flag(J, rng)
        G = g.random_opposite([F], rng)
        assert G.types == g.opposite_type(J)
        assert all(g.family_of(G[t]) == t for t in G.types if t >= 4)
        C = g.random_chamber(rng, F)
        D = g.perspectivity(F, G)(C)
        assert g.contains_flag(D, G)
        assert g.perspectivity(G, F)(D) == C
