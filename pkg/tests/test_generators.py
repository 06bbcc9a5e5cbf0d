"""Seeded scenario construction: flavor contracts and determinism."""

import numpy as np
import pytest

from gframes import (BESSEL_ONLY, FRAME, GeneratorSpec, InvalidSpec, classify,
                     controlled_classify, frame_operator, generate,
                     generate_pair, optimal_bounds, validate_commutation)
from gframes.serialization import dumps, scenario_to_obj

SEEDS = range(1000, 1100)


def test_spec_validation():
    with pytest.raises(InvalidSpec):
        GeneratorSpec(seed=1, n=0, d=1, m=1)
    with pytest.raises(InvalidSpec):
        GeneratorSpec(seed=1, n=1, d=1, m=1, flavor="unknown")
    with pytest.raises(InvalidSpec):
        GeneratorSpec(seed=1, n=1, d=1, m=1, dw_range=(3, 1))
    with pytest.raises(InvalidSpec):
        GeneratorSpec(seed=1, n=1, d=1, m=1, spectrum_range=(-1.0, 2.0))
    with pytest.raises(InvalidSpec):
        GeneratorSpec(seed=-1, n=1, d=1, m=1)
    with pytest.raises(InvalidSpec):
        GeneratorSpec(seed=2**64, n=1, d=1, m=1)
    with pytest.raises(InvalidSpec):
        GeneratorSpec(seed=1, n=2, d=3, m=2, flavor="parseval")


def test_generic_flavor_contract():
    for seed in SEEDS:
        sc = generate(GeneratorSpec(seed=seed, n=2, d=2, m=3, flavor="generic"))
        dn = 2 * 2
        np.testing.assert_array_equal(sc.pair.c.base.action, np.eye(dn))
        np.testing.assert_array_equal(sc.pair.cp.base.action, np.eye(dn))
        assert classify(sc.family).kind == FRAME


def test_commuting_flavor_contract():
    for seed in SEEDS:
        sc = generate(GeneratorSpec(seed=seed, n=2, d=2, m=3, flavor="commuting"))
        rep = validate_commutation(sc.family, sc.pair.c, sc.pair.cp, tol=1e-10)
        assert rep.passed


def test_commuting_controls_respect_spectrum_range():
    lo, hi = 0.25, 3.0
    for seed in range(1000, 1020):
        sc = generate(GeneratorSpec(seed=seed, n=2, d=2, m=3,
                                    flavor="commuting",
                                    spectrum_range=(lo, hi)))
        for ctrl in (sc.pair.c, sc.pair.cp):
            eigs = np.linalg.eigvalsh(ctrl.base.action)
            assert eigs[0] >= lo - 1e-12
            assert eigs[-1] <= hi + 1e-12


def test_parseval_flavor_contract():
    for seed in SEEDS:
        sc = generate(GeneratorSpec(seed=seed, n=2, d=2, m=3, flavor="parseval"))
        b = optimal_bounds(sc.family)
        assert abs(b.lower - 1.0) <= 1e-9
        assert abs(b.upper - 1.0) <= 1e-9
        np.testing.assert_array_equal(sc.pair.c.base.action, np.eye(4))


def test_parseval_frame_operator_is_identity():
    sc = generate(GeneratorSpec(seed=8, n=3, d=2, m=4, flavor="parseval"))
    s = frame_operator(sc.family).action
    assert np.linalg.norm(s - np.eye(6)) <= 1e-10


def test_bessel_only_flavor_contract():
    for seed in SEEDS:
        sc = generate(GeneratorSpec(seed=seed, n=2, d=2, m=3,
                                    flavor="bessel_only"))
        assert classify(sc.family).kind == BESSEL_ONLY


def test_bessel_only_has_common_null_direction():
    sc = generate(GeneratorSpec(seed=12, n=2, d=3, m=4, flavor="bessel_only"))
    s = frame_operator(sc.family).action
    evals = np.linalg.eigvalsh(0.5 * (s + s.conj().T))
    assert evals[0] <= 1e-12 * max(1.0, evals[-1])


def test_determinism_byte_identical():
    spec = GeneratorSpec(seed=99, n=2, d=2, m=4, flavor="commuting")
    a = dumps(scenario_to_obj(generate(spec)))
    b = dumps(scenario_to_obj(generate(spec)))
    assert a == b


def test_determinism_across_flavors():
    for flavor in ("generic", "commuting", "parseval", "bessel_only"):
        spec = GeneratorSpec(seed=321, n=2, d=2, m=3, flavor=flavor)
        assert (dumps(scenario_to_obj(generate(spec)))
                == dumps(scenario_to_obj(generate(spec))))


def test_seed_changes_output():
    s1 = generate(GeneratorSpec(seed=1, n=2, d=2, m=3, flavor="generic"))
    s2 = generate(GeneratorSpec(seed=2, n=2, d=2, m=3, flavor="generic"))
    assert not np.array_equal(s1.family.points[0].lam.action,
                              s2.family.points[0].lam.action)


def test_dw_range_respected():
    spec = GeneratorSpec(seed=5, n=2, d=2, m=10, dw_range=(2, 4))
    sc = generate(spec)
    dws = [p.codomain_rank for p in sc.family.points]
    assert all(2 <= dw <= 4 for dw in dws)
    assert len(dws) == 10


def test_pair_shares_measure_and_structure():
    sc, twin = generate_pair(GeneratorSpec(seed=201, n=2, d=2, m=4,
                                           flavor="commuting"))
    fam = sc.family
    assert twin.size == fam.size
    for p, q in zip(fam.points, twin.points):
        assert p.weight == q.weight
        assert p.codomain_rank == q.codomain_rank
        assert not np.array_equal(p.lam.action, q.lam.action)


def test_pair_twin_satisfies_commutation():
    for seed in range(300, 320):
        sc, twin = generate_pair(GeneratorSpec(seed=seed, n=2, d=2, m=4,
                                               flavor="commuting"))
        rep = validate_commutation(twin, sc.pair.c, sc.pair.cp, tol=1e-10)
        assert rep.passed


def test_pair_twin_is_frame_for_covering_specs():
    for seed in range(400, 420):
        sc, twin = generate_pair(GeneratorSpec(seed=seed, n=2, d=2, m=4,
                                               flavor="commuting"))
        assert classify(twin).kind == FRAME


def test_pair_primary_matches_single_generate():
    spec = GeneratorSpec(seed=777, n=2, d=2, m=3, flavor="commuting")
    sc_single = generate(spec)
    sc_pair, _ = generate_pair(spec)
    for p, q in zip(sc_single.family.points, sc_pair.family.points):
        np.testing.assert_array_equal(p.lam.action, q.lam.action)


def test_generated_commuting_controlled_verdict_matches_plain():
    for seed in range(500, 520):
        sc = generate(GeneratorSpec(seed=seed, n=2, d=2, m=4, flavor="commuting"))
        assert (classify(sc.family).kind == FRAME) == (
            controlled_classify(sc).kind == FRAME)
