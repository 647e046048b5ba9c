import json
import math

import pytest

import circtrunc as ct


def cn(kappa, nu=0.0):
    return ct.Distribution(json.dumps({"family": "circular_normal", "params": {"nu": nu, "kappa": kappa}}))


def test_project():
    assert ct.project(3.9270, 0.0, math.pi / 2) == pytest.approx(0.0)
    assert ct.project(2.356, 0.0, math.pi / 2) == pytest.approx(math.pi / 2)
    assert ct.project(0.5, 0.0, math.pi / 2) == pytest.approx(0.5)


def test_distribution_and_sampling():
    d = cn(2.0, 1.0)
    assert d.name == "circular_normal"
    assert d.location == pytest.approx(1.0)
    assert d.zeta(0.3) == pytest.approx(math.exp(1.2))
    xs = d.sample(500, 7)
    assert len(xs) == 500
    assert xs == d.sample(500, 7)
    assert all(0.0 <= x < 2 * math.pi for x in xs)
    assert abs(ct.mean_direction(xs) - 1.0) < 0.1
    again = ct.Distribution(d.to_json())
    assert again.density(0.4) == pytest.approx(d.density(0.4))


def test_estimators_agree_on_a_tight_sample():
    xs = cn(20.0, 2.0).sample(50, 3)
    for f in (ct.mean_direction, ct.circular_median, ct.l1_estimator, ct.spatial_median, ct.wilcoxon):
        assert abs(f(xs) - 2.0) < 0.15
    assert ct.admissible_equivariant(cn(20.0), xs) == pytest.approx(ct.mean_direction(xs), abs=1e-6)


def test_errors():
    with pytest.raises(ValueError):
        ct.Distribution('{"family":"circular_normal","params":{"kappa":-1}}')
    with pytest.raises(ValueError):
        ct.Distribution("{broken")
    with pytest.raises(ArithmeticError):
        ct.mean_direction([0.0, 2 * math.pi / 3, 4 * math.pi / 3])
    mix = ct.Distribution(
        '{"family":"antipodal_mixture","params":{"epsilon":0.1,"base":{"family":"circular_normal","params":{"kappa":1}}}}'
    )
    with pytest.raises(ValueError):
        ct.improve_by_projection(4.0, 0.0, math.pi, mix)
    assert ct.improve_by_projection(4.0, 0.0, math.pi, mix, force=True) == pytest.approx(math.pi)


def test_restricted_rules():
    b = math.pi / 2
    assert ct.restricted_mle_cn(3 * math.pi / 2, b) == 0.0
    rs = ct.reduced_space_cn(math.pi / 4 + 0.3, 5.0, 2.0, b)
    assert rs["start"] == pytest.approx(b / 2)
    assert rs["length"] <= b / 2
    v = ct.improve_equivariant(5.5, 5.5, 4.0, 1.0, b)
    assert 0.0 <= v <= b


def test_risk_curve():
    cfg = {
        "distribution": {"family": "circular_normal", "params": {"kappa": 1}},
        "omega1": {"lo": 0, "hi": math.pi / 3},
        "estimators": ["mean", "restricted_mle"],
        "n": 10,
        "replicates": 500,
        "seed": 4,
        "nu_points": 3,
    }
    rows = ct.risk_curve(json.dumps(cfg), 1)
    assert len(rows) == 6
    assert rows == ct.risk_curve(json.dumps(cfg), 2)
    for r in rows:
        assert 0.0 <= r["risk"] <= 2.0
        assert r["replicates"] == 500
