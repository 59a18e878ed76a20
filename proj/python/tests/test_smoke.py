import math

import pytest

import tpais


def test_gmm_density_examples():
    g = tpais.GaussianMixture(means=[[0.0]], variances=[[1.0]], weights=[1.0])
    assert g.density([0.0]) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-12)
    with pytest.raises(ValueError):
        tpais.GaussianMixture(means=[[0.0]], variances=[[1.0]], weights=[0.5])


def test_sampler_run_and_evidence():
    target = tpais.make_target("gmm5", 1, seed=3)
    s = tpais.TpAisSampler(target, 128, seed=1)
    s.run()
    assert s.done
    samples, weights = s.samples()
    assert len(samples) == len(weights) == s.leaf_count >= 128
    assert all(w >= 0.0 and math.isfinite(w) for w in weights)
    assert 0.5 < s.evidence() < 1.5
    assert tpais.normalized_ess(weights) > 0.5
    assert s.tree_text().startswith("tpais-tree 1 ")


def test_sampler_is_deterministic_and_anytime():
    target = tpais.make_target("egg", 2)
    a = tpais.TpAisSampler(target, 60, resample=True, seed=9)
    b = tpais.TpAisSampler(target, 60, resample=True, seed=9)
    while not a.done:
        a.step()
        samples, weights = a.samples()
        assert len(samples) == a.leaf_count
    b.run()
    assert a.samples() == b.samples()


def test_python_callable_target():
    target = tpais.Target.from_callable(lambda x: 0.5, lower=[-1.0], upper=[1.0])
    s = tpais.TpAisSampler(target, 4, seed=2)
    s.run()
    _, weights = s.samples()
    assert sum(weights) == pytest.approx(1.0)
    assert s.proposal_density([0.1]) > 0.0


def test_negative_target_raises():
    target = tpais.Target.from_callable(lambda x: -1.0, lower=[-1.0], upper=[1.0])
    with pytest.raises(tpais.SamplingError):
        tpais.TpAisSampler(target, 4)


def test_baselines_and_metrics():
    target = tpais.make_target("normal", 1, seed=5)
    mu = target.true_model.means[0][0]
    chain, rate = tpais.run_mh(target, [mu], 2000, proposal_std=0.05, seed=1)
    assert len(chain) == 2000 and 0.0 < rate <= 1.0
    assert 1.0 <= tpais.ess_mcmc(chain) <= 2000
    samples, weights, locations = tpais.run_pmc(target, 20, 5, weighting="dm", seed=1)
    assert len(samples) == 100 and len(locations) == 20
    assert tpais.ess_is([2.0, 1.0, 1.0]) == pytest.approx(8.0 / 3.0)
    assert tpais.evidence_estimate([0.5, 1.5]) == 1.0
    p = lambda x: 0.5
    assert tpais.jsd(p, p, [-1.0], [1.0], n=100) == 0.0
    (d,) = tpais.kde_density([[0.0]], 1.0, [[0.0]])
    assert d == pytest.approx(1.0 / math.sqrt(2.0 * math.pi))


def test_run_experiments():
    rows, csv = tpais.run_experiments(["tpais", "mh"], ["normal"], [1], [16], trials=2, jsd_points=200, timing=False)
    assert len(rows) == 4
    assert all(r["error"] == "" for r in rows)
    assert csv.splitlines()[0] == "method,family,dims,N,trial,seed,ness,jsd,evidence_mse,wall_time_seconds"
    assert len(csv.splitlines()) == 5
    _, again = tpais.run_experiments(["tpais", "mh"], ["normal"], [1], [16], trials=2, jsd_points=200, timing=False)
    assert csv == again
