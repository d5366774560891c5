import math

import pytest

import censmed


def test_scalar_functions():
    assert censmed.expit(-0.6419) == pytest.approx(0.3448171681753279, rel=1e-13)
    assert censmed.norm_cdf(-0.0793) == pytest.approx(0.4683970031515690, rel=1e-13)
    assert censmed.inverse_mills(1.0) == pytest.approx(0.2875999709391784, rel=1e-12)


def test_oracle():
    p = censmed.default_sim_params()
    assert censmed.true_indirect_oracle(p, 0.0) == 0.0
    assert censmed.true_indirect_oracle(p, 1.0) == pytest.approx(0.14971493487052496, rel=1e-9)


def test_generate_and_estimate():
    d = censmed.generate_dataset(300, seed=5)
    assert len(d) == 300
    assert 0 < d.count_censored() < 300
    assert all(math.isnan(m) for m, k in zip(d.m, d.delta) if k == 0)
    fit = censmed.fit_censored_normal(d)
    assert fit["converged"]
    rows = censmed.estimate_shift_indirect(d, [0.5, 1.0], method="ol", seed=1)
    assert [r["xi"] for r in rows] == [0.5, 1.0]
    assert rows[0]["indirect"] < rows[1]["indirect"]
    assert rows[0]["direct"] is None
    assert rows[0]["theta"].beta[1] < 0
    again = censmed.estimate_shift_indirect(d, [0.5, 1.0], method="ol", seed=1)
    assert again[1]["indirect"] == rows[1]["indirect"]


def test_all_methods_run():
    d = censmed.generate_dataset(200, seed=6)
    for name in censmed.METHODS:
        (row,) = censmed.estimate_shift_indirect(d, [1.0], method=name)
        assert row["method"] == name
        assert -1.0 <= row["indirect"] <= 1.0


def test_dataset_from_arrays_and_two_arm():
    y = [0, 1, 0, 1, 1, 0, 0, 1] * 10
    m = [2.5, 3.0, 0.0, 2.2, 3.3, 0.0, 2.8, 2.1] * 10
    delta = [1, 1, 0, 1, 1, 0, 1, 1] * 10
    a = [0, 0, 0, 0, 1, 1, 1, 1] * 10
    c = [[float(i % 3 == 0)] for i in range(80)]
    d = censmed.Dataset(y, m, delta, c=c, a=a, assay_limit=1.96)
    assert d.has_treated()
    est = censmed.estimate_two_arm(d, method="extrapolation")
    mean1 = sum(yy for yy, aa in zip(y, a) if aa) / 40
    mean0 = sum(yy for yy, aa in zip(y, a) if not aa) / 40
    assert est["indirect"] + est["direct"] == pytest.approx(mean1 - mean0, abs=1e-12)


def test_bootstrap_and_errors(tmp_path):
    d = censmed.generate_dataset(150, seed=7)
    r = censmed.bootstrap_shift_indirect(d, 1.0, method="al2", B=50, seed=3)
    assert r["lower"] <= r["upper"]
    assert r["B"] == 50
    path = tmp_path / "d.csv"
    censmed.write_csv(d, str(path))
    back = censmed.read_csv(str(path), 1.96)
    assert len(back) == 150
    with pytest.raises(censmed.CensmedError, match="InconsistentCensoring"):
        censmed.read_csv(str(path), 10.0)


def test_run_oracle_mode():
    rc, out, err = censmed.run({"mode": "oracle", "xi": "0"})
    assert rc == 0
    assert out == "xi,p_c,truth\n0.0,0.5,0.0\n"
    with pytest.raises(censmed.CensmedError, match="unknown key"):
        censmed.run({"mode": "oracle", "colour": "red"})
