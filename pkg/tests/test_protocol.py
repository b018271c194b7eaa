import numpy as np
import pytest

from oracles import trial_stream
from rarebridge import _backend
from rarebridge.errors import InvalidParameterError
from rarebridge.graph import gen_barbell, gen_chain_sbm
from rarebridge.protocol import (
    ProtocolConfig,
    ResultRow,
    TrialStats,
    aggregate,
    mix_seed,
    results_from_csv,
    results_from_json,
    results_to_csv,
    results_to_json,
    run_phase_sweep,
    run_protocol,
    run_trial,
    splitmix64,
    trial_rng,
)
from rarebridge.sparsify import Strategy
from rarebridge.spectral import weight_map

BARBELL = gen_barbell(8)
BARBELL_R = weight_map(BARBELL.graph, 2.0)
CHAIN = gen_chain_sbm([10, 15, 20])
CHAIN_R = weight_map(CHAIN.graph, 2.0)


def test_splitmix_reference_value():
    # first SplitMix64 output from state 0
    assert splitmix64(0) == 0xE220A8397B1DCDAF


def test_trial_streams_match_independent_derivation():
    for seed, idx in [(42, 0), (42, 499), (2**64 - 1, 7)]:
        assert np.array_equal(trial_rng(seed, idx).random(5), trial_stream(seed, idx).random(5))
    assert mix_seed(42, 0) != mix_seed(42, 1) != mix_seed(43, 1)


def test_run_trial_examples():
    for t in range(5):
        assert run_trial(BARBELL, BARBELL_R, Strategy("Standard"), 0.5, t, 42) == (False, 1.0)
    for tag in ("Random", "Standard", "Weighted", "Oracle"):
        assert run_trial(BARBELL, BARBELL_R, Strategy(tag), 1.0, 3, 42) == (True, 0.0)
    connected, rse = run_trial(CHAIN, CHAIN_R, Strategy("Oracle"), 0.6, 0, 42)
    assert isinstance(connected, bool) and rse >= 0.0


def test_config_validation():
    with pytest.raises(InvalidParameterError):
        ProtocolConfig(trials=0)
    with pytest.raises(InvalidParameterError):
        ProtocolConfig(rho=0.0)
    with pytest.raises(InvalidParameterError):
        ProtocolConfig(base_seed=-1)
    with pytest.raises(InvalidParameterError):
        ProtocolConfig(strategies=("Magic",))


def test_single_trial_rate_is_binary():
    for seed in range(5):
        for stats in run_protocol(BARBELL, ProtocolConfig(trials=1, base_seed=seed)):
            assert stats.connectivity_rate in (0.0, 1.0)
            assert stats.rse_std == 0.0


def test_aggregate_statistics():
    stats = aggregate("X", np.array([True, False, True, True]), np.array([0.1, 1.0, 0.3, 0.2]))
    assert stats.connectivity_rate == 0.75
    assert stats.rse_mean == pytest.approx(0.4)
    assert stats.rse_std == pytest.approx(np.std([0.1, 1.0, 0.3, 0.2], ddof=1))
    flat = aggregate("X", np.zeros(7, bool), np.full(7, 0.123456789))
    assert flat.rse_std == 0.0


def test_reproducible_and_parallel_invariant():
    cfg = ProtocolConfig(trials=120, base_seed=5)
    serial = run_protocol(BARBELL, cfg)
    assert run_protocol(BARBELL, cfg) == serial
    assert run_protocol(BARBELL, cfg, jobs=3) == serial


def test_backends_agree():
    cfg = ProtocolConfig(trials=100, rho=0.6, base_seed=11)
    results = {}
    for name in _backend.available():
        previous = _backend.name
        _backend.use(name)
        try:
            results[name] = run_protocol(CHAIN, cfg)
        finally:
            _backend.use(previous)
    values = list(results.values())
    assert all(v == values[0] for v in values)


@pytest.mark.slow
def test_seed_sensitivity_and_dominance():
    rates = []
    for seed in (1, 2, 3, 4, 5):
        stats = {s.strategy: s for s in run_protocol(BARBELL, ProtocolConfig(base_seed=seed))}
        rates.append(stats["Weighted"].connectivity_rate)
        assert stats["Weighted"].connectivity_rate >= stats["Standard"].connectivity_rate
        assert stats["Standard"].connectivity_rate == 0.0
        assert stats["Standard"].rse_mean == 1.0 and stats["Standard"].rse_std == 0.0
    assert max(rates) - min(rates) < 0.05


def test_standard_never_connects_on_chain_any_seed():
    for seed in (0, 17, 2**63):
        stats = run_protocol(CHAIN, ProtocolConfig(trials=100, rho=0.6, base_seed=seed, strategies=("Standard", "Weighted")))
        assert stats[0].connectivity_rate == 0.0
        assert stats[1].connectivity_rate >= stats[0].connectivity_rate


def test_phase_sweep_shape_small():
    series = run_phase_sweep(8, [1, 3, 4, 6], ProtocolConfig(trials=60, rho=0.6, base_seed=3))
    assert [(k, s.strategy) for k, s in series] == [
        (k, tag) for k in (1, 3, 4, 6) for tag in ("Standard", "Weighted")
    ]
    std = [s.connectivity_rate for k, s in series if s.strategy == "Standard"]
    assert std == sorted(std)
    assert std[0] == std[1] == 0.0 and std[2] > 0.8
    with pytest.raises(InvalidParameterError):
        run_phase_sweep(8, [], ProtocolConfig())


def _rows():
    return [
        ResultRow("barbell", TrialStats("Weighted", 0.906, 0.34048347304, 0.2368633, 500), 0.5, 2.0, 42),
        ResultRow("phase", TrialStats("Standard", 0.0, 1.0, 0.0, 500), 0.6, 2.0, 42, 3),
    ]


def test_csv_round_trip_is_lossless():
    text = results_to_csv(_rows())
    assert text.splitlines()[0] == "experiment,strategy,k,rho,lambda,trials,connectivity_rate,rse_mean,rse_std,seed"
    assert text.splitlines()[1] == "barbell,Weighted,,0.5,2,500,0.906,0.340483,0.236863,42"
    back = results_from_csv(text)
    assert results_to_csv(back) == text
    assert back[1].k == 3 and back[0].k is None
    assert back[0].stats == TrialStats("Weighted", 0.906, 0.340483, 0.236863, 500)


def test_json_mirror_matches_csv():
    rows = _rows()
    from_json = results_from_json(results_to_json(rows))
    assert results_to_csv(from_json) == results_to_csv(rows)
    assert list(results_from_json(results_to_json(rows))[0].as_record()) == [
        "experiment", "strategy", "k", "rho", "lambda", "trials",
        "connectivity_rate", "rse_mean", "rse_std", "seed",
    ]
