import math

import numpy as np
import pytest

from denselab import _kernels
from denselab.densecode import (
    CodeStream,
    SessionTrace,
    Timeout,
    coding_delay,
    density_at,
    run_session,
    sink_rank_at,
    trace_event_rows,
)
from denselab.errors import ContractViolationError
from denselab.gf2 import BitMatrix, rank
from denselab.traffic import NetworkConfig, sample_traffic, traffic_hash


def lossless(links, messages, horizon):
    return NetworkConfig(links=links, messages=messages, horizon=horizon)


def session(cfg, code_seed, traffic_seed=0, detail="full"):
    tr = sample_traffic(cfg, np.random.default_rng(traffic_seed))
    return run_session(cfg, tr, code_seed, detail=detail)


class TestCodeStream:
    def test_prefix_stability(self):
        cs = CodeStream(42)
        short = cs.coefficient_bytes(1, 5, 10)
        long = cs.coefficient_bytes(1, 5, 2000)
        assert long[: len(short)] == short

    def test_bit_is_pure_function(self):
        cs = CodeStream(42)
        bits_a = [cs.coefficient_bit(3, 7, i) for i in range(100)]
        raw = cs.coefficient_bytes(3, 7, 100)
        bits_b = [(raw[i >> 3] >> (i & 7)) & 1 for i in range(100)]
        assert bits_a == bits_b

    def test_keys_independent(self):
        cs = CodeStream(42)
        assert cs.coefficient_bytes(0, 1, 64) != cs.coefficient_bytes(0, 2, 64)
        assert cs.coefficient_bytes(0, 1, 64) != cs.coefficient_bytes(1, 1, 64)
        assert CodeStream(1).coefficient_bytes(0, 1, 64) != CodeStream(2).coefficient_bytes(0, 1, 64)


class TestSingleLink:
    def test_geometric_completion(self):
        cfg = lossless(1, 1, 64)
        n = 2500
        delays = [coding_delay(session(cfg, s)) for s in range(n)]
        at_one = sum(1 for d in delays if d == 1) / n
        assert abs(at_one - 0.5) <= 4 * math.sqrt(0.25 / n)
        mean = sum(delays) / n
        assert abs(mean - 2.0) <= 4 * math.sqrt(2.0 / n)

    def test_completion_is_rank_arrival_time(self):
        cfg = lossless(1, 3, 64)
        trace = session(cfg, 7)
        t_complete = trace.completion_time
        assert sink_rank_at(trace, t_complete) == 3
        assert sink_rank_at(trace, t_complete - 1) < 3
        assert coding_delay(trace) == t_complete


class TestPipeline:
    def test_first_interior_opportunity_skipped(self):
        cfg = lossless(2, 1, 16)
        trace = session(cfg, 1)
        # node 1 cannot transmit at t=1 (nothing arrived strictly before 1),
        # so the sink's first arrival is at t=2
        assert trace.arrival_counts[1] == 15
        assert trace.completion_time >= 2

    def test_earliest_completion_is_two(self):
        cfg = lossless(2, 1, 16)
        delays = [coding_delay(session(cfg, s)) for s in range(200)]
        assert min(delays) == 2

    def test_delay_floor_k_plus_L_minus_1(self):
        cfg = lossless(3, 4, 64)
        for s in range(60):
            d = coding_delay(session(cfg, s))
            assert d >= 4 + 3 - 1

    def test_density_node1_equals_time(self):
        cfg = lossless(2, 8, 12)
        trace = session(cfg, 3)
        for tau in range(0, 13):
            assert density_at(trace, 1, tau) == min(tau, 12)

    def test_density_monotone_and_below_arrivals(self):
        cfg = NetworkConfig(links=3, messages=16, loss="bernoulli", success_probs=0.6, horizon=100)
        trace = session(cfg, 5, traffic_seed=11)
        for node in (1, 2, 3):
            dens = [density_at(trace, node, t) for t in range(0, 101, 10)]
            assert dens == sorted(dens)
            assert density_at(trace, node, 100) <= trace.arrival_counts[node - 1]
        assert density_at(trace, 1, 0) == 0

    def test_node_range_checked(self):
        trace = session(lossless(2, 2, 8), 1)
        with pytest.raises(ContractViolationError):
            density_at(trace, 0, 3)
        with pytest.raises(ContractViolationError):
            density_at(trace, 3, 3)


class TestDeterminismAndDetail:
    def test_identical_inputs_identical_trace(self):
        cfg = NetworkConfig(links=2, messages=24, loss="bernoulli", success_probs=0.7, horizon=200)
        a = session(cfg, 9, traffic_seed=4)
        b = session(cfg, 9, traffic_seed=4)
        assert a == b

    def test_lean_matches_full_on_delay(self):
        cfg = NetworkConfig(links=3, messages=20, loss="bernoulli", success_probs=0.8, horizon=150)
        for s in range(10):
            full = session(cfg, s, traffic_seed=s)
            lean = session(cfg, s, traffic_seed=s, detail="delay")
            assert full.completion_time == lean.completion_time
            assert full.sink_rank_series[: len(lean.sink_rank_series)] == lean.sink_rank_series

    @pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not available")
    def test_int_engine_matches_numba_engine(self, monkeypatch):
        cfg = NetworkConfig(links=2, messages=40, loss="bernoulli", success_probs=0.75, horizon=300)
        fast = [session(cfg, s, traffic_seed=s, detail="delay").completion_time for s in range(8)]
        monkeypatch.setattr(_kernels, "HAVE_NUMBA", False)
        slow = [session(cfg, s, traffic_seed=s, detail="delay").completion_time for s in range(8)]
        assert fast == slow

    def test_code_reuse_across_traffics_changes_only_opportunities(self):
        # same code seed, two different loss patterns: the coefficient bytes
        # drawn at any shared (node, opportunity) key are the same stream
        cs = CodeStream(77)
        for node in (0, 1, 2):
            for opp in (1, 2, 17):
                a = cs.coefficient_bytes(node, opp, 33)
                b = cs.coefficient_bytes(node, opp, 61)
                assert b[: len(a) - 1] == a[:-1]

    def test_detail_validation(self):
        cfg = lossless(1, 1, 4)
        tr = sample_traffic(cfg, np.random.default_rng(0))
        with pytest.raises(ContractViolationError):
            run_session(cfg, tr, 0, detail="verbose")


class TestMismatch:
    def test_traffic_config_mismatch(self):
        cfg_a = lossless(2, 4, 16)
        cfg_b = lossless(2, 4, 32)
        tr = sample_traffic(cfg_a, np.random.default_rng(0))
        with pytest.raises(ContractViolationError):
            run_session(cfg_b, tr, 0)

    def test_horizon_required(self):
        cfg = NetworkConfig(links=1, messages=1)
        tr = sample_traffic(lossless(1, 1, 4), np.random.default_rng(0))
        with pytest.raises(ContractViolationError):
            run_session(cfg, tr, 0)


class TestTimeout:
    def test_timeout_carries_final_rank(self):
        cfg = lossless(2, 8, 4)  # cannot finish: at most 3 sink arrivals
        trace = session(cfg, 1)
        out = coding_delay(trace)
        assert isinstance(out, Timeout)
        assert out.final_rank == trace.final_sink_rank < 8

    def test_degenerate_zero_message_trace(self):
        trace = SessionTrace(
            config=lossless(1, 1, 4), code_seed=0, traffic_seed=None, detail="full",
            completion_time=0, final_sink_rank=0, events_processed=0,
            arrival_counts=(0,), sink_rank_series=[],
        )
        assert coding_delay(trace) == 0


class TestSinkRank:
    def test_edges(self):
        cfg = lossless(2, 5, 32)
        trace = session(cfg, 2)
        assert sink_rank_at(trace, 0) == 0
        assert sink_rank_at(trace, trace.completion_time) == 5
        assert sink_rank_at(trace, 1e9) == 5
        for t in range(0, 33):
            # lossless L=2: sink arrivals by time t number max(0, t-1)
            assert sink_rank_at(trace, t) <= min(5, max(0, t - 1))

    def test_density_sandwich(self):
        cfg = NetworkConfig(links=2, messages=64, loss="bernoulli", success_probs=0.7, horizon=60)
        trace = session(cfg, 3, traffic_seed=9)
        L = cfg.links
        for t in range(0, 61, 5):
            arrivals = sum(1 for (tt, link) in trace.event_log if link == L and tt <= t)
            dense = density_at(trace, L, t)
            assert sink_rank_at(trace, t) <= arrivals
            assert dense <= arrivals


class TestDensitySoundness:
    def test_tracked_dense_vectors_nearly_full_rank(self):
        # short horizon keeps the tracked count below k so the i.u.d. claim
        # is actually exercised
        cfg = NetworkConfig(links=2, messages=32, loss="bernoulli", success_probs=0.7, horizon=40)
        fails = 0
        n = 150
        for s in range(n):
            trace = session(cfg, s, traffic_seed=1000 + s)
            vecs = trace.dense_global_vectors[-1]
            d = len(vecs)
            if d == 0:
                continue
            r = rank(BitMatrix(d, 32, vecs))
            if r < min(d, 32) - 10:
                fails += 1
        assert fails <= 3  # per-session failure rate is about 2^-10


class TestTraceExport:
    def test_rows_match_series(self):
        cfg = lossless(2, 4, 10)
        trace = session(cfg, 6)
        rows = list(trace_event_rows(trace))
        assert len(rows) == len(trace.event_log)
        t, link, sr, d1, d2 = rows[-1]
        assert sr == sink_rank_at(trace, t)
        assert d1 == density_at(trace, 1, t)
        assert d2 == density_at(trace, 2, t)

    def test_lean_trace_refuses(self):
        trace = session(lossless(2, 4, 10), 6, detail="delay")
        with pytest.raises(ContractViolationError):
            list(trace_event_rows(trace))
        with pytest.raises(ContractViolationError):
            density_at(trace, 1, 3)
