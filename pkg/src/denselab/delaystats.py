"""Monte Carlo estimation of coding delay and average coding delay.

The point estimate of the epsilon-constrained delay is the conservative
upper order statistic: index ceil((1-eps) * M), 1-based, of the ascending
sorted delays.  A one-sided upper confidence limit comes from the binomial
(Clopper-Pearson) order-statistic rank at the configured confidence.

Every trial derives its own code and traffic seeds from (master seed, trial
index) by counter-mode hashing, and aggregation is keyed by trial index, so
results are identical no matter how many workers run the trials.  Timeouts
enter the quantile as +infinity and are never silently dropped; a cell whose
timeouts exceed eps * M / 2 is marked invalid.
"""

import hashlib
import math
import os
import struct
from dataclasses import dataclass, replace
from multiprocessing import get_context

import numpy as np
from scipy.stats import binom

from .densecode import DETAIL_DELAY, Timeout, coding_delay, run_session
from .errors import ContractViolationError
from .traffic import NetworkConfig, read_traffic, resolve_horizon, sample_traffic, write_traffic
from .bounds import BoundResult

_MASK64 = (1 << 64) - 1

MODE_DELAY = "coding-delay"
MODE_AVG = "avg-coding-delay"

_STREAM_CODE = 1
_STREAM_TRAFFIC = 2


def derive_seed(master: int, *indices: int) -> int:
    """64-bit child seed from counter-mode hashing of (master, indices)."""
    h = hashlib.blake2b(digest_size=8)
    h.update(struct.pack("<Q", master & _MASK64))
    for ix in indices:
        h.update(struct.pack("<q", ix))
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class ExperimentPlan:
    """One estimation cell: network config, epsilon, trial budget, seed."""

    cfg: NetworkConfig
    epsilon: float
    master_seed: int
    trials: int | None = None
    codes: int | None = None
    traffics_per_code: int | None = None

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ContractViolationError("epsilon must be in (0, 1)")

    def quantile_floor(self) -> int:
        return math.ceil(10.0 / self.epsilon)


@dataclass(frozen=True)
class DelayEstimate:
    """Empirical delay quantile (or per-code-mean quantile) with upper CI."""

    mode: str
    config: NetworkConfig
    epsilon: float
    master_seed: int
    samples: int
    point: float
    upper_ci: float
    timeouts: int
    valid: bool
    confidence: float
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class ReportRow:
    """One bound-vs-estimate comparison."""

    mode: str
    bound_id: str
    samples: int
    point: float
    upper_ci: float
    timeouts: int
    bound_value: float
    slack: float
    assertion_mode: str
    verdict: str
    valid: bool


def quantile(samples, q: float):
    """Order statistic at 1-based index ceil(q * M) of ascending ``samples``."""
    if len(samples) == 0:
        raise ContractViolationError("quantile of empty sample set")
    if not 0.0 < q <= 1.0:
        raise ContractViolationError("q must be in (0, 1]")
    idx = math.ceil(q * len(samples))
    return samples[idx - 1]


def _upper_ci_index(m: int, q: float, confidence: float) -> int:
    """Smallest 1-based order-statistic rank covering the q-quantile."""
    return int(binom.ppf(confidence, m, q)) + 1


def run_delay_trial(
    cfg: NetworkConfig,
    code_seed: int,
    traffic_seed: int,
    record_path=None,
    replay_path=None,
) -> float:
    """Delay of one session; +inf when the horizon was hit first."""
    if replay_path is not None:
        tr = read_traffic(replay_path, expected=cfg)
    else:
        tr = sample_traffic(cfg, np.random.default_rng(traffic_seed))
        tr = replace(tr, seed=traffic_seed)
    if record_path is not None:
        write_traffic(tr, record_path)
    trace = run_session(cfg, tr, code_seed, detail=DETAIL_DELAY)
    delay = coding_delay(trace)
    if isinstance(delay, Timeout):
        return math.inf
    return float(delay)


def _trial_batch(args):
    cfg, jobs, record_dir, replay_dir = args
    out = []
    for idx, code_seed, traffic_seed in jobs:
        record = os.path.join(record_dir, f"trial_{idx:06d}.traffic") if record_dir else None
        replay = os.path.join(replay_dir, f"trial_{idx:06d}.traffic") if replay_dir else None
        out.append((idx, run_delay_trial(cfg, code_seed, traffic_seed, record, replay)))
    return out


def _collect_delays(cfg, jobs, workers, record_dir, replay_dir) -> list[float]:
    """Run (index, code_seed, traffic_seed) jobs; results ordered by index."""
    delays = [math.nan] * len(jobs)
    if workers <= 1:
        for idx, d in _trial_batch((cfg, jobs, record_dir, replay_dir)):
            delays[idx] = d
    else:
        nchunks = max(workers * 4, 1)
        chunks = [jobs[i::nchunks] for i in range(nchunks)]
        chunks = [c for c in chunks if c]
        with get_context("fork").Pool(workers) as pool:
            for batch in pool.imap_unordered(
                _trial_batch, [(cfg, c, record_dir, replay_dir) for c in chunks]
            ):
                for idx, d in batch:
                    delays[idx] = d
    return delays


def _finish(mode, cfg, plan, samples, timeouts, confidence, notes) -> DelayEstimate:
    m = len(samples)
    ordered = sorted(samples)
    point = quantile(ordered, 1.0 - plan.epsilon)
    j = _upper_ci_index(m, 1.0 - plan.epsilon, confidence)
    upper = ordered[j - 1] if j <= m else math.inf
    valid = timeouts <= plan.epsilon * m / 2.0
    if not valid:
        notes = notes + ("timeouts exceed epsilon*samples/2; cell invalid",)
    return DelayEstimate(
        mode=mode,
        config=cfg,
        epsilon=plan.epsilon,
        master_seed=plan.master_seed,
        samples=m,
        point=float(point),
        upper_ci=float(upper),
        timeouts=timeouts,
        valid=valid,
        confidence=confidence,
        notes=notes,
    )


def delay_samples(
    plan: ExperimentPlan,
    workers: int = 1,
    record_dir=None,
    replay_dir=None,
) -> list[float]:
    """Raw per-trial delays (trial order), +inf marking timeouts."""
    if plan.trials is None:
        raise ContractViolationError("plan.trials is required for coding-delay estimation")
    cfg = resolve_horizon(plan.cfg)
    jobs = [
        (i, derive_seed(plan.master_seed, _STREAM_CODE, i), derive_seed(plan.master_seed, _STREAM_TRAFFIC, i, 0))
        for i in range(plan.trials)
    ]
    return _collect_delays(cfg, jobs, workers, record_dir, replay_dir)


def estimate_coding_delay(
    plan: ExperimentPlan,
    workers: int = 1,
    confidence: float = 0.99,
    record_dir=None,
    replay_dir=None,
) -> DelayEstimate:
    """Quantile of raw coding delay over independent (code, traffic) pairs."""
    if plan.trials is not None and plan.trials < plan.quantile_floor():
        raise ContractViolationError(
            f"{plan.trials} trials below the quantile sample-size floor "
            f"ceil(10/epsilon) = {plan.quantile_floor()}"
        )
    cfg = resolve_horizon(plan.cfg)
    delays = delay_samples(plan, workers, record_dir, replay_dir)
    timeouts = sum(1 for d in delays if math.isinf(d))
    return _finish(MODE_DELAY, cfg, plan, delays, timeouts, confidence, ())


def avg_delay_samples(
    plan: ExperimentPlan,
    workers: int = 1,
    record_dir=None,
    replay_dir=None,
) -> tuple[list[float], list[float], int]:
    """Per-code mean delays, the raw session delays, and the timeout count.

    Code c keeps one code seed across its traffics_per_code traffic seeds;
    the keyed coefficient stream is what makes the per-code mean meaningful.
    """
    if plan.codes is None or plan.traffics_per_code is None:
        raise ContractViolationError("plan.codes and plan.traffics_per_code are required")
    cfg = resolve_horizon(plan.cfg)
    n_c, n_t = plan.codes, plan.traffics_per_code
    jobs = []
    for c in range(n_c):
        code_seed = derive_seed(plan.master_seed, _STREAM_CODE, c)
        for t in range(n_t):
            jobs.append((c * n_t + t, code_seed, derive_seed(plan.master_seed, _STREAM_TRAFFIC, c, t)))
    delays = _collect_delays(cfg, jobs, workers, record_dir, replay_dir)
    timeouts = sum(1 for d in delays if math.isinf(d))
    means = [sum(delays[c * n_t : (c + 1) * n_t]) / n_t for c in range(n_c)]
    return means, delays, timeouts


def estimate_avg_coding_delay(
    plan: ExperimentPlan,
    workers: int = 1,
    confidence: float = 0.99,
    record_dir=None,
    replay_dir=None,
) -> DelayEstimate:
    """Quantile over codes of the per-code mean delay over traffics."""
    means, _, timeouts = avg_delay_samples(plan, workers, record_dir, replay_dir)
    notes = ()
    if plan.codes < plan.quantile_floor():
        notes = ("low-confidence: code count below ceil(10/epsilon)",)
    cfg = resolve_horizon(plan.cfg)
    return _finish(MODE_AVG, cfg, plan, means, timeouts, confidence, notes)


def compare(
    estimate: DelayEstimate, bound: BoundResult, mode: str = "assert", scale: float = 1.0
) -> ReportRow:
    """Line up an estimate against a bound value; slack is bound/point.

    ``scale`` multiplies the bound in the verdict only (used to document an
    unspecified asymptotic constant); the reported bound value and slack stay
    unscaled.
    """
    if mode not in ("assert", "report-only"):
        raise ContractViolationError(f"unknown assertion mode {mode!r}")
    q = bound.query
    if q is not None:
        if q.messages != estimate.config.messages or q.links != estimate.config.links:
            raise ContractViolationError("bound and estimate disagree on (k, L)")
        if q.epsilon != estimate.epsilon:
            raise ContractViolationError("bound and estimate disagree on epsilon")
    ok = estimate.valid and estimate.point <= bound.value * scale
    slack = bound.value / estimate.point if estimate.point > 0 else math.inf
    if mode == "assert":
        verdict = "pass" if ok else "fail"
    else:
        verdict = "report"
    return ReportRow(
        mode=estimate.mode,
        bound_id=bound.bound_id,
        samples=estimate.samples,
        point=estimate.point,
        upper_ci=estimate.upper_ci,
        timeouts=estimate.timeouts,
        bound_value=bound.value,
        slack=slack,
        assertion_mode=mode,
        verdict=verdict,
        valid=estimate.valid,
    )
