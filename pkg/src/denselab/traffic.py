"""Traffic sampling for line networks.

A traffic realization is, per link, the ordered list of times in (0, horizon]
at which a packet transmission *succeeds*.  Two schedules are supported
(deterministic regular with one opportunity per integer time unit, and
Poisson with a per-link rate) and two loss models (lossless, Bernoulli).
Losses are applied at the sender before the timeline is built: an erased
transmission never appears as an event, which is distributionally identical
because coding decisions are content-independent.
"""

import hashlib
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ContractViolationError

SCHEDULE_REGULAR = "regular"
SCHEDULE_POISSON = "poisson"
LOSS_LOSSLESS = "lossless"
LOSS_BERNOULLI = "bernoulli"


def _per_link(value, links: int, name: str) -> tuple[float, ...]:
    if isinstance(value, (int, float)):
        return (float(value),) * links
    out = tuple(float(x) for x in value)
    if len(out) == 1:
        return out * links
    if len(out) != links:
        raise ContractViolationError(f"{name} must have one entry per link")
    return out


@dataclass(frozen=True)
class NetworkConfig:
    """Line network and traffic model parameters.

    links:          number of links L (nodes are 0..L, node 0 the source)
    messages:       number k of message vectors held by the source
    schedule:       "regular" or "poisson"
    loss:           "lossless" or "bernoulli"
    rates:          per-link Poisson rates in (0, 1); poisson schedule only
    success_probs:  per-link success probabilities in (0, 1]; bernoulli only
    horizon:        end of the transmission window (0, horizon]; integer
                    semantics under the regular schedule
    """

    links: int
    messages: int
    schedule: str = SCHEDULE_REGULAR
    loss: str = LOSS_LOSSLESS
    rates: tuple[float, ...] | None = None
    success_probs: tuple[float, ...] | None = None
    horizon: float | None = None

    def __post_init__(self):
        if self.links < 1:
            raise ContractViolationError("links must be >= 1")
        if self.messages < 1:
            raise ContractViolationError("messages must be >= 1")
        if self.schedule not in (SCHEDULE_REGULAR, SCHEDULE_POISSON):
            raise ContractViolationError(f"unknown schedule {self.schedule!r}")
        if self.loss not in (LOSS_LOSSLESS, LOSS_BERNOULLI):
            raise ContractViolationError(f"unknown loss model {self.loss!r}")
        if self.schedule == SCHEDULE_POISSON:
            if self.rates is None:
                raise ContractViolationError("poisson schedule needs rates")
            object.__setattr__(self, "rates", _per_link(self.rates, self.links, "rates"))
            if any(not 0.0 < lam < 1.0 for lam in self.rates):
                raise ContractViolationError("poisson rates must lie in (0, 1)")
        elif self.rates is not None:
            raise ContractViolationError("rates are only meaningful for poisson schedule")
        if self.loss == LOSS_BERNOULLI:
            if self.success_probs is None:
                raise ContractViolationError("bernoulli loss needs success_probs")
            object.__setattr__(
                self, "success_probs", _per_link(self.success_probs, self.links, "success_probs")
            )
            if any(not 0.0 < p <= 1.0 for p in self.success_probs):
                raise ContractViolationError("success probabilities must lie in (0, 1]")
        elif self.success_probs is not None:
            raise ContractViolationError("success_probs are only meaningful for bernoulli loss")
        if self.horizon is not None and not self.horizon > 0:
            raise ContractViolationError("horizon must be positive")


@dataclass(frozen=True)
class TrafficRealization:
    """Per-link strictly increasing success times on (0, horizon]."""

    link_times: tuple[tuple, ...]
    config_hash: str
    seed: int | None = None

    @property
    def links(self) -> int:
        return len(self.link_times)

    def success_counts(self) -> tuple[int, ...]:
        return tuple(len(ts) for ts in self.link_times)


def traffic_hash(cfg: NetworkConfig) -> str:
    """Stable hash of the traffic-relevant part of a config (k excluded)."""
    payload = json.dumps(
        {
            "links": cfg.links,
            "schedule": cfg.schedule,
            "loss": cfg.loss,
            "rates": cfg.rates,
            "success_probs": cfg.success_probs,
            "horizon": cfg.horizon,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def effective_rate(cfg: NetworkConfig) -> float:
    """Smallest per-link expected successes per time unit."""
    rates = []
    for i in range(cfg.links):
        r = 1.0 if cfg.schedule == SCHEDULE_REGULAR else cfg.rates[i]
        if cfg.loss == LOSS_BERNOULLI:
            r *= cfg.success_probs[i]
        rates.append(r)
    return min(rates)


def default_horizon(cfg: NetworkConfig) -> float:
    """Timeout horizon: four times the expected time to move k packets."""
    h = math.ceil(4 * cfg.messages / effective_rate(cfg))
    return float(h)


def resolve_horizon(cfg: NetworkConfig) -> NetworkConfig:
    if cfg.horizon is not None:
        return cfg
    return replace(cfg, horizon=default_horizon(cfg))


def _poisson_times(lam: float, horizon: float, rng: np.random.Generator) -> list[float]:
    times: list[float] = []
    t = 0.0
    # Draw exponentials in bulk; extend until the horizon is passed.
    size = max(16, int(lam * horizon + 6.0 * math.sqrt(lam * horizon) + 16))
    while True:
        gaps = rng.exponential(1.0 / lam, size=size).tolist()
        for g in gaps:
            t += g
            if t > horizon:
                return times
            times.append(t)
        size = max(16, size // 4)


def sample_traffic(cfg: NetworkConfig, rng: np.random.Generator) -> TrafficRealization:
    """Sample one traffic realization; per-link processes are independent."""
    if cfg.horizon is None:
        raise ContractViolationError("config horizon must be set before sampling")
    link_times: list[tuple] = []
    for i in range(cfg.links):
        if cfg.schedule == SCHEDULE_REGULAR:
            slots = int(math.floor(cfg.horizon))
            if cfg.loss == LOSS_BERNOULLI:
                keep = rng.random(slots) < cfg.success_probs[i]
                times = tuple(int(t) + 1 for t in np.flatnonzero(keep))
            else:
                times = tuple(range(1, slots + 1))
        else:
            cand = _poisson_times(cfg.rates[i], cfg.horizon, rng)
            if cfg.loss == LOSS_BERNOULLI:
                p = cfg.success_probs[i]
                keep = rng.random(len(cand)) < p
                times = tuple(t for t, k in zip(cand, keep) if k)
            else:
                times = tuple(cand)
        link_times.append(times)
    return TrafficRealization(tuple(link_times), traffic_hash(cfg))


def thin_equivalent(cfg: NetworkConfig) -> NetworkConfig:
    """Lossless Poisson config equivalent to Bernoulli-thinned Poisson traffic."""
    if cfg.schedule != SCHEDULE_POISSON or cfg.loss != LOSS_BERNOULLI:
        raise ContractViolationError("thinning equivalence needs poisson schedule with bernoulli loss")
    thinned = tuple(lam * p for lam, p in zip(cfg.rates, cfg.success_probs))
    return NetworkConfig(
        links=cfg.links,
        messages=cfg.messages,
        schedule=SCHEDULE_POISSON,
        loss=LOSS_LOSSLESS,
        rates=thinned,
        horizon=cfg.horizon,
    )


def merge_timeline(tr: TrafficRealization) -> list[tuple]:
    """Globally ordered events (time, link, per-link opportunity index).

    Links are 1-based; ties in time (possible only under the regular
    schedule) are ordered by ascending link index, so the upstream event of a
    slot is processed first.  Opportunity indices count per-link successes
    from 1.
    """
    events = []
    for li, times in enumerate(tr.link_times, start=1):
        last = 0.0
        for opp, t in enumerate(times, start=1):
            if t <= last:
                raise ContractViolationError(f"times on link {li} not strictly increasing")
            last = t
            events.append((t, li, opp))
    events.sort()
    return events


TRAFFIC_MAGIC = "# denselab-traffic v1"


def write_traffic(tr: TrafficRealization, path) -> None:
    """Line-oriented text export: header, then one `link<TAB>time` per event."""
    with open(path, "w", newline="\n") as fh:
        fh.write(f"{TRAFFIC_MAGIC} config={tr.config_hash} seed={tr.seed if tr.seed is not None else '-'}\n")
        for li, times in enumerate(tr.link_times, start=1):
            for t in times:
                fh.write(f"{li}\t{t!r}\n")


def read_traffic(path, expected: NetworkConfig | None = None) -> TrafficRealization:
    """Read a traffic file; validates the config hash when ``expected`` given."""
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if not header.startswith(TRAFFIC_MAGIC):
            raise ContractViolationError(f"{path}: not a traffic file")
        fields = dict(part.split("=", 1) for part in header[len(TRAFFIC_MAGIC) :].split() if "=" in part)
        config_hash = fields.get("config", "")
        seed = None if fields.get("seed", "-") == "-" else int(fields["seed"])
        links: dict[int, list] = {}
        for line in fh:
            line = line.strip()
            if not line:
                continue
            li_s, t_s = line.split("\t")
            li = int(li_s)
            t = int(t_s) if ("." not in t_s and "e" not in t_s) else float(t_s)
            links.setdefault(li, []).append(t)
    if expected is not None:
        want = traffic_hash(expected)
        if config_hash != want:
            raise ContractViolationError(
                f"{path}: traffic config hash {config_hash} does not match expected {want}"
            )
        n_links = expected.links
    else:
        n_links = max(links) if links else 0
    link_times = tuple(tuple(links.get(li, ())) for li in range(1, n_links + 1))
    return TrafficRealization(link_times, config_hash, seed)
