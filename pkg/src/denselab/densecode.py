"""Replay of a dense code over one traffic realization.

The source emits, at each successful transmission opportunity, a packet whose
global encoding vector is a fresh vector of fair coin flips over the k
message coordinates.  Every interior node emits a fair-coin XOR combination
of the packets it received strictly before the transmission time.  Links are
delay-free, so a packet sent at time t arrives at time t; the strict
"arrived before t" rule keeps a packet from crossing two links in one
instant.

The **code** is the keyed coefficient stream: every coefficient is a pure
function of (code seed, transmitting node, per-link opportunity index,
buffered-packet ordinal).  Replaying one code seed over different traffics
therefore changes which opportunities exist but never the coefficients drawn
at a given (node, opportunity), which is what makes "average coding delay
over traffics at a fixed code" a well-defined simulation quantity.

Density tracking: arrivals on the source's outgoing link are all dense.  An
arrival at a deeper node is marked dense when its representation over the
transmitting node's dense arrivals (its transfer-matrix row) is linearly
independent of the rows of the receiver's previously marked arrivals.  The
tracked count is a sound lower bound on the true density because a rank-γ
transfer applied to a dense matrix yields density at least γ.
"""

import hashlib
import struct
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ContractViolationError
from .gf2 import BitVector, RankTracker
from .traffic import NetworkConfig, TrafficRealization, merge_timeline, traffic_hash

_MASK64 = (1 << 64) - 1

DETAIL_FULL = "full"
DETAIL_DELAY = "delay"


class CodeStream:
    """Keyed stream of code coefficients.

    Bits come from 64-byte BLAKE2b blocks keyed by (seed, node, opportunity,
    block index), so bit ``ordinal`` of a draw never depends on how many
    coefficients are requested.
    """

    _BLOCK_BYTES = 64

    __slots__ = ("seed",)

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64

    def coefficient_bytes(self, node: int, opportunity: int, nbits: int) -> bytes:
        """First ceil(nbits/8) bytes of the (node, opportunity) bit stream."""
        nbytes = (nbits + 7) // 8
        blocks = []
        for idx in range((nbytes + self._BLOCK_BYTES - 1) // self._BLOCK_BYTES):
            blocks.append(
                hashlib.blake2b(
                    struct.pack("<QQQQ", self.seed, node, opportunity, idx),
                    digest_size=self._BLOCK_BYTES,
                ).digest()
            )
        return b"".join(blocks)[:nbytes]

    def coefficient_bit(self, node: int, opportunity: int, ordinal: int) -> int:
        b = self.coefficient_bytes(node, opportunity, ordinal + 1)
        return (b[ordinal >> 3] >> (ordinal & 7)) & 1


@dataclass(frozen=True)
class Timeout:
    """Marker for a session that did not complete within the horizon."""

    final_rank: int


@dataclass
class SessionTrace:
    """Record of one code-over-traffic replay."""

    config: NetworkConfig
    code_seed: int
    traffic_seed: int | None
    detail: str
    completion_time: int | float | None
    final_sink_rank: int
    events_processed: int
    arrival_counts: tuple[int, ...]
    sink_rank_series: list
    node_rank_series: list | None = None
    density_series: list | None = None
    dense_global_vectors: list | None = None
    event_log: list | None = field(default=None, repr=False)


# Engine seam: global encoding vectors live either as Python ints (reference
# implementation) or as uint64 numpy rows driven by the numba kernels.  Both
# paths compute identical algebra.


class _IntRankAcc:
    __slots__ = ("rank", "_piv")

    def __init__(self, dim: int):
        self.rank = 0
        self._piv: dict[int, int] = {}

    def insert(self, row: int) -> bool:
        v = row
        piv = self._piv
        while v:
            p = v.bit_length() - 1
            q = piv.get(p)
            if q is None:
                piv[p] = v
                self.rank += 1
                return True
            v ^= q
        return False


class _IntEngine:
    kind = "int"

    def __init__(self, k: int):
        self.k = k
        self._kmask = (1 << k) - 1

    def row_from_bytes(self, b: bytes) -> int:
        return int.from_bytes(b, "little") & self._kmask

    def to_int(self, row) -> int:
        return row

    def new_buffer(self, capacity: int) -> list:
        return []

    def append(self, buf, row) -> None:
        buf.append(row)

    def combine(self, buf, mask_bytes: bytes, m: int):
        sel = int.from_bytes(mask_bytes, "little") & ((1 << m) - 1)
        acc = 0
        while sel:
            low = sel & -sel
            acc ^= buf[low.bit_length() - 1]
            sel ^= low
        return acc

    def new_rank_acc(self) -> _IntRankAcc:
        return _IntRankAcc(self.k)


class _NpBuffer:
    __slots__ = ("data", "count")

    def __init__(self, capacity: int, words: int):
        self.data = np.zeros((max(capacity, 1), words), dtype=np.uint64)
        self.count = 0


class _NumbaRankAcc:
    __slots__ = ("rank", "_basis", "_present")

    def __init__(self, dim_bits: int, words: int):
        self.rank = 0
        self._basis = np.zeros((max(dim_bits, 1), words), dtype=np.uint64)
        self._present = np.zeros(max(dim_bits, 1), dtype=np.bool_)

    def insert(self, row) -> bool:
        if _kernels.basis_insert(self._basis, self._present, row) >= 0:
            self.rank += 1
            return True
        return False


class _NumbaEngine:
    kind = "numba"

    def __init__(self, k: int):
        self.k = k
        self.words = (k + 63) // 64
        self._pad = self.words * 8

    def row_from_bytes(self, b: bytes):
        row = np.frombuffer(b.ljust(self._pad, b"\x00"), dtype=np.uint64).copy()
        rem = self.k & 63
        if rem:
            row[-1] &= np.uint64((1 << rem) - 1)
        return row

    def to_int(self, row) -> int:
        return int.from_bytes(row.tobytes(), "little")

    def new_buffer(self, capacity: int) -> _NpBuffer:
        return _NpBuffer(capacity, self.words)

    def append(self, buf: _NpBuffer, row) -> None:
        buf.data[buf.count] = row
        buf.count += 1

    def combine(self, buf: _NpBuffer, mask_bytes: bytes, m: int):
        out = np.empty(self.words, dtype=np.uint64)
        _kernels.xor_select(buf.data, np.frombuffer(mask_bytes, dtype=np.uint8), m, out)
        return out

    def new_rank_acc(self) -> _NumbaRankAcc:
        return _NumbaRankAcc(self.k, self.words)


def _select_engine(k: int, detail: str):
    if detail == DETAIL_DELAY and _kernels.HAVE_NUMBA:
        return _NumbaEngine(k)
    return _IntEngine(k)


def run_session(
    cfg: NetworkConfig,
    traffic: TrafficRealization,
    code: CodeStream | int,
    detail: str = DETAIL_FULL,
) -> SessionTrace:
    """Process one traffic realization under one code.

    detail="full" records per-node rank and density time series, dense
    global vectors, and the event log; detail="delay" tracks only the sink
    rank and stops at completion, which is all delay estimation needs.
    """
    if detail not in (DETAIL_FULL, DETAIL_DELAY):
        raise ContractViolationError(f"unknown detail level {detail!r}")
    if isinstance(code, int):
        code = CodeStream(code)
    if cfg.horizon is None:
        raise ContractViolationError("config horizon must be set")
    if traffic.links != cfg.links:
        raise ContractViolationError(
            f"traffic has {traffic.links} links, config has {cfg.links}"
        )
    if traffic.config_hash and traffic.config_hash != traffic_hash(cfg):
        raise ContractViolationError("traffic was not sampled under this config")

    k = cfg.messages
    L = cfg.links
    full = detail == DETAIL_FULL
    engine = _select_engine(k, detail)
    coeff = code.coefficient_bytes

    caps = traffic.success_counts()
    # Node state, index i-1 for node v_i (i = 1..L).  The sink (node L) never
    # transmits, so it needs no packet buffer.
    times = [[] for _ in range(L)]
    buffers = [engine.new_buffer(caps[i]) if i < L - 1 else None for i in range(L)]
    visible = [0] * L
    sink_acc = engine.new_rank_acc()
    sink_series: list = []

    if full:
        node_accs = [engine.new_rank_acc() for _ in range(L - 1)] + [sink_acc]
        node_rank_series = [[] for _ in range(L)]
        density_series = [[] for _ in range(L)]
        dense_globals = [[] for _ in range(L)]
        # Dense-arrival basis for nodes 2..L, over the upstream node's dense
        # ordinals; node 1's arrivals are dense by construction.
        trackers = [None] + [RankTracker(caps[i - 1]) for i in range(1, L)]
        reps = [[] for _ in range(L)]
        event_log = []
    else:
        node_rank_series = density_series = dense_globals = None
        trackers = reps = node_accs = None
        event_log = None

    completion = None
    events = 0

    for t, link, opp in merge_timeline(traffic):
        events += 1
        sender = link - 1
        if sender == 0:
            row = engine.row_from_bytes(coeff(0, opp, k))
            trow = 0
        else:
            s = sender - 1  # state index of node v_sender
            st = times[s]
            vis = visible[s]
            while vis < len(st) and st[vis] < t:
                vis += 1
            visible[s] = vis
            if vis == 0:
                continue  # nothing received strictly before t: opportunity skipped
            mb = coeff(sender, opp, vis)
            row = engine.combine(buffers[s], mb, vis)
            if full:
                sel = int.from_bytes(mb, "little") & ((1 << vis) - 1)
                trow = 0
                srep = reps[s]
                while sel:
                    low = sel & -sel
                    trow ^= srep[low.bit_length() - 1]
                    sel ^= low

        r = link - 1  # state index of receiving node v_link
        times[r].append(t)
        if link < L:
            engine.append(buffers[r], row)

        if full:
            event_log.append((t, link))
            gint = engine.to_int(row)
            if link == 1:
                ordinal = len(reps[0])
                reps[0].append(1 << ordinal)
                density_series[0].append((t, ordinal + 1))
                dense_globals[0].append(gint)
            else:
                tracker = trackers[r]
                v = BitVector(tracker.dimension, trow)
                if tracker.insert(v):
                    rep = 1 << (tracker.rank - 1)
                    density_series[r].append((t, tracker.rank))
                    dense_globals[r].append(gint)
                else:
                    rep = tracker.express_in_span(v).bits
                if link < L:
                    reps[r].append(rep)
            acc = node_accs[r]
            if link < L:
                if acc.insert(row if engine.kind == "int" else row.copy()):
                    node_rank_series[r].append((t, acc.rank))

        if link == L:
            if sink_acc.insert(row):
                sink_series.append((t, sink_acc.rank))
                if full:
                    node_rank_series[L - 1].append((t, sink_acc.rank))
                if sink_acc.rank == k and completion is None:
                    completion = t
                    if not full:
                        break

    return SessionTrace(
        config=cfg,
        code_seed=code.seed,
        traffic_seed=traffic.seed,
        detail=detail,
        completion_time=completion,
        final_sink_rank=sink_acc.rank,
        events_processed=events,
        arrival_counts=tuple(len(ts) for ts in times),
        sink_rank_series=sink_series,
        node_rank_series=node_rank_series,
        density_series=density_series,
        dense_global_vectors=dense_globals,
        event_log=event_log,
    )


def coding_delay(trace: SessionTrace):
    """Completion time of the sink, or a Timeout carrying the final rank."""
    if trace.completion_time is not None:
        return trace.completion_time
    return Timeout(trace.final_sink_rank)


def _series_value_at(series, t) -> int:
    lo, hi = 0, len(series)
    while lo < hi:
        mid = (lo + hi) // 2
        if series[mid][0] <= t:
            lo = mid + 1
        else:
            hi = mid
    return series[lo - 1][1] if lo else 0


def density_at(trace: SessionTrace, node: int, t) -> int:
    """Tracked dense-arrival count at ``node`` from packets arrived by ``t``."""
    if not 1 <= node <= trace.config.links:
        raise ContractViolationError(f"node must be in [1, {trace.config.links}]")
    if trace.density_series is None:
        raise ContractViolationError("density series not recorded (detail='delay' trace)")
    return _series_value_at(trace.density_series[node - 1], t)


def sink_rank_at(trace: SessionTrace, t) -> int:
    """Rank of the sink decoding matrix restricted to arrivals at times <= t."""
    return _series_value_at(trace.sink_rank_series, t)


def trace_event_rows(trace: SessionTrace):
    """Rows (time, link, sink_rank, density_1..L) for each delivered packet."""
    if trace.event_log is None:
        raise ContractViolationError("event log not recorded (detail='delay' trace)")
    L = trace.config.links
    for t, link in trace.event_log:
        densities = [density_at(trace, i, t) for i in range(1, L + 1)]
        yield (t, link, sink_rank_at(trace, t), *densities)
