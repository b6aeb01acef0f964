"""Closed-form delay and density bound evaluators.

All logarithms are base 2 except the explicitly natural one inside
:func:`gamma_star`.  Asymptotic ``(1+o(1))`` factors default to 1 and set the
``asymptotic`` flag on the result; an explicit multiplier can be supplied for
sensitivity studies.  Partition-count parameters given in the source material
as orders ("~") are evaluated as equalities, rounded to the nearest integer
and clamped to at least L+1, with the clamp recorded.

Bound values are real numbers; the delay quantities they dominate are
integers, so an empirical integer delay q satisfies a bound b iff q <= b.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ContractViolationError, DegenerateRegimeError

log2 = math.log2


@dataclass(frozen=True)
class BoundQuery:
    """Parameters for a delay-bound evaluation.

    success_prob is the per-link success probability for identical links; for
    Poisson schedules pass the effective rate (rate, or rate times success
    probability) in its place.  success_probs carries the non-identical-link
    profile for the bounds that need a unique worst link.  o1 is the explicit
    value of the o(1) terms; 0 evaluates (1+o(1)) as 1 and marks the result
    asymptotic.
    """

    messages: int
    links: int
    epsilon: float
    success_prob: float | None = None
    success_probs: tuple[float, ...] | None = None
    partitions: int | None = None
    f_k: float | None = None
    o1: float = 0.0

    def __post_init__(self):
        if self.messages < 1:
            raise ContractViolationError("messages must be >= 1")
        if self.links < 1:
            raise ContractViolationError("links must be >= 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ContractViolationError("epsilon must be in (0, 1)")
        if self.success_prob is not None and not 0.0 < self.success_prob <= 1.0:
            raise ContractViolationError("success_prob must be in (0, 1]")
        if self.success_probs is not None:
            object.__setattr__(self, "success_probs", tuple(float(p) for p in self.success_probs))
            if any(not 0.0 < p <= 1.0 for p in self.success_probs):
                raise ContractViolationError("success probabilities must be in (0, 1]")
        if self.o1 < 0.0:
            raise ContractViolationError("o1 must be >= 0")


@dataclass(frozen=True)
class BoundResult:
    """Evaluated bound with its addend breakdown (value == sum(components))."""

    bound_id: str
    value: float
    components: tuple[tuple[str, float], ...]
    w_used: int | None = None
    w_clamped: bool = False
    asymptotic: bool = False
    notes: tuple[str, ...] = ()
    query: BoundQuery | None = None

    def component(self, name: str) -> float:
        for n, v in self.components:
            if n == name:
                return v
        raise KeyError(name)


def w_for(
    context: str,
    *,
    messages: int | None = None,
    links: int,
    epsilon: float,
    success_prob: float,
    horizon: float | None = None,
    f_k: float | None = None,
) -> tuple[int, bool]:
    """Partition count for the named bound; returns (w, clamped flag).

    thm2 / thm4:  (k L^2 / log2(kL / (p eps)))^(1/3)
    thm3:         (k L / log2(kL / (p eps)))^(1/2)
    thm5:         k / (p log2(kL / (p eps)) f(k))
    lemma11:      (p N_T L^2 / log2(N_T L / eps))^(1/3)
    """
    L = links
    if context in ("thm2", "thm3", "thm4", "thm5"):
        if messages is None:
            raise ContractViolationError(f"{context} needs the message count")
        k = messages
        denom = log2(k * L / (success_prob * epsilon))
        if denom <= 0:
            raise DegenerateRegimeError("log term non-positive; parameters out of regime")
        if context in ("thm2", "thm4"):
            w = (k * L * L / denom) ** (1.0 / 3.0)
        elif context == "thm3":
            w = (k * L / denom) ** 0.5
        else:
            if f_k is None or f_k <= 0:
                raise ContractViolationError("thm5 needs f_k > 0")
            w = k / (success_prob * denom * f_k)
    elif context == "lemma11":
        if horizon is None:
            raise ContractViolationError("lemma11 needs the horizon")
        denom = log2(horizon * L / epsilon)
        if denom <= 0:
            raise DegenerateRegimeError("log term non-positive; parameters out of regime")
        w = (success_prob * horizon * L * L / denom) ** (1.0 / 3.0)
    else:
        raise ContractViolationError(f"unknown w context {context!r}")
    w_int = int(round(w))
    if w_int < L + 1:
        return L + 1, True
    return w_int, False


def thm1(q: BoundQuery) -> BoundResult:
    """Coding-delay bound for lossless regular traffic (non-asymptotic)."""
    k, L, eps = q.messages, q.links, q.epsilon
    comps = (
        ("messages", float(k)),
        ("relay_log", L * log2(L / eps)),
        ("sink_log", log2(1.0 / eps)),
        ("pipeline", float(L + 1)),
    )
    return BoundResult(
        bound_id="thm1",
        value=sum(v for _, v in comps),
        components=comps,
        asymptotic=False,
        query=q,
    )


def _partitioned(q: BoundQuery, bound_id: str, p: float, w_context: str, with_sqrt: bool, with_wlog: bool) -> BoundResult:
    k, L, eps = q.messages, q.links, q.epsilon
    notes = []
    if q.partitions is not None:
        w, clamped = q.partitions, False
        if w < L + 1:
            raise ContractViolationError("partition override must be >= links + 1")
    else:
        w, clamped = w_for(
            w_context, messages=k, links=L, epsilon=eps, success_prob=p, f_k=q.f_k
        )
        if clamped:
            notes.append("partition count clamped to links+1")
    o1 = 1.0 + q.o1
    comps = [("base", k / p), ("pipeline", o1 * k * L / (w * p))]
    if with_sqrt:
        comps.append(("fluctuation", o1 * math.sqrt(k * w * log2(w * L / eps)) / p))
    if with_wlog:
        comps.append(("partition_log", o1 * w * log2(w * L / eps) / p))
    if p == 1.0 and bound_id in ("thm2", "thm3"):
        notes.append("lossless case: thm1 gives the tighter bound")
    return BoundResult(
        bound_id=bound_id,
        value=sum(v for _, v in comps),
        components=tuple(comps),
        w_used=w,
        w_clamped=clamped,
        asymptotic=(q.o1 == 0.0),
        notes=tuple(notes),
        query=q,
    )


def _require_identical_p(q: BoundQuery, bound_id: str) -> float:
    if q.success_prob is None:
        raise ContractViolationError(f"{bound_id} needs success_prob (identical links)")
    return q.success_prob


def _require_unique_min(q: BoundQuery, bound_id: str) -> float:
    if q.success_probs is None:
        raise ContractViolationError(f"{bound_id} needs the per-link success_probs")
    p = min(q.success_probs)
    if q.success_probs.count(p) != 1:
        raise ContractViolationError(f"{bound_id} requires a unique worst link")
    return p


def thm2(q: BoundQuery) -> BoundResult:
    """Coding-delay bound, regular traffic, Bernoulli losses, identical links."""
    p = _require_identical_p(q, "thm2")
    return _partitioned(q, "thm2", p, "thm2", with_sqrt=True, with_wlog=True)


def thm3(q: BoundQuery) -> BoundResult:
    """Average-coding-delay bound, regular + Bernoulli, identical links."""
    p = _require_identical_p(q, "thm3")
    return _partitioned(q, "thm3", p, "thm3", with_sqrt=False, with_wlog=True)


def thm4(q: BoundQuery) -> BoundResult:
    """Coding-delay bound for non-identical links with a unique worst link."""
    p = _require_unique_min(q, "thm4")
    return _partitioned(q, "thm4", p, "thm2", with_sqrt=True, with_wlog=False)


def thm5(q: BoundQuery) -> BoundResult:
    """Average-coding-delay bound for non-identical links (needs f_k > 0)."""
    p = _require_unique_min(q, "thm5")
    if q.f_k is None or q.f_k <= 0:
        raise ContractViolationError("thm5 needs f_k > 0")
    return _partitioned(q, "thm5", p, "thm5", with_sqrt=False, with_wlog=False)


BOUND_FUNCS = {"thm1": thm1, "thm2": thm2, "thm3": thm3, "thm4": thm4, "thm5": thm5}


def evaluate(bound_id: str, q: BoundQuery) -> BoundResult:
    try:
        fn = BOUND_FUNCS[bound_id]
    except KeyError:
        raise ContractViolationError(f"unknown bound id {bound_id!r}") from None
    return fn(q)


def gamma_star(phi: float, epsilon: float) -> tuple[float, int]:
    """Concentration slack for per-partition packet counts.

    Evaluates sqrt((2/phi) ln(2/eps)) (natural log), then increases it
    minimally so that r = (1 - gamma) * phi is an integer.  Returns
    (adjusted gamma, r).
    """
    if phi <= 0:
        raise ContractViolationError("phi must be positive")
    if not 0.0 < epsilon < 1.0:
        raise ContractViolationError("epsilon must be in (0, 1)")
    g0 = math.sqrt((2.0 / phi) * math.log(2.0 / epsilon))
    if g0 >= 1.0:
        raise DegenerateRegimeError(
            f"expected partition load phi={phi:.3g} too small for epsilon={epsilon:g}"
        )
    r = math.floor((1.0 - g0) * phi)
    if r < 1:
        raise DegenerateRegimeError("per-partition selection count r fell below 1")
    return 1.0 - r / phi, r


def lemma5_bound(horizon: float, links: int, epsilon: float) -> int:
    """Density floor at the sink under lossless regular traffic."""
    if horizon < 1:
        raise ContractViolationError("horizon must be >= 1")
    if not 0.0 < epsilon < 1.0:
        raise ContractViolationError("epsilon must be in (0, 1)")
    if links == 0:
        return int(math.floor(horizon))
    val = horizon - links * log2(horizon * links / epsilon)
    return max(0, math.floor(val))


def lemma9_bound(r: int, i: int, epsilon: float) -> int:
    """Dense-packet floor for the first active partition at node i (i >= 2)."""
    if i < 2:
        raise ContractViolationError("node index i must be >= 2")
    if not 0.0 < epsilon < 1.0:
        raise ContractViolationError("epsilon must be in (0, 1)")
    val = r - log2(1.0 / epsilon) - log2(i) - 1.0
    return max(0, math.floor(val))


class Lemma10Bound(NamedTuple):
    value: int
    out_of_regime: bool


def lemma10_bound(
    r: int, i: int, j: int, epsilon: float, w_total: int | None = None, guard_ratio: float = 0.25
) -> Lemma10Bound:
    """Dense-packet floor for the first j active partitions at node i.

    The regime guard log2(w_total/eps) <= guard_ratio * r is checked against
    ``w_total`` when given, else against i*j (a lower bound on the active
    partition count); out-of-regime values are still computed but flagged.
    """
    if i < 2 or j < 2:
        raise ContractViolationError("lemma10 needs i >= 2 and j >= 2")
    if not 0.0 < epsilon < 1.0:
        raise ContractViolationError("epsilon must be in (0, 1)")
    if r < 1:
        raise ContractViolationError("r must be >= 1")
    o = (log2(i * j / epsilon) + 1.0) / r
    l_ij = (
        j * (1.0 + o) * (log2(i * j / epsilon) + 1.0)
        + log2((j * (1.0 + o) + 1.0) / epsilon)
        + log2(i * j)
        + 1.0
    )
    value = max(0, math.floor(r * j - l_ij))
    guard_ref = w_total if w_total is not None else i * j
    out_of_regime = log2(guard_ref / epsilon) > guard_ratio * r
    return Lemma10Bound(value, out_of_regime)


class Lemma11Bound(NamedTuple):
    value: int
    w: int
    w_clamped: bool
    phi: float
    active: int
    components: tuple[tuple[str, float], ...]


def lemma11_bound(horizon: float, links: int, p: float, epsilon: float) -> Lemma11Bound:
    """Density floor at the sink for regular + Bernoulli identical links.

    Evaluates the partitioned counting bound term by term with base-2 logs
    and the half-value convention for dotted arguments (eps/2, phi/2).
    """
    if not 0.0 < p <= 1.0:
        raise ContractViolationError("p must be in (0, 1]")
    if not 0.0 < epsilon < 1.0:
        raise ContractViolationError("epsilon must be in (0, 1)")
    L = links
    w, clamped = w_for("lemma11", links=L, epsilon=epsilon, success_prob=p, horizon=horizon)
    phi = p * horizon / w
    gamma_star(phi, epsilon)  # domain check: degenerate partition load raises
    w_t = active_partitions(w, L)
    log_half = log2(2.0 * w_t / epsilon)  # log2(w_t / (eps/2))
    log_full = log2(w_t / epsilon)
    comps = (
        ("lead", w_t * phi / L),
        ("concentration", -(w_t * phi / L) * math.sqrt((2.0 / phi) * log_half)),
        ("partition_log", -(w_t / L) * log_half),
        ("load_log_sq", -(w_t / (L * phi)) * log_full * log_full),
        ("load_log", -(w_t / (L * phi)) * log_full),
        ("tail_log", -log_full),
        ("active_log", -log2(w_t / L)),
        ("constant", -1.0),
    )
    value = max(0, math.floor(sum(v for _, v in comps)))
    return Lemma11Bound(value, w, clamped, phi, w_t, comps)


def is_active(i: int, j: int, w: int, links: int) -> bool:
    """Partition j of link i is active when i <= j <= w - links + i."""
    return i <= j <= w - links + i


def active_partitions(w: int, links: int) -> int:
    """Total active partitions L(w - L + 1) across all links."""
    if w < links:
        raise ContractViolationError("need w >= links")
    return links * (w - links + 1)
