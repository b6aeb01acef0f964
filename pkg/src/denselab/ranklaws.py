"""Structured random GF(2) matrix families and their rank-deficiency laws.

Four families of random matrices arise from transfer-matrix arguments on
line networks:

* ``single``      n x d, column j carries i.u.d. fair bits in exactly its
                  last d-j+1 entries, zeros elsewhere.
* ``square``      w x w blocks of size r x r, dense on and below the block
                  diagonal, zero above (n = w*r).
* ``vertical``    w x w block grid with blocks of shape r x r_j, dense for
                  j <= i, zero above; r_j <= r (n = sum r_j = column count).
* ``horizontal``  same block layout with r_j >= r (n = w*r = row count).

Zeros instantiate every "arbitrary" block or entry: that is the choice that
minimises rank, so it stress-tests the closed-form upper bounds evaluated by
``bound_single`` / ``bound_square`` / ``bound_vertical`` / ``bound_horizontal``.
A Monte Carlo estimator and an exhaustive small-case oracle cross-check the
bounds.
"""

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import _kernels
from .errors import ContractViolationError, DegenerateRegimeError, FeasibilityError
from .gf2 import BitMatrix

FAMILIES = ("single", "square", "vertical", "horizontal")

EXACT_FREE_BIT_LIMIT = 24

DEFAULT_CONFIDENCE_DELTA = 1e-6


@dataclass(frozen=True)
class StructuredSpec:
    """Parameters of one structured random-matrix family instance."""

    family: str
    n: int
    d: int | None = None
    w: int | None = None
    r: int | None = None
    r_list: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ContractViolationError(f"unknown family {self.family!r}")
        if self.family == "single":
            if self.d is None or not 1 <= self.d <= self.n:
                raise ContractViolationError("single family needs 1 <= d <= n")
        elif self.family == "square":
            if self.w is None or self.r is None or self.w < 1 or self.r < 1:
                raise ContractViolationError("square family needs w >= 1, r >= 1")
            if self.n != self.w * self.r:
                raise ContractViolationError("square family needs n = w*r")
        else:
            if (
                self.w is None
                or self.r is None
                or self.r_list is None
                or self.w < 1
                or self.r < 1
                or len(self.r_list) != self.w
            ):
                raise ContractViolationError(
                    f"{self.family} family needs w >= 1, r >= 1 and len(r_list) == w"
                )
            if self.family == "vertical":
                if any(not 0 <= rj <= self.r for rj in self.r_list):
                    raise ContractViolationError("vertical family needs 0 <= r_j <= r")
                if self.n != sum(self.r_list):
                    raise ContractViolationError("vertical family needs n = sum(r_j)")
            else:
                if any(rj < self.r for rj in self.r_list):
                    raise ContractViolationError("horizontal family needs r_j >= r")
                if self.n != self.w * self.r:
                    raise ContractViolationError("horizontal family needs n = w*r")

    @classmethod
    def single(cls, n: int, d: int) -> "StructuredSpec":
        return cls("single", n=n, d=d)

    @classmethod
    def square(cls, w: int, r: int) -> "StructuredSpec":
        return cls("square", n=w * r, w=w, r=r)

    @classmethod
    def vertical(cls, w: int, r: int, r_list) -> "StructuredSpec":
        r_list = tuple(r_list)
        return cls("vertical", n=sum(r_list), w=w, r=r, r_list=r_list)

    @classmethod
    def horizontal(cls, w: int, r: int, r_list) -> "StructuredSpec":
        r_list = tuple(r_list)
        return cls("horizontal", n=w * r, w=w, r=r, r_list=r_list)

    @property
    def rows(self) -> int:
        if self.family == "single":
            return self.n
        return self.w * self.r

    @property
    def cols(self) -> int:
        if self.family == "single":
            return self.d
        if self.family == "square":
            return self.n
        return sum(self.r_list)

    @property
    def rank_target(self) -> int:
        """Dimension from which rank deficiency is measured (min(rows, cols))."""
        return min(self.rows, self.cols)

    def row_free_counts(self) -> list[int]:
        """Per-row count of i.u.d. bits; the free bits occupy the low columns."""
        if self.family == "single":
            n, d = self.n, self.d
            return [min(d, max(0, i - n + d + 1)) for i in range(n)]
        if self.family == "square":
            return [((i // self.r) + 1) * self.r for i in range(self.rows)]
        prefix = []
        s = 0
        for rj in self.r_list:
            s += rj
            prefix.append(s)
        return [prefix[i // self.r] for i in range(self.rows)]

    @property
    def free_bits(self) -> int:
        return sum(self.row_free_counts())

    def describe(self) -> str:
        if self.family == "single":
            return f"single(n={self.n},d={self.d})"
        if self.family == "square":
            return f"square(w={self.w},r={self.r})"
        rl = ",".join(str(x) for x in self.r_list)
        return f"{self.family}(w={self.w},r={self.r},r_list=[{rl}])"


@dataclass(frozen=True)
class DeficiencyEstimate:
    """Monte Carlo estimate of Pr{rank < threshold} for one spec."""

    threshold: int
    trials: int
    failures: int
    empirical_prob: float
    hoeffding_slack: float
    confidence_delta: float

    def __post_init__(self):
        if not 0 <= self.failures <= self.trials:
            raise ContractViolationError("failures must lie in [0, trials]")


def gen_structured(spec: StructuredSpec, rng: np.random.Generator) -> BitMatrix:
    """Sample one matrix from the family, zeros in all structural positions."""
    counts = spec.row_free_counts()
    nbytes = [(c + 7) // 8 for c in counts]
    raw = rng.bytes(sum(nbytes))
    bits = []
    pos = 0
    for c, nb in zip(counts, nbytes):
        if c == 0:
            bits.append(0)
        else:
            bits.append(int.from_bytes(raw[pos : pos + nb], "little") & ((1 << c) - 1))
        pos += nb
    return BitMatrix(spec.rows, spec.cols, bits)


def _clamp_prob(x: float) -> float:
    if x != x:  # NaN guard
        raise ContractViolationError("bound evaluated to NaN")
    return min(1.0, max(0.0, x))


def bound_single(d: int, gamma: int) -> float:
    """Upper bound on Pr{rank < d - gamma} for the single-column family."""
    if not 0 <= gamma <= d - 1:
        raise ContractViolationError(f"gamma must be in [0, d-1], got {gamma} for d={d}")
    return _clamp_prob((d - gamma) * 2.0 ** -(gamma + 1))


def bound_square(n: int, r: int, gamma: int) -> float:
    """Upper bound on Pr{rank < n - gamma} for the block lower-triangular family."""
    if r < 1 or n % r != 0:
        raise ContractViolationError("need r >= 1 and r dividing n")
    if not 0 <= gamma <= n - 1:
        raise ContractViolationError(f"gamma must be in [0, n-1], got {gamma} for n={n}")
    u = -(-(n - gamma) // r)
    return _clamp_prob(u * (1.0 - 2.0 ** -r) * 2.0 ** -gamma)


def bound_vertical(spec: StructuredSpec, gamma: int) -> float:
    """Upper bound on Pr{rank < n - gamma} for the vertical family."""
    if spec.family != "vertical":
        raise ContractViolationError("spec is not of the vertical family")
    if not 0 <= gamma <= spec.n - 1:
        raise ContractViolationError(f"gamma must be in [0, n-1], got {gamma}")
    r_min = min(spec.r_list)
    r_max = max(spec.r_list)
    if r_min == 0:
        raise DegenerateRegimeError("vertical bound undefined for r_min = 0")
    u = -(-(spec.n - gamma) // r_min)
    exponent = -gamma + spec.n - spec.w * spec.r + (spec.r - r_min) * (u - 1)
    return _clamp_prob(u * (1.0 - 2.0 ** -r_max) * 2.0 ** exponent)


def bound_horizontal(spec: StructuredSpec, gamma: int) -> float:
    """Upper bound on Pr{rank < n - gamma} for the horizontal family."""
    if spec.family != "horizontal":
        raise ContractViolationError("spec is not of the horizontal family")
    if not 0 <= gamma <= spec.n - 1:
        raise ContractViolationError(f"gamma must be in [0, n-1], got {gamma}")
    r_min = min(spec.r_list)
    u = -(-(spec.n - gamma) // spec.r)
    exponent = -gamma + spec.n - spec.w * r_min + (r_min - spec.r) * (u - 1)
    return _clamp_prob(u * (1.0 - 2.0 ** -spec.r) * 2.0 ** exponent)


def bound_for(spec: StructuredSpec, gamma: int) -> float:
    """Dispatch to the family's closed-form deficiency bound."""
    if spec.family == "single":
        return bound_single(spec.d, gamma)
    if spec.family == "square":
        return bound_square(spec.n, spec.r, gamma)
    if spec.family == "vertical":
        return bound_vertical(spec, gamma)
    return bound_horizontal(spec, gamma)


def dense_rank_threshold(n: int, epsilon: float) -> int:
    """Largest k with Pr{rank < k} <= epsilon guaranteed for an n-row dense matrix."""
    if not 0.0 < epsilon < 1.0:
        raise ContractViolationError("epsilon must be in (0, 1)")
    k = math.floor(n - math.log2(1.0 / epsilon))
    return max(0, k)


def hoeffding_slack(trials: int, confidence_delta: float) -> float:
    """Two-sided Hoeffding deviation at confidence 1 - confidence_delta."""
    return math.sqrt(math.log(2.0 / confidence_delta) / (2.0 * trials))


def rank_histogram(spec: StructuredSpec, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Counts of sampled ranks, index = rank, over ``trials`` samples."""
    if trials < 1:
        raise ContractViolationError("trials must be >= 1")
    max_rank = spec.rank_target
    hist = np.zeros(max_rank + 1, dtype=np.int64)
    if spec.cols <= 64:
        counts = spec.row_free_counts()
        masks = np.array([(1 << c) - 1 for c in counts], dtype=np.uint64)
        chunk = 1 << 17
        done = 0
        while done < trials:
            m = min(chunk, trials - done)
            rows = rng.integers(0, 2**64, size=(m, spec.rows), dtype=np.uint64)
            rows &= masks[None, :]
            out = np.zeros(m, dtype=np.int64)
            if _kernels.HAVE_NUMBA:
                _kernels.ranks_of_rows(rows, out)
            else:
                _kernels.ranks_of_rows_py(rows, out)
            hist += np.bincount(out, minlength=max_rank + 1)
            done += m
    else:
        from .gf2 import rank as gf2_rank

        for _ in range(trials):
            hist[gf2_rank(gen_structured(spec, rng))] += 1
    return hist


def estimate_deficiency(
    spec: StructuredSpec,
    threshold: int,
    trials: int,
    rng: np.random.Generator,
    confidence_delta: float = DEFAULT_CONFIDENCE_DELTA,
) -> DeficiencyEstimate:
    """Monte Carlo estimate of Pr{rank < threshold} with a Hoeffding slack."""
    hist = rank_histogram(spec, trials, rng)
    failures = int(hist[: max(0, min(threshold, len(hist)))].sum())
    return DeficiencyEstimate(
        threshold=threshold,
        trials=trials,
        failures=failures,
        empirical_prob=failures / trials,
        hoeffding_slack=hoeffding_slack(trials, confidence_delta),
        confidence_delta=confidence_delta,
    )


def exact_rank_distribution(spec: StructuredSpec) -> np.ndarray:
    """Counts of ranks over all 2^free_bits assignments of the i.u.d. entries."""
    free = spec.free_bits
    if free > EXACT_FREE_BIT_LIMIT:
        raise FeasibilityError(
            f"{free} free bits exceeds the enumeration limit of {EXACT_FREE_BIT_LIMIT}"
        )
    counts = spec.row_free_counts()
    hist = np.zeros(spec.rank_target + 1, dtype=np.int64)
    for assignment in product(*[range(1 << c) for c in counts]):
        piv: dict[int, int] = {}
        rk = 0
        for v in assignment:
            while v:
                p = v.bit_length() - 1
                row = piv.get(p)
                if row is None:
                    piv[p] = v
                    rk += 1
                    break
                v ^= row
        hist[rk] += 1
    return hist


def exact_deficiency(spec: StructuredSpec, threshold: int) -> float:
    """Exact Pr{rank < threshold} by enumerating every free-bit assignment."""
    if threshold <= 0:
        return 0.0
    hist = exact_rank_distribution(spec)
    failures = int(hist[: min(threshold, len(hist))].sum())
    return failures / float(1 << spec.free_bits)
