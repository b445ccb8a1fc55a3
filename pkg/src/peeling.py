import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import DomainError, GuardExceeded, InconsistentTraceError, InvariantViolation, ValidationFailed
from .exact_oracles import OracleLimits, chromatic_number
from .graph_core import (
    BicliqueSystem,
    Graph,
    cover_stats,
    induced_subgraph,
    members,
    popcount,
    restrict,
    validate_cover,
)
from .hansel import derandomized_extract

logger = logging.getLogger(__name__)

TOLERANCE = 1e-9


@dataclass(frozen=True)
class PeelRound:
    n_i: int
    w_i: int
    vertices: int
    extracted: int
    guarantee: Fraction

    @property
    def exponent(self) -> float:
        return self.w_i / self.n_i

    def to_dict(self) -> dict:
        return {
            "n": self.n_i,
            "w": self.w_i,
            "extracted": list(members(self.extracted)),
            "guarantee": self.guarantee,
        }


@dataclass(frozen=True)
class PeelTrace:
    n: int
    k: int
    rounds: Tuple[PeelRound, ...]
    final_vertices: int

    @property
    def t(self) -> Optional[int]:
        return len(self.rounds) - 1 if self.rounds else None

    @property
    def p(self) -> Optional[int]:
        if not self.rounds:
            return None
        return max(range(len(self.rounds)), key=lambda i: (self.rounds[i].exponent, -i))

    @property
    def beta(self) -> Optional[float]:
        if not self.rounds:
            return None
        return 2.0 ** self.rounds[self.p].exponent


def peel(
    g: Graph,
    system: BicliqueSystem,
    k: Optional[int] = None,
    limits: Optional[OracleLimits] = None,
) -> PeelTrace:
    report = validate_cover(system, g)
    if not report.ok:
        raise ValidationFailed(report)

    if k is None:
        try:
            k = chromatic_number(g, limits)
        except GuardExceeded as exc:
            raise DomainError(f"k must be supplied for this graph: {exc}") from exc
        logger.info("Using the chromatic number k=%d as the peeling threshold", k)
    if k < 1:
        raise DomainError(f"k must be positive, got {k}")

    current = g.vertices
    rounds: List[PeelRound] = []
    while popcount(current) >= k:
        n_i = popcount(current)
        restricted = restrict(system, current)
        if not validate_cover(restricted, g.induced(current)).ok:
            raise InvariantViolation(f"restricted cover is not a cover of G_{len(rounds)}")

        w_i = cover_stats(restricted).weight
        result = derandomized_extract(restricted, vertices=current)
        extracted = result.survivors
        if not extracted:
            raise InvariantViolation(f"round {len(rounds)} extracted nothing from {n_i} vertices")
        if not g.is_independent(extracted):
            raise InvariantViolation(f"round {len(rounds)} extracted a set that is not independent")

        n_next = n_i - popcount(extracted)
        if n_next > n_i * (1.0 - 2.0 ** (-w_i / n_i)) + TOLERANCE:
            raise InvariantViolation(
                f"round {len(rounds)}: {n_next} vertices remain, above n_i(1 - 2^(-w_i/n_i))"
            )

        rounds.append(PeelRound(n_i, w_i, current, extracted, result.guarantee))
        logger.debug("round %d: n=%d w=%d removed %d", len(rounds) - 1, n_i, w_i, popcount(extracted))
        current &= ~extracted

    trace = PeelTrace(n=g.n, k=k, rounds=tuple(rounds), final_vertices=current)
    logger.info("Peeled %d rounds; %d vertices remain below k=%d", len(rounds), popcount(current), k)
    return trace


def theorem3_bound(k: int) -> float:
    if k < 5:
        raise DomainError(f"k must be at least 5, got {k}")
    log_k = math.log2(k)
    return k * log_k - k * math.log2(log_k) - k * math.log2(math.log2(log_k))


def _or_none(compute, *args):
    try:
        return compute(*args)
    except (ValueError, ZeroDivisionError):
        return None


def analyze_trace(
    trace: PeelTrace,
    k: int,
    n: int,
    g: Optional[Graph] = None,
    limits: Optional[OracleLimits] = None,
) -> dict:
    """
    Quantities of both cases of the peeling argument. Only t <= beta * log2(n/k)
    is checked; the remaining values are reported for comparison.
    """
    if not trace.rounds:
        if n >= k:
            raise InconsistentTraceError(f"a trace of a graph with n={n} >= k={k} cannot be empty")
        return {
            "rounds": 0,
            "beta": None,
            "p": None,
            "t": None,
            "log2_n_over_k": None,
            "t_bound": None,
            "t_bound_holds": True,
            "case": "below_threshold",
            "theorem3_bound": _or_none(theorem3_bound, k),
            "observed_weight": None,
        }

    log_k = math.log2(k)
    log_ratio = math.log2(n / k)
    t_bound = trace.beta * log_ratio
    threshold = k / log_k if log_k > 0 else math.inf
    case = "large_t" if trace.t >= threshold else "small_t"

    analysis = {
        "rounds": len(trace.rounds),
        "beta": trace.beta,
        "p": trace.p,
        "t": trace.t,
        "log2_n_over_k": log_ratio,
        "t_bound": t_bound,
        "t_bound_holds": trace.t <= t_bound + TOLERANCE,
        "case": case,
        "k_over_log_k": threshold if math.isfinite(threshold) else None,
        "case1_lhs": t_bound,
        "case1_rhs": threshold if math.isfinite(threshold) else None,
        "case1_weight_claim": _or_none(
            lambda: k * (log_k - math.log2(log_k) - math.log2(math.log2(log_k)))
        ),
        "theorem3_bound": _or_none(theorem3_bound, k),
        "observed_weight": trace.rounds[0].w_i,
        "n_le_k_log_k": n <= k * log_k,
        "chi_g_prime_claim": k * (1 - 1 / log_k) if log_k > 0 else None,
        "clique_claim": k * (1 - 2 / log_k) if log_k > 0 else None,
        "b_g_prime_claim": k * log_k - 3 * k,
        "g_prime_vertices": popcount(trace.final_vertices),
        "chi_g_prime": None,
    }
    if g is not None:
        sub, _ = induced_subgraph(g, trace.final_vertices)
        try:
            analysis["chi_g_prime"] = chromatic_number(sub, limits)
        except GuardExceeded:
            logger.warning("G' has %d vertices; skipping its chromatic number", sub.n)

    if not analysis["t_bound_holds"]:
        logger.error("t=%d exceeds beta*log2(n/k)=%.6f", trace.t, t_bound)
    return analysis
