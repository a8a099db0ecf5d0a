"""Buffer sizing and distillation-chain arithmetic.

Accepted blocks arrive in a collective buffer that is flushed every
``n_cycles`` factory cycles; the buffer must hold ``m_in`` blocks except
with probability ``p_flush``, which pins the required total capacity
``N = n_cycles * n_fac`` through the binomial tail condition
``F(m_in - 1; N, kappa) <= p_flush``.  Distillation output error follows
the first-order model ``c * p^k``.

Assumptions (not simulated): free routing between factories and buffer,
negligible classical filter latency, uncorrelated factories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class BufferSpec:
    m_in: int
    kappa: float
    p_flush: float

    def __post_init__(self):
        if self.m_in < 1:
            raise ValueError("m_in must be >= 1")
        if not 0.0 < self.kappa <= 1.0:
            raise ValueError("kappa must lie in (0, 1]")
        if not 0.0 < self.p_flush < 1.0:
            raise ValueError("p_flush must lie in (0, 1)")


@dataclass(frozen=True)
class DistillationSpec:
    """First-order distillation model: m_in states in, m_out out, output
    error c * p^k (15-to-1: c=35, k=3)."""

    c: float
    k: float
    m_in: int = 15
    m_out: int = 1

    def __post_init__(self):
        if self.c <= 0:
            raise ValueError("c must be > 0")
        if self.k < 1:
            raise ValueError("k must be >= 1")


def _log_binom_pmf(j: int, n: int, p: float) -> float:
    return (
        math.lgamma(n + 1)
        - math.lgamma(j + 1)
        - math.lgamma(n - j + 1)
        + j * math.log(p)
        + (n - j) * math.log1p(-p)
    )


def binom_cdf(x: int, n: int, p: float) -> float:
    """P(X <= x) for X ~ Binomial(n, p), summed stably in log space."""
    if not 0 <= x <= n:
        raise ValueError(f"x must lie in [0, n], got x={x}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if x == n or p == 0.0:
        return 1.0
    if p == 1.0:
        return 1.0 if x >= n else 0.0
    logs = [_log_binom_pmf(j, n, p) for j in range(x + 1)]
    m = max(logs)
    return float(min(1.0, math.exp(m) * sum(math.exp(v - m) for v in logs)))


def required_capacity(m_in: int, kappa: float, p_flush: float) -> int:
    """Smallest N with F(m_in - 1; N, kappa) <= p_flush (monotone search)."""
    BufferSpec(m_in=m_in, kappa=kappa, p_flush=p_flush)  # validates
    lo = m_in  # fewer than m_in draws can never fill the buffer
    if binom_cdf(m_in - 1, lo, kappa) <= p_flush:
        return lo
    hi = lo
    while binom_cdf(m_in - 1, hi, kappa) > p_flush:
        hi *= 2
        if hi > 1 << 40:
            raise OverflowError("capacity search diverged")
    # invariant: F(lo) > p_flush >= F(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if binom_cdf(m_in - 1, mid, kappa) <= p_flush:
            hi = mid
        else:
            lo = mid
    return hi


def prep_error(p_init: float, p_enc: float) -> float:
    """Combined block error: p_init (1 - p_enc) + (1 - p_init) p_enc."""
    for name, v in (("p_init", p_init), ("p_enc", p_enc)):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1], got {v}")
    return p_init * (1.0 - p_enc) + (1.0 - p_init) * p_enc


@dataclass(frozen=True)
class DistillationResult:
    p_out: float
    in_regime: bool  # False when c * p^k >= 1 (first-order model invalid)


def distill_error(p_prep: float, spec: DistillationSpec) -> DistillationResult:
    """First-order output error c * p_prep^k of one distillation round."""
    if p_prep < 0:
        raise ValueError("p_prep must be >= 0")
    p_out = spec.c * p_prep**spec.k
    return DistillationResult(p_out=p_out, in_regime=p_out < 1.0)


def distill_chain(p_prep: float, spec: DistillationSpec, rounds: int) -> list:
    """Output error after each of ``rounds`` successive rounds."""
    out = []
    p = p_prep
    for _ in range(rounds):
        r = distill_error(p, spec)
        out.append(r)
        p = r.p_out
    return out


def target_magic_error(n_t: int, n_q: int, eps_total: float = 1.0) -> float:
    """Per-magic-state error budget for an algorithm with n_t T gates on
    n_q qubits; the order-one constant is fixed to 1."""
    if n_t < 1 or n_q < 1:
        raise ValueError("n_t and n_q must be >= 1")
    return eps_total / (n_t * n_q)


def factorizations(n: int, limit: int = 12) -> list:
    """Divisor pairs (n_fac, n_cycles) of n, a space-time tradeoff menu."""
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append((d, n // d))
            if d != n // d:
                out.append((n // d, d))
        d += 1
    out.sort()
    return out[:limit]


def buffer_report(
    m_in: int,
    kappa: float,
    p_flush: float,
    p_init: float = None,
    p_enc: float = None,
    distillation: DistillationSpec = None,
    rounds: int = 1,
) -> dict:
    """Full sizing report: capacity, fill statistics, chained error rates."""
    n_cap = required_capacity(m_in, kappa, p_flush)
    mu = n_cap * kappa
    sigma = math.sqrt(n_cap * kappa * (1.0 - kappa))
    rep = {
        "m_in": m_in,
        "kappa": kappa,
        "p_flush_target": p_flush,
        "p_flush_achieved": binom_cdf(m_in - 1, n_cap, kappa),
        "capacity": n_cap,
        "factorizations": factorizations(n_cap),
        "mean_fill": mu,
        "std_fill": sigma,
        "assumptions": [
            "free routing between factories and buffer",
            "negligible classical post-selection latency",
            "uncorrelated factories",
            "order-one constant in the per-algorithm error budget set to 1",
        ],
    }
    if p_init is not None and p_enc is not None:
        p_prep = prep_error(p_init, p_enc)
        rep["p_prep"] = p_prep
        if distillation is not None:
            chain = distill_chain(p_prep, distillation, rounds)
            rep["distillation"] = {
                "c": distillation.c,
                "k": distillation.k,
                "m_in": distillation.m_in,
                "m_out": distillation.m_out,
                "rounds": [
                    {"p_out": r.p_out, "in_regime": r.in_regime} for r in chain
                ],
            }
    return rep
