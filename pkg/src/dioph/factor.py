"""Factoring N = pq through small solutions of linear congruences.

Three searches share one skeleton. Each outer iteration owns the random
stream ``(seed, iteration)``, so iterations are independent and a run is
reproducible whether it executes sequentially or across worker processes.

* Algorithm I: pick ``r`` near ``N``, constants ``c0, c1``, walk the Euclid
  pairs of ``c0^-1 c1 x = y (mod r)`` and test every derived residue ``s``
  as a totient candidate through the discriminant of ``X^2 - T X + N``.
* Algorithm II: same candidates; additionally accept approximations of the
  totient and repair them with a short divisor scan.
* Algorithm III: pick an estimate ``s`` of the totient, expand ``r/s`` and
  search the solutions of ``z_n p_{n+1} - z_{n+1} p_n = (-1)^n r``.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Iterator

from . import kernels
from .arith import (
    RngStream,
    ceil_sqrt_fraction,
    iroot,
    is_probable_prime,
    perfect_power,
)
from .congruence import euclid_pairs
from .contfrac import cf_expand, convergents
from .diophantine import sample_theorem23_constant, solve_linear

__all__ = [
    "FactorInputError",
    "FactorConfig",
    "SCandidate",
    "TraceEntry",
    "FactorReport",
    "KeyRecovery",
    "STRATEGIES",
    "check_input",
    "r_interval",
    "s_interval",
    "candidate_s_values",
    "trace_values",
    "discriminant_roots",
    "effective_approx_test",
    "small_divisor_scan",
    "algorithm_I",
    "algorithm_II",
    "algorithm_III",
    "recover_key",
    "key_recovery",
    "trial_division",
]

STRATEGIES = ("uniform-random", "theorem23-squares", "consecutive-squares")
ORIGINS = ("c0/x", "c1/x", "c0/y", "c1/y")
VARIANTS = ("s", "r-s", "r+s")


class FactorInputError(ValueError):
    """N is outside the domain of the quadratic-root method."""


@dataclass(frozen=True)
class FactorConfig:
    """Budgets and knobs for one factoring run.

    ``None`` budgets are filled from N by :meth:`resolved`:
    ``max_outer = ceil(4 (log2 N)^4)`` and
    ``candidates_per_pair = ceil(5 log2 r)``.
    """

    max_outer: int | None = None
    pairs_per_outer: int = 1
    candidates_per_pair: int | None = None
    constant_strategy: str = "uniform-random"
    seed: int = 0
    B: float = 1.0
    trace_detail: bool = True
    workers: int = 1
    # Overrides of the random draws: r for the public-key case and for
    # reproducing worked examples, s for Algorithm III checks.
    fixed_r: int | None = None
    planted_s: int | None = None
    # Algorithm II divisor-scan radius, default ceil(N^(1/4)).
    scan_bound: int | None = None
    # Algorithm III: size guides q_n < N^alpha <= q_{n+1} and representatives per n.
    alphas: tuple[Fraction, ...] = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))
    z_per_n: int = 8
    # c0 fixed to 1 (public-key equation)
    unit_c0: bool = False

    def __post_init__(self):
        if self.constant_strategy not in STRATEGIES:
            raise ValueError(f"unknown constant strategy {self.constant_strategy!r}")
        for name in ("max_outer", "pairs_per_outer", "candidates_per_pair", "workers", "z_per_n"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be >= 1")

    def resolved(self, N: int) -> "FactorConfig":
        max_outer = self.max_outer or math.ceil(4 * math.log2(N) ** 4)
        return replace(self, max_outer=max_outer)

    def pairs_for(self, r: int) -> int:
        return self.candidates_per_pair or max(1, math.ceil(5 * math.log2(r)))

    def to_dict(self) -> dict:
        out = asdict(self)
        out["alphas"] = [str(a) for a in self.alphas]
        return out


@dataclass(frozen=True)
class SCandidate:
    s: int
    origin: str
    variant: str
    pair_index: int
    r: int

    @property
    def value(self) -> int:
        if self.variant == "s":
            return self.s
        if self.variant == "r-s":
            return self.r - self.s
        return self.r + self.s


@dataclass
class TraceEntry:
    """Record of one constant pair (Algorithms I/II) or one (r, s) draw (III)."""

    iteration: int
    r: int
    c0: int | None = None
    c1: int | None = None
    s_estimate: int | None = None
    pairs_used: int = 0
    candidates_tested: int = 0
    discriminants_tested: int = 0
    square_hits: list = field(default_factory=list)
    approximations: list = field(default_factory=list)
    candidates: list | None = None
    discriminants: list | None = None
    factors: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self).items()}


@dataclass
class FactorReport:
    algorithm: str
    N: int
    outcome: str
    p: int | None
    q: int | None
    trace: list[TraceEntry]
    work: dict
    elapsed: float
    config: FactorConfig

    @property
    def factored(self) -> bool:
        return self.outcome == "factored"

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "algorithm": self.algorithm,
            "N": self.N,
            "outcome": self.outcome,
            "p": self.p,
            "q": self.q,
            "work": dict(self.work),
            "trace": [t.to_dict() for t in self.trace],
            "elapsed_ms": round(self.elapsed * 1000, 3) if timing else None,
        }


def check_input(N: int) -> None:
    if N < 9:
        raise FactorInputError(f"N={N} is too small (need an odd composite >= 9)")
    if N % 2 == 0:
        raise FactorInputError(f"N={N} is even")
    if is_probable_prime(N):
        raise FactorInputError(f"N={N} is prime")
    pp = perfect_power(N)
    if pp:
        raise FactorInputError(f"N={N} is a perfect power {pp[0]}^{pp[1]}")


def r_interval(N: int) -> tuple[int, int]:
    """``[N - ceil(1.5 sqrt(2N)), N]``; note 1.5 sqrt(2N) = sqrt(9N/2)."""
    return N - ceil_sqrt_fraction(9 * N, 2), N


def s_interval(N: int) -> tuple[int, int]:
    """Window holding the totient of a balanced N: ``[N - ceil(1.5 sqrt(2N)), N - floor(2 sqrt N)]``."""
    return N - ceil_sqrt_fraction(9 * N, 2), N - math.isqrt(4 * N)


def _ceil_fourth_root(N: int) -> int:
    root = iroot(N, 4)
    return root if root**4 == N else root + 1


# -- candidate machinery --------------------------------------------------


def _inverse_or_none(x: int, r: int) -> int | None:
    x %= r
    if x == 0 or math.gcd(x, r) != 1:
        return None
    return pow(x, -1, r)


def candidate_s_values(r: int, c0: int, c1: int, max_pairs: int | None = None) -> list[SCandidate]:
    """Totient candidates from the Euclid pairs of ``c0^-1 c1 x = y (mod r)``.

    Order: pair, then component (x, y), then constant (c0, c1), then variant
    (s, r - s, r + s). Components that are not invertible mod r are skipped.
    """
    inv_c0 = _inverse_or_none(c0, r)
    if inv_c0 is None:
        raise ValueError(f"c0={c0} is not invertible modulo r={r}")
    a = inv_c0 * c1 % r
    pairs = euclid_pairs(a, r)
    if max_pairs is not None:
        pairs = pairs[:max_pairs]
    out = []
    for pair in pairs:
        for comp, origins in ((pair.x, ORIGINS[:2]), (pair.y, ORIGINS[2:])):
            inv = _inverse_or_none(comp, r)
            if inv is None:
                continue
            for c, origin in zip((c0, c1), origins):
                s = c * inv % r
                for variant in VARIANTS:
                    out.append(SCandidate(s, origin, variant, pair.index, r))
    return out


def trace_values(N: int, s: int, r: int | None = None) -> list[int]:
    n1 = N + 1
    out = [n1 - s, n1 + s]
    if r is not None:
        out += [n1 - r - s, n1 - r + s, n1 + r - s, n1 + r + s]
    return out


def _roots_for_trace(N: int, T: int) -> tuple[int, tuple[int, int] | None]:
    """``(discriminant, factor pair or None)`` for ``X^2 - T X + N``."""
    T = abs(T)
    D = T * T - 4 * N
    if D < 0:
        return D, None
    root = math.isqrt(D)
    if root * root != D or (T - root) & 1:
        return D, None
    p, q = (T - root) // 2, (T + root) // 2
    if p > 1 and p * q == N:
        return D, (p, q)
    return D, None


def discriminant_roots(N: int, s: int, r: int | None = None) -> list[tuple[int, int]]:
    """Integer roots (p, q), p * q = N, of X^2 - T X + N over the traces T derived from s."""
    found = []
    for T in trace_values(N, s, r):
        _, hit = _roots_for_trace(N, T)
        if hit and hit not in found:
            found.append(hit)
    return found


def effective_approx_test(N: int, s: int, r: int | None = None) -> tuple[int, int] | None:
    """Floors ``(p0, q0)`` of the real roots of the first trace whose roots are
    an effective approximation: ``|N - p0 q0| < 3 N^(3/4)`` and
    ``X0 < X1 < 2 X0``. All comparisons are exact.
    """
    limit = 81 * N**3
    for T in trace_values(N, s, r):
        T = abs(T)
        D = T * T - 4 * N
        # X0 < X1 needs D > 0; X1 < 2 X0 is 3 sqrt(D) < T
        if D <= 0 or 9 * D >= T * T:
            continue
        root = math.isqrt(D)
        if root * root == D:
            p0 = (T - root) // 2
        else:
            p0 = (T - root - 1) // 2
        q0 = (T + root) // 2
        if p0 >= 1 and (N - p0 * q0) ** 4 < limit:
            return p0, q0
    return None


def small_divisor_scan(N: int, p0: int, bound: int) -> tuple[int, int] | None:
    """Solve ``(p0 + U)(q0 + V) = N`` for ``|U| <= bound`` by trial division, nearest U first."""
    if p0 < 2:
        raise ValueError("p0 must be >= 2")
    for k in range(bound + 1):
        for U in ((0,) if k == 0 else (k, -k)):
            d = p0 + U
            if 1 < d < N and N % d == 0:
                e = N // d
                return (d, e) if d <= e else (e, d)
    return None


# -- constants ------------------------------------------------------------


def _draw_c0(strategy: str, r: int, rng: RngStream, B: float) -> int:
    for _ in range(1000):
        if strategy == "theorem23-squares":
            c0 = sample_theorem23_constant(r, B, rng)[0]
        else:
            c0 = rng.rand_range(1, r * r - 1)
        if math.gcd(c0, r) == 1:
            return c0
    raise RuntimeError(f"no constant coprime to r={r} after 1000 draws")


def _draw_constants(cfg: FactorConfig, N: int, r: int, rng: RngStream, j: int) -> tuple[int, int]:
    strategy = cfg.constant_strategy
    if strategy == "consecutive-squares":
        return 1, (N + 1 + j) ** 2 - (N + 1) ** 2
    c0 = 1 if cfg.unit_c0 else _draw_c0(strategy, r, rng, cfg.B)
    if strategy == "theorem23-squares":
        c1 = sample_theorem23_constant(r, cfg.B, rng)[0]
    else:
        c1 = rng.rand_range(1, r * r - 1)
    return c0, c1


# -- one iteration --------------------------------------------------------


def _scan_detailed(N: int, r: int, c0: int, c1: int, max_pairs: int, entry: TraceEntry,
                   approximate: bool, scan_bound: int) -> None:
    cands = candidate_s_values(r, c0, c1, max_pairs)
    if entry.candidates is not None:
        entry.candidates = [[c.pair_index, c.origin, c.variant, c.value] for c in cands]
    entry.pairs_used = min(len(euclid_pairs(pow(c0, -1, r) * c1 % r, r)), max_pairs)
    for cand in cands:
        v = cand.value
        entry.candidates_tested += 1
        for T in trace_values(N, v, r):
            D, hit = _roots_for_trace(N, T)
            entry.discriminants_tested += 1
            if entry.discriminants is not None:
                entry.discriminants.append([v, T, D])
            if hit:
                entry.square_hits.append({"s": v, "origin": cand.origin, "variant": cand.variant,
                                          "pair_index": cand.pair_index, "T": T, "D": D})
                entry.pairs_used = cand.pair_index
                entry.factors = hit
                return
        if approximate:
            approx = effective_approx_test(N, v, r)
            if approx and approx[0] >= 2:
                found = small_divisor_scan(N, approx[0], scan_bound)
                entry.approximations.append({"s": v, "p0": approx[0], "q0": approx[1],
                                             "resolved": found is not None})
                if found:
                    entry.pairs_used = cand.pair_index
                    entry.factors = found
                    return


def _iteration_linear(algorithm: str, N: int, cfg: FactorConfig, m: int) -> list[TraceEntry]:
    rng = RngStream(cfg.seed, m)
    r = cfg.fixed_r if cfg.fixed_r is not None else rng.rand_range(*r_interval(N))
    max_pairs = cfg.pairs_for(r)
    scan_bound = cfg.scan_bound if cfg.scan_bound is not None else _ceil_fourth_root(N)
    entries = []
    for k in range(cfg.pairs_per_outer):
        c0, c1 = _draw_constants(cfg, N, r, rng, m * cfg.pairs_per_outer + k + 1)
        entry = TraceEntry(iteration=m, r=r, c0=c0, c1=c1)
        entries.append(entry)
        if math.gcd(c0, r) != 1:
            continue
        if algorithm == "I" and not cfg.trace_detail:
            p, q, v, T, used, tested = kernels.scan_constant_pair(N, r, c0, c1, max_pairs)
            entry.pairs_used, entry.candidates_tested = used, tested
            if p:
                entry.square_hits.append({"s": v, "T": T, "D": T * T - 4 * N})
                entry.factors = (p, q)
        else:
            if cfg.trace_detail:
                entry.candidates, entry.discriminants = [], []
            _scan_detailed(N, r, c0, c1, max_pairs, entry, algorithm == "II", scan_bound)
        if entry.factors:
            break
    return entries


def _x_offsets(limit: int) -> Iterator[int]:
    """0, 1, -1, 2, -2, ... (``limit`` terms)."""
    for k in range(limit):
        yield (k + 1) // 2 if k % 2 else -(k // 2)


def _alpha_index(N: int, q_col: list[int], alpha: Fraction) -> int | None:
    """n with q_n < N^alpha <= q_{n+1}."""
    num, den = alpha.numerator, alpha.denominator
    target = N**num
    for n in range(len(q_col) - 1):
        if q_col[n] ** den < target <= q_col[n + 1] ** den:
            return n
    return None


def _iteration_convergent(N: int, cfg: FactorConfig, m: int) -> list[TraceEntry]:
    rng = RngStream(cfg.seed, m)
    lo, hi = s_interval(N)
    for _ in range(1000):
        s = cfg.planted_s if cfg.planted_s is not None else rng.rand_range(lo, hi)
        r = cfg.fixed_r if cfg.fixed_r is not None else rng.rand_range(lo, hi)
        if r != s and math.gcd(r, s) == 1:
            break
    else:
        return [TraceEntry(iteration=m, r=r, s_estimate=s)]
    entry = TraceEntry(iteration=m, r=r, s_estimate=s)
    if cfg.trace_detail:
        entry.candidates, entry.discriminants = [], []
    table = convergents(cf_expand(r, s))
    p_col, q_col = table.p, table.q
    top = min(len(table) - 2, cfg.pairs_for(r) - 1)
    seen = set()
    for alpha in cfg.alphas:
        n = _alpha_index(N, q_col, alpha)
        if n is None or not 0 <= n <= top:
            continue
        entry.pairs_used += 1
        bound = N // q_col[n + 1]
        # the solutions z of the convergent equation are r q_n - X p_n; take
        # X nearest the estimate s first
        for off in _x_offsets(cfg.z_per_n):
            X = s + off
            z = r * q_col[n] - X * p_col[n]
            if abs(z) > bound:
                continue
            if z * p_col[n + 1] - (r * q_col[n + 1] - X * p_col[n + 1]) * p_col[n] != (-1) ** n * r:
                raise ArithmeticError("convergent equation check failed")
            t, rem = divmod(z + (N + 1) * p_col[n] - r * q_col[n], p_col[n])
            if rem or t in seen:
                continue
            seen.add(t)
            entry.candidates_tested += 1
            D, hit = _roots_for_trace(N, t)
            entry.discriminants_tested += 1
            if entry.candidates is not None:
                entry.candidates.append([n, str(alpha), z])
                entry.discriminants.append([t, D])
            if hit:
                entry.square_hits.append({"n": n, "alpha": str(alpha), "z": z, "T": t, "D": D})
                entry.factors = hit
                return [entry]
    return [entry]


def _run_iteration(args) -> list[TraceEntry]:
    algorithm, N, cfg, m = args
    if algorithm == "III":
        return _iteration_convergent(N, cfg, m)
    return _iteration_linear(algorithm, N, cfg, m)


def _iterate(algorithm: str, N: int, cfg: FactorConfig) -> Iterator[list[TraceEntry]]:
    if cfg.workers <= 1:
        for m in range(cfg.max_outer):
            yield _run_iteration((algorithm, N, cfg, m))
        return
    block = cfg.workers * 8
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        for start in range(0, cfg.max_outer, block):
            stop = min(start + block, cfg.max_outer)
            jobs = [(algorithm, N, cfg, m) for m in range(start, stop)]
            # results come back in iteration order, so first success is deterministic
            yield from pool.map(_run_iteration, jobs, chunksize=8)


def _run(algorithm: str, N: int, cfg: FactorConfig | None) -> FactorReport:
    check_input(N)
    cfg = (cfg or FactorConfig()).resolved(N)
    started = time.perf_counter()
    trace: list[TraceEntry] = []
    work = {"outer_iterations": 0, "constant_pairs": 0, "pairs_used": 0,
            "candidates_tested": 0, "discriminants_tested": 0, "squares_found": 0,
            "approximations_found": 0}
    factors = None
    for entries in _iterate(algorithm, N, cfg):
        work["outer_iterations"] += 1
        for entry in entries:
            trace.append(entry)
            work["constant_pairs"] += 1
            work["pairs_used"] += entry.pairs_used
            work["candidates_tested"] += entry.candidates_tested
            work["discriminants_tested"] += entry.discriminants_tested
            work["squares_found"] += len(entry.square_hits)
            work["approximations_found"] += len(entry.approximations)
            if entry.factors:
                factors = entry.factors
        if factors:
            break
    elapsed = time.perf_counter() - started
    if factors:
        p, q = factors
        if not (p * q == N and 1 < p <= q < N):
            raise RuntimeError(f"unsound factorisation {p} * {q} for N={N}")
        return FactorReport(algorithm, N, "factored", p, q, trace, work, elapsed, cfg)
    return FactorReport(algorithm, N, "exhausted", None, None, trace, work, elapsed, cfg)


def algorithm_I(N: int, cfg: FactorConfig | None = None) -> FactorReport:
    return _run("I", N, cfg)


def algorithm_II(N: int, cfg: FactorConfig | None = None) -> FactorReport:
    return _run("II", N, cfg)


def algorithm_III(N: int, cfg: FactorConfig | None = None) -> FactorReport:
    return _run("III", N, cfg)


@dataclass
class KeyRecovery:
    d: int | None
    report: FactorReport


def recover_key(N: int, e: int, cfg: FactorConfig | None = None) -> KeyRecovery:
    """Recover the RSA exponent d from (N, e) by factoring with ``r = e`` and ``c0 = 1``."""
    cfg = replace(cfg or FactorConfig(constant_strategy="consecutive-squares"),
                  fixed_r=e, unit_c0=True)
    report = _run("I", N, cfg)
    if not report.factored:
        return KeyRecovery(None, report)
    phi = (report.p - 1) * (report.q - 1)
    if math.gcd(e, phi) != 1:
        return KeyRecovery(None, report)
    return KeyRecovery(pow(e, -1, phi), report)


def key_recovery(N: int, e: int, cfg: FactorConfig | None = None) -> int | None:
    return recover_key(N, e, cfg).d


def trial_division(N: int, limit: int | None = None) -> tuple[int, int] | None:
    """Baseline for rate tables: smallest odd divisor up to ``limit`` (default sqrt N)."""
    top = limit if limit is not None else math.isqrt(N)
    if N % 2 == 0 and N > 2:
        return 2, N // 2
    for d in range(3, top + 1, 2):
        if N % d == 0:
            return d, N // d
    return None
