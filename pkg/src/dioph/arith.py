"""Exact integer plumbing shared by every other module.

Everything here works on Python ints, so there is no width limit. Floating
point is never used for a value that feeds a decision.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "RngStream",
    "gcd_with_steps",
    "isqrt",
    "is_square",
    "iroot",
    "ceil_sqrt",
    "ceil_sqrt_fraction",
    "rand_range",
    "is_probable_prime",
    "perfect_power",
    "prime_factors",
    "totient",
]

isqrt = math.isqrt


@dataclass
class RngStream:
    """Seeded random stream.

    ``(seed, stream_id)`` fully determines the output; distinct stream ids give
    statistically independent streams (derived through numpy's SeedSequence).
    A stream is meant to be owned by one task at a time.
    """

    seed: int = 0
    stream_id: int = 0
    _py: random.Random = field(init=False, repr=False)
    _np: np.random.Generator | None = field(init=False, repr=False, default=None)

    def __post_init__(self):
        if not (0 <= self.seed < 2**64 and 0 <= self.stream_id < 2**64):
            raise ValueError("seed and stream_id must be 64-bit unsigned values")
        words = self._seed_sequence().generate_state(4, dtype=np.uint64)
        self._py = random.Random(int.from_bytes(words.tobytes(), "little"))

    def _seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))

    def spawn(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)

    def rand_range(self, lo: int, hi: int) -> int:
        return rand_range(self, lo, hi)

    def randbits(self, k: int) -> int:
        return self._py.getrandbits(k)

    def choice(self, seq):
        return seq[self._py.randrange(len(seq))]

    @property
    def numpy(self) -> np.random.Generator:
        # Separate generator on a child of the same seed sequence, for bulk draws.
        if self._np is None:
            child = self._seed_sequence().spawn(1)[0]
            self._np = np.random.Generator(np.random.PCG64(child))
        return self._np

    def uint64s(self, n: int, bits: int = 64) -> np.ndarray:
        """``n`` uniform draws from ``[1, 2**bits - 1]`` as uint64."""
        if not 1 <= bits <= 64:
            raise ValueError("bits must be in [1, 64]")
        hi = (1 << bits) - 1
        if bits == 64:
            out = self.numpy.integers(0, hi, size=n, dtype=np.uint64, endpoint=True)
            out[out == 0] = 1
            return out
        return self.numpy.integers(1, hi, size=n, dtype=np.uint64, endpoint=True)


def rand_range(rng: RngStream, lo: int, hi: int) -> int:
    """Uniform integer in the closed interval ``[lo, hi]``."""
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    return rng._py.randrange(lo, hi + 1)


def gcd_with_steps(a: int, b: int) -> tuple[int, int]:
    """Euclid's algorithm, returning ``(gcd, number of division steps)``.

    The larger argument is taken as the dividend; that swap is not counted.
    """
    if a < 0 or b < 0:
        raise ValueError("arguments must be nonnegative")
    if a == 0 and b == 0:
        raise ValueError("gcd undefined for (0, 0)")
    if a < b:
        a, b = b, a
    steps = 0
    while b:
        a, b = b, a % b
        steps += 1
    return a, steps


def is_square(n: int) -> tuple[bool, int | None]:
    if n < 0:
        return False, None
    root = math.isqrt(n)
    if root * root == n:
        return True, root
    return False, None


def iroot(n: int, k: int) -> int:
    """Floor of the k-th root of ``n >= 0``."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    x = 1 << -(-n.bit_length() // k)  # upper bound
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


def ceil_sqrt_fraction(num: int, den: int) -> int:
    """Smallest integer k >= 0 with k**2 >= num/den."""
    if den <= 0 or num < 0:
        raise ValueError("need num >= 0, den > 0")
    k = math.isqrt(num // den)
    while k * k * den < num:
        k += 1
    return k


_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)
# Deterministic below 3.3e24 with these bases.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int, rounds: int = 16) -> bool:
    """Strong pseudoprime test. Deterministic for n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = list(_MR_BASES)
    if n >= 3_317_044_064_679_887_385_961_981:
        # beyond the deterministic range, add fixed pseudo-random bases
        gen = random.Random(n)
        bases += [gen.randrange(2, n - 1) for _ in range(rounds)]
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def perfect_power(n: int) -> tuple[int, int] | None:
    """Return ``(b, k)`` with ``b**k == n``, k >= 2 smallest, or None."""
    if n < 4:
        return None
    for k in range(2, n.bit_length() + 1):
        b = iroot(n, k)
        if b < 2:
            break
        if b**k == n:
            return b, k
    return None


def _pollard_brent(n: int, seed: int) -> int:
    gen = random.Random(seed)
    while True:
        y, c, m = gen.randrange(1, n), gen.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def prime_factors(n: int) -> dict[int, int]:
    """Prime factorisation ``{p: exponent}`` by trial division and Pollard-Brent.

    Utility for labelling and for the sieve experiments; not one of the
    linear-equation factoring methods.
    """
    if n < 1:
        raise ValueError("n must be positive")
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        pp = perfect_power(m)
        if pp:
            stack.extend([pp[0]] * pp[1])
            continue
        d = _pollard_brent(m, seed=m)
        stack.extend([d, m // d])
    return dict(sorted(out.items()))


def totient(n: int) -> int:
    result = n
    for p in prime_factors(n):
        result -= result // p
    return result
