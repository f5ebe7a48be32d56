"""Hot loops, compiled when the Cython extension is built.

The compiled module is used when importable unless ``DIOPH_PURE_PYTHON=1``.
Inputs beyond machine-word range always go to the Python versions, so the
results never depend on which backend is active.
"""
from __future__ import annotations

import os

import numpy as np

from . import _pykernels

try:
    if os.environ.get("DIOPH_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python forced")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = _ckernels.BACKEND if _ckernels is not None else _pykernels.BACKEND

_WORD = 1 << 62


def _impl():
    return _ckernels if _ckernels is not None else _pykernels


def euclid_division_counts(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.uint64)
    b = np.ascontiguousarray(b, dtype=np.uint64)
    return _impl().euclid_division_counts(a, b)


def count_coprime_pairs(a: np.ndarray, b: np.ndarray) -> int:
    a = np.ascontiguousarray(a, dtype=np.uint64)
    b = np.ascontiguousarray(b, dtype=np.uint64)
    return _impl().count_coprime_pairs(a, b)


def inverse_distance_max(n: int) -> tuple[int, int, int]:
    if n >= 1 << 31:
        return _pykernels.inverse_distance_max(n)
    return _impl().inverse_distance_max(n)


def product_residue_count(p: int, cap: int) -> int:
    if cap >= _WORD or p >= _WORD:
        return _pykernels.product_residue_count(p, cap)
    return _impl().product_residue_count(p, cap)


def reachable(coins, cap: int) -> np.ndarray:
    if cap >= _WORD or max(coins) >= _WORD:
        return _pykernels.reachable(coins, cap)
    return _impl().reachable(coins, cap)


def scan_constant_pair(N: int, r: int, c0: int, c1: int, max_pairs: int):
    if _ckernels is not None and N < _ckernels.SCAN_LIMIT and r < _ckernels.SCAN_LIMIT:
        return _ckernels.scan_constant_pair(N, r, c0, c1, max_pairs)
    return _pykernels.scan_constant_pair(N, r, c0, c1, max_pairs)


def lincong_exhaustive(n_max: int):
    return _impl().lincong_exhaustive(n_max)
