"""Brute-force check of equal principal minors.

Two symmetric kernels are equivalent when det K[T] == det Q[T] for every
tuple T of points. It suffices to look at subsets of distinct indices in
ascending order: a tuple with a repeated point has two equal rows, so both
determinants vanish, and reordering a tuple permutes rows and columns by the
same permutation, which leaves both determinants unchanged. That leaves the
2**n - 1 nonempty subsets, checked here size by size.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

from .errors import SizeOutOfRange
from .fields import PRIME_FIELD, RATIONAL, FieldElement, FieldSpec
from .kernels import SymmetricKernel
from .transition import check_compatible


def determinant(M: Sequence[Sequence[FieldElement]], spec: FieldSpec) -> FieldElement:
    """Determinant by elimination (Bareiss for rationals, mod-p Gauss, pivoted floats)."""
    if spec.kind == RATIONAL:
        return _det_rational(M)
    if spec.kind == PRIME_FIELD:
        return _det_mod_p(M, spec.p)
    return _det_float(M)


def bareiss(A: list) -> int:
    """Fraction-free determinant of an integer matrix; ``A`` is consumed."""
    n = len(A)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (akk * ri[j] - aik * rk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def _det_rational(M) -> Fraction:
    scale = 1
    rows = []
    for row in M:
        lcm = 1
        for a in row:
            d = a.denominator
            if d != 1:
                lcm = lcm * d // math.gcd(lcm, d)
        scale *= lcm
        rows.append([a.numerator * (lcm // a.denominator) for a in row])
    return Fraction(bareiss(rows), scale)


def _det_mod_p(M, p: int) -> int:
    A = [list(row) for row in M]
    n = len(A)
    det = 1
    for k in range(n):
        pivot = next((r for r in range(k, n) if A[r][k]), None)
        if pivot is None:
            return 0
        if pivot != k:
            A[k], A[pivot] = A[pivot], A[k]
            det = -det
        akk = A[k][k]
        det = det * akk % p
        inv = pow(akk, -1, p)
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            f = ri[k] * inv % p
            if f:
                for j in range(k + 1, n):
                    ri[j] = (ri[j] - f * rk[j]) % p
    return det % p


def _det_float(M) -> float:
    A = [list(map(float, row)) for row in M]
    n = len(A)
    det = 1.0
    for k in range(n):
        pivot = max(range(k, n), key=lambda r: abs(A[r][k]))
        if A[pivot][k] == 0.0:
            return 0.0
        if pivot != k:
            A[k], A[pivot] = A[pivot], A[k]
            det = -det
        akk = A[k][k]
        det *= akk
        rk = A[k]
        for i in range(k + 1, n):
            ri = A[i]
            f = ri[k] / akk
            for j in range(k + 1, n):
                ri[j] -= f * rk[j]
    return det


@dataclass(frozen=True)
class MinorMismatch:
    subset: tuple
    det_k: FieldElement
    det_q: FieldElement

    def to_json(self, spec: FieldSpec) -> dict:
        return {
            "kind": "minor_mismatch",
            "subset": list(self.subset),
            "det_k": spec.serialize(self.det_k),
            "det_q": spec.serialize(self.det_q),
        }


@dataclass(frozen=True)
class MinorReport:
    max_size: int
    subsets_checked: int
    mismatch: Optional[MinorMismatch] = None

    @property
    def all_equal(self) -> bool:
        return self.mismatch is None

    def to_json(self, spec: FieldSpec) -> dict:
        return {
            "all_equal": self.all_equal,
            "max_size": self.max_size,
            "subsets_checked": self.subsets_checked,
            "mismatch": None if self.mismatch is None else self.mismatch.to_json(spec),
        }


def _minor_mismatch(K: SymmetricKernel, Q: SymmetricKernel, subset) -> Optional[MinorMismatch]:
    spec = K.spec
    dk = determinant(K.submatrix(subset), spec)
    dq = determinant(Q.submatrix(subset), spec)
    if spec.equals(dk, dq):
        return None
    return MinorMismatch(tuple(subset), dk, dq)


def _scan(K, Q, subsets: Iterable[tuple]) -> tuple:
    checked = 0
    for s in subsets:
        checked += 1
        hit = _minor_mismatch(K, Q, s)
        if hit is not None:
            return checked, hit
    return checked, None


def _scan_size(args) -> Optional[MinorMismatch]:
    K, Q, size, residue, workers = args
    for t, s in enumerate(combinations(range(K.n), size)):
        if t % workers == residue:
            hit = _minor_mismatch(K, Q, s)
            if hit is not None:
                return hit
    return None


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("KERNEL_EQUIV_WORKERS", "1")))
    except ValueError:
        return 1


def compare_minors(
    K: SymmetricKernel, Q: SymmetricKernel, max_size: Optional[int] = None, workers: int = 1
) -> MinorReport:
    """Compare all principal minors of size 1..max_size in (size, lex) order.

    With ``workers > 1`` each size is split round-robin across processes and
    the first mismatch is the minimum in canonical order, so the report does
    not depend on scheduling.
    """
    check_compatible(K, Q)
    n = K.n
    if max_size is None:
        max_size = n
    if not 1 <= max_size <= n:
        raise SizeOutOfRange(f"max_size must lie in [1, {n}], got {max_size}")
    if workers <= 1:
        checked, hit = _scan(
            K, Q, (s for k in range(1, max_size + 1) for s in combinations(range(n), k))
        )
        return MinorReport(max_size, checked, hit)

    checked = 0
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for k in range(1, max_size + 1):
            jobs = [(K, Q, k, r, workers) for r in range(workers)]
            hits = [h for h in pool.map(_scan_size, jobs) if h is not None]
            if hits:
                first = min(hits, key=lambda h: h.subset)
                rank = next(
                    t for t, s in enumerate(combinations(range(n), k)) if s == first.subset
                )
                return MinorReport(max_size, checked + rank + 1, first)
            checked += math.comb(n, k)
    return MinorReport(max_size, checked, None)


def _hinted_subsets(n: int, size: int, hint: Sequence[int]) -> Iterator[tuple]:
    inside = sorted(set(hint))
    seen = set()
    for s in combinations(inside, size):
        seen.add(s)
        yield s
    for s in combinations(range(n), size):
        if s not in seen:
            yield s


def find_minimal_mismatch(
    K: SymmetricKernel, Q: SymmetricKernel, hint: Sequence[int] = ()
) -> Optional[tuple]:
    """Smallest subset whose minors differ, trying subsets of ``hint`` first at each size."""
    check_compatible(K, Q)
    for size in range(1, K.n + 1):
        for s in _hinted_subsets(K.n, size, hint):
            hit = _minor_mismatch(K, Q, s)
            if hit is not None:
                return hit.subset
    return None


def minimal_mismatch(
    K: SymmetricKernel, Q: SymmetricKernel, hint: Sequence[int] = ()
) -> Optional[MinorMismatch]:
    """Like :func:`find_minimal_mismatch` but returns the determinants too."""
    subset = find_minimal_mismatch(K, Q, hint)
    return None if subset is None else _minor_mismatch(K, Q, subset)
