"""Zero set, transition signs S(x, y) = Q(x, y) / K(x, y), and path products."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import FieldMismatch, NotASign, ShapeMismatch, UndefinedFactor
from .fields import FieldElement
from .graph import KernelGraph, Path
from .kernels import SymmetricKernel


@dataclass(frozen=True)
class DiagonalMismatch:
    index: int

    def to_json(self) -> dict:
        return {"kind": "diagonal_mismatch", "index": self.index}


@dataclass(frozen=True)
class SquareMismatch:
    i: int
    j: int

    def to_json(self) -> dict:
        return {"kind": "square_mismatch", "pair": [self.i, self.j]}


NecessaryFailure = Union[DiagonalMismatch, SquareMismatch]


def check_compatible(K: SymmetricKernel, Q: SymmetricKernel) -> None:
    if K.n != Q.n:
        raise ShapeMismatch(f"kernels have sizes {K.n} and {Q.n}")
    if K.spec != Q.spec:
        raise FieldMismatch(f"kernels live in different fields: {K.spec} vs {Q.spec}")


def iter_necessary_failures(K: SymmetricKernel, Q: SymmetricKernel) -> Iterator[NecessaryFailure]:
    """Failures of the 1x1 and 2x2 minor conditions, in row-major order.

    Row i reports its diagonal first, then pairs (i, j) with j > i.
    """
    check_compatible(K, Q)
    spec = K.spec
    equals, squares_equal = spec.equals, spec.squares_equal
    for i, (rk, rq) in enumerate(zip(K.entries, Q.entries)):
        if not equals(rk[i], rq[i]):
            yield DiagonalMismatch(i)
        if spec.exact:
            sign_between = spec.sign_between
            for j in range(i + 1, len(rk)):
                a, b = rk[j], rq[j]
                if a is b or sign_between(b, a) is not None:
                    continue
                yield SquareMismatch(i, j)
        else:
            for j in range(i + 1, len(rk)):
                if not squares_equal(rk[j], rq[j]):
                    yield SquareMismatch(i, j)


def check_necessary(K: SymmetricKernel, Q: SymmetricKernel) -> Optional[NecessaryFailure]:
    """First failing necessary condition, or None when K and Q pass.

    Passing means K(i, i) == Q(i, i) for every i and K(i, j)**2 == Q(i, j)**2
    for every pair, which also forces the two zero patterns to agree.
    """
    return next(iter_necessary_failures(K, Q), None)


class ZeroSet:
    """Pairs (i, j) where both kernels vanish."""

    def __init__(self, K: SymmetricKernel, Q: SymmetricKernel):
        check_compatible(K, Q)
        self._K = K
        self._Q = Q

    def __contains__(self, pair: tuple) -> bool:
        i, j = pair
        is_zero = self._K.spec.is_zero
        return is_zero(self._K.entries[i][j]) and is_zero(self._Q.entries[i][j])


class TransitionTable:
    """Signs S(i, j) in {+1, -1} on graph edges, plus the diagonal.

    Stored as one signed byte per ordered pair (0 means undefined); the
    table is filled symmetrically, so S(i, j) == S(j, i) structurally.
    """

    def __init__(self, n: int, rows: list, diagonal: bytes):
        self.n = n
        self._rows = rows
        self._diagonal = diagonal

    def sign(self, i: int, j: int) -> int:
        """S(i, j); raises KeyError when (i, j) lies in the zero set."""
        if i == j:
            if self._diagonal[i]:
                return 1
            raise KeyError((i, j))
        s = self._rows[i][j]
        if s == 0:
            raise KeyError((i, j))
        return 1 if s == 1 else -1

    def __contains__(self, pair: tuple) -> bool:
        i, j = pair
        return bool(self._diagonal[i]) if i == j else self._rows[i][j] != 0

    def items(self) -> Iterator[tuple]:
        """((i, j), sign) for every stored pair i < j, lexicographically."""
        for i, row in enumerate(self._rows):
            for j in range(i + 1, self.n):
                s = row[j]
                if s:
                    yield (i, j), (1 if s == 1 else -1)

    def __len__(self) -> int:
        return sum(1 for _ in self.items())

    def to_json(self) -> list:
        return [[i, j, s] for (i, j), s in self.items()]


_MINUS = 255  # -1 stored in an unsigned byte


def build_transition(K: SymmetricKernel, Q: SymmetricKernel, G: KernelGraph) -> TransitionTable:
    """Compute S on every edge of ``G`` (built from K).

    Raises :class:`NotASign` when Q(i, j) is not +-K(i, j); after a passing
    :func:`check_necessary` this can only happen in approx mode.
    """
    check_compatible(K, Q)
    spec = K.spec
    sign_between = spec.sign_between
    n = K.n
    rows = [bytearray(n) for _ in range(n)]
    kent, qent = K.entries, Q.entries
    for i, nbrs in enumerate(G.neighbors):
        rk, rq, out = kent[i], qent[i], rows[i]
        for j in nbrs:
            if j < i:
                out[j] = rows[j][i]
                continue
            a, b = rk[j], rq[j]
            s = 1 if a is b else sign_between(b, a)
            if s is None:
                raise NotASign(i, j)
            out[j] = 1 if s == 1 else _MINUS
    is_zero = spec.is_zero
    diagonal = bytes(
        0 if is_zero(kent[i][i]) and is_zero(qent[i][i]) else 1 for i in range(n)
    )
    return TransitionTable(n, rows, diagonal)


def path_product(T: TransitionTable, p: Path) -> int:
    """S[p], the product of transition signs along p (1 for a length-0 path)."""
    s = 1
    for step, (a, b) in enumerate(p.steps(), start=1):
        try:
            s *= T.sign(a, b)
        except KeyError:
            raise UndefinedFactor(step) from None
    return s


def kernel_path_product(K: SymmetricKernel, p: Path) -> FieldElement:
    """K[p], the product of kernel values along p."""
    spec = K.spec
    acc = spec.one
    for a, b in p.steps():
        acc = spec.mul(acc, K.entries[a][b])
    return acc
