"""Decide equivalence of two symmetric kernels and construct conjugation witnesses.

For K, Q passing the 1x1/2x2 minor checks, every edge of the kernel graph
carries a sign S(x, y) with Q(x, y) = S(x, y) K(x, y). The kernels are
equivalent exactly when S multiplies to 1 around every cycle. Signs are
propagated down a BFS forest from each component's base vertex, and each
non-tree edge then closes one fundamental cycle; these cycles span all
cycles, so checking them is enough.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

from .errors import NotASign, NotEquivalentInput
from .fields import FieldSpec
from .graph import KernelGraph, build_graph
from .kernels import SymmetricKernel, as_sign_vector, conjugate_kernel
from .oracle import MinorMismatch, minimal_mismatch
from .transition import (
    DiagonalMismatch,
    SquareMismatch,
    TransitionTable,
    build_transition,
    check_compatible,
    iter_necessary_failures,
)


@dataclass(frozen=True)
class CycleObstruction:
    """A fundamental cycle whose transition signs multiply to -1."""

    cycle: tuple
    minor: Optional[MinorMismatch] = None

    def to_json(self, spec: FieldSpec) -> dict:
        doc: dict = {"kind": "cycle_obstruction", "cycle": list(self.cycle)}
        if self.minor is not None:
            doc["minor"] = self.minor.to_json(spec)
        return doc


@dataclass(frozen=True)
class SignMismatch:
    """Approx mode only: Q(i, j) / K(i, j) is not within tolerance of +-1."""

    i: int
    j: int

    def to_json(self, spec: FieldSpec) -> dict:
        return {"kind": "not_a_sign", "pair": [self.i, self.j]}


@dataclass(frozen=True)
class EntryMismatch:
    """The constructed witness fails entrywise verification at (i, j)."""

    i: int
    j: int

    def to_json(self, spec: FieldSpec) -> dict:
        return {"kind": "entry_mismatch", "pair": [self.i, self.j]}


Certificate = Union[DiagonalMismatch, SquareMismatch, CycleObstruction, SignMismatch, EntryMismatch]


@dataclass(frozen=True)
class EquivalenceVerdict:
    equivalent: bool
    spec: FieldSpec
    component_count: int = 0
    witness: Optional[tuple] = None
    certificate: Optional[Certificate] = None
    all_failures: tuple = field(default=())

    @property
    def heuristic(self) -> bool:
        return not self.spec.exact

    @property
    def witness_count(self) -> Optional[int]:
        if not self.equivalent:
            return None
        # +1 and -1 coincide in characteristic 2, leaving a single witness.
        return 1 if self.spec.characteristic() == 2 else 2 ** self.component_count

    def to_json(self) -> dict:
        cert = self.certificate
        return {
            "equivalent": self.equivalent,
            "heuristic": self.heuristic,
            "witness": None if self.witness is None else list(self.witness),
            "components": self.component_count,
            "witness_count": self.witness_count,
            "certificate": None if cert is None else _cert_json(cert, self.spec),
        }


def _cert_json(cert, spec: FieldSpec) -> dict:
    if isinstance(cert, (DiagonalMismatch, SquareMismatch)):
        return cert.to_json()
    return cert.to_json(spec)


@dataclass(frozen=True)
class Analysis:
    """A verdict together with the intermediate structures that produced it."""

    verdict: EquivalenceVerdict
    graph: Optional[KernelGraph] = None
    transition: Optional[TransitionTable] = None


def analyze(
    K: SymmetricKernel,
    Q: SymmetricKernel,
    *,
    find_minor: bool = False,
    all_failures: bool = False,
) -> Analysis:
    check_compatible(K, Q)
    spec = K.spec

    failures = iter_necessary_failures(K, Q)
    first = next(failures, None)
    if first is not None:
        rest = (first, *failures) if all_failures else ()
        return Analysis(EquivalenceVerdict(False, spec, certificate=first, all_failures=rest))

    G = build_graph(K)
    ncomp = len(G.components)
    try:
        T = build_transition(K, Q, G)
    except NotASign as exc:
        return Analysis(
            EquivalenceVerdict(False, spec, ncomp, certificate=SignMismatch(exc.i, exc.j)), G
        )

    g = propagate_signs(G, T)

    for u, v in G.non_tree_edges():
        if T.sign(u, v) != g[u] * g[v]:
            cycle = G.fundamental_cycle(u, v).vertices
            minor = minimal_mismatch(K, Q, cycle) if find_minor else None
            cert = CycleObstruction(cycle, minor)
            return Analysis(EquivalenceVerdict(False, spec, ncomp, certificate=cert), G, T)

    bad = first_conjugation_mismatch(K, Q, g)
    if bad is not None:
        if spec.exact:
            raise AssertionError(f"constructed witness fails at {bad} in an exact field")
        return Analysis(EquivalenceVerdict(False, spec, ncomp, certificate=EntryMismatch(*bad)), G, T)
    return Analysis(EquivalenceVerdict(True, spec, ncomp, witness=g), G, T)


def decide_equivalence(
    K: SymmetricKernel, Q: SymmetricKernel, *, find_minor: bool = False
) -> EquivalenceVerdict:
    """Decide whether all principal minors of K and Q agree.

    The positive verdict carries the canonical witness g (+1 at every
    component base) with Q = conjugate_kernel(K, g), verified entrywise.
    """
    return analyze(K, Q, find_minor=find_minor).verdict


def propagate_signs(G: KernelGraph, T: TransitionTable) -> tuple:
    """g(base) = +1 and g(y) = g(parent(y)) S(parent(y), y) down the BFS forest.

    This equals the sign product along the tree path from the base to y.
    """
    g = [1] * G.n
    parent = G.parent
    # BFS order guarantees parents are assigned before children.
    for v in sorted(range(G.n), key=G.depth.__getitem__):
        p = parent[v]
        if p >= 0:
            g[v] = g[p] * T.sign(p, v)
    return tuple(g)


def first_conjugation_mismatch(
    K: SymmetricKernel, Q: SymmetricKernel, g: Sequence[int]
) -> Optional[tuple]:
    """First (i, j), i <= j, where g(i) g(j) K(i, j) != Q(i, j); None if none."""
    spec = K.spec
    equals, neg = spec.equals, spec.neg
    sign_between = spec.sign_between
    for i, (rk, rq) in enumerate(zip(K.entries, Q.entries)):
        gi = g[i]
        for j in range(i, len(rk)):
            a, b = rk[j], rq[j]
            s = gi * g[j]
            if spec.exact:
                if a is b and s == 1:
                    continue
                t = sign_between(b, a)
                # t is ambiguous when a == -a (a zero, or characteristic 2).
                ok = t is not None and (t == s or neg(a) == a)
            else:
                ok = equals(a if s == 1 else neg(a), b)
            if not ok:
                return (i, j)
    return None


def enumerate_witnesses(v: EquivalenceVerdict, G: KernelGraph) -> Iterator[tuple]:
    """All conjugation functions relating K and Q.

    The canonical witness with every subset of components globally flipped,
    in binary counting order (bit k flips the k-th component by base vertex).
    Over characteristic 2 only the canonical witness exists.
    """
    if not v.equivalent:
        raise NotEquivalentInput("witnesses exist only for equivalent kernels")
    base = v.witness
    if v.spec.characteristic() == 2:
        yield base
        return
    comps = G.components
    for mask in range(2 ** len(comps)):
        g = list(base)
        for k, comp in enumerate(comps):
            if mask >> k & 1:
                for x in comp:
                    g[x] = -g[x]
        yield tuple(g)


def orbit_check(K: SymmetricKernel, g1: Sequence[int], g2: Sequence[int]) -> bool:
    """Two conjugates of the same kernel are always decided equivalent."""
    g1 = as_sign_vector(g1, K.n)
    g2 = as_sign_vector(g2, K.n)
    return decide_equivalence(conjugate_kernel(K, g1), conjugate_kernel(K, g2)).equivalent


def normalize_witness(G: KernelGraph, g: Sequence[int]) -> tuple:
    """Flip each component of g so it is +1 at the component's base vertex."""
    out = list(g)
    for comp in G.components:
        if out[comp[0]] == -1:
            for x in comp:
                out[x] = -out[x]
    return tuple(out)
