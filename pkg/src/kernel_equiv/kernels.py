"""Finite symmetric kernels: data model, JSON I/O and generators."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from typing import IO, Any, Optional, Sequence, Union

from .errors import (
    AsymmetryError,
    DuplicatePoints,
    FieldMismatch,
    InputFileError,
    LengthMismatch,
    ParseError,
)
from .fields import FieldElement, FieldSpec

SignVector = tuple  # tuple of ints, each +1 or -1


def as_sign_vector(g: Sequence[int], n: Optional[int] = None) -> tuple:
    values = tuple(g)
    if n is not None and len(values) != n:
        raise LengthMismatch(f"sign vector has length {len(values)}, expected {n}")
    for v in values:
        if isinstance(v, bool) or v not in (1, -1):
            raise ValueError(f"sign vector entries must be +1 or -1, got {v!r}")
    return tuple(int(v) for v in values)


@dataclass(frozen=True, eq=False)
class SymmetricKernel:
    """An n x n symmetric matrix over a :class:`FieldSpec`.

    ``entries`` is a tuple of row tuples. Construction validates shape,
    membership in the field and symmetry.
    """

    entries: tuple
    spec: FieldSpec
    labels: tuple = field(default=())

    def __post_init__(self) -> None:
        entries = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", entries)
        n = len(entries)
        if n == 0:
            raise ParseError("kernels must have at least one point")
        labels = tuple(self.labels) if self.labels else tuple(str(i) for i in range(n))
        if len(labels) != n:
            raise ParseError(f"{len(labels)} labels for {n} points")
        if len(set(labels)) != n:
            raise ParseError("labels must be distinct")
        object.__setattr__(self, "labels", labels)
        contains = self.spec.contains
        for i, row in enumerate(entries):
            if len(row) != n:
                raise ParseError(f"row {i} has {len(row)} entries, expected {n}")
            for j, a in enumerate(row):
                if not contains(a):
                    raise FieldMismatch(f"entry ({i},{j}) = {a!r} is not in {self.spec.kind}")
        self._check_symmetry()

    def _check_symmetry(self) -> None:
        entries = self.entries
        if self.spec.exact:
            for i, row in enumerate(entries):
                for j in range(i + 1, len(row)):
                    if row[j] != entries[j][i]:
                        raise AsymmetryError(i, j)
        else:
            equals = self.spec.equals
            for i, row in enumerate(entries):
                for j in range(i + 1, len(row)):
                    if not equals(row[j], entries[j][i]):
                        raise AsymmetryError(i, j)

    @classmethod
    def _trusted(cls, entries: tuple, spec: FieldSpec, labels: tuple) -> "SymmetricKernel":
        # Internal constructor for results that are symmetric by construction.
        obj = object.__new__(cls)
        object.__setattr__(obj, "entries", entries)
        object.__setattr__(obj, "spec", spec)
        object.__setattr__(obj, "labels", labels)
        return obj

    @classmethod
    def from_values(
        cls, values: Sequence[Sequence[Any]], spec: FieldSpec, labels: Sequence[str] = ()
    ) -> "SymmetricKernel":
        """Build a kernel from plain ints/Fractions/floats, coercing into ``spec``."""
        rows = tuple(tuple(spec.element(v) for v in row) for row in values)
        return cls(rows, spec, tuple(labels))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple) -> FieldElement:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymmetricKernel):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.labels == other.labels
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.labels, self.n))

    def equals(self, other: "SymmetricKernel") -> bool:
        """Entrywise equality under the field's equality (tolerant in approx mode)."""
        if self.n != other.n or self.spec != other.spec:
            return False
        if self.spec.exact:
            return self.entries == other.entries
        eq = self.spec.equals
        return all(
            eq(a, b) for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    def submatrix(self, subset: Sequence[int]) -> list:
        rows = self.entries
        return [[rows[i][j] for j in subset] for i in subset]

    def to_json(self) -> dict:
        ser = self.spec.serialize
        doc: dict = {"field": self.spec.to_json(), "n": self.n}
        if self.labels != tuple(str(i) for i in range(self.n)):
            doc["labels"] = list(self.labels)
        doc["entries"] = [[ser(a) for a in row] for row in self.entries]
        return doc


def load_kernel(source: Union[bytes, str, IO]) -> SymmetricKernel:
    """Read a kernel from JSON text, bytes or a readable stream."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"kernel file is not UTF-8: {exc}") from None
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return kernel_from_json(doc)


def kernel_from_json(doc: Any) -> SymmetricKernel:
    if not isinstance(doc, dict):
        raise ParseError("kernel document must be a JSON object")
    for key in ("field", "n", "entries"):
        if key not in doc:
            raise ParseError(f"kernel document is missing {key!r}")
    decl = doc["field"]
    if isinstance(decl, str):
        # flat form: {"field": "gfp", "p": 7, ...}
        decl = {k: doc[k] for k in ("field", "p", "zero_tol", "eq_tol") if k in doc}
    spec = FieldSpec.from_json(decl)
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ParseError(f"n must be a positive integer, got {n!r}")
    rows = doc["entries"]
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"entries must be a list of {n} rows")
    parsed = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"row {i} must be a list of {n} entries")
        try:
            parsed.append(tuple(spec.parse(a) for a in row))
        except FieldMismatch as exc:
            raise FieldMismatch(f"row {i}: {exc}") from None
    labels = doc.get("labels", ())
    if labels and (
        not isinstance(labels, list) or not all(isinstance(s, str) for s in labels)
    ):
        raise ParseError("labels must be a list of strings")
    return SymmetricKernel(tuple(parsed), spec, tuple(labels))


def dump_kernel(K: SymmetricKernel) -> str:
    """Serialize to the canonical compact JSON form (one line, trailing newline)."""
    return json.dumps(K.to_json(), separators=(",", ":")) + "\n"


def read_kernel_file(path: str) -> SymmetricKernel:
    try:
        with open(path, "rb") as fh:
            return load_kernel(fh)
    except OSError as exc:
        raise InputFileError(f"cannot read {path}: {exc.strerror}") from None


def conjugate_kernel(K: SymmetricKernel, g: Sequence[int]) -> SymmetricKernel:
    """Return Q with Q(x, y) = g(x) g(y) K(x, y) for a sign vector g."""
    g = as_sign_vector(g, K.n)
    spec = K.spec
    neg = spec.neg
    negated: dict = {}

    def flip(a):
        # Reuse one negated object per distinct source object.
        key = id(a)
        b = negated.get(key)
        if b is None:
            b = negated[key] = neg(a)
        return b

    rows = []
    for i, row in enumerate(K.entries):
        gi = g[i]
        rows.append(tuple(a if gi == gj else flip(a) for a, gj in zip(row, g)))
    # Diagonal entries have g(i)**2 = 1 and therefore keep their identity.
    return SymmetricKernel._trusted(tuple(rows), spec, K.labels)


def gen_random_kernel(
    n: int, spec: FieldSpec, density: float = 1.0, seed: int = 0
) -> SymmetricKernel:
    """Deterministic random symmetric kernel.

    Each unordered off-diagonal pair and each diagonal entry is nonzero with
    probability ``density``; nonzero values come from ``spec.random_nonzero``
    (rationals p/q with p in [-9, 9] \\ {0}, q in [1, 9]).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = random.Random(seed)
    zero = spec.zero
    rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = spec.random_nonzero(rng) if rng.random() < density else zero
        for j in range(i + 1, n):
            if rng.random() < density:
                rows[i][j] = rows[j][i] = spec.random_nonzero(rng)
    return SymmetricKernel._trusted(tuple(tuple(r) for r in rows), spec, _default_labels(n))


def random_sign_vector(n: int, seed: int) -> tuple:
    rng = random.Random(seed)
    return tuple(1 if rng.random() < 0.5 else -1 for _ in range(n))


def _check_points(points: Sequence[float]) -> list:
    pts = [float(x) for x in points]
    if not pts:
        raise ValueError("need at least one point")
    if len(set(pts)) != len(pts):
        raise DuplicatePoints("sample points must be pairwise distinct")
    return pts


def gen_sine_kernel(
    points: Sequence[float], spec: Optional[FieldSpec] = None
) -> SymmetricKernel:
    """Sine kernel sin(pi(x-y)) / (pi(x-y)) sampled at ``points`` (approx field)."""
    pts = _check_points(points)
    spec = spec or FieldSpec.approx()
    n = len(pts)
    rows = [[1.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            t = math.pi * (pts[i] - pts[j])
            v = math.sin(t) / t
            if spec.is_zero(v):
                v = 0.0
            rows[i][j] = rows[j][i] = v
    return SymmetricKernel(tuple(tuple(r) for r in rows), spec)


def orthonormal_legendre(degree: int, x: float) -> list:
    """phi_0(x) .. phi_{degree-1}(x), orthonormal Legendre polynomials on [-1, 1]."""
    values = []
    p_prev, p_cur = 0.0, 1.0
    for k in range(degree):
        values.append(math.sqrt((2 * k + 1) / 2.0) * p_cur)
        p_prev, p_cur = p_cur, ((2 * k + 1) * x * p_cur - k * p_prev) / (k + 1)
    return values


def gen_cd_kernel(
    degree: int, points: Sequence[float], spec: Optional[FieldSpec] = None
) -> SymmetricKernel:
    """Christoffel-Darboux kernel sum_k phi_k(x) phi_k(y) of the Legendre family."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    pts = _check_points(points)
    spec = spec or FieldSpec.approx()
    phis = [orthonormal_legendre(degree, x) for x in pts]
    n = len(pts)
    rows = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = math.fsum(a * b for a, b in zip(phis[i], phis[j]))
            if spec.is_zero(v):
                v = 0.0
            rows[i][j] = rows[j][i] = v
    return SymmetricKernel(tuple(tuple(r) for r in rows), spec)


def _default_labels(n: int) -> tuple:
    return tuple(str(i) for i in range(n))
