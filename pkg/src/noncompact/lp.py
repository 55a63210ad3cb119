"""Finitely supported points of l_p and their norms.

Coordinates are 1-based positive integers and need not form a dense
prefix, so a vector living at index 10**6 costs the same as one at index 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DomainError

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SpaceSpec:
    """The ambient space l_p plus the knobs for its finite realisations.

    Attributes:
        p: exponent, ``1 < p < inf``. Closed-form moduli need ``p >= 2``.
        truncation_dim: cap on how many tail directions a finite
            realisation may use.
        tol: comparison tolerance for floating point equality tests.
    """

    p: float = 2.0
    truncation_dim: int = 4096
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if not (self.p > 1 and math.isfinite(self.p)):
            raise DomainError(f"p must satisfy 1 < p < inf, got {self.p!r}")
        if int(self.truncation_dim) != self.truncation_dim or self.truncation_dim < 2:
            raise DomainError(f"truncation_dim must be an integer >= 2, got {self.truncation_dim!r}")
        if not self.tol > 0:
            raise DomainError(f"tol must be positive, got {self.tol!r}")

    @property
    def q(self) -> float:
        """Conjugate exponent, 1/p + 1/q = 1."""
        return self.p / (self.p - 1.0)


class SparseVector:
    """Immutable finitely supported vector in canonical form (no stored zeros)."""

    __slots__ = ("_items", "_hash")

    def __init__(self, entries: Mapping[int, float] | Iterable[tuple[int, float]] = ()):
        if isinstance(entries, Mapping):
            entries = entries.items()
        acc: dict[int, float] = {}
        for idx, val in entries:
            if int(idx) != idx or idx < 1:
                raise DomainError(f"coordinate index must be a positive integer, got {idx!r}")
            val = float(val)
            if not math.isfinite(val):
                raise DomainError(f"coordinate {idx} is not finite: {val!r}")
            acc[int(idx)] = acc.get(int(idx), 0.0) + val
        self._items = tuple(sorted((i, v) for i, v in acc.items() if v != 0.0))
        self._hash = None

    @classmethod
    def from_dense(cls, values: Iterable[float], start: int = 1) -> "SparseVector":
        return cls((start + i, v) for i, v in enumerate(values))

    @property
    def items(self) -> tuple[tuple[int, float], ...]:
        return self._items

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self._items)

    @property
    def max_index(self) -> int:
        """Largest support index, 0 for the zero vector."""
        return self._items[-1][0] if self._items else 0

    def entries(self) -> dict[int, float]:
        return dict(self._items)

    def __getitem__(self, idx: int) -> float:
        for i, v in self._items:
            if i == idx:
                return v
        return 0.0

    def __len__(self) -> int:
        return len(self._items)

    def is_zero(self) -> bool:
        return not self._items

    def with_entry(self, idx: int, value: float) -> "SparseVector":
        d = self.entries()
        d[idx] = float(value)
        return SparseVector((i, v) for i, v in d.items())

    def dense(self, length: int | None = None) -> list[float]:
        n = self.max_index if length is None else length
        out = [0.0] * n
        for i, v in self._items:
            if i <= n:
                out[i - 1] = v
        return out

    def __add__(self, other: "SparseVector") -> "SparseVector":
        if not isinstance(other, SparseVector):
            return NotImplemented
        return SparseVector(self._items + other._items)

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        if not isinstance(other, SparseVector):
            return NotImplemented
        return SparseVector(self._items + tuple((i, -v) for i, v in other._items))

    def __neg__(self) -> "SparseVector":
        return SparseVector((i, -v) for i, v in self._items)

    def __mul__(self, k: float) -> "SparseVector":
        if isinstance(k, SparseVector):
            return NotImplemented
        return SparseVector((i, k * v) for i, v in self._items)

    __rmul__ = __mul__

    def dot(self, other: "SparseVector") -> float:
        b = dict(other._items)
        return math.fsum(v * b[i] for i, v in self._items if i in b)

    def isclose(self, other: "SparseVector", tol: float = DEFAULT_TOL) -> bool:
        """Coordinatewise comparison in the sup norm."""
        diff = self - other
        return all(abs(v) <= tol for _, v in diff._items)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseVector):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._items)
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{i}: {v!r}" for i, v in self._items)
        return f"SparseVector({{{body}}})"


def basis(n: int) -> SparseVector:
    """The unit vector e_n."""
    return SparseVector({n: 1.0})


ZERO = SparseVector()


def _check_p(p: float) -> None:
    if not p > 1:
        raise DomainError(f"p must exceed 1, got {p!r}")


def norm(v: SparseVector, p: float) -> float:
    _check_p(p)
    if v.is_zero():
        return 0.0
    # rescale by the largest entry so huge or tiny vectors do not overflow
    m = max(abs(x) for _, x in v.items)
    return m * math.fsum((abs(x) / m) ** p for _, x in v.items) ** (1.0 / p)


def distance(u: SparseVector, v: SparseVector, p: float) -> float:
    return norm(u - v, p)
