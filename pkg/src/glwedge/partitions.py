"""Partitions, p-restrictedness and base-p (Steinberg) layers."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence


class Partition(tuple):
    """Weakly decreasing tuple of positive integers.

    Behaves like a plain tuple (hashing, ordering, slicing) so partitions can
    be used directly as dictionary keys in character arithmetic.
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(x) for x in parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(x <= 0 for x in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"partition parts must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def parts(self) -> tuple:
        return tuple(self)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"

    def __str__(self) -> str:
        return format_partition(self)


def format_partition(lam: Sequence[int]) -> str:
    return "[" + ",".join(str(x) for x in lam) + "]"


def parse_partition(text: str) -> Partition:
    """Parse ``"[4,2]"`` (brackets optional, ``"[]"`` is the empty partition)."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    body = body.strip()
    if not body:
        return Partition()
    try:
        parts = [int(tok) for tok in body.split(",")]
    except ValueError as exc:
        raise ValueError(f"cannot parse partition {text!r}") from exc
    return Partition(parts)


def sort_weight(weight: Sequence[int]) -> Partition:
    """Dominant representative of a weight: sort descending, drop zeros."""
    return Partition(sorted((w for w in weight if w), reverse=True))


def is_p_restricted(lam: Sequence[int], p: int) -> bool:
    padded = tuple(lam) + (0,)
    return all(padded[i] - padded[i + 1] < p for i in range(len(lam)))


def conjugate(lam: Sequence[int]) -> Partition:
    if not lam:
        return Partition()
    return Partition(sum(1 for part in lam if part > j) for j in range(lam[0]))


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` in lexicographically descending order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield Partition()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield Partition((first,) + tuple(rest))


def enumerate_partitions(max_size: int) -> list[Partition]:
    """All partitions of size <= max_size: by size, then lex descending."""
    if max_size < 0:
        raise ValueError("max_size must be nonnegative")
    out: list[Partition] = []
    for n in range(max_size + 1):
        out.extend(partitions_of(n))
    return out


@lru_cache(maxsize=None)
def partition_count(n: int) -> int:
    return sum(1 for _ in partitions_of(n))


def dominates(lam: Sequence[int], mu: Sequence[int]) -> bool:
    """True iff lam >= mu in dominance order (same size assumed)."""
    s_l = s_m = 0
    for i in range(max(len(lam), len(mu))):
        s_l += lam[i] if i < len(lam) else 0
        s_m += mu[i] if i < len(mu) else 0
        if s_l < s_m:
            return False
    return s_l == s_m


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")
    return p


@dataclass(frozen=True)
class SteinbergDecomposition:
    layers: tuple
    prime: int

    def reconstruct(self) -> Partition:
        length = max((len(layer) for layer in self.layers), default=0)
        parts = [0] * length
        for i, layer in enumerate(self.layers):
            for j, part in enumerate(layer):
                parts[j] += self.prime ** i * part
        return Partition(parts)


def steinberg_decompose(lam: Sequence[int], p: int) -> SteinbergDecomposition:
    """Write lam = sum_i p^i lam^i with every lam^i p-restricted.

    Peel the lowest layer: gaps of lam^0 are the gaps of lam reduced mod p,
    which makes lam^0 p-restricted and lam - lam^0 divisible by p with
    weakly decreasing quotient.
    """
    check_prime(p)
    lam = Partition(lam)
    layers = []
    rest = lam
    while rest:
        padded = tuple(rest) + (0,)
        gaps = [(padded[i] - padded[i + 1]) % p for i in range(len(rest))]
        low = [sum(gaps[i:]) for i in range(len(rest))]
        layers.append(Partition(low))
        rest = Partition((a - b) // p for a, b in zip(rest, low))
    while layers and not layers[-1]:
        layers.pop()
    dec = SteinbergDecomposition(tuple(layers), p)
    if dec.reconstruct() != lam or not all(is_p_restricted(x, p) for x in layers):
        raise AssertionError(f"Steinberg decomposition failed for {lam}, p={p}")
    return dec
