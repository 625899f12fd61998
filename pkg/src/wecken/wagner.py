"""Wagner's algorithm for the Nielsen number of a free-group endomorphism.

A map in standard form has one fixed point at the wedge point and one for
every occurrence of ``a_i^{+-1}`` in ``phi(a_i)``.  Each fixed point carries
a pair of Wagner tails; fixed points whose tail sets meet are directly
related, and the classes of the generated equivalence relation with nonzero
index sum are counted by the Nielsen number (when ``phi`` has remnant).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .freegroup import Word, check_rank, format_word, parse_word

__all__ = [
    "Endomorphism",
    "FixedPointRecord",
    "TailTable",
    "ClassPartition",
    "NoRemnantError",
    "UnionFind",
    "tail_table",
    "remnant_bounds",
    "has_remnant",
    "has_remnant_bruteforce",
    "class_partition",
    "nielsen_number",
    "iter_tails",
]


class NoRemnantError(ValueError):
    """The endomorphism has no remnant, so Wagner's theorem does not apply."""


@dataclass(frozen=True)
class Endomorphism:
    """An endomorphism of the free group of rank ``rank``, given by images."""

    rank: int
    images: tuple[Word, ...]

    def __post_init__(self):
        check_rank(self.rank)
        if len(self.images) != self.rank:
            raise ValueError(f"expected {self.rank} images, got {len(self.images)}")
        images = tuple(w if isinstance(w, Word) else Word(w) for w in self.images)
        for w in images:
            if w.max_generator > self.rank:
                raise ValueError(f"image {w} uses a generator beyond rank {self.rank}")
        object.__setattr__(self, "images", images)

    @classmethod
    def parse(cls, text: str, n: int) -> "Endomorphism":
        """Parse ``"w1;w2;...;wn"``."""
        parts = text.split(";")
        if len(parts) != n:
            raise ValueError(f"expected {n} images separated by ';', got {len(parts)}")
        return cls(n, tuple(parse_word(part, n) for part in parts))

    def format(self) -> str:
        return ";".join(format_word(w, self.rank) for w in self.images)

    def __call__(self, i: int) -> Word:
        return self.images[i - 1]

    def relabel(self, perm: Sequence[int]) -> "Endomorphism":
        """Conjugate by the generator permutation ``a_i -> a_{perm[i-1]}``."""
        sigma = {i + 1: perm[i] for i in range(self.rank)}
        new = [None] * self.rank
        for i, w in enumerate(self.images, start=1):
            new[sigma[i] - 1] = Word._trusted(tuple(sigma[abs(x)] * (1 if x > 0 else -1) for x in w))
        return Endomorphism(self.rank, tuple(new))

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class FixedPointRecord:
    id: int
    kind: str  # "wedge" or "occurrence"
    w: Word
    w_bar: Word
    index: int
    owner: int | None = None
    position: int | None = None  # 1-based letter index inside phi(a_owner)
    epsilon: int | None = None

    def tails(self) -> tuple[Word, Word]:
        return (self.w, self.w_bar)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "owner": self.owner,
            "position": self.position,
            "epsilon": self.epsilon,
            "w": format_word(self.w),
            "wBar": format_word(self.w_bar),
            "index": self.index,
        }


@dataclass(frozen=True)
class TailTable:
    records: tuple[FixedPointRecord, ...]

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[FixedPointRecord]:
        return iter(self.records)

    def __getitem__(self, i: int) -> FixedPointRecord:
        return self.records[i]

    @property
    def index_sum(self) -> int:
        return sum(r.index for r in self.records)

    def as_dicts(self) -> list[dict]:
        return [r.as_dict() for r in self.records]


def iter_tails(images: Sequence[tuple[int, ...]]) -> Iterator[tuple[int, int, int, tuple, tuple]]:
    """Yield ``(owner, position, epsilon, w, w_bar)`` for each occurrence.

    Works on raw letter tuples; the Monte Carlo loop calls this directly.
    For ``epsilon = -1`` the tails absorb the occurrence letter itself.
    """
    for i, img in enumerate(images, start=1):
        for j, x in enumerate(img):
            if x == i:
                yield i, j + 1, 1, img[:j], tuple(-y for y in reversed(img[j + 1:]))
            elif x == -i:
                yield i, j + 1, -1, img[: j + 1], tuple(-y for y in reversed(img[j:]))


def tail_table(phi: Endomorphism) -> TailTable:
    wedge = Word._trusted(())
    records = [FixedPointRecord(0, "wedge", wedge, wedge, 1)]
    for owner, pos, eps, w, w_bar in iter_tails(phi.images):
        records.append(
            FixedPointRecord(
                id=len(records),
                kind="occurrence",
                w=Word._trusted(w),
                w_bar=Word._trusted(w_bar),
                index=-eps,
                owner=owner,
                position=pos,
                epsilon=eps,
            )
        )
    return TailTable(tuple(records))


# ------------------------------------------------------------------ remnant

def _common_prefix_len(u: Sequence[int], v: Sequence[int]) -> int:
    k = 0
    for a, b in zip(u, v):
        if a != b:
            break
        k += 1
    return k


def remnant_bounds(phi: Endomorphism) -> list[tuple[int, int]]:
    """Maximal left and right cancellation ``(L_i, R_i)`` into each ``phi(a_i)``.

    Left factors range over every ``phi(a_j)^{+-1}`` except ``phi(a_i)^-1``;
    the right side is symmetric.  Cancellation of ``u`` into the front of
    ``x`` is the common prefix length of ``u^-1`` and ``x``.
    """
    images = phi.images
    inverses = [tuple(-y for y in reversed(w)) for w in images]
    bounds = []
    for i, x in enumerate(images):
        x_inv = inverses[i]
        left = right = 0
        for j, (u, u_inv) in enumerate(zip(images, inverses)):
            # left factor u contributes u^-1 as the cancelling prefix;
            # left factor u^-1 contributes u (skipped when it is x^-1)
            left = max(left, _common_prefix_len(u_inv, x))
            if j != i:
                left = max(left, _common_prefix_len(u, x))
            # right factor v cancels the end of x: compare x^-1 with v
            right = max(right, _common_prefix_len(x_inv, u))
            if j != i:
                right = max(right, _common_prefix_len(x_inv, u_inv))
        bounds.append((left, right))
    return bounds


def has_remnant(phi: Endomorphism) -> bool:
    for x, (left, right) in zip(phi.images, remnant_bounds(phi)):
        if left + right >= len(x):
            return False
    return True


def _surviving_positions(u: Sequence[int], x: Sequence[int], v: Sequence[int]) -> set[int]:
    # reduce u x v on a stack, remembering where each letter of x came from
    stack: list[tuple[int, int]] = []
    tagged = [(y, -1) for y in u] + [(y, k) for k, y in enumerate(x)] + [(y, -1) for y in v]
    for y, tag in tagged:
        if stack and stack[-1][0] == -y:
            stack.pop()
        else:
            stack.append((y, tag))
    return {tag for _, tag in stack if tag >= 0}


def has_remnant_bruteforce(phi: Endomorphism) -> bool:
    """Remnant by forming every allowed product ``phi(a_j)^{+-1} phi(a_i) phi(a_k)^{+-1}``.

    Slow; kept as an independent check of :func:`has_remnant`.
    """
    images = [tuple(w) for w in phi.images]
    factors = []
    for j, w in enumerate(images):
        factors.append((j, 1, w))
        factors.append((j, -1, tuple(-y for y in reversed(w))))
    for i, x in enumerate(images):
        survivors = set(range(len(x)))
        for j, ej, u in factors:
            if j == i and ej == -1:
                continue
            for k, ek, v in factors:
                if k == i and ek == -1:
                    continue
                survivors &= _surviving_positions(u, x, v)
                if not survivors:
                    return False
        if not survivors:
            return False
    return True


# ------------------------------------------------------------------ classes

class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))
        self.rank = [0] * size

    def find(self, i: int) -> int:
        root = i
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[i] != root:
            self.parent[i], i = root, self.parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return
        if self.rank[ri] < self.rank[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        if self.rank[ri] == self.rank[rj]:
            self.rank[ri] += 1


@dataclass(frozen=True)
class ClassPartition:
    table: TailTable
    classes: tuple[tuple[int, ...], ...]
    index_sums: tuple[int, ...] = field(default=())

    @property
    def essential(self) -> tuple[bool, ...]:
        return tuple(s != 0 for s in self.index_sums)

    @property
    def essential_count(self) -> int:
        return sum(self.essential)

    def __len__(self) -> int:
        return len(self.classes)


def class_partition(phi: Endomorphism, table: TailTable | None = None) -> ClassPartition:
    """Fixed point classes: components of the tail-intersection graph."""
    if table is None:
        table = tail_table(phi)
    uf = UnionFind(len(table))
    owner_of_tail: dict[Word, int] = {}
    for rec in table:
        for t in rec.tails():
            first = owner_of_tail.setdefault(t, rec.id)
            if first != rec.id:
                uf.union(first, rec.id)
    blocks: dict[int, list[int]] = {}
    for rec in table:
        blocks.setdefault(uf.find(rec.id), []).append(rec.id)
    classes = sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0])
    sums = tuple(sum(table[i].index for i in b) for b in classes)
    return ClassPartition(table, tuple(classes), sums)


def nielsen_number(phi: Endomorphism) -> int:
    """Number of essential fixed point classes; requires remnant."""
    if not has_remnant(phi):
        raise NoRemnantError(f"{phi} has no remnant; Wagner's theorem does not apply")
    return class_partition(phi).essential_count
