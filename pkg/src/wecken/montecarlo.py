"""Uniform sampling of endomorphisms and density estimation.

Every trial draws from its own :class:`random.Random` stream whose seed is
a hash of ``(seed, trial index)``, so results do not depend on how trials
are split across worker processes.
"""

from __future__ import annotations

import hashlib
import itertools
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

from scipy.stats import norm

from . import classes
from .freegroup import Word, check_rank, count_words, count_words_exact_length, enumerate_words
from .wagner import Endomorphism, has_remnant

__all__ = [
    "PREDICATES",
    "SampleConfig",
    "DensityEstimate",
    "length_weights",
    "trial_rng",
    "sample_word",
    "sample_endomorphism",
    "estimate_density",
    "exact_density",
    "wilson_interval",
    "cell_seed",
    "count_hits",
    "GridCell",
    "density_grid",
]

DEFAULT_EXACT_CAP = 10**7


def _any_t_class(phi: Endomorphism) -> bool:
    return phi.rank == 2 and bool(classes.classify_t(phi))


PREDICATES: dict[str, Callable[[Endomorphism], bool]] = {
    "vn": classes.is_vn_cross,
    "vn_strict": classes.is_vn_strict,
    "remnant": has_remnant,
    "rn": has_remnant,
    "kn": classes.is_kn,
    "ln": classes.is_ln,
    "v_nontrivial": classes.is_v_nontrivial,
    "w_nontrivial": classes.is_w_nontrivial,
    "t_class": _any_t_class,
}


def _predicate(name: str) -> Callable[[Endomorphism], bool]:
    try:
        return PREDICATES[name]
    except KeyError:
        raise KeyError(f"unknown predicate {name!r}; choose from {sorted(PREDICATES)}") from None


# ------------------------------------------------------------------ sampling

def length_weights(n: int, p: int, include_identity: bool = True) -> list[int]:
    """Exact number of reduced words of each length ``0..p``."""
    weights = [count_words_exact_length(n, k) for k in range(p + 1)]
    if not include_identity:
        weights[0] = 0
    return weights


def trial_rng(seed: int, *key: int) -> random.Random:
    """Independent stream for ``(seed, *key)``."""
    data = ":".join(str(int(k)) for k in (seed, *key)).encode()
    digest = hashlib.blake2b(data, digest_size=16).digest()
    return random.Random(int.from_bytes(digest, "little"))


def cell_seed(seed: int, n: int, p: int) -> int:
    data = f"cell:{seed}:{n}:{p}".encode()
    return int.from_bytes(hashlib.blake2b(data, digest_size=8).digest(), "little")


def _draw_length(weights: list[int], total: int, rng: random.Random) -> int:
    r = rng.randrange(total)
    for length, w in enumerate(weights):
        if r < w:
            return length
        r -= w
    raise AssertionError("unreachable")


def _sample_raw(n: int, length: int, rng: random.Random) -> tuple[int, ...]:
    # letter codes 0..2n-1: code c is generator c//2+1 with sign (-1)**c;
    # the inverse of code c is c ^ 1
    if length == 0:
        return ()
    randrange = rng.randrange
    c = randrange(2 * n)
    codes = [c]
    m = 2 * n - 1
    for _ in range(length - 1):
        r = randrange(m)
        if r >= (c ^ 1):
            r += 1
        c = r
        codes.append(c)
    return tuple(-(c // 2 + 1) if c & 1 else c // 2 + 1 for c in codes)


def sample_word(n: int, p: int, rng: random.Random, include_identity: bool = True) -> Word:
    """Uniform random element of ``G_p`` (words of length at most ``p``)."""
    weights = length_weights(n, p, include_identity)
    total = sum(weights)
    if total == 0:
        raise ValueError("no words to sample from")
    return Word._trusted(_sample_raw(n, _draw_length(weights, total, rng), rng))


def sample_endomorphism(n: int, p: int, rng: random.Random, include_identity: bool = True) -> Endomorphism:
    check_rank(n)
    weights = length_weights(n, p, include_identity)
    total = sum(weights)
    if total == 0:
        raise ValueError("no words to sample from")
    images = tuple(
        Word._trusted(_sample_raw(n, _draw_length(weights, total, rng), rng)) for _ in range(n)
    )
    return Endomorphism(n, images)


# ---------------------------------------------------------------- estimation

@dataclass(frozen=True)
class SampleConfig:
    n: int
    p: int
    trials: int
    seed: int
    predicate: str = "vn"
    include_identity: bool = True

    def __post_init__(self):
        check_rank(self.n)
        if self.p < 0:
            raise ValueError("p must be >= 0")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")
        _predicate(self.predicate)


@dataclass(frozen=True)
class DensityEstimate:
    n: int
    p: int
    trials: int
    seed: int
    predicate: str
    include_identity: bool
    hits: int
    proportion: float
    ci_low: float
    ci_high: float
    elapsed_s: float

    @property
    def standard_error(self) -> float:
        q = self.proportion
        return math.sqrt(q * (1 - q) / self.trials)

    def as_dict(self) -> dict:
        return asdict(self)


def _count_hits(cfg: SampleConfig, start: int, stop: int) -> int:
    pred = _predicate(cfg.predicate)
    weights = length_weights(cfg.n, cfg.p, cfg.include_identity)
    total = sum(weights)
    n = cfg.n
    hits = 0
    for t in range(start, stop):
        rng = trial_rng(cfg.seed, t)
        images = tuple(
            Word._trusted(_sample_raw(n, _draw_length(weights, total, rng), rng)) for _ in range(n)
        )
        phi = object.__new__(Endomorphism)
        object.__setattr__(phi, "rank", n)
        object.__setattr__(phi, "images", images)
        if pred(phi):
            hits += 1
    return hits


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    step = math.ceil(trials / workers)
    return [(a, min(a + step, trials)) for a in range(0, trials, step)]


def _count_hits_star(args):
    return _count_hits(*args)


def count_hits(cfg: SampleConfig, workers: int = 1, pool: ProcessPoolExecutor | None = None) -> int:
    """Number of trials whose endomorphism satisfies ``cfg.predicate``."""
    if sum(length_weights(cfg.n, cfg.p, cfg.include_identity)) == 0:
        raise ValueError("no words to sample from")
    if pool is None and workers <= 1:
        return _count_hits(cfg, 0, cfg.trials)
    jobs = [(cfg, a, b) for a, b in _chunks(cfg.trials, max(workers, 1))]
    if pool is not None:
        return sum(pool.map(_count_hits_star, jobs))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return sum(ex.map(_count_hits_star, jobs))


def estimate_density(cfg: SampleConfig, workers: int = 1, level: float = 0.95,
                     pool: ProcessPoolExecutor | None = None) -> DensityEstimate:
    t0 = time.perf_counter()
    hits = count_hits(cfg, workers, pool)
    lo, hi = wilson_interval(hits, cfg.trials, level)
    return DensityEstimate(
        n=cfg.n,
        p=cfg.p,
        trials=cfg.trials,
        seed=cfg.seed,
        predicate=cfg.predicate,
        include_identity=cfg.include_identity,
        hits=hits,
        proportion=hits / cfg.trials,
        ci_low=lo,
        ci_high=hi,
        elapsed_s=time.perf_counter() - t0,
    )


def exact_density(n: int, p: int, predicate: str = "vn", include_identity: bool = True,
                  cap: int = DEFAULT_EXACT_CAP) -> Fraction:
    """Exact fraction of ``G_p^n`` satisfying ``predicate``, by enumeration."""
    pred = _predicate(predicate)
    check_rank(n)
    size = count_words(n, p) - (0 if include_identity else 1)
    if size == 0:
        raise ValueError("no words to enumerate")
    if size**n > cap:
        raise OverflowError(f"|G_p|^n = {size**n} exceeds enumeration cap {cap}")
    words = list(enumerate_words(n, p, cap=cap))
    if not include_identity:
        words = words[1:]
    hits = 0
    for images in itertools.product(words, repeat=n):
        phi = object.__new__(Endomorphism)
        object.__setattr__(phi, "rank", n)
        object.__setattr__(phi, "images", images)
        hits += pred(phi)
    return Fraction(hits, size**n)


def wilson_interval(hits: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    if trials < 1 or not 0 <= hits <= trials:
        raise ValueError("need 0 <= hits <= trials and trials >= 1")
    z = norm.ppf(0.5 + level / 2)
    q = hits / trials
    denom = 1 + z * z / trials
    center = (q + z * z / (2 * trials)) / denom
    half = z * math.sqrt(q * (1 - q) / trials + z * z / (4 * trials * trials)) / denom
    lo, hi = center - half, center + half
    if hits == 0:
        lo = 0.0
    if hits == trials:
        hi = 1.0
    return max(0.0, lo), min(1.0, hi)


# ---------------------------------------------------------------------- grid

@dataclass(frozen=True)
class GridCell:
    estimate: DensityEstimate
    reference: float | None

    @property
    def deviation(self) -> float | None:
        if self.reference is None:
            return None
        return self.estimate.proportion - self.reference


def density_grid(ns, ps, trials: int, seed: int, predicate: str = "vn",
                 include_identity: bool = False, workers: int = 1,
                 reference: dict[tuple[int, int], float] | None = None) -> dict[tuple[int, int], GridCell]:
    """One fresh estimate per ``(p, n)`` cell, each with its own derived seed.

    ``include_identity`` defaults to False here: excluding the identity word
    is the sampling model that reproduces the published table.
    """
    reference = reference or {}
    cells = {}
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for p in ps:
            for n in ns:
                cfg = SampleConfig(n, p, trials, cell_seed(seed, n, p), predicate, include_identity)
                est = estimate_density(cfg, workers=workers, pool=pool)
                cells[p, n] = GridCell(est, reference.get((p, n)))
    finally:
        if pool is not None:
            pool.shutdown()
    return cells
