"""One test per acceptance criterion; each prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` or
``python tests/test_acceptance.py``.
"""

import itertools
import math
import os
import time

import pytest
from scipy.stats import chisquare

from wecken import reference
from wecken.bounds import d_lower, dstar_lower, v_upper, w2_lower
from wecken.classes import is_kn, is_ln, is_vn
from wecken.freegroup import count_words, enumerate_words
from wecken.montecarlo import (
    SampleConfig,
    density_grid,
    estimate_density,
    exact_density,
    sample_word,
    trial_rng,
)
from wecken.wagner import (
    Endomorphism,
    class_partition,
    has_remnant,
    has_remnant_bruteforce,
    nielsen_number,
    tail_table,
)

from conftest import ACCEPTANCE_LINES, random_maps

WORKERS = max(1, os.cpu_count() or 1)


def report(label, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_1_golden_example():
    phi = Endomorphism.parse("ba^3b;ab^-1a^2", 2)
    expected = [
        ("1", "1", 1),
        ("b", "b^-1a^-2", -1),
        ("ba", "b^-1a^-1", -1),
        ("ba^2", "b^-1", -1),
        ("ab^-1", "a^-2b", 1),
    ]
    timings = []
    for _ in range(200):
        t0 = time.perf_counter()
        table = tail_table(phi)
        n = nielsen_number(phi)
        timings.append(time.perf_counter() - t0)
    got = [(str(r.w), str(r.w_bar), r.index) for r in table]
    nontrivial = {t for r in table[1:] for t in (str(r.w), str(r.w_bar))}
    elapsed = min(timings)
    ok = got == expected and n == 5 and len(nontrivial) == 8 and elapsed < 1e-3
    report("1 golden example: worked example tails and N=5", ok, f"N={n}, {elapsed * 1e3:.3f} ms")


def test_2_counting():
    t0 = time.perf_counter()
    bad = [
        (n, p) for n in (2, 3) for p in range(6)
        if sum(1 for _ in enumerate_words(n, p)) != count_words(n, p)
    ]
    elapsed = time.perf_counter() - t0
    report("2 countWords equals enumeration, n in {2,3}, p <= 5", not bad and elapsed < 1.0,
           f"{elapsed:.3f} s")


def test_3_bound_tables():
    ref = reference.bounds()
    t0 = time.perf_counter()
    misses = []
    for name, f in (("v_upper", v_upper), ("d_lower", d_lower), ("dstar_lower", dstar_lower)):
        for n, value in ref[name].items():
            got = f(n)
            if abs(got - value) > 1e-4:
                misses.append(f"{name}({n})={got:.5f} vs {value}")
    if d_lower(2, exact=True) != 0:
        misses.append("d_2 != 0")
    if abs(w2_lower() - 0.2129) > 1e-4:
        misses.append("23/108")
    elapsed = time.perf_counter() - t0
    checked = sum(len(ref[k]) for k in ("v_upper", "d_lower", "dstar_lower")) + 2
    report("3 bound tables within 1e-4", not misses and elapsed < 30,
           f"{checked} values, {elapsed:.2f} s" + (f"; {misses}" if misses else ""))


def test_4_limits():
    d_gap = abs(d_lower(10_000) - math.exp(-3))
    v_gap = abs(v_upper(10_000) - math.exp(-1))
    below = all(v_upper(n) < math.exp(-1) for n in range(2, 10_001))
    report("4 limits: d -> e^-3, v -> e^-1, v < e^-1", d_gap < 1e-3 and v_gap < 1e-3 and below,
           f"|d-e^-3|={d_gap:.2e}, |v-e^-1|={v_gap:.2e}")


@pytest.mark.slow
def test_5_table2():
    ref = reference.table2()
    t0 = time.perf_counter()
    cells = density_grid(reference.TABLE2_NS, reference.TABLE2_PS, trials=10_000, seed=0,
                         predicate="vn", include_identity=False, workers=WORKERS, reference=ref)
    elapsed = time.perf_counter() - t0
    within = sum(abs(c.deviation) <= 0.02 for c in cells.values())
    worst = max(abs(c.deviation) for c in cells.values())
    report("5 density grid: >= 85 of 91 cells within 0.02", len(cells) == 91 and within >= 85 and elapsed < 600,
           f"{within}/91, max dev {worst:.4f}, {elapsed:.0f} s")


def test_6_oracle_equivalence():
    published = reference.table2()
    details, ok = [], True
    for p in (2, 3):
        exact = float(exact_density(2, p, "vn", include_identity=False))
        est = estimate_density(SampleConfig(2, p, 10_000, 6, "vn", include_identity=False))
        se = math.sqrt(exact * (1 - exact) / 10_000)
        ok &= abs(est.proportion - exact) < 3 * se
        ok &= abs(published[p, 2] - exact) <= 0.02
        details.append(f"p={p}: exact {exact:.4f}, MC {est.proportion:.4f}, published {published[p, 2]}")
    report("6 exact vs Monte Carlo vs published, n=2", ok, "; ".join(details))


def _trace(f):
    return sum(sum(1 if x == i else -1 for x in w if abs(x) == i)
               for i, w in enumerate(f.images, start=1))


def test_7_property_suites():
    maps = random_maps(10_000, ns=(2, 3, 5), ps=(4, 8, 14), seed=77)
    index_bad = inclusion_bad = nielsen_bad = remnant_bad = 0
    for f in maps:
        table = tail_table(f)
        index_bad += table.index_sum != 1 - _trace(f)
        kn, ln, vn = is_kn(f), is_ln(f), is_vn(f)
        inclusion_bad += (kn and not ln) or (ln and not vn)
        remnant = has_remnant(f)
        if vn and remnant:
            nielsen_bad += nielsen_number(f) != len(table)
        remnant_bad += remnant != has_remnant_bruteforce(f)
    small = list(enumerate_words(2, 3))
    for a, b in itertools.product(small, repeat=2):
        f = Endomorphism(2, (a, b))
        remnant_bad += has_remnant(f) != has_remnant_bruteforce(f)
    counts = f"index {index_bad}, inclusion {inclusion_bad}, nielsen {nielsen_bad}, remnant {remnant_bad}"
    report("7 property suites, zero violations",
           index_bad == inclusion_bad == nielsen_bad == remnant_bad == 0, counts)


@pytest.mark.parametrize("n", [3, 5, 10])
def test_8_bounds_vs_experiment(n):
    trials = 10_000
    k = estimate_density(SampleConfig(n, 14, trials, 8, "kn", include_identity=False), workers=WORKERS)
    l = estimate_density(SampleConfig(n, 14, trials, 8, "ln", include_identity=False), workers=WORKERS)
    d, ds = d_lower(n), dstar_lower(n)
    se_k = math.sqrt(d * (1 - d) / trials)
    se_l = math.sqrt(ds * (1 - ds) / trials)
    ok = k.proportion >= d - 3 * se_k and l.proportion >= ds - 3 * se_l
    report(f"8 n={n}, p=14: K_n >= d_n and L_n >= d*_n (3 SE)", ok,
           f"K {k.proportion:.4f} vs {d:.4f}, L {l.proportion:.4f} vs {ds:.4f}")


def test_9_sampler():
    draws = 100_000
    support = list(enumerate_words(2, 2))
    index = {w: i for i, w in enumerate(support)}
    counts = [0] * len(support)
    for t in range(draws):
        counts[index[sample_word(2, 2, trial_rng(99, t))]] += 1
    pvalue = chisquare(counts).pvalue
    cfg = SampleConfig(3, 8, 3000, 123, "vn")
    runs = []
    for workers in (1, 4, 16):
        est = estimate_density(cfg, workers=workers).as_dict()
        est.pop("elapsed_s")
        runs.append(est)
    same = runs[0] == runs[1] == runs[2]
    report("9 sampler uniform (17 outcomes) and worker-count independent",
           len(support) == 17 and pvalue > 1e-3 and same, f"chi-square p={pvalue:.3f}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
