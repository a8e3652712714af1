"""Seeded random verification sweeps over the map identities and bounds.

Every check draws from one fixed pseudorandom stream: a 64-bit Weyl
sequence pushed through a finalizing mixer, mapped to doubles in [0, 1)
by the usual 53-bit construction. The stream is defined in closed form
by (seed, index), so any sample can be reproduced in isolation and runs
are identical across platforms and thread counts.

The sample stream is split into fixed-size chunks and chunk k runs its
own stream seeded seed + k. Chunks are independent, reports aggregate by
count, min, max and first failure by global index; all of these are
associative and commutative, so parallel and serial runs agree exactly.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .maps import HALF_PI, eval_g, eval_h, eval_mu, eval_phi, eval_psi
from .parallel import thread_count
from .polynomial import (
    PolyMap2,
    build_f2,
    build_theorem_map,
    evaluate_exact,
    evaluate_float,
    to_triples,
)

_MASK64 = (1 << 64) - 1
SPLITMIX_GAMMA = 0x9E3779B97F4A7C15
_MIX_MULT_1 = 0xBF58476D1CE4E5B9
_MIX_MULT_2 = 0x94D049BB133111EB

# samples per reseeded chunk; fixed so the stream layout never depends on
# worker count
CHUNK_SAMPLES = 65536

_IDENTITY_TOL = 1e-10
_BOUND_SLACK = 1e-12
_GLUE_PHI_TOL = 1e-12
_GLUE_MU_TOL = 1e-15


def _mix64(z: int) -> int:
    z ^= z >> 30
    z = (z * _MIX_MULT_1) & _MASK64
    z ^= z >> 27
    z = (z * _MIX_MULT_2) & _MASK64
    z ^= z >> 31
    return z


def unit_double(seed: int, index: int) -> float:
    """Output number index of the stream for seed, as a double in [0, 1)."""
    z = _mix64((seed + (index + 1) * SPLITMIX_GAMMA) & _MASK64)
    return (z >> 11) * 2.0**-53


def sample_pair(seed: int, sample_index: int) -> tuple[float, float]:
    """The two unit doubles spent on one sample.

    Sample j belongs to chunk j // CHUNK_SAMPLES, whose stream is seeded
    seed + chunk modulo 2^64; in-chunk sample t reads outputs 2t and
    2t + 1, first coordinate first.
    """
    chunk, offset = divmod(sample_index, CHUNK_SAMPLES)
    chunk_seed = (seed + chunk) & _MASK64
    return unit_double(chunk_seed, 2 * offset), unit_double(chunk_seed, 2 * offset + 1)


@dataclass(frozen=True)
class SamplerConfig:
    """Size, seed and square half-width of one verification sweep."""

    count: int
    seed: int
    range: float = 50.0

    def __post_init__(self) -> None:
        if not isinstance(self.count, int) or self.count < 1:
            raise ValueError("count must be a positive integer")
        if not isinstance(self.seed, int) or not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not (math.isfinite(self.range) and self.range > 0.0):
            raise ValueError("range must be a positive finite half-width")


@dataclass(frozen=True)
class SamplerReport:
    """Aggregated outcome of a sweep.

    The component minima and the relative-error maximum are populated
    with whatever quantity the particular check tracks (documented on
    each check); first_failure_input is the offending input with the
    smallest global sample index, or None on a clean run.
    """

    checked: int
    failures: int
    min_component_1: float
    min_component_2: float
    max_relative_error: float
    first_failure_input: tuple[float, float] | None


# partial stats: (checked, failures, min1, min2, maxerr, first)
# with first either None or (global_index, input_pair)
_Stats = tuple[int, int, float, float, float, tuple | None]

_EMPTY_STATS: _Stats = (0, 0, math.inf, math.inf, 0.0, None)


def _merge(a: _Stats, b: _Stats) -> _Stats:
    first = a[5]
    if first is None or (b[5] is not None and b[5][0] < first[0]):
        first = b[5]
    return (
        a[0] + b[0],
        a[1] + b[1],
        min(a[2], b[2]),
        min(a[3], b[3]),
        max(a[4], b[4]),
        first,
    )


def _report(stats: _Stats) -> SamplerReport:
    checked, failures, m1, m2, maxerr, first = stats
    return SamplerReport(
        checked=checked,
        failures=failures,
        min_component_1=m1,
        min_component_2=m2,
        max_relative_error=maxerr,
        first_failure_input=None if first is None else first[1],
    )


def _run_chunks(count: int, worker: Callable[[tuple[int, int]], _Stats]) -> _Stats:
    plan = []
    start = 0
    while start < count:
        plan.append((len(plan), min(CHUNK_SAMPLES, count - start)))
        start += CHUNK_SAMPLES
    workers = min(thread_count(), len(plan))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(worker, plan))
    else:
        parts = [worker(spec) for spec in plan]
    total = _EMPTY_STATS
    for part in parts:
        total = _merge(total, part)
    return total


def _stream_chunk(
    spec: tuple[int, int],
    seed: int,
    per_sample: Callable[[float, float], tuple[tuple, float, float, float, bool]],
) -> _Stats:
    chunk, n = spec
    chunk_seed = (seed + chunk) & _MASK64
    base = chunk * CHUNK_SAMPLES
    failures = 0
    m1 = m2 = math.inf
    maxerr = 0.0
    first = None
    for t in range(n):
        u1 = unit_double(chunk_seed, 2 * t)
        u2 = unit_double(chunk_seed, 2 * t + 1)
        inp, v1, v2, err, ok = per_sample(u1, u2)
        m1 = min(m1, v1)
        m2 = min(m2, v2)
        maxerr = max(maxerr, err)
        if not ok:
            failures += 1
            if first is None:
                first = (base + t, inp)
    return (n, failures, m1, m2, maxerr, first)


# ---------------------------------------------------------------------------
# Cached maps and the vectorized polynomial evaluator.


_THEOREM: PolyMap2 | None = None
_OUTER: PolyMap2 | None = None


def _theorem_map() -> PolyMap2:
    global _THEOREM
    if _THEOREM is None:
        _THEOREM = build_theorem_map()
    return _THEOREM


def _outer_map() -> PolyMap2:
    global _OUTER
    if _OUTER is None:
        _OUTER = build_f2()
    return _OUTER


def _pow_table(base: np.ndarray, top: int) -> list[np.ndarray]:
    table = [np.ones_like(base)]
    for _ in range(top):
        table.append(table[-1] * base)
    return table


def _eval_terms(
    triples: list[tuple[int, int, int]],
    px: list[np.ndarray],
    py: list[np.ndarray],
) -> np.ndarray:
    # term order and association mirror the scalar evaluator exactly, so
    # the vectorized minima are bit-identical to a plain Python sweep
    total = np.zeros_like(px[0])
    for a, b, c in triples:
        total += (c * px[a]) * py[b]
    return total


def _unit_matrix(seed: int, chunk: int, n: int) -> np.ndarray:
    """n rows of unit-double pairs, bit-identical to sample_pair."""
    chunk_seed = np.uint64((seed + chunk) & _MASK64)
    z = chunk_seed + np.arange(1, 2 * n + 1, dtype=np.uint64) * np.uint64(
        SPLITMIX_GAMMA
    )
    z ^= z >> np.uint64(30)
    z *= np.uint64(_MIX_MULT_1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_MIX_MULT_2)
    z ^= z >> np.uint64(31)
    unit = (z >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return unit.reshape(n, 2)


# ---------------------------------------------------------------------------
# The five checks.


def check_positivity(cfg: SamplerConfig) -> SamplerReport:
    """Both components of the glued map stay strictly positive.

    Samples the square [-range, range]^2 and records the minimum of each
    component; a sample fails if either evaluates to zero or below. A
    fixed 21-by-21 grid of half-integers is additionally evaluated in
    exact rational arithmetic, so the verdict cannot be a rounding
    artifact; the grid contributes to checked and to the minima. The
    relative-error field is unused and reported as zero.
    """
    fmap = _theorem_map()
    triples1 = to_triples(fmap.component1)
    triples2 = to_triples(fmap.component2)
    top1 = max(max(a for a, _, _ in triples1), max(a for a, _, _ in triples2))
    top2 = max(max(b for _, b, _ in triples1), max(b for _, b, _ in triples2))
    half = cfg.range

    def run(spec: tuple[int, int]) -> _Stats:
        chunk, n = spec
        unit = _unit_matrix(cfg.seed, chunk, n)
        x = (2.0 * unit[:, 0] - 1.0) * half
        y = (2.0 * unit[:, 1] - 1.0) * half
        px = _pow_table(x, top1)
        py = _pow_table(y, top2)
        c1 = _eval_terms(triples1, px, py)
        c2 = _eval_terms(triples2, px, py)
        bad = (c1 <= 0.0) | (c2 <= 0.0)
        failures = int(bad.sum())
        first = None
        if failures:
            i = int(np.argmax(bad))
            first = (chunk * CHUNK_SAMPLES + i, (float(x[i]), float(y[i])))
        return (n, failures, float(c1.min()), float(c2.min()), 0.0, first)

    stats = _run_chunks(cfg.count, run)

    grid_failures = 0
    grid_first = None
    gm1 = gm2 = math.inf
    index = 0
    for i in range(-10, 11):
        for k in range(-10, 11):
            xq, yq = Fraction(i, 2), Fraction(k, 2)
            v1 = evaluate_exact(fmap.component1, xq, yq)
            v2 = evaluate_exact(fmap.component2, xq, yq)
            if v1 <= 0 or v2 <= 0:
                grid_failures += 1
                if grid_first is None:
                    # grid points sort after every stream sample
                    grid_first = (cfg.count + index, (float(xq), float(yq)))
            gm1 = min(gm1, float(v1))
            gm2 = min(gm2, float(v2))
            index += 1
    stats = _merge(stats, (index, grid_failures, gm1, gm2, 0.0, grid_first))
    return _report(stats)


def check_f2_equals_h_g(cfg: SamplerConfig) -> SamplerReport:
    """The outer factor agrees with its surface factorization.

    Samples [0, range]^2 and compares the polynomial components against
    the composite of the quadric projection with the surface embedding,
    componentwise, relative to the reference magnitude floored at one.
    The minima record the reference components, which stay positive on
    the closed quadrant.
    """
    outer = _outer_map()

    def probe(u1: float, u2: float):
        u = u1 * cfg.range
        v = u2 * cfg.range
        lhs1 = evaluate_float(outer.component1, u, v)
        lhs2 = evaluate_float(outer.component2, u, v)
        r1, r2 = eval_h(eval_g((u, v)))
        err = max(
            abs(lhs1 - r1) / max(1.0, abs(r1)),
            abs(lhs2 - r2) / max(1.0, abs(r2)),
        )
        return (u, v), r1, r2, err, err <= _IDENTITY_TOL

    return _report(_run_chunks(cfg.count, lambda s: _stream_chunk(s, cfg.seed, probe)))


def check_g_psi_equals_phi(cfg: SamplerConfig) -> SamplerReport:
    """The chart composed with the embedding agrees with the direct map.

    Samples the open strip rho in [0, 10], theta in (0.01, pi/2 - 0.01);
    the count and seed come from the config while the strip is fixed by
    the chart's domain. Componentwise discrepancy is relative to the
    direct map's magnitude floored at one; the minima record its first
    two components.
    """

    def probe(u1: float, u2: float):
        rho = u1 * 10.0
        theta = 0.01 + u2 * (HALF_PI - 0.02)
        lhs = eval_g(eval_psi((rho, theta)))
        rhs = eval_phi((rho, theta))
        err = max(abs(l - r) / max(1.0, abs(r)) for l, r in zip(lhs, rhs))
        return (rho, theta), rhs[0], rhs[1], err, err <= _IDENTITY_TOL

    return _report(_run_chunks(cfg.count, lambda s: _stream_chunk(s, cfg.seed, probe)))


def check_phi_bound(cfg: SamplerConfig) -> SamplerReport:
    """First and third components dominate half the radial coordinate.

    Samples rho in [0, 100], theta in [0, pi/2] (ranges fixed by the
    bound's domain) and evaluates the margin phi1^2 + phi3^2 - rho^2/4.
    A sample fails only if the margin drops below the floating slack
    -1e-12 * max(1, rho^2). min_component_1 is the raw margin minimum,
    min_component_2 the slack-scaled one; the error field stays zero.
    """

    def probe(u1: float, u2: float):
        rho = u1 * 100.0
        theta = u2 * HALF_PI
        f1, _, f3 = eval_phi((rho, theta))
        margin = f1 * f1 + f3 * f3 - rho * rho / 4.0
        scale = max(1.0, rho * rho)
        return (rho, theta), margin, margin / scale, 0.0, margin >= -_BOUND_SLACK * scale

    return _report(_run_chunks(cfg.count, lambda s: _stream_chunk(s, cfg.seed, probe)))


def check_mu_gluing(grid: int) -> SamplerReport:
    """The rho = 0 edge folds onto itself and the quotient map respects it.

    On a uniform theta grid of [0, pi/2], the surface map at rho = 0 must
    agree with its reflection across pi/4 within 1e-12 componentwise, and
    the quotient coordinate must match its reflection within 1e-15. The
    error field holds the largest raw discrepancy of either family;
    min_component_1 tracks the quotient coordinate, min_component_2 the
    second surface component, both informational. Failing grid points
    report the pair (theta, reflected theta).
    """
    if not isinstance(grid, int) or grid < 2:
        raise ValueError("grid must be an integer with at least 2 points")
    failures = 0
    first = None
    maxerr = 0.0
    min_mu = math.inf
    min_second = math.inf
    for i in range(grid):
        theta = HALF_PI * (i / (grid - 1))
        mirror = HALF_PI - theta
        left = eval_phi((0.0, theta))
        right = eval_phi((0.0, mirror))
        phi_err = max(abs(l - r) for l, r in zip(left, right))
        mu_err = abs(eval_mu(theta) - eval_mu(mirror))
        maxerr = max(maxerr, phi_err, mu_err)
        min_mu = min(min_mu, eval_mu(theta))
        min_second = min(min_second, left[1])
        if phi_err > _GLUE_PHI_TOL or mu_err > _GLUE_MU_TOL:
            failures += 1
            if first is None:
                first = (theta, mirror)
    return SamplerReport(
        checked=grid,
        failures=failures,
        min_component_1=min_mu,
        min_component_2=min_second,
        max_relative_error=maxerr,
        first_failure_input=first,
    )
