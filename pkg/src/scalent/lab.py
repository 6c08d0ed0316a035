"""Experiment plumbing behind the ``scalent`` command line.

Tables are lists of flat rows with fixed columns, rendered to CSV and JSON
deterministically (same config and seed, same bytes).  Every numeric row is
tagged ``exact``, ``bounds`` or ``sampled``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ._rational import fraction_str
from .amenable import GroupWindow, check_certificate, coset_slices, folner_window, reduce_window
from .coinduction import (CoinducedSystem, HypothesisError, WeightedFamily, averaged_distance,
                          coinduced_apply, compose, decompose_average, verify_lemma_estimate,
                          weighted_slice_distance)
from .formats import format_space, parse_config, parse_int_list, parse_rational_list
from .instances import random_eps, random_labels, random_masses, random_metric, random_space
from .ordered_pairs.adic import (AdicPathPrefix, OverflowSignal, SigmaSequence, adic_step,
                                 enumerate_level_set, level_set_size, path_mass,
                                 predicted_scaling, sample_vertex)
from .ordered_pairs.bounds import mixture_bounds, sizes_law
from .ordered_pairs.windows import (ResidueCapExceeded, WindowDistribution,
                                    averaged_window_space, distribution_from_law,
                                    pattern_law_exact,
                                    pattern_law_sampled, window_distribution_exact,
                                    window_distribution_k, window_exponent)
from .partitions import (Partition, check_lemma_averaging, check_lemma_partitions_1,
                         check_lemma_partitions_2, cut_semimetric)
from .semimetric import ExactCapExceeded, Semimetric, SemimetricSpace, eps_entropy_exact

DEFAULT_EPS = (Fraction(1, 4), Fraction(1, 8), Fraction(1, 16), Fraction(1, 32))
MODES = ("auto", "exact", "sampled")
TAGS = ("exact", "bounds", "sampled")


class ConfigError(ValueError):
    """Invalid experiment configuration (exit code 2)."""


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def resolve_sigma(spec: str, length: int) -> SigmaSequence:
    """A bit string, or one of ``zeros``, ``ones``, ``alternating``
    (1, 0, 1, 0, ...) extended to ``length``."""
    spec = spec.strip()
    named = {"zeros": SigmaSequence.zeros, "ones": SigmaSequence.ones,
             "alternating": SigmaSequence.alternating}
    if spec in named:
        return named[spec](length)
    try:
        sigma = SigmaSequence(spec)
    except ValueError as e:
        raise ConfigError(f"bad sigma {spec!r}: {e}") from None
    if len(sigma) < length:
        raise ConfigError(f"sigma has {len(sigma)} bits, level {length} needs more")
    return sigma


@dataclass
class ExperimentConfig:
    sigma: str = "alternating"
    eps: Tuple[Fraction, ...] = DEFAULT_EPS
    n: Tuple[int, ...] = (2, 4, 8, 16)
    level: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    mode: str = "auto"
    out: Optional[str] = None
    phi: Fraction = Fraction(2)
    radius: Optional[int] = None
    shape: str = "box"
    instances: Optional[int] = None

    def __post_init__(self):
        self.eps = tuple(Fraction(e) for e in self.eps)
        self.n = tuple(int(x) for x in self.n)
        if not self.eps or not self.n:
            raise ConfigError("grids must be nonempty")
        if any(not 0 < e < 1 for e in self.eps):
            raise ConfigError("every epsilon must lie in (0, 1)")
        if any(x < 1 for x in self.n):
            raise ConfigError("every n must be positive")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.mode == "sampled" and (self.samples is None or self.seed is None):
            raise ConfigError("sampled mode needs both samples and seed")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("samples must be positive")
        if self.level is not None and self.level < 1:
            raise ConfigError("level must be positive")
        if self.phi <= 1:
            raise ConfigError("phi must exceed 1")

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "ExperimentConfig":
        """Build from strings (config file or flags); unknown keys are errors."""
        kw: Dict[str, Any] = {}
        try:
            for k, v in values.items():
                if v is None:
                    continue
                if k == "eps":
                    kw[k] = tuple(parse_rational_list(v)) if isinstance(v, str) else tuple(v)
                elif k == "n":
                    kw[k] = tuple(parse_int_list(v)) if isinstance(v, str) else tuple(v)
                elif k in ("level", "samples", "seed", "radius", "instances"):
                    kw[k] = int(v)
                elif k == "phi":
                    kw[k] = Fraction(v)
                elif k in ("sigma", "mode", "out", "shape"):
                    kw[k] = str(v)
                else:
                    raise ConfigError(f"unknown configuration key {k!r}")
        except (ValueError, ZeroDivisionError) as e:
            if isinstance(e, ConfigError):
                raise
            raise ConfigError(str(e)) from None
        return cls(**kw)

    @classmethod
    def from_text(cls, text: str, overrides: Optional[Mapping[str, Any]] = None) -> "ExperimentConfig":
        values: Dict[str, Any] = dict(parse_config(text))
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_mapping(values)


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

def _num(x: Optional[float]) -> Optional[float]:
    if x is None or (isinstance(x, float) and math.isinf(x)):
        return None
    return round(float(x), 6)


@dataclass
class TrendReport:
    """Rows with fixed columns plus per-ε verdicts."""

    columns: Tuple[str, ...]
    rows: List[Dict[str, Any]]
    verdicts: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for r in self.rows:
            if r.get("tag") not in TAGS:
                raise ValueError(f"untagged row {r}")
            if r["tag"] == "sampled" and (r.get("samples") is None or r.get("seed") is None):
                raise ValueError("sampled rows carry sample count and seed")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow(["" if r.get(c) is None else r.get(c) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        body = {"columns": list(self.columns),
                "rows": [{c: r.get(c) for c in self.columns} for r in self.rows],
                "verdicts": self.verdicts}
        return json.dumps(body, indent=1, sort_keys=True) + "\n"


SCALING_COLUMNS = ("sigma", "n", "level", "epsilon", "tag", "method", "lower_blocks",
                   "upper_blocks", "phi_lower", "phi_upper", "predicted_h", "ratio_lower",
                   "ratio_upper", "samples", "seed", "flags")


def _scaling_level(n: int, level: Optional[int]) -> int:
    need = window_exponent((n - 1,)) if n > 1 else 0
    return need + 2 if level is None else level


def scaling_row(sigma_spec: str, n: int, eps: Fraction, level: Optional[int] = None,
                mode: str = "auto", samples: Optional[int] = None,
                seed: Optional[int] = None) -> Dict[str, Any]:
    """Φ(n, ε) = H_ε of the averaged window law on [0, n).

    The law is a mixture of weighted cubes (one per offset pattern), so the
    entropy comes from exact ball masses; small supports are additionally
    solved by the general exact solver.
    """
    N = _scaling_level(n, level)
    sigma = resolve_sigma(sigma_spec, N)
    S = tuple(range(n))
    flags: List[str] = []
    relax = level is not None
    law = None
    tag = None
    if mode in ("auto", "exact"):
        try:
            law = pattern_law_exact(sigma, S, N, relax=relax)
        except ResidueCapExceeded:
            if mode == "exact" or samples is None or seed is None:
                flags.append("residue-cap")
            else:
                flags.append("downgraded-to-sampled")
    if law is None and samples is not None and seed is not None and mode != "exact":
        law = pattern_law_sampled(sigma, S, N, samples, seed, relax=relax)
        tag = "sampled"
    if law is None:
        row = {"sigma": str(sigma), "n": n, "level": N, "epsilon": fraction_str(eps),
               "tag": "bounds", "method": "none", "lower_blocks": 1, "upper_blocks": None,
               "phi_lower": 0.0, "phi_upper": None, "predicted_h": predicted_scaling(sigma, n),
               "ratio_lower": 0.0, "ratio_upper": None, "samples": None, "seed": None,
               "flags": ";".join(flags + ["infeasible"])}
        return row
    b = mixture_bounds(sizes_law(law), eps)
    lower, upper, method = b.lower_blocks, b.upper_blocks, "cube-mixture"
    if tag is None and lower != upper and n <= 8:
        space = averaged_window_space(_dist_of(law, S, N, sigma))
        try:
            res = eps_entropy_exact(space, eps)
            lower, upper, method = res.lower_blocks, res.upper_blocks, "exact-solver"
        except ExactCapExceeded:
            pass
    if tag is None:
        tag = "exact" if lower == upper else "bounds"
        if mode == "exact" and tag != "exact":
            flags.append("downgraded-to-bounds")
    h = predicted_scaling(sigma, n)
    lo = math.log2(max(lower, 1))
    hi = None if upper is None else math.log2(max(upper, 1))
    return {"sigma": str(sigma), "n": n, "level": N, "epsilon": fraction_str(eps), "tag": tag,
            "method": method, "lower_blocks": lower, "upper_blocks": upper,
            "phi_lower": _num(lo), "phi_upper": _num(hi), "predicted_h": h,
            "ratio_lower": _num(lo / h), "ratio_upper": _num(None if hi is None else hi / h),
            "samples": samples if tag == "sampled" else None,
            "seed": seed if tag == "sampled" else None, "flags": ";".join(flags)}


def _dist_of(law, S, N, sigma):
    return WindowDistribution(S, N, distribution_from_law(law), sigma=str(sigma))


def _slope(xs: Sequence[float], ys: Sequence[float]) -> Optional[float]:
    if len(xs) < 2 or len(set(xs)) < 2:
        return None
    return _num(float(np.polyfit(np.asarray(xs), np.asarray(ys), 1)[0]))


def scaling_table(cfg: ExperimentConfig) -> TrendReport:
    rows = [scaling_row(cfg.sigma, n, e, cfg.level, cfg.mode, cfg.samples, cfg.seed)
            for n in cfg.n for e in cfg.eps]
    verdicts: Dict[str, Any] = {}
    for e in cfg.eps:
        sel = [r for r in rows if r["epsilon"] == fraction_str(e) and r["n"] > 1]
        xs = [math.log2(r["n"]) for r in sel]
        mids = [r["phi_lower"] if r["phi_upper"] is None else (r["phi_lower"] + r["phi_upper"]) / 2
                for r in sel]
        ys = [math.log2(max(m, 1e-12)) for m in mids]
        pred = [math.log2(r["predicted_h"]) for r in sel]
        ratios = [x for r in sel for x in (r["ratio_lower"], r["ratio_upper"]) if x is not None]
        verdicts[fraction_str(e)] = {
            "log_phi_slope": _slope(xs, ys),
            "predicted_log_slope": _slope(xs, pred),
            "ratio_min": _num(min(ratios)) if ratios else None,
            "ratio_max": _num(max(ratios)) if ratios else None,
        }
    return TrendReport(SCALING_COLUMNS, rows, verdicts)


COINDUCE_COLUMNS = ("n", "size", "k", "sum_s", "h4eps_lower", "h4eps_upper", "bound_lower",
                    "bound_upper", "bound_per_size", "predicted_per_size", "product_lower",
                    "product_upper", "tag", "flags")


def staircase_window(n: int, step: int = 1) -> GroupWindow:
    """Rows b = 0..n-1 of lengths n + step*b, each shifted right by b."""
    pts = [(b + a, b) for b in range(n) for a in range(n + step * b)]
    return GroupWindow.from_points(pts, 2)


def gapped_window(n: int) -> GroupWindow:
    """A box [0, n)^2 with every other row removed (empty slices)."""
    return GroupWindow.from_points([(a, b) for b in range(0, 2 * n, 2) for a in range(n)], 2)


def _window_for(shape: str, n: int) -> GroupWindow:
    if shape == "box":
        return folner_window(2, n)
    if shape == "staircase":
        return staircase_window(n)
    if shape == "gapped":
        return gapped_window(n)
    raise ConfigError(f"unknown window shape {shape!r}")


def coinduce_row(sigma_spec: str, W: GroupWindow, eps: Fraction, phi: Fraction,
                 level: Optional[int], radius: Optional[int], n: int) -> Dict[str, Any]:
    """Lemma estimate bound and a product lower bound for one window."""
    dec = coset_slices(W, 0).nonempty()
    width = max(max(S) - min(S) + 1 for S in dec.values())
    N = _scaling_level(width, level)
    sigma = resolve_sigma(sigma_spec, N)
    M = max(abs(i[0]) for i in dec) if radius is None else radius
    flags: List[str] = []
    if any(abs(i[0]) > M for i in dec):
        return {"n": n, "size": len(W), "k": len(dec), "tag": "bounds",
                "flags": "truncation"}
    total = sum(len(S) for S in dec.values())
    h_lo, h_hi, comps = [], [], []
    delta = eps ** 4
    support = 1
    for (i,), S in dec.items():
        lo = min(S)
        shifted = tuple(sorted(s - lo for s in S))
        labels = pattern_law_exact(sigma, shifted, N)
        support *= len(distribution_from_law(labels)) if len(S) <= 6 else 1 << 64
        law = sizes_law(labels)
        b = mixture_bounds(law, 4 * eps)
        h_lo.append(math.log2(max(b.lower_blocks, 1)))
        h_hi.append(None if b.upper_blocks is None else math.log2(max(b.upper_blocks, 1)))
        r = delta * total / len(S)
        comps.append(mixture_bounds(law, r).max_block_mass if r <= 1 else Fraction(1))
    k = len(dec)
    scale = float(eps ** 3 / phi)
    prod_hi = None
    if support <= 64:
        # small product: exact component entropies and exact product entropy
        fam, _ = decompose_average(CoinducedSystem(sigma, N, M), W, eps, phi)
        if all(b is not None for b in fam.blocks_4eps):
            h_lo = h_hi = [math.log2(max(b, 1)) for b in fam.blocks_4eps]
            rep = verify_lemma_estimate(fam, "exact")
            prod_hi = math.log2(max(rep.detail["blocks"], 1))
    bound_lo = scale * sum(h_lo) - k - 1
    bound_hi = None if None in h_hi else scale * sum(h_hi) - k - 1
    mass = Fraction(1)
    for m in comps:
        mass *= m
    prod_lo = math.log2(int((1 - delta) // mass) + 1) if prod_hi is None else prod_hi
    tag = "exact" if bound_hi == bound_lo and prod_hi is not None else "bounds"
    return {"n": n, "size": len(W), "k": k, "sum_s": total,
            "h4eps_lower": _num(sum(h_lo)), "h4eps_upper": _num(None if bound_hi is None else sum(h_hi)),
            "bound_lower": _num(bound_lo), "bound_upper": _num(bound_hi),
            "bound_per_size": _num(bound_lo / len(W)),
            "predicted_per_size": _num(scale * sum(h_lo) / total),
            "product_lower": _num(prod_lo), "product_upper": _num(prod_hi),
            "tag": tag, "flags": ";".join(flags)}


def coinduce_table(cfg: ExperimentConfig) -> TrendReport:
    eps = cfg.eps[0]
    if not eps < Fraction(1, 4):
        raise ConfigError("coinduce-table needs epsilon < 1/4")
    rows = [coinduce_row(cfg.sigma, _window_for(cfg.shape, n), eps, cfg.phi, cfg.level,
                         cfg.radius, n) for n in cfg.n]
    return TrendReport(COINDUCE_COLUMNS, rows, {"epsilon": fraction_str(eps),
                                                "phi": fraction_str(cfg.phi),
                                                "shape": cfg.shape})


ORBIT_COLUMNS = ("step", "o", "bit", "colors", "tag")


def adic_orbit(sigma_spec: str, level: int, seed: int, start: int = 0,
               steps: int = 16) -> TrendReport:
    sigma = resolve_sigma(sigma_spec, level)
    x = AdicPathPrefix.at(sample_vertex(sigma, level, seed), start)
    rows = []
    for t in range(steps + 1):
        rows.append({"step": t, "o": x.o, "bit": x.current_bit(),
                     "colors": "".join(map(str, x.colors)), "tag": "exact"})
        if t == steps:
            break
        y = adic_step(x)
        if isinstance(y, OverflowSignal):
            break
        x = y
    return TrendReport(ORBIT_COLUMNS, rows, {"overflowed": len(rows) < steps + 1})


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

@dataclass
class SuiteResult:
    suite: str
    seed: int
    checked: int
    failures: List[Dict[str, Any]]
    undecided: int = 0
    seconds: float = 0.0
    notes: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        body = {"suite": self.suite, "seed": self.seed, "checked": self.checked,
                "passed": self.passed, "undecided": self.undecided,
                "failures": self.failures, "notes": self.notes}
        return json.dumps(body, indent=1, sort_keys=True) + "\n"


def _shrink_atoms(space: SemimetricSpace, fails: Callable[[SemimetricSpace], bool]) -> SemimetricSpace:
    """Drop atoms (renormalizing masses) while the instance still fails."""
    changed = True
    while changed and space.n > 1:
        changed = False
        for a in range(space.n):
            keep = [i for i in range(space.n) if i != a]
            total = sum(space.mass[i] for i in keep)
            rho = Semimetric(space.rho.num[np.ix_(keep, keep)], space.rho.den)
            smaller = SemimetricSpace([space.atoms[i] for i in keep],
                                      [space.mass[i] / total for i in keep], rho)
            try:
                still = fails(smaller)
            except ValueError:
                still = False
            if still:
                space, changed = smaller, True
                break
    return space


def _partition_on(space: SemimetricSpace, labels: Sequence[int]) -> Partition:
    return Partition.from_labels(space, labels)


def suite_partitions(seed: int, count: Optional[int] = None,
                     parts: Sequence[int] = (1, 2)) -> SuiteResult:
    """Lemma parts 1 and 2 on random instances (500 + 200 by default)."""
    rng = np.random.default_rng(seed)
    n1 = (500 if count is None else count) if 1 in parts else 0
    n2 = (200 if count is None else max(1, (2 * count) // 5)) if 2 in parts else 0
    failures, undecided = [], 0
    for _ in range(n1):
        n = int(rng.integers(1, 13))
        space = random_space(rng, n)
        labels = random_labels(rng, n, int(rng.integers(1, 5)))
        eps = random_eps(rng, below=Fraction(1))
        rep = check_lemma_partitions_1(_partition_on(space, labels), eps)
        if rep.holds is None:
            undecided += 1
        elif rep.holds is False:
            lab = dict(zip(space.atoms, labels))
            small = _shrink_atoms(space, lambda sp: check_lemma_partitions_1(
                _partition_on(sp, [lab[a] for a in sp.atoms]), eps).holds is False)
            failures.append({"check": "partitions-1", "epsilon": fraction_str(eps),
                             "space": format_space(small),
                             "labels": [lab[a] for a in small.atoms]})
    for _ in range(n2):
        n = int(rng.integers(2, 65))
        space = SemimetricSpace(range(n), random_masses(rng, n), Semimetric.zero(n))
        k = int(rng.integers(1, 6))
        m = int(rng.integers(2, 5))
        fam = [random_labels(rng, n, m) for _ in range(k)]
        eps = random_eps(rng, below=Fraction(1, 2))
        rep = check_lemma_partitions_2([_partition_on(space, l) for l in fam], eps, m=m)
        if rep.holds is None:
            undecided += 1
        elif rep.holds is False:
            failures.append({"check": "partitions-2", "epsilon": fraction_str(eps), "m": m,
                             "masses": [fraction_str(x) for x in space.mass],
                             "labels": fam})
    return SuiteResult("partitions", seed, n1 + n2, failures, undecided)


def random_averaging_instance(rng: np.random.Generator):
    """k <= 5 cut semimetrics (m <= 4 blocks, <= 64 atoms) or, half of the
    time, k <= 5 random metrics on <= 10 atoms.  Every H_ε(ρ_i) > 0."""
    while True:
        eps = random_eps(rng, below=Fraction(1, 2))
        k = int(rng.integers(1, 6))
        if rng.random() < 0.5:
            n = int(rng.integers(2, 65))
            space = SemimetricSpace(range(n), random_masses(rng, n), Semimetric.zero(n))
            rhos = [cut_semimetric(_partition_on(space, random_labels(rng, n, int(rng.integers(2, 5)))))
                    for _ in range(k)]
        else:
            n = int(rng.integers(2, 11))
            space = random_space(rng, n)
            rhos = [random_metric(rng, n) for _ in range(k)]
        try:
            for r in rhos:
                if eps_entropy_exact(space.with_semimetric(r), eps).blocks <= 1:
                    raise ValueError
        except ValueError:
            continue
        return space, rhos, eps


def suite_upper_bound(seed: int, count: Optional[int] = None) -> SuiteResult:
    """The averaging lemma H_{2√ε}(avg ρ_i) <= 2 Σ H_ε(ρ_i) (200 by default)."""
    rng = np.random.default_rng(seed)
    count = 200 if count is None else count
    failures, undecided = [], 0
    for _ in range(count):
        space, rhos, eps = random_averaging_instance(rng)
        rep = check_lemma_averaging(space, rhos, eps)
        if rep.holds is None:
            undecided += 1
        elif rep.holds is False:
            failures.append({"check": "averaging", "epsilon": fraction_str(eps),
                             "masses": [fraction_str(x) for x in space.mass],
                             "semimetrics": [[[fraction_str(r[i, j]) for j in range(space.n)]
                                              for i in range(space.n)] for r in rhos]})
    return SuiteResult("upper-bound", seed, count, failures, undecided)


def random_weighted_family(rng: np.random.Generator, k: int, max_atoms: int = 4,
                           phi: Fraction = Fraction(2)) -> WeightedFamily:
    """Random components with weights chosen inside the hypothesis window
    log2 b_i < s_i < φ log2 b_i (b_i the 4ε block count)."""
    while True:
        eps = random_eps(rng, pool=(Fraction(1, 5), Fraction(1, 6), Fraction(1, 8),
                                     Fraction(1, 10), Fraction(1, 12)))
        spaces = [random_space(rng, int(rng.integers(2, max_atoms + 1))) for _ in range(k)]
        weights = []
        for sp in spaces:
            b = eps_entropy_exact(sp, 4 * eps).blocks
            if b < 2:
                break
            h = math.log2(b)
            t = float(rng.uniform(0.15, 0.85))
            weights.append(Fraction(h * (1 + t * (float(phi) - 1))).limit_denominator(64))
        if len(weights) < k:
            continue
        try:
            return WeightedFamily(spaces, weights, phi, eps)
        except HypothesisError:
            continue


def suite_estimate(seed: int, count: Optional[int] = None) -> SuiteResult:
    """Lemma estimate: 100 exact families (k <= 3) and 30 sampled (k <= 8)."""
    rng = np.random.default_rng(seed)
    n_exact = 100 if count is None else count
    n_sampled = 30 if count is None else max(1, (3 * count) // 10)
    failures, undecided = [], 0
    for mode, total, kmax in (("exact", n_exact, 3), ("sampled", n_sampled, 8)):
        for _ in range(total):
            k = int(rng.integers(1, kmax + 1))
            fam = random_weighted_family(rng, k)
            rep = verify_lemma_estimate(fam, mode)
            if rep.holds is None:
                undecided += 1
            elif rep.holds is False:
                failures.append({"check": f"estimate-{mode}", "epsilon": fraction_str(fam.epsilon),
                                 "phi": fraction_str(fam.phi),
                                 "weights": [fraction_str(s) for s in fam.weights],
                                 "components": [format_space(sp) for sp in fam.spaces]})
    return SuiteResult("estimate", seed, n_exact + n_sampled, failures, undecided)


def staircase_family(rng: np.random.Generator, sizes: Sequence[int] = (4, 6, 8, 12)) -> List[GroupWindow]:
    """A staircase window family in ℤ²: rows of growing length with random
    steps, plus occasional sparse rows that the reduction should drop."""
    step = int(rng.integers(0, 3))
    drift = int(rng.integers(0, 3))
    out = []
    for n in sizes:
        pts = set()
        for b in range(n):
            start = drift * b
            for a in range(start, start + n + step * b):
                pts.add((a, b))
        if rng.random() < 0.7:
            b = n + int(rng.integers(0, 3))
            cols = rng.choice(4 * n, size=max(1, n // 3), replace=False)
            for a in cols:
                pts.add((int(a) * 2, b))
        out.append(GroupWindow.from_points(sorted(pts), 2))
    return out


def suite_folner(seed: int, count: Optional[int] = None) -> SuiteResult:
    """Reduction certificates on staircase families (20 by default)."""
    rng = np.random.default_rng(seed)
    count = 20 if count is None else count
    failures, checked, removed = [], 0, 0
    for f in range(count):
        for W in staircase_family(rng):
            res = reduce_window(W)
            checked += 1
            removed += res.removed
            ok = res.bound_holds is True and check_certificate(res)
            if not ok:
                failures.append({"check": "folner", "family": f, "window": W.to_text(),
                                 "result": res.to_json()})
    return SuiteResult("folner", seed, checked, failures, notes={"removed_points": removed})


def _enumerated_law(words: np.ndarray, S: Sequence[int], k: int) -> Dict[str, Fraction]:
    cols = words[:, [k + j for j in S]]
    codes = cols @ (1 << np.arange(len(S)))
    counts = np.bincount(codes, minlength=1 << len(S))
    total = len(words)
    out = {}
    for code, c in enumerate(counts):
        if c:
            out["".join(str((code >> i) & 1) for i in range(len(S)))] = Fraction(int(c), total)
    return out


def suite_window_oracle(seed: int = 0, count: Optional[int] = None, level: int = 4,
                        max_size: int = 4) -> SuiteResult:
    """Recursion vs enumeration of V_N^σ for every σ of length N, every
    window S ⊂ [0, 2^N) with |S| <= max_size and every offset k with
    k + max(S) < 2^N: total variation exactly 0.  The offset-averaged law is
    checked against the averaged enumeration as well."""
    failures, checked = [], 0
    length = 1 << level
    windows = [S for r in range(1, max_size + 1) for S in combinations(range(length), r)]
    for code in range(1 << level):
        sigma = SigmaSequence([(code >> i) & 1 for i in range(level)])
        words = np.array(list(enumerate_level_set(sigma, level)), dtype=np.int64)
        for S in windows:
            acc: Dict[str, Fraction] = {}
            count_k = length - (1 << window_exponent(S))
            for k in range(0, length - S[-1]):
                want = _enumerated_law(words, S, k)
                got = window_distribution_k(sigma, S, level, k).probabilities
                checked += 1
                if got != want:
                    failures.append({"check": "window-k", "sigma": str(sigma), "window": list(S),
                                     "k": k})
                if k < count_k:
                    for w, p in want.items():
                        acc[w] = acc.get(w, Fraction(0)) + p / count_k
            if count_k > 0:
                avg = window_distribution_exact(sigma, S, level).probabilities
                checked += 1
                if avg != acc:
                    failures.append({"check": "window-average", "sigma": str(sigma),
                                     "window": list(S)})
    return SuiteResult("window-oracle", seed, checked, failures)


def suite_adic(seed: int, count: Optional[int] = None, max_level: int = 10) -> SuiteResult:
    """For N <= 10: T is a bijection from the non-overflow paths onto
    {𝔬 > 0}, preserves μ^σ_N there, raises 𝔬 by one and keeps the vertex;
    and the orbit reads consecutive bits of the terminal word."""
    rng = np.random.default_rng(seed)
    failures, checked = [], 0
    sigmas = ["ones", "zeros", "alternating"] + ["".join(map(str, rng.integers(0, 2, max_level)))
                                                  for _ in range(2 if count is None else count)]
    for spec in sigmas:
        for N in range(1, max_level + 1):
            sigma = resolve_sigma(spec, N)
            v = sample_vertex(sigma, N, int(rng.integers(0, 2**31)))
            size = 1 << N
            image = set()
            mass_in = mass_out = Fraction(0)
            ok = True
            for o in range(size):
                x = AdicPathPrefix.at(v, o)
                y = adic_step(x)
                if isinstance(y, OverflowSignal):
                    ok &= o == size - 1
                    continue
                ok &= y.o == o + 1 and y.vertex is v and y.current_bit() == v.bit(o + 1)
                image.add(y.colors)
                mass_in += path_mass(sigma, N)
                mass_out += path_mass(sigma, N)
            target = {tuple((o >> i) & 1 for i in range(N)) for o in range(1, size)}
            ok &= image == target and len(image) == size - 1
            # mass of the non-overflow event equals the mass of {𝔬 > 0}
            ok &= mass_in == mass_out == Fraction(size - 1, size) / (1 << level_set_size(sigma, N))
            checked += 1
            if not ok:
                failures.append({"check": "adic", "sigma": str(sigma), "level": N})
    return SuiteResult("adic", seed, checked, failures)


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "partitions": suite_partitions,
    "upper-bound": suite_upper_bound,
    "estimate": suite_estimate,
    "folner": suite_folner,
    "window-oracle": suite_window_oracle,
    "adic": suite_adic,
}


def run_suite(name: str, seed: int, count: Optional[int] = None) -> SuiteResult:
    if name not in SUITES:
        raise ConfigError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    t0 = time.perf_counter()
    res = SUITES[name](seed, count)
    res.seconds = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# coinduction identity checks
# ---------------------------------------------------------------------------

def check_decomposition(seed: int, pairs: int = 1000, windows: int = 10,
                        max_n: int = 6) -> Tuple[int, int]:
    """Direct averaged distance vs the slice-weighted formula on random
    point pairs over random windows in [0, n)²; returns (checked, mismatches)."""
    rng = np.random.default_rng(seed)
    sigma = SigmaSequence.alternating(8)
    sys = CoinducedSystem(sigma, 8, 3 * max_n)
    checked = bad = 0
    per = pairs // windows
    for w in range(windows):
        n = int(rng.integers(1, max_n + 1))
        pts = [(a, b) for a in range(n) for b in range(n) if rng.random() < 0.7] or [(0, 0)]
        W = GroupWindow.from_points(pts, 2)
        for _ in range(per):
            x = sys.sample_point(int(rng.integers(0, 2**31)), -2 * max_n, 2 * max_n,
                                 positions=_positions(rng, 4 * max_n + 1, sys.level, max_n))
            y = sys.sample_point(int(rng.integers(0, 2**31)), -2 * max_n, 2 * max_n,
                                 positions=_positions(rng, 4 * max_n + 1, sys.level, max_n))
            checked += 1
            if averaged_distance(sys, W, x, y) != weighted_slice_distance(W, x, y):
                bad += 1
    return checked, bad


def _positions(rng, count: int, level: int, margin: int) -> List[int]:
    return [int(p) for p in rng.integers(0, (1 << level) - margin, size=count)]


def check_composition(seed: int, trials: int = 500, box: int = 3) -> Tuple[int, int]:
    """apply(g2, apply(g1, x)) = apply(g2 g1, x) for random g1, g2 in a box.

    Positions are drawn away from the ends of the truncated paths, so both
    sides are always defined."""
    rng = np.random.default_rng(seed)
    level = 8
    sys = CoinducedSystem(SigmaSequence.alternating(level), level, 4 * box)
    bad = 0
    for _ in range(trials):
        g1 = tuple(int(c) for c in rng.integers(-box, box + 1, size=2))
        g2 = tuple(int(c) for c in rng.integers(-box, box + 1, size=2))
        pos = [int(p) for p in rng.integers(2 * box, (1 << level) - 2 * box, size=2 * box + 1)]
        x = sys.sample_point(int(rng.integers(0, 2**31)), -box, box, positions=pos)
        b = coinduced_apply(sys, g2, coinduced_apply(sys, g1, x))
        c = coinduced_apply(sys, compose(g2, g1), x)
        same = b.lo == c.lo and all(p.vertex is q.vertex and p.colors == q.colors
                                    for p, q in zip(b.coords, c.coords))
        bad += not same
    return trials, bad
