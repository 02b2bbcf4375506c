"""The distance catalog: semiring, norms, expansion, and scaling per metric.

Fifteen metrics are supported. Nine run in a single engine pass over a
dot-style product and finish with an element-wise expansion over row norms:
correlation, cosine, dice, dot, euclidean, hellinger, jaccard, kl, russelrao.
Six use a non-annihilating product with identity 0 and need both passes:
canberra, chebyshev, hamming, jensenshannon, manhattan, minkowski. Chebyshev
reduces with max; every other two-pass metric reduces with +.

Dice, jaccard, russelrao, and hamming carry set semantics: their count-based
definitions are exact on binary data and merely a generalization elsewhere.
"""

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import semiring as sr
from .engine import (allocate_output, pairwise_spmv_pass1, pairwise_spmv_pass2,
                     resolve_strategy, WorkspaceReport)
from .errors import DimensionMismatch, DomainError, MissingParam, UnknownMetric
from .semiring import Semiring
from .sparse import NormKind, row_norms, row_signed_sums

NEGATIVE_RADICAND_TOLERANCE = 1e-9

KL_SATURATION = 1e308

METRIC_NAMES = (
    "correlation", "cosine", "dice", "dot", "euclidean", "hellinger",
    "jaccard", "kl", "russelrao",
    "canberra", "chebyshev", "hamming", "jensenshannon", "manhattan", "minkowski",
)

BINARY_PREFERRED = frozenset({"dice", "jaccard", "russelrao", "hamming"})


@dataclass(frozen=True)
class MetricSpec:
    """One catalog row: how to turn engine output into a distance."""

    name: str
    semiring: Semiring
    passes: int
    norms_needed: tuple
    expansion: Optional[Callable] = None   # (dots, stats_a, stats_b, k) -> matrix
    post_scale: Optional[Callable] = None  # (matrix, k) -> matrix
    value_transform: Optional[Callable] = None
    requires_nonnegative: bool = False
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class SideStats:
    """Per-row reductions one side of the computation may need."""

    l0: Optional[np.ndarray] = None
    l1: Optional[np.ndarray] = None
    l2: Optional[np.ndarray] = None
    l2sq: Optional[np.ndarray] = None
    signed_sum: Optional[np.ndarray] = None

    @classmethod
    def from_norms(cls, norms, signed_sum=None):
        """Build from NormVector instances; L2 and its square derive each other."""
        fields = {"signed_sum": None if signed_sum is None
                  else np.asarray(signed_sum, dtype=np.float64)}
        for nv in norms:
            fields[NormKind(nv.kind).value.replace("-", "_")] = np.asarray(
                nv.values, dtype=np.float64)
        if "l2" in fields and "l2sq" not in fields:
            fields["l2sq"] = fields["l2"] ** 2
        if "l2sq" in fields and "l2" not in fields:
            fields["l2"] = np.sqrt(fields["l2sq"])
        return cls(**fields)

    def require(self, attr, metric):
        val = getattr(self, attr)
        if val is None:
            raise ValueError(f"{metric} expansion needs per-row '{attr}' statistics")
        return val

    def sums(self, metric):
        # Signed sums; the L1 norm coincides with them on non-negative data
        # and serves as the fallback when only norm vectors were supplied.
        if self.signed_sum is not None:
            return self.signed_sum
        return self.require("l1", metric)


def clamp_radicand(x, what):
    """Zero out tiny negative rounding residue under square roots; anything
    below the tolerance is a genuine domain violation."""
    x = np.asarray(x, dtype=np.float64)
    if (x < -NEGATIVE_RADICAND_TOLERANCE).any():
        raise DomainError(f"negative {what} beyond rounding tolerance")
    return np.where(x < 0, 0.0, x)


def _identity_expansion(dots, sa, sb, k):
    return dots


def _euclidean_expansion(dots, sa, sb, k):
    qa = sa.require("l2sq", "euclidean")[:, None]
    qb = sb.require("l2sq", "euclidean")[None, :]
    return clamp_radicand(qa - 2.0 * dots + qb, "squared euclidean distance")


def _cosine_expansion(dots, sa, sb, k):
    na = sa.require("l2", "cosine")[:, None]
    nb = sb.require("l2", "cosine")[None, :]
    denom = na * nb
    base = 1.0 - dots / np.where(denom > 0, denom, 1.0)
    both_empty = (na == 0) & (nb == 0)
    return np.where(denom > 0, base, np.where(both_empty, 0.0, 1.0))


def _correlation_expansion(dots, sa, sb, k):
    ssa = sa.sums("correlation")[:, None]
    ssb = sb.sums("correlation")[None, :]
    qa = sa.require("l2sq", "correlation")[:, None]
    qb = sb.require("l2sq", "correlation")[None, :]
    fa = clamp_radicand(k * qa - ssa ** 2, "correlation variance")
    fb = clamp_radicand(k * qb - ssb ** 2, "correlation variance")
    denom = np.sqrt(fa * fb)
    num = k * dots - ssa * ssb
    base = 1.0 - num / np.where(denom > 0, denom, 1.0)
    both_empty = (qa == 0) & (qb == 0)
    return np.where(denom > 0, base, np.where(both_empty, 0.0, 1.0))


def _dice_expansion(dots, sa, sb, k):
    ca = sa.require("l0", "dice")[:, None]
    cb = sb.require("l0", "dice")[None, :]
    denom = ca + cb
    base = 1.0 - 2.0 * dots / np.where(denom > 0, denom, 1.0)
    return np.where(denom > 0, base, 0.0)


def _jaccard_expansion(dots, sa, sb, k):
    ca = sa.require("l0", "jaccard")[:, None]
    cb = sb.require("l0", "jaccard")[None, :]
    denom = ca + cb - dots
    base = 1.0 - dots / np.where(denom > 0, denom, 1.0)
    both_empty = (ca == 0) & (cb == 0)
    return np.where(denom > 0, base, np.where(both_empty, 0.0, 1.0))


def _russelrao_expansion(dots, sa, sb, k):
    if k == 0:
        return np.zeros_like(dots)
    return (k - dots) / k


def _hellinger_expansion(dots, sa, sb, k):
    return 1.0 - np.sqrt(clamp_radicand(dots, "hellinger affinity"))


def _sqrt_post(x, k):
    return np.sqrt(x)


def _root_post(p):
    inv = 1.0 / float(p)

    def _root(x, k):
        return x ** inv

    return _root


def _mean_post(x, k):
    return x / k if k else np.zeros_like(x)


def _js_post(x, k):
    return np.sqrt(clamp_radicand(x, "jensen-shannon divergence") / 2.0)


def _build_correlation(p, strict):
    return MetricSpec("correlation", sr.dot_product(), 1,
                      (NormKind.L1, NormKind.L2_SQUARED), _correlation_expansion)


def _build_cosine(p, strict):
    return MetricSpec("cosine", sr.dot_product(), 1, (NormKind.L2,), _cosine_expansion)


def _build_dice(p, strict):
    return MetricSpec("dice", sr.dot_product(), 1, (NormKind.L0,), _dice_expansion)


def _build_dot(p, strict):
    return MetricSpec("dot", sr.dot_product(), 1, (), _identity_expansion)


def _build_euclidean(p, strict):
    return MetricSpec("euclidean", sr.dot_product(), 1, (NormKind.L2_SQUARED,),
                      _euclidean_expansion, post_scale=_sqrt_post)


def _build_hellinger(p, strict):
    return MetricSpec("hellinger", sr.dot_product(), 1, (), _hellinger_expansion,
                      value_transform=np.sqrt, requires_nonnegative=True)


def _build_jaccard(p, strict):
    return MetricSpec("jaccard", sr.dot_product(), 1, (NormKind.L0,), _jaccard_expansion)


def _build_kl(p, strict):
    return MetricSpec("kl", sr.kl_divergence_term(), 1, (), _identity_expansion,
                      requires_nonnegative=True, params={"strict": bool(strict)})


def _build_russelrao(p, strict):
    return MetricSpec("russelrao", sr.dot_product(), 1, (), _russelrao_expansion)


def _build_canberra(p, strict):
    return MetricSpec("canberra", sr.canberra_ratio(), 2, ())


def _build_chebyshev(p, strict):
    return MetricSpec("chebyshev", sr.max_absolute_difference(), 2, ())


def _build_hamming(p, strict):
    return MetricSpec("hamming", sr.mismatch_indicator(), 2, (), post_scale=_mean_post)


def _build_jensenshannon(p, strict):
    return MetricSpec("jensenshannon", sr.jensen_shannon_term(), 2, (),
                      post_scale=_js_post, requires_nonnegative=True)


def _build_manhattan(p, strict):
    return MetricSpec("manhattan", sr.absolute_difference(), 2, ())


def _build_minkowski(p, strict):
    if p is None:
        raise MissingParam("minkowski requires the order parameter p")
    p = float(p)
    if not np.isfinite(p) or p < 1.0:
        raise DomainError("minkowski requires finite p >= 1")
    return MetricSpec("minkowski", sr.absolute_difference_power(p), 2, (),
                      post_scale=_root_post(p), params={"p": p})


_BUILDERS = {
    "correlation": _build_correlation,
    "cosine": _build_cosine,
    "dice": _build_dice,
    "dot": _build_dot,
    "euclidean": _build_euclidean,
    "hellinger": _build_hellinger,
    "jaccard": _build_jaccard,
    "kl": _build_kl,
    "russelrao": _build_russelrao,
    "canberra": _build_canberra,
    "chebyshev": _build_chebyshev,
    "hamming": _build_hamming,
    "jensenshannon": _build_jensenshannon,
    "manhattan": _build_manhattan,
    "minkowski": _build_minkowski,
}


def metric_registry(name, *, p=None, strict=True):
    """Look up a metric by its catalog name.

    ``p`` is required for minkowski; ``strict`` selects whether kl raises on
    pairs whose left support is not covered by the right row (the default) or
    saturates those cells instead.
    """
    builder = _BUILDERS.get(str(name).lower())
    if builder is None:
        raise UnknownMetric(f"unknown metric '{name}'; supported: "
                            + ", ".join(METRIC_NAMES))
    return builder(p, strict)


def expansion_apply(dots, norms_a, norms_b, spec, *, n_cols,
                    sums_a=None, sums_b=None):
    """Element-wise expansion plus final scaling over a dot-product matrix.

    ``norms_a``/``norms_b`` are sequences of NormVector; correlation callers
    should also pass signed row sums when the data may be negative.
    """
    dots = np.asarray(dots, dtype=np.float64)
    stats_a = SideStats.from_norms(norms_a, signed_sum=sums_a)
    stats_b = SideStats.from_norms(norms_b, signed_sum=sums_b)
    out = spec.expansion(dots, stats_a, stats_b, n_cols) if spec.expansion else dots
    if spec.post_scale is not None:
        out = spec.post_scale(out, n_cols)
    return out


_MISS_COUNTER = Semiring(
    "miss-count", lambda x, y: np.ones_like(np.asarray(x, dtype=np.float64)),
    0.0, np.add, 0.0, annihilating=False)


def _check_domain(spec, a, b):
    if spec.requires_nonnegative:
        if (a.values < 0).any() or (b.values < 0).any():
            raise DomainError(f"{spec.name} requires non-negative inputs")


def _side_stats(m, spec):
    norms = [row_norms(m, kind) for kind in spec.norms_needed]
    sums = row_signed_sums(m) if spec.name == "correlation" else None
    return SideStats.from_norms(norms, signed_sum=sums)


def pairwise_distances_detail(a, b, spec, strategy=None, workers=None):
    """Distances plus workspace accounting and per-phase wall times."""
    if a.n_cols != b.n_cols:
        raise DimensionMismatch(f"column counts differ: {a.n_cols} vs {b.n_cols}")
    _check_domain(spec, a, b)
    timings = {"norms": 0.0, "pass1": 0.0, "pass2": 0.0, "expansion": 0.0}

    t0 = time.perf_counter()
    stats_a = _side_stats(a, spec)
    stats_b = _side_stats(b, spec) if b is not a else stats_a
    timings["norms"] = time.perf_counter() - t0

    a_eng = a.with_values(spec.value_transform(a.values)) if spec.value_transform else a
    if spec.value_transform and b is a:
        b_eng = a_eng
    elif spec.value_transform:
        b_eng = b.with_values(spec.value_transform(b.values))
    else:
        b_eng = b

    strategy = resolve_strategy(strategy, a_eng, b_eng)
    out = allocate_output(a_eng, b_eng, spec.semiring)
    t0 = time.perf_counter()
    report = pairwise_spmv_pass1(a_eng, b_eng, spec.semiring, strategy, out,
                                 workers=workers)
    timings["pass1"] = time.perf_counter() - t0

    if spec.passes == 2:
        t0 = time.perf_counter()
        report = report.merged(pairwise_spmv_pass2(
            a_eng, b_eng, spec.semiring, strategy, out, workers=workers))
        timings["pass2"] = time.perf_counter() - t0
    elif spec.name == "kl":
        # Complement sweep counting query-support columns the reference row
        # lacks; those pairs diverge. Reported under pass2 time.
        t0 = time.perf_counter()
        misses = allocate_output(a, b, _MISS_COUNTER)
        report = report.merged(pairwise_spmv_pass2(
            a, b, _MISS_COUNTER, strategy, misses, workers=workers))
        uncovered = misses > 0
        if uncovered.any():
            if spec.params.get("strict", True):
                raise DomainError(
                    f"kl: {int(uncovered.sum())} row pairs have query support "
                    "not covered by the reference row")
            out = np.where(uncovered, KL_SATURATION, out)
        timings["pass2"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    result = out
    if spec.expansion is not None:
        result = spec.expansion(out, stats_a, stats_b, a.n_cols)
    if spec.post_scale is not None:
        result = spec.post_scale(result, a.n_cols)
    timings["expansion"] = time.perf_counter() - t0
    return np.ascontiguousarray(result, dtype=np.float64), report, timings


def pairwise_distances(a, b, spec, strategy=None, workers=None):
    """Dense m x n matrix of spec's distance between rows of a and rows of b."""
    result, _, _ = pairwise_distances_detail(a, b, spec, strategy, workers)
    return result
