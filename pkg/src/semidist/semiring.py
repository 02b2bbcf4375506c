"""Product/reduce monoid pairs that configure the pairwise engine.

A semiring here is a product monoid applied to aligned column values of two
rows and a reduce monoid folding the products into one scalar per row pair.
``product_op`` must accept numpy arrays elementwise; ``reduce_op`` must be a
binary numpy ufunc (the engine relies on ``reduce``/``reduceat``).

When ``annihilating`` is set, ``product_op(x, 0) == product_op(0, x) == 0``
for every in-domain ``x``, so columns stored on only one side contribute the
reduce identity and a single sweep over the right-hand side's stored columns
yields the complete reduction. Products with identity 0 that do not
annihilate (``product_op(v, 0) == v``) force evaluation over the union of
stored columns, which the engine covers with a second, complement sweep.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Semiring:
    name: str
    product_op: Callable
    product_identity: float
    reduce_op: np.ufunc
    reduce_identity: float
    annihilating: bool

    def __post_init__(self):
        if not hasattr(self.reduce_op, "reduceat"):
            raise TypeError("reduce_op must be a binary numpy ufunc")


def _abs_diff(x, y):
    return np.abs(np.subtract(x, y))


def _canberra_ratio(x, y):
    num = np.abs(np.subtract(x, y))
    den = np.abs(x) + np.abs(y)
    safe = np.where(den > 0, den, 1.0)
    return np.where(den > 0, num / safe, 0.0)


def _mismatch(x, y):
    return np.not_equal(x, y).astype(np.float64)


def _jensen_shannon_term(x, y):
    # x*log(x/mu) + y*log(y/mu) with mu = (x+y)/2 and 0*log(0/mu) == 0.
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    mu = 0.5 * (x + y)
    safe_mu = np.where(mu > 0, mu, 1.0)
    tx = np.where(x > 0, x, 1.0)
    ty = np.where(y > 0, y, 1.0)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        left = np.where(x > 0, x * np.log(tx / safe_mu), 0.0)
        right = np.where(y > 0, y * np.log(ty / safe_mu), 0.0)
    return left + right


def _kl_term(x, y):
    # x*log(x/y) with 0*log(0/y) == 0. Annihilates on the left only; the
    # metric layer rejects (or saturates) pairs where y = 0 while x > 0.
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    safe_x = np.where(x > 0, x, 1.0)
    safe_y = np.where(y > 0, y, 1.0)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        return np.where(x > 0, x * np.log(safe_x / safe_y), 0.0)


def dot_product():
    """Ordinary multiply/add; columns absent from either side contribute 0."""
    return Semiring("dot", np.multiply, 1.0, np.add, 0.0, annihilating=True)


def tropical_min_plus():
    """Min-reduce over sums; absent columns count as value 0 on their side."""
    return Semiring("min-plus", np.add, 0.0, np.minimum, np.inf, annihilating=False)


def absolute_difference():
    return Semiring("abs-diff", _abs_diff, 0.0, np.add, 0.0, annihilating=False)


def absolute_difference_power(p):
    p = float(p)

    def _abs_diff_pow(x, y):
        return np.abs(np.subtract(x, y)) ** p

    return Semiring(f"abs-diff-pow-{p:g}", _abs_diff_pow, 0.0, np.add, 0.0,
                    annihilating=False)


def max_absolute_difference():
    return Semiring("abs-diff-max", _abs_diff, 0.0, np.maximum, 0.0, annihilating=False)


def canberra_ratio():
    return Semiring("canberra-ratio", _canberra_ratio, 0.0, np.add, 0.0,
                    annihilating=False)


def mismatch_indicator():
    return Semiring("mismatch", _mismatch, 0.0, np.add, 0.0, annihilating=False)


def jensen_shannon_term():
    return Semiring("jensen-shannon-term", _jensen_shannon_term, 0.0, np.add, 0.0,
                    annihilating=False)


def kl_divergence_term():
    return Semiring("kl-term", _kl_term, 1.0, np.add, 0.0, annihilating=True)
