"""Coordinate-wise Gibbs machinery over a cached residual.

Every detector works on a "linear system" object exposing ``y``, ``sigma2``,
``n_obs``, ``n_rows``, ``n_dim``, ``column(i)``, ``apply`` and ``cost``. Both
the flat RealSystem and the frequency-domain block system satisfy it, and
both go through exactly the same arithmetic here.
"""

from typing import Optional

import numpy as np

from detect.params import OpCounter
from system_model.alphabet import ModAlphabet

# a conditional pmf is charged as one residual-norm evaluation per candidate
# symbol, 2 ops per observation row each
PMF_OPS_PER_ROW_AND_CANDIDATE = 2


def column_norms(sys, ops: Optional[OpCounter] = None) -> np.ndarray:
    norms = np.empty(sys.n_dim)
    for i in range(sys.n_dim):
        h = sys.column(i)
        norms[i] = h @ h
    if ops is not None:
        ops.add(2 * sys.n_rows * sys.n_dim)
    return norms


def residual_of(sys, x: np.ndarray, ops: Optional[OpCounter] = None) -> np.ndarray:
    r = np.array(sys.y, dtype=float, copy=True)
    for i in range(sys.n_dim):
        if x[i] != 0.0:
            r -= x[i] * sys.column(i)
    if ops is not None:
        ops.add(2 * sys.n_rows * sys.n_dim)
    return r


def _candidate_offsets(sys, alphabet, x, i, residual, norm_i):
    """Cost change of setting x_i to each PAM level, relative to the current cost."""
    h = sys.column(i)
    corr = h @ residual
    d = alphabet.pam - x[i]
    return d * (d * norm_i - 2.0 * corr)


def _pmf_from_offsets(offsets: np.ndarray, temperature: float) -> np.ndarray:
    if temperature <= 0.0:
        pmf = np.zeros_like(offsets)
        pmf[int(np.argmin(offsets))] = 1.0
        return pmf
    logits = -offsets / temperature
    weights = np.exp(logits - logits.max())
    return weights / weights.sum()


def gibbs_conditional_pmf(
    sys,
    alphabet: ModAlphabet,
    x: np.ndarray,
    i: int,
    alpha: float = 1.0,
    residual: Optional[np.ndarray] = None,
    norms: Optional[np.ndarray] = None,
) -> np.ndarray:
    """p(x_i = a | x_-i) proportional to exp(-||y - Hx(a)||^2 / (alpha^2 sigma2)), over alphabet.pam."""
    if residual is None:
        residual = residual_of(sys, x)
    h = sys.column(i)
    norm_i = norms[i] if norms is not None else h @ h
    offsets = _candidate_offsets(sys, alphabet, x, i, residual, norm_i)
    return _pmf_from_offsets(offsets, alpha * alpha * sys.sigma2)


def draw_index(pmf: np.ndarray, u: float) -> int:
    cdf = np.cumsum(pmf)
    return min(int(np.searchsorted(cdf, u * cdf[-1], side="right")), pmf.size - 1)


class GibbsChain:
    """Current vector plus its residual, updated one coordinate at a time.

    Args:
        sys: linear system (see module docstring)
        alphabet: PAM levels the coordinates live on
        x0: starting vector in the alphabet
        alpha: temperature
        ops: counter charged for every arithmetic step
        norms: column norms, computed here when not supplied
    """

    def __init__(self, sys, alphabet: ModAlphabet, x0: np.ndarray, alpha: float,
                 ops: OpCounter, norms: Optional[np.ndarray] = None):
        self.sys = sys
        self.alphabet = alphabet
        self.temperature = alpha * alpha * sys.sigma2
        self.ops = ops
        self.x = np.array(x0, dtype=float, copy=True)
        self.norms = column_norms(sys, ops) if norms is None else norms
        self.residual = residual_of(sys, self.x, ops)
        y = np.asarray(sys.y, dtype=float)
        # costs closer than this are treated as equal
        self.tol = 1e-10 * (float(y @ y) + sys.sigma2)
        self.random_updates = np.zeros(sys.n_dim, dtype=np.int64)

    def refresh(self) -> None:
        self.residual = residual_of(self.sys, self.x, self.ops)

    def cost(self) -> float:
        self.ops.add(2 * self.sys.n_rows)
        return float(self.residual @ self.residual)

    def _move(self, i: int, level: float) -> None:
        delta = level - self.x[i]
        if delta != 0.0:
            self.residual -= delta * self.sys.column(i)
            self.x[i] = level
            self.ops.add(2 * self.sys.n_rows)

    def gibbs_update(self, i: int, rng: np.random.Generator) -> None:
        offsets = _candidate_offsets(self.sys, self.alphabet, self.x, i, self.residual, self.norms[i])
        pmf = _pmf_from_offsets(offsets, self.temperature)
        self.ops.add(PMF_OPS_PER_ROW_AND_CANDIDATE * self.sys.n_rows * pmf.size)
        self._move(i, self.alphabet.pam[draw_index(pmf, rng.random())])

    def random_update(self, i: int, rng: np.random.Generator, neighbors_only: bool = False) -> None:
        """Sample x_i from a freshly drawn uniform-random pmf."""
        pam = self.alphabet.pam
        if neighbors_only:
            cur = int(self.alphabet.index_of(self.x[i]))
            support = pam[max(cur - 1, 0): cur + 2]
        else:
            support = pam
        weights = rng.random(support.size)
        pmf = weights / weights.sum()
        self.ops.add(4 * support.size)
        self.random_updates[i] += 1
        self._move(i, support[draw_index(pmf, rng.random())])
