import numpy as np

from detect.params import DetectorResult
from errors import OracleCapExceededError
from system_model.alphabet import ModAlphabet

DEFAULT_ORACLE_CAP = 2 ** 24


def ml_bruteforce(sys, alphabet: ModAlphabet, cap: int = DEFAULT_ORACLE_CAP,
                  chunk: int = 1 << 15) -> DetectorResult:
    """Exhaustive ML search over every PAM vector.

    Candidates are enumerated in lexicographic order of their index vectors
    (first coordinate most significant); the first minimum wins, so ties
    resolve to the lexicographically smallest index vector.
    """
    n = sys.n_dim
    size = alphabet.size
    total = size ** n
    if total > cap:
        raise OracleCapExceededError(
            f"search space {size}^{n} = {total} exceeds the oracle cap {cap}"
        )

    y = np.asarray(sys.y, dtype=float)
    shape = (size,) * n
    best_cost = np.inf
    best_idx = 0
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        digits = np.stack(np.unravel_index(flat, shape), axis=1)
        candidates = alphabet.pam[digits]
        resid = y[None, :] - sys.apply_batch(candidates)
        costs = np.einsum("ij,ij->i", resid, resid)
        j = int(np.argmin(costs))
        if costs[j] < best_cost:
            best_cost = costs[j]
            best_idx = int(flat[j])

    x_hat = alphabet.pam[np.array(np.unravel_index(best_idx, shape))]
    per_candidate = 2 * sys.n_rows * n + 2 * sys.n_rows + 1
    return DetectorResult(
        x_hat=x_hat.astype(float),
        best_cost=sys.cost(x_hat),
        real_ops=total * per_candidate,
    )
