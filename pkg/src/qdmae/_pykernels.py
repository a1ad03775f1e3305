"""Pure-Python/NumPy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` exactly in their contracts. The insertion
kernel reproduces the compiled arithmetic bit for bit; the direction
transform may differ from the compiled one in the last few ulps because the
dot products are summed in a different order.
"""

import numpy as np

BACKEND = "python"


def insert_batch(cells, objectives, valid, alpha, threshold, soft_obj,
                 soft_occ, result_obj, result_occ):
    """Insert a batch of evaluated solutions into a soft/result archive pair.

    Solutions are processed in batch order, so a solution sees the threshold
    left behind by earlier solutions of the same batch. All archive arrays
    are updated in place.

    Returns ``(deltas, accepted, result_improved, result_prev)`` where
    ``result_prev`` holds the previous result-archive objective for improved
    solutions (NaN when the cell was empty or nothing changed).
    """
    size = len(cells)
    deltas = np.full(size, -np.inf)
    accepted = np.zeros(size, dtype=np.uint8)
    improved = np.zeros(size, dtype=np.uint8)
    prev = np.full(size, np.nan)
    keep = 1.0 - alpha
    for i in range(size):
        if not valid[i]:
            continue
        e = int(cells[i])
        f = float(objectives[i])
        t = float(threshold[e])
        deltas[i] = f - t
        if f > t:
            accepted[i] = 1
            threshold[e] = keep * t + alpha * f
            soft_obj[e] = f
            soft_occ[e] = 1
        # an empty result cell pairs with an empty soft cell (t = min_f)
        if not result_occ[e]:
            if not accepted[i]:
                continue
            improved[i] = 1
            result_obj[e] = f
            result_occ[e] = 1
        elif f > result_obj[e]:
            improved[i] = 1
            prev[i] = result_obj[e]
            result_obj[e] = f
    return deltas, accepted, improved, prev


def lm_transform(z, directions, decay, n_active):
    """Apply the first ``n_active`` rank-one transforms to each row of ``z``.

    For every direction ``v_j`` with rate ``c_j`` the row ``d`` becomes
    ``(1 - c_j) d + c_j (v_j . d) v_j``.
    """
    d = np.array(z, dtype=np.float64, copy=True)
    for j in range(n_active):
        v = directions[j]
        c = decay[j]
        proj = d @ v
        d *= 1.0 - c
        d += np.outer(c * proj, v)
    return d
