"""Pure-Python (numpy) versions of the hot loops.

Each function mutates the arrays it is handed, exactly like the compiled
twin in ``_ckernels.pyx``. Node indices are 0-based here; returned head ids
are 1-based.
"""

import numpy as np


def form_clusters(energy, distance, range_):
    """Greedy max-energy election; returns ``(cluster_no, subsink)``.

    Ties go to the lowest index because ``argmax`` returns the first maximum.
    """
    n = len(energy)
    cluster_no = np.zeros(n, dtype=np.int64)
    subsink = []
    cid = 0
    for _ in range(n):
        free = np.flatnonzero(cluster_no == 0)
        if free.size == 0:
            break
        best = int(free[np.argmax(energy[free])])
        cid += 1
        cluster_no[best] = cid
        subsink.append(best + 1)
        cluster_no[(cluster_no == 0) & (distance[best] <= range_)] = cid
    return cluster_no, subsink


def charge_heads(energy, heads, cost):
    """Returns ``(dead, dissipated)``; no decrement happens if any head is dead."""
    if (energy[heads] <= 0).any():
        return True, 0
    energy[heads] -= cost
    return False, int(cost) * len(heads)


def tick(energy, is_head, active, active_cost, idle_cost):
    """One tick of member costs; returns ``(dead, dissipated, n_active)``."""
    if (energy <= 0).any():
        return True, 0, 0
    members = is_head == 0
    hot = members & (active != 0)
    cold = members & (active == 0)
    energy[hot] -= active_cost
    energy[cold] -= idle_cost
    active[hot] = 0
    n_active = int(hot.sum())
    return False, n_active * int(active_cost) + int(cold.sum()) * int(idle_cost), n_active
