"""Pairwise tensor-network contraction.

A network is a list of ``(array, labels)`` pairs.  Every label that is not
open appears on exactly two tensors; open labels appear once and survive to
the result, whose axes follow the requested open-label order.  Arrays may be
``complex`` or ``object`` (polynomial entries), both going through
``numpy.tensordot``, or any array type with an ``ops`` adapter (see
:class:`NumpyOps`).
"""

from __future__ import annotations

import random
from typing import Hashable, Sequence

import numpy as np

from .errors import DimensionCapExceeded

DEFAULT_MAX_DIM = 2 ** 14


class NumpyOps:
    def __init__(self, dtype=complex):
        self.dtype = np.dtype(dtype)

    def asarray(self, arr):
        return np.asarray(arr, dtype=self.dtype)

    def tensordot(self, a, b, ia, ib):
        if not (a.ndim or b.ndim):
            return np.asarray(a * b, dtype=self.dtype)
        out = np.tensordot(a, b, axes=(ia, ib))
        return out if out.dtype == self.dtype else out.astype(self.dtype)

    def transpose(self, a, perm):
        return np.transpose(a, perm)

    def ones(self):
        return np.ones((), dtype=self.dtype)


def contract_network(tensors: Sequence[tuple], open_labels: Sequence[Hashable],
                     max_dim: int = DEFAULT_MAX_DIM, dtype=complex,
                     order: str | int = "greedy", ops=None):
    """Contract ``tensors`` down to one array indexed by ``open_labels``.

    ``order`` is ``"greedy"`` (pick the pair whose result has fewest entries,
    ties broken by position) or an integer seed for a random pairing order,
    used to check that the result does not depend on the order.
    """
    ops = ops or NumpyOps(dtype)
    rng = random.Random(order) if not isinstance(order, str) else None
    items = []
    for arr, labels in tensors:
        arr = ops.asarray(arr)
        if arr.size > max_dim:
            raise DimensionCapExceeded(f"generator tensor of {arr.size} entries exceeds cap {max_dim}")
        items.append((arr, list(labels)))
    if not items:
        return ops.ones()

    alive = dict(enumerate(items))
    next_id = len(items)
    where: dict = {}
    for k, (_, labels) in alive.items():
        for lbl in labels:
            where.setdefault(lbl, []).append(k)

    while len(alive) > 1:
        pairs = set()
        for lbl, ks in where.items():
            if len(ks) == 2 and ks[0] != ks[1]:
                pairs.add((min(ks), max(ks)))
        if pairs:
            if rng is not None:
                a, b = rng.choice(sorted(pairs))
            else:
                def cost(p):
                    la, lb = alive[p[0]][1], alive[p[1]][1]
                    shared = len(set(la) & set(lb))
                    return (len(la) + len(lb) - 2 * shared, p)
                a, b = min(pairs, key=cost)
        else:
            # disconnected components: outer product of the two smallest
            ks = sorted(alive, key=lambda k: (alive[k][0].ndim, k))
            a, b = sorted(ks[:2])
        (xa, la), (xb, lb) = alive.pop(a), alive.pop(b)
        shared = [lbl for lbl in la if lbl in lb]
        rank = len(la) + len(lb) - 2 * len(shared)
        if 2 ** rank > max_dim:
            raise DimensionCapExceeded(
                f"intermediate tensor of 2^{rank} entries exceeds cap {max_dim}")
        ia = [la.index(lbl) for lbl in shared]
        ib = [lb.index(lbl) for lbl in shared]
        out = ops.tensordot(xa, xb, ia, ib)
        labels = [lbl for lbl in la if lbl not in shared] + [lbl for lbl in lb if lbl not in shared]
        for lbl in shared:
            del where[lbl]
        for lbl in labels:
            where[lbl] = [next_id if k in (a, b) else k for k in where[lbl]]
        alive[next_id] = (out, labels)
        next_id += 1

    (arr, labels), = alive.values()
    if sorted(map(repr, labels)) != sorted(map(repr, open_labels)):
        raise ValueError(f"open labels {labels} do not match requested {list(open_labels)}")
    perm = [labels.index(lbl) for lbl in open_labels]
    return ops.transpose(arr, perm) if perm else arr
