"""A two-slot supermap with coherently controlled slot order.

The body is rank one: a superposition of the two fixed-order wirings,
entangled with a control qubit that rides along both the global input and
the global output.  Filling the slots with unitary conjugations produces
conjugation by ``|0><0| (x) VU + |1><1| (x) UV``, which no single ordering
reproduces, yet every pair of causal fillings still yields a causal
channel.
"""

from __future__ import annotations

import numpy as np

from .process import Process
from .supermap import BipartiteSupermap
from .tensor import System


def quantum_switch(d: int = 2) -> BipartiteSupermap:
    """Both slots carry ``d``-dimensional wires; the global wires are a
    control qubit joined with the target, flattened to one factor of 2d."""
    v = np.zeros((d, d, d, d, 2 * d, 2 * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                # control 0: global input feeds the first slot, first feeds second
                v[i, j, j, k, i, k] += 1.0
                # control 1: the same wires in the other order
                v[k, j, i, k, d + i, d + j] += 1.0
    vec = v.reshape(-1)
    body = Process(
        System((d, d, d, d)),
        System((2 * d, 2 * d)),
        np.outer(vec, vec.conj()),
        cp_flag=True,
    )
    return BipartiteSupermap(body)
