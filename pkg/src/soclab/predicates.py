"""Causality, signalling structure, and order-preservation checks.

Every predicate returns a :class:`CausalVerdict` carrying a numeric
residual (Frobenius distance from the constraint set being tested), so
callers can both branch on ``holds`` and report how badly something
fails.  The hole-preservation checks come in two independent flavours: a
closed form on the body's marginals, and an oracle that actually fills
the holes with a spanning family of arguments and checks every output.
Both compute the same residual up to floating point error.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import hypot, prod, sqrt

import numpy as np

from .errors import DimensionError, ReconstructionError
from .process import Process, apply_to_state, compose_par, compose_seq, identity_process
from .supermap import BipartiteSupermap, insert
from .tensor import DEFAULT_EPS, System, UNIT, frobenius_distance, hermitian_basis, kron, partial_trace, permute_subsystems


@dataclass(frozen=True)
class CausalVerdict:
    holds: bool
    residual: float
    witness: np.ndarray | None = None

    def __bool__(self) -> bool:
        return self.holds


def _embed_identity(small: np.ndarray, small_dims: tuple[int, ...], pos: int, d: int) -> np.ndarray:
    """Insert an identity factor of size ``d`` at position ``pos``."""
    raw = kron(np.eye(d, dtype=complex), small)
    n = len(small_dims) + 1
    perm = list(range(1, pos + 1)) + [0] + list(range(pos + 1, n))
    return permute_subsystems(raw, (d,) + tuple(small_dims), perm)


def is_causal(f: Process, eps: float = DEFAULT_EPS) -> CausalVerdict:
    """Trace preservation: discarding the outputs leaves the identity effect.

    For states (no inputs) this is normalization.
    """
    marginal = partial_trace(f.choi, f.factor_dims, keep=tuple(range(f.n_in)))
    witness = marginal - np.eye(f.in_sys.total)
    residual = float(np.linalg.norm(witness))
    return CausalVerdict(residual <= eps, residual, witness)


def is_nonsignalling_b_to_a(f: Process, in_split: int = 1, out_split: int = 1, eps: float = DEFAULT_EPS) -> CausalVerdict:
    """The A-side marginal output cannot depend on the B-side input.

    ``f`` acts on a bipartite system; ``in_split``/``out_split`` count how
    many leading input/output factors belong to side A.
    """
    ai = prod(f.in_sys.dims[:in_split])
    bi = prod(f.in_sys.dims[in_split:])
    ao = prod(f.out_sys.dims[:out_split])
    bo = prod(f.out_sys.dims[out_split:])
    m = partial_trace(f.choi, (ai, bi, ao, bo), keep=(0, 1, 2))
    k = partial_trace(m, (ai, bi, ao), keep=(0, 2)) / bi
    residual = frobenius_distance(m, _embed_identity(k, (ai, ao), 1, bi))
    return CausalVerdict(residual <= eps, residual, None)


def is_nonsignalling_a_to_b(f: Process, in_split: int = 1, out_split: int = 1, eps: float = DEFAULT_EPS) -> CausalVerdict:
    ai = prod(f.in_sys.dims[:in_split])
    bi = prod(f.in_sys.dims[in_split:])
    ao = prod(f.out_sys.dims[:out_split])
    bo = prod(f.out_sys.dims[out_split:])
    m = partial_trace(f.choi, (ai, bi, ao, bo), keep=(0, 1, 3))
    k = partial_trace(m, (ai, bi, bo), keep=(1, 2)) / ai
    residual = frobenius_distance(m, _embed_identity(k, (bi, bo), 0, ai))
    return CausalVerdict(residual <= eps, residual, None)


def is_nonsignalling(f: Process, in_split: int = 1, out_split: int = 1, eps: float = DEFAULT_EPS) -> CausalVerdict:
    """No signalling in either direction; residual combines both checks."""
    va = is_nonsignalling_b_to_a(f, in_split, out_split, eps)
    vb = is_nonsignalling_a_to_b(f, in_split, out_split, eps)
    residual = hypot(va.residual, vb.residual)
    return CausalVerdict(residual <= eps, residual, None)


def make_strongly_nonsignalling(
    psi_a: Process,
    psi_b: Process,
    shared: Process,
    a_mem: int = 1,
    b_mem: int = 1,
) -> Process:
    """Local channels consuming the two halves of one pre-shared state.

    ``psi_a`` takes ``[A1..., memory...]`` (memory factors last), ``psi_b``
    takes ``[memory'..., B1...]`` (memory factors first), and ``shared`` is
    a state on ``memory + memory'``.  The result is a bipartite channel
    ``A1 (x) B1 -> A2 (x) B2``; channels of this shape cannot signal in
    either direction.
    """
    if shared.in_sys != UNIT:
        raise DimensionError("the shared resource must be a state (no inputs)")
    mem_a = psi_a.in_sys.dims[psi_a.n_in - a_mem:]
    mem_b = psi_b.in_sys.dims[:b_mem]
    if shared.out_sys.dims != mem_a + mem_b:
        raise DimensionError(
            f"shared state on {shared.out_sys.dims} does not match memories {mem_a + mem_b}"
        )
    a1 = System(psi_a.in_sys.dims[: psi_a.n_in - a_mem])
    b1 = System(psi_b.in_sys.dims[b_mem:])
    stage1 = compose_par(identity_process(a1), compose_par(shared, identity_process(b1)))
    stage2 = compose_par(psi_a, psi_b)
    return compose_seq(stage1, stage2)


@dataclass(frozen=True)
class CausalAffineBasis:
    """Affine chart for the Choi matrices of trace-preserving maps."""

    base: np.ndarray
    directions: tuple[np.ndarray, ...]


@lru_cache(maxsize=None)
def causal_affine_basis(d_in: int, d_out: int) -> CausalAffineBasis:
    """Base point plus orthonormal traceless-on-output directions.

    The base point is the Choi matrix of total depolarization; adding any
    real combination of the directions stays trace preserving, and the
    affine hull of the causal channels is exactly this chart.
    """
    base = np.kron(np.eye(d_in, dtype=complex), np.eye(d_out, dtype=complex)) / d_out
    base.setflags(write=False)
    dirs = []
    for g in hermitian_basis(d_in):
        for h in hermitian_basis(d_out)[1:]:
            m = np.kron(g, h)
            m.setflags(write=False)
            dirs.append(m)
    return CausalAffineBasis(base, tuple(dirs))


def is_soc(w: Process, in_split: int = 1, out_split: int = 1, eps: float = DEFAULT_EPS) -> CausalVerdict:
    """One-hole order preservation, by a closed form on body marginals.

    ``w`` is the body of a one-hole supermap: inputs are the slot wires
    ``[slot-in..., slot-out...]`` (split by ``in_split``), outputs are the
    produced channel's wires ``[chan-in..., chan-out...]`` (split by
    ``out_split``).  Holds iff filling the hole with any causal channel
    yields a causal channel.
    """
    si = prod(w.in_sys.dims[:in_split])
    so = prod(w.in_sys.dims[in_split:])
    ci = prod(w.out_sys.dims[:out_split])
    co = prod(w.out_sys.dims[out_split:])
    m = partial_trace(w.choi, (si, so, ci, co), keep=(0, 1, 2))
    n = partial_trace(m, (si, so, ci), keep=(0, 2)) / so
    gap_slot = frobenius_distance(m, _embed_identity(n, (si, ci), 1, so))
    gap_norm = frobenius_distance(partial_trace(n, (si, ci), keep=(1,)), np.eye(ci))
    residual = hypot(gap_slot, gap_norm)
    return CausalVerdict(residual <= eps, residual, None)


def is_soc_oracle(w: Process, in_split: int = 1, out_split: int = 1, eps: float = DEFAULT_EPS) -> CausalVerdict:
    """Same predicate as :func:`is_soc`, decided by exhausting an affine
    basis of causal arguments through the hole and checking every output."""
    si = prod(w.in_sys.dims[:in_split])
    so = prod(w.in_sys.dims[in_split:])
    ci = prod(w.out_sys.dims[:out_split])
    co = prod(w.out_sys.dims[out_split:])
    basis = causal_affine_basis(si, so)

    def witness(x):
        out = Process(System((ci,)), System((co,)), apply_to_state(w, x))
        return is_causal(out, eps).witness

    w0 = witness(basis.base)
    total = float(np.linalg.norm(w0)) ** 2
    for d in basis.directions:
        total += float(np.linalg.norm(witness(basis.base + d) - w0)) ** 2
    residual = sqrt(total)
    return CausalVerdict(residual <= eps, residual, None)


def is_soc2(w: BipartiteSupermap, eps: float = DEFAULT_EPS) -> CausalVerdict:
    """Two-hole order preservation: every pair of causal fillings (applied
    to either hole independently) must come out causal.  Closed form."""
    a1, a2, b1, b2 = w.a_in, w.a_out, w.b_in, w.b_out
    c1 = w.c_in
    m = partial_trace(w.body.choi, w.body.factor_dims, keep=(0, 1, 2, 3, 4))
    d5 = (a1, a2, b1, b2, c1)

    ma = partial_trace(m, d5, keep=(0, 1, 4)) / b2
    na = partial_trace(ma, (a1, a2, c1), keep=(0, 2)) / a2
    gap_a = frobenius_distance(ma, _embed_identity(na, (a1, c1), 1, a2))

    mb = partial_trace(m, d5, keep=(2, 3, 4)) / a2
    nb = partial_trace(mb, (b1, b2, c1), keep=(0, 2)) / b2
    gap_b = frobenius_distance(mb, _embed_identity(nb, (b1, c1), 1, b2))

    # The overall normalization gap is shared between the two sides, so it
    # is counted once (Tr over A1 of na equals Tr over B1 of nb identically).
    gap_norm = frobenius_distance(partial_trace(na, (a1, c1), keep=(1,)), np.eye(c1))

    pa = _embed_identity(partial_trace(m, d5, keep=(0, 2, 3, 4)) / a2, (a1, b1, b2, c1), 1, a2)
    pb = _embed_identity(partial_trace(m, d5, keep=(0, 1, 2, 4)) / b2, (a1, a2, b1, c1), 3, b2)
    papb = _embed_identity(
        _embed_identity(partial_trace(m, d5, keep=(0, 2, 4)) / (a2 * b2), (a1, b1, c1), 2, b2),
        (a1, b1, b2, c1),
        1,
        a2,
    )
    gap_cross = float(np.linalg.norm(m - pa - pb + papb))

    residual = sqrt(gap_a**2 + gap_b**2 + gap_norm**2 + gap_cross**2)
    return CausalVerdict(residual <= eps, float(residual), None)


def is_soc2_oracle(w: BipartiteSupermap, eps: float = DEFAULT_EPS) -> CausalVerdict:
    """Same predicate as :func:`is_soc2`, decided by filling both holes with
    affine bases of causal channels through the public insertion path."""
    basis_a = causal_affine_basis(w.a_in, w.a_out)
    basis_b = causal_affine_basis(w.b_in, w.b_out)
    args_a = [basis_a.base] + [basis_a.base + d for d in basis_a.directions]
    args_b = [basis_b.base] + [basis_b.base + d for d in basis_b.directions]

    wit = np.empty((len(args_a), len(args_b)), dtype=object)
    for i, xa in enumerate(args_a):
        pa = Process(System((w.a_in,)), System((w.a_out,)), xa)
        for j, xb in enumerate(args_b):
            pb = Process(System((w.b_in,)), System((w.b_out,)), xb)
            wit[i, j] = insert(w, pa, pb, eps=eps).causal.witness

    total = float(np.linalg.norm(wit[0, 0])) ** 2
    for i in range(1, len(args_a)):
        total += float(np.linalg.norm(wit[i, 0] - wit[0, 0])) ** 2
    for j in range(1, len(args_b)):
        total += float(np.linalg.norm(wit[0, j] - wit[0, 0])) ** 2
    for i in range(1, len(args_a)):
        for j in range(1, len(args_b)):
            total += float(np.linalg.norm(wit[i, j] - wit[i, 0] - wit[0, j] + wit[0, 0])) ** 2
    residual = sqrt(total)
    return CausalVerdict(residual <= eps, residual, None)


def probe_states(d: int) -> list[np.ndarray]:
    """An informationally complete family of ``d**2`` density matrices:
    basis projectors plus two superposition probes per index pair."""
    states = []
    for i in range(d):
        p = np.zeros((d, d), dtype=complex)
        p[i, i] = 1
        states.append(p)
    for i in range(d):
        for j in range(i + 1, d):
            plus = np.zeros(d, dtype=complex)
            plus[i] = plus[j] = 1 / sqrt(2)
            phase = np.zeros(d, dtype=complex)
            phase[i] = 1 / sqrt(2)
            phase[j] = 1j / sqrt(2)
            states.append(np.outer(plus, plus.conj()))
            states.append(np.outer(phase, phase.conj()))
    return states


def reconstruct_from_causal_states(black_box, in_sys: System, out_sys: System, probes=None) -> Process:
    """Recover a process from its action on states alone.

    With the default probes the Choi matrix is assembled by explicit
    recombination; with a caller-supplied family a least-squares system is
    solved instead, and a family that does not span state space raises
    :class:`ReconstructionError`.
    """
    d, dout = in_sys.total, out_sys.total
    if probes is None:
        states = probe_states(d)
        resp = [np.asarray(black_box(s), dtype=complex) for s in states]
        choi4 = np.zeros((d, dout, d, dout), dtype=complex)
        for i in range(d):
            choi4[i, :, i, :] = resp[i]
        k = d
        for i in range(d):
            for j in range(i + 1, d):
                r_plus, r_phase = resp[k], resp[k + 1]
                k += 2
                corner = resp[i] + resp[j]
                choi4[i, :, j, :] = r_plus + 1j * r_phase - (1 + 1j) / 2 * corner
                choi4[j, :, i, :] = r_plus - 1j * r_phase - (1 - 1j) / 2 * corner
        return Process(in_sys, out_sys, choi4.reshape(d * dout, d * dout))

    probes = [np.asarray(p, dtype=complex) for p in probes]
    a = np.stack([p.ravel() for p in probes])
    s = np.linalg.svd(a, compute_uv=False)
    rank = int(np.sum(s > max(a.shape) * np.finfo(float).eps * s[0])) if s.size else 0
    if rank < d * d:
        raise ReconstructionError(f"probe family spans {rank} of {d * d} dimensions")
    b = np.stack([np.asarray(black_box(p), dtype=complex).ravel() for p in probes])
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    choi4 = x.reshape(d, d, dout, dout).transpose(0, 2, 1, 3)
    return Process(in_sys, out_sys, choi4.reshape(d * dout, d * dout))
