"""Two-hole supermaps on channels, stored as six-wire comb bodies.

A :class:`BipartiteSupermap` turns a pair of channels ``A1 -> A2`` and
``B1 -> B2`` into a channel ``C1 -> C2``.  Its body is a process with
input factors ``[A1, A2, B1, B2]`` (one factor per slot wire) and output
factors ``[C1, C2]``; filling the holes contracts the slot factors of the
body against the Choi matrices of the inserted channels.  Because the
body is an ordinary process, supermaps can be mixed, dressed, and probed
with non-CP arguments without any extra machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import prod

import numpy as np

from .errors import DimensionError, WireMismatchError
from .process import (
    Process,
    apply_to_state,
    compose_par,
    compose_seq,
    move_boundary,
    process_from_dict,
    process_to_dict,
    relabel,
    rewire,
)
from .tensor import DEFAULT_EPS, System, kron, permute_subsystems


@dataclass(frozen=True, eq=False)
class BipartiteSupermap:
    body: Process

    def __post_init__(self):
        if self.body.n_in != 4 or len(self.body.out_sys) != 2:
            raise DimensionError(
                f"body must have four slot factors and two output factors, "
                f"got {self.body.n_in} in / {len(self.body.out_sys)} out"
            )

    @property
    def a_in(self) -> int:
        return self.body.in_sys[0]

    @property
    def a_out(self) -> int:
        return self.body.in_sys[1]

    @property
    def b_in(self) -> int:
        return self.body.in_sys[2]

    @property
    def b_out(self) -> int:
        return self.body.in_sys[3]

    @property
    def c_in(self) -> int:
        return self.body.out_sys[0]

    @property
    def c_out(self) -> int:
        return self.body.out_sys[1]

    def __repr__(self) -> str:
        return (
            f"BipartiteSupermap(a={self.a_in}->{self.a_out}, "
            f"b={self.b_in}->{self.b_out}, c={self.c_in}->{self.c_out})"
        )


@dataclass(eq=False)
class InsertionResult:
    """A filled supermap, with the causality check deferred until asked for."""

    process: Process
    eps: float = DEFAULT_EPS

    @cached_property
    def causal(self):
        from .predicates import is_causal

        return is_causal(self.process, eps=self.eps)


def supermap_from_process(p: Process, a_dims: tuple[int, int], b_dims: tuple[int, int]) -> BipartiteSupermap:
    """Read a process as a supermap body, flattening its slot factors."""
    if len(p.out_sys) != 2:
        raise DimensionError(f"supermap body needs exactly two output factors, got {len(p.out_sys)}")
    if p.in_sys.total != prod(a_dims) * prod(b_dims):
        raise DimensionError(
            f"input dimension {p.in_sys.total} does not match slots {a_dims} and {b_dims}"
        )
    return BipartiteSupermap(relabel(p, a_dims + b_dims, p.out_sys.dims))


def supermap_to_dict(w: BipartiteSupermap) -> dict:
    return {
        "process": process_to_dict(w.body),
        "slots": {"a": [w.a_in, w.a_out], "b": [w.b_in, w.b_out]},
    }


def supermap_from_dict(d: dict) -> BipartiteSupermap:
    try:
        p = process_from_dict(d["process"])
        a = tuple(int(x) for x in d["slots"]["a"])
        b = tuple(int(x) for x in d["slots"]["b"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionError(f"malformed supermap record: {exc}") from exc
    if len(a) != 2 or len(b) != 2:
        raise DimensionError(f"slot entries must be [in, out] pairs, got a={a} b={b}")
    if p.in_sys.dims != a + b:
        raise DimensionError(f"process inputs {p.in_sys.dims} do not match slots {a + b}")
    return BipartiteSupermap(p)


def _split_groups(sys: System, first: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not 0 <= first <= len(sys):
        raise DimensionError(f"split {first} out of range for {len(sys)} factors")
    return sys.dims[:first], sys.dims[first:]


def insert_with_ancilla(
    w: BipartiteSupermap,
    pa: Process,
    pb: Process,
    a_split: tuple[int, int] = (0, 0),
    b_split: tuple[int, int] = (0, 0),
    eps: float = DEFAULT_EPS,
) -> InsertionResult:
    """Fill both holes with channels that may carry extra side wires.

    ``pa`` must have inputs ``[ancilla..., A1 part...]`` and outputs
    ``[ancilla..., A2 part...]`` with ``a_split`` counting the ancilla
    factors on each side (``pb`` likewise).  The result keeps the side
    wires open: inputs ``[pa ancillas, pb ancillas, C1]``, outputs
    ``[pa ancillas, pb ancillas, C2]``.
    """
    a_anc_in, a_slot_in = _split_groups(pa.in_sys, a_split[0])
    a_anc_out, a_slot_out = _split_groups(pa.out_sys, a_split[1])
    b_anc_in, b_slot_in = _split_groups(pb.in_sys, b_split[0])
    b_anc_out, b_slot_out = _split_groups(pb.out_sys, b_split[1])
    expected = [
        (prod(a_slot_in), w.a_in),
        (prod(a_slot_out), w.a_out),
        (prod(b_slot_in), w.b_in),
        (prod(b_slot_out), w.b_out),
    ]
    if any(got != want for got, want in expected):
        raise WireMismatchError(
            f"slot parts {[g for g, _ in expected]} do not fit holes {[t for _, t in expected]}"
        )

    # Open the slot wires: keep each channel's ancilla inputs as inputs and
    # bend everything else out, preserving factor order.
    bent_a = move_boundary(pa, len(a_anc_in))
    bent_b = move_boundary(pb, len(b_anc_in))
    q = compose_par(bent_a, bent_b)

    # q factor list: [aAncIn, bAncIn | aSlotIn, aAncOut, aSlotOut, bSlotIn, bAncOut, bSlotOut]
    sizes = [
        len(a_anc_in), len(b_anc_in),
        len(a_slot_in), len(a_anc_out), len(a_slot_out),
        len(b_slot_in), len(b_anc_out), len(b_slot_out),
    ]
    starts = np.cumsum([0] + sizes[:-1])
    blk = {
        name: list(range(starts[k], starts[k] + sizes[k]))
        for k, name in enumerate(["aAncIn", "bAncIn", "aSlotIn", "aAncOut", "aSlotOut", "bSlotIn", "bAncOut", "bSlotOut"])
    }
    q = rewire(
        q,
        blk["aAncIn"] + blk["bAncIn"] + blk["aAncOut"] + blk["bAncOut"],
        blk["aSlotIn"] + blk["aSlotOut"] + blk["bSlotIn"] + blk["bSlotOut"],
    )
    q = relabel(q, q.in_sys.dims, (w.a_in, w.a_out, w.b_in, w.b_out))
    core = compose_seq(q, w.body)

    # core: in [aAncIn, bAncIn, aAncOut, bAncOut], out [C1, C2]; route the
    # ancilla outputs back to the output side and pull C1 in.
    n_ai, n_bi = len(a_anc_in), len(b_anc_in)
    n_ao, n_bo = len(a_anc_out), len(b_anc_out)
    total_in = n_ai + n_bi + n_ao + n_bo
    final = rewire(
        core,
        list(range(n_ai + n_bi)) + [total_in],
        list(range(n_ai + n_bi, total_in)) + [total_in + 1],
    )
    return InsertionResult(final, eps=eps)


def insert(w: BipartiteSupermap, pa: Process, pb: Process, eps: float = DEFAULT_EPS) -> InsertionResult:
    """Fill both holes with plainly typed channels (no side wires)."""
    return insert_with_ancilla(w, pa, pb, (0, 0), (0, 0), eps=eps)


def insert_merged(
    w: BipartiteSupermap,
    phi: Process,
    in_split: int = 1,
    out_split: int = 1,
    eps: float = DEFAULT_EPS,
) -> InsertionResult:
    """Fill both holes with one joint channel ``A1 (x) B1 -> A2 (x) B2``.

    ``in_split``/``out_split`` say how many leading input/output factors of
    ``phi`` belong to the A hole.  This is the linear extension of hole
    filling to correlated arguments, which is what lets wires loop.
    """
    a_in_fs, b_in_fs = _split_groups(phi.in_sys, in_split)
    a_out_fs, b_out_fs = _split_groups(phi.out_sys, out_split)
    expected = [
        (prod(a_in_fs), w.a_in),
        (prod(a_out_fs), w.a_out),
        (prod(b_in_fs), w.b_in),
        (prod(b_out_fs), w.b_out),
    ]
    if any(got != want for got, want in expected):
        raise WireMismatchError(
            f"joint channel parts {[g for g, _ in expected]} do not fit holes {[t for _, t in expected]}"
        )
    # phi factor list: [aIn, bIn | aOut, bOut]; regroup to body slot order.
    n_ai, n_bi, n_ao = len(a_in_fs), len(b_in_fs), len(a_out_fs)
    n_bo = len(b_out_fs)
    a_in_pos = list(range(n_ai))
    b_in_pos = list(range(n_ai, n_ai + n_bi))
    a_out_pos = list(range(n_ai + n_bi, n_ai + n_bi + n_ao))
    b_out_pos = list(range(n_ai + n_bi + n_ao, n_ai + n_bi + n_ao + n_bo))
    state = rewire(phi, [], a_in_pos + a_out_pos + b_in_pos + b_out_pos)
    state = relabel(state, (), (w.a_in, w.a_out, w.b_in, w.b_out))
    core = compose_seq(state, w.body)
    final = rewire(core, [0], [1])
    return InsertionResult(final, eps=eps)


def _bell(d: int) -> np.ndarray:
    v = np.eye(d, dtype=complex).ravel()
    return np.outer(v, v)


def fixed_order_a_then_b(a_in: int, a_out: int, b_in: int, b_out: int) -> BipartiteSupermap:
    """The wiring that runs the A channel first and pipes it into B."""
    if a_out != b_in:
        raise WireMismatchError(f"cannot pipe A output {a_out} into B input {b_in}")
    raw = kron(_bell(a_in), _bell(a_out), _bell(b_out))
    # kron factor order [A1, C1, A2, B1, B2, C2] -> [A1, A2, B1, B2, C1, C2]
    dims = (a_in, a_in, a_out, b_in, b_out, b_out)
    c = permute_subsystems(raw, dims, (0, 2, 3, 4, 1, 5))
    body = Process(System((a_in, a_out, b_in, b_out)), System((a_in, b_out)), c, cp_flag=True)
    return BipartiteSupermap(body)


def fixed_order_b_then_a(a_in: int, a_out: int, b_in: int, b_out: int) -> BipartiteSupermap:
    """The wiring that runs the B channel first and pipes it into A."""
    if b_out != a_in:
        raise WireMismatchError(f"cannot pipe B output {b_out} into A input {a_in}")
    raw = kron(_bell(b_in), _bell(b_out), _bell(a_out))
    # kron factor order [B1, C1, B2, A1, A2, C2] -> [A1, A2, B1, B2, C1, C2]
    dims = (b_in, b_in, b_out, a_in, a_out, a_out)
    c = permute_subsystems(raw, dims, (3, 4, 0, 2, 1, 5))
    body = Process(System((a_in, a_out, b_in, b_out)), System((b_in, a_out)), c, cp_flag=True)
    return BipartiteSupermap(body)


def mix(pairs) -> BipartiteSupermap:
    """Affine combination ``sum_k weight_k W_k`` of same-shaped supermaps."""
    pairs = list(pairs)
    if not pairs:
        raise DimensionError("cannot mix an empty collection of supermaps")
    first = pairs[0][1].body
    acc = np.zeros_like(first.choi)
    convex = True
    for weight, w in pairs:
        if w.body.in_sys.dims != first.in_sys.dims or w.body.out_sys.dims != first.out_sys.dims:
            raise WireMismatchError("mixed supermaps must share slot and output types")
        acc = acc + weight * w.body.choi
        convex = convex and weight >= 0 and w.body.cp_flag is True
    body = Process(first.in_sys, first.out_sys, acc, cp_flag=True if convex else None)
    return BipartiteSupermap(body)


def _adapter(pre: Process, post: Process) -> Process:
    """Process mapping a hole argument of type ``pre.out -> post.in`` onto
    the original slot wires ``pre.in -> post.out`` by pre/post composition."""
    a1, x = pre.in_sys.total, pre.out_sys.total
    y, a2 = post.in_sys.total, post.out_sys.total
    pre_flat = relabel(pre, (a1,), (x,))
    post_flat = relabel(post, (y,), (a2,))
    raw = kron(pre_flat.choi, post_flat.choi)
    c = permute_subsystems(raw, (a1, x, y, a2), (1, 2, 0, 3))
    cp = True if (pre.cp_flag and post.cp_flag) else None
    return Process(System((x, y)), System((a1, a2)), c, cp_flag=cp)


def dress_slots(
    w: BipartiteSupermap,
    pre_a: Process,
    post_a: Process,
    pre_b: Process,
    post_b: Process,
) -> BipartiteSupermap:
    """Wrap each hole, so slot A now accepts channels ``pre_a.out -> post_a.in``
    and behaves like ``post_a . phi . pre_a`` fed to the original supermap."""
    checks = [
        (pre_a.in_sys.total, w.a_in), (post_a.out_sys.total, w.a_out),
        (pre_b.in_sys.total, w.b_in), (post_b.out_sys.total, w.b_out),
    ]
    if any(got != want for got, want in checks):
        raise WireMismatchError("dressing channels do not match the slot wires")
    adapters = compose_par(_adapter(pre_a, post_a), _adapter(pre_b, post_b))
    return BipartiteSupermap(compose_seq(adapters, w.body))


def merged_slot_process(w: BipartiteSupermap) -> Process:
    """View the body as a one-hole comb whose single slot is the joint
    ``A1 (x) B1 -> A2 (x) B2`` hole; inputs ``[A1, B1, A2, B2]``, outputs
    ``[C1, C2]``."""
    return rewire(w.body, [0, 2, 1, 3], [4, 5])


def apply_body_to_joint(w: BipartiteSupermap, joint_choi: np.ndarray) -> np.ndarray:
    """Contract the body against a raw Choi matrix on ``[A1, A2, B1, B2]``."""
    return apply_to_state(w.body, joint_choi)
