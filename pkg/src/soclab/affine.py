"""Affine combinations of product channels.

Bipartite non-signalling channels are exactly the affine hull of product
channels.  This module realizes an affine combination as one concrete
process, two ways: a wiring that distributes a diagonal pseudo-state (a
classically correlated state whose weights may be negative) to a pair of
controlled local channels, and a direct sum over terms.  The wiring route
materializes matrices quadratic in the number of terms, so past a small
term count the direct route is used; both agree exactly and the tests
pin that.

The inverse direction fits coefficients over a given spanning family of
product channel pairs by constrained least squares.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Sequence

import numpy as np

from .errors import DimensionError, WireMismatchError
from .predicates import _embed_identity
from .process import Process, compose_par, compose_seq, identity_process, permute_output_factors, random_causal_channel, relabel
from .tensor import System, UNIT, hermitian_basis, partial_trace

WIRING_TERM_LIMIT = 16


def pseudo_state(coeffs: Sequence[float]) -> Process:
    """Diagonal two-register state ``sum_x r_x |xx><xx|`` with real weights
    summing to one; negative weights are allowed and flagged as non-CP."""
    coeffs = tuple(float(c) for c in coeffs)
    n = len(coeffs)
    if n == 0:
        raise DimensionError("pseudo-state needs at least one weight")
    if abs(sum(coeffs) - 1.0) > 1e-9:
        raise DimensionError(f"weights must sum to 1, got {sum(coeffs)}")
    diag = np.zeros(n * n, dtype=complex)
    for x, c in enumerate(coeffs):
        diag[x * n + x] = c
    return Process(UNIT, System((n, n)), np.diag(diag), cp_flag=all(c >= 0 for c in coeffs))


def controlled_local_channel(channels: Sequence[Process]) -> Process:
    """One channel per classical control value: ``|x><x| (x) rho -> Phi_x(rho)``."""
    channels = list(channels)
    if not channels:
        raise DimensionError("need at least one branch")
    din = channels[0].in_sys.total
    dout = channels[0].out_sys.total
    if any(c.in_sys.total != din or c.out_sys.total != dout for c in channels):
        raise WireMismatchError("all branches must share input and output dimensions")
    n = len(channels)
    out = np.zeros((n, din, dout, n, din, dout), dtype=complex)
    for x, c in enumerate(channels):
        out[x, :, :, x, :, :] = c.choi.reshape(din, dout, din, dout)
    side = n * din * dout
    cp = all(c.cp_flag for c in channels)
    return Process(System((n, din)), System((dout,)), out.reshape(side, side), cp_flag=True if cp else None)


@dataclass(frozen=True)
class AffineCombination:
    """Terms ``(r_x, Phi_x, Psi_x)`` with the ``r_x`` summing to one."""

    terms: tuple[tuple[float, Process, Process], ...]

    def __post_init__(self):
        if not self.terms:
            raise DimensionError("affine combination needs at least one term")
        if abs(sum(r for r, _, _ in self.terms) - 1.0) > 1e-9:
            raise DimensionError("coefficients must sum to 1")
        _, f0, g0 = self.terms[0]
        for _, f, g in self.terms:
            if (
                f.in_sys.total != f0.in_sys.total
                or f.out_sys.total != f0.out_sys.total
                or g.in_sys.total != g0.in_sys.total
                or g.out_sys.total != g0.out_sys.total
            ):
                raise WireMismatchError("all terms must share their local types")

    @property
    def coeffs(self) -> tuple[float, ...]:
        return tuple(r for r, _, _ in self.terms)


def realize_affine(comb: AffineCombination, via: str = "auto") -> Process:
    """Build the bipartite process ``sum_x r_x Phi_x (x) Psi_x``.

    ``via`` picks the construction: ``"wiring"`` routes a pseudo-state into
    controlled channels, ``"direct"`` sums the product terms, ``"auto"``
    uses the wiring only for small term counts.
    """
    n = len(comb.terms)
    if via == "auto":
        via = "wiring" if n <= WIRING_TERM_LIMIT else "direct"
    _, f0, g0 = comb.terms[0]
    a1, a2 = f0.in_sys.total, f0.out_sys.total
    b1, b2 = g0.in_sys.total, g0.out_sys.total
    in_sys, out_sys = System((a1, b1)), System((a2, b2))

    if via == "direct":
        acc = np.zeros((a1 * b1 * a2 * b2,) * 2, dtype=complex)
        for r, f, g in comb.terms:
            pair = compose_par(relabel(f, (a1,), (a2,)), relabel(g, (b1,), (b2,)))
            acc = acc + r * pair.choi
        return Process(in_sys, out_sys, acc)
    if via != "wiring":
        raise ValueError(f"unknown realization route {via!r}")

    ctrl_a = controlled_local_channel([relabel(f, (a1,), (a2,)) for _, f, _ in comb.terms])
    ctrl_b = controlled_local_channel([relabel(g, (b1,), (b2,)) for _, _, g in comb.terms])
    prep = compose_par(pseudo_state(comb.coeffs), identity_process(in_sys))
    arranged = permute_output_factors(prep, (0, 2, 1, 3))
    return compose_seq(arranged, compose_par(ctrl_a, ctrl_b))


@dataclass(frozen=True)
class DecompositionResult:
    coeffs: tuple[float, ...]
    residual: float
    span_deficient: bool


@lru_cache(maxsize=None)
def nonsignalling_direction_dim(ai: int, bi: int, ao: int, bo: int) -> int:
    """Dimension of the affine hull of non-signalling channels, computed as
    the nullity of the stacked causality and no-signalling constraints."""
    side = ai * bi * ao * bo
    basis = hermitian_basis(side)
    cols = []
    for h in basis:
        t1 = partial_trace(h, (ai * bi, ao * bo), keep=(0,))
        mb = partial_trace(h, (ai, bi, ao, bo), keep=(0, 1, 2))
        kb = partial_trace(mb, (ai, bi, ao), keep=(0, 2)) / bi
        t2 = mb - _embed_identity(kb, (ai, ao), 1, bi)
        ma = partial_trace(h, (ai, bi, ao, bo), keep=(0, 1, 3))
        ka = partial_trace(ma, (ai, bi, bo), keep=(1, 2)) / ai
        t3 = ma - _embed_identity(ka, (bi, bo), 0, ai)
        stacked = np.concatenate([t.ravel() for t in (t1, t2, t3)])
        cols.append(np.concatenate([stacked.real, stacked.imag]))
    rank = np.linalg.matrix_rank(np.stack(cols, axis=1))
    return side * side - int(rank)


def random_product_span(
    n: int,
    in_dims: tuple[int, int] = (2, 2),
    out_dims: tuple[int, int] = (2, 2),
    seed=None,
) -> list[tuple[Process, Process]]:
    rng = np.random.default_rng(seed)
    return [
        (
            random_causal_channel(System((in_dims[0],)), System((out_dims[0],)), seed=rng),
            random_causal_channel(System((in_dims[1],)), System((out_dims[1],)), seed=rng),
        )
        for _ in range(n)
    ]


def decompose_nonsignalling(
    f: Process,
    span_pairs: Sequence[tuple[Process, Process]],
    in_split: int = 1,
    out_split: int = 1,
) -> DecompositionResult:
    """Fit ``f`` as an affine combination of the given product channel pairs.

    Minimizes the Frobenius gap subject to the coefficients summing to one.
    ``span_deficient`` reports whether the family's affine directions fall
    short of the full non-signalling hull for this shape, in which case a
    large residual may reflect the family rather than ``f``.
    """
    pairs = list(span_pairs)
    if not pairs:
        raise DimensionError("need a non-empty spanning family")
    ai = prod(f.in_sys.dims[:in_split])
    bi = prod(f.in_sys.dims[in_split:])
    ao = prod(f.out_sys.dims[:out_split])
    bo = prod(f.out_sys.dims[out_split:])
    cols = []
    for phi, psi in pairs:
        if (
            phi.in_sys.total != ai
            or phi.out_sys.total != ao
            or psi.in_sys.total != bi
            or psi.out_sys.total != bo
        ):
            raise WireMismatchError("spanning pair does not match the target's shape")
        pair = compose_par(relabel(phi, (ai,), (ao,)), relabel(psi, (bi,), (bo,)))
        v = pair.choi.ravel()
        cols.append(np.concatenate([v.real, v.imag]))
    a = np.stack(cols, axis=1)
    target = f.choi.ravel()
    b = np.concatenate([target.real, target.imag])

    n = len(pairs)
    base = np.full(n, 1.0 / n)
    z = np.zeros((n, n - 1))
    z[0, :] = -1.0
    z[1:, :] = np.eye(n - 1)
    if n == 1:
        r = base
    else:
        y, *_ = np.linalg.lstsq(a @ z, b - a @ base, rcond=None)
        r = base + z @ y
    residual = float(np.linalg.norm(a @ r - b))

    directions = a[:, 1:] - a[:, :1]
    span_rank = int(np.linalg.matrix_rank(directions)) if n > 1 else 0
    deficient = span_rank < nonsignalling_direction_dim(ai, bi, ao, bo)
    return DecompositionResult(tuple(float(x) for x in r), residual, deficient)
