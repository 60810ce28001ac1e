"""Randomized end-to-end verification runs with reproducible reports.

Each verifier first evaluates the structural premise on the supermap,
then runs seeded trials that build random arguments, push them through
the public insertion machinery, and check the output for causality.
Reports serialize to JSON lines: one premise line, one line per trial,
one summary line.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .predicates import is_causal, is_soc2
from .process import (
    compose_par,
    compose_seq,
    identity_process,
    make_state,
    permute_input_factors,
    random_causal_channel,
    random_density,
)
from .supermap import BipartiteSupermap, insert_with_ancilla
from .tensor import DEFAULT_EPS, System


@dataclass(frozen=True)
class HarnessConfig:
    trials: int = 100
    seed: int = 0
    ancilla_dim: int = 2
    eps: float = DEFAULT_EPS


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    causal: bool
    residual: float
    seed: int


@dataclass(frozen=True)
class HarnessReport:
    premise: str
    premise_holds: bool
    premise_residual: float
    records: tuple[TrialRecord, ...]

    @property
    def all_causal(self) -> bool:
        return all(r.causal for r in self.records)

    @property
    def max_residual(self) -> float:
        return max((r.residual for r in self.records), default=0.0)


def _trial_seed(base: int, trial: int) -> int:
    return base * 1_000_003 + trial


def verify_theorem1(w: BipartiteSupermap, config: HarnessConfig = HarnessConfig()) -> HarnessReport:
    """Order preservation survives side wires.

    Trials fill both holes with random causal channels that each drag an
    ancilla through, and check the resulting extended channel is causal.
    """
    premise = is_soc2(w, config.eps)
    m = config.ancilla_dim
    records = []
    for t in range(config.trials):
        s = _trial_seed(config.seed, t)
        rng = np.random.default_rng(s)
        pa = random_causal_channel(System((m, w.a_in)), System((m, w.a_out)), seed=rng)
        pb = random_causal_channel(System((m, w.b_in)), System((m, w.b_out)), seed=rng)
        verdict = insert_with_ancilla(w, pa, pb, (1, 1), (1, 1), eps=config.eps).causal
        records.append(TrialRecord(t, verdict.holds, verdict.residual, s))
    return HarnessReport("soc2", premise.holds, premise.residual, tuple(records))


def verify_corollary1(w: BipartiteSupermap, config: HarnessConfig = HarnessConfig()) -> HarnessReport:
    """Correlated-but-non-signalling arguments come out causal.

    Trials build a random shared state and local channels consuming its
    halves, thread the local channels through the holes with the memory
    wires left open, close those wires with the shared state, and check
    causality of what remains.
    """
    premise = is_soc2(w, config.eps)
    m = config.ancilla_dim
    records = []
    for t in range(config.trials):
        s = _trial_seed(config.seed, t)
        rng = np.random.default_rng(s)
        psi_a = random_causal_channel(System((w.a_in, m)), System((w.a_out,)), seed=rng)
        psi_b = random_causal_channel(System((m, w.b_in)), System((w.b_out,)), seed=rng)
        shared = make_state(random_density(System((m, m)), seed=rng), System((m, m)))
        opened = insert_with_ancilla(
            w, permute_input_factors(psi_a, (1, 0)), psi_b, (1, 0), (1, 0), eps=config.eps
        )
        closed = compose_seq(
            compose_par(shared, identity_process(System((w.c_in,)))), opened.process
        )
        verdict = is_causal(closed, config.eps)
        records.append(TrialRecord(t, verdict.holds, verdict.residual, s))
    return HarnessReport("soc2", premise.holds, premise.residual, tuple(records))


def report_to_jsonl(report: HarnessReport) -> list[str]:
    lines = [
        json.dumps(
            {"premise": report.premise, "holds": report.premise_holds, "residual": report.premise_residual}
        )
    ]
    for r in report.records:
        lines.append(json.dumps({"trial": r.trial, "causal": r.causal, "residual": r.residual, "seed": r.seed}))
    lines.append(
        json.dumps(
            {
                "summary": {
                    "trials": len(report.records),
                    "all_causal": report.all_causal,
                    "max_residual": report.max_residual,
                }
            }
        )
    )
    return lines
