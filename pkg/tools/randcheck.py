"""
randcheck.py
------------
Soundness campaign: draw seeded random systems, run every graph criterion
against the rank oracle, and count how often they agree.

Trial k uses random.Random(seed + k), so any single trial can be replayed
with `randcheck --seed <seed + k> --trials 1`.

Drift coefficients are distinct small primes with random signs. Generic
coefficients keep brackets from cancelling by accident.
"""

import logging
import random
from functools import partial
from multiprocessing import Pool
from typing import NamedTuple

from schemas.control_schema import RandcheckSummary, VerdictStatus
from tools.criteria import analyze, run_checker
from tools.errors import SoundnessError
from tools.lie_core import AlgebraKind, BasisElement, BasisTag, GroupKind, LieVector
from tools.system_model import BilinearSystem

logger = logging.getLogger(__name__)

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)
MAX_REPORTED_SEEDS = 5
DRIFTLESS_SHARE = 0.25


# ---------------- Generator ----------------
def control_pool(algebra: AlgebraKind) -> list[BasisElement]:
    """Every basis element that may appear as a control in this algebra."""
    nodes = range(1, algebra.n + 1)
    if algebra.kind is GroupKind.SO:
        return [BasisElement(tag=BasisTag.B, i=i, j=j) for i in nodes for j in nodes if i < j]
    if algebra.kind is GroupKind.SL:
        off = [BasisElement(tag=BasisTag.E, i=i, j=j) for i in nodes for j in nodes if i != j]
        return off + [BasisElement(tag=BasisTag.C, i=i, j=j) for i in nodes for j in nodes if i < j]
    return [BasisElement(tag=BasisTag.E, i=i, j=j) for i in nodes for j in nodes]


def drift_pool(algebra: AlgebraKind) -> list[BasisElement]:
    """Elements the random drift is built from (sl also gets C terms, gl its diagonal)."""
    if algebra.kind is GroupKind.SL:
        nodes = range(1, algebra.n + 1)
        off = [BasisElement(tag=BasisTag.E, i=i, j=j) for i in nodes for j in nodes if i != j]
        return off + [BasisElement(tag=BasisTag.C, i=i, j=i + 1) for i in range(1, algebra.n)]
    return control_pool(algebra)


def random_system(group: str, n: int, rng: random.Random, max_controls: int = 0) -> BilinearSystem:
    """One random system; max_controls = 0 means n + 2."""
    algebra = AlgebraKind(kind=GroupKind(group), n=n)
    cap = max_controls or n + 2

    pool = control_pool(algebra)
    m = rng.randint(0, min(cap, len(pool)))
    controls = rng.sample(pool, m)

    drift = LieVector.zero(algebra)
    if rng.random() >= DRIFTLESS_SHARE:
        terms = drift_pool(algebra)
        k = rng.randint(1, min(n + 1, len(terms)))
        coeffs = rng.sample(PRIMES, k)
        for element, p in zip(rng.sample(terms, k), coeffs):
            drift = drift + element.to_vector(algebra, p * rng.choice((1, -1)))
    return BilinearSystem(algebra, drift, controls)


# ---------------- Trials ----------------
class TrialOutcome(NamedTuple):
    seed: int
    status: str
    holds: bool
    violation: bool


def run_trial(group: str, n: int, max_controls: int, seed: int) -> TrialOutcome:
    sys = random_system(group, n, random.Random(seed), max_controls)
    try:
        verdict, oracle = analyze(sys, with_oracle=True)
    except SoundnessError:
        verdict = run_checker(sys)
        return TrialOutcome(seed, verdict.status.value, verdict.status is not VerdictStatus.YES, True)
    return TrialOutcome(seed, verdict.status.value, oracle.holds, False)


def run_randcheck(
    group: str,
    n: int,
    trials: int,
    seed: int,
    max_controls: int = 0,
    workers: int = 1,
) -> RandcheckSummary:
    """
    Run `trials` seeded trials, optionally across a process pool.
    Only counts are aggregated, so the summary does not depend on worker order.
    """
    cap = max_controls or n + 2
    seeds = [seed + k for k in range(trials)]
    job = partial(run_trial, group, n, cap)

    if workers > 1:
        with Pool(processes=workers) as pool:
            outcomes = pool.map(job, seeds)
    else:
        outcomes = [job(s) for s in seeds]

    summary = RandcheckSummary(group=group, n=n, trials=trials, seed=seed, max_controls=cap)
    by_status: dict[str, int] = {s.value: 0 for s in VerdictStatus}
    for outcome in outcomes:
        by_status[outcome.status] += 1
        summary.oracle_holds += outcome.holds
        if outcome.violation:
            summary.violation += 1
            if len(summary.violating_seeds) < MAX_REPORTED_SEEDS:
                summary.violating_seeds.append(outcome.seed)
        elif outcome.status == VerdictStatus.NOT_MET.value:
            summary.hypothesis_not_met += 1
        else:
            summary.agree += 1
    summary.by_status = by_status

    if summary.violation:
        logger.warning("randcheck %s(%d): %d violation(s), seeds %s", group, n, summary.violation, summary.violating_seeds)
    return summary
