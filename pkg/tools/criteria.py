"""
criteria.py
-----------
Graph criteria for controllability / accessibility, one checker per
(group, drift or driftless) case, plus the exact rank oracle they are
checked against.

Every checker returns a Verdict:
  - GuaranteedYes: the criterion's hypotheses hold and prove the property
  - GuaranteedNo: a necessary condition fails (always unconditional here)
  - HypothesisNotMet: the criterion says nothing; ask the oracle

Criterion ids:
  so-driftless-connectivity         so, A = 0: controllable iff G_contr connected
  so-union-connectivity             so: union connected + control components >= 3 nodes
  sl-driftless-strong-connectivity  sl, A = 0: controllable iff G_contr strongly connected
  sl-union-strong-connectivity      sl: union strongly connected + strong components, one >= 3 nodes
  gl-driftless-self-loop            gl, A = 0: strongly connected with a self-loop
  gl-union-trace                    gl: as sl, then accessible iff self-loop or tr A != 0
  gl-union-self-loop                gl: components of two nodes suffice when a self-loop exists
"""

import logging
import time
from typing import Callable, Optional

from schemas.control_schema import OracleReport, Property, Timing, Verdict, VerdictStatus
from tools.errors import AlgebraMismatchError, SoundnessError
from tools.graph_core import (
    DiGraph,
    components,
    connected,
    induced_strongly_connected,
    strip_self_loops,
    strongly_connected,
    union_graph,
    weak_components,
)
from tools.lie_core import GroupKind, closure_dimension
from tools.system_model import BilinearSystem, control_graph, drift_graph

logger = logging.getLogger(__name__)


# ---------------- Oracle ----------------
def larc_oracle(sys: BilinearSystem) -> OracleReport:
    """Dimension of the Lie algebra generated by the drift and the controls."""
    dimension = closure_dimension(sys.generators(), sys.algebra)
    full = sys.algebra.full_dimension()
    return OracleReport(dimension=dimension, full_dimension=full, holds=dimension == full)


# ---------------- Helpers ----------------
def _require(sys: BilinearSystem, kind: GroupKind) -> None:
    if sys.kind is not kind:
        raise AlgebraMismatchError(f"checker for {kind.value}(n) called on {sys.algebra}")


def _verdict(status: VerdictStatus, prop: Property, reasons: list[str], criterion: str) -> Verdict:
    return Verdict(status=status, property=prop, reasons=reasons, criterion=criterion)


def _component_failures(g: DiGraph) -> list[str]:
    """
    Reasons the weak components of a simple digraph break the component
    hypothesis: each strongly connected with >= 2 nodes, one with >= 3.
    Empty list means the hypothesis holds.
    """
    parts = weak_components(g)
    failures = []
    if any(len(p) < 2 for p in parts):
        failures.append("component-too-small")
    if any(len(p) >= 2 and not induced_strongly_connected(g, p) for p in parts):
        failures.append("component-not-strongly-connected")
    if not any(len(p) >= 3 for p in parts):
        failures.append("no-large-component")
    return failures


# ---------------- so(n) ----------------
def check_so_driftless(sys: BilinearSystem) -> Verdict:
    _require(sys, GroupKind.SO)
    criterion = "so-driftless-connectivity"
    if not sys.drift.is_zero():
        return _verdict(VerdictStatus.NOT_MET, Property.CONTROLLABLE, ["drift-present"], criterion)
    if connected(control_graph(sys)):
        return _verdict(VerdictStatus.YES, Property.CONTROLLABLE, ["control-connected"], criterion)
    return _verdict(VerdictStatus.NO, Property.CONTROLLABLE, ["control-disconnected"], criterion)


def check_so(sys: BilinearSystem) -> Verdict:
    _require(sys, GroupKind.SO)
    criterion = "so-union-connectivity"
    contr = control_graph(sys)
    if not connected(union_graph(drift_graph(sys), contr)):
        return _verdict(VerdictStatus.NO, Property.CONTROLLABLE, ["union-disconnected"], criterion)
    # isolated nodes count as one-node components
    if all(len(p) >= 3 for p in components(contr)):
        return _verdict(VerdictStatus.YES, Property.CONTROLLABLE, ["union-connected", "components-large-enough"], criterion)
    return _verdict(VerdictStatus.NOT_MET, Property.CONTROLLABLE, ["union-connected", "component-too-small"], criterion)


# ---------------- sl(n) ----------------
def check_sl_driftless(sys: BilinearSystem) -> Verdict:
    _require(sys, GroupKind.SL)
    criterion = "sl-driftless-strong-connectivity"
    if not sys.drift.is_zero():
        return _verdict(VerdictStatus.NOT_MET, Property.CONTROLLABLE, ["drift-present"], criterion)
    if strongly_connected(control_graph(sys)):
        return _verdict(VerdictStatus.YES, Property.CONTROLLABLE, ["control-strongly-connected"], criterion)
    return _verdict(VerdictStatus.NO, Property.CONTROLLABLE, ["control-not-strongly-connected"], criterion)


def check_sl(sys: BilinearSystem) -> Verdict:
    _require(sys, GroupKind.SL)
    criterion = "sl-union-strong-connectivity"
    contr = control_graph(sys)
    if not strongly_connected(union_graph(drift_graph(sys), contr)):
        return _verdict(VerdictStatus.NO, Property.ACCESSIBLE, ["union-not-strongly-connected"], criterion)
    failures = _component_failures(contr)
    if not failures:
        return _verdict(VerdictStatus.YES, Property.ACCESSIBLE, ["union-strongly-connected", "components-strongly-connected"], criterion)
    return _verdict(VerdictStatus.NOT_MET, Property.ACCESSIBLE, ["union-strongly-connected"] + failures, criterion)


# ---------------- gl(n) ----------------
def check_gl_driftless(sys: BilinearSystem) -> Verdict:
    _require(sys, GroupKind.GL)
    criterion = "gl-driftless-self-loop"
    if not sys.drift.is_zero():
        return _verdict(VerdictStatus.NOT_MET, Property.CONTROLLABLE, ["drift-present"], criterion)
    contr = control_graph(sys)
    reasons = ["control-strongly-connected" if strongly_connected(contr) else "control-not-strongly-connected"]
    reasons.append("self-loop-present" if contr.self_loops() else "no-self-loop")
    if reasons == ["control-strongly-connected", "self-loop-present"]:
        return _verdict(VerdictStatus.YES, Property.CONTROLLABLE, reasons, criterion)
    return _verdict(VerdictStatus.NO, Property.CONTROLLABLE, reasons, criterion)


def check_gl(sys: BilinearSystem) -> Verdict:
    _require(sys, GroupKind.GL)
    contr = control_graph(sys)
    # reachability uses the simple shadows; self-loops only matter below
    simple_contr = strip_self_loops(contr)
    union = union_graph(strip_self_loops(drift_graph(sys)), simple_contr)
    if not strongly_connected(union):
        return _verdict(VerdictStatus.NO, Property.ACCESSIBLE, ["union-not-strongly-connected"], "gl-union-trace")

    reasons = ["union-strongly-connected"]
    has_loop = bool(contr.self_loops())
    failures = _component_failures(simple_contr)

    if not failures:
        reasons.append("components-strongly-connected")
        if has_loop:
            return _verdict(VerdictStatus.YES, Property.ACCESSIBLE, reasons + ["self-loop-present"], "gl-union-trace")
        if sys.drift.trace() != 0:
            return _verdict(VerdictStatus.YES, Property.ACCESSIBLE, reasons + ["no-self-loop", "trace-nonzero"], "gl-union-trace")
        # every generator is traceless, so the algebra stays inside sl(n)
        return _verdict(VerdictStatus.NO, Property.ACCESSIBLE, reasons + ["no-self-loop", "trace-zero"], "gl-union-trace")

    if failures == ["no-large-component"]:
        # two-node strong components are enough once a control self-loop exists
        if has_loop:
            return _verdict(VerdictStatus.YES, Property.ACCESSIBLE, reasons + failures + ["self-loop-present"], "gl-union-self-loop")
        return _verdict(VerdictStatus.NOT_MET, Property.ACCESSIBLE, reasons + failures + ["no-self-loop"], "gl-union-self-loop")

    return _verdict(VerdictStatus.NOT_MET, Property.ACCESSIBLE, reasons + failures, "gl-union-trace")


# ---------------- Dispatcher ----------------
Checker = Callable[[BilinearSystem], Verdict]

DRIFTLESS_CHECKERS: dict[GroupKind, Checker] = {
    GroupKind.SO: check_so_driftless,
    GroupKind.SL: check_sl_driftless,
    GroupKind.GL: check_gl_driftless,
}

DRIFT_CHECKERS: dict[GroupKind, Checker] = {
    GroupKind.SO: check_so,
    GroupKind.SL: check_sl,
    GroupKind.GL: check_gl,
}


def run_checker(sys: BilinearSystem) -> Verdict:
    """The graph verdict alone: driftless checker when A = 0, drift checker otherwise."""
    table = DRIFTLESS_CHECKERS if sys.drift.is_zero() else DRIFT_CHECKERS
    return table[sys.kind](sys)


def _check_agreement(verdict: Verdict, oracle: OracleReport, sys: BilinearSystem) -> None:
    if verdict.status is VerdictStatus.NOT_MET:
        return
    claimed = verdict.status is VerdictStatus.YES
    if claimed != oracle.holds:
        message = (
            f"{verdict.criterion} said {verdict.status.value} for {sys.algebra} system "
            f"(drift {sys.drift}, controls {[str(c) for c in sys.controls]}) "
            f"but the generated algebra has dimension {oracle.dimension}/{oracle.full_dimension}"
        )
        logger.error(message)
        raise SoundnessError(message)


def analyze(
    sys: BilinearSystem,
    with_oracle: bool = False,
    timing: Optional[Timing] = None,
) -> tuple[Verdict, Optional[OracleReport]]:
    """
    Run the checker for the system's group (driftless variant when A = 0).
    The oracle runs when asked for, and always when the criterion does not
    apply. A Yes/No verdict that contradicts the oracle raises SoundnessError.
    """
    started = time.perf_counter()
    verdict = run_checker(sys)
    if timing is not None:
        timing.criteria_s = time.perf_counter() - started
    logger.info("%s: %s via %s %s", sys.algebra, verdict.status.value, verdict.criterion, verdict.reasons)

    oracle = None
    if with_oracle or verdict.status is VerdictStatus.NOT_MET:
        started = time.perf_counter()
        oracle = larc_oracle(sys)
        if timing is not None:
            timing.oracle_s = time.perf_counter() - started
        logger.info("%s: oracle dimension %d/%d", sys.algebra, oracle.dimension, oracle.full_dimension)
        _check_agreement(verdict, oracle, sys)
    return verdict, oracle
