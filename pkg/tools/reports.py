# OS lets us create the log folder and join file paths
import os
# Datetime gives us the timestamp used in saved file names
from datetime import datetime
from typing import Optional

from schemas.control_schema import (
    GraphStats,
    OracleReport,
    Report,
    SystemSummary,
    Timing,
    Verdict,
    VerdictStatus,
)
from tools.graph_core import (
    UGraph,
    components,
    connected,
    strip_self_loops,
    strong_components,
    strongly_connected,
    union_graph,
    weak_components,
)
from tools.system_model import BilinearSystem, control_graph, drift_graph

# ANSI color codes for console output
GREEN = "\033[92m"   # guaranteed yes / pass
YELLOW = "\033[93m"  # hypothesis not met
RED = "\033[91m"     # guaranteed no / failure
BLUE = "\033[94m"    # oracle info
RESET = "\033[0m"    # reset to default

STATUS_COLORS = {
    VerdictStatus.YES: GREEN,
    VerdictStatus.NO: RED,
    VerdictStatus.NOT_MET: YELLOW,
}


# ---------------- Helper: Graph Stats ----------------
def _partition(parts) -> list[list[int]]:
    return [sorted(p) for p in parts]


def graph_stats(sys: BilinearSystem) -> GraphStats:
    """Connectivity facts about the drift, control and union graphs."""
    drift = drift_graph(sys)
    contr = control_graph(sys)

    if isinstance(contr, UGraph):
        union = union_graph(drift, contr)
        return GraphStats(
            directed=False,
            drift_links=len(drift.edges),
            control_links=len(contr.edges),
            control_components=_partition(components(contr)),
            union_components=_partition(components(union)),
            control_connected=connected(contr),
            union_connected=connected(union),
        )

    # digraphs: reachability is read on the simple shadows
    union = union_graph(strip_self_loops(drift), strip_self_loops(contr))
    return GraphStats(
        directed=True,
        drift_links=len(drift.arcs),
        control_links=len(contr.arcs),
        control_components=_partition(weak_components(contr)),
        union_components=_partition(strong_components(union)),
        control_connected=strongly_connected(contr),
        union_connected=strongly_connected(union),
        control_self_loops=contr.self_loops(),
        drift_trace=str(sys.drift.trace()),
    )


# ---------------- Helper: Build Report ----------------
def build_report(
    sys: BilinearSystem,
    verdict: Verdict,
    oracle: Optional[OracleReport],
    source: str,
    timing: Optional[Timing] = None,
) -> Report:
    summary = SystemSummary(
        algebra=str(sys.algebra),
        n=sys.n,
        m=len(sys.controls),
        drift=str(sys.drift),
        controls=[str(c) for c in sys.controls],
    )
    return Report(
        source=source,
        system=summary,
        graphs=graph_stats(sys),
        verdict=verdict,
        oracle=oracle,
        timing=timing,
    )


# ---------------- Helper: Render Text ----------------
def render_text(report: Report, color: bool = True) -> str:
    """Human-readable summary; color=False for the TXT log."""
    paint = (lambda code, text: f"{code}{text}{RESET}") if color else (lambda code, text: text)
    v = report.verdict
    g = report.graphs
    lines = [
        f"System   : {report.source}",
        f"Algebra  : {report.system.algebra}  (m = {report.system.m} control(s))",
        f"Drift    : {report.system.drift}",
        f"Controls : {', '.join(report.system.controls) or '<none>'}",
        f"Control components : {g.control_components}",
        f"Union components   : {g.union_components}",
    ]
    if g.directed:
        lines.append(f"Self-loops : {g.control_self_loops or 'none'}   tr A = {g.drift_trace}")
    lines.append("-" * 60)
    lines.append(paint(STATUS_COLORS[v.status], f"{v.status.value} ({v.property.value})") + f"  via {v.criterion}")
    lines.append(f"Reasons  : {', '.join(v.reasons)}")
    if report.oracle is not None:
        o = report.oracle
        mark = "holds" if o.holds else "fails"
        lines.append(paint(BLUE, f"Oracle   : dimension {o.dimension}/{o.full_dimension} ({mark})"))
    if report.timing is not None:
        t = report.timing
        lines.append(f"Timing   : parse {t.parse_s:.4f}s, criteria {t.criteria_s:.4f}s, oracle {t.oracle_s:.4f}s")
    return "\n".join(lines) + "\n"


# ---------------- Helper: Save Logs: JSON + TXT ------------------
def save_analysis_log(report: Report, log_dir: str = "logs") -> dict[str, str]:
    """
    Save the Report twice:
      1) JSON - same shape as `analyze --json`
      2) TXT  - the uncolored console summary
    Returns dict of paths so the caller can print them.
    """
    os.makedirs(log_dir, exist_ok=True)

    # Ex: logs/analysis_2025-09-16_21-30-00.json
    timestamp = datetime.now().strftime("%Y-%m-%d_%H-%M-%S")
    stamped = report.model_copy(update={"timestamp": timestamp})
    # two saves within one second get _1, _2, ... instead of overwriting
    suffix = 0
    while True:
        base_name = f"analysis_{timestamp}" + (f"_{suffix}" if suffix else "")
        json_path = os.path.join(log_dir, f"{base_name}.json")
        txt_path = os.path.join(log_dir, f"{base_name}.txt")
        try:
            # "x" fails when the name is taken
            with open(json_path, "x", encoding="utf-8") as f:
                f.write(stamped.model_dump_json(indent=2))
            break
        except FileExistsError:
            suffix += 1

    with open(txt_path, "w", encoding="utf-8") as f:
        f.write("Analysis Report\n")
        f.write(f"Run      : {timestamp}\n")
        f.write(render_text(stamped, color=False))

    return {"json": json_path, "txt": txt_path}
