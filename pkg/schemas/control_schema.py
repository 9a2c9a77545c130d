# Pydantic is used to define and validate structured data
from pydantic import BaseModel, ConfigDict, Field, model_validator
from enum import Enum
from typing import List, Optional



# ------------------------ Verdict Models ------------------------
# Everything the checkers decide, and everything the CLI prints or saves,
# goes through these models so JSON output always has the same shape.


class VerdictStatus(str, Enum):
    YES = "GuaranteedYes"             # the criterion proves the property
    NO = "GuaranteedNo"               # a necessary condition fails
    NOT_MET = "HypothesisNotMet"      # the criterion does not apply; no claim


class Property(str, Enum):
    CONTROLLABLE = "Controllable"
    ACCESSIBLE = "Accessible"


# ---------------- Verdict ----------------
# One checker's answer plus the reason trail that led to it
class Verdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    status: VerdictStatus
    property: Property
    reasons: List[str]       # machine-readable codes, in the order they were checked
    criterion: str           # which decision procedure answered, e.g. "so-union-connectivity"


# ---------------- Oracle ----------------
# Result of the exact Lie-algebra rank computation
class OracleReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    dimension: int = Field(ge=0)
    full_dimension: int = Field(ge=0)
    holds: bool

    @model_validator(mode="after")
    def _consistent(self) -> "OracleReport":
        if self.dimension > self.full_dimension:
            raise ValueError("dimension exceeds the full algebra dimension")
        if self.holds != (self.dimension == self.full_dimension):
            raise ValueError("holds must equal (dimension == full_dimension)")
        return self



# ------------------------ Report Models ------------------------

# ---------------- System summary ----------------
class SystemSummary(BaseModel):
    algebra: str     # e.g. "so(6)"
    n: int
    m: int           # number of (deduplicated) controls
    drift: str       # drift written over the canonical basis
    controls: List[str]


# ---------------- Graph stats ----------------
# Partitions are lists of sorted node lists, ordered by smallest node
class GraphStats(BaseModel):
    directed: bool
    drift_links: int
    control_links: int
    control_components: List[List[int]]
    union_components: List[List[int]]
    control_connected: bool         # connected (so) / strongly connected (sl, gl)
    union_connected: bool
    control_self_loops: List[int] = []
    drift_trace: str = "0"


# ---------------- Timing ----------------
class Timing(BaseModel):
    parse_s: float = 0.0
    criteria_s: float = 0.0
    oracle_s: float = 0.0


# ---------------- Full analysis report ----------------
class Report(BaseModel):
    source: str                       # file the system was read from
    system: SystemSummary
    graphs: GraphStats
    verdict: Verdict
    oracle: Optional[OracleReport] = None
    timing: Optional[Timing] = None   # only filled with --timing (not deterministic)
    timestamp: Optional[str] = None   # only filled when the report is saved to disk



# ------------------------ Campaign Models ------------------------

# ---------------- randcheck ----------------
class RandcheckSummary(BaseModel):
    group: str
    n: int
    trials: int
    seed: int
    max_controls: int
    agree: int = 0                    # Yes/No verdicts confirmed by the oracle
    hypothesis_not_met: int = 0
    violation: int = 0
    by_status: dict[str, int] = {}    # verdict status -> count
    oracle_holds: int = 0
    violating_seeds: List[int] = []   # first few trial seeds that disagreed


# ---------------- examples ----------------
# One line of data/golden_examples.json
class GoldenEntry(BaseModel):
    name: str                  # e.g. "ex1"
    file: str                  # file name inside the systems folder
    status: VerdictStatus
    criterion: str
    dimension: int = Field(ge=0)
    full_dimension: int = Field(ge=1)


class ExampleResult(BaseModel):
    name: str                         # e.g. "ex4"
    passed: bool
    expected_status: str
    actual_status: Optional[str] = None
    expected_criterion: str
    actual_criterion: Optional[str] = None
    expected_dimension: int
    actual_dimension: Optional[int] = None
    full_dimension: Optional[int] = None
    error: Optional[str] = None       # set when the file failed to load


class ExamplesReport(BaseModel):
    passed: int
    failed: int
    results: List[ExampleResult]
