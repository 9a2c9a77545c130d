# lets us read the golden verdicts from disk
import json
import logging
from pathlib import Path

from pydantic import TypeAdapter, ValidationError

from schemas.control_schema import ExampleResult, ExamplesReport, GoldenEntry
from tools.criteria import analyze
from tools.errors import ConfigError, SoundnessError, SystemParseError
from tools.system_model import parse_system

"""
golden_examples.py
------------------
Runs the eight bundled systems (data/systems/ex1..ex8.sys) and compares each
verdict and oracle dimension with data/golden_examples.json.
"""

logger = logging.getLogger(__name__)

_GOLDEN_LIST = TypeAdapter(list[GoldenEntry])


def load_golden(path: Path) -> list[GoldenEntry]:
    """Read the golden table. A missing or broken file is a ConfigError."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"golden file not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"golden file is not valid JSON: {path} ({e})") from e
    try:
        return _GOLDEN_LIST.validate_python(raw)
    except ValidationError as e:
        raise ConfigError(f"golden file has unexpected shape: {path} ({e})") from e


def check_example(entry: GoldenEntry, systems_dir: Path) -> ExampleResult:
    result = ExampleResult(
        name=entry.name,
        passed=False,
        expected_status=entry.status.value,
        expected_criterion=entry.criterion,
        expected_dimension=entry.dimension,
    )
    path = systems_dir / entry.file
    try:
        with open(path, "rb") as f:
            sys = parse_system(f.read())
        verdict, oracle = analyze(sys, with_oracle=True)
    except OSError as e:
        result.error = f"{path}: {e.strerror or e}"
        return result
    except SystemParseError as e:
        result.error = f"{path}:{e.line}: {e.message}"
        return result
    except SoundnessError as e:
        result.error = f"soundness: {e}"
        return result

    result.actual_status = verdict.status.value
    result.actual_criterion = verdict.criterion
    result.actual_dimension = oracle.dimension
    result.full_dimension = oracle.full_dimension
    result.passed = (
        verdict.status is entry.status
        and verdict.criterion == entry.criterion
        and oracle.dimension == entry.dimension
        and oracle.full_dimension == entry.full_dimension
    )
    if not result.passed:
        logger.warning("golden mismatch for %s: %s", entry.name, result.model_dump())
    return result


def run_examples(golden_path: Path, systems_dir: Path) -> ExamplesReport:
    results = [check_example(entry, systems_dir) for entry in load_golden(golden_path)]
    passed = sum(r.passed for r in results)
    return ExamplesReport(passed=passed, failed=len(results) - passed, results=results)
