"""Packaged example data.

The HR fixture carries a real published parameter table (55 decisions over
25 processes and 6 value streams) for regression checks. Its analysis and
data-item layer is synthetic: the original links were never published, so
the model is flagged synthetic and item-level results are illustrative
only. The demo fixture is a three-decision model small enough to check by
hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .documents import AggregatedParameters, import_document
from .elicitation import ScenarioJudgments
from .model import LinkingModel

__all__ = [
    "HRFixture",
    "fixture_path",
    "load_hr_fixture",
    "load_demo_model",
    "load_demo_parameters",
    "load_demo_judgments",
]

_FIXTURE_DIR = Path(__file__).parent / "fixtures"


@dataclass(frozen=True)
class HRFixture:
    model: LinkingModel
    parameters: AggregatedParameters


def fixture_path(name: str) -> Path:
    """Absolute path of a packaged fixture file (handy for CLI examples)."""
    path = _FIXTURE_DIR / name
    if not path.is_file():
        names = ", ".join(sorted(p.name for p in _FIXTURE_DIR.glob("*.json")))
        raise FileNotFoundError(f"no fixture {name!r} (available: {names})")
    return path


def _load(kind: str, name: str):
    return import_document(kind, fixture_path(name).read_bytes())


def load_hr_fixture() -> HRFixture:
    return HRFixture(
        model=_load("model", "hr_model.json"),
        parameters=_load("aggregated", "hr_parameters.json"),
    )


def load_demo_model() -> LinkingModel:
    return _load("model", "demo_model.json")


def load_demo_parameters() -> AggregatedParameters:
    return _load("aggregated", "demo_parameters.json")


def load_demo_judgments() -> ScenarioJudgments:
    return _load("judgments", "demo_judgments.json")
