"""Prioritise candidate data items for business analytics.

A linking model ties data items through analyses to the decisions of a
business function; swing-weighting judgments and data-support grades are
aggregated into consensus parameters; an additive priority index then
ranks the data items by how much weighted decision support they carry.
"""

from ._kernels import backend_name
from .elicitation import (
    SUPPORT_VALUES,
    Assessor,
    ConsensusParameters,
    ScenarioJudgments,
    SupportJudgment,
    SwingGroup,
    SwingJudgment,
    aggregate_group,
    aggregate_scenario,
    aggregate_support,
    build_groups,
    compose_weights,
    consistency_probe,
    normalize_swings,
    support_value,
    validate_swings,
)
from .errors import (
    DataprioError,
    IncompleteScenarioError,
    InvariantError,
    ParseError,
    SchemaError,
)
from .fixtures import (
    HRFixture,
    load_demo_judgments,
    load_demo_model,
    load_demo_parameters,
    load_hr_fixture,
)
from .model import (
    Analysis,
    DataItem,
    Decision,
    IncidenceMap,
    LinkingModel,
    Process,
    ValueStream,
    coverage_report,
    derive_incidence,
    validate_model,
)
from .documents import (
    AggregatedParameters,
    export_document,
    export_report,
    import_document,
    import_report,
    resolve_parameters,
)
from .scoring import (
    PriorityReport,
    SensitivityReport,
    build_priority_report,
    compare_top_n,
    perturb_sensitivity,
    priority_index,
    rank_items,
    rollup_weights,
    scenario_delta,
    total_weighted_support,
)

__version__ = "0.1.0"
