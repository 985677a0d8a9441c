from .channel_schema import (
    ActionKind,
    ChannelStatus,
    ModelKind,
    Observation,
    ObservationKind,
    SlotAction,
    SlotOutcome,
)
from .protocol_schema import (
    ElectionParams,
    Phase,
    ProtocolKind,
    RoundOutcome,
    RoundSchedule,
    StationState,
)
from .sim_schema import MetricStats, MetricsSummary, RoundEstimate, RunMetrics, SimConfig
from .analytic_schema import (
    AnalyticReport,
    ConstantsReport,
    DominanceResult,
    MellinReport,
    OptimalAlpha,
    TheoryBounds,
)
from .record_schema import (
    SUMMARY_COLUMNS,
    ExperimentRecord,
    SummaryRow,
    VerificationCheck,
    VerificationReport,
)

__all__ = [
    "ActionKind",
    "ChannelStatus",
    "ModelKind",
    "Observation",
    "ObservationKind",
    "SlotAction",
    "SlotOutcome",
    "ElectionParams",
    "Phase",
    "ProtocolKind",
    "RoundOutcome",
    "RoundSchedule",
    "StationState",
    "MetricStats",
    "MetricsSummary",
    "RoundEstimate",
    "RunMetrics",
    "SimConfig",
    "AnalyticReport",
    "ConstantsReport",
    "DominanceResult",
    "MellinReport",
    "OptimalAlpha",
    "TheoryBounds",
    "SUMMARY_COLUMNS",
    "ExperimentRecord",
    "SummaryRow",
    "VerificationCheck",
    "VerificationReport",
]
