"""
Domain model for the network-formation lab.

- errors: exception hierarchy
- graph: immutable labeled graphs and standard constructors
- this module: parameters, labels, verdicts and run records shared by the engines
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Optional, Tuple

from .errors import GraphError, InvariantViolation, NetlabError, OracleLimitError, ParamsError
from .graph import Graph

# Exact payoff values
Payoff = Fraction

DEFAULT_MAX_ITERATIONS = 1000
DEFAULT_IDLE_TERMINATE = 30
DEFAULT_REPETITIONS = 100
DEFAULT_TAU_FRACTION = Fraction(1, 10)


def to_fraction(value) -> Fraction:
    """Exact conversion; floats go through their shortest repr so 0.35 becomes 7/20."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ParamsError(f"{value!r} is not a rational number")


@dataclass(frozen=True)
class Params:
    """Benefit ``delta`` and cost ``cost`` of a link, both in (0, 1).

    ``relaxed`` admits the closed upper bound 1 used by grid endpoints.
    """

    delta: Fraction
    cost: Fraction
    relaxed: bool = False

    def __post_init__(self):
        delta = to_fraction(self.delta)
        cost = to_fraction(self.cost)
        for name, value in (("delta", delta), ("cost", cost)):
            upper_ok = value <= 1 if self.relaxed else value < 1
            if not (value > 0 and upper_ok):
                bound = "(0, 1]" if self.relaxed else "(0, 1)"
                raise ParamsError(f"{name} must lie in {bound}, got {value}")
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "cost", cost)

    @property
    def net_link_value(self) -> Fraction:
        """delta - cost, the direct value of one link."""
        return self.delta - self.cost

    @property
    def bridge_value(self) -> Fraction:
        """delta squared, the value of bridging one non-adjacent neighbor pair."""
        return self.delta * self.delta

    def __str__(self) -> str:
        return f"delta={self.delta}, cost={self.cost}"


class ClassLabel(str, Enum):
    """Topology classes in their listing order (also the modal tie-break order)."""

    NULL = "NULL"
    STAR = "STAR"
    SHARED = "SHARED"
    COMPLETE = "COMPLETE"
    NEAR_NULL = "NEAR-NULL"
    NEAR_STAR = "NEAR-STAR"
    NEAR_SHARED = "NEAR-SHARED"
    NEAR_COMPLETE = "NEAR-COMPLETE"
    BIPARTITE_COMPLETE = "BIPARTITE-COMPLETE"
    TURAN = "TURAN"
    EQUI_K_PARTITE_COMPLETE = "EQUI-K-PARTITE-COMPLETE"
    EQUI_K_PARTITE = "EQUI-K-PARTITE"
    K_PARTITE_COMPLETE = "K-PARTITE-COMPLETE"
    K_PARTITE = "K-PARTITE"
    UNCLASSIFIED = "UNCLASSIFIED"

    @classmethod
    def parse(cls, text: str) -> "ClassLabel":
        """Accept label strings, member names and the short aliases (TUR_GRA, ...)."""
        key = str(text).strip().upper()
        if key in LABEL_ALIASES:
            return LABEL_ALIASES[key]
        for label in cls:
            if key in (label.value, label.name):
                return label
        raise ValueError(f"Unknown class label {text!r}")

    @property
    def rank(self) -> int:
        return list(ClassLabel).index(self)


LABEL_ALIASES = {
    "TUR_GRA": ClassLabel.TURAN,
    "BIPARCOMP": ClassLabel.BIPARTITE_COMPLETE,
    "NRSHARED": ClassLabel.NEAR_SHARED,
    "KPARCOMP": ClassLabel.K_PARTITE_COMPLETE,
}


class Topology(str, Enum):
    """Standard topologies named by the stability characterization."""

    COMPLETE = "Complete"
    NULL = "Null"
    COMPLETE_BIPARTITE = "CompleteBipartite"
    CYCLE = "Cycle"
    COMPLETE_EQUI_TRIPARTITE = "CompleteEquiTripartite"
    COMPLETE_EQUI_K_PARTITE = "CompleteEquiKPartite"


class DeviationKind(str, Enum):
    ADD_EDGE = "add"
    DELETE_EDGE = "delete"


class ActionKind(str, Enum):
    ADD_EDGE = "add"
    DELETE_EDGE = "delete"
    PASS = "pass"


@dataclass(frozen=True)
class Deviation:
    """A profitable single-link deviation; ``i`` is the node that initiates it."""

    kind: DeviationKind
    i: int
    j: int
    gain_i: Payoff
    gain_j: Payoff


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    witness: Optional[Deviation] = None


@dataclass(frozen=True)
class RegionPrediction:
    region_id: str
    topologies: FrozenSet[Topology]


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    target: Optional[int] = None
    gain: Payoff = Fraction(0)


@dataclass(frozen=True)
class ClassifierConfig:
    tau_fraction: Fraction = DEFAULT_TAU_FRACTION

    def threshold(self, n: int) -> Fraction:
        return to_fraction(self.tau_fraction) * (n - 1) ** 2


@dataclass(frozen=True)
class Coloring:
    k: int
    classes: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class Classification:
    primary: ClassLabel
    all_matches: FrozenSet[ClassLabel]
    msd: Dict[ClassLabel, Fraction] = field(default_factory=dict)
    threshold: Fraction = Fraction(0)
    colors: int = 0


@dataclass(frozen=True)
class SimConfig:
    n: int
    density: Fraction
    params: Params
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    idle_terminate: int = DEFAULT_IDLE_TERMINATE
    repetitions: int = DEFAULT_REPETITIONS
    master_seed: int = 0
    allow_indifferent_adds: bool = False
    detect_cycles: bool = True
    tau_fraction: Fraction = DEFAULT_TAU_FRACTION

    def __post_init__(self):
        density = to_fraction(self.density)
        if not 0 <= density <= 1:
            raise ParamsError(f"Density must lie in [0, 1], got {density}")
        object.__setattr__(self, "density", density)
        if self.n < 2:
            raise ParamsError(f"Simulations need at least 2 nodes, got {self.n}")
        for name in ("max_iterations", "idle_terminate", "repetitions"):
            if getattr(self, name) < 1:
                raise ParamsError(f"{name} must be a positive integer, got {getattr(self, name)}")


@dataclass(frozen=True)
class TrajectoryPoint:
    iteration: int
    clustering: Fraction
    utility: Payoff
    acts: int = 0


@dataclass(frozen=True)
class RunResult:
    final_graph: Graph
    converged: bool
    dynamic_equilibrium: bool
    iterations_used: int
    acts: int
    trajectory: Tuple[TrajectoryPoint, ...]
    label: ClassLabel
    all_matches: FrozenSet[ClassLabel]
    seed: int = 0


@dataclass(frozen=True)
class BatchStats:
    repetitions: int
    class_frequencies: Dict[ClassLabel, int]
    match_frequencies: Dict[ClassLabel, int]
    modal_class: ClassLabel
    mean_utility: Fraction
    mean_iterations: Fraction
    mean_acts: Fraction
    mean_final_clustering: Fraction
    converged_runs: int
    dynamic_equilibria: int


class EfficiencyLabel(str, Enum):
    NULL = "Null"
    TURAN = "Turan"
    COMPLETE = "Complete"
    CONJECTURED = "Conjectured"
    OTHER = "Other"


class Certainty(str, Enum):
    PROVEN = "proven"
    CONJECTURED = "conjectured"


@dataclass(frozen=True)
class EfficiencyCandidate:
    label: EfficiencyLabel
    graph: Graph
    utility: Payoff


@dataclass(frozen=True)
class EfficiencyVerdict:
    label: EfficiencyLabel
    graph: Graph
    utility: Payoff
    certainty: Certainty
    region: str
    candidates: Tuple[EfficiencyCandidate, ...] = ()
    predicted: Optional[EfficiencyLabel] = None
    resolved_by_oracle: bool = False


class PosKind(str, Enum):
    EXACT = "EXACT"
    LOWER_BOUND = "LB"
    UNDEFINED = "UNDEF"


class PosMethod(str, Enum):
    CLOSED_FORM = "closed_form"
    ORACLE = "oracle"


@dataclass(frozen=True)
class PosVerdict:
    kind: PosKind
    value: Optional[Fraction]
    method: PosMethod
    best_stable_utility: Payoff
    efficient_utility: Payoff
    region: str = ""
    exhaustive: bool = True


@dataclass(frozen=True)
class OracleResult:
    n: int
    params: Params
    visited: int
    stable_graphs: Tuple[int, ...]
    max_stable_utility: Optional[Payoff]
    efficient_graphs: Tuple[int, ...]
    max_utility: Payoff
    pos: PosVerdict
    stable_utilities: Tuple[Payoff, ...] = ()


class ClaimStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    AUDIT = "AUDIT"


@dataclass(frozen=True)
class ClaimResult:
    delta: Fraction
    cost: Fraction
    claim: str
    status: ClaimStatus
    detail: str = ""


@dataclass(frozen=True)
class SweepSpec:
    """Grid of simulation cells: every n x delta x cost x density combination."""

    n_values: Tuple[int, ...]
    delta_values: Tuple[Fraction, ...]
    cost_values: Tuple[Fraction, ...]
    densities: Tuple[Fraction, ...]
    repetitions: int = DEFAULT_REPETITIONS
    master_seed: int = 0
    output_dir: str = "output"
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    idle_terminate: int = DEFAULT_IDLE_TERMINATE
    allow_indifferent_adds: bool = False
    detect_cycles: bool = True
    tau_fraction: Fraction = DEFAULT_TAU_FRACTION
    workers: int = 0
    progress: bool = False

    def cells(self) -> Tuple[SimConfig, ...]:
        """Simulation settings per cell, n outermost, then delta, cost and density."""
        return tuple(
            SimConfig(
                n=n,
                density=density,
                params=Params(delta, cost, relaxed=True),
                max_iterations=self.max_iterations,
                idle_terminate=self.idle_terminate,
                repetitions=self.repetitions,
                master_seed=self.master_seed,
                allow_indifferent_adds=self.allow_indifferent_adds,
                detect_cycles=self.detect_cycles,
                tau_fraction=self.tau_fraction,
            )
            for n in self.n_values
            for delta in self.delta_values
            for cost in self.cost_values
            for density in self.densities
        )


__all__ = [
    "Action",
    "ActionKind",
    "BatchStats",
    "Certainty",
    "ClaimResult",
    "ClaimStatus",
    "ClassLabel",
    "Classification",
    "ClassifierConfig",
    "Coloring",
    "Deviation",
    "DeviationKind",
    "EfficiencyCandidate",
    "EfficiencyLabel",
    "EfficiencyVerdict",
    "Graph",
    "GraphError",
    "InvariantViolation",
    "NetlabError",
    "OracleLimitError",
    "OracleResult",
    "Params",
    "ParamsError",
    "Payoff",
    "PosKind",
    "PosMethod",
    "PosVerdict",
    "RegionPrediction",
    "RunResult",
    "SimConfig",
    "StabilityReport",
    "SweepSpec",
    "Topology",
    "TrajectoryPoint",
    "to_fraction",
]
