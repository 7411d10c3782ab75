"""
Closed-form computation and communication times for one superstep.

Two workload families are modeled: data-parallel gradient descent and
vertex-partitioned graph inference (belief propagation). All functions are
pure; invariants of the inputs are enforced when the pydantic models are built.
"""
import logging
import sys
import math

from typing import Literal, Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator

logging.basicConfig(
    level=logging.INFO,  # Default to INFO level
    format='%(filename)s:%(lineno)d | %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger("core-model")

TOPOLOGIES = ("none", "linear", "log_tree", "spark_hybrid")

class HardwareSpec(BaseModel):
    """Per-worker arithmetic throughput and the link bandwidth between workers."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    peak_ops_per_sec: float = Field(gt=0, description="operations/second for the precision in use")
    efficiency: float = Field(gt=0, le=1, description="achievable fraction of the peak")
    bandwidth_bits_per_sec: float = Field(gt=0)

class CommTopology(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    variant: Literal["none", "linear", "log_tree", "spark_hybrid"]
    stages: int = Field(default=2, ge=1, description="rounds of a log_tree exchange (gather + broadcast)")
    bits_per_param: Literal[32, 64] = 32

class GradientDescentModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    cost_per_point_ops: float = Field(ge=0, description="C: operations per data point")
    batch_size: float = Field(ge=0, description="S: examples per step")
    num_params: float = Field(ge=0, description="W: model parameters")

class GraphWorkload(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    num_vertices: int = Field(ge=1)
    num_edges: int = Field(ge=0)
    num_states: int = Field(ge=1)
    replication_factor: float = Field(default=0.0, ge=0)
    shared_memory: bool = False
    literal_divide_by_n: bool = False

class TimeBreakdown(BaseModel):
    model_config = ConfigDict(frozen=True)

    t_cp: float = Field(ge=0)
    t_cm: float = Field(ge=0)
    t_total: float = Field(ge=0)

    @model_validator(mode="after")
    def check_total(self):
        if self.t_total != self.t_cp + self.t_cm:
            raise ValueError(f"t_total {self.t_total} != t_cp + t_cm ({self.t_cp} + {self.t_cm})")
        return self

    @classmethod
    def of(cls, t_cp, t_cm):
        return cls(t_cp=t_cp, t_cm=t_cm, t_total=t_cp + t_cm)

def effective_ops_per_sec(hw: HardwareSpec) -> float:
    return hw.peak_ops_per_sec * hw.efficiency

def _ceil_sqrt(n: int) -> int:
    return math.isqrt(n - 1) + 1

def comm_time(topo: CommTopology, n: int, num_params: float, hw: HardwareSpec) -> float:
    """
    Seconds spent exchanging num_params parameters among n workers.
    A single worker sends nothing, so n = 1 is 0 for every variant.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1 or topo.variant == "none":
        return 0.0

    message = topo.bits_per_param * num_params / hw.bandwidth_bits_per_sec
    if topo.variant == "log_tree":
        return topo.stages * message * math.log2(n)
    elif topo.variant == "spark_hybrid":
        # torrent broadcast + two-wave aggregation over ceil(sqrt(n)) groups
        return message * math.log2(n) + 2 * message * _ceil_sqrt(n)
    elif topo.variant == "linear":
        return message * n
    raise ValueError(f"unknown topology: {topo.variant}")

def gd_step_time(m: GradientDescentModel, hw: HardwareSpec, topo: CommTopology, n: int) -> TimeBreakdown:
    """Strong scaling: batch_size is the total batch split across n workers."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    t_cp = m.cost_per_point_ops * m.batch_size / (effective_ops_per_sec(hw) * n)
    t_cm = comm_time(topo, n, m.num_params, hw)
    return TimeBreakdown.of(t_cp, t_cm)

def per_instance_breakdown(m: GradientDescentModel, hw: HardwareSpec, topo: CommTopology, n: int) -> TimeBreakdown:
    """Weak scaling: batch_size is the per-worker mini-batch; times are per processed instance."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    t_cp = m.cost_per_point_ops * m.batch_size / effective_ops_per_sec(hw) / n
    t_cm = comm_time(topo, n, m.num_params, hw) / n
    return TimeBreakdown.of(t_cp, t_cm)

def per_instance_time(m: GradientDescentModel, hw: HardwareSpec, topo: CommTopology, n: int) -> float:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return (m.cost_per_point_ops * m.batch_size / effective_ops_per_sec(hw) + comm_time(topo, n, m.num_params, hw)) / n

def weak_speedup_limit(m: GradientDescentModel, hw: HardwareSpec, topo: CommTopology, reference_n: int) -> Optional[float]:
    """
    Asymptotic weak-scaling speedup relative to reference_n.

    Only the linear topology saturates: its per-instance time tends to bits*W/B.
    Returns None when the speedup grows without bound.
    """
    if topo.variant != "linear" or m.num_params == 0:
        return None
    floor = topo.bits_per_param * m.num_params / hw.bandwidth_bits_per_sec
    return per_instance_time(m, hw, topo, reference_n) / floor

def linear_scales(m: GradientDescentModel, hw: HardwareSpec, topo: CommTopology) -> bool:
    """
    Whether adding workers under the linear topology helps at all: the one-worker
    communication time must be below the one-worker computation time.
    """
    compute = m.cost_per_point_ops * m.batch_size / effective_ops_per_sec(hw)
    communicate = topo.bits_per_param * m.num_params / hw.bandwidth_bits_per_sec
    return communicate < compute

def bp_ops_per_edge(num_states: int) -> int:
    """Belief propagation cost per edge: belief update plus two messages."""
    if num_states < 0:
        raise ValueError(f"num_states must be >= 0, got {num_states}")
    return num_states + 2 * (num_states + num_states * num_states)

def gi_step_time(w: GraphWorkload, max_edges: float, hw: HardwareSpec, n: int, bits_per_value: int = 32) -> TimeBreakdown:
    """
    One graph-inference superstep on the most loaded of n workers.

    max_edges is max_i(E_i) for this n (E itself for n = 1). With
    literal_divide_by_n the compute term is additionally divided by n.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    t_cp = max_edges * bp_ops_per_edge(w.num_states) / effective_ops_per_sec(hw)
    if w.literal_divide_by_n:
        t_cp = t_cp / n

    if w.shared_memory or n == 1:
        t_cm = 0.0
    else:
        t_cm = bits_per_value / hw.bandwidth_bits_per_sec * w.replication_factor * w.num_vertices * w.num_states
    return TimeBreakdown.of(t_cp, t_cm)
