"""
Model documents: one JSON object describing hardware, workload, communication
topology and the worker sweep. See README.md for the schema.
"""
import logging
import sys
import json
import os

from typing import List, Literal, Optional, Union
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, ValidationError, field_validator, model_validator

import core_model
import graph_partition
import net_arch
import speedup

from core_model import CommTopology, GradientDescentModel, GraphWorkload, HardwareSpec
from errors import ConfigError, ScaleModelError

logging.basicConfig(
    level=logging.INFO,  # Default to INFO level
    format='%(filename)s:%(lineno)d | %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger("model-config")

class CommConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    topology: str
    bits_per_param: Literal[32, 64] = 32
    stages: int = Field(default=2, ge=1)

    @field_validator("topology")
    @classmethod
    def known_topology(cls, v):
        if v not in core_model.TOPOLOGIES:
            raise ValueError(f"unknown topology '{v}' (known: {', '.join(core_model.TOPOLOGIES)})")
        return v

    def to_topology(self) -> CommTopology:
        return CommTopology(variant=self.topology, stages=self.stages, bits_per_param=self.bits_per_param)

class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n_min: int = Field(default=1, ge=1)
    n_max: int = Field(ge=1, le=speedup.MAX_WORKERS)

    @model_validator(mode="after")
    def ordered(self):
        if self.n_min > self.n_max:
            raise ValueError(f"n_min ({self.n_min}) must not exceed n_max ({self.n_max})")
        return self

class GradientDescentConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cost_per_point_ops: Optional[float] = Field(default=None, ge=0)
    num_params: Optional[float] = Field(default=None, ge=0)
    architecture: Optional[Union[str, dict]] = None
    batch_size: float = Field(ge=0)
    scaling: Literal["strong", "weak"] = "strong"

    @model_validator(mode="after")
    def one_source(self):
        explicit = self.cost_per_point_ops is not None or self.num_params is not None
        if self.architecture is not None and explicit:
            raise ValueError("give either an architecture or explicit cost_per_point_ops/num_params, not both")
        if self.architecture is None and (self.cost_per_point_ops is None or self.num_params is None):
            raise ValueError("cost_per_point_ops and num_params are required without an architecture")
        return self

class GraphInferenceConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    num_vertices: Optional[int] = Field(default=None, ge=1)
    num_edges: Optional[int] = Field(default=None, ge=0)
    edge_list: Optional[str] = None
    degree_file: Optional[str] = None
    num_states: int = Field(ge=1)
    replication_factor: float = Field(default=0.0, ge=0)
    shared_memory: bool = False
    literal_divide_by_n: bool = False
    trials: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    assignment: Literal["uniform", "balanced"] = "uniform"

    @model_validator(mode="after")
    def one_graph(self):
        sources = [self.edge_list is not None, self.degree_file is not None,
                   self.num_vertices is not None or self.num_edges is not None]
        if sum(sources) != 1:
            raise ValueError("give exactly one of edge_list, degree_file, or num_vertices/num_edges")
        if sources[2] and (self.num_vertices is None or self.num_edges is None):
            raise ValueError("num_vertices and num_edges are both required")
        return self

class WorkloadConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gradient_descent: Optional[GradientDescentConfig] = None
    graph_inference: Optional[GraphInferenceConfig] = None

    @model_validator(mode="after")
    def exactly_one(self):
        if (self.gradient_descent is None) == (self.graph_inference is None):
            raise ValueError("exactly one of gradient_descent or graph_inference is required")
        return self

class ModelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    hardware: HardwareSpec
    workload: WorkloadConfig
    comm: CommConfig = CommConfig(topology="none")
    sweep: SweepConfig
    reference_n: Optional[int] = Field(default=None, ge=1)

    # filled in by parse_config
    _gd_model: Optional[GradientDescentModel] = PrivateAttr(default=None)
    _network_counts: Optional[net_arch.NetworkCounts] = PrivateAttr(default=None)
    _base_dir: str = PrivateAttr(default=".")

    @property
    def gd_model(self) -> Optional[GradientDescentModel]:
        return self._gd_model

    @property
    def network_counts(self) -> Optional[net_arch.NetworkCounts]:
        return self._network_counts

    @property
    def base_dir(self) -> str:
        return self._base_dir

    @property
    def topology(self) -> CommTopology:
        return self.comm.to_topology()

    @property
    def mode(self) -> str:
        if self.workload.gradient_descent is not None:
            return self.workload.gradient_descent.scaling
        return "strong"

def _describe(error: ValidationError) -> str:
    first = error.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or "document"
    message = first["msg"]
    if first["type"] == "missing":
        return f"missing required field '{location}'"
    return f"{location}: {message}"

def parse_config(document: Union[str, dict], base_dir: Optional[str] = None) -> ModelConfig:
    """
    Validate a model document (JSON text or an already-decoded object).

    With an architecture, C is the network's gradient multiply-adds per data
    point and W its total weights.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config is not valid JSON: {e}") from e
    if not isinstance(document, dict):
        raise ConfigError("config must be a JSON object")

    try:
        config = ModelConfig.model_validate(document)
    except ValidationError as e:
        raise ConfigError(_describe(e)) from e

    if base_dir is not None:
        config._base_dir = base_dir

    gd = config.workload.gradient_descent
    if gd is not None:
        if gd.architecture is not None:
            counts = net_arch.architecture_counts(gd.architecture)
            config._network_counts = counts
            config._gd_model = GradientDescentModel(
                cost_per_point_ops=counts.gradient_madds,
                batch_size=gd.batch_size,
                num_params=counts.total_weights,
            )
        else:
            config._gd_model = GradientDescentModel(
                cost_per_point_ops=gd.cost_per_point_ops,
                batch_size=gd.batch_size,
                num_params=gd.num_params,
            )
        if config.topology.variant != "none" and config.gd_model.num_params == 0:
            raise ConfigError("num_params must be > 0 with a communicating topology")
        logger.info(f"gradient descent: C={config.gd_model.cost_per_point_ops}, W={config.gd_model.num_params}")
    return config

def load_config_file(path: str) -> ModelConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config(text, base_dir=os.path.dirname(os.path.abspath(path)))

def _resolve(config: ModelConfig, path: str) -> str:
    return path if os.path.isabs(path) else os.path.join(config.base_dir, path)

def load_degrees(config: ModelConfig) -> graph_partition.DegreeSequence:
    gi = config.workload.graph_inference
    if gi is None:
        raise ConfigError("the config has no graph_inference workload")
    if gi.edge_list is not None:
        edges = graph_partition.load_edge_list(_resolve(config, gi.edge_list))
        return graph_partition.degrees_from_edge_list(edges)
    if gi.degree_file is not None:
        return graph_partition.load_degree_file(_resolve(config, gi.degree_file))
    return graph_partition.degrees_from_counts(gi.num_vertices, gi.num_edges)

def graph_workload(config: ModelConfig, degs: graph_partition.DegreeSequence) -> GraphWorkload:
    gi = config.workload.graph_inference
    return GraphWorkload(
        num_vertices=degs.num_vertices,
        num_edges=degs.num_edges,
        num_states=gi.num_states,
        replication_factor=gi.replication_factor,
        shared_memory=gi.shared_memory,
        literal_divide_by_n=gi.literal_divide_by_n,
    )

def build_time_model(config: ModelConfig, seed: int = 0, trials: int = 100, workers: int = 1):
    """The n -> TimeBreakdown closure the config describes."""
    hw = config.hardware
    topo = config.topology

    if config.gd_model is not None:
        m = config.gd_model
        if config.mode == "weak":
            return lambda n: core_model.per_instance_breakdown(m, hw, topo, n)
        return lambda n: core_model.gd_step_time(m, hw, topo, n)

    gi = config.workload.graph_inference
    degs = load_degrees(config)
    w = graph_workload(config, degs)
    estimates = {}

    def model(n):
        if n not in estimates:
            estimates[n] = graph_partition.estimate_partition(
                degs, n, trials, seed, assignment=gi.assignment, workers=workers)
        return core_model.gi_step_time(w, estimates[n].mean_max_edges, hw, n)
    return model

def build_curve(config: ModelConfig, seed: int = 0, trials: int = 100, workers: int = 1,
                n_range: Optional[tuple] = None) -> speedup.SpeedupCurve:
    n_range = n_range or (config.sweep.n_min, config.sweep.n_max)
    model = build_time_model(config, seed=seed, trials=trials, workers=workers)

    if config.mode == "weak":
        reference_n = config.reference_n if config.reference_n is not None else n_range[0]
        return speedup.weak_scaling_curve(model, n_range, reference_n)
    return speedup.strong_scaling_curve(model, n_range)

def partition_estimates(config: ModelConfig, seed: int = 0, trials: int = 100, workers: int = 1,
                        n_range: Optional[tuple] = None) -> List[graph_partition.PartitionEstimate]:
    gi = config.workload.graph_inference
    if gi is None:
        raise ScaleModelError("partition needs a graph_inference workload")
    n_min, n_max = n_range or (config.sweep.n_min, config.sweep.n_max)
    speedup.check_range((n_min, n_max))

    degs = load_degrees(config)
    return [graph_partition.estimate_partition(degs, n, trials, seed, assignment=gi.assignment, workers=workers)
            for n in range(n_min, n_max + 1)]
