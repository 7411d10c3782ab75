import logging
import sys
import json
import traceback

from typing import Optional

import curve_output
import graph_partition
import model_config
import net_arch
import speedup
import utils
import validation

from pydantic import Field
from mcp.server.fastmcp import FastMCP

from errors import ScaleModelError

logging.basicConfig(
    level=logging.INFO,  # Default to INFO level
    format='%(filename)s:%(lineno)d | %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger("scalemodel-server")

try:
    mcp = FastMCP(
        name = "scalemodel",
        instructions=(
            "You estimate how distributed machine-learning workloads scale. "
            "Model documents are JSON objects with hardware, workload, comm and sweep sections."
        ),
    )
    logger.info("MCP server initialized successfully")
except Exception as e:
        err_msg = f"Error: {str(e)}"
        logger.info(f"{err_msg}")

def _curve(config_json, seed=None):
    config = model_config.parse_config(config_json)
    gi = config.workload.graph_inference
    return model_config.build_curve(
        config,
        seed=utils.resolve_seed(seed, gi.seed if gi else None),
        trials=utils.resolve_trials(None, gi.trials if gi else None),
    )

######################################
# Network
######################################
@mcp.tool()
def count_network(architecture_json: str = Field(description="architecture object or a preset name such as \"mnist_fc\"")) -> str:
    """
    Count weights and multiply-adds of a dense/convolutional network.
    architecture_json: {"input": {"side", "depth"}, "layers": [{"dense": {...}} | {"conv": {...}}]} or a preset name
    return: total_weights, forward_madds and gradient_madds
    """
    logger.info(f"count_network --> architecture: {architecture_json}")

    try:
        try:
            architecture = json.loads(architecture_json)
        except json.JSONDecodeError:
            architecture = architecture_json.strip()
        counts = net_arch.architecture_counts(architecture)
    except ScaleModelError as e:
        return f"Error: {e}"
    except Exception:
        err_msg = traceback.format_exc()
        logger.info(f"error message: {err_msg}")
        return "Error: the network could not be counted"
    return json.dumps(counts.model_dump())

######################################
# Speedup
######################################
@mcp.tool()
def speedup_curve(config_json: str = Field(description="model document (JSON)"), seed: Optional[int] = None) -> str:
    """
    Compute the speedup curve of a model document over its sweep range.
    return: CSV with header n,t_cp,t_cm,t_total,speedup
    """
    logger.info(f"speedup_curve --> config: {config_json}")

    try:
        return curve_output.emit_curve_csv(_curve(config_json, seed))
    except ScaleModelError as e:
        return f"Error: {e}"
    except Exception:
        err_msg = traceback.format_exc()
        logger.info(f"error message: {err_msg}")
        return "Error: the curve could not be computed"

@mcp.tool()
def optimal_workers(config_json: str = Field(description="model document (JSON)"), seed: Optional[int] = None) -> str:
    """
    Find the worker count with the highest speedup in the sweep range.
    return: the worker count, its speedup, and whether the workload scales at all
    """
    logger.info(f"optimal_workers --> config: {config_json}")

    try:
        curve = _curve(config_json, seed)
        n = speedup.optimal_nodes(curve)
        return json.dumps({"optimal_n": n, "speedup": curve.speedup_at(n), "scalable": speedup.is_scalable(curve)})
    except ScaleModelError as e:
        return f"Error: {e}"
    except Exception:
        err_msg = traceback.format_exc()
        logger.info(f"error message: {err_msg}")
        return "Error: the optimum could not be computed"

######################################
# Graph partition
######################################
@mcp.tool()
def partition_estimate(num_vertices: int, num_edges: int, n: int, trials: int = 100, seed: int = 0,
                       assignment: str = "uniform") -> str:
    """
    Estimate the edge count of the most loaded of n workers under random vertex assignment
    of a graph with a near-regular degree sequence.
    return: e_dup, mean/min/max of the per-trial maximum
    """
    logger.info(f"partition_estimate --> V: {num_vertices}, E: {num_edges}, n: {n}")

    try:
        degs = graph_partition.degrees_from_counts(num_vertices, num_edges)
        estimate = graph_partition.estimate_partition(degs, n, trials, seed, assignment=assignment)
    except ScaleModelError as e:
        return f"Error: {e}"
    except Exception:
        err_msg = traceback.format_exc()
        logger.info(f"error message: {err_msg}")
        return "Error: the partition could not be estimated"
    return curve_output.emit_partition_csv([estimate])

######################################
# Validation
######################################
@mcp.tool()
def model_error(config_json: str, empirical_csv: str, kind: str = "time") -> str:
    """
    MAPE of the model against measurements.
    empirical_csv: CSV text with header n,value
    kind: "time" or "speedup"
    return: MAPE in percent
    """
    logger.info(f"model_error --> kind: {kind}")

    try:
        series = validation.load_empirical_csv(empirical_csv, kind=kind)
        error = validation.curve_mape(_curve(config_json), series)
    except ScaleModelError as e:
        return f"Error: {e}"
    except Exception:
        err_msg = traceback.format_exc()
        logger.info(f"error message: {err_msg}")
        return "Error: the model error could not be computed"
    return f"MAPE: {error:.2f}% ({kind})"

if __name__ =="__main__":
    mcp.run(transport="stdio")
