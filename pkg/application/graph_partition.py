"""
Monte-Carlo estimate of max_i(E_i), the edge count of the most loaded worker
when graph vertices are assigned to n workers at random.

Each trial assigns every vertex to a worker, sums vertex degrees per worker
(E_i^rnd, which counts an edge inside a worker twice) and subtracts the
expected duplicate count E_dup from the maximum.

Random streams: trial t with seed s draws from numpy's PCG64 generator seeded
with SeedSequence([s, t]), so every trial is reproducible on its own and the
result does not depend on how trials are scheduled.
"""
import logging
import sys
import math

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from errors import PartitionError

logging.basicConfig(
    level=logging.INFO,  # Default to INFO level
    format='%(filename)s:%(lineno)d | %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger("graph-partition")

ASSIGNMENTS = ("uniform", "balanced")

@dataclass(frozen=True)
class DegreeSequence:
    degrees: np.ndarray
    num_edges: int

    def __post_init__(self):
        degrees = np.asarray(self.degrees, dtype=np.int64)
        if degrees.ndim != 1:
            raise PartitionError("degrees must be a flat sequence")
        if degrees.size and degrees.min() < 0:
            raise PartitionError("degrees must be non-negative")
        if int(degrees.sum()) != 2 * self.num_edges:
            raise PartitionError(f"degree sum {int(degrees.sum())} != 2 * num_edges ({2 * self.num_edges})")
        object.__setattr__(self, "degrees", degrees)

    @property
    def num_vertices(self) -> int:
        return int(self.degrees.size)

@dataclass(frozen=True)
class PartitionEstimate:
    n: int
    trials: int
    seed: int
    e_dup: float
    mean_max_edges: float
    per_trial_max: List[float] = field(default_factory=list)
    assignment: str = "uniform"

    @property
    def min_max_edges(self) -> float:
        return min(self.per_trial_max)

    @property
    def max_max_edges(self) -> float:
        return max(self.per_trial_max)

def _edge_array(edges) -> np.ndarray:
    try:
        array = np.asarray(edges, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise PartitionError(f"malformed edge list: {e}") from e
    if array.size == 0:
        return array.reshape(0, 2)
    if array.ndim != 2 or array.shape[1] != 2:
        raise PartitionError(f"every edge must be a pair of vertex ids, got shape {array.shape}")
    if array.min() < 0:
        raise PartitionError("vertex ids must be non-negative")
    loops = np.flatnonzero(array[:, 0] == array[:, 1])
    if loops.size:
        u = int(array[loops[0], 0])
        raise PartitionError(f"self-loop ({u},{u}) at edge {int(loops[0])}")
    return array

def degrees_from_edge_list(edges: Sequence[Tuple[int, int]]) -> DegreeSequence:
    """Degree of v = number of edge endpoints equal to v; parallel edges count with multiplicity."""
    array = _edge_array(edges)
    degrees = np.bincount(array.ravel(), minlength=int(array.max()) + 1 if array.size else 0)
    return DegreeSequence(degrees=degrees, num_edges=int(array.shape[0]))

def degrees_from_counts(num_vertices: int, num_edges: int) -> DegreeSequence:
    """Near-regular degree sequence: degrees differ by at most one and sum to 2E."""
    if num_vertices < 1:
        raise PartitionError(f"num_vertices must be >= 1, got {num_vertices}")
    base, extra = divmod(2 * num_edges, num_vertices)
    degrees = np.full(num_vertices, base, dtype=np.int64)
    degrees[:extra] += 1
    return DegreeSequence(degrees=degrees, num_edges=num_edges)

def load_edge_list(path: str) -> np.ndarray:
    """Whitespace-separated vertex id pairs, one per line; '#' starts a comment line."""
    try:
        array = np.loadtxt(path, dtype=np.int64, comments="#", ndmin=2)
    except ValueError as e:
        raise PartitionError(f"{path}: malformed edge list: {e}") from e
    except OSError as e:
        raise PartitionError(f"{path}: {e}") from e
    if array.size and array.shape[1] != 2:
        raise PartitionError(f"{path}: expected two vertex ids per line, got {array.shape[1]}")
    return _edge_array(array)

def load_degree_file(path: str) -> DegreeSequence:
    """One integer degree per line; '#' starts a comment line."""
    try:
        degrees = np.loadtxt(path, dtype=np.int64, comments="#", ndmin=1)
    except ValueError as e:
        raise PartitionError(f"{path}: malformed degree file: {e}") from e
    except OSError as e:
        raise PartitionError(f"{path}: {e}") from e
    total = int(degrees.sum())
    if total % 2:
        raise PartitionError(f"{path}: degree sum {total} is odd")
    return DegreeSequence(degrees=degrees, num_edges=total // 2)

def expected_duplicates(V: int, E: int, n: int) -> float:
    """
    Expected number of edges inside one worker holding V/n vertices (real-valued),
    i.e. the edges a degree sum counts twice.
    """
    if V < 2:
        raise PartitionError(f"expected_duplicates needs at least 2 vertices, got {V}")
    if n < 1:
        raise PartitionError(f"n must be >= 1, got {n}")
    if n == 1:
        return float(E)
    per_worker = V / n
    return 0.5 * (per_worker - 1) * per_worker * E / (V * (V - 1) / 2)

def trial_generator(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])

def assign_vertices(num_vertices: int, n: int, rng: np.random.Generator, assignment: str = "uniform") -> np.ndarray:
    """Worker index of every vertex."""
    if assignment == "uniform":
        return rng.integers(0, n, size=num_vertices)
    elif assignment == "balanced":
        return rng.permutation(num_vertices) % n
    raise PartitionError(f"unknown assignment '{assignment}' (known: {', '.join(ASSIGNMENTS)})")

def worker_loads(degs: DegreeSequence, n: int, seed: int, trial: int, assignment: str = "uniform") -> np.ndarray:
    """E_i^rnd of one trial: the degree sum of the vertices on each of the n workers."""
    owners = assign_vertices(degs.num_vertices, n, trial_generator(seed, trial), assignment)
    # float64 sums of integer degrees are exact below 2**53
    return np.bincount(owners, weights=degs.degrees, minlength=n).astype(np.int64)

def estimate_partition(degs: DegreeSequence, n: int, trials: int, seed: int,
                       assignment: str = "uniform", workers: int = 1) -> PartitionEstimate:
    if degs.num_vertices == 0:
        raise PartitionError("empty degree sequence")
    if n < 1:
        raise PartitionError(f"n must be >= 1, got {n}")
    if trials < 1:
        raise PartitionError(f"trials must be >= 1, got {trials}")
    if seed < 0:
        raise PartitionError(f"seed must be non-negative, got {seed}")
    if assignment not in ASSIGNMENTS:
        raise PartitionError(f"unknown assignment '{assignment}' (known: {', '.join(ASSIGNMENTS)})")

    E = degs.num_edges
    if n == 1:
        # every edge is counted twice on the only worker
        return PartitionEstimate(n=1, trials=trials, seed=seed, e_dup=float(E), mean_max_edges=float(E),
                                 per_trial_max=[float(E)] * trials, assignment=assignment)

    # below one vertex per worker the formula turns negative
    e_dup = max(0.0, expected_duplicates(degs.num_vertices, E, n)) if degs.num_vertices >= 2 else 0.0

    def run_trial(trial):
        return float(worker_loads(degs, n, seed, trial, assignment).max()) - e_dup

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial_max = list(pool.map(run_trial, range(trials)))
    else:
        per_trial_max = [run_trial(trial) for trial in range(trials)]

    mean_max_edges = math.fsum(sorted(per_trial_max)) / trials
    logger.debug(f"n: {n}, e_dup: {e_dup}, mean_max_edges: {mean_max_edges}")

    return PartitionEstimate(n=n, trials=trials, seed=seed, e_dup=e_dup, mean_max_edges=mean_max_edges,
                             per_trial_max=per_trial_max, assignment=assignment)

def intra_worker_edges(edges, num_vertices: int, n: int, trials: int, seed: int,
                       assignment: str = "uniform") -> float:
    """
    Mean number of edges with both endpoints on the same worker, per worker,
    counted by scanning the edge list against each trial's assignment.
    """
    array = _edge_array(edges)
    if trials < 1:
        raise PartitionError(f"trials must be >= 1, got {trials}")

    counts = []
    for trial in range(trials):
        owners = assign_vertices(num_vertices, n, trial_generator(seed, trial), assignment)
        same = owners[array[:, 0]] == owners[array[:, 1]]
        counts.append(int(np.count_nonzero(same)))
    return math.fsum(counts) / (trials * n)
