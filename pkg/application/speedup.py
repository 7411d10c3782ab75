"""
Strong- and weak-scaling speedup curves over an integer range of worker counts.
"""
import logging
import sys

from typing import Callable, List, Literal, Tuple
from pydantic import BaseModel, ConfigDict, model_validator

from core_model import TimeBreakdown
from errors import DegenerateModelError, ScaleModelError

logging.basicConfig(
    level=logging.INFO,  # Default to INFO level
    format='%(filename)s:%(lineno)d | %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger("speedup")

MAX_WORKERS = 1_000_000

TimeModel = Callable[[int], TimeBreakdown]

class SpeedupPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    t_cp: float
    t_cm: float
    t_total: float
    s: float

class SpeedupCurve(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: Literal["strong", "weak"]
    reference_n: int
    points: List[SpeedupPoint]

    @model_validator(mode="after")
    def check_points(self):
        for prev, point in zip(self.points, self.points[1:]):
            if point.n <= prev.n:
                raise ValueError(f"worker counts must be strictly increasing ({prev.n} then {point.n})")
        for point in self.points:
            if not point.s > 0:
                raise ValueError(f"speedup must be positive at n={point.n}, got {point.s}")
            if point.n == self.reference_n and point.s != 1.0:
                raise ValueError(f"speedup at the reference n={point.n} must be 1, got {point.s}")
        return self

    def speedup_at(self, n: int) -> float:
        for point in self.points:
            if point.n == n:
                return point.s
        raise ScaleModelError(f"n={n} is not on the curve")

def check_range(n_range: Tuple[int, int]) -> range:
    n_min, n_max = n_range
    if not 1 <= n_min <= n_max <= MAX_WORKERS:
        raise ScaleModelError(f"worker range must satisfy 1 <= n_min <= n_max <= {MAX_WORKERS}, got {n_min}..{n_max}")
    return range(n_min, n_max + 1)

def _point(n: int, t: TimeBreakdown, reference_time: float) -> SpeedupPoint:
    if t.t_total <= 0:
        raise DegenerateModelError(f"model time is {t.t_total} at n={n}")
    return SpeedupPoint(n=n, t_cp=t.t_cp, t_cm=t.t_cm, t_total=t.t_total, s=reference_time / t.t_total)

def strong_scaling_curve(model: TimeModel, n_range: Tuple[int, int]) -> SpeedupCurve:
    """s(n) = t(1) / t(n) for a fixed total input."""
    workers = check_range(n_range)
    t1 = model(1).t_total
    if t1 <= 0:
        raise DegenerateModelError(f"model time at n=1 is {t1}; speedup is undefined")

    points = [_point(n, model(n), t1) for n in workers]
    logger.info(f"strong scaling over n={workers.start}..{workers.stop - 1}, t(1)={t1}")
    return SpeedupCurve(mode="strong", reference_n=1, points=points)

def weak_scaling_curve(model: TimeModel, n_range: Tuple[int, int], reference_n: int) -> SpeedupCurve:
    """s(n) = t_pi(reference_n) / t_pi(n) for per-instance times."""
    workers = check_range(n_range)
    if reference_n not in workers:
        raise ScaleModelError(f"reference_n={reference_n} is outside the range {workers.start}..{workers.stop - 1}")

    times = {n: model(n) for n in workers}
    reference_time = times[reference_n].t_total
    if reference_time <= 0:
        raise DegenerateModelError(f"model time at the reference n={reference_n} is {reference_time}")

    points = [_point(n, times[n], reference_time) for n in workers]
    logger.info(f"weak scaling over n={workers.start}..{workers.stop - 1}, reference_n={reference_n}")
    return SpeedupCurve(mode="weak", reference_n=reference_n, points=points)

def optimal_nodes(curve: SpeedupCurve) -> int:
    """argmax of s(n); the smallest n wins ties."""
    if not curve.points:
        raise ScaleModelError("empty speedup curve")
    best = curve.points[0]
    for point in curve.points[1:]:
        if point.s > best.s:
            best = point
    return best.n

def is_scalable(curve: SpeedupCurve) -> bool:
    """True when some worker count above the reference runs faster than the reference."""
    return any(point.s > 1 for point in curve.points if point.n > curve.reference_n)

def parallel_efficiency(curve: SpeedupCurve) -> List[Tuple[int, float]]:
    """s(n) * reference_n / n: the fraction of ideal linear speedup reached at each n."""
    return [(point.n, point.s * curve.reference_n / point.n) for point in curve.points]

def curve_from_points(mode: str, reference_n: int, rows: List[Tuple[int, float, float, float, float]]) -> SpeedupCurve:
    points = [SpeedupPoint(n=int(n), t_cp=t_cp, t_cm=t_cm, t_total=t_total, s=s) for n, t_cp, t_cm, t_total, s in rows]
    return SpeedupCurve(mode=mode, reference_n=reference_n, points=points)
