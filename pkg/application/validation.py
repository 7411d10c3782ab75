import logging
import sys
import csv
import io

from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from errors import EmpiricalDataError
from speedup import SpeedupCurve

logging.basicConfig(
    level=logging.INFO,  # Default to INFO level
    format='%(filename)s:%(lineno)d | %(message)s',
    handlers=[
        logging.StreamHandler(sys.stderr)
    ]
)
logger = logging.getLogger("validation")

EMPIRICAL_HEADER = ["n", "value"]

class EmpiricalSeries(BaseModel):
    """Measured times or speedups, sorted by worker count."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["time", "speedup"]
    points: List[Tuple[int, float]]
    reference_n: Optional[int] = None

    @model_validator(mode="after")
    def check_points(self):
        seen = set()
        for n, value in self.points:
            if not value > 0:
                raise ValueError(f"non-positive value {value} at n={n}")
            if n in seen:
                raise ValueError(f"duplicate n={n}")
            seen.add(n)
        return self

    def values(self) -> dict:
        return dict(self.points)

def load_empirical_csv(text: str, kind: str = "time", reference_n: Optional[int] = None) -> EmpiricalSeries:
    if kind not in ("time", "speedup"):
        raise EmpiricalDataError(f"unknown series kind '{kind}' (expected time or speedup)")

    rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows or [cell.strip() for cell in rows[0]] != EMPIRICAL_HEADER:
        raise EmpiricalDataError(f"missing header '{','.join(EMPIRICAL_HEADER)}'")

    points = {}
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise EmpiricalDataError(f"line {line}: expected 2 columns, got {len(row)}")
        try:
            n = int(row[0])
            value = float(row[1])
        except ValueError:
            raise EmpiricalDataError(f"line {line}: cannot parse {row}")
        if n < 1:
            raise EmpiricalDataError(f"line {line}: worker count must be >= 1, got {n}")
        if not value > 0:
            raise EmpiricalDataError(f"line {line}: non-positive value {value} at n={n}")
        if n in points:
            raise EmpiricalDataError(f"line {line}: duplicate n={n}")
        points[n] = value

    logger.info(f"loaded {len(points)} empirical {kind} points")
    return EmpiricalSeries(kind=kind, points=sorted(points.items()), reference_n=reference_n)

def normalize_to_reference(series: EmpiricalSeries, reference_n: int) -> EmpiricalSeries:
    """Times to speedups: t(reference_n) / t(n)."""
    if series.kind != "time":
        raise EmpiricalDataError(f"only time series can be normalized, got {series.kind}")
    values = series.values()
    if reference_n not in values:
        raise EmpiricalDataError(f"reference n={reference_n} is not in the series")

    reference_time = values[reference_n]
    points = [(n, reference_time / t) for n, t in series.points]
    return EmpiricalSeries(kind="speedup", points=points, reference_n=reference_n)

def predicted_times(curve: SpeedupCurve) -> List[Tuple[int, float]]:
    return [(point.n, point.t_total) for point in curve.points]

def predicted_speedups(curve: SpeedupCurve, reference_n: Optional[int] = None) -> List[Tuple[int, float]]:
    """Curve speedups re-expressed relative to reference_n (the curve's own reference by default)."""
    if reference_n is None or reference_n == curve.reference_n:
        return [(point.n, point.s) for point in curve.points]

    times = dict(predicted_times(curve))
    if reference_n not in times:
        raise EmpiricalDataError(f"reference n={reference_n} is outside the predicted range")
    return [(n, times[reference_n] / t) for n, t in times.items()]

def mape(predicted: List[Tuple[int, float]], actual: EmpiricalSeries) -> float:
    """Mean absolute percentage error in percent, matched on exact worker counts."""
    predicted = dict(predicted)
    missing = [n for n, _ in actual.points if n not in predicted]
    if missing:
        raise EmpiricalDataError(f"no predicted value for n={', '.join(str(n) for n in missing)}")
    if not actual.points:
        raise EmpiricalDataError("empty empirical series")

    a = np.array([value for _, value in actual.points], dtype=np.float64)
    p = np.array([predicted[n] for n, _ in actual.points], dtype=np.float64)
    if np.any(a == 0):
        raise EmpiricalDataError("actual values must be non-zero")
    return float(np.mean(100.0 * np.abs(p - a) / np.abs(a)))

def curve_mape(curve: SpeedupCurve, actual: EmpiricalSeries) -> float:
    """MAPE of a curve against a series in the series' own domain (time or speedup)."""
    if actual.kind == "time":
        error = mape(predicted_times(curve), actual)
    else:
        error = mape(predicted_speedups(curve, actual.reference_n), actual)
    logger.info(f"MAPE computed on {actual.kind}: {error}")
    return error
