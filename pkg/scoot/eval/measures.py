"""Meta-measures for similarity metrics and 2AFC judgment agreement.

Every measure evaluates its items independently on worker threads (bounded by
``jobs``) and aggregates in input order, so serial and parallel runs give
identical results. Item failures are recorded in the breakdown instead of
aborting the run.
"""

from typing import Callable, List, Optional, Sequence, TypeVar
import logging

import anyio
import anyio.to_thread
import numpy as np

from ..core.types import (
    DegenerateRankingError, GrayImage, InvalidParameterError, ItemResult,
    MeasureResult, RankedSet, ScootError, Triplet
)
from ..imaging.transforms import downsize_nn, rotate, threshold_strokes
from .ranking import spearman_theta

logger = logging.getLogger(__name__)

Metric = Callable[[GrayImage, GrayImage], float]
T = TypeVar("T")


def _fmt(value: float) -> str:
    return f"{value:.6g}"


async def run_ordered(calls: Sequence[Callable[[], T]], jobs: int = 1) -> List[T]:
    """Run blocking calls on worker threads, returning results in call order.

    If calls raise, every call still runs to completion and the exception of
    the earliest failing call is re-raised, whatever the completion order.
    """
    if jobs < 1:
        raise InvalidParameterError(f"jobs must be at least 1, got {jobs}")
    results: List[Optional[T]] = [None] * len(calls)
    errors: List[Optional[Exception]] = [None] * len(calls)
    limiter = anyio.CapacityLimiter(jobs)

    async def worker(index: int, call: Callable[[], T]) -> None:
        try:
            results[index] = await anyio.to_thread.run_sync(call, limiter=limiter)
        except Exception as e:
            errors[index] = e

    async with anyio.create_task_group() as tg:
        for index, call in enumerate(calls):
            tg.start_soon(worker, index, call)

    for error in errors:
        if error is not None:
            raise error
    return results  # type: ignore[return-value]


def _aggregate(measure: str, items: List[ItemResult]) -> MeasureResult:
    values = [item.value for item in items if item.ok]
    value = float(np.mean(values)) if values else None
    excluded = len(items) - len(values)
    if excluded:
        logger.warning("%s: %d of %d items excluded from the aggregate", measure, excluded, len(items))
    logger.info("%s finished: %s over %d items", measure,
                "n/a" if value is None else _fmt(value), len(values))
    return MeasureResult(measure, value, items)


def _rank_stability(measure: str, name: str, ranked_set: RankedSet, metric: Metric,
                    perturb: Callable[[GrayImage], GrayImage]) -> ItemResult:
    """theta between candidate scores against the reference and against its perturbation."""
    try:
        perturbed = perturb(ranked_set.reference)
        before = [metric(candidate, ranked_set.reference) for _, candidate in ranked_set.candidates]
        after = [metric(candidate, perturbed) for _, candidate in ranked_set.candidates]
        theta = spearman_theta(before, after)
    except DegenerateRankingError as e:
        logger.warning("%s: %s: %s", measure, name, e)
        return ItemResult(measure, name, None, "degenerate", str(e))
    except ScootError as e:
        logger.warning("%s: %s failed: %s", measure, name, e)
        return ItemResult(measure, name, None, "error", str(e))

    logger.debug("%s: %s theta=%s", measure, name, _fmt(theta))
    return ItemResult(measure, name, theta, detail=f"candidates={len(ranked_set.candidates)}")


def _set_name(index: int, ranked_set: RankedSet) -> str:
    return ranked_set.name or f"set {index}"


async def run_mm1(sets: Sequence[RankedSet], metric: Metric, pixels: int, *,
                  jobs: int = 1) -> MeasureResult:
    """Ranking stability under a slight nearest-neighbor downsize of the reference.

    The aggregate is the mean theta over sets; degenerate rankings are
    excluded and reported per set.
    """
    logger.info("mm1: %d sets, downsize by %d px", len(sets), pixels)
    perturb = lambda ref: downsize_nn(ref, pixels)
    calls = [
        (lambda i=i, s=s: _rank_stability("mm1", _set_name(i, s), s, metric, perturb))
        for i, s in enumerate(sets)
    ]
    return _aggregate("mm1", await run_ordered(calls, jobs))


async def run_mm2(sets: Sequence[RankedSet], metric: Metric, degrees: float, fill: int = 255,
                  expand: bool = False, *, jobs: int = 1) -> MeasureResult:
    """Ranking stability under a slight counter-clockwise rotation of the reference."""
    logger.info("mm2: %d sets, rotate by %s degrees (%s)", len(sets), degrees,
                "expand" if expand else "crop")
    perturb = lambda ref: rotate(ref, degrees, fill=fill, expand=expand)
    calls = [
        (lambda i=i, s=s: _rank_stability("mm2", _set_name(i, s), s, metric, perturb))
        for i, s in enumerate(sets)
    ]
    return _aggregate("mm2", await run_ordered(calls, jobs))


def _content_capture(name: str, reference: GrayImage, outputs: Sequence[GrayImage],
                     metric: Metric, threshold: int) -> ItemResult:
    if not outputs:
        logger.warning("mm3: %s has no synthetic sketches, skipped", name)
        return ItemResult("mm3", name, None, "skipped", "no synthetic sketches")
    try:
        sota_mean = float(np.mean([metric(output, reference) for output in outputs]))
        light = metric(threshold_strokes(reference, threshold, keep="light"), reference)
    except ScootError as e:
        logger.warning("mm3: %s failed: %s", name, e)
        return ItemResult("mm3", name, None, "error", str(e))

    success = sota_mean > light
    logger.debug("mm3: %s sota_mean=%s light=%s", name, _fmt(sota_mean), _fmt(light))
    return ItemResult("mm3", name, 1.0 if success else 0.0,
                      detail=f"sota_mean={_fmt(sota_mean)} light={_fmt(light)}")


async def run_mm3(references: Sequence[GrayImage], sota_outputs: Sequence[Sequence[GrayImage]],
                  metric: Metric, threshold: int, *, names: Optional[Sequence[str]] = None,
                  jobs: int = 1) -> MeasureResult:
    """Fraction of references whose synthetic sketches outscore a light-stroke copy.

    "Outscore" is strict: the mean synthetic score must be greater than the
    score of ``threshold_strokes(reference, threshold, keep="light")``.
    """
    if len(references) != len(sota_outputs):
        raise InvalidParameterError(
            f"{len(references)} references but {len(sota_outputs)} synthetic sketch lists")
    names = list(names) if names is not None else [f"reference {i}" for i in range(len(references))]
    logger.info("mm3: %d references, stroke threshold %d", len(references), threshold)
    calls = [
        (lambda n=n, r=r, o=o: _content_capture(n, r, o, metric, threshold))
        for n, r, o in zip(names, references, sota_outputs)
    ]
    return _aggregate("mm3", await run_ordered(calls, jobs))


def _agreement(index: int, triplet: Triplet, metric: Metric) -> ItemResult:
    name = triplet.name or f"triplet {index}"
    try:
        score0 = metric(triplet.s0, triplet.reference)
        score1 = metric(triplet.s1, triplet.reference)
    except ScootError as e:
        logger.warning("judge: %s failed: %s", name, e)
        return ItemResult("judge", name, None, "error", str(e))

    if score0 == score1:
        agreement, pick = 0.5, "tie"
    else:
        choice = 0 if score0 > score1 else 1
        agreement, pick = (1.0 if choice == triplet.q else 0.0), str(choice)
    return ItemResult("judge", name, agreement,
                      detail=f"s0={_fmt(score0)} s1={_fmt(score1)} pick={pick} q={triplet.q}")


async def run_judgment(triplets: Sequence[Triplet], metric: Metric, *, jobs: int = 1) -> MeasureResult:
    """Mean agreement of the metric's 2AFC choice with the recorded human choice.

    Exact score ties count as half agreement.
    """
    if not triplets:
        raise InvalidParameterError("judgment agreement needs at least one triplet")
    logger.info("judge: %d triplets", len(triplets))
    calls = [(lambda i=i, t=t: _agreement(i, t, metric)) for i, t in enumerate(triplets)]
    return _aggregate("judge", await run_ordered(calls, jobs))
