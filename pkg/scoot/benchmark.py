"""Benchmark runs: manifests in, ScoreReports out."""

from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union
import logging

import anyio.to_thread

from . import __version__
from .core.cache import FeatureCache
from .core.config import ProtocolConfig, ScootConfig, parse_stats
from .core.metric import scoot_score
from .core.types import (
    GrayImage, InvalidParameterError, ItemResult, MeasureResult, MetaResult,
    RankedSet, ScootError, Triplet
)
from .dataset.images import load_image
from .dataset.manifest import RankedManifest, load_ranked_manifest, load_triplet_manifest
from .dataset.report import ScoreReport
from .eval.measures import run_judgment, run_mm1, run_mm2, run_mm3, run_ordered
from .eval.scoot_metric import ScootMetric

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
MEASURES = ("mm1", "mm2", "mm3", "judge")
RANKED_MEASURES = ("mm1", "mm2", "mm3")


class ScootBenchmark:
    """Runs Scoot over manifests and assembles reports.

    Items are evaluated on up to ``jobs`` worker threads; reports never
    depend on ``jobs``.
    """

    def __init__(self,
                 config: Optional[ScootConfig] = None,
                 protocol: Optional[ProtocolConfig] = None,
                 jobs: int = 1,
                 cache: Optional[FeatureCache] = None):
        if jobs < 1:
            raise InvalidParameterError(f"jobs must be at least 1, got {jobs}")
        self.config = config or ScootConfig()
        self.protocol = protocol or ProtocolConfig()
        self.jobs = jobs
        self.cache = cache if cache is not None else FeatureCache()

    def metric(self, config: Optional[ScootConfig] = None) -> ScootMetric:
        return ScootMetric(config or self.config, self.cache)

    async def load_images(self, paths: Iterable[Path]) -> Dict[Path, GrayImage]:
        """Decode every distinct path once, concurrently."""
        unique = list(dict.fromkeys(Path(p) for p in paths))
        images = await run_ordered([lambda p=p: load_image(p) for p in unique], self.jobs)
        return dict(zip(unique, images))

    async def _load_ranked(self, manifest_path: PathLike) -> Tuple[RankedManifest, Dict[Path, GrayImage]]:
        manifest = load_ranked_manifest(manifest_path)
        paths: List[Path] = []
        for entry in manifest.entries:
            paths.append(entry.reference_path)
            paths.extend(c.path for c in entry.candidates)
        return manifest, await self.load_images(paths)

    async def _load_triplets(self, manifest_path: PathLike) -> List[Triplet]:
        manifest = load_triplet_manifest(manifest_path)
        paths: List[Path] = []
        for entry in manifest.entries:
            paths.extend([entry.reference_path, entry.s0_path, entry.s1_path])
        images = await self.load_images(paths)
        return [
            Triplet(images[e.reference_path], images[e.s0_path], images[e.s1_path], e.q, e.label)
            for e in manifest.entries
        ]

    def _report(self, command: str, rows: List[ItemResult], aggregate: MetaResult,
                inputs: Sequence[PathLike], **extra) -> ScoreReport:
        snapshot = {
            "scoot": self.config.to_dict(),
            "protocol": self.protocol.to_dict(),
            "inputs": [str(p) for p in inputs],
        }
        snapshot.update(extra)
        return ScoreReport(command, snapshot, rows, aggregate, __version__)

    def _measure_report(self, result: MeasureResult, inputs: Sequence[PathLike]) -> ScoreReport:
        return self._report(result.measure, result.items, MetaResult.from_measure(result), inputs)

    async def score(self, x_path: PathLike, y_path: PathLike) -> float:
        """Scoot score of sketch ``x`` against reference ``y``."""
        images = await self.load_images([Path(x_path), Path(y_path)])
        x, y = images[Path(x_path)], images[Path(y_path)]
        return await anyio.to_thread.run_sync(scoot_score, x, y, self.config)

    async def batch(self, manifest_path: PathLike) -> ScoreReport:
        """Score every candidate of a ranked manifest against its reference.

        One row per (reference, algorithm); the aggregate breakdown carries
        the mean score of each algorithm.
        """
        manifest, images = await self._load_ranked(manifest_path)
        metric = self.metric()

        def score_item(label: str, algorithm: str, candidate: Path, reference: Path) -> ItemResult:
            item = f"{label}/{algorithm}"
            try:
                return ItemResult("score", item, metric(images[candidate], images[reference]))
            except ScootError as e:
                logger.warning("batch: %s failed: %s", item, e)
                return ItemResult("score", item, None, "error", str(e))

        pairs = [(e, c) for e in manifest.entries for c in e.candidates]
        calls = [
            (lambda e=e, c=c: score_item(e.label, c.algorithm, c.path, e.reference_path))
            for e, c in pairs
        ]
        rows = await run_ordered(calls, self.jobs)

        per_algorithm: Dict[str, List[float]] = {}
        for row, (_, candidate) in zip(rows, pairs):
            values = per_algorithm.setdefault(candidate.algorithm, [])
            if row.ok:
                values.append(row.value)
        means = [
            ItemResult("mean", algorithm, sum(values) / len(values) if values else None,
                       "ok" if values else "skipped", f"n={len(values)}")
            for algorithm, values in per_algorithm.items()
        ]
        logger.info("batch finished: %d scores, %d algorithms", len(rows), len(means))
        return self._report("batch", rows, MetaResult(breakdown=means), [manifest_path])

    async def _rank_stability(self, measure: str, manifest: RankedManifest,
                              images: Dict[Path, GrayImage], metric: ScootMetric) -> MeasureResult:
        sets: List[RankedSet] = []
        skipped: Dict[int, ItemResult] = {}
        for index, entry in enumerate(manifest.entries):
            if len(entry.candidates) < 2:
                logger.warning("%s: %s has %d candidates, skipped", measure, entry.label, len(entry.candidates))
                skipped[index] = ItemResult(measure, entry.label, None, "skipped",
                                            f"needs at least 2 candidates, has {len(entry.candidates)}")
                continue
            sets.append(RankedSet(images[entry.reference_path],
                                  [(c.algorithm, images[c.path]) for c in entry.candidates],
                                  entry.label))

        if measure == "mm1":
            result = await run_mm1(sets, metric, self.protocol.downsize_px, jobs=self.jobs)
        else:
            result = await run_mm2(sets, metric, self.protocol.rotate_deg, self.protocol.fill,
                                   self.protocol.rotate_canvas == "expand", jobs=self.jobs)
        if not skipped:
            return result

        evaluated = iter(result.items)
        items = [skipped[i] if i in skipped else next(evaluated) for i in range(len(manifest.entries))]
        return MeasureResult(result.measure, result.value, items)

    async def _content_capture(self, manifest: RankedManifest, images: Dict[Path, GrayImage],
                               metric: ScootMetric) -> MeasureResult:
        return await run_mm3(
            [images[e.reference_path] for e in manifest.entries],
            [[images[c.path] for c in e.candidates] for e in manifest.entries],
            metric,
            self.protocol.stroke_threshold,
            names=[e.label for e in manifest.entries],
            jobs=self.jobs,
        )

    async def mm1(self, manifest_path: PathLike) -> ScoreReport:
        """Ranking stability under a downsized reference."""
        manifest, images = await self._load_ranked(manifest_path)
        result = await self._rank_stability("mm1", manifest, images, self.metric())
        return self._measure_report(result, [manifest_path])

    async def mm2(self, manifest_path: PathLike) -> ScoreReport:
        """Ranking stability under a rotated reference."""
        manifest, images = await self._load_ranked(manifest_path)
        result = await self._rank_stability("mm2", manifest, images, self.metric())
        return self._measure_report(result, [manifest_path])

    async def mm3(self, manifest_path: PathLike) -> ScoreReport:
        """Synthetic sketches against light-stroke copies of their references."""
        manifest, images = await self._load_ranked(manifest_path)
        result = await self._content_capture(manifest, images, self.metric())
        return self._measure_report(result, [manifest_path])

    async def judge(self, triplets_path: PathLike) -> ScoreReport:
        """Agreement with recorded 2AFC choices."""
        triplets = await self._load_triplets(triplets_path)
        result = await run_judgment(triplets, self.metric(), jobs=self.jobs)
        return self._measure_report(result, [triplets_path])

    async def sweep(self,
                    manifest_path: Optional[PathLike],
                    k_list: Sequence[int],
                    levels_list: Sequence[int],
                    stats_list: Sequence[str] = ("CE",),
                    measures: Sequence[str] = RANKED_MEASURES,
                    triplets_path: Optional[PathLike] = None) -> ScoreReport:
        """Run the requested measures for every (k, levels, stats) combination.

        Combinations whose grid does not fit the smallest image a measure
        sees are skipped with the reason recorded.
        """
        unknown = [m for m in measures if m not in MEASURES]
        if unknown:
            raise InvalidParameterError(f"unknown measures: {', '.join(unknown)}")
        if not measures:
            raise InvalidParameterError("at least one measure is required")
        if "judge" in measures and triplets_path is None:
            raise InvalidParameterError("the judge measure needs a triplet manifest")
        if any(m in RANKED_MEASURES for m in measures) and manifest_path is None:
            raise InvalidParameterError(f"{', '.join(m for m in measures if m in RANKED_MEASURES)} need a ranked manifest")
        if not k_list or not levels_list or not stats_list:
            raise InvalidParameterError("sweep lists must not be empty")

        configs = [
            self.config.with_overrides(grid_k=k, levels=levels, stats=parse_stats(stats))
            for k in k_list for levels in levels_list for stats in stats_list
        ]

        limits: Dict[str, int] = {}
        manifest, images = None, {}
        if manifest_path is not None and any(m in RANKED_MEASURES for m in measures):
            manifest, images = await self._load_ranked(manifest_path)
            limits = self._side_limits(manifest, images)
        triplets: List[Triplet] = []
        if "judge" in measures:
            triplets = await self._load_triplets(triplets_path)
            sides = [min(img.width, img.height) for t in triplets for img in (t.reference, t.s0, t.s1)]
            limits["judge"] = min(sides) if sides else 0

        rows: List[ItemResult] = []
        for config in configs:
            label = f"k={config.grid_k} levels={config.levels} stats={config.stats_code}"
            metric = self.metric(config)
            for measure in measures:
                limit = limits.get(measure, 0)
                if config.grid_k > limit:
                    logger.debug("sweep: %s skipped for %s", label, measure)
                    rows.append(ItemResult(measure, label, None, "skipped",
                                           f"grid {config.grid_k} exceeds smallest image side {limit}"))
                    continue
                if measure in ("mm1", "mm2"):
                    result = await self._rank_stability(measure, manifest, images, metric)
                elif measure == "mm3":
                    result = await self._content_capture(manifest, images, metric)
                else:
                    result = await run_judgment(triplets, metric, jobs=self.jobs)

                detail = f"vector_length={config.vector_length} excluded={result.excluded}"
                if result.value is None:
                    rows.append(ItemResult(measure, label, None, "skipped", detail))
                else:
                    rows.append(ItemResult(measure, label, result.value, detail=detail))
            logger.info("sweep: %s done", label)

        inputs = [p for p in (manifest_path, triplets_path) if p is not None]
        sweep = {
            "k_list": list(k_list),
            "levels_list": list(levels_list),
            "stats_list": list(dict.fromkeys(c.stats_code for c in configs)),
            "measures": list(measures),
        }
        return self._report("sweep", rows, MetaResult(), inputs, sweep=sweep)

    def _side_limits(self, manifest: RankedManifest, images: Dict[Path, GrayImage]) -> Dict[str, int]:
        """Smallest image side each ranked measure will feed to the metric."""
        references = [images[e.reference_path] for e in manifest.entries]
        candidates = [images[c.path] for e in manifest.entries for c in e.candidates]
        if not references:
            return {m: 0 for m in RANKED_MEASURES}
        smallest = min(min(img.width, img.height) for img in references + candidates)
        smallest_reference = min(min(img.width, img.height) for img in references)
        return {
            "mm1": min(smallest, smallest_reference - self.protocol.downsize_px),
            "mm2": smallest,
            "mm3": smallest,
        }
