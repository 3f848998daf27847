"""Tests for image I/O, manifests, reports and fixture sets."""

import json

import numpy as np
import pytest
from PIL import Image

from scoot.core.types import (
    GrayImage, ImageFormatError, ImageNotFoundError, ItemResult, ManifestError,
    ManifestValidationError, MetaResult, DataError, ReportError
)
from scoot.dataset.fixtures import RANKED_MANIFEST, TRIPLET_MANIFEST, make_fixture_set
from scoot.dataset.images import load_image, save_image
from scoot.dataset.manifest import (
    CandidateEntry, RankedEntry, RankedManifest, TripletEntry, TripletManifest,
    index_dataset, load_ranked_manifest, load_triplet_manifest,
    save_ranked_manifest, save_triplet_manifest
)
from scoot.dataset.report import ScoreReport, format_float, load_report, render_report, write_report
from scoot.imaging.distortions import DISTORTION_FAMILIES


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def touch_images(root, *names):
    for name in names:
        save_image(GrayImage.filled(8, 8, 128), root / name)


class TestImages:
    """Test decoding and encoding."""

    def test_pgm(self, tmp_path):
        """Binary PGM decodes to the stored bytes."""
        path = tmp_path / "a.pgm"
        path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 64, 128, 255]))
        assert load_image(path).pixels.tolist() == [[0, 64], [128, 255]]

    def test_rgb_goes_through_luma(self, tmp_path):
        """Pure red becomes 76."""
        path = tmp_path / "red.png"
        Image.new("RGB", (3, 2), (255, 0, 0)).save(path)
        img = load_image(path)
        assert img.size == (3, 2)
        assert (img.pixels == 76).all()

    def test_sixteen_bit_gray(self, tmp_path):
        """16-bit samples keep their high byte."""
        path = tmp_path / "deep.png"
        Image.fromarray(np.array([[0, 65535, 100 * 256]], dtype=np.uint16)).save(path)
        assert load_image(path).pixels.tolist() == [[0, 255, 100]]

    def test_round_trip(self, tmp_path):
        """Saved PNGs load back unchanged."""
        rng = np.random.default_rng(1)
        img = GrayImage(rng.integers(0, 256, size=(9, 13), dtype=np.uint8))
        path = save_image(img, tmp_path / "nested" / "out.png")
        assert load_image(path) == img

    def test_missing_file(self, tmp_path):
        """A missing path is reported as not found."""
        with pytest.raises(ImageNotFoundError, match="nope.png"):
            load_image(tmp_path / "nope.png")

    def test_undecodable_file(self, tmp_path):
        """Garbage bytes are a format error naming the file."""
        path = tmp_path / "garbage.png"
        path.write_bytes(b"definitely not an image")
        with pytest.raises(ImageFormatError, match="garbage.png"):
            load_image(path)


class TestRankedManifest:
    """Test ranked manifest parsing and writing."""

    def test_empty_entries(self, tmp_path):
        """An empty entries list is valid."""
        manifest = load_ranked_manifest(write_json(tmp_path / "m.json", {"entries": []}))
        assert len(manifest) == 0

    def test_relative_paths(self, tmp_path):
        """Paths resolve against the manifest directory, order preserved."""
        touch_images(tmp_path, "ref.png", "a.png", "b.png")
        path = write_json(tmp_path / "m.json", {"entries": [{
            "reference_path": "ref.png",
            "candidates": [{"algorithm": "x", "path": "a.png"}, {"algorithm": "y", "path": "b.png"}],
        }]})
        (entry,) = load_ranked_manifest(path).entries
        assert entry.reference_path == tmp_path / "ref.png"
        assert entry.algorithms == ["x", "y"]
        assert entry.label == "ref"

    def test_zero_candidates_allowed(self, tmp_path):
        """A reference without candidates parses; measures decide what to do with it."""
        touch_images(tmp_path, "ref.png")
        path = write_json(tmp_path / "m.json", {"entries": [{"reference_path": "ref.png", "candidates": []}]})
        assert load_ranked_manifest(path).entries[0].candidates == ()

    def test_invalid_json_reports_line(self, tmp_path):
        """Syntax errors carry the line number."""
        path = tmp_path / "m.json"
        path.write_text('{\n  "entries": [\n    {,\n', encoding="utf-8")
        with pytest.raises(ManifestError, match="line 3"):
            load_ranked_manifest(path)

    def test_wrong_top_level(self, tmp_path):
        """The document must be an object with an entries list."""
        with pytest.raises(ManifestError):
            load_ranked_manifest(write_json(tmp_path / "m.json", [1, 2]))

    def test_duplicate_algorithms(self, tmp_path):
        """Algorithm ids are unique within an entry."""
        touch_images(tmp_path, "ref.png", "a.png")
        path = write_json(tmp_path / "m.json", {"entries": [{
            "reference_path": "ref.png",
            "candidates": [{"algorithm": "x", "path": "a.png"}, {"algorithm": "x", "path": "a.png"}],
        }]})
        with pytest.raises(ManifestValidationError, match="entry #1"):
            load_ranked_manifest(path)

    def test_missing_image(self, tmp_path):
        """Files must exist when checked."""
        touch_images(tmp_path, "ref.png")
        path = write_json(tmp_path / "m.json", {"entries": [{
            "reference_path": "ref.png", "candidates": [{"algorithm": "x", "path": "gone.png"}],
        }]})
        with pytest.raises(ManifestValidationError, match="gone.png"):
            load_ranked_manifest(path)
        assert load_ranked_manifest(path, check_files=False).entries[0].candidates[0].algorithm == "x"

    def test_missing_field(self, tmp_path):
        """reference_path is required."""
        path = write_json(tmp_path / "m.json", {"entries": [{"candidates": []}]})
        with pytest.raises(ManifestError, match="reference_path"):
            load_ranked_manifest(path)

    def test_save_and_load(self, tmp_path):
        """Three entries survive a write and re-read."""
        touch_images(tmp_path, *(f"r{i}.png" for i in range(3)), "a.png", "b.png")
        manifest = RankedManifest([
            RankedEntry(tmp_path / f"r{i}.png",
                        (CandidateEntry("x", tmp_path / "a.png"), CandidateEntry("y", tmp_path / "b.png")),
                        f"face-{i}")
            for i in range(3)
        ])
        path = save_ranked_manifest(manifest, tmp_path / "out.json")
        assert json.loads(path.read_text())["entries"][0]["reference_path"] == "r0.png"
        assert load_ranked_manifest(path).entries == manifest.entries


class TestTripletManifest:
    """Test triplet manifest parsing and writing."""

    def setup_method(self):
        self.record = {"reference_path": "r.png", "s0_path": "a.png", "s1_path": "b.png", "q": 1}

    def test_valid(self, tmp_path):
        """q and paths are read."""
        touch_images(tmp_path, "r.png", "a.png", "b.png")
        (entry,) = load_triplet_manifest(write_json(tmp_path / "t.json", {"entries": [self.record]})).entries
        assert entry.q == 1
        assert entry.s1_path == tmp_path / "b.png"

    @pytest.mark.parametrize("q", [2, -1, "0", True, None])
    def test_invalid_q(self, tmp_path, q):
        """Only the integers 0 and 1 are choices."""
        touch_images(tmp_path, "r.png", "a.png", "b.png")
        path = write_json(tmp_path / "t.json", {"entries": [dict(self.record, q=q)]})
        with pytest.raises(ManifestValidationError, match="q must be 0 or 1"):
            load_triplet_manifest(path)

    def test_save_and_load(self, tmp_path):
        """Entries survive a write and re-read."""
        touch_images(tmp_path, "r.png", "a.png", "b.png")
        manifest = TripletManifest([
            TripletEntry(tmp_path / "r.png", tmp_path / "a.png", tmp_path / "b.png", q, f"t{q}")
            for q in (0, 1)
        ])
        path = save_triplet_manifest(manifest, tmp_path / "sub" / "t.json")
        assert json.loads(path.read_text())["entries"][0]["s0_path"] == "../a.png"
        loaded = load_triplet_manifest(path).entries
        assert [(e.name, e.q) for e in loaded] == [("t0", 0), ("t1", 1)]
        assert [e.s1_path.resolve() for e in loaded] == [(tmp_path / "b.png").resolve()] * 2


class TestIndexDataset:
    """Test dataset directory indexing."""

    def test_matches_by_stem(self, tmp_path):
        """Synthetic sketches pair with references of the same stem."""
        touch_images(tmp_path, "reference/f1.png", "reference/f2.png", "reference/f3.png",
                     "synthetic/mrf/f1.png", "synthetic/mrf/f2.png", "synthetic/fcn/f1.png")
        manifest = index_dataset(tmp_path)
        assert [e.label for e in manifest.entries] == ["f1", "f2"]
        assert manifest.entries[0].algorithms == ["fcn", "mrf"]
        assert manifest.entries[1].algorithms == ["mrf"]

    def test_requires_reference_dir(self, tmp_path):
        """A tree without reference/ is not a dataset."""
        with pytest.raises(DataError):
            index_dataset(tmp_path)


class TestReports:
    """Test report rendering and parsing."""

    def setup_method(self):
        self.report = ScoreReport(
            command="mm1",
            config={"scoot": {"grid_k": 4}, "protocol": {"rotate_deg": 5.0}},
            rows=[
                ItemResult("mm1", "set 0", 0.0372916123),
                ItemResult("mm1", "set 1", None, "degenerate", "all candidate scores tied"),
            ],
            aggregate=MetaResult(mm1_theta=0.0372916123),
            tool_version="0.1.0",
        )

    def test_format_float(self):
        """Six significant digits."""
        assert format_float(0.0372916) == "0.0372916"
        assert format_float(0.0372916123) == "0.0372916"
        assert format_float(1.0) == "1"

    def test_empty_csv(self):
        """No rows renders the header only."""
        assert render_report(ScoreReport("batch"), "csv") == "measure,item,value,status,detail\n"

    def test_csv_rows(self):
        """Values are pinned; missing values are empty."""
        lines = render_report(self.report, "csv").splitlines()
        assert lines[1] == "mm1,set 0,0.0372916,ok,"
        assert lines[2] == "mm1,set 1,,degenerate,all candidate scores tied"

    def test_json_structure(self):
        """Aggregate fields are always present; floats pinned."""
        data = json.loads(render_report(self.report, "json"))
        assert data["aggregate"]["mm1_theta"] == 0.0372916
        assert data["aggregate"]["mm2_theta"] is None
        assert data["rows"][1]["value"] is None
        assert data["tool_version"] == "0.1.0"

    def test_deterministic(self):
        """Equal reports render to identical text."""
        for fmt in ("csv", "json"):
            assert render_report(self.report, fmt) == render_report(self.report, fmt)

    def test_json_round_trip(self, tmp_path):
        """A written JSON report reads back with pinned values."""
        path = write_report(self.report, tmp_path / "r.json", "json")
        loaded = load_report(path)
        assert loaded.command == "mm1"
        assert loaded.aggregate.mm1_theta == 0.0372916
        assert loaded.rows[1].status == "degenerate"
        assert render_report(loaded, "json") == render_report(self.report, "json")

    def test_csv_round_trip(self, tmp_path):
        """CSV reports carry the rows."""
        path = write_report(self.report, tmp_path / "r.csv", "csv")
        rows = load_report(path).rows
        assert [r.item for r in rows] == ["set 0", "set 1"]
        assert rows[0].value == 0.0372916
        assert rows[1].value is None

    def test_write_under_regular_file(self, tmp_path):
        """A parent that is a file fails with the path named and nothing left behind."""
        blocker = tmp_path / "blocker"
        blocker.write_text("not a directory")
        target = blocker / "r.json"
        with pytest.raises(ReportError, match="r.json"):
            write_report(self.report, target, "json")
        assert sorted(p.name for p in tmp_path.iterdir()) == ["blocker"]

    def test_failed_replace_removes_temp_file(self, tmp_path):
        """When the final rename fails the temporary file is deleted."""
        target = tmp_path / "r.json"
        target.mkdir()
        (target / "keep").write_text("x")
        with pytest.raises(ReportError, match="r.json"):
            write_report(self.report, target, "json")
        assert sorted(p.name for p in tmp_path.iterdir()) == ["r.json"]
        assert target.is_dir()

    def test_unknown_format(self):
        """Only csv and json are rendered."""
        with pytest.raises(ValueError):
            render_report(self.report, "xml")

    def test_unparseable(self, tmp_path):
        """Broken JSON is a report error."""
        path = tmp_path / "r.json"
        path.write_text("{", encoding="utf-8")
        with pytest.raises(DataError):
            load_report(path)


class TestFixtures:
    """Test synthetic fixture sets."""

    def test_layout_and_manifests(self, tmp_path):
        """Every reference gets one sketch per distortion family."""
        ranked_path, triplet_path = make_fixture_set(tmp_path, count=3, size=(48, 48), seed=7)
        assert ranked_path == tmp_path / RANKED_MANIFEST
        assert triplet_path == tmp_path / TRIPLET_MANIFEST

        ranked = load_ranked_manifest(ranked_path)
        assert len(ranked) == 3
        assert all(e.algorithms == list(DISTORTION_FAMILIES) for e in ranked.entries)
        assert load_image(ranked.entries[0].reference_path).size == (48, 48)

        triplets = load_triplet_manifest(triplet_path)
        assert [t.q for t in triplets.entries] == [0, 0, 0]
        assert all(t.s0_path.parent.name == "original" for t in triplets.entries)
        assert [t.s1_path.parent.name for t in triplets.entries] == ["blur", "contrast", "removal"]

    def test_original_is_reference_copy(self, tmp_path):
        """The undistorted family matches its reference pixel for pixel."""
        make_fixture_set(tmp_path, count=1, size=(32, 32))
        assert load_image(tmp_path / "synthetic" / "original" / "sketch_000.png") == \
            load_image(tmp_path / "reference" / "sketch_000.png")

    def test_deterministic(self, tmp_path):
        """Same seed, same bytes."""
        make_fixture_set(tmp_path / "a", count=2, size=(32, 32), seed=3)
        make_fixture_set(tmp_path / "b", count=2, size=(32, 32), seed=3)
        for relative in ("reference/sketch_001.png", "synthetic/noise/sketch_001.png", RANKED_MANIFEST):
            assert (tmp_path / "a" / relative).read_bytes() == (tmp_path / "b" / relative).read_bytes()
