import numpy as np
import pytest

from dmcnet import errors
from dmcnet.dataset import (
    BalancedSet,
    DatasetManifest,
    RgbImage,
    SplitConfig,
    balanced_sample,
    bilinear_resize,
    load_image,
    preprocess,
    save_ppm,
    scan_dataset,
    split,
    to_gray,
)


def write(path, data: bytes):
    path.write_bytes(data)
    return path


class TestLoadImage:
    def test_p6_roundtrip(self, tmp_path):
        raw = bytes(range(12))
        p = write(tmp_path / "a.ppm", b"P6\n2 2\n255\n" + raw)
        img = load_image(p)
        assert (img.width, img.height) == (2, 2)
        assert img.pixels.tobytes() == raw

    def test_p5_replicates_channels(self, tmp_path):
        p = write(tmp_path / "a.pgm", b"P5\n2 1\n255\n\x08\x10")
        img = load_image(p)
        assert img.pixels.shape == (1, 2, 3)
        assert (img.pixels[0, 0] == 8).all() and (img.pixels[0, 1] == 16).all()

    def test_comments_in_header(self, tmp_path):
        p = write(tmp_path / "a.ppm", b"P6\n# comment\n1 1\n255\n\x01\x02\x03")
        assert load_image(p).pixels.shape == (1, 1, 3)

    def test_ascii_ppm_rejected(self, tmp_path):
        p = write(tmp_path / "a.ppm", b"P3\n1 1\n255\n1 2 3")
        with pytest.raises(errors.BadMagic):
            load_image(p)

    def test_wide_maxval_rejected(self, tmp_path):
        p = write(tmp_path / "a.pgm", b"P5\n1 1\n65535\n\x00\x00")
        with pytest.raises(errors.UnsupportedMaxval):
            load_image(p)

    def test_truncated_payload(self, tmp_path):
        p = write(tmp_path / "a.ppm", b"P6\n2 2\n255\n\x00\x01")
        with pytest.raises(errors.TruncatedFile):
            load_image(p)

    def test_save_load_roundtrip(self, tmp_path, rng):
        pixels = rng.integers(0, 256, size=(5, 7, 3), dtype=np.uint8)
        p = tmp_path / "r.ppm"
        save_ppm(p, RgbImage(pixels))
        assert np.array_equal(load_image(p).pixels, pixels)


class TestScan:
    def test_counts(self, manifest):
        assert manifest.counts == {0: 6, 1: 30, 2: 24}
        assert len(manifest) == 60
        assert manifest.skipped == 0

    def test_entries_sorted(self, manifest):
        paths = [p for p, _ in manifest.entries]
        assert paths == sorted(paths)

    def test_empty_root(self, tmp_path):
        for name in ("disengaged", "partially_engaged", "engaged"):
            (tmp_path / name).mkdir()
        with pytest.raises(errors.EmptyDataset):
            scan_dataset(tmp_path)

    def test_missing_class_dir(self, tmp_path):
        (tmp_path / "disengaged").mkdir()
        (tmp_path / "engaged").mkdir()
        with pytest.raises(errors.MissingClassDirectory):
            scan_dataset(tmp_path)

    def test_undecodable_files_skipped(self, tmp_path):
        for name in ("disengaged", "partially_engaged", "engaged"):
            d = tmp_path / name
            d.mkdir()
            write(d / "good.ppm", b"P6\n1 1\n255\n\x01\x02\x03")
        write(tmp_path / "disengaged" / "bad.ppm", b"P3 nope")
        m = scan_dataset(tmp_path)
        assert len(m) == 3 and m.skipped == 1

    def test_manifest_json_roundtrip(self, manifest, tmp_path):
        p = tmp_path / "m.json"
        manifest.save(p)
        loaded = DatasetManifest.load(p)
        assert loaded.entries == manifest.entries
        assert loaded.checksum == manifest.checksum
        # schema: root, counts keyed by "0"/"1"/"2", entries sorted by path
        import json

        obj = json.loads(p.read_text())
        assert set(obj) == {"root", "counts", "entries"}
        assert set(obj["counts"]) == {"0", "1", "2"}
        entry_paths = [e["path"] for e in obj["entries"]]
        assert entry_paths == sorted(entry_paths)

    def test_rescan_identical(self, corpus_root):
        a, b = scan_dataset(corpus_root), scan_dataset(corpus_root)
        assert a.entries == b.entries and a.checksum == b.checksum


class TestPreprocess:
    def test_downscale_to_100(self, rng):
        img = RgbImage(rng.integers(0, 256, size=(200, 200, 3), dtype=np.uint8))
        rgb, gray = preprocess(img)
        assert rgb.pixels.shape == (100, 100, 3)
        assert gray.pixels.shape == (100, 100)

    def test_identity_at_target_size(self, rng):
        pixels = rng.integers(0, 256, size=(100, 100, 3), dtype=np.uint8)
        rgb, _ = preprocess(RgbImage(pixels))
        assert np.array_equal(rgb.pixels, pixels)

    def test_pure_red_luma(self):
        img = RgbImage(np.full((1, 1, 3), (255, 0, 0), dtype=np.uint8))
        _, gray = preprocess(img)
        assert gray.pixels == pytest.approx(76.245, abs=1e-9)

    def test_gray_idempotent_on_gray(self, rng):
        v = rng.uniform(0, 255, size=(4, 4))
        stacked = np.repeat(v[:, :, None], 3, axis=2)
        assert to_gray(stacked) == pytest.approx(v, abs=1e-9)

    def test_resize_identity_exact(self, rng):
        x = rng.uniform(0, 255, size=(13, 9))
        assert np.array_equal(bilinear_resize(x, 13, 9), x)


class TestSampleSplit:
    def test_balanced_counts(self, manifest):
        b = balanced_sample(manifest, seed=3)
        assert len(b) == 18 and b.per_class == 6
        assert b.counts == {0: 6, 1: 6, 2: 6}

    def test_same_seed_same_selection(self, manifest):
        a = balanced_sample(manifest, seed=11)
        b = balanced_sample(manifest, seed=11)
        assert a.entries == b.entries

    def test_different_seeds_differ(self, manifest):
        a = balanced_sample(manifest, seed=1)
        b = balanced_sample(manifest, seed=2)
        assert a.entries != b.entries

    def test_insufficient_count(self, manifest):
        with pytest.raises(errors.InsufficientClassCount):
            balanced_sample(manifest, seed=0, balance_count=500)

    def test_split_counts_and_partition(self, manifest):
        b = balanced_sample(manifest, seed=5)
        train, test = split(b, SplitConfig(seed=5))
        assert len(train) == 12 and len(test) == 6
        assert train.counts == {0: 4, 1: 4, 2: 4}
        assert set(train.entries) & set(test.entries) == set()
        assert sorted(train.entries + test.entries) == sorted(b.entries)

    def test_split_arithmetic_matches_floor(self):
        # floor(0.8 * 412) = 329 per class -> 987 train, 249 test overall
        entries = [(f"c{c}/{i}.ppm", c) for c in range(3) for i in range(412)]
        b = BalancedSet(root="x", entries=entries, per_class=412)
        train, test = split(b, SplitConfig(train_fraction=0.8, seed=0))
        assert len(train) == 987 and len(test) == 249
        assert train.counts == {0: 329, 1: 329, 2: 329}

    def test_degenerate_split(self, manifest):
        # floor(0.1 * 6) = 0 leaves the train side empty for every class
        b = balanced_sample(manifest, seed=0)
        with pytest.raises(errors.DegenerateSplit):
            split(b, SplitConfig(train_fraction=0.1, seed=0))

    def test_split_deterministic(self, manifest):
        b = balanced_sample(manifest, seed=9)
        t1 = split(b, SplitConfig(seed=4))
        t2 = split(b, SplitConfig(seed=4))
        assert t1[0].entries == t2[0].entries and t1[1].entries == t2[1].entries

    def test_disjoint_for_many_seeds(self, manifest):
        for seed in range(10):
            b = balanced_sample(manifest, seed=seed)
            train, test = split(b, SplitConfig(seed=seed))
            assert not set(train.paths()) & set(test.paths())
            assert len(train) + len(test) == len(b)
