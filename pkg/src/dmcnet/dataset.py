"""Dataset ingestion: directory scanning, PPM/PGM decoding, preprocessing, splits.

Layout expected on disk::

    <root>/disengaged/*.ppm|*.pgm
    <root>/partially_engaged/*.ppm|*.pgm
    <root>/engaged/*.ppm|*.pgm

Labels are fixed: 0=disengaged, 1=partially_engaged, 2=engaged.

Only binary PPM (P6) and PGM (P5) with maxval 255 are decoded; converting
other formats is the caller's job (``python -c "from PIL import Image; ..."``
or ImageMagick both work).  Keeping the decoder tiny avoids codec
dependencies and makes scans cheap.

All randomness flows through numpy's PCG64 generator seeded with an explicit
64-bit integer, so sampling and splitting reproduce exactly across runs and
machines.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadMagic,
    DegenerateSplit,
    EmptyDataset,
    InsufficientClassCount,
    IoFailure,
    MissingClassDirectory,
    TruncatedFile,
    UnsupportedMaxval,
)

CLASS_NAMES = ("disengaged", "partially_engaged", "engaged")
LABELS = (0, 1, 2)


def label_name(label: int) -> str:
    return CLASS_NAMES[label]


def label_of(name: str) -> int:
    return CLASS_NAMES.index(name)


@dataclass
class RgbImage:
    """Row-major 8-bit RGB image, pixels shaped (height, width, 3)."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels, dtype=np.uint8)
        if p.ndim != 3 or p.shape[2] != 3 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError(f"RgbImage needs (H,W,3) pixels, got {p.shape}")
        self.pixels = p

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


@dataclass
class GrayImage:
    """Row-major real-valued grayscale image with intensities in [0, 255]."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels, dtype=np.float64)
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError(f"GrayImage needs (H,W) pixels, got {p.shape}")
        if not np.isfinite(p).all():
            raise ValueError("GrayImage pixels must be finite")
        self.pixels = p

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]


# ---------------------------------------------------------------------------
# PPM / PGM decoding
# ---------------------------------------------------------------------------


def _read_header(data: bytes, path: str):
    """Parse a P5/P6 header; returns (magic, width, height, maxval, offset)."""
    if len(data) < 2:
        raise TruncatedFile(f"{path}: file too short for a PNM header")
    magic = data[:2]
    if magic not in (b"P5", b"P6"):
        raise BadMagic(f"{path}: unsupported magic {magic!r} (need binary P5/P6)")
    # Header tokens are separated by whitespace; '#' starts a comment to EOL.
    tokens = []
    i = 2
    while len(tokens) < 3:
        while i < len(data) and data[i : i + 1].isspace():
            i += 1
        if i < len(data) and data[i : i + 1] == b"#":
            while i < len(data) and data[i] not in (0x0A, 0x0D):
                i += 1
            continue
        start = i
        while i < len(data) and not data[i : i + 1].isspace():
            i += 1
        if start == i:
            raise TruncatedFile(f"{path}: header ended early")
        tokens.append(data[start:i])
    if i >= len(data):
        raise TruncatedFile(f"{path}: no pixel payload")
    i += 1  # single whitespace byte after maxval
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise BadMagic(f"{path}: non-numeric header fields {tokens}")
    if width <= 0 or height <= 0:
        raise BadMagic(f"{path}: non-positive dimensions {width}x{height}")
    if maxval != 255:
        raise UnsupportedMaxval(f"{path}: maxval {maxval} unsupported (need 255)")
    return magic, width, height, maxval, i


def load_image(path) -> RgbImage:
    """Decode a binary PPM (P6) or PGM (P5, replicated to 3 channels)."""
    path = os.fspath(path)
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    magic, width, height, _, offset = _read_header(data, path)
    channels = 3 if magic == b"P6" else 1
    need = width * height * channels
    payload = data[offset : offset + need]
    if len(payload) < need:
        raise TruncatedFile(f"{path}: expected {need} pixel bytes, got {len(payload)}")
    arr = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, channels)
    if channels == 1:
        arr = np.repeat(arr, 3, axis=2)
    return RgbImage(arr.copy())


def probe_image(path) -> bool:
    """Cheap decodability check: header fields plus payload size, no pixel read."""
    path = os.fspath(path)
    try:
        with open(path, "rb") as fh:
            head = fh.read(256)
        magic, width, height, _, offset = _read_header(head, path)
        channels = 3 if magic == b"P6" else 1
        return os.path.getsize(path) >= offset + width * height * channels
    except (OSError, BadMagic, UnsupportedMaxval, TruncatedFile):
        return False


def save_ppm(path, image: RgbImage) -> None:
    """Write a binary P6 file (used by the synthetic corpus and tests)."""
    header = f"P6\n{image.width} {image.height}\n255\n".encode()
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(image.pixels.tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# Manifest
# ---------------------------------------------------------------------------


@dataclass
class DatasetManifest:
    """Catalog of labelled image paths under a dataset root.

    Entries are (relative path, label), sorted lexicographically by path so
    that scans are order-independent.  ``skipped`` counts files that failed
    the decodability probe.
    """

    root: str
    entries: list = field(default_factory=list)
    skipped: int = 0

    @property
    def counts(self) -> dict:
        c = {label: 0 for label in LABELS}
        for _, label in self.entries:
            c[label] += 1
        return c

    @property
    def checksum(self) -> str:
        """SHA-256 over the sorted "path:label" lines; identifies the file list."""
        h = hashlib.sha256()
        for path, label in self.entries:
            h.update(f"{path}:{label}\n".encode())
        return h.hexdigest()

    def __len__(self) -> int:
        return len(self.entries)

    def abspath(self, rel: str) -> str:
        return os.path.join(self.root, rel)

    def to_json(self) -> str:
        obj = {
            "root": self.root,
            "counts": {str(k): v for k, v in self.counts.items()},
            "entries": [{"path": p, "label": l} for p, l in self.entries],
        }
        return json.dumps(obj, indent=2, sort_keys=True) + "\n"

    def save(self, path) -> None:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(self.to_json())
        except OSError as exc:
            raise IoFailure(f"cannot write manifest {path}: {exc}") from exc

    @classmethod
    def load(cls, path) -> "DatasetManifest":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except OSError as exc:
            raise IoFailure(f"cannot read manifest {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise IoFailure(f"manifest {path} is not valid JSON: {exc}") from exc
        entries = [(e["path"], int(e["label"])) for e in obj["entries"]]
        return cls(root=obj["root"], entries=entries)


def scan_dataset(root) -> DatasetManifest:
    """Walk the three class subdirectories and catalog every decodable image."""
    root = os.fspath(root)
    missing = [n for n in CLASS_NAMES if not os.path.isdir(os.path.join(root, n))]
    if missing:
        raise MissingClassDirectory(f"{root}: missing class directories {missing}")
    entries = []
    skipped = 0
    for label, name in enumerate(CLASS_NAMES):
        class_dir = os.path.join(root, name)
        for fname in sorted(os.listdir(class_dir)):
            if not fname.lower().endswith((".ppm", ".pgm")):
                continue
            rel = os.path.join(name, fname)
            if probe_image(os.path.join(root, rel)):
                entries.append((rel, label))
            else:
                skipped += 1
    if not entries:
        raise EmptyDataset(f"{root}: no decodable images found")
    entries.sort(key=lambda e: e[0])
    return DatasetManifest(root=root, entries=entries, skipped=skipped)


# ---------------------------------------------------------------------------
# Preprocessing
# ---------------------------------------------------------------------------

# ITU-R BT.601 luma weights.
LUMA_R, LUMA_G, LUMA_B = 0.299, 0.587, 0.114


def bilinear_resize(pixels: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resize of an (H,W) or (H,W,C) float array, half-pixel centers.

    Resizing to the input size is an exact identity.
    """
    src = np.asarray(pixels, dtype=np.float64)
    in_h, in_w = src.shape[0], src.shape[1]
    ys = (np.arange(out_h) + 0.5) * (in_h / out_h) - 0.5
    xs = (np.arange(out_w) + 0.5) * (in_w / out_w) - 0.5
    ys = np.clip(ys, 0.0, in_h - 1.0)
    xs = np.clip(xs, 0.0, in_w - 1.0)
    y0 = np.floor(ys).astype(np.int64)
    x0 = np.floor(xs).astype(np.int64)
    y1 = np.minimum(y0 + 1, in_h - 1)
    x1 = np.minimum(x0 + 1, in_w - 1)
    wy = (ys - y0).reshape(-1, 1)
    wx = (xs - x0).reshape(1, -1)
    if src.ndim == 3:
        wy = wy[..., None]
        wx = wx[..., None]
    top = src[y0][:, x0] * (1 - wx) + src[y0][:, x1] * wx
    bot = src[y1][:, x0] * (1 - wx) + src[y1][:, x1] * wx
    return top * (1 - wy) + bot * wy


def to_gray(rgb_pixels: np.ndarray) -> np.ndarray:
    p = np.asarray(rgb_pixels, dtype=np.float64)
    return LUMA_R * p[..., 0] + LUMA_G * p[..., 1] + LUMA_B * p[..., 2]


def preprocess(img: RgbImage, size: int = 100) -> tuple:
    """Resize to size x size and derive grayscale; returns (RgbImage, GrayImage)."""
    resized = bilinear_resize(img.pixels, size, size)
    rgb = RgbImage(np.clip(np.rint(resized), 0, 255).astype(np.uint8))
    gray = GrayImage(to_gray(resized))
    return rgb, gray


# ---------------------------------------------------------------------------
# Sampling and splitting
# ---------------------------------------------------------------------------


@dataclass
class SplitConfig:
    train_fraction: float = 0.8
    seed: int = 0
    balance_count: int | None = None

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0,1), got {self.train_fraction}")


@dataclass
class BalancedSet:
    """Equal-count per-class selection of manifest entries."""

    root: str
    entries: list  # (relative path, label)
    per_class: int

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def counts(self) -> dict:
        c = {label: 0 for label in LABELS}
        for _, label in self.entries:
            c[label] += 1
        return c

    def labels(self) -> np.ndarray:
        return np.array([l for _, l in self.entries], dtype=np.int64)

    def paths(self) -> list:
        return [p for p, _ in self.entries]


def balanced_sample(manifest: DatasetManifest, seed: int, balance_count: int | None = None) -> BalancedSet:
    """Draw ``balance_count`` entries per class without replacement (seeded).

    Defaults to the minimum class count, so the most unbalanced class sets
    the pool size.
    """
    counts = manifest.counts
    if any(counts[l] == 0 for l in LABELS):
        empty = [label_name(l) for l in LABELS if counts[l] == 0]
        raise InsufficientClassCount(f"classes with no entries: {empty}")
    if balance_count is None:
        balance_count = min(counts.values())
    for l in LABELS:
        if counts[l] < balance_count:
            raise InsufficientClassCount(
                f"class {label_name(l)} has {counts[l]} entries, need {balance_count}"
            )
    rng = np.random.Generator(np.random.PCG64(seed))
    chosen = []
    for l in LABELS:
        class_entries = [e for e in manifest.entries if e[1] == l]
        idx = rng.choice(len(class_entries), size=balance_count, replace=False)
        chosen.extend(class_entries[i] for i in sorted(idx))
    return BalancedSet(root=manifest.root, entries=chosen, per_class=balance_count)


def split(balanced: BalancedSet, cfg: SplitConfig) -> tuple:
    """Stratified split: floor(train_fraction * n_c) per class to train.

    Returns (train, test) as BalancedSet-shaped records; union equals the
    input and the two sides are disjoint.
    """
    if len(balanced.entries) == 0:
        raise DegenerateSplit("cannot split an empty balanced set")
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    train, test = [], []
    for l in LABELS:
        class_entries = [e for e in balanced.entries if e[1] == l]
        n = len(class_entries)
        if n == 0:
            continue
        n_train = int(np.floor(cfg.train_fraction * n))
        if n_train == 0 or n_train == n:
            raise DegenerateSplit(
                f"class {label_name(l)}: {n_train} train of {n} leaves one side empty"
            )
        perm = rng.permutation(n)
        train.extend(class_entries[i] for i in perm[:n_train])
        test.extend(class_entries[i] for i in perm[n_train:])
    train.sort(key=lambda e: e[0])
    test.sort(key=lambda e: e[0])
    per_train = min(sum(1 for _, l in train if l == c) for c in LABELS)
    per_test = min(sum(1 for _, l in test if l == c) for c in LABELS)
    return (
        BalancedSet(root=balanced.root, entries=train, per_class=per_train),
        BalancedSet(root=balanced.root, entries=test, per_class=per_test),
    )
