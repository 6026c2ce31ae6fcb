"""Dataset walkthrough: corpus layout, scanning, balancing, and splitting.

Generates the bundled synthetic corpus in a temp directory (no real data
needed), catalogs it, and shows the balanced-pool / stratified-split
arithmetic that every experiment run uses.
"""

import tempfile
from pathlib import Path

from dmcnet.dataset import SplitConfig, balanced_sample, preprocess, load_image, scan_dataset, split
from dmcnet.synthetic import generate_corpus

root = Path(tempfile.mkdtemp()) / "corpus"
generate_corpus(root)
print(f"synthetic corpus written to {root}")

manifest = scan_dataset(root)
print(f"scanned {len(manifest)} images; per-class counts {manifest.counts}")
print(f"file-list checksum: {manifest.checksum[:16]}...")

# Balancing draws min-class-count images per class, seeded; splitting is
# stratified 80/20 with floor arithmetic.
balanced = balanced_sample(manifest, seed=7)
train, test = split(balanced, SplitConfig(train_fraction=0.8, seed=7))
print(f"balanced pool: {len(balanced)} ({balanced.per_class} per class)")
print(f"split: {len(train)} train / {len(test)} test; train counts {train.counts}")

# Same seed, same selection - byte for byte.
again = balanced_sample(manifest, seed=7)
print(f"re-sampling with seed 7 reproduces the pool exactly: {again.entries == balanced.entries}")

# Preprocessing: bilinear resize to 100x100 plus BT.601 grayscale.
rel, label = manifest.entries[0]
rgb, gray = preprocess(load_image(manifest.abspath(rel)))
print(f"{rel} (label {label}): resized to {rgb.pixels.shape}, gray range "
      f"[{gray.pixels.min():.1f}, {gray.pixels.max():.1f}]")
