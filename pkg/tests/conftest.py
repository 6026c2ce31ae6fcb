import numpy as np
import pytest

from dmcnet.dataset import scan_dataset
from dmcnet.harness import ImageStore
from dmcnet.synthetic import generate_corpus


@pytest.fixture(scope="session")
def corpus_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus") / "images"
    generate_corpus(root)
    return root


@pytest.fixture(scope="session")
def manifest(corpus_root):
    return scan_dataset(corpus_root)


@pytest.fixture(scope="session")
def store(manifest):
    return ImageStore(manifest)


@pytest.fixture()
def rng():
    return np.random.Generator(np.random.PCG64(12345))
