import numpy as np
import pytest

from vqlab.data import RawImage, write_idx


def synthetic_images(count: int, seed: int = 0) -> list[RawImage]:
    """Random 28x28 images with labels cycling 0..9."""
    rng = np.random.default_rng(seed)
    return [
        RawImage(rng.integers(0, 256, (28, 28), dtype=np.uint8), i % 10)
        for i in range(count)
    ]


def digit_images() -> list[RawImage]:
    """Real handwritten digits, upsampled from the bundled 8x8 scans to 28x28.

    Each 8x8 pixel becomes a 3x3 block inside a 2-pixel border, which the
    package's center-crop + block-mean downsampling inverts exactly.
    """
    sklearn = pytest.importorskip("sklearn.datasets")
    digits = sklearn.load_digits()
    images = []
    for pixels, label in zip(digits.images, digits.target):
        block = np.kron(pixels, np.ones((3, 3))) * (255.0 / 16.0)
        full = np.zeros((28, 28))
        full[2:26, 2:26] = block
        images.append(RawImage(np.round(full).astype(np.uint8), int(label)))
    order = np.random.default_rng(0).permutation(len(images))
    return [images[i] for i in order]


@pytest.fixture(scope="session")
def digits_split():
    images = digit_images()
    cut = int(0.8 * len(images))
    return images[:cut], images[cut:]


@pytest.fixture(scope="session")
def digits_idx_paths(tmp_path_factory, digits_split):
    """IDX file quadruple (train/test x images/labels) of the digits set."""
    root = tmp_path_factory.mktemp("idx")
    train, test = digits_split
    paths = {
        "train_images": root / "train-images-idx3-ubyte",
        "train_labels": root / "train-labels-idx1-ubyte",
        "test_images": root / "test-images-idx3-ubyte",
        "test_labels": root / "test-labels-idx1-ubyte",
    }
    write_idx(train, paths["train_images"], paths["train_labels"])
    write_idx(test, paths["test_images"], paths["test_labels"])
    return paths
