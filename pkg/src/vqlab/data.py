"""Dataset ingestion and preparation.

Parses the classic IDX container for handwritten-digit images, shrinks
28x28 grayscale images to 8x8 by center-crop and 3x3 block averaging, and
normalizes the flattened result into a 64-amplitude unit vector ready for
state embedding. Also generates the seeded random target distributions used
by the generative task.
"""

import struct
from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import ConfigurationError, DataFormatError

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
IMAGE_SIDE = 28

CACHE_MAGIC = b"VQLB"
CACHE_VERSION = 1


@dataclass(frozen=True)
class RawImage:
    """28x28 grayscale image with its digit label."""

    pixels: np.ndarray  # uint8 (28, 28)
    label: int


@dataclass(frozen=True)
class PreparedSample:
    """Unit-norm 64-amplitude vector with a class label."""

    amplitudes: np.ndarray  # float64 (64,), L2 norm 1
    label: int


def _read_exact(f, count: int, what: str) -> bytes:
    offset = f.tell()
    buf = f.read(count)
    if len(buf) != count:
        raise DataFormatError(
            f"truncated file: wanted {count} bytes for {what}, got {len(buf)}",
            offset=offset,
        )
    return buf


def load_idx(images_path, labels_path) -> list[RawImage]:
    """Parse an IDX image/label file pair into RawImages, in file order.

    Validates both big-endian magic numbers, the 28x28 dimension records,
    and that the two files agree on the sample count.
    """
    with open(images_path, "rb") as f:
        magic, count, n_rows, n_cols = struct.unpack(
            ">IIII", _read_exact(f, 16, "image header")
        )
        if magic != IMAGE_MAGIC:
            raise DataFormatError(
                f"bad image magic 0x{magic:08x}, expected 0x{IMAGE_MAGIC:08x}", offset=0
            )
        if (n_rows, n_cols) != (IMAGE_SIDE, IMAGE_SIDE):
            raise DataFormatError(
                f"expected {IMAGE_SIDE}x{IMAGE_SIDE} images, got {n_rows}x{n_cols}",
                offset=8,
            )
        raw = _read_exact(f, count * n_rows * n_cols, f"{count} images")
        pixels = np.frombuffer(raw, dtype=np.uint8).reshape(count, n_rows, n_cols)

    with open(labels_path, "rb") as f:
        magic, label_count = struct.unpack(">II", _read_exact(f, 8, "label header"))
        if magic != LABEL_MAGIC:
            raise DataFormatError(
                f"bad label magic 0x{magic:08x}, expected 0x{LABEL_MAGIC:08x}", offset=0
            )
        if label_count != count:
            raise DataFormatError(
                f"label count {label_count} != image count {count}", offset=4
            )
        labels = np.frombuffer(_read_exact(f, count, "labels"), dtype=np.uint8)

    if labels.size and labels.max() > 9:
        raise DataFormatError(f"label {labels.max()} out of range [0, 9]")
    return [RawImage(pixels[i], int(labels[i])) for i in range(count)]


def write_idx(images, images_path, labels_path) -> None:
    """Write RawImages as an IDX image/label file pair (inverse of load_idx)."""
    images = list(images)
    with open(images_path, "wb") as f:
        f.write(struct.pack(">IIII", IMAGE_MAGIC, len(images), IMAGE_SIDE, IMAGE_SIDE))
        for img in images:
            f.write(np.asarray(img.pixels, dtype=np.uint8).tobytes())
    with open(labels_path, "wb") as f:
        f.write(struct.pack(">II", LABEL_MAGIC, len(images)))
        f.write(bytes(int(img.label) for img in images))


def downsample(image: RawImage) -> np.ndarray:
    """28x28 -> 8x8: center-crop to 24x24, then 3x3 block means."""
    pixels = np.asarray(image.pixels, dtype=np.float64)
    if pixels.shape != (IMAGE_SIDE, IMAGE_SIDE):
        raise ConfigurationError(f"expected 28x28 pixels, got {pixels.shape}")
    cropped = pixels[2:26, 2:26]
    return cropped.reshape(8, 3, 8, 3).mean(axis=(1, 3))


def prepare(image: RawImage, n_classes: int) -> PreparedSample:
    """Downsample, flatten column-major, and L2-normalize into 64 amplitudes.

    Column-major order puts the image's horizontal structure on the leading
    qubits, which is what the classifier's marginal readout measures; digit
    classes separate far better along columns than along rows. A tiny
    constant is added to every entry first so blank images still embed (as
    the uniform vector).
    """
    if not 0 <= image.label < n_classes:
        raise ConfigurationError(
            f"label {image.label} outside [0, {n_classes}); filter classes first"
        )
    flat = downsample(image).reshape(64, order="F") + 1e-8
    return PreparedSample(flat / np.linalg.norm(flat), image.label)


def filter_classes(images, n_classes: int) -> list[RawImage]:
    """Keep the images whose label is below n_classes."""
    return [img for img in images if img.label < n_classes]


def prepare_dataset(images, n_classes: int) -> list[PreparedSample]:
    """Filter to the first n_classes labels and prepare every image."""
    return [prepare(img, n_classes) for img in filter_classes(images, n_classes)]


def random_target_distribution(n_outcomes: int, seed: int) -> np.ndarray:
    """Normalized vector of n_outcomes uniforms from (0, 1]; seeded."""
    if n_outcomes < 2:
        raise ConfigurationError(f"need at least 2 outcomes, got {n_outcomes}")
    # 1 - U keeps draws in (0, 1], so the normalizer cannot vanish.
    draws = 1.0 - rng.stream(seed, rng.TARGET_DISTRIBUTION).random(n_outcomes)
    return draws / draws.sum()


# ---------------------------------------------------------------------------
# Prepared-sample cache: 16-byte header (magic, version u32, count u64),
# then per sample 64 little-endian float64 amplitudes and one label byte.


def write_cache(samples, path) -> None:
    samples = list(samples)
    with open(path, "wb") as f:
        f.write(CACHE_MAGIC)
        f.write(struct.pack("<IQ", CACHE_VERSION, len(samples)))
        for s in samples:
            amps = np.asarray(s.amplitudes, dtype="<f8")
            if amps.shape != (64,):
                raise ConfigurationError(f"cache records hold 64 floats, got {amps.shape}")
            f.write(amps.tobytes())
            f.write(struct.pack("B", int(s.label)))


def read_cache(path) -> list[PreparedSample]:
    with open(path, "rb") as f:
        magic = _read_exact(f, 4, "cache magic")
        if magic != CACHE_MAGIC:
            raise DataFormatError(f"bad cache magic {magic!r}", offset=0)
        version, count = struct.unpack("<IQ", _read_exact(f, 12, "cache header"))
        if version != CACHE_VERSION:
            raise DataFormatError(f"unsupported cache version {version}", offset=4)
        samples = []
        for _ in range(count):
            rec = _read_exact(f, 64 * 8 + 1, "cache record")
            amps = np.frombuffer(rec[:-1], dtype="<f8")
            samples.append(PreparedSample(amps.copy(), rec[-1]))
    return samples
