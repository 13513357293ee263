"""
Classifying handwritten digits with a variational circuit
=========================================================

Images are shrunk to 8x8, embedded as 64 state amplitudes, pushed through
the circuit, and read out as a renormalized marginal distribution over the
leading qubits. Real MNIST IDX files can be passed in; without them this
demo falls back to the small handwritten-digit scans bundled with
scikit-learn, upsampled to the same 28x28 container format.
"""

import sys
from pathlib import Path

import numpy as np

from vqlab import AnsatzSpec
from vqlab.data import RawImage, load_idx, prepare_dataset, write_idx
from vqlab.learn import train_classifier


def digit_images_from_sklearn():
    from sklearn.datasets import load_digits

    digits = load_digits()
    images = []
    for pixels, label in zip(digits.images, digits.target):
        block = np.kron(pixels, np.ones((3, 3))) * (255.0 / 16.0)
        full = np.zeros((28, 28))
        full[2:26, 2:26] = block
        images.append(RawImage(np.round(full).astype(np.uint8), int(label)))
    order = np.random.default_rng(0).permutation(len(images))
    return [images[i] for i in order]


if len(sys.argv) == 5:
    # vqlab-style IDX quadruple: train images, train labels, test images, test labels
    train_images = load_idx(sys.argv[1], sys.argv[2])
    test_images = load_idx(sys.argv[3], sys.argv[4])
    epochs = 5
else:
    print("no IDX paths given; using scikit-learn's bundled digits\n")
    images = digit_images_from_sklearn()
    cut = int(0.8 * len(images))
    train_images, test_images = images[:cut], images[cut:]
    epochs = 40  # small dataset, so take more passes to match the step budget

# Round-trip through the IDX container, just to show the file format works.
out = Path("digits_idx")
out.mkdir(exist_ok=True)
write_idx(train_images, out / "train-images-idx3-ubyte", out / "train-labels-idx1-ubyte")
print(f"wrote {len(train_images)} training images to {out}/")

for n_classes, spec in (
    (2, AnsatzSpec("C1", 6, 2, "xy", "circular")),
    (4, AnsatzSpec("C1", 6, 2, "xy", "circular")),
):
    train = prepare_dataset(train_images, n_classes)
    test = prepare_dataset(test_images, n_classes)
    report = train_classifier(
        spec, train, test, n_classes, epochs=epochs, batch_size=32, lr=0.01, seed=0
    )
    print(
        f"{n_classes}-class: {len(train)} train / {len(test)} test images, "
        f"accuracy {report.final_metric:.3f} ({report.wall_time_s:.0f}s)"
    )
