"""Command-line front end.

Three subcommands: `metrics` sweeps circuit configurations and emits one CSV
row (plus a JSON sidecar) per configuration; `gen-dist` trains the
distribution generator on seeded random targets; `classify` trains the
image classifier on IDX files. Every artifact embeds the full provenance
(spec, sampling settings, seed) needed to reproduce it, and reruns with the
same seed produce byte-identical outputs.

Exit codes: 0 success, 2 usage error, 3 data format error, 4 training
diverged.
"""

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import data, learn
from .ansatz import FAMILIES, TOPOLOGIES, AnsatzSpec
from .errors import ConfigurationError, DataFormatError, TrainingDivergedError
from .metrics import (
    SamplingConfig,
    estimate_entangling_capability,
    estimate_expressibility,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA_FORMAT = 3
EXIT_DIVERGED = 4

CSV_HEADER = "family,rotations,topology,layers,expressibility,entanglement,n_pairs,n_states,n_bins,seed"

DEFAULT_ROTATIONS = ["x", "y", "xy", "yx", "xz", "zx", "yz", "zy"]


@dataclass
class SweepConfig:
    """One metrics sweep: the cartesian product of the listed settings."""

    families: list = field(default_factory=lambda: ["C1"])
    rotation_sequences: list = field(default_factory=lambda: list(DEFAULT_ROTATIONS))
    topologies: list = field(default_factory=lambda: list(TOPOLOGIES))
    layer_range: tuple = (1, 6)
    qubits: int = 6
    sampling: SamplingConfig = field(default_factory=SamplingConfig)
    output_path: str = "metrics.csv"

    def __post_init__(self):
        lo, hi = self.layer_range
        if lo < 1 or hi < lo:
            raise ConfigurationError(f"invalid layer_range {self.layer_range}")
        for fam in self.families:
            if fam not in FAMILIES:
                raise ConfigurationError(f"unknown family {fam!r}")
        for topo in self.topologies:
            if topo not in TOPOLOGIES:
                raise ConfigurationError(f"unknown topology {topo!r}")

    @classmethod
    def from_json_file(cls, path) -> "SweepConfig":
        with open(path) as f:
            raw = json.load(f)
        sampling = SamplingConfig(**raw.pop("sampling", {}))
        raw["layer_range"] = tuple(raw.get("layer_range", (1, 6)))
        return cls(sampling=sampling, **raw)

    def rows(self) -> list[AnsatzSpec]:
        lo, hi = self.layer_range
        return [
            AnsatzSpec(fam, self.qubits, layers, rots, topo)
            for fam, rots, topo, layers in itertools.product(
                self.families,
                self.rotation_sequences,
                self.topologies,
                range(lo, hi + 1),
            )
        ]


def _worker_count(n_rows: int) -> int:
    env = os.environ.get("VQLAB_THREADS", "").strip()
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_rows))


def _metrics_row(args: tuple) -> dict:
    spec, sampling = args
    expr = estimate_expressibility(spec, sampling)
    ent = estimate_entangling_capability(spec, sampling)
    return {
        "family": spec.family,
        "rotations": spec.rotations,
        "topology": spec.topology,
        "layers": spec.layers,
        "expressibility": expr.value,
        "entanglement": ent.value,
        "n_pairs": sampling.n_pairs,
        "n_states": sampling.n_states,
        "n_bins": sampling.n_bins,
        "seed": sampling.seed,
    }


def cmd_metrics(config: SweepConfig) -> Path:
    """Run the sweep and write CSV plus a JSON sidecar. Returns the CSV path."""
    specs = config.rows()
    jobs = [(spec, config.sampling) for spec in specs]
    workers = _worker_count(len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_metrics_row, jobs))
    else:
        rows = [_metrics_row(job) for job in jobs]

    csv_path = Path(config.output_path)
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r['family']},{r['rotations']},{r['topology']},{r['layers']},"
            f"{r['expressibility']!r},{r['entanglement']!r},"
            f"{r['n_pairs']},{r['n_states']},{r['n_bins']},{r['seed']}"
        )
    csv_path.write_text("\n".join(lines) + "\n")
    sidecar = csv_path.with_suffix(".json")
    sidecar.write_text(json.dumps({"rows": rows}, indent=2) + "\n")
    return csv_path


def cmd_gen_dist(
    spec: AnsatzSpec,
    seeds: list[int],
    out_dir: Path,
    epochs: int,
    batch_size: int,
    lr: float,
    target_kind: str = "random",
) -> dict:
    """Train the generator once per seed; write per-seed reports + aggregate.

    A random target is drawn per seed; the point-mass target is a smoke
    check that training preserves an already-perfect start.
    """
    out_dir.mkdir(parents=True, exist_ok=True)
    dim = 1 << spec.n_qubits
    per_seed = []
    hellingers = []
    for seed in seeds:
        init = None
        if target_kind == "point":
            target = [0.0] * dim
            target[0] = 1.0
            # Start at the identity circuit: the generator already emits the
            # point mass, so this checks that training preserves an optimum.
            init = [0.0] * learn.parameter_count(spec)
        else:
            target = data.random_target_distribution(dim, seed)
        entry = {"seed": seed}
        try:
            report = learn.train_distribution_qgan(
                spec,
                target,
                epochs=epochs,
                batch_size=batch_size,
                lr=lr,
                seed=seed,
                initial_params=init,
            )
        except TrainingDivergedError as e:
            entry["error"] = str(e)
        else:
            entry["hellinger"] = report.final_metric
            hellingers.append(report.final_metric)
            path = out_dir / f"report_seed{seed}.json"
            path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
        per_seed.append(entry)

    aggregate = {
        "spec": spec.to_dict(),
        "target": target_kind,
        "epochs": epochs,
        "batch_size": batch_size,
        "lr": lr,
        "mean_hellinger": sum(hellingers) / len(hellingers) if hellingers else None,
        "per_seed": per_seed,
    }
    (out_dir / "aggregate.json").write_text(json.dumps(aggregate, indent=2) + "\n")
    return aggregate


def cmd_classify(
    spec: AnsatzSpec,
    paths: dict,
    n_classes: int,
    train_size: int,
    test_size: int,
    out_path: Path,
    epochs: int,
    batch_size: int,
    lr: float,
    seed: int,
) -> learn.TrainReport:
    """Load IDX data, train the classifier, write the report JSON."""
    train_images = data.load_idx(paths["train_images"], paths["train_labels"])
    test_images = data.load_idx(paths["test_images"], paths["test_labels"])
    train_set = data.prepare_dataset(train_images, n_classes)[:train_size]
    test_set = data.prepare_dataset(test_images, n_classes)[:test_size]
    report = learn.train_classifier(
        spec,
        train_set,
        test_set,
        n_classes,
        epochs=epochs,
        batch_size=batch_size,
        lr=lr,
        seed=seed,
    )
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    return report


def _add_spec_flags(parser, default_rotations="x", default_layers=1):
    parser.add_argument("--family", choices=FAMILIES, default="C1")
    parser.add_argument("--qubits", type=int, default=6)
    parser.add_argument("--layers", type=int, default=default_layers)
    parser.add_argument("--rotations", default=default_rotations)
    parser.add_argument("--topology", choices=TOPOLOGIES, default="linear")


def _spec_from_args(args) -> AnsatzSpec:
    return AnsatzSpec(args.family, args.qubits, args.layers, args.rotations, args.topology)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqlab",
        description="Benchmark variational quantum circuits: metric sweeps and task training.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("metrics", help="sweep expressibility/entanglement to CSV+JSON")
    m.add_argument("--config", help="JSON sweep config file (defaults: C1 sweep, 192 rows)")
    m.add_argument("--seed", type=int, default=None)
    m.add_argument("--out", default=None, help="CSV output path (JSON sidecar alongside)")

    g = sub.add_parser("gen-dist", help="train the distribution generator per seed")
    _add_spec_flags(g)
    g.add_argument("--seeds", default="1,2,3", help="comma-separated run seeds")
    g.add_argument("--epochs", type=int, default=40)
    g.add_argument("--batch-size", type=int, default=32)
    g.add_argument("--lr", type=float, default=0.01)
    g.add_argument("--target", choices=("random", "point"), default="random")
    g.add_argument("--out", default="gen_dist_out", help="output directory")

    c = sub.add_parser("classify", help="train the image classifier on IDX files")
    _add_spec_flags(c, default_rotations="y", default_layers=1)
    c.add_argument("--train-images", required=True)
    c.add_argument("--train-labels", required=True)
    c.add_argument("--test-images", required=True)
    c.add_argument("--test-labels", required=True)
    c.add_argument("--n-classes", type=int, choices=(2, 4, 6), default=2)
    c.add_argument("--train-size", type=int, default=2000)
    c.add_argument("--test-size", type=int, default=500)
    c.add_argument("--epochs", type=int, default=5)
    c.add_argument("--batch-size", type=int, default=32)
    c.add_argument("--lr", type=float, default=0.01)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default="classify_report.json")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "metrics":
            config = (
                SweepConfig.from_json_file(args.config) if args.config else SweepConfig()
            )
            if args.seed is not None:
                config.sampling = SamplingConfig(
                    n_pairs=config.sampling.n_pairs,
                    n_states=config.sampling.n_states,
                    n_bins=config.sampling.n_bins,
                    seed=args.seed,
                )
            if args.out is not None:
                config.output_path = args.out
            path = cmd_metrics(config)
            print(f"wrote {path} and {path.with_suffix('.json')}")
        elif args.command == "gen-dist":
            spec = _spec_from_args(args)
            seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
            if not seeds:
                raise ConfigurationError("at least one seed is required")
            aggregate = cmd_gen_dist(
                spec,
                seeds,
                Path(args.out),
                epochs=args.epochs,
                batch_size=args.batch_size,
                lr=args.lr,
                target_kind=args.target,
            )
            if aggregate["mean_hellinger"] is None:
                print("all seeds diverged", file=sys.stderr)
                return EXIT_DIVERGED
            print(f"mean Hellinger over {len(seeds)} seed(s): {aggregate['mean_hellinger']:.4f}")
        else:
            spec = _spec_from_args(args)
            report = cmd_classify(
                spec,
                {
                    "train_images": args.train_images,
                    "train_labels": args.train_labels,
                    "test_images": args.test_images,
                    "test_labels": args.test_labels,
                },
                n_classes=args.n_classes,
                train_size=args.train_size,
                test_size=args.test_size,
                out_path=Path(args.out),
                epochs=args.epochs,
                batch_size=args.batch_size,
                lr=args.lr,
                seed=args.seed,
            )
            print(f"test accuracy: {report.final_metric:.4f}")
    except ConfigurationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DataFormatError as e:
        print(f"data format error: {e}", file=sys.stderr)
        return EXIT_DATA_FORMAT
    except TrainingDivergedError as e:
        print(f"training diverged: {e}", file=sys.stderr)
        return EXIT_DIVERGED
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_DATA_FORMAT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
