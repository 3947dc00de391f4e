"""Batch front end: interval construction, Lie-rank checks and a
separability scan, written out as CSV files plus a text summary.

Configuration is a TOML document; every key can also be given (and
overridden) on the command line::

    n = 2
    ell = 0.5
    couplings = [1, 1]
    bg_radius = 1.0
    seeds = [1, 2, 3]

    [site_law]
    atoms = [0, 1]
    probabilities = [0.5, 0.5]

Exit status is 0 when every grid energy is separable, 2 when some energy
is inconclusive and 1 on error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ConfigParseError, ConfigValidationError, EmptyIntervalError
from .lie import DEFAULT_RANK_TOL
from .lyapunov import DEFAULT_SIGNIFICANCE, DEFAULT_STEPS, separability_scan
from .model import ModelConfig, SiteLaw

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


@dataclass
class RunConfig:
    model: ModelConfig
    grid_points: int = 21
    steps: int = DEFAULT_STEPS
    seeds: tuple = (1, 2, 3)
    qr_stride: int = 1
    rank_tol: float = DEFAULT_RANK_TOL
    output_path: Path = field(default_factory=lambda: Path("."))
    emit_csv: bool = True
    significance: float = DEFAULT_SIGNIFICANCE
    workers: int | None = None

    def __post_init__(self):
        for name in ("grid_points", "steps", "qr_stride"):
            if getattr(self, name) < 1:
                raise ConfigValidationError(f"{name} must be positive")
        if not self.seeds:
            raise ConfigValidationError("seeds must be nonempty")
        if not self.rank_tol > 0 or not self.significance > 0:
            raise ConfigValidationError("rank_tol and significance must be positive")
        if self.workers is not None and self.workers < 1:
            raise ConfigValidationError("workers must be positive")
        self.output_path = Path(self.output_path)


def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_real(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _real_list(v):
    return isinstance(v, list) and all(_is_real(x) for x in v)


# key -> (type check, description)
_SCHEMA = {
    "n": (_is_int, "an integer"),
    "ell": (_is_real, "a number"),
    "couplings": (_real_list, "a list of numbers"),
    "bg_radius": (_is_real, "a number"),
    "site_law": (lambda v: isinstance(v, dict), "a table"),
    "grid_points": (_is_int, "an integer"),
    "steps": (_is_int, "an integer"),
    "seeds": (lambda v: isinstance(v, list) and all(_is_int(x) for x in v),
              "a list of integers"),
    "qr_stride": (_is_int, "an integer"),
    "rank_tol": (_is_real, "a number"),
    "output": (lambda v: isinstance(v, str), "a path string"),
    "emit_csv": (lambda v: isinstance(v, bool), "a boolean"),
    "significance": (_is_real, "a number"),
    "workers": (_is_int, "an integer"),
}
_REQUIRED = ("n", "ell", "couplings")


def _check_schema(doc):
    for key, value in doc.items():
        if key not in _SCHEMA:
            raise ConfigParseError(f"unknown key {key!r}", key)
        check, what = _SCHEMA[key]
        if not check(value):
            raise ConfigParseError(f"key {key!r} must be {what}", key)
    for key in _REQUIRED:
        if key not in doc:
            raise ConfigParseError(f"missing required key {key!r}", key)
    law = doc.get("site_law")
    if law is not None:
        for key, value in law.items():
            if key not in ("atoms", "probabilities"):
                raise ConfigParseError(f"unknown key 'site_law.{key}'", f"site_law.{key}")
            if not _real_list(value):
                raise ConfigParseError(
                    f"key 'site_law.{key}' must be a list of numbers", f"site_law.{key}")
        if "atoms" not in law:
            raise ConfigParseError("missing key 'site_law.atoms'", "site_law.atoms")


def config_from_mapping(doc):
    """Validate a parsed key-value mapping and fill in defaults."""
    _check_schema(doc)
    law = doc.get("site_law")
    if law is None:
        site_law = SiteLaw.bernoulli()
    else:
        atoms = law["atoms"]
        probs = law.get("probabilities", [1.0 / len(atoms)] * len(atoms))
        site_law = SiteLaw(tuple(atoms), tuple(probs))
    model = ModelConfig(
        n=doc["n"],
        ell=doc["ell"],
        couplings=tuple(doc["couplings"]),
        site_law=site_law,
        bg_radius=doc.get("bg_radius", 1.0),
    )
    kwargs = {}
    for key in ("grid_points", "steps", "qr_stride", "rank_tol", "emit_csv",
                "significance", "workers"):
        if key in doc:
            kwargs[key] = doc[key]
    if "seeds" in doc:
        kwargs["seeds"] = tuple(doc["seeds"])
    if "output" in doc:
        kwargs["output_path"] = Path(doc["output"])
    return RunConfig(model=model, **kwargs)


def parse_config(source):
    """Parse a TOML document (text) into a :class:`RunConfig`."""
    try:
        doc = tomllib.loads(source)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigParseError(f"malformed config: {exc}") from exc
    return config_from_mapping(doc)


def fmt(x):
    """Fixed 12-significant-digit rendering used in every CSV cell."""
    return format(float(x), ".12g")


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def exponents_header(n):
    return (["E"] + [f"gamma_{i}" for i in range(1, 2 * n + 1)]
            + [f"se_{i}" for i in range(1, 2 * n + 1)]
            + ["lie_rank", "separable", "min_gap"])


def write_interval_csv(path, interval):
    cols = ["lambda_min", "lambda_max", "delta", "ell_c", "r_ell", "lower", "upper"]
    _write_csv(path, cols, [[fmt(getattr(interval, c)) for c in cols]])


def write_exponents_csv(path, report, n):
    rows = []
    for i, e in enumerate(report.energies):
        est = report.estimates[i]
        if est is None:
            nums = [fmt(math.nan)] * (4 * n)
            gap = fmt(math.nan)
        else:
            nums = [fmt(v) for v in est.exponents] + [fmt(v) for v in est.standard_errors]
            gap = fmt(est.min_positive_gap)
        rows.append([fmt(e)] + nums + [str(report.lie_ranks[i]),
                                       str(int(report.separable[i])), gap])
    _write_csv(path, exponents_header(n), rows)


def write_summary(path, cfg, report, wall):
    n_sep = sum(report.separable)
    total = len(report.separable)
    iv = report.interval
    lines = [
        f"n = {cfg.model.n}",
        f"ell = {fmt(cfg.model.ell)}",
        f"couplings = {', '.join(fmt(c) for c in cfg.model.couplings)}",
        f"bg_radius = {fmt(cfg.model.bg_radius)}",
        f"ell_c = {fmt(iv.ell_c)}",
        f"interval = [{fmt(iv.lower)}, {fmt(iv.upper)}]",
        f"grid_points = {total}",
        f"steps = {cfg.steps}",
        f"seeds = {', '.join(str(s) for s in cfg.seeds)}",
        f"qr_stride = {cfg.qr_stride}",
        f"significance = {fmt(report.significance)} standard errors",
        f"separable = {n_sep}",
        f"inconclusive = {total - n_sep}",
        f"min_gap = {fmt(report.min_gap)}",
        f"lie_rank_expected = {cfg.model.algebra_dim}",
        f"lie_rank_failures = {sum(not g for g in report.lie_generated)}",
    ]
    for i, ok in enumerate(report.lie_generated):
        if not ok:
            lines.append(f"  lie rank {report.lie_ranks[i]} at E = {fmt(report.energies[i])}")
    for i, msg in sorted(report.failures.items()):
        lines.append(f"failure at E = {fmt(report.energies[i])}: {msg}")
    lines.append(f"verdict = {'separable' if report.all_separable else 'inconclusive'}")
    lines.append(f"wall_time_s = {wall:.3f}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def execute(cfg):
    """Run the scan and write artifacts; returns ``(status, report)``.

    ``report`` is None when the scan itself could not be carried out.
    """
    start = time.perf_counter()
    try:
        report = separability_scan(
            cfg.model, grid_points=cfg.grid_points, steps=cfg.steps, seeds=cfg.seeds,
            qr_stride=cfg.qr_stride, rank_tol=cfg.rank_tol,
            significance=cfg.significance, workers=cfg.workers)
    except EmptyIntervalError as exc:
        print(f"error: ell={exc.ell!r} is not below the critical length "
              f"ell_c={exc.ell_c!r}; choose a smaller ell", file=sys.stderr)
        return EXIT_ERROR, None
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR, None
    wall = time.perf_counter() - start
    try:
        cfg.output_path.mkdir(parents=True, exist_ok=True)
        if cfg.emit_csv:
            write_interval_csv(cfg.output_path / "interval.csv", report.interval)
            write_exponents_csv(cfg.output_path / "exponents.csv", report, cfg.model.n)
        write_summary(cfg.output_path / "summary.txt", cfg, report, wall)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_ERROR, report
    log.info("%d/%d energies separable", sum(report.separable), len(report.separable))
    return (EXIT_OK if report.all_separable else EXIT_INCONCLUSIVE), report


def run(cfg):
    """Execute a scan and write its artifacts; returns the exit status."""
    return execute(cfg)[0]


def _csv_floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _csv_ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser():
    p = argparse.ArgumentParser(
        prog="matrix-anderson",
        description="Energy interval, Lie generation and Lyapunov separability scan.")
    p.add_argument("--config", type=Path, help="TOML run configuration")
    p.add_argument("--n", type=int)
    p.add_argument("--ell", type=float)
    p.add_argument("--couplings", type=_csv_floats, help="comma separated, e.g. 1,1")
    p.add_argument("--bg-radius", type=float)
    p.add_argument("--atoms", type=_csv_floats, help="site-law atoms, e.g. 0,1")
    p.add_argument("--probabilities", type=_csv_floats, help="site-law probabilities")
    p.add_argument("--grid-points", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--seeds", type=_csv_ints, help="comma separated, e.g. 1,2,3")
    p.add_argument("--qr-stride", type=int)
    p.add_argument("--rank-tol", type=float)
    p.add_argument("--significance", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--output", type=str, help="output directory")
    p.add_argument("--no-csv", action="store_true", help="write only summary.txt")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        doc = tomllib.loads(args.config.read_text(encoding="utf-8")) if args.config else {}
        for key in ("n", "ell", "couplings", "bg_radius", "grid_points", "steps",
                    "seeds", "qr_stride", "rank_tol", "significance", "workers", "output"):
            value = getattr(args, key)
            if value is not None:
                doc[key] = value
        if args.atoms is not None or args.probabilities is not None:
            law = dict(doc.get("site_law", {}))
            if args.atoms is not None:
                law["atoms"] = args.atoms
            if args.probabilities is not None:
                law["probabilities"] = args.probabilities
            doc["site_law"] = law
        if args.no_csv:
            doc["emit_csv"] = False
        cfg = config_from_mapping(doc)
    except (OSError, tomllib.TOMLDecodeError, ConfigParseError,
            ConfigValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
