"""``mgc`` command line: test, map, power, samplesize, simulate, screen.

Exit status is 0 on success, 2 for bad usage or bad input and 1 for
anything unexpected. Diagnostics go to stderr; with ``--out`` nothing is
printed to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import dataio
from .centering import Scheme
from .dataio import ResultDocument
from .exceptions import MGCError
from .geometry import pairwise_distances
from .inference import (
    Method,
    MethodSpec,
    adjust_pvalues_bh,
    estimate_power_many,
    permutation_test,
    sample_size_for_power,
)
from .synth import SimulationSpec, default_kappa, sample_dependency, sample_null

METHOD_CHOICES = [m.value for m in Method]


class UsageError(Exception):
    """Invalid flag values detected before any work starts."""


@dataclass
class RunConfig:
    command: str
    methods: List[str]
    x: Optional[str] = None
    y: Optional[str] = None
    dist: bool = False
    perms: int = 1000
    reps: int = 1000
    alpha: float = 0.05
    seed: int = 0
    sim: Optional[int] = None
    n: Optional[int] = None
    dim: int = 1
    kappa: Optional[float] = None
    q: float = 0.05
    labels: Optional[str] = None
    features: Optional[str] = None
    out: Optional[str] = None
    grid_out: Optional[str] = None
    emit_map: bool = False
    workers: int = 1
    header: bool = False
    delim: str = ","
    target: float = 0.85
    n_grid: Optional[List[int]] = None
    null: bool = False
    centering: str = "default"

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        methods = []
        for item in getattr(ns, "method", None) or []:
            methods.extend(s.strip() for s in item.split(",") if s.strip())
        for m in methods:
            if m not in METHOD_CHOICES:
                raise UsageError(f"unknown method {m!r}; choose from {', '.join(METHOD_CHOICES)}")
        grid = getattr(ns, "grid", None)
        cfg = cls(
            command=ns.command,
            methods=methods,
            x=getattr(ns, "x", None),
            y=getattr(ns, "y", None),
            dist=getattr(ns, "dist", False),
            perms=getattr(ns, "perms", 1000),
            reps=getattr(ns, "reps", 1000),
            alpha=getattr(ns, "alpha", 0.05),
            seed=ns.seed,
            sim=getattr(ns, "sim", None),
            n=getattr(ns, "n", None),
            dim=getattr(ns, "dim", 1),
            kappa=getattr(ns, "kappa", None),
            q=getattr(ns, "q", 0.05),
            labels=getattr(ns, "labels", None),
            features=getattr(ns, "features", None),
            out=ns.out,
            grid_out=getattr(ns, "grid_out", None),
            emit_map=getattr(ns, "emit_map", False),
            workers=ns.workers,
            header=getattr(ns, "header", False),
            delim=getattr(ns, "delim", ","),
            target=getattr(ns, "target", 0.85),
            n_grid=_parse_grid(grid) if grid else None,
            null=getattr(ns, "null", False),
            centering=getattr(ns, "centering", "default"),
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.perms < 1:
            raise UsageError(f"--perms must be >= 1, got {self.perms}")
        if self.reps < 1:
            raise UsageError(f"--reps must be >= 1, got {self.reps}")
        if not 0 < self.alpha < 1:
            raise UsageError(f"--alpha must lie in (0, 1), got {self.alpha}")
        if not 0 < self.q < 1:
            raise UsageError(f"--q must lie in (0, 1), got {self.q}")
        if self.seed < 0:
            raise UsageError("--seed must be non-negative")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if self.sim is not None and not 1 <= self.sim <= 20:
            raise UsageError(f"--sim must be in 1..20, got {self.sim}")
        if self.n is not None and self.n < 3:
            raise UsageError(f"--n must be >= 3, got {self.n}")
        if self.dim < 1:
            raise UsageError("--dim must be >= 1")
        if self.kappa is not None and self.kappa < 0:
            raise UsageError("--kappa must be non-negative")
        if len(self.delim) != 1:
            raise UsageError("--delim must be a single character")

    def method_spec(self, name: str) -> MethodSpec:
        if self.centering == "single" and name == Method.MGC.value:
            return MethodSpec(name, Scheme.SINGLE_COLUMN, Scheme.SINGLE_ROW)
        return MethodSpec(name)

    @property
    def noise(self) -> float:
        return default_kappa(self.dim) if self.kappa is None else self.kappa


def _parse_grid(text: str) -> List[int]:
    try:
        grid = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--grid must be comma-separated integers, got {text!r}") from None
    if not grid:
        raise UsageError("--grid is empty")
    return grid


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(cfg: RunConfig, obj) -> None:
    _emit(cfg, json.dumps(obj, indent=2, allow_nan=False) + "\n")


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _load_pair(cfg: RunConfig):
    xpath, ypath = _require(cfg.x, "--x"), _require(cfg.y, "--y")
    if cfg.dist:
        dx = dataio.load_distance_matrix(xpath, cfg.delim, cfg.header)
        dy = dataio.load_distance_matrix(ypath, cfg.delim, cfg.header)
    else:
        dx = pairwise_distances(dataio.load_samples(xpath, cfg.delim, cfg.header))
        dy = pairwise_distances(dataio.load_samples(ypath, cfg.delim, cfg.header))
    if dx.n != dy.n:
        raise UsageError(f"sample counts differ: {xpath} has {dx.n}, {ypath} has {dy.n}")
    return dx, dy


def _single_method(cfg: RunConfig, default: str = "mgc") -> str:
    if len(cfg.methods) > 1:
        raise UsageError(f"{cfg.command} takes a single --method")
    return cfg.methods[0] if cfg.methods else default


def _result_document(method: str, res, n: int, cfg: RunConfig, with_map: bool) -> ResultDocument:
    sel = res.selection
    if sel is not None:
        scales, canonical, tau = sel.optimal_scales, sel.canonical_scale, sel.threshold
    else:
        scales, canonical, tau = [(n, n)], (n, n), None
    return ResultDocument(
        method=method,
        statistic=res.statistic,
        p_value=res.pvalue.value,
        optimal_scales=scales,
        canonical_scale=canonical,
        threshold=tau,
        num_permutations=res.pvalue.num_permutations,
        seed=cfg.seed,
        map=res.corr_map.corr if (with_map and res.corr_map is not None) else None,
    )


def cmd_test(cfg: RunConfig) -> int:
    method = _single_method(cfg)
    dx, dy = _load_pair(cfg)
    res = permutation_test(cfg.method_spec(method), dx, dy, cfg.perms, cfg.seed, cfg.workers)
    doc = _result_document(method, res, dx.n, cfg, cfg.emit_map)
    _emit(cfg, dataio.dumps_result(doc))
    return 0


def cmd_map(cfg: RunConfig) -> int:
    method = _single_method(cfg)
    if method not in (Method.MGC.value, Method.MGC_MANTEL.value):
        raise UsageError("map needs a multiscale method (mgc or mgc-mantel)")
    dx, dy = _load_pair(cfg)
    res = permutation_test(cfg.method_spec(method), dx, dy, cfg.perms, cfg.seed, cfg.workers)
    doc = _result_document(method, res, dx.n, cfg, True)
    if cfg.grid_out:
        dataio.write_map_grid(res.corr_map.corr, cfg.grid_out, cfg.delim)
    _emit(cfg, dataio.dumps_result(doc))
    return 0


def _sim_spec(cfg: RunConfig, n: Optional[int] = None) -> SimulationSpec:
    sim = _require(cfg.sim, "--sim")
    size = n if n is not None else _require(cfg.n, "--n")
    return SimulationSpec(sim, size, cfg.dim, cfg.noise, cfg.seed)


def cmd_power(cfg: RunConfig) -> int:
    methods = cfg.methods or [Method.MGC.value]
    spec = _sim_spec(cfg)
    estimates = estimate_power_many(spec, [cfg.method_spec(m) for m in methods], None, cfg.reps, cfg.alpha, cfg.seed, cfg.workers)
    records = [
        {
            "method": m,
            "power": e.power,
            "critical_value": e.critical_value,
            "standard_error": e.standard_error,
            "num_replicates": e.num_replicates,
        }
        for m, e in zip(methods, estimates)
    ]
    _emit_json(cfg, {
        "sim": spec.sim_id, "n": spec.n, "dim": spec.p, "kappa": spec.kappa,
        "alpha": cfg.alpha, "reps": cfg.reps, "seed": cfg.seed, "records": records,
    })
    return 0


def cmd_samplesize(cfg: RunConfig) -> int:
    methods = cfg.methods or [Method.MGC.value]
    grid = cfg.n_grid or list(range(10, 130, 10))
    if not 0 <= cfg.target:
        raise UsageError("--target must be non-negative")
    spec = _sim_spec(cfg, n=grid[0])
    records = []
    for m in methods:
        size = sample_size_for_power(spec, cfg.method_spec(m), cfg.target, cfg.alpha, grid, cfg.reps, cfg.seed, cfg.workers)
        records.append({"method": m, "n": size, "reached": size is not None})
    _emit_json(cfg, {
        "sim": spec.sim_id, "dim": spec.p, "kappa": spec.kappa, "target": cfg.target,
        "alpha": cfg.alpha, "grid": grid, "reps": cfg.reps, "seed": cfg.seed, "records": records,
    })
    return 0


def cmd_simulate(cfg: RunConfig) -> int:
    prefix = _require(cfg.out, "--out")
    spec = _sim_spec(cfg)
    pair = sample_null(spec) if cfg.null else sample_dependency(spec)
    dataio.write_samples(pair.x, f"{prefix}_x.csv", cfg.delim)
    dataio.write_samples(pair.y, f"{prefix}_y.csv", cfg.delim)
    return 0


def cmd_screen(cfg: RunConfig) -> int:
    method = _single_method(cfg)
    feats = dataio.load_samples(_require(cfg.features, "--features"), cfg.delim, cfg.header).values
    labels = dataio.load_samples(_require(cfg.labels, "--labels"), cfg.delim, cfg.header).values
    if labels.shape[1] != 1:
        raise UsageError("--labels must hold a single column")
    labels = labels[:, 0]
    if not np.all((labels == 0) | (labels == 1)):
        raise UsageError("--labels must be binary (0/1)")
    if labels.shape[0] != feats.shape[0]:
        raise UsageError(
            f"label count {labels.shape[0]} does not match feature rows {feats.shape[0]}"
        )
    dy = pairwise_distances(labels)
    pvals, stats = [], []
    for j in range(feats.shape[1]):
        seed_j = int(np.random.SeedSequence([cfg.seed, j]).generate_state(1)[0])
        res = permutation_test(cfg.method_spec(method), pairwise_distances(feats[:, j]), dy, cfg.perms, seed_j, cfg.workers)
        pvals.append(res.pvalue.value)
        stats.append(res.statistic)
    reject, adjusted = adjust_pvalues_bh(pvals, cfg.q)
    _emit_json(cfg, {
        "method": method, "q": cfg.q, "num_permutations": cfg.perms, "seed": cfg.seed,
        "features": [
            {"index": j, "statistic": s, "p_value": p, "adjusted_p_value": float(a), "reject": bool(r)}
            for j, (s, p, a, r) in enumerate(zip(stats, pvals, adjusted, reject))
        ],
        "num_rejected": int(np.sum(reject)),
    })
    return 0


COMMANDS = {
    "test": cmd_test,
    "map": cmd_map,
    "power": cmd_power,
    "samplesize": cmd_samplesize,
    "simulate": cmd_simulate,
    "screen": cmd_screen,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="output path (stdout when omitted)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--delim", default=",")
    common.add_argument("--header", action="store_true", help="skip the first row of input files")

    method = argparse.ArgumentParser(add_help=False)
    method.add_argument("--method", action="append", help=f"one of {', '.join(METHOD_CHOICES)}")
    method.add_argument(
        "--centering", choices=["default", "single"], default="default",
        help="'single' centers x by column and y by row for the mgc method",
    )

    pair = argparse.ArgumentParser(add_help=False)
    pair.add_argument("--x", required=True)
    pair.add_argument("--y", required=True)
    pair.add_argument("--dist", action="store_true", help="inputs are distance matrices")
    pair.add_argument("--perms", type=int, default=1000)

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--sim", type=int, required=True)
    sim.add_argument("--dim", type=int, default=1)
    sim.add_argument("--kappa", type=float, default=None, help="default: 1 when --dim 1, else 0")

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--reps", type=int, default=1000)
    mc.add_argument("--alpha", type=float, default=0.05)

    parser = argparse.ArgumentParser(prog="mgc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", parents=[common, method, pair], help="permutation test on two inputs")
    p.add_argument("--emit-map", action="store_true")

    p = sub.add_parser("map", parents=[common, method, pair], help="local correlation map")
    p.add_argument("--grid-out", default=None, help="also write the map as a delimited grid")

    p = sub.add_parser("power", parents=[common, method, sim, mc], help="Monte-Carlo power")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("samplesize", parents=[common, method, sim, mc], help="sample size for target power")
    p.add_argument("--target", type=float, default=0.85)
    p.add_argument("--grid", default=None, help="comma-separated ascending sample sizes")

    p = sub.add_parser("simulate", parents=[common, sim], help="draw a benchmark sample")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--null", action="store_true", help="draw x and y independently")

    p = sub.add_parser("screen", parents=[common, method], help="per-feature tests with FDR control")
    p.add_argument("--features", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--perms", type=int, default=1000)
    p.add_argument("--q", type=float, default=0.05)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        cfg = RunConfig.from_args(ns)
        return COMMANDS[cfg.command](cfg)
    except (UsageError, MGCError, FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"mgc {ns.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - last-resort guard
        print(f"mgc {ns.command}: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
