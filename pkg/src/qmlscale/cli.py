"""Batch front-end: config parsing, sweep execution, CSV/JSON artifacts.

Subcommands:
    resources    post-compilation resource metrics sweep
    fidelity     fidelity scaling sweep
    tech-gap     improvement-factor sweep with threshold qubit counts
    compile-one  compile a single circuit and print metrics + gate dump
    selftest     run the unitary-equivalence battery

Every sweep writes one table (CSV or JSON) with a fixed column set plus a
JSON run manifest; reruns with the same config produce byte-identical tables.
Exit codes: 0 ok, 2 config error, 3 runtime error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field, fields

import numpy as np

from . import __version__
from .analysis import (DEFAULT_DELTAS, FIDELITY_QUBITS, RESOURCE_QUBITS,
                       TTN_FIDELITY_QUBITS, TTN_RESOURCE_QUBITS, SweepSpec,
                       fidelity_sweep, resource_sweep, tech_gap_sweep)
from .compiler import SabreConfig, compile_circuit, decompose_to_basis, dumps_compiled
from .generators import FAMILY_NAMES, build_family, parse_family
from .noise import NoiseParams
from .oracle import (MAX_ORACLE_QUBITS, equivalent_up_to_layout, phases_match,
                     random_circuit, simulate_unitary)
from .topology import TOPOLOGY_NAMES, build_topology

CSV_COLUMNS = (
    "experiment_id", "circuit_family", "entanglement", "topology", "n_qubits",
    "improvement_factor", "swap_count", "depth_pre", "depth_post",
    "depth_increase_pct", "twoq_pre", "twoq_post", "twoq_overhead_pct",
    "total_fidelity", "n_threshold", "fit_lambda", "fit_beta", "fit_r2",
    "extrapolated", "seed",
)


class ConfigError(ValueError):
    """Invalid experiment configuration (unknown key, bad value, bad combination)."""


@dataclass
class ExperimentConfig:
    """Machine-readable experimental configuration (defaults follow the
    reference hardware/sweep setup)."""
    families: tuple[str, ...] = FAMILY_NAMES
    topologies: tuple[str, ...] = TOPOLOGY_NAMES
    qubits: tuple[int, ...] = RESOURCE_QUBITS
    ttn_qubits: tuple[int, ...] = TTN_RESOURCE_QUBITS
    fidelity_qubits: tuple[int, ...] = FIDELITY_QUBITS
    ttn_fidelity_qubits: tuple[int, ...] = TTN_FIDELITY_QUBITS
    deltas: tuple[float, ...] = DEFAULT_DELTAS
    fixed_n: int = 256
    p1: float = 7.42e-5
    p2: float = 7e-4
    p_ent: float = 0.0
    t1q_ns: float = 7.9
    t2q_ns: float = 30.0
    T1_us: float = 1200.0
    T2_us: float = 1160.0
    extended_set_size: int = 20
    lookahead_weight: float = 0.5
    decay_increment: float = 0.001
    decay_reset_interval: int = 5
    stall_limit: int = 0  # 0 means automatic (3x device size)
    seed: int = 42
    workers: int = 0  # 0 means machine parallelism

    def noise_params(self) -> NoiseParams:
        return NoiseParams(
            p1=self.p1, p2=self.p2, p_ent=self.p_ent,
            t_1q=self.t1q_ns * 1e-9, t_2q=self.t2q_ns * 1e-9,
            T1=self.T1_us * 1e-6, T2=self.T2_us * 1e-6,
        )

    def sabre_config(self) -> SabreConfig:
        return SabreConfig(
            extended_set_size=self.extended_set_size,
            lookahead_weight=self.lookahead_weight,
            decay_increment=self.decay_increment,
            decay_reset_interval=self.decay_reset_interval,
            seed=self.seed,
            stall_limit=self.stall_limit if self.stall_limit > 0 else None,
        )

    def sweep_spec(self, subcommand: str) -> SweepSpec:
        scaling = subcommand == "resources"
        workers = self.workers if self.workers > 0 else (os.cpu_count() or 1)
        return SweepSpec(
            families=self.families,
            topologies=self.topologies,
            qubits=self.qubits if scaling else self.fidelity_qubits,
            ttn_qubits=self.ttn_qubits if scaling else self.ttn_fidelity_qubits,
            deltas=self.deltas,
            fixed_n=self.fixed_n,
            noise=self.noise_params(),
            sabre=self.sabre_config(),
            seed=self.seed,
            workers=workers,
        )

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        return out


_INT_LIST_KEYS = {"qubits", "ttn_qubits", "fidelity_qubits", "ttn_fidelity_qubits"}
_STR_LIST_KEYS = {"families", "topologies"}
_FLOAT_KEYS = {"p1", "p2", "p_ent", "t1q_ns", "t2q_ns", "T1_us", "T2_us",
               "lookahead_weight", "decay_increment"}
_INT_KEYS = {"fixed_n", "extended_set_size", "decay_reset_interval",
             "stall_limit", "seed", "workers"}


def _expand_numbers(text: str, cast) -> tuple:
    """Parse a comma-separated number list; 'a..b..step' tokens expand inclusively."""
    values = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if ".." in token:
            parts = token.split("..")
            if len(parts) != 3:
                raise ConfigError(f"bad range {token!r}, expected start..stop..step")
            start, stop, step = (int(p) for p in parts)
            if step <= 0 or stop < start:
                raise ConfigError(f"bad range {token!r}")
            values.extend(cast(v) for v in range(start, stop + 1, step))
        else:
            values.append(cast(token))
    return tuple(values)


def parse_config_text(text: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key in entries:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value.strip()
    return entries


def load_config(path: str | None) -> ExperimentConfig:
    """Read a key=value config file on top of the built-in defaults."""
    cfg = ExperimentConfig()
    if path is None:
        return cfg
    try:
        with open(path, encoding="utf-8") as fh:
            entries = parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    known = {f.name for f in fields(ExperimentConfig)}
    for key, value in entries.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            if key in _STR_LIST_KEYS:
                setattr(cfg, key, tuple(t.strip() for t in value.split(",") if t.strip()))
            elif key in _INT_LIST_KEYS:
                setattr(cfg, key, _expand_numbers(value, int))
            elif key == "deltas":
                setattr(cfg, key, _expand_numbers(value, float))
            elif key in _FLOAT_KEYS:
                setattr(cfg, key, float(value))
            elif key in _INT_KEYS:
                setattr(cfg, key, int(value))
            else:  # pragma: no cover - key sets are exhaustive
                raise ConfigError(f"unhandled config key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})") from exc
    return cfg


def validate_config(cfg: ExperimentConfig):
    for fam in cfg.families:
        if fam not in FAMILY_NAMES:
            raise ConfigError(f"unknown circuit family {fam!r}")
    for topo in cfg.topologies:
        if topo not in TOPOLOGY_NAMES:
            raise ConfigError(f"unknown topology {topo!r}")
    for key in ("qubits", "ttn_qubits", "fidelity_qubits", "ttn_fidelity_qubits"):
        counts = getattr(cfg, key)
        if not counts:
            raise ConfigError(f"{key} must be non-empty")
        if list(counts) != sorted(set(counts)):
            raise ConfigError(f"{key} must be strictly increasing")
        if any(n < 2 for n in counts):
            raise ConfigError(f"{key} entries must be >= 2")
    if "ttn" in cfg.families:
        for key in ("ttn_qubits", "ttn_fidelity_qubits"):
            for n in getattr(cfg, key):
                if n & (n - 1) != 0:
                    raise ConfigError(f"{key} must hold powers of two, got {n}")
        if cfg.fixed_n & (cfg.fixed_n - 1) != 0:
            raise ConfigError("fixed_n must be a power of two when sweeping ttn")
    if not cfg.deltas or any(d < 1 for d in cfg.deltas):
        raise ConfigError("deltas must be non-empty and >= 1")
    if cfg.fixed_n < 2:
        raise ConfigError("fixed_n must be >= 2")
    try:
        cfg.noise_params()
        cfg.sabre_config()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _row_dict(**kwargs) -> dict:
    row = {col: None for col in CSV_COLUMNS}
    for key, value in kwargs.items():
        row[key] = value
    return row


def _family_columns(family: str) -> tuple[str, str]:
    kind, strategy = parse_family(family)
    return kind, strategy.value if strategy is not None else ""


def _resource_rows(spec: SweepSpec) -> list[dict]:
    rows = []
    for r in resource_sweep(spec):
        kind, strat = _family_columns(r.family)
        m = r.metrics
        rows.append(_row_dict(
            experiment_id=f"{r.family}:{r.topology}:{r.n_qubits}",
            circuit_family=kind, entanglement=strat, topology=r.topology,
            n_qubits=r.n_qubits, swap_count=m.swap_count,
            depth_pre=m.depth_pre, depth_post=m.depth_post,
            depth_increase_pct=m.depth_increase_pct,
            twoq_pre=m.twoq_pre, twoq_post=m.twoq_post,
            twoq_overhead_pct=m.twoq_overhead_pct, seed=spec.seed,
        ))
    return rows


def _fidelity_rows(spec: SweepSpec) -> list[dict]:
    rows = []
    for r in fidelity_sweep(spec):
        kind, strat = _family_columns(r.family)
        m = r.metrics
        rows.append(_row_dict(
            experiment_id=f"{r.family}:{r.topology}:{r.n_qubits}:d{r.delta:g}",
            circuit_family=kind, entanglement=strat, topology=r.topology,
            n_qubits=r.n_qubits, improvement_factor=r.delta,
            swap_count=m.swap_count, depth_pre=m.depth_pre,
            depth_post=m.depth_post, depth_increase_pct=m.depth_increase_pct,
            twoq_pre=m.twoq_pre, twoq_post=m.twoq_post,
            twoq_overhead_pct=m.twoq_overhead_pct,
            total_fidelity=r.total_fidelity, seed=spec.seed,
        ))
    return rows


def _tech_gap_rows(spec: SweepSpec) -> list[dict]:
    rows = []
    for r in tech_gap_sweep(spec).rows:
        kind, strat = _family_columns(r.family)
        fit = r.fit
        rows.append(_row_dict(
            experiment_id=f"{r.family}:{r.topology}:{r.fixed_n}:d{r.delta:g}",
            circuit_family=kind, entanglement=strat, topology=r.topology,
            n_qubits=r.fixed_n, improvement_factor=r.delta,
            total_fidelity=r.fidelity_at_fixed_n,
            n_threshold=r.n_threshold,
            fit_lambda=fit.lam if fit else None,
            fit_beta=fit.beta if fit else None,
            fit_r2=fit.r_squared if fit else None,
            extrapolated=r.extrapolated, seed=spec.seed,
        ))
    return rows


def _write_rows(rows: list[dict], path: str, fmt: str):
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            if fmt == "csv":
                fh.write(",".join(CSV_COLUMNS) + "\n")
                for row in rows:
                    fh.write(",".join(_fmt(row[c]) for c in CSV_COLUMNS) + "\n")
            else:
                payload = []
                for row in rows:
                    item = {}
                    for col in CSV_COLUMNS:
                        v = row[col]
                        if isinstance(v, float):
                            v = float(f"{v:.10g}")
                        item[col] = v
                    payload.append(item)
                json.dump(payload, fh, indent=2)
                fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_manifest(out_dir: str, name: str, cfg: ExperimentConfig, args,
                    outputs: list[str], wall_time: float):
    manifest = {
        "tool": "qmlscale",
        "version": __version__,
        "subcommand": name,
        "seed": cfg.seed,
        "config": cfg.as_dict(),
        "outputs": [os.path.basename(p) for p in outputs],
        "wall_time_s": round(wall_time, 3),
        "argv": sys.argv[1:],
    }
    path = os.path.join(out_dir, f"{name.replace('-', '_')}_manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def _apply_overrides(cfg: ExperimentConfig, args):
    if args.seed is not None:
        cfg.seed = args.seed
    if args.workers is not None:
        cfg.workers = args.workers
    if getattr(args, "family", None):
        cfg.families = tuple(t.strip() for t in args.family.split(","))
    if getattr(args, "topology", None):
        cfg.topologies = tuple(t.strip() for t in args.topology.split(","))
    if getattr(args, "n", None):
        single = (args.n,)
        cfg.qubits = single
        cfg.fidelity_qubits = single
        cfg.ttn_qubits = single
        cfg.ttn_fidelity_qubits = single
    if getattr(args, "delta", None):
        cfg.deltas = (float(args.delta),)


def _run_sweep(name: str, args) -> int:
    started = time.monotonic()
    cfg = load_config(args.config)
    _apply_overrides(cfg, args)
    validate_config(cfg)
    os.makedirs(args.out, exist_ok=True)
    spec = cfg.sweep_spec(name)
    builder = {"resources": _resource_rows, "fidelity": _fidelity_rows,
               "tech-gap": _tech_gap_rows}[name]
    rows = builder(spec)
    ext = "csv" if args.format == "csv" else "json"
    table = os.path.join(args.out, f"{name.replace('-', '_')}.{ext}")
    _write_rows(rows, table, args.format)
    _write_manifest(args.out, name, cfg, args, [table], time.monotonic() - started)
    print(f"{name}: wrote {len(rows)} rows to {table}")
    return 0


def _run_compile_one(args) -> int:
    started = time.monotonic()
    cfg = load_config(args.config)
    _apply_overrides(cfg, args)
    if args.circuit_family not in FAMILY_NAMES:
        raise ConfigError(f"unknown circuit family {args.circuit_family!r}")
    if args.topology_one not in TOPOLOGY_NAMES:
        raise ConfigError(f"unknown topology {args.topology_one!r}")
    validate_config(cfg)
    circuit = build_family(args.circuit_family, args.n_one)
    graph = build_topology(args.topology_one, args.n_one)
    compiled = compile_circuit(circuit, graph, cfg.sabre_config())
    print(dumps_compiled(compiled))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_manifest(args.out, "compile-one", cfg, args, [],
                        time.monotonic() - started)
    return 0


def _run_selftest(args) -> int:
    started = time.monotonic()
    cfg = load_config(args.config)
    _apply_overrides(cfg, args)
    validate_config(cfg)
    rng = np.random.default_rng(cfg.seed)
    failures = 0
    checks = 0
    for topo in TOPOLOGY_NAMES:
        for _ in range(12):
            n = int(rng.integers(2, MAX_ORACLE_QUBITS))
            circuit = random_circuit(rng, n)
            compiled = compile_circuit(circuit, build_topology(topo, n), cfg.sabre_config())
            checks += 1
            if not equivalent_up_to_layout(circuit, compiled, tol=1e-7):
                failures += 1
                print(f"FAIL equivalence: topology={topo} n={n}")
    for family in ("ghz", "kernel-linear", "ttn"):
        n = 4
        circuit = build_family(family, n)
        basis = decompose_to_basis(circuit)
        checks += 1
        if not phases_match(simulate_unitary(basis), simulate_unitary(circuit), 1e-9):
            failures += 1
            print(f"FAIL basis decomposition: family={family}")
    elapsed = time.monotonic() - started
    print(f"selftest: {checks - failures}/{checks} checks passed in {elapsed:.1f}s")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_manifest(args.out, "selftest", cfg, args, [], elapsed)
    return 0 if failures == 0 else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmlscale",
        description="Compile QML circuit families onto device topologies and "
                    "characterize resource and fidelity scaling.",
    )
    parser.add_argument("--version", action="version", version=f"qmlscale {__version__}")
    base = argparse.ArgumentParser(add_help=False)
    base.add_argument("--config", help="key=value experiment config file")
    base.add_argument("--out", default="results", help="output directory")
    base.add_argument("--format", choices=("csv", "json"), default="csv")
    base.add_argument("--workers", type=int, help="worker pool width (default: machine parallelism)")
    base.add_argument("--seed", type=int, help="override the config seed")
    filters = argparse.ArgumentParser(add_help=False)
    filters.add_argument("--family", help="restrict to these circuit families (comma separated)")
    filters.add_argument("--topology", help="restrict to these topologies (comma separated)")
    filters.add_argument("--n", type=int, help="restrict to a single qubit count")
    filters.add_argument("--delta", type=float, help="restrict to a single improvement factor")

    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("resources", parents=[base, filters],
                   help="resource scaling sweep (SWAPs, depth, two-qubit counts)")
    sub.add_parser("fidelity", parents=[base, filters], help="fidelity scaling sweep")
    sub.add_parser("tech-gap", parents=[base, filters],
                   help="improvement-factor sweep with threshold qubit counts")

    one = sub.add_parser("compile-one", parents=[base],
                         help="compile one circuit and print metrics + dump")
    one.add_argument("circuit_family", choices=FAMILY_NAMES)
    one.add_argument("--n", dest="n_one", type=int, default=4, help="qubit count")
    one.add_argument("--topology", dest="topology_one", default="linear",
                     choices=TOPOLOGY_NAMES)
    one.set_defaults(out=None)

    st = sub.add_parser("selftest", parents=[base],
                        help="run the unitary-equivalence battery")
    st.set_defaults(out=None)
    return parser


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.subcommand in ("resources", "fidelity", "tech-gap"):
            return _run_sweep(args.subcommand, args)
        if args.subcommand == "compile-one":
            return _run_compile_one(args)
        return _run_selftest(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
