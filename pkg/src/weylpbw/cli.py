"""Run the engine from the shell.

Four subcommands cover the library surface:

  roots       positive roots of a Cartan type in the fixed sweep order
  essential   essential multiindices (monomial basis) of a Weyl module
  filtration  filtration level dimensions, single module or tensor product
  verify      splitting-criterion checks (type-G2 pipeline or small rank)

Exit codes: 0 success, 1 a verification or oracle check failed, 2 usage or
configuration error, 3 a resource cap was exceeded.

Reports are byte-identical across runs with the same configuration and code
version; timing goes to stderr only.  JSON is the canonical format, CSV is
offered for flat tables only, and the text renderer is lossy (labeled as
such in its header line).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import SCHEMA_VERSION, __version__
from .cache import CACHE_DIR_ENV, PayloadStore, load_or_build_lattice, stable_dumps
from .charzero import DIM_CAP_DEFAULT
from .criterion import check_condition2, check_v0, g2_verify
from .pbw import essential_set, g2_essential_table, order_key, pbw_filtration
from .rootsys import CartanMatrixError, ResourceCapError, build_root_system
from .tensorfilt import induced_filtration
from .weylmod import WeylModuleP, is_prime

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


class UsageError(Exception):
    """A configuration problem the user can fix; rendered on stderr, exit 2."""


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class RunConfig:
    """One command's validated inputs.

    ``cartan_spec`` is either a type label ("G2") or explicit Cartan matrix
    rows read from a JSON file; ``weight``/``tensor`` are fundamental-weight
    coordinate tuples; ``p`` is None for characteristic zero.
    """

    cartan_spec: object
    label: Optional[str]
    weight: Optional[Tuple[int, ...]]
    tensor: Optional[Tuple[int, ...]]
    p: Optional[int]
    cap: int
    store: Optional[PayloadStore]
    fmt: str
    out: Optional[str]
    quiet: bool

    def __post_init__(self):
        if self.cap < 1:
            raise UsageError("--cap must be at least 1")
        if self.p is not None and not is_prime(self.p):
            raise UsageError(f"--p must be prime, got {self.p}")

    def system(self):
        if self.cartan_spec is None:
            raise UsageError("a Cartan type is required: --type or --cartan")
        try:
            return build_root_system(self.cartan_spec)
        except CartanMatrixError as exc:
            raise UsageError(f"invalid Cartan data: {exc}") from None


def _parse_weight(text: str, rank: int, flag: str) -> Tuple[int, ...]:
    try:
        coords = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise UsageError(f"{flag} expects comma-joined integers, got {text!r}") from None
    if len(coords) != rank:
        raise UsageError(f"{flag} has {len(coords)} coordinates; the system has rank {rank}")
    if any(c < 0 for c in coords):
        raise UsageError(f"{flag} must be dominant (nonnegative coordinates), got {text!r}")
    return coords


def _read_cartan_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            rows = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read Cartan file {path}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"Cartan file {path} is not valid JSON: {exc}") from None
    if (not isinstance(rows, list) or not rows
            or not all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in rows)):
        raise UsageError(f"Cartan file {path} must hold a JSON matrix of integers")
    return rows


def _config_from(args) -> RunConfig:
    cartan_spec = None
    label = None
    if getattr(args, "type", None) is not None:
        cartan_spec = args.type
        label = args.type
    elif getattr(args, "cartan", None) is not None:
        cartan_spec = _read_cartan_file(args.cartan)

    store = None
    if not getattr(args, "no_cache", False):
        cache_dir = getattr(args, "cache_dir", None) or os.environ.get(CACHE_DIR_ENV)
        if cache_dir:
            store = PayloadStore(Path(cache_dir))

    weight = None
    tensor = None
    p = getattr(args, "p", None)
    cfg = RunConfig(
        cartan_spec=cartan_spec,
        label=label,
        weight=weight,
        tensor=tensor,
        p=p,
        cap=getattr(args, "cap", DIM_CAP_DEFAULT),
        store=store,
        fmt=getattr(args, "format", "json"),
        out=getattr(args, "out", None),
        quiet=getattr(args, "quiet", False),
    )
    return cfg


def _with_weights(cfg: RunConfig, args, system) -> RunConfig:
    weight = None
    if getattr(args, "weight", None) is not None:
        weight = _parse_weight(args.weight, system.rank, "--weight")
    tensor = None
    if getattr(args, "tensor", None) is not None:
        tensor = _parse_weight(args.tensor, system.rank, "--tensor")
    return RunConfig(cfg.cartan_spec, cfg.label, weight, tensor, cfg.p, cfg.cap,
                     cfg.store, cfg.fmt, cfg.out, cfg.quiet)


def _cartan_rows(system) -> List[List[int]]:
    return [list(r) for r in system.cartan.matrix]


def _join(ints: Sequence[int]) -> str:
    return ",".join(str(x) for x in ints)


# ---------------------------------------------------------------------------
# subcommands
#
# Each returns (exit_code, payload, flat, text_lines) where flat is
# (header, rows) for the CSV renderer or None when the report is not a
# flat table.


def cmd_roots(cfg: RunConfig, args):
    system = cfg.system()
    rows = []
    for i, beta in enumerate(system.positive_roots):
        rows.append({
            "index": i + 1,
            "name": system.root_name(beta),
            "coords": list(beta),
            "height": system.height(beta),
            "pairings": list(system.root_weight_coords(beta)),
        })
    payload = {
        "schema_version": SCHEMA_VERSION,
        "type": cfg.label,
        "cartan": _cartan_rows(system),
        "count": len(rows),
        "roots": rows,
    }
    flat = (("index", "name", "coords", "height", "pairings"),
            [(r["index"], r["name"], _join(r["coords"]), r["height"],
              _join(r["pairings"])) for r in rows])
    text = [f"positive roots ({cfg.label or 'custom Cartan matrix'}): {len(rows)}"]
    for r in rows:
        text.append(f"  {r['index']:>2}  {r['name']:<10} coords {_join(r['coords']):<12}"
                    f" height {r['height']:>2}  pairings {_join(r['pairings'])}")
    return EXIT_OK, payload, flat, text


def cmd_essential(cfg: RunConfig, args):
    system = cfg.system()
    cfg = _with_weights(cfg, args, system)
    if cfg.weight is None:
        raise UsageError("essential requires --weight")
    lattice = load_or_build_lattice(system, cfg.weight, cfg.p, cfg.store, cfg.cap)
    module = WeylModuleP(lattice, cfg.p)
    es = essential_set(module)
    indices = es.indices
    histogram = es.degree_histogram()
    payload = {
        "schema_version": SCHEMA_VERSION,
        "type": cfg.label,
        "cartan": _cartan_rows(system),
        "weight": list(cfg.weight),
        "p": cfg.p,
        "count": len(indices),
        "degree_histogram": histogram,
        "indices": [list(s) for s in indices],
    }

    code = EXIT_OK
    if args.oracle:
        if cfg.label != "G2":
            raise UsageError("--oracle cross-checks the type-G2 inequality table;"
                             " it needs --type G2")
        table = g2_essential_table(cfg.weight[0], cfg.weight[1])
        mine = {tuple(s) for s in indices}
        other = set(table)
        agrees = mine == other
        oracle = {"source": "inequality-table", "agrees": agrees,
                  "table_size": len(other)}
        if not agrees:
            oracle["missing"] = [list(s) for s in sorted(other - mine, key=order_key)[:20]]
            oracle["extra"] = [list(s) for s in sorted(mine - other, key=order_key)[:20]]
            code = EXIT_VERIFY
        payload["oracle"] = oracle

    n = system.n_pos
    flat = (tuple(f"s{i+1}" for i in range(n)) + ("degree",),
            [tuple(s) + (sum(s),) for s in indices])
    text = [f"essential multiindices of V({_join(cfg.weight)})"
            f" ({cfg.label or 'custom'}, p={cfg.p}): {len(indices)}",
            f"degree histogram: {histogram}"]
    text.extend("  " + _join(s) for s in indices)
    if "oracle" in payload:
        text.append(f"oracle agreement: {payload['oracle']['agrees']}")
    return code, payload, flat, text


def cmd_filtration(cfg: RunConfig, args):
    system = cfg.system()
    cfg = _with_weights(cfg, args, system)
    if cfg.weight is None:
        raise UsageError("filtration requires --weight")

    if cfg.tensor is None:
        lattice = load_or_build_lattice(system, cfg.weight, cfg.p, cfg.store, cfg.cap)
        module = WeylModuleP(lattice, cfg.p)
        top = args.levels if args.levels is not None else sum(
            system.depth_vector(cfg.weight))
        table = pbw_filtration(module, top)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "type": cfg.label,
            "cartan": _cartan_rows(system),
            "weight": list(cfg.weight),
            "p": cfg.p,
            "levels": [{"n": i, "dim": d} for i, d in enumerate(table.level_dims)],
            "graded": list(table.graded_dims),
            "top_dim": table.top_dim,
        }
        rows = [(i, d, g) for i, (d, g) in
                enumerate(zip(table.level_dims, table.graded_dims))]
        text = [f"filtration of V({_join(cfg.weight)}) ({cfg.label or 'custom'},"
                f" p={cfg.p}); top dimension {table.top_dim}"]
    else:
        table = induced_filtration(system, cfg.weight, cfg.tensor, cfg.p,
                                   up_to=args.levels, dim_cap=cfg.cap)
        payload = {"schema_version": SCHEMA_VERSION, "type": cfg.label,
                   "cartan": _cartan_rows(system)}
        payload.update(table.to_payload())
        rows = [(i, d, g) for i, (d, g) in
                enumerate(zip(table.level_dims, table.graded_dims))]
        text = [f"induced filtration of V({_join(cfg.weight)}) (x)"
                f" V({_join(cfg.tensor)}) ({cfg.label or 'custom'}, p={cfg.p});"
                f" tensor dimension {table.tensor_dim}"]
        if len(table.level_dims) >= 1 and all(g == 0 for g in table.graded_dims[1:]):
            payload["note"] = "filtration concentrated in degree 0"
            text.append("note: filtration concentrated in degree 0")

    flat = (("n", "dim", "graded_dim"), rows)
    text.extend(f"  n={i:<3} dim {d:<6} graded {g}" for i, d, g in rows)
    return EXIT_OK, payload, flat, text


def cmd_verify(cfg: RunConfig, args):
    if not (args.g2 or args.condition2 or args.v0):
        raise UsageError("verify needs a mode: --g2, --condition2, or --v0")
    if cfg.fmt == "csv":
        raise UsageError("verification reports are not flat tables; use json or text")
    if cfg.p is None:
        raise UsageError("verify requires --p")

    if args.g2:
        if getattr(args, "type", None) or getattr(args, "cartan", None):
            raise UsageError("--g2 fixes the type; do not pass --type/--cartan")
        report = g2_verify(cfg.p, cfg.cap)
        if report.certified:
            status = "pass-certified"
        elif report.exploration_only:
            status = "exploration-only"
        else:
            status = "fail"
        payload = report.to_payload()
        payload["status"] = status
        # Exploration runs (p < 11) produce data without a certification
        # claim, so they are not verification failures.
        code = EXIT_OK if (report.overall or report.exploration_only) else EXIT_VERIFY
        text = [f"type-G2 splitting verification at p={cfg.p}: status {status}"]
        if report.exploration_only:
            text.append("EXPLORATION ONLY: p < 11 is outside the certified range;"
                        " no certification claimed")
        for step in report.steps:
            text.append(f"  step {step.name:<16} {'PASS' if step.ok else 'FAIL'}")
        text.append(f"overall: {'PASS' if report.overall else 'FAIL'}")
        return code, payload, None, text

    system = cfg.system()
    checker = check_condition2 if args.condition2 else check_v0
    report = checker(system, cfg.p, cfg.cap)
    payload = report.to_payload()
    payload["status"] = "pass" if report.verdict else "fail"
    code = EXIT_OK if report.verdict else EXIT_VERIFY
    text = [f"{report.condition} for {report.label} at p={cfg.p}:"
            f" {'PASS' if report.verdict else 'FAIL'}",
            f"  gamma = {_join(report.gamma)}",
            f"  witness: {report.witness}"]
    return code, payload, None, text


# ---------------------------------------------------------------------------
# schemas (static descriptions of the JSON payloads)

SCHEMAS: Dict[str, dict] = {
    "roots": {
        "command": "roots",
        "schema_version": SCHEMA_VERSION,
        "payload": {
            "type": "type label, or null for a custom Cartan matrix",
            "cartan": "Cartan matrix rows",
            "count": "number of positive roots",
            "roots": "list of {index (1-based), name, coords (simple-root"
                     " coordinates), height, pairings (with each simple coroot)}",
        },
    },
    "essential": {
        "command": "essential",
        "schema_version": SCHEMA_VERSION,
        "payload": {
            "type": "type label or null",
            "cartan": "Cartan matrix rows",
            "weight": "fundamental-weight coordinates",
            "p": "prime, or null for characteristic zero",
            "count": "number of essential multiindices (= module dimension)",
            "degree_histogram": "count of essentials per total degree",
            "indices": "essential multiindices, ascending in the degree-then-"
                       "reverse-lex total order, coordinates in root order",
            "oracle": "(with --oracle, type G2 only) {source, agrees,"
                      " table_size[, missing, extra]}",
        },
    },
    "filtration": {
        "command": "filtration",
        "schema_version": SCHEMA_VERSION,
        "payload": {
            "type": "type label or null",
            "cartan": "Cartan matrix rows",
            "weight / highest_weights": "single weight, or the pair [lam, mu]"
                                        " for tensor runs",
            "p": "prime or null",
            "levels": "[{n, dim}] cumulative filtration level dimensions",
            "graded": "successive differences of the level dimensions",
            "top_dim / tensor_dim": "stabilized dimension",
            "weight_group": "(tensor runs) weight-space restriction, or null",
            "input_hash": "(tensor runs) content hash of the inputs",
            "note": "present when the filtration concentrates in degree 0",
        },
    },
    "verify": {
        "command": "verify",
        "schema_version": SCHEMA_VERSION,
        "payload": {
            "--g2": {
                "type": "G2",
                "p": "prime",
                "steps": "[{name, ok, details}] in the fixed pipeline order:"
                         " annihilation, j_images, highest_section,"
                         " coefficient, final_lemma",
                "overall": "conjunction of the step verdicts",
                "exploration_only": "true when p < 11",
                "certified": "overall and not exploration_only",
                "status": "pass-certified | exploration-only | fail",
                "input_hash": "content hash of the inputs",
            },
            "--condition2 / --v0": {
                "label": "type label or Cartan description",
                "p": "prime",
                "gamma": "the tested highest weight 2(p-1)rho",
                "condition": "condition2 | v0",
                "verdict": "boolean",
                "witness": "level dimensions and membership facts",
                "status": "pass | fail",
                "input_hash": "content hash of the inputs",
            },
        },
    },
}


# ---------------------------------------------------------------------------
# rendering and entry point


def _render(fmt: str, cmd: str, payload: dict, flat, text_lines: List[str]) -> str:
    if fmt == "json":
        return stable_dumps(payload) + "\n"
    if fmt == "csv":
        if flat is None:
            raise UsageError(f"{cmd} output is not a flat table; use json or text")
        header, rows = flat
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
        return buf.getvalue()
    header = f"# weylpbw {cmd} (text rendering; lossy -- use --format json for the full report)"
    return "\n".join([header] + text_lines) + "\n"


def _emit(rendered: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)


def _add_common(sub, cache: bool = True, system: bool = True) -> None:
    if system:
        sub.add_argument("--type", help='Cartan type label, e.g. "G2", "A2", "B3"')
        sub.add_argument("--cartan", metavar="FILE",
                         help="JSON file holding Cartan matrix rows")
    sub.add_argument("--cap", type=int, default=DIM_CAP_DEFAULT,
                     help="dimension cap (resource guard, default %(default)s)")
    if cache:
        sub.add_argument("--cache-dir", metavar="DIR",
                         help=f"payload cache directory (default ${CACHE_DIR_ENV})")
        sub.add_argument("--no-cache", action="store_true",
                         help="ignore any configured cache")
    sub.add_argument("--format", choices=("json", "csv", "text"), default="json",
                     help="output format (default json; csv for flat tables only)")
    sub.add_argument("--out", metavar="FILE", help="write the report to FILE")
    sub.add_argument("--quiet", action="store_true",
                     help="suppress the stderr timing note")
    sub.add_argument("--schema", action="store_true",
                     help="print the JSON report schema and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weylpbw",
        description="Exact-arithmetic filtrations on Weyl modules and"
                    " Frobenius-splitting checks.")
    parser.add_argument("--version", action="version", version=f"weylpbw {__version__}")
    subs = parser.add_subparsers(dest="cmd", required=True)

    sp = subs.add_parser("roots", help="positive roots in the fixed sweep order")
    _add_common(sp, cache=False)

    sp = subs.add_parser("essential", help="essential multiindices of a Weyl module")
    sp.add_argument("--weight", help="fundamental coordinates, comma-joined")
    sp.add_argument("--p", type=int, help="prime (omit for characteristic zero)")
    sp.add_argument("--oracle", action="store_true",
                    help="cross-check against the type-G2 inequality table")
    _add_common(sp)

    sp = subs.add_parser("filtration", help="filtration level dimensions")
    sp.add_argument("--weight", help="fundamental coordinates, comma-joined")
    sp.add_argument("--tensor", metavar="MU",
                    help="second weight; switch to the induced filtration on"
                         " V(weight) (x) V(MU)")
    sp.add_argument("--p", type=int, help="prime (omit for characteristic zero)")
    sp.add_argument("--levels", type=int, help="sweep only levels 0..N")
    _add_common(sp)

    sp = subs.add_parser("verify", help="splitting-criterion checks")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--g2", action="store_true",
                      help="run the full type-G2 verification pipeline")
    mode.add_argument("--condition2", action="store_true",
                      help="tensor-square escape check at gamma = 2(p-1)rho")
    mode.add_argument("--v0", action="store_true",
                      help="single-module escape check at gamma = 2(p-1)rho")
    sp.add_argument("--p", type=int, help="prime")
    _add_common(sp)

    return parser


_COMMANDS = {
    "roots": cmd_roots,
    "essential": cmd_essential,
    "filtration": cmd_filtration,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if getattr(args, "schema", False):
        sys.stdout.write(json.dumps(SCHEMAS[args.cmd], indent=2, sort_keys=True) + "\n")
        return EXIT_OK

    started = time.perf_counter()
    try:
        cfg = _config_from(args)
        code, payload, flat, text_lines = _COMMANDS[args.cmd](cfg, args)
        rendered = _render(cfg.fmt, args.cmd, payload, flat, text_lines)
        _emit(rendered, cfg.out)
    except UsageError as exc:
        print(f"weylpbw: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"weylpbw: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE

    if not getattr(args, "quiet", False):
        elapsed = (time.perf_counter() - started) * 1000.0
        print(f"weylpbw: {args.cmd} finished in {elapsed:.0f} ms", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
