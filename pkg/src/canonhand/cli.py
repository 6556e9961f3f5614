"""canonhand command line interface.

Exit codes: 0 success, 1 validation failure, 2 I/O or parse error. Every
subcommand takes --json for machine-readable stdout; diagnostics go to stderr.
A TOML config file (--config-file, or ./canonhand.toml) may supply defaults for
asset_root, seed and ranges.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib  # py311+
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from . import morpho, slots
from .actionmap import to_canonical, to_original
from .errors import InputError, IoError, ValidationError
from .extract import HandAnnotation, extract_all
from .generate import (
    LeapVariantId,
    enumerate_variants,
    generate_extended_urdf,
    generate_urdf,
    make_leap_variant,
)
from .kinematics import fidelity_report, fk_canonical
from .mesh import link_aabb
from .params import (
    CanonicalHandParams,
    ExtendedHandParams,
    active_dof,
    validate_params,
)
from .roundtrip import compare_roundtrip, roundtrip_ok
from .urdf import load_urdf

ASSET_ROOT_ENV = "CANONHAND_ASSET_ROOT"
CONFIG_NAME = "canonhand.toml"

# config keys that backfill flags left unset on the command line
CONFIG_KEYS = ("asset_root", "seed", "ranges")
SEED_DEFAULTS = {"audit": 7, "sample": 0}


def _apply_config(args) -> None:
    """Fill unset flags from the TOML config's [defaults] table."""
    path = args.config_file or (CONFIG_NAME if Path(CONFIG_NAME).exists() else None)
    if path:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise IoError(f"{path}: {exc}") from exc
        for key, value in data.get("defaults", {}).items():
            if key in CONFIG_KEYS and getattr(args, key, None) is None:
                setattr(args, key, value)
    if getattr(args, "seed", None) is None:
        args.seed = SEED_DEFAULTS.get(args.command, 0)


def _default_asset_root(args, urdf_path) -> Path:
    if getattr(args, "asset_root", None):
        return Path(args.asset_root)
    if os.environ.get(ASSET_ROOT_ENV):
        return Path(os.environ[ASSET_ROOT_ENV])
    return Path(urdf_path).parent


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(human)


def _read_csv(path) -> list[np.ndarray]:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if line:
            rows.append(np.array([float(v) for v in line.split(",")]))
    return rows


def _write_csv(path, rows) -> None:
    text = "\n".join(",".join(repr(float(v)) for v in row) for row in rows)
    Path(path).write_text(text + "\n")


def _tree_lines(model) -> list[str]:
    lines = []

    def walk(link, depth):
        lines.append("  " * depth + link)
        for j in model.child_joints(link):
            mark = "*" if j.is_revolute() else "-"
            lines.append("  " * (depth + 1) + f"({mark} {j.name})")
            walk(j.child, depth + 1)

    walk(model.root_link, 0)
    return lines


def cmd_inspect(args) -> int:
    model = load_urdf(args.urdf, _default_asset_root(args, args.urdf))
    revolute = len(model.revolute_joints())
    aabbs = {}
    for link in model.links:
        if link.geoms:
            box = link_aabb(model, link.name)
            aabbs[link.name] = {"min": box.lo.tolist(), "max": box.hi.tolist()}
    payload = {
        "name": model.name,
        "root": model.root_link,
        "links": len(model.links),
        "joints": len(model.joints),
        "dof": revolute,
        "aabbs": aabbs,
    }
    human = "\n".join([
        f"robot: {model.name}",
        f"links: {len(model.links)}  joints: {len(model.joints)}  dof: {revolute}",
        *_tree_lines(model),
        *(f"{name}: min {v['min']} max {v['max']}" for name, v in aabbs.items()),
    ])
    _emit(args, payload, human)
    return 0


def cmd_extract(args) -> int:
    model = load_urdf(args.urdf, _default_asset_root(args, args.urdf))
    annotation = HandAnnotation.load(args.annotation)
    params = extract_all(model, annotation)
    params.save(args.out)
    payload = {"out": str(args.out), "active_dof": active_dof(params),
               "violations": validate_params(params)}
    _emit(args, payload, f"wrote {args.out} (active dof {payload['active_dof']})")
    return 0


def cmd_generate(args) -> int:
    if args.extended:
        params = ExtendedHandParams.load(args.params)
        text = generate_extended_urdf(params, capsule_tag=args.capsule_tag)
    else:
        params = CanonicalHandParams.load(args.params)
        text = generate_urdf(params, capsule_tag=args.capsule_tag)
    Path(args.out).write_text(text)
    n_joints = text.count("<joint ")
    n_links = text.count("<link ")
    payload = {"out": str(args.out), "links": n_links, "joints": n_joints,
               "active_dof": active_dof(params)}
    _emit(args, payload, f"wrote {args.out} ({n_links} links, {n_joints} joints)")
    return 0


def cmd_leap_variants(args) -> int:
    base = ExtendedHandParams.load(args.base)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for vid in enumerate_variants(args.min_total):
        variant = make_leap_variant(base, vid)
        (out_dir / f"{vid.name}.urdf").write_text(
            generate_extended_urdf(variant, name=vid.name))
        entries.append({"name": vid.name, "dof": active_dof(variant)})
    manifest = {"min_total": args.min_total, "count": len(entries),
                "variants": entries}
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    _emit(args, manifest, f"wrote {len(entries)} variants to {out_dir}")
    return 0


def cmd_map(args) -> int:
    annotation = HandAnnotation.load(args.annotation)
    rows = _read_csv(args.infile)
    fn = to_canonical if args.direction == "to-canonical" else to_original
    out_rows = [fn(row, annotation) for row in rows]
    _write_csv(args.out, out_rows)
    payload = {"rows": len(out_rows), "out": str(args.out),
               "direction": args.direction}
    _emit(args, payload, f"mapped {len(out_rows)} rows -> {args.out}")
    return 0


def cmd_fk(args) -> int:
    params = CanonicalHandParams.load(args.params)
    configs = (_read_csv(args.config) if args.config
               else [np.zeros(slots.N_SLOTS)])
    results = []
    for c in configs:
        fk = fk_canonical(params, c)
        results.append({
            "fingertips": {slots.FINGERS[f]: fk.fingertips[f].tolist()
                           for f in range(slots.N_FINGERS)},
            "present": {slots.FINGERS[f]: bool(fk.finger_present[f])
                        for f in range(slots.N_FINGERS)},
        })
    human = []
    for i, res in enumerate(results):
        human.append(f"config {i}:")
        for f in range(slots.N_FINGERS):
            name = slots.FINGERS[f]
            tip = res["fingertips"][name]
            star = "" if res["present"][name] else " (absent)"
            human.append(f"  {name}: {tip[0]:+.6f} {tip[1]:+.6f} {tip[2]:+.6f}{star}")
    _emit(args, {"configs": results}, "\n".join(human))
    return 0


def cmd_audit(args) -> int:
    model = load_urdf(args.urdf, _default_asset_root(args, args.urdf))
    annotation = HandAnnotation.load(args.annotation)
    params = CanonicalHandParams.load(args.params)
    rng = np.random.Generator(np.random.PCG64(args.seed))
    lowers = np.array([model.joint(n).lower for n, _s, _g in annotation.joint_map])
    uppers = np.array([model.joint(n).upper for n, _s, _g in annotation.joint_map])
    configs = [rng.uniform(lowers, uppers) for _ in range(args.n)]
    report = fidelity_report(model, annotation, params, configs)
    payload = report.to_json_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    _emit(args, payload,
          f"fingertip discrepancy over {args.n} configs: "
          f"mean {report.mean_distance:.6g} m, max {report.max_distance:.6g} m")
    return 0


def cmd_sample(args) -> int:
    ranges = (morpho.RangeConfig.load(args.ranges) if args.ranges
              else morpho.DEFAULT_RANGES)
    if args.out:
        manifest = morpho.write_dataset(args.n, args.seed, ranges, args.out)
        _emit(args, manifest,
              f"wrote {manifest['rows']} x {manifest['dim']} rows to {args.out}")
        return 0
    rows = [morpho.encode(morpho.sample_morphology(morpho.row_seed(args.seed, k),
                                                   ranges)).tolist()
            for k in range(args.n)]
    payload = {"rows": rows, "dim": morpho.VECTOR_DIM, "seed": args.seed}
    _emit(args, payload, "\n".join(",".join(f"{v!r}" for v in row) for row in rows))
    return 0


def cmd_roundtrip(args) -> int:
    params = CanonicalHandParams.load(args.params)
    report = compare_roundtrip(params)
    report.pop("recovered")
    ok = roundtrip_ok(report, args.tol)
    report["ok"] = ok
    _emit(args, report,
          f"max continuous deviation {report['max_continuous']:.3g}, "
          f"max rotation deviation {report['max_rotation_frobenius']:.3g}, "
          f"limits_exact={report['limits_exact']}, axes_exact={report['axes_exact']}"
          + ("" if ok else "  [FAILED]"))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="canonhand",
        description="Canonical dexterous-hand representation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        p.add_argument("--json", action="store_true", help="structured stdout")
        p.add_argument("--config-file", help=f"TOML defaults file (default ./{CONFIG_NAME})")
        return p

    p = add("inspect", cmd_inspect, help="print tree, DoF count and link AABBs")
    p.add_argument("urdf")
    p.add_argument("--asset-root", help="mesh resolution root")

    p = add("extract", cmd_extract, help="extract canonical parameters")
    p.add_argument("urdf")
    p.add_argument("--annotation", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--asset-root")

    p = add("generate", cmd_generate, help="emit a canonical URDF")
    p.add_argument("params")
    p.add_argument("--out", required=True)
    p.add_argument("--extended", action="store_true",
                   help="params file holds the 173-scalar extended set")
    p.add_argument("--capsule-tag", action="store_true",
                   help="emit nonstandard <capsule> elements")

    p = add("leap-variants", cmd_leap_variants, help="batch-generate leap_xyzw URDFs")
    p.add_argument("--base", required=True, help="extended params of the base hand")
    p.add_argument("--min-total", type=int, default=0)
    p.add_argument("--out-dir", required=True)

    p = add("map", cmd_map, help="convert joint vectors between spaces")
    p.add_argument("--annotation", required=True)
    p.add_argument("--direction", choices=["to-canonical", "to-original"],
                   required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = add("fk", cmd_fk, help="fingertip positions for canonical configs")
    p.add_argument("params")
    p.add_argument("--config", help="CSV of 22-value rows; default zero config")

    p = add("audit", cmd_audit, help="fingertip fidelity report")
    p.add_argument("urdf")
    p.add_argument("--annotation", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--asset-root")

    p = add("sample", cmd_sample, help="sample morphologies / write a dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--ranges")
    p.add_argument("--out")

    p = add("roundtrip", cmd_roundtrip, help="generate->parse->extract check")
    p.add_argument("params")
    p.add_argument("--tol", type=float, default=1e-6)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_config(args)
        return args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
