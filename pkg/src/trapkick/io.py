"""Curve emission (CSV/JSON) and run manifests.

Output contract: CSV files start with '#'-prefixed metadata lines (sorted by
key), then a header row, then '%.12g'-formatted values, so identical configs
and seeds produce byte-identical files.  Every output gets a sibling
<name>.manifest.json recording the tool version, constant set, seed, and the
fully resolved configuration, from which the run can be reproduced.
"""

from __future__ import annotations

import json
import os
import time
from pathlib import Path

from .errors import ConfigError
from .units import CONSTANTS_ID

TOOL_NAME = "trapkick"
OUTDIR_ENV = "TRAPKICK_OUTDIR"


def _tool_version() -> str:
    from . import __version__

    return __version__


def resolve_output_path(path: str | os.PathLike) -> Path:
    """Apply the default output directory env var to relative paths."""
    p = Path(path)
    base = os.environ.get(OUTDIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def format_value(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def write_curve(path, columns: dict, metadata: dict, fmt: str = "csv") -> Path:
    """Write named columns plus metadata as CSV or JSON.

    columns: mapping column name -> sequence (all equal length).
    """
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    lengths = {len(v) for v in columns.values()}
    if len(lengths) != 1:
        raise ConfigError("all columns must have the same length")
    out = resolve_output_path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        lines = [f"# {k} = {metadata[k]}" for k in sorted(metadata)]
        lines.append(",".join(columns))
        n = lengths.pop()
        cols = list(columns.values())
        for i in range(n):
            lines.append(",".join(format_value(c[i]) for c in cols))
        out.write_text("\n".join(lines) + "\n")
    else:
        payload = {
            "metadata": metadata,
            "columns": {k: [float(x) for x in v] for k, v in columns.items()},
        }
        out.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return out


def write_manifest(output_path, resolved_config: dict, seed=None) -> Path:
    """Write the sibling manifest for an output file."""
    out = resolve_output_path(output_path)
    manifest = {
        "tool": TOOL_NAME,
        "version": _tool_version(),
        "constants": CONSTANTS_ID,
        "wall_clock_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "seed": seed,
        "output": out.name,
        "config": resolved_config,
    }
    mpath = out.with_name(out.name + ".manifest.json")
    mpath.parent.mkdir(parents=True, exist_ok=True)
    mpath.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return mpath
