"""Deterministic CSV / JSON / JSONL writers.

Every file carries the tool version and a hash of the run configuration;
nothing time- or host-dependent is written.
"""
import csv
import hashlib
import json
import os
from fractions import Fraction

from . import __version__
from .core.numberfield import FieldElement
from .core.scalars import is_hp, scalar_str


def config_hash(config):
    blob = json.dumps(config, sort_keys=True, default=str, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def meta(config):
    return {"tool": "ietlab", "version": __version__, "config_hash": config_hash(config)}


def plain(obj):
    """JSON-ready copy: exact scalars as strings, mpf as decimal strings."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, (Fraction, FieldElement)) or is_hp(obj):
        return scalar_str(obj)
    if hasattr(obj, "to_dict"):
        return plain(obj.to_dict())
    if isinstance(obj, float):
        return float(repr(obj)) if obj == obj else "nan"
    return obj


def _ensure_dir(path):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)


def write_json(path, data, config):
    _ensure_dir(path)
    with open(path, "w") as fh:
        json.dump({"meta": meta(config), "data": plain(data)}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_jsonl(path, records, config):
    _ensure_dir(path)
    with open(path, "w") as fh:
        fh.write(json.dumps({"meta": meta(config)}, sort_keys=True) + "\n")
        for r in records:
            fh.write(json.dumps(plain(r), sort_keys=True) + "\n")


def write_csv(path, header, rows, config):
    _ensure_dir(path)
    m = meta(config)
    with open(path, "w", newline="") as fh:
        fh.write(f"# {m['tool']} {m['version']} config={m['config_hash']}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(v) for v in r])


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (Fraction, FieldElement)) or is_hp(v):
        return scalar_str(v)
    return v


def read_csv(path):
    with open(path) as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]
