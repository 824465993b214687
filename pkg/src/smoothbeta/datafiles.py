"""Reading and writing datasets and result files.

Dataset text formats (auto-detected):

* delimited, one experiment per line: ``x1,...,xd,s`` for plain data and
  ``x1,...,xd,s,A,B`` for contextual data; comma or whitespace separated; an
  optional header line is recognized by its non-numeric first token.
* JSON lines (``.jsonl``/``.ndjson`` or a leading ``{``): objects with keys
  ``x`` (scalar or list), ``s``, and for contextual data ``A`` and ``B``.

All floats are written with ``repr`` so identical inputs produce identical
bytes. Every CLI output CSV gets a ``<name>.meta.json`` sidecar carrying the
full run configuration.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .dynamic import DynamicDataset
from .harness import ErrorCurve
from .static import StaticDataset


class DataFormatError(ValueError):
    """Malformed dataset file; the message names the offending line."""


def _fmt(v) -> str:
    return repr(float(v))


def _is_number(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False


def _looks_like_jsonl(path: str) -> bool:
    if os.path.splitext(path)[1].lower() in (".jsonl", ".ndjson"):
        return True
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                return line.lstrip().startswith("{")
    return False


def _parse_delimited(path: str, n_extra: int):
    rows = []
    dim = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            toks = [tok for tok in line.replace(",", " ").split() if tok]
            if lineno == 1 and not _is_number(toks[0]):
                continue  # header
            if not all(_is_number(tok) for tok in toks):
                raise DataFormatError(f"{path} line {lineno}: non-numeric field")
            vals = [float(tok) for tok in toks]
            if len(vals) < 1 + n_extra:
                raise DataFormatError(f"{path} line {lineno}: expected at least {1 + n_extra} columns")
            d = len(vals) - n_extra
            if dim is None:
                dim = d
            elif d != dim:
                raise DataFormatError(f"{path} line {lineno}: inconsistent column count")
            rows.append(vals)
    return rows, dim


def _parse_jsonl(path: str, want_ab: bool):
    rows = []
    dim = None
    keys = ("x", "s", "A", "B") if want_ab else ("x", "s")
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"{path} line {lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(rec, dict) or any(k not in rec for k in keys):
                raise DataFormatError(f"{path} line {lineno}: record must carry keys {keys}")
            x = rec["x"]
            coords = [float(v) for v in (x if isinstance(x, (list, tuple)) else [x])]
            d = len(coords)
            if dim is None:
                dim = d
            elif d != dim:
                raise DataFormatError(f"{path} line {lineno}: inconsistent dimension")
            extra = [float(rec["s"])] + ([float(rec["A"]), float(rec["B"])] if want_ab else [])
            rows.append(coords + extra)
    return rows, dim


def _load_rows(path: str, n_extra: int):
    if _looks_like_jsonl(path):
        rows, dim = _parse_jsonl(path, want_ab=(n_extra == 3))
    else:
        rows, dim = _parse_delimited(path, n_extra)
    if not rows:
        raise DataFormatError(f"{path}: no data records")
    return np.asarray(rows, dtype=np.float64), dim


def load_static_dataset(path: str) -> StaticDataset:
    arr, dim = _load_rows(path, 1)
    try:
        return StaticDataset.build(arr[:, :dim], arr[:, dim])
    except ValueError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


def load_dynamic_dataset(path: str) -> DynamicDataset:
    arr, dim = _load_rows(path, 3)
    try:
        return DynamicDataset.build(arr[:, :dim], arr[:, dim], arr[:, dim + 1], arr[:, dim + 2])
    except ValueError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc


def save_static_dataset(path: str, data: StaticDataset) -> None:
    jsonl = os.path.splitext(path)[1].lower() in (".jsonl", ".ndjson")
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(len(data)):
            coords = [float(v) for v in data.x[i]]
            if jsonl:
                fh.write(json.dumps({"x": coords, "s": int(data.s[i])}) + "\n")
            else:
                fh.write(",".join(_fmt(v) for v in coords) + f",{int(data.s[i])}\n")


def save_dynamic_dataset(path: str, data: DynamicDataset) -> None:
    jsonl = os.path.splitext(path)[1].lower() in (".jsonl", ".ndjson")
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(len(data)):
            coords = [float(v) for v in data.x[i]]
            if jsonl:
                rec = {"x": coords, "s": int(data.s[i]), "A": float(data.A[i]), "B": float(data.B[i])}
                fh.write(json.dumps(rec) + "\n")
            else:
                fh.write(
                    ",".join(_fmt(v) for v in coords)
                    + f",{int(data.s[i])},{_fmt(data.A[i])},{_fmt(data.B[i])}\n"
                )


def write_curve_csv(path: str, curve: ErrorCurve) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,mean_l2,std_l2,runtime_ms\n")
        for t, mean, std, rt in curve.rows():
            fh.write(f"{t},{_fmt(mean)},{_fmt(std)},{_fmt(rt)}\n")


def write_bench_csv(path: str, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,per_query_ms\n")
        for t, ms in rows:
            fh.write(f"{int(t)},{_fmt(ms)}\n")


def write_reconstruction_csv(path: str, qs, post_mean, post_var, true_pi) -> None:
    qs = np.atleast_2d(np.asarray(qs, dtype=np.float64))
    if qs.shape[0] == 1 and len(post_mean) > 1:
        qs = qs.T
    dim = qs.shape[1]
    cols = [f"x{k + 1}" for k in range(dim)] if dim > 1 else ["x"]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + ",post_mean,post_var,true_pi\n")
        for i in range(qs.shape[0]):
            coords = ",".join(_fmt(v) for v in qs[i])
            fh.write(f"{coords},{_fmt(post_mean[i])},{_fmt(post_var[i])},{_fmt(true_pi[i])}\n")


def write_excess_csv(path: str, t_grid, excess) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,excess_risk\n")
        for t, e in zip(t_grid, excess):
            fh.write(f"{int(t)},{_fmt(e)}\n")


def write_sidecar(out_path: str, payload: dict) -> str:
    side = out_path + ".meta.json"
    with open(side, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")
    return side
