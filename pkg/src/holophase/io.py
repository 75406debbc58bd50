"""File formats: signal CSV with a JSON sidecar, Blaschke JSON, image matrices.

Floats are written with ``repr`` so every file round-trips bit for bit.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .blaschke import BlaschkeSpec
from .errors import DomainError, SizeError
from .numerics import CircleGrid, LineGrid, Signal
from .theta_lift import Image2D

__all__ = [
    "sidecar_path",
    "write_signal",
    "read_signal",
    "read_blaschke_spec",
    "write_blaschke_spec",
    "write_json",
    "write_matrix_csv",
    "read_matrix_csv",
    "read_image",
    "write_image",
    "make_rng",
]


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def _fmt(x: float) -> str:
    return repr(float(x))


def write_signal(sig: Signal, path) -> None:
    """``index,re,im`` rows plus ``{"domain", "n", "L"}`` in the sidecar."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "re", "im"])
        for k, v in enumerate(sig.samples):
            w.writerow([k, _fmt(v.real), _fmt(v.imag)])
    meta = {"domain": "circle", "n": sig.grid.n}
    if isinstance(sig.grid, LineGrid):
        meta = {"domain": "line", "n": sig.grid.n, "L": sig.grid.half_width}
    write_json(meta, sidecar_path(path))


def read_signal(path) -> Signal:
    """Inverse of :func:`write_signal`.  Without a sidecar a circle grid is assumed."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["index", "re", "im"]:
        raise DomainError(f"{path}: expected header index,re,im")
    body = rows[1:]
    idx = [int(r[0]) for r in body]
    if idx != list(range(len(body))):
        raise DomainError(f"{path}: indices must run 0..n-1 in order")
    samples = np.array([complex(float(r[1]), float(r[2])) for r in body])
    side = sidecar_path(path)
    meta = json.loads(side.read_text()) if side.exists() else {"domain": "circle", "n": len(body)}
    if int(meta["n"]) != len(body):
        raise SizeError(f"{path}: sidecar says n={meta['n']}, file has {len(body)} rows")
    if meta["domain"] == "circle":
        grid = CircleGrid(len(body))
    elif meta["domain"] == "line":
        grid = LineGrid(float(meta["L"]), len(body))
    else:
        raise DomainError(f"unknown domain {meta['domain']!r}")
    return Signal(grid, samples)


def _pair(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def read_blaschke_spec(path) -> BlaschkeSpec:
    """``{"domain", "nu", "prefactor": [re, im], "zeros": [{"re", "im", "mult"}]}``."""
    d = json.loads(Path(path).read_text())
    zeros = tuple((complex(z["re"], z["im"]), int(z.get("mult", 1))) for z in d.get("zeros", []))
    pre = d.get("prefactor", [1.0, 0.0])
    return BlaschkeSpec(d.get("domain", "disk"), zeros, int(d.get("nu", 0)),
                        complex(pre[0], pre[1]), bool(d.get("normalized", True)))


def write_blaschke_spec(spec: BlaschkeSpec, path) -> None:
    d = {
        "domain": spec.domain,
        "nu": spec.nu,
        "prefactor": _pair(complex(spec.prefactor)),
        "zeros": [{"re": a.real, "im": a.imag, "mult": m} for a, m in spec.zeros],
        "normalized": spec.normalized,
    }
    write_json(d, path)


def _default(o):
    if isinstance(o, complex | np.complexfloating):
        return _pair(complex(o))
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist() if not np.iscomplexobj(o) else [_pair(z) for z in o.ravel()]
    raise TypeError(f"cannot serialize {type(o).__name__}")


def write_json(obj, path=None) -> str:
    """Deterministic JSON (sorted keys); written to ``path`` when given."""
    text = json.dumps(obj, default=_default, sort_keys=True, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def write_matrix_csv(a, path) -> None:
    """Real matrices as plain CSV; complex ones as ``re+imj`` cells."""
    a = np.atleast_2d(np.asarray(a))
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in a:
            if np.iscomplexobj(a):
                w.writerow([f"{_fmt(z.real)}{'+' if z.imag >= 0 or np.isnan(z.imag) else '-'}{_fmt(abs(z.imag))}j"
                            for z in row])
            else:
                w.writerow([_fmt(x) for x in row])


def read_matrix_csv(path) -> np.ndarray:
    with Path(path).open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if any("j" in c for r in rows for c in r):
        return np.array([[complex(c) for c in r] for r in rows])
    return np.array([[float(c) for c in r] for r in rows])


def read_image(path) -> Image2D:
    """CSV matrix or raw little-endian float64, with sidecar ``{"n", "L"}``."""
    path = Path(path)
    side = sidecar_path(path)
    if not side.exists():
        raise DomainError(f"{path}: missing sidecar {side.name}")
    meta = json.loads(side.read_text())
    n, L = int(meta["n"]), float(meta["L"])
    if path.suffix.lower() == ".csv":
        a = read_matrix_csv(path)
    else:
        a = np.fromfile(path, dtype="<f8")
        if a.size != n * n:
            raise SizeError(f"{path}: expected {n * n} doubles, found {a.size}")
        a = a.reshape(n, n)
    if a.shape != (n, n):
        raise SizeError(f"{path}: expected a {n}x{n} matrix")
    return Image2D(a, L)


def write_image(img: Image2D, path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        write_matrix_csv(img.samples, path)
    else:
        if np.iscomplexobj(img.samples) and np.any(img.samples.imag != 0):
            raise DomainError("raw float64 images must be real; use CSV for complex output")
        np.ascontiguousarray(img.samples.real, dtype="<f8").tofile(path)
    write_json({"n": img.n, "L": img.half_width}, sidecar_path(path))


def make_rng(seed: int) -> np.random.Generator:
    """Seeded PCG64 generator; streams are identical across platforms."""
    return np.random.Generator(np.random.PCG64(seed))
