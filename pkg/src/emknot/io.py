"""
Plain-text file formats: legacy-VTK and CSV for grids and curves, JSON for reports.

Grid files carry a compact JSON header (units, knot constants, time) so that the
numbers on disk are unambiguous. Floats are written with 17 significant digits,
which makes a write/read round trip exact.
"""

import json
from pathlib import Path

import numpy as np

from .spectral import GridSpec, RealVectorFieldGrid

FLOAT_FMT = "%.17g"


def _flat(samples):
    # VTK point order: x fastest, then y, then z
    return samples.transpose(2, 1, 0, 3).reshape(-1, 3)


def _unflat(rows, n):
    return np.ascontiguousarray(rows.reshape(n, n, n, 3).transpose(2, 1, 0, 3))


def write_vtk_grid(path, E, B, header=None):
    """Legacy-VTK ASCII STRUCTURED_POINTS with VECTORS arrays ``E`` and ``B``."""
    g = E.grid
    if B.grid != g:
        raise ValueError("E and B must share one grid")
    title = json.dumps(header or {}, separators=(",", ":"))
    if len(title) > 255 or "\n" in title:
        raise ValueError("header too long for a VTK title line")
    lines = [
        "# vtk DataFile Version 3.0",
        title,
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {g.n} {g.n} {g.n}",
        "ORIGIN " + " ".join([FLOAT_FMT % -g.extent] * 3),
        "SPACING " + " ".join([FLOAT_FMT % g.spacing] * 3),
        f"POINT_DATA {g.n**3}",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
        for name, f in (("E", E), ("B", B)):
            fh.write(f"VECTORS {name} double\n")
            np.savetxt(fh, _flat(f.samples), fmt=FLOAT_FMT)


def read_vtk_grid(path):
    """Inverse of :func:`write_vtk_grid`; returns (E, B, header)."""
    with open(path) as fh:
        text = fh.read().split("\n")
    if not text[0].startswith("# vtk DataFile"):
        raise ValueError(f"{path}: not a legacy VTK file")
    try:
        header = json.loads(text[1]) if text[1].strip() else {}
    except json.JSONDecodeError:
        header = {"title": text[1]}
    meta, arrays, i = {}, {}, 3
    while i < len(text):
        line = text[i].strip()
        i += 1
        if not line:
            continue
        key, *rest = line.split()
        if key in ("DIMENSIONS", "ORIGIN", "SPACING", "POINT_DATA"):
            meta[key] = [float(v) for v in rest]
        elif key == "VECTORS":
            npts = int(meta["POINT_DATA"][0])
            block = np.array(" ".join(text[i : i + npts]).split(), dtype=float).reshape(npts, 3)
            arrays[rest[0]] = block
            i += npts
    dims = [int(d) for d in meta["DIMENSIONS"]]
    if len(set(dims)) != 1:
        raise ValueError(f"{path}: only cubic grids are supported")
    grid = GridSpec(dims[0], -meta["ORIGIN"][0])
    if not np.isclose(grid.spacing, meta["SPACING"][0], rtol=1e-14):
        raise ValueError(f"{path}: spacing does not match [-extent, extent) layout")
    E = RealVectorFieldGrid(grid, _unflat(arrays["E"], grid.n))
    B = RealVectorFieldGrid(grid, _unflat(arrays["B"], grid.n))
    return E, B, header


def write_csv_grid(path, E, B, header=None):
    """CSV with columns x,y,z,Ex,Ey,Ez,Bx,By,Bz after one ``# {json}`` line."""
    g = E.grid
    X, Y, Z = g.mesh()
    xyz = np.stack([X, Y, Z], axis=-1)
    rows = np.hstack([_flat(xyz), _flat(E.samples), _flat(B.samples)])
    meta = dict(header or {})
    meta["grid"] = g.to_dict()
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(meta, separators=(",", ":")) + "\n")
        fh.write("x,y,z,Ex,Ey,Ez,Bx,By,Bz\n")
        np.savetxt(fh, rows, fmt=FLOAT_FMT, delimiter=",")


def read_csv_grid(path):
    with open(path) as fh:
        first = fh.readline()
        header = json.loads(first[1:]) if first.startswith("#") else {}
        if not first.startswith("#"):
            fh.seek(0)
        cols = fh.readline().strip().split(",")
        rows = np.loadtxt(fh, delimiter=",", ndmin=2)
    if cols != ["x", "y", "z", "Ex", "Ey", "Ez", "Bx", "By", "Bz"]:
        raise ValueError(f"{path}: unexpected columns {cols}")
    n = round(len(rows) ** (1 / 3))
    if n**3 != len(rows):
        raise ValueError(f"{path}: {len(rows)} rows is not a cubic grid")
    if "grid" in header:
        grid = GridSpec(header["grid"]["n_per_axis"], header["grid"]["extent"])
    else:
        grid = GridSpec(n, -rows[:, 0].min())
    E = RealVectorFieldGrid(grid, _unflat(rows[:, 3:6], n))
    B = RealVectorFieldGrid(grid, _unflat(rows[:, 6:9], n))
    return E, B, header


def read_grid(path):
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_csv_grid(path)
    return read_vtk_grid(path)


def write_grid(path, E, B, header=None, fmt=None):
    fmt = fmt or ("csv" if str(path).lower().endswith(".csv") else "vtk")
    if fmt == "csv":
        write_csv_grid(path, E, B, header)
    elif fmt == "vtk":
        write_vtk_grid(path, E, B, header)
    else:
        raise ValueError(f"unknown grid format {fmt!r}")


def write_curve_csv(path, curve, header=None):
    meta = dict(header or {})
    meta.update(closed=bool(curve.closed), arc_length=float(curve.arc_length))
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(meta, separators=(",", ":")) + "\n")
        fh.write("x,y,z\n")
        np.savetxt(fh, curve.points, fmt=FLOAT_FMT, delimiter=",")


def read_curve_csv(path):
    from .fieldlines import Curve

    with open(path) as fh:
        header = json.loads(fh.readline()[1:])
        fh.readline()
        pts = np.loadtxt(fh, delimiter=",", ndmin=2)
    return Curve(pts, bool(header["closed"]), float(header["arc_length"])), header


def write_curves_vtk(path, curves, title="emknot field lines"):
    """All curves as POLYDATA polylines in one legacy-VTK file."""
    curves = [c for c in curves if c is not None]
    total = sum(len(c.points) for c in curves)
    with open(path, "w") as fh:
        fh.write(f"# vtk DataFile Version 3.0\n{title}\nASCII\nDATASET POLYDATA\n")
        fh.write(f"POINTS {total} double\n")
        for c in curves:
            np.savetxt(fh, c.points, fmt=FLOAT_FMT)
        fh.write(f"LINES {len(curves)} {total + len(curves)}\n")
        start = 0
        for c in curves:
            idx = range(start, start + len(c.points))
            fh.write(f"{len(c.points)} " + " ".join(map(str, idx)) + "\n")
            start += len(c.points)


def write_json(path, obj):
    text = json.dumps(obj, indent=2, sort_keys=True, default=_jsonable)
    if path in (None, "-"):
        print(text)
    else:
        Path(path).write_text(text + "\n")


def _jsonable(x):
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    raise TypeError(f"not JSON serialisable: {type(x).__name__}")
