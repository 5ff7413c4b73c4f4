"""Snapshot persistence and figure-grade exports.

On-disk snapshot format (magic "KHSNAP01"), all little-endian:

    offset  0   8 bytes   magic b"KHSNAP01"
    offset  8   uint32    nx  (streamwise pixel count)
    offset 12   uint32    ny  (cross-stream pixel count)
    offset 16   uint32    n_snapshots
    offset 20   float64   dt_snap
    offset 28   payload   n_snapshots fields, each nx*ny float64,
                          row-major (k = i*nx + j)

Round trips are bit-exact. All writers go through a temp-file-then-
rename path so a crash never leaves a half-written file behind.
Images are 8-bit binary PGM (P5) with per-image min-max scaling; CSVs
are plain RFC-4180 text with period decimal separators regardless of
locale.
"""

import csv
import os
import struct
import tempfile
import warnings
from contextlib import contextmanager
from typing import NamedTuple

import numpy as np

from .diagnostics import lag_correlation
from .dmd import DmdResult
from .errors import ContractError, DimensionError, FormatError
from .fields import Grid2D, SnapshotMatrix
from .pod import PodResult

__all__ = [
    "MAGIC",
    "HEADER_SIZE",
    "SnapshotFileHeader",
    "read_header",
    "read_snapshots",
    "write_snapshots",
    "export_mode_image",
    "export_spectrum_csv",
    "export_time_coefficients_csv",
]

MAGIC = b"KHSNAP01"
_HEADER = struct.Struct("<8sIIId")
HEADER_SIZE = _HEADER.size  # 28 bytes

_OFF_MAGIC = 0
_OFF_NX = 8
_OFF_NY = 12
_OFF_COUNT = 16
_OFF_DT = 20


class SnapshotFileHeader(NamedTuple):
    nx: int
    ny: int
    n_snapshots: int
    dt_snap: float


@contextmanager
def _atomic_writer(path, mode="wb"):
    """Open a temp file next to path; rename over path only on success."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-khjet-")
    try:
        with os.fdopen(fd, mode, newline="" if "b" not in mode else None) as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _parse_header(blob, path):
    if len(blob) < HEADER_SIZE:
        raise FormatError(
            f"{path}: truncated header, {len(blob)} bytes where "
            f"{HEADER_SIZE} are required (offset {len(blob)})",
            offset=len(blob),
        )
    magic, nx, ny, count, dt_snap = _HEADER.unpack_from(blob, 0)
    if magic != MAGIC:
        raise FormatError(
            f"{path}: bad magic {magic!r} at offset {_OFF_MAGIC}, "
            f"expected {MAGIC!r}",
            offset=_OFF_MAGIC,
        )
    if nx == 0 or ny == 0:
        off = _OFF_NX if nx == 0 else _OFF_NY
        raise FormatError(
            f"{path}: zero grid dimension at offset {off}", offset=off
        )
    if count == 0:
        raise FormatError(
            f"{path}: zero snapshot count at offset {_OFF_COUNT}",
            offset=_OFF_COUNT,
        )
    if not (np.isfinite(dt_snap) and dt_snap > 0.0):
        raise FormatError(
            f"{path}: dt_snap must be a positive finite float, got "
            f"{dt_snap} at offset {_OFF_DT}",
            offset=_OFF_DT,
        )
    return SnapshotFileHeader(nx, ny, count, dt_snap)


def read_header(path) -> SnapshotFileHeader:
    """Parse and validate the 28-byte header without loading the payload."""
    with open(path, "rb") as fh:
        blob = fh.read(HEADER_SIZE)
    return _parse_header(blob, path)


def read_snapshots(path) -> SnapshotMatrix:
    """Load a snapshot matrix; malformed files raise FormatError.

    The error message names the byte offset at which the problem was
    detected (also available as the exception's ``offset`` attribute).
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    header = _parse_header(blob, path)
    expected = header.nx * header.ny * header.n_snapshots * 8
    actual = len(blob) - HEADER_SIZE
    if actual != expected:
        word = "truncated" if actual < expected else "oversized"
        raise FormatError(
            f"{path}: {word} payload, {actual} bytes where {expected} are "
            f"required for {header.n_snapshots} snapshots of "
            f"{header.nx}x{header.ny} (detected at offset "
            f"{HEADER_SIZE + min(actual, expected)})",
            offset=HEADER_SIZE + min(actual, expected),
        )
    data = np.frombuffer(blob, dtype="<f8", offset=HEADER_SIZE).reshape(
        header.n_snapshots, header.nx * header.ny
    )
    return SnapshotMatrix(data=data.T, dt_snap=header.dt_snap)


def write_snapshots(path, s: SnapshotMatrix, nx=None, ny=None):
    """Persist a snapshot matrix; read_snapshots(write(S)) is bit-exact.

    nx and ny default to the square grid side inferred from the pixel
    count; pass them explicitly for non-square data.
    """
    if nx is None and ny is None:
        nx = ny = s.grid_side()
    elif nx is None or ny is None:
        raise DimensionError("pass both nx and ny or neither")
    nx, ny = int(nx), int(ny)
    if nx * ny != s.n_pixels:
        raise DimensionError(
            f"nx*ny = {nx * ny} does not match pixel count {s.n_pixels}"
        )
    with _atomic_writer(path) as fh:
        fh.write(_HEADER.pack(MAGIC, nx, ny, s.n_snapshots, s.dt_snap))
        # columns are snapshots; store them contiguously, oldest first
        fh.write(np.ascontiguousarray(s.data.T, dtype="<f8").tobytes())
    return path


def _to_gray(values):
    lo = values.min()
    hi = values.max()
    if hi == lo:
        return np.full(values.shape, 128, dtype=np.uint8)
    scaled = np.rint((values - lo) / (hi - lo) * 255.0)
    return np.clip(scaled, 0, 255).astype(np.uint8)


def _write_pgm(path, gray):
    ny, nx = gray.shape
    with _atomic_writer(path) as fh:
        fh.write(f"P5\n{nx} {ny}\n255\n".encode("ascii"))
        fh.write(gray.tobytes())


def _suffixed(path, tag):
    root, ext = os.path.splitext(os.fspath(path))
    return f"{root}_{tag}{ext or '.pgm'}"


def export_mode_image(field, grid: Grid2D, path):
    """Write a flattened mode as a grayscale PGM; returns written paths.

    Values are scaled linearly so the minimum maps to 0 and the maximum
    to 255; a constant field maps to uniform 128. Complex input yields
    two files with ``_re`` and ``_im`` inserted before the extension.
    """
    arr = np.asarray(field)
    if arr.shape != (grid.n * grid.n,):
        raise DimensionError(
            f"mode has {arr.size} entries, grid needs {grid.n * grid.n}"
        )
    if np.iscomplexobj(arr):
        parts = [(arr.real, _suffixed(path, "re")), (arr.imag, _suffixed(path, "im"))]
    else:
        parts = [(arr.astype(np.float64), os.fspath(path))]
    written = []
    for values, target in parts:
        if not np.all(np.isfinite(values)):
            raise ContractError("mode contains non-finite entries")
        _write_pgm(target, _to_gray(values.reshape(grid.n, grid.n)))
        written.append(target)
    return written


def _fmt(x):
    """Shortest round-trip decimal text, locale-independent."""
    return repr(float(x))


def export_spectrum_csv(result: DmdResult, path, circle_points: int = 361):
    """Eigenvalue table plus a unit-circle reference polyline.

    Columns: index, re_mu, im_mu, abs_mu, re_lambda, im_lambda,
    stability. The circle file (``_unit_circle`` suffix) holds re, im
    pairs for overlaying the stability boundary on a spectrum plot.
    """
    with _atomic_writer(path, "w") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["index", "re_mu", "im_mu", "abs_mu", "re_lambda", "im_lambda", "stability"]
        )
        for j, (mu, lam, label) in enumerate(
            zip(result.multipliers, result.spectrum, result.stability)
        ):
            w.writerow(
                [
                    j,
                    _fmt(mu.real),
                    _fmt(mu.imag),
                    _fmt(abs(mu)),
                    _fmt(lam.real),
                    _fmt(lam.imag),
                    label,
                ]
            )
    circle_path = _suffixed(path, "unit_circle")
    theta = np.linspace(0.0, 2.0 * np.pi, circle_points)
    with _atomic_writer(circle_path, "w") as fh:
        w = csv.writer(fh)
        w.writerow(["re", "im"])
        for t in theta:
            w.writerow([_fmt(np.cos(t)), _fmt(np.sin(t))])
    return [os.fspath(path), circle_path]


def export_time_coefficients_csv(result: PodResult, path, count=None, pairs=()):
    """Per-snapshot time-coefficient table, optionally with lag diagnostics.

    Columns: snapshot index, t_n (time of column n relative to the first
    snapshot, n * dt_snap), then a_1 .. a_count. count beyond the mode
    count is clipped with a warning. Each (i, j) entry of pairs (1-based
    mode numbers) adds a lag-correlation table in a ``_lags`` companion
    file for eyeballing traveling-structure phase offsets.
    """
    n_modes, n_snaps = result.time_coefficients.shape
    if count is None:
        count = n_modes
    count = int(count)
    if count < 1:
        raise ContractError(f"count must be at least 1, got {count}")
    if count > n_modes:
        warnings.warn(
            f"requested {count} coefficient columns, clipping to {n_modes}",
            stacklevel=2,
        )
        count = n_modes
    times = np.arange(n_snaps) * result.dt_snap
    with _atomic_writer(path, "w") as fh:
        w = csv.writer(fh)
        w.writerow(["snapshot", "t"] + [f"a{i + 1}" for i in range(count)])
        for n in range(n_snaps):
            row = [n, _fmt(times[n])]
            row += [_fmt(result.time_coefficients[i, n]) for i in range(count)]
            w.writerow(row)
    written = [os.fspath(path)]
    pairs = list(pairs)
    if pairs:
        lag_path = _suffixed(path, "lags")
        with _atomic_writer(lag_path, "w") as fh:
            w = csv.writer(fh)
            w.writerow(["mode_i", "mode_j", "lag", "correlation"])
            for i, j in pairs:
                if not (1 <= i <= n_modes and 1 <= j <= n_modes):
                    raise ContractError(
                        f"mode pair ({i}, {j}) outside 1..{n_modes}"
                    )
                lags, corr = lag_correlation(
                    result.time_coefficients[i - 1],
                    result.time_coefficients[j - 1],
                )
                for lag, c in zip(lags, corr):
                    w.writerow([i, j, int(lag), _fmt(c)])
        written.append(lag_path)
    return written
