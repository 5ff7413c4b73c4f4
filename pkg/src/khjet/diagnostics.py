"""Diagnostics on snapshot data: jet interaction and mode pairing.

The interaction metric quantifies when the two shear layers begin to
influence each other. Each jet owns a horizontal band of rows centered
on its axis; within each band the scalar fluctuation about the
streamwise mean is taken, the upper band is mirrored in the
cross-stream direction (the layers roll up with opposite sense), and
the magnitude of the Pearson correlation between the two fluctuation
fields is reported. Independent noise gives values near zero; once the
braids of one layer reach into the other the correlation rises sharply.
"""

import numpy as np

from .errors import DimensionError
from .fields import SnapshotMatrix, unflatten
from .jet import JetConfig

__all__ = [
    "band_rows",
    "interaction_metric",
    "interaction_series",
    "crossing_time",
    "lag_correlation",
]


def band_rows(cfg: JetConfig, center: float):
    """Row indices within one core radius of a jet axis."""
    y = cfg.grid.coords
    return np.nonzero(np.abs(y - center) <= cfg.r_o)[0]


def _band_fluctuation(band):
    return band - band.mean(axis=1, keepdims=True)


def interaction_metric(values, cfg: JetConfig) -> float:
    """|Pearson correlation| between the two jets' scalar fluctuations.

    The second band is flipped in the cross-stream direction before
    correlating. Returns 0.0 when either band has no variance (as in
    the unperturbed initial condition, whose bands are streamwise
    constant).
    """
    values = np.asarray(values, dtype=np.float64)
    n = cfg.n
    if values.shape != (n, n):
        raise DimensionError(f"expected a {(n, n)} field, got {values.shape}")
    lo, hi = cfg.jet_centers
    band_a = values[band_rows(cfg, lo), :]
    band_b = values[band_rows(cfg, hi), :]
    if band_a.shape != band_b.shape:
        raise DimensionError(
            f"jet bands differ in size ({band_a.shape} vs {band_b.shape}); "
            "centers too close to the boundary"
        )
    a = _band_fluctuation(band_a)
    b = _band_fluctuation(band_b)[::-1, :]
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    # Demeaning a streamwise-constant row leaves ~1-ulp ghosts that are
    # mirror-symmetric between the bands and would correlate perfectly;
    # anything at the round-off floor of the band counts as no variance.
    floor_a = 1e-12 * np.linalg.norm(band_a)
    floor_b = 1e-12 * np.linalg.norm(band_b)
    if na <= floor_a or nb <= floor_b:
        return 0.0
    return float(abs(np.vdot(a, b)) / (na * nb))


def interaction_series(s: SnapshotMatrix, cfg: JetConfig):
    """(times, metric values) for every snapshot column.

    Times are relative to the first snapshot (t_n = n * dt_snap), the
    same convention the CSV exports use.
    """
    times = np.arange(s.n_snapshots) * s.dt_snap
    vals = np.array(
        [
            interaction_metric(unflatten(s.data[:, j], cfg.grid).values, cfg)
            for j in range(s.n_snapshots)
        ]
    )
    return times, vals


def crossing_time(times, values, threshold: float = 0.2) -> float:
    """First sampled time the metric exceeds threshold; inf if never."""
    times = np.asarray(times, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if times.shape != values.shape:
        raise DimensionError(
            f"times {times.shape} and values {values.shape} must match"
        )
    above = np.nonzero(values > threshold)[0]
    if above.size == 0:
        return float("inf")
    return float(times[above[0]])


def lag_correlation(a, b, max_lag: int | None = None):
    """Normalized cross-correlation of two time series over integer lags.

    Returns (lags, correlations) where correlations[k] pairs a[t] with
    b[t + lags[k]]; both series are demeaned and the result is scaled
    by the product of their standard deviations, so identical signals
    peak at 1 at lag 0 and a quarter-period phase shift of a sinusoid
    peaks near the corresponding lag. Useful for spotting the paired
    time coefficients of traveling structures.
    """
    a = np.asarray(a, dtype=np.float64).ravel()
    b = np.asarray(b, dtype=np.float64).ravel()
    if a.size != b.size:
        raise DimensionError(f"series lengths differ ({a.size} vs {b.size})")
    if a.size < 2:
        raise DimensionError("need at least 2 samples")
    n = a.size
    if max_lag is None:
        max_lag = n - 1
    max_lag = int(max_lag)
    if not 0 <= max_lag < n:
        raise DimensionError(f"max_lag must be in [0, {n - 1}], got {max_lag}")
    da = a - a.mean()
    db = b - b.mean()
    denom = np.linalg.norm(da) * np.linalg.norm(db)
    lags = np.arange(-max_lag, max_lag + 1)
    if denom == 0.0:
        return lags, np.zeros(lags.size)
    full = np.correlate(db, da, mode="full")  # index n-1+k holds lag k
    corr = full[n - 1 - max_lag : n + max_lag] / denom
    return lags, corr
