"""Mode counting, Weyl-law predictions, and accumulation-level detection.

``mode_count`` counts dispersion zeros above a slowness level by direct
scan.  The Weyl prediction approximates that count at large frequency by
``(omega/pi) * sum_p |nu_tilde_p(y)| * T_tilde_p`` over the ordered layers
oscillatory at ``y``.  Branches pile up just below each distinct layer
slowness ``1/c_j`` at rate ``sqrt(omega)``; the accumulation statistic
measures that pile-up and its limits identify the layer velocities and
thicknesses from dispersion data alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .branch import BranchSet, RootScanOptions, _roots_on_interval, _scan_domain
from .errors import InsufficientData, OutOfRange
from .medium import Medium, ordered_profile

__all__ = [
    "WeylPrediction",
    "LevelEstimate",
    "mode_count",
    "weyl_prediction",
    "accumulation_statistic",
    "detect_levels",
]

_DEFAULT_OPTS = RootScanOptions()


@dataclass(frozen=True)
class WeylPrediction:
    """Asymptotic mode-count estimate and whether it is a proven regime.

    The flag is always true for one or two finite layers.  For three or
    more it is true only above the second-smallest ordered slowness level
    and only when the minimum velocity is attained by a single ordered
    slot; elsewhere the formula is a conjectured extension.
    """

    value: float
    proven: bool


@dataclass(frozen=True)
class LevelEstimate:
    """A detected accumulation level with its pile-up weight.

    ``slowness`` estimates ``1/c_j`` for some layer j; ``weight`` estimates
    ``T_j / sqrt(c_j)`` (or the summed thickness over layers sharing the
    velocity).
    """

    slowness: float
    weight: float


def mode_count(
    medium: Medium, omega: float, y: float, opts: RootScanOptions | None = None
) -> int:
    """Number of dispersion zeros with slowness >= ``y`` at ``omega``.

    Counted by a direct sign-change scan on ``[y, 1/c0)``, independent of
    any stored branch data.
    """
    if not omega > 0.0:
        raise ValueError("omega must be > 0")
    opts = opts or _DEFAULT_OPTS
    lo, hi = medium.slowness_domain
    if not lo < y < hi:
        raise OutOfRange(f"level {y!r} outside the open slowness domain ({lo}, {hi})")
    return _count_above(medium, omega, y, opts)


def _count_above(
    medium: Medium, omega: float, y: float, opts: RootScanOptions
) -> int:
    """Count with the level clamped into the scan window (internal)."""
    s_lo, s_hi = _scan_domain(medium, opts)
    y_lo = min(max(y, s_lo), s_hi)
    return _roots_on_interval(medium, omega, y_lo, s_hi, opts, count_only=True)


def weyl_prediction(medium: Medium, omega: float, y: float) -> WeylPrediction:
    """Asymptotic count of modes with slowness >= ``y``."""
    lo, hi = medium.slowness_domain
    if not lo <= y < hi:
        raise OutOfRange(f"level {y!r} outside [{lo}, {hi})")
    prof = ordered_profile(medium)
    value = omega / np.pi * prof.oscillatory_sum(y)
    if medium.n <= 2:
        proven = True
    else:
        distinct_min = prof.c_tilde[0] < prof.c_tilde[1]
        proven = bool(distinct_min and y >= 1.0 / prof.c_tilde[1])
    return WeylPrediction(value=float(value), proven=proven)


def accumulation_statistic(
    medium: Medium,
    omega: float,
    y: float,
    opts: RootScanOptions | None = None,
    strict: bool = False,
) -> float:
    """Pile-up statistic ``pi * (N(omega, y - 1/omega) - N(omega, y)) / sqrt(2 omega)``.

    As ``omega`` grows this tends to ``T_j / sqrt(c_j)`` at ``y = 1/c_j``
    (summed thickness if several layers share the velocity) and to zero at
    any other level.

    When the shifted level ``y - 1/omega`` falls at or below ``1/c_inf``
    the count is taken over all existing branches, which is the natural
    extension of the definition; pass ``strict=True`` to get an
    :class:`OutOfRange` error instead.
    """
    if not omega > 0.0:
        raise ValueError("omega must be > 0")
    opts = opts or _DEFAULT_OPTS
    lo, hi = medium.slowness_domain
    if not lo < y < hi:
        raise OutOfRange(f"level {y!r} outside the open slowness domain ({lo}, {hi})")
    shifted = y - 1.0 / omega
    if strict and shifted <= lo:
        raise OutOfRange(
            f"shifted level {shifted!r} at or below 1/c_inf = {lo!r}; "
            f"needs omega > {1.0 / (y - lo):g}"
        )
    n_hi = _count_above(medium, omega, shifted, opts)
    n_lo = _count_above(medium, omega, y, opts)
    return float(np.pi * (n_hi - n_lo) / np.sqrt(2.0 * omega))


# ---------------------------------------------------------------------------
# level detection from traced branches


def _counts_at_node(slownesses_desc: np.ndarray, level: float) -> int:
    """Number of branch slownesses >= level (slownesses sorted descending)."""
    asc = slownesses_desc[::-1]
    return len(asc) - int(np.searchsorted(asc, level, side="left"))


def detect_levels(
    branchset: BranchSet,
    min_cluster: int = 3,
    gap_factor: float = 0.4,
    fit_nodes: int = 40,
) -> list[LevelEstimate]:
    """Locate accumulation levels in traced branches and estimate weights.

    Levels are read off the branch slownesses at the largest traced
    frequency: a level shows up as a run of anomalously small gaps between
    consecutive slownesses, and the top of the run estimates ``1/c_j``.
    Weights come from the scaled count differences of the pile-up
    statistic, sampled across the top decade of the frequency grid and
    solved jointly for the per-level thicknesses (the joint solve removes
    the contamination that the ``1/omega`` level shift picks up from
    neighboring levels at finite frequency).

    Raises
    ------
    InsufficientData
        If fewer than 10 branches exist at the largest traced frequency.
    """
    top = len(branchset.omega_grid) - 1
    y_top = branchset.slownesses_at(top)
    if len(y_top) < 10:
        raise InsufficientData(
            f"only {len(y_top)} branches at the top frequency; need >= 10"
        )
    w_top = float(branchset.omega_grid[top])

    gaps = -np.diff(y_top)  # descending input -> positive gaps
    thr = gap_factor * float(np.median(gaps))
    dense = gaps < thr
    levels: list[float] = []
    i = 0
    while i < len(dense):
        if dense[i]:
            j = i
            while j < len(dense) and dense[j]:
                j += 1
            if j - i >= min_cluster:
                levels.append(_refine_level(y_top[i : j + 1]))
            i = j
        else:
            i += 1
    if not levels:
        return []
    levels.sort(reverse=True)

    weights = _level_weights(branchset, levels, fit_nodes)
    return [LevelEstimate(slowness=lv, weight=w) for lv, w in zip(levels, weights)]


def _refine_level(cluster_y: np.ndarray, max_members: int = 8) -> float:
    """Extrapolate the accumulation level from the top cluster members.

    Below a level ``L`` the member slownesses satisfy exactly
    ``y_p^2 = L^2 - ((p + s) * pi / (omega T))^2`` up to the slow drift of
    the phase offset ``s``, so a quadratic fit of ``y^2`` against the
    member index has its apex at ``L^2``.  Falls back to the top member
    when the fit is degenerate.
    """
    ys = np.asarray(cluster_y, dtype=float)[:max_members]
    top = float(ys[0])
    if len(ys) < 4:
        return top
    p = np.arange(len(ys), dtype=float)
    c, b, a = np.polyfit(p, ys * ys, 2)  # highest power first
    if c >= 0.0:
        return top
    apex = a - b * b / (4.0 * c)
    if apex <= top * top:
        return top
    level = float(np.sqrt(apex))
    span = float(ys[0] - ys[-1])
    if level > top + 4.0 * span:
        return top  # extrapolation outran the cluster: distrust it
    return level


def _level_weights(
    branchset: BranchSet, levels: list[float], fit_nodes: int
) -> np.ndarray:
    """Joint least-squares thicknesses from shifted count differences.

    Each sample equation matches an observed count difference
    ``N(omega, level - 1/omega) - N(omega, level)`` against its Weyl form,
    which is linear in the unknown per-level thicknesses.  Shifted levels
    falling below the observed slowness floor are clamped there (count all
    branches), with the design row built at the same clamped point.
    """
    grid = branchset.omega_grid
    top = len(grid) - 1
    lo_idx = int(np.searchsorted(grid, grid[top] / 10.0))
    idxs = np.unique(np.linspace(lo_idx, top, fit_nodes).astype(int))
    lv = np.asarray(levels)

    rows = []
    rhs = []
    for i in idxs:
        ys = branchset.slownesses_at(i)
        if len(ys) == 0:
            continue
        w = float(grid[i])
        floor = float(ys.min()) * (1.0 - 1e-12)
        for level in levels:
            shifted = max(level - 1.0 / w, floor)
            d_obs = _counts_at_node(ys, shifted) - _counts_at_node(ys, level)
            nu_hi = np.sqrt(np.maximum(lv * lv - shifted * shifted, 0.0))
            nu_lo = np.sqrt(np.maximum(lv * lv - level * level, 0.0))
            rows.append(w / np.pi * (nu_hi - nu_lo))
            rhs.append(float(d_obs))
    a = np.asarray(rows)
    b = np.asarray(rhs)
    thickness, _ = nnls(a, b)
    return thickness * np.sqrt(lv)  # T_j / sqrt(c_j) with c_j = 1/level
