"""Moebius invariants of hypersurfaces in the conformal sphere."""

from ._core import (
    CRITERION_COUNT,
    ORIENTATION_CONVENTION,
    Family,
    MoebiusLabError,
    __version__,
    analyze_point,
    classify_matrices,
    classify_orbit,
    default_tolerances,
    group_membership,
    horosphere_level,
    invariants_report_json,
    inv_stereographic,
    light_cone_lift,
    lorentz_inner,
    lorentz_metric,
    make_family,
    moebius_action,
    run_criterion,
    standard_selectors,
    stereographic,
    verify_homogeneity,
)


def run_all_criteria(seed=1, tolerances=None):
    """Results of every acceptance criterion, in order."""
    return [run_criterion(i, seed, tolerances or {}) for i in range(1, CRITERION_COUNT + 1)]


__all__ = [name for name in dir() if not name.startswith("_")]
