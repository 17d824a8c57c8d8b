"""Partial-transpose separability tests, CHSH maxima and collective
postselection for two-qubit states."""

from ._qsep import (
    BipartiteDensity,
    LocalRows,
    OptimizerConfig,
    OptimizerReport,
    PostselectionOutcome,
    PptVerdict,
    RestartResult,
    ScanPoint,
    ValidationReport,
    bell_expectation,
    brute_force_chsh,
    chsh_max,
    density_from_matrix,
    detect_transition,
    from_ensemble,
    gisin_family,
    gisin_filter_threshold,
    gisin_ppt_threshold,
    hermitian_eigenvalues,
    kron,
    local_unitary_conjugate,
    mirror_rows,
    basis_flip_rows,
    objective,
    optimize,
    pair_power,
    partial_transpose,
    postselect,
    ppt_check,
    regroup_pairs_to_parties,
    scan_curve,
    singlet,
    singlet_plus_polarized,
    t_matrix,
    validate,
    werner,
    xor_rows,
    __version__,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
