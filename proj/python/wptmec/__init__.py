from ._core import (
    Allocation,
    DualVars,
    EnergyReport,
    GridSpec,
    Infeasible,
    KktReport,
    NonConvergence,
    Scheme,
    Solution,
    SystemConfig,
    UserAllocation,
    UserParams,
    ValidationError,
    grid_search,
    kkt_residuals,
    lambert_w0,
    run_baseline,
    run_joint,
    total_ap_energy,
)

__all__ = [
    "Allocation",
    "DualVars",
    "EnergyReport",
    "GridSpec",
    "Infeasible",
    "KktReport",
    "NonConvergence",
    "Scheme",
    "Solution",
    "SystemConfig",
    "UserAllocation",
    "UserParams",
    "ValidationError",
    "grid_search",
    "kkt_residuals",
    "lambert_w0",
    "run_baseline",
    "run_joint",
    "total_ap_energy",
]
