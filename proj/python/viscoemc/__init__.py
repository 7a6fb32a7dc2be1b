"""Energy-momentum consistent incompressible viscoelastodynamics."""

from ._core import (
    BranchKind,
    MaterialParams,
    ViscoBranch,
    ViscoError,
    algorithmic_stress,
    algorithmic_tangent,
    conjugate_Q,
    gibbs_iso,
    iso_pk2,
    isochoric_invariants,
    material_point_rates,
    material_point_run,
    run_config,
    unimodular,
    update_gamma,
    upsilon,
)

__all__ = [
    "BranchKind",
    "MaterialParams",
    "ViscoBranch",
    "ViscoError",
    "algorithmic_stress",
    "algorithmic_tangent",
    "conjugate_Q",
    "gibbs_iso",
    "iso_pk2",
    "isochoric_invariants",
    "material_point_rates",
    "material_point_run",
    "run_config",
    "unimodular",
    "update_gamma",
    "upsilon",
]
