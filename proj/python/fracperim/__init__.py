"""Discrete fractional perimeters, rearrangements and quantitative isoperimetric deficits."""

from ._core import (
    Asymmetry,
    DeficitReport,
    FracperimError,
    GridFunction,
    GridSet,
    GridSpec,
    InteractionTable,
    KernelParams,
    Shape,
    build_table,
    dirichlet_energy,
    distribution_function,
    equivalent_radius,
    extension_energy,
    family_names,
    fraenkel_asymmetry,
    fractional_perimeter,
    generate_family,
    poisson_kernel,
    rasterize,
    reflect,
    s_deficit,
    steiner_symmetrize,
    symmetric_rearrangement,
)

__all__ = [name for name in dir() if not name.startswith("_")]
