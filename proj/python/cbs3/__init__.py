"""Triple-scattering ladder and crossed contributions to coherent
backscattering of intense laser light from two-level atoms.

The compiled extension lives inside the package when installed as a wheel;
an in-tree CMake build leaves it on sys.path instead, so fall back to the
top-level name in that case.
"""

try:
    from ._core import (
        AtomParams,
        ContributionType,
        QuadratureConfig,
        RefKind,
        SpectrumResult,
        __version__,
        compute_spectrum,
        default_nu_grid,
        degeneracy_factor,
        elastic_intensity,
        enhancement_factor,
        inelastic_spectrum,
        per_path_total,
        perturbative_reference,
        single_atom_spectrum_oracle,
        strong_drive_spectrum,
        term_count,
    )
except ImportError:  # in-tree build: _core is a sibling on sys.path
    from _core import (
        AtomParams,
        ContributionType,
        QuadratureConfig,
        RefKind,
        SpectrumResult,
        __version__,
        compute_spectrum,
        default_nu_grid,
        degeneracy_factor,
        elastic_intensity,
        enhancement_factor,
        inelastic_spectrum,
        per_path_total,
        perturbative_reference,
        single_atom_spectrum_oracle,
        strong_drive_spectrum,
        term_count,
    )

__all__ = [
    "AtomParams",
    "ContributionType",
    "QuadratureConfig",
    "RefKind",
    "SpectrumResult",
    "__version__",
    "compute_spectrum",
    "default_nu_grid",
    "degeneracy_factor",
    "elastic_intensity",
    "enhancement_factor",
    "inelastic_spectrum",
    "per_path_total",
    "perturbative_reference",
    "single_atom_spectrum_oracle",
    "strong_drive_spectrum",
    "term_count",
]
