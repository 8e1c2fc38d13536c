"""Numerical conformal mapping toolkit: disk, annulus, and rectangle maps
of planar domains via least-squares Laplace solves, with rational-map
compression and crowding/modulus diagnostics."""

from .basis import BasisSet, BasisTerm, build_basis, evaluate_basis
from .geometry import (
    ArcSegment,
    BoundarySampling,
    Corner,
    DomainSpec,
    build_domain,
    contains,
    corner_list,
    disk_domain,
    domain_from_json,
    domain_to_json,
    polygon,
    sample_boundary,
    transform_domain,
)
from .laplace import (
    AnalyticModel,
    ErrorReport,
    solve_dirichlet,
    solve_dirichlet_adaptive,
    solve_mixed,
    verify_residual,
)
from .maps import (
    ConformalMap,
    annulus_map,
    disk_map,
    evaluate_map,
    green_function,
    invert_map,
    rectangle_map,
)
from .diagnostics import (
    CrowdingForecast,
    ElongationEstimate,
    ProbabilityResult,
    crowding_forecast,
    elongation_estimate,
    end_hitting_probability,
    resistance_of_quadrilateral,
)
from .rational import (
    CorrespondenceTable,
    RationalApproximant,
    boundary_correspondence,
    evaluate_rational,
    fit_rational,
)
from .render import (
    RenderSpec,
    field_color,
    lightness_factor,
    render_field_svg,
    render_grid_svg,
    save_figure_png,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
