"""Linearized R13 equations on triangles: mixed finite elements with CIP stabilization."""

from ._r13fem import (  # noqa: F401
    ConfigError,
    Error,
    EvalError,
    Expr,
    Mesh,
    MeshError,
    ParseError,
    ProblemSpec,
    Solution,
    SolverError,
    ValidationError,
    assemble,
    case_channel,
    case_knudsen_pump,
    case_ring_flow,
    case_thermal_edge,
    compare,
    fitted_slope,
    generate_annulus,
    generate_rectangle,
    kn_sweep,
    load_config,
    parse_config,
    pump_mean_velocity,
    read_gmsh,
    solve,
    stf3d2,
    write_gmsh,
)

__version__ = "0.1.0"
