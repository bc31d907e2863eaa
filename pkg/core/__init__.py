# core/__init__.py


from .errors import (
    FDTCEngineError,
    SurfaceError,
    CurveError,
    MappingClassError,
    FDTCError,
    FoliationError,
    TopologyError,
    ProblemError,
)
