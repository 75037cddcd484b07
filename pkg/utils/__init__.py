"""
Paquete del motor cuasihiperbólico para dominios de Voronoi.
"""

from .errores import (
    ConvergenceError,
    DomainError,
    GeodesicError,
    InputError,
    QuasihyperbolicError,
    ResolutionError,
)
from .voronoi import VoronoiDomain, build
from .motor_geodesico import (
    ConnectResult,
    QhBall,
    connect,
    exp_map,
    prolong,
    qh_distance,
    shoot,
    trace_ball,
)
from .oraculo import oracle_distance, refinement_ladder
from .teoremas import run_suite

__all__ = [
    'ConvergenceError',
    'DomainError',
    'GeodesicError',
    'InputError',
    'QuasihyperbolicError',
    'ResolutionError',
    'VoronoiDomain',
    'build',
    'ConnectResult',
    'QhBall',
    'connect',
    'exp_map',
    'prolong',
    'qh_distance',
    'shoot',
    'trace_ball',
    'oracle_distance',
    'refinement_ladder',
    'run_suite',
]
