"""
Paquete de subcomandos de la línea de órdenes.
"""

from .approximate import ApproximateCommand
from .ball import BallCommand
from .distance import DistanceCommand
from .geodesic import GeodesicCommand
from .oracle_compare import OracleCompareCommand
from .verify import VerifyCommand

__all__ = [
    'ApproximateCommand',
    'BallCommand',
    'DistanceCommand',
    'GeodesicCommand',
    'OracleCompareCommand',
    'VerifyCommand',
]
