"""
Registro de subcomandos y despacho con los códigos de salida.
"""

import json
import logging
import sys

from commands import (
    ApproximateCommand,
    BallCommand,
    DistanceCommand,
    GeodesicCommand,
    OracleCompareCommand,
    VerifyCommand,
)
from commands.base import ERROR_ENTRADA, FALLO_NUMERICO
from utils.errores import ConvergenceError, DomainError, GeodesicError, InputError, ResolutionError

logger = logging.getLogger(__name__)


class NavigationManager:
    """
    Despacha cada subcomando a su clase y traduce las excepciones a
    códigos de salida (2: fallo numérico, 3: error de entrada).
    """

    def __init__(self, stdout=None, stderr=None):
        """
        Args:
            stdout: Flujo de los resultados
            stderr: Flujo de los mensajes de error de una línea
        """
        self.stdout = stdout or sys.stdout
        self.stderr = stderr or sys.stderr

        # Registro de subcomandos disponibles
        self.commands = {
            'distance': {
                'class': DistanceCommand,
                'title': 'Distancia cuasihiperbólica con contraste del oráculo'
            },
            'geodesic': {
                'class': GeodesicCommand,
                'title': 'Geodésicas entre dos puntos o disparo desde uno'
            },
            'ball': {
                'class': BallCommand,
                'title': 'Frontera de una bola cuasihiperbólica (SVG y CSV)'
            },
            'verify': {
                'class': VerifyCommand,
                'title': 'Suites del laboratorio de teoremas'
            },
            'approximate': {
                'class': ApproximateCommand,
                'title': 'Distancias en aproximaciones de Voronoi de un polígono'
            },
            'oracle-compare': {
                'class': OracleCompareCommand,
                'title': 'Escalera de refinamiento del oráculo frente al motor'
            },
        }

    def titulo(self, command_id):
        return self.commands[command_id]['title']

    def run(self, config):
        """
        Ejecuta el subcomando de `config`.

        Returns:
            Código de salida
        """
        if config.command not in self.commands:
            return self._fallo(ERROR_ENTRADA, f"Subcomando desconocido: '{config.command}'")
        comando = self.commands[config.command]['class'](config, stdout=self.stdout)
        try:
            return comando.ejecutar()
        except (InputError, DomainError, json.JSONDecodeError) as exc:
            return self._fallo(ERROR_ENTRADA, f"Error de entrada: {exc}")
        except ConvergenceError as exc:
            return self._fallo(FALLO_NUMERICO, f"Sin convergencia (mejor residuo {exc.mejor_residuo:.3g}): {exc}")
        except (GeodesicError, ResolutionError) as exc:
            return self._fallo(FALLO_NUMERICO, f"Fallo numérico: {exc}")

    def _fallo(self, codigo, mensaje):
        logger.debug("Código de salida %d", codigo)
        print(mensaje, file=self.stderr)
        return codigo
