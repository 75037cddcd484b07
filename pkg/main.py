"""
Geometría cuasihiperbólica en dominios de Voronoi
Punto de entrada de la línea de órdenes
"""

import argparse
import logging
import os
import sys

# Agregar el directorio raíz al path para importaciones
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from commands.base import ERROR_ENTRADA
from utils.dominio_spec import RunConfig
from utils.errores import InputError
from utils.navigation import NavigationManager

FORMATO_LOG = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class ArgumentParser(argparse.ArgumentParser):
    """Parser cuyos errores de uso salen con el código de error de entrada."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR_ENTRADA, f"{self.prog}: error: {message}\n")


def crear_parser(navegacion):
    """
    Construye el parser con un subcomando por entrada del registro.

    Args:
        navegacion: NavigationManager con el registro de subcomandos
    """
    comun = argparse.ArgumentParser(add_help=False)
    comun.add_argument('--input', help="JSON del dominio ({'boundary': ...} o {'polygon': ..., 'samples_per_unit': ...})")
    comun.add_argument('--output', help="Fichero o prefijo de salida (directorio en verify)")
    comun.add_argument('--seed', type=int, help="Semilla maestra")
    comun.add_argument('--trials', type=int, default=100, help="Ensayos por enunciado (verify)")
    comun.add_argument('--tol', type=float, default=0.02, help="Diferencia relativa admitida motor/oráculo")
    comun.add_argument('--samples', type=int, default=64, help="Disparos iniciales de la bola")
    comun.add_argument('--workers', type=int, help="Procesos o hilos para el trabajo en paralelo")
    comun.add_argument('--png', help="Vista previa PNG (ball, geodesic)")
    comun.add_argument('--verbose', action='store_true', help="Registro a nivel DEBUG")
    comun.add_argument('--x', help="Punto 'x,y'")
    comun.add_argument('--y', help="Segundo punto 'x,y'")
    comun.add_argument('--r', type=float, help="Radio o longitud cuasihiperbólica")
    comun.add_argument('--phi', type=float, help="Ángulo de disparo en radianes (geodesic sin --y)")
    comun.add_argument('--levels', type=int, nargs='+', help="Niveles de refinamiento (approximate)")
    comun.add_argument('--spacings', type=float, nargs='+', help="Pasos de malla (oracle-compare)")
    comun.add_argument('--suite', nargs='+', help="Suites o enunciados (verify); 'all' por defecto")

    parser = ArgumentParser(prog='qhgeo', description="Geometría cuasihiperbólica en dominios de Voronoi")
    subparsers = parser.add_subparsers(dest='command', required=True, parser_class=ArgumentParser)
    for command_id in navegacion.commands:
        subparsers.add_parser(command_id, parents=[comun], help=navegacion.titulo(command_id))
    return parser


def configurar_logging(verbose):
    """Registro en stderr para que stdout quede legible por máquinas."""
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, format=FORMATO_LOG, stream=sys.stderr)


def main(argv=None):
    """
    Función principal de la línea de órdenes.

    Returns:
        Código de salida (0 correcto, 2 fallo numérico, 3 error de entrada)
    """
    navegacion = NavigationManager()
    args = crear_parser(navegacion).parse_args(argv)
    configurar_logging(args.verbose)
    try:
        config = RunConfig.from_args(args)
    except InputError as exc:
        print(f"Error de entrada: {exc}", file=sys.stderr)
        return ERROR_ENTRADA
    return navegacion.run(config)


if __name__ == "__main__":
    sys.exit(main())
