"""
Generador de configuraciones aleatorias para el laboratorio de teoremas.
"""

import logging
import math

import numpy as np

from utils.config import GENERADOR
from utils.errores import InputError
from utils.voronoi import build

logger = logging.getLogger(__name__)


class ConfiguracionGenerator:
    """
    Genera fronteras, dominios de Voronoi, puntos interiores y vectores
    aleatorios con un generador de numpy reproducible.

    Cada ensayo usa su propio generador derivado de (semilla, enunciado,
    ensayo), de modo que el resultado no depende del orden de ejecución.
    """

    # Rangos de núcleos por densidad
    DENSIDAD = {
        'dispersa': (3, 10),
        'media': (10, 25),
        'densa': (25, 50),
        'cualquiera': (GENERADOR['n_min'], GENERADOR['n_max']),
    }

    def __init__(self, rng):
        """
        Args:
            rng: numpy.random.Generator
        """
        self.rng = rng

    @classmethod
    def para_ensayo(cls, semilla, enunciado, ensayo):
        """Generador del ensayo `ensayo` del enunciado número `enunciado`."""
        return cls(np.random.default_rng([int(semilla), int(enunciado), int(ensayo)]))

    def frontera(self, n=None, densidad='cualquiera'):
        """
        Núcleos uniformes en [0, 1]² con separación mínima.

        Args:
            n: Número de núcleos; si falta se sortea en el rango de la densidad
            densidad: Clave de DENSIDAD

        Raises:
            InputError: Si no se consigue la separación tras max_intentos
        """
        if n is None:
            bajo, alto = self.DENSIDAD[densidad]
            n = int(self.rng.integers(bajo, alto + 1))
        separacion = GENERADOR['separacion_min']
        puntos = []
        intentos = 0
        while len(puntos) < n:
            intentos += 1
            if intentos > GENERADOR['max_intentos']:
                raise InputError(f"No se pudieron colocar {n} núcleos con separación {separacion}")
            candidato = self.rng.uniform(0.0, 1.0, size=2)
            if all(math.hypot(*(candidato - p)) >= separacion for p in puntos):
                puntos.append(candidato)
        return np.array(puntos)

    def dominio(self, n=None, densidad='cualquiera'):
        return build(self.frontera(n, densidad))

    def punto_interior(self, domain, delta_min=None, margen=0.25):
        """
        Punto de [-margen, 1 + margen]² con δ >= delta_min.

        Raises:
            InputError: Si no se encuentra tras max_intentos
        """
        delta_min = GENERADOR['delta_min'] if delta_min is None else delta_min
        for _ in range(GENERADOR['max_intentos']):
            z = self.rng.uniform(-margen, 1.0 + margen, size=2)
            if domain.delta(z) >= delta_min:
                return z
        raise InputError(f"No hay puntos con δ >= {delta_min} en la ventana")

    def angulo(self):
        return float(self.rng.uniform(-math.pi, math.pi))

    def direccion(self):
        phi = self.angulo()
        return np.array([math.cos(phi), math.sin(phi)])

    def vector(self, dimension=2):
        """Vector gaussiano no nulo de la dimensión dada."""
        while True:
            v = self.rng.standard_normal(dimension)
            if np.any(v != 0.0):
                return v

    def escalar(self, bajo, alto):
        return float(self.rng.uniform(bajo, alto))
