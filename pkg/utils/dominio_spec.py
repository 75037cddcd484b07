"""
Lectura de dominios desde JSON y configuración de una ejecución de la CLI.

Un dominio se describe con la frontera explícita

    {"boundary": [[x, y], ...]}

o con un polígono cerrado que se muestrea para obtener una aproximación
de Voronoi Ω_k:

    {"polygon": [[x, y], ...], "samples_per_unit": 4}

Los muestreos de niveles sucesivos están anidados: cada lado se divide en
m·2^k tramos iguales, así que los núcleos del nivel k están en el nivel k+1.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from shapely.geometry import LinearRing, Point, Polygon

from utils.errores import InputError
from utils.geometria import como_punto
from utils.voronoi import build

logger = logging.getLogger(__name__)


def _puntos(valor, nombre, minimo):
    try:
        pts = np.asarray(valor, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"'{nombre}' no es una lista de puntos: {exc}") from exc
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < minimo:
        raise InputError(f"'{nombre}' necesita al menos {minimo} pares [x, y]")
    if not np.all(np.isfinite(pts)):
        raise InputError(f"'{nombre}' contiene coordenadas no finitas")
    return pts


@dataclass(frozen=True, eq=False)
class DomainSpec:
    """
    Dominio de entrada: frontera finita o polígono muestreado.

    Attributes:
        boundary: Núcleos explícitos (None si el dominio es un polígono)
        polygon: Vértices del polígono cerrado, sin repetir el primero
        samples_per_unit: Muestras por unidad de longitud del nivel 0
    """
    boundary: Optional[np.ndarray] = None
    polygon: Optional[np.ndarray] = None
    samples_per_unit: Optional[float] = None
    _forma: Optional[Polygon] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if (self.boundary is None) == (self.polygon is None):
            raise InputError("El dominio necesita 'boundary' o 'polygon', y solo uno de ellos")
        if self.polygon is None:
            return
        if self.samples_per_unit is None or not self.samples_per_unit > 0:
            raise InputError("'samples_per_unit' debe ser positivo")
        anillo = LinearRing(self.polygon)
        if not anillo.is_simple:
            raise InputError("El polígono no es simple")
        forma = Polygon(anillo)
        if not forma.is_valid or forma.area <= 0.0:
            raise InputError("El polígono es degenerado")
        object.__setattr__(self, '_forma', forma)

    @property
    def is_polygon(self):
        return self.polygon is not None

    @classmethod
    def from_dict(cls, datos):
        if not isinstance(datos, dict):
            raise InputError("El JSON del dominio debe ser un objeto")
        if 'boundary' in datos:
            return cls(boundary=_puntos(datos['boundary'], 'boundary', 1))
        if 'polygon' in datos:
            pts = _puntos(datos['polygon'], 'polygon', 3)
            if np.array_equal(pts[0], pts[-1]):
                pts = pts[:-1]
            try:
                densidad = float(datos.get('samples_per_unit', 1.0))
            except (TypeError, ValueError) as exc:
                raise InputError(f"'samples_per_unit' no es numérico: {exc}") from exc
            return cls(polygon=pts, samples_per_unit=densidad)
        raise InputError("El JSON del dominio no tiene 'boundary' ni 'polygon'")

    @classmethod
    def from_json(cls, texto):
        try:
            datos = json.loads(texto)
        except json.JSONDecodeError as exc:
            raise InputError(f"JSON mal formado: {exc.msg} (línea {exc.lineno})") from exc
        return cls.from_dict(datos)

    @classmethod
    def load(cls, ruta):
        try:
            with open(ruta, encoding='utf-8') as fichero:
                texto = fichero.read()
        except OSError as exc:
            raise InputError(f"No se pudo leer {ruta}: {exc.strerror}") from exc
        return cls.from_json(texto)

    def nuclei(self, level=0):
        """
        Núcleos del nivel dado.

        Para un polígono, cada lado de longitud L se divide en
        ceil(L·samples_per_unit)·2^level tramos, de modo que la separación
        entre muestras consecutivas es <= 1/(samples_per_unit·2^level).
        """
        if not self.is_polygon:
            return self.boundary
        if level < 0:
            raise InputError(f"Nivel negativo: {level}")
        muestras = []
        vertices = self.polygon
        for a, b in zip(vertices, np.roll(vertices, -1, axis=0)):
            largo = float(math.hypot(*(b - a)))
            tramos = max(1, math.ceil(largo * self.samples_per_unit - 1e-12)) * 2 ** level
            fracciones = np.arange(tramos) / tramos
            muestras.append(a + fracciones[:, None] * (b - a))
        pts = np.vstack(muestras)
        logger.debug("Nivel %d: %d núcleos sobre el polígono", level, len(pts))
        return pts

    def domain(self, level=0):
        return build(self.nuclei(level))

    def contains(self, z):
        """¿Está z en el dominio? (interior del polígono, o fuera de la frontera)."""
        z = como_punto(z)
        if self.is_polygon:
            return bool(self._forma.contains(Point(float(z[0]), float(z[1]))))
        return not bool(np.any(np.all(self.boundary == z, axis=1)))

    def require_inside(self, z, nombre='punto'):
        if not self.contains(z):
            raise InputError(f"El {nombre} {np.asarray(z).tolist()} está fuera del dominio")
        return como_punto(z)


def parse_point(texto):
    """Convierte 'x,y' en un punto."""
    try:
        partes = [float(p) for p in str(texto).split(',')]
    except ValueError as exc:
        raise InputError(f"Punto mal formado: '{texto}'") from exc
    if len(partes) != 2 or not all(math.isfinite(p) for p in partes):
        raise InputError(f"Punto mal formado: '{texto}'")
    return np.array(partes)


@dataclass(frozen=True, eq=False)
class RunConfig:
    """
    Parámetros de una ejecución, construidos desde argparse.

    Attributes:
        command: Subcomando
        input: Ruta del JSON del dominio
        output: Ruta o prefijo de salida (None: solo stdout)
        tol: Tolerancia relativa de acuerdo motor/oráculo o margen de verify
        seed: Semilla maestra (obligatoria para verify)
        trials: Ensayos por enunciado
        samples: Disparos iniciales en el borde de la bola
        workers: Procesos o hilos para el trabajo en paralelo
    """
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    tol: float = 0.02
    seed: Optional[int] = None
    trials: int = 100
    samples: int = 64
    workers: Optional[int] = None
    png: Optional[str] = None
    suite: tuple = ('all',)
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    r: Optional[float] = None
    phi: Optional[float] = None
    levels: tuple = ()
    spacings: tuple = ()

    def __post_init__(self):
        if not self.tol > 0:
            raise InputError(f"La tolerancia debe ser positiva: {self.tol}")
        if self.trials < 1:
            raise InputError(f"--trials debe ser >= 1: {self.trials}")
        if self.workers is not None and self.workers < 1:
            raise InputError(f"--workers debe ser >= 1: {self.workers}")
        if self.command == 'verify' and self.seed is None:
            raise InputError("verify necesita --seed")
        if any(not h > 0 for h in self.spacings):
            raise InputError("Los pasos de malla deben ser positivos")

    @classmethod
    def from_args(cls, args):
        """Construye la configuración desde un argparse.Namespace."""
        def punto(nombre):
            valor = getattr(args, nombre, None)
            return None if valor is None else parse_point(valor)

        return cls(
            command=args.command,
            input=getattr(args, 'input', None),
            output=getattr(args, 'output', None),
            tol=getattr(args, 'tol', 0.02),
            seed=getattr(args, 'seed', None),
            trials=getattr(args, 'trials', 100),
            samples=getattr(args, 'samples', 64),
            workers=getattr(args, 'workers', None),
            png=getattr(args, 'png', None),
            suite=tuple(getattr(args, 'suite', None) or ('all',)),
            x=punto('x'),
            y=punto('y'),
            r=getattr(args, 'r', None),
            phi=getattr(args, 'phi', None),
            levels=tuple(getattr(args, 'levels', None) or ()),
            spacings=tuple(getattr(args, 'spacings', None) or ()),
        )

    def load_spec(self):
        if self.input is None:
            raise InputError(f"{self.command} necesita --input")
        return DomainSpec.load(self.input)

    def require(self, *nombres):
        """Valores obligatorios para el subcomando."""
        faltan = [n for n in nombres if getattr(self, n) is None]
        if faltan:
            raise InputError(f"{self.command} necesita " + ", ".join(f"--{n}" for n in faltan))
        valores = tuple(getattr(self, n) for n in nombres)
        return valores[0] if len(valores) == 1 else valores
