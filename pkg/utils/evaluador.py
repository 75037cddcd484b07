"""
Evaluación de enunciados verificables: márgenes, fallos e informes.
"""

import csv
import hashlib
import json
import logging
import math
from dataclasses import asdict, dataclass

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerificationReport:
    """
    Informe de un enunciado.

    Attributes:
        statement_id: Identificador del enunciado
        trials: Ensayos evaluados
        failures: Ensayos con margen < -tolerance
        skipped: Ensayos descartados (configuración no aplicable)
        worst_margin: Menor margen observado (positivo: desigualdad con holgura)
        tolerance: Holgura numérica admitida
        config_digest: Semilla y parámetros, más su resumen SHA-256
        failing_trials: Índices de los ensayos fallidos; con la semilla y el
            enunciado reconstruyen la configuración testigo
    """
    statement_id: str
    trials: int
    failures: int
    skipped: int
    worst_margin: float
    tolerance: float
    config_digest: dict
    failing_trials: tuple = ()

    @property
    def passed(self):
        return self.failures == 0

    def to_dict(self):
        datos = asdict(self)
        if math.isinf(self.worst_margin):
            datos['worst_margin'] = 'inf' if self.worst_margin > 0 else '-inf'
        return datos

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def resumen_configuracion(semilla, **parametros):
    """config_digest: parámetros más un hash estable de ellos."""
    datos = {'seed': int(semilla), **{k: parametros[k] for k in sorted(parametros)}}
    texto = json.dumps(datos, sort_keys=True, default=str)
    datos['sha256'] = hashlib.sha256(texto.encode('utf-8')).hexdigest()
    return datos


class Evaluador:
    """
    Acumula los márgenes de un enunciado y produce su informe.

    Args:
        statement_id: Identificador del enunciado
        tolerancia: Un ensayo falla si su margen es menor que -tolerancia
        semilla: Semilla maestra
        parametros: Parámetros adicionales del experimento
    """

    def __init__(self, statement_id, tolerancia, semilla, **parametros):
        self.statement_id = statement_id
        self.tolerancia = tolerancia
        self.digest = resumen_configuracion(semilla, tolerance=tolerancia, **parametros)
        self.margenes = []
        self.omitidos = 0
        self.fallidos = []

    def registrar(self, margen):
        """Añade el margen de un ensayo (NaN cuenta como fallo)."""
        margen = float(margen)
        indice = len(self.margenes) + self.omitidos
        self.margenes.append(margen)
        if not margen >= -self.tolerancia:
            self.fallidos.append(indice)
            logger.warning("%s: fallo en el ensayo %d con margen %.3g", self.statement_id, indice, margen)

    def omitir(self, motivo=''):
        self.omitidos += 1
        logger.debug("%s: ensayo omitido %s", self.statement_id, motivo)

    def informe(self):
        fallos = sum(1 for m in self.margenes if not m >= -self.tolerancia)
        peor = min(self.margenes, default=math.inf)
        if any(math.isnan(m) for m in self.margenes):
            peor = -math.inf
        return VerificationReport(self.statement_id, len(self.margenes), fallos, self.omitidos, peor,
                                  self.tolerancia, self.digest, tuple(self.fallidos))


def combinar(statement_id, tolerancia, semilla, parametros, margenes):
    """
    Informe a partir de márgenes calculados en orden (p. ej. en paralelo).

    Args:
        margenes: Secuencia de márgenes; None marca un ensayo omitido
    """
    evaluador = Evaluador(statement_id, tolerancia, semilla, **parametros)
    for margen in margenes:
        if margen is None:
            evaluador.omitir()
        else:
            evaluador.registrar(margen)
    return evaluador.informe()


def generar_reporte(informes):
    """Tabla de texto con el resumen de varios informes."""
    lineas = [
        "=" * 72,
        f"{'Enunciado':<24}{'Ensayos':>9}{'Fallos':>8}{'Omitidos':>10}{'Peor margen':>16}",
        "-" * 72,
    ]
    for r in informes:
        estado = '' if r.passed else '  <- FALLA'
        lineas.append(f"{r.statement_id:<24}{r.trials:>9}{r.failures:>8}{r.skipped:>10}{r.worst_margin:>16.6g}{estado}")
    lineas.append("=" * 72)
    total = sum(r.failures for r in informes)
    lineas.append("Todos los enunciados se cumplen" if total == 0 else f"{total} fallo(s) en total")
    return "\n".join(lineas)


def escribir_csv(informes, ruta):
    """Resumen CSV: statement_id, trials, failures, skipped, worst_margin."""
    with open(ruta, 'w', newline='') as fichero:
        escritor = csv.writer(fichero)
        escritor.writerow(['statement_id', 'trials', 'failures', 'skipped', 'worst_margin'])
        for r in informes:
            escritor.writerow([r.statement_id, r.trials, r.failures, r.skipped, repr(r.worst_margin)])
