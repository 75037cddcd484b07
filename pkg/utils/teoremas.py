"""
Laboratorio de teoremas: verificación ejecutable de los enunciados.

Las proposiciones algebraicas se comprueban directamente; los resultados
geométricos se comprueban estadísticamente sobre dominios de Voronoi
aleatorios. Cada enunciado produce un VerificationReport con el peor margen
observado (positivo si la desigualdad se cumple con holgura).

Cada ensayo usa un generador derivado de (semilla, enunciado, ensayo), así
que una ejecución en paralelo produce exactamente el mismo informe que una
secuencial.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from utils.camino import CROSSING
from utils.configuracion_generator import ConfiguracionGenerator
from utils.errores import (
    ConvergenceError,
    DomainError,
    GeodesicError,
    InputError,
    ResolutionError,
)
from utils.espiral import SpiralArc, punctured_distance, qh_length_of_polyline
from utils.evaluador import combinar
from utils.geometria import Orientacion, Polyline, points_left, pr
from utils.motor_geodesico import connect, exp_map, qh_distance, shoot, trace_ball
from utils.voronoi import build

logger = logging.getLogger(__name__)

# Índice de cada enunciado en la derivación de semillas
ENUNCIADOS = {
    'curv': 0,
    'distcurv': 1,
    'quasis': 2,
    'smallballs': 3,
    'angle_divergence': 4,
    'divergence_bound': 5,
    'midpoint_bound': 6,
    'uniqueness_below_pi': 7,
    'gehring_palka': 8,
    'ball_convexity': 9,
    'boundary_lipschitz': 10,
    'regularity': 11,
    'punctured_exactness': 12,
}

RADIO_BOLA_PEQUENA = 0.009
EPS_NUMERICO = 1e-4
UMBRAL_SEPARACION = 1e-4


@dataclass(frozen=True)
class CommonCellChain:
    """
    Cadena de celdas comunes a dos geodésicas.

    Attributes:
        cells: Celda de cada eslabón (None para tramos rectos)
        edges: Arista por la que se entra en cada eslabón (None en el primero)
        t_params: Ventanas ((t0, t1), (t̃0, t̃1)) de cada eslabón
        alphas: (α, α̃) si ambas piezas son espirales, si no None
    """
    cells: tuple
    edges: tuple
    t_params: tuple
    alphas: tuple

    def __len__(self):
        return len(self.cells)

    def divergence(self):
        valores = [pr(par[1] - par[0]) for par in self.alphas if par is not None]
        return AngleDivergence(tuple(valores))


@dataclass(frozen=True)
class AngleDivergence:
    """Divergencias angulares δᵢ = Pr(α̃ᵢ - αᵢ) en los eslabones logarítmicos."""
    values: tuple

    def margin(self):
        """
        Margen de la monotonía: signo constante y |δᵢ| no decreciente.

        Returns:
            Mínimo de ambos márgenes (0 si no hay eslabones)
        """
        valores = np.asarray(self.values, dtype=float)
        if len(valores) == 0:
            return 0.0
        signo = 1.0 if valores[np.argmax(np.abs(valores))] >= 0.0 else -1.0
        margen = float(np.min(signo * valores))
        if len(valores) > 1:
            margen = min(margen, float(np.min(np.diff(np.abs(valores)))))
        return margen


def _edge_entrada(path, t):
    for suceso in path.events:
        if suceso.kind == CROSSING and abs(suceso.t - t) <= 1e-9 * max(1.0, t):
            return suceso.location.edge
    return None


def _clave_pieza(path, k):
    pieza = path.pieces[k]
    if isinstance(pieza, SpiralArc):
        return ('spiral', path.cells[k])
    return ('straight', pieza.edge)


def extract_chain(gamma, gamma_t):
    """
    Cadena de celdas comunes a dos geodésicas que salen del mismo punto.

    Recorre las piezas de ambas en paralelo mientras visitan la misma celda
    (o deslizan por la misma arista). Si difieren desde el principio la
    cadena queda vacía.

    Returns:
        CommonCellChain
    """
    celdas, aristas, ventanas, alphas = [], [], [], []
    oa, ob = gamma.piece_offsets, gamma_t.piece_offsets
    for k in range(min(len(gamma.pieces), len(gamma_t.pieces))):
        clave = _clave_pieza(gamma, k)
        if clave != _clave_pieza(gamma_t, k):
            break
        pa, pb = gamma.pieces[k], gamma_t.pieces[k]
        celdas.append(clave[1] if clave[0] == 'spiral' else None)
        aristas.append(_edge_entrada(gamma, oa[k]) if k > 0 else None)
        ventanas.append(((float(oa[k]), float(oa[k + 1])), (float(ob[k]), float(ob[k + 1]))))
        alphas.append((pa.alpha, pb.alpha) if clave[0] == 'spiral' else None)
    return CommonCellChain(tuple(celdas), tuple(aristas), tuple(ventanas), tuple(alphas))


def c_constant(m, r, r_tilde):
    """
    Constante c(Ω, x, r, r̃) = min{1, m³}(r̃ - r) / (10¹⁰ max{1, 4e^{2r}}).

    Raises:
        DomainError: Si no se cumple m > 0 y 0 < r < r̃ < r + 1
    """
    if not (m > 0.0 and 0.0 < r < r_tilde < r + 1.0):
        raise DomainError(f"Parámetros fuera de rango: m={m}, r={r}, r̃={r_tilde}")
    return min(1.0, m ** 3) * (r_tilde - r) / (1e10 * max(1.0, 4.0 * math.exp(2.0 * r)))


# Ensayos individuales: reciben el generador y devuelven un margen o None

def margen_curv(a, b):
    """|a| + |b| - |a + b| - |a||b|/(2(|a| + |b|))·|a/|a| - b/|b||², sin normalizar."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    izquierda = na + nb - float(np.linalg.norm(a + b))
    derecha = na * nb / (2.0 * (na + nb)) * float(np.sum((a / na - b / nb) ** 2))
    return izquierda - derecha


def _ensayo_curv(gen, dimension):
    return margen_curv(gen.vector(dimension), gen.vector(dimension))


def margen_distcurv(frontera, x, h):
    """2d(x) + |h|²/d(x) - d(x+h) - d(x-h) con d la distancia a la frontera finita."""
    frontera = np.asarray(frontera, dtype=float)

    def d(z):
        return float(np.min(np.hypot(*(frontera - z).T)))

    dx = d(x)
    return 2.0 * dx + float(h @ h) / dx - d(x + h) - d(x - h)


def _ensayo_distcurv(gen):
    frontera = gen.frontera()
    while True:
        x = gen.rng.uniform(-0.25, 1.25, size=2)
        if float(np.min(np.hypot(*(frontera - x).T))) >= 0.05:
            break
    h = gen.vector(2) * gen.escalar(0.0, 0.5)
    return margen_distcurv(frontera, x, h)


def _dominio_y_centro(gen, n_nucleos):
    domain = gen.dominio(n_nucleos)
    return domain, gen.punto_interior(domain)


def _ensayo_quasis(gen, n_nucleos):
    domain, x = _dominio_y_centro(gen, n_nucleos)
    r = gen.escalar(0.05, 1.0 / 3.0)
    bola = trace_ball(domain, x, r, 16)
    relleno = [exp_map(domain, x, gen.angulo(), gen.escalar(0.0, r)) for _ in range(8)]
    puntos = np.vstack([bola.boundary, np.array(relleno), x])
    deltas = domain.delta_many(puntos)
    M, m = float(deltas.max()), float(deltas.min())
    margen = 2.0 - M / m
    for _ in range(8):
        i, j = gen.rng.integers(0, len(puntos), size=2)
        medio = (puntos[i] + puntos[j]) / 2.0
        dm = domain.delta(medio)
        margen = min(margen, (dm - m / 2.0) / m, (2.0 * M - dm) / M)
    return margen


def _ensayo_smallballs(gen, n_nucleos):
    domain, x = _dominio_y_centro(gen, n_nucleos)
    r = RADIO_BOLA_PEQUENA
    bola = trace_ball(domain, x, r, 16)
    frontera = bola.boundary
    M = float(domain.delta_many(frontera).max())
    i, j = gen.rng.choice(len(frontera), size=2, replace=False)
    y, z = frontera[i], frontera[j]
    cota = r - float((y - z) @ (y - z)) / (512.0 * r * M ** 2)
    return cota - qh_distance(domain, (y + z) / 2.0, x)


def _par_cercano(domain, x, phi, r, umbral):
    """Dos disparos desde x con ángulos cercanos y extremos a distancia <= umbral."""
    gamma = shoot(domain, x, (math.cos(phi), math.sin(phi)), r)
    eps = 1e-6
    for _ in range(30):
        gamma_t = shoot(domain, x, (math.cos(phi + eps), math.sin(phi + eps)), r)
        hueco = float(math.hypot(*(gamma.endpoint - gamma_t.endpoint)))
        if hueco <= umbral:
            return gamma, gamma_t, hueco
        eps /= 2.0
    return None


def _orientar(gamma, gamma_t):
    """Ordena el par de modo que el segundo camino salga por la izquierda del primero."""
    if points_left(gamma_t.direction, gamma.direction) == Orientacion.RIGHT:
        return gamma_t, gamma
    return gamma, gamma_t


def _ensayo_angle_divergence(gen, n_nucleos):
    domain, x = _dominio_y_centro(gen, n_nucleos)
    par = _par_cercano(domain, x, gen.angulo(), gen.escalar(0.5, 2.5), UMBRAL_SEPARACION * domain.delta(x))
    if par is None:
        return None
    gamma, gamma_t = _orientar(par[0], par[1])
    cadena = extract_chain(gamma, gamma_t)
    if len(cadena) == 0:
        return None
    return cadena.divergence().margin()


def _maxima_desviacion(gamma, gamma_t, n=1000):
    ts = np.linspace(0.0, min(gamma.total_qh_len, gamma_t.total_qh_len), n)
    return max(float(math.hypot(*(gamma.point(t) - gamma_t.point(t)))) for t in ts)


def _ensayo_divergence_bound(gen, n_nucleos):
    domain, x = _dominio_y_centro(gen, n_nucleos)
    r = gen.escalar(0.2, 2.0)
    par = _par_cercano(domain, x, gen.angulo(), r, UMBRAL_SEPARACION * domain.delta(x))
    if par is None:
        return None
    gamma, gamma_t, hueco = par
    if hueco == 0.0:
        return 0.0
    desviacion = _maxima_desviacion(gamma, gamma_t)
    # Cota de flujo 2e^{2r}|y-z| y cota de Gronwall e^{1.05r}|y-z|, más fina
    flujo = 2.0 * math.exp(2.0 * r) * hueco * (1.0 + 1e-3)
    gronwall = math.exp(1.05 * r) * hueco * (1.0 + 1e-3)
    return min((flujo - desviacion) / flujo, (gronwall - desviacion) / gronwall)


def _ensayo_midpoint_bound(gen, n_nucleos):
    domain, x = _dominio_y_centro(gen, n_nucleos)
    r = gen.escalar(0.2, 2.0)
    par = _par_cercano(domain, x, gen.angulo(), r, UMBRAL_SEPARACION * domain.delta(x))
    if par is None:
        return None
    gamma, gamma_t, hueco = par
    C = 2.0 * math.exp(2.0 * r)
    ts = np.linspace(0.0, r, 400)
    a = np.array([gamma.point(t) for t in ts])
    b = np.array([gamma_t.point(t) for t in ts])
    m = float(min(domain.delta_many(a).min(), domain.delta_many(b).min()))
    if hueco > m / C:
        return None
    cota = r + r * C ** 2 * hueco ** 2 / m ** 2 + 1e-6
    largo = qh_length_of_polyline(domain, (a + b) / 2.0)
    # rC² = 4re^{4r}: la misma cota acota d_Q(x, (y + ỹ)/2)
    medio = (gamma.endpoint + gamma_t.endpoint) / 2.0
    return min(cota - largo, cota - qh_distance(domain, x, medio))


def _ensayo_uniqueness(gen, n_nucleos):
    domain, x = _dominio_y_centro(gen, n_nucleos)
    y = exp_map(domain, x, gen.angulo(), gen.escalar(0.1, 3.0))
    resultado = connect(domain, x, y)
    if resultado.distance > math.pi - 0.05:
        return None
    return 0.0 if resultado.unique else -1.0


def margen_antipodal():
    """Margen del par antipodal del plano perforado: 0 si connect encuentra dos geodésicas de longitud π."""
    domain = build([[0.0, 0.0]])
    resultado = connect(domain, (1.0, 0.0), (-1.0, 0.0))
    ok = not resultado.unique and len(resultado.paths) == 2 and abs(resultado.distance - math.pi) <= 1e-8
    return 0.0 if ok else -1.0


def _ensayo_gehring_palka(gen, n_nucleos):
    domain, x = _dominio_y_centro(gen, n_nucleos)
    r = gen.escalar(0.05, 3.0)
    y = exp_map(domain, x, gen.angulo(), r)
    dx, dy = domain.delta(x), domain.delta(y)
    inferior = r - abs(math.log(dx / dy))
    desplazamiento = (math.expm1(r) * dx - float(math.hypot(*(x - y)))) / dx
    return min(inferior, desplazamiento)


def _ensayo_ball_convexity(gen, n_nucleos):
    domain, x = _dominio_y_centro(gen, n_nucleos)
    r = RADIO_BOLA_PEQUENA
    bola = trace_ball(domain, x, r, 32)
    if not bola.is_convex():
        return -1.0
    frontera = bola.boundary
    margen = math.inf
    for _ in range(3):
        i = int(gen.rng.integers(0, len(frontera)))
        j = (i + len(frontera) // 3 + int(gen.rng.integers(0, len(frontera) // 3))) % len(frontera)
        medio = (frontera[i] + frontera[j]) / 2.0
        margen = min(margen, (r - qh_distance(domain, medio, x)) / r)
    return margen


def _ensayo_boundary_lipschitz(gen, n_nucleos, subdivisiones=8):
    domain, x = _dominio_y_centro(gen, n_nucleos)
    r = gen.escalar(0.1, 1.0)
    umbral = 0.05 * domain.delta(x) * r
    phi = gen.angulo()
    y = exp_map(domain, x, phi, r)
    # Se estrecha el arco de la esfera hasta que la cuerda cumple el umbral
    eps = 0.05
    for _ in range(40):
        z = exp_map(domain, x, phi + eps, r)
        cuerda = float(math.hypot(*(z - y)))
        if 0.0 < cuerda <= umbral:
            break
        eps /= 2.0
    else:
        return None
    arco = [exp_map(domain, x, phi + eps * k / subdivisiones, r) for k in range(subdivisiones + 1)]
    recorrido = Polyline(np.array(arco)).longitud()
    return (2.0 * cuerda - recorrido) / cuerda


def _ensayo_regularity(gen, n_nucleos):
    domain, x = _dominio_y_centro(gen, n_nucleos)
    r = gen.escalar(0.5, 3.0)
    path = shoot(domain, x, gen.direccion(), r)
    ts = np.linspace(0.0, r, 100)
    peor_velocidad = 0.0
    for t in ts:
        punto = path.point(t)
        velocidad = float(np.linalg.norm(path.velocity(t)))
        delta = domain.delta(punto)
        peor_velocidad = max(peor_velocidad, abs(velocidad - delta) / delta)
    tangentes = np.array([path.tangent(t) for t in ts])
    giros = np.abs(np.arctan2(
        tangentes[:-1, 0] * tangentes[1:, 1] - tangentes[:-1, 1] * tangentes[1:, 0],
        np.sum(tangentes[:-1] * tangentes[1:], axis=1),
    ))
    cociente = float(np.max(giros / np.diff(ts)))
    return min(1e-7 - peor_velocidad, 1.0 + 1e-6 - cociente)


def _ensayo_punctured_exactness(gen):
    nucleo = gen.rng.uniform(0.0, 1.0, size=2)
    domain = build([nucleo])
    x = gen.punto_interior(domain)
    y = gen.punto_interior(domain)
    exacta = punctured_distance(nucleo, x, y)
    if exacta == 0.0 or abs(exacta - math.pi) < 1e-6:
        return None
    calculada = qh_distance(domain, x, y)
    return 1e-8 - abs(calculada - exacta) / exacta


def _correr_ensayo(ensayo, semilla, indice, parametros, k):
    gen = ConfiguracionGenerator.para_ensayo(semilla, indice, k)
    try:
        return ensayo(gen, **parametros)
    except InputError as exc:
        # El generador no encontró una configuración válida
        logger.warning("Ensayo %d omitido: %s", k, exc)
        return None
    except (ConvergenceError, GeodesicError, ResolutionError) as exc:
        logger.warning("Ensayo %d (semilla %d, enunciado %d) falla en el motor: %s", k, semilla, indice, exc)
        return -math.inf


def _margenes(statement_id, ensayo, trials, seed, workers, parametros):
    if trials < 1:
        raise InputError("trials debe ser >= 1")
    tarea = partial(_correr_ensayo, ensayo, seed, ENUNCIADOS[statement_id], parametros)
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ejecutor:
            return list(ejecutor.map(tarea, range(trials), chunksize=max(1, trials // (4 * workers))))
    return [tarea(k) for k in range(trials)]


def _verificar(statement_id, ensayo, trials, seed, tolerancia, workers=None, extra=(), **parametros):
    margenes = _margenes(statement_id, ensayo, trials, seed, workers, parametros)
    margenes.extend(extra)
    informe = combinar(statement_id, tolerancia, seed, dict(parametros, trials=trials), margenes)
    logger.info("%s: %d ensayos, %d fallos, peor margen %.3g", statement_id, informe.trials,
                informe.failures, informe.worst_margin)
    return informe


def check_prop_curv(trials, dimension=2, seed=0, workers=None):
    """|a| + |b| - |a+b| >= |a||b|/(2(|a|+|b|))·|a/|a| - b/|b||² para vectores no nulos."""
    if dimension not in (2, 3, 8):
        raise DomainError("La dimensión debe ser 2, 3 u 8")
    return _verificar('curv', _ensayo_curv, trials, seed, 1e-12, workers, dimension=dimension)


def check_prop_distcurv(trials, seed=0, workers=None):
    """d(x+h) + d(x-h) <= 2d(x) + |h|²/d(x) para la distancia a una frontera finita."""
    return _verificar('distcurv', _ensayo_distcurv, trials, seed, 1e-12, workers)


def check_prop_quasis(trials, seed=0, workers=None, n_nucleos=None):
    """En bolas de radio <= 1/3: sup δ / inf δ <= 2 y m/2 <= δ(punto medio) <= 2M."""
    return _verificar('quasis', _ensayo_quasis, trials, seed, 1e-9, workers, n_nucleos=n_nucleos)


def check_smallballs(trials, seed=0, workers=None, n_nucleos=None):
    """d_Q(punto medio, x) <= r - |y-z|²/(512 r M²) en bolas de radio 0.009."""
    return _verificar('smallballs', _ensayo_smallballs, trials, seed, EPS_NUMERICO, workers, n_nucleos=n_nucleos)


def check_angle_divergence(trials, seed=0, workers=None, n_nucleos=None):
    """La divergencia angular de dos disparos cercanos conserva el signo y no decrece en módulo."""
    return _verificar('angle_divergence', _ensayo_angle_divergence, trials, seed, 1e-9, workers,
                      n_nucleos=n_nucleos)


def check_divergence_bound(trials, seed=0, workers=None, n_nucleos=None):
    """max_t |γ(t) - γ̃(t)| <= e^{1.05r}|y - z| <= 2e^{2r}|y - z| para disparos cercanos."""
    return _verificar('divergence_bound', _ensayo_divergence_bound, trials, seed, 0.0, workers,
                      n_nucleos=n_nucleos)


def check_midpoint_bound(trials, seed=0, workers=None, n_nucleos=None):
    """
    La curva media de dos geodésicas cercanas mide como mucho r + rC²|y - ỹ|²/m².

    Con C = 2e^{2r} la cota es r + 4re^{4r}|y - ỹ|²/m², que también debe
    acotar d_Q(x, (y + ỹ)/2).
    """
    return _verificar('midpoint_bound', _ensayo_midpoint_bound, trials, seed, 0.0, workers,
                      n_nucleos=n_nucleos)


def check_uniqueness_below_pi(trials, seed=0, workers=None, n_nucleos=None):
    """
    connect devuelve una única geodésica cuando d_Q <= π - 0.05.

    Se añade como ensayo extra el par antipodal del plano perforado, que
    debe dar exactamente dos geodésicas.
    """
    return _verificar('uniqueness_below_pi', _ensayo_uniqueness, trials, seed, 0.0, workers,
                      extra=(margen_antipodal(),), n_nucleos=n_nucleos)


def check_gehring_palka(trials, seed=0, workers=None, n_nucleos=None):
    """r >= |log(δ(x)/δ(y))| y |x - y| <= (e^r - 1)δ(x) para extremos de disparos de longitud r."""
    return _verificar('gehring_palka', _ensayo_gehring_palka, trials, seed, 1e-9, workers, n_nucleos=n_nucleos)


def check_ball_convexity(trials, seed=0, workers=None, n_nucleos=None):
    """Las bolas de radio 0.009 son convexas y contienen los puntos medios de su frontera."""
    return _verificar('ball_convexity', _ensayo_ball_convexity, trials, seed, 1e-8, workers,
                      n_nucleos=n_nucleos)


def check_boundary_lipschitz(trials, seed=0, workers=None, n_nucleos=None):
    """Entre dos puntos cercanos de la esfera d_Q = r, el arco muestreado mide <= 2|y - z|."""
    return _verificar('boundary_lipschitz', _ensayo_boundary_lipschitz, trials, seed, 1e-9, workers,
                      n_nucleos=n_nucleos)


def check_regularity(trials, seed=0, workers=None, n_nucleos=None):
    """Velocidad canónica |γ'| = δ(γ) y tangente unitaria 1-Lipschitz."""
    return _verificar('regularity', _ensayo_regularity, trials, seed, 0.0, workers, n_nucleos=n_nucleos)


def check_punctured_exactness(trials, seed=0, workers=None):
    """qh_distance coincide con la fórmula cerrada del plano perforado."""
    return _verificar('punctured_exactness', _ensayo_punctured_exactness, trials, seed, 0.0, workers)


SUITES = {
    'algebraic': ('curv', 'distcurv'),
    'balls': ('quasis', 'smallballs', 'ball_convexity', 'boundary_lipschitz'),
    'divergence': ('angle_divergence', 'divergence_bound', 'midpoint_bound'),
    'uniqueness': ('uniqueness_below_pi',),
    'engine': ('punctured_exactness', 'regularity', 'gehring_palka'),
}

CHECKS = {
    'curv': check_prop_curv,
    'distcurv': check_prop_distcurv,
    'quasis': check_prop_quasis,
    'smallballs': check_smallballs,
    'angle_divergence': check_angle_divergence,
    'divergence_bound': check_divergence_bound,
    'midpoint_bound': check_midpoint_bound,
    'uniqueness_below_pi': check_uniqueness_below_pi,
    'gehring_palka': check_gehring_palka,
    'ball_convexity': check_ball_convexity,
    'boundary_lipschitz': check_boundary_lipschitz,
    'regularity': check_regularity,
    'punctured_exactness': check_punctured_exactness,
}


def resolver_suites(nombres):
    """
    Enunciados de una lista de suites (o de enunciados sueltos), sin repetir.

    Raises:
        InputError: Si algún nombre no es una suite ni un enunciado
    """
    enunciados = []
    for nombre in nombres:
        if nombre == 'all':
            grupo = tuple(e for suite in SUITES.values() for e in suite)
        elif nombre in SUITES:
            grupo = SUITES[nombre]
        elif nombre in CHECKS:
            grupo = (nombre,)
        else:
            raise InputError(f"Suite desconocida: '{nombre}'")
        enunciados.extend(e for e in grupo if e not in enunciados)
    return enunciados


def run_suite(names, trials, seed, workers=None):
    """
    Ejecuta las suites indicadas.

    Args:
        names: Nombres de suites ('algebraic', 'balls', 'divergence',
            'uniqueness', 'engine', 'all') o de enunciados
        trials: Ensayos por enunciado
        seed: Semilla maestra
        workers: Procesos para repartir los ensayos

    Returns:
        Lista de VerificationReport en orden determinista
    """
    return [CHECKS[nombre](trials, seed=seed, workers=workers) for nombre in resolver_suites(names)]
