"""
Tolerancias numéricas y límites del motor.

Todos los valores están en unidades del dominio (coordenadas del plano) o en
radianes. Los módulos leen de aquí sus valores por defecto; las funciones
públicas aceptan además un argumento explícito cuando tiene sentido.
"""

import math

# Tolerancias numéricas
TOLERANCIAS = {
    # Geometría básica
    'pr_frontera': 1e-12,             # Valores a 1e-12 de -π se llevan a π
    'curvatura': 1e-9,                # Radianes por paso en curving_sign
    'vueltas': 1e-9,                  # Distancia mínima punto-poligonal

    # Diagrama de Voronoi
    'separacion_nucleos': 1e-9,       # Separación mínima entre núcleos
    'localizar': 1e-9,                # Tolerancia por defecto de locate
    'espejo': 1e-9,                   # Reflexión de núcleos (relativa)

    # Espirales y arcos rectos
    'antipodal': 1e-12,               # Detección de ángulo exactamente π
    'raiz_linea': 1e-12,              # |f(t)| relativo tras refinar raíces
    'paso_angular': math.pi / 64,     # Paso angular del muestreo de raíces
    'paso_radial': 1.0 / 16,          # Paso máximo en t para espirales casi radiales
    'cuadratura_rel': 1e-8,           # Error relativo de la cuadratura de 1/δ
    'singularidad': 1e-12,            # Distancia a un núcleo considerada contacto

    # Motor geodésico
    'tangencia': 1e-9,                # |τ × d| por debajo: tangente a la arista
    'paso_candidato': 1e-6,           # Paso de prueba de los candidatos
    'roce': 1e-10,                    # Margen relativo de contacto tangencial
    'residuo_conexion': 1e-8,         # |extremo - y| relativo a δ(y)
    'agrupamiento': 1e-6,             # Soluciones (φ, r) más cercanas: iguales
    'minimalidad': 1e-6,              # Longitud relativa admitida sobre el mínimo
    'union_c0': 1e-9,                 # Continuidad de extremos entre piezas
    'union_c1': 1e-7,                 # Continuidad de tangentes entre piezas

    # Línea de órdenes
    'monotonia': 1e-3,                # Descenso relativo admitido entre niveles de approximate
}

# Límites de trabajo
LIMITES = {
    'max_piezas': 10_000,             # Piezas por geodésica
    'max_nodos_oraculo': 10_000_000,  # Nodos de la malla del oráculo
    'angulos_disparo': 64,            # Arranques múltiples de connect
    'candidatos_refinar': 8,          # Mínimos locales refinados por connect
    'max_evaluaciones': 200,          # Evaluaciones por refinamiento
    'min_muestras_bola': 16,          # Muestras mínimas en trace_ball
    'max_muestras_bola': 4096,        # Tope del refinamiento adaptativo
    'muestras_arista': 24,            # Muestras por arista del grafo de uniones
    'nodos_oraculo_semilla': 40_000,  # Malla gruesa usada como semilla
    'nodos_oraculo_cli': 250_000,     # Malla del oráculo en distance y oracle-compare
    'peldanos_escalera': 4,           # Pasos de la escalera por defecto
    'iter_pulido': 5000,              # Iteraciones L-BFGS al pulir el camino del oráculo
}

# Generador de dominios aleatorios para el laboratorio de teoremas
GENERADOR = {
    'n_min': 3,                       # Núcleos mínimos
    'n_max': 50,                      # Núcleos máximos
    'separacion_min': 0.02,           # Separación mínima entre núcleos
    'delta_min': 0.05,                # δ(x) mínimo de los centros
    'max_intentos': 10_000,           # Rechazos antes de rendirse
}
