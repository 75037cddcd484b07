"""
Jerarquía de excepciones del motor cuasihiperbólico.

Las subclases heredan también de la excepción estándar más cercana
(ValueError, RuntimeError, LookupError) para que el código que ya captura
esas excepciones siga funcionando.
"""


class QuasihyperbolicError(Exception):
    """Raíz de todos los errores del paquete."""


class DomainError(QuasihyperbolicError, ValueError):
    """Entrada fuera del dominio de una operación (punto no finito, vector nulo, punto sobre un núcleo...)."""


class InputError(QuasihyperbolicError, ValueError):
    """Datos de entrada mal formados: frontera vacía o duplicada, JSON inválido, polígono no simple."""


class ParameterError(QuasihyperbolicError, ValueError):
    """Parámetro de curva fuera de su rango."""


class AmbiguousPositionError(QuasihyperbolicError, ValueError):
    """El punto está demasiado cerca de la poligonal para decidir su número de vueltas."""


class InsufficientDataError(QuasihyperbolicError, ValueError):
    """No hay suficientes muestras para clasificar."""


class SingularityError(QuasihyperbolicError, ValueError):
    """La curva toca un núcleo, donde la densidad 1/δ no es integrable."""


class AdjacencyError(QuasihyperbolicError, LookupError):
    """Se pidió el vecino de una arista desde una celda que no la comparte."""


class ResolutionError(QuasihyperbolicError, ValueError):
    """La malla del oráculo no puede resolver los extremos o es demasiado grande."""


class GeodesicError(QuasihyperbolicError, RuntimeError):
    """La integración de una geodésica superó el número máximo de piezas."""


class ConvergenceError(QuasihyperbolicError, RuntimeError):
    """
    El problema de dos puntos no convergió.

    Args:
        mensaje: Descripción del fallo
        mejor_residuo: Menor distancia euclídea alcanzada al objetivo
    """

    def __init__(self, mensaje, mejor_residuo=float('inf')):
        super().__init__(mensaje)
        self.mejor_residuo = mejor_residuo
