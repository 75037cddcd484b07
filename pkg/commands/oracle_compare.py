"""
Subcomando oracle-compare: escalera de refinamiento del oráculo frente al motor.
"""

from commands.base import OK, ComandoBase
from utils.config import LIMITES
from utils.grafo_uniones import cota_superior
from utils.motor_geodesico import qh_distance
from utils.oraculo import paso_para_nodos, refinement_ladder, write_ladder_csv

CABECERA = ['spacing', 'distance', 'empirical_order', 'engine_distance']


class OracleCompareCommand(ComandoBase):
    """
    Imprime la escalera (paso, distancia del oráculo, orden empírico) junto
    a la distancia del motor. Sin --spacings los pasos empiezan en el de
    una malla de ~4·10⁴ nodos y se dividen a la mitad en cada peldaño.
    """

    def __init__(self, config, stdout=None):
        super().__init__(config, "Motor frente a oráculo", "oracle-compare", stdout)

    def pasos(self, x, y):
        if self.config.spacings:
            return self.config.spacings
        h = paso_para_nodos(self.domain, x, y, LIMITES['nodos_oraculo_semilla'], cota_superior(self.domain, x, y))
        return tuple(h / 2 ** k for k in range(LIMITES['peldanos_escalera']))

    def ejecutar(self):
        self.cargar_dominio()
        x, y = self.punto('x'), self.punto('y')
        motor = qh_distance(self.domain, x, y)
        filas = refinement_ladder(self.domain, x, y, self.pasos(x, y))
        ruta = self.ruta_salida('.csv')
        if ruta:
            write_ladder_csv(filas, ruta, extra=motor)
        self.escribir_csv(CABECERA, [(f"{h:.6g}", f"{d:.9f}", f"{p:.3f}", f"{motor:.9f}") for h, d, p in filas])
        return OK
