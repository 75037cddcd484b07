"""
Subcomando verify: ejecuta suites del laboratorio de teoremas.
"""

import os

from commands.base import FALLO_NUMERICO, OK, ComandoBase
from utils.evaluador import escribir_csv, generar_reporte
from utils.teoremas import resolver_suites, run_suite


class VerifyCommand(ComandoBase):
    """
    Imprime la tabla resumen de las suites elegidas. Con --output (un
    directorio) escribe <statement_id>.json por enunciado y summary.csv.

    El código de salida es 0 si ningún enunciado tiene fallos.
    """

    def __init__(self, config, stdout=None):
        super().__init__(config, "Verificación de enunciados", "verify", stdout)

    def ejecutar(self):
        # Nombres inválidos fallan antes de empezar a calcular
        resolver_suites(self.config.suite)
        informes = run_suite(self.config.suite, self.config.trials, self.config.seed, workers=self.config.workers)
        self.escribir(generar_reporte(informes))

        if self.config.output:
            os.makedirs(self.config.output, exist_ok=True)
            for informe in informes:
                ruta = os.path.join(self.config.output, f"{informe.statement_id}.json")
                with open(ruta, 'w', encoding='utf-8', newline='\n') as fichero:
                    fichero.write(informe.to_json() + '\n')
            escribir_csv(informes, os.path.join(self.config.output, 'summary.csv'))

        return OK if all(informe.passed for informe in informes) else FALLO_NUMERICO
