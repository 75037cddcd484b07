"""
Clase base de los subcomandos de la línea de órdenes.
"""

import csv
import json
import logging
import os
import sys

from utils.dominio_spec import DomainSpec
from utils.graph_helper import vista_previa

logger = logging.getLogger(__name__)

OK = 0
FALLO_NUMERICO = 2
ERROR_ENTRADA = 3


class ComandoBase:
    """
    Base de un subcomando: carga del dominio, salida por stdout y ficheros.

    Las subclases implementan `ejecutar()` y devuelven el código de salida.
    """

    def __init__(self, config, titulo, comando_id, stdout=None):
        """
        Args:
            config: RunConfig de la ejecución
            titulo: Título del subcomando
            comando_id: Identificador (distance, ball, ...)
            stdout: Flujo de salida (por defecto sys.stdout)
        """
        self.config = config
        self.titulo = titulo
        self.comando_id = comando_id
        self.stdout = stdout or sys.stdout
        self.spec = None
        self.domain = None

    def cargar_dominio(self, level=0):
        """Lee el JSON de --input y construye el dominio del nivel dado."""
        self.spec = self.config.load_spec()
        self.domain = self.spec.domain(level)
        logger.info("%s: dominio con %d núcleos", self.comando_id, self.domain.n)
        return self.domain

    def punto(self, nombre):
        """Punto obligatorio (--x, --y) comprobado contra el dominio."""
        z = self.config.require(nombre)
        spec = self.spec or DomainSpec(boundary=self.domain.boundary)
        return spec.require_inside(z, nombre)

    def escribir(self, texto=''):
        print(texto, file=self.stdout)

    def escribir_json(self, datos, ruta=None):
        """JSON con claves ordenadas, en stdout o en `ruta`."""
        texto = json.dumps(datos, sort_keys=True, indent=2)
        if ruta is None:
            self.escribir(texto)
            return None
        with open(ruta, 'w', encoding='utf-8', newline='\n') as fichero:
            fichero.write(texto + '\n')
        logger.info("JSON escrito en %s", ruta)
        return ruta

    def escribir_csv(self, cabecera, filas, ruta=None):
        if ruta is None:
            escritor = csv.writer(self.stdout, lineterminator='\n')
            escritor.writerow(cabecera)
            escritor.writerows(filas)
            return None
        with open(ruta, 'w', newline='') as fichero:
            escritor = csv.writer(fichero, lineterminator='\n')
            escritor.writerow(cabecera)
            escritor.writerows(filas)
        logger.info("CSV escrito en %s", ruta)
        return ruta

    def ruta_salida(self, extension):
        """
        Ruta de salida con la extensión dada, a partir de --output.

        Si --output ya tiene esa extensión se usa tal cual; si no, se toma
        como prefijo.
        """
        if self.config.output is None:
            return None
        base, ext = os.path.splitext(self.config.output)
        if ext == extension:
            return self.config.output
        return (base if ext in ('.json', '.csv', '.svg', '.png') else self.config.output) + extension

    def vista_previa(self, **elementos):
        if self.config.png:
            vista_previa(self.config.png, self.domain, titulo=self.titulo, **elementos)

    def ejecutar(self):
        raise NotImplementedError
