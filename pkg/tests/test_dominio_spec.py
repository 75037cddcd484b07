"""Pruebas de la lectura de dominios y de la configuración de ejecución."""

import argparse
import json

import numpy as np
import pytest

from utils.dominio_spec import DomainSpec, RunConfig, parse_point
from utils.errores import InputError

CUADRADO = {'polygon': [[0, 0], [1, 0], [1, 1], [0, 1]], 'samples_per_unit': 1}


class TestDomainSpec:

    def test_frontera(self):
        spec = DomainSpec.from_json('{"boundary": [[0, 0], [1, 0]]}')
        assert not spec.is_polygon
        np.testing.assert_array_equal(spec.nuclei(), [[0.0, 0.0], [1.0, 0.0]])
        assert spec.domain().n == 2

    def test_poligono_nivel_cero(self):
        spec = DomainSpec.from_dict(CUADRADO)
        np.testing.assert_allclose(spec.nuclei(0), [[0, 0], [1, 0], [1, 1], [0, 1]])

    def test_niveles_anidados(self):
        spec = DomainSpec.from_dict(CUADRADO)
        grueso, fino = spec.nuclei(1), spec.nuclei(2)
        assert len(grueso) == 8 and len(fino) == 16
        for p in grueso:
            assert np.min(np.hypot(*(fino - p).T)) < 1e-12

    def test_cierre_repetido(self):
        spec = DomainSpec.from_dict({'polygon': [[0, 0], [2, 0], [0, 2], [0, 0]], 'samples_per_unit': 2})
        assert len(spec.polygon) == 3
        # Lados 2, 2√2 y 2 con dos muestras por unidad
        assert len(spec.nuclei(0)) == 4 + 6 + 4

    def test_contiene(self):
        poligono = DomainSpec.from_dict(CUADRADO)
        assert poligono.contains((0.5, 0.5))
        assert not poligono.contains((1.5, 0.5))
        frontera = DomainSpec.from_dict({'boundary': [[0, 0]]})
        assert frontera.contains((0.5, 0.5))
        assert not frontera.contains((0.0, 0.0))
        with pytest.raises(InputError):
            poligono.require_inside((2.0, 2.0), 'x')

    @pytest.mark.parametrize("texto", [
        '{"boundary": [[0, 0], [1',
        '[1, 2, 3]',
        '{"nuclei": [[0, 0]]}',
        '{"boundary": [[0, 0, 1]]}',
        '{"boundary": []}',
        '{"polygon": [[0, 0], [1, 1], [1, 0], [0, 1]]}',
        '{"polygon": [[0, 0], [1, 0], [2, 0]]}',
        '{"polygon": [[0, 0], [1, 0], [0, 1]], "samples_per_unit": 0}',
        '{"polygon": [[0, 0], [1, 0], [0, 1]], "samples_per_unit": "muchas"}',
    ])
    def test_entrada_invalida(self, texto):
        with pytest.raises(InputError):
            DomainSpec.from_json(texto)

    def test_fichero_inexistente(self, tmp_path):
        with pytest.raises(InputError):
            DomainSpec.load(tmp_path / 'no_existe.json')

    def test_nivel_negativo(self):
        with pytest.raises(InputError):
            DomainSpec.from_dict(CUADRADO).nuclei(-1)


class TestParsePoint:

    def test_valido(self):
        np.testing.assert_array_equal(parse_point('1.5,-2'), [1.5, -2.0])

    @pytest.mark.parametrize("texto", ['1', '1,2,3', 'a,b', 'nan,0'])
    def test_invalido(self, texto):
        with pytest.raises(InputError):
            parse_point(texto)


class TestRunConfig:

    def _args(self, **valores):
        base = dict(command='distance', input=None, output=None, tol=0.02, seed=None, trials=100, samples=64,
                    workers=None, png=None, suite=None, x=None, y=None, r=None, phi=None, levels=None,
                    spacings=None)
        base.update(valores)
        return argparse.Namespace(**base)

    def test_desde_argumentos(self):
        config = RunConfig.from_args(self._args(x='1,0', y='0,1', suite=['algebraic']))
        np.testing.assert_array_equal(config.x, [1.0, 0.0])
        assert config.suite == ('algebraic',)
        assert config.require('x', 'y')[1].tolist() == [0.0, 1.0]

    def test_suite_por_defecto(self):
        assert RunConfig.from_args(self._args()).suite == ('all',)

    @pytest.mark.parametrize("valores", [
        {'tol': 0.0},
        {'trials': 0},
        {'workers': 0},
        {'command': 'verify'},
        {'spacings': [0.1, -0.05]},
    ])
    def test_invalida(self, valores):
        with pytest.raises(InputError):
            RunConfig.from_args(self._args(**valores))

    def test_falta_un_valor(self):
        with pytest.raises(InputError, match='--r'):
            RunConfig.from_args(self._args()).require('r')

    def test_falta_la_entrada(self):
        with pytest.raises(InputError):
            RunConfig.from_args(self._args()).load_spec()

    def test_carga(self, tmp_path):
        ruta = tmp_path / 'dominio.json'
        ruta.write_text(json.dumps(CUADRADO))
        assert RunConfig.from_args(self._args(input=str(ruta))).load_spec().is_polygon
