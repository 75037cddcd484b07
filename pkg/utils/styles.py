"""
Colores y dimensiones de las figuras SVG y PNG.
"""

# Paleta de colores por capa
COLORS = {
    # Fondo
    'background': '#ffffff',          # Blanco

    # Dominio
    'nucleus': '#1e2a38',             # Casi negro azulado
    'edge': '#98c1d9',                # Azul claro
    'polygon': '#a0aec0',             # Gris claro (polígono original)

    # Bolas y geodésicas
    'ball': '#ee6c4d',                # Naranja principal
    'ball_fill': '#fbd38d',           # Relleno suave de la bola
    'geodesic': '#3d5a80',            # Azul medio
    'geodesic_alt': '#48bb78',        # Segunda geodésica (no unicidad)
    'center': '#c9573d',              # Centro de la bola
    'flagged': '#f56565',             # Sucesos marcados (esquinas, contactos ambiguos)
}

# Dimensiones
DIMENSIONS = {
    'svg_scale': 1000.0,              # Unidades SVG por unidad del dominio
    'svg_decimals': 3,                # Decimales de las coordenadas
    'svg_margin': 0.1,                # Margen relativo alrededor de la figura
    'nucleus_radius': 0.004,          # En unidades del dominio
    'marker_radius': 0.006,           # Centro de bola y extremos
    'stroke_edge': 1.0,               # Grosor (unidades SVG)
    'stroke_ball': 2.0,
    'stroke_geodesic': 1.5,
    'png_size': (7, 7),               # Pulgadas
    'png_dpi': 120,
    'view_margin': 0.25,              # Ventana alrededor de la figura (fracción)
}
