import logging
from dataclasses import dataclass, field

import numpy as np

from fairst.ingest.geojson import feature_error, read_feature_collection
from fairst.ingest.geometry import area, polygon_cell_fractions, project_ring, validate_polygon
from fairst.models.DemographicField import DemographicField
from fairst.utils import InvalidInputError

logger = logging.getLogger(__name__)

ADV_SUFFIX = "_adv_frac"


@dataclass
class DemographicUnit:
    """A census-like polygon: one or more lat/lon rings sharing a population."""

    rings: list
    population: float
    fractions: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.population < 0:
            raise InvalidInputError(f"Población negativa: {self.population}")
        for name, value in self.fractions.items():
            if not 0.0 <= value <= 1.0:
                raise InvalidInputError(f"Fracción {name}={value} fuera de [0, 1]")


def _polygons(geometry):
    kind = geometry.get("type")
    if kind == "Polygon":
        return [geometry["coordinates"]]
    if kind == "MultiPolygon":
        return geometry["coordinates"]
    raise ValueError(f"geometría no soportada {kind}")


def read_units(path):
    """Read a GeoJSON FeatureCollection of Polygon/MultiPolygon units.

    Properties: `population` and `<attr>_adv_frac` per sensitive attribute.
    """
    units = []
    attributes = None
    for index, (feature, line) in enumerate(read_feature_collection(path, "unidades demográficas")):
        if not isinstance(feature, dict):
            raise feature_error(path, index, line, "feature no es un objeto")
        props = feature.get("properties") or {}
        geometry = feature.get("geometry") or {}
        if "population" not in props:
            raise feature_error(path, index, line, "falta 'population'")
        try:
            fractions = {k[:-len(ADV_SUFFIX)]: float(v) for k, v in props.items() if k.endswith(ADV_SUFFIX)}
            population = float(props["population"])
        except (TypeError, ValueError) as exc:
            raise feature_error(path, index, line, f"propiedad no numérica ({exc})")
        if attributes is None:
            attributes = set(fractions)
        elif set(fractions) != attributes:
            raise feature_error(path, index, line, f"atributos distintos: {sorted(fractions)}")

        try:
            rings = []
            for polygon in _polygons(geometry):
                if len(polygon) > 1:
                    logger.warning(f"{path}, línea {line}: se ignoran {len(polygon) - 1} huecos")
                # GeoJSON guarda [lon, lat]
                rings.append([(float(lat), float(lon)) for lon, lat in polygon[0]])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise feature_error(path, index, line, f"geometría mal formada ({exc})")
        try:
            units.append(DemographicUnit(rings, population, fractions))
        except InvalidInputError as exc:
            raise feature_error(path, index, line, exc.message)

    logger.info(f"{len(units)} unidades demográficas leídas de {path}")
    return units


def allocate_population(units, grid):
    """Unnormalized per-cell population and advantaged head counts per attribute."""
    names = sorted({name for unit in units for name in unit.fractions})
    population = np.zeros(grid.shape)
    advantaged = {name: np.zeros(grid.shape) for name in names}

    for unit in units:
        for name in names:
            if name not in unit.fractions:
                raise InvalidInputError(f"Unidad sin fracción para el atributo {name}")
        projected = [project_ring(grid, ring) for ring in unit.rings]
        for points in projected:
            validate_polygon(points)
        total_area = sum(area(points) for points in projected)
        for points in projected:
            share = unit.population * area(points) / total_area
            allocated = share * polygon_cell_fractions(grid, points)
            population += allocated
            for name in names:
                advantaged[name] += allocated * unit.fractions[name]
    return population, advantaged


def allocate_demographics(units, grid):
    """Area-proportional allocation of unit populations and attribute fractions to cells."""
    population, advantaged = allocate_population(units, grid)
    total = population.sum()
    if total <= 0:
        raise InvalidInputError("Población total cero dentro de la grid")

    supplied = sum(unit.population for unit in units)
    if total < supplied * (1 - 1e-6):
        logger.warning(f"Población fuera de la bbox: {supplied - total:.1f} de {supplied:.1f}")

    with np.errstate(invalid="ignore", divide="ignore"):
        attributes = {
            name: np.clip(np.where(population > 0, counts / population, 0.0), 0.0, 1.0)
            for name, counts in advantaged.items()
        }
    share = population / total
    # renormaliza el error de redondeo para que sume 1
    share = share / share.sum()
    logger.info(f"Población asignada a {int(np.count_nonzero(population))} celdas ({total:.1f} habitantes)")
    return DemographicField(share, attributes)
