from dataclasses import dataclass, field

from fairst.utils import InvalidInputError

KINDS = ("RF", "IF", "EM", "PW", "none")


@dataclass(frozen=True)
class AttributeSpec:
    weight: float = 1.0
    # None = umbral de la ciudad (media ponderada por población)
    threshold: float = None

    def serialize(self):
        return {"weight": self.weight, "threshold": self.threshold}


@dataclass(frozen=True)
class FairnessConfig:
    kind: str = "none"
    lam: float = 0.0
    attributes: dict = field(default_factory=dict)
    p_min: float = 1e-9
    y_min: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"Regularizador desconocido: {self.kind} (opciones: {', '.join(KINDS)})")
        if self.lam < 0:
            raise InvalidInputError(f"lambda debe ser >= 0, recibió {self.lam}")
        if self.p_min <= 0:
            raise InvalidInputError("p_min debe ser > 0")
        if self.y_min <= 0:
            raise InvalidInputError("y_min debe ser > 0")
        for name, spec in self.attributes.items():
            if spec.weight < 0:
                raise InvalidInputError(f"Peso negativo para el atributo {name}")

    @property
    def monitored(self):
        """A regularizer and attributes are set; the term is computed even at λ = 0."""
        return self.kind != "none" and bool(self.attributes)

    @property
    def active(self):
        return self.monitored and self.lam > 0

    def with_lambda(self, lam):
        return FairnessConfig(self.kind, float(lam), dict(self.attributes), self.p_min, self.y_min)

    def serialize(self):
        return {
            "kind": self.kind,
            "lambda": self.lam,
            "attributes": {k: v.serialize() for k, v in self.attributes.items()},
            "p_min": self.p_min,
            "y_min": self.y_min,
        }
