from dataclasses import dataclass, field

from fairst.models.GapReport import GapReport

HEADER = ("metric", "attribute", "value", "p_value")
SIGNIFICANCE = 0.05


@dataclass(frozen=True)
class AttributeReport:
    rfg: float
    ifg: float
    rho: float
    p_value: float

    @property
    def significant(self):
        return self.p_value < SIGNIFICANCE


@dataclass
class EvalReport:
    mae: float
    attributes: dict = field(default_factory=dict)
    source: str = "prediction"

    def rows(self):
        yield "MAE", "", self.mae, None
        for name in sorted(self.attributes):
            item = self.attributes[name]
            yield "RFG", name, item.rfg, None
            yield "IFG", name, item.ifg, None
            yield "spearman_rho", name, item.rho, item.p_value

    def gap_report(self):
        return GapReport({name: {"RFG": a.rfg, "IFG": a.ifg} for name, a in self.attributes.items()})

    def serialize(self):
        return {
            "source": self.source,
            "mae": self.mae,
            "attributes": {
                name: {"rfg": a.rfg, "ifg": a.ifg, "rho": a.rho, "p_value": a.p_value,
                       "significant": a.significant}
                for name, a in self.attributes.items()
            },
        }
