from dataclasses import dataclass, field

HEADER = ("attribute", "metric", "value")


@dataclass
class GapReport:
    # atributo -> {"RFG": valor, "IFG": valor}
    gaps: dict = field(default_factory=dict)

    def rows(self):
        for attribute in sorted(self.gaps):
            for metric in ("RFG", "IFG"):
                if metric in self.gaps[attribute]:
                    yield attribute, metric, self.gaps[attribute][metric]

    def serialize(self):
        return {k: dict(v) for k, v in self.gaps.items()}
