from fairst.fairness.groups import build_labelings, city_threshold, discretize_groups
from fairst.fairness.losses import composite_loss, em_loss, if_loss, pairwise_loss, rf_loss
from fairst.fairness.metrics import ifg, rfg

__all__ = ["build_labelings", "city_threshold", "discretize_groups", "composite_loss", "em_loss",
           "if_loss", "pairwise_loss", "rf_loss", "ifg", "rfg"]
