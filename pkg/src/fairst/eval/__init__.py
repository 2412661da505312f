from fairst.eval.heatmap import export_heatmap, read_heatmap_csv, read_pgm
from fairst.eval.metrics import evaluate, ground_truth_report, mae, per_capita, spearman

__all__ = ["export_heatmap", "read_heatmap_csv", "read_pgm", "evaluate", "ground_truth_report",
           "mae", "per_capita", "spearman"]
