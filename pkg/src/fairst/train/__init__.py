from fairst.train.trainer import batch_loss, demand_scale_of, train_model

__all__ = ["batch_loss", "demand_scale_of", "train_model"]
