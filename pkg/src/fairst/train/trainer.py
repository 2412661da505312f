import logging
import os
import time

import numpy as np

from fairst.database.store import save_model
from fairst.fairness.losses import composite_loss
from fairst.ingest.slices import stack_slices
from fairst.models.AdamState import AdamState
from fairst.models.ModelParams import ModelParams
from fairst.models.TrainLog import EpochRecord, StepRecord, TrainLog
from fairst.network.fairst import bind, forward_demand, init_params
from fairst.tensor.engine import Tensor, absolute, backward, parameter
from fairst.tensor.optim import adam_step, lr_at
from fairst.utils import InvalidInputError, NumericError

logger = logging.getLogger(__name__)


def demand_scale_of(slices):
    """Largest demand seen by the training slices; 1 when there is none."""
    peak = max(max(float(s.history.max()), float(s.target.max())) for s in slices)
    return peak if peak > 0 else 1.0


def batch_loss(batch, params, fairness, field, labelings, features=None, demand_scale=1.0):
    """L = mean |ŷ - y| + λ · mean over the batch of the composite fairness loss.

    `params` is ModelParams or a (weights, arch) pair of bound Tensors.
    Returns the loss Tensor and a dict with acc_loss, fair_loss and lam.
    """
    if not batch:
        raise InvalidInputError("Batch vacío")
    if isinstance(params, ModelParams):
        weights, arch = bind(params), params.arch
    else:
        weights, arch = params
    histories, targets, series = stack_slices(batch)
    if targets.shape[1:] != (arch.rows, arch.cols) or histories.shape[1] != arch.window:
        raise InvalidInputError(f"Slices de forma {histories.shape[1:]} para una red {arch.window}x{arch.rows}x{arch.cols}")

    pred = forward_demand(weights, arch, histories, series if arch.has_1d else None, features, demand_scale)
    acc = absolute(pred - targets).mean()
    fair = Tensor(np.zeros(()))
    if fairness.monitored:
        fair = composite_loss(pred, targets, fairness, field, labelings).mean()
    loss = acc + fair * fairness.lam if fairness.active else acc
    return loss, {"acc_loss": acc.item(), "fair_loss": fair.item(), "lam": fairness.lam if fairness.active else 0.0}


def train_model(slices, config, field, labelings, arch, fairness, features=None,
                demand_scale=None, checkpoint_dir=None, params=None):
    """Adam on shuffled mini-batches for a fixed number of epochs."""
    if not slices:
        raise InvalidInputError("No hay slices de entrenamiento")
    if demand_scale is None:
        demand_scale = demand_scale_of(slices)
    rng = np.random.default_rng(config.seed)
    params = params if params is not None else init_params(arch, config.seed)
    tensors = dict(params.tensors)
    state = AdamState()
    log = TrainLog()
    step = 0
    logger.info(f"Entrenando {len(slices)} slices, {config.epochs} épocas, "
                f"regularizador {fairness.kind} λ={fairness.lam}")

    for epoch in range(1, config.epochs + 1):
        started = time.perf_counter()
        order = rng.permutation(len(slices))
        acc_total = fair_total = 0.0
        n_batches = 0
        lr = lr_at(step, config.lr_base, config.lr_decay, config.lr_every)
        for batch_index, lo in enumerate(range(0, len(slices), config.batch_size)):
            batch = [slices[i] for i in order[lo:lo + config.batch_size]]
            weights = {name: parameter(value, name=name) for name, value in tensors.items()}
            loss, parts = batch_loss(batch, (weights, arch), fairness, field, labelings, features, demand_scale)
            value = loss.item()
            if not np.isfinite(value):
                raise NumericError(f"Pérdida no finita ({value}) en la época {epoch}, batch {batch_index}",
                                   payload={"epoch": epoch, "batch": batch_index})
            grads = backward(loss, list(weights.values()))
            lr = lr_at(step, config.lr_base, config.lr_decay, config.lr_every)
            tensors, state = adam_step(tensors, dict(zip(weights, grads)), state, lr)

            log.steps.append(StepRecord(step, epoch, batch_index, lr, parts["acc_loss"], parts["fair_loss"], value))
            logger.debug(f"Época {epoch} batch {batch_index}: acc={parts['acc_loss']:.6f} fair={parts['fair_loss']:.6f}")
            acc_total += parts["acc_loss"]
            fair_total += parts["fair_loss"]
            n_batches += 1
            step += 1

        record = EpochRecord(epoch, acc_total / n_batches, fair_total / n_batches, lr, time.perf_counter() - started)
        log.epochs.append(record)
        logger.info(f"Época {epoch}/{config.epochs}: acc={record.acc_loss:.6f} fair={record.fair_loss:.6f} lr={lr:g}")

        if checkpoint_dir and config.checkpoint_every and epoch % config.checkpoint_every == 0:
            save_model(os.path.join(checkpoint_dir, f"checkpoint_epoch{epoch}.npz"),
                       ModelParams(arch, tensors), demand_scale, {"epoch": epoch})

    return ModelParams(arch, tensors), log
