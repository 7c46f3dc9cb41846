# -*- coding: utf-8 -*-
#
# This file is part of Invenio-ICSDetect.
# Copyright (C) 2026 Invenio-ICSDetect contributors.
#
# Invenio-ICSDetect is free software; you can redistribute it and/or modify
# it under the terms of the MIT License; see LICENSE file for more details.

"""Stacked LSTM one-step-ahead predictor.

The network reads ``input_len`` past frames of the normalized channels and
predicts the next frame through a dense head on the last hidden state of the
top layer. Gradients are computed by backpropagation through the whole input
window; sequences are independent, no state is carried between them.

Every layer stores its four gates fused in one matrix of shape
``(inputs + hidden, 4 * hidden)`` in the order input, forget, cell, output.
"""

import json
import logging
from collections import namedtuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .attacks import NORMAL
from .errors import (DataError, InvalidConfigurationError, IoFailureError,
                     NonFiniteLossError, ShapeMismatchError)

logger = logging.getLogger(__name__)

OPTIMIZERS = ('adam', 'sgd')


class LstmConfig(namedtuple('LstmConfig', [
        'layer_sizes', 'input_len', 'input_dim', 'learning_rate', 'epochs',
        'batch_size', 'seed', 'optimizer', 'stride', 'clip_norm', 'lr_decay'],
        defaults=((64, 64, 32), 300, 2, 0.001, 25, 32, 42, 'adam', 10, 1.0,
                  0.05))):
    """Architecture and training settings.

    ``clip_norm`` bounds the global gradient norm of every update, ``None``
    or ``0`` disables clipping. The learning rate of epoch ``e`` is
    ``learning_rate / (1 + lr_decay * (e - 1))``.
    """

    __slots__ = ()

    def validate(self):
        """Check the invariants of the configuration."""
        if not self.layer_sizes or min(self.layer_sizes) < 1:
            raise InvalidConfigurationError(
                'layer sizes must be positive, got {0}'.format(
                    self.layer_sizes))
        for name in ('input_len', 'input_dim', 'epochs', 'batch_size',
                     'stride'):
            if getattr(self, name) < 1:
                raise InvalidConfigurationError(
                    '{0} must be at least 1'.format(name))
        if not self.learning_rate > 0:
            raise InvalidConfigurationError('learning rate must be positive')
        if self.clip_norm is not None and self.clip_norm < 0:
            raise InvalidConfigurationError('clip norm must not be negative')
        if self.lr_decay < 0:
            raise InvalidConfigurationError(
                'learning rate decay must not be negative')
        if self.optimizer not in OPTIMIZERS:
            raise InvalidConfigurationError(
                'unknown optimizer {0!r}; use one of {1}'.format(
                    self.optimizer, ', '.join(OPTIMIZERS)))
        return self

    def to_dict(self):
        """Serialize the configuration."""
        data = dict(self._asdict())
        data['layer_sizes'] = list(self.layer_sizes)
        return data

    @classmethod
    def from_dict(cls, data):
        """Deserialize a configuration."""
        data = dict(data)
        data['layer_sizes'] = tuple(data['layer_sizes'])
        return cls(**data)


PredictionRun = namedtuple('PredictionRun', [
    'predictions', 'errors', 'valid_from', 'scale', 'n_frames'])
"""Predictions and absolute errors for frames ``valid_from`` onwards.

``scale`` holds the per-channel normalization deviation of the model.
"""


def _sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


class LstmModel(object):
    """Parameters, normalization statistics and loss history."""

    def __init__(self, config, params, mean, std, history=None):
        """Initialize the model.

        :param config: An :class:`LstmConfig`.
        :param params: Dictionary of parameter arrays.
        :param mean: Per-channel mean of the training data.
        :param std: Per-channel deviation of the training data.
        :param history: Epoch-mean training losses.
        """
        self.config = config
        self.params = params
        self.mean = np.asarray(mean, dtype=float)
        std = np.asarray(std, dtype=float)
        self.std = np.where(std > 0, std, 1.0)
        self.history = list(history or [])

    @classmethod
    def initialize(cls, config, mean=None, std=None):
        """Create a model with seeded random weights.

        Weights are uniform in ``±1/sqrt(hidden)``; forget gate biases start
        at one.
        """
        config.validate()
        rng = np.random.default_rng(
            np.random.SeedSequence(config.seed).spawn(2)[0])
        params = {}
        inputs = config.input_dim
        for layer, hidden in enumerate(config.layer_sizes):
            bound = 1.0 / np.sqrt(hidden)
            params['W{0}'.format(layer)] = rng.uniform(
                -bound, bound, (inputs + hidden, 4 * hidden))
            bias = np.zeros(4 * hidden)
            bias[hidden:2 * hidden] = 1.0
            params['b{0}'.format(layer)] = bias
            inputs = hidden
        bound = 1.0 / np.sqrt(inputs)
        params['Wy'] = rng.uniform(-bound, bound, (inputs, config.input_dim))
        params['by'] = np.zeros(config.input_dim)
        if mean is None:
            mean = np.zeros(config.input_dim)
        if std is None:
            std = np.ones(config.input_dim)
        return cls(config, params, mean, std)

    def normalize(self, values):
        """Scale raw channels with the training statistics."""
        return (np.asarray(values, dtype=float) - self.mean) / self.std

    def denormalize(self, values):
        """Inverse of :meth:`normalize`."""
        return np.asarray(values, dtype=float) * self.std + self.mean

    def _forward(self, inputs, keep=False):
        """Run the stack on ``(batch, steps, channels)`` inputs."""
        sequence = inputs
        caches = []
        for layer, hidden in enumerate(self.config.layer_sizes):
            W = self.params['W{0}'.format(layer)]
            b = self.params['b{0}'.format(layer)]
            batch, steps, _ = sequence.shape
            h = np.zeros((batch, hidden))
            c = np.zeros((batch, hidden))
            outputs = np.empty((batch, steps, hidden))
            cache = []
            for t in range(steps):
                xh = np.concatenate([sequence[:, t], h], axis=1)
                z = xh.dot(W) + b
                i = _sigmoid(z[:, :hidden])
                f = _sigmoid(z[:, hidden:2 * hidden])
                g = np.tanh(z[:, 2 * hidden:3 * hidden])
                o = _sigmoid(z[:, 3 * hidden:])
                c_prev = c
                c = f * c_prev + i * g
                tanh_c = np.tanh(c)
                h = o * tanh_c
                outputs[:, t] = h
                if keep:
                    cache.append((xh, i, f, g, o, c_prev, tanh_c))
            caches.append(cache)
            sequence = outputs
        last = sequence[:, -1]
        prediction = last.dot(self.params['Wy']) + self.params['by']
        return prediction, last, caches

    def predict(self, inputs):
        """Predict the next normalized frame of each input sequence."""
        return self._forward(np.asarray(inputs, dtype=float))[0]

    def loss(self, inputs, targets):
        """Mean squared error over batch and channels."""
        prediction = self.predict(inputs)
        return float(np.mean((prediction - targets) ** 2))

    def loss_and_gradients(self, inputs, targets):
        """Loss and its gradient for every parameter.

        :param inputs: Normalized sequences ``(batch, steps, channels)``.
        :param targets: Normalized next frames ``(batch, channels)``.
        :returns: Tuple ``(loss, gradients)`` with gradients keyed like
            :attr:`params`.
        """
        inputs = np.asarray(inputs, dtype=float)
        targets = np.asarray(targets, dtype=float)
        prediction, last, caches = self._forward(inputs, keep=True)
        diff = prediction - targets
        loss = float(np.mean(diff ** 2))

        grads = {}
        d_pred = 2.0 * diff / diff.size
        grads['Wy'] = last.T.dot(d_pred)
        grads['by'] = d_pred.sum(axis=0)

        batch, steps, _ = inputs.shape
        top = self.config.layer_sizes[-1]
        d_outputs = np.zeros((batch, steps, top))
        d_outputs[:, -1] = d_pred.dot(self.params['Wy'].T)

        for layer in reversed(range(len(self.config.layer_sizes))):
            hidden = self.config.layer_sizes[layer]
            W = self.params['W{0}'.format(layer)]
            n_inputs = W.shape[0] - hidden
            dW = np.zeros_like(W)
            db = np.zeros(4 * hidden)
            d_inputs = np.zeros((batch, steps, n_inputs))
            dh_next = np.zeros((batch, hidden))
            dc_next = np.zeros((batch, hidden))
            for t in reversed(range(steps)):
                xh, i, f, g, o, c_prev, tanh_c = caches[layer][t]
                dh = d_outputs[:, t] + dh_next
                dc = dc_next + dh * o * (1.0 - tanh_c ** 2)
                dz = np.concatenate([
                    dc * g * i * (1.0 - i),
                    dc * c_prev * f * (1.0 - f),
                    dc * i * (1.0 - g ** 2),
                    dh * tanh_c * o * (1.0 - o),
                ], axis=1)
                dW += xh.T.dot(dz)
                db += dz.sum(axis=0)
                dxh = dz.dot(W.T)
                d_inputs[:, t] = dxh[:, :n_inputs]
                dh_next = dxh[:, n_inputs:]
                dc_next = dc * f
            grads['W{0}'.format(layer)] = dW
            grads['b{0}'.format(layer)] = db
            d_outputs = d_inputs
        return loss, grads

    def to_dict(self):
        """Serialize configuration, statistics, parameters and history."""
        return {
            'config': self.config.to_dict(),
            'history': list(self.history),
            'mean': self.mean.tolist(),
            'params': dict((name, value.tolist())
                           for name, value in self.params.items()),
            'std': self.std.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        """Deserialize a model."""
        try:
            config = LstmConfig.from_dict(data['config']).validate()
            params = dict((name, np.asarray(value, dtype=float))
                          for name, value in data['params'].items())
            return cls(config, params, data['mean'], data['std'],
                       history=data.get('history'))
        except (KeyError, TypeError) as e:
            raise DataError('invalid model document: {0}'.format(e))

    def save(self, path):
        """Write the model as JSON document."""
        try:
            with open(path, 'w') as fp:
                json.dump(self.to_dict(), fp, sort_keys=True)
        except (OSError, IOError) as e:
            raise IoFailureError('cannot write {0}: {1}'.format(path, e))

    @classmethod
    def load(cls, path):
        """Read a model written by :meth:`save`."""
        try:
            with open(path, 'r') as fp:
                return cls.from_dict(json.load(fp))
        except (OSError, IOError) as e:
            raise IoFailureError('cannot read {0}: {1}'.format(path, e))
        except ValueError as e:
            raise DataError('{0} is not a model document: {1}'.format(
                path, e))


class Adam(object):
    """Adam with bias correction."""

    def __init__(self, learning_rate, beta1=0.9, beta2=0.999, epsilon=1e-8):
        """Initialize the moment estimates."""
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.t = 0
        self.m = {}
        self.v = {}

    def update(self, params, grads):
        """Update ``params`` in place."""
        self.t += 1
        correction1 = 1.0 - self.beta1 ** self.t
        correction2 = 1.0 - self.beta2 ** self.t
        for name, grad in grads.items():
            m = self.m.setdefault(name, np.zeros_like(grad))
            v = self.v.setdefault(name, np.zeros_like(grad))
            m *= self.beta1
            m += (1.0 - self.beta1) * grad
            v *= self.beta2
            v += (1.0 - self.beta2) * grad ** 2
            params[name] -= self.learning_rate * (m / correction1) / (
                np.sqrt(v / correction2) + self.epsilon)


class Sgd(object):
    """Plain gradient descent."""

    def __init__(self, learning_rate):
        """Initialize the step size."""
        self.learning_rate = learning_rate

    def update(self, params, grads):
        """Update ``params`` in place."""
        for name, grad in grads.items():
            params[name] -= self.learning_rate * grad


def make_optimizer(config):
    """Optimizer named by the configuration."""
    if config.optimizer == 'sgd':
        return Sgd(config.learning_rate)
    return Adam(config.learning_rate)


def clip_gradients(grads, max_norm):
    """Scale ``grads`` in place so their global norm is at most ``max_norm``.

    :returns: The global norm before clipping.
    """
    norm = float(np.sqrt(sum(np.sum(g ** 2) for g in grads.values())))
    if max_norm and norm > max_norm:
        scale = max_norm / norm
        for grad in grads.values():
            grad *= scale
    return norm


def _as_matrix(series):
    x = np.asarray(series, dtype=float)
    if x.ndim == 1:
        x = x[:, np.newaxis]
    if x.ndim != 2:
        raise ShapeMismatchError('expected a (frames, channels) matrix')
    return x


def _windows(z, input_len, count):
    """Input sequences ``z[s:s + input_len]`` for ``s < count``."""
    return sliding_window_view(z, input_len, axis=0)[:count].transpose(
        0, 2, 1)


def train(config, series, labels=None):
    """Train a predictor on attack-free data.

    :param config: An :class:`LstmConfig`.
    :param series: Training channels ``(frames, channels)``.
    :param labels: Optional frame labels; any attack label is refused.
    :raises NonFiniteLossError: If a batch loss is not finite.
    :returns: The trained :class:`LstmModel`.
    """
    config.validate()
    x = _as_matrix(series)
    n, channels = x.shape
    if channels != config.input_dim:
        raise ShapeMismatchError(
            'model expects {0} channels, data has {1}'.format(
                config.input_dim, channels))
    if n <= config.input_len + 1:
        raise ShapeMismatchError(
            'training needs more than {0} frames, got {1}'.format(
                config.input_len + 1, n))
    if labels is not None and np.any(np.asarray(labels) != NORMAL):
        raise DataError('training data contains attack frames')
    if not np.all(np.isfinite(x)):
        raise DataError('training data contains NaN or infinity')

    model = LstmModel.initialize(config, x.mean(axis=0), x.std(axis=0))
    z = model.normalize(x)
    count = n - config.input_len
    windows = _windows(z, config.input_len, count)
    starts = np.arange(0, count, config.stride)
    optimizer = make_optimizer(config)
    rng = np.random.default_rng(
        np.random.SeedSequence(config.seed).spawn(2)[1])

    logger.info('training on %d sequences of %d frames, layers %s',
                len(starts), config.input_len, list(config.layer_sizes))
    for epoch in range(1, config.epochs + 1):
        optimizer.learning_rate = config.learning_rate / (
            1.0 + config.lr_decay * (epoch - 1))
        order = rng.permutation(starts)
        total = 0.0
        for batch, offset in enumerate(
                range(0, len(order), config.batch_size)):
            index = order[offset:offset + config.batch_size]
            loss, grads = model.loss_and_gradients(
                windows[index], z[index + config.input_len])
            if not np.isfinite(loss):
                raise NonFiniteLossError(epoch, batch, loss)
            norm = clip_gradients(grads, config.clip_norm)
            optimizer.update(model.params, grads)
            total += loss * len(index)
            logger.debug('epoch %d batch %d loss %.6g gradient norm %.3g',
                         epoch, batch, loss, norm)
        epoch_loss = total / len(order)
        if model.history and epoch_loss > model.history[-1]:
            logger.warning('epoch %d loss increased to %.6g', epoch,
                           epoch_loss)
        model.history.append(epoch_loss)
        logger.info('epoch %d/%d loss %.6g', epoch, config.epochs,
                    epoch_loss)
    return model


def predict_run(model, series, chunk_size=512):
    """Predict every frame from its ``input_len`` predecessors.

    :param model: A trained :class:`LstmModel`.
    :param series: Channels ``(frames, channels)``.
    :param chunk_size: Sequences evaluated per forward pass.
    :returns: A :class:`PredictionRun`.
    """
    x = _as_matrix(series)
    n, channels = x.shape
    input_len = model.config.input_len
    if channels != model.config.input_dim:
        raise ShapeMismatchError(
            'model was trained on {0} channels, data has {1}'.format(
                model.config.input_dim, channels))
    if n < input_len:
        raise ShapeMismatchError(
            'prediction needs at least {0} frames, got {1}'.format(
                input_len, n))
    z = model.normalize(x)
    count = n - input_len
    predicted = np.empty((count, channels))
    if count:
        windows = _windows(z, input_len, count)
        for offset in range(0, count, chunk_size):
            predicted[offset:offset + chunk_size] = model.predict(
                windows[offset:offset + chunk_size])
    predictions = model.denormalize(predicted)
    errors = np.abs(predictions - x[input_len:])
    return PredictionRun(predictions, errors, input_len, model.std.copy(), n)


def lstm_score(run):
    """Per-frame score: largest normalized error over the channels.

    Frames before ``valid_from`` repeat the first defined score.
    """
    scores = np.zeros(run.n_frames)
    if not len(run.errors):
        return scores
    valid = np.max(run.errors / run.scale, axis=1)
    scores[run.valid_from:] = valid
    scores[:run.valid_from] = valid[0]
    return scores


def gradient_check(config, sample, h=1e-5, model=None):
    """Compare analytic gradients with central finite differences.

    :param config: An :class:`LstmConfig`, ideally of a tiny network.
    :param sample: Tuple ``(inputs, targets)`` of normalized data.
    :param h: Finite difference step.
    :param model: Model to check; initialized from ``config`` by default.
    :returns: Largest relative deviation over all parameters.
    """
    inputs, targets = sample
    model = model or LstmModel.initialize(config)
    _, grads = model.loss_and_gradients(inputs, targets)
    worst = 0.0
    for name, param in model.params.items():
        flat = param.reshape(-1)
        analytic = grads[name].reshape(-1)
        for k in range(flat.size):
            original = flat[k]
            flat[k] = original + h
            upper = model.loss(inputs, targets)
            flat[k] = original - h
            lower = model.loss(inputs, targets)
            flat[k] = original
            numeric = (upper - lower) / (2.0 * h)
            deviation = abs(analytic[k] - numeric) / max(
                abs(analytic[k]), abs(numeric), 1e-5)
            worst = max(worst, deviation)
    return worst
