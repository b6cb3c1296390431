""" ReLU networks: evaluation, gradients, training and the Lipschitz bound.

A ReluNetwork is a list of (weight matrix, bias vector) layers followed by a
linear readout v. Each hidden layer maps h to ReLU(W h) + b, with the bias
added after the nonlinearity; bias_placement="inside" gives the conventional
ReLU(W h + b) instead. Networks serve both as targets and as trainable
students, and are never modified in place: train() returns a new network.

Everything is batched. forward() takes one input vector or a matrix with one
input per row, and ReLU'(0) is taken to be 0 throughout.

Example checkpoint, as written by dumps():

    {
      "input_dim": 4,
      "bias_placement": "outside",
      "layers": [{"shape": [3, 4], "weights": [...12 values...], "bias": [0, 0, 0]}],
      "readout": [1.0, -2.0, 2.0]
    }
"""

import logging
from time import time
from math import exp, sqrt

import numpy

try:
    from simplejson import dumps as json_dumps, loads as json_loads
except ImportError:
    from json import dumps as json_dumps, loads as json_loads

from . import Core
from .Core import DomainError

PLACEMENTS = ('outside', 'inside')

class ReluNetwork:
    """ Layered piecewise-linear model.

        Attributes:
        - weights: list of L matrices, weights[l] has shape (d_l, d_l-1).
        - biases: list of L vectors of length d_l.
        - readout: vector of length d_L.
        - bias_placement: "outside" (after the ReLU) or "inside".
    """
    def __init__(self, weights, biases, readout, bias_placement='outside'):
        weights = [numpy.array(W, dtype=numpy.float64, ndmin=2) for W in weights]
        biases = [numpy.array(b, dtype=numpy.float64, ndmin=1) for b in biases]
        readout = numpy.array(readout, dtype=numpy.float64, ndmin=1)

        if len(weights) < 1 or len(weights) != len(biases):
            raise DomainError('A network needs at least one layer and one bias per layer')

        if bias_placement not in PLACEMENTS:
            raise DomainError('Bias placement is "outside" or "inside", not "%s"' % bias_placement)

        for (l, (W, b)) in enumerate(zip(weights, biases)):
            if l > 0 and W.shape[1] != weights[l - 1].shape[0]:
                raise DomainError('Layer %d expects %d inputs but layer %d has %d units'
                                  % (l, W.shape[1], l - 1, weights[l - 1].shape[0]))
            if b.shape != (W.shape[0], ):
                raise DomainError('Layer %d has %d units but a bias of length %d' % (l, W.shape[0], len(b)))

        if readout.shape != (weights[-1].shape[0], ):
            raise DomainError('Readout has length %d, last layer has %d units' % (len(readout), weights[-1].shape[0]))

        if not all(numpy.all(numpy.isfinite(a)) for a in weights + biases + [readout]):
            raise DomainError('Network parameters must be finite')

        self.weights = weights
        self.biases = biases
        self.readout = readout
        self.bias_placement = bias_placement

    @property
    def input_dim(self):
        return self.weights[0].shape[1]

    @property
    def depth(self):
        return len(self.weights)

    @property
    def widths(self):
        return [W.shape[0] for W in self.weights]

    def copy(self):
        return ReluNetwork([W.copy() for W in self.weights], [b.copy() for b in self.biases],
                           self.readout.copy(), self.bias_placement)

    def arrays(self):
        """ Every parameter array, weights first, then biases, then the readout.
        """
        return self.weights + self.biases + [self.readout]

    def to_dict(self):
        return dict(input_dim=self.input_dim, bias_placement=self.bias_placement,
                    layers=[dict(shape=list(W.shape), weights=W.ravel().tolist(), bias=b.tolist())
                            for (W, b) in zip(self.weights, self.biases)],
                    readout=self.readout.tolist())

    @staticmethod
    def from_dict(net_dict):
        try:
            weights = [numpy.reshape(layer['weights'], layer['shape']) for layer in net_dict['layers']]
            biases = [layer['bias'] for layer in net_dict['layers']]
            net = ReluNetwork(weights, biases, net_dict['readout'], net_dict.get('bias_placement', 'outside'))
        except (KeyError, ValueError) as e:
            raise Core.KnownUnknown('Malformed network checkpoint: %s' % e)

        if net.input_dim != net_dict.get('input_dim', net.input_dim):
            raise DomainError('Checkpoint input_dim %s disagrees with its first layer' % net_dict['input_dim'])

        return net

def dumps(net):
    """ Serialize a network checkpoint to a JSON string.
    """
    return json_dumps(net.to_dict())

def loads(text):
    """ Read a network checkpoint from a JSON string.
    """
    return ReluNetwork.from_dict(json_loads(text))

def init_network(input_dim, widths, rng, bias_placement='outside'):
    """ Gaussian weights with variance 1/fan-in, zero biases, readout variance 1/width.
    """
    rng = Core.makeGenerator(rng)
    weights, biases, fan_in = [], [], input_dim

    for width in widths:
        weights.append(rng.standard_normal((width, fan_in)) / sqrt(fan_in))
        biases.append(numpy.zeros(width))
        fan_in = width

    readout = rng.standard_normal(fan_in) / sqrt(fan_in)

    return ReluNetwork(weights, biases, readout, bias_placement)

def _inputs(net, x):
    x = numpy.asarray(x, dtype=numpy.float64)
    single = (x.ndim == 1)
    X = numpy.atleast_2d(x)

    if X.ndim != 2 or X.shape[1] != net.input_dim:
        raise DomainError('Network takes %d inputs, got shape %s' % (net.input_dim, x.shape))

    return X, single

def _forward_pass(net, X):
    """ Return pre-activations, layer outputs (inputs first) and network outputs.
    """
    pre, hidden = [], [X]

    for (W, b) in zip(net.weights, net.biases):
        Z = hidden[-1].dot(W.T)

        if net.bias_placement == 'inside':
            Z = Z + b
            A = numpy.maximum(Z, 0)
        else:
            A = numpy.maximum(Z, 0) + b

        pre.append(Z)
        hidden.append(A)

    return pre, hidden, hidden[-1].dot(net.readout)

def forward(net, x):
    """ Evaluate the network on one input vector (returns a float) or on rows of a matrix.
    """
    X, single = _inputs(net, x)
    output = _forward_pass(net, X)[2]

    return float(output[0]) if single else output

def _backward(net, pre, hidden, dout):
    """ Propagate output sensitivities dout (one per row) into parameter gradients.
    """
    dweights, dbiases = [None] * net.depth, [None] * net.depth
    dreadout = hidden[-1].T.dot(dout)
    dA = numpy.outer(dout, net.readout)

    for l in range(net.depth - 1, -1, -1):
        # strict inequality makes ReLU'(0) = 0
        dZ = dA * (pre[l] > 0)

        if net.bias_placement == 'inside':
            dbiases[l] = dZ.sum(axis=0)
        else:
            dbiases[l] = dA.sum(axis=0)

        dweights[l] = dZ.T.dot(hidden[l])
        dA = dZ.dot(net.weights[l])

    return ReluNetwork(dweights, dbiases, dreadout, net.bias_placement)

def mse(net, X, y):
    """ Mean squared error on a batch.
    """
    X, _ = _inputs(net, X)
    residual = _forward_pass(net, X)[2] - numpy.asarray(y, dtype=numpy.float64)
    return float(numpy.mean(residual * residual))

def relative_mse(net, X, y):
    """ Mean squared error divided by the mean squared label.
    """
    y = numpy.asarray(y, dtype=numpy.float64)
    second_moment = float(numpy.mean(y * y))

    return mse(net, X, y) / second_moment if second_moment > 0 else mse(net, X, y)

def mse_grad(net, X, y):
    """ Gradient of the batch mean squared error, as a network of the same shape.
    """
    X, single = _inputs(net, X)
    y = numpy.atleast_1d(numpy.asarray(y, dtype=numpy.float64))

    if len(X) == 0 or len(y) != len(X):
        raise DomainError('A gradient needs a non-empty batch with one label per input')

    pre, hidden, output = _forward_pass(net, X)
    dout = 2 * (output - y) / len(X)

    return _backward(net, pre, hidden, dout)

def sample_gradients(net, X, y, layer, row, col=None):
    """ Per-sample derivatives of (f(x) - y)^2 with respect to one parameter.

        layer indexes the hidden layers from 0; layer == depth selects the
        readout, where row picks the entry and col is ignored.
    """
    X, _ = _inputs(net, X)
    y = numpy.atleast_1d(numpy.asarray(y, dtype=numpy.float64))

    pre, hidden, output = _forward_pass(net, X)
    dout = 2 * (output - y)

    if layer == net.depth:
        return dout * hidden[-1][:, row]

    if layer < 0 or layer > net.depth:
        raise DomainError('Layer %s is outside [0, %d]' % (layer, net.depth))

    dA = numpy.outer(dout, net.readout)

    for l in range(net.depth - 1, layer, -1):
        dA = (dA * (pre[l] > 0)).dot(net.weights[l])

    dZ = dA * (pre[layer] > 0)

    return dZ[:, row] * hidden[layer][:, col]

def flatten(net):
    """ Concatenate every parameter into one vector, in arrays() order.
    """
    return numpy.concatenate([a.ravel() for a in net.arrays()])

def unflatten(net, vector):
    """ Build a network shaped like net from a flat parameter vector.
    """
    arrays, offset = [], 0

    for a in net.arrays():
        arrays.append(numpy.reshape(vector[offset:offset + a.size], a.shape))
        offset += a.size

    L = net.depth
    return ReluNetwork(arrays[:L], arrays[L:2 * L], arrays[2 * L], net.bias_placement)

def scale_readout(net, a):
    """ Return a copy of the network with its readout multiplied by a.
    """
    scaled = net.copy()
    scaled.readout = scaled.readout * a
    return scaled

def lipschitz_bound(net):
    """ ||v|| times the product of weight Frobenius norms.

        Biases only shift layer outputs and ReLU is 1-Lipschitz, so this
        bounds |f(x) - f(x')| / ||x - x'|| for either bias placement.
    """
    bound = numpy.linalg.norm(net.readout)

    for W in net.weights:
        bound *= numpy.linalg.norm(W, 'fro')

    return float(bound)

def normalize_target(net, sampler, batch=100, rng=None):
    """ Rescale the readout so that the RMS output over a batch of samples is 1.
    """
    rng = Core.makeGenerator(rng)
    outputs = forward(net, sampler.sample(batch, rng))
    rms = sqrt(float(numpy.mean(outputs * outputs)))

    if rms < 1e-9:
        raise DomainError('Target output is degenerate, RMS %.3g over %d samples' % (rms, batch))

    scaled = net.copy()
    scaled.readout = scaled.readout / rms

    return scaled

class TrainConfig:
    """ Optimizer settings for one training run.

        The learning rate actually used is learning_rate * exp(lr_multiplier).
        A zero learning rate is allowed and leaves parameters untouched.
    """
    def __init__(self, optimizer='adam', learning_rate=1e-3, lr_multiplier=0.0, batch_size=100,
                 steps=2000, seed=0, fresh_batches=False, record_every=100,
                 beta1=0.9, beta2=0.999, epsilon=1e-8):
        if optimizer not in ('sgd', 'adam'):
            raise Core.KnownUnknown('Optimizer is "sgd" or "adam", not "%s"' % optimizer)

        if not learning_rate >= 0:
            raise DomainError('Learning rate must not be negative, got %s' % learning_rate)

        if not -2 <= lr_multiplier <= 1:
            raise DomainError('Learning rate log-multiplier must be in [-2, 1], not %s' % lr_multiplier)

        if batch_size < 1 or steps < 0 or record_every < 1:
            raise DomainError('Batch size and record interval must be positive, steps non-negative')

        self.optimizer = optimizer
        self.learning_rate = float(learning_rate)
        self.lr_multiplier = float(lr_multiplier)
        self.batch_size = int(batch_size)
        self.steps = int(steps)
        self.seed = seed
        self.fresh_batches = bool(fresh_batches)
        self.record_every = int(record_every)
        self.beta1, self.beta2, self.epsilon = beta1, beta2, epsilon

    @property
    def rate(self):
        return self.learning_rate * exp(self.lr_multiplier)

    def with_random_multiplier(self, rng):
        """ Copy of this config with lr_multiplier drawn from Unif[-2, 1].
        """
        copied = TrainConfig(**self.to_dict())
        copied.lr_multiplier = float(Core.makeGenerator(rng).uniform(-2, 1))
        return copied

    def to_dict(self):
        return dict(optimizer=self.optimizer, learning_rate=self.learning_rate,
                    lr_multiplier=self.lr_multiplier, batch_size=self.batch_size, steps=self.steps,
                    seed=self.seed, fresh_batches=self.fresh_batches, record_every=self.record_every,
                    beta1=self.beta1, beta2=self.beta2, epsilon=self.epsilon)

class FixedData:
    """ A fixed training set, visited in shuffled epochs.
    """
    def __init__(self, X, y):
        self.X = numpy.asarray(X, dtype=numpy.float64)
        self.y = numpy.asarray(y, dtype=numpy.float64)

    def batches(self, size, rng):
        count = len(self.X)

        if size >= count:
            while True:
                yield self.X, self.y

        while True:
            order = rng.permutation(count)
            for start in range(0, count - size + 1, size):
                chosen = order[start:start + size]
                yield self.X[chosen], self.y[chosen]

    def training_error(self, net, batch):
        return relative_mse(net, self.X, self.y)

class FreshData:
    """ A new batch from the sampler, labeled by the target, at every step.
    """
    def __init__(self, sampler, target):
        self.sampler = sampler
        self.target = target

    def batches(self, size, rng):
        while True:
            X = self.sampler.sample(size, rng)
            yield X, forward(self.target, X)

    def training_error(self, net, batch):
        return relative_mse(net, *batch)

class TrainingTrace:
    """ Records from one training run.

        rows are dictionaries with step, train_mse, test_mse and lr; errors
        are relative MSE. A diverged run stops at the first non-finite loss.
    """
    columns = ('step', 'train_mse', 'test_mse', 'lr')

    def __init__(self, rows, network, diverged, config):
        self.rows = rows
        self.network = network
        self.diverged = diverged
        self.config = config

    @property
    def final_test_mse(self):
        return self.rows[-1]['test_mse'] if self.rows else float('nan')

def train(student, data, cfg, eval_set):
    """ Run the configured optimizer from a copy of the student.

        data is a FixedData or FreshData source; eval_set is an (X, y) pair
        used for the test error. Returns a TrainingTrace whose network is
        the trained copy, or None after divergence.
    """
    rng = Core.makeGenerator(cfg.seed)
    net = student.copy()
    X_test, y_test = eval_set
    rate = cfg.rate

    params = net.arrays()
    first = [numpy.zeros_like(p) for p in params]
    second = [numpy.zeros_like(p) for p in params]

    batches = data.batches(cfg.batch_size, rng)
    batch = next(batches)
    rows, diverged, start_time = [], False, time()

    for step in range(cfg.steps + 1):
        if step > 0:
            batch = next(batches)
            try:
                with numpy.errstate(over='ignore', invalid='ignore'):
                    grads = mse_grad(net, *batch).arrays()
            except DomainError:
                # non-finite gradients fail network validation
                grads = None

            if grads is None:
                logging.warning('ManifoldLab.Network.train() diverged at step %d', step)
                diverged = True
                break

            for (i, (p, g)) in enumerate(zip(params, grads)):
                if cfg.optimizer == 'sgd':
                    p -= rate * g
                    continue

                first[i] = cfg.beta1 * first[i] + (1 - cfg.beta1) * g
                second[i] = cfg.beta2 * second[i] + (1 - cfg.beta2) * g * g
                unbiased1 = first[i] / (1 - cfg.beta1 ** step)
                unbiased2 = second[i] / (1 - cfg.beta2 ** step)
                p -= rate * unbiased1 / (numpy.sqrt(unbiased2) + cfg.epsilon)

        if step % cfg.record_every and step != cfg.steps:
            continue

        with numpy.errstate(over='ignore', invalid='ignore'):
            train_mse, test_mse = data.training_error(net, batch), relative_mse(net, X_test, y_test)

        if not (numpy.isfinite(train_mse) and numpy.isfinite(test_mse)):
            logging.warning('ManifoldLab.Network.train() diverged at step %d', step)
            diverged = True
            break

        rows.append(dict(step=step, train_mse=train_mse, test_mse=test_mse, lr=rate))
        logging.debug('ManifoldLab.Network.train() step %d train %.5f test %.5f', step, train_mse, test_mse)

    logging.info('ManifoldLab.Network.train() %d steps of %s in %.3f', cfg.steps, cfg.optimizer, time() - start_time)

    return TrainingTrace(rows, None if diverged else net, diverged, cfg)
