""" Target functions: parities, their continuous extension, and random networks.

The hard family lives on the Gray-code manifold. For a subset S of the first
n_b - t code bits, f_S(x) applies the triangle wave

    tri(s) = 1 - |1 - (s mod 2)|

to the sum of the selected block-leader coordinates of x. On Boolean inputs
tri() is the parity, and between corners it is 1-Lipschitz. hard_target()
realizes f_S exactly as a single-hidden-layer ReLU network, with the
coordinate selection folded into the first weight matrix.

Example hard target, as written by HardTargetSpec.to_dict():

    {
      "manifold": {"reach_bound": 0.5, "intrinsic_dim": 1, "code_bits": 8},
      "subset": [0, 2, 3],
      "truncation": 4
    }
"""

from math import sqrt

import numpy

from . import Core
from . import Manifold
from . import Network
from .Core import DomainError

class ParitySubset:
    """ Sorted set of zero-based coordinate indexes within [0, domain_dim).
    """
    def __init__(self, indexes, domain_dim):
        indexes = sorted(set(int(i) for i in indexes))

        if any(i < 0 or i >= domain_dim for i in indexes):
            raise DomainError('Subset %s does not fit in %d coordinates' % (indexes, domain_dim))

        self.indexes = indexes
        self.domain_dim = int(domain_dim)

    def __len__(self):
        return len(self.indexes)

    def __eq__(self, other):
        return isinstance(other, ParitySubset) and (self.indexes, self.domain_dim) == (other.indexes, other.domain_dim)

    def __repr__(self):
        return 'ParitySubset(%s, %d)' % (self.indexes, self.domain_dim)

    def mask(self):
        mask = numpy.zeros(self.domain_dim)
        mask[self.indexes] = 1
        return mask

def random_subset(domain_dim, rng):
    """ Uniformly random non-empty subset of [0, domain_dim).
    """
    rng = Core.makeGenerator(rng)

    while True:
        chosen = numpy.flatnonzero(rng.integers(0, 2, size=domain_dim))
        if len(chosen):
            return ParitySubset(chosen, domain_dim)

def triangle(s):
    """ tri(s) = 1 - |1 - (s mod 2)|, the parity of integers extended linearly in between.
    """
    return 1 - numpy.abs(1 - numpy.mod(s, 2))

def parity_chi(S, x_b):
    """ Parity of the bits of x_b selected by S.
    """
    x_b = numpy.asarray(x_b)

    if x_b.shape[-1] != S.domain_dim:
        raise DomainError('Parity over %d bits got an input of width %d' % (S.domain_dim, x_b.shape[-1]))

    if not numpy.all((x_b == 0) | (x_b == 1)):
        raise DomainError('Parity needs Boolean inputs')

    selected = x_b[..., S.indexes].astype(numpy.int64)
    parity = selected.sum(axis=-1) % 2

    return int(parity) if parity.ndim == 0 else parity

def continuous_parity(S, x):
    """ Triangle wave of the sum of the selected coordinates, for x in [0,1]^m.
    """
    x = numpy.asarray(x, dtype=numpy.float64)
    value = triangle(x[..., S.indexes].sum(axis=-1))

    return float(value) if numpy.ndim(value) == 0 else value

def parity_as_relu_net(S, input_dim=None):
    """ Single-hidden-layer network equal to continuous_parity(S, .) on [0,1]^m.

        Hidden unit k computes ReLU(sum_S x_i - k) for k = 0..|S|, and the
        readout (1, -2, 2, -2, ...) switches the slope between +1 and -1 at
        every integer. The last unit is silent on the cube and continues the
        wave beyond it.
    """
    if len(S) < 1:
        raise DomainError('Parity network needs a non-empty subset')

    input_dim = S.domain_dim if input_dim is None else input_dim
    width = len(S) + 1

    weights = numpy.zeros((width, input_dim))
    weights[:, S.indexes] = 1

    readout = numpy.array([1.0] + [2.0 * (-1) ** k for k in range(1, width)])

    return Network.ReluNetwork([weights], [-numpy.arange(width, dtype=numpy.float64)], readout, 'inside')

class HardTargetSpec:
    """ One member of the hard family: manifold, truncation t and subset S of [n_b - t].
    """
    def __init__(self, manifold, subset, truncation=None):
        truncation = manifold.code_bits // 2 if truncation is None else int(truncation)

        if truncation < 1 or truncation >= manifold.code_bits:
            raise DomainError('Truncation must be in [1, %d), not %s' % (manifold.code_bits, truncation))

        if not isinstance(subset, ParitySubset):
            subset = ParitySubset(subset, manifold.code_bits - truncation)

        if subset.domain_dim != manifold.code_bits - truncation or len(subset) == 0:
            raise DomainError('Hard targets need a non-empty subset of the %d-bit prefix'
                              % (manifold.code_bits - truncation))

        self.manifold = manifold
        self.subset = subset
        self.truncation = truncation

    @property
    def prefix_len(self):
        return self.manifold.code_bits - self.truncation

    @staticmethod
    def random(manifold, rng, truncation=None):
        truncation = manifold.code_bits // 2 if truncation is None else truncation
        return HardTargetSpec(manifold, random_subset(manifold.code_bits - truncation, rng), truncation)

    @staticmethod
    def full(manifold, truncation=None):
        """ The member whose subset is the whole prefix, parity of every leading code bit.
        """
        truncation = manifold.code_bits // 2 if truncation is None else truncation
        return HardTargetSpec(manifold, range(manifold.code_bits - truncation), truncation)

    def to_dict(self):
        return dict(manifold=self.manifold.to_dict(), subset=list(self.subset.indexes),
                    truncation=self.truncation)

    @staticmethod
    def from_dict(spec_dict):
        try:
            return HardTargetSpec(Manifold.ManifoldSpec.from_dict(spec_dict['manifold']),
                                  spec_dict['subset'], spec_dict['truncation'])
        except KeyError as e:
            raise Core.KnownUnknown('Hard target spec is missing required key %s' % e)

def hard_target(spec):
    """ f_S over ambient inputs: P folded into the first layer of the parity network.
    """
    manifold = spec.manifold
    parity = parity_as_relu_net(spec.subset)

    # block leader of prefix bit j sits at ambient coordinate j * delta_r
    selection = numpy.zeros((spec.prefix_len, manifold.ambient_n))
    selection[numpy.arange(spec.prefix_len), numpy.arange(spec.prefix_len) * manifold.delta_r] = 1

    return Network.ReluNetwork([parity.weights[0].dot(selection)], parity.biases,
                               parity.readout, parity.bias_placement)

def signed_target(net):
    """ 2f - 1, the +/-1 form of a {0, 1}-valued target, with one constant unit added to the last layer.
    """
    weights = [W.copy() for W in net.weights]
    biases = [b.copy() for b in net.biases]

    weights[-1] = numpy.vstack([weights[-1], numpy.zeros((1, weights[-1].shape[1]))])
    biases[-1] = numpy.append(biases[-1], 1.0)

    return Network.ReluNetwork(weights, biases, numpy.append(2 * net.readout, -1.0), net.bias_placement)

def random_target(input_dim, width, weight_bound=None, rng=None, sampler=None, batch=100):
    """ Single-hidden-layer network with Gaussian weights of scale 1/sqrt(fan-in).

        Biases are zero. Weights are clipped to [-weight_bound, weight_bound]
        when a bound is given. With a sampler, the readout is normalized to
        unit RMS output over batch samples.
    """
    if width < 1:
        raise DomainError('Target width must be at least 1, not %s' % width)

    rng = Core.makeGenerator(rng)

    weights = rng.standard_normal((width, input_dim)) / sqrt(input_dim)
    readout = rng.standard_normal(width) / sqrt(width)

    if weight_bound is not None:
        weights = numpy.clip(weights, -weight_bound, weight_bound)
        readout = numpy.clip(readout, -weight_bound, weight_bound)

    net = Network.ReluNetwork([weights], [numpy.zeros(width)], readout)

    if sampler is not None:
        net = Network.normalize_target(net, sampler, batch, rng)

    return net
