""" Nearest-anchor interpolation on an (epsilon, delta)-net.

A target f with Lipschitz constant L is learned to error eps_out on all but
a delta fraction of the data by labeling the anchors of an (eps_out / L,
delta)-net with f and answering every query with the label of the nearest
anchor. L comes from Network.lipschitz_bound(), the product of weight
Frobenius norms with the readout norm.

Queries farther than the net radius from every anchor still get the
nearest label, flagged as uncovered. With use_fallback they get the
model's fallback value instead, the mean anchor label unless given.
"""

import logging
from math import ceil
from time import time

import numpy

from . import Core
from . import Geometry
from . import Network
from .Core import DomainError

class InterpolationModel:
    """ A labeled EpsilonNet with the Lipschitz bound used to size it.
    """
    def __init__(self, net, lipschitz_bound, fallback=None):
        if lipschitz_bound < 0:
            raise DomainError('Lipschitz bound must be non-negative, not %s' % lipschitz_bound)

        if net.labels is None or len(net.labels) != len(net):
            raise DomainError('Interpolation needs one label per anchor')

        self.net = net
        self.lipschitz_bound = float(lipschitz_bound)
        self.fallback = float(numpy.mean(net.labels)) if fallback is None else float(fallback)

    @property
    def certified(self):
        return self.net.certified

    def to_dict(self):
        return dict(net=self.net.to_dict(), lipschitz_bound=self.lipschitz_bound, fallback=self.fallback)

    @staticmethod
    def from_dict(model_dict):
        return InterpolationModel(Geometry.EpsilonNet.from_dict(model_dict['net']),
                                  model_dict['lipschitz_bound'], model_dict.get('fallback'))

def fit_interpolator(target, sampler, eps_out, delta, rng, max_samples=10**6):
    """ Build a certified (eps_out / L, delta)-net and label its anchors with the target.

        A target with L = 0 is constant, and a single anchor labels it
        exactly; its certificate comes from a held-out check of the usual size.
    """
    if not eps_out > 0:
        raise DomainError('Desired error must be positive, not %s' % eps_out)

    rng = Core.makeGenerator(rng)
    bound = Network.lipschitz_bound(target)
    start_time = time()

    if bound > 0:
        net = Geometry.build_net(sampler, eps_out / bound, delta, max_samples, rng)
    else:
        trials = max(300, int(ceil(20 / delta)))
        net = Geometry.EpsilonNet(sampler.sample(1, rng), float('inf'), delta, None, trials, 0, 1)

    model = InterpolationModel(net.labeled(Network.forward(target, net.anchors)), bound)

    logging.info('ManifoldLab.Learner.fit_interpolator() %d anchors at radius %.4g, L=%.4g, certified=%s in %.3f',
                 len(net), net.radius, bound, net.certified, time() - start_time)

    return model

def predict(model, x, use_fallback=False):
    """ Return (value, covered): the nearest anchor's label and whether it lies within the radius.

        With use_fallback, an uncovered query gets model.fallback instead.
    """
    index, distance = Geometry.nearest_anchor(model.net, x)
    covered = distance <= model.net.radius

    if use_fallback and not covered:
        return model.fallback, covered

    return float(model.net.labels[index]), covered

def predict_many(model, X, use_fallback=False):
    """ Bulk predict(), returning (values, covered, distances) arrays.
    """
    indexes, distances = Geometry.nearest_anchors(model.net, X)
    covered = distances <= model.net.radius
    values = model.net.labels[indexes]

    if use_fallback:
        values = numpy.where(covered, values, model.fallback)

    return values, covered, distances

def evaluate_interpolator(model, target, sampler, count, rng, use_fallback=False):
    """ Measure a fitted model against its target on fresh samples.

        Returns mse, relative_mse, covered_fraction, max_abs_error (over
        covered points) and lipschitz_violations, the number of points where
        the error exceeds L times the distance to the nearest anchor.
        use_fallback is passed through to predict_many().
    """
    X = sampler.sample(count, Core.makeGenerator(rng))
    truth = Network.forward(target, X)
    values, covered, distances = predict_many(model, X, use_fallback)

    errors = numpy.abs(values - truth)
    mse = float(numpy.mean(errors ** 2))
    second_moment = float(numpy.mean(truth ** 2))
    slack = model.lipschitz_bound * distances + 1e-9 * (1 + numpy.abs(truth))

    return dict(mse=mse, relative_mse=mse / second_moment if second_moment > 0 else mse,
                covered_fraction=float(covered.mean()),
                max_abs_error=float(errors[covered].max()) if covered.any() else float('nan'),
                lipschitz_violations=int(numpy.count_nonzero(errors > slack)),
                max_output=float(numpy.abs(truth).max()), count=int(count))
