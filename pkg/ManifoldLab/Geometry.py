""" Nets, covers, packings and the coupon collector.

An EpsilonNet is a set of anchor points drawn from a sampler such that a
fresh draw lands within epsilon of some anchor with probability at least
1 - delta. build_net() grows a net in rounds of i.i.d. samples, skipping
samples that fall within epsilon/2 of an existing anchor, and after every
round checks coverage on fresh held-out samples. The net is certified once
the one-sided 95% Clopper-Pearson upper bound on the miss rate is at most
delta; if max_samples runs out first, the net comes back uncertified.

Greedy covers and packings follow the usual definitions: every point is
within epsilon of a cover center, and packing centers are pairwise more
than 2 epsilon apart, so that

    packing(2 eps) <= cover(2 eps) <= packing(eps)

on any finite point set; cover_report() records that chain.

Single nearest-anchor lookups are exact linear scans with ties going to the
lowest index. Bulk lookups (certification, prediction over many points) use
a scipy cKDTree built once per net.
"""

import logging
from math import ceil, exp, log
from time import time

import numpy
from scipy.spatial import cKDTree
from scipy.stats import beta

from . import Core
from .Core import DomainError

class EpsilonNet:
    """ Labeled anchors with a radius, a target miss rate and a certification record.

        Attributes:
        - anchors: (count, n) array.
        - labels: (count,) array, or None for an unlabeled net.
        - radius, delta: epsilon and the target miss rate.
        - trials, misses: size and outcome of the last held-out check.
        - upper_bound: one-sided 95% bound on the miss rate from that check.
        - samples: i.i.d. draws consumed while growing the net.
        - certified: whether upper_bound <= delta.
    """
    def __init__(self, anchors, radius, delta, labels=None, trials=0, misses=0, samples=0):
        if not radius > 0:
            raise DomainError('Net radius must be positive, not %s' % radius)

        self.anchors = numpy.atleast_2d(numpy.asarray(anchors, dtype=numpy.float64))
        self.labels = None if labels is None else numpy.asarray(labels, dtype=numpy.float64)
        self.radius = float(radius)
        self.delta = float(delta)
        self.trials = int(trials)
        self.misses = int(misses)
        self.samples = int(samples)
        self._tree = None

    def __len__(self):
        return len(self.anchors)

    @property
    def upper_bound(self):
        return miss_rate_bound(self.misses, self.trials)

    @property
    def certified(self):
        return self.trials > 0 and self.upper_bound <= self.delta

    def index(self):
        if self._tree is None:
            self._tree = cKDTree(self.anchors)
        return self._tree

    def labeled(self, labels):
        """ Copy of the net carrying the given anchor labels.
        """
        return EpsilonNet(self.anchors, self.radius, self.delta, labels, self.trials, self.misses, self.samples)

    def to_dict(self):
        return dict(radius=self.radius, delta=self.delta, trials=self.trials, misses=self.misses,
                    samples=self.samples, certified=self.certified, upper_bound=self.upper_bound,
                    anchors=self.anchors.tolist(),
                    labels=None if self.labels is None else self.labels.tolist())

    @staticmethod
    def from_dict(net_dict):
        return EpsilonNet(net_dict['anchors'], net_dict['radius'], net_dict['delta'], net_dict.get('labels'),
                          net_dict.get('trials', 0), net_dict.get('misses', 0), net_dict.get('samples', 0))

class CoverReport:
    """ Greedy packing(2 eps), cover(2 eps) and packing(eps) on one point set.
    """
    def __init__(self, epsilon, packing_double, cover_size, packing_size):
        self.epsilon = epsilon
        self.packing_double = packing_double
        self.cover_size = cover_size
        self.packing_size = packing_size

    @property
    def holds(self):
        return self.packing_double <= self.cover_size <= self.packing_size

    def to_dict(self):
        return dict(epsilon=self.epsilon, packing_double=self.packing_double, cover_size=self.cover_size,
                    packing_size=self.packing_size, holds=self.holds)

def miss_rate_bound(misses, trials):
    """ One-sided 95% Clopper-Pearson upper bound on a binomial rate.
    """
    if trials < 1:
        return 1.0

    if misses >= trials:
        return 1.0

    return float(beta.ppf(0.95, misses + 1, trials - misses))

def sample_budget(net_size, delta):
    """ Draws that hit every cell of an equal-mass net_size partition with probability 1 - delta.
    """
    if net_size < 1 or not 0 < delta < 1:
        raise DomainError('Need a positive net size and 0 < delta < 1')

    return int(ceil(net_size * (log(net_size) + log(1 / delta))))

def _absorb(anchors, points, separation):
    """ Append points that are at least separation away from every anchor and from each other.

        Points are considered in order, so the result matches a sequential scan.
    """
    if len(anchors):
        distance, _ = cKDTree(anchors).query(points)
        points = points[distance >= separation]

    if len(points) == 0:
        return anchors

    pairs = cKDTree(points).query_pairs(separation * (1 - 1e-12), output_type='ndarray')
    removed = numpy.zeros(len(points), dtype=bool)

    if len(pairs):
        pairs = pairs[numpy.lexsort((pairs[:, 1], pairs[:, 0]))]
        starts = numpy.searchsorted(pairs[:, 0], numpy.arange(len(points) + 1))

        for i in range(len(points)):
            if not removed[i]:
                removed[pairs[starts[i]:starts[i + 1], 1]] = True

    kept = points[~removed]

    return kept if len(anchors) == 0 else numpy.vstack([anchors, kept])

def build_net(sampler, epsilon, delta, max_samples=10**6, rng=None, check_trials=None):
    """ Grow an (epsilon, delta)-net from i.i.d. samples and certify it on held-out draws.

        check_trials defaults to max(300, 20 / delta). Held-out draws that
        miss a failed check are folded into the net, and the next round is
        sized by sample_budget() over the anchors found so far.
    """
    if not epsilon > 0 or not 0 < delta < 1:
        raise DomainError('Need epsilon > 0 and 0 < delta < 1, got %s and %s' % (epsilon, delta))

    rng = Core.makeGenerator(rng)
    check_trials = int(check_trials or max(300, ceil(20 / delta)))
    start_time = time()

    anchors = numpy.zeros((0, sampler.ambient_n))
    drawn, trials, misses = 0, 0, 0
    round_size = min(max_samples, 100)

    while True:
        if round_size > 0:
            anchors = _absorb(anchors, sampler.sample(round_size, rng), epsilon / 2)
            drawn += round_size

        held_out = sampler.sample(check_trials, rng)
        distance, _ = cKDTree(anchors).query(held_out)
        trials, misses = check_trials, int(numpy.count_nonzero(distance > epsilon))
        drawn += check_trials

        logging.debug('ManifoldLab.Geometry.build_net() %d anchors from %d samples, %d of %d missed',
                      len(anchors), drawn, misses, trials)

        if miss_rate_bound(misses, trials) <= delta:
            break

        # misses only
        anchors = _absorb(anchors, held_out[distance > epsilon], epsilon / 2)

        if drawn >= max_samples:
            break

        # coupon-collector budget over the cells found so far; zero means check again
        round_size = min(max(0, sample_budget(len(anchors), delta) - drawn), max_samples - drawn)

    net = EpsilonNet(anchors, epsilon, delta, None, trials, misses, drawn)

    if net.certified:
        logging.info('ManifoldLab.Geometry.build_net() certified %d anchors from %d samples in %.3f',
                     len(net), drawn, time() - start_time)
    else:
        logging.warning('ManifoldLab.Geometry.build_net() uncertified after %d samples, miss bound %.4f > %.4f',
                        drawn, net.upper_bound, delta)

    return net

def recheck_net(net, sampler, trials, rng):
    """ Fresh miss fraction of a net: the share of new samples farther than epsilon from every anchor.
    """
    distance = nearest_anchors(net, sampler.sample(trials, Core.makeGenerator(rng)))[1]
    return float(numpy.mean(distance > net.radius))

def nearest_anchor(net, x):
    """ Return (index, distance) of the anchor nearest to x, lowest index on ties.
    """
    if len(net) == 0:
        raise DomainError('Cannot look up anchors in an empty net')

    offsets = net.anchors - numpy.asarray(x, dtype=numpy.float64)[None, :]
    distances = numpy.sqrt(numpy.einsum('ij,ij->i', offsets, offsets))
    index = int(numpy.argmin(distances))

    return index, float(distances[index])

def nearest_anchors(net, points):
    """ Bulk nearest-anchor lookup, returning (indexes, distances) arrays.
    """
    if len(net) == 0:
        raise DomainError('Cannot look up anchors in an empty net')

    distances, indexes = net.index().query(numpy.atleast_2d(points))
    return indexes, distances

def greedy_cover(points, epsilon):
    """ Centers chosen in order, each point within epsilon of one of them.
    """
    points = numpy.atleast_2d(numpy.asarray(points, dtype=numpy.float64))
    covered = numpy.zeros(len(points), dtype=bool)
    centers = []

    for i in range(len(points)):
        if covered[i]:
            continue

        centers.append(i)
        covered |= numpy.linalg.norm(points - points[i], axis=1) <= epsilon

    return points[centers]

def greedy_packing(points, epsilon):
    """ Centers chosen in order, pairwise more than 2 epsilon apart.
    """
    points = numpy.atleast_2d(numpy.asarray(points, dtype=numpy.float64))
    blocked = numpy.zeros(len(points), dtype=bool)
    centers = []

    for i in range(len(points)):
        if blocked[i]:
            continue

        centers.append(i)
        blocked |= numpy.linalg.norm(points - points[i], axis=1) <= 2 * epsilon

    return points[centers]

def cover_report(points, epsilon):
    """ Record the packing/covering duality chain for one point set.
    """
    return CoverReport(epsilon, len(greedy_packing(points, 2 * epsilon)),
                       len(greedy_cover(points, 2 * epsilon)), len(greedy_packing(points, epsilon)))

def harmonic_number(n):
    return float(numpy.sum(1.0 / numpy.arange(1, n + 1)))

def coupon_limit_cdf(c):
    """ Limiting P[T_n < n ln n + c n] = exp(-exp(-c)).
    """
    return exp(-exp(-c))

def coupon_collector_sim(n, trials, rng):
    """ Simulate uniform draws over n bins until every bin is hit.

        Each run is a sum of geometric waiting times, one per newly hit bin,
        which has the same law as drawing bins one at a time.

        Returns a dictionary with mean_T, its standard error, the exact
        expectation n H_n, the sorted stopping times and their empirical CDF.
    """
    if n < 1 or trials < 100:
        raise DomainError('Need at least 1 bin and 100 trials, got %s and %s' % (n, trials))

    rng = Core.makeGenerator(rng)
    probabilities = (n - numpy.arange(n)) / float(n)
    stopping = rng.geometric(probabilities[None, :], size=(trials, n)).sum(axis=1)

    values, counts = numpy.unique(stopping, return_counts=True)

    return dict(n=n, trials=trials, mean_T=float(stopping.mean()),
                stderr=float(stopping.std(ddof=1) / numpy.sqrt(trials)),
                expected=n * harmonic_number(n), stopping_times=numpy.sort(stopping),
                empirical_cdf=list(zip(values.tolist(), (numpy.cumsum(counts) / float(trials)).tolist())))
