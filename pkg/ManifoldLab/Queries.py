""" Statistical queries against parity-like function classes.

A statistical query is a bounded function g(x, y) into [-1, 1]; the oracle
answers with E[g(x, f*(x))] up to a tolerance tau. Two answering policies
are available:

- honest: a Monte Carlo estimate whose standard error is pushed below tau/3
  by growing the batch.
- adversarial: the class average of the exact answer whenever it lies
  within tau of the truth for the hidden target, and the truth otherwise.
  This is the oracle that lower-bound arguments play against.

Function classes are finite and know their input distribution:

- ParityClass: parities of subsets of [m] on uniform {0,1}^m, with the
  input law known exactly.
- ManifoldParityClass: hard targets on a Gray-code manifold, one for each
  subset of the code word prefix. Exact computations use the Boolean prefix
  table; everything else is Monte Carlo.
- NetworkClass: any list of ReluNetworks over a sampler.

Both parity classes contain the empty subset by default, which makes the
pair of outputs on two distinct non-zero prefixes exactly uniform over
{0,1} x {0,1}.

Example sq experiment parameters, for JSON configuration file:

    "parameters": {
      "class": "manifold parity",
      "code bits": [4, 6, 8, 10],
      "tolerance": 0.1,
      "reach bound": 0.5
    }
"""

import logging
from math import ceil, log, sqrt
from time import time

import numpy

from . import Core
from . import Manifold
from . import Network
from . import Targets
from .Core import DomainError

ALPHABET = (0, 1)

class ParityClass:
    """ Parities of subsets of [m] over uniform Boolean inputs.

        subsets defaults to every subset of [m], the empty one included.
    """
    def __init__(self, dimension, subsets=None):
        if dimension < 1 or dimension > 12:
            raise DomainError('Parity class dimension must be in [1, 12], not %s' % dimension)

        self.dimension = int(dimension)
        self.sampler = Manifold.BooleanCube(self.dimension)

        if subsets is None:
            self.masks = self.sampler.support()[0].astype(numpy.int64)
        else:
            self.masks = numpy.array([Targets.ParitySubset(s, dimension).mask() for s in subsets], dtype=numpy.int64)

    @property
    def size(self):
        return len(self.masks)

    def subset(self, index):
        return Targets.ParitySubset(numpy.flatnonzero(self.masks[index]), self.dimension)

    def labels(self, X):
        """ Return (labels, ok): class outputs of shape (size, count) and a mask of points on the alphabet.
        """
        X = numpy.atleast_2d(X)
        ok = numpy.all((X == 0) | (X == 1), axis=1)
        bits = numpy.where(ok[:, None], X, 0).astype(numpy.int64)

        return (self.masks.dot(bits.T) % 2).astype(numpy.float64), ok

    def evaluate(self, index, X):
        bits = numpy.atleast_2d(X).astype(numpy.int64)
        return (bits.dot(self.masks[index]) % 2).astype(numpy.float64)

    def support(self):
        """ Atoms of the input law with their weights.
        """
        return self.sampler.support()

    def pair_table(self):
        """ Class outputs on the atoms and their weights, for exact pairwise computations.
        """
        points, weights = self.support()
        return self.labels(points)[0], weights

class ManifoldParityClass:
    """ The hard family on a Gray-code manifold: every subset of the (n_b - t)-bit prefix.
    """
    def __init__(self, manifold, truncation=None, subsets=None):
        self.manifold = manifold
        self.truncation = manifold.code_bits // 2 if truncation is None else int(truncation)
        self.prefix_len = manifold.code_bits - self.truncation

        if self.truncation < 1 or self.prefix_len < 1 or self.prefix_len > 12:
            raise DomainError('Truncation %s does not leave a usable prefix of %d code bits'
                              % (truncation, manifold.code_bits))

        self.sampler = Manifold.GrayCurve(manifold)
        self.parity = ParityClass(self.prefix_len, subsets)
        self.masks = self.parity.masks

    @property
    def size(self):
        return len(self.masks)

    def subset(self, index):
        return self.parity.subset(index)

    def target(self, index):
        """ The member as a ReluNetwork, for members with a non-empty subset.
        """
        return Targets.hard_target(Targets.HardTargetSpec(self.manifold, self.subset(index), self.truncation))

    def labels(self, X):
        """ Continuous parities of the prefix, plus a mask of points whose prefix is Boolean.
        """
        prefix = Manifold.project_P(numpy.atleast_2d(X), self.manifold, self.prefix_len)
        ok = Manifold._is_boolean(prefix)

        return Targets.triangle(self.masks.dot(prefix.T)), ok

    def evaluate(self, index, X):
        prefix = Manifold.project_P(numpy.atleast_2d(X), self.manifold, self.prefix_len)
        return Targets.triangle(prefix.dot(self.masks[index]))

    def support(self):
        return None

    def pair_table(self):
        """ Outputs on each Boolean prefix with its exact mass; the missing mass is non-Boolean.
        """
        prefixes, weights = self.sampler.exact_prefix_table(self.prefix_len)
        return self.parity.labels(prefixes.astype(numpy.float64))[0], weights

class NetworkClass:
    """ An explicit list of networks over a sampler; outputs off {0,1} count as off the alphabet.
    """
    def __init__(self, sampler, networks):
        if not networks:
            raise DomainError('A network class needs at least one network')

        self.sampler = sampler
        self.networks = list(networks)

    @property
    def size(self):
        return len(self.networks)

    def labels(self, X):
        L = numpy.array([Network.forward(net, numpy.atleast_2d(X)) for net in self.networks])
        ok = numpy.all(numpy.isin(L, ALPHABET), axis=0)
        return L, ok

    def evaluate(self, index, X):
        return Network.forward(self.networks[index], numpy.atleast_2d(X))

    def support(self):
        return getattr(self.sampler, 'support', lambda: None)()

    def pair_table(self):
        support = self.support()

        if support is None:
            return None

        points, weights = support
        return self.labels(points)[0], weights

class PairwiseIndependenceReport:
    """ eta, the mass of input pairs on which class outputs are not jointly uniform.
    """
    def __init__(self, eta, method, trials=None, stderr=0.0, alphabet=ALPHABET):
        self.eta = min(max(float(eta), 0.0), 1.0)
        self.method = method
        self.trials = trials
        self.stderr = float(stderr)
        self.alphabet = tuple(alphabet)

    def to_dict(self):
        return dict(eta=self.eta, method=self.method, trials=self.trials, stderr=self.stderr,
                    alphabet=list(self.alphabet))

class ClippedLinearQuery:
    """ g(x, y) = clip(<a, x> + b y + c, -1, 1).
    """
    def __init__(self, weights, label_weight, offset):
        self.weights = numpy.asarray(weights, dtype=numpy.float64)
        self.label_weight = float(label_weight)
        self.offset = float(offset)

    def __call__(self, X, y):
        return numpy.clip(numpy.atleast_2d(X).dot(self.weights) + self.label_weight * y + self.offset, -1, 1)

class CorrelationQuery:
    """ g(x, y) = (2y - 1)(2 f(x) - 1) for one class member f.
    """
    def __init__(self, function_class, index):
        self.function_class = function_class
        self.index = index

    def __call__(self, X, y):
        return (2 * numpy.asarray(y) - 1) * (2 * self.function_class.evaluate(self.index, X) - 1)

class ConstantQuery:
    def __init__(self, value):
        self.value = float(value)

    def __call__(self, X, y):
        return numpy.full(len(numpy.atleast_2d(X)), self.value)

class GradientQuery:
    """ Per-sample squared-error derivative for one parameter, divided by scale and clipped to [-1, 1].

        Gradient descent on the mean squared error only ever looks at
        averages of these, which is what ties it to the statistical query model.
    """
    def __init__(self, net, layer, row, col=None, scale=1.0):
        if not scale > 0:
            raise DomainError('Gradient query scale must be positive, not %s' % scale)

        self.net, self.layer, self.row, self.col, self.scale = net, layer, row, col, float(scale)

    def __call__(self, X, y):
        gradients = Network.sample_gradients(self.net, X, y, self.layer, self.row, self.col)
        return numpy.clip(gradients / self.scale, -1, 1)

def gradient_query(net, layer, row, col=None, scale=1.0):
    return GradientQuery(net, layer, row, col, scale)

def random_linear_queries(dimension, count, rng):
    """ Clipped-linear queries with Gaussian coefficients of scale 1/sqrt(dimension + 2).
    """
    rng = Core.makeGenerator(rng)
    scale = 1 / sqrt(dimension + 2)

    return [ClippedLinearQuery(rng.standard_normal(dimension) * scale, rng.standard_normal() * scale,
                               rng.standard_normal() * scale) for i in range(count)]

def query_lower_bound(tau, eta):
    """ tau^2 / (2 eta): queries any learner needs against the adversarial oracle.
    """
    return float('inf') if eta <= 0 else tau * tau / (2 * eta)

class SqOracle:
    """ Answers statistical queries about one member of a function class.

        Attributes:
        - function_class, target_index: the distribution of (x, f*(x)).
        - tolerance: tau.
        - policy: "honest" or "adversarial".
        - query_count: accepted queries so far.

        The adversarial policy evaluates every class member on the exact
        input support when the class has one, and otherwise on a Monte Carlo
        sample of batch points drawn once, so repeated queries get
        identical answers.
    """
    def __init__(self, function_class, target_index, tolerance, policy='honest', rng=None, batch=1000):
        if not tolerance > 0:
            raise DomainError('Tolerance must be positive, not %s' % tolerance)

        if policy not in ('honest', 'adversarial'):
            raise Core.KnownUnknown('"%s" is not an oracle policy I know about. Here are some that I do know about: adversarial, honest.' % policy)

        if target_index < 0 or target_index >= function_class.size:
            raise DomainError('Target index %s is outside a class of %d' % (target_index, function_class.size))

        self.function_class = function_class
        self.target_index = int(target_index)
        self.tolerance = float(tolerance)
        self.policy = policy
        self.rng = Core.makeGenerator(rng)
        self.batch = int(batch)
        self.query_count = 0

        if policy == 'adversarial':
            support = function_class.support()

            if support is None:
                points = function_class.sampler.sample(self.batch, self.rng)
                weights = numpy.full(len(points), 1.0 / len(points))
            else:
                points, weights = support

            self._points, self._weights = points, weights
            self._labels = function_class.labels(points)[0]

    def _check(self, values):
        values = numpy.asarray(values, dtype=numpy.float64)

        if not numpy.all(numpy.isfinite(values)) or numpy.any(numpy.abs(values) > 1 + 1e-12):
            raise DomainError('Rejected query: outputs must lie in [-1, 1]')

        return values

    def class_answers(self, g):
        """ phi[f] = E[g(x, f(x))] for every class member, on the adversary's points.
        """
        return numpy.array([self._check(g(self._points, labels)).dot(self._weights) for labels in self._labels])

    def query(self, g, batch=None):
        if self.policy == 'adversarial':
            answers = self.class_answers(g)
            truth, average = answers[self.target_index], answers.mean()
            answer = average if abs(truth - average) <= self.tolerance else truth
        else:
            answer = self._honest(g, batch or self.batch)

        self.query_count += 1
        logging.debug('ManifoldLab.Queries.SqOracle.query() #%d answered %.6f', self.query_count, answer)

        return float(answer)

    def _honest(self, g, batch):
        """ Grow the sample until the standard error is at most tau/3; 9/tau^2 draws always suffice.
        """
        cap = int(ceil(9 / self.tolerance ** 2))
        values = numpy.zeros(0)

        while True:
            X = self.function_class.sampler.sample(min(batch, cap) - len(values), self.rng)
            y = self.function_class.evaluate(self.target_index, X)
            values = numpy.concatenate([values, self._check(g(X, y))])

            stderr = values.std() / sqrt(len(values))

            if stderr <= self.tolerance / 3 or len(values) >= cap:
                return values.mean()

            batch = 2 * len(values)

def query(oracle, g, batch=None):
    """ Ask one statistical query; rejected queries raise DomainError and are not counted.
    """
    return oracle.query(g, batch)

def _uniform_pairs(L1, L2, ok1, ok2):
    """ True where the class outputs on a pair are jointly uniform over {0,1} x {0,1}.
    """
    size = L1.shape[0]
    n11 = (L1 * L2).sum(axis=0)
    n10 = (L1 * (1 - L2)).sum(axis=0)
    n01 = ((1 - L1) * L2).sum(axis=0)
    n00 = ((1 - L1) * (1 - L2)).sum(axis=0)

    counts = numpy.stack([n11, n10, n01, n00])
    return ok1 & ok2 & numpy.all(numpy.abs(4 * counts - size) < 1e-9, axis=0)

def pairwise_independence(function_class, sampler=None, mode='exact', trials=10000, rng=None):
    """ Measure eta for a finite class.

        Exact mode enumerates the atoms of the input law, weighing pair
        (p, q) by w_p w_q; any mass the pair table leaves out counts as
        deviating. It needs the class's own input law and, on a manifold,
        n_b <= 8; otherwise the measurement falls back to Monte Carlo over
        trials independent pairs drawn from sampler (the class's sampler
        by default).
    """
    table = function_class.pair_table() if sampler is None else None
    manifold = getattr(function_class, 'manifold', None)

    if mode == 'exact' and manifold is not None and manifold.code_bits > 8:
        logging.warning('ManifoldLab.Queries.pairwise_independence() %d code bits is too many to enumerate, using Monte Carlo',
                        manifold.code_bits)
        table = None

    if mode == 'exact' and table is not None:
        L, weights = table
        counts = L.T.dot(L), L.T.dot(1 - L), (1 - L).T.dot(L), (1 - L).T.dot(1 - L)
        uniform = numpy.all([numpy.abs(4 * n - function_class.size) < 1e-9 for n in counts], axis=0)

        return PairwiseIndependenceReport(1 - weights.dot(uniform).dot(weights), 'exact')

    elif mode not in ('exact', 'monte-carlo'):
        raise Core.KnownUnknown('"%s" is not a mode I know about. Here are some that I do know about: exact, monte-carlo.' % mode)

    rng = Core.makeGenerator(rng)
    sampler = sampler or function_class.sampler
    start_time = time()

    L1, ok1 = function_class.labels(sampler.sample(trials, rng))
    L2, ok2 = function_class.labels(sampler.sample(trials, rng))
    deviating = 1 - _uniform_pairs(L1, L2, ok1, ok2).mean()

    logging.info('ManifoldLab.Queries.pairwise_independence() eta %.4f from %d pairs in %.3f',
                 deviating, trials, time() - start_time)

    return PairwiseIndependenceReport(deviating, 'monte-carlo', trials, sqrt(deviating * (1 - deviating) / trials))

def variance_bound_check(function_class, queries, eta, trials=10000, rng=None):
    """ Measure Var over uniform f of phi[f] for every query, against 2 eta.

        phi[f] is exact when the class has an exact input support. Otherwise
        it is averaged over trials fixed samples, and the Monte Carlo error
        of the variance comes from ten disjoint chunks of that sample.

        Returns a dictionary with one row per query and an overall "passed".
    """
    support = function_class.support()

    if support is None:
        points = function_class.sampler.sample(trials, Core.makeGenerator(rng))
        weights = numpy.full(len(points), 1.0 / len(points))
    else:
        points, weights = support

    labels = function_class.labels(points)[0]
    chunks = numpy.array_split(numpy.arange(len(points)), 10)
    rows = []

    for (i, g) in enumerate(queries):
        values = numpy.array([g(points, y) for y in labels])
        phi = values.dot(weights)
        variance = float(phi.var())

        if support is None:
            chunk_variances = [values[:, chunk].mean(axis=1).var() for chunk in chunks]
            sigma = float(numpy.std(chunk_variances) / sqrt(len(chunks)))
        else:
            sigma = 0.0

        rows.append(dict(query=i, variance=variance, bound=2 * eta, sigma=sigma,
                         passed=variance <= 2 * eta + 3 * sigma + 1e-12))

    return dict(eta=eta, rows=rows, passed=all(row['passed'] for row in rows))

class CorrelationScan:
    """ Query each candidate's correlation with the label in turn and stop at the first above one half.

        With order "worst", candidates are tried in index order with the
        target moved to the end; with "random", in a random order. The last
        remaining candidate is concluded without a query.
    """
    def __init__(self, order='worst', threshold=0.5, rng=None):
        self.order = order
        self.threshold = threshold
        self.rng = rng

    def candidates(self, size, target_index):
        if self.order == 'worst':
            return [i for i in range(size) if i != target_index] + [target_index]

        return list(Core.makeGenerator(self.rng).permutation(size))

    def run(self, oracle):
        function_class = oracle.function_class
        candidates = self.candidates(function_class.size, oracle.target_index)

        for index in candidates[:-1]:
            if oracle.query(CorrelationQuery(function_class, index)) > self.threshold:
                return index

        return candidates[-1]

def sq_distinguishing_experiment(function_class, tau, learner=None, target_index=None, rng=None, batch=2000):
    """ Run a learner against the adversarial oracle and report its query count.
    """
    rng = Core.makeGenerator(rng)
    learner = learner or CorrelationScan()

    if target_index is None:
        target_index = int(rng.integers(0, function_class.size))

    oracle = SqOracle(function_class, target_index, tau, 'adversarial', rng, batch)
    identified = learner.run(oracle)

    return dict(queries_used=oracle.query_count, success=(identified == target_index),
                identified=int(identified), target=target_index, class_size=function_class.size)

def scaling_experiment(code_bits, tau, rng, reach_bound=0.5, intrinsic_dim=1, batch=2000):
    """ Correlation scan over hard families of growing size, with t = n_b / 2.

        Returns (rows, slope), rows holding n_b, t, tau, queries_used and
        success, slope the least-squares fit of log2(queries) on n_b - t.
    """
    rows = []

    for (bits, stream) in zip(code_bits, Core.splitGenerators(rng, len(code_bits))):
        start_time = time()
        manifold = Manifold.ManifoldSpec(reach_bound, intrinsic_dim, bits)
        function_class = ManifoldParityClass(manifold, bits // 2)

        result = sq_distinguishing_experiment(function_class, tau, rng=stream, batch=batch)
        rows.append(dict(n_b=bits, t=bits // 2, tau=tau, queries_used=result['queries_used'], success=result['success']))

        logging.info('ManifoldLab.Queries.scaling_experiment() n_b=%d used %d queries in %.3f',
                     bits, result['queries_used'], time() - start_time)

    exponent = [row['n_b'] - row['t'] for row in rows]
    counts = [log(max(row['queries_used'], 1), 2) for row in rows]
    slope = float(numpy.polyfit(exponent, counts, 1)[0]) if len(rows) > 1 else float('nan')

    return rows, slope
