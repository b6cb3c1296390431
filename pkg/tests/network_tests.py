from unittest import TestCase

import numpy

from ManifoldLab import Core, Manifold, Network
from ManifoldLab.Core import DomainError

def slow_forward(net, x):
    ''' Unit-by-unit evaluation, kept apart from the vectorized code.
    '''
    h = list(x)

    for (W, b) in zip(net.weights, net.biases):
        following = []

        for (row, bias) in zip(W, b):
            z = sum(w * v for (w, v) in zip(row, h))

            if net.bias_placement == 'inside':
                following.append(max(z + bias, 0.0))
            else:
                following.append(max(z, 0.0) + bias)

        h = following

    return sum(v * a for (v, a) in zip(net.readout, h))

def random_net(seed, input_dim=4, widths=(8, 8, 8), placement='outside'):
    rng = Core.makeGenerator(seed)
    net = Network.init_network(input_dim, list(widths), rng, placement)
    net.biases = [0.1 * rng.standard_normal(len(b)) for b in net.biases]
    return net

class ForwardTests(TestCase):

    def test_zero_network(self):
        net = Network.ReluNetwork([numpy.zeros((3, 2))], [numpy.zeros(3)], numpy.zeros(3))
        self.assertEqual(net.input_dim, 2)
        self.assertTrue(numpy.all(Network.forward(net, numpy.random.default_rng(0).normal(size=(5, 2))) == 0))

    def test_single_relu(self):
        net = Network.ReluNetwork([[[1.0]]], [[0.0]], [1.0])

        for x in (-2.0, -0.5, 0.0, 0.5, 3.0):
            self.assertEqual(Network.forward(net, [x]), max(0.0, x))

    def test_matches_unit_by_unit(self):
        '''Vectorized evaluation matches a plain loop for both bias placements'''
        for placement in ('outside', 'inside'):
            net = random_net(1, placement=placement)
            X = Core.makeGenerator(2).standard_normal((20, 4))
            outputs = Network.forward(net, X)

            for (x, output) in zip(X, outputs):
                self.assertTrue(abs(output - slow_forward(net, x)) <= 1e-12)

    def test_single_input_is_a_float(self):
        net = random_net(3)
        self.assertTrue(isinstance(Network.forward(net, numpy.ones(4)), float))
        self.assertEqual(Network.forward(net, numpy.ones((1, 4))).shape, (1, ))

    def test_shape_mismatch(self):
        net = random_net(4)
        self.assertRaises(DomainError, Network.forward, net, numpy.ones(5))
        self.assertRaises(DomainError, Network.ReluNetwork, [numpy.ones((3, 2)), numpy.ones((2, 4))],
                          [numpy.zeros(3), numpy.zeros(2)], numpy.ones(2))
        self.assertRaises(DomainError, Network.ReluNetwork, [numpy.ones((3, 2))], [numpy.zeros(3)], numpy.ones(2))
        self.assertRaises(DomainError, Network.ReluNetwork, [[[numpy.nan]]], [[0.0]], [1.0])

    def test_readout_homogeneity(self):
        net = random_net(5)
        X = Core.makeGenerator(6).standard_normal((10, 4))

        self.assertTrue(numpy.allclose(Network.forward(Network.scale_readout(net, -2.5), X),
                                       -2.5 * Network.forward(net, X), rtol=0, atol=1e-12))

class GradientTests(TestCase):

    def test_finite_differences(self):
        '''Every parameter's gradient agrees with central differences'''
        for seed in range(5):
            for placement in ('outside', 'inside'):
                net = random_net(seed, 3, (8, 8, 8), placement)
                rng = Core.makeGenerator(100 + seed)
                X, y = rng.standard_normal((6, 3)), rng.standard_normal(6)

                analytic = Network.flatten(Network.mse_grad(net, X, y))
                theta, h = Network.flatten(net), 1e-5
                numeric = numpy.zeros_like(theta)

                for i in range(len(theta)):
                    step = numpy.zeros_like(theta)
                    step[i] = h
                    numeric[i] = (Network.mse(Network.unflatten(net, theta + step), X, y)
                                - Network.mse(Network.unflatten(net, theta - step), X, y)) / (2 * h)

                self.assertTrue(numpy.abs(analytic - numeric).max() <= 1e-6, (seed, placement))

    def test_perfect_fit(self):
        net = random_net(7)
        X = Core.makeGenerator(8).standard_normal((5, 4))
        grad = Network.flatten(Network.mse_grad(net, X, Network.forward(net, X)))

        self.assertEqual(numpy.abs(grad).max(), 0.0)

    def test_batch_is_mean(self):
        '''A two-sample gradient averages the one-sample gradients'''
        net = random_net(9)
        rng = Core.makeGenerator(10)
        X, y = rng.standard_normal((2, 4)), rng.standard_normal(2)

        pair = Network.flatten(Network.mse_grad(net, X, y))
        first = Network.flatten(Network.mse_grad(net, X[:1], y[:1]))
        second = Network.flatten(Network.mse_grad(net, X[1:], y[1:]))

        self.assertTrue(numpy.allclose(pair, (first + second) / 2, rtol=0, atol=1e-12))

    def test_empty_batch(self):
        net = random_net(11)
        self.assertRaises(DomainError, Network.mse_grad, net, numpy.zeros((0, 4)), numpy.zeros(0))
        self.assertRaises(DomainError, Network.mse_grad, net, numpy.zeros((3, 4)), numpy.zeros(2))

    def test_sample_gradients_average(self):
        '''Per-sample derivatives average to the batch gradient entry'''
        net = random_net(12)
        rng = Core.makeGenerator(13)
        X, y = rng.standard_normal((30, 4)), rng.standard_normal(30)
        grad = Network.mse_grad(net, X, y)

        for (layer, row, col) in ((0, 2, 1), (1, 5, 3), (2, 0, 7)):
            per_sample = Network.sample_gradients(net, X, y, layer, row, col)
            self.assertAlmostEqual(per_sample.mean(), grad.weights[layer][row, col])

        per_sample = Network.sample_gradients(net, X, y, net.depth, 4)
        self.assertAlmostEqual(per_sample.mean(), grad.readout[4])

        self.assertRaises(DomainError, Network.sample_gradients, net, X, y, -1, 0, 0)

class LipschitzTests(TestCase):

    def test_single_layer(self):
        W = numpy.array([[1.0, 2.0], [0.0, 2.0]])
        net = Network.ReluNetwork([W], [numpy.zeros(2)], [1.0, 0.0])
        self.assertAlmostEqual(Network.lipschitz_bound(net), 3.0)

    def test_product_law(self):
        '''k layers of Frobenius norm 2 give a bound of |v| 2^k'''
        layers = [numpy.eye(4)] * 3
        net = Network.ReluNetwork(layers, [numpy.zeros(4)] * 3, [3.0, 4.0, 0.0, 0.0])

        self.assertAlmostEqual(Network.lipschitz_bound(net), 5.0 * 2 ** 3)

    def test_never_violated(self):
        '''The bound holds on random pairs for random nets'''
        for seed in range(10):
            net = random_net(20 + seed, 5, (16, 16))
            rng = Core.makeGenerator(30 + seed)
            X, Y = rng.standard_normal((10000, 5)), rng.standard_normal((10000, 5))

            change = numpy.abs(Network.forward(net, X) - Network.forward(net, Y))
            allowed = Network.lipschitz_bound(net) * numpy.linalg.norm(X - Y, axis=1)

            self.assertTrue(numpy.all(change <= allowed * (1 + 1e-12)))

class NormalizeTests(TestCase):

    def test_constant_output(self):
        '''A constant 3 is scaled by exactly 1/3'''
        net = Network.ReluNetwork([numpy.zeros((1, 2))], [[3.0]], [1.0])
        scaled = Network.normalize_target(net, Manifold.EuclideanSpace(2), 100, Core.makeGenerator(1))

        self.assertAlmostEqual(scaled.readout[0], 1 / 3.0, places=12)
        self.assertEqual(net.readout[0], 1.0)

    def test_scale_invariance(self):
        '''Normalizing a scaled target gives the same function'''
        net = random_net(40)
        sampler = Manifold.EuclideanSpace(4)

        first = Network.normalize_target(net, sampler, 100, Core.makeGenerator(2))
        second = Network.normalize_target(Network.scale_readout(net, 10), sampler, 100, Core.makeGenerator(2))

        X = Core.makeGenerator(3).standard_normal((20, 4))
        self.assertTrue(numpy.allclose(Network.forward(first, X), Network.forward(second, X), rtol=0, atol=1e-10))

    def test_unit_rms(self):
        net = random_net(41)
        sampler = Manifold.EuclideanSpace(4)
        scaled = Network.normalize_target(net, sampler, 100, Core.makeGenerator(4))
        outputs = Network.forward(scaled, sampler.sample(100, Core.makeGenerator(4)))

        self.assertAlmostEqual(numpy.sqrt(numpy.mean(outputs ** 2)), 1.0)

    def test_degenerate(self):
        net = Network.ReluNetwork([numpy.zeros((2, 2))], [numpy.zeros(2)], [1.0, 1.0])
        self.assertRaises(DomainError, Network.normalize_target, net, Manifold.EuclideanSpace(2), 100,
                          Core.makeGenerator(5))

class CheckpointTests(TestCase):

    def test_json(self):
        net = random_net(50, placement='inside')
        copy = Network.loads(Network.dumps(net))

        self.assertEqual(copy.bias_placement, 'inside')
        self.assertTrue(numpy.array_equal(Network.flatten(copy), Network.flatten(net)))

    def test_malformed(self):
        self.assertRaises(Core.KnownUnknown, Network.ReluNetwork.from_dict, {'layers': []})
        self.assertRaises(Core.KnownUnknown, Network.loads,
                          '{"layers": [{"shape": [2, 2], "weights": [1, 2, 3], "bias": [0, 0]}], "readout": [1, 1]}')

        net_dict = random_net(51).to_dict()
        net_dict['input_dim'] = 7
        self.assertRaises(DomainError, Network.ReluNetwork.from_dict, net_dict)

class TrainTests(TestCase):

    def line(self):
        X = numpy.linspace(0.5, 1.5, 100)[:, None]
        return X, 3 * X[:, 0] + 1

    def test_config_checks(self):
        self.assertRaises(Core.KnownUnknown, Network.TrainConfig, 'rmsprop')
        self.assertRaises(DomainError, Network.TrainConfig, 'adam', -1)
        self.assertRaises(DomainError, Network.TrainConfig, 'adam', 1e-3, 1.5)
        self.assertRaises(DomainError, Network.TrainConfig, 'adam', 1e-3, 0, 0)

        cfg = Network.TrainConfig('sgd', 0.1, -1.0)
        self.assertAlmostEqual(cfg.rate, 0.1 * numpy.exp(-1.0))

        drawn = cfg.with_random_multiplier(Core.makeGenerator(1))
        self.assertTrue(-2 <= drawn.lr_multiplier <= 1)
        self.assertEqual(cfg.lr_multiplier, -1.0)

    def test_zero_rate(self):
        '''A zero learning rate leaves the student alone'''
        X, y = self.line()
        net = random_net(60, 1, (4, ))
        cfg = Network.TrainConfig('adam', 0.0, 0.0, 10, 50, seed=1, record_every=10)
        trace = Network.train(net, Network.FixedData(X, y), cfg, (X, y))

        self.assertTrue(numpy.array_equal(Network.flatten(trace.network), Network.flatten(net)))
        self.assertEqual([row['step'] for row in trace.rows], [0, 10, 20, 30, 40, 50])

    def test_line_fit(self):
        '''One active unit learns a line'''
        X, y = self.line()
        net = Network.ReluNetwork([[[1.0]]], [[0.0]], [0.5])
        cfg = Network.TrainConfig('sgd', 0.05, 0.0, 100, 10000, seed=2, record_every=1000)
        trace = Network.train(net, Network.FixedData(X, y), cfg, (X, y))

        self.assertFalse(trace.diverged)
        self.assertTrue(trace.final_test_mse <= 1e-4, trace.final_test_mse)
        self.assertTrue(trace.rows[-1]['train_mse'] < trace.rows[0]['train_mse'])

    def test_deterministic(self):
        '''Equal seeds give identical traces'''
        sampler = Manifold.EuclideanSpace(3)
        target = random_net(61, 3, (5, ))
        X_test = sampler.sample(50, Core.makeGenerator(3))
        eval_set = (X_test, Network.forward(target, X_test))
        cfg = Network.TrainConfig('adam', 1e-2, 0.0, 20, 200, seed=4, fresh_batches=True, record_every=50)

        traces = [Network.train(random_net(62, 3, (10, )), Network.FreshData(sampler, target), cfg, eval_set)
                  for i in range(2)]

        self.assertEqual(traces[0].rows, traces[1].rows)
        self.assertTrue(numpy.array_equal(Network.flatten(traces[0].network), Network.flatten(traces[1].network)))

    def test_divergence(self):
        '''A wild learning rate ends in a flagged, truncated trace'''
        rng = Core.makeGenerator(5)
        X, y = rng.standard_normal((50, 3)), rng.standard_normal(50)
        cfg = Network.TrainConfig('sgd', 1e10, 0.0, 50, 200, seed=6, record_every=1)

        with numpy.errstate(all='ignore'):
            trace = Network.train(random_net(63, 3, (8, )), Network.FixedData(X, y), cfg, (X, y))

        self.assertTrue(trace.diverged)
        self.assertTrue(trace.network is None)
        self.assertTrue(len(trace.rows) < 201)
        self.assertTrue(all(numpy.isfinite(row['test_mse']) for row in trace.rows))
