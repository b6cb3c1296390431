from unittest import TestCase

import numpy

from ManifoldLab import Core, Manifold, Network, Queries
from ManifoldLab.Core import DomainError

def parity_eta(d):
    ''' Pairs with x = 0, x' = 0 or x = x' are the only non-uniform ones.
    '''
    return 3 * 2.0 ** -d - 2 * 4.0 ** -d

class ParityClassTests(TestCase):

    def test_size(self):
        self.assertEqual(Queries.ParityClass(6).size, 64)
        self.assertEqual(Queries.ParityClass(4, [[0], [1, 2]]).size, 2)
        self.assertRaises(DomainError, Queries.ParityClass, 0)
        self.assertRaises(DomainError, Queries.ParityClass, 13)

    def test_labels(self):
        function_class = Queries.ParityClass(3)
        points, weights = function_class.support()
        labels, ok = function_class.labels(points)

        self.assertEqual(labels.shape, (8, 8))
        self.assertTrue(numpy.all(ok))
        self.assertAlmostEqual(weights.sum(), 1.0)

        for index in range(function_class.size):
            self.assertTrue(numpy.array_equal(labels[index], function_class.evaluate(index, points)))

    def test_off_alphabet(self):
        labels, ok = Queries.ParityClass(2).labels([[0, 1], [0.5, 1]])
        self.assertEqual(ok.tolist(), [True, False])

class ManifoldParityClassTests(TestCase):

    def test_size_and_members(self):
        manifold = Manifold.ManifoldSpec(0.5, 1, 8)
        function_class = Queries.ManifoldParityClass(manifold)

        self.assertEqual(function_class.truncation, 4)
        self.assertEqual(function_class.prefix_len, 4)
        self.assertEqual(function_class.size, 16)

    def test_evaluate_matches_target(self):
        '''Members agree with their hard target networks on the curve'''
        manifold = Manifold.ManifoldSpec(0.5, 1, 8)
        function_class = Queries.ManifoldParityClass(manifold)
        X = function_class.sampler.sample(2000, Core.makeGenerator(1))

        for index in (1, 5, 15):
            expected = Network.forward(function_class.target(index), X)
            self.assertTrue(numpy.abs(function_class.evaluate(index, X) - expected).max() <= 1e-9)

    def test_bad_truncation(self):
        manifold = Manifold.ManifoldSpec(0.5, 1, 8)
        self.assertRaises(DomainError, Queries.ManifoldParityClass, manifold, 0)
        self.assertRaises(DomainError, Queries.ManifoldParityClass, manifold, 8)

class NetworkClassTests(TestCase):

    def test_support_passes_through(self):
        sampler = Manifold.BooleanCube(3)
        networks = [Network.init_network(3, [4], Core.makeGenerator(2))]
        function_class = Queries.NetworkClass(sampler, networks)

        self.assertEqual(function_class.size, 1)
        self.assertEqual(len(function_class.support()[0]), 8)
        self.assertEqual(function_class.pair_table()[0].shape, (1, 8))

    def test_empty(self):
        self.assertRaises(DomainError, Queries.NetworkClass, Manifold.BooleanCube(3), [])

class OracleTests(TestCase):

    def test_constant_query(self):
        oracle = Queries.SqOracle(Queries.ParityClass(4), 3, 0.1, rng=Core.makeGenerator(3))

        self.assertEqual(oracle.query(Queries.ConstantQuery(1.0)), 1.0)
        self.assertEqual(oracle.query_count, 1)

    def test_rejected_query(self):
        '''Out of range queries raise and are not counted'''
        for policy in ('honest', 'adversarial'):
            oracle = Queries.SqOracle(Queries.ParityClass(4), 3, 0.1, policy, Core.makeGenerator(4))

            self.assertRaises(DomainError, Queries.query, oracle, Queries.ConstantQuery(2.0))
            self.assertEqual(oracle.query_count, 0)

    def test_orthogonal_parities(self):
        '''A wrong correlation query gets the class average back'''
        function_class = Queries.ParityClass(8)
        oracle = Queries.SqOracle(function_class, 7, 0.1, 'adversarial', Core.makeGenerator(24))

        for index in (0, 1, 100, 255):
            self.assertAlmostEqual(oracle.query(Queries.CorrelationQuery(function_class, index)), 2.0 ** -8)

        self.assertAlmostEqual(oracle.query(Queries.CorrelationQuery(function_class, 7)), 1.0)
        self.assertEqual(oracle.query_count, 5)

    def test_adversarial_soundness(self):
        '''Adversarial answers stay within tau of the truth for the hidden target'''
        function_class = Queries.ParityClass(6)
        oracle = Queries.SqOracle(function_class, 9, 0.05, 'adversarial', Core.makeGenerator(25))

        for g in Queries.random_linear_queries(6, 50, Core.makeGenerator(5)):
            truth = oracle.class_answers(g)[9]
            self.assertTrue(abs(oracle.query(g) - truth) <= 0.05 + 1e-12)

    def test_adversarial_repeats(self):
        '''Repeated queries get identical answers, on sampled points too'''
        function_class = Queries.ManifoldParityClass(Manifold.ManifoldSpec(0.5, 1, 6))
        oracle = Queries.SqOracle(function_class, 2, 0.1, 'adversarial', Core.makeGenerator(6), batch=500)
        g = Queries.random_linear_queries(function_class.sampler.spec.ambient_n, 1, Core.makeGenerator(7))[0]

        self.assertEqual(oracle.query(g), oracle.query(g))

    def test_honest_accuracy(self):
        '''Honest answers are within tau of the exact expectation'''
        function_class = Queries.ParityClass(6)
        honest = Queries.SqOracle(function_class, 11, 0.1, 'honest', Core.makeGenerator(8))
        exact = Queries.SqOracle(function_class, 11, 0.1, 'adversarial', Core.makeGenerator(26))

        for g in Queries.random_linear_queries(6, 5, Core.makeGenerator(9)):
            self.assertTrue(abs(honest.query(g) - exact.class_answers(g)[11]) <= 0.1)

    def test_bad_arguments(self):
        function_class = Queries.ParityClass(4)
        self.assertRaises(DomainError, Queries.SqOracle, function_class, 0, 0, rng=1)
        self.assertRaises(DomainError, Queries.SqOracle, function_class, 16, 0.1, rng=1)
        self.assertRaises(Core.KnownUnknown, Queries.SqOracle, function_class, 0, 0.1, 'lenient', 1)

class PairwiseIndependenceTests(TestCase):

    def test_exact_parity(self):
        report = Queries.pairwise_independence(Queries.ParityClass(6))

        self.assertEqual(report.method, 'exact')
        self.assertAlmostEqual(report.eta, parity_eta(6))
        self.assertEqual(report.to_dict()['alphabet'], [0, 1])

    def test_monte_carlo_parity(self):
        '''Monte Carlo agrees with enumeration'''
        function_class = Queries.ParityClass(6)
        report = Queries.pairwise_independence(function_class, mode='monte-carlo', trials=20000, rng=Core.makeGenerator(10))

        self.assertEqual(report.method, 'monte-carlo')
        self.assertEqual(report.trials, 20000)
        self.assertTrue(abs(report.eta - parity_eta(6)) <= 4 * report.stderr + 1e-3)

    def test_manifold_class(self):
        '''n_b = 8, t = 4: exact and sampled eta agree, under the prefix bound'''
        function_class = Queries.ManifoldParityClass(Manifold.ManifoldSpec(0.5, 1, 8), 4)

        exact = Queries.pairwise_independence(function_class)
        sampled = Queries.pairwise_independence(function_class, mode='monte-carlo', trials=20000, rng=Core.makeGenerator(11))

        self.assertEqual(exact.method, 'exact')
        self.assertTrue(exact.eta <= 2.0 ** -4 + 8 * 2.0 ** -4)
        self.assertTrue(abs(exact.eta - sampled.eta) <= 4 * sampled.stderr + 1e-3)

    def test_too_many_bits(self):
        function_class = Queries.ManifoldParityClass(Manifold.ManifoldSpec(0.5, 1, 10))

        with self.assertLogs(level='WARNING'):
            report = Queries.pairwise_independence(function_class, trials=2000, rng=Core.makeGenerator(12))

        self.assertEqual(report.method, 'monte-carlo')

    def test_singleton(self):
        '''A single function is never product-uniform'''
        report = Queries.pairwise_independence(Queries.ParityClass(4, [[0, 1]]))
        self.assertEqual(report.eta, 1.0)

    def test_unknown_mode(self):
        self.assertRaises(Core.KnownUnknown, Queries.pairwise_independence, Queries.ParityClass(3), mode='guess')

class VarianceBoundTests(TestCase):

    def test_random_queries(self):
        '''100 random bounded queries over eight-bit parities all pass'''
        function_class = Queries.ParityClass(8)
        eta = Queries.pairwise_independence(function_class).eta
        report = Queries.variance_bound_check(function_class, Queries.random_linear_queries(8, 100, Core.makeGenerator(13)), eta)

        self.assertTrue(report['passed'])
        self.assertEqual(len(report['rows']), 100)
        self.assertTrue(all(row['sigma'] == 0 for row in report['rows']))

    def test_constant_and_correlation(self):
        function_class = Queries.ParityClass(8)
        eta = Queries.pairwise_independence(function_class).eta
        queries = [Queries.ConstantQuery(0.3), Queries.CorrelationQuery(function_class, 42)]
        rows = Queries.variance_bound_check(function_class, queries, eta)['rows']

        self.assertAlmostEqual(rows[0]['variance'], 0.0)
        self.assertAlmostEqual(rows[1]['variance'], 2.0 ** -8 * (1 - 2.0 ** -8))
        self.assertTrue(rows[1]['variance'] <= 2 * eta)

    def test_sampled_manifold(self):
        function_class = Queries.ManifoldParityClass(Manifold.ManifoldSpec(0.5, 1, 6))
        eta = Queries.pairwise_independence(function_class).eta
        queries = Queries.random_linear_queries(function_class.sampler.spec.ambient_n, 10, Core.makeGenerator(14))
        report = Queries.variance_bound_check(function_class, queries, eta, trials=5000, rng=Core.makeGenerator(15))

        self.assertTrue(report['passed'])
        self.assertTrue(all(row['sigma'] >= 0 for row in report['rows']))

class DistinguishingTests(TestCase):

    def test_worst_case_scan(self):
        '''Every wrong parity is queried before the right one'''
        result = Queries.sq_distinguishing_experiment(Queries.ParityClass(6), 0.1, target_index=20, rng=Core.makeGenerator(27))

        self.assertTrue(result['success'])
        self.assertEqual(result['queries_used'], 2 ** 6 - 1)
        self.assertEqual(result['class_size'], 64)

    def test_random_order(self):
        learner = Queries.CorrelationScan('random', rng=Core.makeGenerator(16))
        result = Queries.sq_distinguishing_experiment(Queries.ParityClass(6), 0.1, learner, rng=Core.makeGenerator(17))

        self.assertTrue(result['success'])
        self.assertTrue(result['queries_used'] <= 63)

    def test_class_of_one(self):
        result = Queries.sq_distinguishing_experiment(Queries.ParityClass(4, [[2]]), 0.1, rng=Core.makeGenerator(18))

        self.assertTrue(result['success'])
        self.assertTrue(result['queries_used'] <= 1)

    def test_scaling(self):
        '''Query counts double with every extra prefix bit'''
        rows, slope = Queries.scaling_experiment([4, 6, 8, 10], 0.1, Core.makeGenerator(19))

        self.assertEqual([row['t'] for row in rows], [2, 3, 4, 5])
        self.assertTrue(all(row['success'] for row in rows))
        self.assertTrue(abs(slope - 1) <= 0.2, slope)

    def test_lower_bound(self):
        self.assertAlmostEqual(Queries.query_lower_bound(0.1, 0.01), 0.5)
        self.assertEqual(Queries.query_lower_bound(0.1, 0), float('inf'))

class QueryTests(TestCase):

    def test_gradient_query(self):
        '''Unclipped gradient queries average to the batch gradient'''
        net = Network.init_network(4, [6], Core.makeGenerator(20))
        rng = Core.makeGenerator(21)
        X, y = rng.standard_normal((40, 4)), rng.standard_normal(40)

        g = Queries.gradient_query(net, 0, 2, 1, scale=1e6)
        self.assertAlmostEqual(g(X, y).mean() * 1e6, Network.mse_grad(net, X, y).weights[0][2, 1])

        clipped = Queries.gradient_query(net, 1, 3, scale=1e-3)(X, y)
        self.assertTrue(numpy.abs(clipped).max() <= 1)

        self.assertRaises(DomainError, Queries.gradient_query, net, 0, 0, 0, 0)

    def test_random_linear_queries(self):
        a = Queries.random_linear_queries(5, 3, Core.makeGenerator(22))
        b = Queries.random_linear_queries(5, 3, Core.makeGenerator(22))
        X = Core.makeGenerator(23).standard_normal((100, 5))

        self.assertEqual(len(a), 3)

        for (g, h) in zip(a, b):
            self.assertTrue(numpy.array_equal(g(X, 1), h(X, 1)))
            self.assertTrue(numpy.abs(g(X, 0)).max() <= 1)
