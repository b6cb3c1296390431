from unittest import TestCase

import numpy

from ManifoldLab import Core

class Frob:
    def __init__(self, frob='no'):
        self.frob = frob

class CoreTests(TestCase):

    def test_same_seed_same_stream(self):
        '''Integer seeds replay exactly'''
        a = Core.makeGenerator(17).standard_normal(5)
        b = Core.makeGenerator(17).standard_normal(5)
        self.assertTrue(numpy.array_equal(a, b))

    def test_generator_passes_through(self):
        rng = numpy.random.default_rng(3)
        self.assertTrue(Core.makeGenerator(rng) is rng)

    def test_missing_seed(self):
        self.assertRaises(Core.KnownUnknown, Core.makeGenerator, None)

    def test_split_streams_differ(self):
        '''Split streams are reproducible and not copies of each other'''
        first = [g.integers(0, 2**32, 4).tolist() for g in Core.splitGenerators(5, 3)]
        again = [g.integers(0, 2**32, 4).tolist() for g in Core.splitGenerators(5, 3)]

        self.assertEqual(first, again)
        self.assertEqual(len(set(tuple(s) for s in first)), 3)

    def test_child_seeds(self):
        seeds = Core.childSeeds(99, 6)
        self.assertEqual(seeds, Core.childSeeds(99, 6))
        self.assertEqual(len(set(seeds)), 6)
        self.assertTrue(all(isinstance(s, int) and s >= 0 for s in seeds))

    def test_domain_error_is_value_error(self):
        self.assertTrue(issubclass(Core.DomainError, ValueError))
        self.assertTrue(issubclass(Core.DomainError, Core.KnownUnknown))

    def test_load_class_path(self):
        '''Class paths name a module and an object in it'''
        _class = Core.loadClassPath(__name__ + ':Frob')
        self.assertEqual(_class(frob='yes').frob, 'yes')

        self.assertRaises(Core.KnownUnknown, Core.loadClassPath, __name__ + '.Frob')
        self.assertRaises(Core.KnownUnknown, Core.loadClassPath, 'no_such_module_here:Frob')
