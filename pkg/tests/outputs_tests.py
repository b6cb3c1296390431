import os
import stat
from unittest import TestCase

import numpy

try:
    from simplejson import loads as json_loads
except ImportError:
    from json import loads as json_loads

from ManifoldLab import Outputs
from ManifoldLab.Core import KnownUnknown

from . import utils

def write_run(dirpath, metrics):
    Outputs.saveJSON(Outputs.Disk(dirpath), 'summary.json', dict(kind='sq', seed=1, metrics=metrics, flags=[]))

class OutputTests(TestCase):

    def test_by_name(self):
        self.assertTrue(Outputs.getOutputByName('TEST') is Outputs.Test)
        self.assertTrue(Outputs.getOutputByName('disk') is Outputs.Disk)
        self.assertRaises(KnownUnknown, Outputs.getOutputByName, 'Memcache')

    def test_test_output(self):
        '''Bodies are kept in memory and saves are logged'''
        messages = []
        output = Outputs.Test(messages.append)

        output.save('trace.csv', b'step\n')
        output.save('summary.json', b'{}')
        output.save('trace.csv', b'step\n0\n')

        self.assertEqual(output.files, ['trace.csv', 'summary.json'])
        self.assertEqual(output.read('trace.csv'), b'step\n0\n')
        self.assertTrue(output.read('manifest.json') is None)
        self.assertEqual(len(messages), 3)
        self.assertTrue(output.path is None)

class DiskTests(utils.TempDirMixin, TestCase):

    def test_save_and_read(self):
        '''Files land in a new directory with umask permissions and no leftovers'''
        path = os.path.join(self.tmpdir, 'runs', 'sq')
        output = Outputs.Disk(path, 0o022)

        output.save('sq.csv', b'n_b,t\n4,2\n')
        output.save('sq.csv', b'n_b,t\n6,3\n')

        self.assertEqual(output.read('sq.csv'), b'n_b,t\n6,3\n')
        self.assertTrue(output.read('pairwise.csv') is None)
        self.assertEqual(output.files, ['sq.csv'])
        self.assertEqual(os.listdir(path), ['sq.csv'])
        self.assertEqual(stat.S_IMODE(os.stat(os.path.join(path, 'sq.csv')).st_mode), 0o644)

class EncodingTests(TestCase):

    def test_plain(self):
        value = {'a': numpy.float64(1.5), 'b': numpy.int64(3), 'c': numpy.array([1, 2]),
                 'd': float('nan'), 'e': [numpy.bool_(True), (float('inf'), 'x')], 4: None}

        self.assertEqual(Outputs.plain(value), {'a': 1.5, 'b': 3, 'c': [1, 2], 'd': None,
                                                'e': [True, [None, 'x']], '4': None})
        self.assertTrue(type(Outputs.plain(numpy.int64(3))) is int)

    def test_json(self):
        self.assertEqual(json_loads(Outputs.encodeJSON({'x': numpy.float32(0.5), 'y': numpy.nan}).decode('utf8')),
                         {'x': 0.5, 'y': None})

    def test_csv(self):
        '''Fixed header, full float precision, extra keys ignored'''
        rows = [dict(step=0, train_mse=0.1, test_mse=1 / 3.0, lr=numpy.float64(1e-3), extra='no'),
                dict(step=10, train_mse=numpy.nan, test_mse=0.25, lr=1e-3)]
        lines = Outputs.encodeCSV(['step', 'train_mse', 'test_mse', 'lr'], rows).decode('utf8').splitlines()

        self.assertEqual(lines[0], 'step,train_mse,test_mse,lr')
        self.assertEqual(lines[1], '0,0.1,%r,0.001' % (1 / 3.0))
        self.assertEqual(lines[2], '10,,0.25,0.001')

class ManifestTests(TestCase):

    def manifest(self, config_bytes=b'{"kind": "sq", "seed": 2}', flags=()):
        return Outputs.RunManifest('sq', 2, config_bytes, '0.1.0', 1.5, ['sq.csv'], {'slope': 1.1}, flags)

    def test_status(self):
        self.assertEqual(self.manifest().status, 'ok')
        self.assertFalse(self.manifest().flagged)
        self.assertEqual(self.manifest(flags=['variance bound failed']).status, 'flagged')
        self.assertTrue(self.manifest(flags=['variance bound failed']).flagged)

    def test_round_trip(self):
        manifest = self.manifest(flags=['x'])
        copy = Outputs.RunManifest.from_dict(manifest.to_dict())

        self.assertEqual(copy.to_dict(), manifest.to_dict())
        self.assertEqual(copy.config_bytes, manifest.config_bytes)

    def test_write(self):
        '''The snapshot is saved unchanged, and the manifest lists itself last'''
        output = Outputs.Test()
        output.save('sq.csv', b'')
        Outputs.writeManifest(output, self.manifest())

        self.assertEqual(output.read('config.json'), b'{"kind": "sq", "seed": 2}')

        written = json_loads(output.read('manifest.json').decode('utf8'))
        self.assertEqual(written['files'], ['sq.csv', 'config.json', 'manifest.json'])
        self.assertEqual(written['status'], 'ok')
        self.assertEqual(written['config'], '{"kind": "sq", "seed": 2}')

    def test_write_without_snapshot(self):
        output = Outputs.Test()
        Outputs.writeManifest(output, self.manifest(config_bytes=None))

        self.assertEqual(output.files, ['manifest.json'])
        self.assertTrue(json_loads(output.read('manifest.json').decode('utf8'))['config'] is None)

class SummarizeTests(utils.TempDirMixin, TestCase):

    def test_summarize(self):
        '''Median, mean, min and max of every metric across runs'''
        dirpaths = [os.path.join(self.tmpdir, 'seed-%d' % i) for i in range(3)]

        for (dirpath, slope) in zip(dirpaths, (1.0, 1.2, 2.0)):
            write_run(dirpath, {'slope': slope, 'queries': {'n_b=4': 3}, 'passed': True})

        write_run(dirpaths[0], {'slope': 1.0, 'queries': {'n_b=4': 3, 'n_b=6': 7}, 'passed': True})

        output = Outputs.Test()
        rows = dict((row['metric'], row) for row in Outputs.summarize(dirpaths, output))

        self.assertEqual(rows['metrics.slope']['runs'], 3)
        self.assertAlmostEqual(rows['metrics.slope']['median'], 1.2)
        self.assertAlmostEqual(rows['metrics.slope']['mean'], 4.2 / 3)
        self.assertEqual((rows['metrics.slope']['min'], rows['metrics.slope']['max']), (1.0, 2.0))
        self.assertEqual(rows['metrics.queries.n_b=6']['runs'], 1)
        self.assertFalse('metrics.passed' in rows)

        self.assertEqual(output.files, ['aggregate.csv', 'aggregate.json'])
        self.assertEqual(json_loads(output.read('aggregate.json').decode('utf8'))['runs'], dirpaths)

    def test_not_a_run(self):
        self.assertRaises(KnownUnknown, Outputs.readSummary, self.tmpdir)
