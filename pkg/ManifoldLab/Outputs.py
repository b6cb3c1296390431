""" The output bits of ManifoldLab.

An Output is where a run leaves its files: the trace CSV, the summary JSON
and, written last, the run manifest. Two outputs are built in, and others
can be pulled in dynamically by class name.

Built-in outputs:
- test
- disk

Example built-in output, for JSON configuration file:

    "output": {
      "name": "Disk",
      "path": "runs/learnable",
      "umask": "0022"
    }

Example external output, for JSON configuration file:

    "output": {
      "class": "Module:Classname",
      "kwargs": {"frob": "yes"}
    }

- The "class" value is split up into module and classname, and dynamically
  included. If this doesn't work for some reason, ManifoldLab will fail
  loudly to let you know.
- The "kwargs" value is fed to the class constructor as a dictionary of
  keyword args.

An output must provide these methods: save(name, body) and read(name),
where name is a plain file name like "trace.csv" and body is bytes. It
also keeps a list of saved names in "files".
"""

import csv
import io
import logging
import os
from math import isinf, isnan
from tempfile import mkstemp
from os.path import exists, join as pathjoin

import numpy

try:
    from simplejson import dumps as json_dumps, loads as json_loads
except ImportError:
    from json import dumps as json_dumps, loads as json_loads

from .Core import KnownUnknown

TRACE_FIELDS = ['run', 'step', 'train_mse', 'test_mse', 'lr']

def getOutputByName(name):
    """ Retrieve an output class by name.

        Raise an exception if the name doesn't work out.
    """
    if name.lower() == 'test':
        return Test

    elif name.lower() == 'disk':
        return Disk

    raise KnownUnknown('"%s" is not an output I know about. Here are some that I do know about: disk, test.' % name)

class Test:
    """ Simple output that doesn't write anything to disk.

        Saved bodies are kept in memory for read(), and activity is
        optionally logged.

        Example configuration:

            "output": {
              "name": "Test",
              "verbose": true
            }
    """
    def __init__(self, logfunc=None):
        self.logfunc = logfunc
        self.bodies = {}
        self.files = []
        self.path = None

    def save(self, name, body):
        if self.logfunc:
            self.logfunc('Test output save: %s, %d bytes' % (name, len(body)))

        if name not in self.bodies:
            self.files.append(name)

        self.bodies[name] = body

    def read(self, name):
        return self.bodies.get(name)

class Disk:
    """ Writes run files into one directory.

        Example configuration:

            "output": {
              "name": "Disk",
              "path": "runs/learnable",
              "umask": "0022"
            }

        Extra parameters:
        - path: required local directory path where files should be stored.
        - umask: optional string representation of octal permission mask
          for stored files. Defaults to 0022.

        Every file is written to a temporary name in the same directory and
        renamed into place, so that a reader never sees half of a manifest.
    """
    def __init__(self, path, umask=0o022):
        self.path = path
        self.umask = int(umask)
        self.files = []

    def save(self, name, body):
        fullpath = pathjoin(self.path, name)

        try:
            umask_old = os.umask(self.umask)
            os.makedirs(self.path, 0o777&~self.umask)
        except OSError as e:
            if e.errno != 17:
                raise
        finally:
            os.umask(umask_old)

        fh, tmp_path = mkstemp(dir=self.path, suffix='.' + name.split('.')[-1])
        os.write(fh, body)
        os.close(fh)

        try:
            os.rename(tmp_path, fullpath)
        except OSError:
            os.unlink(fullpath)
            os.rename(tmp_path, fullpath)

        os.chmod(fullpath, 0o666&~self.umask)

        if name not in self.files:
            self.files.append(name)

        logging.debug('ManifoldLab.Outputs.Disk.save() wrote %s', fullpath)

    def read(self, name):
        fullpath = pathjoin(self.path, name)

        if not exists(fullpath):
            return None

        with open(fullpath, 'rb') as file:
            return file.read()

def plain(value):
    """ Convert numpy scalars and arrays to plain Python values, non-finite floats to None.
    """
    if isinstance(value, dict):
        return dict((str(k), plain(v)) for (k, v) in value.items())

    elif isinstance(value, (list, tuple)):
        return [plain(v) for v in value]

    elif isinstance(value, numpy.ndarray):
        return plain(value.tolist())

    elif isinstance(value, (bool, numpy.bool_)):
        return bool(value)

    elif isinstance(value, (int, numpy.integer)):
        return int(value)

    elif isinstance(value, (float, numpy.floating)):
        return None if isnan(value) or isinf(value) else float(value)

    return value

def encodeJSON(value):
    return json_dumps(plain(value), indent=2, sort_keys=True).encode('utf8')

def encodeCSV(fieldnames, rows):
    """ Encode dictionaries as CSV with a fixed header; floats get full precision.
    """
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, extrasaction='ignore', lineterminator='\n')
    writer.writeheader()

    for row in rows:
        writer.writerow(dict((k, repr(float(v)) if isinstance(v, (float, numpy.floating)) else v)
                             for (k, v) in plain(row).items()))

    return buffer.getvalue().encode('utf8')

def saveJSON(output, name, value):
    output.save(name, encodeJSON(value))

def saveCSV(output, name, fieldnames, rows):
    output.save(name, encodeCSV(fieldnames, rows))

class RunManifest:
    """ What a run was, where its files went and how it turned out.

        The config snapshot holds the configuration file's bytes unchanged; they
        are saved on their own as config.json and as text in the manifest.
    """
    def __init__(self, kind, seed, config_bytes, version, wall_clock, files, metrics, flags):
        self.kind = kind
        self.seed = seed
        self.config_bytes = config_bytes
        self.version = version
        self.wall_clock = wall_clock
        self.files = list(files)
        self.metrics = metrics
        self.flags = list(flags)

    @property
    def flagged(self):
        return bool(self.flags)

    @property
    def status(self):
        return 'flagged' if self.flags else 'ok'

    def to_dict(self):
        config = None if self.config_bytes is None else self.config_bytes.decode('utf8')

        return dict(kind=self.kind, seed=self.seed, config=config, version=self.version,
                    wall_clock=self.wall_clock, files=self.files, metrics=self.metrics,
                    flags=self.flags, status=self.status)

    @staticmethod
    def from_dict(manifest_dict):
        config = manifest_dict['config']

        return RunManifest(manifest_dict['kind'], manifest_dict['seed'], None if config is None else config.encode('utf8'),
                           manifest_dict['version'], manifest_dict['wall_clock'], manifest_dict['files'],
                           manifest_dict['metrics'], manifest_dict['flags'])

def writeManifest(output, manifest):
    """ Save the config snapshot, then the manifest, which lists every file including itself.
    """
    names = ['manifest.json']

    if manifest.config_bytes is not None:
        output.save('config.json', manifest.config_bytes)
        names.insert(0, 'config.json')

    manifest.files += [name for name in names if name not in manifest.files]

    saveJSON(output, 'manifest.json', manifest.to_dict())

def readSummary(dirpath):
    """ Load summary.json from a run directory.
    """
    fullpath = pathjoin(dirpath, 'summary.json')

    if not exists(fullpath):
        raise KnownUnknown('No summary.json in "%s", is it a run directory?' % dirpath)

    with open(fullpath, 'r') as file:
        return json_loads(file.read())

def _numbers(summary, prefix=''):
    """ Flatten numeric leaves of a summary into {"a.b": value}.
    """
    numbers = {}

    for (key, value) in summary.items():
        if isinstance(value, dict):
            numbers.update(_numbers(value, prefix + key + '.'))

        elif isinstance(value, (int, float)) and not isinstance(value, bool):
            numbers[prefix + key] = float(value)

    return numbers

def summarize(dirpaths, output):
    """ Aggregate numeric summary metrics across runs, typically one run per seed.

        Writes aggregate.csv and aggregate.json with median, mean, min and max
        of every metric present in at least one run, and returns the rows.
    """
    collected = {}

    for dirpath in dirpaths:
        for (metric, value) in _numbers(readSummary(dirpath)).items():
            collected.setdefault(metric, []).append(value)

    rows = [dict(metric=metric, runs=len(values), median=float(numpy.median(values)), mean=sum(values) / len(values),
                 min=min(values), max=max(values))
            for (metric, values) in sorted(collected.items())]

    saveCSV(output, 'aggregate.csv', ['metric', 'runs', 'median', 'mean', 'min', 'max'], rows)
    saveJSON(output, 'aggregate.json', dict(runs=list(dirpaths), metrics=rows))

    logging.info('ManifoldLab.Outputs.summarize() aggregated %d metrics over %d runs', len(rows), len(dirpaths))

    return rows
