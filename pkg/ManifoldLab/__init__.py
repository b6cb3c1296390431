""" A numerical lab for learning on manifolds.

ManifoldLab builds the objects that decide whether a function on a
low-dimensional manifold is easy or hard to learn: Gray-code space-filling
curves with a bounded reach, (epsilon, delta)-nets drawn from samplers,
ReLU networks and their training loop, parity targets lifted onto curves,
a statistical-query oracle, and a stable-rank intrinsic dimension estimate.

Every run is described by one JSON configuration file and one integer seed;
see ManifoldLab.Config for the file format and ManifoldLab.Experiments for
the experiment kinds. A run is started like this:

    config = ManifoldLab.parseConfig('manifoldlab.cfg')
    manifest = ManifoldLab.runExperiment(config)
"""
import os.path

__version__ = open(os.path.join(os.path.dirname(__file__), 'VERSION')).read().strip()

from os.path import dirname, realpath
from urllib.parse import urlparse
from urllib.request import urlopen

try:
    from simplejson import loads as json_loads
except ImportError:
    from json import loads as json_loads

from . import Core
from . import Config
from . import Experiments

def readConfig(configHandle):
    """ Read a JSON configuration file and return (config_dict, dirpath, config_bytes).

        configHandle is a local path or a URL. The dirpath is the URL of the
        containing directory, used to resolve relative paths.
    """
    scheme, host, path, p, q, f = urlparse(configHandle)

    if scheme == '':
        scheme = 'file'
        path = realpath(path)

    if scheme == 'file':
        with open(path, 'rb') as file:
            config_bytes = file.read()
    else:
        config_bytes = urlopen(configHandle).read()

    try:
        config_dict = json_loads(config_bytes.decode('utf8'))
    except ValueError as e:
        raise Core.KnownUnknown('Configuration "%s" is not valid JSON: %s' % (configHandle, e))

    if not isinstance(config_dict, dict):
        raise Core.KnownUnknown('Configuration "%s" should hold a JSON object.' % configHandle)

    dirpath = '%s://%s%s' % (scheme, host, dirname(path).rstrip('/') + '/')

    return config_dict, dirpath, config_bytes

def parseConfig(configHandle):
    """ Parse a configuration file and return a Configuration object.

        Configuration could be a Python dictionary or a file formatted as JSON.
        In both cases it needs a "kind" and a "seed", and usually "parameters":

          {
            "kind": "geometry",
            "seed": 17,
            "parameters": { ... }
          }

        The full path to the file is significant, used to resolve any
        relative paths found in the configuration. The raw bytes of a file
        are kept on the configuration, so that a run can save an identical
        snapshot of what it was asked to do.
    """
    if isinstance(configHandle, dict):
        return Config.buildConfiguration(configHandle, '.')

    config_dict, dirpath, config_bytes = readConfig(configHandle)

    return Config.buildConfiguration(config_dict, dirpath, config_bytes)

def runExperiment(config):
    """ Run a Configuration and return its Outputs.RunManifest.

        The manifest is flagged when the run completed but one of its
        results cannot be trusted, e.g. a diverged student.
    """
    return Experiments.getExperimentByName(config.kind)(config)
