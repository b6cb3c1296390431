""" The configuration bits of ManifoldLab.

ManifoldLab configuration is stored in JSON files, one experiment per file.
The "kind" names the experiment and "parameters" holds its settings; every
run needs a "seed". There are examples of each in this minimal sample
configuration:

    {
      "kind": "learnable",
      "seed": 17,
      "output": {"name": "Disk", "path": "runs/learnable"},
      "parameters": {
        "ambient dims": [16, 32, 64],
        "steps": 2000
      }
    }

The contents of the "output" section are described in greater detail in the
ManifoldLab.Outputs module documentation. It defaults to {"name": "Test"}.

Known kinds, with their parameters and defaults:

- "learnable": "intrinsic dim" 10, "ambient dims" [16, 32, 64], "train size"
  1000, "test size" 2000, "student width" 100, "target width" null (meaning
  ceil(n/4)), "optimizer" "adam", "learning rate" 0.001, "randomize rate"
  true, "batch size" 100, "steps" 2000, "record every" 100, "threshold" 0.1.

- "hard": "code bits" [4, 8, 12, 16], "reach bound" 0.5, "intrinsic dim" 1,
  "truncation" null (meaning n_b/2), "parity subset" "full" (every prefix
  bit) or "random", "signed labels" true (train on 2f - 1), "student depth"
  1, "width multiplier" 2, "learning rate" 0.003, "steps" 4000, and
  "optimizer", "randomize rate", "batch size", "record every", "test size"
  and "threshold" as above. One step budget is shared by every n_b.

- "sq": "code bits" [4, 6, 8, 10], "tolerance" 0.1, "reach bound" 0.5,
  "batch" 2000, "parity dim" 8, "variance queries" 100, "pairwise trials"
  10000.

- "iddim": "spheres" [[20, 2], [20, 10], [100, 50], [100, 90]], "centers" 5,
  "sigma" null, "neighbors" null, "threshold" 0.1, "shift" "spectrum",
  "point cloud" null (a CSV path relative to the configuration), "cloud
  neighbors" null.

- "geometry": "clouds" 20, "cloud size" 1000, "epsilon" 0.1, "coupon bins"
  [2, 10, 100], "coupon trials" 1000, "sampler" null, "net epsilon" 0.1,
  "net delta" 0.05, "max samples" 1000000.

- "generate": "sampler" (required), "count" 1000, "target" null.

Samplers are configured the way outputs are, by "name" or by "class" and
"kwargs"; see ManifoldLab.Manifold for the built-in names. A "target" for
"generate" is {"kind": "hard", "subset": [...], "truncation": t} on a gray
curve sampler, or {"kind": "random", "width": w}.

Configuration also supports this additional setting:

- "logging": one of "debug", "info", "warning", "error" or "critical", as
  described in Python's logging module: http://docs.python.org/howto/logging.html

Any key not listed here is an error, so that a typo fails before any work
starts rather than silently falling back to a default.
"""

import sys
import logging
from os.path import join as pathjoin
from urllib.parse import urljoin, urlparse

try:
    from simplejson import dumps as json_dumps
except ImportError:
    from json import dumps as json_dumps

from . import Core
from . import Manifold
from . import Outputs
from . import Dimension

TRAINING = {'optimizer': 'adam', 'learning rate': 1e-3, 'randomize rate': True, 'batch size': 100,
            'steps': 2000, 'record every': 100, 'test size': 2000, 'threshold': 0.1}

KINDS = {
    'learnable': dict(TRAINING, **{'intrinsic dim': 10, 'ambient dims': [16, 32, 64], 'train size': 1000,
                                   'student width': 100, 'target width': None}),
    'hard': dict(TRAINING, **{'code bits': [4, 8, 12, 16], 'reach bound': 0.5, 'intrinsic dim': 1,
                              'truncation': None, 'parity subset': 'full', 'signed labels': True,
                              'student depth': 1, 'width multiplier': 2, 'learning rate': 3e-3, 'steps': 4000}),
    'sq': {'code bits': [4, 6, 8, 10], 'tolerance': 0.1, 'reach bound': 0.5, 'batch': 2000,
           'parity dim': 8, 'variance queries': 100, 'pairwise trials': 10000},
    'iddim': {'spheres': [list(row) for row in Dimension.SPHERE_SUITE], 'centers': 5, 'sigma': None,
              'neighbors': None, 'threshold': 0.1, 'shift': 'spectrum', 'point cloud': None,
              'cloud neighbors': None},
    'geometry': {'clouds': 20, 'cloud size': 1000, 'epsilon': 0.1, 'coupon bins': [2, 10, 100],
                 'coupon trials': 1000, 'sampler': None, 'net epsilon': 0.1, 'net delta': 0.05,
                 'max samples': 10**6},
    'generate': {'sampler': None, 'count': 1000, 'target': None},
    }

TOP_LEVEL = ('kind', 'seed', 'output', 'logging', 'parameters')

SAMPLER_KEYS = {
    'gray curve': ('reach bound', 'intrinsic dim', 'code bits'),
    'hypersphere': ('intrinsic dim', 'ambient dim', 'radius', 'random basis'),
    'torus': ('circles', 'radius', 'ambient dim'),
    'point': ('point', ),
    'boolean cube': ('dimension', ),
    'euclidean space': ('ambient dim', ),
    }

class Configuration:
    """ A complete experiment configuration.

        Attributes:

          kind:
            Experiment name, one of the keys of Config.KINDS.

          seed:
            Integer seed; every random stream of the run derives from it.

          output:
            Output instance, e.g. ManifoldLab.Outputs.Disk.
            See ManifoldLab.Outputs for details on what makes
            a usable output.

          parameters:
            Dictionary of experiment settings with defaults filled in,
            keyed by Python names ("batch size" becomes batch_size).

          dirpath:
            Local filesystem path for this configuration,
            useful for expanding relative paths.

          config_bytes:
            Raw bytes of the configuration file, or None for a dictionary.
    """
    def __init__(self, kind, seed, output, parameters, dirpath, config_bytes=None):
        self.kind = kind
        self.seed = seed
        self.output = output
        self.parameters = parameters
        self.dirpath = dirpath
        self.config_bytes = config_bytes

def buildConfiguration(config_dict, dirpath='.', config_bytes=None):
    """ Build a configuration dictionary into a Configuration object.

        The second argument is an optional dirpath that specifies where in the
        local filesystem the parsed dictionary originated, to make it possible
        to resolve relative paths.
    """
    scheme, h, path, p, q, f = urlparse(dirpath)

    if scheme in ('', 'file'):
        sys.path.insert(0, path)

    unknown = sorted(set(config_dict.keys()) - set(TOP_LEVEL))

    if unknown:
        raise Core.KnownUnknown('Unknown configuration keys %s. Here are some that I do know about: %s.'
                                % (', '.join('"%s"' % k for k in unknown), ', '.join(TOP_LEVEL)))

    kind = config_dict.get('kind')

    if kind not in KINDS:
        raise Core.KnownUnknown('"%s" is not an experiment kind I know about. Here are some that I do know about: %s.'
                                % (kind, ', '.join(sorted(KINDS))))

    if 'seed' not in config_dict or isinstance(config_dict['seed'], bool) or not isinstance(config_dict['seed'], int) \
       or config_dict['seed'] < 0:
        raise Core.KnownUnknown('A non-negative integer "seed" is required, every run must be replayable.')

    if 'logging' in config_dict:
        level = config_dict['logging'].upper()

        if hasattr(logging, level):
            logging.basicConfig(level=getattr(logging, level))

    output = _parseConfigOutput(config_dict.get('output', {'name': 'Test'}), dirpath)
    parameters = _parseConfigParameters(kind, config_dict.get('parameters', {}), dirpath)

    return Configuration(kind, config_dict['seed'], output, parameters, dirpath, config_bytes)

def enforcedLocalPath(relpath, dirpath, context='Path'):
    """ Return a forced local path, relative to a directory.

        Throw an error if the combination of path and directory seems to
        specify a remote path, e.g. "/path" and "http://example.com".
    """
    parsed_dir = urlparse(dirpath)
    parsed_rel = urlparse(relpath)

    if parsed_rel.scheme not in ('file', ''):
        raise Core.KnownUnknown('%s path must be a local file path, absolute or "file://", not "%s".' % (context, relpath))

    if parsed_dir.scheme not in ('file', '') and parsed_rel.scheme != 'file':
        raise Core.KnownUnknown('%s path must start with "file://" in a remote configuration ("%s" relative to %s)' % (context, relpath, dirpath))

    if parsed_rel.scheme == 'file':
        return parsed_rel.path

    if parsed_dir.scheme == 'file':
        return urljoin(parsed_dir.path, parsed_rel.path)

    return pathjoin(dirpath, relpath)

def _parseConfigOutput(output_dict, dirpath):
    """ Used by buildConfiguration() to parse just the output parts of a config.
    """
    if 'name' in output_dict:
        _class = Outputs.getOutputByName(output_dict['name'])
        kwargs = {}

        if _class is Outputs.Test:
            _checkKeys(output_dict, ('name', 'verbose'), 'Test output')

            if output_dict.get('verbose', False):
                kwargs['logfunc'] = lambda msg: sys.stderr.write(msg + '\n')

        elif _class is Outputs.Disk:
            _checkKeys(output_dict, ('name', 'path', 'umask'), 'Disk output')

            if 'path' not in output_dict:
                raise Core.KnownUnknown('Disk output needs a "path".')

            kwargs['path'] = enforcedLocalPath(output_dict['path'], dirpath, 'Disk output')

            if 'umask' in output_dict:
                kwargs['umask'] = int(output_dict['umask'], 8)

    elif 'class' in output_dict:
        _checkKeys(output_dict, ('class', 'kwargs'), 'Output')
        _class = Core.loadClassPath(output_dict['class'])
        kwargs = output_dict.get('kwargs', {})
        kwargs = dict( [(str(k), v) for (k, v) in kwargs.items()] )

    else:
        raise Core.KnownUnknown('Missing required output name or class: %s' % json_dumps(output_dict))

    return _class(**kwargs)

def parseConfigSampler(sampler_dict, rng):
    """ Build a sampler from its configuration; rng draws random sphere bases.
    """
    if 'name' in sampler_dict:
        name = sampler_dict['name'].lower()
        _class = Manifold.getSamplerByName(name)
        _checkKeys(sampler_dict, ('name', ) + SAMPLER_KEYS[name], 'The %s sampler' % name)

        try:
            if _class is Manifold.GrayCurve:
                spec = Manifold.ManifoldSpec(sampler_dict['reach bound'], sampler_dict.get('intrinsic dim', 1),
                                             sampler_dict['code bits'])
                return Manifold.GrayCurve(spec)

            elif _class is Manifold.HypersphereSampler:
                d, n, radius = sampler_dict['intrinsic dim'], sampler_dict['ambient dim'], sampler_dict.get('radius', 1.0)

                if sampler_dict.get('random basis', True):
                    return Manifold.HypersphereSampler(Manifold.HypersphereSpec.random(d, n, rng, radius))

                return Manifold.HypersphereSampler(Manifold.HypersphereSpec(d, n, None, radius))

            elif _class is Manifold.TorusSampler:
                return Manifold.TorusSampler(sampler_dict['circles'], sampler_dict.get('radius', 1.0),
                                             sampler_dict.get('ambient dim'))

            elif _class is Manifold.PointSampler:
                return Manifold.PointSampler(sampler_dict['point'])

            elif _class is Manifold.BooleanCube:
                return Manifold.BooleanCube(sampler_dict['dimension'])

            else:
                return Manifold.EuclideanSpace(sampler_dict['ambient dim'])

        except KeyError as e:
            raise Core.KnownUnknown('The %s sampler is missing required key %s' % (name, e))

    elif 'class' in sampler_dict:
        _checkKeys(sampler_dict, ('class', 'kwargs'), 'Sampler')
        _class = Core.loadClassPath(sampler_dict['class'])
        kwargs = dict( [(str(k), v) for (k, v) in sampler_dict.get('kwargs', {}).items()] )

        return _class(**kwargs)

    raise Core.KnownUnknown('Missing required sampler name or class: %s' % json_dumps(sampler_dict))

def _checkKeys(given_dict, known, context):
    unknown = sorted(set(given_dict.keys()) - set(known))

    if unknown:
        raise Core.KnownUnknown('%s does not take %s. Here are some that it does take: %s.'
                                % (context, ', '.join('"%s"' % k for k in unknown), ', '.join(known)))

def _parseConfigParameters(kind, parameters_dict, dirpath):
    """ Fill in defaults, check every value, and rename keys to Python names.
    """
    defaults = KINDS[kind]
    _checkKeys(parameters_dict, sorted(defaults), 'The %s experiment' % kind)

    merged = dict(defaults, **parameters_dict)

    for (key, value) in merged.items():
        default = defaults[key]

        if default is None or value is None:
            continue

        if isinstance(default, bool) and not isinstance(value, bool):
            raise Core.KnownUnknown('Parameter "%s" should be true or false, not %s' % (key, json_dumps(value)))

        elif isinstance(default, (int, float)) and not isinstance(default, bool) \
             and (isinstance(value, bool) or not isinstance(value, (int, float))):
            raise Core.KnownUnknown('Parameter "%s" should be a number, not %s' % (key, json_dumps(value)))

        elif isinstance(default, int) and not isinstance(default, bool) and value != int(value):
            raise Core.KnownUnknown('Parameter "%s" should be a whole number, not %s' % (key, json_dumps(value)))

        elif isinstance(default, list) and not isinstance(value, list):
            raise Core.KnownUnknown('Parameter "%s" should be a list, not %s' % (key, json_dumps(value)))

        elif isinstance(default, str) and not isinstance(value, str):
            raise Core.KnownUnknown('Parameter "%s" should be a string, not %s' % (key, json_dumps(value)))

    _checkRanges(kind, merged)

    if merged.get('point cloud'):
        merged['point cloud'] = enforcedLocalPath(merged['point cloud'], dirpath, 'Point cloud')

    return dict((key.replace(' ', '_'), value) for (key, value) in merged.items())

def _require(condition, message, *args):
    if not condition:
        raise Core.DomainError(message % args)

def _checkRanges(kind, p):
    """ Range checks that need more than a type, so that bad values fail before any work starts.
    """
    if kind in ('learnable', 'hard'):
        _require(p['optimizer'] in ('adam', 'sgd'), 'Optimizer is "adam" or "sgd", not "%s"', p['optimizer'])
        _require(p['learning rate'] >= 0, 'Learning rate must not be negative')
        _require(p['batch size'] >= 1 and p['steps'] >= 0 and p['record every'] >= 1,
                 'Batch size and record interval must be positive, steps non-negative')
        _require(p['test size'] >= 1 and p['threshold'] > 0, 'Test size and threshold must be positive')

    if kind == 'learnable':
        _require(p['intrinsic dim'] >= 2, 'Sphere intrinsic dim must be at least 2')
        _require(all(int(n) >= p['intrinsic dim'] for n in p['ambient dims']) and p['ambient dims'],
                 'Ambient dims must be a non-empty list, each at least the intrinsic dim')
        _require(p['train size'] >= 1 and p['student width'] >= 1, 'Train size and student width must be positive')

    elif kind == 'hard':
        _require(p['code bits'] and all(2 <= int(b) <= 20 for b in p['code bits']), 'Code bits must lie in [2, 20]')
        _require(p['reach bound'] > 0 and p['intrinsic dim'] >= 1, 'Reach bound and intrinsic dim must be positive')
        _require(p['student depth'] >= 1 and p['width multiplier'] > 0, 'Student depth and width multiplier must be positive')

        _require(p['parity subset'] in ('full', 'random'), 'Parity subset is "full" or "random", not "%s"', p['parity subset'])

        if p['truncation'] is not None:
            _require(all(1 <= p['truncation'] < int(b) for b in p['code bits']), 'Truncation must be in [1, n_b)')

    elif kind == 'sq':
        _require(p['code bits'] and all(2 <= int(b) <= 16 for b in p['code bits']), 'Code bits must lie in [2, 16]')
        _require(p['tolerance'] > 0 and p['batch'] >= 1, 'Tolerance and batch must be positive')
        _require(1 <= p['parity dim'] <= 12, 'Parity dim must lie in [1, 12]')
        _require(p['variance queries'] >= 1 and p['pairwise trials'] >= 1, 'Query and trial counts must be positive')

    elif kind == 'iddim':
        _require(p['shift'] in Dimension.SHIFTS, 'Shift is one of %s, not "%s"', ', '.join(Dimension.SHIFTS), p['shift'])
        _require(all(len(row) == 2 and 1 <= row[1] < row[0] for row in p['spheres']),
                 'Spheres are [ambient, intrinsic] pairs with intrinsic < ambient')
        _require(p['centers'] >= 1 and p['threshold'] > 0, 'Centers and threshold must be positive')

    elif kind == 'geometry':
        _require(p['clouds'] >= 1 and p['cloud size'] >= 1 and p['epsilon'] > 0, 'Cloud settings must be positive')
        _require(all(int(n) >= 1 for n in p['coupon bins']) and p['coupon trials'] >= 100,
                 'Coupon bins must be positive with at least 100 trials')
        _require(p['net epsilon'] > 0 and 0 < p['net delta'] < 1 and p['max samples'] >= 1,
                 'Net epsilon must be positive and net delta in (0, 1)')

    if kind == 'geometry':
        _require(p['sampler'] is None or isinstance(p['sampler'], dict), 'A net "sampler" is a sampler configuration')

    elif kind == 'generate':
        _require(isinstance(p['sampler'], dict), 'The generate experiment needs a "sampler"')
        _require(p['count'] >= 1, 'Count must be positive')

        if p['target'] is not None:
            _require(isinstance(p['target'], dict) and p['target'].get('kind') in ('hard', 'random'),
                     'A target is {"kind": "hard", ...} or {"kind": "random", ...}')
